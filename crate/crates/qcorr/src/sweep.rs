//! Parameter sweeps over the model, for tables and figure data.
//!
//! A [`SweepSpec`] fixes the base couplings, the physical mode (thermal
//! equilibrium, ground state, or dephasing dynamics from a Bell state), one
//! or two swept axes, the quantities to record, and the evaluation engine
//! (closed forms, the generic numerical route, or both side by side).
//! [`run_sweep`] walks the grid in lexicographic order (first axis slowest)
//! and never aborts on a single bad point: per-point failures land in the
//! row's `status` column with the values left empty.
//!
//! [`figure_preset`] bundles ready-made sweeps reproducing the standard
//! plots for this model; multi-panel figures carry one labelled spec per
//! panel.

use crate::closedform::{dynamics_psi1, dynamics_psi2, thermal_point, Psi1Form};
use crate::measures::{correlation_set, CorrelationSet};
use crate::model::{
    bell_state, gibbs_state, ground_state, milburn_evolve, BellState, EvolutionSpec, SpinParams,
    ThermalSpec,
};
use serde::Serialize;
use thiserror::Error;

/// Errors detected while validating or preparing a sweep.
#[derive(Debug, Error)]
pub enum SweepError {
    #[error("a sweep needs one or two axes, got {0}")]
    BadAxisCount(usize),
    #[error("axis {0} appears more than once")]
    DuplicateAxis(&'static str),
    #[error("axis {axis} is not valid in {mode} mode")]
    AxisMode { axis: &'static str, mode: &'static str },
    #[error("axis {axis}: {reason}")]
    BadAxisValues { axis: &'static str, reason: String },
    #[error("temperature is fixed in the mode and swept by an axis; choose one")]
    TemperatureTwice,
    #[error("no temperature given: fix one in the mode or sweep a T axis (the ground state is a separate, oracle-only mode)")]
    MissingTemperature,
    #[error("the ground state has no closed form here; use the oracle engine")]
    GroundStateNeedsOracle,
}

/// Which correlation measure a column records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Concurrence,
    Classical,
    Discord,
    Geometric,
}

impl Quantity {
    /// Column stem used in output headers.
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Concurrence => "concurrence",
            Quantity::Classical => "classical",
            Quantity::Discord => "discord",
            Quantity::Geometric => "geometric",
        }
    }

    /// All four quantities in presentation order.
    pub fn all() -> [Quantity; 4] {
        [
            Quantity::Concurrence,
            Quantity::Classical,
            Quantity::Discord,
            Quantity::Geometric,
        ]
    }

    /// Reads this quantity's value out of a computed set.
    pub fn extract(&self, set: &CorrelationSet) -> f64 {
        match self {
            Quantity::Concurrence => set.concurrence,
            Quantity::Classical => set.classical,
            Quantity::Discord => set.discord,
            Quantity::Geometric => set.geometric,
        }
    }
}

/// A sweepable model parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisParam {
    J,
    Jz,
    B,
    D,
    T,
    Time,
    Gamma,
}

impl AxisParam {
    /// The axis name used in headers and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            AxisParam::J => "J",
            AxisParam::Jz => "Jz",
            AxisParam::B => "B",
            AxisParam::D => "D",
            AxisParam::T => "T",
            AxisParam::Time => "t",
            AxisParam::Gamma => "gamma",
        }
    }

    /// Parses an axis name as written on the command line (case-sensitive).
    pub fn parse(name: &str) -> Option<AxisParam> {
        match name {
            "J" => Some(AxisParam::J),
            "Jz" => Some(AxisParam::Jz),
            "B" => Some(AxisParam::B),
            "D" => Some(AxisParam::D),
            "T" => Some(AxisParam::T),
            "t" => Some(AxisParam::Time),
            "gamma" => Some(AxisParam::Gamma),
            _ => None,
        }
    }
}

/// One swept axis: a parameter and the values it takes, in order.
#[derive(Debug, Clone)]
pub struct Axis {
    pub param: AxisParam,
    pub values: Vec<f64>,
}

impl Axis {
    /// An axis over explicitly listed values.
    pub fn explicit(param: AxisParam, values: Vec<f64>) -> Self {
        Self { param, values }
    }

    /// An axis of `count >= 2` evenly spaced values from `min` to `max`
    /// inclusive.
    pub fn linspace(param: AxisParam, min: f64, max: f64, count: usize) -> Self {
        assert!(count >= 2, "linspace needs at least two points");
        let step = (max - min) / (count - 1) as f64;
        let values = (0..count)
            .map(|i| {
                if i + 1 == count {
                    max
                } else {
                    min + step * i as f64
                }
            })
            .collect();
        Self { param, values }
    }
}

/// The physical scenario being swept.
#[derive(Debug, Clone)]
pub enum Mode {
    /// Gibbs state. `temperature: None` means either a swept `T` axis
    /// supplies it, or — with no `T` axis — the ground state (oracle only).
    Thermal { temperature: Option<f64> },
    /// Intrinsic-dephasing dynamics from a Bell state. `gamma` and `t` are
    /// base values; `gamma`/`t` axes override them per point.
    Dynamics {
        gamma: f64,
        t: f64,
        initial: BellState,
        psi1_form: Psi1Form,
    },
}

/// Evaluation engine for each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Model-specific closed forms.
    ClosedForm,
    /// Generic numerical route (build the state, measure it).
    Oracle,
    /// Both, with a delta column per quantity.
    Both,
}

/// A complete sweep description.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub mode: Mode,
    pub base: SpinParams,
    pub axes: Vec<Axis>,
    pub quantities: Vec<Quantity>,
    pub engine: Engine,
}

/// One evaluated grid point: the axis values, one entry per value column
/// (empty where evaluation failed), and an optional failure message.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub inputs: Vec<f64>,
    pub values: Vec<Option<f64>>,
    pub status: Option<String>,
}

/// An evaluated sweep: column names (axes, then value columns, then
/// `status`) and the rows in grid order.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Renders the table as CSV. Axis values print in their natural form,
    /// measure values in full scientific precision, failures as an empty
    /// value cell plus the status text.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut fields: Vec<String> = row.inputs.iter().map(|v| format!("{v}")).collect();
            for value in &row.values {
                fields.push(match value {
                    Some(v) => format!("{v:.14e}"),
                    None => String::new(),
                });
            }
            fields.push(match &row.status {
                Some(s) => csv_quote(s),
                None => String::new(),
            });
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Renders the table as a pretty-printed JSON array of row objects,
    /// keyed by column name (missing values are `null`, the final key is
    /// `status`).
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut object = serde_json::Map::new();
                let mut columns = self.columns.iter();
                for &input in &row.inputs {
                    let name = columns.next().expect("column per input");
                    object.insert(name.clone(), serde_json::json!(input));
                }
                for value in &row.values {
                    let name = columns.next().expect("column per value");
                    object.insert(name.clone(), serde_json::json!(value));
                }
                let name = columns.next().expect("status column");
                object.insert(name.clone(), serde_json::json!(row.status));
                serde_json::Value::Object(object)
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("sweep tables always serialise")
    }
}

fn csv_quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// How one grid point is evaluated after axis values are applied.
enum PointTask {
    Thermal(f64),
    Ground,
    Dynamics {
        gamma: f64,
        t: f64,
        initial: BellState,
        psi1_form: Psi1Form,
    },
}

fn closed_form_set(params: &SpinParams, task: &PointTask) -> Result<CorrelationSet, String> {
    match task {
        PointTask::Thermal(temp) => {
            let spec = ThermalSpec::new(*temp).map_err(|e| e.to_string())?;
            Ok(thermal_point(params, &spec).map_err(|e| e.to_string())?.set)
        }
        PointTask::Ground => Err("ground state has no closed form".to_string()),
        PointTask::Dynamics {
            gamma,
            t,
            initial,
            psi1_form,
        } => {
            let ev = EvolutionSpec::new(*gamma, *t).map_err(|e| e.to_string())?;
            match initial {
                BellState::Psi1 => Ok(dynamics_psi1(params, &ev, *psi1_form)
                    .map_err(|e| e.to_string())?
                    .set),
                BellState::Psi2 => Ok(dynamics_psi2(params, &ev).set),
            }
        }
    }
}

fn oracle_set(params: &SpinParams, task: &PointTask) -> Result<CorrelationSet, String> {
    let rho = match task {
        PointTask::Thermal(temp) => {
            let spec = ThermalSpec::new(*temp).map_err(|e| e.to_string())?;
            gibbs_state(params, &spec)
        }
        PointTask::Ground => ground_state(params),
        PointTask::Dynamics {
            gamma, t, initial, ..
        } => {
            let ev = EvolutionSpec::new(*gamma, *t).map_err(|e| e.to_string())?;
            milburn_evolve(params, &bell_state(*initial), &ev).map_err(|e| e.to_string())?
        }
    };
    correlation_set(&rho).map_err(|e| e.to_string())
}

/// Runs a sweep, returning the table of results.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    validate(spec)?;

    let mut columns: Vec<String> = spec
        .axes
        .iter()
        .map(|a| a.param.name().to_string())
        .collect();
    for q in &spec.quantities {
        match spec.engine {
            Engine::ClosedForm | Engine::Oracle => columns.push(q.name().to_string()),
            Engine::Both => {
                columns.push(format!("{}_closedform", q.name()));
                columns.push(format!("{}_oracle", q.name()));
                columns.push(format!("{}_delta", q.name()));
            }
        }
    }
    columns.push("status".to_string());

    // Grid walk, first axis slowest.
    let shape: Vec<usize> = spec.axes.iter().map(|a| a.values.len()).collect();
    let total: usize = shape.iter().product();
    let mut rows = Vec::with_capacity(total);
    for flat in 0..total {
        let mut indices = vec![0usize; shape.len()];
        let mut rest = flat;
        for k in (0..shape.len()).rev() {
            indices[k] = rest % shape[k];
            rest /= shape[k];
        }
        let inputs: Vec<f64> = spec
            .axes
            .iter()
            .zip(&indices)
            .map(|(axis, &i)| axis.values[i])
            .collect();
        rows.push(evaluate_point(spec, &inputs));
    }
    Ok(SweepResult { columns, rows })
}

fn evaluate_point(spec: &SweepSpec, inputs: &[f64]) -> SweepRow {
    let mut params = spec.base;
    let mut temperature = match &spec.mode {
        Mode::Thermal { temperature } => *temperature,
        Mode::Dynamics { .. } => None,
    };
    let (mut gamma, mut time) = match &spec.mode {
        Mode::Dynamics { gamma, t, .. } => (*gamma, *t),
        Mode::Thermal { .. } => (0.0, 0.0),
    };
    for (axis, &value) in spec.axes.iter().zip(inputs) {
        match axis.param {
            AxisParam::J => params.j = value,
            AxisParam::Jz => params.j_z = value,
            AxisParam::B => params.b = value,
            AxisParam::D => params.d = value,
            AxisParam::T => temperature = Some(value),
            AxisParam::Time => time = value,
            AxisParam::Gamma => gamma = value,
        }
    }
    let task = match &spec.mode {
        Mode::Thermal { .. } => match temperature {
            Some(t) => PointTask::Thermal(t),
            None => PointTask::Ground,
        },
        Mode::Dynamics {
            initial, psi1_form, ..
        } => PointTask::Dynamics {
            gamma,
            t: time,
            initial: *initial,
            psi1_form: *psi1_form,
        },
    };

    let mut status: Option<String> = None;
    let mut record = |res: Result<CorrelationSet, String>| -> Option<CorrelationSet> {
        match res {
            Ok(set) => Some(set),
            Err(message) => {
                if status.is_none() {
                    status = Some(message);
                }
                None
            }
        }
    };

    let (closed, oracle) = match spec.engine {
        Engine::ClosedForm => (record(closed_form_set(&params, &task)), None),
        Engine::Oracle => (None, record(oracle_set(&params, &task))),
        Engine::Both => (
            record(closed_form_set(&params, &task)),
            record(oracle_set(&params, &task)),
        ),
    };

    let mut values = Vec::new();
    for q in &spec.quantities {
        match spec.engine {
            Engine::ClosedForm => values.push(closed.as_ref().map(|s| q.extract(s))),
            Engine::Oracle => values.push(oracle.as_ref().map(|s| q.extract(s))),
            Engine::Both => {
                let c = closed.as_ref().map(|s| q.extract(s));
                let o = oracle.as_ref().map(|s| q.extract(s));
                let d = match (c, o) {
                    (Some(c), Some(o)) => Some(c - o),
                    _ => None,
                };
                values.push(c);
                values.push(o);
                values.push(d);
            }
        }
    }
    SweepRow {
        inputs: inputs.to_vec(),
        values,
        status,
    }
}

fn validate(spec: &SweepSpec) -> Result<(), SweepError> {
    if spec.axes.is_empty() || spec.axes.len() > 2 {
        return Err(SweepError::BadAxisCount(spec.axes.len()));
    }
    if spec.axes.len() == 2 && spec.axes[0].param == spec.axes[1].param {
        return Err(SweepError::DuplicateAxis(spec.axes[0].param.name()));
    }
    let thermal = matches!(spec.mode, Mode::Thermal { .. });
    let mut has_t_axis = false;
    for axis in &spec.axes {
        let name = axis.param.name();
        match axis.param {
            AxisParam::T if !thermal => {
                return Err(SweepError::AxisMode {
                    axis: name,
                    mode: "dynamics",
                })
            }
            AxisParam::Time | AxisParam::Gamma if thermal => {
                return Err(SweepError::AxisMode {
                    axis: name,
                    mode: "thermal",
                })
            }
            _ => {}
        }
        if axis.param == AxisParam::T {
            has_t_axis = true;
        }
        if axis.values.is_empty() {
            return Err(SweepError::BadAxisValues {
                axis: name,
                reason: "no values".to_string(),
            });
        }
        for &v in &axis.values {
            if !v.is_finite() {
                return Err(SweepError::BadAxisValues {
                    axis: name,
                    reason: format!("non-finite value {v}"),
                });
            }
            match axis.param {
                AxisParam::T if v <= 0.0 => {
                    return Err(SweepError::BadAxisValues {
                        axis: name,
                        reason: format!("temperature must be positive, got {v}"),
                    })
                }
                AxisParam::Time | AxisParam::Gamma if v < 0.0 => {
                    return Err(SweepError::BadAxisValues {
                        axis: name,
                        reason: format!("must be non-negative, got {v}"),
                    })
                }
                _ => {}
            }
        }
    }
    if let Mode::Thermal { temperature } = &spec.mode {
        match (temperature, has_t_axis) {
            (Some(_), true) => return Err(SweepError::TemperatureTwice),
            (Some(t), false) if !t.is_finite() || *t <= 0.0 => {
                return Err(SweepError::BadAxisValues {
                    axis: "T",
                    reason: format!("temperature must be positive, got {t}"),
                })
            }
            (None, false) if spec.engine != Engine::Oracle => {
                return Err(SweepError::GroundStateNeedsOracle)
            }
            _ => {}
        }
    }
    Ok(())
}

/// One labelled panel of a figure: a standalone sweep.
#[derive(Debug, Clone)]
pub struct FigurePanel {
    pub label: String,
    pub spec: SweepSpec,
}

/// A ready-made figure: one or more labelled panels.
#[derive(Debug, Clone)]
pub struct FigurePreset {
    pub name: String,
    pub panels: Vec<FigurePanel>,
}

/// Names accepted by [`figure_preset`].
pub fn figure_names() -> &'static [&'static str] {
    &[
        "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7a", "fig7b",
    ]
}

fn panel(label: &str, spec: SweepSpec) -> FigurePanel {
    FigurePanel {
        label: label.to_string(),
        spec,
    }
}

fn thermal_spec(base: SpinParams, temperature: Option<f64>, axes: Vec<Axis>) -> SweepSpec {
    SweepSpec {
        mode: Mode::Thermal { temperature },
        base,
        axes,
        quantities: Quantity::all().to_vec(),
        engine: Engine::ClosedForm,
    }
}

fn dynamics_spec(base: SpinParams, initial: BellState, axes: Vec<Axis>) -> SweepSpec {
    SweepSpec {
        mode: Mode::Dynamics {
            gamma: 1.0,
            t: 1.0,
            initial,
            psi1_form: Psi1Form::default(),
        },
        base,
        axes,
        quantities: Quantity::all().to_vec(),
        engine: Engine::ClosedForm,
    }
}

/// Returns the ready-made sweep(s) behind a named figure, or `None` for an
/// unknown name. See [`figure_names`] for the list.
pub fn figure_preset(name: &str) -> Option<FigurePreset> {
    let preset = match name {
        // Measures against temperature for a few exchange strengths, in the
        // easy-plane regime.
        "fig1" => FigurePreset {
            name: name.to_string(),
            panels: vec![panel(
                "main",
                thermal_spec(
                    SpinParams::new(1.0, -0.5, 0.0, 0.0),
                    None,
                    vec![
                        Axis::explicit(AxisParam::J, vec![0.3, 0.5, 1.0]),
                        Axis::linspace(AxisParam::T, 0.02, 2.0, 201),
                    ],
                ),
            )],
        },
        // Measures against anisotropy at fixed temperature; the sudden
        // direction changes sit where the anisotropy passes the in-plane
        // coupling strength.
        "fig2" => FigurePreset {
            name: name.to_string(),
            panels: vec![panel(
                "main",
                thermal_spec(
                    SpinParams::new(1.0, 0.0, 0.0, 0.0),
                    Some(0.5),
                    vec![Axis::linspace(AxisParam::Jz, -3.0, 3.0, 201)],
                ),
            )],
        },
        // Field dependence of the thermal measures.
        "fig3" => FigurePreset {
            name: name.to_string(),
            panels: vec![panel(
                "main",
                thermal_spec(
                    SpinParams::new(1.0, 1.0, 0.0, 0.0),
                    None,
                    vec![
                        Axis::explicit(AxisParam::B, vec![0.0, 2.0, 4.0]),
                        Axis::linspace(AxisParam::T, 0.02, 3.0, 201),
                    ],
                ),
            )],
        },
        // Discord landscapes over pairs of couplings at fixed temperature.
        "fig4" => {
            let qd = vec![Quantity::Discord];
            let mut spec_bd = thermal_spec(
                SpinParams::new(0.1, 0.1, 0.0, 0.0),
                Some(0.5),
                vec![
                    Axis::linspace(AxisParam::B, 0.0, 4.0, 201),
                    Axis::linspace(AxisParam::D, 0.0, 4.0, 201),
                ],
            );
            spec_bd.quantities = qd.clone();
            let mut spec_bj = thermal_spec(
                SpinParams::new(0.0, 0.1, 0.0, 0.1),
                Some(0.5),
                vec![
                    Axis::linspace(AxisParam::B, 0.0, 4.0, 201),
                    Axis::linspace(AxisParam::J, 0.0, 4.0, 201),
                ],
            );
            spec_bj.quantities = qd.clone();
            let mut spec_bjz = thermal_spec(
                SpinParams::new(0.1, 0.0, 0.0, 0.1),
                Some(0.5),
                vec![
                    Axis::linspace(AxisParam::B, 0.0, 4.0, 201),
                    Axis::linspace(AxisParam::Jz, 0.0, 4.0, 201),
                ],
            );
            spec_bjz.quantities = qd;
            FigurePreset {
                name: name.to_string(),
                panels: vec![
                    panel("B_D", spec_bd),
                    panel("B_J", spec_bj),
                    panel("B_Jz", spec_bjz),
                ],
            }
        }
        // DM-coupling dependence of the thermal measures.
        "fig5" => FigurePreset {
            name: name.to_string(),
            panels: vec![panel(
                "main",
                thermal_spec(
                    SpinParams::new(1.0, 1.0, 0.0, 0.0),
                    None,
                    vec![
                        Axis::explicit(AxisParam::D, vec![0.0, 2.0, 4.0]),
                        Axis::linspace(AxisParam::T, 0.02, 3.0, 201),
                    ],
                ),
            )],
        },
        // Snapshot of the dynamical measures at t = 1, gamma = 1 against
        // each coupling that actually drives the respective initial state.
        "fig6" => FigurePreset {
            name: name.to_string(),
            panels: vec![
                panel(
                    "J",
                    dynamics_spec(
                        SpinParams::new(0.0, 0.0, 0.0, 0.4),
                        BellState::Psi1,
                        vec![Axis::linspace(AxisParam::J, 0.0, 3.0, 201)],
                    ),
                ),
                panel(
                    "D",
                    dynamics_spec(
                        SpinParams::new(0.0, 0.0, 0.0, 0.0),
                        BellState::Psi1,
                        vec![Axis::linspace(AxisParam::D, 0.015, 3.0, 201)],
                    ),
                ),
                panel(
                    "B",
                    dynamics_spec(
                        SpinParams::new(0.0, 0.0, 0.0, 0.0),
                        BellState::Psi2,
                        vec![Axis::linspace(AxisParam::B, 0.0, 3.0, 201)],
                    ),
                ),
            ],
        },
        // Time traces from the one-excitation Bell state for several
        // decoherence rates (including none).
        "fig7a" => FigurePreset {
            name: name.to_string(),
            panels: vec![panel(
                "main",
                dynamics_spec(
                    SpinParams::new(1.0, 0.0, 0.0, 0.4),
                    BellState::Psi1,
                    vec![
                        Axis::explicit(AxisParam::Gamma, vec![0.0, 0.1, 0.2, 0.3]),
                        Axis::linspace(AxisParam::Time, 0.0, 10.0, 201),
                    ],
                ),
            )],
        },
        // Time traces from the field-split Bell state.
        "fig7b" => FigurePreset {
            name: name.to_string(),
            panels: vec![panel(
                "main",
                dynamics_spec(
                    SpinParams::new(0.0, 0.0, 1.0, 0.0),
                    BellState::Psi2,
                    vec![
                        Axis::explicit(AxisParam::Gamma, vec![0.1, 1.0, 2.0]),
                        Axis::linspace(AxisParam::Time, 0.0, 5.0, 201),
                    ],
                ),
            )],
        },
        _ => return None,
    };
    Some(preset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::thermal_cc_qd;

    fn base() -> SpinParams {
        SpinParams::new(1.0, 0.5, 0.3, 0.4)
    }

    #[test]
    fn linspace_hits_both_endpoints() {
        let axis = Axis::linspace(AxisParam::T, 0.02, 2.0, 100);
        assert_eq!(axis.values.len(), 100);
        assert_eq!(axis.values[0], 0.02);
        assert_eq!(*axis.values.last().unwrap(), 2.0);
    }

    #[test]
    fn thermal_sweep_matches_pointwise_closed_form() {
        let spec = SweepSpec {
            mode: Mode::Thermal { temperature: None },
            base: base(),
            axes: vec![Axis::explicit(
                AxisParam::T,
                vec![0.2, 0.5, 1.0, 2.0, 5.0],
            )],
            quantities: vec![Quantity::Classical, Quantity::Discord],
            engine: Engine::ClosedForm,
        };
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.columns, vec!["T", "classical", "discord", "status"]);
        assert_eq!(result.rows.len(), 5);
        for row in &result.rows {
            let t = row.inputs[0];
            let (cc, qd) = thermal_cc_qd(&base(), &ThermalSpec::new(t).unwrap());
            assert_eq!(row.values[0].unwrap(), cc);
            assert_eq!(row.values[1].unwrap(), qd);
            assert!(row.status.is_none());
        }
    }

    #[test]
    fn two_axis_sweep_is_lexicographic_with_first_axis_slowest() {
        let spec = SweepSpec {
            mode: Mode::Thermal { temperature: None },
            base: base(),
            axes: vec![
                Axis::explicit(AxisParam::J, vec![0.3, 1.0]),
                Axis::explicit(AxisParam::T, vec![0.5, 1.0]),
            ],
            quantities: vec![Quantity::Concurrence],
            engine: Engine::ClosedForm,
        };
        let result = run_sweep(&spec).unwrap();
        let got: Vec<(f64, f64)> = result
            .rows
            .iter()
            .map(|r| (r.inputs[0], r.inputs[1]))
            .collect();
        assert_eq!(
            got,
            vec![(0.3, 0.5), (0.3, 1.0), (1.0, 0.5), (1.0, 1.0)]
        );
    }

    #[test]
    fn both_engine_emits_small_deltas() {
        let spec = SweepSpec {
            mode: Mode::Thermal {
                temperature: Some(0.7),
            },
            base: base(),
            axes: vec![Axis::explicit(AxisParam::Jz, vec![-1.0, 0.0, 1.0])],
            quantities: vec![Quantity::Discord],
            engine: Engine::Both,
        };
        let result = run_sweep(&spec).unwrap();
        assert_eq!(
            result.columns,
            vec![
                "Jz",
                "discord_closedform",
                "discord_oracle",
                "discord_delta",
                "status"
            ]
        );
        for row in &result.rows {
            let delta = row.values[2].unwrap();
            assert!(delta.abs() < 1e-6, "delta {delta} too large");
            assert_eq!(
                row.values[0].unwrap() - row.values[1].unwrap(),
                delta
            );
        }
    }

    #[test]
    fn ground_state_sweep_requires_the_oracle_engine() {
        let mk = |engine| SweepSpec {
            mode: Mode::Thermal { temperature: None },
            base: base(),
            axes: vec![Axis::explicit(AxisParam::J, vec![0.5, 1.0])],
            quantities: vec![Quantity::Concurrence],
            engine,
        };
        assert!(matches!(
            run_sweep(&mk(Engine::ClosedForm)),
            Err(SweepError::GroundStateNeedsOracle)
        ));
        assert!(matches!(
            run_sweep(&mk(Engine::Both)),
            Err(SweepError::GroundStateNeedsOracle)
        ));
        let result = run_sweep(&mk(Engine::Oracle)).unwrap();
        assert_eq!(result.rows.len(), 2);
        for row in &result.rows {
            assert!(row.status.is_none());
            assert!(row.values[0].is_some());
        }
    }

    #[test]
    fn per_point_failures_land_in_status_not_in_errors() {
        // Sweeping J through zero with D = 0 hits the degenerate point where
        // the one-excitation closed form is undefined.
        let spec = SweepSpec {
            mode: Mode::Dynamics {
                gamma: 0.5,
                t: 1.0,
                initial: BellState::Psi1,
                psi1_form: Psi1Form::Strict,
            },
            base: SpinParams::new(0.0, 0.0, 0.0, 0.0),
            axes: vec![Axis::explicit(AxisParam::J, vec![0.0, 1.0])],
            quantities: vec![Quantity::Concurrence],
            engine: Engine::ClosedForm,
        };
        let result = run_sweep(&spec).unwrap();
        assert!(result.rows[0].status.is_some());
        assert!(result.rows[0].values[0].is_none());
        assert!(result.rows[1].status.is_none());
        assert!(result.rows[1].values[0].is_some());
    }

    #[test]
    fn axis_validation_rejects_mismatched_modes_and_bad_values() {
        let thermal = Mode::Thermal {
            temperature: Some(1.0),
        };
        let dynamics = Mode::Dynamics {
            gamma: 0.1,
            t: 1.0,
            initial: BellState::Psi2,
            psi1_form: Psi1Form::Strict,
        };
        let mk = |mode: &Mode, axes: Vec<Axis>| SweepSpec {
            mode: mode.clone(),
            base: base(),
            axes,
            quantities: vec![Quantity::Concurrence],
            engine: Engine::ClosedForm,
        };

        assert!(matches!(
            run_sweep(&mk(&thermal, vec![])),
            Err(SweepError::BadAxisCount(0))
        ));
        let three = vec![
            Axis::explicit(AxisParam::J, vec![1.0]),
            Axis::explicit(AxisParam::B, vec![1.0]),
            Axis::explicit(AxisParam::D, vec![1.0]),
        ];
        assert!(matches!(
            run_sweep(&mk(&thermal, three)),
            Err(SweepError::BadAxisCount(3))
        ));
        let dup = vec![
            Axis::explicit(AxisParam::J, vec![1.0]),
            Axis::explicit(AxisParam::J, vec![2.0]),
        ];
        assert!(matches!(
            run_sweep(&mk(&thermal, dup)),
            Err(SweepError::DuplicateAxis("J"))
        ));
        assert!(matches!(
            run_sweep(&mk(&thermal, vec![Axis::explicit(AxisParam::Time, vec![1.0])])),
            Err(SweepError::AxisMode { axis: "t", .. })
        ));
        assert!(matches!(
            run_sweep(&mk(&dynamics, vec![Axis::explicit(AxisParam::T, vec![1.0])])),
            Err(SweepError::AxisMode { axis: "T", .. })
        ));
        assert!(matches!(
            run_sweep(&mk(&thermal, vec![Axis::explicit(AxisParam::T, vec![0.5])])),
            Err(SweepError::TemperatureTwice)
        ));
        assert!(matches!(
            run_sweep(&mk(
                &thermal,
                vec![Axis::explicit(AxisParam::B, vec![f64::NAN])]
            )),
            Err(SweepError::BadAxisValues { .. })
        ));
        assert!(matches!(
            run_sweep(&mk(
                &Mode::Thermal { temperature: None },
                vec![Axis::explicit(AxisParam::T, vec![-0.5])]
            )),
            Err(SweepError::BadAxisValues { .. })
        ));
    }

    #[test]
    fn csv_layout_is_rectangular_and_parsable() {
        let spec = SweepSpec {
            mode: Mode::Thermal {
                temperature: Some(0.5),
            },
            base: base(),
            axes: vec![Axis::explicit(AxisParam::B, vec![0.0, 1.0])],
            quantities: Quantity::all().to_vec(),
            engine: Engine::ClosedForm,
        };
        let result = run_sweep(&spec).unwrap();
        let csv = result.to_csv();
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), 3);
        let header_fields = lines[0].split(',').count();
        for line in &lines[1..] {
            assert_eq!(line.split(',').count(), header_fields);
        }
        // The value cells round-trip through f64.
        let second: Vec<&str> = lines[1].split(',').collect();
        let parsed: f64 = second[1].parse().unwrap();
        assert!(parsed.is_finite());
    }

    #[test]
    fn json_rendering_serialises_missing_values_as_null() {
        let spec = SweepSpec {
            mode: Mode::Dynamics {
                gamma: 0.5,
                t: 1.0,
                initial: BellState::Psi1,
                psi1_form: Psi1Form::Strict,
            },
            base: SpinParams::new(0.0, 0.0, 0.0, 0.0),
            axes: vec![Axis::explicit(AxisParam::J, vec![0.0])],
            quantities: vec![Quantity::Concurrence],
            engine: Engine::ClosedForm,
        };
        let result = run_sweep(&spec).unwrap();
        let json = result.to_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let rows = value.as_array().unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0]["J"], 0.0);
        assert!(rows[0]["concurrence"].is_null());
        assert!(rows[0]["status"].is_string());
        // Key order follows the column order.
        let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
        assert_eq!(keys, vec!["J", "concurrence", "status"]);
    }

    #[test]
    fn every_named_figure_preset_runs() {
        for &name in figure_names() {
            let preset = figure_preset(name).unwrap();
            assert!(!preset.panels.is_empty(), "{name} has no panels");
            for p in &preset.panels {
                // Just validate each panel's sweep; full evaluation is
                // exercised by the integration suite.
                let mut tiny = p.spec.clone();
                for axis in &mut tiny.axes {
                    axis.values.truncate(2);
                }
                let result = run_sweep(&tiny).unwrap_or_else(|e| {
                    panic!("{name}/{} failed to run: {e}", p.label);
                });
                assert!(!result.rows.is_empty());
                for row in &result.rows {
                    assert!(
                        row.status.is_none(),
                        "{name}/{} row {:?} has status {:?}",
                        p.label,
                        row.inputs,
                        row.status
                    );
                }
            }
        }
        assert!(figure_preset("fig99").is_none());
    }

    #[test]
    fn figure_presets_have_the_documented_shapes() {
        let fig2 = figure_preset("fig2").unwrap();
        assert_eq!(fig2.panels.len(), 1);
        let axis = &fig2.panels[0].spec.axes[0];
        assert_eq!(axis.param, AxisParam::Jz);
        assert_eq!(axis.values.len(), 201);
        assert_eq!(axis.values[0], -3.0);
        assert_eq!(*axis.values.last().unwrap(), 3.0);

        let fig6 = figure_preset("fig6").unwrap();
        assert_eq!(fig6.panels.len(), 3);
        let labels: Vec<&str> = fig6.panels.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(labels, vec!["J", "D", "B"]);

        let fig4 = figure_preset("fig4").unwrap();
        assert_eq!(fig4.panels.len(), 3);
        for p in &fig4.panels {
            assert_eq!(p.spec.axes.len(), 2);
            assert_eq!(p.spec.quantities, vec![Quantity::Discord]);
        }
    }

    #[test]
    fn weak_coupling_discord_revives_at_finite_temperature() {
        // At J = 0.3 the ground level is the classical {|00>, |11>} doublet,
        // so the discord starts near zero, is revived by thermal mixing with
        // the entangled levels, and dies off again at high temperature.
        let preset = figure_preset("fig1").unwrap();
        let result = run_sweep(&preset.panels[0].spec).unwrap();
        let discord_idx = result.columns.iter().position(|c| c == "discord").unwrap() - 2;
        let curve: Vec<f64> = result
            .rows
            .iter()
            .filter(|row| row.inputs[0] == 0.3)
            .map(|row| row.values[discord_idx].unwrap())
            .collect();
        assert_eq!(curve.len(), 201);

        assert!(curve[0] < 1e-3, "cold start: {}", curve[0]);
        let (peak_idx, peak) = curve
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert!(peak_idx > 0 && peak_idx < curve.len() - 1, "interior peak");
        assert!(*peak > 0.1, "peak height: {peak}");
        assert!(*curve.last().unwrap() < 0.5 * peak, "hot tail decays");
    }
}
