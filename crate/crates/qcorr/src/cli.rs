//! Command-line front end.
//!
//! Subcommands: `measures` (density matrix from a file), `thermal` (Gibbs
//! point or sweep), `dynamics` (dephasing dynamics point or sweep),
//! `figure` (named presets), and `verify` (the standard closed-form vs
//! oracle grid report). Parsing is hand-rolled: flags such as `-Jz` don't
//! fit argv conventions that reserve single dashes for single letters.
//!
//! Exit codes: 0 success, 1 runtime failure (and `verify` disagreement),
//! 2 usage error. All output is assembled in memory and written in one
//! shot, so a failing run never leaves a partial file behind.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::closedform::{dynamics_psi1, dynamics_psi2, thermal_point, Psi1Form};
use crate::measures::{correlation_set, CorrelationSet};
use crate::model::{
    bell_state, gibbs_state, ground_state, milburn_evolve, BellState, EvolutionSpec, SpinParams,
    ThermalSpec,
};
use crate::qmat::{ComplexMatrix, DensityMatrix, C64};
use crate::sweep::{
    figure_names, figure_preset, run_sweep, Axis, AxisParam, Engine, FigurePreset, Mode, Quantity,
    SweepResult, SweepRow, SweepSpec,
};
use crate::verify::standard_report;

/// Usage text printed by `-h`/`--help`.
pub const USAGE: &str = "\
qcorr — correlation measures for a two-qubit XXZ chain with DM coupling

usage: qcorr <subcommand> [flags]

subcommands:
  measures   four measures of a density matrix read from --state-file
  thermal    Gibbs-state measures at a point or along swept axes
  dynamics   intrinsic-dephasing dynamics from a Bell state or a file state
  figure     emit a named preset's sweep data (see list below)
  verify     closed-form vs oracle grid report (exit 1 on disagreement)

model flags (defaults 0):
  -J <real>    in-plane exchange coupling
  -Jz <real>   exchange anisotropy
  -B <real>    applied field
  -D <real>    DM coupling strength

thermal flags:
  -T <real>       temperature (> 0)
  --ground-state  zero-temperature ground state (oracle engine only)

dynamics flags (defaults 0):
  --gamma <real>       intrinsic decoherence rate (>= 0)
  -t <real>            evolution time (>= 0)
  --initial <which>    psi1 | psi2 | file   (file reads --state-file;
                       psi1 = (|01>+|10>)/sqrt2, psi2 = (|00>+|11>)/sqrt2)
  --psi1-form <form>   strict | reconciled  (default strict; psi1 closed
                       form only — see the library docs for the difference)

measures flags:
  --state-file <path>  density-matrix JSON: {\"dim\": 4, \"entries\": [[re, im],
                       ... 16 row-major pairs]}; validated and renormalised
  --dump-state         emit the validated state itself instead of measures

sweep and output flags:
  --axis <name:min:max:count>  swept axis, repeatable up to twice; names
                               J Jz B D T t gamma; count >= 2; first axis
                               varies slowest
  --engine <e>                 closedform | oracle | both (deltas included)
  --format <f>                 csv | json (default csv; verify defaults to
                               a text report, json available)
  -o <path>                    write to a file instead of standard output;
                               multi-panel figures require -o and write
                               <stem>_<label>.<ext> per panel
  -h, --help                   print this text

figure presets: fig1 fig2 fig3 fig4 fig5 fig6 fig7a fig7b
";

/// A command-line configuration problem (reported with exit code 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Output serialisation format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Where a dynamics run starts from.
#[derive(Debug, Clone, PartialEq)]
pub enum DynamicsInitial {
    Bell(BellState),
    File(PathBuf),
}

/// Parsed `thermal` subcommand.
#[derive(Debug, Clone)]
pub struct ThermalCommand {
    pub params: SpinParams,
    /// `None` together with `ground_state` means the zero-temperature state;
    /// `None` without it means a swept `T` axis supplies the temperature.
    pub temperature: Option<f64>,
    pub ground_state: bool,
    pub axes: Vec<Axis>,
    pub engine: Engine,
}

/// Parsed `dynamics` subcommand.
#[derive(Debug, Clone)]
pub struct DynamicsCommand {
    pub params: SpinParams,
    pub gamma: f64,
    pub t: f64,
    pub initial: DynamicsInitial,
    pub psi1_form: Psi1Form,
    pub axes: Vec<Axis>,
    pub engine: Engine,
}

/// The selected subcommand with its own settings.
#[derive(Debug, Clone)]
pub enum Command {
    Help,
    Measures { state_file: PathBuf, dump_state: bool },
    Thermal(ThermalCommand),
    Dynamics(DynamicsCommand),
    Figure { preset: FigurePreset },
    Verify,
}

/// A fully parsed invocation.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub command: Command,
    /// `None` means the subcommand default (CSV for data, text for verify).
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
}

/// Raw flag values before per-subcommand validation.
#[derive(Debug, Default)]
struct RawFlags {
    j: Option<f64>,
    j_z: Option<f64>,
    b: Option<f64>,
    d: Option<f64>,
    temperature: Option<f64>,
    ground_state: bool,
    gamma: Option<f64>,
    time: Option<f64>,
    initial: Option<String>,
    psi1_form: Option<Psi1Form>,
    engine: Option<Engine>,
    axes: Vec<Axis>,
    format: Option<OutputFormat>,
    output: Option<PathBuf>,
    state_file: Option<PathBuf>,
    dump_state: bool,
    help: bool,
}

fn usage_err(message: impl Into<String>) -> UsageError {
    UsageError(message.into())
}

fn parse_real(flag: &str, value: &str) -> Result<f64, UsageError> {
    let parsed: f64 = value
        .parse()
        .map_err(|_| usage_err(format!("{flag} needs a real number, got '{value}'")))?;
    if !parsed.is_finite() {
        return Err(usage_err(format!("{flag} must be finite, got '{value}'")));
    }
    Ok(parsed)
}

fn parse_axis(text: &str) -> Result<Axis, UsageError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 4 {
        return Err(usage_err(format!(
            "--axis needs name:min:max:count, got '{text}'"
        )));
    }
    let param = AxisParam::parse(parts[0]).ok_or_else(|| {
        usage_err(format!(
            "unknown axis name '{}' (expected J, Jz, B, D, T, t or gamma)",
            parts[0]
        ))
    })?;
    let min = parse_real("--axis min", parts[1])?;
    let max = parse_real("--axis max", parts[2])?;
    let count: usize = parts[3]
        .parse()
        .map_err(|_| usage_err(format!("--axis count must be an integer, got '{}'", parts[3])))?;
    if count < 2 {
        return Err(usage_err(format!(
            "--axis count must be at least 2, got {count}"
        )));
    }
    Ok(Axis::linspace(param, min, max, count))
}

/// Sets an option-valued flag, rejecting repeats.
fn set_once<T>(slot: &mut Option<T>, flag: &str, value: T) -> Result<(), UsageError> {
    if slot.is_some() {
        return Err(usage_err(format!("{flag} given more than once")));
    }
    *slot = Some(value);
    Ok(())
}

/// Parses an argument list (without the program name) into a configuration.
pub fn parse(args: &[String]) -> Result<CliConfig, UsageError> {
    let subcommand = match args.first() {
        None => return Err(usage_err("missing subcommand")),
        Some(s) if s == "-h" || s == "--help" => {
            return Ok(CliConfig {
                command: Command::Help,
                format: None,
                output: None,
            })
        }
        Some(s) => s.as_str(),
    };
    if !matches!(
        subcommand,
        "measures" | "thermal" | "dynamics" | "figure" | "verify"
    ) {
        return Err(usage_err(format!(
            "unknown subcommand '{subcommand}' (expected measures, thermal, dynamics, figure or verify)"
        )));
    }

    let mut raw = RawFlags::default();
    let mut positionals: Vec<String> = Vec::new();
    let rest = &args[1..];
    let mut i = 0;
    while i < rest.len() {
        let token = rest[i].as_str();
        if !token.starts_with('-') || token.len() == 1 {
            positionals.push(token.to_string());
            i += 1;
            continue;
        }
        // Flag token; an inline value may follow '='.
        let (name, inline) = match token.split_once('=') {
            Some((n, v)) => (n, Some(v.to_string())),
            None => (token, None),
        };
        let mut value = |flag: &str| -> Result<String, UsageError> {
            if let Some(v) = inline.clone() {
                return Ok(v);
            }
            i += 1;
            rest.get(i)
                .cloned()
                .ok_or_else(|| usage_err(format!("{flag} needs a value")))
        };
        match name {
            "-h" | "--help" => raw.help = true,
            "-J" => set_once(&mut raw.j, "-J", parse_real("-J", &value("-J")?)?)?,
            "-Jz" => set_once(&mut raw.j_z, "-Jz", parse_real("-Jz", &value("-Jz")?)?)?,
            "-B" => set_once(&mut raw.b, "-B", parse_real("-B", &value("-B")?)?)?,
            "-D" => set_once(&mut raw.d, "-D", parse_real("-D", &value("-D")?)?)?,
            "-T" => set_once(
                &mut raw.temperature,
                "-T",
                parse_real("-T", &value("-T")?)?,
            )?,
            "--ground-state" => {
                if inline.is_some() {
                    return Err(usage_err("--ground-state takes no value"));
                }
                if raw.ground_state {
                    return Err(usage_err("--ground-state given more than once"));
                }
                raw.ground_state = true;
            }
            "--gamma" => set_once(
                &mut raw.gamma,
                "--gamma",
                parse_real("--gamma", &value("--gamma")?)?,
            )?,
            "-t" => set_once(&mut raw.time, "-t", parse_real("-t", &value("-t")?)?)?,
            "--initial" => set_once(&mut raw.initial, "--initial", value("--initial")?)?,
            "--psi1-form" => {
                let v = value("--psi1-form")?;
                let form = match v.as_str() {
                    "strict" => Psi1Form::Strict,
                    "reconciled" => Psi1Form::Reconciled,
                    other => {
                        return Err(usage_err(format!(
                            "--psi1-form must be strict or reconciled, got '{other}'"
                        )))
                    }
                };
                set_once(&mut raw.psi1_form, "--psi1-form", form)?;
            }
            "--engine" => {
                let v = value("--engine")?;
                let engine = match v.as_str() {
                    "closedform" => Engine::ClosedForm,
                    "oracle" => Engine::Oracle,
                    "both" => Engine::Both,
                    other => {
                        return Err(usage_err(format!(
                            "--engine must be closedform, oracle or both, got '{other}'"
                        )))
                    }
                };
                set_once(&mut raw.engine, "--engine", engine)?;
            }
            "--axis" => {
                if raw.axes.len() == 2 {
                    return Err(usage_err("at most two --axis flags are allowed"));
                }
                let axis = parse_axis(&value("--axis")?)?;
                if raw.axes.iter().any(|a| a.param == axis.param) {
                    return Err(usage_err(format!(
                        "axis {} given more than once",
                        axis.param.name()
                    )));
                }
                raw.axes.push(axis);
            }
            "--format" => {
                let v = value("--format")?;
                let format = match v.as_str() {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    other => {
                        return Err(usage_err(format!(
                            "--format must be csv or json, got '{other}'"
                        )))
                    }
                };
                set_once(&mut raw.format, "--format", format)?;
            }
            "-o" | "--output" => {
                set_once(&mut raw.output, "-o", PathBuf::from(value("-o")?))?
            }
            "--state-file" => set_once(
                &mut raw.state_file,
                "--state-file",
                PathBuf::from(value("--state-file")?),
            )?,
            "--dump-state" => {
                if inline.is_some() {
                    return Err(usage_err("--dump-state takes no value"));
                }
                if raw.dump_state {
                    return Err(usage_err("--dump-state given more than once"));
                }
                raw.dump_state = true;
            }
            other => return Err(usage_err(format!("unknown flag '{other}'"))),
        }
        i += 1;
    }

    if raw.help {
        return Ok(CliConfig {
            command: Command::Help,
            format: None,
            output: None,
        });
    }

    let command = match subcommand {
        "measures" => assemble_measures(&raw, &positionals)?,
        "thermal" => assemble_thermal(&raw, &positionals)?,
        "dynamics" => assemble_dynamics(&raw, &positionals)?,
        "figure" => assemble_figure(&raw, &positionals)?,
        "verify" => assemble_verify(&raw, &positionals)?,
        _ => unreachable!("subcommand validated above"),
    };
    Ok(CliConfig {
        command,
        format: raw.format,
        output: raw.output,
    })
}

fn no_positionals(sub: &str, positionals: &[String]) -> Result<(), UsageError> {
    match positionals.first() {
        Some(extra) => Err(usage_err(format!(
            "unexpected argument '{extra}' for '{sub}'"
        ))),
        None => Ok(()),
    }
}

/// Rejects a flag that the subcommand does not use.
fn reject(present: bool, flag: &str, sub: &str) -> Result<(), UsageError> {
    if present {
        Err(usage_err(format!("{flag} is not used by '{sub}'")))
    } else {
        Ok(())
    }
}

fn model_params(raw: &RawFlags) -> SpinParams {
    SpinParams::new(
        raw.j.unwrap_or(0.0),
        raw.j_z.unwrap_or(0.0),
        raw.b.unwrap_or(0.0),
        raw.d.unwrap_or(0.0),
    )
}

fn reject_model_flags(raw: &RawFlags, sub: &str) -> Result<(), UsageError> {
    reject(raw.j.is_some(), "-J", sub)?;
    reject(raw.j_z.is_some(), "-Jz", sub)?;
    reject(raw.b.is_some(), "-B", sub)?;
    reject(raw.d.is_some(), "-D", sub)?;
    Ok(())
}

fn assemble_measures(raw: &RawFlags, positionals: &[String]) -> Result<Command, UsageError> {
    no_positionals("measures", positionals)?;
    reject_model_flags(raw, "measures")?;
    reject(raw.temperature.is_some(), "-T", "measures")?;
    reject(raw.ground_state, "--ground-state", "measures")?;
    reject(raw.gamma.is_some(), "--gamma", "measures")?;
    reject(raw.time.is_some(), "-t", "measures")?;
    reject(raw.initial.is_some(), "--initial", "measures")?;
    reject(raw.psi1_form.is_some(), "--psi1-form", "measures")?;
    reject(raw.engine.is_some(), "--engine", "measures")?;
    reject(!raw.axes.is_empty(), "--axis", "measures")?;
    let state_file = raw
        .state_file
        .clone()
        .ok_or_else(|| usage_err("'measures' needs --state-file <path>"))?;
    Ok(Command::Measures {
        state_file,
        dump_state: raw.dump_state,
    })
}

fn assemble_thermal(raw: &RawFlags, positionals: &[String]) -> Result<Command, UsageError> {
    no_positionals("thermal", positionals)?;
    reject(raw.gamma.is_some(), "--gamma", "thermal")?;
    reject(raw.time.is_some(), "-t", "thermal")?;
    reject(raw.initial.is_some(), "--initial", "thermal")?;
    reject(raw.psi1_form.is_some(), "--psi1-form", "thermal")?;
    reject(raw.state_file.is_some(), "--state-file", "thermal")?;
    reject(raw.dump_state, "--dump-state", "thermal")?;
    for axis in &raw.axes {
        if matches!(axis.param, AxisParam::Time | AxisParam::Gamma) {
            return Err(usage_err(format!(
                "axis {} belongs to 'dynamics', not 'thermal'",
                axis.param.name()
            )));
        }
    }
    let has_t_axis = raw.axes.iter().any(|a| a.param == AxisParam::T);
    if raw.ground_state {
        if raw.temperature.is_some() {
            return Err(usage_err("pass either -T or --ground-state, not both"));
        }
        if has_t_axis {
            return Err(usage_err("--ground-state conflicts with a swept T axis"));
        }
        match raw.engine {
            None | Some(Engine::Oracle) => {}
            Some(_) => {
                return Err(usage_err(
                    "the ground state has no closed form; use --engine oracle",
                ))
            }
        }
    } else {
        if let Some(t) = raw.temperature {
            if t <= 0.0 {
                return Err(usage_err(format!("-T must be positive, got {t}")));
            }
            if has_t_axis {
                return Err(usage_err(
                    "temperature is both fixed by -T and swept by an axis; choose one",
                ));
            }
        } else if raw.axes.is_empty() {
            return Err(usage_err(
                "'thermal' needs -T <temperature>, a swept T axis, or --ground-state",
            ));
        } else if !has_t_axis {
            return Err(usage_err(
                "no temperature: pass -T, sweep a T axis, or use --ground-state",
            ));
        }
    }
    let engine = raw.engine.unwrap_or(if raw.ground_state {
        Engine::Oracle
    } else {
        Engine::ClosedForm
    });
    Ok(Command::Thermal(ThermalCommand {
        params: model_params(raw),
        temperature: raw.temperature,
        ground_state: raw.ground_state,
        axes: raw.axes.clone(),
        engine,
    }))
}

fn assemble_dynamics(raw: &RawFlags, positionals: &[String]) -> Result<Command, UsageError> {
    no_positionals("dynamics", positionals)?;
    reject(raw.temperature.is_some(), "-T", "dynamics")?;
    reject(raw.ground_state, "--ground-state", "dynamics")?;
    reject(raw.dump_state, "--dump-state", "dynamics")?;
    for axis in &raw.axes {
        if axis.param == AxisParam::T {
            return Err(usage_err("axis T belongs to 'thermal', not 'dynamics'"));
        }
    }
    let gamma = raw.gamma.unwrap_or(0.0);
    if gamma < 0.0 {
        return Err(usage_err(format!(
            "--gamma must be non-negative, got {gamma}"
        )));
    }
    let t = raw.time.unwrap_or(0.0);
    if t < 0.0 {
        return Err(usage_err(format!("-t must be non-negative, got {t}")));
    }
    let initial = match raw.initial.as_deref() {
        None => {
            return Err(usage_err(
                "'dynamics' needs --initial psi1, --initial psi2 or --initial file",
            ))
        }
        Some("psi1") => DynamicsInitial::Bell(BellState::Psi1),
        Some("psi2") => DynamicsInitial::Bell(BellState::Psi2),
        Some("file") => {
            let path = raw.state_file.clone().ok_or_else(|| {
                usage_err("--initial file needs --state-file <path>")
            })?;
            DynamicsInitial::File(path)
        }
        Some(other) => {
            return Err(usage_err(format!(
                "--initial must be psi1, psi2 or file, got '{other}'"
            )))
        }
    };
    if !matches!(initial, DynamicsInitial::File(_)) && raw.state_file.is_some() {
        return Err(usage_err(
            "--state-file only applies with --initial file",
        ));
    }
    if raw.psi1_form.is_some() && initial != DynamicsInitial::Bell(BellState::Psi1) {
        return Err(usage_err(
            "--psi1-form only applies with --initial psi1",
        ));
    }
    let engine = match (&initial, raw.engine) {
        (DynamicsInitial::File(_), None) => Engine::Oracle,
        (DynamicsInitial::File(_), Some(Engine::Oracle)) => Engine::Oracle,
        (DynamicsInitial::File(_), Some(_)) => {
            return Err(usage_err(
                "a file-provided initial state has no closed form; use --engine oracle",
            ))
        }
        (_, engine) => engine.unwrap_or(Engine::ClosedForm),
    };
    Ok(Command::Dynamics(DynamicsCommand {
        params: model_params(raw),
        gamma,
        t,
        initial,
        psi1_form: raw.psi1_form.unwrap_or_default(),
        axes: raw.axes.clone(),
        engine,
    }))
}

fn assemble_figure(raw: &RawFlags, positionals: &[String]) -> Result<Command, UsageError> {
    reject_model_flags(raw, "figure")?;
    reject(raw.temperature.is_some(), "-T", "figure")?;
    reject(raw.ground_state, "--ground-state", "figure")?;
    reject(raw.gamma.is_some(), "--gamma", "figure")?;
    reject(raw.time.is_some(), "-t", "figure")?;
    reject(raw.initial.is_some(), "--initial", "figure")?;
    reject(raw.state_file.is_some(), "--state-file", "figure")?;
    reject(raw.dump_state, "--dump-state", "figure")?;
    reject(!raw.axes.is_empty(), "--axis", "figure")?;
    let name = match positionals {
        [name] => name.as_str(),
        [] => {
            return Err(usage_err(format!(
                "'figure' needs a preset name: {}",
                figure_names().join(" ")
            )))
        }
        [_, extra, ..] => {
            return Err(usage_err(format!(
                "unexpected argument '{extra}' for 'figure'"
            )))
        }
    };
    let mut preset = figure_preset(name).ok_or_else(|| {
        usage_err(format!(
            "unknown figure '{name}'; available: {}",
            figure_names().join(" ")
        ))
    })?;
    for panel in &mut preset.panels {
        if let Some(engine) = raw.engine {
            panel.spec.engine = engine;
        }
        if let Some(form) = raw.psi1_form {
            if let Mode::Dynamics { psi1_form, .. } = &mut panel.spec.mode {
                *psi1_form = form;
            }
        }
    }
    if preset.panels.len() > 1 && raw.output.is_none() {
        return Err(usage_err(format!(
            "figure '{name}' writes {} panels; pass -o <path> (panels get _<label> suffixes)",
            preset.panels.len()
        )));
    }
    Ok(Command::Figure { preset })
}

fn assemble_verify(raw: &RawFlags, positionals: &[String]) -> Result<Command, UsageError> {
    no_positionals("verify", positionals)?;
    reject_model_flags(raw, "verify")?;
    reject(raw.temperature.is_some(), "-T", "verify")?;
    reject(raw.ground_state, "--ground-state", "verify")?;
    reject(raw.gamma.is_some(), "--gamma", "verify")?;
    reject(raw.time.is_some(), "-t", "verify")?;
    reject(raw.initial.is_some(), "--initial", "verify")?;
    reject(raw.psi1_form.is_some(), "--psi1-form", "verify")?;
    reject(raw.engine.is_some(), "--engine", "verify")?;
    reject(!raw.axes.is_empty(), "--axis", "verify")?;
    reject(raw.state_file.is_some(), "--state-file", "verify")?;
    reject(raw.dump_state, "--dump-state", "verify")?;
    if raw.format == Some(OutputFormat::Csv) {
        return Err(usage_err(
            "'verify' emits a text report by default; only --format json is supported",
        ));
    }
    Ok(Command::Verify)
}

/// On-disk density-matrix representation: 16 row-major `[re, im]` pairs.
#[derive(Debug, Serialize, Deserialize)]
struct StateFile {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

fn load_state_file(path: &Path) -> Result<DensityMatrix, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let parsed: StateFile = serde_json::from_str(&text)
        .map_err(|e| format!("{}: not a valid state file: {e}", path.display()))?;
    if parsed.dim != 4 {
        return Err(format!(
            "{}: dim must be 4 for a two-qubit state, got {}",
            path.display(),
            parsed.dim
        ));
    }
    if parsed.entries.len() != 16 {
        return Err(format!(
            "{}: entries must hold 16 [re, im] pairs, got {}",
            path.display(),
            parsed.entries.len()
        ));
    }
    let entries: Vec<C64> = parsed
        .entries
        .iter()
        .map(|[re, im]| C64::new(*re, *im))
        .collect();
    let matrix =
        ComplexMatrix::from_vec(4, entries).map_err(|e| format!("{}: {e}", path.display()))?;
    DensityMatrix::from_external(matrix).map_err(|e| format!("{}: {e}", path.display()))
}

fn render_state_file(state: &DensityMatrix) -> String {
    let file = StateFile {
        dim: 4,
        entries: state
            .matrix()
            .entries()
            .iter()
            .map(|z| [z.re, z.im])
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("state files always serialise")
}

/// What a successful execution produced.
#[derive(Debug)]
pub enum Output {
    /// One document for `-o` or standard output.
    Text(String),
    /// Labelled panel documents (multi-panel figures; require `-o`).
    Panels(Vec<(String, String)>),
}

/// A finished execution: the rendered output plus the process exit code
/// (non-zero only for a failing `verify`).
#[derive(Debug)]
pub struct Execution {
    pub output: Output,
    pub exit_code: i32,
}

fn format_or_default(config: &CliConfig) -> OutputFormat {
    config.format.unwrap_or(OutputFormat::Csv)
}

fn render_table(result: &SweepResult, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => result.to_csv(),
        OutputFormat::Json => result.to_json(),
    }
}

/// Builds a zero-axis table for a single evaluated point, reusing the sweep
/// column scheme (per-engine columns plus deltas for `both`).
fn point_table(
    engine: Engine,
    closed: Option<&CorrelationSet>,
    oracle: Option<&CorrelationSet>,
) -> SweepResult {
    let mut columns = Vec::new();
    let mut values = Vec::new();
    for q in Quantity::all() {
        match engine {
            Engine::ClosedForm => {
                columns.push(q.name().to_string());
                values.push(closed.map(|s| q.extract(s)));
            }
            Engine::Oracle => {
                columns.push(q.name().to_string());
                values.push(oracle.map(|s| q.extract(s)));
            }
            Engine::Both => {
                columns.push(format!("{}_closedform", q.name()));
                columns.push(format!("{}_oracle", q.name()));
                columns.push(format!("{}_delta", q.name()));
                let c = closed.map(|s| q.extract(s));
                let o = oracle.map(|s| q.extract(s));
                values.push(c);
                values.push(o);
                values.push(match (c, o) {
                    (Some(c), Some(o)) => Some(c - o),
                    _ => None,
                });
            }
        }
    }
    columns.push("status".to_string());
    SweepResult {
        columns,
        rows: vec![SweepRow {
            inputs: Vec::new(),
            values,
            status: None,
        }],
    }
}

fn execute_thermal(cmd: &ThermalCommand, format: OutputFormat) -> Result<String, String> {
    if !cmd.axes.is_empty() {
        let spec = SweepSpec {
            mode: Mode::Thermal {
                temperature: cmd.temperature,
            },
            base: cmd.params,
            axes: cmd.axes.clone(),
            quantities: Quantity::all().to_vec(),
            engine: cmd.engine,
        };
        let result = run_sweep(&spec).map_err(|e| e.to_string())?;
        return Ok(render_table(&result, format));
    }
    let (closed, oracle) = if cmd.ground_state {
        let rho = ground_state(&cmd.params);
        (None, Some(correlation_set(&rho).map_err(|e| e.to_string())?))
    } else {
        let temperature = cmd.temperature.expect("validated at parse time");
        let spec = ThermalSpec::new(temperature).map_err(|e| e.to_string())?;
        let closed = if cmd.engine != Engine::Oracle {
            Some(
                thermal_point(&cmd.params, &spec)
                    .map_err(|e| e.to_string())?
                    .set,
            )
        } else {
            None
        };
        let oracle = if cmd.engine != Engine::ClosedForm {
            let rho = gibbs_state(&cmd.params, &spec);
            Some(correlation_set(&rho).map_err(|e| e.to_string())?)
        } else {
            None
        };
        (closed, oracle)
    };
    Ok(render_table(
        &point_table(cmd.engine, closed.as_ref(), oracle.as_ref()),
        format,
    ))
}

/// Evaluates a dynamics sweep that starts from a file-provided state: the
/// sweep engine only knows Bell initial states, so the grid walk happens
/// here, against the numerical route.
fn file_dynamics_sweep(
    cmd: &DynamicsCommand,
    rho0: &DensityMatrix,
) -> Result<SweepResult, String> {
    let mut columns: Vec<String> = cmd.axes.iter().map(|a| a.param.name().to_string()).collect();
    for q in Quantity::all() {
        columns.push(q.name().to_string());
    }
    columns.push("status".to_string());

    let shape: Vec<usize> = cmd.axes.iter().map(|a| a.values.len()).collect();
    let total: usize = shape.iter().product();
    let mut rows = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rest = flat;
        let mut inputs = vec![0.0; shape.len()];
        for k in (0..shape.len()).rev() {
            inputs[k] = cmd.axes[k].values[rest % shape[k]];
            rest /= shape[k];
        }
        let mut params = cmd.params;
        let (mut gamma, mut time) = (cmd.gamma, cmd.t);
        for (axis, &value) in cmd.axes.iter().zip(&inputs) {
            match axis.param {
                AxisParam::J => params.j = value,
                AxisParam::Jz => params.j_z = value,
                AxisParam::B => params.b = value,
                AxisParam::D => params.d = value,
                AxisParam::Time => time = value,
                AxisParam::Gamma => gamma = value,
                AxisParam::T => unreachable!("rejected at parse time"),
            }
        }
        let set = EvolutionSpec::new(gamma, time)
            .map_err(|e| e.to_string())
            .and_then(|ev| milburn_evolve(&params, rho0, &ev).map_err(|e| e.to_string()))
            .and_then(|rho| correlation_set(&rho).map_err(|e| e.to_string()));
        rows.push(match set {
            Ok(set) => SweepRow {
                inputs,
                values: Quantity::all().iter().map(|q| Some(q.extract(&set))).collect(),
                status: None,
            },
            Err(message) => SweepRow {
                inputs,
                values: vec![None; 4],
                status: Some(message),
            },
        });
    }
    Ok(SweepResult { columns, rows })
}

fn execute_dynamics(cmd: &DynamicsCommand, format: OutputFormat) -> Result<String, String> {
    match &cmd.initial {
        DynamicsInitial::File(path) => {
            let rho0 = load_state_file(path)?;
            if cmd.axes.is_empty() {
                let ev = EvolutionSpec::new(cmd.gamma, cmd.t).map_err(|e| e.to_string())?;
                let evolved = milburn_evolve(&cmd.params, &rho0, &ev).map_err(|e| e.to_string())?;
                let oracle = correlation_set(&evolved).map_err(|e| e.to_string())?;
                Ok(render_table(
                    &point_table(Engine::Oracle, None, Some(&oracle)),
                    format,
                ))
            } else {
                let result = file_dynamics_sweep(cmd, &rho0)?;
                Ok(render_table(&result, format))
            }
        }
        DynamicsInitial::Bell(which) => {
            if !cmd.axes.is_empty() {
                let spec = SweepSpec {
                    mode: Mode::Dynamics {
                        gamma: cmd.gamma,
                        t: cmd.t,
                        initial: *which,
                        psi1_form: cmd.psi1_form,
                    },
                    base: cmd.params,
                    axes: cmd.axes.clone(),
                    quantities: Quantity::all().to_vec(),
                    engine: cmd.engine,
                };
                let result = run_sweep(&spec).map_err(|e| e.to_string())?;
                return Ok(render_table(&result, format));
            }
            let ev = EvolutionSpec::new(cmd.gamma, cmd.t).map_err(|e| e.to_string())?;
            let closed = if cmd.engine != Engine::Oracle {
                Some(match which {
                    BellState::Psi1 => {
                        dynamics_psi1(&cmd.params, &ev, cmd.psi1_form)
                            .map_err(|e| e.to_string())?
                            .set
                    }
                    BellState::Psi2 => dynamics_psi2(&cmd.params, &ev).set,
                })
            } else {
                None
            };
            let oracle = if cmd.engine != Engine::ClosedForm {
                let evolved = milburn_evolve(&cmd.params, &bell_state(*which), &ev)
                    .map_err(|e| e.to_string())?;
                Some(correlation_set(&evolved).map_err(|e| e.to_string())?)
            } else {
                None
            };
            Ok(render_table(
                &point_table(cmd.engine, closed.as_ref(), oracle.as_ref()),
                format,
            ))
        }
    }
}

/// Runs a parsed configuration, producing its output in memory.
///
/// Errors are runtime failures (exit code 1); usage problems are caught by
/// [`parse`] beforehand.
pub fn execute(config: &CliConfig) -> Result<Execution, String> {
    let format = format_or_default(config);
    let (output, exit_code) = match &config.command {
        Command::Help => (Output::Text(USAGE.to_string()), 0),
        Command::Measures {
            state_file,
            dump_state,
        } => {
            let state = load_state_file(state_file)?;
            if *dump_state {
                (Output::Text(render_state_file(&state)), 0)
            } else {
                let set = correlation_set(&state).map_err(|e| e.to_string())?;
                (
                    Output::Text(render_table(
                        &point_table(Engine::Oracle, None, Some(&set)),
                        format,
                    )),
                    0,
                )
            }
        }
        Command::Thermal(cmd) => (Output::Text(execute_thermal(cmd, format)?), 0),
        Command::Dynamics(cmd) => (Output::Text(execute_dynamics(cmd, format)?), 0),
        Command::Figure { preset } => {
            let mut panels = Vec::new();
            for panel in &preset.panels {
                let result = run_sweep(&panel.spec).map_err(|e| {
                    format!("panel {}: {e}", panel.label)
                })?;
                panels.push((panel.label.clone(), render_table(&result, format)));
            }
            if panels.len() == 1 {
                (Output::Text(panels.pop().expect("one panel").1), 0)
            } else {
                (Output::Panels(panels), 0)
            }
        }
        Command::Verify => {
            let report = standard_report();
            let text = match config.format {
                Some(OutputFormat::Json) => report.to_json(),
                _ => report.render_text(),
            };
            let code = if report.passed() { 0 } else { 1 };
            (Output::Text(text), code)
        }
    };
    Ok(Execution { output, exit_code })
}

fn ensure_trailing_newline(mut text: String) -> String {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text
}

/// Derives the per-panel output path: `out.csv` + label `J` → `out_J.csv`.
fn panel_path(base: &Path, label: &str, format: OutputFormat) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "figure".to_string());
    let extension = base
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| {
            match format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            }
            .to_string()
        });
    base.with_file_name(format!("{stem}_{label}.{extension}"))
}

/// Executes a configuration and performs its file or stdout writes.
/// Returns the process exit code.
pub fn run(config: &CliConfig) -> i32 {
    let execution = match execute(config) {
        Ok(e) => e,
        Err(message) => {
            eprintln!("error: {message}");
            return 1;
        }
    };
    let format = format_or_default(config);
    let result = match execution.output {
        Output::Text(text) => {
            let text = ensure_trailing_newline(text);
            match &config.output {
                Some(path) => fs::write(path, text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Output::Panels(panels) => {
            let base = config
                .output
                .as_ref()
                .expect("multi-panel output requires -o, enforced at parse time");
            let mut write_result = Ok(());
            for (label, text) in panels {
                let path = panel_path(base, &label, format);
                if let Err(e) = fs::write(&path, ensure_trailing_newline(text)) {
                    write_result = Err(format!("cannot write {}: {e}", path.display()));
                    break;
                }
            }
            write_result
        }
    };
    match result {
        Ok(()) => execution.exit_code,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}

/// Full entry point: parse, run, map usage errors to exit code 2.
pub fn entry(args: &[String]) -> i32 {
    match parse(args) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("usage error: {e}");
            eprintln!("run 'qcorr --help' for usage");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn parse_ok(list: &[&str]) -> CliConfig {
        parse(&args(list)).unwrap_or_else(|e| panic!("{list:?} should parse, got: {e}"))
    }

    fn parse_err(list: &[&str]) -> String {
        match parse(&args(list)) {
            Ok(config) => panic!("{list:?} should be rejected, got {config:?}"),
            Err(e) => e.0,
        }
    }

    #[test]
    fn parses_the_thermal_point_example() {
        let config = parse_ok(&[
            "thermal", "-J", "1", "-Jz", "-0.5", "-B", "0", "-D", "0", "-T", "0.5", "--engine",
            "both",
        ]);
        match config.command {
            Command::Thermal(cmd) => {
                assert_eq!(cmd.params.j, 1.0);
                assert_eq!(cmd.params.j_z, -0.5);
                assert_eq!(cmd.params.b, 0.0);
                assert_eq!(cmd.params.d, 0.0);
                assert_eq!(cmd.temperature, Some(0.5));
                assert!(!cmd.ground_state);
                assert!(cmd.axes.is_empty());
                assert_eq!(cmd.engine, Engine::Both);
            }
            other => panic!("expected thermal, got {other:?}"),
        }
        assert_eq!(config.format, None);
        assert_eq!(config.output, None);
    }

    #[test]
    fn parses_the_dynamics_example() {
        let config = parse_ok(&[
            "dynamics", "-J", "1", "-D", "0.4", "--gamma", "1", "-t", "1", "--initial", "psi1",
            "--engine", "both",
        ]);
        match config.command {
            Command::Dynamics(cmd) => {
                assert_eq!(cmd.params.j, 1.0);
                assert_eq!(cmd.params.d, 0.4);
                assert_eq!(cmd.gamma, 1.0);
                assert_eq!(cmd.t, 1.0);
                assert_eq!(cmd.initial, DynamicsInitial::Bell(BellState::Psi1));
                assert_eq!(cmd.psi1_form, Psi1Form::Strict);
                assert_eq!(cmd.engine, Engine::Both);
            }
            other => panic!("expected dynamics, got {other:?}"),
        }
    }

    #[test]
    fn parses_the_figure_example_and_axis_sweeps() {
        let config = parse_ok(&["figure", "fig2", "--format", "csv", "-o", "fig2.csv"]);
        match &config.command {
            Command::Figure { preset } => assert_eq!(preset.name, "fig2"),
            other => panic!("expected figure, got {other:?}"),
        }
        assert_eq!(config.format, Some(OutputFormat::Csv));
        assert_eq!(config.output, Some(PathBuf::from("fig2.csv")));

        let config = parse_ok(&["thermal", "-J", "1", "--axis", "T:0.02:2:201"]);
        match config.command {
            Command::Thermal(cmd) => {
                assert_eq!(cmd.axes.len(), 1);
                assert_eq!(cmd.axes[0].param, AxisParam::T);
                assert_eq!(cmd.axes[0].values.len(), 201);
                assert_eq!(cmd.temperature, None);
                assert_eq!(cmd.engine, Engine::ClosedForm);
            }
            other => panic!("expected thermal, got {other:?}"),
        }
    }

    #[test]
    fn help_short_circuits_everywhere() {
        assert!(matches!(parse_ok(&["--help"]).command, Command::Help));
        assert!(matches!(parse_ok(&["-h"]).command, Command::Help));
        assert!(matches!(
            parse_ok(&["thermal", "--help"]).command,
            Command::Help
        ));
    }

    #[test]
    fn rejects_unknown_tokens_and_malformed_values() {
        assert!(parse_err(&[]).contains("missing subcommand"));
        assert!(parse_err(&["melt"]).contains("unknown subcommand"));
        assert!(parse_err(&["thermal", "--frequency", "2"]).contains("unknown flag"));
        assert!(parse_err(&["thermal", "-T"]).contains("needs a value"));
        assert!(parse_err(&["thermal", "-T", "warm"]).contains("needs a real number"));
        assert!(parse_err(&["thermal", "-T", "inf"]).contains("must be finite"));
        assert!(parse_err(&["thermal", "-T", "1", "-T", "2"]).contains("more than once"));
        assert!(parse_err(&["thermal", "-T", "1", "extra"]).contains("unexpected argument"));
        assert!(parse_err(&["thermal", "-T", "-1"]).contains("must be positive"));
    }

    #[test]
    fn rejects_inapplicable_and_conflicting_flags() {
        assert!(parse_err(&["measures"]).contains("--state-file"));
        assert!(parse_err(&["measures", "--state-file", "a.json", "-J", "1"])
            .contains("not used by 'measures'"));
        assert!(parse_err(&["thermal", "-T", "1", "--gamma", "2"]).contains("not used"));
        assert!(parse_err(&["thermal"]).contains("needs -T"));
        assert!(
            parse_err(&["thermal", "-T", "1", "--ground-state"]).contains("not both")
        );
        assert!(parse_err(&["thermal", "--ground-state", "--engine", "closedform"])
            .contains("oracle"));
        assert!(parse_err(&["thermal", "-T", "1", "--axis", "T:0.1:2:5"])
            .contains("choose one"));
        assert!(parse_err(&["thermal", "--axis", "J:0:1:5"]).contains("no temperature"));
        assert!(parse_err(&["thermal", "-T", "1", "--axis", "t:0:1:5"])
            .contains("belongs to 'dynamics'"));
        assert!(parse_err(&["dynamics", "--initial", "psi2", "--axis", "T:0.1:1:5"])
            .contains("belongs to 'thermal'"));
        assert!(parse_err(&["dynamics", "-t", "1"]).contains("--initial"));
        assert!(parse_err(&["dynamics", "--initial", "file"]).contains("--state-file"));
        assert!(parse_err(&["dynamics", "--initial", "asym"]).contains("psi1, psi2 or file"));
        assert!(
            parse_err(&["dynamics", "--initial", "psi2", "--psi1-form", "reconciled"])
                .contains("--initial psi1")
        );
        assert!(parse_err(&["dynamics", "--initial", "psi1", "--gamma", "-2"])
            .contains("non-negative"));
        assert!(parse_err(&[
            "dynamics",
            "--initial",
            "file",
            "--state-file",
            "a.json",
            "--engine",
            "both"
        ])
        .contains("no closed form"));
        assert!(parse_err(&["verify", "--format", "csv"]).contains("json"));
        assert!(parse_err(&["verify", "-J", "1"]).contains("not used"));
    }

    #[test]
    fn rejects_axis_abuse() {
        assert!(parse_err(&["thermal", "--axis", "T:0.1:2"]).contains("name:min:max:count"));
        assert!(parse_err(&["thermal", "--axis", "Q:0:1:5"]).contains("unknown axis name"));
        assert!(parse_err(&["thermal", "--axis", "T:0.1:2:1"]).contains("at least 2"));
        assert!(parse_err(&["thermal", "--axis", "T:a:2:5"]).contains("real number"));
        assert!(parse_err(&[
            "thermal", "-T", "1", "--axis", "J:0:1:5", "--axis", "J:0:2:5"
        ])
        .contains("more than once"));
        assert!(parse_err(&[
            "thermal", "--axis", "T:0.1:1:5", "--axis", "J:0:1:5", "--axis", "B:0:1:5"
        ])
        .contains("at most two"));
    }

    #[test]
    fn figure_parsing_resolves_presets_and_guards_multi_panel_output() {
        let err = parse_err(&["figure"]);
        assert!(err.contains("fig1") && err.contains("fig7b"));
        assert!(parse_err(&["figure", "fig99"]).contains("unknown figure"));
        assert!(parse_err(&["figure", "fig6"]).contains("-o"));
        let config = parse_ok(&["figure", "fig6", "-o", "out.csv", "--engine", "oracle"]);
        match &config.command {
            Command::Figure { preset } => {
                assert!(preset
                    .panels
                    .iter()
                    .all(|p| p.spec.engine == Engine::Oracle));
            }
            other => panic!("expected figure, got {other:?}"),
        }
    }

    #[test]
    fn defaults_pick_the_only_workable_engine() {
        let config = parse_ok(&["thermal", "--ground-state"]);
        match config.command {
            Command::Thermal(cmd) => assert_eq!(cmd.engine, Engine::Oracle),
            other => panic!("expected thermal, got {other:?}"),
        }
        let config = parse_ok(&["dynamics", "--initial", "file", "--state-file", "p.json"]);
        match config.command {
            Command::Dynamics(cmd) => assert_eq!(cmd.engine, Engine::Oracle),
            other => panic!("expected dynamics, got {other:?}"),
        }
    }

    #[test]
    fn equals_sign_values_parse_like_spaced_ones() {
        let config = parse_ok(&["thermal", "-T=0.5", "--engine=oracle", "-Jz=-0.5"]);
        match config.command {
            Command::Thermal(cmd) => {
                assert_eq!(cmd.temperature, Some(0.5));
                assert_eq!(cmd.engine, Engine::Oracle);
                assert_eq!(cmd.params.j_z, -0.5);
            }
            other => panic!("expected thermal, got {other:?}"),
        }
    }

    #[test]
    fn state_files_round_trip_through_dump_and_load() {
        let thermal = ThermalSpec::new(0.8).unwrap();
        let rho = gibbs_state(&SpinParams::new(1.0, 0.5, 0.3, 0.4), &thermal);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        fs::write(&path, render_state_file(&rho)).unwrap();
        let loaded = load_state_file(&path).unwrap();
        assert!(rho.matrix().max_abs_diff(loaded.matrix()) < 1e-12);

        fs::write(&path, "{\"dim\": 3, \"entries\": []}").unwrap();
        assert!(load_state_file(&path).unwrap_err().contains("dim must be 4"));
        fs::write(&path, "not json").unwrap();
        assert!(load_state_file(&path)
            .unwrap_err()
            .contains("not a valid state file"));
    }

    #[test]
    fn measures_execution_matches_the_library() {
        let thermal = ThermalSpec::new(0.8).unwrap();
        let params = SpinParams::new(1.0, 0.5, 0.3, 0.4);
        let rho = gibbs_state(&params, &thermal);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        fs::write(&path, render_state_file(&rho)).unwrap();

        let config = parse_ok(&[
            "measures",
            "--state-file",
            path.to_str().unwrap(),
            "--format",
            "json",
        ]);
        let execution = execute(&config).unwrap();
        let text = match execution.output {
            Output::Text(t) => t,
            other => panic!("expected text output, got {other:?}"),
        };
        let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
        let expected = correlation_set(&rho).unwrap();
        let got = rows[0]["concurrence"].as_f64().unwrap();
        assert!((got - expected.concurrence).abs() < 1e-12);
        assert!(rows[0]["status"].is_null());
    }

    #[test]
    fn thermal_point_csv_has_the_both_engine_columns() {
        let config = parse_ok(&[
            "thermal", "-J", "1", "-Jz", "-0.5", "-T", "0.5", "--engine", "both",
        ]);
        let execution = execute(&config).unwrap();
        let text = match execution.output {
            Output::Text(t) => t,
            other => panic!("expected text output, got {other:?}"),
        };
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert_eq!(
            header,
            "concurrence_closedform,concurrence_oracle,concurrence_delta,\
             classical_closedform,classical_oracle,classical_delta,\
             discord_closedform,discord_oracle,discord_delta,\
             geometric_closedform,geometric_oracle,geometric_delta,status"
        );
        let row = lines.next().unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 13);
        let delta: f64 = fields[2].parse().unwrap();
        assert!(delta.abs() < 1e-5);
    }

    #[test]
    fn file_initial_dynamics_sweep_matches_direct_evolution() {
        let params = SpinParams::new(1.0, 0.2, 0.6, 0.3);
        let rho0 = gibbs_state(&params, &ThermalSpec::new(0.5).unwrap());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rho.json");
        fs::write(&path, render_state_file(&rho0)).unwrap();

        let config = parse_ok(&[
            "dynamics",
            "-J",
            "1",
            "-Jz",
            "0.2",
            "-B",
            "0.6",
            "-D",
            "0.3",
            "--gamma",
            "0.5",
            "--initial",
            "file",
            "--state-file",
            path.to_str().unwrap(),
            "--axis",
            "t:0:2:3",
            "--format",
            "json",
        ]);
        let execution = execute(&config).unwrap();
        let text = match execution.output {
            Output::Text(t) => t,
            other => panic!("expected text output, got {other:?}"),
        };
        let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(rows.as_array().unwrap().len(), 3);
        let t_mid = rows[1]["t"].as_f64().unwrap();
        assert_eq!(t_mid, 1.0);
        let ev = EvolutionSpec::new(0.5, 1.0).unwrap();
        let expected =
            correlation_set(&milburn_evolve(&params, &rho0, &ev).unwrap()).unwrap();
        let got = rows[1]["discord"].as_f64().unwrap();
        assert!((got - expected.discord).abs() < 1e-12);
    }

    #[test]
    fn panel_paths_suffix_the_label_before_the_extension() {
        assert_eq!(
            panel_path(Path::new("out.csv"), "J", OutputFormat::Csv),
            PathBuf::from("out_J.csv")
        );
        assert_eq!(
            panel_path(Path::new("data/fig6"), "D", OutputFormat::Json),
            PathBuf::from("data/fig6_D.json")
        );
    }
}
