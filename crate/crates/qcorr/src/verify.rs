//! Cross-validation of the closed forms against the generic numerical route.
//!
//! Every specialised expression in [`crate::closedform`] has an independent
//! check: build the actual density matrix ([`crate::model`]), measure it with
//! the generic machinery ([`crate::measures`]), and compare. This module
//! packages that comparison as single-point verdicts ([`verify_point`]) and
//! as a standard grid report ([`standard_report`]) suitable for the command
//! line.
//!
//! The one-excitation dynamical algebra needs special treatment: its strict
//! (as-printed) form carries a concurrence radicand and an interference
//! frequency that drift from the numerics, while a reconciled variant of the
//! same terms tracks the numerics exactly. Verification therefore
//! adjudicates: the strict value is compared against the oracle, the
//! reconciled value rides along, and a deviation counts as *flagged* — not a
//! failure — precisely when it is confined to those terms, the reconciled
//! value agrees, and the shared classical-correlation expression agrees.

use crate::closedform::{dynamics_psi1, dynamics_psi2, thermal_point, Psi1Form};
use crate::measures::{correlation_set, CorrelationSet};
use crate::model::{
    bell_state, gibbs_state, milburn_evolve, BellState, EvolutionSpec, SpinParams, ThermalSpec,
};
use serde::Serialize;

/// Agreement tolerance for thermal concurrence and geometric discord, where
/// both routes are plain linear algebra.
pub const THERMAL_SPECTRAL_TOL: f64 = 1e-5;
/// Agreement tolerance for thermal classical correlation and discord, whose
/// oracle side rests on a numerical measurement optimiser.
pub const THERMAL_OPTIMIZED_TOL: f64 = 1e-4;
/// Agreement tolerance for the field-split Bell state's concurrence and
/// geometric discord (exponentials on both sides; very tight).
pub const PSI2_SPECTRAL_TOL: f64 = 1e-6;
/// Agreement tolerance for the field-split Bell state's optimiser-backed
/// measures.
pub const PSI2_OPTIMIZED_TOL: f64 = 1e-4;
/// Agreement tolerance for the one-excitation adjudication (all four
/// measures).
pub const PSI1_TOL: f64 = 1e-4;
/// Slack allowed when checking that oracle values sit inside [0, 1].
pub const ORACLE_BOUNDS_TOL: f64 = 1e-9;

/// One parameter point to verify.
#[derive(Debug, Clone)]
pub enum VerifyCase {
    /// Gibbs state at the given temperature.
    Thermal { params: SpinParams, temperature: f64 },
    /// Dephasing dynamics from a Bell state.
    Dynamics {
        params: SpinParams,
        gamma: f64,
        t: f64,
        initial: BellState,
    },
}

impl VerifyCase {
    fn label(&self) -> String {
        match self {
            VerifyCase::Thermal {
                params,
                temperature,
            } => format!(
                "thermal J={} Jz={} B={} D={} T={}",
                params.j, params.j_z, params.b, params.d, temperature
            ),
            VerifyCase::Dynamics {
                params,
                gamma,
                t,
                initial,
            } => {
                let which = match initial {
                    BellState::Psi1 => "psi1",
                    BellState::Psi2 => "psi2",
                };
                format!(
                    "{which} J={} Jz={} B={} D={} gamma={gamma} t={t}",
                    params.j, params.j_z, params.b, params.d
                )
            }
        }
    }
}

/// The comparison of one measure at one point.
#[derive(Debug, Clone, Serialize)]
pub struct QuantityCheck {
    /// Measure name (`concurrence`, `classical`, `discord`, `geometric`).
    pub quantity: &'static str,
    /// Closed-form value under test.
    pub closed_form: f64,
    /// Independent numerical value.
    pub oracle: f64,
    /// `closed_form − oracle`.
    pub delta: f64,
    /// Allowed |delta|.
    pub tolerance: f64,
    /// Whether |delta| ≤ tolerance.
    pub agrees: bool,
    /// Whether this quantity belongs to the strict one-excitation terms with
    /// a known ambiguity (deviations here can be flagged rather than fatal).
    pub flagged: bool,
    /// Reconciled-form value, present only for flagged quantities.
    pub alternate: Option<f64>,
    /// Whether the reconciled value agrees with the oracle.
    pub alternate_agrees: Option<bool>,
}

/// Verdict for one verified point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerifyOutcome {
    /// Every measure within tolerance.
    Agrees,
    /// Deviations exist but are confined to the flagged strict-form terms,
    /// and the reconciled form agrees with the oracle at each of them.
    FlaggedDeviation,
    /// A genuine mismatch, an out-of-bounds oracle value, or an evaluation
    /// error.
    Disagrees,
}

/// Full record of one verified point.
#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    /// Human-readable parameter-point description.
    pub label: String,
    /// Per-measure comparisons (empty if evaluation failed).
    pub checks: Vec<QuantityCheck>,
    /// Whether every oracle value landed in [0, 1] (within slack). `false`
    /// when evaluation failed before the bounds could be established.
    pub oracle_bounds_ok: bool,
    /// Whether the strict one-excitation concurrence radicand went negative
    /// and was clamped at this point (`None` outside that scenario).
    pub strict_radicand_clamped: Option<bool>,
    /// Point verdict.
    pub outcome: VerifyOutcome,
    /// Evaluation error, if any.
    pub status: Option<String>,
}

/// Aggregate of many verified points.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub points: Vec<PointReport>,
}

impl VerifyReport {
    /// Counts of (agreeing, flagged, disagreeing) points.
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut counts = (0usize, 0usize, 0usize);
        for p in &self.points {
            match p.outcome {
                VerifyOutcome::Agrees => counts.0 += 1,
                VerifyOutcome::FlaggedDeviation => counts.1 += 1,
                VerifyOutcome::Disagrees => counts.2 += 1,
            }
        }
        counts
    }

    /// True when no point genuinely disagrees (flagged deviations allowed).
    pub fn passed(&self) -> bool {
        self.points
            .iter()
            .all(|p| p.outcome != VerifyOutcome::Disagrees)
    }

    /// Renders the discrepancy report as text: a summary, full detail for
    /// every non-agreeing point, and a final verdict line.
    pub fn render_text(&self) -> String {
        let (agrees, flagged, disagrees) = self.counts();
        let mut out = String::new();
        out.push_str("closed-form vs oracle verification\n");
        out.push_str(&format!("  points checked     {}\n", self.points.len()));
        out.push_str(&format!("  full agreement     {agrees}\n"));
        out.push_str(&format!("  flagged deviations {flagged}\n"));
        out.push_str(&format!("  disagreements      {disagrees}\n"));

        if flagged > 0 {
            out.push_str(
                "\nflagged deviations — strict one-excitation terms with a known\n\
                 ambiguity; the reconciled value is shown and agrees with the oracle\n\
                 at every point listed:\n",
            );
            for p in &self.points {
                if p.outcome == VerifyOutcome::FlaggedDeviation {
                    render_point(&mut out, p);
                }
            }
        }
        if disagrees > 0 {
            out.push_str("\ndisagreements:\n");
            for p in &self.points {
                if p.outcome == VerifyOutcome::Disagrees {
                    render_point(&mut out, p);
                }
            }
        }

        out.push_str(&if disagrees == 0 && flagged == 0 {
            "\nverdict: PASS — closed forms match the oracle everywhere\n".to_string()
        } else if disagrees == 0 {
            format!(
                "\nverdict: PASS — every deviation is confined to the flagged strict-form terms ({flagged} points)\n"
            )
        } else {
            format!("\nverdict: FAIL — {disagrees} points genuinely disagree\n")
        });
        out
    }

    /// Renders the full report as pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verify reports always serialise")
    }
}

fn render_point(out: &mut String, p: &PointReport) {
    out.push_str(&format!("  {}", p.label));
    if p.strict_radicand_clamped == Some(true) {
        out.push_str("  [strict concurrence radicand clamped at 0]");
    }
    out.push('\n');
    if let Some(status) = &p.status {
        out.push_str(&format!("    evaluation error: {status}\n"));
    }
    if !p.oracle_bounds_ok && p.status.is_none() {
        out.push_str("    oracle value outside [0, 1]\n");
    }
    for c in &p.checks {
        if c.agrees {
            continue;
        }
        out.push_str(&format!(
            "    {:<11} closed={:.12e} oracle={:.12e} delta={:+.2e} tol={:.0e}",
            c.quantity, c.closed_form, c.oracle, c.delta, c.tolerance
        ));
        if let Some(alt) = c.alternate {
            out.push_str(&format!(
                " | reconciled={:.12e} (delta {:+.2e})",
                alt,
                alt - c.oracle
            ));
        }
        out.push('\n');
    }
}

fn check(
    quantity: &'static str,
    closed_form: f64,
    oracle: f64,
    tolerance: f64,
    flagged: bool,
    alternate: Option<f64>,
) -> QuantityCheck {
    let delta = closed_form - oracle;
    QuantityCheck {
        quantity,
        closed_form,
        oracle,
        delta,
        tolerance,
        agrees: delta.abs() <= tolerance,
        flagged,
        alternate,
        alternate_agrees: alternate.map(|a| (a - oracle).abs() <= tolerance),
    }
}

fn oracle_in_bounds(set: &CorrelationSet) -> bool {
    [set.concurrence, set.classical, set.discord, set.geometric]
        .iter()
        .all(|&v| (-ORACLE_BOUNDS_TOL..=1.0 + ORACLE_BOUNDS_TOL).contains(&v))
}

fn outcome_of(checks: &[QuantityCheck], oracle_bounds_ok: bool) -> VerifyOutcome {
    if !oracle_bounds_ok {
        return VerifyOutcome::Disagrees;
    }
    let mut any_flagged = false;
    for c in checks {
        if !c.agrees {
            if c.flagged && c.alternate_agrees == Some(true) {
                any_flagged = true;
            } else {
                return VerifyOutcome::Disagrees;
            }
        }
    }
    if any_flagged {
        VerifyOutcome::FlaggedDeviation
    } else {
        VerifyOutcome::Agrees
    }
}

fn error_report(label: String, message: String) -> PointReport {
    PointReport {
        label,
        checks: Vec::new(),
        oracle_bounds_ok: false,
        strict_radicand_clamped: None,
        outcome: VerifyOutcome::Disagrees,
        status: Some(message),
    }
}

/// Verifies a single parameter point. Never panics on bad input: evaluation
/// failures come back as a [`VerifyOutcome::Disagrees`] report with `status`
/// set.
pub fn verify_point(case: &VerifyCase) -> PointReport {
    let label = case.label();
    match case {
        VerifyCase::Thermal {
            params,
            temperature,
        } => {
            let spec = match ThermalSpec::new(*temperature) {
                Ok(s) => s,
                Err(e) => return error_report(label, e.to_string()),
            };
            let closed = match thermal_point(params, &spec) {
                Ok(p) => p.set,
                Err(e) => return error_report(label, e.to_string()),
            };
            let oracle = match correlation_set(&gibbs_state(params, &spec)) {
                Ok(s) => s,
                Err(e) => return error_report(label, e.to_string()),
            };
            let checks = vec![
                check(
                    "concurrence",
                    closed.concurrence,
                    oracle.concurrence,
                    THERMAL_SPECTRAL_TOL,
                    false,
                    None,
                ),
                check(
                    "classical",
                    closed.classical,
                    oracle.classical,
                    THERMAL_OPTIMIZED_TOL,
                    false,
                    None,
                ),
                check(
                    "discord",
                    closed.discord,
                    oracle.discord,
                    THERMAL_OPTIMIZED_TOL,
                    false,
                    None,
                ),
                check(
                    "geometric",
                    closed.geometric,
                    oracle.geometric,
                    THERMAL_SPECTRAL_TOL,
                    false,
                    None,
                ),
            ];
            let bounds = oracle_in_bounds(&oracle);
            PointReport {
                label,
                outcome: outcome_of(&checks, bounds),
                checks,
                oracle_bounds_ok: bounds,
                strict_radicand_clamped: None,
                status: None,
            }
        }
        VerifyCase::Dynamics {
            params,
            gamma,
            t,
            initial,
        } => {
            let ev = match EvolutionSpec::new(*gamma, *t) {
                Ok(e) => e,
                Err(e) => return error_report(label, e.to_string()),
            };
            let evolved = match milburn_evolve(params, &bell_state(*initial), &ev) {
                Ok(rho) => rho,
                Err(e) => return error_report(label, e.to_string()),
            };
            let oracle = match correlation_set(&evolved) {
                Ok(s) => s,
                Err(e) => return error_report(label, e.to_string()),
            };
            let bounds = oracle_in_bounds(&oracle);
            match initial {
                BellState::Psi2 => {
                    let closed = dynamics_psi2(params, &ev).set;
                    let checks = vec![
                        check(
                            "concurrence",
                            closed.concurrence,
                            oracle.concurrence,
                            PSI2_SPECTRAL_TOL,
                            false,
                            None,
                        ),
                        check(
                            "classical",
                            closed.classical,
                            oracle.classical,
                            PSI2_OPTIMIZED_TOL,
                            false,
                            None,
                        ),
                        check(
                            "discord",
                            closed.discord,
                            oracle.discord,
                            PSI2_OPTIMIZED_TOL,
                            false,
                            None,
                        ),
                        check(
                            "geometric",
                            closed.geometric,
                            oracle.geometric,
                            PSI2_SPECTRAL_TOL,
                            false,
                            None,
                        ),
                    ];
                    PointReport {
                        label,
                        outcome: outcome_of(&checks, bounds),
                        checks,
                        oracle_bounds_ok: bounds,
                        strict_radicand_clamped: None,
                        status: None,
                    }
                }
                BellState::Psi1 => {
                    let strict = match dynamics_psi1(params, &ev, Psi1Form::Strict) {
                        Ok(p) => p,
                        Err(e) => return error_report(label, e.to_string()),
                    };
                    let reconciled = match dynamics_psi1(params, &ev, Psi1Form::Reconciled) {
                        Ok(p) => p.set,
                        Err(e) => return error_report(label, e.to_string()),
                    };
                    let checks = vec![
                        check(
                            "concurrence",
                            strict.set.concurrence,
                            oracle.concurrence,
                            PSI1_TOL,
                            true,
                            Some(reconciled.concurrence),
                        ),
                        check(
                            "classical",
                            strict.set.classical,
                            oracle.classical,
                            PSI1_TOL,
                            false,
                            None,
                        ),
                        check(
                            "discord",
                            strict.set.discord,
                            oracle.discord,
                            PSI1_TOL,
                            true,
                            Some(reconciled.discord),
                        ),
                        check(
                            "geometric",
                            strict.set.geometric,
                            oracle.geometric,
                            PSI1_TOL,
                            true,
                            Some(reconciled.geometric),
                        ),
                    ];
                    PointReport {
                        label,
                        outcome: outcome_of(&checks, bounds),
                        checks,
                        oracle_bounds_ok: bounds,
                        strict_radicand_clamped: Some(strict.radicand_clamped),
                        status: None,
                    }
                }
            }
        }
    }
}

/// Verifies a list of points in order.
pub fn verify_cases(cases: &[VerifyCase]) -> VerifyReport {
    VerifyReport {
        points: cases.iter().map(verify_point).collect(),
    }
}

/// The thermal verification grid: 4 exchange × 5 anisotropy × 3 field ×
/// 3 DM × 5 temperature points (900 in total).
pub fn thermal_grid_cases() -> Vec<VerifyCase> {
    let mut cases = Vec::new();
    for &j in &[-1.0, -0.3, 0.3, 1.0] {
        for &j_z in &[-1.0, -0.5, 0.0, 0.5, 1.0] {
            for &b in &[0.0, 1.0, 2.0] {
                for &d in &[0.0, 1.0, 2.0] {
                    for &temperature in &[0.2, 0.5, 1.0, 2.0, 5.0] {
                        cases.push(VerifyCase::Thermal {
                            params: SpinParams::new(j, j_z, b, d),
                            temperature,
                        });
                    }
                }
            }
        }
    }
    cases
}

/// The field-split Bell-state dynamics grid (30 points). The base exchange
/// couplings are deliberately non-zero: the closed form depends on the field
/// alone, while the oracle evolves under the full Hamiltonian, so agreement
/// also confirms that independence.
pub fn psi2_grid_cases() -> Vec<VerifyCase> {
    let mut cases = Vec::new();
    for &b in &[0.5, 1.0, 2.0] {
        for &gamma in &[0.1, 1.0] {
            for &t in &[0.0, 0.25, 0.5, 1.0, 2.0] {
                cases.push(VerifyCase::Dynamics {
                    params: SpinParams::new(1.0, 0.5, b, 0.4),
                    gamma,
                    t,
                    initial: BellState::Psi2,
                });
            }
        }
    }
    cases
}

/// The one-excitation adjudication grid (156 points): exchange and DM
/// couplings crossed with two decoherence rates and thirteen times spanning
/// several oscillation periods. Anisotropy and field are deliberately
/// non-zero; they must drop out of this subspace.
pub fn psi1_adjudication_cases() -> Vec<VerifyCase> {
    let mut cases = Vec::new();
    for &j in &[0.0, 0.5, 1.0] {
        for &d in &[0.4, 1.0] {
            for &gamma in &[0.1, 1.0] {
                for i in 0..13 {
                    cases.push(VerifyCase::Dynamics {
                        params: SpinParams::new(j, 0.3, 0.7, d),
                        gamma,
                        t: 0.25 * i as f64,
                        initial: BellState::Psi1,
                    });
                }
            }
        }
    }
    cases
}

/// All standard verification cases: thermal grid, field-split dynamics grid,
/// one-excitation adjudication grid.
pub fn standard_cases() -> Vec<VerifyCase> {
    let mut cases = thermal_grid_cases();
    cases.extend(psi2_grid_cases());
    cases.extend(psi1_adjudication_cases());
    cases
}

/// Runs the full standard grid and returns the report.
pub fn standard_report() -> VerifyReport {
    verify_cases(&standard_cases())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_point_agrees() {
        let report = verify_point(&VerifyCase::Thermal {
            params: SpinParams::new(1.0, 0.5, 0.3, 0.4),
            temperature: 1.0,
        });
        assert_eq!(report.outcome, VerifyOutcome::Agrees);
        assert_eq!(report.checks.len(), 4);
        assert!(report.oracle_bounds_ok);
        assert!(report.checks.iter().all(|c| c.agrees && !c.flagged));
        assert!(report.status.is_none());
    }

    #[test]
    fn field_split_point_agrees_with_the_exponential_value() {
        let report = verify_point(&VerifyCase::Dynamics {
            params: SpinParams::new(1.0, 0.5, 1.0, 0.4),
            gamma: 1.0,
            t: 0.5,
            initial: BellState::Psi2,
        });
        assert_eq!(report.outcome, VerifyOutcome::Agrees);
        let c = &report.checks[0];
        assert_eq!(c.quantity, "concurrence");
        assert!((c.closed_form - (-1.0f64).exp()).abs() < 1e-12);
        assert!((c.oracle - (-1.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn one_excitation_strict_deviation_is_flagged_not_fatal() {
        // J = 0 makes the strict concurrence radicand go negative once the
        // oscillation passes a quarter period; the reconciled form tracks
        // the oracle there.
        let report = verify_point(&VerifyCase::Dynamics {
            params: SpinParams::new(0.0, 0.3, 0.7, 0.4),
            gamma: 0.1,
            t: 3.0,
            initial: BellState::Psi1,
        });
        assert_eq!(report.outcome, VerifyOutcome::FlaggedDeviation);
        assert_eq!(report.strict_radicand_clamped, Some(true));
        let concurrence = &report.checks[0];
        assert!(!concurrence.agrees);
        assert!(concurrence.flagged);
        assert_eq!(concurrence.alternate_agrees, Some(true));
        // The shared classical-correlation expression must agree regardless.
        let classical = &report.checks[1];
        assert!(classical.agrees && !classical.flagged);
    }

    #[test]
    fn one_excitation_at_time_zero_agrees_exactly() {
        let report = verify_point(&VerifyCase::Dynamics {
            params: SpinParams::new(1.0, 0.3, 0.7, 0.4),
            gamma: 1.0,
            t: 0.0,
            initial: BellState::Psi1,
        });
        assert_eq!(report.outcome, VerifyOutcome::Agrees);
        for c in &report.checks {
            assert!((c.closed_form - 1.0).abs() < 1e-12, "{} at t=0", c.quantity);
        }
    }

    #[test]
    fn degenerate_coupling_reports_an_evaluation_error() {
        let report = verify_point(&VerifyCase::Dynamics {
            params: SpinParams::new(0.0, 0.3, 0.7, 0.0),
            gamma: 0.5,
            t: 1.0,
            initial: BellState::Psi1,
        });
        assert_eq!(report.outcome, VerifyOutcome::Disagrees);
        assert!(report.status.is_some());
        assert!(report.checks.is_empty());
    }

    #[test]
    fn standard_grids_have_the_documented_sizes() {
        assert_eq!(thermal_grid_cases().len(), 900);
        assert_eq!(psi2_grid_cases().len(), 30);
        assert_eq!(psi1_adjudication_cases().len(), 156);
        assert_eq!(standard_cases().len(), 1086);
    }

    #[test]
    fn sampled_standard_cases_all_pass() {
        // The full grid is the integration suite's job; a strided sample
        // keeps this unit test quick while touching all three scenarios.
        let cases: Vec<VerifyCase> = standard_cases()
            .into_iter()
            .step_by(53)
            .collect();
        let report = verify_cases(&cases);
        assert!(report.passed(), "{}", report.render_text());
    }

    #[test]
    fn text_report_summarises_and_adjudicates() {
        let report = verify_cases(&[
            VerifyCase::Thermal {
                params: SpinParams::new(1.0, 0.5, 0.3, 0.4),
                temperature: 1.0,
            },
            VerifyCase::Dynamics {
                params: SpinParams::new(0.0, 0.3, 0.7, 0.4),
                gamma: 0.1,
                t: 3.0,
                initial: BellState::Psi1,
            },
        ]);
        assert!(report.passed());
        let (agrees, flagged, disagrees) = report.counts();
        assert_eq!((agrees, flagged, disagrees), (1, 1, 0));
        let text = report.render_text();
        assert!(text.contains("points checked     2"));
        assert!(text.contains("flagged deviations 1"));
        assert!(text.contains("reconciled="));
        assert!(text.contains("verdict: PASS"));
        assert!(text.contains("radicand clamped"));
    }

    #[test]
    fn json_report_round_trips() {
        let report = verify_cases(&[VerifyCase::Thermal {
            params: SpinParams::new(1.0, 0.0, 0.0, 0.0),
            temperature: 0.5,
        }]);
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(value["points"][0]["outcome"], "Agrees");
        assert!(value["points"][0]["checks"][0]["agrees"].as_bool().unwrap());
    }
}
