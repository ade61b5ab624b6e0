//! Minimisation over single-qubit projective measurements.
//!
//! A projective measurement basis on one qubit is parameterised by polar and
//! azimuthal angles `(theta, phi)` with `theta in [0, pi/2]` and
//! `phi in [0, 2 pi)`; that rectangle covers every basis exactly once up to
//! relabelling the two outcomes. The objectives minimised here (conditional
//! entropy, residual state overlap) are smooth and periodic in both angles,
//! so a coarse global grid scan followed by a local Nelder–Mead refinement is
//! reliable: the grid pins down the basin, the simplex polishes the minimum.

use std::f64::consts::PI;

/// Grid resolution of the global scan along `theta`.
const GRID_THETA: usize = 64;
/// Grid resolution of the global scan along `phi`.
const GRID_PHI: usize = 64;
/// Iteration cap for the simplex refinement.
const NM_MAX_ITERS: usize = 400;
/// Relative spread of simplex values at which refinement stops.
const NM_VALUE_TOL: f64 = 1e-13;
/// Simplex diameter at which refinement stops.
const NM_POINT_TOL: f64 = 1e-10;

/// Location and value of a minimum over measurement angles.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AngularMinimum {
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
}

/// Scans an `n_theta x n_phi` grid over `theta in [0, pi/2]` (inclusive) and
/// `phi in [0, 2 pi)` (half-open) and returns the smallest sample.
pub(crate) fn grid_minimum(
    f: &impl Fn(f64, f64) -> f64,
    n_theta: usize,
    n_phi: usize,
) -> AngularMinimum {
    let mut best = AngularMinimum {
        value: f64::INFINITY,
        theta: 0.0,
        phi: 0.0,
    };
    for i in 0..n_theta {
        let theta = 0.5 * PI * i as f64 / (n_theta - 1) as f64;
        for k in 0..n_phi {
            let phi = 2.0 * PI * k as f64 / n_phi as f64;
            let value = f(theta, phi);
            if value < best.value {
                best = AngularMinimum { value, theta, phi };
            }
        }
    }
    best
}

/// Global grid scan plus Nelder–Mead refinement.
///
/// The returned angles are folded back into the fundamental rectangle
/// (`theta in [0, pi/2]`, `phi in [0, 2 pi)`); the objective itself is
/// evaluated without constraints since it is defined and periodic on all of
/// the plane.
pub(crate) fn minimize_over_measurements(f: impl Fn(f64, f64) -> f64) -> AngularMinimum {
    let coarse = grid_minimum(&f, GRID_THETA, GRID_PHI);
    let step_theta = 0.125 * PI / (GRID_THETA - 1) as f64;
    let step_phi = 0.5 * PI / GRID_PHI as f64;
    let refined = nelder_mead(
        &f,
        [coarse.theta, coarse.phi],
        [step_theta, step_phi],
        coarse.value,
    );
    let best = if refined.value <= coarse.value {
        refined
    } else {
        coarse
    };
    fold_into_fundamental(best)
}

/// Folds angles into `theta in [0, pi/2]`, `phi in [0, 2 pi)` using the
/// symmetries of the measurement family: the basis at `(pi - theta, phi)`
/// equals the basis at `(theta, phi + pi)`, and both angles are periodic.
fn fold_into_fundamental(mut m: AngularMinimum) -> AngularMinimum {
    m.theta = m.theta.rem_euclid(PI);
    if m.theta > 0.5 * PI {
        m.theta = PI - m.theta;
        m.phi += PI;
    }
    m.phi = m.phi.rem_euclid(2.0 * PI);
    m
}

/// Standard Nelder–Mead in two dimensions with reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2.
fn nelder_mead(
    f: &impl Fn(f64, f64) -> f64,
    start: [f64; 2],
    steps: [f64; 2],
    start_value: f64,
) -> AngularMinimum {
    let mut simplex: [([f64; 2], f64); 3] = [
        (start, start_value),
        {
            let p = [start[0] + steps[0], start[1]];
            (p, f(p[0], p[1]))
        },
        {
            let p = [start[0], start[1] + steps[1]];
            (p, f(p[0], p[1]))
        },
    ];

    for _ in 0..NM_MAX_ITERS {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("objective is finite"));
        let (best, worst) = (simplex[0], simplex[2]);
        let spread = (worst.1 - best.1).abs();
        let diameter = simplex
            .iter()
            .map(|(p, _)| {
                let dx = p[0] - best.0[0];
                let dy = p[1] - best.0[1];
                dx.hypot(dy)
            })
            .fold(0.0, f64::max);
        if spread < NM_VALUE_TOL * (1.0 + best.1.abs()) && diameter < NM_POINT_TOL {
            break;
        }

        let centroid = [
            0.5 * (simplex[0].0[0] + simplex[1].0[0]),
            0.5 * (simplex[0].0[1] + simplex[1].0[1]),
        ];
        let reflect = [
            centroid[0] + (centroid[0] - worst.0[0]),
            centroid[1] + (centroid[1] - worst.0[1]),
        ];
        let fr = f(reflect[0], reflect[1]);

        if fr < simplex[0].1 {
            let expand = [
                centroid[0] + 2.0 * (reflect[0] - centroid[0]),
                centroid[1] + 2.0 * (reflect[1] - centroid[1]),
            ];
            let fe = f(expand[0], expand[1]);
            simplex[2] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (reflect, fr);
        } else {
            let contract = if fr < worst.1 {
                [
                    centroid[0] + 0.5 * (reflect[0] - centroid[0]),
                    centroid[1] + 0.5 * (reflect[1] - centroid[1]),
                ]
            } else {
                [
                    centroid[0] + 0.5 * (worst.0[0] - centroid[0]),
                    centroid[1] + 0.5 * (worst.0[1] - centroid[1]),
                ]
            };
            let fc = f(contract[0], contract[1]);
            if fc < worst.1.min(fr) {
                simplex[2] = (contract, fc);
            } else {
                // Shrink every vertex halfway toward the best.
                for k in 1..3 {
                    let p = [
                        simplex[0].0[0] + 0.5 * (simplex[k].0[0] - simplex[0].0[0]),
                        simplex[0].0[1] + 0.5 * (simplex[k].0[1] - simplex[0].0[1]),
                    ];
                    simplex[k] = (p, f(p[0], p[1]));
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("objective is finite"));
    AngularMinimum {
        value: simplex[0].1,
        theta: simplex[0].0[0],
        phi: simplex[0].0[1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_smooth_interior_minimum() {
        // Periodic objective with minimum value -2 at theta = pi/8, phi = 3 pi / 2.
        let f = |theta: f64, phi: f64| -> f64 { -(4.0 * theta).sin() + phi.sin() };
        let m = minimize_over_measurements(f);
        assert!((m.value + 2.0).abs() < 1e-10);
        assert!((m.theta - PI / 8.0).abs() < 1e-6);
        assert!((m.phi - 1.5 * PI).abs() < 1e-6);
    }

    #[test]
    fn finds_boundary_minimum() {
        // Minimised on the theta = 0 edge regardless of phi.
        let f = |theta: f64, _phi: f64| -> f64 { theta * theta + 1.0 };
        let m = minimize_over_measurements(f);
        assert!((m.value - 1.0).abs() < 1e-12);
        assert!(m.theta.abs() < 1e-5);
    }

    #[test]
    fn folded_angles_stay_in_fundamental_rectangle() {
        // Objective pulls the simplex toward negative theta; the reported
        // minimiser must still be folded into range.
        let f = |theta: f64, phi: f64| -> f64 { (theta + 0.01).powi(2) + (phi - PI).powi(2) };
        let m = minimize_over_measurements(f);
        assert!((0.0..=0.5 * PI + 1e-12).contains(&m.theta));
        assert!((0.0..2.0 * PI).contains(&m.phi));
    }

    #[test]
    fn refinement_beats_the_coarse_grid() {
        // Narrow well between grid nodes: the grid alone cannot resolve it.
        let well = |theta: f64, phi: f64| -> f64 {
            let dt = theta - 0.4017;
            let dp = phi - 2.9113;
            (dt * dt + dp * dp).sqrt().min(0.3)
        };
        let coarse = grid_minimum(&well, GRID_THETA, GRID_PHI);
        let m = minimize_over_measurements(well);
        assert!(m.value < coarse.value);
        assert!(m.value < 1e-8);
    }
}
