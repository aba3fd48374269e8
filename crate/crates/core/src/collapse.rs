//! Release from rest and direct integration of Newton's equations.
//!
//! A central configuration released with zero velocities collapses
//! homothetically: every pairwise distance shrinks by the same factor.
//! [`integrate_release`] measures how far the trajectory departs from that,
//! which gives a check of central-ness independent of any residual formula.
//!
//! The integrator is the fourth-order symmetric composition of
//! drift-kick-drift leapfrog steps. A step whose energy error (relative to
//! the initial energy) exceeds [`STEP_ENERGY_TOLERANCE`] is retried with half
//! the step size, down to [`MIN_DT`].

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{closest_pair, BodySystem};
use crate::newtonian::{lambda_of, potential};
use crate::{Vec3, COLLISION_TOLERANCE};

pub const STEP_ENERGY_TOLERANCE: f64 = 1e-6;
pub const MIN_DT: f64 = 1e-9;
pub const DEFAULT_T_END: f64 = 0.2;
pub const DEFAULT_DT: f64 = 1e-3;
/// Fraction of the estimated collapse time a default window may cover.
const WINDOW_SAFETY: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryReport {
    pub times: Vec<f64>,
    /// Per time: max over pairs of `|r_kj(t)/r_kj(0) − s(t)|`, `s` the
    /// median ratio.
    pub shape_drift: Vec<f64>,
    /// Per time: `|E(t) − E(0)| / |E(0)|`.
    pub energy_rel_drift: Vec<f64>,
    /// Largest entry of `energy_rel_drift`.
    pub energy_drift: f64,
    pub max_linear_momentum: f64,
    pub max_angular_momentum: f64,
    /// Set when two bodies came closer than ten collision tolerances.
    pub halted_early: bool,
}

impl TrajectoryReport {
    pub fn max_shape_drift(&self) -> f64 {
        self.shape_drift.iter().copied().fold(0.0, f64::max)
    }
}

/// Time for a central configuration released from rest to collapse,
/// `(π/2)/√(2λ)` with `λ = U/I`. For other configurations it is only a
/// scale estimate.
pub fn collapse_time(sys: &BodySystem) -> Result<f64> {
    Ok(FRAC_PI_2 / (2.0 * lambda_of(sys)?).sqrt())
}

/// [`DEFAULT_T_END`], shortened to a quarter of the collapse time if needed.
pub fn default_window(sys: &BodySystem) -> Result<f64> {
    Ok(DEFAULT_T_END.min(collapse_time(sys)? / WINDOW_SAFETY))
}

struct State {
    positions: Vec<Vec3>,
    velocities: Vec<Vec3>,
}

/// Integrates `sys` released from rest over `[0, t_end]` with step `dt`.
pub fn integrate_release(sys: &BodySystem, t_end: f64, dt: f64) -> Result<TrajectoryReport> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(crate::error::invalid(
            "t_end",
            format!("must be positive, got {t_end}"),
        ));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(crate::error::invalid(
            "dt",
            format!("must be positive, got {dt}"),
        ));
    }
    let masses: Vec<f64> = sys.bodies().iter().map(|b| b.mass).collect();
    let mut state = State {
        positions: sys.positions().collect(),
        velocities: vec![[0.0; 3]; masses.len()],
    };
    let initial_distances = pair_distances(&state.positions);
    let e0 = -potential(sys)?;

    let mut report = TrajectoryReport {
        times: vec![0.0],
        shape_drift: vec![0.0],
        energy_rel_drift: vec![0.0],
        energy_drift: 0.0,
        max_linear_momentum: 0.0,
        max_angular_momentum: 0.0,
        halted_early: false,
    };

    let mut t = 0.0;
    let mut step = dt;
    while t < t_end * (1.0 - 1e-12) {
        let (next, drift, h) = loop {
            let h = step.min(t_end - t);
            let next = yoshida_step(&state, &masses, h);
            let drift = ((energy(&next, &masses) - e0) / e0).abs();
            if drift <= STEP_ENERGY_TOLERANCE {
                break (next, drift, h);
            }
            step *= 0.5;
            if step < MIN_DT {
                return Err(Error::StepRejected { t, dt: step, drift });
            }
        };
        t += h;
        state = next;

        report.times.push(t);
        report
            .shape_drift
            .push(shape_drift(&state.positions, &initial_distances));
        report.energy_rel_drift.push(drift);
        report.energy_drift = report.energy_drift.max(drift);
        let (p, l) = momenta(&state, &masses);
        report.max_linear_momentum = report.max_linear_momentum.max(p);
        report.max_angular_momentum = report.max_angular_momentum.max(l);

        let bodies: Vec<_> = sys
            .bodies()
            .iter()
            .zip(&state.positions)
            .map(|(b, &position)| crate::Body {
                mass: b.mass,
                position,
            })
            .collect();
        if closest_pair(&bodies).is_some_and(|(_, _, d)| d < 10.0 * COLLISION_TOLERANCE) {
            report.halted_early = true;
            break;
        }
    }
    Ok(report)
}

fn yoshida_step(state: &State, masses: &[f64], dt: f64) -> State {
    let cbrt2 = 2f64.cbrt();
    let w1 = 1.0 / (2.0 - cbrt2);
    let w0 = -cbrt2 / (2.0 - cbrt2);
    let drifts = [w1 / 2.0, (w0 + w1) / 2.0, (w0 + w1) / 2.0, w1 / 2.0];
    let kicks = [w1, w0, w1];

    let mut q = state.positions.clone();
    let mut v = state.velocities.clone();
    for i in 0..4 {
        for (qi, vi) in q.iter_mut().zip(&v) {
            for c in 0..3 {
                qi[c] += drifts[i] * dt * vi[c];
            }
        }
        if i < 3 {
            let acc = accelerations(&q, masses);
            for (vi, ai) in v.iter_mut().zip(&acc) {
                for c in 0..3 {
                    vi[c] += kicks[i] * dt * ai[c];
                }
            }
        }
    }
    State {
        positions: q,
        velocities: v,
    }
}

fn accelerations(q: &[Vec3], masses: &[f64]) -> Vec<Vec3> {
    let mut acc = vec![[0.0; 3]; q.len()];
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            let d = [q[j][0] - q[i][0], q[j][1] - q[i][1], q[j][2] - q[i][2]];
            let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            let inv_r3 = 1.0 / (r2 * r2.sqrt());
            for c in 0..3 {
                acc[i][c] += masses[j] * d[c] * inv_r3;
                acc[j][c] -= masses[i] * d[c] * inv_r3;
            }
        }
    }
    acc
}

fn energy(state: &State, masses: &[f64]) -> f64 {
    let kinetic: f64 = state
        .velocities
        .iter()
        .zip(masses)
        .map(|(v, m)| 0.5 * m * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]))
        .sum();
    let q = &state.positions;
    let mut u = 0.0;
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            let d = [q[j][0] - q[i][0], q[j][1] - q[i][1], q[j][2] - q[i][2]];
            u += masses[i] * masses[j] / (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        }
    }
    kinetic - u
}

fn momenta(state: &State, masses: &[f64]) -> (f64, f64) {
    let mut p = [0.0; 3];
    let mut l = [0.0; 3];
    for ((q, v), m) in state.positions.iter().zip(&state.velocities).zip(masses) {
        for c in 0..3 {
            p[c] += m * v[c];
        }
        l[0] += m * (q[1] * v[2] - q[2] * v[1]);
        l[1] += m * (q[2] * v[0] - q[0] * v[2]);
        l[2] += m * (q[0] * v[1] - q[1] * v[0]);
    }
    let norm = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (norm(p), norm(l))
}

fn pair_distances(q: &[Vec3]) -> Vec<f64> {
    let mut out = Vec::with_capacity(q.len() * q.len().saturating_sub(1) / 2);
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            out.push(crate::geometry::distance(q[i], q[j]));
        }
    }
    out
}

fn shape_drift(q: &[Vec3], initial: &[f64]) -> f64 {
    let mut ratios: Vec<f64> = pair_distances(q)
        .iter()
        .zip(initial)
        .map(|(r, r0)| r / r0)
        .collect();
    if ratios.is_empty() {
        return 0.0;
    }
    ratios.sort_by(f64::total_cmp);
    let mid = ratios.len() / 2;
    let median = if ratios.len().is_multiple_of(2) {
        0.5 * (ratios[mid - 1] + ratios[mid])
    } else {
        ratios[mid]
    };
    ratios
        .iter()
        .map(|r| (r - median).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Body;

    #[test]
    fn two_body_fall_is_homothetic() {
        let sys = BodySystem::new(vec![
            Body {
                mass: 0.7,
                position: [0.0, 0.0, 0.0],
            },
            Body {
                mass: 2.0,
                position: [1.0, 0.5, -0.3],
            },
        ])
        .unwrap();
        let report = integrate_release(&sys, 0.2, 1e-3).unwrap();
        assert!(report.max_shape_drift() < 1e-8);
        assert!(report.energy_drift < 1e-7);
        assert_eq!(report.shape_drift[0], 0.0);
        assert!((report.times.last().unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn non_central_triangle_deforms() {
        let sys = BodySystem::new(vec![
            Body {
                mass: 1.0,
                position: [0.0, 0.0, 0.0],
            },
            Body {
                mass: 1.0,
                position: [1.0, 0.0, 0.0],
            },
            Body {
                mass: 1.0,
                position: [0.0, 2.0, 0.0],
            },
        ])
        .unwrap();
        let report = integrate_release(&sys, 0.3, 1e-3).unwrap();
        assert!(report.max_shape_drift() > 1e-3);
        assert!(report.max_linear_momentum < 1e-12);
    }

    #[test]
    fn rejects_bad_window() {
        let sys = BodySystem::new(vec![
            Body {
                mass: 1.0,
                position: [0.0, 0.0, 0.0],
            },
            Body {
                mass: 1.0,
                position: [1.0, 0.0, 0.0],
            },
        ])
        .unwrap();
        assert!(integrate_release(&sys, 0.0, 1e-3).is_err());
        assert!(integrate_release(&sys, 1.0, -1e-3).is_err());
    }

    #[test]
    fn window_respects_collapse_time() {
        // two unit masses at distance 2: λ = U/I = (1/2)/2
        let sys = BodySystem::new(vec![
            Body {
                mass: 1.0,
                position: [0.0, 0.0, 0.0],
            },
            Body {
                mass: 1.0,
                position: [2.0, 0.0, 0.0],
            },
        ])
        .unwrap();
        let tc = collapse_time(&sys).unwrap();
        assert!((tc - FRAC_PI_2 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(default_window(&sys).unwrap(), 0.2);
        let tight = sys.map_positions(|q| q.map(|c| 0.1 * c)).unwrap();
        assert!(default_window(&tight).unwrap() < 0.2);
    }
}
