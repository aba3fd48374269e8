//! Potential, moment of inertia and the central-configuration residual of
//! an arbitrary body system.
//!
//! A configuration is central when, for every body `k`,
//!
//! ```text
//! Σ_{j≠k} m_j m_k (q_j − q_k)/|q_j − q_k|³ = −λ m_k (q_k − c₀),   λ = U/I.
//! ```
//!
//! `λ` is never fitted: it is always `U/I` of the configuration itself, so
//! the residual is a function of the configuration alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{center_of_mass, distance, BodySystem};
use crate::sum::{Neumaier, Neumaier3};
use crate::{Vec3, COLLISION_TOLERANCE};

/// Default tolerance on the ∞-norm residual for calling a system central.
pub const DEFAULT_CC_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CCReport {
    pub lambda: f64,
    pub max_residual: f64,
    pub is_central: bool,
    pub tolerance: f64,
    pub residuals: Vec<Vec3>,
}

/// `U = Σ_{k<j} m_j m_k / r_kj`, the negative of the Newtonian potential.
pub fn potential(sys: &BodySystem) -> Result<f64> {
    let bodies = sys.bodies();
    let mut acc = Neumaier::new();
    for k in 0..bodies.len() {
        for j in k + 1..bodies.len() {
            let r = checked_distance(sys, k, j)?;
            acc.add(bodies[k].mass * bodies[j].mass / r);
        }
    }
    Ok(acc.value())
}

/// `I = Σ m_k |q_k − c₀|²`.
pub fn moment_of_inertia(sys: &BodySystem) -> f64 {
    let (c0, _) = center_of_mass(sys);
    sys.bodies()
        .iter()
        .map(|b| {
            let d = sub(b.position, c0);
            b.mass * dot(d, d)
        })
        .collect::<Neumaier>()
        .value()
}

/// `λ = U/I`.
pub fn lambda_of(sys: &BodySystem) -> Result<f64> {
    let u = potential(sys)?;
    Ok(u / moment_of_inertia(sys))
}

/// Per-body residual of the central-configuration equations.
pub fn cc_residual(sys: &BodySystem, tolerance: f64) -> Result<CCReport> {
    let lambda = lambda_of(sys)?;
    let (c0, _) = center_of_mass(sys);
    let bodies = sys.bodies();
    let mut residuals = Vec::with_capacity(bodies.len());
    for (k, body) in bodies.iter().enumerate() {
        let mut acc = Neumaier3::new();
        for (j, other) in bodies.iter().enumerate() {
            if j == k {
                continue;
            }
            let r = checked_distance(sys, k, j)?;
            let d = sub(other.position, body.position);
            let scale = other.mass * body.mass / (r * r * r);
            acc.add(d.map(|c| scale * c));
        }
        let offset = sub(body.position, c0);
        acc.add(offset.map(|c| lambda * body.mass * c));
        residuals.push(acc.value());
    }
    let max_residual = residuals
        .iter()
        .flatten()
        .fold(0.0_f64, |m, c| m.max(c.abs()));
    Ok(CCReport {
        lambda,
        max_residual,
        is_central: max_residual <= tolerance,
        tolerance,
        residuals,
    })
}

fn checked_distance(sys: &BodySystem, k: usize, j: usize) -> Result<f64> {
    let bodies = sys.bodies();
    let r = distance(bodies[k].position, bodies[j].position);
    if r < COLLISION_TOLERANCE {
        return Err(Error::Collision {
            first: k.min(j),
            second: k.max(j),
            distance: r,
        });
    }
    Ok(r)
}

fn sub(p: Vec3, q: Vec3) -> Vec3 {
    [p[0] - q[0], p[1] - q[1], p[2] - q[2]]
}

fn dot(p: Vec3, q: Vec3) -> f64 {
    p[0] * q[0] + p[1] * q[1] + p[2] * q[2]
}
