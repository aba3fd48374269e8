//! The reduced sums through which the twisted-ring conditions are written:
//!
//! ```text
//! x = Σ_{k=1}^{N−1} (1 − ρ_k)/|1 − ρ_k|³
//! y = Σ_{k=1}^{N} cos(θ_k+θ) / D_k^{3/2}
//! z = Σ_{k=1}^{N} 1 / D_k^{3/2},        D_k = 1 + a² − 2a cos(θ_k+θ) + h²
//! ```
//!
//! `x` is a complex sum whose imaginary part cancels in mirror pairs; its
//! real part also has the closed form `¼ Σ csc(kπ/N)`. `D_k` is evaluated as
//! `(1 − a)² + 4a sin²(φ_k/2) + h²`, which does not cancel near `a = 1`.

use serde::{Deserialize, Serialize};

use crate::angle::{turn, vertex_phase, Twist};
use crate::error::{invalid, Error, Result};
use crate::sum::Neumaier;
use crate::COLLISION_TOLERANCE;

/// Bound on the imaginary part of the `x` sum.
pub const X_IMAG_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelValues {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub a: f64,
    pub h: f64,
    pub theta: f64,
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(invalid(
            "n",
            format!("need at least 2 bodies per ring, got {n}"),
        ))
    } else {
        Ok(())
    }
}

/// Real and imaginary parts of the defining sum for `x`.
pub fn kernel_x_parts(n: usize) -> Result<(f64, f64)> {
    check_n(n)?;
    let n_i = n as i64;
    let mut re = Neumaier::new();
    let mut im = Neumaier::new();
    for k in 1..n_i {
        let (c, s) = turn(k, n_i);
        // 1 − cos written without cancellation for small angles
        let one_minus_c = if c > 0.0 { s * s / (1.0 + c) } else { 1.0 - c };
        let modulus = one_minus_c.hypot(s);
        let cube = modulus * modulus * modulus;
        re.add(one_minus_c / cube);
        im.add(-s / cube);
    }
    Ok((re.value(), im.value()))
}

/// `x` from its defining sum over the roots of unity. Fails if the
/// imaginary part does not cancel.
pub fn kernel_x(n: usize) -> Result<f64> {
    let (re, im) = kernel_x_parts(n)?;
    if im.abs() > X_IMAG_TOLERANCE {
        return Err(Error::NonReal { what: "x", im });
    }
    Ok(re)
}

/// `x` from the closed form `¼ Σ_{k=1}^{N−1} csc(kπ/N)`.
pub fn kernel_x_csc(n: usize) -> Result<f64> {
    check_n(n)?;
    let n_i = n as i64;
    let sum: Neumaier = (1..n_i).map(|k| 1.0 / turn(k, 2 * n_i).1).collect();
    Ok(0.25 * sum.value())
}

/// `(y, z)` at `(N, a, h, θ)`. Any twist is accepted.
pub fn kernel_yz(n: usize, a: f64, h: f64, twist: Twist) -> Result<(f64, f64)> {
    yz_with_sign(n, a, h, twist, 1)
}

/// The same sums with `θ_k − θ` in place of `θ_k + θ`.
pub fn kernel_yz_reflected(n: usize, a: f64, h: f64, twist: Twist) -> Result<(f64, f64)> {
    yz_with_sign(n, a, h, twist, -1)
}

fn yz_with_sign(n: usize, a: f64, h: f64, twist: Twist, sign: i64) -> Result<(f64, f64)> {
    check_n(n)?;
    if !(a.is_finite() && a > 0.0) {
        return Err(invalid(
            "a",
            format!("must be finite and positive, got {a}"),
        ));
    }
    if !(h.is_finite() && h >= 0.0) {
        return Err(invalid(
            "h",
            format!("must be finite and nonnegative, got {h}"),
        ));
    }
    let mut y = Neumaier::new();
    let mut z = Neumaier::new();
    for k in 1..=n {
        let phase = vertex_phase(k, n, twist, sign);
        let d = denominator(a, h, phase.half_sin);
        if d < COLLISION_TOLERANCE * COLLISION_TOLERANCE {
            return Err(Error::Singular { vertex: k });
        }
        let inv = 1.0 / (d * d.sqrt());
        y.add(phase.cos * inv);
        z.add(inv);
    }
    Ok((y.value(), z.value()))
}

/// `1 + a² − 2a cos φ + h²`.
pub(crate) fn denominator(a: f64, h: f64, half_sin: f64) -> f64 {
    let gap = 1.0 - a;
    gap * gap + 4.0 * a * half_sin * half_sin + h * h
}

/// All three kernels at once.
pub fn kernels(n: usize, a: f64, h: f64, twist: Twist) -> Result<KernelValues> {
    let x = kernel_x(n)?;
    let (y, z) = kernel_yz(n, a, h, twist)?;
    Ok(KernelValues {
        x,
        y,
        z,
        n,
        a,
        h,
        theta: twist.canonical(n).radians(n),
    })
}

/// `|Σ cos(θ_k−θ)/[…]^{3/2} − Σ cos(θ_k+θ)/[…]^{3/2}|` for h > 0 and
/// θ ∈ {0, π/N}; other twists are rejected.
pub fn check_theta_symmetry(n: usize, a: f64, h: f64, twist: Twist) -> Result<f64> {
    let twist = twist.canonical(n);
    if !twist.is_admissible(n) {
        return Err(Error::InadmissibleTwist {
            theta: twist.radians(n),
            n,
        });
    }
    if !(h > 0.0) {
        return Err(Error::NotSpatial { h });
    }
    let (plus, _) = kernel_yz(n, a, h, twist)?;
    let (minus, _) = kernel_yz_reflected(n, a, h, twist)?;
    Ok((minus - plus).abs())
}
