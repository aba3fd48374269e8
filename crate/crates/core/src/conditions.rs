//! Reduced central-configuration conditions for the twisted double polygon.
//!
//! Two equivalent forms are evaluated:
//!
//! * the kernel pair `b·a·y = x − z` and `(b/a²)·x − b·a·z = y`;
//! * three complex expressions for `λN/M`: the horizontal balance on a
//!   first-ring body, the vertical balance (manifestly real, equal to `z`),
//!   and the horizontal balance on a second-ring body. The first and third
//!   are compared against the second.
//!
//! Both forms assume a spatial configuration (`h > 0`) with twist `0` or
//! `π/N`; other twists are rejected since they carry no central
//! configurations.
//!
//! The complex expressions are evaluated literally, with moduli computed
//! from the complex differences, so they form an independent route from
//! the kernel pair.

use serde::{Deserialize, Serialize};

use crate::angle::{turn, vertex_phase, Twist};
use crate::error::{Error, Result};
use crate::geometry::{build_configuration, TwistedPolygonParams};
use crate::kernels::{kernel_x_parts, kernel_yz};
use crate::newtonian::cc_residual;
use crate::sum::Neumaier;

/// Complex number as `[re, im]`.
pub type Pair = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionResidual {
    /// `[b·a·y − (x − z), (b/a²)·x − b·a·z − y]`.
    pub kernel_pair: [f64; 2],
    /// Each of the three `λN/M` expressions minus the real anchor.
    pub complex_forms: [Pair; 3],
    pub norm: f64,
}

/// Rejects flat configurations and inadmissible twists.
fn gate(params: &TwistedPolygonParams) -> Result<()> {
    if !(params.h() > 0.0) {
        return Err(Error::NotSpatial { h: params.h() });
    }
    if !params.twist().is_admissible(params.n()) {
        return Err(Error::InadmissibleTwist {
            theta: params.theta(),
            n: params.n(),
        });
    }
    Ok(())
}

/// Residuals of `b·a·y = x − z` and `(b/a²)·x − b·a·z = y`.
pub fn kernel_pair_residual(params: &TwistedPolygonParams) -> Result<[f64; 2]> {
    gate(params)?;
    let (x, _) = kernel_x_parts(params.n())?;
    let (y, z) = kernel_yz(params.n(), params.a(), params.h(), params.twist())?;
    let (a, b) = (params.a(), params.b());
    Ok([b * a * y - (x - z), b / (a * a) * x - b * a * z - y])
}

/// `√(r₁² + r₂²)` of [`kernel_pair_residual`].
pub fn joint_residual(params: &TwistedPolygonParams) -> Result<f64> {
    let [r1, r2] = kernel_pair_residual(params)?;
    Ok(r1.hypot(r2))
}

/// The three complex expressions for `λN/M`, evaluated literally.
pub fn complex_form_values(params: &TwistedPolygonParams) -> Result<[Pair; 3]> {
    gate(params)?;
    let n = params.n();
    let (a, b, h) = (params.a(), params.b(), params.h());
    let twist = params.twist();
    let x = kernel_x_parts(n)?;
    let h2 = h * h;

    // Σ b(1 − a e^{iθ} ρ_k) / [|1 − a e^{iθ} ρ_k|² + h²]^{3/2}
    let mut lower_re = Neumaier::new();
    let mut lower_im = Neumaier::new();
    // Σ 1 / [|1 − a e^{iθ} ρ_k|² + h²]^{3/2}
    let mut vertical = Neumaier::new();
    for k in 1..=n {
        let p = vertex_phase(k, n, twist, 1);
        let w = [1.0 - a * p.cos, -a * p.sin];
        let d = w[0] * w[0] + w[1] * w[1] + h2;
        let inv = 1.0 / (d * d.sqrt());
        lower_re.add(b * w[0] * inv);
        lower_im.add(b * w[1] * inv);
        vertical.add(inv);
    }
    let first_ring = [
        (x.0 + lower_re.value()) / (1.0 + b),
        (x.1 + lower_im.value()) / (1.0 + b),
    ];
    let vertical_form = [vertical.value(), 0.0];

    // e^{−iθ}/(a(1+b)) · ( b e^{iθ} x / a² + Σ (a e^{iθ} − ρ_k)/[|a e^{iθ} − ρ_k|² + h²]^{3/2} )
    let e_theta = twist_unit(twist, n);
    let mut upper_re = Neumaier::new();
    let mut upper_im = Neumaier::new();
    for k in 1..=n {
        let p = vertex_phase(k, n, Twist::Aligned, 0);
        let w = [a * e_theta[0] - p.cos, a * e_theta[1] - p.sin];
        let d = w[0] * w[0] + w[1] * w[1] + h2;
        let inv = 1.0 / (d * d.sqrt());
        upper_re.add(w[0] * inv);
        upper_im.add(w[1] * inv);
    }
    let self_term = mul(e_theta, [b * x.0 / (a * a), b * x.1 / (a * a)]);
    let bracket = [
        self_term[0] + upper_re.value(),
        self_term[1] + upper_im.value(),
    ];
    let conj = [e_theta[0], -e_theta[1]];
    let scale = 1.0 / (a * (1.0 + b));
    let rotated = mul(conj, bracket);
    let second_ring = [scale * rotated[0], scale * rotated[1]];

    Ok([first_ring, vertical_form, second_ring])
}

/// `λN/M`, taken from the vertical balance.
pub fn lambda_scaled(params: &TwistedPolygonParams) -> Result<f64> {
    Ok(complex_form_values(params)?[1][0])
}

/// Each `λN/M` expression minus the real anchor from the vertical balance.
pub fn complex_form_residual(params: &TwistedPolygonParams) -> Result<[Pair; 3]> {
    let values = complex_form_values(params)?;
    let anchor = values[1][0];
    Ok(values.map(|v| [v[0] - anchor, v[1]]))
}

/// Both residual families with their max-abs norm.
pub fn condition_residual(params: &TwistedPolygonParams) -> Result<ConditionResidual> {
    let kernel_pair = kernel_pair_residual(params)?;
    let complex_forms = complex_form_residual(params)?;
    let norm = kernel_pair
        .iter()
        .chain(complex_forms.iter().flatten())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    Ok(ConditionResidual {
        kernel_pair,
        complex_forms,
        norm,
    })
}

/// `y − (x − a·b·z)`. Coincides with the first kernel condition when
/// `a = b = 1`.
pub fn derived_identity_residual(params: &TwistedPolygonParams) -> Result<f64> {
    gate(params)?;
    let (x, _) = kernel_x_parts(params.n())?;
    let (y, z) = kernel_yz(params.n(), params.a(), params.h(), params.twist())?;
    Ok(y - (x - params.a() * params.b() * z))
}

/// Tolerance on the full per-body residual matching a tolerance on the
/// reduced (unit-mass, unit-radius) conditions: `tol · m² · max(1, b)`.
pub fn definition_tolerance(tol: f64, params: &TwistedPolygonParams) -> f64 {
    tol * params.m() * params.m() * params.b().max(1.0)
}

/// Reduced and full residuals of one parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Verdicts {
    /// Max-abs of the kernel-pair residual.
    pub reduced: f64,
    /// Full residual divided by `m² · max(1, b)`.
    pub full_scaled: f64,
}

impl Verdicts {
    pub fn evaluate(params: &TwistedPolygonParams) -> Result<Self> {
        let [r1, r2] = kernel_pair_residual(params)?;
        let report = cc_residual(&build_configuration(params)?, 0.0)?;
        Ok(Self {
            reduced: r1.abs().max(r2.abs()),
            full_scaled: report.max_residual / definition_tolerance(1.0, params),
        })
    }

    pub fn agree(&self, reduced_tol: f64, full_tol: f64) -> bool {
        (self.reduced < reduced_tol) == (self.full_scaled < full_tol)
    }

    /// True when either residual lies in `[lo, hi]`, where a verdict is
    /// decided by rounding rather than by the configuration.
    pub fn in_band(&self, lo: f64, hi: f64) -> bool {
        let inside = |v: f64| (lo..=hi).contains(&v);
        inside(self.reduced) || inside(self.full_scaled)
    }
}

/// Whether the kernel conditions and the full residual give the same
/// verdict at tolerance `tol` (rescaled for the full residual).
pub fn cross_validate(params: &TwistedPolygonParams, tol: f64) -> Result<bool> {
    Ok(Verdicts::evaluate(params)?.agree(tol, tol))
}

fn twist_unit(twist: Twist, n: usize) -> Pair {
    match twist.canonical(n) {
        Twist::Aligned => [1.0, 0.0],
        Twist::Staggered => {
            let (c, s) = turn(1, 2 * n as i64);
            [c, s]
        }
        Twist::Radians(t) => [t.cos(), t.sin()],
    }
}

fn mul(p: Pair, q: Pair) -> Pair {
    [p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0]]
}
