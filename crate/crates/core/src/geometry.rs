//! Parameters of the twisted double polygon and the explicit body system.

use serde::{Deserialize, Serialize};

use crate::angle::{vertex_phase, Twist};
use crate::error::{invalid, Error, Result};
use crate::sum::{Neumaier, Neumaier3};
use crate::{Vec3, COLLISION_TOLERANCE};

/// `(N, a, b, h, θ, m)`: ring size, size ratio, mass ratio, height, twist
/// and base mass of the first ring.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct TwistedPolygonParams {
    n: usize,
    a: f64,
    b: f64,
    h: f64,
    twist: Twist,
    m: f64,
}

#[derive(Deserialize)]
struct RawParams {
    n: usize,
    a: f64,
    b: f64,
    h: f64,
    twist: Twist,
    #[serde(default = "unit_mass")]
    m: f64,
}

fn unit_mass() -> f64 {
    1.0
}

impl TryFrom<RawParams> for TwistedPolygonParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        TwistedPolygonParams::with_mass(raw.n, raw.a, raw.b, raw.h, raw.twist, raw.m)
    }
}

impl TwistedPolygonParams {
    /// Parameters with unit base mass.
    pub fn new(n: usize, a: f64, b: f64, h: f64, twist: Twist) -> Result<Self> {
        Self::with_mass(n, a, b, h, twist, 1.0)
    }

    pub fn with_mass(n: usize, a: f64, b: f64, h: f64, twist: Twist, m: f64) -> Result<Self> {
        if n < 2 {
            return Err(invalid(
                "n",
                format!("need at least 2 bodies per ring, got {n}"),
            ));
        }
        positive("a", a)?;
        positive("b", b)?;
        positive("m", m)?;
        if !(h.is_finite() && h >= 0.0) {
            return Err(invalid(
                "h",
                format!("must be finite and nonnegative, got {h}"),
            ));
        }
        Ok(Self {
            n,
            a,
            b,
            h,
            twist: twist.canonical(n),
            m,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn twist(&self) -> Twist {
        self.twist
    }

    /// Twist angle in radians, in [0, 2π).
    pub fn theta(&self) -> f64 {
        self.twist.radians(self.n)
    }

    /// Total mass `M = N·m·(1 + b)`.
    pub fn total_mass(&self) -> f64 {
        self.n as f64 * self.m * (1.0 + self.b)
    }

    pub fn with_h(self, h: f64) -> Result<Self> {
        Self::with_mass(self.n, self.a, self.b, h, self.twist, self.m)
    }

    pub fn with_twist(self, twist: Twist) -> Result<Self> {
        Self::with_mass(self.n, self.a, self.b, self.h, twist, self.m)
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(
            name,
            format!("must be finite and positive, got {v}"),
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Body {
    pub mass: f64,
    pub position: Vec3,
}

/// A validated set of point masses: positive masses, finite positions,
/// pairwise distances at least [`COLLISION_TOLERANCE`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem")]
pub struct BodySystem {
    bodies: Vec<Body>,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<TwistedPolygonParams>,
}

#[derive(Deserialize)]
struct RawSystem {
    bodies: Vec<Body>,
    #[serde(default)]
    meta: Option<TwistedPolygonParams>,
}

impl TryFrom<RawSystem> for BodySystem {
    type Error = Error;

    fn try_from(raw: RawSystem) -> Result<Self> {
        let mut sys = BodySystem::new(raw.bodies)?;
        sys.meta = raw.meta;
        Ok(sys)
    }
}

impl BodySystem {
    pub fn new(bodies: Vec<Body>) -> Result<Self> {
        if bodies.is_empty() {
            return Err(invalid("bodies", "system has no bodies"));
        }
        for (i, body) in bodies.iter().enumerate() {
            if !(body.mass.is_finite() && body.mass > 0.0) {
                return Err(invalid("mass", format!("body {i} has mass {}", body.mass)));
            }
            if body.position.iter().any(|c| !c.is_finite()) {
                return Err(invalid(
                    "position",
                    format!("body {i} has a non-finite coordinate"),
                ));
            }
        }
        if let Some((first, second, distance)) = closest_pair(&bodies) {
            if distance < COLLISION_TOLERANCE {
                return Err(Error::Collision {
                    first,
                    second,
                    distance,
                });
            }
        }
        Ok(Self { bodies, meta: None })
    }

    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    /// Parameters the system was built from, when known.
    pub fn meta(&self) -> Option<&TwistedPolygonParams> {
        self.meta.as_ref()
    }

    pub fn positions(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.bodies.iter().map(|b| b.position)
    }

    /// Same masses, positions mapped through `f`.
    pub fn map_positions(&self, f: impl Fn(Vec3) -> Vec3) -> Result<Self> {
        BodySystem::new(
            self.bodies
                .iter()
                .map(|b| Body {
                    mass: b.mass,
                    position: f(b.position),
                })
                .collect(),
        )
    }
}

/// Indices and distance of the closest pair, or `None` for a single body.
pub fn closest_pair(bodies: &[Body]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..bodies.len() {
        for j in i + 1..bodies.len() {
            let d = distance(bodies[i].position, bodies[j].position);
            if best.is_none_or(|(_, _, bd)| d < bd) {
                best = Some((i, j, d));
            }
        }
    }
    best
}

pub(crate) fn distance(p: Vec3, q: Vec3) -> f64 {
    let d = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// Builds the 2N bodies: `k = 1..N` at `(cos θ_k, sin θ_k, 0)` with mass
/// `m`, then `N + k` at `(a cos(θ_k+θ), a sin(θ_k+θ), h)` with mass `b·m`.
pub fn build_configuration(params: &TwistedPolygonParams) -> Result<BodySystem> {
    let n = params.n;
    let lower = (1..=n).map(|k| {
        let p = vertex_phase(k, n, Twist::Aligned, 0);
        Body {
            mass: params.m,
            position: [p.cos, p.sin, 0.0],
        }
    });
    let upper = (1..=n).map(|k| {
        let p = vertex_phase(k, n, params.twist, 1);
        Body {
            mass: params.b * params.m,
            position: [params.a * p.cos, params.a * p.sin, params.h],
        }
    });
    let mut sys = BodySystem::new(lower.chain(upper).collect())?;
    sys.meta = Some(*params);
    Ok(sys)
}

/// Center of mass `c₀ = (1/M) Σ m_k q_k` together with the total mass `M`.
pub fn center_of_mass(sys: &BodySystem) -> (Vec3, f64) {
    let mut weighted = Neumaier3::new();
    let mut total = Neumaier::new();
    for body in &sys.bodies {
        weighted.add(body.position.map(|c| body.mass * c));
        total.add(body.mass);
    }
    let total = total.value();
    (weighted.value().map(|c| c / total), total)
}
