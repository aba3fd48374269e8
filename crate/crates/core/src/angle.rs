//! Twist angles and ring vertex phases.
//!
//! Vertex `k` of a ring of `n` sits at `θ_k = 2πk/n`. For the two twist
//! angles that can carry a central configuration, `0` and `π/n`, every
//! phase `θ_k ± θ` is a rational number of turns, so it is reduced to the
//! first octant in integer arithmetic before any trigonometry. That keeps
//! mirror-image vertices exactly antisymmetric and makes the reindexing
//! identities between `θ_k + θ` and `θ_k − θ` hold to rounding.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Rotation of the second ring relative to the first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Twist {
    /// θ = 0: vertices stacked.
    Aligned,
    /// θ = π/N: the second ring sits over the edge midpoints of the first.
    Staggered,
    /// Any other angle, in radians, reduced to [0, 2π).
    Radians(f64),
}

impl Twist {
    /// Twist angle in radians for rings of `n` vertices.
    pub fn radians(self, n: usize) -> f64 {
        match self {
            Twist::Aligned => 0.0,
            Twist::Staggered => PI / n as f64,
            Twist::Radians(t) => t,
        }
    }

    /// Reduces raw radians mod 2π and snaps values within a few ulps of
    /// `0` or `π/n` to the symbolic variants.
    pub fn canonical(self, n: usize) -> Twist {
        let Twist::Radians(t) = self else {
            return self;
        };
        let t = t.rem_euclid(TAU);
        let eps = 4.0 * f64::EPSILON;
        if t <= eps * TAU || TAU - t <= eps * TAU {
            return Twist::Aligned;
        }
        let half_step = PI / n as f64;
        if (t - half_step).abs() <= eps * half_step {
            return Twist::Staggered;
        }
        Twist::Radians(t)
    }

    /// True for the two twists admitting central configurations.
    pub fn is_admissible(self, n: usize) -> bool {
        matches!(self.canonical(n), Twist::Aligned | Twist::Staggered)
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Twist::Aligned => f.write_str("0"),
            Twist::Staggered => f.write_str("pi-over-n"),
            Twist::Radians(t) => write!(f, "{t}"),
        }
    }
}

impl std::str::FromStr for Twist {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" => Ok(Twist::Aligned),
            "pi-over-n" | "pi/n" => Ok(Twist::Staggered),
            other => other
                .parse::<f64>()
                .map_err(|_| format!("expected `0`, `pi-over-n` or radians, got `{other}`"))
                .and_then(|t| {
                    if t.is_finite() {
                        Ok(Twist::Radians(t))
                    } else {
                        Err(format!("twist angle must be finite, got `{other}`"))
                    }
                }),
        }
    }
}

impl Serialize for Twist {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Twist::Aligned => serializer.serialize_str("0"),
            Twist::Staggered => serializer.serialize_str("pi-over-n"),
            Twist::Radians(t) => serializer.serialize_f64(*t),
        }
    }
}

impl<'de> Deserialize<'de> for Twist {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Symbol(String),
            Radians(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Symbol(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Radians(t) => Ok(Twist::Radians(t)),
        }
    }
}

/// `(cos, sin)` of the angle `2π·num/den`, reduced exactly to the first
/// octant before evaluation.
pub fn turn(num: i64, den: i64) -> (f64, f64) {
    assert!(den > 0, "turn denominator must be positive");
    let n = num.rem_euclid(den) as i128;
    let den = den as i128;
    let quarters = 4 * n;
    let quadrant = quarters / den;
    let r = quarters % den;
    // angle inside the quadrant is (π/2)·r/den
    let (s, c) = if 2 * r == den {
        (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
    } else if 2 * r > den {
        let (s0, c0) = (FRAC_PI_2 * (den - r) as f64 / den as f64).sin_cos();
        (c0, s0)
    } else {
        (FRAC_PI_2 * r as f64 / den as f64).sin_cos()
    };
    match quadrant {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}

/// Trigonometric data of one phase `φ = θ_k + sign·θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Phase {
    pub cos: f64,
    pub sin: f64,
    /// `sin(φ/2)`, for the cancellation-free form
    /// `1 + a² − 2a cos φ = (1 − a)² + 4a sin²(φ/2)`.
    pub half_sin: f64,
}

/// Phase of vertex `k` of an `n`-ring shifted by `sign·θ` (`sign` is ±1,
/// or 0 for the bare vertex angle).
pub fn vertex_phase(k: usize, n: usize, twist: Twist, sign: i64) -> Phase {
    let k = k as i64;
    let n_i = n as i64;
    match twist.canonical(n) {
        Twist::Aligned => rational_phase(k, n_i),
        Twist::Staggered => rational_phase(2 * k + sign, 2 * n_i),
        Twist::Radians(t) => {
            let t = sign as f64 * t;
            let (ck, sk) = turn(k, n_i);
            let (st, ct) = t.sin_cos();
            let (ch, sh) = turn(k, 2 * n_i);
            let (st2, ct2) = (0.5 * t).sin_cos();
            Phase {
                cos: ck * ct - sk * st,
                sin: sk * ct + ck * st,
                half_sin: sh * ct2 + ch * st2,
            }
        }
    }
}

/// Phase of `2π·num/den`.
fn rational_phase(num: i64, den: i64) -> Phase {
    let (cos, sin) = turn(num, den);
    let (_, half_sin) = turn(num, 2 * den);
    Phase { cos, sin, half_sin }
}
