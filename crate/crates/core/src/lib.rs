//! Spatial central configurations formed by two twisted regular N-gons.
//!
//! Two parallel rings of N point masses: the first on the unit circle at
//! height 0 with mass `m`, the second scaled by `a`, rotated by the twist
//! angle `θ`, lifted to height `h` and carrying mass `b·m`. The crate
//!
//! - builds the explicit 2N-body configuration ([`geometry`]),
//! - evaluates the full Newtonian central-configuration residual with
//!   `λ = U/I` ([`newtonian`]),
//! - evaluates the reduced kernels `x, y, z` ([`kernels`]) and the reduced
//!   conditions built from them ([`conditions`]),
//! - solves for the inter-ring height in the equal case and scans for
//!   unequal-size solutions ([`solver`]),
//! - integrates a release from rest as a dynamics-level check ([`collapse`]).
//!
//! Units are normalized: first-ring circumradius 1, gravitational constant 1.

pub mod angle;
pub mod cli;
pub mod collapse;
pub mod conditions;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod newtonian;
pub mod solver;
pub mod sum;

pub use angle::Twist;
pub use error::{Error, Result};
pub use geometry::{build_configuration, center_of_mass, Body, BodySystem, TwistedPolygonParams};

/// Three-vector used for positions, velocities and residuals.
pub type Vec3 = [f64; 3];

/// Minimum pairwise distance below which two bodies count as coincident.
pub const COLLISION_TOLERANCE: f64 = 1e-9;
