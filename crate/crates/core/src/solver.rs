//! Height solve in the equal case and residual scans over `(a, b, h)`.
//!
//! With `a = b = 1` both kernel conditions collapse to
//! `f(h) = x − z(h) − y(h) = 0`. Since `z + y = Σ (1 + cos φ_k)/D_k^{3/2}`
//! decreases term by term in `h`, `f` is increasing and tends to `x > 0`,
//! so a sign change in a bracket pins the unique root.
//!
//! For unequal rings the two conditions are scanned over a grid of `(a, b)`
//! cells, recording the smallest joint residual over `h` in each cell.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::Twist;
use crate::conditions::joint_residual;
use crate::error::{invalid, Error, Result};
use crate::geometry::{build_configuration, TwistedPolygonParams};
use crate::kernels::{check_theta_symmetry, kernel_x, kernel_x_csc, kernel_yz};
use crate::newtonian::lambda_of;

/// Initial bracket for the height solve.
pub const INITIAL_BRACKET: (f64, f64) = (1e-3, 1.0);
/// Largest height tried before reporting that no root exists.
pub const H_MAX: f64 = 1e3;
/// Final bracket width of the bisection.
pub const BISECTION_WIDTH: f64 = 1e-14;
/// Half-width of the band around `a = 1` and `b = 1` left out of scans.
pub const DEFAULT_EXCLUSION: f64 = 0.05;
/// Empirical lower bound expected of every scan cell's minimum residual.
pub const DEFAULT_SCAN_FLOOR: f64 = 1e-4;

/// `f(h) = x − z(h) − y(h)` at `a = b = 1`.
pub fn equal_case_residual(n: usize, twist: Twist, h: f64) -> Result<f64> {
    let x = kernel_x(n)?;
    let (y, z) = kernel_yz(n, 1.0, h, twist)?;
    Ok(x - z - y)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub h_root: f64,
    pub lambda: f64,
    /// Bracket handed to the bisection; `f` changes sign across it.
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub residual_at_root: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoRoot {
    pub n: usize,
    pub theta: f64,
    pub reason: String,
    pub h_lo: f64,
    pub f_lo: f64,
    pub h_hi: f64,
    pub f_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SolveOutcome {
    Root(SolveResult),
    NoRoot(NoRoot),
}

impl SolveOutcome {
    pub fn root(&self) -> Option<&SolveResult> {
        match self {
            SolveOutcome::Root(r) => Some(r),
            SolveOutcome::NoRoot(_) => None,
        }
    }
}

/// Solves `f(h) = 0` starting from [`INITIAL_BRACKET`].
pub fn solve_h(n: usize, twist: Twist) -> Result<SolveOutcome> {
    solve_h_from(n, twist, INITIAL_BRACKET)
}

/// Solves `f(h) = 0`, doubling the upper end of `start` until `f` turns
/// positive or [`H_MAX`] is passed.
pub fn solve_h_from(n: usize, twist: Twist, start: (f64, f64)) -> Result<SolveOutcome> {
    let twist = twist.canonical(n);
    if !twist.is_admissible(n) {
        return Err(Error::InadmissibleTwist {
            theta: twist.radians(n),
            n,
        });
    }
    let (mut lo, mut hi) = start;
    if !(lo > 0.0 && hi > lo) {
        return Err(invalid(
            "bracket",
            format!("need 0 < lo < hi, got ({lo}, {hi})"),
        ));
    }
    let f = |h: f64| equal_case_residual(n, twist, h);
    let no_root = |reason: &str, lo: f64, f_lo: f64, hi: f64, f_hi: f64| {
        SolveOutcome::NoRoot(NoRoot {
            n,
            theta: twist.radians(n),
            reason: reason.to_string(),
            h_lo: lo,
            f_lo,
            h_hi: hi,
            f_hi,
        })
    };

    let f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo >= 0.0 {
        return Ok(no_root(
            "f is nonnegative at the lower end",
            lo,
            f_lo,
            hi,
            f_hi,
        ));
    }
    while f_hi < 0.0 {
        if hi >= H_MAX {
            return Ok(no_root("no sign change below H_MAX", lo, f_lo, hi, f_hi));
        }
        lo = hi;
        hi = (2.0 * hi).min(H_MAX);
        f_hi = f(hi)?;
    }
    let bracket = (lo, hi);
    let (h_root, iterations) = bisect(f, lo, hi, BISECTION_WIDTH)?;
    let residual_at_root = f(h_root)?.abs();
    let params = TwistedPolygonParams::new(n, 1.0, 1.0, h_root, twist)?;
    let lambda = lambda_of(&build_configuration(&params)?)?;
    Ok(SolveOutcome::Root(SolveResult {
        h_root,
        lambda,
        bracket,
        iterations,
        residual_at_root,
    }))
}

/// Bisection on `[lo, hi]` with `f(lo) < 0 ≤ f(hi)` down to `width`, or
/// until the midpoint stops moving. Returns the endpoint with the smaller
/// `|f|` and the iteration count.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, width: f64) -> Result<(f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    let mut iterations = 0;
    while hi - lo > width {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f_mid = f(mid)?;
        if f_mid < 0.0 {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok((if f_lo.abs() <= f_hi.abs() { lo } else { hi }, iterations))
}

/// Number of strict sign changes of `f` over `points`, zeros skipped.
pub fn count_sign_changes(values: impl IntoIterator<Item = f64>) -> usize {
    let mut last = 0.0_f64;
    let mut changes = 0;
    for v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// Evaluates `f` on a geometric grid over `[h_lo, h_hi]`.
pub fn equal_case_profile(n: usize, twist: Twist, grid: &Grid) -> Result<Vec<(f64, f64)>> {
    grid.points()
        .into_iter()
        .map(|h| equal_case_residual(n, twist, h).map(|f| (h, f)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Linear,
    Geometric,
}

/// `steps` points from `lo` to `hi` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn linear(lo: f64, hi: f64, steps: usize) -> Self {
        Self {
            lo,
            hi,
            steps,
            spacing: Spacing::Linear,
        }
    }

    pub fn geometric(lo: f64, hi: f64, steps: usize) -> Self {
        Self {
            lo,
            hi,
            steps,
            spacing: Spacing::Geometric,
        }
    }

    pub fn with_spacing(self, spacing: Spacing) -> Self {
        Self { spacing, ..self }
    }

    pub fn validate(&self, name: &'static str) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::EmptyGrid(name));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi) {
            return Err(invalid(
                name,
                format!("need lo <= hi, got {}:{}", self.lo, self.hi),
            ));
        }
        if self.spacing == Spacing::Geometric && !(self.lo > 0.0) {
            return Err(invalid(name, "geometric grid needs lo > 0"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    return self.hi;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.lo + t * (self.hi - self.lo),
                    Spacing::Geometric => self.lo * (self.hi / self.lo).powf(t),
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    /// `lo:hi:steps`, linear spacing.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(format!("expected lo:hi:steps, got `{s}`"));
        };
        let lo: f64 = lo.parse().map_err(|e| format!("bad lo `{lo}`: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("bad hi `{hi}`: {e}"))?;
        let steps: usize = steps
            .parse()
            .map_err(|e| format!("bad steps `{steps}`: {e}"))?;
        Ok(Grid::linear(lo, hi, steps))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub a: f64,
    pub b: f64,
    pub min_residual_over_h: f64,
    pub argmin_h: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub n: usize,
    pub twist: Twist,
    pub a_grid: Grid,
    pub b_grid: Grid,
    pub h_grid: Grid,
    /// Grid values with `|a − 1| < exclusion` or `|b − 1| < exclusion`
    /// are dropped.
    pub exclusion: f64,
}

impl ScanSpec {
    pub fn new(n: usize, twist: Twist, a_grid: Grid, b_grid: Grid, h_grid: Grid) -> Self {
        Self {
            n,
            twist,
            a_grid,
            b_grid,
            h_grid,
            exclusion: DEFAULT_EXCLUSION,
        }
    }

    pub fn with_exclusion(self, exclusion: f64) -> Self {
        Self { exclusion, ..self }
    }

    /// `(a, b)` pairs scanned, `a` outer.
    pub fn cells(&self) -> Vec<(f64, f64)> {
        let keep = |v: &f64| (v - 1.0).abs() >= self.exclusion;
        let a_pts: Vec<f64> = self.a_grid.points().into_iter().filter(keep).collect();
        let b_pts: Vec<f64> = self.b_grid.points().into_iter().filter(keep).collect();
        a_pts
            .iter()
            .flat_map(|&a| b_pts.iter().map(move |&b| (a, b)))
            .collect()
    }
}

/// Minimum joint kernel residual over `h` for every `(a, b)` cell.
///
/// Each cell is scanned on `h_grid`, then refined by golden-section search
/// between the neighbours of the coarse minimum. Cells run in parallel on
/// the current rayon pool; output order follows [`ScanSpec::cells`].
pub fn certify_no_solution(spec: &ScanSpec) -> Result<Vec<ScanCell>> {
    if spec.n < 3 {
        return Err(invalid("n", format!("scan needs N >= 3, got {}", spec.n)));
    }
    spec.a_grid.validate("a_grid")?;
    spec.b_grid.validate("b_grid")?;
    spec.h_grid.validate("h_grid")?;
    if !(spec.h_grid.lo > 0.0) {
        return Err(invalid("h_grid", "heights must be positive"));
    }
    let cells = spec.cells();
    if cells.is_empty() {
        return Err(Error::EmptyGrid("no (a, b) cell survives the exclusion"));
    }
    let heights = spec.h_grid.points();
    cells
        .par_iter()
        .map(|&(a, b)| {
            let params = TwistedPolygonParams::new(spec.n, a, b, heights[0], spec.twist)?;
            let (argmin_h, min_residual_over_h) = minimize_over_h(&params, &heights)?;
            Ok(ScanCell {
                a,
                b,
                min_residual_over_h,
                argmin_h,
            })
        })
        .collect()
}

/// Coarse grid minimum of the joint residual, refined locally.
pub fn minimize_over_h(params: &TwistedPolygonParams, heights: &[f64]) -> Result<(f64, f64)> {
    let f = |h: f64| joint_residual(&params.with_h(h)?);
    let mut best = (heights[0], f64::INFINITY);
    let mut best_index = 0;
    for (i, &h) in heights.iter().enumerate() {
        let r = f(h)?;
        if r < best.1 {
            best = (h, r);
            best_index = i;
        }
    }
    if heights.len() < 2 {
        return Ok(best);
    }
    let lo = heights[best_index.saturating_sub(1)];
    let hi = heights[(best_index + 1).min(heights.len() - 1)];
    let refined = golden_section(f, lo, hi, 1e-13)?;
    Ok(if refined.1 < best.1 { refined } else { best })
}

/// Golden-section search for a minimum on `[lo, hi]`; returns the best
/// point seen.
pub fn golden_section<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    while hi - lo > tol * (1.0 + lo.abs()) {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c)?;
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d)?;
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}

/// Outcome of the randomized and scanned property checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: usize,
    pub n_max: usize,
    /// Draws with `y ≤ 0` (N ≥ 3, h > 0, θ ∈ {0, π/N}).
    pub positivity_violations: usize,
    /// Draws with `z ≤ y`.
    pub ordering_violations: usize,
    pub x_min: f64,
    /// Largest relative gap between the two evaluations of `x`.
    pub x_max_rel_discrepancy: f64,
    /// Largest `θ_k ± θ` reindexing discrepancy seen.
    pub symmetry_max_discrepancy: f64,
    /// Smallest joint residual over `h` at `b = 1`, `a ∈ [0.1, 0.95]`.
    pub equal_mass_min_residual: f64,
    pub equal_mass_floor: f64,
    pub counterexamples: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Tolerance on the relative gap between the two evaluations of `x`.
pub const X_DUAL_TOLERANCE: f64 = 1e-14;
/// Tolerance on the reindexing symmetry.
pub const SYMMETRY_TOLERANCE: f64 = 1e-13;

/// Randomized checks of the kernel properties plus the `b = 1` scan.
pub fn step_property_suite(n_max: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    if n_max < 3 {
        return Err(invalid("n_max", format!("need n_max >= 3, got {n_max}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counterexamples = Vec::new();
    let pick_twist = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.5) {
            Twist::Aligned
        } else {
            Twist::Staggered
        }
    };
    let log_uniform = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
        (lo.ln() + rng.random::<f64>() * (hi / lo).ln()).exp()
    };
    // (0, 10]
    let height = |rng: &mut ChaCha8Rng| 10.0 * (1.0 - rng.random::<f64>());

    let mut positivity_violations = 0;
    let mut symmetry_max_discrepancy = 0.0_f64;
    for _ in 0..samples {
        let n = rng.random_range(3..=n_max);
        let a = log_uniform(&mut rng, 0.05, 20.0);
        let h = height(&mut rng);
        let twist = pick_twist(&mut rng);
        let (y, _) = kernel_yz(n, a, h, twist)?;
        if !(y > 0.0) {
            positivity_violations += 1;
            counterexamples.push(format!("y = {y:e} at N={n} a={a} h={h} theta={twist}"));
        }
        let gap = check_theta_symmetry(n, a, h, twist)?;
        symmetry_max_discrepancy = symmetry_max_discrepancy.max(gap);
        if gap >= SYMMETRY_TOLERANCE {
            counterexamples.push(format!("symmetry gap {gap:e} at N={n} a={a} h={h}"));
        }
    }

    let mut ordering_violations = 0;
    for _ in 0..samples {
        let n = rng.random_range(2..=n_max);
        let a = log_uniform(&mut rng, 0.05, 20.0);
        let h = height(&mut rng);
        let twist = if rng.random_bool(0.5) {
            pick_twist(&mut rng)
        } else {
            Twist::Radians(rng.random::<f64>() * std::f64::consts::TAU)
        };
        let (y, z) = kernel_yz(n, a, h, twist)?;
        if !(z > y) {
            ordering_violations += 1;
            counterexamples.push(format!("z = {z:e} <= y = {y:e} at N={n} a={a} h={h}"));
        }
    }

    let mut x_min = f64::INFINITY;
    let mut x_max_rel_discrepancy = 0.0_f64;
    for n in 2..=n_max {
        let by_roots = kernel_x(n)?;
        let by_csc = kernel_x_csc(n)?;
        x_min = x_min.min(by_roots);
        let rel = (by_roots - by_csc).abs() / by_csc;
        x_max_rel_discrepancy = x_max_rel_discrepancy.max(rel);
        if !(by_roots > 0.0) || rel >= X_DUAL_TOLERANCE {
            counterexamples.push(format!("x mismatch at N={n}: {by_roots} vs {by_csc}"));
        }
    }

    let equal_mass_floor = DEFAULT_SCAN_FLOOR;
    let mut equal_mass_min_residual = f64::INFINITY;
    let heights = Grid::geometric(0.01, 10.0, 200).points();
    for n in 3..=n_max {
        for twist in [Twist::Aligned, Twist::Staggered] {
            for a in Grid::linear(0.1, 0.95, 30).points() {
                let params = TwistedPolygonParams::new(n, a, 1.0, 1.0, twist)?;
                let (h, r) = minimize_over_h(&params, &heights)?;
                equal_mass_min_residual = equal_mass_min_residual.min(r);
                if r <= equal_mass_floor {
                    counterexamples.push(format!(
                        "b = 1 residual {r:e} at N={n} a={a} h={h} theta={twist}"
                    ));
                }
            }
        }
    }

    Ok(SuiteReport {
        seed,
        samples,
        n_max,
        positivity_violations,
        ordering_violations,
        x_min,
        x_max_rel_discrepancy,
        symmetry_max_discrepancy,
        equal_mass_min_residual,
        equal_mass_floor,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_digon_and_triangle() {
        for (n, twist) in [(2, Twist::Staggered), (3, Twist::Staggered)] {
            let out = solve_h(n, twist).unwrap();
            let root = out.root().expect("root");
            assert!((root.h_root - 2f64.sqrt()).abs() < 1e-12, "{}", root.h_root);
            assert!(root.residual_at_root < 1e-12);
            let (lo, hi) = root.bracket;
            let f_lo = equal_case_residual(n, twist, lo).unwrap();
            let f_hi = equal_case_residual(n, twist, hi).unwrap();
            assert!(f_lo * f_hi < 0.0);
        }
    }

    #[test]
    fn different_starts_agree() {
        let a = solve_h_from(6, Twist::Staggered, (1e-3, 1.0)).unwrap();
        let b = solve_h_from(6, Twist::Staggered, (0.05, 0.07)).unwrap();
        let (a, b) = (a.root().unwrap(), b.root().unwrap());
        assert!((a.h_root - b.h_root).abs() < 1e-10);
    }

    #[test]
    fn rejects_inadmissible_twist_and_bad_bracket() {
        assert!(matches!(
            solve_h(4, Twist::Radians(0.1)),
            Err(Error::InadmissibleTwist { .. })
        ));
        assert!(solve_h_from(4, Twist::Staggered, (1.0, 0.5)).is_err());
    }

    #[test]
    fn bracket_above_root_reports_no_root() {
        let out = solve_h_from(3, Twist::Staggered, (5.0, 6.0)).unwrap();
        assert!(matches!(out, SolveOutcome::NoRoot(_)));
        let json = serde_json::to_value(&out).unwrap();
        assert_eq!(json["status"], "no-root");
    }

    #[test]
    fn bisect_finds_sqrt_two() {
        let (r, it) = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(it > 40);
    }

    #[test]
    fn sign_changes() {
        assert_eq!(count_sign_changes([-1.0, -0.5, 0.0, 2.0, 3.0]), 1);
        assert_eq!(count_sign_changes([1.0, -1.0, 1.0]), 2);
        assert_eq!(count_sign_changes([0.0, 0.0]), 0);
    }

    #[test]
    fn grids() {
        assert_eq!(Grid::linear(0.0, 1.0, 3).points(), vec![0.0, 0.5, 1.0]);
        assert_eq!(Grid::linear(2.0, 5.0, 1).points(), vec![2.0]);
        let g = Grid::geometric(0.01, 10.0, 4).points();
        assert!((g[1] - 0.1).abs() < 1e-15 && (g[2] - 1.0).abs() < 1e-14);
        assert_eq!(g[3], 10.0);
        let parsed: Grid = "0.2:5:40".parse().unwrap();
        assert_eq!(parsed, Grid::linear(0.2, 5.0, 40));
        assert!("0.2:5".parse::<Grid>().is_err());
        assert!(Grid::linear(1.0, 0.0, 3).validate("g").is_err());
        assert!(Grid::linear(0.0, 1.0, 0).validate("g").is_err());
        assert!(Grid::geometric(0.0, 1.0, 3).validate("g").is_err());
    }

    #[test]
    fn exclusion_drops_grid_lines() {
        let spec = ScanSpec::new(
            4,
            Twist::Staggered,
            Grid::linear(0.8, 1.2, 5),
            Grid::linear(0.8, 1.0, 3),
            Grid::linear(1.0, 2.0, 3),
        );
        let cells = spec.cells();
        // a ∈ {0.8, 0.9, 1.1, 1.2}, b ∈ {0.8, 0.9}
        assert_eq!(cells.len(), 8);
        assert!(cells
            .iter()
            .all(|&(a, b)| (a - 1.0).abs() >= 0.05 && b < 0.95));
    }

    #[test]
    fn scan_errors() {
        let g = Grid::linear(0.5, 0.6, 2);
        let spec = ScanSpec::new(4, Twist::Staggered, g, Grid::linear(1.0, 1.0, 1), g);
        assert!(matches!(
            certify_no_solution(&spec),
            Err(Error::EmptyGrid(_))
        ));
        let spec = ScanSpec::new(2, Twist::Staggered, g, g, g);
        assert!(certify_no_solution(&spec).is_err());
    }

    #[test]
    fn equal_cell_reaches_the_root() {
        let root = solve_h(4, Twist::Staggered)
            .unwrap()
            .root()
            .unwrap()
            .clone();
        let spec = ScanSpec::new(
            4,
            Twist::Staggered,
            Grid::linear(1.0, 1.0, 1),
            Grid::linear(1.0, 1.0, 1),
            Grid::geometric(0.01, 10.0, 200),
        )
        .with_exclusion(0.0);
        let cells = certify_no_solution(&spec).unwrap();
        assert_eq!(cells.len(), 1);
        assert!(cells[0].min_residual_over_h < 1e-10);
        assert!((cells[0].argmin_h - root.h_root).abs() < 1e-9);
    }

    #[test]
    fn golden_section_quadratic() {
        let (x, fx) = golden_section(|x| Ok((x - 0.3) * (x - 0.3)), 0.0, 1.0, 1e-12).unwrap();
        assert!((x - 0.3).abs() < 1e-9 && fx < 1e-18);
    }

    #[test]
    fn small_suite_passes() {
        let report = step_property_suite(6, 500, 7).unwrap();
        assert!(report.passed(), "{:?}", report.counterexamples);
        assert!(report.x_min > 0.0);
        assert!(report.equal_mass_min_residual > report.equal_mass_floor);
    }
}
