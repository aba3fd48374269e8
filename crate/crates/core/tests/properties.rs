use std::f64::consts::{PI, TAU};

use polycc::angle::Twist;
use polycc::conditions::{complex_form_residual, joint_residual, kernel_pair_residual};
use polycc::kernels::kernel_yz;
use polycc::newtonian::{cc_residual, lambda_of, moment_of_inertia, potential};
use polycc::solver::{equal_case_residual, solve_h};
use polycc::{build_configuration, center_of_mass, BodySystem, TwistedPolygonParams, Vec3};
use proptest::prelude::*;

fn twist_strategy() -> impl Strategy<Value = Twist> {
    prop_oneof![
        Just(Twist::Aligned),
        Just(Twist::Staggered),
        (0.0..TAU).prop_map(Twist::Radians)
    ]
}

fn admissible_strategy() -> impl Strategy<Value = Twist> {
    prop_oneof![Just(Twist::Aligned), Just(Twist::Staggered)]
}

fn params_strategy() -> impl Strategy<Value = TwistedPolygonParams> {
    (
        2usize..=9,
        0.2f64..5.0,
        0.05f64..5.0,
        0.05f64..5.0,
        twist_strategy(),
        0.1f64..10.0,
    )
        .prop_map(|(n, a, b, h, t, m)| TwistedPolygonParams::with_mass(n, a, b, h, t, m).unwrap())
}

fn norm(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn rotate_z(p: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1], p[2]]
}

fn sorted_positions(sys: &BodySystem) -> Vec<Vec3> {
    let mut v: Vec<Vec3> = sys.positions().collect();
    v.sort_by(|p, q| {
        p[2].total_cmp(&q[2])
            .then(p[1].total_cmp(&q[1]))
            .then(p[0].total_cmp(&q[0]))
    });
    v
}

/// Pairwise potential summed in reverse order with plain floats.
fn naive_potential(sys: &BodySystem) -> f64 {
    let b = sys.bodies();
    let mut u = 0.0;
    for j in (0..b.len()).rev() {
        for k in (0..j).rev() {
            let d = [
                b[j].position[0] - b[k].position[0],
                b[j].position[1] - b[k].position[1],
                b[j].position[2] - b[k].position[2],
            ];
            u += b[j].mass * b[k].mass / norm(d);
        }
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rings_lie_on_their_circles(p in params_strategy()) {
        let sys = build_configuration(&p).unwrap();
        prop_assert_eq!(sys.len(), 2 * p.n());
        for (i, body) in sys.bodies().iter().enumerate() {
            let q = body.position;
            let (radius, height, mass) = if i < p.n() {
                (1.0, 0.0, p.m())
            } else {
                (p.a(), p.h(), p.b() * p.m())
            };
            prop_assert!((q[0].hypot(q[1]) - radius).abs() < 1e-14 * radius.max(1.0));
            prop_assert_eq!(q[2], height);
            prop_assert_eq!(body.mass, mass);
        }
        let (c, total) = center_of_mass(&sys);
        prop_assert!(c[0].abs() < 1e-14 && c[1].abs() < 1e-14);
        prop_assert!((c[2] - p.b() * p.h() / (1.0 + p.b())).abs() < 1e-14 * p.h().max(1.0));
        prop_assert!((total - p.total_mass()).abs() < 1e-13 * total);
    }

    #[test]
    fn residuals_sum_to_zero(p in params_strategy()) {
        let sys = build_configuration(&p).unwrap();
        let report = cc_residual(&sys, 1e-9).unwrap();
        let scale = report.residuals.iter().map(|r| norm(*r)).fold(p.m() * p.m(), f64::max);
        for axis in 0..3 {
            let s: f64 = report.residuals.iter().map(|r| r[axis]).sum();
            prop_assert!(s.abs() < 1e-12 * scale * sys.len() as f64, "axis {} sum {:e}", axis, s);
        }
    }

    #[test]
    fn residual_is_rotation_equivariant(p in params_strategy(), angle in 0.0..TAU) {
        let sys = build_configuration(&p).unwrap();
        let rotated = sys.map_positions(|q| rotate_z(q, angle)).unwrap();
        let r0 = cc_residual(&sys, 1e-9).unwrap();
        let r1 = cc_residual(&rotated, 1e-9).unwrap();
        prop_assert!((r0.lambda - r1.lambda).abs() < 1e-12 * r0.lambda);
        for (u, v) in r0.residuals.iter().zip(&r1.residuals) {
            let expect = rotate_z(*u, angle);
            let gap = norm([expect[0] - v[0], expect[1] - v[1], expect[2] - v[2]]);
            prop_assert!(gap < 1e-11 * (1.0 + r0.max_residual));
        }
    }

    #[test]
    fn potential_matches_naive_sum(p in params_strategy()) {
        let sys = build_configuration(&p).unwrap();
        let u = potential(&sys).unwrap();
        prop_assert!((u - naive_potential(&sys)).abs() < 1e-13 * u);
        prop_assert!(moment_of_inertia(&sys) > 0.0);
    }

    #[test]
    fn scaling_scales_lambda(p in params_strategy(), s in 0.1f64..10.0) {
        let sys = build_configuration(&p).unwrap();
        let scaled = sys.map_positions(|q| [s * q[0], s * q[1], s * q[2]]).unwrap();
        let l0 = lambda_of(&sys).unwrap();
        let l1 = lambda_of(&scaled).unwrap();
        prop_assert!((l1 * s.powi(3) - l0).abs() < 1e-12 * l0);
    }

    #[test]
    fn shifting_twist_by_a_step_relabels(
        n in 2usize..=9, a in 0.2f64..5.0, b in 0.05f64..5.0, h in 0.05f64..5.0, t in 0.0..TAU
    ) {
        let p = TwistedPolygonParams::new(n, a, b, h, Twist::Radians(t)).unwrap();
        let q = p.with_twist(Twist::Radians(t + TAU / n as f64)).unwrap();
        let sp = sorted_positions(&build_configuration(&p).unwrap());
        let sq = sorted_positions(&build_configuration(&q).unwrap());
        for (u, v) in sp.iter().zip(&sq) {
            let gap = norm([u[0] - v[0], u[1] - v[1], u[2] - v[2]]);
            prop_assert!(gap < 1e-12 * a.max(1.0));
        }
        let r0 = cc_residual(&build_configuration(&p).unwrap(), 0.0).unwrap().max_residual;
        let r1 = cc_residual(&build_configuration(&q).unwrap(), 0.0).unwrap().max_residual;
        prop_assert!((r0 - r1).abs() < 1e-10 * (1.0 + r0));
    }

    #[test]
    fn kernel_signs_and_monotonicity(
        n in 3usize..=12, a in 0.05f64..20.0, h in 0.01f64..10.0, dh in 0.01f64..2.0,
        twist in admissible_strategy()
    ) {
        let (y, z) = kernel_yz(n, a, h, twist).unwrap();
        prop_assert!(y > 0.0);
        prop_assert!(z > y);
        let (y2, z2) = kernel_yz(n, a, h + dh, twist).unwrap();
        prop_assert!(z2 < z);
        prop_assert!(y2 < y);
    }

    #[test]
    fn z_exceeds_y_for_any_twist(
        n in 2usize..=12, a in 0.05f64..20.0, h in 0.01f64..10.0, twist in twist_strategy()
    ) {
        let (y, z) = kernel_yz(n, a, h, twist).unwrap();
        prop_assert!(z > y.abs());
    }

    #[test]
    fn equal_case_increases(n in 2usize..=10, h in 1e-3f64..50.0, dh in 1e-3f64..5.0) {
        let f0 = equal_case_residual(n, Twist::Staggered, h).unwrap();
        let f1 = equal_case_residual(n, Twist::Staggered, h + dh).unwrap();
        prop_assert!(f1 > f0);
    }

    #[test]
    fn kernel_pair_and_complex_forms_agree(
        n in 2usize..=9, a in 0.2f64..5.0, b in 0.05f64..5.0, h in 0.05f64..5.0,
        twist in admissible_strategy()
    ) {
        // With c₁, c₃ the first- and second-ring complex forms,
        //   (1+b)(c₁ − z) = −(b·a·y − (x − z))
        //   a(1+b)(c₃ − z) = (b/a²)x − b·a·z − y   (real parts)
        // with vanishing imaginary parts.
        let p = TwistedPolygonParams::new(n, a, b, h, twist).unwrap();
        let [r1, r2] = kernel_pair_residual(&p).unwrap();
        let complex_forms = complex_form_residual(&p).unwrap();
        let scale = 1.0 + r1.abs() + r2.abs();
        prop_assert!(((1.0 + b) * complex_forms[0][0] + r1).abs() < 1e-11 * scale * (1.0 + b));
        prop_assert!((a * (1.0 + b) * complex_forms[2][0] - r2).abs() < 1e-11 * scale * (1.0 + b) * a.max(1.0 / a));
        prop_assert!(complex_forms[0][1].abs() < 1e-11 && complex_forms[2][1].abs() < 1e-11);
        prop_assert_eq!(complex_forms[1], [0.0, 0.0]);
    }

    #[test]
    fn ring_swap_rescales_joint_residual(
        n in 3usize..=8, a in 0.2f64..5.0, b in 0.05f64..5.0, h in 0.05f64..5.0,
        twist in admissible_strategy()
    ) {
        // Relabelling the rings and rescaling by 1/a maps (a, b, h) to
        // (1/a, 1/b, h/a) and the kernel pair to −(a²/b)·(r₂, r₁).
        let p = TwistedPolygonParams::new(n, a, b, h, twist).unwrap();
        let q = TwistedPolygonParams::new(n, 1.0 / a, 1.0 / b, h / a, twist).unwrap();
        let [p1, p2] = kernel_pair_residual(&p).unwrap();
        let [q1, q2] = kernel_pair_residual(&q).unwrap();
        let k = a * a / b;
        let scale = k * (1.0 + p1.abs() + p2.abs());
        prop_assert!((q1 + k * p2).abs() < 1e-11 * scale);
        prop_assert!((q2 + k * p1).abs() < 1e-11 * scale);
        let jp = joint_residual(&p).unwrap();
        let jq = joint_residual(&q).unwrap();
        prop_assert!((jq - k * jp).abs() < 1e-11 * scale);
    }

    #[test]
    fn inadmissible_twist_is_not_central(n in 2usize..=8, offset in 0.05f64..(PI - 0.05)) {
        // Keep θ at least 0.05/N away from multiples of π/N.
        let h = solve_h(n, Twist::Staggered).unwrap().root().unwrap().h_root;
        let theta = offset / n as f64;
        let p = TwistedPolygonParams::new(n, 1.0, 1.0, h, Twist::Radians(theta)).unwrap();
        prop_assume!(p.twist().radians(n).rem_euclid(PI / n as f64) > 0.01 / n as f64);
        let report = cc_residual(&build_configuration(&p).unwrap(), 1e-8).unwrap();
        prop_assert!(!report.is_central, "residual {:e}", report.max_residual);
    }
}
