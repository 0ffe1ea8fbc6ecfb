use orlab::growth::{
    check_delta2, check_dini_domination, check_equivalence, check_nabla2, check_type_bounds, complementary,
    estimate_indices, Probe, TypeKind,
};
use orlab::{GrowthFunction, OrlabError};
use proptest::prelude::*;

/// sup_t (st − Φ(t)) on a dense geometric grid, independent of the library's
/// bracketing.
fn brute_conjugate(phi: &GrowthFunction, s: f64) -> f64 {
    let n = 400_000;
    let (a, b) = (1e-9f64.ln(), 1e7f64.ln());
    let mut best = 0.0f64;
    for i in 0..n {
        let t = (a + (b - a) * i as f64 / (n - 1) as f64).exp();
        best = best.max(s * t - phi.eval(t));
    }
    best
}

#[test]
fn half_square_conjugate_matches_brute_force() {
    let phi = GrowthFunction::power(2.0).scaled(0.5);
    let psi = complementary(&phi).unwrap();
    for &s in &[1e-2, 0.05, 1.0, 3.3, 1e2] {
        let oracle = brute_conjugate(&phi, s);
        assert!((psi.eval(s) / oracle - 1.0).abs() < 1e-6, "s={s}");
        assert!((psi.eval(s) / (0.5 * s * s) - 1.0).abs() < 1e-6);
    }
    assert_eq!(psi.eval(0.0), 0.0);
}

#[test]
fn sampled_conjugates_match_brute_force() {
    for phi in [GrowthFunction::power_log(2.0, 1.0), GrowthFunction::q_over_log(2.0), GrowthFunction::t_log()] {
        let psi = complementary(&phi).unwrap();
        for &s in &[1e-2, 0.2, 1.0, 4.0, 15.0] {
            let oracle = brute_conjugate(&phi, s);
            assert!((psi.eval(s) / oracle - 1.0).abs() < 1e-6, "{phi} s={s}: {} vs {oracle}", psi.eval(s));
        }
        assert_eq!(psi.eval(0.0), 0.0);
    }
}

#[test]
fn double_conjugate_returns_original() {
    for phi in [GrowthFunction::power(3.0), GrowthFunction::power_log(2.0, 1.0), GrowthFunction::q_over_log(2.5)] {
        let back = complementary(&complementary(&phi).unwrap()).unwrap();
        for i in 0..=60 {
            let t = 10f64.powf(-3.0 + 0.1 * i as f64);
            let r = back.eval(t) / phi.eval(t);
            assert!((r - 1.0).abs() < 1e-3, "{phi} t={t} ratio {r}");
        }
    }
}

#[test]
fn young_equality_at_derivative() {
    for phi in [GrowthFunction::power(2.5), GrowthFunction::power_log(2.0, 1.0), GrowthFunction::power_log(1.5, 0.5)] {
        let psi = complementary(&phi).unwrap();
        for i in 0..=40 {
            let s = 10f64.powf(-2.0 + 0.1 * i as f64);
            let t = phi.deriv(s);
            let lhs = s * t;
            let rhs = phi.eval(s) + psi.eval(t);
            assert!((rhs / lhs - 1.0).abs() < 1e-6, "{phi} s={s}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn index_examples() {
    let p = Probe::default();
    let r = estimate_indices(&GrowthFunction::power(2.5), &p).unwrap();
    assert_eq!((r.a_lower, r.b_upper), (2.5, 2.5));

    // oracle: dense-grid extrema of the closed-form ratio
    let dense = |f: &dyn Fn(f64) -> f64| {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..200_000 {
            let t = 10f64.powf(-8.0 + 16.0 * i as f64 / 199_999.0);
            lo = lo.min(f(t));
            hi = hi.max(f(t));
        }
        (lo, hi)
    };
    let r = estimate_indices(&GrowthFunction::power_log(2.0, 1.0), &p).unwrap();
    let (lo, hi) = dense(&|t: f64| 2.0 + t / ((1.0 + t) * t.ln_1p()));
    assert!((r.a_lower - lo).abs() < 1e-4 && (r.b_upper - hi).abs() < 1e-4);
    assert!((r.a_asymptotic - 2.0).abs() < 1e-2, "{r:?}");
    assert!((r.b_upper - 3.0).abs() < 1e-2);

    let r = estimate_indices(&GrowthFunction::t_log(), &p).unwrap();
    assert!((r.a_asymptotic - 1.0).abs() < 1e-2, "{r:?}");
    assert!((r.b_upper - 2.0).abs() < 1e-2);
    assert!(r.a_lower >= 1.0 && r.a_lower <= r.b_upper);
}

#[test]
fn delta2_examples() {
    let p = Probe::default();
    let r = check_delta2(&GrowthFunction::power(2.0), &p).unwrap();
    assert!(r.satisfied);
    assert!((r.constant.unwrap() - 4.0).abs() < 1e-12);
    let r = check_delta2(&GrowthFunction::exp_like(), &p).unwrap();
    assert!(!r.satisfied);
    assert_eq!(r.witness, Some(p.t_max));
    let r = check_delta2(&GrowthFunction::q_over_log(2.0), &p).unwrap();
    assert!(r.satisfied && r.constant.unwrap() <= 4.0 + 1e-12);
}

#[test]
fn nabla2_examples() {
    let p = Probe::default();
    let r = check_nabla2(&GrowthFunction::power(2.0), &p).unwrap();
    assert!(r.satisfied);
    assert!((r.constant.unwrap() - 1.0).abs() < 1e-9, "{r:?}");
    let r = check_nabla2(&GrowthFunction::t_log(), &p).unwrap();
    assert!(!r.satisfied && r.witness.is_some());
    assert!(matches!(check_nabla2(&GrowthFunction::power(1.0), &p), Err(OrlabError::NotNFunction(_))));
}

#[test]
fn tlog_dini_ratio_matches_antiderivative() {
    // ∫₀^t ln(1+s)/s ds = −Li₂(−t); for t ≥ 1 use the inversion formula
    // −Li₂(−t) = π²/6 + ln²t/2 + Li₂(−1/t) and a short series for Li₂(−1/t).
    let li2_neg = |x: f64| {
        let mut sum = 0.0;
        let mut pow = 1.0;
        for k in 1..200 {
            pow *= -x;
            sum += pow / (k * k) as f64;
        }
        sum
    };
    let exact = |t: f64| std::f64::consts::PI.powi(2) / 6.0 + 0.5 * t.ln().powi(2) + li2_neg(1.0 / t);
    let phi = GrowthFunction::t_log();
    let ts = [2.0, 10.0, 1e3, 1e8];
    let li = orlab::growth::dini_log_integrals(&phi, &ts).unwrap();
    for (i, &t) in ts.iter().enumerate() {
        assert!((li[i].exp() / exact(t) - 1.0).abs() < 1e-6, "t={t}: {} vs {}", li[i].exp(), exact(t));
    }
}

#[test]
fn dini_domination_examples() {
    let p = Probe::default();
    let r = check_dini_domination(&GrowthFunction::power(2.0), &GrowthFunction::power(2.0), &p).unwrap();
    assert!(r.satisfied && (r.constant.unwrap() - 1.0).abs() < 1e-9);
    let r = check_dini_domination(&GrowthFunction::t_log(), &GrowthFunction::t_log(), &p).unwrap();
    assert!(!r.satisfied);
    // (t/t³)·t = 1/t grows without bound as t → 0
    let r = check_dini_domination(&GrowthFunction::power(3.0), &GrowthFunction::power(2.0), &p).unwrap();
    assert!(!r.satisfied);
    assert_eq!(r.witness, Some(p.t_min));
}

#[test]
fn type_bound_examples() {
    let p = Probe::default();
    let r = check_type_bounds(&GrowthFunction::power(2.0), 2.0, TypeKind::Upper, &p).unwrap();
    assert!(r.satisfied && (r.constant.unwrap() - 1.0).abs() < 1e-12);
    let r = check_type_bounds(&GrowthFunction::power(2.0), 1.5, TypeKind::Upper, &p).unwrap();
    assert!(!r.satisfied && r.witness.unwrap() > 1e3);
    let r = check_type_bounds(&GrowthFunction::q_over_log(2.0), 2.0, TypeKind::Upper, &p).unwrap();
    assert!(r.satisfied && r.constant.unwrap() < std::f64::consts::E);
    let r = check_type_bounds(&GrowthFunction::power(2.0), 2.0, TypeKind::Lower, &p).unwrap();
    assert!(r.satisfied);
    let r = check_type_bounds(&GrowthFunction::power(2.0), 2.5, TypeKind::Lower, &p).unwrap();
    assert!(!r.satisfied);
}

#[test]
fn index_type_consistency() {
    let p = Probe::default();
    for phi in [GrowthFunction::power(2.0), GrowthFunction::power(3.5), GrowthFunction::power_log(2.0, 1.0)] {
        let b = estimate_indices(&phi, &p).unwrap().b_upper;
        assert!(check_type_bounds(&phi, b + 1e-2, TypeKind::Upper, &p).unwrap().satisfied, "{phi}");
        assert!(!check_type_bounds(&phi, b - 1e-1, TypeKind::Upper, &p).unwrap().satisfied, "{phi}");
    }
}

#[test]
fn equivalence_examples() {
    let p = Probe::default();
    let r = check_equivalence(&GrowthFunction::power(2.0), &GrowthFunction::power(2.0), &p).unwrap();
    assert!(r.satisfied && r.constant == Some(1.0));
    let four = GrowthFunction::power(2.0).scaled(4.0);
    let r = check_equivalence(&GrowthFunction::power(2.0), &four, &p).unwrap();
    assert!(r.satisfied);
    let c = r.constant.unwrap();
    assert!(c <= 2.0 && (c - 4f64.cbrt()).abs() < 1e-6, "{c}");
    let r = check_equivalence(&GrowthFunction::power(2.0), &GrowthFunction::power(3.0), &p).unwrap();
    assert!(!r.satisfied);
}

fn family() -> impl Strategy<Value = GrowthFunction> {
    prop_oneof![
        (1.1f64..4.0).prop_map(GrowthFunction::power),
        (1.1f64..3.0, 0.0f64..2.0).prop_map(|(p, b)| GrowthFunction::power_log(p, b)),
        (1.5f64..3.0).prop_map(GrowthFunction::q_over_log),
        Just(GrowthFunction::t_log()),
        Just(GrowthFunction::exp_like()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverse_round_trips(phi in family(), e in -6.0f64..6.0) {
        let t = 10f64.powf(e);
        let v = phi.eval(t);
        prop_assume!(v.is_finite() && v > 0.0);
        prop_assert!((phi.inverse(v) / t - 1.0).abs() < 1e-9);
    }

    #[test]
    fn eval_is_increasing_and_convex(phi in family(), e in -6.0f64..5.0) {
        let t1 = 10f64.powf(e);
        let (t2, t3) = (t1 * 1.7, t1 * 2.9);
        let (v1, v2, v3) = (phi.eval(t1), phi.eval(t2), phi.eval(t3));
        prop_assume!(v3.is_finite());
        prop_assert!(v1 < v2 && v2 < v3);
        let (s1, s2) = ((v2 - v1) / (t2 - t1), (v3 - v2) / (t3 - t2));
        prop_assert!(s2 >= s1 * (1.0 - 1e-9));
        prop_assert_eq!(phi.eval(0.0), 0.0);
    }

    #[test]
    fn young_inequality(p in 1.2f64..4.0, beta in 0.0f64..1.5, es in -2.0f64..2.0, et in -2.0f64..2.0) {
        let phi = GrowthFunction::power_log(p, beta);
        let psi = complementary(&phi).unwrap();
        let (s, t) = (10f64.powf(es), 10f64.powf(et));
        prop_assert!(s * t <= (phi.eval(s) + psi.eval(t)) * (1.0 + 1e-9));
    }

    #[test]
    fn ratio_over_a_lower_power_is_nondecreasing(phi in family()) {
        let probe = Probe::new(1e-6, 1e6, 512).unwrap();
        let a = estimate_indices(&phi, &probe).unwrap().a_lower;
        let t = probe.grid();
        let mut prev = f64::NEG_INFINITY;
        for &x in &t {
            let v = phi.ln_eval(x) - a * x.ln();
            prop_assert!(v >= prev - 1e-9 * prev.abs().max(1.0));
            prev = v;
        }
    }
}
