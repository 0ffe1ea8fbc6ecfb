use num_complex::Complex64;
use orlab::norms::{
    holder_pairing, luxemburg_norm, modular, modular_layercake, orlicz_dual_norm, LambdaGrid,
};
use orlab::{GridFunction, GridSpec, GrowthFunction};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid16() -> GridSpec {
    GridSpec::new(16.0, 1024).unwrap()
}

#[test]
fn modular_examples() {
    let f = GridFunction::parse("rect:a=0,b=4", grid16()).unwrap();
    let p2 = GrowthFunction::power(2.0);
    assert!((modular(&f, &p2, 2.0) - 1.0).abs() < 1e-9);
    assert!(modular(&f, &p2, 1e12) <= 1e-6);
    let g = GridFunction::parse("gauss:s=1", grid16()).unwrap();
    let exact = (std::f64::consts::PI / 2.0).sqrt();
    assert!((modular(&g, &p2, 1.0) - exact).abs() < 1e-6);
    assert!(modular(&g, &GrowthFunction::exp_like(), 1e-3).is_infinite());
}

#[test]
fn luxemburg_examples() {
    let s = grid16();
    let f = GridFunction::parse("rect:a=0,b=4", s).unwrap();
    let n = luxemburg_norm(&f, &GrowthFunction::power(2.0)).unwrap();
    assert!((n.value - 2.0).abs() < 1e-9);
    assert!(n.bracket.0 <= n.value && n.value <= n.bracket.1);
    assert!(n.bracket.1 - n.bracket.0 <= 1e-10 * n.value);
    let f3 = GridFunction::parse("rect:a=0,b=1,amp=3", s).unwrap();
    for p in [1.0, 1.5, 2.0, 3.7] {
        assert!((luxemburg_norm(&f3, &GrowthFunction::power(p)).unwrap().value - 3.0).abs() < 1e-9);
    }
    // (1/λ)ln(1+1/λ) = 1, solved by Newton on u = 1/λ
    let mut u = 1.0f64;
    for _ in 0..50 {
        let g = u * u.ln_1p() - 1.0;
        let dg = u.ln_1p() + u / (1.0 + u);
        u -= g / dg;
    }
    let oracle = 1.0 / u;
    let chi = GridFunction::parse("rect:a=0,b=1", s).unwrap();
    let n = luxemburg_norm(&chi, &GrowthFunction::t_log()).unwrap();
    assert!((n.value - oracle).abs() < 1e-9, "{} vs {oracle}", n.value);
    assert!((oracle - 0.80647).abs() < 1e-4);
    assert_eq!(luxemburg_norm(&GridFunction::zero(s), &GrowthFunction::t_log()).unwrap().value, 0.0);
}

#[test]
fn dual_norm_examples() {
    let s = grid16();
    let chi = GridFunction::parse("rect:a=0,b=1", s).unwrap();
    let p2 = GrowthFunction::power(2.0);
    let d = orlicz_dual_norm(&chi, &p2).unwrap();
    assert!(d.norm.value >= 1.0 - 1e-9 && d.norm.value <= 2.0 + 1e-6, "{d:?}");
    assert_eq!(orlicz_dual_norm(&GridFunction::zero(s), &p2).unwrap().norm.value, 0.0);
}

#[test]
fn dual_norm_beats_random_search() {
    let s = GridSpec::new(4.0, 128).unwrap();
    let f = GridFunction::parse("tent:c=0,r=2", s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for phi in [GrowthFunction::power(2.0), GrowthFunction::power(3.0)] {
        let psi = orlab::growth::complementary(&phi).unwrap();
        let d = orlicz_dual_norm(&f, &phi).unwrap().norm.value;
        let mut best = 0.0f64;
        for _ in 0..10_000 {
            let vals: Vec<Complex64> = (0..s.points)
                .map(|j| {
                    let x = s.x(j);
                    let v = if x.abs() < 3.5 { rng.random::<f64>() } else { 0.0 };
                    Complex64::new(v, 0.0)
                })
                .collect();
            let g = GridFunction::new(s, vals, orlab::DecayClass::CompactSupport).unwrap();
            let ng = luxemburg_norm(&g, &psi).unwrap().value;
            let pairing: f64 = s.h() * f.abs().iter().zip(g.abs()).map(|(a, b)| a * b).sum::<f64>();
            best = best.max(pairing / ng);
        }
        assert!(best <= d * (1.0 + 1e-9), "{phi}: random {best} > dual {d}");
    }
}

#[test]
fn dual_norm_closed_forms() {
    // Power(2): Ψ = t²/4 so the dual norm is exactly 2‖f‖₂
    let f = GridFunction::parse("gauss:s=1", grid16()).unwrap();
    let d = orlicz_dual_norm(&f, &GrowthFunction::power(2.0)).unwrap().norm.value;
    assert!((d / (2.0 * f.l2()) - 1.0).abs() < 1e-8);
    // Power(p): sup pairing is ‖f‖_p ‖g‖_q-normalised; with Ψ = (p−1)p^{−q}t^q
    // the Ψ-Luxemburg norm of g is ((p−1)p^{−q})^{1/q}‖g‖_q.
    let p = 3.0;
    let q = p / (p - 1.0);
    let lp = (f.spec().h() * f.abs().iter().map(|a| a.powf(p)).sum::<f64>()).powf(1.0 / p);
    let expect = lp / ((p - 1.0) * p.powf(-q)).powf(1.0 / q);
    let d = orlicz_dual_norm(&f, &GrowthFunction::power(p)).unwrap().norm.value;
    assert!((d / expect - 1.0).abs() < 1e-8, "{d} vs {expect}");
    assert!((expect / lp - 1.89).abs() < 1e-2);
}

#[test]
fn holder_examples() {
    let s = grid16();
    let chi = GridFunction::parse("rect:a=0,b=1", s).unwrap();
    let p2 = GrowthFunction::power(2.0);
    let r = holder_pairing(&chi, &chi, &p2).unwrap();
    assert!((r.pairing - 1.0).abs() < 1e-12 && r.ok);
    let g = GridFunction::parse("gauss:s=1", s).unwrap();
    let c = GridFunction::parse("cauchy:y=1", s).unwrap();
    assert!(holder_pairing(&g, &c, &p2).unwrap().ok);
    let r = holder_pairing(&g, &GridFunction::zero(s), &p2).unwrap();
    assert!(r.pairing == 0.0 && r.ok);
    let other = GridSpec::new(8.0, 1024).unwrap();
    assert!(holder_pairing(&g, &GridFunction::zero(other), &p2).is_err());
}

#[test]
fn layercake_examples() {
    let s = grid16();
    let p2 = GrowthFunction::power(2.0);
    let f = GridFunction::parse("rect:a=0,b=4", s).unwrap();
    assert!((modular_layercake(&f, &p2, LambdaGrid::for_function(&f)) - 4.0).abs() < 1e-9);
    assert_eq!(modular_layercake(&GridFunction::zero(s), &p2, LambdaGrid { min: 1e-3, max: 1.0, points: 10 }), 0.0);
    let f = GridFunction::parse("rect:a=0,b=1,amp=2 + rect:a=1,b=3", s).unwrap();
    // hand distribution: |{|f|>λ}| = 3 for λ<1, 1 for 1≤λ<2
    let hand = 3.0 * 1.0 + 1.0 * (4.0 - 1.0);
    let lc = modular_layercake(&f, &p2, LambdaGrid::for_function(&f));
    assert!((lc / hand - 1.0).abs() < 1e-3);
    assert!((lc / modular(&f, &p2, 1.0) - 1.0).abs() < 1e-3);
}

fn corpus() -> Vec<GridFunction> {
    let s = grid16();
    ["gauss:s=1", "cauchy:y=1", "bump:c=0,r=1", "bump:c=1,r=2", "rect:a=-1,b=2,amp=0.5"]
        .iter()
        .map(|t| GridFunction::parse(t, s).unwrap())
        .collect()
}

#[test]
fn sandwich_on_corpus() {
    for phi in [GrowthFunction::power(2.0), GrowthFunction::power(3.0), GrowthFunction::power_log(2.0, 1.0)] {
        for f in corpus() {
            let l = luxemburg_norm(&f, &phi).unwrap().value;
            let d = orlicz_dual_norm(&f, &phi).unwrap().norm.value;
            assert!(l <= d * (1.0 + 1e-9) && d <= 2.0 * l + 1e-6, "{phi}: {l} {d}");
        }
    }
}

#[test]
fn unit_ball_characterisation() {
    for phi in [GrowthFunction::power(2.0), GrowthFunction::q_over_log(2.0), GrowthFunction::power_log(2.0, 1.0)] {
        for f in corpus() {
            let n = luxemburg_norm(&f, &phi).unwrap();
            assert!(n.modular_at_value <= 1.0 + 1e-6);
            assert!((n.modular_at_value - 1.0).abs() < 1e-8, "{phi}: {}", n.modular_at_value);
        }
    }
}

fn random_fn(seed: u64) -> GridFunction {
    let s = GridSpec::new(4.0, 64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = (0..64)
        .map(|j| if s.x(j).abs() < 3.5 { Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0)) } else { Complex64::new(0.0, 0.0) })
        .collect();
    GridFunction::new(s, v, orlab::DecayClass::CompactSupport).unwrap()
}

fn phi_strategy() -> impl Strategy<Value = GrowthFunction> {
    prop_oneof![
        (1.0f64..4.0).prop_map(GrowthFunction::power),
        Just(GrowthFunction::t_log()),
        Just(GrowthFunction::power_log(2.0, 1.0)),
        Just(GrowthFunction::exp_like()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modular_is_monotone_in_lambda(seed in 0u64..1000, phi in phi_strategy(), l1 in 0.01f64..10.0, r in 1.0f64..5.0) {
        let f = random_fn(seed);
        prop_assert!(modular(&f, &phi, l1) >= modular(&f, &phi, l1 * r));
    }

    #[test]
    fn homogeneity(seed in 0u64..1000, phi in phi_strategy(), c in -5.0f64..5.0) {
        prop_assume!(c.abs() > 1e-3);
        let f = random_fn(seed);
        let a = luxemburg_norm(&f.scale(Complex64::new(c, 0.0)), &phi).unwrap().value;
        let b = c.abs() * luxemburg_norm(&f, &phi).unwrap().value;
        prop_assert!((a / b - 1.0).abs() < 1e-9);
    }

    #[test]
    fn triangle_inequality(s1 in 0u64..1000, s2 in 0u64..1000, phi in phi_strategy()) {
        let (f, g) = (random_fn(s1), random_fn(s2));
        let sum = luxemburg_norm(&f.add(&g).unwrap(), &phi).unwrap().value;
        let parts = luxemburg_norm(&f, &phi).unwrap().value + luxemburg_norm(&g, &phi).unwrap().value;
        prop_assert!(sum <= parts * (1.0 + 1e-9));
    }

    #[test]
    fn layercake_matches_modular(vals in proptest::collection::vec(0.0f64..3.0, 6), phi in phi_strategy()) {
        // piecewise constant on unit cells of [−3, 3)
        let s = GridSpec::new(8.0, 256).unwrap();
        let f = GridFunction::from_real(s, orlab::DecayClass::CompactSupport, |x| {
            if (-3.0..3.0).contains(&x) { vals[(x + 3.0).floor() as usize] } else { 0.0 }
        }).unwrap();
        prop_assume!(!f.is_zero());
        let m = modular(&f, &phi, 1.0);
        let lc = modular_layercake(&f, &phi, LambdaGrid::for_function(&f));
        prop_assert!((lc / m - 1.0).abs() < 1e-3, "{} vs {}", lc, m);
    }
}
