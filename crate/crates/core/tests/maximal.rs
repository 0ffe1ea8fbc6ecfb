use orlab::extension::{poisson_extend, poisson_extend_measure, HeightLattice, RadonMeasure};
use orlab::maximal::{
    build_counterexample, dyadic_cover, dyadic_maximal, hl_maximal, nontangential_maximal, radial_maximal,
    stopping_intervals, Beta, ConeSpec, DyadicInterval, PiecewiseConstant,
};
use orlab::quad::tanh_sinh;
use orlab::{GridFunction, GridSpec, GrowthFunction, OrlabError};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn random_pc(rng: &mut ChaCha8Rng) -> PiecewiseConstant {
    let n = rng.random_range(1..10);
    let mut b: Vec<f64> = (0..=n).map(|_| rng.random_range(-4.0..4.0)).collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    if b.len() < 2 {
        b.push(b[0] + 1.0);
    }
    let v = (1..b.len())
        .map(|_| if rng.random_bool(0.2) { 0.0 } else { 10f64.powf(rng.random_range(-2.0..2.0)) })
        .collect();
    PiecewiseConstant::new(b, v).unwrap()
}

fn eval_points(f: &PiecewiseConstant, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let b = f.breakpoints();
    let mut x: Vec<f64> = b.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    x.extend(b.iter().map(|t| t + 1e-7));
    let (lo, hi) = f.hull();
    let span = hi - lo;
    x.extend((0..20).map(|_| rng.random_range(lo - 2.0 * span..hi + 2.0 * span)));
    x
}

/// Independent left endpoint 2^{−j}(k + (−1)^j β).
fn left(beta: f64, j: i32, k: i64) -> f64 {
    2f64.powi(-j) * (k as f64 + if j % 2 == 0 { beta } else { -beta })
}

#[test]
fn cover_matches_brute_force_and_ratio_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for i in 0..100_000 {
        let a = rng.random_range(-50.0..50.0);
        let len = 10f64.powf(rng.random_range(-4.0..2.0));
        let (j, r) = dyadic_cover(a, a + len);
        assert!(j.left() <= a && a + len <= j.right());
        worst = worst.max(r);
        if i < 2000 {
            // brute force: the finest level at which some interval in either grid covers
            let mut best = f64::INFINITY;
            for (beta, bv) in [(Beta::Zero, 0.0), (Beta::Third, 1.0 / 3.0)] {
                let _ = beta;
                for lvl in (-12..=20).rev() {
                    let l = 2f64.powi(-lvl);
                    if l < len {
                        continue;
                    }
                    let k0 = (a / l).floor() as i64;
                    if (k0 - 2..=k0 + 2).any(|k| left(bv, lvl, k) <= a && a + len <= left(bv, lvl, k) + l) {
                        best = best.min(l);
                        break;
                    }
                }
            }
            assert!((j.len() - best).abs() <= 1e-12 * best, "[{a}, {}): {} vs {best}", a + len, j.len());
        }
    }
    assert!(worst <= 6.0, "{worst}");
}

proptest! {
    #[test]
    fn grids_nest(third in any::<bool>(), j in -30i32..30, k in -1_000_000i64..1_000_000) {
        let beta = if third { Beta::Third } else { Beta::Zero };
        let i = DyadicInterval::new(beta, j, k);
        let p = i.parent();
        prop_assert!(p.left() <= i.left() && i.right() <= p.right() + 1e-12 * p.len());
        let kids = p.children();
        prop_assert!(kids.contains(&i));
        // no other parent index contains the midpoint
        let mid = 0.5 * (i.left() + i.right());
        prop_assert_eq!(DyadicInterval::containing(mid, beta, j - 1), p);
        prop_assert!((i.len() - 2f64.powi(-j)).abs() == 0.0);
    }
}

#[test]
fn exact_hl_against_interval_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let f = random_pc(&mut rng);
        let (lo, hi) = f.hull();
        let (ea, eb) = (lo - 2.0 * (hi - lo) - 1.0, hi + 2.0 * (hi - lo) + 1.0);
        let ends: Vec<f64> = (0..=600).map(|i| ea + (eb - ea) * i as f64 / 600.0).chain(f.breakpoints().iter().copied()).collect();
        let integral = |a: f64, c: f64| -> f64 {
            let b = f.breakpoints();
            (0..f.pieces())
                .map(|i| (c.min(b[i + 1]) - a.max(b[i])).max(0.0) * f.logmag()[i].exp())
                .sum()
        };
        for x in eval_points(&f, &mut rng).into_iter().take(12) {
            let exact = f.hl_at(x);
            let mut sampled = f.eval(x).abs();
            let mut e = ends.clone();
            e.push(x);
            for &a in e.iter().filter(|&&a| a <= x) {
                for &c in e.iter().filter(|&&c| c >= x && c > a) {
                    sampled = sampled.max(integral(a, c) / (c - a));
                }
            }
            assert!(exact >= sampled * (1.0 - 1e-12), "{x}: {exact} < {sampled}");
            assert!(exact <= sampled * 1.05 + 1e-9, "{x}: {exact} vs {sampled}");
        }
    }
}

#[test]
fn dyadic_domination_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let f = random_pc(&mut rng);
        for x in eval_points(&f, &mut rng) {
            let hl = f.hl_at(x);
            let d = f.dyadic_at(x, Beta::Zero) + f.dyadic_at(x, Beta::Third);
            assert!(hl <= 6.0 * d * (1.0 + 1e-12), "x={x}: {hl} > 6·{d}");
        }
    }
}

#[test]
fn weak_type_lower_bound_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let f = random_pc(&mut rng);
        for i in 0..40 {
            let ll = (-3.0 + 0.15 * i as f64) * std::f64::consts::LN_10;
            let lhs = f.weak_type_lhs(ll);
            let rhs = f.hl_superlevel_measure(ll - 12f64.ln());
            assert!(lhs <= rhs * (1.0 + 1e-12), "λ=e^{ll}: {lhs} > {rhs}");
        }
    }
}

#[test]
fn superlevel_measure_against_pointwise_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let f = random_pc(&mut rng);
        let top = f.logmag().iter().cloned().fold(f64::MIN, f64::max).exp();
        for frac in [0.05, 0.2, 0.5] {
            let mu = frac * top;
            let exact = f.hl_superlevel_measure(mu.ln());
            let (lo, hi) = f.hull();
            let reach = exact + (hi - lo) + 1.0;
            let (a, b) = (lo - reach, hi + reach);
            let n = 20_000;
            let dx = (b - a) / n as f64;
            let count = (0..n).filter(|&i| f.hl_at(a + (i as f64 + 0.5) * dx) > mu).count() as f64 * dx;
            assert!((count - exact).abs() <= 4.0 * dx * (f.pieces() as f64 + 2.0), "{count} vs {exact}");
        }
    }
}

#[test]
fn stopping_intervals_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut seen = 0;
    for _ in 0..60 {
        let f = random_pc(&mut rng);
        let lambda = 10f64.powf(rng.random_range(-1.0..1.5));
        let beta = if rng.random_bool(0.5) { Beta::Zero } else { Beta::Third };
        let finest = 2f64.powi(-14);
        let Ok(s) = f.stopping_intervals(lambda, beta, finest) else { continue };
        seen += 1;
        for w in s.windows(2) {
            assert!(w[0].right() <= w[1].left(), "overlap");
        }
        for i in &s {
            let avg = f.ln_average(i).exp();
            assert!(avg > lambda && avg <= 2.0 * lambda * (1.0 + 1e-12), "{avg} vs λ={lambda}");
        }
        // union = {M^{D^β} f > λ} at points away from breakpoints
        for x in eval_points(&f, &mut rng) {
            if f.breakpoints().iter().any(|b| (b - x).abs() < 1e-3) {
                continue;
            }
            let inside = s.iter().any(|i| i.contains(x));
            assert_eq!(inside, f.dyadic_at(x, beta) > lambda, "x={x}");
        }
    }
    assert!(seen > 30);
}

#[test]
fn grid_paths_on_indicator() {
    let s = GridSpec::new(16.0, 2048).unwrap();
    let f = GridFunction::parse("rect:a=0,b=1", s).unwrap();
    let hl = hl_maximal(&f);
    let d0 = dyadic_maximal(&f, Beta::Zero);
    let at = |g: &GridFunction, x: f64| g.values()[s.nearest(x)].re;
    assert_eq!(at(&hl, 0.5), 1.0);
    assert!((at(&hl, 2.0) - 0.5).abs() < 0.02);
    assert_eq!(at(&d0, 0.5), 1.0);
    assert_eq!(at(&d0, 1.5), 0.5);
    assert_eq!(at(&d0, -0.5), 0.0);
    let st = stopping_intervals(&f, 0.6, Beta::Zero).unwrap();
    assert_eq!(st, vec![DyadicInterval::new(Beta::Zero, 0, 0)]);
}

#[test]
fn radial_maximal_of_point_mass() {
    let s = GridSpec::new(64.0, 8192).unwrap();
    let lattice = HeightLattice::dyadic(6, -6, 4);
    let mu = RadonMeasure::new(vec![(0.0, 1.0)], None).unwrap();
    let field = poisson_extend_measure(&mu, s, &lattice).unwrap();
    let m = radial_maximal(&field);
    for t in [0.125, 0.5, 1.0, -2.0, 8.0, -32.0] {
        let v = m.values()[s.nearest(t)].re;
        assert!((v - 1.0 / (2.0 * PI * t.abs())).abs() <= 1e-12 / t.abs(), "t={t}: {v}");
    }
    let n0 = nontangential_maximal(&field, ConeSpec::new(0.0).unwrap());
    assert_eq!(n0.values(), m.values());
}

#[test]
fn maximal_sandwich_on_corpus() {
    let s = GridSpec::new(256.0, 32768).unwrap();
    let lattice = HeightLattice::dyadic(10, -8, 2);
    for t in ["gauss:s=1", "cauchy:y=1", "bump:c=0,r=2", "bump:c=1,r=3", "gauss:s=3,c=-2"] {
        let f = GridFunction::parse(t, s).unwrap();
        let u = poisson_extend(&f, &lattice);
        let hl = hl_maximal(&f);
        let rad = radial_maximal(&u);
        let mut prev = rad.clone();
        for alpha in [0.5, 1.0, 2.0] {
            let ntg = nontangential_maximal(&u, ConeSpec::new(alpha).unwrap());
            for j in (0..s.points).filter(|&j| s.x(j).abs() <= s.half_width / 2.0) {
                let (m, r, n, p) = (hl.values()[j].re, rad.values()[j].re, ntg.values()[j].re, prev.values()[j].re);
                assert!(m / (2.0 * PI) <= r * 1.01, "{t} x={}: lower", s.x(j));
                assert!(r <= n && p <= n, "{t}: cone monotonicity");
                assert!(n <= (1.0 + 2.0 * alpha / PI) * m * 1.01, "{t} α={alpha} x={}: {n} vs {m}", s.x(j));
            }
            prev = ntg;
        }
    }
}

#[test]
fn counterexample_tlog() {
    let phi = GrowthFunction::t_log();
    let rep = build_counterexample(&phi, &phi, 3).unwrap();
    assert_eq!(rep.records.len(), 3);
    for r in &rep.records {
        let k = r.k as f64;
        let ln_height = r.log10_height * std::f64::consts::LN_10;
        let target = 2.0 * 4f64.powf(k);
        assert!((ln_height - target).abs() <= 0.1 * target, "k={k}: ln(2^k t_k) = {ln_height}");
        // |I_k| = 1/(2^k Φ₁(2^k t_k)) from the stored t_k
        let t = 10f64.powf(r.log10_t);
        let ln_len = -k * std::f64::consts::LN_2 - phi.ln_eval(2f64.powf(k) * t);
        assert!((ln_len - r.log10_len * std::f64::consts::LN_10).abs() <= 1e-12 * ln_len.abs());
        assert!((r.modular_fk - 2f64.powf(-k)).abs() < 1e-12);
    }
    assert!(rep.records.windows(2).all(|w| w[1].a_k > w[0].a_k || w[1].log10_len < -15.0));
    assert!(rep.modular_partial_sums.iter().all(|s| *s <= 1.0));
    assert!(rep.ratio_trend.iter().all(|r| *r >= 1.8), "{:?}", rep.ratio_trend);
}

#[test]
fn counterexample_first_term_against_exact_maximal() {
    let phi = GrowthFunction::t_log();
    let rep = build_counterexample(&phi, &phi, 1).unwrap();
    let r = &rep.records[0];
    let f = rep.term_function(1).unwrap();
    let c = f.logmag()[0].exp();
    let len = 10f64.powf(r.log10_len);
    // closed form for a single plateau: |{M f > λ}| = 2cℓ/λ − ℓ
    for frac in [1e-6, 1e-3, 0.1, 0.7, 0.999] {
        let lam: f64 = frac * c;
        let exact = f.hl_superlevel_measure(lam.ln());
        let closed = 2.0 * c * len / lam - len;
        assert!((exact - closed).abs() <= 1e-10 * closed, "{exact} vs {closed}");
    }
    // layer cake: ∫Φ(M f) = ∫₀^c Φ′(λ)|{M f > λ}| dλ
    let modular = tanh_sinh(|lam| phi.deriv(lam) * f.hl_superlevel_measure(lam.ln()), 0.0, c);
    let lb = 10f64.powf(r.log10_lower_bound);
    assert!(modular >= lb, "{modular} < {lb}");
    assert!(lb >= 2.0 * 0.999);
}

#[test]
fn counterexample_needs_failing_pair() {
    let p2 = GrowthFunction::power(2.0);
    assert_eq!(build_counterexample(&p2, &p2, 3).unwrap_err(), OrlabError::DominationHolds);
    let phi = GrowthFunction::t_log();
    assert_eq!(build_counterexample(&phi, &phi, 6).unwrap_err(), OrlabError::SearchOverflow { reached: 5 });
}
