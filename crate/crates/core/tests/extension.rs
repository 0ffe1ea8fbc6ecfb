use num_complex::Complex64;
use orlab::extension::{
    cauchy_transform, conjugate_extend, conjugate_kernel, extend_direct, j_alpha, kernel_eval, poisson_extend,
    poisson_extend_measure, poisson_kernel, HeightLattice, JAlpha, KernelKind, RadonMeasure,
};
use orlab::norms::luxemburg_norm;
use orlab::{GridFunction, GridSpec, GrowthFunction};
use proptest::prelude::*;
use statrs::function::beta::beta;
use std::f64::consts::PI;

fn grid() -> GridSpec {
    GridSpec::new(64.0, 8192).unwrap()
}

fn max_err(a: &[Complex64], spec: GridSpec, window: f64, f: impl Fn(f64) -> Complex64) -> f64 {
    let mut m = 0.0f64;
    for (j, v) in a.iter().enumerate() {
        let x = spec.x(j);
        if x.abs() <= window {
            m = m.max((v - f(x)).norm());
        }
    }
    m
}

#[test]
fn kernel_examples() {
    assert!((kernel_eval(KernelKind::Poisson, 1.0, 0.3, 0.3).re - 1.0 / PI).abs() < 1e-15);
    assert!((kernel_eval(KernelKind::Conjugate, 1.0, 1.5, 0.5).re - 1.0 / (2.0 * PI)).abs() < 1e-15);
    for &(y, x, t) in &[(1.0, 0.0, 0.0), (0.01, 3.0, -2.0), (5.0, -1.0, 7.5), (1e-3, 1e-3, 0.0)] {
        let c = kernel_eval(KernelKind::Cauchy, y, x, t);
        let p = kernel_eval(KernelKind::Poisson, y, x, t).re;
        let q = kernel_eval(KernelKind::Conjugate, y, x, t).re;
        assert!((c.re - p).abs() <= 1e-14 * p.abs().max(1.0) && (c.im - q).abs() <= 1e-14 * q.abs().max(1.0));
    }
}

#[test]
fn j_alpha_examples() {
    assert!(matches!(j_alpha(2.0, 1.0), JAlpha::Value(v) if (v - PI).abs() < 1e-12));
    assert!(matches!(j_alpha(2.0, 2.0), JAlpha::Value(v) if (v - PI / 2.0).abs() < 1e-12));
    assert_eq!(j_alpha(1.0, 1.0), JAlpha::Divergent);
    assert_eq!(j_alpha(0.5, 3.0), JAlpha::Divergent);
}

proptest! {
    #[test]
    fn j_alpha_matches_beta(alpha in 1.05f64..6.0, y in 0.1f64..10.0) {
        // ∫₀^∞ u^{-1/2}(1+u)^{-α/2} du = B(1/2, (α−1)/2)
        let oracle = y.powf(1.0 - alpha) * beta(0.5, (alpha - 1.0) / 2.0);
        match j_alpha(alpha, y) {
            JAlpha::Value(v) => prop_assert!((v / oracle - 1.0).abs() < 1e-9, "{} vs {}", v, oracle),
            JAlpha::Divergent => prop_assert!(false),
        }
    }
}

#[test]
fn poisson_of_cauchy_density_is_semigroup() {
    let s = grid();
    let f = GridFunction::parse("cauchy:y=1", s).unwrap();
    let lat = HeightLattice::new(vec![0.5]).unwrap();
    let u = poisson_extend(&f, &lat);
    let e = max_err(u.slice(0), s, s.half_width, |x| Complex64::new(poisson_kernel(1.5, x), 0.0));
    assert!(e < 1e-4, "{e}");
    let v = conjugate_extend(&f, &lat);
    let e = max_err(v.slice(0), s, s.half_width, |x| Complex64::new(conjugate_kernel(1.5, x), 0.0));
    assert!(e < 1e-3, "{e}");
    let c = cauchy_transform(&f, &lat);
    let j0 = s.nearest(0.0);
    assert!((c.slice(0)[j0] - Complex64::new(1.0 / (PI * 1.5), 0.0)).norm() < 1e-3);
}

#[test]
fn constant_window_is_reproduced() {
    let s = GridSpec::new(1024.0, 32768).unwrap();
    let f = GridFunction::parse("rect:a=-921.6,b=921.6", s).unwrap();
    let lat = HeightLattice::default();
    let u = poisson_extend(&f, &lat);
    for i in 0..lat.len() {
        let e = max_err(u.slice(i), s, s.half_width / 4.0, |_| Complex64::new(1.0, 0.0));
        assert!(e < 1e-3, "y={}: {e}", lat.heights()[i]);
    }
    assert!(u.max_imag() <= 1e-12);
}

#[test]
fn odd_kernel_and_zero_input() {
    let s = grid();
    let lat = HeightLattice::default();
    let f = GridFunction::parse("gauss:s=2", s).unwrap();
    let v = conjugate_extend(&f, &lat);
    let j0 = s.nearest(0.0);
    for i in 0..lat.len() {
        assert!(v.slice(i)[j0].norm() < 1e-10);
    }
    let z = conjugate_extend(&GridFunction::zero(s), &lat);
    assert!(z.values.iter().flatten().all(|v| v.norm() == 0.0));
    let c = cauchy_transform(&f, &lat);
    let u = poisson_extend(&f, &lat);
    for i in 0..lat.len() {
        for j in 0..s.points {
            assert_eq!(c.slice(i)[j].re, u.slice(i)[j].re);
        }
    }
}

#[test]
fn direct_and_fast_cauchy_agree() {
    let s = GridSpec::new(32.0, 2048).unwrap();
    let lat = HeightLattice::new(vec![1.0, 0.5, 0.25]).unwrap();
    for spec in ["gauss:s=1", "cauchy:y=1", "bump:c=1,r=2"] {
        let f = GridFunction::parse(spec, s).unwrap();
        let fast = cauchy_transform(&f, &lat);
        let slow = extend_direct(&f, &lat, KernelKind::Cauchy);
        for i in 0..lat.len() {
            let e = max_err(fast.slice(i), s, s.half_width, |x| slow.slice(i)[s.nearest(x)]);
            assert!(e < 1e-6, "{spec} y={}: {e}", lat.heights()[i]);
        }
    }
}

#[test]
fn measure_examples() {
    let s = GridSpec::new(16.0, 1024).unwrap();
    let lat = HeightLattice::default();
    let j0 = s.nearest(0.0);
    let delta = RadonMeasure::new(vec![(0.0, 1.0)], None).unwrap();
    let fld = poisson_extend_measure(&delta, s, &lat).unwrap();
    for (i, &y) in lat.heights().iter().enumerate() {
        for j in (0..s.points).step_by(97) {
            assert_eq!(fld.slice(i)[j].re, poisson_kernel(y, s.x(j)));
        }
    }
    let big = RadonMeasure::new(vec![(0.0, PI)], None).unwrap();
    let fld = poisson_extend_measure(&big, s, &lat).unwrap();
    for (i, &y) in lat.heights().iter().enumerate() {
        assert!((fld.slice(i)[j0].re - 1.0 / y).abs() <= 1e-12 / y);
    }
    let two = RadonMeasure::new(vec![(-1.0, 0.5), (1.0, 0.5)], None).unwrap();
    let fld = poisson_extend_measure(&two, s, &lat).unwrap();
    for (i, &y) in lat.heights().iter().enumerate() {
        assert!((fld.slice(i)[j0].re - y / (PI * (1.0 + y * y))).abs() < 1e-14);
    }
    assert!((two.weighted_mass() - 0.5).abs() < 1e-15);
}

#[test]
fn shift_semigroup_on_lattice() {
    let s = grid();
    let lat = HeightLattice::dyadic(0, -4, 1);
    for spec in ["gauss:s=1", "bump:c=0,r=1", "cauchy:y=1"] {
        let f = GridFunction::parse(spec, s).unwrap();
        let u = poisson_extend(&f, &lat);
        for (bi, &beta) in lat.heights().iter().enumerate() {
            let slice = u.slice_function(bi);
            let again = poisson_extend(&slice, &lat);
            let sums: Vec<f64> = lat.heights().iter().map(|y| y + beta).collect();
            let mut sorted = sums.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            let direct = poisson_extend(&f, &HeightLattice::new(sorted.clone()).unwrap());
            for (yi, &sum) in sums.iter().enumerate() {
                let k = sorted.iter().position(|&v| v == sum).unwrap();
                let e = max_err(again.slice(yi), s, s.half_width, |x| direct.slice(k)[s.nearest(x)]);
                assert!(e < 1e-4, "{spec} beta={beta} y={}: {e}", lat.heights()[yi]);
            }
        }
    }
}

#[test]
fn slice_norm_properties() {
    let s = grid();
    let lat = HeightLattice::default();
    for phi in [GrowthFunction::power(2.0), GrowthFunction::power(3.0), GrowthFunction::power_log(2.0, 1.0)] {
        for spec in ["gauss:s=1", "cauchy:y=1", "bump:c=0,r=1", "bump:c=1,r=2"] {
            let f = GridFunction::parse(spec, s).unwrap();
            let nf = luxemburg_norm(&f, &phi).unwrap().value;
            let u = poisson_extend(&f, &lat);
            let mut prev_norm = f64::INFINITY;
            let mut prev_dist = f64::INFINITY;
            for (i, &y) in lat.heights().iter().enumerate() {
                let sl = u.slice_function(i);
                let n = luxemburg_norm(&sl, &phi).unwrap().value;
                // heights decrease, so norms must not decrease along the lattice
                assert!(n >= prev_norm.min(n) && (prev_norm == f64::INFINITY || n + 1e-8 >= prev_norm), "{phi} {spec}");
                assert!(n <= nf + 1e-6, "{phi} {spec} y={y}: {n} > {nf}");
                prev_norm = n;
                let d = luxemburg_norm(&sl.sub(&f).unwrap(), &phi).unwrap().value;
                assert!(d <= prev_dist, "{phi} {spec}");
                prev_dist = d;
                let bound = phi.inverse(2.0 / (PI * y)) * nf;
                assert!(sl.max_abs() <= bound, "{phi} {spec} y={y}");
            }
            assert!(prev_dist <= 1e-2, "{phi} {spec}: {prev_dist}");
            assert!(u.max_imag() <= 1e-12);
        }
    }
}
