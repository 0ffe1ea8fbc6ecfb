use num_complex::Complex64;
use orlab::extension::{cauchy_transform, conjugate_extend, conjugate_kernel, poisson_extend, poisson_kernel, HeightLattice};
use orlab::hilbert::{analytic_boundary, hilbert_maximal, hilbert_transform, EpsSchedule, HilbertMethod};
use orlab::norms::luxemburg_norm;
use orlab::{GridFunction, GridSpec, GrowthFunction, OrlabError};

fn grid() -> GridSpec {
    GridSpec::new(256.0, 32768).unwrap()
}

fn smooth_corpus(s: GridSpec) -> Vec<GridFunction> {
    ["gauss:s=1", "cauchy:y=1", "bump:c=0,r=2", "bump:c=1,r=3", "gauss:s=3,c=-2"]
        .iter()
        .map(|t| GridFunction::parse(t, s).unwrap())
        .collect()
}

fn max_diff_window(a: &GridFunction, b: &dyn Fn(usize) -> Complex64, window: f64) -> f64 {
    let s = a.spec();
    (0..s.points).filter(|&j| s.x(j).abs() <= window).fold(0.0, |m, j| m.max((a.values()[j] - b(j)).norm()))
}

#[test]
fn cauchy_density_maps_to_conjugate_kernel() {
    let s = grid();
    let f = GridFunction::parse("cauchy:y=1", s).unwrap();
    for method in [HilbertMethod::pv(), HilbertMethod::Spectral] {
        let hf = hilbert_transform(&f, &method).unwrap();
        let e = max_diff_window(&hf, &|j| Complex64::new(conjugate_kernel(1.0, s.x(j)), 0.0), s.half_width / 2.0);
        assert!(e <= 1e-4, "{method:?}: {e}");
    }
}

#[test]
fn even_input_gives_odd_output() {
    let s = grid();
    let f = GridFunction::parse("gauss:s=2", s).unwrap();
    for method in [HilbertMethod::pv(), HilbertMethod::Spectral] {
        let hf = hilbert_transform(&f, &method).unwrap();
        let v = hf.values();
        let defect = (1..s.points).fold(0.0f64, |m, j| m.max((v[j] + v[s.points - j]).norm()));
        assert!(defect <= 1e-10, "{method:?}: {defect}");
    }
}

#[test]
fn involution() {
    let s = grid();
    for f in smooth_corpus(s).into_iter().filter(|f| f.decay() != orlab::DecayClass::RationalDecay) {
        for method in [HilbertMethod::pv(), HilbertMethod::Spectral] {
            let hhf = hilbert_transform(&hilbert_transform(&f, &method).unwrap(), &method).unwrap();
            let d = hhf.add(&f).unwrap();
            let w = 7.0 * s.half_width / 8.0;
            let inner: f64 = (0..s.points).filter(|&j| s.x(j).abs() <= w).map(|j| d.values()[j].norm_sqr()).sum();
            let rel = (s.h() * inner).sqrt() / f.l2();
            assert!(rel <= 1e-3, "{method:?}: {rel}");
        }
    }
}

#[test]
fn methods_agree() {
    let s = grid();
    for f in smooth_corpus(s) {
        let a = hilbert_transform(&f, &HilbertMethod::pv()).unwrap();
        let b = hilbert_transform(&f, &HilbertMethod::Spectral).unwrap();
        let e = max_diff_window(&a, &|j| b.values()[j], s.half_width * 7.0 / 8.0);
        assert!(e <= 1e-3, "{e}");
    }
}

#[test]
fn pairing_identities() {
    let s = grid();
    let corpus = smooth_corpus(s);
    let m = HilbertMethod::Spectral;
    for f in &corpus {
        for g in &corpus {
            let hf = hilbert_transform(f, &m).unwrap();
            let hg = hilbert_transform(g, &m).unwrap();
            let scale = 1e-3 * f.l2() * g.l2();
            let skew = hf.inner(g).unwrap() + f.inner(&hg).unwrap();
            assert!(skew.norm() <= scale, "skew {}", skew.norm());
            let iso = hf.inner(&hg).unwrap() - f.inner(g).unwrap();
            assert!(iso.norm() <= scale, "iso {}", iso.norm());
        }
    }
}

#[test]
fn conjugate_extension_is_poisson_of_hilbert() {
    let s = grid();
    let lat = HeightLattice::dyadic(0, -4, 1);
    for f in smooth_corpus(s) {
        let v = conjugate_extend(&f, &lat);
        let u = poisson_extend(&hilbert_transform(&f, &HilbertMethod::Spectral).unwrap(), &lat);
        for i in 0..lat.len() {
            let e = v.slice(i).iter().zip(u.slice(i)).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            assert!(e <= 1e-3, "y={}: {e}", lat.heights()[i]);
        }
    }
}

#[test]
fn analytic_boundary_examples() {
    let s = grid();
    let f = GridFunction::parse("cauchy:y=1", s).unwrap();
    let b = analytic_boundary(&f, &HilbertMethod::pv()).unwrap();
    let e = max_diff_window(&b, &|j| Complex64::new(poisson_kernel(1.0, s.x(j)), conjugate_kernel(1.0, s.x(j))), s.half_width / 2.0);
    assert!(e <= 1e-4);
    let z = analytic_boundary(&GridFunction::zero(s), &HilbertMethod::pv()).unwrap();
    assert!(z.is_zero());
    let c = f.map(|v| v * Complex64::new(1.0, 0.5));
    assert!(matches!(analytic_boundary(&c, &HilbertMethod::pv()), Err(OrlabError::ComplexInput(_))));
}

#[test]
fn cauchy_slices_converge_to_boundary() {
    let s = grid();
    let lat = HeightLattice::default();
    let phi = GrowthFunction::power(2.0);
    for f in smooth_corpus(s) {
        let b = analytic_boundary(&f, &HilbertMethod::Spectral).unwrap();
        let c = cauchy_transform(&f, &lat);
        let mut prev = f64::INFINITY;
        for i in 0..lat.len() {
            let d = luxemburg_norm(&c.slice_function(i).sub(&b).unwrap(), &phi).unwrap().value;
            assert!(d <= prev);
            prev = d;
        }
        assert!(prev <= 1e-2, "{prev}");
    }
}

#[test]
fn maximal_function_examples() {
    let s = GridSpec::new(64.0, 4096).unwrap();
    let sched = EpsSchedule::maximal_default(s);
    let z = hilbert_maximal(&GridFunction::zero(s), &sched).unwrap();
    assert!(z.is_zero());
    let f = GridFunction::parse("cauchy:y=1", s).unwrap();
    let hm = hilbert_maximal(&f, &sched).unwrap();
    let hf = hilbert_transform(&f, &HilbertMethod::pv()).unwrap();
    for j in 0..s.points {
        assert!(hm.values()[j].re >= hf.values()[j].norm() - 1e-6);
    }
    assert!(hilbert_maximal(&f, &EpsSchedule::parse("0.001").unwrap()).is_err());
}

#[test]
fn narrow_bump_needs_a_finer_schedule() {
    // support-edge derivatives of the radius-1 bump vary on a scale near 2h
    let s = grid();
    let f = GridFunction::parse("bump:c=0,r=1", s).unwrap();
    let b = hilbert_transform(&f, &HilbertMethod::Spectral).unwrap();
    let fine = HilbertMethod::PvQuadrature(EpsSchedule::parse("4h,2h,1h").unwrap());
    let a = hilbert_transform(&f, &fine).unwrap();
    assert!(max_diff_window(&a, &|j| b.values()[j], s.half_width * 7.0 / 8.0) <= 1e-3);
}

#[test]
fn pv_rejects_bad_schedules() {
    let s = grid();
    let f = GridFunction::parse("gauss:s=1", s).unwrap();
    let bad = HilbertMethod::PvQuadrature(EpsSchedule::parse("2h,4h,8h").unwrap());
    assert!(matches!(hilbert_transform(&f, &bad), Err(OrlabError::MethodMismatch(_))));
}
