use super::{gate_failed, Check, VerificationReport, VerifyConfig};
use crate::error::{OrlabError, Result};
use crate::extension::{cauchy_transform, conjugate_extend, poisson_extend};
use crate::grid::GridFunction;
use crate::growth::{check_nabla2, estimate_indices, Probe};
use crate::hilbert::{analytic_boundary, hilbert_maximal, hilbert_transform, EpsSchedule};
use crate::maximal::{hl_maximal, nontangential_maximal, radial_maximal, ConeSpec};
use crate::norms::{luxemburg_norm, slice_norms};
use crate::GrowthFunction;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Cap for the reported upper ratio ‖S(f)‖/‖f‖; any finite value passes.
const RATIO_CAP: f64 = 1e3;

/// Runs the ∇₂ gate; `Some(report)` means the gate failed.
fn gate(theorem: &str, scenario: &str, phi: &GrowthFunction, cfg: &VerifyConfig) -> Result<Option<VerificationReport>> {
    let probe = Probe::default();
    let rep = check_nabla2(phi, &probe)?;
    if rep.satisfied {
        return Ok(None);
    }
    let a = estimate_indices(phi, &probe)?.a_asymptotic;
    Ok(Some(gate_failed(theorem, scenario.into(), cfg, phi, a)))
}

fn require_real(f: &GridFunction) -> Result<()> {
    let im = f.max_imag();
    if im > 1e-12 {
        return Err(OrlabError::ComplexInput(im));
    }
    Ok(())
}

fn lux(f: &GridFunction, phi: &GrowthFunction) -> Result<f64> {
    Ok(luxemburg_norm(f, phi)?.value)
}

/// L² norm over |x| ≤ w.
fn l2_window(v: &[Complex64], f: &GridFunction, w: f64) -> f64 {
    let s = f.spec();
    let sum: f64 = (0..s.points).filter(|&j| s.x(j).abs() <= w).map(|j| v[j].norm_sqr()).sum();
    (sum * s.h()).sqrt()
}

/// Riesz projection S(f) = f + iHf: lower and upper norm bounds, the
/// involution H∘H = −I and the pairing identities.
pub fn verify_riesz_projection(f: &GridFunction, phi: &GrowthFunction, cfg: &VerifyConfig) -> Result<VerificationReport> {
    require_real(f)?;
    let scenario = format!("phi={} partner={}", phi.spec(), cfg.partner);
    if let Some(rep) = gate("riesz_projection", &scenario, phi, cfg)? {
        return Ok(rep);
    }
    let spec = f.spec();
    let g = GridFunction::parse(&cfg.partner, spec)?;
    let nf = lux(f, phi)?;
    let boundary = analytic_boundary(f, &cfg.method)?;
    let field = cauchy_transform(f, &cfg.lattice);
    let slices = slice_norms(&field.values, spec, phi)?;
    let ns = slices.iter().map(|n| n.value).fold(lux(&boundary, phi)?, f64::max);

    let hf = hilbert_transform(f, &cfg.method)?;
    let hhf = hilbert_transform(&hf, &cfg.method)?;
    let hg = hilbert_transform(&g, &cfg.method)?;
    let window = 7.0 / 8.0 * spec.half_width;
    let sum: Vec<Complex64> = hhf.values().iter().zip(f.values()).map(|(a, b)| a + b).collect();
    let fnorm = l2_window(f.values(), f, window);
    let involution = if fnorm > 0.0 { l2_window(&sum, f, window) / fnorm } else { 0.0 };

    let scale = f.l2() * g.l2();
    let rel = |x: Complex64| if scale > 0.0 { x.norm() / scale } else { x.norm() };
    let fg = f.inner(&g)?;
    let id1 = rel(hf.inner(&hg)? - fg);
    let id2 = rel(hf.inner(&g)? + f.inner(&hg)?);
    let bg = analytic_boundary(&g, &cfg.method)?;
    let analytic = rel(boundary.inner(&bg)?);

    let ratio = if nf > 0.0 { ns / nf } else { 0.0 };
    let checks = vec![
        Check::le("lower bound", "‖f‖ ≤ ‖S(f)‖", nf, ns, cfg.norm_rtol * nf),
        Check::le("upper ratio finite", "‖S(f)‖ ≤ C‖f‖", ratio, RATIO_CAP, 0.0),
        Check::le("involution", "H(H(f)) = −f", involution, 0.0, cfg.pointwise_tol),
        Check::le("pairing HfHg", "∫H(f)H(g) = ∫fg", id1, 0.0, cfg.pointwise_tol),
        Check::le("pairing Hf g", "∫H(f)g = −∫fH(g)", id2, 0.0, cfg.pointwise_tol),
        Check::le("analytic product", "∫(f+iHf)(g+iHg) = 0", analytic, 0.0, cfg.pointwise_tol),
    ];
    let notes = vec![format!("‖f‖ = {nf}, ‖S(f)‖ = {ns}, ratio = {ratio}")];
    Ok(VerificationReport::new("riesz_projection", scenario, cfg, checks, notes))
}

/// Norm chains ‖F‖ ≤ ‖M_rad F‖ ≤ ‖M^α_ntg F‖ and ‖H(f)‖ ≤ ‖H̃(f)‖, with the
/// pointwise sandwich and the bound H̃f ≤ (1+1/π)M_HL f + M_rad(V_f).
pub fn verify_maximal_equivalences(f: &GridFunction, phi: &GrowthFunction, alpha: f64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let cone = ConeSpec::new(alpha)?;
    require_real(f)?;
    let scenario = format!("phi={} alpha={alpha}", phi.spec());
    if let Some(rep) = gate("maximal_equivalences", &scenario, phi, cfg)? {
        return Ok(rep);
    }
    let spec = f.spec();
    let lat = &cfg.maximal_lattice;
    let u = poisson_extend(f, lat);
    let v = conjugate_extend(f, lat);
    let mrad = radial_maximal(&u);
    let mntg = nontangential_maximal(&u, cone);
    let mhl = hl_maximal(f);
    let mradv = radial_maximal(&v);
    let hf = hilbert_transform(f, &cfg.method)?;
    let htil = hilbert_maximal(f, &EpsSchedule::maximal_default(spec))?;
    let boundary = analytic_boundary(f, &cfg.method)?;

    let nf = lux(f, phi)?;
    let nfield = slice_norms(&u.values, spec, phi)?.iter().map(|n| n.value).fold(0.0, f64::max);
    let (nrad, nntg) = (lux(&mrad, phi)?, lux(&mntg, phi)?);
    let (nh, nhtil, nb) = (lux(&hf, phi)?, lux(&htil, phi)?, lux(&boundary, phi)?);
    let tol = cfg.norm_rtol * nf;

    let sup = f.max_abs();
    let ptol = cfg.norm_rtol * sup;
    let w = cfg.interior_fraction * spec.half_width;
    let (mut lower, mut cone_order, mut upper, mut htil_excess, mut eq0) = (f64::MIN, f64::MIN, f64::MIN, f64::MIN, 0.0f64);
    for j in (0..spec.points).filter(|&j| spec.x(j).abs() <= w) {
        let (m, r, n) = (mhl.values()[j].re, mrad.values()[j].re, mntg.values()[j].re);
        lower = lower.max(m / (2.0 * PI) - r);
        cone_order = cone_order.max(r - n);
        upper = upper.max(n - (1.0 + 2.0 * alpha / PI) * m);
        htil_excess = htil_excess.max(htil.values()[j].re - (1.0 + 1.0 / PI) * m - mradv.values()[j].re);
        eq0 = eq0.max((n - r).abs());
    }
    let mut checks = vec![
        Check::le("field vs radial", "‖F‖ ≤ ‖M_rad(F)‖", nfield, nrad, tol),
        Check::le("radial vs cone", "‖M_rad(F)‖ ≤ ‖M^α_ntg(F)‖", nrad, nntg, tol),
        Check::le("cone ratio finite", "‖M^α_ntg(F)‖ ≤ C‖F‖", nntg / nfield.max(f64::MIN_POSITIVE), RATIO_CAP, 0.0),
        Check::le("boundary vs projection", "‖f‖ ≤ ‖f + iH(f)‖", nf, nb, tol),
        Check::le("hilbert vs maximal hilbert", "‖H(f)‖ ≤ ‖H̃(f)‖", nh, nhtil, tol),
        Check::le("maximal hilbert ratio finite", "‖H̃(f)‖ ≤ C₂‖f‖", nhtil / nf.max(f64::MIN_POSITIVE), RATIO_CAP, 0.0),
        Check::le("pointwise lower", "M_HL/(2π) ≤ M_rad(U_f)", lower.max(0.0), 0.0, ptol),
        Check::le("pointwise cone order", "M_rad ≤ M^α_ntg", cone_order.max(0.0), 0.0, 0.0),
        Check::le("pointwise upper", "M^α_ntg ≤ (1+2α/π)M_HL", upper.max(0.0), 0.0, ptol),
        Check::le("maximal hilbert bound", "H̃f ≤ (1+1/π)M_HL f + M_rad(V_f)", htil_excess.max(0.0), 0.0, ptol),
    ];
    if alpha == 0.0 {
        checks.push(Check::le("zero aperture", "M^0_ntg = M_rad", eq0, 0.0, 0.0));
    }
    let notes = vec![format!(
        "norms: f {nf}, F {nfield}, M_rad {nrad}, M_ntg {nntg}, Hf {nh}, H̃f {nhtil}, f+iHf {nb}, M_HL {}",
        lux(&mhl, phi)?
    )];
    Ok(VerificationReport::new("maximal_equivalences", scenario, cfg, checks, notes))
}
