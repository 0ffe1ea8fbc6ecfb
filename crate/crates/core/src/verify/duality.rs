use super::{trend_violation, Check, VerificationReport, VerifyConfig};
use crate::error::{OrlabError, Result};
use crate::extension::poisson_extend;
use crate::grid::GridFunction;
use crate::growth::complementary;
use crate::hilbert::analytic_boundary;
use crate::norms::{dual_norm_abs, luxemburg_norm, slice_norms};
use crate::GrowthFunction;

/// Pairing limits ∫U_f U_g → ∫fg (and the conjugated analytic variant),
/// the Hölder bound with the dual norm, and the sandwich ‖f‖ ≤ ‖f‖⁰ ≤ 2‖f‖
/// for the boundary function and for the field. The field's dual norm is
/// taken from its lowest slice, since the two coincide in the limit.
pub fn verify_duality(f: &GridFunction, g: &GridFunction, phi: &GrowthFunction, cfg: &VerifyConfig) -> Result<VerificationReport> {
    if f.spec() != g.spec() {
        return Err(OrlabError::SpecMismatch);
    }
    if !phi.is_n_function() {
        return Err(OrlabError::NotNFunction(phi.spec()));
    }
    let psi = complementary(phi).map_err(|e| OrlabError::ConjugateUnavailable(e.to_string()))?;
    let spec = f.spec();
    let h = spec.h();
    let lat = &cfg.lattice;

    // (a) harmonic pairing limit
    let (uf, ug) = (poisson_extend(f, lat), poisson_extend(g, lat));
    let target = f.inner(g)?;
    let scale = f.l2() * g.l2();
    let gaps: Vec<f64> = (0..lat.len())
        .map(|i| Ok((uf.slice_function(i).inner(&ug.slice_function(i))? - target).norm()))
        .collect::<Result<_>>()?;

    // (b) Hölder with the dual norm of g in L^Ψ (Ψ's conjugate is Φ)
    let nf = luxemburg_norm(f, phi)?.value;
    let g_dual = dual_norm_abs(&g.abs(), h, &psi, phi)?.norm.value;
    let dual = |v: &[f64]| -> Result<f64> { Ok(dual_norm_abs(v, h, phi, &psi)?.norm.value) };

    // (c) sandwiches
    let f_dual = dual(&f.abs())?;
    let norms = slice_norms(&uf.values, spec, phi)?;
    let nfield = norms.iter().map(|n| n.value).fold(0.0, f64::max);
    let lowest = uf.slice_function(lat.len() - 1);
    let field_dual = dual(&lowest.abs())?;
    let slack = |x: f64| cfg.sandwich_slack * x.max(1.0);
    let c = cfg.sandwich_factor;

    // (d) analytic pairing ∫F conj(G) along the lattice
    let real = f.max_imag() <= 1e-12 && g.max_imag() <= 1e-12;
    let mut checks = vec![
        Check::le("pairing trend", "∫U_f U_g(·+iy) → ∫fg", trend_violation(&gaps), 0.0, cfg.monotone_slack * scale.max(1e-300)),
        Check::le("pairing gap", "|∫U_f U_g(·+iy_min) − ∫fg| ≤ tol", *gaps.last().unwrap(), 0.0, cfg.norm_rtol * scale),
        Check::le("holder", "|∫fg| ≤ ‖f‖_Φ ‖g‖⁰_Ψ", target.norm(), nf * g_dual, cfg.norm_rtol * nf * g_dual),
        Check::le("boundary lower", "‖f‖ ≤ ‖f‖⁰", nf, f_dual, slack(nf)),
        Check::le("boundary upper", "‖f‖⁰ ≤ 2‖f‖", f_dual, c * nf, slack(nf)),
        Check::le("field lower", "‖F‖ ≤ ‖F‖⁰", nfield, field_dual, slack(nfield)),
        Check::le("field upper", "‖F‖⁰ ≤ 2‖F‖", field_dual, c * nfield, slack(nfield)),
    ];
    let mut notes = vec![
        format!("∫fg = {target}, gaps {gaps:?}"),
        format!("‖f‖ = {nf}, ‖f‖⁰ = {f_dual}, ‖F‖ = {nfield}, ‖F‖⁰ = {field_dual}, ‖g‖⁰_Ψ = {g_dual}"),
    ];
    if real {
        let (bf, bg) = (analytic_boundary(f, &cfg.method)?, analytic_boundary(g, &cfg.method)?);
        let bg_conj = bg.map(|v| v.conj());
        let (af, ag) = (poisson_extend(&bf, lat), poisson_extend(&bg_conj, lat));
        let t2 = bf.inner(&bg_conj)?;
        let s2 = bf.l2() * bg.l2();
        let g2: Vec<f64> = (0..lat.len())
            .map(|i| Ok((af.slice_function(i).inner(&ag.slice_function(i))? - t2).norm()))
            .collect::<Result<_>>()?;
        checks.push(Check::le(
            "analytic pairing gap",
            "∫F(·+iy)conj(G(·+iy)) → ∫(f+iHf)conj(g+iHg)",
            *g2.last().unwrap(),
            0.0,
            cfg.norm_rtol * s2,
        ));
        notes.push(format!("analytic target {t2}"));
    } else {
        notes.push("complex data: analytic pairing skipped".into());
    }
    Ok(VerificationReport::new(
        "duality",
        format!("phi={} factor={c}", phi.spec()),
        cfg,
        checks,
        notes,
    ))
}
