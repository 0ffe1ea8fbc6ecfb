use super::{trend_violation, Check, VerificationReport, VerifyConfig};
use crate::error::{OrlabError, Result};
use crate::extension::{cauchy_transform, poisson_extend, poisson_extend_measure, HeightLattice, RadonMeasure};
use crate::grid::{DecayClass, GridFunction};
use crate::hilbert::analytic_boundary;
use crate::norms::{luxemburg_norm, slice_norms};
use crate::GrowthFunction;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Data whose edge values exceed this fraction of the peak are not treated
/// as localised in the window.
const EDGE_FRACTION: f64 = 1e-2;

fn require_localised(f: &GridFunction) -> Result<()> {
    let n = f.len();
    let m = f.max_abs();
    let edge = f.values()[..n / 32].iter().chain(&f.values()[n - n / 32..]).fold(0.0f64, |a, v| a.max(v.norm()));
    if m > 0.0 && edge > EDGE_FRACTION * m {
        return Err(OrlabError::CorpusError(format!(
            "data reaches {:.3e} of its peak at the window edge",
            edge / m
        )));
    }
    Ok(())
}

fn lux(f: &GridFunction, phi: &GrowthFunction) -> Result<f64> {
    Ok(luxemburg_norm(f, phi)?.value)
}

/// Poisson representation: isometry, monotone slice norms, boundary
/// convergence, the interior bound and the round trip to f.
pub fn verify_poisson_representation(f: &GridFunction, phi: &GrowthFunction, cfg: &VerifyConfig) -> Result<VerificationReport> {
    if !phi.is_n_function() {
        return Err(OrlabError::NotNFunction(phi.spec()));
    }
    require_localised(f)?;
    let nf = lux(f, phi)?;
    let u = poisson_extend(f, &cfg.lattice);
    let norms: Vec<f64> = slice_norms(&u.values, f.spec(), phi)?.iter().map(|n| n.value).collect();
    let nfield = norms.iter().cloned().fold(0.0, f64::max);
    let mut dist = Vec::with_capacity(norms.len());
    let mut excess = f64::NEG_INFINITY;
    let mut violations = 0;
    for (i, &y) in cfg.lattice.heights().iter().enumerate() {
        let sl = u.slice_function(i);
        dist.push(lux(&sl.sub(f)?, phi)?);
        let bound = phi.inverse(2.0 / (PI * y)) * nfield;
        let e = sl.max_abs() - bound;
        if e > 0.0 {
            violations += 1;
        }
        excess = excess.max(e);
    }
    let rise = norms.windows(2).map(|w| (w[0] - w[1]).max(0.0)).fold(0.0, f64::max);
    let checks = vec![
        Check::approx("isometry", "‖U_f‖ = ‖f‖", nfield, nf, cfg.norm_rtol * nf),
        Check::le("slice norms monotone", "y ↦ ‖U_f(·+iy)‖ nonincreasing", rise, 0.0, cfg.monotone_slack * nf),
        Check::le("boundary trend", "‖U_f(·+iy) − f‖ → 0", trend_violation(&dist), 0.0, cfg.monotone_slack * nf),
        Check::le("interior bound", "|F(x+iy)| ≤ Φ⁻¹(2/(πy))‖F‖", excess.max(0.0), 0.0, 0.0),
        Check::le("round trip", "‖U_f(·+iy_min) − f‖ ≤ tol", *dist.last().unwrap(), 0.0, cfg.norm_rtol * nf),
    ];
    let notes = vec![
        format!("slice norms: {norms:?}"),
        format!("boundary distances: {dist:?}"),
        format!("interior-bound violations: {violations}"),
    ];
    Ok(VerificationReport::new("poisson_representation", format!("phi={} f=<{} points>", phi.spec(), f.len()), cfg, checks, notes))
}

fn interpolate(f: &GridFunction, x: f64) -> Complex64 {
    let s = f.spec();
    let u = (x + s.half_width) / s.h();
    if u < 0.0 || u > (s.points - 1) as f64 {
        return Complex64::new(0.0, 0.0);
    }
    let j = (u.floor() as usize).min(s.points - 2);
    let t = u - j as f64;
    f.values()[j] * (1.0 - t) + f.values()[j + 1] * t
}

/// Measure representation: pairings of U_μ against compactly supported test
/// functions converge to ∫φ dμ.
pub fn verify_measure_representation(mu: &RadonMeasure, testfns: &[GridFunction], cfg: &VerifyConfig) -> Result<VerificationReport> {
    verify_measure_against(mu, mu, testfns, cfg)
}

/// As [`verify_measure_representation`], with the field built from `field_of`
/// and the targets from `claimed` (they differ only in negative controls).
pub fn verify_measure_against(
    field_of: &RadonMeasure,
    claimed: &RadonMeasure,
    testfns: &[GridFunction],
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let Some(first) = testfns.first() else {
        return Err(OrlabError::Invalid("no test functions".into()));
    };
    let spec = first.spec();
    for phi in testfns {
        if phi.spec() != spec {
            return Err(OrlabError::SpecMismatch);
        }
        if phi.decay() != DecayClass::CompactSupport {
            return Err(OrlabError::CorpusError("test functions must have compact support".into()));
        }
    }
    // The atom part of U_μ is a spike of width y, narrower than the grid at
    // the lowest heights; its pairing ∫φ(x)P_y(x − a)dx is evaluated in the
    // adjoint form U_φ(a + iy). The density part is paired on the nodes.
    let density_field = match field_of.density() {
        Some(d) => Some(poisson_extend_measure(&RadonMeasure::new(vec![], Some(d.clone()))?, spec, &cfg.lattice)?),
        None => None,
    };
    let h = spec.h();
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for (n, phi) in testfns.iter().enumerate() {
        let mut target: Complex64 = claimed.atoms().iter().map(|&(x, w)| interpolate(phi, x) * w).sum();
        if let Some(d) = claimed.density() {
            target += phi.values().iter().zip(d.values()).map(|(a, b)| a * b).sum::<Complex64>() * h;
        }
        let uphi = poisson_extend(phi, &cfg.lattice);
        let gaps: Vec<f64> = (0..cfg.lattice.len())
            .map(|i| {
                let sl = uphi.slice_function(i);
                let mut p: Complex64 = field_of.atoms().iter().map(|&(x, w)| interpolate(&sl, x) * w).sum();
                if let Some(df) = &density_field {
                    p += df.values[i].iter().zip(phi.values()).map(|(a, b)| a * b).sum::<Complex64>() * h;
                }
                (p - target).norm()
            })
            .collect();
        let scale = 1.0 + target.norm();
        checks.push(Check::le(
            &format!("pairing trend #{n}"),
            "∫φ U_μ(·+iy) → ∫φ dμ",
            trend_violation(&gaps),
            0.0,
            cfg.monotone_slack * scale,
        ));
        checks.push(Check::le(
            &format!("pairing gap #{n}"),
            "|∫φ U_μ(·+iy_min) − ∫φ dμ| ≤ tol(1+|target|)",
            *gaps.last().unwrap(),
            0.0,
            cfg.norm_rtol * scale,
        ));
        notes.push(format!("test function #{n}: target {target}, gaps {gaps:?}"));
    }
    Ok(VerificationReport::new(
        "measure_representation",
        format!("{} atoms, density: {}, {} test functions", field_of.atoms().len(), field_of.density().is_some(), testfns.len()),
        cfg,
        checks,
        notes,
    ))
}

/// The 3×3 panel Re z ∈ {−2, 0, 2}, Im z ∈ {0.5, 1, 2}.
fn panel() -> Vec<Complex64> {
    let mut v = Vec::new();
    for y in [2.0, 1.0, 0.5] {
        for x in [-2.0, 0.0, 2.0] {
            v.push(Complex64::new(x, y));
        }
    }
    v
}

/// sup over the panel of |∫ g(t)/(t − z̄) dt|; zero for boundary values of
/// analytic functions.
pub fn membership_residual(g: &GridFunction) -> f64 {
    panel().iter().map(|z| g.cauchy_integral(z.conj()).norm()).fold(0.0, f64::max)
}

/// Cauchy representation for g = Re f + iH(Re f): membership, agreement of
/// the Cauchy integral with the Poisson extension on the panel, and
/// convergence of S(Re f) slices to g.
pub fn verify_cauchy_representation(f: &GridFunction, phi: &GrowthFunction, cfg: &VerifyConfig) -> Result<VerificationReport> {
    if !phi.is_n_function() {
        return Err(OrlabError::NotNFunction(phi.spec()));
    }
    let spec = f.spec();
    let u = f.with_values(f.values().iter().map(|v| Complex64::new(v.re, 0.0)).collect())?;
    let g = if cfg.manufacture_analytic { analytic_boundary(&u, &cfg.method)? } else { f.clone() };
    let scale = g.l1();
    let residual = membership_residual(&g);

    let pts = panel();
    let heights = HeightLattice::new(vec![2.0, 1.0, 0.5])?;
    let pe = poisson_extend(&g, &heights);
    let mut gap = 0.0f64;
    for z in &pts {
        let i = heights.heights().iter().position(|&y| y == z.im).expect("panel height");
        let cauchy = g.cauchy_integral(*z) / Complex64::new(0.0, 2.0 * PI);
        gap = gap.max((cauchy - pe.values[i][spec.nearest(z.re)]).norm());
    }

    let s = cauchy_transform(&u, &cfg.lattice);
    let ng = lux(&g, phi)?;
    let mut dist = Vec::new();
    for i in 0..cfg.lattice.len() {
        dist.push(lux(&s.slice_function(i).sub(&g)?, phi)?);
    }
    let checks = vec![
        Check::le("membership", "∫ g(t)/(t − z̄) dt = 0", residual, cfg.membership_tol * scale, 0.0),
        Check::le("cauchy = poisson", "(1/2πi)∫ g/(t − z) = U_g(z)", gap, 0.0, cfg.pointwise_tol * g.max_abs()),
        Check::le("S-slice trend", "S(f)(·+iy) → g", trend_violation(&dist), 0.0, cfg.monotone_slack * ng),
        Check::le("S-slice gap", "‖S(f)(·+iy_min) − g‖ ≤ tol", *dist.last().unwrap(), 0.0, cfg.norm_rtol * ng),
    ];
    let notes = vec![format!("‖g‖_1 = {scale}"), format!("S-slice distances: {dist:?}")];
    Ok(VerificationReport::new(
        "cauchy_representation",
        format!("phi={} manufactured={}", phi.spec(), cfg.manufacture_analytic),
        cfg,
        checks,
        notes,
    ))
}
