use super::{Check, VerificationReport, VerifyConfig};
use crate::error::{OrlabError, Result};
use crate::extension::HalfPlaneField;
use crate::norms::slice_norms;
use crate::tolerances::MAX_EXCLUDED_FRACTION;
use crate::GrowthFunction;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// G(re^{iθ}) on radii × a uniform angle grid on [−π, π). Entries mapped
/// outside the stored half-plane panel are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskField {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub values: Vec<Vec<Option<Complex64>>>,
}

impl DiskField {
    pub fn theta(&self, m: usize) -> f64 {
        -PI + 2.0 * PI * m as f64 / self.angles as f64
    }

    pub fn excluded_fraction(&self, i: usize) -> f64 {
        self.values[i].iter().filter(|v| v.is_none()).count() as f64 / self.angles as f64
    }

    /// (1/2π)∫|G(re^{iθ})|dθ over the covered angles.
    pub fn circle_average(&self, i: usize) -> f64 {
        self.values[i].iter().flatten().map(|v| v.norm()).sum::<f64>() / self.angles as f64
    }
}

/// z = i(1 − ω)/(1 + ω).
pub fn cayley(w: Complex64) -> Complex64 {
    Complex64::new(0.0, 1.0) * (1.0 - w) / (1.0 + w)
}

/// Bilinear interpolation in (x, ln y); `None` outside the panel.
fn sample(field: &HalfPlaneField, z: Complex64) -> Option<Complex64> {
    let s = field.spec;
    let hs = field.lattice.heights();
    let (x, y) = (z.re, z.im);
    if !(y <= hs[0] && y >= hs[hs.len() - 1]) || x.abs() > s.half_width - s.h() {
        return None;
    }
    let i = hs.iter().position(|&t| t <= y).unwrap().max(1) - 1;
    let i1 = (i + 1).min(hs.len() - 1);
    let ty = if i1 == i { 0.0 } else { (hs[i].ln() - y.ln()) / (hs[i].ln() - hs[i1].ln()) };
    let u = (x + s.half_width) / s.h();
    let j = (u.floor() as usize).min(s.points - 2);
    let tx = u - j as f64;
    let row = |k: usize| field.values[k][j] * (1.0 - tx) + field.values[k][j + 1] * tx;
    Some(row(i) * (1.0 - ty) + row(i1) * ty)
}

/// Transfers F to the disk and checks the circle averages against
/// Φ⁻¹(1)‖F‖.
pub fn cayley_transfer(
    field: &HalfPlaneField,
    phi: &GrowthFunction,
    radii: &[f64],
    cfg: &VerifyConfig,
) -> Result<(DiskField, VerificationReport)> {
    if radii.iter().any(|r| !(0.0..1.0).contains(r)) {
        return Err(OrlabError::Invalid("radii must lie in [0, 1)".into()));
    }
    let m = cfg.angles;
    let mut disk = DiskField { radii: radii.to_vec(), angles: m, values: Vec::new() };
    for &r in radii {
        let row = (0..m)
            .map(|k| {
                let th = -PI + 2.0 * PI * k as f64 / m as f64;
                sample(field, cayley(Complex64::from_polar(r, th)))
            })
            .collect();
        disk.values.push(row);
    }
    let norm = slice_norms(&field.values, field.spec, phi)?.iter().map(|n| n.value).fold(0.0, f64::max);
    let sup = field.values.iter().flatten().fold(0.0f64, |a, v| a.max(v.norm()));
    let bound = cfg.disk_bound_factor * phi.inverse(1.0) * norm;
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    // G(0) through the map against the stored value at x = 0, y = 1
    let g0 = sample(field, cayley(Complex64::new(0.0, 0.0)));
    let j0 = field.spec.nearest(0.0);
    let stored = field.lattice.heights().iter().position(|&y| y == 1.0).filter(|_| field.spec.x(j0) == 0.0);
    if let (Some(g0), Some(i)) = (g0, stored) {
        let fi = field.values[i][j0];
        checks.push(Check::le("center", "G(0) = F(i)", (g0 - fi).norm(), 0.0, 1e-6));
        notes.push(format!("G(0) = {g0}, F(i) = {fi}"));
    }
    for (i, &r) in radii.iter().enumerate() {
        let ex = disk.excluded_fraction(i);
        if ex > MAX_EXCLUDED_FRACTION {
            return Err(OrlabError::CoverageTooLow { fraction: ex });
        }
        let avg = disk.circle_average(i);
        let tol = cfg.norm_rtol * norm + ex * sup;
        checks.push(Check::le(&format!("circle r={r}"), "(1/2π)∫|G(re^{iθ})| ≤ Φ⁻¹(1)‖F‖", avg, bound, tol));
        notes.push(format!("r={r}: average {avg}, excluded {ex}"));
    }
    let rep = VerificationReport::new(
        "cayley_transfer",
        format!("phi={} radii={radii:?} angles={m}", phi.spec()),
        cfg,
        checks,
        notes,
    );
    Ok((disk, rep))
}
