//! Modulars, Luxemburg and dual norms on grid functions.

use crate::error::{OrlabError, Result};
use crate::grid::{GridFunction, GridSpec};
use crate::growth::{complementary, GrowthFunction};
use crate::quad::{geomspace, golden_max};
use crate::tolerances::LUX_BRACKET_RTOL;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormResult {
    pub value: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub modular_at_value: f64,
}

impl NormResult {
    fn zero() -> Self {
        NormResult { value: 0.0, bracket: (0.0, 0.0), iterations: 0, modular_at_value: 0.0 }
    }
}

/// ∫Φ(|f|/λ) by the uniform rule over samples `abs` with spacing `h`.
pub fn modular_abs(abs: &[f64], h: f64, phi: &GrowthFunction, lambda: f64) -> f64 {
    let mut s = 0.0;
    for &a in abs {
        if a > 0.0 {
            s += phi.eval(a / lambda);
        }
    }
    let v = h * s;
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

pub fn modular(f: &GridFunction, phi: &GrowthFunction, lambda: f64) -> f64 {
    assert!(lambda > 0.0, "lambda must be positive");
    modular_abs(&f.abs(), f.spec().h(), phi, lambda)
}

/// Luxemburg norm of samples; bisection on λ with the bracket shrunk to
/// relative width `LUX_BRACKET_RTOL`. The value is the upper bracket end,
/// so the modular there is ≤ 1.
pub fn luxemburg_abs(abs: &[f64], h: f64, phi: &GrowthFunction) -> Result<NormResult> {
    let l1 = h * abs.iter().sum::<f64>();
    if l1 == 0.0 {
        return Ok(NormResult::zero());
    }
    let m = |l: f64| modular_abs(abs, h, phi, l);
    let mut iterations = 0usize;
    let mut hi = l1;
    let mut lo;
    let mut any_finite = false;
    if m(hi) > 1.0 {
        loop {
            lo = hi;
            hi *= 2.0;
            iterations += 1;
            let v = m(hi);
            any_finite |= v.is_finite();
            if v <= 1.0 {
                break;
            }
            if hi > 1e300 {
                return Err(if any_finite { OrlabError::Invalid("no bracket for the norm".into()) } else { OrlabError::NonFinite });
            }
        }
    } else {
        lo = hi;
        loop {
            iterations += 1;
            let v = m(lo * 0.5);
            if v > 1.0 {
                hi = lo;
                lo *= 0.5;
                break;
            }
            lo *= 0.5;
            if lo < 1e-300 {
                return Ok(NormResult { value: lo, bracket: (0.0, lo), iterations, modular_at_value: m(lo) });
            }
        }
    }
    while hi - lo > LUX_BRACKET_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if m(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(NormResult { value: hi, bracket: (lo, hi), iterations, modular_at_value: m(hi) })
}

pub fn luxemburg_norm(f: &GridFunction, phi: &GrowthFunction) -> Result<NormResult> {
    luxemburg_abs(&f.abs(), f.spec().h(), phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualNorm {
    pub norm: NormResult,
    /// k maximising the pairing with g_k = Φ′(k|f|)
    pub k: f64,
}

/// Dual norm with a precomputed conjugate Ψ.
pub fn dual_norm_abs(abs: &[f64], h: f64, phi: &GrowthFunction, psi: &GrowthFunction) -> Result<DualNorm> {
    let lux = luxemburg_abs(abs, h, phi)?;
    if lux.value == 0.0 {
        return Ok(DualNorm { norm: NormResult::zero(), k: 0.0 });
    }
    let pairing = |lk: f64| -> f64 {
        let k = lk.exp();
        let g: Vec<f64> = abs.iter().map(|&a| phi.deriv(k * a)).collect();
        let ng = match luxemburg_abs(&g, h, psi) {
            Ok(n) if n.value > 0.0 => n.value,
            _ => return f64::NEG_INFINITY,
        };
        h * abs.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() / ng
    };
    let base = (1.0 / lux.value).ln();
    let ks: Vec<f64> = (0..=24).map(|i| base + (i as f64 - 12.0) * 10f64.ln() / 4.0).collect();
    let vals: Vec<f64> = ks.iter().map(|&lk| pairing(lk)).collect();
    let mut best = 0;
    for i in 0..vals.len() {
        if vals[i] > vals[best] {
            best = i;
        }
    }
    let a = ks[best.saturating_sub(1)];
    let b = ks[(best + 1).min(ks.len() - 1)];
    let (lk, v) = golden_max(pairing, a, b, 1e-6);
    let (lk, v) = if v >= vals[best] { (lk, v) } else { (ks[best], vals[best]) };
    if !v.is_finite() {
        return Err(OrlabError::NonFinite);
    }
    Ok(DualNorm {
        norm: NormResult { value: v, bracket: (v, v), iterations: ks.len(), modular_at_value: f64::NAN },
        k: lk.exp(),
    })
}

/// ‖f‖⁰ = sup ∫|fg| over the Ψ-unit ball, searched over Young witnesses.
pub fn orlicz_dual_norm(f: &GridFunction, phi: &GrowthFunction) -> Result<DualNorm> {
    if f.is_zero() {
        return Ok(DualNorm { norm: NormResult::zero(), k: 0.0 });
    }
    if !phi.is_n_function() {
        return Err(OrlabError::NotNFunction(phi.spec()));
    }
    let psi = complementary(phi).map_err(|e| OrlabError::ConjugateUnavailable(e.to_string()))?;
    dual_norm_abs(&f.abs(), f.spec().h(), phi, &psi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderPairing {
    pub pairing: f64,
    pub bound: f64,
    pub ok: bool,
}

/// ∫|fg| ≤ 2‖f‖_Φ‖g‖_Ψ.
pub fn holder_pairing(f: &GridFunction, g: &GridFunction, phi: &GrowthFunction) -> Result<HolderPairing> {
    if f.spec() != g.spec() {
        return Err(OrlabError::SpecMismatch);
    }
    let h = f.spec().h();
    let pairing = h * f.values().iter().zip(g.values()).map(|(a, b)| a.norm() * b.norm()).sum::<f64>();
    if pairing == 0.0 {
        return Ok(HolderPairing { pairing, bound: 0.0, ok: true });
    }
    let psi = complementary(phi).map_err(|e| OrlabError::ConjugateUnavailable(e.to_string()))?;
    let bound = 2.0 * luxemburg_norm(f, phi)?.value * luxemburg_norm(g, &psi)?.value;
    Ok(HolderPairing { pairing, bound, ok: pairing <= bound + 1e-9 })
}

/// Geometric λ grid for the layer-cake integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl LambdaGrid {
    /// [1e−10·max|f|, max|f|] with 10⁵ points.
    pub fn for_function(f: &GridFunction) -> LambdaGrid {
        let m = f.max_abs();
        LambdaGrid { min: 1e-10 * m, max: m, points: 100_000 }
    }
}

/// ∫₀^∞ Φ′(λ)|{|f| > λ}| dλ. On each λ cell the distribution function is
/// taken at the cell midpoint and Φ′ is integrated exactly; below the grid
/// the distribution is frozen at its value at λ_min.
pub fn modular_layercake(f: &GridFunction, phi: &GrowthFunction, grid: LambdaGrid) -> f64 {
    if f.is_zero() {
        return 0.0;
    }
    let h = f.spec().h();
    let mut a = f.abs();
    a.sort_by(|x, y| x.total_cmp(y));
    let dist = |l: f64| h * (a.len() - a.partition_point(|&v| v <= l)) as f64;
    let lam = geomspace(grid.min, grid.max, grid.points);
    let mut total = phi.eval(lam[0]) * dist(lam[0]);
    for w in lam.windows(2) {
        let mid = (w[0] * w[1]).sqrt();
        total += (phi.eval(w[1]) - phi.eval(w[0])) * dist(mid);
    }
    total
}

/// Sup over a field's heights: the Luxemburg norm of each slice.
pub fn slice_norms(slices: &[Vec<Complex64>], spec: GridSpec, phi: &GrowthFunction) -> Result<Vec<NormResult>> {
    use rayon::prelude::*;
    let h = spec.h();
    slices
        .par_iter()
        .map(|s| {
            let abs: Vec<f64> = s.iter().map(|v| v.norm()).collect();
            luxemburg_abs(&abs, h, phi)
        })
        .collect()
}
