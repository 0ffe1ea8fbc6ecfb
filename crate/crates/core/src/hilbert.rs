//! Hilbert transform by a spectral multiplier and by extrapolated truncated
//! principal values; the Hilbert maximal function; f + iH(f).

use crate::conv::Convolver;
use crate::error::{OrlabError, Result};
use crate::grid::{cauchy_tail, DecayClass, GridFunction, TailModel};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// One ε value: a multiple of the grid spacing or an absolute length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Eps {
    Spacings(f64),
    Absolute(f64),
}

impl Eps {
    pub fn resolve(&self, h: f64) -> f64 {
        match *self {
            Eps::Spacings(m) => m * h,
            Eps::Absolute(e) => e,
        }
    }
}

/// Strictly decreasing ε list, e.g. `8h,4h,2h` or `0.1,0.05`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsSchedule(pub Vec<Eps>);

impl EpsSchedule {
    pub fn parse(text: &str) -> Result<EpsSchedule> {
        let mut v = Vec::new();
        for part in text.split(',') {
            let p = part.trim();
            let e = if let Some(m) = p.strip_suffix('h') {
                Eps::Spacings(m.trim().parse().map_err(|_| OrlabError::Parse(format!("bad epsilon `{p}`")))?)
            } else {
                Eps::Absolute(p.parse().map_err(|_| OrlabError::Parse(format!("bad epsilon `{p}`")))?)
            };
            v.push(e);
        }
        Ok(EpsSchedule(v))
    }

    /// 2h, 2√2 h, … up to 2L, returned largest first.
    pub fn maximal_default(spec: crate::grid::GridSpec) -> EpsSchedule {
        let h = spec.h();
        let mut v = Vec::new();
        let mut e = 2.0 * h;
        while e <= 2.0 * spec.half_width * (1.0 + 1e-12) {
            v.push(Eps::Absolute(e));
            e *= std::f64::consts::SQRT_2;
        }
        v.reverse();
        EpsSchedule(v)
    }

    /// Absolute values, validated against the grid spacing.
    pub fn resolve(&self, h: f64) -> Result<Vec<f64>> {
        let v: Vec<f64> = self.0.iter().map(|e| e.resolve(h)).collect();
        if v.is_empty() {
            return Err(OrlabError::MethodMismatch("empty epsilon schedule".into()));
        }
        for (i, &e) in v.iter().enumerate() {
            if !(e >= h * (1.0 - 1e-12)) {
                return Err(OrlabError::MethodMismatch(format!("epsilon {e} is below the grid spacing {h}")));
            }
            if i > 0 && e >= v[i - 1] {
                return Err(OrlabError::MethodMismatch("epsilon schedule must be strictly decreasing".into()));
            }
        }
        Ok(v)
    }
}

impl Default for EpsSchedule {
    fn default() -> Self {
        EpsSchedule(vec![Eps::Spacings(8.0), Eps::Spacings(4.0), Eps::Spacings(2.0)])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HilbertMethod {
    Spectral,
    PvQuadrature(EpsSchedule),
}

impl HilbertMethod {
    pub fn pv() -> Self {
        HilbertMethod::PvQuadrature(EpsSchedule::default())
    }
}

fn add_tail(out: &mut [Complex64], f: &GridFunction, tails: &TailModel) {
    if tails.left.is_none() && tails.right.is_none() {
        return;
    }
    let s = f.spec();
    for (j, o) in out.iter_mut().enumerate() {
        *o += cauchy_tail(tails, Complex64::new(s.x(j), 0.0)).1;
    }
}

fn finish(f: &GridFunction, mut v: Vec<Complex64>) -> GridFunction {
    if f.max_imag() == 0.0 {
        v.iter_mut().for_each(|z| z.im = 0.0);
    }
    add_tail(&mut v, f, &f.tails());
    let decay = if f.is_zero() { DecayClass::CompactSupport } else { DecayClass::RationalDecay };
    GridFunction::new(f.spec(), v, decay).expect("finite transform")
}

/// Truncated transform (1/π)Σ_{|x−t|>ε} f(t)/(x−t) h with half weight on
/// nodes at distance exactly ε. Tails are not included.
fn truncated_core(f: &GridFunction, eps: f64, conv: &Convolver) -> Vec<Complex64> {
    let m = eps / f.spec().h();
    conv.convolve(
        |d| {
            let a = (d as f64).abs();
            if d == 0 || a < m - 1e-9 {
                0.0
            } else if (a - m).abs() <= 1e-9 {
                0.5 / (PI * d as f64)
            } else {
                1.0 / (PI * d as f64)
            }
        },
        f.values(),
    )
}

/// H_ε f on the grid, including the tail correction.
pub fn truncated_hilbert(f: &GridFunction, eps: f64) -> GridFunction {
    let conv = Convolver::new(f.spec().points);
    finish(f, truncated_core(f, eps, &conv))
}

/// Least-squares fit of c0 + c1 ε + c3 ε³ (exact for three points) returning c0.
fn extrapolate(eps: &[f64], vals: &[Complex64]) -> Complex64 {
    match eps.len() {
        1 => vals[0],
        2 => {
            let (e0, e1) = (eps[0], eps[1]);
            (vals[1] * e0 - vals[0] * e1) / (e0 - e1)
        }
        _ => {
            // normal equations for the basis {1, ε, ε³}
            let basis = |e: f64| [1.0, e, e * e * e];
            let mut a = [[0.0f64; 3]; 3];
            let mut b = [Complex64::new(0.0, 0.0); 3];
            for (k, &e) in eps.iter().enumerate() {
                let phi = basis(e);
                for r in 0..3 {
                    for c in 0..3 {
                        a[r][c] += phi[r] * phi[c];
                    }
                    b[r] += vals[k] * phi[r];
                }
            }
            // Cramer's rule for the first unknown
            let det3 = |m: [[f64; 3]; 3]| {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            };
            let d = det3(a);
            let part = |comp: fn(Complex64) -> f64| {
                let mut m = a;
                for r in 0..3 {
                    m[r][0] = comp(b[r]);
                }
                det3(m) / d
            };
            Complex64::new(part(|z| z.re), part(|z| z.im))
        }
    }
}

/// The multiplier −i·sgn(ξ) on the band |ξ| ≤ π/h has the lattice kernel
/// (1 − (−1)^d)/(πd). Applying it as an aperiodic convolution on the 4N
/// padded FFT avoids the wrap-around a plain periodic multiplier picks up
/// from the slowly decaying 1/x tails of transformed data.
fn spectral_core(f: &GridFunction) -> Vec<Complex64> {
    let n = f.spec().points;
    let conv = Convolver::with_size(n, 4 * n);
    conv.convolve(|d| if d % 2 == 0 { 0.0 } else { 2.0 / (PI * d as f64) }, f.values())
}

/// H(f) on the grid of f.
pub fn hilbert_transform(f: &GridFunction, method: &HilbertMethod) -> Result<GridFunction> {
    match method {
        HilbertMethod::Spectral => Ok(finish(f, spectral_core(f))),
        HilbertMethod::PvQuadrature(sched) => {
            let eps = sched.resolve(f.spec().h())?;
            let conv = Convolver::new(f.spec().points);
            let vals: Vec<Vec<Complex64>> = eps.par_iter().map(|&e| truncated_core(f, e, &conv)).collect();
            let n = f.spec().points;
            let out = (0..n)
                .map(|j| {
                    let col: Vec<Complex64> = vals.iter().map(|v| v[j]).collect();
                    extrapolate(&eps, &col)
                })
                .collect();
            Ok(finish(f, out))
        }
    }
}

/// H̃(f) = sup_ε |H_ε f| over the schedule, together with the extrapolated
/// limit (the supremum dominates the limit).
pub fn hilbert_maximal(f: &GridFunction, schedule: &EpsSchedule) -> Result<GridFunction> {
    let h = f.spec().h();
    let eps = schedule.resolve(h)?;
    let conv = Convolver::new(f.spec().points);
    let slices: Vec<GridFunction> =
        eps.par_iter().map(|&e| finish(f, truncated_core(f, e, &conv))).collect();
    let limit = hilbert_transform(f, &HilbertMethod::pv())?;
    let n = f.spec().points;
    let out = (0..n)
        .map(|j| {
            let m = slices.iter().fold(limit.values()[j].norm(), |m, s| m.max(s.values()[j].norm()));
            Complex64::new(m, 0.0)
        })
        .collect();
    GridFunction::new(f.spec(), out, DecayClass::RationalDecay)
}

/// f + iH(f) for real f.
pub fn analytic_boundary(f: &GridFunction, method: &HilbertMethod) -> Result<GridFunction> {
    let im = f.max_imag();
    if im > 1e-12 {
        return Err(OrlabError::ComplexInput(im));
    }
    let hf = hilbert_transform(f, method)?;
    let v = f.values().iter().zip(hf.values()).map(|(a, b)| Complex64::new(a.re, b.re)).collect();
    GridFunction::new(f.spec(), v, f.decay().max(hf.decay()))
}
