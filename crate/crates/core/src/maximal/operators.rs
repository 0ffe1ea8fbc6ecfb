use super::dyadic::{Beta, DyadicInterval};
use crate::error::{OrlabError, Result};
use crate::extension::HalfPlaneField;
use crate::grid::{DecayClass, GridFunction};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::VecDeque;

/// Window lengths per octave on the grid path.
const LENGTHS_PER_OCTAVE: f64 = 8.0;
/// Window placements per length: x at fraction p/8 from the left end.
const OFFSETS: usize = 9;

/// Aperture of the cone {|x − t| < α·y}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeSpec {
    pub alpha: f64,
}

impl ConeSpec {
    pub fn new(alpha: f64) -> Result<ConeSpec> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(OrlabError::Invalid(format!("cone aperture {alpha} must be >= 0")));
        }
        Ok(ConeSpec { alpha })
    }
}

fn real_output(f: &GridFunction, v: Vec<f64>) -> GridFunction {
    let decay = if v.iter().all(|x| *x == 0.0) {
        DecayClass::CompactSupport
    } else {
        DecayClass::RationalDecay
    };
    GridFunction::new(f.spec(), v.into_iter().map(|x| Complex64::new(x, 0.0)).collect(), decay)
        .expect("maximal values are finite")
}

/// Window lengths in nodes, geometric from 1 to 2N (that is, h to 4L).
fn window_lengths(n: usize) -> Vec<usize> {
    let top = (2 * n) as f64;
    let steps = (top.log2() * LENGTHS_PER_OCTAVE).ceil() as usize;
    let mut out: Vec<usize> = (0..=steps)
        .map(|i| (2f64.powf(i as f64 / LENGTHS_PER_OCTAVE).round() as usize).min(2 * n))
        .collect();
    out.dedup();
    out
}

/// Grid-path M_HL: node j owns the cell [x_j, x_j + h); windows of m cells
/// with m from a geometric schedule in [1, 2N] and 9 placements around x_j,
/// averaged through prefix sums. Cells off the grid count as zero.
pub fn hl_maximal(f: &GridFunction) -> GridFunction {
    let a = f.abs();
    let n = a.len();
    let mut pre = vec![0.0; n + 1];
    for i in 0..n {
        pre[i + 1] = pre[i] + a[i];
    }
    let s = |lo: isize, hi: isize| {
        let c = |i: isize| pre[i.clamp(0, n as isize) as usize];
        c(hi) - c(lo)
    };
    let lens = window_lengths(n);
    let out: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut best = a[j];
            for &m in &lens {
                for p in 0..OFFSETS {
                    let left = ((p * (m - 1)) as f64 / (OFFSETS - 1) as f64).round() as isize;
                    let lo = j as isize - left;
                    best = best.max(s(lo, lo + m as isize) / m as f64);
                }
            }
            best
        })
        .collect();
    real_output(f, out)
}

/// Grid-path M^{D^β}: cells [x_j, x_j + h) and dyadic levels with
/// 2^{−j} in [h, 4L]; averages use the exact integral of the cell function.
pub fn dyadic_maximal(f: &GridFunction, beta: Beta) -> GridFunction {
    let spec = f.spec();
    let a = f.abs();
    let n = a.len();
    let h = spec.h();
    let x0 = spec.x(0);
    let mut pre = vec![0.0; n + 1];
    for i in 0..n {
        pre[i + 1] = pre[i] + a[i] * h;
    }
    let cum = |x: f64| {
        let u = (x - x0) / h;
        if u <= 0.0 {
            return 0.0;
        }
        if u >= n as f64 {
            return pre[n];
        }
        let i = u.floor() as usize;
        pre[i] + (u - i as f64) * a[i] * h
    };
    let j_fine = (-h.log2()).floor() as i32;
    let j_coarse = -((4.0 * spec.half_width).log2().floor() as i32);
    let mut best = a.clone();
    for lvl in j_coarse..=j_fine {
        for (i, b) in best.iter_mut().enumerate() {
            let c = DyadicInterval::containing(spec.x(i), beta, lvl);
            let avg = (cum(c.right()) - cum(c.left())) / c.len();
            if avg > *b {
                *b = avg;
            }
        }
    }
    real_output(f, best)
}

/// |{g > λ}| on the grid: node count times h.
pub fn superlevel_measure(g: &GridFunction, lambda: f64) -> f64 {
    g.abs().iter().filter(|v| **v > lambda).count() as f64 * g.spec().h()
}

/// sup over lattice heights of |F(x + iy)|.
pub fn radial_maximal(field: &HalfPlaneField) -> GridFunction {
    let n = field.spec.points;
    let mut out = vec![0.0f64; n];
    for row in &field.values {
        for (o, v) in out.iter_mut().zip(row) {
            *o = o.max(v.norm());
        }
    }
    GridFunction::new(field.spec, out.into_iter().map(|x| Complex64::new(x, 0.0)).collect(), DecayClass::RationalDecay)
        .expect("finite field")
}

/// sup of |F| over lattice points with |x − t| < α·y; the vertical ray is
/// always included, so α = 0 reproduces the radial maximal function.
pub fn nontangential_maximal(field: &HalfPlaneField, cone: ConeSpec) -> GridFunction {
    let n = field.spec.points;
    let h = field.spec.h();
    let rows: Vec<Vec<f64>> = field
        .values
        .par_iter()
        .zip(field.lattice.heights().par_iter())
        .map(|(row, &y)| {
            let d = ((cone.alpha * y / h).ceil() as isize - 1).max(0) as usize;
            let mags: Vec<f64> = row.iter().map(|v| v.norm()).collect();
            window_max(&mags, d)
        })
        .collect();
    let mut out = vec![0.0f64; n];
    for r in rows {
        for (o, v) in out.iter_mut().zip(r) {
            *o = o.max(v);
        }
    }
    GridFunction::new(field.spec, out.into_iter().map(|x| Complex64::new(x, 0.0)).collect(), DecayClass::RationalDecay)
        .expect("finite field")
}

/// max of v over [j − d, j + d] for every j (monotone deque).
fn window_max(v: &[f64], d: usize) -> Vec<f64> {
    let n = v.len();
    if d == 0 {
        return v.to_vec();
    }
    let mut out = vec![0.0; n];
    let mut q: VecDeque<usize> = VecDeque::new();
    let mut next = 0;
    for (j, o) in out.iter_mut().enumerate() {
        let hi = (j + d).min(n - 1);
        while next <= hi {
            while q.back().is_some_and(|&b| v[b] <= v[next]) {
                q.pop_back();
            }
            q.push_back(next);
            next += 1;
        }
        while q.front().is_some_and(|&f| f + d < j) {
            q.pop_front();
        }
        *o = v[*q.front().unwrap()];
    }
    out
}
