//! Poisson, conjugate and Cauchy extensions to the upper half-plane.
//!
//! Grid convolutions use the band-limited lattice kernels
//! K_y(d) = h·P_y(dh)·(1 − (−1)^d e^{−πy/h}) and the same factor on Q_y.
//! These are the lattice samples of the band-limited versions of P_y and
//! Q_y: they have exact unit mass, form an exact semigroup in y and stay
//! accurate when y drops below the grid spacing, where plain node sampling
//! of P_y loses its mass. Rational-decay inputs get an analytic tail
//! correction beyond the window.

use crate::conv::Convolver;
use crate::error::{OrlabError, Result};
use crate::grid::{cauchy_tail, DecayClass, GridFunction, GridSpec};
use crate::quad::tanh_sinh;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

/// Strictly decreasing positive heights standing in for "all y > 0".
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeightLattice {
    heights: Vec<f64>,
}

impl HeightLattice {
    pub fn new(heights: Vec<f64>) -> Result<HeightLattice> {
        if heights.is_empty() {
            return Err(OrlabError::Invalid("empty height lattice".into()));
        }
        for (i, &y) in heights.iter().enumerate() {
            if !(y > 0.0 && y.is_finite()) {
                return Err(OrlabError::Invalid(format!("height {y} must be positive")));
            }
            if i > 0 && y >= heights[i - 1] {
                return Err(OrlabError::Invalid("heights must be strictly decreasing".into()));
            }
        }
        Ok(HeightLattice { heights })
    }

    /// 2^top, 2^{top − 1/per_octave}, …, 2^bottom.
    pub fn dyadic(top: i32, bottom: i32, per_octave: usize) -> HeightLattice {
        assert!(top > bottom && per_octave >= 1);
        let n = (top - bottom) as usize * per_octave;
        let heights = (0..=n).map(|i| 2f64.powf(top as f64 - i as f64 / per_octave as f64)).collect();
        HeightLattice { heights }
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn smallest(&self) -> f64 {
        self.heights[self.heights.len() - 1]
    }
}

impl Default for HeightLattice {
    /// 2⁰, 2⁻¹, …, 2⁻⁸
    fn default() -> Self {
        HeightLattice::dyadic(0, -8, 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Poisson,
    Conjugate,
    Cauchy,
    Measure,
}

/// Field values on grid × lattice; `values[i][j]` is at x_j + i·y_i.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlaneField {
    pub spec: GridSpec,
    pub lattice: HeightLattice,
    pub values: Vec<Vec<Complex64>>,
    pub kind: FieldKind,
}

impl HalfPlaneField {
    pub fn slice(&self, i: usize) -> &[Complex64] {
        &self.values[i]
    }

    /// Height slice as a grid function (rational decay: harmonic extensions
    /// of localised data decay like a power of |x|).
    pub fn slice_function(&self, i: usize) -> GridFunction {
        let decay = if self.values[i].iter().all(|v| v.norm() == 0.0) {
            DecayClass::CompactSupport
        } else {
            DecayClass::RationalDecay
        };
        GridFunction::new(self.spec, self.values[i].clone(), decay).expect("field values are finite")
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    /// CSV with header `y,x,re,im`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["y", "x", "re", "im"])?;
        for (i, &y) in self.lattice.heights().iter().enumerate() {
            for (j, v) in self.values[i].iter().enumerate() {
                wtr.write_record([y.to_string(), self.spec.x(j).to_string(), v.re.to_string(), v.im.to_string()])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Poisson,
    Conjugate,
    Cauchy,
}

pub fn poisson_kernel(y: f64, x: f64) -> f64 {
    y / (PI * (x * x + y * y))
}

pub fn conjugate_kernel(y: f64, x: f64) -> f64 {
    x / (PI * (x * x + y * y))
}

/// P_y(x − t), Q_y(x − t) or (1/(iπ))/(t − (x + iy)).
pub fn kernel_eval(kind: KernelKind, y: f64, x: f64, t: f64) -> Complex64 {
    match kind {
        KernelKind::Poisson => Complex64::new(poisson_kernel(y, x - t), 0.0),
        KernelKind::Conjugate => Complex64::new(conjugate_kernel(y, x - t), 0.0),
        KernelKind::Cauchy => Complex64::new(0.0, -1.0 / PI) / (Complex64::new(t - x, -y)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum JAlpha {
    Value(f64),
    Divergent,
}

/// J_α(y) = y^{1−α} ∫₀^∞ du/(u^{1/2}(1+u)^{α/2}); with u = cot²φ the
/// integral becomes 2∫₀^{π/2} sin^{α−2}φ dφ.
pub fn j_alpha(alpha: f64, y: f64) -> JAlpha {
    assert!(y > 0.0, "y must be positive");
    if alpha <= 1.0 {
        return JAlpha::Divergent;
    }
    let v = 2.0 * tanh_sinh(|p: f64| p.sin().powf(alpha - 2.0), 0.0, PI / 2.0);
    JAlpha::Value(y.powf(1.0 - alpha) * v)
}

fn band_factor(d: i64, y: f64, h: f64) -> f64 {
    let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
    1.0 - sign * (-PI * y / h).exp()
}

pub(crate) fn lattice_poisson(d: i64, y: f64, h: f64) -> f64 {
    h * poisson_kernel(y, d as f64 * h) * band_factor(d, y, h)
}

pub(crate) fn lattice_conjugate(d: i64, y: f64, h: f64) -> f64 {
    h * conjugate_kernel(y, d as f64 * h) * band_factor(d, y, h)
}

fn extend(f: &GridFunction, lattice: &HeightLattice, kind: FieldKind) -> HalfPlaneField {
    let spec = f.spec();
    let n = spec.points;
    let h = spec.h();
    let tails = f.tails();
    let has_tail = tails.left.is_some() || tails.right.is_some();
    let real_input = f.max_imag() == 0.0;
    let conv = Convolver::new(n);
    // real kernels map real data to real data; drop FFT round-off so that
    // Re S(f) and U_f coincide exactly
    let run = |k: &dyn Fn(i64) -> f64| {
        let mut v = conv.convolve(k, f.values());
        if real_input {
            v.iter_mut().for_each(|z| z.im = 0.0);
        }
        v
    };
    let values: Vec<Vec<Complex64>> = lattice
        .heights()
        .par_iter()
        .map(|&y| {
            let mut out = match kind {
                FieldKind::Conjugate => run(&|d| lattice_conjugate(d, y, h)),
                FieldKind::Cauchy => {
                    let u = run(&|d| lattice_poisson(d, y, h));
                    let v = run(&|d| lattice_conjugate(d, y, h));
                    u.iter().zip(&v).map(|(a, b)| a + Complex64::new(0.0, 1.0) * b).collect()
                }
                _ => run(&|d| lattice_poisson(d, y, h)),
            };
            if has_tail {
                for (j, o) in out.iter_mut().enumerate() {
                    let (p, q) = cauchy_tail(&tails, Complex64::new(spec.x(j), y));
                    *o += match kind {
                        FieldKind::Conjugate => q,
                        FieldKind::Cauchy => p + Complex64::new(0.0, 1.0) * q,
                        _ => p,
                    };
                }
            }
            out
        })
        .collect();
    HalfPlaneField { spec, lattice: lattice.clone(), values, kind }
}

/// U_f on the lattice.
pub fn poisson_extend(f: &GridFunction, lattice: &HeightLattice) -> HalfPlaneField {
    extend(f, lattice, FieldKind::Poisson)
}

/// V_f on the lattice.
pub fn conjugate_extend(f: &GridFunction, lattice: &HeightLattice) -> HalfPlaneField {
    extend(f, lattice, FieldKind::Conjugate)
}

/// S(f) = U_f + iV_f on the lattice.
pub fn cauchy_transform(f: &GridFunction, lattice: &HeightLattice) -> HalfPlaneField {
    extend(f, lattice, FieldKind::Cauchy)
}

/// Slow path: node-sampled continuous kernel, O(N²) per height, plus tails.
/// Accurate for y well above the grid spacing.
pub fn extend_direct(f: &GridFunction, lattice: &HeightLattice, kind: KernelKind) -> HalfPlaneField {
    let spec = f.spec();
    let h = spec.h();
    let tails = f.tails();
    let xs = spec.nodes();
    let values = lattice
        .heights()
        .par_iter()
        .map(|&y| {
            xs.iter()
                .map(|&x| {
                    let mut s = Complex64::new(0.0, 0.0);
                    for (j, &t) in xs.iter().enumerate() {
                        s += kernel_eval(kind, y, x, t) * f.values()[j];
                    }
                    s *= h;
                    let (p, q) = cauchy_tail(&tails, Complex64::new(x, y));
                    s + match kind {
                        KernelKind::Poisson => p,
                        KernelKind::Conjugate => q,
                        KernelKind::Cauchy => p + Complex64::new(0.0, 1.0) * q,
                    }
                })
                .collect()
        })
        .collect();
    let kind = match kind {
        KernelKind::Poisson => FieldKind::Poisson,
        KernelKind::Conjugate => FieldKind::Conjugate,
        KernelKind::Cauchy => FieldKind::Cauchy,
    };
    HalfPlaneField { spec, lattice: lattice.clone(), values, kind }
}

/// Finite atoms plus an optional density on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadonMeasure {
    atoms: Vec<(f64, f64)>,
    density: Option<GridFunction>,
    weighted_mass: f64,
}

impl RadonMeasure {
    pub fn new(atoms: Vec<(f64, f64)>, density: Option<GridFunction>) -> Result<RadonMeasure> {
        for &(x, w) in &atoms {
            if !(x.is_finite() && w.is_finite()) {
                return Err(OrlabError::Invalid("atoms must be finite".into()));
            }
        }
        let mut m: f64 = atoms.iter().map(|&(x, w)| w.abs() / (1.0 + x * x)).sum();
        if let Some(d) = &density {
            let s = d.spec();
            m += s.h() * d.values().iter().enumerate().map(|(j, v)| v.norm() / (1.0 + s.x(j).powi(2))).sum::<f64>();
        }
        Ok(RadonMeasure { atoms, density, weighted_mass: m })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&GridFunction> {
        self.density.as_ref()
    }

    /// ∫ d|μ|/(1+t²)
    pub fn weighted_mass(&self) -> f64 {
        self.weighted_mass
    }
}

/// Poisson integral of a measure: atoms in closed form, density by
/// [`poisson_extend`].
pub fn poisson_extend_measure(mu: &RadonMeasure, spec: GridSpec, lattice: &HeightLattice) -> Result<HalfPlaneField> {
    let mut values = match &mu.density {
        Some(d) => {
            if d.spec() != spec {
                return Err(OrlabError::SpecMismatch);
            }
            poisson_extend(d, lattice).values
        }
        None => vec![vec![Complex64::new(0.0, 0.0); spec.points]; lattice.len()],
    };
    for (i, &y) in lattice.heights().iter().enumerate() {
        for (j, v) in values[i].iter_mut().enumerate() {
            let x = spec.x(j);
            for &(loc, w) in &mu.atoms {
                *v += w * poisson_kernel(y, x - loc);
            }
        }
    }
    Ok(HalfPlaneField { spec, lattice: lattice.clone(), values, kind: FieldKind::Measure })
}
