//! Uniform symmetric grids and complex grid functions.

use crate::error::{OrlabError, Result};
use crate::growth::parse_params;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

/// Grid on [−L, L) with N nodes x_j = −L + j h, h = 2L/N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub points: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize) -> Result<GridSpec> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(OrlabError::Invalid(format!("grid half-width {half_width} must be positive")));
        }
        if points < 16 || !points.is_power_of_two() {
            return Err(OrlabError::Invalid(format!("grid size {points} must be a power of two >= 16")));
        }
        Ok(GridSpec { half_width, points })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.x(j)).collect()
    }

    /// Index of the node nearest to x, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let j = ((x + self.half_width) / self.h()).round();
        (j.max(0.0) as usize).min(self.points - 1)
    }
}

/// How fast a grid function decays outside the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    CompactSupport,
    Schwartz,
    RationalDecay,
}

impl DecayClass {
    pub fn parse(s: &str) -> Result<DecayClass> {
        match s {
            "compact_support" => Ok(DecayClass::CompactSupport),
            "schwartz" => Ok(DecayClass::Schwartz),
            "rational_decay" => Ok(DecayClass::RationalDecay),
            o => Err(OrlabError::Parse(format!("unknown decay class `{o}`"))),
        }
    }
}

/// One-sided tail f(t) ≈ A (c/|t|)^m for |t| > c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tail {
    pub amp: Complex64,
    pub m: u32,
    pub cut: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    pub left: Option<Tail>,
    pub right: Option<Tail>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<Complex64>,
    decay: DecayClass,
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<Complex64>, decay: DecayClass) -> Result<GridFunction> {
        if values.len() != spec.points {
            return Err(OrlabError::SpecMismatch);
        }
        if let Some(j) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(OrlabError::CorpusError(format!("non-finite value at x = {}", spec.x(j))));
        }
        if decay == DecayClass::CompactSupport {
            let edge = 0.9 * spec.half_width;
            if let Some(j) = (0..spec.points).find(|&j| spec.x(j).abs() > edge && values[j] != Complex64::new(0.0, 0.0)) {
                return Err(OrlabError::CorpusError(format!(
                    "compact_support function is nonzero at x = {} (outer 10% of the grid)",
                    spec.x(j)
                )));
            }
        }
        Ok(GridFunction { spec, values, decay })
    }

    pub fn from_real<F: Fn(f64) -> f64>(spec: GridSpec, decay: DecayClass, f: F) -> Result<GridFunction> {
        let v = (0..spec.points).map(|j| Complex64::new(f(spec.x(j)), 0.0)).collect();
        GridFunction::new(spec, v, decay)
    }

    pub fn zero(spec: GridSpec) -> GridFunction {
        GridFunction { spec, values: vec![Complex64::new(0.0, 0.0); spec.points], decay: DecayClass::CompactSupport }
    }

    /// Build from the function mini-language, e.g. `gauss:s=1`,
    /// `rect:a=0,b=4`, `cauchy:y=1`, `bump:c=0,r=1`, `tent:c=0,r=1`, `zero`,
    /// `csv:file=f.csv`. Terms may carry `amp=` and be joined with `+`.
    pub fn parse(text: &str, spec: GridSpec) -> Result<GridFunction> {
        let mut acc: Option<GridFunction> = None;
        for term in text.split('+') {
            let g = parse_term(term.trim(), spec)?;
            acc = Some(match acc {
                None => g,
                Some(a) => a.add(&g)?,
            });
        }
        acc.ok_or_else(|| OrlabError::Parse("empty function spec".into()))
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    pub fn with_decay(mut self, decay: DecayClass) -> Result<GridFunction> {
        self.decay = decay;
        GridFunction::new(self.spec, self.values, decay)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> GridFunction {
        GridFunction { spec: self.spec, values: self.values.iter().map(|&v| f(v)).collect(), decay: self.decay }
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        self.map(|v| v * c)
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.spec != other.spec {
            return Err(OrlabError::SpecMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(GridFunction { spec: self.spec, values, decay: self.decay.max(other.decay) })
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Replace values, keeping grid and decay class.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<GridFunction> {
        GridFunction::new(self.spec, values, self.decay)
    }

    /// ∫|f| by the uniform rule.
    pub fn l1(&self) -> f64 {
        self.spec.h() * self.values.iter().map(|v| v.norm()).sum::<f64>()
    }

    pub fn l2(&self) -> f64 {
        (self.spec.h() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Power-law tails fitted at the window edges (rational_decay only).
    pub fn tails(&self) -> TailModel {
        if self.decay != DecayClass::RationalDecay {
            return TailModel { left: None, right: None };
        }
        let s = self.spec;
        let h = s.h();
        let n = s.points;
        let inner = 0.75 * s.half_width;
        let fit = |edge_j: usize, inner_j: usize, cut: f64| -> Option<Tail> {
            let fe = self.values[edge_j];
            let fi = self.values[inner_j];
            let (xe, xi) = (s.x(edge_j).abs(), s.x(inner_j).abs());
            if fe.norm() < 1e-300 || fi.norm() < 1e-300 {
                return None;
            }
            let m_est = (fi.norm() / fe.norm()).ln() / (xe / xi).ln();
            let m = if m_est < 1.5 { 1 } else { 2 };
            Some(Tail { amp: fe * (xe / cut).powi(m as i32), m, cut })
        };
        TailModel {
            right: fit(n - 1, s.nearest(inner), s.x(n - 1) + 0.5 * h),
            left: fit(0, s.nearest(-inner), s.half_width + 0.5 * h),
        }
    }

    /// ∫ f g including the fitted tails.
    pub fn inner(&self, g: &GridFunction) -> Result<Complex64> {
        if self.spec != g.spec {
            return Err(OrlabError::SpecMismatch);
        }
        let h = self.spec.h();
        let mut s = Complex64::new(0.0, 0.0);
        for (a, b) in self.values.iter().zip(&g.values) {
            s += a * b;
        }
        s *= h;
        let (tf, tg) = (self.tails(), g.tails());
        for (a, b) in [(tf.left, tg.left), (tf.right, tg.right)] {
            if let (Some(a), Some(b)) = (a, b) {
                s += a.amp * b.amp * a.cut / (a.m + b.m - 1) as f64;
            }
        }
        Ok(s)
    }

    /// ∫ f(t)/(t − w) dt for w off the real axis, including fitted tails.
    pub fn cauchy_integral(&self, w: Complex64) -> Complex64 {
        let s = self.spec;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in self.values.iter().enumerate() {
            acc += v / (s.x(j) - w);
        }
        acc *= s.h();
        let t = self.tails();
        if let Some(r) = t.right {
            acc += r.amp * tail_integral(r.m, w, r.cut);
        }
        if let Some(l) = t.left {
            acc -= l.amp * tail_integral(l.m, -w, l.cut);
        }
        acc
    }

    /// Read a CSV with header `x,re,im` on a uniform power-of-two grid.
    pub fn from_csv(path: &str, decay: Option<DecayClass>) -> Result<GridFunction> {
        let mut rdr = csv::Reader::from_path(path)?;
        let headers = rdr.headers()?.clone();
        let names: Vec<&str> = headers.iter().map(|h| h.trim()).collect();
        if names != ["x", "re", "im"] {
            return Err(OrlabError::Parse(format!("{path}: expected header x,re,im, got {}", names.join(","))));
        }
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let num = |k: usize| -> Result<f64> {
                rec.get(k)
                    .and_then(|v| v.trim().parse::<f64>().ok())
                    .ok_or_else(|| OrlabError::Parse(format!("{path}: row {} column {} is not a number", i + 2, k + 1)))
            };
            xs.push(num(0)?);
            vs.push(Complex64::new(num(1)?, num(2)?));
        }
        let n = xs.len();
        if n < 16 || !n.is_power_of_two() {
            return Err(OrlabError::Parse(format!("{path}: {n} rows, need a power of two >= 16")));
        }
        let spec = GridSpec::new(-xs[0], n)?;
        for (j, &x) in xs.iter().enumerate() {
            if (x - spec.x(j)).abs() > 1e-9 * spec.half_width {
                return Err(OrlabError::Parse(format!(
                    "{path}: row {} has x = {x}, expected {} for a grid on [-L, L)",
                    j + 2,
                    spec.x(j)
                )));
            }
        }
        let decay = decay.unwrap_or_else(|| {
            let edge = 0.9 * spec.half_width;
            if (0..n).all(|j| spec.x(j).abs() <= edge || vs[j] == Complex64::new(0.0, 0.0)) {
                DecayClass::CompactSupport
            } else {
                DecayClass::RationalDecay
            }
        });
        GridFunction::new(spec, vs, decay)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["x", "re", "im"])?;
        for (j, v) in self.values.iter().enumerate() {
            wtr.write_record([self.spec.x(j).to_string(), v.re.to_string(), v.im.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Help text listing every function family and its parameters.
pub const FUNCTION_HELP: &str = "\
gauss:s=S,c=C         exp(-((x-C)/S)^2)            (s=1, c=0)
rect:a=A,b=B          indicator of [A, B)
cauchy:y=Y,c=C        Y / (pi ((x-C)^2 + Y^2))     (y=1, c=0)
bump:c=C,r=R          exp(1 - 1/(1-u^2)), u=(x-C)/R (c=0, r=1)
tent:c=C,r=R          max(0, 1 - |x-C|/R)          (c=0, r=1)
zero                  0
csv:file=PATH,decay=D CSV with header x,re,im on a grid [-L, L)
(every term accepts amp=A; terms join with +)";

fn parse_term(term: &str, spec: GridSpec) -> Result<GridFunction> {
    let (name, rest) = match term.split_once(':') {
        Some((n, r)) => (n.trim(), r.trim()),
        None => (term, ""),
    };
    let params = parse_params(rest)?;
    let allowed: &[&str] = match name {
        "gauss" => &["s", "c", "amp"],
        "rect" => &["a", "b", "amp"],
        "cauchy" => &["y", "c", "amp"],
        "bump" | "tent" => &["c", "r", "amp"],
        "zero" => &[],
        "csv" => &["file", "decay", "amp"],
        o => return Err(OrlabError::Parse(format!("unknown function `{o}`"))),
    };
    for (k, _) in &params {
        if !allowed.contains(&k.as_str()) {
            return Err(OrlabError::Parse(format!("`{term}`: unknown parameter `{k}`")));
        }
    }
    let raw = |k: &str| params.iter().find(|(n, _)| n == k).map(|(_, v)| v.as_str());
    let num = |k: &str, default: Option<f64>| -> Result<f64> {
        match raw(k) {
            Some(v) => v.parse::<f64>().map_err(|_| OrlabError::Parse(format!("`{term}`: `{k}` is not a number"))),
            None => default.ok_or_else(|| OrlabError::Parse(format!("`{term}`: missing parameter `{k}`"))),
        }
    };
    let amp = num("amp", Some(1.0))?;
    let positive = |k: &str, v: f64| -> Result<f64> {
        if v > 0.0 {
            Ok(v)
        } else {
            Err(OrlabError::Parse(format!("`{term}`: `{k}` must be positive")))
        }
    };
    let g = match name {
        "gauss" => {
            let s = positive("s", num("s", Some(1.0))?)?;
            let c = num("c", Some(0.0))?;
            GridFunction::from_real(spec, DecayClass::Schwartz, |x| amp * (-((x - c) / s).powi(2)).exp())?
        }
        "rect" => {
            let (a, b) = (num("a", None)?, num("b", None)?);
            if !(b > a) {
                return Err(OrlabError::Parse(format!("`{term}`: need a < b")));
            }
            GridFunction::from_real(spec, DecayClass::CompactSupport, |x| if x >= a && x < b { amp } else { 0.0 })?
        }
        "cauchy" => {
            let y = positive("y", num("y", Some(1.0))?)?;
            let c = num("c", Some(0.0))?;
            GridFunction::from_real(spec, DecayClass::RationalDecay, |x| amp * y / (PI * ((x - c).powi(2) + y * y)))?
        }
        "bump" => {
            let c = num("c", Some(0.0))?;
            let r = positive("r", num("r", Some(1.0))?)?;
            GridFunction::from_real(spec, DecayClass::CompactSupport, |x| {
                let u = (x - c) / r;
                if u.abs() < 1.0 {
                    amp * (1.0 - 1.0 / (1.0 - u * u)).exp()
                } else {
                    0.0
                }
            })?
        }
        "tent" => {
            let c = num("c", Some(0.0))?;
            let r = positive("r", num("r", Some(1.0))?)?;
            GridFunction::from_real(spec, DecayClass::CompactSupport, |x| amp * (1.0 - (x - c).abs() / r).max(0.0))?
        }
        "zero" => GridFunction::zero(spec),
        _ => {
            let file = raw("file").ok_or_else(|| OrlabError::Parse(format!("`{term}`: missing parameter `file`")))?;
            let decay = raw("decay").map(DecayClass::parse).transpose()?;
            let g = GridFunction::from_csv(file, decay)?;
            if g.spec != spec {
                return Err(OrlabError::SpecMismatch);
            }
            if amp != 1.0 {
                g.scale(Complex64::new(amp, 0.0))
            } else {
                g
            }
        }
    };
    Ok(g)
}

/// ∫_c^∞ t^{−m}/(t − z) dt for m ∈ {1, 2}, scaled by c^m.
pub(crate) fn tail_integral(m: u32, z: Complex64, c: f64) -> Complex64 {
    let w = z / c;
    let i1 = if w.norm() < 1e-2 {
        let mut s = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for k in 0..12 {
            s += p / (k + 1) as f64;
            p *= w;
        }
        s / c
    } else {
        -(Complex64::new(1.0, 0.0) - w).ln() / z
    };
    match m {
        1 => i1 * c,
        _ => {
            if w.norm() < 1e-2 {
                let mut s = Complex64::new(0.0, 0.0);
                let mut p = Complex64::new(1.0, 0.0);
                for k in 0..12 {
                    s += p / (k + 2) as f64;
                    p *= w;
                }
                s
            } else {
                (i1 - 1.0 / c) / z * c * c
            }
        }
    }
}

/// (1/(iπ)) ∫ tail(t)/(t − z) dt over both fitted tails. Real part is the
/// Poisson tail, imaginary part the conjugate tail (for real amplitudes).
pub(crate) fn cauchy_tail(model: &TailModel, z: Complex64) -> (Complex64, Complex64) {
    let inv_ipi = Complex64::new(0.0, -1.0 / PI);
    let mut re_part = Complex64::new(0.0, 0.0);
    let mut im_part = Complex64::new(0.0, 0.0);
    if let Some(t) = model.right {
        let j = inv_ipi * tail_integral(t.m, z, t.cut);
        re_part += t.amp * j.re;
        im_part += t.amp * j.im;
    }
    if let Some(t) = model.left {
        let j = -inv_ipi * tail_integral(t.m, -z, t.cut);
        re_part += t.amp * j.re;
        im_part += t.amp * j.im;
    }
    (re_part, im_part)
}
