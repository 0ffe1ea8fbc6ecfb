use super::dyadic::{Beta, DyadicInterval};
use crate::error::{OrlabError, Result};
use crate::grid::GridFunction;
use serde::Serialize;

/// Step function with finitely many pieces, zero outside
/// [breakpoints[0], breakpoints[n]). Piece i is [b_i, b_{i+1}) with value
/// sign_i·e^{logmag_i}, so plateaus far beyond f64 range are representable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseConstant {
    breakpoints: Vec<f64>,
    sign: Vec<i8>,
    logmag: Vec<f64>,
    #[serde(skip)]
    top: f64,
    #[serde(skip)]
    w: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let sign = values.iter().map(|v| if *v < 0.0 { -1 } else { 1 }).collect();
        let logmag = values.iter().map(|v| v.abs().ln()).collect();
        Self::from_log(breakpoints, sign, logmag)
    }

    pub fn from_log(breakpoints: Vec<f64>, sign: Vec<i8>, logmag: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || logmag.len() + 1 != breakpoints.len() || sign.len() != logmag.len() {
            return Err(OrlabError::Invalid("need n+1 breakpoints for n pieces".into()));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(OrlabError::Invalid("breakpoints must be finite and strictly increasing".into()));
        }
        if logmag.iter().any(|l| l.is_nan() || *l == f64::INFINITY) {
            return Err(OrlabError::Invalid("plateau values must be finite".into()));
        }
        let top = logmag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let top = if top == f64::NEG_INFINITY { 0.0 } else { top };
        let w = logmag.iter().map(|l| (l - top).exp()).collect();
        Ok(PiecewiseConstant { breakpoints, sign, logmag, top, w })
    }

    /// Node j of the grid owns the cell [x_j, x_j + h).
    pub fn from_grid(f: &GridFunction) -> Self {
        let spec = f.spec();
        let h = spec.h();
        let mut b: Vec<f64> = (0..f.len()).map(|j| spec.x(j)).collect();
        b.push(spec.x(f.len() - 1) + h);
        let v = f.abs();
        Self::new(b, v).expect("grid nodes are increasing")
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> usize {
        self.logmag.len()
    }

    pub fn logmag(&self) -> &[f64] {
        &self.logmag
    }

    pub fn hull(&self) -> (f64, f64) {
        (self.breakpoints[0], self.breakpoints[self.pieces()])
    }

    fn piece_at(&self, x: f64) -> Option<usize> {
        let (a, b) = self.hull();
        if x < a || x >= b {
            return None;
        }
        Some(self.breakpoints.partition_point(|&t| t <= x) - 1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.piece_at(x).map_or(0.0, |i| self.sign[i] as f64 * self.logmag[i].exp())
    }

    /// ln|f(x)|.
    pub fn ln_abs(&self, x: f64) -> f64 {
        self.piece_at(x).map_or(f64::NEG_INFINITY, |i| self.logmag[i])
    }

    /// |f| divided by e^{top}, so the largest plateau is 1.
    fn scaled(&self) -> (f64, &[f64]) {
        (self.top, &self.w)
    }

    /// ln ∫_a^b |f|.
    pub fn ln_integral(&self, a: f64, b: f64) -> f64 {
        let (top, w) = self.scaled();
        scaled_integral(&self.breakpoints, w, a, b).ln() + top
    }

    /// ln ∫ |f|.
    pub fn ln_mass(&self) -> f64 {
        let (a, b) = self.hull();
        self.ln_integral(a, b)
    }

    /// ln of the average of |f| over a dyadic interval.
    pub fn ln_average(&self, j: &DyadicInterval) -> f64 {
        self.ln_integral(j.left(), j.right()) - j.len().ln()
    }

    /// ln M_HL(f)(x), exact. Optimal intervals have endpoints among the
    /// breakpoints and x; shrinking intervals at x contribute the one-sided
    /// limits of |f|.
    pub fn ln_hl_at(&self, x: f64) -> f64 {
        let (top, w) = self.scaled();
        let b = &self.breakpoints;
        let mut best = 0.0f64;
        // one-sided limits
        if let Some(i) = self.piece_at(x) {
            best = best.max(w[i]);
        }
        let eps_left = self.piece_at(prev_float(x));
        if let Some(i) = eps_left {
            if b.contains(&x) {
                best = best.max(w[i]);
            }
        }
        // ∫_a^x for candidate a ≤ x, ∫_x^c for candidate c ≥ x
        let lefts: Vec<(f64, f64)> = {
            let mut v = vec![(x, 0.0)];
            let mut acc = 0.0;
            let mut cur = x;
            for &a in b.iter().rev().filter(|&&a| a < x) {
                acc += scaled_integral(b, w, a, cur);
                cur = a;
                v.push((a, acc));
            }
            v
        };
        let rights: Vec<(f64, f64)> = {
            let mut v = vec![(x, 0.0)];
            let mut acc = 0.0;
            let mut cur = x;
            for &c in b.iter().filter(|&&c| c > x) {
                acc += scaled_integral(b, w, cur, c);
                cur = c;
                v.push((c, acc));
            }
            v
        };
        for &(a, ia) in &lefts {
            for &(c, ic) in &rights {
                if c > a {
                    best = best.max((ia + ic) / (c - a));
                }
            }
        }
        best.ln() + top
    }

    pub fn hl_at(&self, x: f64) -> f64 {
        self.ln_hl_at(x).exp()
    }

    /// ln M^{D^β}(f)(x), exact: every level from one fine enough that the
    /// dyadic cell sits inside the piece of x, out to the level whose cell
    /// contains the hull (or a fixed depth for cells that never do).
    pub fn ln_dyadic_at(&self, x: f64, beta: Beta) -> f64 {
        let (lo, hi) = self.hull();
        let b = &self.breakpoints;
        let d = b.iter().map(|t| (t - x).abs()).fold(f64::INFINITY, f64::min);
        let min_gap = b.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let j_fine = if d > 0.0 {
            (-d.log2()).ceil() as i32 + 1
        } else {
            (-min_gap.log2()).ceil() as i32 + 40
        };
        let scale = (hi - lo).max(lo.abs()).max(hi.abs()).max(x.abs());
        let j_coarse = -(scale.log2().ceil() as i32) - 60;
        let mut best = f64::NEG_INFINITY;
        let mut j = j_fine;
        while j >= j_coarse {
            let c = DyadicInterval::containing(x, beta, j);
            best = best.max(self.ln_average(&c));
            if c.left() <= lo && hi <= c.right() {
                break;
            }
            j -= 1;
        }
        best
    }

    pub fn dyadic_at(&self, x: f64, beta: Beta) -> f64 {
        self.ln_dyadic_at(x, beta).exp()
    }

    /// |{M_HL(f) > μ}| exactly, with μ = e^{ln_mu} > 0. Uses
    /// G(x) = ∫_{b_0}^x (|f| − μ): M_HL f(x) > μ iff max_{c ≥ x} G(c) > min_{a ≤ x} G(a).
    pub fn hl_superlevel_measure(&self, ln_mu: f64) -> f64 {
        let (top, w) = self.scaled();
        let mu = (ln_mu - top).exp();
        let b = &self.breakpoints;
        let n = w.len();
        let mut g = vec![0.0; n + 1];
        for i in 0..n {
            g[i + 1] = g[i] + (w[i] - mu) * (b[i + 1] - b[i]);
        }
        let mut ml = g.clone();
        for i in 1..=n {
            ml[i] = ml[i].min(ml[i - 1]);
        }
        let mut mr = g.clone();
        for i in (0..n).rev() {
            mr[i] = mr[i].max(mr[i + 1]);
        }
        let mut total = mr[0] / mu + ((g[n] - ml[n]) / mu).max(0.0);
        for i in 0..n {
            let len = b[i + 1] - b[i];
            let (r, l) = (mr[i + 1], ml[i]);
            if r > l {
                total += len;
                continue;
            }
            let s = w[i] - mu;
            let bad = if s == 0.0 {
                if r <= g[i] && g[i] <= l {
                    len
                } else {
                    0.0
                }
            } else {
                let (u0, u1) = ((r - g[i]) / s, (l - g[i]) / s);
                let (u0, u1) = if u0 < u1 { (u0, u1) } else { (u1, u0) };
                (u1.min(len) - u0.max(0.0)).max(0.0)
            };
            total += len - bad;
        }
        total
    }

    /// (1/λ) ∫_{|f| > λ} |f| with λ = e^{ln_lambda}.
    pub fn weak_type_lhs(&self, ln_lambda: f64) -> f64 {
        let b = &self.breakpoints;
        self.logmag
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > ln_lambda)
            .map(|(i, &l)| (l - ln_lambda).exp() * (b[i + 1] - b[i]))
            .sum()
    }

    /// Maximal dyadic intervals of grid β with average > λ, down to cells of
    /// length `finest`. Errors with NotLocalized when a cell of the coarsest
    /// searched level (about four hull scales) already averages above λ.
    pub fn stopping_intervals(&self, lambda: f64, beta: Beta, finest: f64) -> Result<Vec<DyadicInterval>> {
        if !(lambda > 0.0) || !(finest > 0.0) {
            return Err(OrlabError::Invalid("lambda and finest length must be positive".into()));
        }
        let ll = lambda.ln();
        let (lo, hi) = self.hull();
        let scale = (hi - lo).max(lo.abs()).max(hi.abs());
        let j0 = -((4.0 * scale).log2().ceil() as i32);
        let j_min = (-finest.log2()).floor() as i32;
        let first = DyadicInterval::containing(lo, beta, j0);
        let last = DyadicInterval::containing(prev_float(hi), beta, j0);
        let mut stack = Vec::new();
        for k in first.k..=last.k {
            let c = DyadicInterval::new(beta, j0, k);
            let a = self.ln_average(&c);
            if a > ll {
                return Err(OrlabError::NotLocalized);
            }
            if a > f64::NEG_INFINITY {
                stack.push(c);
            }
        }
        let mut out = Vec::new();
        while let Some(c) = stack.pop() {
            if c.j >= j_min {
                continue;
            }
            for ch in c.children() {
                let a = self.ln_average(&ch);
                if a > ll {
                    out.push(ch);
                } else if a > f64::NEG_INFINITY {
                    stack.push(ch);
                }
            }
        }
        out.sort_by(|a, b| a.left().total_cmp(&b.left()));
        Ok(out)
    }
}

fn prev_float(x: f64) -> f64 {
    if x == 0.0 {
        -f64::MIN_POSITIVE
    } else if x > 0.0 {
        f64::from_bits(x.to_bits() - 1)
    } else {
        f64::from_bits(x.to_bits() + 1)
    }
}

/// ∫_a^b of the step function with plateau values w (nonnegative).
fn scaled_integral(b: &[f64], w: &[f64], a: f64, c: f64) -> f64 {
    let n = w.len();
    let (a, c) = (a.max(b[0]), c.min(b[n]));
    if c <= a {
        return 0.0;
    }
    let mut i = b.partition_point(|&t| t <= a) - 1;
    let mut s = 0.0;
    while i < n && b[i] < c {
        let ov = c.min(b[i + 1]) - a.max(b[i]);
        if ov > 0.0 {
            s += w[i] * ov;
        }
        i += 1;
    }
    s
}
