use crate::error::{OrlabError, Result};

/// Monotone interpolation table in log-log coordinates.
///
/// Knots are stored as (ln t, ln Φ(t)). With slopes supplied the segments are
/// cubic Hermite pieces limited so they stay monotone; without slopes the
/// table is piecewise linear. Outside the knot range the end slopes are
/// continued as power laws.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    ln_t: Vec<f64>,
    ln_phi: Vec<f64>,
    slope: Vec<f64>,
    hermite: bool,
    uniform: Option<(f64, f64)>,
}

impl Table {
    /// Piecewise-linear table from raw (t, Φ(t)) pairs, both strictly increasing.
    pub fn from_pairs(t: &[f64], phi: &[f64]) -> Result<Table> {
        if t.len() != phi.len() || t.len() < 2 {
            return Err(OrlabError::Parse("sampled table needs at least two rows".into()));
        }
        for i in 0..t.len() {
            if !(t[i] > 0.0 && phi[i] > 0.0 && t[i].is_finite() && phi[i].is_finite()) {
                return Err(OrlabError::Parse(format!("row {}: values must be positive and finite", i + 1)));
            }
            if i > 0 && (t[i] <= t[i - 1] || phi[i] <= phi[i - 1]) {
                return Err(OrlabError::Parse(format!("row {}: table must be strictly increasing", i + 1)));
            }
        }
        let ln_t: Vec<f64> = t.iter().map(|v| v.ln()).collect();
        let ln_phi: Vec<f64> = phi.iter().map(|v| v.ln()).collect();
        let n = ln_t.len();
        let sec: Vec<f64> = (0..n - 1)
            .map(|i| (ln_phi[i + 1] - ln_phi[i]) / (ln_t[i + 1] - ln_t[i]))
            .collect();
        let mut slope = vec![0.0; n];
        slope[0] = sec[0];
        slope[n - 1] = sec[n - 2];
        for i in 1..n - 1 {
            slope[i] = 0.5 * (sec[i - 1] + sec[i]);
        }
        Ok(Table { ln_t, ln_phi, slope, hermite: false, uniform: None })
    }

    /// Hermite table on uniformly spaced ln t knots with exact log-log slopes.
    pub fn hermite_uniform(ln_t0: f64, dln: f64, ln_phi: Vec<f64>, mut slope: Vec<f64>) -> Result<Table> {
        let n = ln_phi.len();
        if n < 2 || slope.len() != n || !(dln > 0.0) {
            return Err(OrlabError::Invalid("hermite table shape".into()));
        }
        for i in 1..n {
            if !(ln_phi[i] > ln_phi[i - 1]) {
                return Err(OrlabError::Invalid(format!("table not increasing at knot {i}")));
            }
        }
        // Fritsch-Carlson limiter
        for i in 0..n - 1 {
            let d = (ln_phi[i + 1] - ln_phi[i]) / dln;
            let a = slope[i] / d;
            let b = slope[i + 1] / d;
            let r = a * a + b * b;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                slope[i] = tau * a * d;
                slope[i + 1] = tau * b * d;
            }
            if slope[i] < 0.0 {
                slope[i] = 0.0;
            }
        }
        let ln_t = (0..n).map(|i| ln_t0 + dln * i as f64).collect();
        Ok(Table { ln_t, ln_phi, slope, hermite: true, uniform: Some((ln_t0, dln)) })
    }

    /// Read a two-column text table (whitespace or comma separated, `#` comments).
    pub fn from_file(path: &str) -> Result<Table> {
        let text = std::fs::read_to_string(path)?;
        let mut t = Vec::new();
        let mut phi = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if cols.len() != 2 {
                return Err(OrlabError::Parse(format!("{path}:{}: expected two columns", lineno + 1)));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| OrlabError::Parse(format!("{path}:{}: bad number `{s}`", lineno + 1)))
            };
            t.push(parse(cols[0])?);
            phi.push(parse(cols[1])?);
        }
        Table::from_pairs(&t, &phi)
    }

    pub fn len(&self) -> usize {
        self.ln_t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_t.is_empty()
    }

    pub fn is_hermite(&self) -> bool {
        self.hermite
    }

    /// (t_first, t_last)
    pub fn range(&self) -> (f64, f64) {
        (self.ln_t[0].exp(), self.ln_t[self.len() - 1].exp())
    }

    /// Local log-log slope at the two ends of the table.
    pub fn end_slopes(&self) -> (f64, f64) {
        (self.slope[0], self.slope[self.len() - 1])
    }

    /// Largest jump of the log-log slope across a knot. Zero for Hermite
    /// tables (C¹ by construction); positive values flag derivative
    /// discontinuities of piecewise-linear tables.
    pub fn max_kink(&self) -> f64 {
        if self.hermite {
            return 0.0;
        }
        let n = self.len();
        let mut worst: f64 = 0.0;
        for i in 1..n - 1 {
            let l = (self.ln_phi[i] - self.ln_phi[i - 1]) / (self.ln_t[i] - self.ln_t[i - 1]);
            let r = (self.ln_phi[i + 1] - self.ln_phi[i]) / (self.ln_t[i + 1] - self.ln_t[i]);
            worst = worst.max((r - l).abs());
        }
        worst
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.len();
        if let Some((x0, dx)) = self.uniform {
            let i = ((x - x0) / dx).floor();
            return (i.max(0.0) as usize).min(n - 2);
        }
        match self.ln_t.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// ln Φ(t) for t > 0.
    pub fn ln_eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let x = t.ln();
        let n = self.len();
        if x <= self.ln_t[0] {
            return self.ln_phi[0] + self.slope[0] * (x - self.ln_t[0]);
        }
        if x >= self.ln_t[n - 1] {
            return self.ln_phi[n - 1] + self.slope[n - 1] * (x - self.ln_t[n - 1]);
        }
        let i = self.segment(x);
        let h = self.ln_t[i + 1] - self.ln_t[i];
        let s = (x - self.ln_t[i]) / h;
        let (y0, y1) = (self.ln_phi[i], self.ln_phi[i + 1]);
        if !self.hermite {
            return y0 + (y1 - y0) * s;
        }
        let (m0, m1) = (self.slope[i], self.slope[i + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1
    }
}
