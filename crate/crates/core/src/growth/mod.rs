//! Growth functions, Young conjugates and the structural conditions
//! (Δ₂, ∇₂, Dini domination, type bounds, equivalence).

mod conditions;
mod conjugate;
mod table;

pub use conditions::{
    check_delta2, check_dini_domination, check_equivalence, check_nabla2, check_type_bounds,
    dini_log_increment, dini_log_integrals, estimate_indices, ConditionReport, IndexReport, Probe, SubCheck, TypeKind,
};
pub use conjugate::{check_convex, complementary};
pub use table::Table;

use crate::error::{OrlabError, Result};
use std::fmt;
use std::sync::Arc;

/// Named families of growth functions.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// t^p
    Power { p: f64 },
    /// t^p ln(1+t)^β
    PowerLog { p: f64, beta: f64 },
    /// t^q / ln(e+t)
    QOverLog { q: f64 },
    /// e^t − t − 1
    ExpLike,
    /// t ln(1+t)
    TLog,
    /// log-log interpolation table
    Sampled(Arc<Table>),
}

/// A growth function `scale · family(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFunction {
    family: Family,
    scale: f64,
    label: Option<String>,
}

impl GrowthFunction {
    pub fn new(family: Family) -> Self {
        GrowthFunction { family, scale: 1.0, label: None }
    }

    pub fn power(p: f64) -> Self {
        Self::new(Family::Power { p })
    }

    pub fn power_log(p: f64, beta: f64) -> Self {
        Self::new(Family::PowerLog { p, beta })
    }

    pub fn q_over_log(q: f64) -> Self {
        Self::new(Family::QOverLog { q })
    }

    pub fn exp_like() -> Self {
        Self::new(Family::ExpLike)
    }

    pub fn t_log() -> Self {
        Self::new(Family::TLog)
    }

    pub fn sampled(table: Table) -> Self {
        Self::new(Family::Sampled(Arc::new(table)))
    }

    /// Multiply by a positive constant.
    pub fn scaled(mut self, c: f64) -> Self {
        assert!(c > 0.0 && c.is_finite(), "scale must be positive");
        self.scale *= c;
        self
    }

    /// Attach a display label (used for conjugates).
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Φ(t); zero for t ≤ 0, +∞ on overflow.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let c = self.scale;
        match &self.family {
            Family::Power { p } => c * t.powf(*p),
            Family::PowerLog { p, beta } => c * t.powf(*p) * t.ln_1p().powf(*beta),
            Family::QOverLog { q } => c * t.powf(*q) / ln_e_plus(t),
            Family::ExpLike => c * exp_like(t),
            Family::TLog => c * t * t.ln_1p(),
            Family::Sampled(tab) => c * tab.ln_eval(t).exp(),
        }
    }

    /// ln Φ(t), finite wherever Φ(t) > 0 even when Φ(t) overflows.
    pub fn ln_eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let lc = self.scale.ln();
        let lt = t.ln();
        lc + match &self.family {
            Family::Power { p } => p * lt,
            Family::PowerLog { p, beta } => p * lt + beta * t.ln_1p().ln(),
            Family::QOverLog { q } => q * lt - ln_e_plus(t).ln(),
            Family::ExpLike => {
                if t < 30.0 {
                    exp_like(t).ln()
                } else {
                    t + (-(1.0 + t) * (-t).exp()).ln_1p()
                }
            }
            Family::TLog => lt + t.ln_1p().ln(),
            Family::Sampled(tab) => tab.ln_eval(t),
        }
    }

    /// Φ′(t), analytic except for sampled tables (central difference with
    /// relative step).
    pub fn deriv(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let c = self.scale;
        match &self.family {
            Family::Power { p } => {
                if t == 0.0 {
                    return if *p > 1.0 { 0.0 } else if *p == 1.0 { c } else { f64::INFINITY };
                }
                c * p * t.powf(p - 1.0)
            }
            Family::PowerLog { p, beta } => {
                if t == 0.0 {
                    return 0.0;
                }
                let l = t.ln_1p();
                c * (p * t.powf(p - 1.0) * l.powf(*beta) + beta * t.powf(*p) * l.powf(beta - 1.0) / (1.0 + t))
            }
            Family::QOverLog { q } => {
                if t == 0.0 {
                    return 0.0;
                }
                let m = ln_e_plus(t);
                c * (q * t.powf(q - 1.0) / m - t.powf(*q) / ((std::f64::consts::E + t) * m * m))
            }
            Family::ExpLike => c * t.exp_m1(),
            Family::TLog => c * (t.ln_1p() + t / (1.0 + t)),
            Family::Sampled(_) => {
                if t == 0.0 {
                    return 0.0;
                }
                let h = t * crate::tolerances::SAMPLED_DERIV_STEP;
                (self.eval(t + h) - self.eval(t - h)) / (2.0 * h)
            }
        }
    }

    /// t Φ′(t) / Φ(t), computed without forming Φ where possible.
    pub fn index_ratio(&self, t: f64) -> f64 {
        match &self.family {
            Family::Power { p } => *p,
            Family::PowerLog { p, beta } => p + beta * t / ((1.0 + t) * t.ln_1p()),
            Family::QOverLog { q } => {
                let m = ln_e_plus(t);
                q - t / ((std::f64::consts::E + t) * m)
            }
            Family::TLog => 1.0 + t / ((1.0 + t) * t.ln_1p()),
            Family::ExpLike => {
                if t < 30.0 {
                    t * t.exp_m1() / exp_like(t)
                } else {
                    let e = (-t).exp();
                    t * (1.0 - e) / (1.0 - (1.0 + t) * e)
                }
            }
            Family::Sampled(_) => (self.ln_eval(t * (1.0 + 1e-6)) - self.ln_eval(t * (1.0 - 1e-6))) / (2e-6),
        }
    }

    /// Φ⁻¹(s): closed form for powers, bisection in ln t otherwise.
    pub fn inverse(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if let Family::Power { p } = self.family {
            return (s / self.scale).powf(1.0 / p);
        }
        let target = s.ln();
        let f = |lt: f64| self.ln_eval(lt.exp());
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        if f(0.0) < target {
            hi = 1.0;
            while f(hi) < target {
                lo = hi;
                hi *= 2.0;
                if hi > 1e4 {
                    return f64::INFINITY;
                }
            }
        } else {
            lo = -1.0;
            while f(lo) >= target {
                hi = lo;
                lo *= 2.0;
                if lo < -1e4 {
                    return 0.0;
                }
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi)).exp()
    }

    /// Declared convexity of the family.
    pub fn declared_convex(&self) -> bool {
        match &self.family {
            Family::Power { p } => *p >= 1.0,
            Family::PowerLog { p, beta } => *p >= 1.0 && *beta >= 0.0,
            Family::QOverLog { q } => *q > 1.0,
            Family::ExpLike | Family::TLog => true,
            Family::Sampled(_) => true,
        }
    }

    /// Whether the declared family is an N-function (Φ(t)/t → 0 at 0 and
    /// → ∞ at ∞). Sampled tables are judged by their end slopes.
    pub fn is_n_function(&self) -> bool {
        match &self.family {
            Family::Power { p } => *p > 1.0,
            Family::PowerLog { p, beta } => (*p > 1.0 && *beta >= 0.0) || (*p == 1.0 && *beta > 0.0),
            Family::QOverLog { q } => *q > 1.0,
            Family::ExpLike | Family::TLog => true,
            Family::Sampled(tab) => {
                let (lo, hi) = tab.end_slopes();
                lo > 1.0 && hi > 1.0
            }
        }
    }

    /// Parse the spec mini-language, e.g. `power:p=2`, `powerlog:p=2,beta=1`,
    /// `qoverlog:q=2`, `explike`, `tlog`, `sampled:file=phi.txt`. Every family
    /// accepts an optional `scale=c`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, rest) = match spec.split_once(':') {
            Some((n, r)) => (n.trim(), r.trim()),
            None => (spec, ""),
        };
        let params = parse_params(rest)?;
        let get = |key: &str| -> Result<f64> {
            let v = params
                .iter()
                .find(|(k, _)| k == key)
                .ok_or_else(|| OrlabError::Parse(format!("`{spec}`: missing parameter `{key}`")))?;
            v.1.parse::<f64>()
                .map_err(|_| OrlabError::Parse(format!("`{spec}`: `{key}` is not a number")))
        };
        let allowed: &[&str] = match name {
            "power" => &["p", "scale"],
            "powerlog" => &["p", "beta", "scale"],
            "qoverlog" => &["q", "scale"],
            "explike" | "tlog" => &["scale"],
            "sampled" => &["file", "scale"],
            other => return Err(OrlabError::Parse(format!("unknown growth family `{other}`"))),
        };
        for (k, _) in &params {
            if !allowed.contains(&k.as_str()) {
                return Err(OrlabError::Parse(format!("`{spec}`: unknown parameter `{k}`")));
            }
        }
        let mut phi = match name {
            "power" => Self::power(positive(get("p")?, "p")?),
            "powerlog" => Self::power_log(positive(get("p")?, "p")?, get("beta")?),
            "qoverlog" => Self::q_over_log(positive(get("q")?, "q")?),
            "explike" => Self::exp_like(),
            "tlog" => Self::t_log(),
            _ => {
                let file = params
                    .iter()
                    .find(|(k, _)| k == "file")
                    .ok_or_else(|| OrlabError::Parse(format!("`{spec}`: missing parameter `file`")))?;
                Self::sampled(Table::from_file(&file.1)?).with_label(spec.to_string())
            }
        };
        if params.iter().any(|(k, _)| k == "scale") {
            phi = phi.scaled(positive(get("scale")?, "scale")?);
        }
        Ok(phi)
    }

    /// Canonical spec string (round-trips through [`GrowthFunction::parse`]
    /// for the named families).
    pub fn spec(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let base = match &self.family {
            Family::Power { p } => format!("power:p={p}"),
            Family::PowerLog { p, beta } => format!("powerlog:p={p},beta={beta}"),
            Family::QOverLog { q } => format!("qoverlog:q={q}"),
            Family::ExpLike => "explike".to_string(),
            Family::TLog => "tlog".to_string(),
            Family::Sampled(tab) => format!("sampled:knots={}", tab.len()),
        };
        if self.scale == 1.0 {
            base
        } else if base.contains(':') {
            format!("{base},scale={}", self.scale)
        } else {
            format!("{base}:scale={}", self.scale)
        }
    }
}

impl fmt::Display for GrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

/// Help text listing every family and its parameters.
pub const FAMILY_HELP: &str = "\
power:p=P             t^P
powerlog:p=P,beta=B   t^P ln(1+t)^B
qoverlog:q=Q          t^Q / ln(e+t)
explike               e^t - t - 1
tlog                  t ln(1+t)
sampled:file=PATH     two-column table t, phi(t), strictly increasing
(any family accepts scale=C)";

fn positive(v: f64, name: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(OrlabError::Parse(format!("`{name}` must be positive")))
    }
}

/// `k=v,k=v` pairs.
pub(crate) fn parse_params(rest: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    if rest.is_empty() {
        return Ok(out);
    }
    for part in rest.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| OrlabError::Parse(format!("expected key=value, got `{part}`")))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn ln_e_plus(t: f64) -> f64 {
    if t < 1e6 {
        (std::f64::consts::E + t).ln()
    } else {
        t.ln() + (std::f64::consts::E / t).ln_1p()
    }
}

/// e^t − t − 1 with a series near zero.
fn exp_like(t: f64) -> f64 {
    if t < 0.1 {
        let mut term = t * t / 2.0;
        let mut sum = term;
        for n in 3..16 {
            term *= t / n as f64;
            sum += term;
        }
        sum
    } else {
        t.exp_m1() - t
    }
}
