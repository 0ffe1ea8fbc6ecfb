use super::{Family, GrowthFunction, Table};
use crate::error::{OrlabError, Result};
use crate::quad::geomspace;
use crate::tolerances::{CONJUGATE_KNOTS, PROBE_T_MAX, PROBE_T_MIN};

const CONVEX_PROBE: usize = 1024;
const COARSE_T: usize = 4096;
const CONVEX_SLACK: f64 = 1e-6;

/// Largest t ≤ t_max where Φ and Φ′ are comfortably finite.
pub(crate) fn finite_top(phi: &GrowthFunction, t_max: f64) -> f64 {
    let mut t = t_max;
    while t > 1.0 {
        let v = phi.eval(t);
        let d = phi.deriv(t);
        if v.is_finite() && v < 1e250 && d.is_finite() && d < 1e250 {
            break;
        }
        t *= 0.5;
    }
    t
}

/// Secant-slope monotonicity on a geometric probe.
pub fn check_convex(phi: &GrowthFunction) -> Result<()> {
    let hi = finite_top(phi, PROBE_T_MAX);
    let t = geomspace(PROBE_T_MIN, hi, CONVEX_PROBE);
    let v: Vec<f64> = t.iter().map(|&x| phi.eval(x)).collect();
    let mut prev = f64::NEG_INFINITY;
    for i in 0..t.len() - 1 {
        let s = (v[i + 1] - v[i]) / (t[i + 1] - t[i]);
        if s < prev * (1.0 - CONVEX_SLACK) - f64::MIN_POSITIVE {
            return Err(OrlabError::NotConvex { at: t[i] });
        }
        prev = prev.max(s);
    }
    Ok(())
}

/// Young conjugate Ψ(s) = sup_t (st − Φ(t)).
///
/// Powers with p > 1 map to the dual power in closed form. Everything else
/// becomes a sampled table: for each of the log-spaced knots in s the
/// maximiser t* is bracketed on a coarse geometric t-grid and refined by
/// bisection on Φ′(t*) = s; the table stores ln Ψ and the exact log-log slope
/// s t*/Ψ, interpolated by monotone cubic Hermite pieces.
pub fn complementary(phi: &GrowthFunction) -> Result<GrowthFunction> {
    if let Family::Power { p } = *phi.family() {
        if p > 1.0 {
            let c = phi.scale();
            let q = p / (p - 1.0);
            let k = (p - 1.0) * c * (c * p).powf(-q);
            return Ok(GrowthFunction::power(q).scaled(k));
        }
        return Err(OrlabError::ConjugateUnavailable(format!(
            "{} has linear or sublinear growth",
            phi.spec()
        )));
    }
    check_convex(phi)?;
    let t_hi = finite_top(phi, PROBE_T_MAX);
    let t_grid = geomspace(PROBE_T_MIN, t_hi, COARSE_T);
    let d_grid: Vec<f64> = t_grid.iter().map(|&t| phi.deriv(t)).collect();
    let (s_lo, s_hi) = (d_grid[0], d_grid[COARSE_T - 1]);
    if !(s_lo > 0.0 && s_hi > s_lo * (1.0 + 1e-9)) {
        return Err(OrlabError::ConjugateUnavailable(format!(
            "derivative of {} is not increasing on the probe",
            phi.spec()
        )));
    }
    let n = CONJUGATE_KNOTS;
    let (l0, l1) = (s_lo.ln(), s_hi.ln());
    let dln = (l1 - l0) / (n - 1) as f64;
    let mut ln_psi = Vec::with_capacity(n);
    let mut slope = Vec::with_capacity(n);
    let mut i = 0usize;
    for k in 0..n {
        let s = if k == n - 1 { s_hi } else { (l0 + dln * k as f64).exp() };
        while i + 1 < COARSE_T - 1 && d_grid[i + 1] < s {
            i += 1;
        }
        if s > d_grid[COARSE_T - 1] * (1.0 + 1e-12) {
            return Err(OrlabError::RangeError { s });
        }
        let (mut a, mut b) = (t_grid[i].ln(), t_grid[i + 1].ln());
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if phi.deriv(m.exp()) < s {
                a = m;
            } else {
                b = m;
            }
        }
        let t_star = (0.5 * (a + b)).exp();
        let psi = s * t_star - phi.eval(t_star);
        if !(psi > 0.0 && psi.is_finite()) {
            return Err(OrlabError::RangeError { s });
        }
        ln_psi.push(psi.ln());
        slope.push(s * t_star / psi);
    }
    // rounding can leave ties at the very bottom; enforce strict growth
    for k in 1..n {
        if ln_psi[k] <= ln_psi[k - 1] {
            ln_psi[k] = ln_psi[k - 1] + 1e-15 * ln_psi[k - 1].abs().max(1.0);
        }
    }
    let table = Table::hermite_uniform(l0, dln, ln_psi, slope)?;
    Ok(GrowthFunction::sampled(table).with_label(format!("conjugate({})", phi.spec())))
}
