use super::piecewise::PiecewiseConstant;
use crate::error::{OrlabError, Result};
use crate::growth::{check_dini_domination, dini_log_increment, dini_log_integrals, Probe};
use crate::growth::GrowthFunction;
use crate::quad::{bisect_bool, log_add};
use serde::Serialize;
use std::f64::consts::{LN_10, LN_2};

/// Largest u = ln(2^k t_k) the search may reach.
pub const LOG_DOMAIN_CAP: f64 = 700.0;
const SCAN_START: f64 = -20.0;
const SCAN_STEP: f64 = 0.25;

/// One term f_k = 2^k t_k χ_{I_k}. Fields prefixed `log10:` hold base-10
/// logarithms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermRecord {
    pub k: usize,
    #[serde(rename = "log10:t_k")]
    pub log10_t: f64,
    #[serde(rename = "log10:height")]
    pub log10_height: f64,
    pub a_k: f64,
    #[serde(rename = "log10:interval_len")]
    pub log10_len: f64,
    /// ∫Φ₁(f_k), equal to 2^{−k}.
    pub modular_fk: f64,
    #[serde(rename = "log10:modular_12fk")]
    pub log10_modular_12fk: f64,
    /// Weak-type lower bound on ∫Φ₂(M_HL(12 f_k)).
    #[serde(rename = "log10:lower_bound")]
    pub log10_lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub phi1: String,
    pub phi2: String,
    pub terms: usize,
    pub records: Vec<TermRecord>,
    /// Partial sums of ∫Φ₁(f_k).
    pub modular_partial_sums: Vec<f64>,
    /// LB_{k+1}/LB_k.
    pub ratio_trend: Vec<f64>,
}

impl CounterexampleReport {
    /// 12·f_k alone as a step function on I_k.
    pub fn term_function(&self, k: usize) -> Result<PiecewiseConstant> {
        let r = self
            .records
            .iter()
            .find(|r| r.k == k)
            .ok_or_else(|| OrlabError::Invalid(format!("no term {k}")))?;
        let len = 10f64.powf(r.log10_len);
        PiecewiseConstant::from_log(vec![r.a_k, r.a_k + len], vec![1], vec![12f64.ln() + r.log10_height * LN_10])
    }
}

/// Builds f = Σ 12 f_k for a pair failing Dini domination. t_k solves
/// ∫₀^{2^k t_k} Φ₂(s)/s² ds ≥ 2^k Φ₁(2^k t_k)/t_k, found by scanning
/// u = ln(2^k t_k) and bisecting the first sign change.
pub fn build_counterexample(phi1: &GrowthFunction, phi2: &GrowthFunction, terms: usize) -> Result<CounterexampleReport> {
    if terms == 0 {
        return Err(OrlabError::Invalid("need at least one term".into()));
    }
    if check_dini_domination(phi1, phi2, &Probe::default())?.satisfied {
        return Err(OrlabError::DominationHolds);
    }
    let d0 = dini_log_integrals(phi2, &[SCAN_START.exp()])?[0];
    // G_k(u) = ln D₂(e^u) − (2k ln 2 + ln Φ₁(e^u) − u)
    let gap = |k: usize, u: f64, ld: f64| ld - (2.0 * k as f64 * LN_2 + phi1.ln_eval(u.exp()) - u);

    let mut records = Vec::with_capacity(terms);
    let mut sums = Vec::with_capacity(terms);
    let (mut u, mut ld) = (SCAN_START, d0);
    let mut a = 0.0;
    let mut total = 0.0;
    for k in 1..=terms {
        // the scan resumes where the previous term stopped: G_k < G_{k−1}
        while gap(k, u, ld) < 0.0 {
            let v = u + SCAN_STEP;
            if v > LOG_DOMAIN_CAP {
                return Err(OrlabError::SearchOverflow { reached: k });
            }
            ld = log_add(ld, dini_log_increment(phi2, u, v)?);
            u = v;
        }
        let (u_prev, ld_prev) = (u - SCAN_STEP, ld);
        let ld_at = |v: f64| -> f64 {
            if v >= u {
                return ld_prev;
            }
            let back = dini_log_increment(phi2, v, u).unwrap_or(f64::NEG_INFINITY);
            crate::quad::log_sub(ld_prev, back)
        };
        let lo_bound = u_prev.max(SCAN_START);
        let uk = if lo_bound < u && gap(k, lo_bound, ld_at(lo_bound)) < 0.0 {
            bisect_bool(|v| gap(k, v, ld_at(v)) >= 0.0, lo_bound, u, 60).1
        } else {
            u
        };
        let ldk = ld_at(uk);
        let ln_phi = phi1.ln_eval(uk.exp());
        let ln_len = -(k as f64) * LN_2 - ln_phi;
        let modular_fk = (ln_len + ln_phi).exp();
        let ln_mod12 = ln_len + phi1.ln_eval(12.0 * uk.exp());
        let ln_lb = uk + ln_len + ldk;
        total += modular_fk;
        sums.push(total);
        records.push(TermRecord {
            k,
            log10_t: (uk - k as f64 * LN_2) / LN_10,
            log10_height: uk / LN_10,
            a_k: a,
            log10_len: ln_len / LN_10,
            modular_fk,
            log10_modular_12fk: ln_mod12 / LN_10,
            log10_lower_bound: ln_lb / LN_10,
        });
        a += ln_len.exp();
    }
    let ratio_trend = records
        .windows(2)
        .map(|w| 10f64.powf(w[1].log10_lower_bound - w[0].log10_lower_bound))
        .collect();
    Ok(CounterexampleReport {
        phi1: phi1.spec(),
        phi2: phi2.spec(),
        terms,
        records,
        modular_partial_sums: sums,
        ratio_trend,
    })
}
