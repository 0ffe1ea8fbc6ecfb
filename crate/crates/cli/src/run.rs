//! Command dispatch. Each command returns a JSON result, an optional
//! pass/fail verdict, a short text summary and optional CSV rows.

use crate::plot::plot_for;
use crate::scenario::{CliError, CliResult, MeasureSpec, Scenario};
use orlab::extension::{conjugate_extend, cauchy_transform, poisson_extend, poisson_extend_measure, HalfPlaneField, RadonMeasure};
use orlab::growth::{
    check_convex, check_delta2, check_dini_domination, check_equivalence, check_nabla2, estimate_indices, Probe,
};
use orlab::hilbert::{hilbert_maximal, hilbert_transform, EpsSchedule, HilbertMethod};
use orlab::maximal::{
    build_counterexample, dyadic_maximal, hl_maximal, nontangential_maximal, radial_maximal, Beta, ConeSpec,
    PiecewiseConstant,
};
use orlab::norms::{luxemburg_norm, orlicz_dual_norm, slice_norms};
use orlab::verify::suite::run_matching;
use orlab::verify::{
    cayley_transfer, verify_cauchy_representation, verify_duality, verify_maximal_equivalences, verify_measure_against,
    verify_poisson_representation, verify_riesz_projection, VerificationReport, VerifyConfig,
};
use orlab::{GridFunction, GrowthFunction};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;

pub struct Outcome {
    pub result: Value,
    /// `None` for commands that compute rather than check.
    pub pass: Option<bool>,
    pub text: String,
    pub csv: Option<Vec<u8>>,
    /// Prerendered plot (the `report` command picks one of its inputs).
    pub svg: Option<String>,
}

impl Outcome {
    fn info(result: Value, text: String) -> Outcome {
        Outcome { result, pass: None, text, csv: None, svg: None }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    pass: Option<bool>,
    scenario: &'a Scenario,
    result: &'a Value,
}

/// Pretty JSON for the report file; byte-identical for identical input.
pub fn report_json(s: &Scenario, o: &Outcome) -> String {
    let env = Envelope { command: &s.command, pass: o.pass, scenario: s, result: &o.result };
    let mut out = serde_json::to_string_pretty(&env).expect("report serialises");
    out.push('\n');
    out
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serialises")
}

fn phi_of(s: &Scenario) -> CliResult<GrowthFunction> {
    Ok(GrowthFunction::parse(s.need(&s.phi, "phi")?)?)
}

fn fn_of(s: &Scenario) -> CliResult<GridFunction> {
    Ok(GridFunction::parse(s.need(&s.f, "fn")?, s.grid.spec()?)?)
}

fn method_of(s: &Scenario) -> CliResult<HilbertMethod> {
    Ok(match s.method.strip_prefix("pv:") {
        Some(list) => HilbertMethod::PvQuadrature(EpsSchedule::parse(list)?),
        None => HilbertMethod::Spectral,
    })
}

fn measure_of(m: &MeasureSpec, s: &Scenario) -> CliResult<RadonMeasure> {
    let spec = s.grid.spec()?;
    let d = m.density.as_deref().map(|d| GridFunction::parse(d, spec)).transpose()?;
    Ok(RadonMeasure::new(m.atoms.clone(), d)?)
}

/// Linear interpolation between nodes; `None` off the grid.
fn interp(g: &GridFunction, x: f64) -> Option<(f64, f64)> {
    let s = g.spec();
    let u = (x + s.half_width) / s.h();
    if !(u >= 0.0 && u <= (s.points - 1) as f64) {
        return None;
    }
    let j = (u.floor() as usize).min(s.points - 2);
    let t = u - j as f64;
    let v = g.values()[j] * (1.0 - t) + g.values()[j + 1] * t;
    Some((v.re, v.im))
}

fn err_value(e: orlab::OrlabError) -> Value {
    let kind = CliError::from(e.clone()).kind();
    json!({ "error": kind, "message": e.to_string() })
}

fn condition_line(name: &str, r: &orlab::growth::ConditionReport) -> String {
    match (r.satisfied, r.constant, r.witness) {
        (true, Some(c), _) => format!("{name}: satisfied (constant {c:.6e})"),
        (false, _, Some(w)) => format!("{name}: not satisfied (witness t = {w:.3e})"),
        (s, _, _) => format!("{name}: {}", if s { "satisfied" } else { "not satisfied" }),
    }
}

fn growth_check(s: &Scenario) -> CliResult<Outcome> {
    let phi = phi_of(s)?;
    let probe = Probe::new(s.probe.t_min, s.probe.t_max, s.probe.points)?;
    let mut text = format!("phi: {}\n", phi.spec());
    let convex = check_convex(&phi);
    let _ = writeln!(text, "convex: {}", if convex.is_ok() { "yes" } else { "no" });
    let _ = writeln!(text, "N-function: {}", if phi.is_n_function() { "yes" } else { "no" });
    let idx = estimate_indices(&phi, &probe)?;
    let _ = writeln!(text, "indices: a = {:.6}, b = {:.6}", idx.a_asymptotic, idx.b_asymptotic);
    let delta2 = check_delta2(&phi, &probe)?;
    text.push_str(&condition_line("Delta2", &delta2));
    text.push('\n');
    let nabla2 = match check_nabla2(&phi, &probe) {
        Ok(r) => {
            text.push_str(&condition_line("Nabla2", &r));
            text.push('\n');
            to_value(&r)
        }
        Err(e) => {
            let _ = writeln!(text, "Nabla2: {e}");
            err_value(e)
        }
    };
    let mut result = json!({
        "phi": phi.spec(),
        "probe": probe,
        "convex": convex.is_ok(),
        "n_function": phi.is_n_function(),
        "indices": idx,
        "delta2": delta2,
        "nabla2": nabla2,
    });
    if let Some(p2) = &s.phi2 {
        let phi2 = GrowthFunction::parse(p2)?;
        let dini = check_dini_domination(&phi, &phi2, &probe)?;
        let eq = check_equivalence(&phi, &phi2, &probe)?;
        text.push_str(&condition_line(&format!("Dini domination by {}", phi2.spec()), &dini));
        text.push('\n');
        text.push_str(&condition_line("equivalence", &eq));
        text.push('\n');
        result["phi2"] = json!(phi2.spec());
        result["dini_domination"] = to_value(&dini);
        result["equivalence"] = to_value(&eq);
    }
    Ok(Outcome::info(result, text))
}

fn norm(s: &Scenario) -> CliResult<Outcome> {
    let (phi, f) = (phi_of(s)?, fn_of(s)?);
    let n = luxemburg_norm(&f, &phi)?;
    let text = format!("{}\n", n.value);
    Ok(Outcome::info(
        json!({ "phi": phi.spec(), "luxemburg": n, "l1": f.l1(), "l2": f.l2(), "max_abs": f.max_abs() }),
        text,
    ))
}

fn dual_norm(s: &Scenario) -> CliResult<Outcome> {
    let (phi, f) = (phi_of(s)?, fn_of(s)?);
    let lux = luxemburg_norm(&f, &phi)?;
    let d = orlicz_dual_norm(&f, &phi)?;
    let ratio = if lux.value > 0.0 { d.norm.value / lux.value } else { 0.0 };
    let text = format!("{}\nratio to the Luxemburg norm: {ratio:.6}\n", d.norm.value);
    Ok(Outcome::info(json!({ "phi": phi.spec(), "dual": d, "luxemburg": lux.value, "ratio": ratio }), text))
}

fn field_of(s: &Scenario) -> CliResult<HalfPlaneField> {
    let lattice = s.lattice()?;
    if let Some(m) = &s.measure {
        if s.kind != "poisson" {
            return Err(CliError::Usage("measures extend with kind poisson only".into()));
        }
        return Ok(poisson_extend_measure(&measure_of(m, s)?, s.grid.spec()?, &lattice)?);
    }
    let f = fn_of(s)?;
    Ok(match s.kind.as_str() {
        "conjugate" => conjugate_extend(&f, &lattice),
        "cauchy" => cauchy_transform(&f, &lattice),
        _ => poisson_extend(&f, &lattice),
    })
}

fn extend(s: &Scenario) -> CliResult<Outcome> {
    let field = field_of(s)?;
    let heights = field.lattice.heights().to_vec();
    let sup: Vec<f64> = field.values.iter().map(|r| r.iter().fold(0.0f64, |m, v| m.max(v.norm()))).collect();
    let mut result = json!({ "kind": s.kind, "heights": heights, "sup_abs": sup });
    let mut text = String::from("y            sup|F|");
    let norms = match &s.phi {
        Some(p) => {
            let phi = GrowthFunction::parse(p)?;
            let n: Vec<f64> = slice_norms(&field.values, field.spec, &phi)?.iter().map(|r| r.value).collect();
            result["phi"] = json!(phi.spec());
            result["slice_norms"] = json!(n);
            text.push_str("        slice norm");
            Some(n)
        }
        None => None,
    };
    text.push('\n');
    for (i, y) in heights.iter().enumerate() {
        let _ = write!(text, "{y:<12.6e} {:<12.6e}", sup[i]);
        if let Some(n) = &norms {
            let _ = write!(text, "  {:.9e}", n[i]);
        }
        text.push('\n');
    }
    let csv = if s.output.csv.is_some() {
        let mut buf = Vec::new();
        field.write_csv(&mut buf)?;
        Some(buf)
    } else {
        None
    };
    Ok(Outcome { result, pass: None, text, csv, svg: None })
}

fn hilbert(s: &Scenario) -> CliResult<Outcome> {
    let f = fn_of(s)?;
    let out = if s.hilbert_maximal {
        hilbert_maximal(&f, &EpsSchedule::parse(s.need(&s.eps, "eps")?)?)?
    } else {
        hilbert_transform(&f, &method_of(s)?)?
    };
    let at: Vec<Value> = s
        .at
        .iter()
        .map(|&x| match interp(&out, x) {
            Some((re, im)) => json!({ "x": x, "re": re, "im": im }),
            None => json!({ "x": x, "re": null, "im": null }),
        })
        .collect();
    let mut result = json!({
        "operator": if s.hilbert_maximal { "hilbert_maximal" } else { "hilbert" },
        "max_abs": out.max_abs(),
        "l2": out.l2(),
        "at": at,
    });
    if let Some(p) = &s.phi {
        let phi = GrowthFunction::parse(p)?;
        result["phi"] = json!(phi.spec());
        result["norm_f"] = json!(luxemburg_norm(&f, &phi)?.value);
        result["norm_out"] = json!(luxemburg_norm(&out, &phi)?.value);
    }
    let text = if s.at.is_empty() {
        format!("max |out| = {:.9e}\nL2 = {:.9e}\n", out.max_abs(), out.l2())
    } else {
        s.at.iter()
            .map(|&x| match interp(&out, x) {
                Some((re, im)) if im == 0.0 => format!("{re}\n"),
                Some((re, im)) => format!("{re} {im}\n"),
                None => "nan\n".into(),
            })
            .collect()
    };
    let csv = if s.output.csv.is_some() {
        let mut buf = Vec::new();
        out.write_csv(&mut buf)?;
        Some(buf)
    } else {
        None
    };
    Ok(Outcome { result, pass: None, text, csv, svg: None })
}

/// Breakpoints and plateau values when `spec` is a sum of `rect` terms.
fn rect_steps(spec: &str) -> Option<(Vec<f64>, Vec<f64>)> {
    let mut rects = Vec::new();
    for term in spec.split('+') {
        let rest = term.trim().strip_prefix("rect:")?;
        let (mut a, mut b, mut amp) = (None, None, 1.0);
        for kv in rest.split(',') {
            let (k, v) = kv.split_once('=')?;
            let v: f64 = v.trim().parse().ok()?;
            match k.trim() {
                "a" => a = Some(v),
                "b" => b = Some(v),
                "amp" => amp = v,
                _ => return None,
            }
        }
        rects.push((a?, b?, amp));
    }
    let mut bp: Vec<f64> = rects.iter().flat_map(|r| [r.0, r.1]).collect();
    bp.sort_by(f64::total_cmp);
    bp.dedup();
    let vals = bp
        .windows(2)
        .map(|w| rects.iter().filter(|r| r.0 <= w[0] && w[1] <= r.1).map(|r| r.2).sum())
        .collect();
    Some((bp, vals))
}

const OVERLAY_POINTS: usize = 801;

fn maximal(s: &Scenario) -> CliResult<Outcome> {
    let spec = s.grid.spec()?;
    let f = fn_of(s)?;
    let beta = Beta::parse(&s.beta).expect("resolved");
    let exact = match s.op.as_str() {
        "hl" | "dyadic" => rect_steps(s.need(&s.f, "fn")?),
        _ => None,
    };
    let (path, xs, fx, mx, at): (&str, Vec<f64>, Vec<f64>, Vec<f64>, Vec<Option<f64>>) = match exact {
        Some((bp, vals)) => {
            let pc = PiecewiseConstant::new(bp.clone(), vals)?;
            let m = |x: f64| if s.op == "hl" { pc.hl_at(x) } else { pc.dyadic_at(x, beta) };
            let (lo, hi) = (bp[0], bp[bp.len() - 1]);
            let w = hi - lo;
            let xs: Vec<f64> = (0..OVERLAY_POINTS)
                .map(|i| lo - w + 3.0 * w * i as f64 / (OVERLAY_POINTS - 1) as f64)
                .collect();
            let fx = xs.iter().map(|&x| pc.eval(x).abs()).collect();
            let mx = xs.iter().map(|&x| m(x)).collect();
            let at = s.at.iter().map(|&x| Some(m(x))).collect();
            ("exact", xs, fx, mx, at)
        }
        None => {
            let g = match s.op.as_str() {
                "hl" => hl_maximal(&f),
                "dyadic" => dyadic_maximal(&f, beta),
                op => {
                    let field = poisson_extend(&f, &s.lattice()?);
                    if op == "radial" {
                        radial_maximal(&field)
                    } else {
                        nontangential_maximal(&field, ConeSpec::new(s.alpha)?)
                    }
                }
            };
            let w = spec.half_width / 16.0;
            let (j0, j1) = (spec.nearest(-w), spec.nearest(w));
            let stride = ((j1 - j0) / (OVERLAY_POINTS - 1)).max(1);
            let js: Vec<usize> = (j0..=j1).step_by(stride).collect();
            let xs = js.iter().map(|&j| spec.x(j)).collect();
            let fx = js.iter().map(|&j| f.values()[j].norm()).collect();
            let mx = js.iter().map(|&j| g.values()[j].re).collect();
            let at = s.at.iter().map(|&x| interp(&g, x).map(|v| v.0)).collect();
            ("grid", xs, fx, mx, at)
        }
    };
    let text = if s.at.is_empty() {
        format!("sup Mf = {:.9e} ({path} path)\n", mx.iter().cloned().fold(0.0, f64::max))
    } else {
        at.iter().map(|v| v.map_or("nan\n".into(), |v| format!("{v}\n"))).collect()
    };
    let csv = if s.output.csv.is_some() {
        let mut buf = String::from("x,f,mf\n");
        for i in 0..xs.len() {
            let _ = writeln!(buf, "{},{},{}", xs[i], fx[i], mx[i]);
        }
        Some(buf.into_bytes())
    } else {
        None
    };
    let at: Vec<Value> = s.at.iter().zip(&at).map(|(x, v)| json!({ "x": x, "value": v })).collect();
    let result = json!({ "op": s.op, "path": path, "at": at, "x": xs, "f": fx, "mf": mx });
    Ok(Outcome { result, pass: None, text, csv, svg: None })
}

fn counterexample(s: &Scenario) -> CliResult<Outcome> {
    let phi1 = phi_of(s)?;
    let phi2 = GrowthFunction::parse(s.need(&s.phi2, "phi2")?)?;
    let rep = build_counterexample(&phi1, &phi2, s.terms)?;
    let mut text = String::from("k  log10 height  log10 lower bound  partial modular sum\n");
    for (i, r) in rep.records.iter().enumerate() {
        let _ = writeln!(
            text,
            "{:<2} {:<14.4} {:<18.4} {:.6}",
            r.k, r.log10_height, r.log10_lower_bound, rep.modular_partial_sums[i]
        );
    }
    let _ = writeln!(text, "ratios: {:?}", rep.ratio_trend);
    let csv = if s.output.csv.is_some() {
        let mut buf = String::from("k,log10_t,log10_height,a_k,log10_interval_len,modular_fk,log10_lower_bound\n");
        for r in &rep.records {
            let _ = writeln!(
                buf,
                "{},{},{},{},{},{},{}",
                r.k, r.log10_t, r.log10_height, r.a_k, r.log10_len, r.modular_fk, r.log10_lower_bound
            );
        }
        Some(buf.into_bytes())
    } else {
        None
    };
    Ok(Outcome { result: to_value(&rep), pass: None, text, csv, svg: None })
}

pub fn verify_config(s: &Scenario) -> CliResult<VerifyConfig> {
    let mut c = VerifyConfig::default();
    let lattice = s.lattice()?;
    match s.command.as_str() {
        "verify:maximal" => c.maximal_lattice = lattice,
        "verify:cayley" => c.cayley_lattice = lattice,
        _ => c.lattice = lattice,
    }
    c.method = method_of(s)?;
    let t = &s.tolerances;
    c.norm_rtol = t.norm_rtol;
    c.pointwise_tol = t.pointwise_tol;
    c.monotone_slack = t.monotone_slack;
    c.sandwich_slack = t.sandwich_slack;
    c.membership_tol = t.membership_tol;
    c.sandwich_factor = t.sandwich_factor;
    c.disk_bound_factor = t.disk_bound_factor;
    c.interior_fraction = t.interior_fraction;
    c.angles = t.angles;
    c.manufacture_analytic = s.manufacture_analytic;
    c.partner = s.partner.clone();
    c.counterexample_terms = s.terms;
    Ok(c)
}

fn checks_text(r: &VerificationReport) -> String {
    let mut t = format!("{} [{}]\n", r.theorem, serde_json::to_value(r.status).expect("status").as_str().unwrap_or(""));
    for c in &r.checks {
        let rel = serde_json::to_value(c.relation).expect("relation");
        let _ = writeln!(
            t,
            "{} {:<28} {:.6e} {} {:.6e} (tol {:.1e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.lhs,
            rel.as_str().unwrap_or(""),
            c.rhs,
            c.tol
        );
    }
    for n in &r.notes {
        let _ = writeln!(t, "note: {n}");
    }
    t
}

fn verify_one(s: &Scenario) -> CliResult<Outcome> {
    let cfg = verify_config(s)?;
    let rep = match s.command.as_str() {
        "verify:poisson" => verify_poisson_representation(&fn_of(s)?, &phi_of(s)?, &cfg)?,
        "verify:cauchy" => verify_cauchy_representation(&fn_of(s)?, &phi_of(s)?, &cfg)?,
        "verify:riesz" => verify_riesz_projection(&fn_of(s)?, &phi_of(s)?, &cfg)?,
        "verify:maximal" => verify_maximal_equivalences(&fn_of(s)?, &phi_of(s)?, s.alpha, &cfg)?,
        "verify:duality" => {
            let g = GridFunction::parse(s.need(&s.g, "g")?, s.grid.spec()?)?;
            verify_duality(&fn_of(s)?, &g, &phi_of(s)?, &cfg)?
        }
        "verify:measure" => {
            let m = s.measure.as_ref().ok_or_else(|| CliError::Usage("`verify:measure` needs `measure`".into()))?;
            let claimed = s.claimed.as_ref().unwrap_or(m);
            let spec = s.grid.spec()?;
            let tests = s.test_fns.iter().map(|t| GridFunction::parse(t, spec)).collect::<Result<Vec<_>, _>>()?;
            verify_measure_against(&measure_of(m, s)?, &measure_of(claimed, s)?, &tests, &cfg)?
        }
        _ => {
            let field = poisson_extend(&fn_of(s)?, &cfg.cayley_lattice);
            cayley_transfer(&field, &phi_of(s)?, &s.radii, &cfg)?.1
        }
    };
    Ok(Outcome { text: checks_text(&rep), pass: Some(rep.overall), result: to_value(&rep), csv: None, svg: None })
}

fn verify_all(s: &Scenario) -> CliResult<Outcome> {
    let filter = s.filter.clone();
    let entries = run_matching(s.grid.spec()?, |id| filter.as_deref().is_none_or(|f| id.contains(f)));
    if entries.is_empty() {
        return Err(CliError::Usage(format!("no bundled scenario matches `{}`", filter.unwrap_or_default())));
    }
    let behaved = entries.iter().filter(|e| e.as_expected()).count();
    let mut text = String::new();
    for e in &entries {
        let got = match &e.report {
            Ok(r) if r.overall => "passed".to_string(),
            Ok(_) => "failed".to_string(),
            Err(m) => format!("error: {m}"),
        };
        let want = if matches!(e.expect, orlab::verify::suite::Expect::Pass) { "pass" } else { "fail" };
        let _ = writeln!(text, "{} {:<52} expect {want}, {got}", if e.as_expected() { "OK " } else { "BAD" }, e.id);
    }
    let _ = writeln!(text, "{behaved}/{} scenarios behaved as designed", entries.len());
    let pass = behaved == entries.len();
    Ok(Outcome {
        result: json!({ "behaved": behaved, "total": entries.len(), "entries": entries }),
        pass: Some(pass),
        text,
        csv: None,
        svg: None,
    })
}

fn report(s: &Scenario) -> CliResult<Outcome> {
    if s.inputs.is_empty() {
        return Err(CliError::Usage("`report` needs at least one input report".into()));
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut svg = None;
    for path in &s.inputs {
        let raw = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let v: Value = serde_json::from_str(&raw)
            .map_err(|e| CliError::ParseError { path: path.clone(), line: e.line(), column: e.column(), message: e.to_string() })?;
        let command = v["command"].as_str().unwrap_or("?").to_string();
        let pass = v["pass"].as_bool();
        let _ = writeln!(
            text,
            "== {path}: {command} ({})",
            pass.map_or("informational", |p| if p { "pass" } else { "FAIL" })
        );
        let r = &v["result"];
        if let Some(checks) = r["checks"].as_array() {
            for c in checks {
                let _ = writeln!(
                    text,
                    "{} {:<28} lhs {} rhs {} tol {}",
                    if c["pass"].as_bool() == Some(true) { "PASS" } else { "FAIL" },
                    c["name"].as_str().unwrap_or(""),
                    c["lhs"],
                    c["rhs"],
                    c["tol"]
                );
            }
        } else if let Some(es) = r["entries"].as_array() {
            let _ = writeln!(text, "{} of {} behaved as designed", r["behaved"], es.len());
        }
        let plot = plot_for(&command, r);
        rows.push(json!({ "path": path, "command": command, "pass": pass, "plot": plot.is_some() }));
        if svg.is_none() && s.output.svg.is_some() {
            svg = plot.map(|p| p.svg());
        }
    }
    Ok(Outcome { svg, ..Outcome::info(json!({ "reports": rows }), text) })
}

pub fn run(s: &Scenario) -> CliResult<Outcome> {
    match s.command.as_str() {
        "growth:check" => growth_check(s),
        "norm" => norm(s),
        "dual-norm" => dual_norm(s),
        "extend" => extend(s),
        "hilbert" => hilbert(s),
        "maximal" => maximal(s),
        "counterexample" => counterexample(s),
        "verify:all" => verify_all(s),
        "report" => report(s),
        c if c.starts_with("verify:") => verify_one(s),
        c => Err(CliError::Usage(format!("unknown command `{c}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_sums_become_steps() {
        let (bp, v) = rect_steps("rect:a=0,b=2 + rect:a=1,b=3,amp=2").unwrap();
        assert_eq!(bp, vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(v, vec![1.0, 3.0, 2.0]);
        assert!(rect_steps("rect:a=0,b=1 + gauss:s=1").is_none());
    }
}
