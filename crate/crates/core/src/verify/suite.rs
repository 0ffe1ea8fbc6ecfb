//! The bundled scenario set behind `verify all`, negative controls included.

use super::*;
use crate::error::Result;
use crate::extension::{poisson_extend, RadonMeasure};
use crate::grid::{GridFunction, GridSpec};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteEntry {
    pub id: String,
    pub expect: Expect,
    pub report: std::result::Result<VerificationReport, String>,
}

impl SuiteEntry {
    /// The scenario behaved as designed: positives pass, negatives fail.
    pub fn as_expected(&self) -> bool {
        match (&self.report, self.expect) {
            (Ok(r), Expect::Pass) => r.overall,
            (Ok(r), Expect::Fail) => !r.overall,
            (Err(_), _) => false,
        }
    }
}

type Job = Box<dyn Fn() -> Result<VerificationReport> + Send + Sync>;

/// Smooth corpus: Gaussians, a Cauchy density and bumps.
pub const SMOOTH_CORPUS: [&str; 4] = ["gauss:s=1", "cauchy:y=1", "bump:c=0,r=2", "bump:c=1,r=3"];
pub const CORPUS_PHIS: [&str; 3] = ["power:p=2", "power:p=3", "powerlog:p=2,beta=1"];

fn phi(s: &str) -> GrowthFunction {
    GrowthFunction::parse(s).expect("bundled growth spec")
}

fn func(s: &str, spec: GridSpec) -> GridFunction {
    GridFunction::parse(s, spec).expect("bundled function spec")
}

fn jobs(spec: GridSpec) -> Vec<(String, Expect, Job)> {
    let mut v: Vec<(String, Expect, Job)> = Vec::new();
    let cfg = VerifyConfig::default();

    for f in SMOOTH_CORPUS {
        for p in CORPUS_PHIS {
            let c = cfg.clone();
            v.push((
                format!("poisson {f} {p}"),
                Expect::Pass,
                Box::new(move || verify_poisson_representation(&func(f, spec), &phi(p), &c)),
            ));
        }
    }
    let c = cfg.clone();
    v.push(("poisson zero".into(), Expect::Pass, Box::new(move || verify_poisson_representation(&func("zero", spec), &phi("power:p=2"), &c))));
    let mut far = cfg.clone();
    far.lattice = HeightLattice::new(vec![4.0, 2.0, 1.0]).expect("lattice");
    v.push((
        "poisson lattice far from boundary".into(),
        Expect::Fail,
        Box::new(move || verify_poisson_representation(&func("gauss:s=1", spec), &phi("power:p=2"), &far)),
    ));

    let measure_cases: Vec<(&str, Expect, Vec<(f64, f64)>, Option<&str>, Vec<(f64, f64)>, &str)> = vec![
        ("measure delta", Expect::Pass, vec![(0.0, 1.0)], None, vec![(0.0, 1.0)], "bump:c=0,r=1"),
        ("measure density disjoint", Expect::Pass, vec![], Some("rect:a=0,b=1"), vec![], "bump:c=2.5,r=0.5"),
        ("measure two atoms", Expect::Pass, vec![(-1.0, 0.5), (1.0, 0.5)], None, vec![(-1.0, 0.5), (1.0, 0.5)], "tent:c=1,r=1"),
        ("measure wrong target", Expect::Fail, vec![(0.0, 1.0)], None, vec![(0.5, 1.0)], "bump:c=0,r=1"),
    ];
    for (id, e, atoms, density, claimed, test) in measure_cases {
        let c = cfg.clone();
        v.push((
            id.into(),
            e,
            Box::new(move || {
                let d = density.map(|s| func(s, spec));
                let mu = RadonMeasure::new(atoms.clone(), d.clone())?;
                let nu = RadonMeasure::new(claimed.clone(), d)?;
                verify_measure_against(&mu, &nu, &[func(test, spec)], &c)
            }),
        ));
    }

    for f in ["cauchy:y=1", "gauss:s=1", "zero"] {
        let c = cfg.clone();
        v.push((format!("cauchy {f}"), Expect::Pass, Box::new(move || verify_cauchy_representation(&func(f, spec), &phi("power:p=2"), &c))));
    }
    let mut raw = cfg.clone();
    raw.manufacture_analytic = false;
    v.push((
        "cauchy real boundary".into(),
        Expect::Fail,
        Box::new(move || verify_cauchy_representation(&func("cauchy:y=1", spec), &phi("power:p=2"), &raw)),
    ));

    for (f, p, e) in [("gauss:s=1", "power:p=2", Expect::Pass), ("cauchy:y=1", "power:p=3", Expect::Pass), ("gauss:s=1", "tlog", Expect::Fail)] {
        let c = cfg.clone();
        v.push((format!("riesz {f} {p}"), e, Box::new(move || verify_riesz_projection(&func(f, spec), &phi(p), &c))));
    }

    for (p, a, e) in [("power:p=2", 0.0, Expect::Pass), ("power:p=2", 1.0, Expect::Pass), ("power:p=2", 4.0, Expect::Pass), ("tlog", 1.0, Expect::Fail)] {
        let c = cfg.clone();
        v.push((
            format!("maximal gauss:s=1 {p} alpha={a}"),
            e,
            Box::new(move || verify_maximal_equivalences(&func("gauss:s=1", spec), &phi(p), a, &c)),
        ));
    }

    let pairs = [
        ("gauss:s=1", "gauss:s=1", "power:p=2"),
        ("gauss:s=1", "cauchy:y=1", "power:p=2"),
        ("cauchy:y=1", "bump:c=1,r=3", "power:p=2"),
        ("bump:c=0,r=2", "gauss:s=3,c=-2", "power:p=3"),
        ("cauchy:y=1", "bump:c=0,r=1.5", "power:p=3"),
        ("gauss:s=1", "zero", "power:p=3"),
    ];
    for (f, g, p) in pairs {
        let c = cfg.clone();
        v.push((format!("duality {f} {g} {p}"), Expect::Pass, Box::new(move || verify_duality(&func(f, spec), &func(g, spec), &phi(p), &c))));
    }
    let mut tight = cfg.clone();
    tight.sandwich_factor = 1.0;
    v.push((
        "duality sandwich constant 1".into(),
        Expect::Fail,
        Box::new(move || verify_duality(&func("gauss:s=1", spec), &func("gauss:s=1", spec), &phi("power:p=2"), &tight)),
    ));

    for (factor, e) in [(1.0, Expect::Pass), (0.1, Expect::Fail)] {
        let mut c = cfg.clone();
        c.disk_bound_factor = factor;
        v.push((
            format!("cayley gauss:s=1 factor={factor}"),
            e,
            Box::new(move || {
                let field = poisson_extend(&func("gauss:s=1", spec), &c.cayley_lattice);
                Ok(cayley_transfer(&field, &phi("power:p=2"), &[0.5, 0.9], &c)?.1)
            }),
        ));
    }
    v
}

/// Ids and expectations of the bundled scenarios, without running them.
pub fn catalog(spec: GridSpec) -> Vec<(String, Expect)> {
    jobs(spec).into_iter().map(|(id, e, _)| (id, e)).collect()
}

/// Runs every bundled scenario on `spec`, in parallel, in a fixed order.
pub fn run_all(spec: GridSpec) -> Vec<SuiteEntry> {
    run_matching(spec, |_| true)
}

/// Runs the bundled scenarios whose id satisfies `keep`.
pub fn run_matching<P: Fn(&str) -> bool>(spec: GridSpec, keep: P) -> Vec<SuiteEntry> {
    jobs(spec)
        .into_iter()
        .filter(|(id, _, _)| keep(id))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(id, expect, job)| SuiteEntry { id, expect, report: job().map_err(|e| e.to_string()) })
        .collect()
}
