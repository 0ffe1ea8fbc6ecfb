//! Scenario files: one JSON object naming a command and its inputs. Every
//! field has a default, and `resolve` writes the defaults back so the echo
//! in a report is complete.

use orlab::extension::HeightLattice;
use orlab::hilbert::EpsSchedule;
use orlab::tolerances;
use orlab::GridSpec;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const COMMANDS: [&str; 17] = [
    "growth:check",
    "norm",
    "dual-norm",
    "extend",
    "hilbert",
    "maximal",
    "counterexample",
    "verify:poisson",
    "verify:measure",
    "verify:cauchy",
    "verify:riesz",
    "verify:maximal",
    "verify:duality",
    "verify:cayley",
    "verify:all",
    "report",
    "growth",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown key `{key}` at {path} (line {line}, column {column})")]
    UnknownKey { key: String, path: String, line: usize, column: usize },
    #[error("parse error at {path} (line {line}, column {column}): {message}")]
    ParseError { path: String, line: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] orlab::OrlabError),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn kind(&self) -> String {
        match self {
            CliError::UnknownKey { .. } => "UnknownKey".into(),
            CliError::ParseError { .. } => "ParseError".into(),
            CliError::Usage(_) => "Usage".into(),
            CliError::Io { .. } => "Io".into(),
            CliError::Core(e) => {
                let d = format!("{e:?}");
                d.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Core").to_string()
            }
        }
    }

    pub fn io(path: &str, e: impl std::fmt::Display) -> CliError {
        CliError::Io { path: path.into(), message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(rename = "L", default = "default_l")]
    pub half_width: f64,
    #[serde(rename = "N", default = "default_n")]
    pub points: usize,
}

fn default_l() -> f64 {
    256.0
}

fn default_n() -> usize {
    32768
}

impl Default for Grid {
    fn default() -> Self {
        Grid { half_width: default_l(), points: default_n() }
    }
}

impl Grid {
    pub fn spec(&self) -> CliResult<GridSpec> {
        Ok(GridSpec::new(self.half_width, self.points)?)
    }
}

/// Atoms (position, weight) plus an optional density spec.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeasureSpec {
    pub atoms: Vec<(f64, f64)>,
    pub density: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for ProbeSpec {
    fn default() -> Self {
        ProbeSpec { t_min: tolerances::PROBE_T_MIN, t_max: tolerances::PROBE_T_MAX, points: tolerances::PROBE_POINTS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub norm_rtol: f64,
    pub pointwise_tol: f64,
    pub monotone_slack: f64,
    pub sandwich_slack: f64,
    pub membership_tol: f64,
    pub sandwich_factor: f64,
    pub disk_bound_factor: f64,
    pub interior_fraction: f64,
    pub angles: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            norm_rtol: tolerances::NORM_RTOL,
            pointwise_tol: tolerances::POINTWISE_TOL,
            monotone_slack: tolerances::MONOTONE_SLACK,
            sandwich_slack: tolerances::SANDWICH_SLACK,
            membership_tol: tolerances::MEMBERSHIP_TOL,
            sandwich_factor: 2.0,
            disk_bound_factor: 1.0,
            interior_fraction: 0.5,
            angles: 1024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Output {
    /// Report path; `-` sends the JSON to stdout in place of the summary.
    pub json: Option<String>,
    pub csv: Option<String>,
    pub svg: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    pub command: String,
    pub phi: Option<String>,
    pub phi2: Option<String>,
    #[serde(rename = "fn")]
    pub f: Option<String>,
    pub g: Option<String>,
    pub measure: Option<MeasureSpec>,
    /// Measure whose field is claimed to represent `measure`.
    pub claimed: Option<MeasureSpec>,
    pub test_fns: Vec<String>,
    pub grid: Grid,
    pub heights: Option<Vec<f64>>,
    /// poisson, conjugate or cauchy
    pub kind: String,
    /// `spectral`, `pv` or `pv:8h,4h,2h`
    pub method: String,
    pub eps: Option<String>,
    pub hilbert_maximal: bool,
    /// hl, dyadic, radial or ntg
    pub op: String,
    pub alpha: f64,
    pub beta: String,
    pub at: Vec<f64>,
    pub terms: usize,
    pub radii: Vec<f64>,
    pub probe: ProbeSpec,
    pub tolerances: Tolerances,
    pub manufacture_analytic: bool,
    pub partner: String,
    pub filter: Option<String>,
    pub inputs: Vec<String>,
    pub output: Output,
    pub seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            command: String::new(),
            phi: None,
            phi2: None,
            f: None,
            g: None,
            measure: None,
            claimed: None,
            test_fns: vec![],
            grid: Grid::default(),
            heights: None,
            kind: "poisson".into(),
            method: "spectral".into(),
            eps: None,
            hilbert_maximal: false,
            op: "hl".into(),
            alpha: 0.0,
            beta: "0".into(),
            at: vec![],
            terms: 3,
            radii: vec![0.5, 0.9],
            probe: ProbeSpec::default(),
            tolerances: Tolerances::default(),
            manufacture_analytic: true,
            partner: "gauss:s=2,c=1".into(),
            filter: None,
            inputs: vec![],
            output: Output::default(),
            seed: 0,
        }
    }
}

fn lattice_values(l: HeightLattice) -> Vec<f64> {
    l.heights().to_vec()
}

impl Scenario {
    pub fn new(command: &str) -> Scenario {
        Scenario { command: command.into(), ..Scenario::default() }
    }

    /// Default heights depend on the command: the maximal functions need
    /// heights up to the window scale, the disk transfer a finer lattice.
    fn default_heights(&self) -> Vec<f64> {
        let radial = self.command == "maximal" && matches!(self.op.as_str(), "radial" | "ntg");
        if radial || self.command == "verify:maximal" {
            lattice_values(HeightLattice::dyadic(10, -8, 2))
        } else if self.command == "verify:cayley" {
            lattice_values(HeightLattice::dyadic(5, -8, 4))
        } else {
            lattice_values(HeightLattice::default())
        }
    }

    /// Checks the command and fills every defaulted input.
    pub fn resolve(mut self) -> CliResult<Scenario> {
        if self.command == "growth" {
            self.command = "growth:check".into();
        }
        if !COMMANDS.contains(&self.command.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown command `{}`; expected one of {}",
                self.command,
                COMMANDS[..16].join(", ")
            )));
        }
        self.grid.spec()?;
        if self.heights.is_none() {
            self.heights = Some(self.default_heights());
        }
        HeightLattice::new(self.heights.clone().unwrap_or_default())?;
        self.method = match self.method.as_str() {
            "spectral" => "spectral".into(),
            "pv" => "pv:8h,4h,2h".into(),
            m if m.starts_with("pv:") => {
                EpsSchedule::parse(&m[3..])?;
                m.into()
            }
            m => return Err(CliError::Usage(format!("unknown method `{m}`; expected spectral, pv or pv:<eps list>"))),
        };
        if self.command == "hilbert" && self.hilbert_maximal && self.eps.is_none() {
            let spec = self.grid.spec()?;
            let list: Vec<String> = EpsSchedule::maximal_default(spec)
                .0
                .iter()
                .map(|e| e.resolve(spec.h()).to_string())
                .collect();
            self.eps = Some(list.join(","));
        }
        if !matches!(self.kind.as_str(), "poisson" | "conjugate" | "cauchy") {
            return Err(CliError::Usage(format!("unknown kind `{}`; expected poisson, conjugate or cauchy", self.kind)));
        }
        if !matches!(self.op.as_str(), "hl" | "dyadic" | "radial" | "ntg") {
            return Err(CliError::Usage(format!("unknown op `{}`; expected hl, dyadic, radial or ntg", self.op)));
        }
        if orlab::maximal::Beta::parse(&self.beta).is_none() {
            return Err(CliError::Usage(format!("beta must be 0 or 1/3, got `{}`", self.beta)));
        }
        if self.command == "counterexample" && self.phi2.is_none() {
            self.phi2 = self.phi.clone();
        }
        if self.command == "verify:duality" && self.g.is_none() {
            self.g = self.f.clone();
        }
        if self.command == "verify:measure" {
            if self.claimed.is_none() {
                self.claimed = self.measure.clone();
            }
            if self.test_fns.is_empty() {
                self.test_fns = vec!["bump:c=0,r=1".into()];
            }
        }
        Ok(self)
    }

    pub fn lattice(&self) -> CliResult<HeightLattice> {
        Ok(HeightLattice::new(self.heights.clone().unwrap_or_else(|| self.default_heights()))?)
    }

    pub fn need<'a>(&self, v: &'a Option<String>, name: &str) -> CliResult<&'a str> {
        v.as_deref().ok_or_else(|| CliError::Usage(format!("`{}` needs `{name}`", self.command)))
    }
}

/// Reads and resolves a scenario file. Unknown keys are rejected with the
/// path of the offending field.
pub fn load_scenario(path: &str) -> CliResult<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_scenario(&text)?.resolve()
}

pub fn parse_scenario(text: &str) -> CliResult<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let (line, column) = (inner.line(), inner.column());
        let message = inner.to_string();
        match message.strip_prefix("unknown field `").and_then(|r| r.split_once('`')) {
            Some((key, _)) => CliError::UnknownKey { key: key.into(), path, line, column },
            None => {
                let message = message.split(" at line ").next().unwrap_or(&message).to_string();
                CliError::ParseError { path, line, column, message }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_norm_gets_the_default_grid() {
        let s = parse_scenario(r#"{"command": "norm", "phi": "power:p=2", "fn": "gauss:s=1"}"#)
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(s.grid, Grid { half_width: 256.0, points: 32768 });
        assert_eq!(s.heights.as_ref().unwrap().len(), 9);
        assert_eq!(s.method, "spectral");
    }

    #[test]
    fn unknown_key_is_named() {
        let e = parse_scenario("{\"command\": \"norm\",\n \"gird\": {}}").unwrap_err();
        match e {
            CliError::UnknownKey { key, line, .. } => {
                assert_eq!(key, "gird");
                assert_eq!(line, 2);
            }
            o => panic!("{o:?}"),
        }
        let e = parse_scenario(r#"{"command": "norm", "tolerances": {"norm_rtl": 1}}"#).unwrap_err();
        assert!(matches!(e, CliError::UnknownKey { ref key, ref path, .. } if key == "norm_rtl" && path.starts_with("tolerances")));
    }

    #[test]
    fn type_errors_carry_the_field() {
        let e = parse_scenario("{\"command\": \"norm\",\n\"alpha\": \"big\"}").unwrap_err();
        match e {
            CliError::ParseError { path, line, .. } => {
                assert_eq!(path, "alpha");
                assert_eq!(line, 2);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn defaults_follow_the_command() {
        let s = Scenario::new("verify:maximal").resolve().unwrap();
        assert_eq!(s.heights.unwrap()[0], 1024.0);
        let s = Scenario::new("counterexample");
        let s = Scenario { phi: Some("tlog".into()), ..s }.resolve().unwrap();
        assert_eq!(s.phi2.as_deref(), Some("tlog"));
        assert!(Scenario::new("nrom").resolve().is_err());
    }
}
