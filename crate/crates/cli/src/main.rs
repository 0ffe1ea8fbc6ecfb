mod plot;
mod run;
mod scenario;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use plot::plot_for;
use run::{report_json, run, Outcome};
use scenario::{load_scenario, CliError, CliResult, MeasureSpec, Scenario};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "orlab", version, about = "Orlicz-space harmonic analysis on the line and the upper half-plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Grid half-width L (grid is [-L, L))
    #[arg(long, global = true)]
    half_width: Option<f64>,
    /// Grid size N, a power of two
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Report path (`-` prints the JSON instead of the summary)
    #[arg(long, global = true)]
    json: Option<String>,
    #[arg(long, global = true)]
    csv: Option<String>,
    #[arg(long, global = true)]
    svg: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Structural conditions of a growth function
    Growth {
        #[command(subcommand)]
        what: GrowthCmd,
    },
    /// Luxemburg norm
    Norm {
        #[arg(long)]
        phi: String,
        #[arg(long = "fn")]
        f: String,
    },
    /// Orlicz (dual) norm
    DualNorm {
        #[arg(long)]
        phi: String,
        #[arg(long = "fn")]
        f: String,
    },
    /// Poisson, conjugate or Cauchy extension on a height lattice
    Extend {
        #[arg(long = "fn")]
        f: Option<String>,
        /// Atom `position:weight`, repeatable
        #[arg(long = "atom", value_parser = parse_atom, allow_hyphen_values = true)]
        atoms: Vec<(f64, f64)>,
        #[arg(long)]
        density: Option<String>,
        #[arg(long, default_value = "poisson")]
        kind: String,
        /// Report slice norms for this growth function
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        heights: Option<Vec<f64>>,
    },
    /// Hilbert transform or Hilbert maximal function
    Hilbert {
        #[arg(long = "fn")]
        f: String,
        /// spectral, pv or pv:<eps list>
        #[arg(long, default_value = "spectral")]
        method: String,
        #[arg(long)]
        maximal: bool,
        /// Epsilon schedule for --maximal, e.g. `8h,4h,2h`
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
    },
    /// Maximal functions (hl, dyadic, radial, ntg)
    Maximal {
        #[arg(long, default_value = "hl")]
        op: String,
        #[arg(long = "fn")]
        f: String,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// 0 or 1/3
        #[arg(long, default_value = "0")]
        beta: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        heights: Option<Vec<f64>>,
    },
    /// Terms of the maximal-modular counterexample
    Counterexample {
        #[arg(long)]
        phi: String,
        /// Defaults to --phi
        #[arg(long)]
        phi2: Option<String>,
        #[arg(long, default_value_t = 3)]
        terms: usize,
    },
    /// Numerical checks with pass/fail reports
    Verify(VerifyArgs),
    /// Summarise saved reports; --svg plots the first plottable one
    Report {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Run a scenario file
    Run { scenario: String },
}

#[derive(Subcommand)]
enum GrowthCmd {
    Check {
        #[arg(long)]
        phi: String,
        /// Second function for Dini domination and equivalence
        #[arg(long)]
        phi2: Option<String>,
        #[arg(long)]
        t_min: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        probe_points: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Poisson,
    Measure,
    Cauchy,
    Riesz,
    Maximal,
    Duality,
    Cayley,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    kind: VerifyKind,
    #[arg(long)]
    phi: Option<String>,
    #[arg(long = "fn")]
    f: Option<String>,
    /// Second function for duality (defaults to --fn)
    #[arg(long)]
    g: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long = "atom", value_parser = parse_atom, allow_hyphen_values = true)]
    atoms: Vec<(f64, f64)>,
    #[arg(long)]
    density: Option<String>,
    /// Atoms of the measure the field is claimed to represent (defaults to --atom)
    #[arg(long = "claimed-atom", value_parser = parse_atom, allow_hyphen_values = true)]
    claimed_atoms: Vec<(f64, f64)>,
    /// Compactly supported test function, repeatable
    #[arg(long = "test")]
    tests: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    heights: Option<Vec<f64>>,
    #[arg(long, default_value = "spectral")]
    method: String,
    #[arg(long)]
    partner: Option<String>,
    #[arg(long)]
    sandwich_factor: Option<f64>,
    #[arg(long)]
    disk_factor: Option<f64>,
    #[arg(long)]
    norm_rtol: Option<f64>,
    /// Test the raw boundary data instead of f + iHf
    #[arg(long)]
    no_manufacture: bool,
    #[arg(long)]
    terms: Option<usize>,
    /// Run only the bundled scenarios whose id contains this text
    #[arg(long)]
    filter: Option<String>,
}

fn parse_atom(s: &str) -> Result<(f64, f64), String> {
    let (a, w) = s.split_once(':').ok_or_else(|| format!("expected position:weight, got `{s}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad position in `{s}`"))?;
    let w = w.trim().parse().map_err(|_| format!("bad weight in `{s}`"))?;
    Ok((a, w))
}

fn measure(atoms: Vec<(f64, f64)>, density: Option<String>) -> Option<MeasureSpec> {
    (!atoms.is_empty() || density.is_some()).then_some(MeasureSpec { atoms, density })
}

fn scenario_of(cli: Cli) -> CliResult<Scenario> {
    let mut s = match cli.command {
        Command::Run { scenario } => load_scenario(&scenario)?,
        Command::Growth { what: GrowthCmd::Check { phi, phi2, t_min, t_max, probe_points } } => {
            let mut s = Scenario { phi: Some(phi), phi2, ..Scenario::new("growth:check") };
            s.probe.t_min = t_min.unwrap_or(s.probe.t_min);
            s.probe.t_max = t_max.unwrap_or(s.probe.t_max);
            s.probe.points = probe_points.unwrap_or(s.probe.points);
            s
        }
        Command::Norm { phi, f } => Scenario { phi: Some(phi), f: Some(f), ..Scenario::new("norm") },
        Command::DualNorm { phi, f } => Scenario { phi: Some(phi), f: Some(f), ..Scenario::new("dual-norm") },
        Command::Extend { f, atoms, density, kind, phi, heights } => Scenario {
            f,
            measure: measure(atoms, density),
            kind,
            phi,
            heights,
            ..Scenario::new("extend")
        },
        Command::Hilbert { f, method, maximal, eps, phi, at } => Scenario {
            f: Some(f),
            method,
            hilbert_maximal: maximal,
            eps,
            phi,
            at,
            ..Scenario::new("hilbert")
        },
        Command::Maximal { op, f, alpha, beta, at, heights } => {
            Scenario { op, f: Some(f), alpha, beta, at, heights, ..Scenario::new("maximal") }
        }
        Command::Counterexample { phi, phi2, terms } => {
            Scenario { phi: Some(phi), phi2, terms, ..Scenario::new("counterexample") }
        }
        Command::Report { inputs } => Scenario { inputs, ..Scenario::new("report") },
        Command::Verify(v) => {
            let kind = v.kind.to_possible_value().expect("named").get_name().to_string();
            let mut s = Scenario {
                phi: v.phi,
                f: v.f,
                g: v.g,
                alpha: v.alpha,
                claimed: measure(v.claimed_atoms, v.density.clone()),
                measure: measure(v.atoms, v.density),
                test_fns: v.tests,
                heights: v.heights,
                method: v.method,
                filter: v.filter,
                manufacture_analytic: !v.no_manufacture,
                ..Scenario::new(&format!("verify:{kind}"))
            };
            if let Some(r) = v.radii {
                s.radii = r;
            }
            if let Some(p) = v.partner {
                s.partner = p;
            }
            if let Some(t) = v.terms {
                s.terms = t;
            }
            let t = &mut s.tolerances;
            t.sandwich_factor = v.sandwich_factor.unwrap_or(t.sandwich_factor);
            t.disk_bound_factor = v.disk_factor.unwrap_or(t.disk_bound_factor);
            t.norm_rtol = v.norm_rtol.unwrap_or(t.norm_rtol);
            s
        }
    };
    let c = cli.common;
    s.grid.half_width = c.half_width.unwrap_or(s.grid.half_width);
    s.grid.points = c.points.unwrap_or(s.grid.points);
    s.output.json = c.json.or(s.output.json);
    s.output.csv = c.csv.or(s.output.csv);
    s.output.svg = c.svg.or(s.output.svg);
    s.seed = c.seed.unwrap_or(s.seed);
    s.resolve()
}

fn default_report_path(command: &str) -> String {
    format!("orlab-{}.json", command.replace(':', "-"))
}

/// Writes the report (always) and any requested CSV/SVG, one path each.
fn emit(s: &Scenario, o: &Outcome) -> CliResult<()> {
    let json_path = s.output.json.clone().unwrap_or_else(|| default_report_path(&s.command));
    let svg = match &s.output.svg {
        Some(_) => Some(match &o.svg {
            Some(svg) => svg.clone(),
            None => plot_for(&s.command, &o.result)
                .ok_or_else(|| CliError::Usage(format!("`{}` has no plot", s.command)))?
                .svg(),
        }),
        None => None,
    };
    if s.output.csv.is_some() && o.csv.is_none() {
        return Err(CliError::Usage(format!("`{}` has no CSV output", s.command)));
    }
    let mut paths = vec![json_path.as_str()];
    paths.extend(s.output.csv.as_deref());
    paths.extend(s.output.svg.as_deref());
    for (i, p) in paths.iter().enumerate() {
        if paths[..i].contains(p) {
            return Err(CliError::Usage(format!("output path `{p}` is used twice")));
        }
    }
    if let (Some(p), Some(bytes)) = (&s.output.csv, &o.csv) {
        std::fs::write(p, bytes).map_err(|e| CliError::io(p, e))?;
    }
    if let (Some(p), Some(svg)) = (&s.output.svg, &svg) {
        std::fs::write(p, svg).map_err(|e| CliError::io(p, e))?;
    }
    let json = report_json(s, o);
    if json_path == "-" {
        print!("{json}");
    } else {
        std::fs::write(&json_path, json).map_err(|e| CliError::io(&json_path, e))?;
        print!("{}", o.text);
    }
    Ok(())
}

fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("ORLAB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::Usage(format!("ORLAB_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn fail(e: CliError) -> ExitCode {
    let msg = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
    eprintln!("{msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let help = format!(
        "Growth functions (--phi, --phi2):\n{}\n\nFunctions (--fn, --g, --density, --test):\n{}",
        orlab::growth::FAMILY_HELP,
        orlab::FUNCTION_HELP
    );
    let cmd = Cli::command().after_help(help.clone()).mut_subcommands(|sc| sc.after_help(help.clone()));
    let cli = match cmd.try_get_matches().and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        return fail(e);
    }
    let s = match scenario_of(cli) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let o = match run(&s) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    if let Err(e) = emit(&s, &o) {
        return fail(e);
    }
    match o.pass {
        Some(false) => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    }
}
