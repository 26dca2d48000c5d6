use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use squarecat_core::barcobar::json::algebra_from_json;
use squarecat_core::barcobar::{c0_replacement_check, convolution_path, counit_check, Orientation};
use squarecat_core::chain::{complex_from_json, complex_to_json, ChainComplex};
use squarecat_core::cset::{cset_from_json, normalized_chains, triangulate};
use squarecat_core::square::{
    chain_square, homotopy_classes_oracle, mapping_space, mapping_space_homology_compare, pi0, ChainSquare, Interval,
};
use squarecat_core::suite::{run_square_suite, run_suite, Check, Report, SuiteConfig, Verdict, SCHEMA, SUITES};
use squarecat_core::Error;

#[derive(Parser)]
#[command(name = "squarecat", version, about = "Verification suites for square structures over F_p")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Prime field characteristic.
    #[arg(long, global = true, value_name = "P")]
    field: Option<u32>,
    /// Cube dimension cap.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Bar/cobar word weight cap.
    #[arg(long, global = true)]
    weight_cap: Option<usize>,
    /// Homological degree window, e.g. `-1:5`.
    #[arg(long, global = true, value_name = "LO:HI", allow_hyphen_values = true)]
    degree_window: Option<String>,
    /// Seed for random batteries.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Keep only the first N battery instances.
    #[arg(long, global = true, value_name = "N")]
    battery: Option<usize>,
    /// JSON config file; flags given on the command line override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named suite (`list` prints the names).
    Suite { name: String },
    /// Mapping cubical sets M(X, Y) of the chain square structure.
    Mapspace {
        #[command(subcommand)]
        verb: MapspaceVerb,
    },
    /// Homotopical checks of a square structure on chain complexes.
    Square {
        #[arg(value_enum)]
        verb: SquareVerb,
        #[arg(long, value_enum, default_value_t = IntervalKind::Cellular)]
        interval: IntervalKind,
    },
    /// Bar-cobar checks for a dg algebra (default: the standard battery).
    Barcobar {
        #[arg(value_enum)]
        verb: BarcobarVerb,
        #[arg(long, value_name = "FILE")]
        algebra: Option<PathBuf>,
    },
    /// Homology of a chain complex.
    Chain {
        #[arg(value_enum)]
        verb: HomologyVerb,
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// Homology of a finite cubical set, cubical and triangulated.
    Cset {
        #[arg(value_enum)]
        verb: HomologyVerb,
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum MapspaceVerb {
    /// Build M(X, Y) up to the cube cap and check the cubical identities.
    Build(PairArgs),
    /// Compare π0 M(X, Y) with homotopy classes of chain maps.
    Pi0(PairArgs),
    /// Compare normalized chains of M(X, Y) with the internal hom.
    Homology(PairArgs),
}

#[derive(Args)]
struct PairArgs {
    #[arg(long, value_name = "FILE")]
    x: PathBuf,
    #[arg(long, value_name = "FILE")]
    y: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SquareVerb {
    VerifyHomotopical,
    ConditionsAgree,
    Coherence,
}

#[derive(Clone, Copy, ValueEnum)]
enum IntervalKind {
    Cellular,
    /// Two points, no edge: a valid but non-homotopical structure.
    Discrete,
}

#[derive(Clone, Copy, ValueEnum)]
enum BarcobarVerb {
    CounitCheck,
    C0Check,
}

#[derive(Clone, Copy, ValueEnum)]
enum HomologyVerb {
    Homology,
}

/// Failures that end the run before a report exists.
enum Failure {
    Schema(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema { path, message } => Failure::Schema(format!("at {path}: {message}")),
            Error::UnknownSuite(_) | Error::NotPrime(_) => Failure::Schema(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Schema(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column())))
}

fn in_file<T>(path: &Path, r: squarecat_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match Failure::from(e) {
        Failure::Schema(m) => Failure::Schema(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn parse_window(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Schema(format!("--degree-window expects LO:HI, got `{s}`"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn config(opts: &Opts) -> Result<SuiteConfig, Failure> {
    let mut cfg = match &opts.config {
        Some(path) => {
            let mut v = read_json(path)?;
            match v.as_object_mut().map(|o| o.remove("schema")) {
                Some(None) => {}
                Some(Some(t)) if t == SCHEMA => {}
                Some(Some(t)) => return Err(Failure::Schema(format!("{}: at schema: expected \"{SCHEMA}\", found {t}", path.display()))),
                None => return Err(Failure::Schema(format!("{}: config must be an object", path.display()))),
            }
            serde_path_to_error::deserialize(v).map_err(|e| {
                Failure::Schema(format!("{}: at {}: {}", path.display(), e.path(), e.inner()))
            })?
        }
        None => SuiteConfig::default(),
    };
    if let Some(p) = opts.field {
        cfg.p = p;
    }
    if let Some(d) = opts.max_dim {
        cfg.max_dim = d;
    }
    if let Some(w) = opts.weight_cap {
        cfg.weight_cap = w;
    }
    if let Some(w) = &opts.degree_window {
        (cfg.lo, cfg.hi) = parse_window(w)?;
    }
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    if opts.battery.is_some() {
        cfg.battery = opts.battery;
    }
    cfg.field()?;
    Ok(cfg)
}

fn load_complex(path: &Path, cfg: &SuiteConfig) -> Result<ChainComplex, Failure> {
    let c = in_file(path, complex_from_json(&read_json(path)?))?;
    if c.field().p() != cfg.p {
        return Err(Failure::Schema(format!("{}: complex is over F_{}, run is over F_{}", path.display(), c.field().p(), cfg.p)));
    }
    Ok(c)
}

fn dims(c: &ChainComplex) -> Vec<usize> {
    c.support().map_or(vec![], |(lo, hi)| (lo..=hi).map(|n| c.dim(n)).collect())
}

fn mapspace(verb: &MapspaceVerb, cfg: &SuiteConfig) -> Result<Report, Failure> {
    let (name, args) = match verb {
        MapspaceVerb::Build(a) => ("mapspace-build", a),
        MapspaceVerb::Pi0(a) => ("mapspace-pi0", a),
        MapspaceVerb::Homology(a) => ("mapspace-homology", a),
    };
    let (x, y) = (load_complex(&args.x, cfg)?, load_complex(&args.y, cfg)?);
    let q = chain_square(cfg.field()?);
    let cap = cfg.max_dim;
    let instance = format!("M({}, {})", args.x.display(), args.y.display());
    let check = match verb {
        MapspaceVerb::Build(_) => {
            let m = mapping_space(&q, &x, &y, cap)?;
            let valid = m.space.validate().is_ok();
            Check::new("cubical-identities", instance.clone(), valid, json!({"cap": cap, "dims": m.space.dims()}))
        }
        MapspaceVerb::Pi0(_) => {
            let m = mapping_space(&q, &x, &y, cap)?;
            let (p, oracle) = (pi0(&m)?, homotopy_classes_oracle(&x, &y));
            Check::new(
                "pi0-vs-homotopy-classes",
                instance.clone(),
                p.dim() == oracle.dim(),
                json!({"cap": cap, "x": dims(&x), "y": dims(&y), "pi0_dim": p.dim(), "oracle_dim": oracle.dim(),
                       "pi0_size": p.cardinality().map(|c| c.to_string())}),
            )
        }
        MapspaceVerb::Homology(_) => {
            let c = mapping_space_homology_compare(&q, &x, &y, cap)?;
            Check::new(
                "mapping-space-homology",
                instance.clone(),
                c.pass(),
                json!({"cap": cap, "mapping": c.mapping, "internal_hom": c.derived}),
            )
        }
    };
    Ok(Report::new(name, cfg, vec![instance], vec![check]))
}

fn barcobar(verb: BarcobarVerb, algebra: Option<&Path>, cfg: &SuiteConfig) -> Result<Report, Failure> {
    let suite = match verb {
        BarcobarVerb::CounitCheck => "barcobar-counit",
        BarcobarVerb::C0Check => "c0-replacement",
    };
    let Some(path) = algebra else {
        return Ok(run_suite(suite, cfg)?);
    };
    let a = in_file(path, algebra_from_json(&read_json(path)?))?;
    if a.field().p() != cfg.p {
        return Err(Failure::Schema(format!("{}: algebra is over F_{}, run is over F_{}", path.display(), a.field().p(), cfg.p)));
    }
    let policy = cfg.policy();
    let instance = path.display().to_string();
    let mut checks = Vec::new();
    match verb {
        BarcobarVerb::CounitCheck => {
            let r = counit_check(&a, &policy)?;
            checks.push(Check::new("counit-quasi-iso", instance.clone(), r.pass(), serde_json::to_value(&r).expect("report")));
            let p = convolution_path(&a, Orientation::Standard)?;
            checks.push(Check::new(
                "convolution-path",
                instance.clone(),
                p.pass(),
                json!({"first_quasi_iso": p.first_quasi_iso, "second_surjective": p.second_surjective,
                       "composite_is_diagonal": p.composite_is_diagonal}),
            ));
        }
        BarcobarVerb::C0Check => {
            let r = c0_replacement_check(&a, &policy)?;
            checks.push(Check::new("c0-quasi-iso", instance.clone(), r.pass(), serde_json::to_value(&r).expect("report")));
        }
    }
    Ok(Report::new(suite, cfg, vec![instance], checks))
}

fn chain_homology(path: &Path, cfg: &SuiteConfig) -> Result<Report, Failure> {
    let c = load_complex(path, cfg)?;
    let h: serde_json::Map<String, Value> = c.homology().into_iter().map(|(n, d)| (n.to_string(), json!(d))).collect();
    let instance = path.display().to_string();
    let check = Check::new(
        "d-squared-zero",
        instance.clone(),
        c.validate().is_ok(),
        json!({"complex": complex_to_json(&c), "homology": h}),
    );
    Ok(Report::new("chain-homology", cfg, vec![instance], vec![check]))
}

fn cset_homology(path: &Path, cfg: &SuiteConfig) -> Result<Report, Failure> {
    let x = in_file(path, cset_from_json(&read_json(path)?))?;
    let f = cfg.field()?;
    let cap = x.max_dim() + 1;
    let cubical = normalized_chains(&x, f).homology_in(0, cap as i64 - 1);
    let simplicial = triangulate(&x, cap)?.set.homology(f);
    let instance = path.display().to_string();
    let check = Check::new(
        "triangulation",
        instance.clone(),
        cubical == simplicial,
        json!({"cells": x.counts(), "cap": cap, "cubical": cubical, "triangulated": simplicial}),
    );
    Ok(Report::new("cset-homology", cfg, vec![instance], vec![check]))
}

fn run(cli: &Cli) -> Result<Option<Report>, Failure> {
    let cfg = config(&cli.opts)?;
    let report = match &cli.command {
        Command::Suite { name } if name == "list" => {
            for s in SUITES {
                println!("{s}");
            }
            return Ok(None);
        }
        Command::Suite { name } => run_suite(name, &cfg)?,
        Command::Mapspace { verb } => mapspace(verb, &cfg)?,
        Command::Square { verb, interval } => {
            let f = cfg.field()?;
            let q = match interval {
                IntervalKind::Cellular => chain_square(f),
                IntervalKind::Discrete => ChainSquare::new(Interval::discrete(f)),
            };
            let name = match verb {
                SquareVerb::VerifyHomotopical => "square-homotopical",
                SquareVerb::ConditionsAgree => "conditions-agree",
                SquareVerb::Coherence => "coherence",
            };
            run_square_suite(name, &q, &cfg)?
        }
        Command::Barcobar { verb, algebra } => barcobar(*verb, algebra.as_deref(), &cfg)?,
        Command::Chain { input, .. } => chain_homology(input, &cfg)?,
        Command::Cset { input, .. } => cset_homology(input, &cfg)?,
    };
    Ok(Some(report))
}

fn summarize(r: &Report) {
    let count = |v: Verdict| r.checks.iter().filter(|c| c.verdict == v).count();
    eprintln!(
        "{}: {:?} ({} pass, {} fail, {} vacuous; p={}, max_dim={}, weight_cap={}, window={}:{}, seed={})",
        r.suite,
        r.verdict,
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::Vacuous),
        r.config.p,
        r.config.max_dim,
        r.config.weight_cap,
        r.config.lo,
        r.config.hi,
        r.config.seed,
    );
    for c in r.failures() {
        eprintln!("  FAIL {} [{}]: {}", c.name, c.instance, c.evidence);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(report)) => {
            summarize(&report);
            let text = report.to_json();
            match &cli.opts.report {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{text}"),
            }
            if report.verdict == Verdict::Fail {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Schema(m)) => {
            eprintln!("schema error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
