//! `extraspecial`: element arithmetic, morphisms, orbits, counts and
//! self-checks for extra-special p-groups.

mod census;

use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use extraspecial::oracle::{is_homomorphism_table, CayleyTable};
use extraspecial::orbits::{cardinality_formula, orbit_cardinality, orbit_labels, representative};
use extraspecial::verify::{self, Suite};
use extraspecial::{
    classify, Caps, CountReport, Error, Execution, GroupElement, GroupId, GroupKind, Morphism,
    MorphismSpec, Quantity,
};
use serde::Serialize;

use census::{Column, Grid};

const AFTER_HELP: &str = "\
Exit codes: 0 success, 1 domain or verification failure, 2 usage or parse error.

Brute-force work is bounded by caps, overridable through the environment:
  EXTRASPECIAL_CAP_ELEMENTS       group elements enumerated        (default 10000000)
  EXTRASPECIAL_CAP_MORPHISMS      morphisms enumerated             (default 10000000)
  EXTRASPECIAL_CAP_CANDIDATES     generator-image tuples tried     (default 1000000000)
  EXTRASPECIAL_CAP_MATRIX_SCAN    matrices visited by scans        (default 100000000)
  EXTRASPECIAL_CAP_SUBSPACE_SCAN  vector tuples visited by scans   (default 10000000)";

#[derive(Parser)]
#[command(name = "extraspecial", version, about, after_help = AFTER_HELP)]
struct Cli {
    /// Worker threads for brute-force scans (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Run scans on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply two elements of the same group.
    Mul { a: String, b: String },
    /// Inverse of an element.
    Inverse { element: String },
    /// Order of an element.
    Order { element: String },
    /// Automorphism orbit of an element.
    Classify {
        element: String,
        #[arg(long)]
        json: bool,
    },
    /// Automorphism orbits of a group, optionally checked by brute force.
    Orbits {
        /// Group such as `es2(3,2)`.
        group: String,
        /// Compute the exact partition under every automorphism and compare.
        #[arg(long)]
        bruteforce: bool,
        #[arg(long)]
        json: bool,
    },
    /// Build, apply or check an endomorphism given by block parameters.
    Endo {
        #[command(subcommand)]
        action: EndoAction,
    },
    /// Closed-form value of one quantity, optionally against its oracle.
    Count(CountArgs),
    /// Quantities over a grid of (p, n).
    Census(CensusArgs),
    /// Run the built-in self-checks.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Quick)]
        suite: SuiteArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum EndoAction {
    /// Validate parameters and report the scalar.
    Build { spec: String },
    /// Image of an element.
    Apply { spec: String, element: String },
    /// Exhaustive homomorphism test over the Cayley table.
    Check { spec: String },
}

#[derive(Args)]
struct CountArgs {
    /// Family for aut_order and end_order.
    #[arg(long, value_enum)]
    group: Option<FamilyArg>,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    quantity: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    oracle: bool,
    /// Also print the value as a polynomial in p.
    #[arg(long)]
    poly: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    p_list: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    /// Quantity names, or `partial_order`.
    #[arg(long, value_delimiter = ',', required = true)]
    quantities: Vec<String>,
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Es1,
    Es2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Quick,
    Full,
}

/// An error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(message: impl Display) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse { .. }) {
            2
        } else {
            1
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::domain(e)
    }
}

type Outcome = Result<String, Failure>;

fn element(s: &str) -> Result<GroupElement, Failure> {
    Ok(s.parse::<GroupElement>()?)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn cmd_classify(s: &str, as_json: bool) -> Outcome {
    let g = element(s)?;
    let label = classify(&g);
    if !as_json {
        return Ok(label.to_string());
    }
    #[derive(Serialize)]
    struct Out {
        element: GroupElement,
        label: String,
        cardinality: String,
        formula: &'static str,
        representative: GroupElement,
    }
    let group = g.group();
    Ok(json(&Out {
        label: label.to_string(),
        cardinality: orbit_cardinality(label, &group)?.to_string(),
        formula: cardinality_formula(label),
        representative: representative(label, &group)?,
        element: g,
    }))
}

fn cmd_orbits(s: &str, bruteforce: bool, as_json: bool, exec: Execution, caps: &Caps) -> Outcome {
    let group: GroupId = s.parse()?;
    if !matches!(group.kind(), GroupKind::Es1 | GroupKind::Es2) {
        return Err(Failure::domain(format!("no orbit description for {group}")));
    }
    #[derive(Serialize)]
    struct Orbit {
        label: String,
        cardinality: String,
        formula: &'static str,
        representative: GroupElement,
        #[serde(skip_serializing_if = "Option::is_none")]
        bruteforce_size: Option<usize>,
    }
    let sizes = if bruteforce {
        Some(verify::orbit_sizes(&group, exec, caps)?)
    } else {
        None
    };
    let mut out = Vec::new();
    for label in orbit_labels(&group) {
        out.push(Orbit {
            label: label.to_string(),
            cardinality: orbit_cardinality(label, &group)?.to_string(),
            formula: cardinality_formula(label),
            representative: representative(label, &group)?,
            bruteforce_size: sizes
                .as_ref()
                .map(|m| m.get(&label.to_string()).copied().unwrap_or(0)),
        });
    }
    let mismatch = sizes.as_ref().is_some_and(|m| {
        m.len() != out.len()
            || out
                .iter()
                .any(|o| o.bruteforce_size.map(|s| s.to_string()) != Some(o.cardinality.clone()))
    });
    let text = if as_json {
        json(&out)
    } else {
        out.iter()
            .map(|o| {
                let mut line = format!(
                    "{:<16} {:>8}  {:<16} {}",
                    o.label, o.cardinality, o.formula, o.representative
                );
                if let Some(s) = o.bruteforce_size {
                    line.push_str(&format!("  bruteforce {s}"));
                }
                line
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    if mismatch {
        println!("{text}");
        return Err(Failure::domain(
            "brute-force partition disagrees with classify",
        ));
    }
    Ok(text)
}

fn describe(m: &Morphism) -> String {
    let kind = if m.is_auto() {
        "automorphism"
    } else {
        "endomorphism"
    };
    match m.lift() {
        Some(a) => format!("valid {kind}, l={}, a={}", m.scalar().value(), a.value()),
        None => format!("valid {kind}, l={}", m.scalar().value()),
    }
}

fn morphism(spec: &str) -> Result<Morphism, Failure> {
    let spec: MorphismSpec = spec.parse()?;
    spec.build().map_err(|e| match e {
        Error::Validation(v) => Failure::domain(format!("invalid: {v}")),
        other => other.into(),
    })
}

fn cmd_endo(action: &EndoAction, exec: Execution, caps: &Caps) -> Outcome {
    match action {
        EndoAction::Build { spec } => Ok(describe(&morphism(spec)?)),
        EndoAction::Apply { spec, element: e } => {
            Ok(morphism(spec)?.apply(&element(e)?)?.to_string())
        }
        EndoAction::Check { spec } => {
            let m = morphism(spec)?;
            let cayley = CayleyTable::new(m.group(), exec, caps)?;
            let table = m.table(caps)?;
            let size = cayley.order();
            if !is_homomorphism_table(&table, &cayley) {
                return Err(Failure::domain(format!(
                    "homomorphism law fails on {}",
                    m.group()
                )));
            }
            Ok(format!(
                "{}; homomorphism law holds on all {} pairs",
                describe(&m),
                size * size
            ))
        }
    }
}

fn cmd_count(args: &CountArgs, exec: Execution, caps: &Caps) -> Outcome {
    let quantity: Quantity = args.quantity.parse()?;
    let family = args.group.map(|f| match f {
        FamilyArg::Es1 => GroupKind::Es1,
        FamilyArg::Es2 => GroupKind::Es2,
    });
    if quantity.per_family() && family.is_none() {
        return Err(Failure {
            code: 2,
            message: format!("{quantity} needs --group es1|es2"),
        });
    }
    if quantity.takes_k() && args.k.is_none() {
        return Err(Failure {
            code: 2,
            message: format!("{quantity} needs --k"),
        });
    }
    let report = CountReport::compute(
        quantity,
        family,
        args.p,
        args.n,
        args.k,
        args.oracle,
        exec,
        caps,
    )?;
    let poly = if args.poly {
        quantity.polynomial(family, args.n, args.k)
    } else {
        None
    };
    if args.json {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            report: &'a CountReport,
            #[serde(skip_serializing_if = "Option::is_none")]
            polynomial: Option<String>,
        }
        return Ok(json(&Out {
            report: &report,
            polynomial: poly.map(|p| p.to_string()),
        }));
    }
    let mut line = report.formula_value.to_string();
    if let Some(p) = poly {
        line.push_str(&format!(" = {p}"));
    }
    match (&report.oracle_value, report.matches) {
        (Some(v), Some(m)) => {
            let how = report.detail.as_deref().unwrap_or("oracle");
            line.push_str(&format!(
                "\noracle {v} ({how}): {}",
                if m { "match" } else { "MISMATCH" }
            ));
            if !m {
                println!("{line}");
                return Err(Failure::domain("formula and oracle disagree"));
            }
        }
        _ if args.oracle => line.push_str(&format!(
            "\noracle {}",
            report.detail.as_deref().unwrap_or("skipped")
        )),
        _ => {}
    }
    Ok(line)
}

fn cmd_census(args: &CensusArgs, exec: Execution, caps: &Caps) -> Outcome {
    let columns = args
        .quantities
        .iter()
        .map(|q| Column::parse(q))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure {
            code: 2,
            message: e.to_string(),
        })?;
    let grid = Grid {
        primes: args.p_list.clone(),
        ranks: args.n_list.clone(),
        columns,
        oracle: args.oracle,
    };
    let rows = census::run(&grid, exec, caps)?;
    let body = match args.format {
        Format::Json => json(&rows) + "\n",
        Format::Csv => census::to_csv(&rows),
    };
    match &args.output {
        Some(path) => {
            std::fs::write(path, body)?;
            Ok(format!("{} rows written to {}", rows.len(), path.display()))
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            Ok(String::new())
        }
    }
}

fn cmd_verify(suite: SuiteArg, as_json: bool, exec: Execution, caps: &Caps) -> Outcome {
    let suite = match suite {
        SuiteArg::Quick => Suite::Quick,
        SuiteArg::Full => Suite::Full,
    };
    let outcomes = verify::run_suite(suite, exec, caps);
    let text = if as_json {
        json(&outcomes)
    } else {
        outcomes
            .iter()
            .map(|o| {
                format!(
                    "{}  {:<44} {:>7.2}s  {}",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.name,
                    o.seconds,
                    o.detail
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    match outcomes.iter().find(|o| !o.passed) {
        Some(first) => {
            println!("{text}");
            Err(Failure::domain(format!(
                "first failing check: {}",
                first.name
            )))
        }
        None => Ok(format!("{text}\nall {} checks passed", outcomes.len())),
    }
}

fn run(cli: &Cli, exec: Execution, caps: &Caps) -> Outcome {
    match &cli.command {
        Command::Mul { a, b } => Ok(element(a)?.multiply(&element(b)?)?.to_string()),
        Command::Inverse { element: e } => Ok(element(e)?.inverse().to_string()),
        Command::Order { element: e } => Ok(element(e)?.order().to_string()),
        Command::Classify { element: e, json } => cmd_classify(e, *json),
        Command::Orbits {
            group,
            bruteforce,
            json,
        } => cmd_orbits(group, *bruteforce, *json, exec, caps),
        Command::Endo { action } => cmd_endo(action, exec, caps),
        Command::Count(args) => cmd_count(args, exec, caps),
        Command::Census(args) => cmd_census(args, exec, caps),
        Command::Verify { suite, json } => cmd_verify(*suite, *json, exec, caps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let caps = Caps::from_env();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli, exec, &caps)) {
        Ok(text) => {
            if !text.is_empty() {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if f.message.starts_with("invalid: ") {
                println!("{}", f.message);
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
