use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

mod commands;
mod request;

use commands::CliError;
use request::Request;

#[derive(Parser)]
#[command(name = "almabel", version, about = "Hermitian geometry of six-dimensional almost abelian Lie algebras")]
struct Cli {
    /// Read the whole request (including the command) from a JSON document.
    #[arg(long, global = true)]
    json_in: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Clone, Default)]
struct AlgebraArgs {
    /// Catalog row or family label, e.g. k17 or k17^{-1/2}.
    #[arg(long)]
    algebra: Option<String>,
    /// Parameters as name=num/den, comma separated or repeated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    params: Vec<String>,
    /// Structure equations, e.g. "(f^{16},0,0,0,0,0)".
    #[arg(long, conflicts_with = "algebra")]
    equations: Option<String>,
}

#[derive(Args, Clone, Default)]
struct StructureArgs {
    /// example1, table3, gk, kahler, skt, or pairs "Jf1=f6, Jf2=f3, Jf4=f5".
    #[arg(long)]
    structure: Option<String>,
    /// Diagonal of the metric, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    metric: Option<Vec<String>>,
}

#[derive(Args, Clone, Default)]
struct DataArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    v: Option<Vec<String>>,
    /// Entries of A, row major.
    #[arg(long = "A", value_delimiter = ',', allow_hyphen_values = true)]
    a_matrix: Option<Vec<String>>,
    /// Rotation speed of the k23^0 normal form.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Structure equations and invariants of a catalog algebra.
    Build(AlgebraArgs),
    /// SKT and Kähler verdicts, torsion and its exactness.
    Verdict {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        structure: StructureArgs,
    },
    /// Holomorphic Poisson structures of an SKT almost abelian structure.
    Poisson {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        structure: StructureArgs,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Check the split generalized Kähler structure.
    GkVerify {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        metric: Option<Vec<String>>,
    },
    /// Search for a compatible J_- and trace the exact constraint chain.
    GkSearch {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        structure: StructureArgs,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Penalize [J+, J-] away from the Poisson pattern.
        #[arg(long)]
        alignment: bool,
    },
    /// Integrate the reduced pluriclosed flow.
    Flow {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        structure: StructureArgs,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3, allow_hyphen_values = true)]
        dt: f64,
        /// Number of equispaced samples reported.
        #[arg(long, default_value_t = 11)]
        samples: usize,
        /// Write the trajectory to this CSV file.
        #[arg(long)]
        csv: Option<String>,
        /// Use the sign-uncorrected S (for comparison only).
        #[arg(long)]
        uncorrected: bool,
    },
    /// Run every table and theorem check.
    ReproduceTables,
    /// Match an algebra against the catalog.
    Recognize(AlgebraArgs),
    /// The catalog as JSON.
    Manifest,
}

fn params_map(list: &[String]) -> Result<std::collections::BTreeMap<String, Value>, CliError> {
    let mut out = std::collections::BTreeMap::new();
    for item in list {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::invalid("malformed_params", format!("`{item}` is not name=value")))?;
        out.insert(k.trim().to_string(), Value::String(v.trim().to_string()));
    }
    Ok(out)
}

fn with_algebra(r: &mut Request, a: AlgebraArgs) -> Result<(), CliError> {
    r.algebra = a.algebra;
    r.params = params_map(&a.params)?;
    r.equations = a.equations;
    Ok(())
}

fn with_structure(r: &mut Request, s: StructureArgs) {
    r.structure = s.structure;
    r.metric = s.metric;
}

fn with_data(r: &mut Request, d: DataArgs) {
    r.a = d.a;
    r.v = d.v;
    r.a_matrix = d.a_matrix;
    r.s = d.s;
}

fn to_request(c: Command) -> Result<Request, CliError> {
    let mut r = Request::default();
    match c {
        Command::Build(a) => {
            r.command = "build".into();
            with_algebra(&mut r, a)?;
        }
        Command::Verdict { algebra, structure } => {
            r.command = "verdict".into();
            with_algebra(&mut r, algebra)?;
            with_structure(&mut r, structure);
        }
        Command::Poisson { algebra, structure, data } => {
            r.command = "poisson".into();
            with_algebra(&mut r, algebra)?;
            with_structure(&mut r, structure);
            with_data(&mut r, data);
        }
        Command::GkVerify { algebra, metric } => {
            r.command = "gk-verify".into();
            with_algebra(&mut r, algebra)?;
            r.metric = metric;
        }
        Command::GkSearch { algebra, structure, data, budget, seed, alignment } => {
            r.command = "gk-search".into();
            with_algebra(&mut r, algebra)?;
            with_structure(&mut r, structure);
            with_data(&mut r, data);
            r.budget = Some(budget);
            r.seed = Some(seed);
            r.alignment = alignment;
        }
        Command::Flow { algebra, structure, data, t_end, dt, samples, csv, uncorrected } => {
            r.command = "flow".into();
            with_algebra(&mut r, algebra)?;
            with_structure(&mut r, structure);
            with_data(&mut r, data);
            r.t_end = Some(t_end);
            r.dt = Some(dt);
            r.samples = Some(samples);
            r.csv = csv;
            r.uncorrected = uncorrected;
        }
        Command::ReproduceTables => r.command = "reproduce-tables".into(),
        Command::Recognize(a) => {
            r.command = "recognize".into();
            with_algebra(&mut r, a)?;
        }
        Command::Manifest => r.command = "manifest".into(),
    }
    Ok(r)
}

fn load(path: &str) -> Result<Request, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::invalid("io", format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid("malformed_request", e.to_string()))
}

fn execute(cli: Cli) -> Result<Value, CliError> {
    let req = match (cli.json_in, cli.command) {
        (Some(path), None) => load(&path)?,
        (None, Some(c)) => to_request(c)?,
        (Some(_), Some(_)) => {
            return Err(CliError::invalid("conflicting_input", "give either a subcommand or --json-in, not both"));
        }
        (None, None) => return Err(CliError::invalid("missing_command", "no subcommand given; see --help")),
    };
    commands::run(&req)
}

fn main() -> ExitCode {
    let outcome = match Cli::try_parse() {
        Ok(cli) => execute(cli),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => Err(CliError::invalid("usage", e.render().to_string().trim_end())),
    };
    let (value, code) = match outcome {
        Ok(v) => {
            let failed = v["command"] == json!("reproduce-tables") && v["results"]["all_pass"] != json!(true);
            (v, if failed { 1 } else { 0 })
        }
        Err(e) => (e.to_json(), e.exit_code),
    };
    let text = serde_json::to_string_pretty(&value).expect("reports serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(code as u8)
}
