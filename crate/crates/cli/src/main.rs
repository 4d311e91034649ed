//! `tomobound`: reconstruct binary images from monotone row/column sums,
//! check consistency, and certify boundary minima on small instances.

use tomobound_cli::{input, render};

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tomobound_core::boundary::boundary;
use tomobound_core::conjugate::{alpha, ConjugateProfile};
use tomobound_core::construction::StepRecord;
use tomobound_core::families::{generate, Family};
use tomobound_core::image::BinaryImage;
use tomobound_core::oracle::{self, ConjectureVerdict, OracleLimits};
use tomobound_core::ryser::is_consistent;
use tomobound_core::strategy::{strategy, StrategyError, StrategyOptions};
use tomobound_core::sums::{LineSums, Margins};

const EXIT_INCONSISTENT: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Environment variable overriding the oracle cell cap.
const MAX_CELLS_ENV: &str = "TOMOBOUND_MAX_CELLS";

#[derive(Parser)]
#[command(
    name = "tomobound",
    version,
    about = "Binary image reconstruction from monotone line sums with boundary guarantees",
    after_help = "Exit codes: 0 ok, 1 inconsistent sums / no solution, 2 invalid input, \
                  3 search budget or size limit exceeded."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check consistency of line sums and print their profile
    Check(CheckArgs),
    /// Reconstruct an image satisfying the sums
    Reconstruct(ReconstructArgs),
    /// Exhaustively analyse every image with the given margins
    Oracle(OracleArgs),
    /// Emit a built-in family instance in the input format
    Generate(GenerateArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Input file with line sums; `-` or omitted reads stdin
    #[arg(short, long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Use a built-in family instead of a file (ex51, ex52, ex53, ex54, ex55)
    #[arg(long, value_name = "FAMILY", conflicts_with = "input")]
    example: Option<String>,
    /// Family parameter(s): n (ex51/ex52), k (ex54/ex55), or k,n (ex53)
    #[arg(long, value_name = "P[,P]", value_delimiter = ',', requires = "example")]
    param: Vec<u64>,
    /// Sort both axes non-increasingly first, reporting the permutations
    #[arg(long)]
    sort: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: SourceArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Pbm,
    Json,
}

#[derive(Args)]
struct ReconstructArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Image output layout
    #[arg(long, value_enum, default_value_t = Format::Ascii)]
    format: Format,
    /// Include the step trace in the report
    #[arg(long)]
    trace: bool,
    /// Reconstruction strategy (auto, direct, padded, oracle-min)
    #[arg(long, default_value = "auto", value_name = "NAME")]
    method: String,
    /// Node budget for search-backed methods
    #[arg(long, value_name = "N")]
    max_nodes: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Objective {
    /// Count, all three minima, and the joint-cap witness status
    All,
    Count,
    Exists,
    MinLh,
    MinLv,
    MinTotal,
    /// Search for one image within both linear boundary caps
    Conjecture,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// What to compute
    #[arg(long = "oracle-objective", value_enum, default_value_t = Objective::All)]
    objective: Objective,
    /// Node budget for the search
    #[arg(long, value_name = "N")]
    max_nodes: Option<u64>,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Family to instantiate (ex51, ex52, ex53, ex54, ex55)
    #[arg(long, value_name = "FAMILY")]
    example: String,
    /// Family parameter(s): n (ex51/ex52), k (ex54/ex55), or k,n (ex53)
    #[arg(long, value_name = "P[,P]", value_delimiter = ',')]
    param: Vec<u64>,
}

struct Failure {
    code: u8,
    message: String,
}

type CliResult<T> = Result<T, Failure>;

fn fail(code: u8, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

fn silent(code: u8) -> Failure {
    Failure {
        code,
        message: String::new(),
    }
}

fn main() -> ExitCode {
    // Die quietly when the downstream pipe closes instead of panicking
    // mid-write (matters for `tomobound ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Generate(args) => cmd_generate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}

/// Loaded sums plus the sorting permutations when `--sort` was applied.
struct Loaded {
    sums: LineSums,
    row_order: Option<Vec<usize>>,
    col_order: Option<Vec<usize>>,
}

impl SourceArgs {
    fn load(&self) -> CliResult<Loaded> {
        let raw = if let Some(name) = &self.example {
            let family = Family::from_name(name).ok_or_else(|| {
                fail(
                    EXIT_INVALID,
                    format!(
                        "unknown family {name:?}; available: {}",
                        Family::ALL.map(|f| f.name()).join(", ")
                    ),
                )
            })?;
            let instance =
                generate(family, &self.param).map_err(|e| fail(EXIT_INVALID, e))?;
            input::RawSums {
                rows: instance.sums.rows().to_vec(),
                cols: instance.sums.cols().to_vec(),
            }
        } else {
            let text = self.read_text()?;
            input::parse_sums(&text).map_err(|e| fail(EXIT_INVALID, e))?
        };
        if self.sort {
            let sorted = Margins {
                rows: raw.rows,
                cols: raw.cols,
            }
            .sorted();
            Ok(Loaded {
                sums: sorted.sums,
                row_order: Some(sorted.row_order),
                col_order: Some(sorted.col_order),
            })
        } else {
            let sums = LineSums::new(raw.rows, raw.cols).map_err(|e| {
                fail(
                    EXIT_INVALID,
                    format!("{e} (pass --sort to reorder the axes)"),
                )
            })?;
            Ok(Loaded {
                sums,
                row_order: None,
                col_order: None,
            })
        }
    }

    fn read_text(&self) -> CliResult<String> {
        match &self.input {
            Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path)
                .map_err(|e| fail(EXIT_INVALID, format!("cannot read {}: {e}", path.display()))),
            _ => {
                let mut text = String::new();
                std::io::stdin()
                    .read_to_string(&mut text)
                    .map_err(|e| fail(EXIT_INVALID, format!("cannot read stdin: {e}")))?;
                Ok(text)
            }
        }
    }
}

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn print_permutations(loaded: &Loaded, mut sink: impl std::io::Write) {
    if let (Some(rows), Some(cols)) = (&loaded.row_order, &loaded.col_order) {
        let _ = writeln!(sink, "row order: {}", join(rows));
        let _ = writeln!(sink, "col order: {}", join(cols));
    }
}

fn cmd_check(args: CheckArgs) -> CliResult<()> {
    let loaded = args.source.load()?;
    print_permutations(&loaded, std::io::stdout());
    let sums = &loaded.sums;
    println!("rows: m={} total={}", sums.m(), sums.row_total());
    println!("cols: n={} total={}", sums.n(), sums.col_total());
    let profile = ConjugateProfile::from_sums(sums);
    println!("b: {}", join(profile.conjugate_vector()));
    println!("d: {}", join(profile.deficit_vector()));
    match alpha(sums) {
        Ok(value) => println!("alpha: {value}"),
        Err(e) => println!("alpha: undefined ({e})"),
    }
    let verdict = is_consistent(sums);
    if verdict.is_consistent() {
        println!("verdict: consistent");
        Ok(())
    } else {
        println!("verdict: inconsistent ({verdict})");
        Err(silent(EXIT_INCONSISTENT))
    }
}

fn limits_from(max_nodes: Option<u64>) -> CliResult<OracleLimits> {
    let mut limits = OracleLimits::default();
    if let Ok(value) = std::env::var(MAX_CELLS_ENV) {
        limits.max_cells = value.trim().parse().map_err(|_| {
            fail(
                EXIT_INVALID,
                format!("{MAX_CELLS_ENV} must be a non-negative integer, got {value:?}"),
            )
        })?;
    }
    if let Some(nodes) = max_nodes {
        limits.max_nodes = nodes;
    }
    Ok(limits)
}

fn strategy_failure(err: StrategyError) -> Failure {
    let code = match &err {
        StrategyError::Inconsistent { .. } => EXIT_INCONSISTENT,
        StrategyError::Unsupported(_) => EXIT_INVALID,
        StrategyError::Search(_) | StrategyError::BudgetExhausted { .. } => EXIT_BUDGET,
        StrategyError::Internal(_) => EXIT_INVALID,
    };
    fail(code, err)
}

fn step_json(record: &StepRecord) -> serde_json::Value {
    json!({
        "kind": record.kind.to_string(),
        "column": record.column,
        "surplus_run": [record.surplus_run.0, record.surplus_run.1],
        "deficit_run": [record.deficit_run.0, record.deficit_run.1],
        "moved": record.moved,
        "moved_rows": record.moved_rows,
        "split": record.split.map(|s| json!({"t1": s.t1, "t2": s.t2, "t3": s.t3})),
    })
}

fn image_lines(image: &BinaryImage) -> Vec<String> {
    image.to_string().lines().map(str::to_owned).collect()
}

fn cmd_reconstruct(args: ReconstructArgs) -> CliResult<()> {
    let loaded = args.source.load()?;
    let sums = &loaded.sums;
    let chosen = strategy(&args.method).ok_or_else(|| {
        let names: Vec<&str> = tomobound_core::strategy::strategies()
            .iter()
            .map(|s| s.name())
            .collect();
        fail(
            EXIT_INVALID,
            format!(
                "unknown method {:?}; available: {}",
                args.method,
                names.join(", ")
            ),
        )
    })?;
    let options = StrategyOptions {
        keep_trace: args.trace,
        limits: limits_from(args.max_nodes)?,
    };
    let outcome = chosen
        .reconstruct(sums, &options)
        .map_err(strategy_failure)?;

    let measured = boundary(&outcome.image);
    let imbalance = alpha(sums).map_err(|e| fail(EXIT_INVALID, e))?;
    let r1 = u64::from(sums.rows()[0]);
    let c1 = u64::from(sums.cols()[0]);
    let n = sums.n() as u64;
    // The tight linear cap 4n - 4 holds for images the step construction can
    // reach directly; the forced padding route only guarantees the padded
    // form 2*r1 + 2n - 2.
    let linear_bound = if sums.has_full_first_line() && n >= 2 && chosen.name() != "padded" {
        4 * n - 4
    } else {
        2 * r1 + 2 * n - 2
    };
    let mut report = json!({
        "m": sums.m(),
        "n": sums.n(),
        "rows": sums.rows(),
        "cols": sums.cols(),
        "method": chosen.name(),
        "alpha": imbalance,
        "l_h": measured.horizontal,
        "l_v": measured.vertical,
        "bounds": {
            "l_h_alpha": 2 * r1 + 2 * imbalance,
            "l_h_linear": linear_bound,
            "l_v_alpha": 2 * c1 + 2 * imbalance,
        },
    });
    if args.trace {
        let steps: Vec<serde_json::Value> = outcome
            .trace
            .as_deref()
            .unwrap_or_default()
            .iter()
            .map(step_json)
            .collect();
        report["steps"] = json!(steps);
        report["trace_coordinates"] =
            json!(if sums.has_full_first_line() || chosen.name() == "oracle-min" {
                "input"
            } else {
                "padded"
            });
    }
    if let (Some(rows), Some(cols)) = (&loaded.row_order, &loaded.col_order) {
        report["row_order"] = json!(rows);
        report["col_order"] = json!(cols);
    }

    match args.format {
        Format::Ascii => {
            print!("{}", render::to_ascii(&outcome.image));
            print_permutations(&loaded, std::io::stderr());
            eprintln!("{report}");
        }
        Format::Pbm => {
            print!("{}", render::to_pbm(&outcome.image));
            print_permutations(&loaded, std::io::stderr());
            eprintln!("{report}");
        }
        Format::Json => {
            report["image"] = json!(image_lines(&outcome.image));
            println!("{report}");
        }
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> CliResult<()> {
    let loaded = args.source.load()?;
    let sums = &loaded.sums;
    let limits = limits_from(args.max_nodes)?;
    let too_large =
        |e: oracle::OracleError| fail(EXIT_BUDGET, format!("{e} (override with {MAX_CELLS_ENV})"));

    let mut body = json!({
        "m": sums.m(),
        "n": sums.n(),
        "objective": format!("{:?}", args.objective).to_lowercase(),
    });
    if let (Some(rows), Some(cols)) = (&loaded.row_order, &loaded.col_order) {
        body["row_order"] = json!(rows);
        body["col_order"] = json!(cols);
    }
    let mut text = String::new();
    let mut failure: Option<Failure> = None;

    match args.objective {
        Objective::Exists => {
            let found = oracle::exists(sums, &limits).map_err(too_large)?;
            body["exists"] = json!(found);
            let _ = writeln!(text, "exists: {found}");
            if !found {
                failure = Some(silent(EXIT_INCONSISTENT));
            }
        }
        Objective::Count => {
            let stats = oracle::count(sums, &limits).map_err(too_large)?;
            body["images"] = json!(stats.images);
            body["nodes"] = json!(stats.nodes);
            body["complete"] = json!(stats.complete);
            let _ = writeln!(text, "images: {}", stats.images);
            let _ = writeln!(text, "nodes: {}", stats.nodes);
            if !stats.complete {
                let _ = writeln!(text, "incomplete: node budget exhausted");
                failure = Some(silent(EXIT_BUDGET));
            } else if stats.images == 0 {
                failure = Some(silent(EXIT_INCONSISTENT));
            }
        }
        Objective::Conjecture => {
            let probe = oracle::probe_conjecture(sums, &limits).map_err(too_large)?;
            let verdict = match probe.verdict {
                ConjectureVerdict::Witness => "witness",
                ConjectureVerdict::Refuted => "refuted",
                ConjectureVerdict::NoSolution => "no-solution",
                ConjectureVerdict::Inconclusive => "inconclusive",
            };
            body["verdict"] = json!(verdict);
            body["nodes"] = json!(probe.stats.nodes);
            let _ = writeln!(text, "joint-cap verdict: {verdict}");
            if let Some(witness) = &probe.witness {
                body["witness"] = json!(image_lines(witness));
                let _ = write!(text, "{}", render::to_ascii(witness));
            }
            failure = match probe.verdict {
                ConjectureVerdict::NoSolution => Some(silent(EXIT_INCONSISTENT)),
                ConjectureVerdict::Inconclusive => Some(silent(EXIT_BUDGET)),
                _ => None,
            };
        }
        Objective::All | Objective::MinLh | Objective::MinLv | Objective::MinTotal => {
            let report = oracle::min_boundaries(sums, &limits).map_err(too_large)?;
            body["images"] = json!(report.stats.images);
            body["nodes"] = json!(report.stats.nodes);
            body["complete"] = json!(report.stats.complete);
            let _ = writeln!(text, "images: {}", report.stats.images);
            let _ = writeln!(text, "nodes: {}", report.stats.nodes);
            if let Some(minima) = &report.minima {
                let wanted: &[(&str, u64, &BinaryImage)] = &[
                    ("min_l_h", minima.min_horizontal, &minima.witness_horizontal),
                    ("min_l_v", minima.min_vertical, &minima.witness_vertical),
                    ("min_total", minima.min_total, &minima.witness_total),
                ];
                for (key, value, witness) in wanted {
                    let selected = matches!(
                        (args.objective, *key),
                        (Objective::All, _)
                            | (Objective::MinLh, "min_l_h")
                            | (Objective::MinLv, "min_l_v")
                            | (Objective::MinTotal, "min_total")
                    );
                    if selected {
                        body[*key] = json!(value);
                        body[format!("{key}_witness")] = json!(image_lines(witness));
                        let _ = writeln!(text, "{}: {value}", key.replace('_', " "));
                    }
                }
                if args.objective == Objective::All {
                    let joint = report.joint_witness.is_some();
                    body["joint_witness"] = json!(joint);
                    let _ = writeln!(
                        text,
                        "joint caps (l_h <= 4n-4, l_v <= 4m-4): {}",
                        if joint { "witness found" } else { "no witness" }
                    );
                }
            }
            if !report.stats.complete {
                let _ = writeln!(text, "incomplete: node budget exhausted");
                failure = Some(silent(EXIT_BUDGET));
            } else if report.minima.is_none() {
                let _ = writeln!(text, "no image satisfies these sums");
                failure = Some(silent(EXIT_INCONSISTENT));
            }
        }
    }

    if args.json {
        println!("{body}");
    } else {
        print_permutations(&loaded, std::io::stdout());
        print!("{text}");
    }
    match failure {
        Some(failure) => Err(failure),
        None => Ok(()),
    }
}

fn cmd_generate(args: GenerateArgs) -> CliResult<()> {
    let family = Family::from_name(&args.example).ok_or_else(|| {
        fail(
            EXIT_INVALID,
            format!(
                "unknown family {:?}; available: {}",
                args.example,
                Family::ALL.map(|f| f.name()).join(", ")
            ),
        )
    })?;
    let instance = generate(family, &args.param).map_err(|e| fail(EXIT_INVALID, e))?;
    println!("rows = {}", join(instance.sums.rows()));
    println!("cols = {}", join(instance.sums.cols()));
    Ok(())
}
