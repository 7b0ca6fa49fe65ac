//! Command-line front end: generate instance families, run the bottom-left
//! packer and ordering searches, analyze packings structurally, render
//! SVGs, and reproduce the standard experiment suites.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage or input
//! error, 3 I/O error. `BLPACK_THREADS` caps internal parallelism
//! (0 or unset = automatic).

mod formats;
mod render;
mod repro;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use blpack::analysis::{
    accounting_violations, analyze_piece, check_global_bound, extract_pieces, extract_trenches,
    flood_fill_bounded_area, pieces_bounded_area, verify_bottom_left,
};
use blpack::engine::{
    best_exhaustive, pack, sampled_extremes, PackingTrace, DEFAULT_EXHAUSTIVE_CAP,
};
use blpack::generators::{self, GeneratedCase};
use blpack::instance::{Instance, Ordering};
use blpack::local_search::{run as local_search_run, Strategy};
use blpack::rational::Rational;

use formats::{
    CheckEntry, FormatError, InstanceFile, Metadata, OrderingFile, PackingFile, ReportFile,
    TraceFile,
};

#[derive(Parser)]
#[command(
    name = "blpack",
    version,
    about = "Exact-arithmetic bottom-left strip packing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one of the named instance families and write it with its
    /// bundled orderings.
    Generate(GenerateArgs),
    /// Run the bottom-left packer on an instance.
    Pack(PackArgs),
    /// Search over orderings: exhaustive, sampled, or k-local search.
    Search(SearchArgs),
    /// Structural checks on a packing or trace.
    Analyze(AnalyzeArgs),
    /// Render a packing as SVG.
    Render(RenderArgs),
    /// Run a reproduction suite.
    Repro(ReproArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// rect43 | rect43int | square65 | square43 | checkerboard | resetrow |
    /// tenthirds | localsearch | expsteps
    #[arg(long)]
    construction: String,
    /// Rational perturbation, e.g. 1/100 (rect43, square65, square43).
    #[arg(long)]
    eps: Option<String>,
    /// Checkerboard / reset-row size parameter (even).
    #[arg(long)]
    m: Option<i64>,
    /// Height parameter (rect43int, square43).
    #[arg(long)]
    h: Option<i64>,
    /// Local-search / exponential-steps parameter.
    #[arg(long)]
    k: Option<i64>,
    /// Ten-thirds size parameter.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PackArgs {
    #[arg(long)]
    instance: PathBuf,
    /// identity | decreasing-width | decreasing-size | @ordering.json |
    /// comma-separated ids
    #[arg(long, default_value = "identity")]
    ordering: String,
    #[arg(long)]
    out: PathBuf,
    /// Also write the full placement-order trace.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    instance: PathBuf,
    /// exhaustive | sample | klocal
    #[arg(long)]
    mode: String,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// first | best
    #[arg(long, default_value = "first")]
    strategy: String,
    #[arg(long, default_value_t = 1_000)]
    max_steps: usize,
    /// Starting ordering for klocal (same forms as pack --ordering).
    #[arg(long, default_value = "identity")]
    ordering: String,
    /// Item-count cap for exhaustive search.
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    cap: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    packing: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Comma-separated subset of feasible,bl,pieces,structure,cover,bound.
    #[arg(long, default_value = "feasible,bl,pieces,structure,cover,bound")]
    checks: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    packing: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReproArgs {
    /// thm-rect43 | cor-square65 | thm-square43 | checkerboard | tenthirds |
    /// localsearch | expsteps | structure-suite | bound-suite | all
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 20260808)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    /// Bad parameters or malformed input files.
    Input(String),
    /// Filesystem failures.
    Io(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Io(_) => ExitCode::from(3),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Io(m) => m,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("BLPACK_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    let outcome = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Pack(args) => cmd_pack(args),
        Command::Search(args) => cmd_search(args, threads),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Render(args) => cmd_render(args),
        Command::Repro(args) => cmd_repro(args, threads),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("parsing {}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("serializing: {e}")))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

fn parse_rational_arg(text: &str, what: &str) -> Result<Rational, CliError> {
    Rational::from_str(text).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

fn generated_case(
    args: &GenerateArgs,
) -> Result<(GeneratedCase, BTreeMap<String, String>), CliError> {
    let mut params = BTreeMap::new();
    let eps = |p: &mut BTreeMap<String, String>| -> Result<Rational, CliError> {
        let text = args
            .eps
            .as_deref()
            .ok_or_else(|| CliError::Input("--eps required for this construction".into()))?;
        p.insert("eps".into(), text.to_string());
        parse_rational_arg(text, "--eps")
    };
    let int = |value: Option<i64>,
               name: &str,
               p: &mut BTreeMap<String, String>|
     -> Result<i64, CliError> {
        let v = value
            .ok_or_else(|| CliError::Input(format!("--{name} required for this construction")))?;
        p.insert(name.into(), v.to_string());
        Ok(v)
    };
    let case = match args.construction.as_str() {
        "rect43" => generators::gen_rect_43(&eps(&mut params)?),
        "rect43int" => generators::gen_rect_43_integer(int(args.h, "h", &mut params)?),
        "square65" => generators::gen_square_65(&eps(&mut params)?),
        "square43" => {
            let h = int(args.h, "h", &mut params)?;
            generators::gen_square_43(h, &eps(&mut params)?)
        }
        "checkerboard" => generators::gen_checkerboard(int(args.m, "m", &mut params)?),
        "resetrow" => generators::gen_checkerboard_with_reset(int(args.m, "m", &mut params)?),
        "tenthirds" => {
            let n = args
                .n
                .ok_or_else(|| CliError::Input("--n required for this construction".into()))?;
            params.insert("n".into(), n.to_string());
            generators::gen_ten_thirds(n)
        }
        "localsearch" => generators::gen_local_search(int(args.k, "k", &mut params)?),
        "expsteps" => {
            let k = int(args.k, "k", &mut params)?;
            let k = u32::try_from(k).map_err(|_| CliError::Input("--k must be positive".into()))?;
            generators::gen_exponential_steps(k)
        }
        other => return Err(CliError::Input(format!("unknown construction {other:?}"))),
    }
    .map_err(|e| CliError::Input(e.to_string()))?;
    Ok((case, params))
}

fn cmd_generate(args: GenerateArgs) -> Result<bool, CliError> {
    let (case, params) = generated_case(&args)?;
    let metadata = Metadata {
        construction: args.construction.clone(),
        params,
    };
    let file = InstanceFile::from_instance(&case.instance, Some(metadata));
    write_json(&args.out, &file)?;
    println!(
        "wrote {} ({} items, width {})",
        args.out.display(),
        case.instance.len(),
        case.instance.width()
    );

    let stem = args
        .out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let dir = args.out.parent().unwrap_or_else(|| Path::new("."));
    for (name, ordering) in &case.orderings {
        let path = dir.join(format!("{stem}.{name}.order.json"));
        write_json(
            &path,
            &OrderingFile {
                order: ordering.ids().to_vec(),
            },
        )?;
        println!("wrote {}", path.display());
    }
    Ok(true)
}

fn resolve_ordering(spec: &str, instance: &Instance) -> Result<Ordering, CliError> {
    match spec {
        "identity" => Ok(Ordering::identity(instance.len())),
        "decreasing-width" => Ok(Ordering::by_decreasing_width(instance)),
        "decreasing-size" => Ok(Ordering::by_decreasing_size(instance)),
        other => {
            let order = if let Some(path) = other.strip_prefix('@') {
                read_json::<OrderingFile>(Path::new(path))?.order
            } else {
                other
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| CliError::Input(format!("ordering list: {e}")))?
            };
            Ordering::new(order, instance.len())
                .map_err(|e| CliError::Input(format!("ordering: {e}")))
        }
    }
}

fn cmd_pack(args: PackArgs) -> Result<bool, CliError> {
    let file: InstanceFile = read_json(&args.instance)?;
    let metadata = file.metadata.clone();
    let instance = file.to_instance()?;
    let ordering = resolve_ordering(&args.ordering, &instance)?;
    let trace = pack(&instance, &ordering);
    let packing = trace.final_packing();
    write_json(
        &args.out,
        &PackingFile::from_packing(&packing, metadata.clone()),
    )?;
    println!(
        "packed {} items to height {}",
        instance.len(),
        packing.height()
    );
    if let Some(trace_path) = &args.trace {
        write_json(trace_path, &TraceFile::from_trace(&trace, metadata))?;
        println!("wrote trace {}", trace_path.display());
    }
    Ok(true)
}

fn cmd_search(args: SearchArgs, threads: usize) -> Result<bool, CliError> {
    let file: InstanceFile = read_json(&args.instance)?;
    let instance = file.to_instance()?;
    let mut params = BTreeMap::new();
    params.insert("mode".into(), args.mode.clone());
    let mut checks = Vec::new();

    match args.mode.as_str() {
        "exhaustive" => {
            let result =
                best_exhaustive(&instance, args.cap).map_err(|e| CliError::Input(e.to_string()))?;
            checks.push(CheckEntry {
                name: "best ordering".into(),
                pass: true,
                detail: format!(
                    "height {}, examined {}, ordering {:?}",
                    result.height,
                    result.orderings_examined,
                    result.ordering.ids()
                ),
            });
        }
        "sample" => {
            params.insert("samples".into(), args.samples.to_string());
            params.insert("seed".into(), args.seed.to_string());
            let (best, worst) = sampled_extremes(&instance, args.samples, args.seed, threads);
            checks.push(CheckEntry {
                name: "sampled best".into(),
                pass: true,
                detail: format!("height {}, ordering {:?}", best.height, best.ordering.ids()),
            });
            checks.push(CheckEntry {
                name: "sampled worst".into(),
                pass: true,
                detail: format!(
                    "height {}, ordering {:?}",
                    worst.height,
                    worst.ordering.ids()
                ),
            });
        }
        "klocal" => {
            params.insert("k".into(), args.k.to_string());
            params.insert("strategy".into(), args.strategy.clone());
            params.insert("max-steps".into(), args.max_steps.to_string());
            let strategy = match args.strategy.as_str() {
                "first" => Strategy::FirstImprovement,
                "best" => Strategy::BestImprovement,
                other => return Err(CliError::Input(format!("unknown strategy {other:?}"))),
            };
            let start = resolve_ordering(&args.ordering, &instance)?;
            let trace = local_search_run(&instance, &start, args.k, strategy, args.max_steps);
            for (step, (ordering, height)) in trace.entries.iter().enumerate() {
                checks.push(CheckEntry {
                    name: format!("step {step}"),
                    pass: true,
                    detail: format!("height {height}, ordering {:?}", ordering.ids()),
                });
            }
            checks.push(CheckEntry {
                name: "final".into(),
                pass: true,
                detail: format!(
                    "{} improvement steps, height {}",
                    trace.steps(),
                    trace.final_height()
                ),
            });
        }
        other => return Err(CliError::Input(format!("unknown mode {other:?}"))),
    }

    let report = ReportFile::new("search", params, checks);
    write_json(&args.out, &report)?;
    println!("wrote {}", args.out.display());
    Ok(report.pass)
}

fn analyze_checks(
    trace: Option<&PackingTrace>,
    packing: &blpack::packing::Packing,
    selected: &[String],
) -> Result<Vec<CheckEntry>, CliError> {
    let mut checks = Vec::new();
    let needs_trace = |name: &str| -> Result<(), CliError> {
        if trace.is_none() {
            return Err(CliError::Input(format!("check {name:?} requires --trace")));
        }
        Ok(())
    };
    for check in selected {
        match check.as_str() {
            "feasible" => {
                let violations = packing.violations();
                checks.push(CheckEntry {
                    name: "feasible".into(),
                    pass: violations.is_empty(),
                    detail: if violations.is_empty() {
                        "inside strip, interiors disjoint".into()
                    } else {
                        violations
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join("; ")
                    },
                });
            }
            "bl" => {
                needs_trace("bl")?;
                let violations = verify_bottom_left(trace.expect("checked"));
                checks.push(CheckEntry {
                    name: "bl".into(),
                    pass: violations.is_empty(),
                    detail: if violations.is_empty() {
                        "every placement matches the candidate-grid oracle".into()
                    } else {
                        violations.join("; ")
                    },
                });
            }
            "pieces" => {
                needs_trace("pieces")?;
                let trace = trace.expect("checked");
                let pieces = extract_pieces(trace);
                let trenches = extract_trenches(trace, &pieces);
                let mut violations = accounting_violations(trace, &pieces, &trenches);
                if pieces_bounded_area(trace, &pieces) != flood_fill_bounded_area(trace) {
                    violations.push("piece areas disagree with the flood-fill oracle".into());
                }
                let right = trenches.iter().filter(|t| t.touches_right).count();
                if right > 1 {
                    violations.push(format!("{right} right trenches"));
                }
                checks.push(CheckEntry {
                    name: "pieces".into(),
                    pass: violations.is_empty(),
                    detail: if violations.is_empty() {
                        format!(
                            "{} pieces, {} trenches, areas balance",
                            pieces.len(),
                            trenches.len()
                        )
                    } else {
                        violations.join("; ")
                    },
                });
            }
            "structure" | "cover" => {
                needs_trace(check)?;
                let trace = trace.expect("checked");
                let pieces = extract_pieces(trace);
                let mut violations = Vec::new();
                for piece in &pieces {
                    violations.extend(analyze_piece(trace, piece).violations);
                }
                checks.push(CheckEntry {
                    name: check.clone(),
                    pass: violations.is_empty(),
                    detail: if violations.is_empty() {
                        format!(
                            "{} pieces pass circuit, structure, peak, partition and width checks",
                            pieces.len()
                        )
                    } else {
                        violations.join("; ")
                    },
                });
            }
            "bound" => match check_global_bound(packing) {
                Ok(report) => checks.push(CheckEntry {
                    name: "bound".into(),
                    pass: report.pass,
                    detail: report.to_string(),
                }),
                Err(_) => checks.push(CheckEntry {
                    name: "bound".into(),
                    pass: true,
                    detail: "not applicable: instance contains non-squares".into(),
                }),
            },
            other => return Err(CliError::Input(format!("unknown check {other:?}"))),
        }
    }
    Ok(checks)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<bool, CliError> {
    let selected: Vec<String> = args
        .checks
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if selected.is_empty() {
        return Err(CliError::Input("no checks selected".into()));
    }

    let (trace, packing) = match (&args.trace, &args.packing) {
        (Some(path), _) => {
            let file: TraceFile = read_json(path)?;
            let trace = file.to_trace()?;
            let packing = trace.final_packing();
            (Some(trace), packing)
        }
        (None, Some(path)) => {
            let file: PackingFile = read_json(path)?;
            (None, file.to_packing()?)
        }
        (None, None) => {
            return Err(CliError::Input(
                "one of --trace or --packing is required".into(),
            ))
        }
    };

    let checks = analyze_checks(trace.as_ref(), &packing, &selected)?;
    let mut params = BTreeMap::new();
    params.insert("checks".into(), args.checks.clone());
    let report = ReportFile::new("analyze", params, checks);
    for check in &report.checks {
        println!(
            "{}: {} ({})",
            check.name,
            if check.pass { "pass" } else { "FAIL" },
            check.detail
        );
    }
    write_json(&args.out, &report)?;
    Ok(report.pass)
}

fn cmd_render(args: RenderArgs) -> Result<bool, CliError> {
    let file: PackingFile = read_json(&args.packing)?;
    let packing = file.to_packing()?;
    let svg = render::render_svg(&packing);
    std::fs::write(&args.out, svg)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", args.out.display())))?;
    println!("wrote {}", args.out.display());
    Ok(true)
}

fn cmd_repro(args: ReproArgs, threads: usize) -> Result<bool, CliError> {
    let checks = repro::run_suite(&args.suite, args.seed, threads).map_err(CliError::Input)?;
    let mut params = BTreeMap::new();
    params.insert("suite".into(), args.suite.clone());
    params.insert("seed".into(), args.seed.to_string());
    let report = ReportFile::new("repro", params, checks);
    for check in &report.checks {
        println!(
            "{}: {} ({})",
            check.name,
            if check.pass { "pass" } else { "FAIL" },
            check.detail
        );
    }
    println!(
        "suite {}: {}",
        args.suite,
        if report.pass { "pass" } else { "FAIL" }
    );
    if let Some(out) = &args.out {
        write_json(out, &report)?;
    }
    Ok(report.pass)
}
