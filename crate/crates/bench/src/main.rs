use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tr1da::solver::{RecomputeRule, Variant};
use tr1da_bench::audit::{audit_runs, group_trace_lines};
use tr1da_bench::campaign::{trace_lines, TraceLine};
use tr1da_bench::emit::emit;
use tr1da_bench::{aggregate, run_campaign, BenchError, CampaignSpec, Format, ProblemFilter};

#[derive(Parser)]
#[command(name = "bench", about = "Benchmark campaigns for the dynamic-accuracy trust-region solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a campaign and write the result table.
    Run(RunArgs),
    /// Problem catalogue.
    Problems {
        #[command(subcommand)]
        action: ProblemsAction,
    },
    /// Audit a JSON-lines trace file against the convergence theory.
    Audit {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum ProblemsAction {
    List,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, value_delimiter = ',', default_value = "lmqn,lmqn-s,lmqn-h,ilmqn-a,ilmqn-b")]
    variants: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "1e-3,1e-5,1e-7")]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    replicates: usize,
    /// Comma-separated problem names, or "all".
    #[arg(long, value_delimiter = ',', default_value = "all")]
    problems: Vec<String>,
    #[arg(long, default_value_t = 42)]
    seed_base: u64,
    /// md, csv or json.
    #[arg(long, default_value = "md")]
    format: String,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record per-iteration traces.
    #[arg(long)]
    trace: bool,
    /// Where traces go when --trace is set.
    #[arg(long, default_value = "traces.jsonl")]
    trace_out: PathBuf,
    /// Also write one JSON record per run.
    #[arg(long)]
    records: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Re-evaluate f at the current iterate whenever the requested accuracy
    /// drops ("requested") or only when it drops below the achieved accuracy ("achieved").
    #[arg(long, default_value = "achieved")]
    recompute: String,
}

fn parse_spec(args: &RunArgs) -> Result<CampaignSpec, BenchError> {
    let variants = args
        .variants
        .iter()
        .map(|v| v.parse::<Variant>().map_err(|e| BenchError::Usage(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let problems = if args.problems.len() == 1 && args.problems[0] == "all" {
        ProblemFilter::All
    } else {
        ProblemFilter::Names(args.problems.clone())
    };
    let recompute = match args.recompute.as_str() {
        "requested" => RecomputeRule::Requested,
        "achieved" => RecomputeRule::Achieved,
        other => return Err(BenchError::Usage(format!("unknown recompute rule '{other}'"))),
    };
    Ok(CampaignSpec {
        variants,
        epsilons: args.eps.clone(),
        replicates: args.replicates,
        problems,
        seed_base: args.seed_base,
        format: args.format.parse::<Format>()?,
        workers: args.workers,
        trace: args.trace,
        recompute,
    })
}

fn write_jsonl<T: serde::Serialize>(path: &PathBuf, items: impl Iterator<Item = T>) -> Result<(), BenchError> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut w, &item)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn run(args: RunArgs) -> Result<(), BenchError> {
    let spec = parse_spec(&args)?;
    let records = run_campaign(&spec)?;
    let rows = aggregate(&records)?;
    let text = emit(&rows, spec.format)?;
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    if spec.trace {
        write_jsonl(&args.trace_out, trace_lines(&records))?;
    }
    if let Some(path) = &args.records {
        write_jsonl(path, records.iter())?;
    }
    Ok(())
}

fn audit(input: PathBuf) -> Result<bool, BenchError> {
    let file = fs::File::open(&input)
        .map_err(|e| BenchError::Usage(format!("cannot open {}: {e}", input.display())))?;
    let mut lines = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: TraceLine = serde_json::from_str(&line)
            .map_err(|e| BenchError::Usage(format!("line {}: {e}", i + 1)))?;
        lines.push(parsed);
    }
    let report = audit_runs(&group_trace_lines(lines))?;
    print!("{}", report.summary());
    for f in &report.failures {
        println!("  {f}");
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => run(args).map(|_| true),
        Command::Problems {
            action: ProblemsAction::List,
        } => {
            for p in tr1da::catalog() {
                println!("{:<10} {:>3}", p.name(), p.dim());
            }
            Ok(true)
        }
        Command::Audit { input } => audit(input),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("bench: {e}");
            ExitCode::from(1)
        }
    }
}
