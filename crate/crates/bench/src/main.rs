use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anewdsc::{Admissibility, Dyadic, Mode, SolveConfig, SolveError, StrategyRegistry};
use anewdsc_bench::report::{IsolateReport, StatsRecord, TraceRecord};
use anewdsc_bench::{parse_poly, run_bench, BenchConfig, FamilyParams};
use clap::{Parser, Subcommand, ValueEnum};

const EXIT_PARSE: u8 = 2;
const EXIT_PRECISION: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;

#[derive(Parser)]
#[command(name = "anewdsc", version, about = "Certified real root isolation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AdmissibleArg {
    Pseudo,
    Deterministic,
}

#[derive(Subcommand)]
enum Command {
    /// Isolate the real roots of a polynomial read from a file.
    Isolate {
        #[arg(long)]
        input: PathBuf,
        /// Search region; defaults to a root bound.
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        interval: Option<Vec<String>>,
        #[arg(long)]
        mode: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        stats: bool,
        /// Write one JSON record per processed node to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = 1 << 20)]
        rho_cap: u64,
        #[arg(long)]
        no_truncation: bool,
        #[arg(long, value_enum, default_value = "pseudo")]
        admissible: AdmissibleArg,
    },
    /// Generate a benchmark instance and solve it in several modes.
    Bench {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed-point scale of the clustered family.
        #[arg(long, default_value_t = 256)]
        scale: u32,
        /// Comma-separated list of modes.
        #[arg(long, value_delimiter = ',', default_value = "anewdsc")]
        modes: Vec<String>,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 600)]
        timeout: u64,
        #[arg(long)]
        json: bool,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn exit_code(e: &SolveError) -> u8 {
    match e {
        SolveError::NonSquareFreeSuspected { .. } | SolveError::RegionEndpointRoot(_) => EXIT_PRECISION,
        SolveError::Timeout(_) => EXIT_TIMEOUT,
        _ => 1,
    }
}

fn print_stats(s: &StatsRecord) {
    println!("tree nodes         {}", s.tree_nodes);
    println!("newton attempts    {}", s.newton_attempts);
    println!("newton successes   {}", s.newton_successes);
    println!("bisections         {}", s.bisections);
    println!("max precision      {} bits", s.max_precision_bits);
    println!("max var chain      {}", s.max_var_chain);
    println!("truncation hits    {}", s.truncation_hits);
    println!("wall time          {:.3} s", s.wall_time_s);
}

#[allow(clippy::too_many_arguments)]
fn isolate_cmd(
    input: PathBuf,
    interval: Option<Vec<String>>,
    mode: String,
    seed: u64,
    json: bool,
    stats: bool,
    trace: Option<PathBuf>,
    rho_cap: u64,
    no_truncation: bool,
    admissible: AdmissibleArg,
) -> ExitCode {
    let registry = StrategyRegistry::with_defaults();
    let Some(strategy) = registry.get(&mode) else {
        let known: Vec<&str> = registry.names().collect();
        return fail(EXIT_PARSE, format!("unknown mode `{mode}` (known: {})", known.join(", ")));
    };
    let text = match fs::read_to_string(&input) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", input.display())),
    };
    let spec = match parse_poly(&text) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", input.display())),
    };
    let region = match interval {
        None => None,
        Some(v) => match (Dyadic::parse_exact(&v[0]), Dyadic::parse_exact(&v[1])) {
            (Ok(a), Ok(b)) => Some((a, b)),
            _ => return fail(EXIT_PARSE, "interval endpoints must be exact dyadic numbers"),
        },
    };
    let cfg = SolveConfig {
        mode: mode.parse().unwrap_or(Mode::ANewDsc),
        seed,
        prec_cap: rho_cap,
        truncation: !no_truncation,
        admissible: match admissible {
            AdmissibleArg::Pseudo => Admissibility::Pseudo,
            AdmissibleArg::Deterministic => Admissibility::Deterministic,
        },
        record_trace: trace.is_some(),
        ..SolveConfig::default()
    };
    let oracle = spec.into_oracle();
    let res = match strategy.isolate(oracle.as_ref(), region, &cfg) {
        Ok(r) => r,
        Err(e) => return fail(exit_code(&e), e),
    };
    if let Some(path) = trace {
        let write = || -> std::io::Result<()> {
            let mut f = std::io::BufWriter::new(fs::File::create(&path)?);
            for ev in &res.trace {
                serde_json::to_writer(&mut f, &TraceRecord::from(ev))?;
                writeln!(f)?;
            }
            f.flush()
        };
        if let Err(e) = write() {
            return fail(1, format!("{}: {e}", path.display()));
        }
    }
    let report = IsolateReport::from(&res);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        return ExitCode::SUCCESS;
    }
    for (a, b) in &res.intervals {
        println!("({a}, {b})  ~ [{:.6e}, {:.6e}]", a.to_f64(), b.to_f64());
    }
    for x in &res.points {
        println!("{{{x}}}  ~ {:.6e}", x.to_f64());
    }
    if stats {
        print_stats(&report.stats);
    }
    ExitCode::SUCCESS
}

#[allow(clippy::too_many_arguments)]
fn bench_cmd(
    family: String,
    n: usize,
    tau: u64,
    seed: u64,
    scale: u32,
    modes: Vec<String>,
    verify: bool,
    timeout: u64,
    json: bool,
) -> ExitCode {
    let mut parsed = Vec::new();
    for m in &modes {
        match m.parse::<Mode>() {
            Ok(m) => parsed.push(m),
            Err(e) => return fail(EXIT_PARSE, e),
        }
    }
    let cfg = BenchConfig {
        params: FamilyParams { n, tau, seed, scale },
        modes: parsed,
        verify,
        timeout: Duration::from_secs(timeout),
        ..BenchConfig::new(&family, n, tau)
    };
    let records = match run_bench(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let mut code = ExitCode::SUCCESS;
    for r in &records {
        if json {
            println!("{}", serde_json::to_string(r).expect("record serializes"));
        } else {
            let count = r.root_count.map_or("-".to_string(), |c| c.to_string());
            let nodes = r.stats.as_ref().map_or(0, |s| s.tree_nodes);
            let check = match (verify, r.verified) {
                (false, _) => "",
                (true, true) => " verified",
                (true, false) => " NOT verified",
            };
            println!(
                "{} n={} tau={} mode={}: {} roots, {} nodes, {:.1} s{}",
                r.family, r.n, r.tau, r.mode, count, nodes, r.wall_time_s, check
            );
            if let Some(e) = &r.error {
                println!("  {e}");
            }
        }
        if r.timed_out {
            code = ExitCode::from(EXIT_TIMEOUT);
        }
    }
    code
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Isolate {
            input,
            interval,
            mode,
            seed,
            json,
            stats,
            trace,
            rho_cap,
            no_truncation,
            admissible,
        } => isolate_cmd(
            input,
            interval,
            mode,
            seed,
            json,
            stats,
            trace,
            rho_cap,
            no_truncation,
            admissible,
        ),
        Command::Bench {
            family,
            n,
            tau,
            seed,
            scale,
            modes,
            verify,
            timeout,
            json,
        } => bench_cmd(family, n, tau, seed, scale, modes, verify, timeout, json),
    }
}
