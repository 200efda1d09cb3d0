//! `coverstream`: generate, solve, verify, and benchmark streaming
//! set-cover instances.

mod bench;

use anyhow::{ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use coverstream_core::baselines::{exact_cover, offline_greedy, OracleStatus};
use coverstream_core::edifice::{
    make_wide, rainbow_merge, subsample, verify_edifice, Edifice, VerifyMode, VerifyReport,
    DEFAULT_VERTEX_CAP,
};
use coverstream_core::er::partial_cover_solve;
use coverstream_core::generators::{
    mpj_reduction, partial_reduction, sandwich_check, tightness_instance, GenMeta,
    ReductionInstance, TightParams,
};
use coverstream_core::instance::{parse_instance, write_instance};
use coverstream_core::report::SolveReport;
use coverstream_core::{
    prog_greedy, prog_greedy_naive, Field, Frac, Instance, MeteredStream, SpaceMeter,
};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "coverstream", about, version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the machine-readable report/instance to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print machine-readable JSON to stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for anything randomized.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an adversarial instance (plus a .meta.json sidecar).
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run a solver on an instance file and report the outcome.
    Solve(SolveArgs),
    /// Check the variety-tree axioms at the given parameters.
    #[command(name = "verify-edifice")]
    VerifyEdifice(VerifyArgs),
    /// Exact minimum cover of an instance file.
    Oracle(OracleArgs),
    /// Run a benchmark suite and write a CSV. Exit code 0 means every
    /// checked bound held.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum GenKind {
    /// The p-pass greedy trap: optimum 1, greedy p(q-1).
    Tight {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u64,
    },
    /// Pointer-jumping reduction over a (k, d, q) variety tree.
    Mpj {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        d: u32,
        /// The pointed leaf bit (decides small vs large optimum).
        #[arg(long)]
        bit: u8,
        /// Cap the tree arity (prefix subsample); defaults to full arity.
        #[arg(long)]
        t_sub: Option<u64>,
    },
    /// Partial-cover reduction over the widened and merged tree.
    Partial {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        d: u32,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        bit: u8,
        #[arg(long)]
        t_sub: Option<u64>,
    },
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    alg: Alg,
    /// Pass budget for the streaming algorithms.
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Slack for partial cover (overrides the instance header).
    #[arg(long)]
    eps: Option<String>,
    /// Node budget for the exact oracle.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Also run the exact oracle to fill opt and ratio.
    #[arg(long)]
    oracle_budget: Option<u64>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Alg {
    Prog,
    Naive,
    ErPartial,
    OfflineGreedy,
    Exact,
}

impl Alg {
    fn name(self) -> &'static str {
        match self {
            Alg::Prog => "prog",
            Alg::Naive => "naive",
            Alg::ErPartial => "er-partial",
            Alg::OfflineGreedy => "offline-greedy",
            Alg::Exact => "exact",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 0)]
    d: u32,
    #[arg(long)]
    q: u64,
    /// Widen with this group fraction (decimal or a/b).
    #[arg(long)]
    delta: Option<String>,
    /// Verify the merged structure built from the widened tree.
    #[arg(long, requires = "delta")]
    merge: bool,
    /// Cap the arity before verification.
    #[arg(long)]
    t_sub: Option<u64>,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    #[arg(long, default_value_t = 5000)]
    trials: u64,
    /// Vertex cap for exhaustive mode.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: u64,
}

#[derive(Copy, Clone, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct OracleArgs {
    instance: PathBuf,
    /// Required covered count; defaults to ceil((1-eps) n).
    #[arg(long)]
    quota: Option<u64>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = bench::Suite::Random)]
    suite: bench::Suite,
    /// JSON config overriding the suite defaults.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunReport {
    #[serde(flatten)]
    report: SolveReport,
    wall_time_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<serde_json::Value>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen { kind } => cmd_gen(kind, cli.seed, cli.out.as_deref()).map(|_| true),
        Command::Solve(args) => cmd_solve(args, cli.json, cli.out.as_deref()).map(|_| true),
        Command::VerifyEdifice(args) => cmd_verify(args, cli.seed, cli.json, cli.out.as_deref()),
        Command::Oracle(args) => cmd_oracle(args, cli.json, cli.out.as_deref()),
        Command::Bench(args) => bench::cmd_bench(
            args.suite,
            args.config.as_deref(),
            cli.seed,
            cli.out.as_deref(),
        ),
    }
}

/// Splits a prime power q into (p, e) or fails.
fn prime_power(q: u64) -> Result<(u64, u32)> {
    ensure!(q >= 2, "q must be at least 2");
    let mut p = q;
    for cand in 2.. {
        if cand * cand > q {
            break;
        }
        if q % cand == 0 {
            p = cand;
            break;
        }
    }
    let mut v = q;
    let mut e = 0;
    while v % p == 0 {
        v /= p;
        e += 1;
    }
    ensure!(v == 1, "q = {q} is not a prime power");
    Ok((p, e))
}

fn field_for(q: u64) -> Result<Field> {
    let (p, e) = prime_power(q)?;
    Ok(Field::new(p, e)?)
}

fn write_with_sidecar(
    instance: &Instance,
    meta: &GenMeta,
    default_name: String,
    out: Option<&Path>,
) -> Result<()> {
    let path = out
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(default_name));
    std::fs::write(&path, write_instance(instance))
        .with_context(|| format!("writing {}", path.display()))?;
    let sidecar = PathBuf::from(format!("{}.meta.json", path.display()));
    let mut json = serde_json::to_string_pretty(meta)?;
    json.push('\n');
    std::fs::write(&sidecar, json)?;
    println!(
        "wrote {} (n={}, m={}) and {}",
        path.display(),
        instance.n(),
        instance.m(),
        sidecar.display()
    );
    Ok(())
}

fn reduction_meta(kind: &str, red: &ReductionInstance) -> GenMeta {
    match kind {
        "mpj" => GenMeta::Mpj {
            meta: red.meta.clone(),
            player_of: red.player_of.clone(),
        },
        _ => GenMeta::Partial {
            meta: red.meta.clone(),
            player_of: red.player_of.clone(),
        },
    }
}

fn cmd_gen(kind: GenKind, seed: u64, out: Option<&Path>) -> Result<()> {
    match kind {
        GenKind::Tight { p, q } => {
            let instance = tightness_instance(p, q)?;
            let meta = GenMeta::Tight {
                params: TightParams {
                    p,
                    q,
                    n: instance.n(),
                    m: instance.m(),
                },
                guaranteed: sandwich_check(p, q),
            };
            write_with_sidecar(&instance, &meta, format!("tight_p{p}_q{q}.cover"), out)
        }
        GenKind::Mpj {
            k,
            q,
            d,
            bit,
            t_sub,
        } => {
            ensure!(bit <= 1, "--bit must be 0 or 1");
            let edifice = Edifice::new(k, d, field_for(q)?)?;
            let t_sub = t_sub.unwrap_or(edifice.params().t);
            let red = mpj_reduction(&edifice, t_sub, seed, bit)?;
            let meta = reduction_meta("mpj", &red);
            write_with_sidecar(
                &red.instance,
                &meta,
                format!("mpj_k{k}_q{q}_d{d}_bit{bit}_s{seed}.cover"),
                out,
            )
        }
        GenKind::Partial {
            k,
            q,
            d,
            eps,
            bit,
            t_sub,
        } => {
            ensure!(bit <= 1, "--bit must be 0 or 1");
            let eps = Frac::parse(&eps).map_err(|e| anyhow::anyhow!("{e}"))?;
            let edifice = Edifice::new(k, d, field_for(q)?)?;
            let red = partial_reduction(&edifice, eps, t_sub, seed, bit)?;
            let meta = reduction_meta("partial", &red);
            write_with_sidecar(
                &red.instance,
                &meta,
                format!("partial_k{k}_q{q}_d{d}_eps{eps}_bit{bit}_s{seed}.cover"),
                out,
            )
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_eps(flag: &Option<String>, instance: &Instance) -> Result<Frac> {
    match flag {
        Some(s) => Frac::parse(s).map_err(|e| anyhow::anyhow!("{e}")),
        None => Ok(instance.epsilon().unwrap_or(Frac::ZERO)),
    }
}

fn cmd_solve(args: SolveArgs, json: bool, out: Option<&Path>) -> Result<()> {
    let instance = load_instance(&args.instance)?;
    let eps = parse_eps(&args.eps, &instance)?;
    let started = Instant::now();

    let mut meter = SpaceMeter::new();
    let mut stream = MeteredStream::new(&instance);
    let (cert, covered) = match args.alg {
        Alg::Prog => {
            let run = prog_greedy(&mut stream, args.p, &mut meter);
            let covered = run.cert.covered_count();
            (run.cert, covered)
        }
        Alg::Naive => {
            let run = prog_greedy_naive(&mut stream, args.p, &mut meter);
            let covered = run.cert.covered_count();
            (run.cert, covered)
        }
        Alg::ErPartial => {
            let cert = partial_cover_solve(&mut stream, args.p, eps, &mut meter)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let covered = cert.covered_count();
            (cert, covered)
        }
        Alg::OfflineGreedy => {
            let cert = offline_greedy(&instance);
            let covered = cert.covered_count();
            (cert, covered)
        }
        Alg::Exact => {
            let quota = eps.quota(instance.n());
            let oracle = exact_cover(&instance, quota, args.budget);
            ensure!(
                oracle.status == OracleStatus::Exact,
                "oracle budget exceeded; raise --budget"
            );
            let report = SolveReport {
                n: instance.n(),
                m: instance.m(),
                alg: "exact".into(),
                p: 0,
                passes: 0,
                peak_aux_words: 0,
                sol_size: oracle.opt_size,
                sol_ids: oracle.witness.iter().copied().collect(),
                covered: quota,
                opt: None,
                ratio: None,
                seed: None,
            }
            .with_opt(oracle.opt_size);
            return emit_run_report(report, started, &args.instance, json, out);
        }
    };

    let mut report = SolveReport {
        n: instance.n(),
        m: instance.m(),
        alg: args.alg.name().into(),
        p: args.p,
        passes: stream.passes_used(),
        peak_aux_words: meter.peak_words(),
        sol_size: cert.sol_size(),
        sol_ids: cert.sol().iter().copied().collect(),
        covered,
        opt: None,
        ratio: None,
        seed: None,
    };
    if let Some(budget) = args.oracle_budget {
        let oracle = exact_cover(&instance, instance.n(), budget);
        ensure!(
            oracle.status == OracleStatus::Exact,
            "oracle budget exceeded"
        );
        report = report.with_opt(oracle.opt_size);
    }
    emit_run_report(report, started, &args.instance, json, out)
}

fn emit_run_report(
    report: SolveReport,
    started: Instant,
    instance_path: &Path,
    json: bool,
    out: Option<&Path>,
) -> Result<()> {
    let sidecar = PathBuf::from(format!("{}.meta.json", instance_path.display()));
    let generator = std::fs::read_to_string(&sidecar)
        .ok()
        .and_then(|text| serde_json::from_str(&text).ok());
    let run = RunReport {
        report,
        wall_time_ms: started.elapsed().as_millis() as u64,
        generator,
    };
    let text = serde_json::to_string_pretty(&run)?;
    if json {
        println!("{text}");
    } else {
        let r = &run.report;
        println!(
            "{} on n={} m={}: |Sol|={} covered={} passes={} peak_words={}{}",
            r.alg,
            r.n,
            r.m,
            r.sol_size,
            r.covered,
            r.passes,
            r.peak_aux_words,
            match (r.opt, r.ratio) {
                (Some(opt), Some(ratio)) => format!(" opt={opt} ratio={ratio:.3}"),
                (Some(opt), None) => format!(" opt={opt}"),
                _ => String::new(),
            }
        );
    }
    if let Some(path) = out {
        std::fs::write(path, text + "\n")?;
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs, seed: u64, json: bool, out: Option<&Path>) -> Result<bool> {
    let edifice = Edifice::new(args.k, args.d, field_for(args.q)?)?;
    let mode = match args.mode {
        Mode::Exhaustive => VerifyMode::Exhaustive,
        Mode::Sampled => VerifyMode::Sampled {
            seed,
            trials: args.trials,
        },
    };
    let report: VerifyReport = if args.merge {
        let delta =
            Frac::parse(args.delta.as_deref().unwrap()).map_err(|e| anyhow::anyhow!("{e}"))?;
        let merged = rainbow_merge(make_wide(&edifice, delta)?);
        let p = merged.params();
        if !json {
            println!(
                "merged structure parameters: k={} d={} q={} t={}",
                p.k, p.d, p.q, p.t
            );
        }
        match args.t_sub {
            Some(t_sub) => verify_edifice(&subsample(&merged, t_sub)?, mode, args.cap)?,
            None => verify_edifice(&merged, mode, args.cap)?,
        }
    } else if let Some(delta) = &args.delta {
        let delta = Frac::parse(delta).map_err(|e| anyhow::anyhow!("{e}"))?;
        let wide = make_wide(&edifice, delta)?;
        if !json {
            println!(
                "wide parameters: b={} t'={}",
                wide.width(),
                wide.group_count()
            );
        }
        verify_edifice(&edifice, mode, args.cap)?
    } else {
        match args.t_sub {
            Some(t_sub) => verify_edifice(&subsample(&edifice, t_sub)?, mode, args.cap)?,
            None => verify_edifice(&edifice, mode, args.cap)?,
        }
    };
    let text = serde_json::to_string_pretty(&report)?;
    if json {
        println!("{text}");
    } else {
        println!(
            "{}: vertices={} pairs={} max_intersection={} (bound {}) -> {}",
            report.mode,
            report.vertices_checked,
            report.pairs_checked,
            report.max_intersection,
            report.bound,
            if report.pass { "pass" } else { "FAIL" }
        );
    }
    if let Some(path) = out {
        std::fs::write(path, text + "\n")?;
    }
    Ok(report.pass)
}

#[derive(Serialize)]
struct OracleReport {
    opt: u64,
    witness: Vec<u64>,
    explored_nodes: u64,
    status: String,
    quota: u64,
}

fn cmd_oracle(args: OracleArgs, json: bool, out: Option<&Path>) -> Result<bool> {
    let instance = load_instance(&args.instance)?;
    let quota = match args.quota {
        Some(q) => {
            ensure!(q <= instance.n(), "quota exceeds the universe");
            q
        }
        None => parse_eps(&args.eps, &instance)?.quota(instance.n()),
    };
    let oracle = exact_cover(&instance, quota, args.budget);
    let exact = oracle.status == OracleStatus::Exact;
    let report = OracleReport {
        opt: oracle.opt_size,
        witness: oracle.witness.iter().copied().collect(),
        explored_nodes: oracle.explored_nodes,
        status: if exact {
            "exact".into()
        } else {
            "budget_exceeded".into()
        },
        quota,
    };
    let text = serde_json::to_string_pretty(&report)?;
    if json {
        println!("{text}");
    } else {
        println!(
            "opt={} (quota {}, {} nodes, {})",
            report.opt, report.quota, report.explored_nodes, report.status
        );
    }
    if let Some(path) = out {
        std::fs::write(path, text + "\n")?;
    }
    Ok(exact)
}
