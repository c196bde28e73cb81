use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use odmts::design::DesignFile;
use odmts::harness::{compare, compare_csv, content_hash, run_algorithm, write_bundle, Algorithm, RunParams};
use odmts::trace::{HeuristicOutcome, HeuristicTrace};
use odmts::{
    eval_design, generate_synthetic, load_instance, Design, Error, ExpansionRule, GeneratorConfig, Instance,
    LatentClass, TripSet,
};

/// Design on-demand multimodal transit systems with latent-demand adoption.
#[derive(Parser)]
#[command(name = "odmts", version)]
struct Cli {
    /// Worker threads for routing and evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic instance file.
    Generate(GenerateArgs),
    /// Run one algorithm and write design.json, evaluation.json and trace.csv.
    Solve(SolveArgs),
    /// Evaluate a design file over the full trip set.
    Evaluate(EvaluateArgs),
    /// Run several algorithms on several instances and write a comparison CSV.
    Compare(CompareArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 100)]
    stops: usize,
    #[arg(long, default_value_t = 8)]
    hubs: usize,
    #[arg(long, default_value_t = 60)]
    core: usize,
    /// Latent classes as `trips:alpha` pairs.
    #[arg(long, default_value = "110:2.0,30:1.5")]
    latent: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    area_km: Option<f64>,
    #[arg(long)]
    buses_per_leg: Option<f64>,
    #[arg(long)]
    shuttle_between_hubs: bool,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct AlgArgs {
    /// Greedy adoption step size (default max(1, |T'|/20)).
    #[arg(long)]
    rho: Option<usize>,
    /// Greedy rejection step size (default max(1, |T'|/20)).
    #[arg(long)]
    eta: Option<usize>,
    /// Expansion rules, e.g. `a` for arc-s1 or `d,a` for arc-s2.
    #[arg(long, value_delimiter = ',')]
    rules: Vec<String>,
    /// Time limit in seconds, checked between iterations.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Stop greedy rejection when a design recurs.
    #[arg(long)]
    detect_cycles: bool,
    /// Design file whose arcs stay open.
    #[arg(long)]
    fixed: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, short)]
    instance: PathBuf,
    #[arg(long)]
    alg: String,
    #[command(flatten)]
    params: AlgArgs,
    #[arg(long, short, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long, short)]
    instance: PathBuf,
    #[arg(long, short)]
    design: PathBuf,
    /// JSON array of the trip ids the design was built for (default: all trips).
    #[arg(long)]
    trip_set: Option<PathBuf>,
    /// Output file (default: print to stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, short, num_args = 1.., required = true)]
    instances: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "grad,grre,gagr,arc-s1,arc-s2")]
    algs: Vec<String>,
    #[command(flatten)]
    params: AlgArgs,
    #[arg(long, short, default_value = "compare.csv")]
    out: PathBuf,
}

/// Failures that map to exit code 1.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Compare(a) => run_compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let config = e.downcast_ref::<Usage>().is_some()
                || matches!(
                    e.downcast_ref::<Error>(),
                    Some(Error::Io { .. } | Error::Parse(_) | Error::Validation(_) | Error::Parameter(_) | Error::UnknownRule(_))
                );
            ExitCode::from(if config { 1 } else { 2 })
        }
    }
}

fn parse_classes(text: &str) -> anyhow::Result<Vec<LatentClass>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (n, a) = part.split_once(':').ok_or_else(|| usage(format!("latent class `{part}` is not trips:alpha")))?;
        let trips = n.trim().parse().map_err(|_| usage(format!("bad trip count in `{part}`")))?;
        let alpha = a.trim().parse().map_err(|_| usage(format!("bad alpha in `{part}`")))?;
        out.push(LatentClass { trips, alpha });
    }
    Ok(out)
}

fn generate(a: GenerateArgs) -> anyhow::Result<()> {
    let mut cfg = GeneratorConfig {
        stops: a.stops,
        hubs: a.hubs,
        core_trips: a.core,
        latent_classes: parse_classes(&a.latent)?,
        shuttle_between_hubs: a.shuttle_between_hubs,
        ..GeneratorConfig::default()
    };
    if let Some(v) = a.area_km {
        cfg.area_km = v;
    }
    if let Some(v) = a.buses_per_leg {
        cfg.buses_per_leg = v;
    }
    let inst = generate_synthetic(&cfg, a.seed)?;
    let text = inst.to_json_string();
    std::fs::write(&a.out, &text).map_err(|source| Error::Io { path: a.out.display().to_string(), source })?;
    println!(
        "wrote {}: {} stops, {} hubs, {} candidate arcs, {} core trips, {} latent trips",
        a.out.display(),
        inst.stop_count(),
        inst.hubs().len(),
        inst.arcs().len(),
        inst.core_trips().len(),
        inst.latent_trips().len()
    );
    println!("sha256 {}", content_hash(text.as_bytes()));
    Ok(())
}

fn load_design(inst: &Instance, path: &Path) -> anyhow::Result<Design> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: DesignFile =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(Design::from_stop_pairs(inst, &file.arcs)?)
}

fn run_params(inst: &Instance, a: &AlgArgs) -> anyhow::Result<RunParams> {
    let rules = a.rules.iter().map(|r| r.parse::<ExpansionRule>()).collect::<Result<Vec<_>, _>>()?;
    let time_limit = match a.time_limit {
        Some(t) if t.is_nan() || t <= 0.0 => return Err(usage("time limit must be positive")),
        Some(t) => Some(Duration::from_secs_f64(t)),
        None => None,
    };
    let fixed = match &a.fixed {
        Some(p) => load_design(inst, p)?,
        None => Design::empty(),
    };
    if a.rho == Some(0) || a.eta == Some(0) {
        return Err(usage("step sizes must be at least 1"));
    }
    Ok(RunParams { rho: a.rho, eta: a.eta, rules, time_limit, detect_cycles: a.detect_cycles, fixed })
}

fn solve(a: SolveArgs) -> anyhow::Result<()> {
    let alg: Algorithm = a.alg.parse()?;
    let inst = load_instance(&a.instance)?;
    let params = run_params(&inst, &a.params)?;
    let started = Instant::now();
    let outcome = match run_algorithm(&inst, alg, &params) {
        Ok(o) => o,
        Err(Error::IterationCap { best: Some(best), rounds, best_objective, gap }) => {
            // keep the incumbent before failing
            let t_hat = inst.all_trips();
            let evaluation = eval_design(&inst, &best, &t_hat)?;
            let mut trace = HeuristicTrace::new(alg.name());
            trace.truncated = true;
            trace.push("main", 0, &t_hat, &best, &evaluation, started.elapsed());
            let partial = HeuristicOutcome { design: *best.clone(), t_hat, evaluation, trace };
            write_bundle(&a.out, &inst, &partial)?;
            return Err(Error::IterationCap { best: Some(best), rounds, best_objective, gap }.into());
        }
        Err(e) => return Err(e.into()),
    };
    write_bundle(&a.out, &inst, &outcome)?;
    let e = &outcome.evaluation;
    println!("algorithm   {alg}");
    println!("objective   {:.6}", e.objective);
    println!("open arcs   {}", outcome.design.len());
    println!("adopters    {}", e.adopters.len());
    println!("r_false     {:.3}%", e.r_false);
    println!("a_false     {:.3}%", e.a_false);
    println!("wall time   {:.3}s", started.elapsed().as_secs_f64());
    println!("output      {}", a.out.display());
    Ok(())
}

fn evaluate(a: EvaluateArgs) -> anyhow::Result<()> {
    let inst = load_instance(&a.instance)?;
    let design = load_design(&inst, &a.design)?;
    let t_hat: TripSet = match &a.trip_set {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        None => inst.all_trips(),
    };
    let e = eval_design(&inst, &design, &t_hat)?;
    let text = serde_json::to_string_pretty(&e.report(&design, &t_hat))? + "\n";
    match &a.out {
        Some(p) => {
            std::fs::write(p, &text).map_err(|source| Error::Io { path: p.display().to_string(), source })?;
            println!("objective {:.6}  r_false {:.3}%  a_false {:.3}%", e.objective, e.r_false, e.a_false);
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run_compare(a: CompareArgs) -> anyhow::Result<()> {
    let algs = a.algs.iter().map(|s| s.parse::<Algorithm>()).collect::<Result<Vec<_>, _>>()?;
    if algs.is_empty() {
        bail!(usage("no algorithms given"));
    }
    let mut instances = Vec::new();
    for p in &a.instances {
        let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| p.display().to_string());
        instances.push((name, load_instance(p)?));
    }
    let params = run_params(&instances[0].1, &a.params)?;
    let rows = compare(&instances, &algs, &params)?;
    let text = compare_csv(&rows);
    std::fs::write(&a.out, &text).map_err(|source| Error::Io { path: a.out.display().to_string(), source })?;
    for r in &rows {
        let obj = r.metrics.as_ref().map_or("-".to_string(), |m| format!("{:.4}", m.objective));
        let gap = r.gap_pct.map_or("-".to_string(), |g| format!("{g:.3}%"));
        println!("{:<16} {:<8} {:>14} {:>9}  {}", r.instance, r.algorithm, obj, gap, r.status);
    }
    println!("wrote {}", a.out.display());
    Ok(())
}
