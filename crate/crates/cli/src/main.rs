//! `zonekit` command-line front end.
//!
//! Exit codes: 0 success, 1 domain failure (violations, bad shape or
//! dimensions, empty scene), 2 I/O, parse or usage failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use log::{debug, info};
use serde_json::json;

use zonekit::denoise::{denoise, DenoiseConfig};
use zonekit::forge::{boundary_stub_scene, generate_boundary, Shape, ShapeSpec};
use zonekit::grpo::{evaluate_group, GrpoConfig, SampleGroup};
use zonekit::render::render_svg;
use zonekit::report::{corpus_report, score_text};
use zonekit::reward::{composite_reward, RewardConfig, RewardInput};
use zonekit::scene::{load_scene, serialize, validate, Scene, DEFAULT_ROOM_HEIGHT};

#[derive(Parser)]
#[command(name = "zonekit", version, about = "Zone-graph scene layout toolkit")]
struct Cli {
    /// Repeat for more log output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RewardArgs {
    /// Reward config JSON (lambda1, lambda2, lambda3, fmt_reward, ordered_zone_pairs).
    #[arg(long, env = "ZONEKIT_CONFIG")]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check structural invariants; prints `CODE path message` per violation.
    Validate { input: PathBuf },
    /// Print the reward breakdown and physical-validity metrics as JSON.
    Score {
        input: PathBuf,
        #[command(flatten)]
        reward: RewardArgs,
    },
    /// Repair asset poses; writes the scene and a `.trace.jsonl` beside it.
    Denoise {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        denoise_config: Option<PathBuf>,
        #[command(flatten)]
        reward: RewardArgs,
    },
    /// Emit a boundary-only scene stub.
    GenBoundary {
        #[arg(long)]
        shape: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated `name=value` overrides, e.g. `width=5,depth=4`.
        #[arg(long, value_delimiter = ',', value_parser = parse_dim)]
        dims: Vec<(String, f64)>,
        #[arg(long, default_value_t = DEFAULT_ROOM_HEIGHT)]
        height: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corpus report over files matching the glob patterns.
    Report {
        #[arg(required = true)]
        patterns: Vec<String>,
        #[arg(long)]
        out_csv: Option<PathBuf>,
        /// Full report including per-scene rows.
        #[arg(long)]
        out_json: Option<PathBuf>,
        /// Worker threads; defaults to the number of logical cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Top-down SVG floor plan.
    Render {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Advantages and objective for sample groups, one JSON group per line.
    Grpo {
        input: PathBuf,
        #[arg(long)]
        clip_eps: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
    },
}

fn parse_dim(kv: &str) -> Result<(String, f64), String> {
    let (k, v) = kv
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {kv:?}"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

type CmdResult = Result<u8, Failure>;

fn env_fail(error: anyhow::Error) -> Failure {
    Failure { code: 2, error }
}

fn domain_fail(error: anyhow::Error) -> Failure {
    Failure { code: 1, error }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(env_fail)
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))
            .map_err(env_fail)?;
    }
    fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(env_fail)
}

fn load(path: &Path) -> Result<Scene, Failure> {
    let text = read(path)?;
    load_scene(&text).map_err(|e| env_fail(anyhow!("{}: {} {e}", path.display(), e.code())))
}

fn reward_config(args: &RewardArgs) -> Result<RewardConfig, Failure> {
    match &args.config {
        Some(p) => RewardConfig::load(p).map_err(|e| env_fail(e.into())),
        None => Ok(RewardConfig::default()),
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("plain json"));
}

fn cmd_validate(input: &Path) -> CmdResult {
    let scene = load(input)?;
    let report = validate(&scene);
    for v in &report.violations {
        println!("{} {} {}", v.code, v.path, v.message);
    }
    for w in &report.warnings {
        eprintln!("warning: {} {} {}", w.code, w.path, w.message);
    }
    Ok(if report.ok { 0 } else { 1 })
}

fn cmd_score(input: &Path, reward: &RewardArgs) -> CmdResult {
    let cfg = reward_config(reward)?;
    let text = read(input)?;
    let b = composite_reward(RewardInput::Text(&text), &cfg);
    let row = score_text(&input.display().to_string(), &text);
    let m = row.metrics;
    print_json(&json!({
        "r_fmt": b.r_fmt,
        "r_bound": b.r_bound,
        "r_zone": b.r_zone,
        "r_col": b.r_col,
        "total": b.total,
        "oob": m.map(|m| m.oob_volume),
        "col": m.map(|m| m.collision_volume),
        "cnt": m.map(|m| m.asset_count),
        "parsed": row.parsed,
    }));
    Ok(0)
}

fn trace_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.trace.jsonl"))
}

fn cmd_denoise(
    input: &Path,
    out: &Path,
    seed: Option<u64>,
    iters: Option<usize>,
    denoise_config: Option<&Path>,
    reward: &RewardArgs,
) -> CmdResult {
    let rcfg = reward_config(reward)?;
    let mut dcfg = match denoise_config {
        Some(p) => DenoiseConfig::load(p).map_err(|e| env_fail(e.into()))?,
        None => DenoiseConfig::default(),
    };
    if let Some(s) = seed {
        dcfg.seed = s;
    }
    if let Some(n) = iters {
        dcfg.max_iters = n;
    }
    let scene = load(input)?;
    let (fixed, trace) = denoise(&scene, &rcfg, &dcfg).map_err(|e| domain_fail(e.into()))?;
    info!(
        "{} iterations, {} accepted",
        trace.iterations,
        trace.steps.len()
    );
    let tpath = trace_path(out);
    write(out, &serialize(&fixed))?;
    write(&tpath, &trace.to_jsonl())?;
    print_json(&json!({
        "out": out.display().to_string(),
        "trace": tpath.display().to_string(),
        "iterations": trace.iterations,
        "accepted": trace.steps.len(),
        "drift_flags": trace.drift_flags.len(),
        "final": trace.final_breakdown,
    }));
    Ok(0)
}

fn cmd_gen_boundary(
    shape: &str,
    seed: u64,
    dims: &[(String, f64)],
    height: f64,
    out: Option<&Path>,
) -> CmdResult {
    let shape = Shape::from_name(shape).map_err(|e| domain_fail(e.into()))?;
    let mut spec = ShapeSpec::new(shape).seed(seed);
    for (k, v) in dims {
        spec = spec.dim(k, *v);
    }
    if height.is_nan() || height <= 0.0 {
        return Err(domain_fail(anyhow!("height must be positive")));
    }
    let poly = generate_boundary(&spec).map_err(|e| domain_fail(e.into()))?;
    let text = serialize(&boundary_stub_scene(&poly, shape.as_str(), height));
    match out {
        Some(p) => write(p, &text)?,
        None => println!("{text}"),
    }
    Ok(0)
}

fn expand(patterns: &[String]) -> Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for pat in patterns {
        let paths = glob::glob(pat)
            .with_context(|| format!("bad pattern {pat:?}"))
            .map_err(env_fail)?;
        for p in paths {
            let p = p.context("listing files").map_err(env_fail)?;
            if p.is_file() {
                files.push(p);
            }
        }
    }
    files.sort();
    files.dedup();
    Ok(files)
}

fn cmd_report(
    patterns: &[String],
    out_csv: Option<&Path>,
    out_json: Option<&Path>,
    jobs: Option<usize>,
) -> CmdResult {
    let files = expand(patterns)?;
    debug!("{} input files", files.len());
    let inputs = files
        .iter()
        .map(|p| Ok((p.display().to_string(), read(p)?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("starting workers").map_err(env_fail)?;
    let report = pool
        .install(|| corpus_report(&inputs))
        .map_err(|e| domain_fail(e.into()))?;
    if let Some(p) = out_csv {
        write(p, &report.to_csv().map_err(|e| env_fail(e.into()))?)?;
    }
    if let Some(p) = out_json {
        write(
            p,
            &serde_json::to_string_pretty(&report).expect("plain json"),
        )?;
    }
    println!("{}", report.summary_json());
    Ok(0)
}

fn cmd_render(input: &Path, out: &Path) -> CmdResult {
    let scene = load(input)?;
    write(out, &render_svg(&scene))?;
    Ok(0)
}

fn cmd_grpo(input: &Path, clip_eps: Option<f64>, beta: Option<f64>) -> CmdResult {
    let mut cfg = GrpoConfig::default();
    if let Some(e) = clip_eps {
        cfg.clip_eps = e;
    }
    if let Some(b) = beta {
        cfg.beta = b;
    }
    cfg.check().map_err(|e| domain_fail(e.into()))?;
    let text = read(input)?;
    let mut out = Vec::new();
    for (i, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let group: SampleGroup = serde_json::from_str(line)
            .with_context(|| format!("line {}", i + 1))
            .map_err(env_fail)?;
        let eval = evaluate_group(&group, &cfg)
            .with_context(|| format!("line {}", i + 1))
            .map_err(domain_fail)?;
        out.push(eval);
    }
    print_json(&json!({ "config": cfg, "groups": out }));
    Ok(0)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Validate { input } => cmd_validate(&input),
        Command::Score { input, reward } => cmd_score(&input, &reward),
        Command::Denoise {
            input,
            out,
            seed,
            iters,
            denoise_config,
            reward,
        } => cmd_denoise(
            &input,
            &out,
            seed,
            iters,
            denoise_config.as_deref(),
            &reward,
        ),
        Command::GenBoundary {
            shape,
            seed,
            dims,
            height,
            out,
        } => cmd_gen_boundary(&shape, seed, &dims, height, out.as_deref()),
        Command::Report {
            patterns,
            out_csv,
            out_json,
            jobs,
        } => cmd_report(&patterns, out_csv.as_deref(), out_json.as_deref(), jobs),
        Command::Render { input, out } => cmd_render(&input, &out),
        Command::Grpo {
            input,
            clip_eps,
            beta,
        } => cmd_grpo(&input, clip_eps, beta),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
