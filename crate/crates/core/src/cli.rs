//! Batch command surface for the `psi-ldgm` binary.
//!
//! Every command writes a first line
//! `# psi-ldgm <version> config=<hash> seed=<seed>` where the hash covers the
//! effective arguments after merging a `--config` file (flat `key=value`
//! lines, flags on the command line win).
//!
//! Exit codes: 0 success, 2 validation error, 3 not invertible / exhausted
//! search, 4 failed `--assert` check.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::cycles::{has_length4_cycle, matrix_girth_ok};
use crate::error::Error;
use crate::gf2_poly::SparsePoly;
use crate::inversion::{
    bench_invert, euclid_report, inverse_weight_bound, recognize_and_invert, weight_distribution, InverseReport,
    Method,
};
use crate::psi::{is_psi_unitary, PsiParams};
use crate::qc_ldgm::{build_code, random_companion_blocks, QcLdgmCode};
use crate::spa_decoder::{build_graph, simulate, ChannelPoint, SimConfig, SimResult, StopRule, DEFAULT_MAX_ITER};
use crate::xi_design::{goodmat, sample_cycle_free, GoodMat};

#[derive(Debug, Parser)]
#[command(name = "psi-ldgm", version, about = "ψ-unitary circulants and QC-LDGM codes", args_override_self = true)]
pub struct Cli {
    /// Flat key=value file; command-line flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Exit with code 4 if the command's sanity check fails.
    #[arg(long, global = true)]
    pub assert: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a Ξ design from explicit k values or draw a cycle-free one.
    Design {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s: usize,
        #[arg(long, value_delimiter = ',', conflicts_with = "random")]
        k: Option<Vec<usize>>,
        #[arg(long)]
        random: bool,
        /// Also require k_(i+1) > 2 k_i when drawing.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 10_000)]
        max_tries: usize,
    },
    /// Invert a polynomial given as `n:(e;...)` or `@file`.
    Invert {
        poly: String,
        #[arg(long, value_enum, default_value_t = InvertMethod::Both)]
        method: InvertMethod,
        #[arg(long)]
        csv: bool,
    },
    /// Report distance estimate, complexity and girth of a code file.
    Code {
        file: PathBuf,
        /// Also run the exact minimum-distance search (K <= 24, or with --dmin-cap).
        #[arg(long)]
        dmin: bool,
        #[arg(long)]
        dmin_cap: Option<usize>,
    },
    /// Write a code file: given last block plus random girth-preserving blocks.
    MakeCode {
        /// Last block as `n:(e;...)`, `@file`, or `identity`.
        #[arg(long)]
        last: String,
        /// Block size; required with `--last identity`.
        #[arg(long)]
        n: Option<usize>,
        /// Weights of the other blocks.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        max_tries: usize,
    },
    /// Monte Carlo BER/FER over a grid of channel points.
    Simulate {
        file: PathBuf,
        #[arg(long, value_enum)]
        channel: Channel,
        /// Crossover probabilities (bsc) or Eb/N0 values in dB (awgn).
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        points: Vec<f64>,
        #[arg(long, default_value_t = 10_000_000)]
        max_frames: u64,
        #[arg(long, default_value_t = 100)]
        min_errors: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long)]
        min_sum: bool,
        #[arg(long)]
        all_zero: bool,
        #[arg(long, default_value = "code")]
        code_id: String,
    },
    /// Time Euclid and fast inversion on shared random Ξ sets.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "128,256,512,1024,2048,4096,8192")]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "3,5,7,9")]
        weights: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Histogram of inverse weights over uniformly drawn Ξ members.
    Weightdist {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InvertMethod {
    Fast,
    Euclid,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Channel {
    Bsc,
    Awgn,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotInvertible { .. } | Error::Exhausted { .. } | Error::LastBlockSingular => 3,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::validation(e.to_string())
    }
}

const GLOBAL_VALUE_FLAGS: [&str; 4] = ["--config", "--seed", "--workers", "--output"];
const SUBCOMMANDS: [&str; 7] = ["design", "invert", "code", "make-code", "simulate", "bench", "weightdist"];

fn flag_value<'a>(args: &'a [String], flag: &str) -> Option<&'a str> {
    let eq = format!("{flag}=");
    args.iter().enumerate().find_map(|(i, a)| {
        if a == flag {
            args.get(i + 1).map(String::as_str)
        } else {
            a.strip_prefix(&eq)
        }
    })
}

fn read_config(path: &str) -> Result<Vec<(String, String)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::validation(format!("config {path}: {e}")))?;
    let mut out = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::validation(format!("config line is not key=value: `{line}`")))?;
        out.push((k.trim().replace('_', "-"), v.trim().to_string()));
    }
    Ok(out)
}

/// Splices config entries in front of the user's own flags so they take precedence.
fn merge_config(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = flag_value(&args, "--config").map(str::to_string) else {
        return Ok(args);
    };
    let entries = read_config(&path)?;
    let mut injected = Vec::new();
    let mut command = None;
    for (k, v) in entries {
        if k == "command" {
            command = Some(v);
            continue;
        }
        match v.as_str() {
            "true" => injected.push(format!("--{k}")),
            "false" => {}
            _ => {
                injected.push(format!("--{k}"));
                injected.push(v);
            }
        }
    }
    let mut pos = None;
    let mut i = 1;
    while i < args.len() {
        if GLOBAL_VALUE_FLAGS.contains(&args[i].as_str()) {
            i += 2;
            continue;
        }
        if SUBCOMMANDS.contains(&args[i].as_str()) {
            pos = Some(i + 1);
            break;
        }
        i += 1;
    }
    let mut merged = args.clone();
    match (pos, command) {
        (Some(p), _) => {
            merged.splice(p..p, injected);
        }
        (None, Some(cmd)) => {
            let mut tail = vec![cmd];
            tail.extend(injected);
            merged.splice(1..1, tail);
        }
        (None, None) => return Err(CliError::validation("no subcommand on the command line or in the config")),
    }
    Ok(merged)
}

/// Hash of the effective arguments, leaving out where the output goes.
fn config_hash(args: &[String]) -> String {
    let mut hasher = Sha256::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--output" || a == "--config" {
            skip = true;
            continue;
        }
        if a.starts_with("--output=") || a.starts_with("--config=") {
            continue;
        }
        hasher.update(a.as_bytes());
        hasher.update([0u8]);
    }
    let digest = hasher.finalize();
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Parses, runs and writes output; returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = args.into_iter().map(|a| a.into().to_string_lossy().into_owned()).collect();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            return e.code;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let header = format!("# psi-ldgm {} config={} seed={}\n", env!("CARGO_PKG_VERSION"), config_hash(&args), cli.seed);
    let result = match cli.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::validation(e.to_string())),
        },
        None => execute(&cli),
    };
    let out = match result {
        Ok(out) => out,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            return e.code;
        }
    };
    let text = format!("{header}{}", out.body);
    let written = match &cli.output {
        Some(path) => fs::write(path, &text).map_err(CliError::from),
        None => stdout.write_all(text.as_bytes()).map_err(CliError::from),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {}", e.message);
        return e.code;
    }
    match out.failed {
        Some(msg) if cli.assert => {
            let _ = writeln!(stderr, "assertion failed: {msg}");
            4
        }
        _ => 0,
    }
}

/// Report body plus the reason a `--assert` run should fail, if any.
struct Output {
    body: String,
    failed: Option<String>,
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let out = match &cli.command {
        Command::Design { m, s, k, random, strict, max_tries } => {
            cmd_design(*m, *s, k.as_deref(), *random, *strict, *max_tries, cli.seed)?
        }
        Command::Invert { poly, method, csv } => cmd_invert(poly, *method, *csv)?,
        Command::Code { file, dmin, dmin_cap } => cmd_code(file, *dmin, *dmin_cap)?,
        Command::MakeCode { last, n, weights, max_tries } => cmd_make_code(last, *n, weights, *max_tries, cli.seed)?,
        Command::Simulate { file, channel, points, max_frames, min_errors, max_iter, min_sum, all_zero, code_id } => {
            let cfg = SimConfig { max_iter: *max_iter, min_sum: *min_sum, all_zero: *all_zero, ..SimConfig::default() };
            let stop = StopRule { max_frames: *max_frames, min_frame_errors: *min_errors };
            cmd_simulate(file, *channel, points, stop, &cfg, code_id, cli.seed)?
        }
        Command::Bench { n_list, weights, trials } => cmd_bench(n_list, weights, *trials, cli.seed)?,
        Command::Weightdist { m, s, samples } => cmd_weightdist(*m, *s, *samples, cli.seed)?,
    };
    Ok(out)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Reads `n:(...)` inline or the first non-comment line of `@file`.
fn read_poly(arg: &str) -> Result<SparsePoly, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::validation(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| CliError::validation("no polynomial found"))?;
    Ok(line.parse()?)
}

fn cmd_design(
    m: u32,
    s: usize,
    k: Option<&[usize]>,
    random: bool,
    strict: bool,
    max_tries: usize,
    seed: u64,
) -> Result<Output, CliError> {
    let g: GoodMat = match (k, random) {
        (Some(k), false) => goodmat(m, s, k)?,
        (None, true) => sample_cycle_free(m, s, &mut ChaCha8Rng::seed_from_u64(seed), max_tries, strict)?,
        _ => return Err(CliError::validation("give exactly one of --k or --random")),
    };
    let cycle_free = !has_length4_cycle(&g.poly);
    let unitary = is_psi_unitary(&g.poly, &PsiParams::new(s, m + 2, 0)?)?;
    let mut body = format!("{}\n", g.poly);
    let _ = writeln!(
        body,
        "# m={m} s={s} k={} weight={} cycle-free={} psi-unitary={} sufficient-conditions={}",
        g.params.k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        g.poly.weight(),
        yes_no(cycle_free),
        yes_no(unitary),
        yes_no(g.sufficient_conditions)
    );
    let failed = (!cycle_free || !unitary).then(|| "design is not cycle-free and ψ-unitary".to_string());
    Ok(Output { body, failed })
}

fn report_line(r: &InverseReport, csv: bool) -> String {
    let w = r.w.as_ref().map_or("-".to_string(), |w| w.to_string());
    let bound = r.bound.map_or("-".to_string(), |b| b.to_string());
    if csv {
        format!("{},{},{},{},{},{},{}\n", r.method, r.a.n(), r.a.weight(), r.weight_inv, bound, w, r.a_inv)
    } else {
        format!("method={} weight={} bound={} w={} inverse={}\n", r.method, r.weight_inv, bound, w, r.a_inv)
    }
}

fn cmd_invert(poly: &str, method: InvertMethod, csv: bool) -> Result<Output, CliError> {
    let a = read_poly(poly)?;
    let mut body = String::new();
    if csv {
        body.push_str("method,n,W,weight_inv,bound,w,inverse\n");
    } else {
        let _ = writeln!(body, "input={a}");
    }
    let mut reports = Vec::new();
    if method != InvertMethod::Euclid {
        match recognize_and_invert(&a) {
            Some(r) => reports.push(r),
            None if method == InvertMethod::Fast => {
                return Err(CliError::validation(format!("{a} is not recognised as a Ξ member; use --method euclid")))
            }
            None => {}
        }
    }
    if method != InvertMethod::Fast {
        reports.push(euclid_report(&a)?);
    }
    for r in &reports {
        body.push_str(&report_line(r, csv));
    }
    let agree = reports.windows(2).all(|p| p[0].a_inv == p[1].a_inv);
    let valid = reports.iter().all(|r| a.mul(&r.a_inv).is_ok_and(|p| p.is_one()));
    let within = reports.iter().all(|r| r.bound.is_none_or(|b| r.weight_inv as u64 <= b));
    if !csv && reports.len() > 1 {
        let _ = writeln!(body, "agree={}", yes_no(agree));
    }
    let failed = (!agree || !valid || !within).then(|| "inverse check failed".to_string());
    Ok(Output { body, failed })
}

fn read_code(file: &PathBuf) -> Result<QcLdgmCode, CliError> {
    let text = fs::read_to_string(file).map_err(|e| CliError::validation(format!("{}: {e}", file.display())))?;
    Ok(QcLdgmCode::from_text(&text)?)
}

fn cmd_code(file: &PathBuf, dmin: bool, dmin_cap: Option<usize>) -> Result<Output, CliError> {
    let code = read_code(file)?;
    let est = code.dmin_estimate();
    let cx = code.complexity();
    let girth = matrix_girth_ok(code.blocks())?;
    let mut body = String::new();
    let _ = writeln!(body, "N={} K={} n={} Nb={}", code.length(), code.dimension(), code.block_size(), code.num_blocks());
    let _ = writeln!(
        body,
        "weights={}",
        code.block_weights().iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
    );
    let _ = writeln!(body, "last_inverse_weight={} method={}", code.last_inverse().weight(), code.inverse_method());
    let _ = writeln!(
        body,
        "d_bar={} P={} A={} W1={} W2={} N1={} N2={}",
        est.d_bar,
        est.p,
        est.a,
        est.w1,
        est.w2.map_or("-".to_string(), |w| w.to_string()),
        est.n1,
        est.n2
    );
    let _ = writeln!(body, "C_enc={} C_dec={}", cx.c_enc, cx.c_dec);
    let _ = writeln!(body, "girth-ok={}", yes_no(girth));
    let mut failed = (!girth).then(|| "Tanner graph has length-4 cycles".to_string());
    if dmin || dmin_cap.is_some() {
        let d = code.brute_force_dmin(dmin_cap)?;
        let _ = writeln!(body, "d_min={} exact={}", d.weight, yes_no(d.exact));
        if d.weight > est.d_bar {
            failed = Some(format!("d_min {} exceeds bound {}", d.weight, est.d_bar));
        }
    }
    Ok(Output { body, failed })
}

fn cmd_make_code(
    last: &str,
    n: Option<usize>,
    weights: &[usize],
    max_tries: usize,
    seed: u64,
) -> Result<Output, CliError> {
    let last = if last == "identity" {
        SparsePoly::one(n.ok_or_else(|| CliError::validation("--last identity needs --n"))?)
    } else {
        let p = read_poly(last)?;
        if n.is_some_and(|n| n != p.n()) {
            return Err(CliError::validation(format!("--n disagrees with last block size {}", p.n())));
        }
        p
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = random_companion_blocks(last.n(), weights, std::slice::from_ref(&last), &mut rng, max_tries)?;
    blocks.push(last);
    let code = build_code(blocks)?;
    Ok(Output { body: code.to_text(), failed: None })
}

fn cmd_simulate(
    file: &PathBuf,
    channel: Channel,
    points: &[f64],
    stop: StopRule,
    cfg: &SimConfig,
    code_id: &str,
    seed: u64,
) -> Result<Output, CliError> {
    let code = read_code(file)?;
    let graph = build_graph(&code);
    let rate = (code.num_blocks() as f64 - 1.0) / code.num_blocks() as f64;
    let mut body = format!(
        "# max_iter={} schedule=flooding check={} llr_clip=38 awgn_map=0->+1 tie=1 info={}\n{}\n",
        cfg.max_iter,
        if cfg.min_sum { "min-sum" } else { "tanh" },
        if cfg.all_zero { "all-zero" } else { "random" },
        SimResult::CSV_HEADER
    );
    let mut violations = 0;
    for &x in points {
        let point = match channel {
            Channel::Bsc => ChannelPoint::Bsc { p: x },
            Channel::Awgn => ChannelPoint::Awgn { ebn0_db: x, rate },
        };
        let r = simulate(&code, &graph, code_id, point, stop, seed, cfg)?;
        violations += r.syndrome_violations;
        let _ = writeln!(body, "{}", r.csv_row());
    }
    let failed = (violations > 0).then(|| format!("{violations} converged frames with nonzero syndrome"));
    Ok(Output { body, failed })
}

fn cmd_bench(n_list: &[usize], weights: &[usize], trials: usize, seed: u64) -> Result<Output, CliError> {
    let table = bench_invert(n_list, weights, trials, seed)?;
    let mut body = format!("# baseline_ns={:.1} (euclid, n=128, W=3)\n", table.baseline_ns);
    body.push_str(&table.to_csv());
    let failed = n_list.iter().max().and_then(|&n| {
        weights.iter().find_map(|&w| {
            let e = table.get(n, w, Method::Euclid)?;
            let f = table.get(n, w, Method::Fast)?;
            (f.mean_time_ns >= e.mean_time_ns).then(|| format!("fast not faster than euclid at n={n}, W={w}"))
        })
    });
    Ok(Output { body, failed })
}

fn cmd_weightdist(m: u32, s: usize, samples: usize, seed: u64) -> Result<Output, CliError> {
    let h = weight_distribution(m, s, samples, seed)?;
    let mut body = format!("# m={m} s={s} samples={samples} sampling=uniform-xi mean={:.4}\n", h.mean());
    body.push_str(&h.to_csv());
    let bound = inverse_weight_bound(m);
    let failed = h
        .counts
        .keys()
        .any(|&w| w as u64 > bound)
        .then(|| format!("inverse weight above bound {bound}"));
    Ok(Output { body, failed })
}

/// Help text, used by the README check.
pub fn help() -> String {
    Cli::command().render_long_help().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["psi-ldgm"];
        full.extend_from_slice(args);
        let code = main_with_args(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn tmp(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("psi-ldgm-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn design_examples() {
        let (code, out, _) = run(&["design", "--m", "1", "--s", "7", "--k", "1,3"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("# psi-ldgm "));
        assert!(lines[0].contains("seed=1"));
        assert_eq!(lines[1], "56:(0;1;3;8;17)");
        assert!(lines[2].contains("cycle-free=yes"));
        let (code, out, _) = run(&["design", "--m", "2", "--s", "11", "--k", "1,3,7"]);
        assert_eq!(code, 0);
        assert!(out.contains("176:(0;1;3;7;12;25;51)") && out.contains("cycle-free=yes"));
        let (code, _, err) = run(&["design", "--m", "1", "--s", "4", "--random"]);
        assert_eq!(code, 3, "{err}");
        let (code, _, _) = run(&["design", "--m", "1", "--s", "7"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn invert_examples() {
        let (code, out, _) = run(&["invert", "56:(0;1;3;8;17)", "--method", "both"]);
        assert_eq!(code, 0);
        assert!(out.contains("method=fast weight=19"));
        assert!(out.contains("method=euclid weight=19"));
        assert!(out.contains("agree=yes"));
        let (code, out, _) = run(&["invert", "8:(0)", "--method", "euclid"]);
        assert_eq!(code, 0);
        assert!(out.contains("inverse=8:(0)"));
        let (code, _, _) = run(&["invert", "4:(0;1)", "--method", "euclid"]);
        assert_eq!(code, 3);
        let (code, _, _) = run(&["invert", "4:(0;9)"]);
        assert_eq!(code, 2);
        let (code, out, _) = run(&["invert", "56:(0;1;3;8;17)", "--csv", "--assert"]);
        assert_eq!(code, 0);
        assert!(out.lines().nth(1).unwrap().starts_with("method,n,W"));
    }

    #[test]
    fn code_round_trip_and_report() {
        let path = tmp("c312.txt");
        let p = path.to_str().unwrap();
        let (code, _, err) = run(&["make-code", "--last", "312:(0;3;9;42;87)", "--weights", "5,5,5", "--output", p]);
        assert_eq!(code, 0, "{err}");
        let (code, out, _) = run(&["code", p, "--assert"]);
        assert_eq!(code, 0);
        assert!(out.contains("N=1248 K=936 n=312 Nb=4"));
        assert!(out.contains("last_inverse_weight=21"));
        assert!(out.contains("d_bar=10 P=6 A=1872"));
        assert!(out.contains("C_dec=5"));
        assert!(out.contains("girth-ok=yes"));

        let dup = tmp("dup.txt");
        fs::write(&dup, "nb=3 n=16\n16:(0;1;5)\n16:(0;1;5)\n16:(0)\n").unwrap();
        let (code, out, _) = run(&["code", dup.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(out.contains("girth-ok=no"));
        let (code, _, _) = run(&["code", dup.to_str().unwrap(), "--assert"]);
        assert_eq!(code, 4);

        let ib = tmp("ib.txt");
        let (code, _, _) = run(&["make-code", "--last", "identity", "--n", "64", "--weights", "4,4,4", "--output", ib.to_str().unwrap()]);
        assert_eq!(code, 0);
        let (_, out, _) = run(&["code", ib.to_str().unwrap()]);
        assert!(out.contains("C_enc=12"));
    }

    #[test]
    fn config_file_and_determinism() {
        let cfg = tmp("design.cfg");
        fs::write(&cfg, "command=design\nm=1\ns=64\nrandom=true\nseed=9\n").unwrap();
        let c = cfg.to_str().unwrap();
        let (code, a, err) = run(&["--config", c]);
        assert_eq!(code, 0, "{err}");
        let (_, b, _) = run(&["--config", c]);
        assert_eq!(a, b);
        assert!(a.contains("seed=9"));
        let (_, overridden, _) = run(&["--config", c, "design", "--seed", "10"]);
        assert!(overridden.contains("seed=10"));
        assert_ne!(a.lines().next(), overridden.lines().next());
    }

    #[test]
    fn small_simulation_and_tables() {
        let path = tmp("c56.txt");
        let p = path.to_str().unwrap();
        run(&["make-code", "--last", "56:(0;1;3;8;17)", "--weights", "3,3", "--output", p]);
        let args = ["simulate", p, "--channel", "bsc", "--points", "0.02,0.04", "--max-frames", "200", "--min-errors", "20", "--max-iter", "20", "--assert"];
        let (code, a, err) = run(&args);
        assert_eq!(code, 0, "{err}");
        assert_eq!(a.lines().filter(|l| l.starts_with("code,bsc,")).count(), 2);
        let mut with_workers = args.to_vec();
        with_workers.extend(["--workers", "2"]);
        let (_, b, _) = run(&with_workers);
        assert_eq!(a.lines().skip(1).collect::<Vec<_>>(), b.lines().skip(1).collect::<Vec<_>>());
        let (code, out, _) = run(&["simulate", p, "--channel", "awgn", "--points", "-1.0", "--max-frames", "10"]);
        assert_eq!(code, 0);
        assert!(out.contains("code,awgn,-1,10,"));

        let (code, out, _) = run(&["weightdist", "--m", "0", "--s", "16", "--samples", "500", "--assert"]);
        assert_eq!(code, 0);
        assert!(out.contains("weight,count,percent"));
        let (code, out, _) = run(&["bench", "--n-list", "128,256", "--weights", "3", "--trials", "5"]);
        assert_eq!(code, 0);
        assert!(out.contains("n,W,method,mean_time_normalized,mean_time_ns"));
        assert!(help().contains("weightdist"));
    }
}
