//! Command implementations for the `ldpc-parsim` binary.
//!
//! Every command is deterministic for fixed flags and seeds (threads-mode
//! timings aside). Exit codes: 0 on success, 1 on runtime or input-file
//! errors, 2 on invalid arguments or infeasible parameters.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{llr_init, modulate, transmit, transmit_with, ChannelConfig, LlrVector};
use crate::code::{generate_regular, load_alist, save_alist, CodeError, Codeword, ParityCheckMatrix};
use crate::decoder::{decode, Arithmetic, DecodeResult, DecoderConfig};
use crate::parsim::{
    calibrate, run_parallel_threads, simulate_parallel, simulate_sequential, time_sequential, Calibration, ExecMode,
    ParsimError, SimConfig, SimReport, REFERENCE_SPEEDUPS, DEFAULT_REPETITIONS,
};
use crate::partition::{make_partition, PartitionError};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "LDPC_PARSIM_THREADS";

/// Processor counts swept by default (master included).
pub const DEFAULT_PROCESSORS: [usize; 7] = [1, 3, 4, 5, 7, 8, 10];

pub const DEFAULT_CODE_SEED: u64 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: Box<CliError> },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Parsim(#[from] ParsimError),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Code(CodeError::InfeasibleParameters(_)) => 2,
            CliError::Parsim(ParsimError::Config(_)) => 2,
            _ => 1,
        }
    }
}

impl From<crate::decoder::DecodeError> for CliError {
    fn from(e: crate::decoder::DecodeError) -> Self {
        CliError::Parsim(e.into())
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn with_path<T>(path: &Path, r: Result<T, impl Into<CliError>>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Input {
        path: path.to_owned(),
        source: Box::new(e.into()),
    })
}

#[derive(Debug, Parser)]
#[command(name = "ldpc-parsim", version, about = "Reduced min-sum LDPC decoding on a modeled master/slave MPSoC")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Throughput and speedup per processor count.
    Scale(ScaleArgs),
    /// Decode a single word.
    Decode(DecodeArgs),
    /// Monte-Carlo bit error rate of the all-zero codeword.
    Ber(BerArgs),
    /// Generate a regular parity-check matrix as alist.
    Gen(GenArgs),
    /// Fit communication costs to the reference speedup curve.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Costmodel,
    Threads,
}

#[derive(Debug, Clone, Args)]
pub struct MatrixArgs {
    /// alist file; without it a (3,6)-regular code of length 504 is generated.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Seed of the generated default code.
    #[arg(long, default_value_t = DEFAULT_CODE_SEED)]
    pub code_seed: u64,
}

impl MatrixArgs {
    pub fn load(&self) -> Result<ParityCheckMatrix, CliError> {
        match &self.matrix {
            Some(path) => with_path(path, load_alist(&read_file(path)?)),
            None => Ok(generate_regular(504, 3, 6, self.code_seed)?),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DecoderArgs {
    #[arg(long, default_value_t = 30)]
    pub max_iter: usize,
    /// Fixed-point arithmetic as TOTAL.FRAC bits, e.g. 8.4.
    #[arg(long)]
    pub fixed: Option<String>,
}

impl DecoderArgs {
    fn config(&self) -> Result<DecoderConfig, CliError> {
        let arithmetic = match &self.fixed {
            None => Arithmetic::Float64,
            Some(q) => {
                let (t, f) = q
                    .split_once('.')
                    .and_then(|(t, f)| Some((t.parse().ok()?, f.parse().ok()?)))
                    .ok_or_else(|| CliError::Usage(format!("--fixed expects TOTAL.FRAC, got {q:?}")))?;
                Arithmetic::Fixed { total_bits: t, frac_bits: f }
            }
        };
        let cfg = DecoderConfig {
            max_iter: self.max_iter,
            arithmetic,
            ..Default::default()
        };
        cfg.arith().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScaleArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    #[command(flatten)]
    pub decoder: DecoderArgs,
    /// Comma-separated processor counts, master included.
    #[arg(long, value_delimiter = ',', default_value = "1,3,4,5,7,8,10")]
    pub processors: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Costmodel)]
    pub mode: Mode,
    /// Eb/N0 of the decoded word, in dB.
    #[arg(long, default_value_t = 3.0)]
    pub ebno: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Force max-iter iterations per decode.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub worst_case: bool,
    /// Decodes timed per scenario in threads mode.
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    pub reps: usize,
    /// TOML file with cost-model and placement overrides.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    #[command(flatten)]
    pub decoder: DecoderArgs,
    /// Prior LLRs, one decimal value per line.
    #[arg(long, conflicts_with = "ebno")]
    pub llr: Option<PathBuf>,
    /// Transmit the all-zero codeword at this Eb/N0 instead of reading LLRs.
    #[arg(long)]
    pub ebno: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub no_early_exit: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BerArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    #[command(flatten)]
    pub decoder: DecoderArgs,
    /// Comma-separated Eb/N0 points in dB.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3", allow_negative_numbers = true)]
    pub ebno: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub min_bits: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub wc: usize,
    #[arg(long)]
    pub wr: usize,
    #[arg(long, default_value_t = DEFAULT_CODE_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// TOML file whose compute costs and clock are kept.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<SimConfig, CliError> {
    match path {
        Some(p) => with_path(p, SimConfig::from_toml(&read_file(p)?)),
        None => Ok(SimConfig::default()),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Scale(a) => {
            let h = a.matrix.load()?;
            let spec = ScenarioSpec {
                processors: a.processors.clone(),
                ebno_db: a.ebno,
                seed: a.seed,
                mode: match a.mode {
                    Mode::Costmodel => ExecMode::CostModel,
                    Mode::Threads => ExecMode::Threads,
                },
                worst_case: a.worst_case,
                decoder: a.decoder.config()?,
                reps: a.reps,
                thread_cap: thread_cap_from_env()?,
                sim: load_config(a.config.as_deref())?,
            };
            let report = run_scale(&h, &spec)?;
            let text = match a.format {
                Format::Csv => report.to_csv()?,
                Format::Json => to_json(&report)?,
            };
            emit(a.out.as_deref(), &text)
        }
        Command::Decode(a) => {
            let h = a.matrix.load()?;
            let mut cfg = a.decoder.config()?;
            cfg.early_exit = !a.no_early_exit;
            let prior = match (&a.llr, a.ebno) {
                (Some(path), _) => with_path(path, parse_llrs(&read_file(path)?))?,
                (None, Some(ebno)) => zero_word_priors(&h, ebno, a.seed),
                (None, None) => return Err(CliError::Usage("decode needs --llr or --ebno".into())),
            };
            let summary = run_decode(&h, &prior, &cfg)?;
            emit(a.out.as_deref(), &to_json(&summary)?)
        }
        Command::Ber(a) => {
            let h = a.matrix.load()?;
            let rows = run_ber(&h, &a.ebno, a.min_bits, a.seed, &a.decoder.config()?)?;
            let text = match a.format {
                Format::Csv => ber_to_csv(&rows)?,
                Format::Json => to_json(&rows)?,
            };
            emit(a.out.as_deref(), &text)
        }
        Command::Gen(a) => {
            let h = generate_regular(a.n, a.wc, a.wr, a.seed)?;
            emit(a.out.as_deref(), &save_alist(&h))
        }
        Command::Calibrate(a) => {
            let h = a.matrix.load()?;
            let base = load_config(a.config.as_deref())?.cost_model;
            let cal = calibrate(&base, &h, &REFERENCE_SPEEDUPS, a.tolerance)?;
            emit(a.out.as_deref(), &calibration_toml(&cal)?)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn thread_cap_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Channel priors for the all-zero codeword at `ebno_db`.
pub fn zero_word_priors(h: &ParityCheckMatrix, ebno_db: f64, seed: u64) -> LlrVector {
    let ch = ChannelConfig::new(ebno_db, h.info().rate, seed);
    llr_init(&transmit(&modulate(&Codeword::zeros(h.n())), &ch), &ch)
}

/// One LLR per line; blank lines are ignored.
pub fn parse_llrs(text: &str) -> Result<LlrVector, CliError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let v: f64 = l
                .trim()
                .parse()
                .map_err(|_| CliError::Runtime(format!("line {}: not a number: {:?}", i + 1, l.trim())))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(CliError::Runtime(format!("line {}: LLR must be finite", i + 1)))
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map(LlrVector)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeSummary {
    pub n: usize,
    pub converged: bool,
    pub iterations_used: usize,
    pub bits_hex: String,
}

pub fn run_decode(h: &ParityCheckMatrix, prior: &LlrVector, cfg: &DecoderConfig) -> Result<DecodeSummary, CliError> {
    let r: DecodeResult = decode(h, prior, cfg)?;
    Ok(DecodeSummary {
        n: h.n(),
        converged: r.converged,
        iterations_used: r.iterations_used,
        bits_hex: r.bits.to_hex(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub processors: Vec<usize>,
    pub ebno_db: f64,
    pub seed: u64,
    pub mode: ExecMode,
    pub worst_case: bool,
    pub decoder: DecoderConfig,
    pub reps: usize,
    pub thread_cap: Option<usize>,
    pub sim: SimConfig,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            processors: DEFAULT_PROCESSORS.to_vec(),
            ebno_db: 3.0,
            seed: 1,
            mode: ExecMode::CostModel,
            worst_case: true,
            decoder: DecoderConfig::default(),
            reps: DEFAULT_REPETITIONS,
            thread_cap: None,
            sim: SimConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleRow {
    pub scenario: usize,
    pub processors: usize,
    /// Throughput of this scenario, kbps.
    pub throughput_kbps: Option<f64>,
    /// Sequential baseline throughput, kbps.
    pub sequential_kbps: f64,
    /// `None` for the single-processor row and for skipped rows.
    pub speedup: Option<f64>,
    pub iterations: Option<usize>,
    /// `None` when the scenario ran; otherwise why it was skipped.
    pub skipped: Option<String>,
    pub report: Option<SimReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleReport {
    pub mode: ExecMode,
    pub n: usize,
    pub m: usize,
    pub rows: Vec<ScaleRow>,
}

const SCALE_HEADER: [&str; 7] = ["scenario", "nS", "Par", "Seq", "speedup", "iterations", "status"];

impl ScaleReport {
    /// CSV with columns `scenario,nS,Par,Seq,speedup,iterations,status`;
    /// `nS` is the processor count and `Par`/`Seq` are kbps. The baseline
    /// row prints its speedup as `-`.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Runtime(e.to_string());
        w.write_record(SCALE_HEADER).map_err(err)?;
        for r in &self.rows {
            let opt = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
            let speedup = match (r.speedup, &r.skipped) {
                (Some(s), _) => format!("{s:.6}"),
                (None, None) => "-".into(),
                (None, Some(_)) => String::new(),
            };
            let status = r.skipped.as_ref().map_or("ok".to_string(), |s| format!("skipped: {s}"));
            w.write_record([
                r.scenario.to_string(),
                r.processors.to_string(),
                opt(r.throughput_kbps),
                format!("{:.6}", r.sequential_kbps),
                speedup,
                r.iterations.map(|i| i.to_string()).unwrap_or_default(),
                status,
            ])
            .map_err(err)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?)
            .map_err(|e| CliError::Runtime(e.to_string()))
    }

    /// Parses rows written by [`to_csv`](Self::to_csv). Reports are not
    /// carried by the CSV form.
    pub fn rows_from_csv(text: &str) -> Result<Vec<ScaleRow>, CliError> {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let bad = |what: &str| CliError::Runtime(format!("bad scale CSV: {what}"));
        let headers = rdr.headers().map_err(|e| bad(&e.to_string()))?;
        if headers.iter().ne(SCALE_HEADER) {
            return Err(bad("unexpected header"));
        }
        rdr.records()
            .map(|rec| {
                let rec = rec.map_err(|e| bad(&e.to_string()))?;
                let num = |i: usize| -> Result<Option<f64>, CliError> {
                    match &rec[i] {
                        "" | "-" => Ok(None),
                        s => s.parse().map(Some).map_err(|_| bad(s)),
                    }
                };
                let int = |i: usize| -> Result<Option<usize>, CliError> {
                    match &rec[i] {
                        "" => Ok(None),
                        s => s.parse().map(Some).map_err(|_| bad(s)),
                    }
                };
                Ok(ScaleRow {
                    scenario: int(0)?.ok_or_else(|| bad("scenario"))?,
                    processors: int(1)?.ok_or_else(|| bad("nS"))?,
                    throughput_kbps: num(2)?,
                    sequential_kbps: num(3)?.ok_or_else(|| bad("Seq"))?,
                    speedup: num(4)?,
                    iterations: int(5)?,
                    skipped: rec[6].strip_prefix("skipped: ").map(str::to_string),
                    report: None,
                })
            })
            .collect()
    }
}

/// Runs every scenario of `spec` on `h`. Processor counts whose slave count
/// does not divide the check count, or that exceed the thread cap, are
/// reported as skipped.
pub fn run_scale(h: &ParityCheckMatrix, spec: &ScenarioSpec) -> Result<ScaleReport, CliError> {
    if spec.processors.is_empty() || spec.processors.contains(&0) {
        return Err(CliError::Usage("processor counts must be >= 1".into()));
    }
    let cfg = if spec.worst_case {
        spec.decoder.worst_case()
    } else {
        spec.decoder
    };
    let cm = &spec.sim.cost_model;
    let prior = zero_word_priors(h, spec.ebno_db, spec.seed);

    let (baseline, base_report) = match spec.mode {
        ExecMode::CostModel => simulate_sequential(h, &prior, &cfg, cm)?,
        ExecMode::Threads => time_sequential(h, &prior, &cfg, spec.reps)?,
    };
    let seq_kbps = base_report.throughput_kbps;

    let mut rows = Vec::with_capacity(spec.processors.len());
    for (i, &procs) in spec.processors.iter().enumerate() {
        let mut row = ScaleRow {
            scenario: i + 1,
            processors: procs,
            throughput_kbps: None,
            sequential_kbps: seq_kbps,
            speedup: None,
            iterations: None,
            skipped: None,
            report: None,
        };
        if procs == 1 {
            row.throughput_kbps = Some(seq_kbps);
            row.iterations = Some(base_report.iterations);
            row.report = Some(base_report.clone());
            rows.push(row);
            continue;
        }
        let slaves = procs - 1;
        let partition = match make_partition(h.m(), slaves) {
            Ok(p) => p,
            Err(e @ PartitionError::NotDivisible { .. }) => {
                row.skipped = Some(e.to_string());
                rows.push(row);
                continue;
            }
            Err(e) => return Err(ParsimError::from(e).into()),
        };
        let (result, mut report) = match spec.mode {
            ExecMode::CostModel => {
                let placement = spec.sim.placement(procs)?;
                simulate_parallel(h, &prior, &cfg, &partition, cm, &placement)?
            }
            ExecMode::Threads => {
                if let Some(cap) = spec.thread_cap.filter(|&cap| slaves > cap) {
                    row.skipped = Some(format!("{slaves} workers exceed {THREADS_ENV}={cap}"));
                    rows.push(row);
                    continue;
                }
                run_parallel_threads(h, &prior, &cfg, &partition, spec.reps)?
            }
        };
        if result != baseline {
            return Err(CliError::Runtime(format!("partitioned decode with {slaves} slaves diverged from sequential")));
        }
        let speedup = report.speedup.unwrap_or(base_report.seconds / report.seconds);
        report.speedup = Some(speedup);
        row.throughput_kbps = Some(report.throughput_kbps);
        row.speedup = Some(speedup);
        row.iterations = Some(report.iterations);
        row.report = Some(report);
        rows.push(row);
    }
    Ok(ScaleReport {
        mode: spec.mode,
        n: h.n(),
        m: h.m(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerRow {
    pub ebno_db: f64,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
    pub avg_iters: f64,
}

/// Minimum accepted `min_bits`.
pub const MIN_BER_BITS: u64 = 10_000;

/// Transmits the all-zero codeword until at least `min_bits` bits have been
/// decoded at each Eb/N0 point. Point `i` draws its noise from a generator
/// seeded with `seed + i`.
pub fn run_ber(
    h: &ParityCheckMatrix,
    ebno_db: &[f64],
    min_bits: u64,
    seed: u64,
    cfg: &DecoderConfig,
) -> Result<Vec<BerRow>, CliError> {
    if min_bits < MIN_BER_BITS {
        return Err(CliError::Usage(format!("--min-bits must be >= {MIN_BER_BITS}")));
    }
    let rate = h.info().rate;
    let s = modulate(&Codeword::zeros(h.n()));
    ebno_db
        .iter()
        .enumerate()
        .map(|(i, &ebno)| {
            let ch = ChannelConfig::new(ebno, rate, seed.wrapping_add(i as u64));
            let mut rng = ChaCha8Rng::seed_from_u64(ch.seed);
            let (mut bits, mut errors, mut iters, mut frames) = (0u64, 0u64, 0u64, 0u64);
            while bits < min_bits {
                let prior = llr_init(&transmit_with(&s, &ch, &mut rng), &ch);
                let r = decode(h, &prior, cfg)?;
                bits += h.n() as u64;
                errors += r.bits.weight() as u64;
                iters += r.iterations_used as u64;
                frames += 1;
            }
            Ok(BerRow {
                ebno_db: ebno,
                bits,
                errors,
                ber: errors as f64 / bits as f64,
                avg_iters: iters as f64 / frames as f64,
            })
        })
        .collect()
}

pub fn ber_to_csv(rows: &[BerRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    String::from_utf8(w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?)
        .map_err(|e| CliError::Runtime(e.to_string()))
}

pub fn ber_from_csv(text: &str) -> Result<Vec<BerRow>, CliError> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Runtime(e.to_string()))
}

/// The fitted model as a `[cost_model]` table loadable with `--config`,
/// preceded by the fit quality as comments.
pub fn calibration_toml(cal: &Calibration) -> Result<String, CliError> {
    let mut out = String::new();
    for (p, s) in &cal.modeled {
        writeln!(out, "# {p} processors: speedup {s:.4}").unwrap();
    }
    writeln!(out, "# max |error| {:.4}, rms {:.4}", cal.max_abs_error, cal.rms_error).unwrap();
    if !cal.at_boundary.is_empty() {
        writeln!(out, "# at search boundary: {}", cal.at_boundary.join(", ")).unwrap();
    }
    let cfg = SimConfig {
        cost_model: cal.model,
        ..Default::default()
    };
    out.push_str(&toml::to_string(&cfg).map_err(|e| CliError::Runtime(e.to_string()))?);
    Ok(out)
}
