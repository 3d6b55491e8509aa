//! Command-line front end: configuration, command dispatch and file output.
//!
//! Every command writes its files into `--out` and returns an exit status:
//! 0 on success, 1 when the model or a check fails, 2 on usage or parse
//! errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::analytic::SolveOptions;
use crate::determinant::{
    closed_form_factor, evaluate_determinant, neutral_direction_multiplier,
    parabolic_spectrum_prediction, slit_set, trace_sequence, DeterminantError, DeterminantSeries,
    FactorKind, FactorSpec, SlitSet,
};
use crate::model::{
    admissible_words, examples, load_model, validate_model, BlockKind, ModelError, SymbolicModel,
};
use crate::operator::{
    assemble_transfer_matrix, build_section, model_operator_spectrum, section_spectrum,
    ContourSpec, ModelOperator, ModelSpectrum, OperatorError,
};
use crate::pinning::{IteratedPinning, PinningError, PinningTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    Validate,
    Determinant,
    Slits,
    Spectrum,
    PinningCheck,
    Factor,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "detzeta",
    version,
    about = "Dynamical determinants of almost hyperbolic surface maps"
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: CommandKind,
    /// Model file (JSON).
    #[arg(long, conflicts_with = "example")]
    pub model: Option<PathBuf>,
    /// Builtin model id.
    #[arg(long)]
    pub example: Option<String>,
    /// Truncation order M; maximal word length for `pinning-check`.
    #[arg(long)]
    pub order: Option<usize>,
    /// Quadrature nodes per contour.
    #[arg(long, default_value_t = 32)]
    pub nodes: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads (0: one per core).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Residual threshold for `pinning-check`.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Validation grid density.
    #[arg(long, default_value_t = 8)]
    pub density: usize,
    /// Product truncation J.
    #[arg(long, default_value_t = 60)]
    pub j: usize,
    /// Product truncation K.
    #[arg(long, default_value_t = 60)]
    pub k: usize,
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<FactorKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_e: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_f: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub period: u32,
    /// Points per slit segment, or per circle for `factor`.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Circle radius for `factor`.
    #[arg(long, default_value_t = 0.99)]
    pub radius: f64,
    /// Eigenvalues listed per operator for `spectrum`.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
}

fn parse_kind(s: &str) -> Result<FactorKind, String> {
    FactorKind::parse(s).ok_or_else(|| format!("unknown factor kind {s:?} (sink, saddle, source)"))
}

impl RunConfig {
    /// Configuration for `command` with all defaults.
    pub fn new(command: CommandKind, out: impl Into<PathBuf>) -> Self {
        Self {
            command,
            model: None,
            example: None,
            order: None,
            nodes: 32,
            out: out.into(),
            jobs: 0,
            tol: 1e-9,
            density: 8,
            j: 60,
            k: 60,
            kind: None,
            lambda_e: None,
            lambda_f: None,
            period: 1,
            points: 100,
            radius: 0.99,
            count: 20,
        }
    }

    pub fn with_example(mut self, id: &str) -> Self {
        self.example = Some(id.into());
        self
    }

    pub fn with_model(mut self, path: impl Into<PathBuf>) -> Self {
        self.model = Some(path.into());
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = Some(order);
        self
    }

    fn order_or(&self, default: usize) -> Result<usize, CliError> {
        match self.order.unwrap_or(default) {
            0 => Err(CliError::Usage("--order must be positive".into())),
            m => Ok(m),
        }
    }

    fn load(&self) -> Result<SymbolicModel, CliError> {
        match (&self.model, &self.example) {
            (Some(path), _) => load_model(path).map_err(CliError::from_load),
            (None, Some(id)) => examples::builtin(id).ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown example {id:?}; known: {}",
                    examples::BUILTIN_IDS.join(", ")
                ))
            }),
            (None, None) => Err(CliError::Usage(
                "one of --model or --example is required".into(),
            )),
        }
    }

    fn has_model(&self) -> bool {
        self.model.is_some() || self.example.is_some()
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot read model: {0}")]
    Parse(ModelError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Pinning(#[from] PinningError),
    #[error(transparent)]
    Determinant(#[from] DeterminantError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn from_load(e: ModelError) -> Self {
        match e {
            ModelError::Parse(_) | ModelError::Io(_) => CliError::Parse(e),
            other => CliError::Model(other),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Io(_) => 2,
            _ => 1,
        }
    }
}

/// Exit status and files written by one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: i32,
    pub files: Vec<PathBuf>,
}

struct Output {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Output {
    fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Usage(format!("output directory {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, text)?;
        self.files.push(path);
        Ok(())
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("serializable output");
        text.push('\n');
        self.write(name, &text)
    }

    fn done(self, status: i32) -> Outcome {
        Outcome {
            status,
            files: self.files,
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))
}

/// Runs the configured command and returns the exit status, reporting
/// errors on stderr.
pub fn run(config: &RunConfig) -> i32 {
    let result = match config.command {
        CommandKind::Validate => cmd_validate(config),
        CommandKind::Determinant => cmd_determinant(config),
        CommandKind::Slits => cmd_slits(config),
        CommandKind::Spectrum => cmd_spectrum(config),
        CommandKind::PinningCheck => cmd_pinning_check(config),
        CommandKind::Factor => cmd_factor(config),
    };
    match result {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            outcome.status
        }
        Err(e) => {
            eprintln!("detzeta: {e}");
            e.exit_code()
        }
    }
}

/// Writes `validation.json`; status 1 with the failing witness when the
/// model violates a hypothesis.
pub fn cmd_validate(config: &RunConfig) -> Result<Outcome, CliError> {
    let model = config.load()?;
    let mut out = Output::new(&config.out)?;
    match validate_model(&model, config.density) {
        Ok(report) => {
            out.json("validation.json", &report)?;
            Ok(out.done(0))
        }
        Err(e) => {
            let mut doc = json!({ "model": model.name(), "ok": false, "error": e.to_string() });
            if let ModelError::Geometry {
                edge,
                condition,
                witness,
                margin,
            } = &e
            {
                doc["edge"] = json!(edge);
                doc["condition"] = json!(condition);
                doc["witness"] = json!([witness.0.re, witness.0.im, witness.1.re, witness.1.im]);
                doc["margin"] = json!(margin);
            }
            out.json("validation.json", &doc)?;
            eprintln!("detzeta: {e}");
            Ok(out.done(1))
        }
    }
}

/// Writes `traces.csv` (m, d_m), `coefficients.csv` (n, c_n) and
/// `summary.json`.
pub fn cmd_determinant(config: &RunConfig) -> Result<Outcome, CliError> {
    let model = config.load()?;
    let order = config.order_or(20)?;
    validate_model(&model, config.density)?;
    let traces = trace_sequence(&model, order, &SolveOptions::default(), config.jobs)?;
    let series = DeterminantSeries::from_traces(traces);
    let mut out = Output::new(&config.out)?;
    out.write(
        "traces.csv",
        &csv(
            "m,d_m",
            series
                .traces
                .iter()
                .enumerate()
                .map(|(i, d)| format!("{},{}", i + 1, num(*d))),
        ),
    )?;
    out.write(
        "coefficients.csv",
        &csv(
            "n,c_n",
            series
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{i},{}", num(*c))),
        ),
    )?;
    let zero = match series.smallest_zero() {
        Ok(z) => {
            let tail = match evaluate_determinant(&series, z) {
                Ok((_, bound)) => json!({ "converging": true, "bound": bound }),
                Err(DeterminantError::TailNotConverging { ratio }) => {
                    json!({ "converging": false, "ratio": ratio })
                }
                Err(e) => return Err(e.into()),
            };
            json!({ "re": z.re, "im": z.im, "modulus": z.norm(), "tail": tail })
        }
        Err(DeterminantError::NoZero) => serde_json::Value::Null,
        Err(e) => return Err(e.into()),
    };
    out.json(
        "summary.json",
        &json!({
            "model": model.name(),
            "order": order,
            "c_1": series.coeffs.get(1),
            "smallest_zero": zero,
        }),
    )?;
    Ok(out.done(0))
}

#[derive(Serialize)]
struct SlitDescriptor {
    symbol: Option<u32>,
    lambda_e: f64,
    lambda_f: f64,
    #[serde(flatten)]
    set: SlitSet,
    segments: Vec<[f64; 3]>,
}

fn describe(
    symbol: Option<u32>,
    lambda_e: f64,
    lambda_f: f64,
    period: u32,
) -> Result<SlitDescriptor, CliError> {
    let set = slit_set(lambda_e, lambda_f, period)?;
    Ok(SlitDescriptor {
        symbol,
        lambda_e,
        lambda_f,
        set,
        segments: set
            .segments()
            .into_iter()
            .map(|(a, r0, r1)| [a, r0, r1])
            .collect(),
    })
}

/// Writes `slits.json` and `slit_points.csv`. Multipliers come from
/// `--lambda-e`/`--lambda-f`, or from the parabolic fixed points of the
/// model.
pub fn cmd_slits(config: &RunConfig) -> Result<Outcome, CliError> {
    let descriptors = match (config.lambda_e, config.lambda_f) {
        (Some(e), Some(f)) => vec![describe(None, e, f, config.period)?],
        (None, None) if config.has_model() => {
            let model = config.load()?;
            let mut v = Vec::new();
            for (k, _) in model.parabolic_symbols() {
                let (kind, lambda) = neutral_direction_multiplier(&model, k)?;
                let (e, f) = match kind {
                    BlockKind::ParabolicA => (lambda, 1.0),
                    _ => (1.0, lambda.recip()),
                };
                v.push(describe(Some(model.id(k)), e, f, 1)?);
            }
            v
        }
        _ => {
            return Err(CliError::Usage(
                "give both --lambda-e and --lambda-f, or a model".into(),
            ))
        }
    };
    let n = config.points.max(2);
    let mut rows = Vec::new();
    for (i, d) in descriptors.iter().enumerate() {
        for s in &d.segments {
            let [angle, r0, r1] = *s;
            for p in 0..n {
                let r = r0 + (r1 - r0) * p as f64 / (n - 1) as f64;
                let z = Complex64::from_polar(r, angle);
                rows.push(format!("{i},{},{}", num(z.re), num(z.im)));
            }
        }
    }
    let mut out = Output::new(&config.out)?;
    out.json("slits.json", &descriptors)?;
    out.write("slit_points.csv", &csv("slit,x,y", rows))?;
    Ok(out.done(0))
}

const WITNESS_POINTS: usize = 200;
const WITNESS_T_MAX: f64 = 8.0;
const LADDER: usize = 10;

/// Writes `eigenvalues.csv` for every self edge (and the whole transfer
/// matrix of a hyperbolic model), `prediction.json` and `witnesses.csv` for
/// parabolic symbols, and `crosscheck.csv` comparing reciprocal eigenvalues
/// with the zeros of the cycle expansion.
pub fn cmd_spectrum(config: &RunConfig) -> Result<Outcome, CliError> {
    let model = config.load()?;
    let order = config.order_or(12)?;
    let spec = ContourSpec::from_model(&model, config.nodes);
    let pool = pool(config.jobs)?;
    let mut rows = Vec::new();
    let mut single = None;
    let mut push = |name: &str, ev: &[Complex64]| {
        for (i, z) in ev.iter().take(config.count).enumerate() {
            rows.push(format!("{name},{i},{},{}", num(z.re), num(z.im)));
        }
    };
    for k in (0..model.len()).filter(|&k| model.transitions().allowed(k, k)) {
        let section = pool.install(|| build_section(&model, (k, k), &spec))?;
        let id = model.id(k);
        let ev = section_spectrum(&section.matrix)?;
        push(&format!("edge {id}-{id}"), &ev);
        single = Some(ev);
    }
    let mut out = Output::new(&config.out)?;
    if model.parabolic_symbols().is_empty() {
        let ev = match &single {
            // one symbol: the transfer matrix is the self-edge section
            Some(ev) if model.len() == 1 => ev.clone(),
            _ => section_spectrum(&pool.install(|| assemble_transfer_matrix(&model, &spec))?)?,
        };
        push("transfer", &ev);
        let traces = trace_sequence(&model, order, &SolveOptions::default(), config.jobs)?;
        let zeros = DeterminantSeries::from_traces(traces).zeros()?;
        let mut table = Vec::new();
        for (i, e) in ev.iter().filter(|e| e.norm() >= 0.5).enumerate() {
            let r = e.inv();
            let near = zeros
                .iter()
                .copied()
                .min_by(|a, b| (a - r).norm().total_cmp(&(b - r).norm()))
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            table.push(format!(
                "{i},{},{},{},{},{}",
                num(r.re),
                num(r.im),
                num(near.re),
                num(near.im),
                num((near - r).norm())
            ));
        }
        out.write(
            "crosscheck.csv",
            &csv(
                "index,reciprocal_re,reciprocal_im,zero_re,zero_im,distance",
                table,
            ),
        )?;
    } else {
        let prediction = parabolic_spectrum_prediction(&model)?;
        let mut witnesses = Vec::new();
        let grid = ModelOperator::uniform_grid(WITNESS_POINTS, WITNESS_T_MAX);
        for p in &prediction.entries {
            let ModelSpectrum::Interval { witnesses: t, .. } =
                model_operator_spectrum(&ModelOperator::TPlus { grid: grid.clone() }, 0)?
            else {
                unreachable!("T+ has an interval spectrum")
            };
            let ladder =
                match model_operator_spectrum(&ModelOperator::Mu { lambda: p.lambda }, LADDER)? {
                    ModelSpectrum::Points(v) => v,
                    ModelSpectrum::Interval { .. } => unreachable!("M has point spectrum"),
                };
            let mut values: Vec<f64> = ladder
                .iter()
                .flat_map(|l| t.iter().map(move |x| l * x))
                .collect();
            values.sort_by(f64::total_cmp);
            witnesses.extend(
                values
                    .into_iter()
                    .map(|v| format!("{},{}", p.symbol, num(v))),
            );
        }
        out.json("prediction.json", &prediction.entries)?;
        out.write("witnesses.csv", &csv("symbol,value", witnesses))?;
    }
    out.write("eigenvalues.csv", &csv("operator,index,re,im", rows))?;
    Ok(out.done(0))
}

#[derive(Debug, Clone, Serialize)]
struct PinningAudit {
    model: String,
    max_length: usize,
    words: usize,
    samples: usize,
    max_residual: f64,
    max_ratio: f64,
    tol: f64,
    ok: bool,
}

/// `(w1, z2, residual, ratio)` at one sample point.
type AuditRow = (f64, f64, f64, f64);

const AUDIT_SAMPLES: usize = 10;
const AUDIT_SEED: u64 = 0x5eed;

fn real_sample(interval: (f64, f64), t: f64) -> Complex64 {
    let (lo, hi) = interval;
    let pad = 0.01 * (hi - lo);
    Complex64::new(lo + pad + t * (hi - lo - 2.0 * pad), 0.0)
}

/// Residual of the composed pinning identity on every admissible word of
/// length 2 to `--order` at real sample points; writes `pinning_check.csv`
/// and `pinning_summary.json`.
pub fn cmd_pinning_check(config: &RunConfig) -> Result<Outcome, CliError> {
    let model = config.load()?;
    let max_len = config.order_or(6)?.max(2);
    let table = PinningTable::new(&model, &SolveOptions::default())?;
    let words: Vec<Vec<usize>> = (2..=max_len)
        .flat_map(|n| admissible_words(&model, n, true))
        .collect();
    let pool = pool(config.jobs)?;
    let results: Vec<Result<Vec<AuditRow>, PinningError>> = pool.install(|| {
        words
            .par_iter()
            .enumerate()
            .map(|(i, w)| {
                let it = IteratedPinning::new(&table, w)?;
                let mut rng = ChaCha8Rng::seed_from_u64(AUDIT_SEED ^ i as u64);
                let d1 = model.domains(w[0]).d1.real_interval();
                let d2 = model
                    .domains(*w.last().expect("nonempty word"))
                    .d2
                    .real_interval();
                (0..AUDIT_SAMPLES)
                    .map(|_| {
                        let w1 = real_sample(d1, rng.random());
                        let z2 = real_sample(d2, rng.random());
                        let ratio = it.eval(w1, z2)?.2;
                        Ok((w1.re, z2.re, it.identity_residual(w1, z2)?, ratio))
                    })
                    .collect()
            })
            .collect()
    });
    let mut text = String::from("word,sample,w1,z2,residual,ratio\n");
    let (mut max_residual, mut max_ratio) = (0.0f64, 0.0f64);
    for (w, r) in words.iter().zip(results) {
        let ids: Vec<String> = model.word_ids(w).iter().map(u32::to_string).collect();
        for (s, (w1, z2, res, ratio)) in r?.into_iter().enumerate() {
            max_residual = max_residual.max(res);
            max_ratio = max_ratio.max(ratio);
            writeln!(
                text,
                "{},{s},{},{},{},{}",
                ids.join("-"),
                num(w1),
                num(z2),
                num(res),
                num(ratio)
            )
            .expect("string write");
        }
    }
    let ok = max_residual <= config.tol && max_ratio < 1.0;
    let mut out = Output::new(&config.out)?;
    out.write("pinning_check.csv", &text)?;
    out.json(
        "pinning_summary.json",
        &PinningAudit {
            model: model.name().into(),
            max_length: max_len,
            words: words.len(),
            samples: words.len() * AUDIT_SAMPLES,
            max_residual,
            max_ratio,
            tol: config.tol,
            ok,
        },
    )?;
    Ok(out.done(if ok { 0 } else { 1 }))
}

/// Evaluates one product factor on the circle `|z| = --radius`; writes
/// `factor.csv` and `factor.json`.
pub fn cmd_factor(config: &RunConfig) -> Result<Outcome, CliError> {
    let (Some(kind), Some(lambda_e), Some(lambda_f)) =
        (config.kind, config.lambda_e, config.lambda_f)
    else {
        return Err(CliError::Usage(
            "factor needs --kind, --lambda-e and --lambda-f".into(),
        ));
    };
    let spec = FactorSpec {
        kind,
        lambda_e,
        lambda_f,
        period: config.period,
        truncation: (config.j, config.k),
    };
    spec.check()?;
    let n = config.points.max(1);
    let mut rows = Vec::with_capacity(n);
    let mut min_modulus = f64::INFINITY;
    for p in 0..n {
        let z = Complex64::from_polar(
            config.radius,
            2.0 * std::f64::consts::PI * p as f64 / n as f64,
        );
        let v = closed_form_factor(&spec, z)?;
        min_modulus = min_modulus.min(v.norm());
        rows.push(format!(
            "{},{},{},{}",
            num(z.re),
            num(z.im),
            num(v.re),
            num(v.im)
        ));
    }
    let mut out = Output::new(&config.out)?;
    out.write("factor.csv", &csv("re,im,value_re,value_im", rows))?;
    out.json(
        "factor.json",
        &json!({ "spec": spec, "radius": config.radius, "points": n, "min_modulus": min_modulus }),
    )?;
    Ok(out.done(0))
}
