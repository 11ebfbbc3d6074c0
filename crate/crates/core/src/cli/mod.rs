//! Command-line front end.

pub mod spec;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::constants::{
    a_d_const, b_d_const, c_d, h1, h2, l_gamma_d, omega_d, threshold_a0, ThresholdCase,
    ThresholdRequest,
};
use crate::counting::{
    estimate_seeley_constant, jump_points, weyl_leading, write_count_rows, CountingFunction, Side,
};
use crate::error::{Error, Result};
use crate::polya::{
    polya_exact_constant, polya_margins, verify_counting_bound, verify_dirichlet, verify_exact,
    verify_neumann, write_polya_rows, VerificationReport,
};
use crate::reproduce;
use crate::riesz::{
    berezin_margin, laptev_neumann_margin, riesz_mean, riesz_weyl, two_term_riesz_scan,
    write_scan_rows, ScanRow,
};
use crate::spectra::io::{write_csv, SpectrumJson};
use crate::spectra::BoundaryCondition;
use spec::SpectrumSpec;

pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "polya-spectra",
    version,
    about = "Model-domain Laplace spectra and Polya checks"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub output: OutputFormat,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Omit the `generated_at` field so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Use integer arithmetic where the spectrum allows it.
    #[arg(long, global = true)]
    pub exact: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SpecArg {
    /// Spectrum specification as JSON, e.g. '{"sphere2":{}}'.
    #[arg(long)]
    pub spec: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RieszCheck {
    Berezin,
    Laptev,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Form {
    PerEigenvalue,
    Counting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    SquareTriangle,
    SphereThin,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a spectrum below a cutoff.
    Spectrum {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        cutoff: f64,
    },
    /// Evaluate the counting function, or estimate a remainder constant.
    Count {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long = "lambda", allow_negative_numbers = true)]
        lambdas: Vec<f64>,
        /// Also count at this many random lambdas in (0, cutoff], drawn from --seed.
        #[arg(long)]
        samples: Option<usize>,
        /// Spectrum cutoff (default: the largest requested lambda).
        #[arg(long)]
        cutoff: Option<f64>,
        /// Estimate the one-sided remainder constant over --window.
        #[arg(long, value_parser = parse_side)]
        seeley: Option<Side>,
        /// Window `lo,hi` for --seeley (default `0,cutoff`).
        #[arg(long, value_parser = parse_window)]
        window: Option<(f64, f64)>,
    },
    /// Riesz means, Berezin/Laptev margins, and two-term scans.
    Riesz {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long = "lambda", allow_negative_numbers = true)]
        lambdas: Vec<f64>,
        /// Check Berezin or Laptev at every jump below --cutoff.
        #[arg(long, value_enum)]
        check: Option<RieszCheck>,
        /// Run the two-term scan.
        #[arg(long)]
        scan: bool,
        #[arg(long)]
        cutoff: Option<f64>,
    },
    /// Closed-form constants, extremal constants, and thresholds.
    Constants {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Volume for A_d and B_d.
        #[arg(long)]
        volume: Option<f64>,
        /// Threshold case, e.g. dirichlet_thin_d2.
        #[arg(long)]
        threshold: Option<ThresholdCase>,
        #[arg(long)]
        remainder: Option<f64>,
        #[arg(long)]
        onset: Option<f64>,
    },
    /// Polya's inequality for the first k eigenvalues.
    Verify {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        k_max: u64,
        #[arg(long, value_enum, default_value = "per-eigenvalue")]
        form: Form,
        /// Write per-comparison margins as CSV.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Reproduce one of the worked examples.
    Reproduce {
        #[arg(value_enum)]
        example: Example,
        #[arg(long, default_value_t = 1e4)]
        cutoff: f64,
        #[arg(long, default_value_t = 100_000)]
        k_max: u64,
    },
}

fn parse_side(s: &str) -> std::result::Result<Side, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_window(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: f64 = a.trim().parse().map_err(|_| format!("bad number {a:?}"))?;
    let hi: f64 = b.trim().parse().map_err(|_| format!("bad number {b:?}"))?;
    Ok((lo, hi))
}

/// Whether every requested check held.
pub struct Outcome {
    pub success: bool,
}

struct Sink {
    format: OutputFormat,
    out: Option<PathBuf>,
    timestamp: bool,
}

impl Sink {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(File::create(p)?),
            None => Box::new(io::stdout().lock()),
        })
    }

    fn json(&self, value: Value) -> Result<()> {
        let mut value = value;
        if self.timestamp {
            if let Value::Object(m) = &mut value {
                let now = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                m.insert("generated_at".into(), json!(now));
            }
        }
        let mut w = self.writer()?;
        serde_json::to_writer_pretty(&mut w, &value)?;
        writeln!(w)?;
        Ok(())
    }

    fn csv<T: Serialize>(&self, rows: &[T]) -> Result<()> {
        let mut w = csv::Writer::from_writer(self.writer()?);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

/// Parse, configure the thread pool, and run.
pub fn run(cli: Cli) -> Result<Outcome> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be positive".into()));
        }
        // A second initialisation in the same process fails harmlessly.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let sink = Sink {
        format: cli.output,
        out: cli.out.clone(),
        timestamp: !cli.no_timestamp,
    };
    match &cli.command {
        Command::Spectrum { spec, cutoff } => {
            let s = SpectrumSpec::parse(&spec.spec)?;
            let stream = s.build(*cutoff)?;
            match sink.format {
                OutputFormat::Csv => write_csv(&stream, sink.writer()?)?,
                OutputFormat::Json => {
                    let mut v = to_value(&SpectrumJson::from(&stream))?;
                    v["meta"] = meta_json(&s)?;
                    sink.json(v)?
                }
            }
            Ok(Outcome { success: true })
        }
        Command::Count {
            spec,
            lambdas,
            samples,
            cutoff,
            seeley,
            window,
        } => run_count(
            &sink, cli.seed, spec, lambdas, *samples, *cutoff, *seeley, *window,
        ),
        Command::Riesz {
            spec,
            gamma,
            lambdas,
            check,
            scan,
            cutoff,
        } => run_riesz(&sink, spec, *gamma, lambdas, *check, *scan, *cutoff),
        Command::Constants {
            d,
            gamma,
            volume,
            threshold,
            remainder,
            onset,
        } => run_constants(&sink, *d, *gamma, *volume, *threshold, *remainder, *onset),
        Command::Verify {
            spec,
            k_max,
            form,
            dump,
        } => run_verify(&sink, cli.exact, spec, *k_max, *form, dump.as_ref()),
        Command::Reproduce {
            example,
            cutoff,
            k_max,
        } => {
            let b = match example {
                Example::SquareTriangle => reproduce::square_triangle(*cutoff)?,
                Example::SphereThin => reproduce::sphere_thin(*k_max)?,
            };
            match sink.format {
                OutputFormat::Json => sink.json(to_value(&b)?)?,
                OutputFormat::Csv => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        check: &'a str,
                        passed: bool,
                    }
                    let rows: Vec<Row> = b
                        .checks
                        .iter()
                        .map(|c| Row {
                            check: &c.name,
                            passed: c.passed,
                        })
                        .collect();
                    sink.csv(&rows)?
                }
            }
            Ok(Outcome { success: b.passed })
        }
    }
}

fn meta_json(s: &SpectrumSpec) -> Result<Value> {
    let m = s.meta()?;
    Ok(json!({
        "dimension": m.dimension,
        "volume": m.volume,
        "surface_area": m.surface_area,
        "bc": m.bc,
        "exact_volume": m.exact_volume.map(|v| v.to_string()),
    }))
}

#[allow(clippy::too_many_arguments)]
fn run_count(
    sink: &Sink,
    seed: u64,
    spec: &SpecArg,
    lambdas: &[f64],
    samples: Option<usize>,
    cutoff: Option<f64>,
    seeley: Option<Side>,
    window: Option<(f64, f64)>,
) -> Result<Outcome> {
    let s = SpectrumSpec::parse(&spec.spec)?;
    let cutoff = match cutoff {
        Some(c) => c,
        None => lambdas
            .iter()
            .copied()
            .chain(window.map(|w| w.1))
            .fold(f64::NAN, f64::max),
    };
    if !(cutoff > 0.0) {
        return Err(Error::Config(
            "give --cutoff or at least one positive --lambda".into(),
        ));
    }
    let cf = CountingFunction::from_stream(s.build(cutoff)?, s.meta()?);
    let mut points = lambdas.to_vec();
    if let Some(n) = samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        points.extend((0..n).map(|_| cutoff * (1.0 - rng.gen::<f64>())));
    }
    #[derive(Serialize)]
    struct Row {
        lambda: f64,
        count: u64,
        weyl: f64,
    }
    let rows = points
        .iter()
        .map(|&l| {
            Ok(Row {
                lambda: l,
                count: cf.count(l)?,
                weyl: weyl_leading(&cf.meta, l),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let estimate = match seeley {
        Some(side) => Some(estimate_seeley_constant(
            &cf,
            window.unwrap_or((0.0, cutoff)),
            side,
        )?),
        None => None,
    };
    match sink.format {
        OutputFormat::Csv => match &estimate {
            Some(e) if rows.is_empty() => {
                #[derive(Serialize)]
                struct Top {
                    lambda: f64,
                    ratio: f64,
                }
                let top: Vec<Top> = e
                    .top
                    .iter()
                    .map(|&(lambda, ratio)| Top { lambda, ratio })
                    .collect();
                sink.csv(&top)?
            }
            _ => sink.csv(&rows)?,
        },
        OutputFormat::Json => sink.json(json!({
            "cutoff": cutoff,
            "seed": samples.map(|_| seed),
            "counts": rows,
            "seeley": estimate,
        }))?,
    }
    Ok(Outcome { success: true })
}

fn run_riesz(
    sink: &Sink,
    spec: &SpecArg,
    gamma: f64,
    lambdas: &[f64],
    check: Option<RieszCheck>,
    scan: bool,
    cutoff: Option<f64>,
) -> Result<Outcome> {
    let s = SpectrumSpec::parse(&spec.spec)?;
    let meta = s.meta()?;
    let cutoff = cutoff
        .or_else(|| lambdas.iter().copied().reduce(f64::max))
        .ok_or_else(|| Error::Config("give --cutoff or at least one --lambda".into()))?;
    let stream = s.build(cutoff)?;
    if scan {
        let r = two_term_riesz_scan(&stream, &meta, gamma, cutoff)?;
        match sink.format {
            OutputFormat::Csv => write_scan_rows(&r.rows, sink.writer()?)?,
            OutputFormat::Json => sink.json(json!({
                "gamma": r.gamma,
                "bc": r.bc,
                "cutoff": r.cutoff,
                "lambda_star": r.lambda_star,
                "lambda_star_half": r.lambda_star_half,
                "stabilized": r.stabilized,
                "worst_margin": r.worst_margin,
                "worst_location": r.worst_location,
                "points": r.rows.len(),
            }))?,
        }
        return Ok(Outcome { success: true });
    }
    let mut points = lambdas.to_vec();
    if check.is_some() {
        points.extend(
            jump_points(&stream)
                .iter()
                .map(|j| j.lambda)
                .filter(|&l| l > 0.0),
        );
        points.push(cutoff);
    }
    let rows = points
        .iter()
        .map(|&l| {
            let riesz = riesz_mean(&stream, gamma, l)?;
            let bound = riesz_weyl(&meta, gamma, l);
            let margin = match check {
                Some(RieszCheck::Berezin) => berezin_margin(&stream, &meta, gamma, l)?,
                Some(RieszCheck::Laptev) => laptev_neumann_margin(&stream, &meta, gamma, l)?,
                None => bound - riesz,
            };
            Ok(ScanRow {
                lambda: l,
                riesz,
                bound,
                margin,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let holds = rows.iter().all(|r| r.margin >= 0.0);
    match sink.format {
        OutputFormat::Csv => write_scan_rows(&rows, sink.writer()?)?,
        OutputFormat::Json => {
            let worst = rows.iter().min_by(|a, b| a.margin.total_cmp(&b.margin));
            sink.json(json!({
                "gamma": gamma,
                "check": check.map(|c| format!("{c:?}").to_lowercase()),
                "holds": check.map(|_| holds),
                "worst_margin": worst.map(|w| w.margin),
                "worst_location": worst.map(|w| w.lambda),
                "rows": rows,
            }))?
        }
    }
    Ok(Outcome {
        success: check.is_none() || holds,
    })
}

fn run_constants(
    sink: &Sink,
    d: u32,
    gamma: f64,
    volume: Option<f64>,
    threshold: Option<ThresholdCase>,
    remainder: Option<f64>,
    onset: Option<f64>,
) -> Result<Outcome> {
    if d == 0 {
        return Err(Error::Domain("d must be at least 1".into()));
    }
    if !(gamma >= 0.0) {
        return Err(Error::Domain(format!("gamma must be >= 0, got {gamma}")));
    }
    let mut m = Map::new();
    m.insert("d".into(), json!(d));
    m.insert("gamma".into(), json!(gamma));
    m.insert("omega_d".into(), json!(omega_d(d)));
    m.insert("c_d".into(), json!(c_d(d)));
    m.insert("l_gamma_d".into(), json!(l_gamma_d(gamma, d)));
    if d >= 3 {
        let (a, b) = (h1(d)?, h2(d)?);
        m.insert("h1".into(), to_value(&a)?);
        m.insert("h2".into(), to_value(&b)?);
        if let Some(v) = volume {
            m.insert("a_d".into(), json!(a_d_const(d, v)?));
            m.insert("b_d".into(), json!(b_d_const(d, v)?));
        }
    }
    if let Some(case) = threshold {
        let t = threshold_a0(&ThresholdRequest {
            case,
            volume,
            remainder,
            onset,
            dimension: Some(d),
        })?;
        m.insert("threshold".into(), to_value(&t)?);
    }
    match sink.format {
        OutputFormat::Json => sink.json(Value::Object(m))?,
        OutputFormat::Csv => {
            #[derive(Serialize)]
            struct Row {
                name: String,
                value: f64,
            }
            let mut rows = Vec::new();
            for (k, v) in &m {
                match v {
                    Value::Number(n) => rows.push(Row {
                        name: k.clone(),
                        value: n.as_f64().unwrap_or(f64::NAN),
                    }),
                    Value::Object(o) => {
                        if let Some(x) = o.get("value").and_then(Value::as_f64) {
                            rows.push(Row {
                                name: k.clone(),
                                value: x,
                            });
                        }
                    }
                    _ => {}
                }
            }
            sink.csv(&rows)?
        }
    }
    Ok(Outcome { success: true })
}

fn run_verify(
    sink: &Sink,
    exact: bool,
    spec: &SpecArg,
    k_max: u64,
    form: Form,
    dump: Option<&PathBuf>,
) -> Result<Outcome> {
    if k_max == 0 {
        return Err(Error::Config("--k-max must be positive".into()));
    }
    let s = SpectrumSpec::parse(&spec.spec)?;
    let meta = s.meta()?;
    let dirichlet = meta.bc == BoundaryCondition::Dirichlet;
    let need = if dirichlet { k_max } else { k_max + 1 };
    let stream = s.build_with_count(need)?;
    let report: VerificationReport = match form {
        Form::PerEigenvalue => {
            let r = if exact {
                let k = polya_exact_constant(&meta)?;
                verify_exact(&stream, meta.dimension, meta.bc, &k, k_max)?
            } else if dirichlet {
                verify_dirichlet(&stream, &meta, k_max)?
            } else {
                verify_neumann(&stream, &meta, k_max)?
            };
            if let Some(p) = dump {
                write_polya_rows(&polya_margins(&stream, &meta, k_max)?, File::create(p)?)?;
            }
            r
        }
        Form::Counting => {
            let cf = CountingFunction::from_stream(stream.clone(), meta.clone());
            let side = if dirichlet { Side::Upper } else { Side::Lower };
            let hi = stream.cutoff();
            let lo = if dirichlet { 0.0 } else { f64::MIN_POSITIVE };
            let (r, rows) =
                verify_counting_bound(&cf, &|l| weyl_leading(&meta, l), (lo, hi), side)?;
            if let Some(p) = dump {
                write_count_rows(&rows, File::create(p)?)?;
            }
            r
        }
    };
    match sink.format {
        OutputFormat::Json => sink.json(to_value(&report)?)?,
        OutputFormat::Csv => {
            #[derive(Serialize)]
            struct Row {
                mode: String,
                checked: u64,
                verdict: String,
                worst_margin: f64,
                failures: usize,
            }
            sink.csv(&[Row {
                mode: to_value(&report.mode)?
                    .as_str()
                    .unwrap_or_default()
                    .to_string(),
                checked: report.checked,
                verdict: to_value(&report.verdict)?
                    .as_str()
                    .unwrap_or_default()
                    .to_string(),
                worst_margin: report.worst_margin,
                failures: report.failures.len(),
            }])?
        }
    }
    Ok(Outcome {
        success: report.holds(),
    })
}

/// Machine-readable error body for stderr.
pub fn error_json(e: &Error) -> String {
    json!({ "error": e.code(), "message": e.to_string() }).to_string()
}

/// Same schema for command-line parse errors.
pub fn usage_error_json(e: &clap::Error) -> String {
    let message = e.to_string();
    let first = message.lines().next().unwrap_or_default();
    json!({ "error": "usage", "message": first.trim_start_matches("error: ") }).to_string()
}
