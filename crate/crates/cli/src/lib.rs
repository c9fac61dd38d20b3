//! Command-line front end. [`run`] parses arguments, dispatches and returns
//! the process exit code: 0 on success, 1 when `verify` finds a failure, 2 on
//! argument errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use osctab::continuum;
use osctab::moments::{self, MomentTable};
use osctab::rational::{to_exact_string, to_f64};
use osctab::stats::{self, Campaign, ObservableSpec};
use osctab::tableaux;
use osctab::verify;
use osctab::walk::{self, WalkConfig, WeightModel};
use osctab::{Partition, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "osctab", version, about = "Oscillating tableaux and their area random walk")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw one tableau uniformly at random
    Sample {
        /// Comma-separated parts; empty for the empty partition
        #[arg(long, allow_hyphen_values = true)]
        shape: String,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List every tableau of a shape and length
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        shape: String,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = tableaux::DEFAULT_ENUMERATION_BOUND)]
        bound: usize,
    },
    /// Number of tableaux of a shape and length
    Count {
        #[arg(long, allow_hyphen_values = true)]
        shape: String,
        #[arg(long)]
        length: usize,
    },
    /// Simulate one walk path
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        y0: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// standard, power:K or q:Q
        #[arg(long, default_value = "standard")]
        weights: String,
    },
    /// Exact marginal distribution of the walk at every step
    Distribution {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        y0: usize,
    },
    /// Exact moment table with the closed forms alongside
    Moments {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        y0: usize,
        #[arg(long, default_value_t = 2)]
        order: u32,
    },
    /// Exact covariance of two heights
    Covariance {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        y0: usize,
        #[arg(long)]
        x1: usize,
        #[arg(long)]
        x2: usize,
    },
    /// Exact mean and variance of the volume
    Volume {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        y0: usize,
    },
    /// Limit kernel, matrix determinant and inverse on a grid
    Limit {
        /// Comma-separated points in (0, 1)
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 0.0)]
        y0: f64,
    },
    /// Run the oracle suite
    Verify {
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// Run a Monte Carlo campaign described by a key = value file
    Campaign {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
}

enum Failure {
    Usage(String),
    Verification,
    Closed,
}

impl From<osctab::Error> for Failure {
    fn from(e: osctab::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        match e.kind() {
            std::io::ErrorKind::BrokenPipe => Failure::Closed,
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Runs the command line `args` (without the program name), writing results
/// to `out` and diagnostics to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once("osctab".into()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) | Err(Failure::Closed) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Verification) => {
            let _ = writeln!(err, "verification failed");
            1
        }
    }
}

fn shape(s: &str) -> Result<Partition, Failure> {
    Ok(s.parse::<Partition>()?)
}

fn exact(r: &Rational) -> Value {
    json!({ "exact": to_exact_string(r), "approx": to_f64(r) })
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Outcome {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("values serialize"))?;
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    let format = cli.format;
    match cli.command {
        Command::Sample { shape: s, length, seed } => {
            let t = tableaux::sample_uniform(&shape(&s)?, length, seed)?;
            match format {
                Format::Json => emit_json(out, &serde_json::to_value(&t).expect("tableau serializes")),
                Format::Csv => {
                    writeln!(out, "step,shape")?;
                    for (i, p) in t.steps().iter().enumerate() {
                        writeln!(out, "{i},\"{}\"", parts(p))?;
                    }
                    Ok(())
                }
            }
        }
        Command::Enumerate { shape: s, length, bound } => {
            let all = tableaux::enumerate_all_bounded(&shape(&s)?, length, bound)?;
            match format {
                Format::Json => emit_json(out, &serde_json::to_value(&all).expect("tableaux serialize")),
                Format::Csv => {
                    writeln!(out, "index,steps")?;
                    for (i, t) in all.iter().enumerate() {
                        let steps: Vec<String> = t.steps().iter().map(|p| p.to_string()).collect();
                        writeln!(out, "{i},\"{}\"", steps.join(" "))?;
                    }
                    Ok(())
                }
            }
        }
        Command::Count { shape: s, length } => {
            writeln!(out, "{}", tableaux::count_formula(&shape(&s)?, length))?;
            Ok(())
        }
        Command::Simulate { n, y0, seed, weights } => {
            let weights: WeightModel = weights.parse()?;
            let cfg = WalkConfig::new(n, y0, weights)?;
            let path = walk::simulate(&cfg, seed);
            match format {
                Format::Json => emit_json(
                    out,
                    &json!({
                        "n": n,
                        "y0": y0,
                        "seed": seed,
                        "weights": weights.to_string(),
                        "heights": path.heights(),
                        "volume": walk::volume(&path),
                    }),
                ),
                Format::Csv => {
                    writeln!(out, "X,H")?;
                    for (x, h) in path.heights().iter().enumerate() {
                        writeln!(out, "{x},{h}")?;
                    }
                    Ok(())
                }
            }
        }
        Command::Distribution { n, y0 } => {
            let slices = walk::evolve_distribution(&WalkConfig::standard(n, y0)?)?;
            match format {
                Format::Json => emit_json(out, &serde_json::to_value(&slices).expect("slices serialize")),
                Format::Csv => {
                    writeln!(out, "X,Y,probability")?;
                    for s in &slices {
                        for (y, p) in &s.probs {
                            writeln!(out, "{},{y},{}", s.x, to_exact_string(p))?;
                        }
                    }
                    Ok(())
                }
            }
        }
        Command::Moments { n, y0, order } => moments_table(out, format, n, y0, order),
        Command::Covariance { n, y0, x1, x2 } => {
            let c = moments::covariance(n, y0, x1, x2)?;
            match format {
                Format::Json => emit_json(out, &json!({ "n": n, "y0": y0, "x1": x1, "x2": x2, "covariance": exact(&c) })),
                Format::Csv => {
                    writeln!(out, "n,y0,x1,x2,covariance,approx")?;
                    writeln!(out, "{n},{y0},{x1},{x2},{},{}", to_exact_string(&c), to_f64(&c))?;
                    Ok(())
                }
            }
        }
        Command::Volume { n, y0 } => {
            let mean = moments::volume_mean(n, y0)?;
            let var = if n >= 4 { Some(moments::volume_variance(n, y0)?) } else { None };
            match format {
                Format::Json => emit_json(
                    out,
                    &json!({ "n": n, "y0": y0, "mean": exact(&mean), "variance": var.as_ref().map(exact) }),
                ),
                Format::Csv => {
                    writeln!(out, "n,y0,mean,variance")?;
                    let v = var.as_ref().map(to_exact_string).unwrap_or_default();
                    writeln!(out, "{n},{y0},{},{v}", to_exact_string(&mean))?;
                    Ok(())
                }
            }
        }
        Command::Limit { grid, y0 } => limit(out, format, &grid, y0),
        Command::Verify { max_n } => {
            let outcomes = verify::run_all(max_n);
            for o in &outcomes {
                writeln!(out, "{o}")?;
            }
            if outcomes.iter().all(|o| o.passed) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Campaign { config, workers } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
            let mut c = parse_campaign(&text)?;
            if let Some(w) = workers {
                c.workers = w.max(1);
            }
            let report = stats::run_campaign(&c)?;
            match format {
                Format::Json => writeln!(out, "{}", report.to_json())?,
                Format::Csv => write!(out, "{}", report.to_csv())?,
            }
            Ok(())
        }
    }
}

fn parts(p: &Partition) -> String {
    p.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn moments_table(out: &mut dyn Write, format: Format, n: usize, y0: usize, order: u32) -> Outcome {
    let table = MomentTable::compute(n, y0, order)?;
    let closed = |x: usize, k: u32| -> Option<Rational> {
        match k {
            1 if n >= 2 => moments::closed_form_mean(n, y0, x).ok(),
            2 if n >= 4 => moments::closed_form_second_moment(n, y0, x).ok(),
            _ => None,
        }
    };
    let mut rows = Vec::new();
    for x in 0..=n {
        for k in 1..=order {
            let value = table.get(x, k).expect("within table").clone();
            rows.push((x, k, value, closed(x, k)));
        }
    }
    match format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(x, k, v, c)| {
                    json!({
                        "X": x,
                        "n": k,
                        "value": to_exact_string(v),
                        "closed_form": c.as_ref().map(to_exact_string),
                        "agrees": c.as_ref().map(|c| c == v),
                    })
                })
                .collect();
            emit_json(out, &json!({ "N": n, "y0": y0, "rows": rows }))
        }
        Format::Csv => {
            writeln!(out, "X,n,value,closed_form,agrees")?;
            for (x, k, v, c) in &rows {
                let (cf, ag) = match c {
                    Some(c) => (to_exact_string(c), (c == v).to_string()),
                    None => (String::new(), String::new()),
                };
                writeln!(out, "{x},{k},{},{cf},{ag}", to_exact_string(v))?;
            }
            Ok(())
        }
    }
}

fn limit(out: &mut dyn Write, format: Format, grid: &str, y0: f64) -> Outcome {
    let points = grid
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| Failure::Usage(format!("grid point {s:?}: {e}"))))
        .collect::<Result<Vec<f64>, _>>()?;
    let a = continuum::covariance_matrix_analysis(&points)?;
    if format == Format::Csv {
        write!(out, "{}", continuum::kernel_csv(&points))?;
        return Ok(());
    }
    let rows = |m: &osctab::continuum::Matrix| -> Vec<Vec<f64>> {
        m.row_iter().map(|r| r.iter().copied().collect()).collect()
    };
    emit_json(
        out,
        &json!({
            "points": points,
            "mean_curve": points.iter().map(|&x| continuum::mean_curve(x, y0)).collect::<Vec<_>>(),
            "fluctuation_variance": points.iter().map(|&x| continuum::fluctuation_variance(x, y0)).collect::<Vec<_>>(),
            "kernel": rows(a.grid.matrix()),
            "determinant": a.determinant,
            "direct_determinant": a.direct_determinant,
            "determinant_relative_error": a.determinant_relative_error(),
            "inverse": rows(&a.inverse),
            "identity_error": a.identity_error(),
        }),
    )
}

/// Reads `key = value` lines with keys `n`, `y0`, `samples`, `seed`,
/// `observables` and `bins`. Blank lines and `#` comments are skipped.
pub fn parse_campaign(text: &str) -> Result<Campaign, String> {
    let (mut n, mut y0, mut samples, mut seed, mut bins) = (None, 0usize, None, 0u64, stats::DEFAULT_BINS);
    let mut observables = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |e: &dyn std::fmt::Display| format!("line {}: {key}: {e}", i + 1);
        match key {
            "n" => n = Some(value.parse::<usize>().map_err(|e| bad(&e))?),
            "y0" => y0 = value.parse().map_err(|e| bad(&e))?,
            "samples" => samples = Some(value.parse::<usize>().map_err(|e| bad(&e))?),
            "seed" => seed = value.parse().map_err(|e| bad(&e))?,
            "bins" => bins = value.parse().map_err(|e| bad(&e))?,
            "observables" => {
                observables = value
                    .split(',')
                    .map(|o| o.trim().parse::<ObservableSpec>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| bad(&e))?
            }
            _ => return Err(format!("line {}: unknown key {key:?}", i + 1)),
        }
    }
    let n = n.ok_or("missing key n")?;
    let samples = samples.ok_or("missing key samples")?;
    if observables.is_empty() {
        return Err("missing key observables".into());
    }
    if bins == 0 {
        return Err("bins must be positive".into());
    }
    let cfg = WalkConfig::standard(n, y0).map_err(|e| e.to_string())?;
    let mut c = Campaign::new(cfg, samples, seed, observables);
    c.bins = bins;
    Ok(c)
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}
