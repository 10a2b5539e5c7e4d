//! `szego`: Legendre tables, boundary classification, kernel evaluation,
//! verification sweeps and plot data for quartic tube domains.

mod commands;
mod config;
mod svg;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, Output};
use config::{ConfigError, Format, PlotKind, PointInput, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "szego", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

/// Overrides applied on top of `--config`.
#[derive(Args, Debug)]
struct Global {
    /// JSON file with the run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    p: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Seed for the random sweeps
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    rel_tol: Option<f64>,
    /// Exponent below which integrands are truncated
    #[arg(long, global = true, allow_negative_numbers = true)]
    cutoff: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate lambda(eta), b*(eta) and the convex hull of b
    Legendre {
        #[arg(long, allow_negative_numbers = true)]
        eta_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        eta_max: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        step: Option<f64>,
        /// Omit the hull column
        #[arg(long)]
        no_hull: bool,
    },
    /// Classify boundary pairs (h = k = 0) over a grid or a point list
    Classify {
        /// A pair "x,r"; repeatable, replaces the grid
        #[arg(long, allow_hyphen_values = true)]
        point: Vec<String>,
        #[arg(long, allow_negative_numbers = true)]
        grid_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        grid_max: Option<f64>,
        #[arg(long)]
        grid_step: Option<f64>,
    },
    /// Evaluate the kernel or one of its derivatives
    Eval {
        /// A pair "x,y,t,h,r,s,u,k"; repeatable
        #[arg(long, allow_hyphen_values = true)]
        point: Vec<String>,
        /// Derivative orders "i1,j1,i2,j2"
        #[arg(long)]
        derivative: Option<String>,
    },
    /// Run named verification suites; exits 1 if any fails
    Verify {
        /// Comma-separated suite names
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        #[arg(long)]
        samples: Option<usize>,
        /// Required ratio growth in the counterexample suite
        #[arg(long)]
        min_growth: Option<f64>,
    },
    /// Emit plot data as CSV, optionally with an SVG rendering
    Plotdata {
        #[arg(value_enum)]
        kind: Option<PlotKind>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Grid points per axis (heatmap) or along the slice
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        r: Option<f64>,
        /// Comma-separated heights for the probe
        #[arg(long, value_delimiter = ',')]
        deltas: Vec<f64>,
    },
}

fn numbers<const N: usize, T: std::str::FromStr>(field: &str, s: &str) -> Result<[T; N], ConfigError> {
    let parts: Vec<T> = s
        .split(',')
        .map(|v| v.trim().parse::<T>())
        .collect::<Result<_, _>>()
        .map_err(|_| ConfigError::new(field, format!("cannot parse {s:?}")))?;
    parts
        .try_into()
        .map_err(|_| ConfigError::new(field, format!("expected {N} comma-separated values in {s:?}")))
}

fn build_config(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let g = &cli.global;
    let mut cfg = match &g.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(p) = g.p {
        cfg.curve.p = p;
    }
    if let Some(q) = g.q {
        cfg.curve.q = q;
    }
    if let Some(seed) = g.seed {
        cfg.verify.options.seed = seed;
    }
    if let Some(out) = &g.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(f) = g.format {
        cfg.output.format = Some(f);
    }
    if let Some(t) = g.rel_tol {
        cfg.numeric.rel_tol = t;
    }
    if let Some(c) = g.cutoff {
        cfg.numeric.exponent_cutoff = c;
    }

    match &cli.command {
        Command::Legendre {
            eta_min,
            eta_max,
            step,
            no_hull,
        } => {
            let l = &mut cfg.legendre;
            l.eta_min = eta_min.unwrap_or(l.eta_min);
            l.eta_max = eta_max.unwrap_or(l.eta_max);
            l.step = step.unwrap_or(l.step);
            l.hull &= !no_hull;
        }
        Command::Classify {
            point,
            grid_min,
            grid_max,
            grid_step,
        } => {
            let c = &mut cfg.classify;
            if !point.is_empty() {
                c.points = point
                    .iter()
                    .map(|s| numbers("classify.points", s))
                    .collect::<Result<_, _>>()?;
            }
            c.grid.min = grid_min.unwrap_or(c.grid.min);
            c.grid.max = grid_max.unwrap_or(c.grid.max);
            c.grid.step = grid_step.unwrap_or(c.grid.step);
        }
        Command::Eval { point, derivative } => {
            if !point.is_empty() {
                cfg.eval.points = point
                    .iter()
                    .map(|s| {
                        let [x, y, t, h, r, s, u, k] = numbers("eval.points", s)?;
                        Ok(PointInput { x, y, t, h, r, s, u, k })
                    })
                    .collect::<Result<_, ConfigError>>()?;
            }
            if let Some(d) = derivative {
                cfg.eval.derivative = numbers("eval.derivative", d)?;
            }
        }
        Command::Verify {
            suites,
            samples,
            min_growth,
        } => {
            let v = &mut cfg.verify;
            if !suites.is_empty() {
                v.suites = suites.clone();
            }
            v.options.samples = samples.unwrap_or(v.options.samples);
            v.options.counterexample_min_growth = min_growth.unwrap_or(v.options.counterexample_min_growth);
        }
        Command::Plotdata {
            kind,
            svg,
            points,
            x,
            r,
            deltas,
        } => {
            let p = &mut cfg.plotdata;
            p.kind = kind.unwrap_or(p.kind);
            if svg.is_some() {
                p.svg = svg.clone();
            }
            if let Some(n) = *points {
                p.heatmap.points = n;
                p.slice.points = n;
            }
            p.probe.x = x.unwrap_or(p.probe.x);
            p.probe.r = r.unwrap_or(p.probe.r);
            if !deltas.is_empty() {
                p.probe.deltas = deltas.clone();
            }
        }
    }
    Ok(cfg)
}

fn emit(output: &Output, format: Format, out: &mut dyn Write) -> io::Result<()> {
    match (output, format) {
        (Output::Table(t), Format::Csv) => t.write_csv(out),
        (Output::Table(t), Format::Json) => writeln!(out, "{}", serde_json::to_string_pretty(&t.to_json())?),
        (Output::Json(v), _) => writeln!(out, "{}", serde_json::to_string_pretty(v)?),
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = build_config(cli)?;
    let outcome = match cli.command {
        Command::Legendre { .. } => commands::legendre(&cfg)?,
        Command::Classify { .. } => commands::classify_cmd(&cfg)?,
        Command::Eval { .. } => commands::eval(&cfg)?,
        Command::Verify { .. } => commands::verify(&cfg, cfg.output.format == Some(Format::Csv))?,
        Command::Plotdata { .. } => commands::plotdata(&cfg)?,
    };
    let format = cfg.output.format.unwrap_or(Format::Csv);
    match &cfg.output.path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            emit(&outcome.output, format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            emit(&outcome.output, format, &mut w)?;
        }
    }
    Ok(outcome.success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Config(e)) => {
            eprintln!("szego: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("szego: {msg}");
            ExitCode::from(1)
        }
    }
}
