use serde_json::{json, Value};
use szego_core::kernel::{classify, divergence_probe, margin, szego_eval_detailed, MAX_DERIVATIVE_ORDER};
use szego_core::legendre::{b_star, b_star_star, lambda_of_eta};
use szego_core::verify::run_suite;
use szego_core::{Error, MultiIndex, PointPair, Suite};

use crate::config::{core_config_error, spaced, stepped, ConfigError, PlotKind, PointInput, RunConfig};
use crate::svg::{heatmap, line_chart, Axes, Scale, Series};
use crate::table::{Cell, Table};

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Runtime(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub enum Output {
    Table(Table),
    Json(Value),
}

pub struct Outcome {
    pub output: Output,
    /// False only when a verification suite failed.
    pub success: bool,
}

impl From<Table> for Outcome {
    fn from(t: Table) -> Self {
        Outcome {
            output: Output::Table(t),
            success: true,
        }
    }
}

fn error_label(e: &Error) -> &'static str {
    match e {
        Error::InvalidCurve { .. } => "InvalidCurve",
        Error::InvalidConfig { .. } => "InvalidConfig",
        Error::InvalidPoint(_) => "InvalidPoint",
        Error::NonCoercive => "NonCoercive",
        Error::NotAdmissible(_) => "NotAdmissible",
        Error::BracketFailure { .. } => "BracketFailure",
        Error::NotMonotone { .. } => "NotMonotone",
        Error::NotInConvergenceRegion { .. } => "NotInConvergenceRegion",
        Error::NotSingularPair { .. } => "NotSingularPair",
        Error::WrongCase { .. } => "WrongCase",
        Error::Inconsistent { .. } => "Inconsistent",
    }
}

pub fn legendre(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let curve = cfg.validate_common()?;
    let opts = &cfg.legendre;
    let etas = stepped("legendre", opts.eta_min, opts.eta_max, opts.step)?;
    let mut cols = vec!["eta", "lambda", "b_star"];
    if opts.hull {
        cols.push("b_star_star_of_half_sum");
    }
    let mut table = Table::new(&cols);
    for eta in etas {
        let mut row = vec![
            eta.into(),
            lambda_of_eta(&curve, eta).into(),
            b_star(&curve, eta).into(),
        ];
        if opts.hull {
            row.push(b_star_star(&curve, eta)?.into());
        }
        table.push(row);
    }
    Ok(table.into())
}

pub fn classify_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let curve = cfg.validate_common()?;
    let opts = &cfg.classify;
    let pairs: Vec<(f64, f64)> = if opts.points.is_empty() {
        let g = opts.grid;
        let axis = stepped("classify.grid", g.min, g.max, g.step)?;
        axis.iter().flat_map(|&x| axis.iter().map(move |&r| (x, r))).collect()
    } else {
        opts.points.iter().map(|p| (p[0], p[1])).collect()
    };
    let mut table = Table::new(&["x", "r", "verdict", "margin"]);
    for (i, (x, r)) in pairs.into_iter().enumerate() {
        if !x.is_finite() || !r.is_finite() {
            return Err(ConfigError::new(format!("classify.points[{i}]"), "coordinates must be finite").into());
        }
        let (label, m) = match classify(&curve, &PointPair::boundary(x, r)) {
            Ok(c) => (c.verdict.label(), c.margin),
            Err(Error::Inconsistent { margin, .. }) => ("Inconsistent", margin),
            Err(e) => return Err(e.into()),
        };
        table.push(vec![x.into(), r.into(), label.into(), m.into()]);
    }
    Ok(table.into())
}

fn multi_index(field: &str, d: [u32; 4]) -> Result<MultiIndex, ConfigError> {
    let index = MultiIndex::new(d[0], d[1], d[2], d[3]);
    if index.order() > MAX_DERIVATIVE_ORDER {
        return Err(ConfigError::new(
            field,
            format!("total order must be at most {MAX_DERIVATIVE_ORDER}"),
        ));
    }
    Ok(index)
}

pub fn eval(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let curve = cfg.validate_common()?;
    let index = multi_index("eval.derivative", cfg.eval.derivative)?;
    let pairs = cfg
        .eval
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            p.to_pair()
                .map_err(|e| ConfigError::new(format!("eval.points[{i}]"), e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["x", "y", "t", "h", "r", "s", "u", "k", "re", "im", "est_error", "error"]);
    for (opts, pair) in cfg.eval.points.iter().zip(pairs) {
        let mut row: Vec<Cell> = opts.values().iter().map(|&v| v.into()).collect();
        // A pair outside the region fails its own row; the batch continues.
        match szego_eval_detailed(&curve, &pair, index, &cfg.numeric) {
            Ok(v) => row.extend([v.value.re.into(), v.value.im.into(), v.abs_error.into(), Cell::Empty]),
            Err(e) => row.extend([Cell::Empty, Cell::Empty, Cell::Empty, error_label(&e).into()]),
        }
        table.push(row);
    }
    Ok(table.into())
}

pub fn verify(cfg: &RunConfig, as_csv: bool) -> Result<Outcome, CliError> {
    let curve = cfg.validate_common()?;
    let opts = &cfg.verify;
    if opts.suites.is_empty() {
        return Err(ConfigError::new("verify.suites", "must name at least one suite").into());
    }
    let suites = opts
        .suites
        .iter()
        .map(|s| s.parse::<Suite>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(core_config_error)?;
    opts.options.validate().map_err(core_config_error)?;

    let mut reports = Vec::new();
    for suite in suites {
        reports.push(run_suite(suite, &curve, &opts.options, &cfg.numeric)?);
    }
    let success = reports.iter().all(|r| r.pass);
    let output = if as_csv {
        let mut table = Table::new(&["suite", "check", "pass", "n_samples", "ratio_min", "ratio_max"]);
        for r in &reports {
            for c in &r.checks {
                table.push(vec![
                    r.suite.as_str().into(),
                    c.name.as_str().into(),
                    Cell::Text(c.report.pass.to_string()),
                    Cell::Int(c.report.n_samples as i64),
                    c.report.ratio_min.into(),
                    c.report.ratio_max.into(),
                ]);
            }
        }
        Output::Table(table)
    } else {
        Output::Json(json!({
            "seed": opts.options.seed,
            "pass": success,
            "suites": reports,
        }))
    };
    Ok(Outcome { output, success })
}

pub fn plotdata(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let curve = cfg.validate_common()?;
    let opts = &cfg.plotdata;
    let (table, svg) = match opts.kind {
        PlotKind::SigmaHeatmap => {
            let g = opts.heatmap;
            let axis = spaced("plotdata.heatmap", g.min, g.max, g.points)?;
            let mut table = Table::new(&["x", "r", "margin"]);
            let mut grid = Vec::with_capacity(axis.len());
            for &x in &axis {
                let mut col = Vec::with_capacity(axis.len());
                for &r in &axis {
                    let m = margin(&curve, &PointPair::boundary(x, r))?;
                    table.push(vec![x.into(), r.into(), m.into()]);
                    col.push(m);
                }
                grid.push(col);
            }
            let axes = Axes {
                title: "hull margin on the boundary",
                x_label: "x",
                y_label: "r",
                x_scale: Scale::Linear,
                y_scale: Scale::Linear,
            };
            (table, heatmap(&axes, &axis, &axis, &grid))
        }
        PlotKind::KernelSlice => {
            let s = opts.slice;
            let xs = spaced("plotdata.slice", s.x_min, s.x_max, s.points)?;
            let mut table = Table::new(&["x", "re", "im", "abs", "est_error", "error"]);
            let (mut re, mut im) = (Vec::new(), Vec::new());
            for x in xs {
                let pair = PointInput { x, ..s.base }
                    .to_pair()
                    .map_err(|e| ConfigError::new("plotdata.slice.base", e))?;
                match szego_eval_detailed(&curve, &pair, MultiIndex::default(), &cfg.numeric) {
                    Ok(v) => {
                        table.push(vec![
                            x.into(),
                            v.value.re.into(),
                            v.value.im.into(),
                            v.value.norm().into(),
                            v.abs_error.into(),
                            Cell::Empty,
                        ]);
                        re.push((x, v.value.re));
                        im.push((x, v.value.im));
                    }
                    Err(e) => {
                        let mut row = vec![x.into()];
                        row.extend([
                            Cell::Empty,
                            Cell::Empty,
                            Cell::Empty,
                            Cell::Empty,
                            error_label(&e).into(),
                        ]);
                        table.push(row);
                    }
                }
            }
            let axes = Axes {
                title: "kernel along x",
                x_label: "x",
                y_label: "S",
                x_scale: Scale::Linear,
                y_scale: Scale::Linear,
            };
            let series = [
                Series {
                    name: "Re S",
                    points: re,
                },
                Series {
                    name: "Im S",
                    points: im,
                },
            ];
            (table, line_chart(&axes, &series))
        }
        PlotKind::Probe => {
            let p = &opts.probe;
            if p.deltas.is_empty() || p.deltas.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
                return Err(ConfigError::new("plotdata.probe.deltas", "needs at least one value, all > 0").into());
            }
            let probe = divergence_probe(&curve, p.x, p.r, &p.deltas, &cfg.numeric).map_err(|e| match e {
                Error::NotSingularPair { .. } => CliError::Config(ConfigError::new("plotdata.probe", e)),
                other => other.into(),
            })?;
            let mut table = Table::new(&["delta", "s_value"]);
            for (&d, &v) in probe.deltas.iter().zip(&probe.s_values) {
                table.push(vec![d.into(), v.into()]);
            }
            let axes = Axes {
                title: "absolute integral as the heights shrink",
                x_label: "delta",
                y_label: "integral",
                x_scale: Scale::Log,
                y_scale: Scale::Log,
            };
            let points = probe
                .deltas
                .iter()
                .cloned()
                .zip(probe.s_values.iter().cloned())
                .collect();
            (table, line_chart(&axes, &[Series { name: "probe", points }]))
        }
    };
    if let Some(path) = &opts.svg {
        std::fs::write(path, svg)?;
    }
    Ok(table.into())
}
