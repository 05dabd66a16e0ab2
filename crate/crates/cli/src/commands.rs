use std::f64::consts::PI;

use ptlg::checks::{run_identity_suite, CheckOptions};
use ptlg::macrodiag::VIOLATION_THRESHOLD;
use ptlg::nosignal::signaling_deviation;
use ptlg::sweep::{figure_data_with, figure_expression, scan};
use ptlg::{Diagnostics, Expression, FigureOptions, Grid, Point, PtParams, ScenarioPreset, SweepConfig};
use serde_json::{json, Value};

use crate::config::{Dynamics, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{json_document, json_number, Cell, Format, Table};

/// Grid points per state angle when `--free-state` is set.
pub const FREE_STATE_STEPS: usize = 17;

/// Deviations at or below this count as no signaling.
pub const SIGNALING_ZERO: f64 = 1e-12;

/// Rendered output of a command plus an optional failure to report after
/// the output has been written.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub failure: Option<CliError>,
}

impl Report {
    fn ok(text: String) -> Self {
        Self { text, failure: None }
    }
}

fn config_json(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg).expect("serializable config")
}

fn render(cfg: &RunConfig, table: &Table, summary: Value) -> CliResult<String> {
    match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => Ok(json_document(config_json(cfg), table.json_rows(), summary)),
    }
}

fn point_json(p: &Point) -> Value {
    json!({
        "t": json_number(p.t),
        "alpha": json_number(p.alpha),
        "theta": json_number(p.theta),
        "phi": json_number(p.phi),
    })
}

const SIGNS: [&str; 2] = ["p", "m"];

fn pair_columns(prefix: &str) -> Vec<String> {
    SIGNS.iter().flat_map(|a| SIGNS.iter().map(move |b| format!("{prefix}_{a}{b}"))).collect()
}

fn pair_cells(table: Option<&[[f64; 2]; 2]>) -> Vec<Cell> {
    match table {
        Some(t) => t.iter().flatten().map(|&x| Cell::Num(x)).collect(),
        None => vec![Cell::Missing; 4],
    }
}

fn figure_columns(fig: u8, expr: Expression) -> Vec<String> {
    let mut columns = vec!["alpha".to_string(), "t".to_string(), expr.name().to_string()];
    match fig {
        2 => columns.extend(["theta".to_string(), "phi".to_string()]),
        3 => {
            columns.extend(pair_columns("D123"));
            columns.extend(pair_columns("D1_2_3"));
            columns.extend(pair_columns("R12_3"));
        }
        4 => {
            columns.extend(pair_columns("D123"));
            columns.extend(["R1_23_p".to_string(), "R1_23_m".to_string()]);
        }
        _ => {}
    }
    columns
}

fn figure_cells(fig: u8, point: &Point, value: Option<f64>, diag: Option<&Diagnostics>) -> Vec<Cell> {
    let mut cells = vec![Cell::Num(point.alpha), Cell::Num(point.t), value.into()];
    let degrees = diag.map(|d| &d.degrees);
    match fig {
        2 => cells.extend([Cell::Num(point.theta), Cell::Num(point.phi)]),
        3 => {
            cells.extend(pair_cells(degrees.map(|d| &d.d_123)));
            cells.extend(pair_cells(degrees.map(|d| &d.d_1_2_3)));
            cells.extend(pair_cells(degrees.map(|d| &d.r_12_3)));
        }
        4 => {
            cells.extend(pair_cells(degrees.map(|d| &d.d_123)));
            match degrees {
                Some(d) => cells.extend(d.r_1_23.map(Cell::Num)),
                None => cells.extend([Cell::Missing, Cell::Missing]),
            }
        }
        _ => {}
    }
    cells
}

pub fn figure(cfg: &RunConfig, fig: u8) -> CliResult<Report> {
    let expr = figure_expression(fig)?;
    let opts = FigureOptions {
        alphas: cfg.alpha.clone(),
        t: cfg.t.grid()?,
        theta: cfg.theta,
        phi: cfg.phi,
        s: cfg.s,
        pre_evolution: cfg.pre_evolution,
    };
    let result = figure_data_with(fig, &opts)?;
    let mut table = Table::new(figure_columns(fig, expr));
    for row in &result.rows {
        let value = row.value.as_ref().ok().copied();
        let cells = figure_cells(fig, &row.point, value, row.diagnostics.as_ref());
        table.push(cells, row.value.as_ref().err().cloned());
    }
    let summary = json!({
        "figure": fig,
        "expression": expr.name(),
        "rows": table.rows.len(),
        "errors": table.error_count(),
        "argmax": result.argmax.map(|(p, v)| json!({ "point": point_json(&p), "value": json_number(v) })),
    });
    Ok(Report::ok(render(cfg, &table, summary)?))
}

fn optimize_template(cfg: &RunConfig, expr: Expression) -> CliResult<ScenarioPreset> {
    let alpha = match cfg.alpha.as_slice() {
        [a] => *a,
        _ => return Err(CliError::Usage("optimize takes exactly one --alpha value".into())),
    };
    let standard = expr == Expression::L13;
    let preset = match cfg.dynamics {
        Dynamics::Unitary => {
            if alpha != 0.0 {
                return Err(CliError::Usage(
                    "unitary dynamics has no alpha; use --alpha 0 or omit it".into(),
                ));
            }
            if standard {
                ScenarioPreset::unitary_standard(0.0)
            } else {
                ScenarioPreset::unitary_variant(0.0, cfg.theta, cfg.phi)
            }
        }
        Dynamics::Pt => {
            let params = PtParams::new(cfg.s, alpha, 0.0)?;
            if standard {
                ScenarioPreset::pt_standard(params)
            } else {
                ScenarioPreset::pt_variant(params, cfg.theta, cfg.phi)
            }
        }
    };
    Ok(match cfg.pre_evolution {
        Some(on) => preset.with_pre_evolution(on),
        None => preset,
    })
}

pub fn optimize(cfg: &RunConfig, expr: Expression) -> CliResult<Report> {
    let template = optimize_template(cfg, expr)?;
    let mut sweep = SweepConfig::new(expr, template, cfg.t.grid()?);
    sweep.refine = true;
    sweep.refine_tolerance = cfg.refine_tolerance;
    if cfg.free_state {
        if expr == Expression::L13 {
            return Err(CliError::Usage("--free-state applies to V1, V2 and V3 only".into()));
        }
        sweep.theta = Grid::new(0.0, PI, FREE_STATE_STEPS)?;
        sweep.phi = Grid::new(0.0, 2.0 * PI, FREE_STATE_STEPS)?;
    }
    let result = scan(&sweep)?;
    let (point, value) =
        result.argmax.ok_or_else(|| CliError::Usage("no grid point produced a finite value".into()))?;
    let diag = Diagnostics::compute(&sweep.preset_at(&point)?)?;
    let record = diag.classify();

    // The standard scenario starts from I/2, so the state angles do not apply.
    let angle = |x: f64| if expr == Expression::L13 { Cell::Missing } else { Cell::Num(x) };
    let mut table = Table::new(["t", "alpha", "theta", "phi", expr.name()]);
    table.push(
        vec![point.t.into(), point.alpha.into(), angle(point.theta), angle(point.phi), value.into()],
        None,
    );
    let mut parameters = point_json(&point);
    if expr == Expression::L13 {
        parameters["theta"] = Value::Null;
        parameters["phi"] = Value::Null;
    }
    let lg: serde_json::Map<String, Value> =
        Expression::ALL.iter().map(|e| (e.name().to_string(), Value::Bool(record.lg(*e)))).collect();
    let summary = json!({
        "expression": expr.name(),
        "parameters": parameters,
        "value": json_number(value),
        "grid_points": result.rows.len(),
        "classifier": {
            "lg_violated": lg,
            "nsit_violated": record.nsit_violated,
            "aot_violated": record.aot_violated,
            "threshold": VIOLATION_THRESHOLD,
        },
        "max_nsit_degree": json_number(diag.degrees.max_nsit()),
        "max_aot_degree": json_number(diag.degrees.max_aot()),
    });
    Ok(Report::ok(json_document(config_json(cfg), table.json_rows(), summary)))
}

pub fn check(cfg: &RunConfig) -> CliResult<Report> {
    let reports =
        run_identity_suite(&CheckOptions { sample_size: cfg.sample_size, inject_fault: cfg.inject_fault })?;
    let mut table = Table::new(["check", "status", "max_residual", "tolerance", "samples", "description"]);
    for r in &reports {
        table.push(
            vec![
                Cell::Text(r.name.into()),
                Cell::Text(if r.passed() { "pass" } else { "FAIL" }.into()),
                Cell::Num(r.max_residual),
                Cell::Num(r.tolerance),
                Cell::Num(r.samples as f64),
                Cell::Text(r.description.into()),
            ],
            None,
        );
    }
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.name.to_string()).collect();
    let summary = json!({ "passed": failed.is_empty(), "failed": failed });
    let text = render(cfg, &table, summary)?;
    let failure = (!failed.is_empty()).then_some(CliError::CheckFailed { names: failed });
    Ok(Report { text, failure })
}

pub fn nosignal(cfg: &RunConfig) -> CliResult<Report> {
    let grid = cfg.t.grid()?;
    if cfg.alpha.is_empty() {
        return Err(CliError::Usage("nosignal needs at least one alpha".into()));
    }
    for &alpha in &cfg.alpha {
        PtParams::new(cfg.s, alpha, 0.0)?;
    }
    let mut table = Table::new(["alpha", "t", "deviation"]);
    let (mut max_dev, mut vanishing) = (0.0f64, 0usize);
    for &alpha in &cfg.alpha {
        for t in grid.values() {
            match PtParams::new(cfg.s, alpha, t).and_then(|p| signaling_deviation(&p)) {
                Ok(dev) => {
                    max_dev = max_dev.max(dev);
                    vanishing += usize::from(dev <= SIGNALING_ZERO);
                    table.push(vec![alpha.into(), t.into(), dev.into()], None);
                }
                Err(e) => table.push(vec![alpha.into(), t.into(), Cell::Missing], Some(e.to_string())),
            }
        }
    }
    let summary = json!({
        "rows": table.rows.len(),
        "errors": table.error_count(),
        "max_deviation": json_number(max_dev),
        "vanishing_rows": vanishing,
        "zero_tolerance": SIGNALING_ZERO,
    });
    Ok(Report::ok(render(cfg, &table, summary)?))
}
