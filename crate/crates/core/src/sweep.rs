//! Grid scans and derivative-free local maximization of LG expressions over
//! `(t, α, θ, φ)`, plus the fixed configurations behind the four figures.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lgexpr::Expression;
use crate::macrodiag::Diagnostics;
use crate::protocol::{ContextSet, Evolution, InitialState, ScenarioPreset};
use crate::ptdyn::PtParams;

/// Evenly spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let g = Self { min, max, count };
        g.validate("grid")?;
        Ok(g)
    }

    pub fn point(value: f64) -> Self {
        Self { min: value, max: value, count: 1 }
    }

    /// A single point is allowed only when `min == max`.
    pub fn validate(&self, name: &str) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Usage(format!("{name} bounds must be finite")));
        }
        if self.max < self.min {
            return Err(Error::Usage(format!("{name} max {} is below min {}", self.max, self.min)));
        }
        match self.count {
            0 => Err(Error::Usage(format!("{name} needs at least one point"))),
            1 if self.min != self.max => {
                Err(Error::Usage(format!("{name} with distinct bounds needs at least two points")))
            }
            _ => Ok(()),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.max } else { self.min + step * i as f64 })
            .collect()
    }

    pub fn spacing(&self) -> f64 {
        if self.count > 1 {
            (self.max - self.min) / (self.count - 1) as f64
        } else {
            0.0
        }
    }

    fn is_free(&self) -> bool {
        self.max > self.min
    }
}

/// One parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub t: f64,
    pub alpha: f64,
    pub theta: f64,
    pub phi: f64,
}

impl Point {
    fn get(&self, axis: usize) -> f64 {
        [self.t, self.alpha, self.theta, self.phi][axis]
    }

    fn set(&mut self, axis: usize, value: f64) {
        match axis {
            0 => self.t = value,
            1 => self.alpha = value,
            2 => self.theta = value,
            _ => self.phi = value,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub expression: Expression,
    /// Supplies the state family, observable and conventions; the grid
    /// parameters overwrite its `t`, `α`, `θ` and `φ`.
    pub template: ScenarioPreset,
    pub t: Grid,
    pub alpha: Grid,
    pub theta: Grid,
    pub phi: Grid,
    pub refine: bool,
    pub refine_tolerance: f64,
    /// Attach full diagnostics to every row.
    pub diagnostics: bool,
}

pub const DEFAULT_REFINE_TOLERANCE: f64 = 1e-7;

impl SweepConfig {
    pub fn new(expression: Expression, template: ScenarioPreset, t: Grid) -> Self {
        let (alpha, theta, phi) = template_point(&template);
        Self {
            expression,
            template,
            t,
            alpha: Grid::point(alpha),
            theta: Grid::point(theta),
            phi: Grid::point(phi),
            refine: false,
            refine_tolerance: DEFAULT_REFINE_TOLERANCE,
            diagnostics: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.t.validate("t grid")?;
        self.alpha.validate("alpha grid")?;
        self.theta.validate("theta grid")?;
        self.phi.validate("phi grid")?;
        if self.t.min < 0.0 {
            return Err(Error::Usage("t grid must start at t >= 0".into()));
        }
        if self.alpha.min.abs() >= PI / 2.0 || self.alpha.max.abs() >= PI / 2.0 {
            return Err(Error::Usage("alpha grid must stay inside |alpha| < pi/2".into()));
        }
        if self.refine_tolerance.is_nan() || self.refine_tolerance <= 0.0 {
            return Err(Error::Usage("refine tolerance must be positive".into()));
        }
        Ok(())
    }

    fn axes(&self) -> [&Grid; 4] {
        [&self.t, &self.alpha, &self.theta, &self.phi]
    }

    /// Preset for one parameter point.
    pub fn preset_at(&self, point: &Point) -> Result<ScenarioPreset> {
        let mut preset = self.template;
        preset.evolution = match preset.evolution {
            Evolution::Unitary { .. } => Evolution::Unitary { t: point.t },
            Evolution::Pt(p) => Evolution::Pt(PtParams::new(p.s, point.alpha, point.t)?),
        };
        if let InitialState::Pure { .. } = preset.initial_state {
            preset.initial_state = InitialState::Pure { theta: point.theta, phi: point.phi };
        }
        Ok(preset)
    }

    fn objective(&self, point: &Point) -> Result<f64> {
        let set = ContextSet::compute(&self.preset_at(point)?)?;
        Ok(Diagnostics::from_contexts(&set).lg.value(self.expression))
    }
}

fn template_point(template: &ScenarioPreset) -> (f64, f64, f64) {
    let alpha = match template.evolution {
        Evolution::Pt(p) => p.alpha,
        Evolution::Unitary { .. } => 0.0,
    };
    match template.initial_state {
        InitialState::Pure { theta, phi } => (alpha, theta, phi),
        InitialState::MaximallyMixed => (alpha, 0.0, 0.0),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub point: Point,
    /// Objective value, or the error message for this point.
    pub value: std::result::Result<f64, String>,
    pub diagnostics: Option<Diagnostics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<Row>,
    /// Best point: the grid maximum, refined when requested.
    pub argmax: Option<(Point, f64)>,
}

impl SweepResult {
    pub fn grid_max(&self) -> Option<(Point, f64)> {
        grid_argmax(&self.rows)
    }
}

fn grid_argmax(rows: &[Row]) -> Option<(Point, f64)> {
    rows.iter()
        .filter_map(|r| match r.value {
            Ok(v) if v.is_finite() => Some((r.point, v)),
            _ => None,
        })
        .fold(None, |best: Option<(Point, f64)>, (p, v)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((p, v)),
        })
}

/// Evaluate every grid point. Rows are ordered lexicographically by
/// `(t, α, θ, φ)`, independent of how the work is scheduled.
pub fn scan(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let [ts, alphas, thetas, phis] = cfg.axes().map(|g| g.values());
    let mut points = Vec::with_capacity(ts.len() * alphas.len() * thetas.len() * phis.len());
    for &t in &ts {
        for &alpha in &alphas {
            for &theta in &thetas {
                for &phi in &phis {
                    points.push(Point { t, alpha, theta, phi });
                }
            }
        }
    }
    let rows: Vec<Row> = points
        .par_iter()
        .map(|point| {
            let evaluated = cfg
                .preset_at(point)
                .and_then(|preset| ContextSet::compute(&preset))
                .map(|set| Diagnostics::from_contexts(&set));
            match evaluated {
                Ok(diag) => Row {
                    point: *point,
                    value: Ok(diag.lg.value(cfg.expression)),
                    diagnostics: cfg.diagnostics.then_some(diag),
                },
                Err(e) => Row { point: *point, value: Err(e.to_string()), diagnostics: None },
            }
        })
        .collect();
    let mut argmax = grid_argmax(&rows);
    if cfg.refine {
        if let Some((seed, _)) = argmax {
            argmax = Some(refine_max(cfg, seed)?);
        }
    }
    Ok(SweepResult { rows, argmax })
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization of `f` on `[lo, hi]`.
fn golden_section(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

const MAX_REFINE_CYCLES: usize = 200;

/// Coordinate-wise golden-section ascent from `seed`, restricted to the axes
/// whose grid spans an interval and to the grid bounds. Each pass searches a
/// bracket around the current coordinate; a candidate is accepted only if it
/// improves the value, so the result is never worse than the seed.
pub fn refine_max(cfg: &SweepConfig, seed: Point) -> Result<(Point, f64)> {
    cfg.validate()?;
    let start =
        cfg.objective(&seed).ok().filter(|v| v.is_finite()).ok_or_else(|| {
            Error::Usage(format!("objective is not finite at the refinement seed {seed:?}"))
        })?;
    let axes = cfg.axes();
    let free: Vec<usize> = (0..4).filter(|&i| axes[i].is_free()).collect();
    let mut widths: Vec<f64> = free
        .iter()
        .map(|&i| {
            let g = axes[i];
            let w = if g.count > 2 { 2.0 * g.spacing() } else { (g.max - g.min) / 4.0 };
            w.max(1e-3)
        })
        .collect();
    let mut best = seed;
    let mut best_value = start;
    let tol = cfg.refine_tolerance;
    for _ in 0..MAX_REFINE_CYCLES {
        let cycle_start = best_value;
        let mut moved = false;
        for (slot, &axis) in free.iter().enumerate() {
            let g = axes[axis];
            let x = best.get(axis);
            let lo = (x - widths[slot]).max(g.min);
            let hi = (x + widths[slot]).min(g.max);
            let f = |v: f64| {
                let mut p = best;
                p.set(axis, v);
                cfg.objective(&p).ok().filter(|v| v.is_finite()).unwrap_or(f64::NEG_INFINITY)
            };
            let (x_new, v_new) = golden_section(&f, lo, hi, tol);
            if v_new > best_value {
                best.set(axis, x_new);
                best_value = v_new;
                // Keep the bracket wide while the optimum is still near an edge.
                let edge = (x_new - lo).min(hi - x_new);
                if edge > 0.25 * widths[slot] {
                    widths[slot] = (0.5 * widths[slot]).max(16.0 * tol);
                }
                moved = true;
            } else {
                widths[slot] = (0.5 * widths[slot]).max(16.0 * tol);
            }
        }
        let shrunk = widths.iter().all(|&w| w <= 16.0 * tol);
        if shrunk && (!moved || best_value - cycle_start < tol) {
            break;
        }
    }
    Ok((best, best_value))
}

/// Non-Hermiticity values drawn in every figure.
pub const FIGURE_ALPHAS: [f64; 4] = [0.0, PI / 3.0, 2.0 * PI / 5.0, PI / 2.05];
pub const FIGURE_T_POINTS: usize = 512;
pub const FIGURE_THETA: f64 = 5.0 * PI / 6.0;
pub const FIGURE_PHI: f64 = PI / 2.0;

/// Options shared by the figure configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    pub alphas: Vec<f64>,
    pub t: Grid,
    pub theta: f64,
    pub phi: f64,
    pub s: f64,
    /// Overrides the preset's pre-evolution convention when set.
    pub pre_evolution: Option<bool>,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            alphas: FIGURE_ALPHAS.to_vec(),
            t: Grid { min: 0.0, max: PI, count: FIGURE_T_POINTS },
            theta: FIGURE_THETA,
            phi: FIGURE_PHI,
            s: 1.0,
            pre_evolution: None,
        }
    }
}

/// Expression plotted in figure `fig`.
pub fn figure_expression(fig: u8) -> Result<Expression> {
    match fig {
        1 | 3 => Ok(Expression::L13),
        2 => Ok(Expression::V3),
        4 => Ok(Expression::V1),
        _ => Err(Error::Usage(format!("figure must be 1, 2, 3 or 4, got {fig}"))),
    }
}

fn figure_template(fig: u8, opts: &FigureOptions, alpha: f64) -> Result<ScenarioPreset> {
    let params = PtParams::new(opts.s, alpha, opts.t.min)?;
    let mut preset = match fig {
        1 | 3 => ScenarioPreset::pt_standard(params),
        _ => ScenarioPreset::pt_variant(params, opts.theta, opts.phi),
    };
    if let Some(pre) = opts.pre_evolution {
        preset = preset.with_pre_evolution(pre);
    }
    Ok(preset)
}

/// Data for one figure: one block of rows per `α`, in the order of
/// `opts.alphas`, each block scanning the `t` grid. Figures 3 and 4 carry
/// diagnostics on every row.
pub fn figure_data_with(fig: u8, opts: &FigureOptions) -> Result<SweepResult> {
    let expression = figure_expression(fig)?;
    if opts.alphas.is_empty() {
        return Err(Error::Usage("figure needs at least one alpha".into()));
    }
    let mut rows = Vec::new();
    for &alpha in &opts.alphas {
        let template = figure_template(fig, opts, alpha)?;
        let mut cfg = SweepConfig::new(expression, template, opts.t);
        cfg.diagnostics = matches!(fig, 3 | 4);
        rows.extend(scan(&cfg)?.rows);
    }
    let argmax = grid_argmax(&rows);
    Ok(SweepResult { rows, argmax })
}

pub fn figure_data(fig: u8) -> Result<SweepResult> {
    figure_data_with(fig, &FigureOptions::default())
}
