//! Identity suite run over a deterministic parameter sample.
//!
//! Every check reports the largest residual seen and compares it with a fixed
//! tolerance. The sample is a low-discrepancy additive sequence, so runs are
//! reproducible without a random number generator.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lgexpr::CorrelatorSet;
use crate::macrodiag::Diagnostics;
use crate::matcore::Mat2;
use crate::nosignal::{bob_reduced, ReducedClosedForm};
use crate::protocol::{ContextSet, ScenarioPreset, TimeSet};
use crate::ptdyn::{composition_check, propagator, uu_dagger, uu_dagger_closed_form, PtParams};
use crate::reference;

/// Largest `|α|` drawn by the sampler.
pub const SAMPLE_ALPHA_MAX: f64 = 2.0 * PI / 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub alpha: f64,
    pub t: f64,
    pub t2: f64,
    pub theta: f64,
    pub phi: f64,
}

/// `n` points of the additive recurrence `x_i = frac(1/2 + i·g)` in five
/// dimensions, with `g` built from the generalized golden ratio.
pub fn sample_points(n: usize) -> Vec<SamplePoint> {
    // Root of x^6 = x + 1.
    let mut phi6 = 1.2f64;
    for _ in 0..32 {
        phi6 = (1.0 + phi6).powf(1.0 / 6.0);
    }
    let g: Vec<f64> = (1..=5).map(|k| 1.0 / phi6.powi(k)).collect();
    (0..n)
        .map(|i| {
            let u: Vec<f64> = g.iter().map(|gk| (0.5 + gk * i as f64).fract()).collect();
            SamplePoint {
                alpha: (2.0 * u[0] - 1.0) * SAMPLE_ALPHA_MAX,
                t: u[1] * PI,
                t2: u[2] * PI,
                theta: u[3] * PI,
                phi: u[4] * 2.0 * PI,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckOptions {
    pub sample_size: usize,
    /// Perturb the propagator entering the `U U†` check by `1e-3`, to
    /// exercise the failure path.
    pub inject_fault: bool,
}

pub const DEFAULT_SAMPLE_SIZE: usize = 64;
pub const FAULT_SIZE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub description: &'static str,
    pub tolerance: f64,
    pub max_residual: f64,
    pub samples: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

struct Accumulator {
    name: &'static str,
    description: &'static str,
    tolerance: f64,
    max_residual: f64,
    samples: usize,
}

impl Accumulator {
    fn new(name: &'static str, description: &'static str, tolerance: f64) -> Self {
        Self { name, description, tolerance, max_residual: 0.0, samples: 0 }
    }

    fn record(&mut self, residual: f64) {
        self.samples += 1;
        // NaN must fail the check, so it is kept rather than ignored by `max`.
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = if residual.is_nan() { f64::INFINITY } else { residual };
        }
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            name: self.name,
            description: self.description,
            tolerance: self.tolerance,
            max_residual: self.max_residual,
            samples: self.samples,
        }
    }
}

fn presets_at(p: &SamplePoint) -> Result<[ScenarioPreset; 4]> {
    let pt = PtParams::new(1.0, p.alpha, p.t)?;
    Ok([
        ScenarioPreset::unitary_standard(p.t),
        ScenarioPreset::unitary_variant(p.t, p.theta, p.phi),
        ScenarioPreset::pt_standard(pt),
        ScenarioPreset::pt_variant(pt, p.theta, p.phi),
    ])
}

fn perturbed(u: &Mat2) -> Mat2 {
    *u + Mat2::from_rows([[Complex64::new(FAULT_SIZE, 0.0); 2]; 2])
}

pub fn run_identity_suite(opts: &CheckOptions) -> Result<Vec<CheckReport>> {
    if opts.sample_size == 0 {
        return Err(Error::Usage("sample size must be at least 1".into()));
    }
    let mut composition = Accumulator::new("propagator-composition", "max |U(t1)U(t2) - U(t1+t2)|", 1e-12);
    let mut uu = Accumulator::new("uu-dagger", "max |U U^dagger - closed form|", 1e-10);
    let mut three = Accumulator::new(
        "three-measurement-identities",
        "max(|L123 + 4 beta - 1|, |V123 + 4 delta - 1|)",
        1e-12,
    );
    let mut standard = Accumulator::new("standard-decomposition", "|(L13 - L123) - degree sum|", 1e-10);
    let mut variant = Accumulator::new("variant-decomposition", "|(V1 - V123) - degree sum|", 1e-10);
    let mut unitary_aot = Accumulator::new("unitary-aot", "max |R| under unitary presets", 1e-12);
    let mut norm_ref = Accumulator::new(
        "pairwise-normalization-reference",
        "max |context weight - closed-form normalization| (PT, I/2, sigma_y)",
        1e-9,
    );
    let mut corr_ref = Accumulator::new(
        "pairwise-correlator-reference",
        "max |two-time correlator - closed form| (PT, I/2, sigma_y)",
        1e-9,
    );
    let mut nosignal = Accumulator::new(
        "nosignal-closed-form",
        "max |diag(rho_B) - closed form|, |off-diagonal magnitude difference|",
        1e-9,
    );

    for point in sample_points(opts.sample_size) {
        let params = PtParams::new(1.0, point.alpha, point.t)?;
        composition.record(composition_check(&params, point.t, point.t2)?);

        let product = if opts.inject_fault {
            let u = perturbed(&propagator(&params)?);
            u * u.adjoint()
        } else {
            uu_dagger(&params)?
        };
        uu.record(product.max_abs_diff(&uu_dagger_closed_form(&params)?));

        for (index, preset) in presets_at(&point)?.iter().enumerate() {
            let set = ContextSet::compute(preset)?;
            let diag = Diagnostics::from_contexts(&set);
            three.record(
                (diag.lg.l123 + 4.0 * diag.lg.beta - 1.0)
                    .abs()
                    .max((diag.lg.v123 + 4.0 * diag.lg.delta - 1.0).abs()),
            );
            standard.record(diag.residual_standard);
            variant.record(diag.residual_variant);
            if preset.evolution.is_unitary() {
                unitary_aot.record(diag.degrees.max_aot());
            }
            if index == 2 {
                record_pairwise_reference(&set, &diag.correlators, &point, &mut norm_ref, &mut corr_ref);
            }
        }

        let closed = ReducedClosedForm::new(&params)?.normalized();
        let rho = bob_reduced(&params)?;
        let m = rho.mat();
        nosignal.record(
            (m.get(0, 0) - closed.get(0, 0))
                .norm()
                .max((m.get(1, 1) - closed.get(1, 1)).norm())
                .max((m.get(0, 1).norm() - closed.get(0, 1).norm()).abs()),
        );
    }

    Ok([composition, uu, three, standard, variant, unitary_aot, norm_ref, corr_ref, nosignal]
        .into_iter()
        .map(Accumulator::finish)
        .collect())
}

fn record_pairwise_reference(
    set: &ContextSet,
    corr: &CorrelatorSet,
    point: &SamplePoint,
    norm_ref: &mut Accumulator,
    corr_ref: &mut Accumulator,
) {
    let (a, t) = (point.alpha, point.t);
    let weights = [
        (set.get(TimeSet::T12).weight(), reference::norm_12(a, t)),
        (set.get(TimeSet::T23).weight(), reference::norm_23(a, t)),
        (set.get(TimeSet::T13).weight(), reference::norm_13(a, t)),
    ];
    norm_ref.record(weights.iter().map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    let correlators = [
        (corr.c12, reference::corr_12(a, t)),
        (corr.c23, reference::corr_23(a, t)),
        (corr.c13, reference::corr_13(a, t)),
    ];
    corr_ref.record(correlators.iter().map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_is_deterministic_and_in_domain() {
        let a = sample_points(50);
        assert_eq!(a, sample_points(50));
        for p in &a {
            assert!(p.alpha.abs() <= SAMPLE_ALPHA_MAX);
            assert!((0.0..=PI).contains(&p.t));
        }
    }

    #[test]
    fn zero_sample_size_is_usage_error() {
        let opts = CheckOptions { sample_size: 0, inject_fault: false };
        assert!(matches!(run_identity_suite(&opts), Err(Error::Usage(_))));
    }

    #[test]
    fn fault_trips_uu_dagger_check() {
        let opts = CheckOptions { sample_size: 8, inject_fault: true };
        let reports = run_identity_suite(&opts).unwrap();
        let uu = reports.iter().find(|r| r.name == "uu-dagger").unwrap();
        assert!(!uu.passed());
        let composition = reports.iter().find(|r| r.name == "propagator-composition").unwrap();
        assert!(composition.passed());
    }
}
