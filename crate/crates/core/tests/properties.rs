use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use ptlg::lgexpr::{correlator, variant_v, CorrelatorSet};
use ptlg::macrodiag::{standard_condition_lhs, variant_condition_lhs, Diagnostics};
use ptlg::matcore::{sigma_y, sigma_z};
use ptlg::nosignal::signaling_deviation;
use ptlg::protocol::distribution;
use ptlg::ptdyn::{composition_check, propagator, uu_dagger, uu_dagger_closed_form};
use ptlg::reference;
use ptlg::sweep::{refine_max, scan};
use ptlg::{
    ContextSet, Evolution, Expression, Grid, InitialState, MeasurementContext, Point, PtParams,
    ScenarioPreset, SweepConfig, TimeSet,
};

fn alpha() -> impl Strategy<Value = f64> {
    -2.0 * PI / 5.0..2.0 * PI / 5.0
}

fn any_preset() -> impl Strategy<Value = ScenarioPreset> {
    (alpha(), 0.0..PI, 0.0..PI, 0.0..2.0 * PI, 0usize..4, any::<bool>()).prop_map(
        |(a, t, theta, phi, kind, pre)| {
            let params = PtParams::new(1.0, a, t).unwrap();
            match kind {
                0 => ScenarioPreset::unitary_standard(t),
                1 => ScenarioPreset::unitary_variant(t, theta, phi),
                2 => ScenarioPreset::pt_standard(params).with_pre_evolution(pre),
                _ => ScenarioPreset::pt_variant(params, theta, phi).with_pre_evolution(pre),
            }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_has_unit_modulus(a in alpha(), t in 0.0..10.0f64) {
        let det = propagator(&PtParams::new(1.0, a, t).unwrap()).unwrap().det();
        prop_assert!((det - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn propagator_composes(a in alpha(), t1 in 0.0..PI, t2 in 0.0..PI) {
        prop_assert!(composition_check(&PtParams::new(1.0, a, 0.0).unwrap(), t1, t2).unwrap() <= 1e-12);
    }

    #[test]
    fn uu_dagger_matches_closed_form(a in alpha(), t in 0.0..PI) {
        let p = PtParams::new(1.0, a, t).unwrap();
        prop_assert!(uu_dagger(&p).unwrap().max_abs_diff(&uu_dagger_closed_form(&p).unwrap()) <= 1e-10);
    }

    #[test]
    fn probabilities_are_normalized(preset in any_preset()) {
        for times in TimeSet::ALL {
            let d = distribution(&MeasurementContext::new(preset, times)).unwrap();
            prop_assert!((d.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!(d.probs().iter().all(|&p| (-1e-12..=1.0 + 1e-12).contains(&p)));
        }
    }

    #[test]
    fn expressions_respect_algebraic_maximum(preset in any_preset()) {
        let c = CorrelatorSet::compute(&preset).unwrap();
        for expr in Expression::ALL {
            prop_assert!(c.expression(expr) <= 3.0 + 1e-9);
        }
        for v in [c.c12, c.c23, c.c13, c.c1, c.c2, c.c3, c.c123] {
            prop_assert!(v.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn identities_and_violation_conditions(preset in any_preset()) {
        let diag = Diagnostics::compute(&preset).unwrap();
        prop_assert!((diag.lg.l123 + 4.0 * diag.lg.beta - 1.0).abs() <= 1e-12);
        prop_assert!((diag.lg.v123 + 4.0 * diag.lg.delta - 1.0).abs() <= 1e-12);
        prop_assert!(diag.residual_standard <= 1e-10);
        prop_assert!(diag.residual_variant <= 1e-10);
        for s in diag.degrees.table_sums() {
            prop_assert!(s.abs() <= 1e-12);
        }
        if diag.lg.l13 > 1.0 + 1e-8 {
            prop_assert!(standard_condition_lhs(&diag.degrees) > 2.0 * diag.lg.beta - 1e-8);
        }
        if diag.lg.v[0] > 1.0 + 1e-8 {
            prop_assert!(variant_condition_lhs(&diag.degrees) >= 4.0 * diag.lg.delta - 1e-8);
        }
    }

    #[test]
    fn unitary_dynamics_respects_arrow_of_time(t in 0.0..PI, theta in 0.0..PI, phi in 0.0..2.0 * PI) {
        for preset in [ScenarioPreset::unitary_standard(t), ScenarioPreset::unitary_variant(t, theta, phi)] {
            prop_assert!(Diagnostics::compute(&preset).unwrap().degrees.max_aot() <= 1e-12);
        }
    }

    #[test]
    fn unitary_l13_closed_form(t in 0.0..PI) {
        let value = ptlg::lgexpr::l13(&ScenarioPreset::unitary_standard(t)).unwrap();
        prop_assert!((value - reference::unitary_l13(t)).abs() <= 1e-10);
    }

    #[test]
    fn unitary_v3_closed_form(t in 0.0..PI, theta in 0.0..PI, phi in 0.0..2.0 * PI) {
        let value = variant_v(3, &ScenarioPreset::unitary_variant(t, theta, phi)).unwrap();
        prop_assert!((value - reference::unitary_v3(t, theta, phi)).abs() <= 1e-10);
    }

    /// At `α = 0` the PT scenarios coincide with unitary `exp(−i t σ_x)` steps.
    #[test]
    fn hermitian_limit_matches_unitary(t in 0.0..PI, theta in 0.0..PI, phi in 0.0..2.0 * PI, pre in any::<bool>()) {
        let pt = ScenarioPreset::pt_variant(PtParams::new(1.0, 0.0, t).unwrap(), theta, phi).with_pre_evolution(pre);
        let unitary = ScenarioPreset::custom(InitialState::Pure { theta, phi }, sigma_y(), Evolution::Unitary { t })
            .unwrap()
            .with_pre_evolution(pre);
        let (a, b) = (ContextSet::compute(&pt).unwrap(), ContextSet::compute(&unitary).unwrap());
        for (da, db) in a.iter().zip(b.iter()) {
            for (x, y) in da.probs().iter().zip(db.probs()) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
    }

    /// Negating the observable relabels every outcome: products of an even
    /// number of outcomes keep their sign, odd ones flip.
    #[test]
    fn relabeling_flips_odd_correlators(preset in any_preset()) {
        let flipped = preset.with_observable(-*preset.observable()).unwrap();
        let (a, b) = (CorrelatorSet::compute(&preset).unwrap(), CorrelatorSet::compute(&flipped).unwrap());
        prop_assert!((a.c12 - b.c12).abs() <= 1e-12);
        prop_assert!((a.c13 - b.c13).abs() <= 1e-12);
        prop_assert!((a.c1 + b.c1).abs() <= 1e-12);
        prop_assert!((a.c3 + b.c3).abs() <= 1e-12);
        prop_assert!((a.c123 + b.c123).abs() <= 1e-12);
        prop_assert!(b.l13() <= 3.0 + 1e-9);
        prop_assert!(b.variant(3).unwrap() <= 3.0 + 1e-9);
    }

    /// Relabeling only the first outcome of a two-time table flips `⟨M1M2⟩`.
    #[test]
    fn relabeling_one_time_flips_its_correlators(preset in any_preset()) {
        let d = distribution(&MeasurementContext::new(preset, TimeSet::T12)).unwrap();
        let p = d.probs();
        let swapped = ptlg::OutcomeDistribution::from_weights(TimeSet::T12, vec![p[2], p[3], p[0], p[1]]).unwrap();
        prop_assert!((correlator(&d, &[1, 2]).unwrap() + correlator(&swapped, &[1, 2]).unwrap()).abs() <= 1e-12);
        prop_assert!((correlator(&d, &[2]).unwrap() - correlator(&swapped, &[2]).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn no_signaling_without_non_hermiticity(t in 0.0..10.0f64) {
        prop_assert!(signaling_deviation(&PtParams::new(1.0, 0.0, t).unwrap()).unwrap() <= 1e-12);
    }

    #[test]
    fn refinement_never_loses_value(t0 in 0.05..3.0f64, a in 0.0..1.3f64) {
        let template = ScenarioPreset::pt_standard(PtParams::new(1.0, a, t0).unwrap());
        let cfg = SweepConfig::new(Expression::L13, template, Grid::new(0.0, PI, 32).unwrap());
        let seed = Point { t: t0, alpha: a, theta: 0.0, phi: 0.0 };
        let seed_value = ptlg::lgexpr::l13(&template).unwrap();
        let (_, value) = refine_max(&cfg, seed).unwrap();
        prop_assert!(value >= seed_value);
    }
}

#[test]
fn scans_are_bit_identical() {
    let template = ScenarioPreset::pt_variant(PtParams::new(1.0, 1.2, 0.0).unwrap(), 2.0, 1.0);
    let mut cfg = SweepConfig::new(Expression::V1, template, Grid::new(0.0, PI, 40).unwrap());
    cfg.alpha = Grid::new(0.0, 1.4, 5).unwrap();
    cfg.diagnostics = true;
    let first = scan(&cfg).unwrap();
    for _ in 0..3 {
        assert_eq!(scan(&cfg).unwrap(), first);
    }
}

#[test]
fn unitary_observable_defaults() {
    assert_eq!(*ScenarioPreset::unitary_standard(0.1).observable(), sigma_z());
    assert_eq!(*ScenarioPreset::unitary_variant(0.1, 0.0, 0.0).observable(), -sigma_z());
}
