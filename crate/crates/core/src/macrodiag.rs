//! No-signaling-in-time (NSIT) and arrow-of-time (AOT) degrees, and the
//! identities relating them to the gap between minimal-context and
//! three-measurement LG values.
//!
//! Tables are indexed by [`Outcome::index`], so `table[0][1]` is `(+, −)`.

use crate::error::Result;
use crate::lgexpr::{CorrelatorSet, Expression, LgReport};
use crate::matcore::Outcome;
use crate::protocol::{ContextSet, ScenarioPreset, TimeSet};

/// Degrees at or below this magnitude count as numerically zero.
pub const VIOLATION_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeReport {
    /// `P(m2,m3)` from `{2,3}` minus `Σ_{m1} P(m1,m2,m3)`, indexed `[m2][m3]`.
    pub d_123: [[f64; 2]; 2],
    /// `P(m1,m3)` from `{1,3}` minus `Σ_{m2} P(m1,m2,m3)`, indexed `[m1][m3]`.
    pub d_1_2_3: [[f64; 2]; 2],
    /// `P(m1,m2)` from `{1,2}` minus `Σ_{m3} P(m1,m2,m3)`, indexed `[m1][m2]`.
    pub r_12_3: [[f64; 2]; 2],
    /// `P(m1)` from `{1}` minus `Σ_{m2,m3} P(m1,m2,m3)`, indexed `[m1]`.
    pub r_1_23: [f64; 2],
}

fn pair_table(set: &ContextSet, pair: TimeSet) -> [[f64; 2]; 2] {
    let times = pair.times();
    let (a, b) = (times[0], times[1]);
    let full = set.get(TimeSet::T123);
    let mut out = [[0.0; 2]; 2];
    for ma in Outcome::BOTH {
        for mb in Outcome::BOTH {
            let direct = set.get(pair).prob(&[ma, mb]);
            let summed = full.marginal(&[(a, ma), (b, mb)]).expect("measured");
            out[ma.index()][mb.index()] = direct - summed;
        }
    }
    out
}

impl DegreeReport {
    pub fn from_contexts(set: &ContextSet) -> Self {
        let full = set.get(TimeSet::T123);
        let mut r_1_23 = [0.0; 2];
        for m1 in Outcome::BOTH {
            r_1_23[m1.index()] =
                set.get(TimeSet::T1).prob(&[m1]) - full.marginal(&[(1, m1)]).expect("measured");
        }
        Self {
            d_123: pair_table(set, TimeSet::T23),
            d_1_2_3: pair_table(set, TimeSet::T13),
            r_12_3: pair_table(set, TimeSet::T12),
            r_1_23,
        }
    }

    pub fn compute(preset: &ScenarioPreset) -> Result<Self> {
        Ok(Self::from_contexts(&ContextSet::compute(preset)?))
    }

    pub fn max_nsit(&self) -> f64 {
        self.d_123.iter().chain(self.d_1_2_3.iter()).flatten().fold(0.0, |m, d| m.max(d.abs()))
    }

    pub fn max_aot(&self) -> f64 {
        self.r_12_3.iter().flatten().chain(self.r_1_23.iter()).fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Sums of each table; all four vanish when both contexts are normalized.
    pub fn table_sums(&self) -> [f64; 4] {
        let sum2 = |t: &[[f64; 2]; 2]| t.iter().flatten().sum::<f64>();
        [sum2(&self.d_123), sum2(&self.d_1_2_3), sum2(&self.r_12_3), self.r_1_23.iter().sum()]
    }
}

/// `(Σ over equal labels, Σ over unequal labels)` of a pair table.
fn split_eq(table: &[[f64; 2]; 2]) -> (f64, f64) {
    (table[0][0] + table[1][1], table[0][1] + table[1][0])
}

pub fn nsit_degree_123(preset: &ScenarioPreset, m2: Outcome, m3: Outcome) -> Result<f64> {
    Ok(DegreeReport::compute(preset)?.d_123[m2.index()][m3.index()])
}

pub fn nsit_degree_1_2_3(preset: &ScenarioPreset, m1: Outcome, m3: Outcome) -> Result<f64> {
    Ok(DegreeReport::compute(preset)?.d_1_2_3[m1.index()][m3.index()])
}

pub fn aot_degree_12_3(preset: &ScenarioPreset, m1: Outcome, m2: Outcome) -> Result<f64> {
    Ok(DegreeReport::compute(preset)?.r_12_3[m1.index()][m2.index()])
}

pub fn aot_degree_1_23(preset: &ScenarioPreset, m1: Outcome) -> Result<f64> {
    Ok(DegreeReport::compute(preset)?.r_1_23[m1.index()])
}

/// Right-hand side of `L13 − L123` written in degrees.
pub fn standard_decomposition(deg: &DegreeReport) -> f64 {
    let (d23_eq, d23_neq) = split_eq(&deg.d_123);
    let (r_eq, r_neq) = split_eq(&deg.r_12_3);
    let (d13_eq, d13_neq) = split_eq(&deg.d_1_2_3);
    (d23_eq - d23_neq) + (r_eq - r_neq) + (d13_neq - d13_eq)
}

/// AOT contribution to `V1 − V123`, written as `R(−1) − R(+1)` so that the
/// violation condition reads `2 Σ_{m2=m3} D − term > 4δ`.
pub fn variant_aot_term(deg: &DegreeReport) -> f64 {
    deg.r_1_23[Outcome::Minus.index()] - deg.r_1_23[Outcome::Plus.index()]
}

/// Right-hand side of `V1 − V123` written in degrees.
pub fn variant_decomposition(deg: &DegreeReport) -> f64 {
    let (d_eq, d_neq) = split_eq(&deg.d_123);
    (d_eq - d_neq) - variant_aot_term(deg)
}

/// Left side of the standard violation condition:
/// `Σ_{m2=m3} D_(1)23 − Σ_{m1=m3} D_1(2)3 + Σ_{m1=m2} R_12(3)`, to be compared with `2β`.
pub fn standard_condition_lhs(deg: &DegreeReport) -> f64 {
    split_eq(&deg.d_123).0 - split_eq(&deg.d_1_2_3).0 + split_eq(&deg.r_12_3).0
}

/// Left side of the variant violation condition, `2 Σ_{m2=m3} D_(1)23 − term`,
/// to be compared with `4δ`.
pub fn variant_condition_lhs(deg: &DegreeReport) -> f64 {
    2.0 * split_eq(&deg.d_123).0 - variant_aot_term(deg)
}

pub fn decomposition_residual_standard(preset: &ScenarioPreset) -> Result<f64> {
    Ok(Diagnostics::compute(preset)?.residual_standard)
}

pub fn decomposition_residual_variant(preset: &ScenarioPreset) -> Result<f64> {
    Ok(Diagnostics::compute(preset)?.residual_variant)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ViolationRecord {
    /// Indexed like [`Expression::ALL`].
    pub lg_violated: [bool; 4],
    pub nsit_violated: bool,
    pub aot_violated: bool,
}

impl ViolationRecord {
    pub fn lg(&self, expr: Expression) -> bool {
        let i = Expression::ALL.iter().position(|&e| e == expr).expect("listed");
        self.lg_violated[i]
    }
}

/// Everything computed for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub correlators: CorrelatorSet,
    pub lg: LgReport,
    pub degrees: DegreeReport,
    pub residual_standard: f64,
    pub residual_variant: f64,
}

impl Diagnostics {
    pub fn from_contexts(set: &ContextSet) -> Self {
        let correlators = CorrelatorSet::from_contexts(set);
        let lg = LgReport::from_contexts(set);
        let degrees = DegreeReport::from_contexts(set);
        let residual_standard = ((lg.l13 - lg.l123) - standard_decomposition(&degrees)).abs();
        let residual_variant = ((lg.v[0] - lg.v123) - variant_decomposition(&degrees)).abs();
        Self { correlators, lg, degrees, residual_standard, residual_variant }
    }

    pub fn compute(preset: &ScenarioPreset) -> Result<Self> {
        Ok(Self::from_contexts(&ContextSet::compute(preset)?))
    }

    pub fn classify(&self) -> ViolationRecord {
        let mut lg_violated = [false; 4];
        for (flag, expr) in lg_violated.iter_mut().zip(Expression::ALL) {
            *flag = self.lg.value(expr) > 1.0 + VIOLATION_THRESHOLD;
        }
        ViolationRecord {
            lg_violated,
            nsit_violated: self.degrees.max_nsit() > VIOLATION_THRESHOLD,
            aot_violated: self.degrees.max_aot() > VIOLATION_THRESHOLD,
        }
    }
}

pub fn violation_classifier(preset: &ScenarioPreset) -> Result<ViolationRecord> {
    Ok(Diagnostics::compute(preset)?.classify())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ptdyn::PtParams;
    use std::f64::consts::PI;

    fn pt(alpha: f64, t: f64) -> ScenarioPreset {
        ScenarioPreset::pt_standard(PtParams::new(1.0, alpha, t).unwrap())
    }

    #[test]
    fn unitary_violates_nsit_not_aot() {
        // With I/2 the state at t2 is I/2 whether or not t1 was measured, so the
        // (1)23 table vanishes identically; a coherent initial state is needed.
        let mixed = DegreeReport::compute(&ScenarioPreset::unitary_standard(PI / 6.0)).unwrap();
        assert!(mixed.d_123.iter().flatten().all(|d| d.abs() < 1e-15));

        let preset = ScenarioPreset::unitary_variant(PI / 6.0, 2.66, PI / 2.0);
        let deg = DegreeReport::compute(&preset).unwrap();
        assert!(deg.d_123.iter().flatten().any(|d| d.abs() > 1e-6));
        assert!(deg.d_1_2_3.iter().flatten().any(|d| d.abs() > 1e-6));
        assert!(deg.max_aot() <= 1e-12);
        let record = violation_classifier(&preset).unwrap();
        assert!(record.lg(Expression::L13));
        assert!(record.nsit_violated);
        assert!(!record.aot_violated);
    }

    #[test]
    fn nothing_happens_without_dynamics() {
        for preset in [pt(0.0, 0.0), pt(1.0, 0.0), ScenarioPreset::unitary_variant(0.0, 2.0, 1.0)] {
            let diag = Diagnostics::compute(&preset).unwrap();
            assert!(diag.degrees.max_nsit() < 1e-15);
            assert!(diag.degrees.max_aot() < 1e-15);
            assert!(diag.residual_standard < 1e-15);
            assert!(diag.residual_variant < 1e-15);
            assert_eq!(
                diag.classify(),
                ViolationRecord { lg_violated: [false; 4], nsit_violated: false, aot_violated: false }
            );
        }
    }

    #[test]
    fn pt_violates_aot() {
        let deg = DegreeReport::compute(&pt(PI / 3.0, 0.7)).unwrap();
        assert!(deg.max_aot() > 1e-6);
        let small = DegreeReport::compute(&pt(1e-6, 0.7)).unwrap();
        assert!(small.max_aot() <= 1e-5);
    }

    #[test]
    fn tables_sum_to_zero() {
        for preset in [pt(PI / 3.0, 0.7), pt(1.5, 2.0), ScenarioPreset::unitary_variant(0.3, 2.5, 0.1)] {
            let deg = DegreeReport::compute(&preset).unwrap();
            for s in deg.table_sums() {
                assert!(s.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn decompositions_hold() {
        for preset in
            [ScenarioPreset::unitary_standard(PI / 6.0), pt(PI / 3.0, 0.785), pt(2.0 * PI / 5.0, 0.9)]
        {
            let diag = Diagnostics::compute(&preset).unwrap();
            assert!(diag.residual_standard <= 1e-10);
            assert!(diag.residual_variant <= 1e-10);
        }
    }

    #[test]
    fn single_degree_accessors_agree_with_report() {
        let preset = pt(0.9, 0.6);
        let deg = DegreeReport::compute(&preset).unwrap();
        use Outcome::*;
        assert_eq!(nsit_degree_123(&preset, Plus, Minus).unwrap(), deg.d_123[0][1]);
        assert_eq!(nsit_degree_1_2_3(&preset, Minus, Plus).unwrap(), deg.d_1_2_3[1][0]);
        assert_eq!(aot_degree_12_3(&preset, Minus, Minus).unwrap(), deg.r_12_3[1][1]);
        assert_eq!(aot_degree_1_23(&preset, Plus).unwrap(), deg.r_1_23[0]);
    }
}
