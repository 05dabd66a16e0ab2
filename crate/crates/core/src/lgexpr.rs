//! Temporal correlators and Leggett-Garg expressions.
//!
//! Every correlator is read from its own minimal context: two-time
//! correlators from two-measurement runs, `⟨M_k⟩` from single-measurement
//! runs. The `_123` quantities recompute the same terms from the
//! three-measurement run; their difference from the minimal-context values is
//! what the degree tables in [`crate::macrodiag`] decompose.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matcore::Outcome;
use crate::protocol::{ContextSet, OutcomeDistribution, ScenarioPreset, TimeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expression {
    /// `⟨M1M2⟩ + ⟨M2M3⟩ − ⟨M1M3⟩`.
    L13,
    /// `−⟨M1M2M3⟩ + ⟨M2M3⟩ + ⟨M1⟩`.
    V1,
    /// `−⟨M1M2M3⟩ + ⟨M1M3⟩ + ⟨M2⟩`.
    V2,
    /// `−⟨M1M2M3⟩ + ⟨M1M2⟩ + ⟨M3⟩`.
    V3,
}

impl Expression {
    pub const ALL: [Expression; 4] = [Expression::L13, Expression::V1, Expression::V2, Expression::V3];

    pub fn name(&self) -> &'static str {
        match self {
            Expression::L13 => "L13",
            Expression::V1 => "V1",
            Expression::V2 => "V2",
            Expression::V3 => "V3",
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Expression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "L13" => Ok(Expression::L13),
            "V1" => Ok(Expression::V1),
            "V2" => Ok(Expression::V2),
            "V3" => Ok(Expression::V3),
            _ => Err(Error::Usage(format!("unknown expression {s:?}; expected L13, V1, V2 or V3"))),
        }
    }
}

/// `Σ (Π_{i∈which} m_i) P(m)` over the outcome tuples of `dist`.
pub fn correlator(dist: &OutcomeDistribution, which: &[usize]) -> Result<f64> {
    let times = dist.times();
    let mut positions = Vec::with_capacity(which.len());
    for &time in which {
        positions.push(
            times
                .position(time)
                .ok_or_else(|| Error::Usage(format!("time {time} is not measured in context {times}")))?,
        );
    }
    Ok(dist.iter().map(|(tuple, p)| positions.iter().map(|&i| tuple[i].sign()).product::<f64>() * p).sum())
}

/// All correlators that enter the expressions, tagged by the context they
/// were measured in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorSet {
    pub c12: f64,
    pub c23: f64,
    pub c13: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c123: f64,
    /// Same quantities taken from the three-measurement context.
    pub c12_123: f64,
    pub c23_123: f64,
    pub c13_123: f64,
    pub c1_123: f64,
    pub c2_123: f64,
    pub c3_123: f64,
}

impl CorrelatorSet {
    pub fn from_contexts(set: &ContextSet) -> Self {
        let corr = |times: TimeSet, which: &[usize]| {
            correlator(set.get(times), which).expect("time measured by construction")
        };
        let full = TimeSet::T123;
        Self {
            c12: corr(TimeSet::T12, &[1, 2]),
            c23: corr(TimeSet::T23, &[2, 3]),
            c13: corr(TimeSet::T13, &[1, 3]),
            c1: corr(TimeSet::T1, &[1]),
            c2: corr(TimeSet::T2, &[2]),
            c3: corr(TimeSet::T3, &[3]),
            c123: corr(full, &[1, 2, 3]),
            c12_123: corr(full, &[1, 2]),
            c23_123: corr(full, &[2, 3]),
            c13_123: corr(full, &[1, 3]),
            c1_123: corr(full, &[1]),
            c2_123: corr(full, &[2]),
            c3_123: corr(full, &[3]),
        }
    }

    pub fn compute(preset: &ScenarioPreset) -> Result<Self> {
        Ok(Self::from_contexts(&ContextSet::compute(preset)?))
    }

    pub fn l13(&self) -> f64 {
        self.c12 + self.c23 - self.c13
    }

    /// `V_k` for `k ∈ {1, 2, 3}`.
    pub fn variant(&self, k: usize) -> Result<f64> {
        let (pair, single) = match k {
            1 => (self.c23, self.c1),
            2 => (self.c13, self.c2),
            3 => (self.c12, self.c3),
            _ => return Err(Error::Usage(format!("variant index must be 1, 2 or 3, got {k}"))),
        };
        Ok(-self.c123 + pair + single)
    }

    pub fn expression(&self, expr: Expression) -> f64 {
        match expr {
            Expression::L13 => self.l13(),
            Expression::V1 => self.variant(1).unwrap(),
            Expression::V2 => self.variant(2).unwrap(),
            Expression::V3 => self.variant(3).unwrap(),
        }
    }

    pub fn l123(&self) -> f64 {
        self.c12_123 + self.c23_123 - self.c13_123
    }

    /// Three-measurement counterpart of `V1`.
    pub fn v123(&self) -> f64 {
        -self.c123 + self.c23_123 + self.c1_123
    }
}

/// `P(+,−,+) + P(−,+,−)` of the three-measurement context.
pub fn beta(full: &OutcomeDistribution) -> f64 {
    use Outcome::*;
    full.prob(&[Plus, Minus, Plus]) + full.prob(&[Minus, Plus, Minus])
}

/// `P(−,+,−) + P(−,−,+)` of the three-measurement context.
pub fn delta(full: &OutcomeDistribution) -> f64 {
    use Outcome::*;
    full.prob(&[Minus, Plus, Minus]) + full.prob(&[Minus, Minus, Plus])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LgReport {
    pub l13: f64,
    /// `V1, V2, V3`.
    pub v: [f64; 3],
    pub l123: f64,
    pub v123: f64,
    pub beta: f64,
    pub delta: f64,
}

impl LgReport {
    pub fn from_contexts(set: &ContextSet) -> Self {
        let c = CorrelatorSet::from_contexts(set);
        let full = set.get(TimeSet::T123);
        Self {
            l13: c.l13(),
            v: [c.variant(1).unwrap(), c.variant(2).unwrap(), c.variant(3).unwrap()],
            l123: c.l123(),
            v123: c.v123(),
            beta: beta(full),
            delta: delta(full),
        }
    }

    pub fn value(&self, expr: Expression) -> f64 {
        match expr {
            Expression::L13 => self.l13,
            Expression::V1 => self.v[0],
            Expression::V2 => self.v[1],
            Expression::V3 => self.v[2],
        }
    }
}

pub fn l13(preset: &ScenarioPreset) -> Result<f64> {
    Ok(CorrelatorSet::compute(preset)?.l13())
}

pub fn variant_v(k: usize, preset: &ScenarioPreset) -> Result<f64> {
    CorrelatorSet::compute(preset)?.variant(k)
}

pub fn evaluate(expr: Expression, preset: &ScenarioPreset) -> Result<f64> {
    Ok(CorrelatorSet::compute(preset)?.expression(expr))
}

pub fn l123_and_beta(preset: &ScenarioPreset) -> Result<(f64, f64)> {
    let set = ContextSet::compute(preset)?;
    Ok((CorrelatorSet::from_contexts(&set).l123(), beta(set.get(TimeSet::T123))))
}

pub fn v123_and_delta(preset: &ScenarioPreset) -> Result<(f64, f64)> {
    let set = ContextSet::compute(preset)?;
    Ok((CorrelatorSet::from_contexts(&set).v123(), delta(set.get(TimeSet::T123))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ptdyn::PtParams;
    use std::f64::consts::PI;

    fn table(times: TimeSet, weights: Vec<f64>) -> OutcomeDistribution {
        OutcomeDistribution::from_weights(times, weights).unwrap()
    }

    #[test]
    fn correlator_examples() {
        let uniform = table(TimeSet::T12, vec![0.25; 4]);
        assert_eq!(correlator(&uniform, &[1, 2]).unwrap(), 0.0);
        let correlated = table(TimeSet::T12, vec![0.5, 0.0, 0.0, 0.5]);
        assert_eq!(correlator(&correlated, &[1, 2]).unwrap(), 1.0);
        assert!(correlator(&correlated, &[3]).is_err());

        let unitary = ScenarioPreset::unitary_standard(PI / 6.0);
        let set = ContextSet::compute(&unitary).unwrap();
        assert!((correlator(set.get(TimeSet::T12), &[1, 2]).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unitary_l13_values() {
        assert!((l13(&ScenarioPreset::unitary_standard(PI / 6.0)).unwrap() - 1.5).abs() < 1e-12);
        assert!((l13(&ScenarioPreset::unitary_standard(PI / 4.0)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pt_at_alpha_zero_matches_unitary_closed_form() {
        for &t in &[0.1, 0.5, 1.3, 2.2] {
            let preset = ScenarioPreset::pt_standard(PtParams::new(1.0, 0.0, t).unwrap());
            let expected = 2.0 * (2.0 * t).cos() - (4.0 * t).cos();
            assert!((l13(&preset).unwrap() - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn variant_at_zero_duration_is_one() {
        for &theta in &[0.0, 0.7, 2.66] {
            let preset = ScenarioPreset::unitary_variant(0.0, theta, 0.4);
            for k in 1..=3 {
                assert!((variant_v(k, &preset).unwrap() - 1.0).abs() < 1e-12);
            }
        }
        assert!(variant_v(4, &ScenarioPreset::unitary_standard(0.1)).is_err());
    }

    #[test]
    fn three_measurement_identities() {
        let concentrated = table(TimeSet::T123, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(beta(&concentrated), 0.0);
        assert_eq!(delta(&concentrated), 0.0);
        let uniform = table(TimeSet::T123, vec![0.125; 8]);
        assert_eq!(delta(&uniform), 0.25);

        let preset = ScenarioPreset::unitary_standard(PI / 6.0);
        let (l123, b) = l123_and_beta(&preset).unwrap();
        assert!(b >= 0.0 && l123 <= 1.0 + 1e-12);
        assert!((l123 + 4.0 * b - 1.0).abs() < 1e-12);
        let (v123, d) = v123_and_delta(&preset).unwrap();
        assert!((v123 + 4.0 * d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parse_expression() {
        assert_eq!("v3".parse::<Expression>().unwrap(), Expression::V3);
        assert!("L12".parse::<Expression>().is_err());
    }
}
