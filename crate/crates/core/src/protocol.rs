//! Outcome statistics for sequential projective measurements at three equally
//! spaced times `t1 < t2 < t3`.
//!
//! A *context* is the subset of the three times at which a measurement is
//! actually performed. Each context is evaluated as an unnormalized chain of
//! evolutions and projections and then normalized by its own total weight.
//! Under non-unitary evolution the normalizers differ between contexts, which
//! is what makes the marginals of different contexts disagree.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{check_dichotomic, sigma_y, sigma_z, Mat2, Outcome, Projector, QubitDensity};
use crate::ptdyn::{propagator, sigma_x_rotation, PtParams};

/// Weight below which a state or context cannot be renormalized.
pub const MIN_WEIGHT: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    MaximallyMixed,
    /// `cos θ |0⟩ + e^{iφ} sin θ |1⟩`.
    Pure {
        theta: f64,
        phi: f64,
    },
}

impl InitialState {
    pub fn density(&self) -> QubitDensity {
        match *self {
            InitialState::MaximallyMixed => QubitDensity::maximally_mixed(),
            InitialState::Pure { theta, phi } => QubitDensity::from_pure(
                Complex64::new(theta.cos(), 0.0),
                Complex64::from_polar(theta.sin(), phi),
            ),
        }
    }
}

/// Dynamics between consecutive measurement times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evolution {
    /// `exp(−i t σ_x)` per step of duration `t`.
    Unitary { t: f64 },
    /// PT-symmetric propagator generated by the Hamiltonian in [`crate::ptdyn`].
    Pt(PtParams),
}

impl Evolution {
    pub fn step(&self) -> f64 {
        match self {
            Evolution::Unitary { t } => *t,
            Evolution::Pt(p) => p.t,
        }
    }

    pub fn with_step(&self, t: f64) -> Self {
        match self {
            Evolution::Unitary { .. } => Evolution::Unitary { t },
            Evolution::Pt(p) => Evolution::Pt(p.with_t(t)),
        }
    }

    pub fn is_unitary(&self) -> bool {
        matches!(self, Evolution::Unitary { .. })
    }

    /// Propagator over `steps` consecutive step durations, as a single
    /// composed matrix.
    pub fn propagator(&self, steps: usize) -> Result<Mat2> {
        let duration = self.step() * steps as f64;
        match self {
            Evolution::Unitary { .. } => Ok(sigma_x_rotation(duration)),
            Evolution::Pt(p) => propagator(&p.with_t(duration)),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Evolution::Unitary { t } if !t.is_finite() || *t < 0.0 => {
                Err(Error::Domain(format!("duration t must be >= 0, got {t}")))
            }
            Evolution::Unitary { .. } => Ok(()),
            Evolution::Pt(p) => p.validate(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetLabel {
    UnitaryStandard,
    UnitaryVariant,
    PtStandard,
    PtVariant,
    Custom,
}

impl fmt::Display for PresetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PresetLabel::UnitaryStandard => "UNITARY_STANDARD",
            PresetLabel::UnitaryVariant => "UNITARY_VARIANT",
            PresetLabel::PtStandard => "PT_STANDARD",
            PresetLabel::PtVariant => "PT_VARIANT",
            PresetLabel::Custom => "CUSTOM",
        })
    }
}

/// How joint probabilities of a context are normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Normalization {
    /// Unnormalized chain, divided once by the context's total weight.
    #[default]
    PerContext,
    /// Renormalize the state after every evolution segment and after every
    /// projection. Marginals then agree across contexts whenever later
    /// measurements are summed out, so arrow-of-time degrees vanish.
    PerStep,
}

/// A complete description of one scenario: initial state, observable,
/// dynamics and conventions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioPreset {
    pub label: PresetLabel,
    pub initial_state: InitialState,
    observable: Mat2,
    pub evolution: Evolution,
    /// Evolve the initial state for one step before `t1`.
    pub pre_evolution: bool,
    pub normalization: Normalization,
}

/// Default convention for the pure-state PT scenario. See the crate README.
pub const PT_VARIANT_PRE_EVOLUTION: bool = true;

impl ScenarioPreset {
    /// `ρ = I/2`, `σ_z`, unitary steps.
    pub fn unitary_standard(t: f64) -> Self {
        Self {
            label: PresetLabel::UnitaryStandard,
            initial_state: InitialState::MaximallyMixed,
            observable: sigma_z(),
            evolution: Evolution::Unitary { t },
            pre_evolution: false,
            normalization: Normalization::PerContext,
        }
    }

    /// Pure state `(θ, φ)` measured with `−σ_z` after unitary steps. The sign
    /// of the observable matches the outcome labelling of the pure-state
    /// unitary optimum; see the README.
    pub fn unitary_variant(t: f64, theta: f64, phi: f64) -> Self {
        Self {
            label: PresetLabel::UnitaryVariant,
            initial_state: InitialState::Pure { theta, phi },
            observable: -sigma_z(),
            evolution: Evolution::Unitary { t },
            pre_evolution: false,
            normalization: Normalization::PerContext,
        }
    }

    /// `ρ(0) = I/2` evolved for one step, then `σ_y` at three times.
    pub fn pt_standard(params: PtParams) -> Self {
        Self {
            label: PresetLabel::PtStandard,
            initial_state: InitialState::MaximallyMixed,
            observable: sigma_y(),
            evolution: Evolution::Pt(params),
            pre_evolution: true,
            normalization: Normalization::PerContext,
        }
    }

    pub fn pt_variant(params: PtParams, theta: f64, phi: f64) -> Self {
        Self {
            label: PresetLabel::PtVariant,
            initial_state: InitialState::Pure { theta, phi },
            observable: sigma_y(),
            evolution: Evolution::Pt(params),
            pre_evolution: PT_VARIANT_PRE_EVOLUTION,
            normalization: Normalization::PerContext,
        }
    }

    pub fn custom(initial_state: InitialState, observable: Mat2, evolution: Evolution) -> Result<Self> {
        check_dichotomic(&observable)?;
        Ok(Self {
            label: PresetLabel::Custom,
            initial_state,
            observable,
            evolution,
            pre_evolution: false,
            normalization: Normalization::PerContext,
        })
    }

    pub fn observable(&self) -> &Mat2 {
        &self.observable
    }

    /// Replace the observable. Any override relabels the preset as custom.
    pub fn with_observable(mut self, observable: Mat2) -> Result<Self> {
        check_dichotomic(&observable)?;
        self.observable = observable;
        self.label = PresetLabel::Custom;
        Ok(self)
    }

    pub fn with_pre_evolution(mut self, on: bool) -> Self {
        self.pre_evolution = on;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_step(mut self, t: f64) -> Self {
        self.evolution = self.evolution.with_step(t);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.evolution.validate()
    }
}

/// Non-empty subset of the measurement times `{1, 2, 3}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimeSet(u8);

impl TimeSet {
    pub const T1: TimeSet = TimeSet(0b001);
    pub const T2: TimeSet = TimeSet(0b010);
    pub const T3: TimeSet = TimeSet(0b100);
    pub const T12: TimeSet = TimeSet(0b011);
    pub const T13: TimeSet = TimeSet(0b101);
    pub const T23: TimeSet = TimeSet(0b110);
    pub const T123: TimeSet = TimeSet(0b111);

    /// All seven contexts in a fixed order.
    pub const ALL: [TimeSet; 7] = [Self::T1, Self::T2, Self::T3, Self::T12, Self::T13, Self::T23, Self::T123];

    pub fn new(times: &[usize]) -> Result<Self> {
        let mut bits = 0u8;
        for &time in times {
            if !(1..=3).contains(&time) {
                return Err(Error::Usage(format!("measurement time must be 1, 2 or 3, got {time}")));
            }
            bits |= 1 << (time - 1);
        }
        if bits == 0 {
            return Err(Error::Usage("a context needs at least one measurement time".into()));
        }
        Ok(TimeSet(bits))
    }

    pub fn contains(&self, time: usize) -> bool {
        (1..=3).contains(&time) && self.0 & (1 << (time - 1)) != 0
    }

    /// Measured times in ascending order.
    pub fn times(&self) -> Vec<usize> {
        (1..=3).filter(|&k| self.contains(k)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Position of `time` within [`TimeSet::times`].
    pub fn position(&self, time: usize) -> Option<usize> {
        self.times().iter().position(|&k| k == time)
    }

    fn slot(self) -> usize {
        TimeSet::ALL.iter().position(|&c| c == self).expect("valid time set")
    }
}

impl fmt::Display for TimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let times: Vec<String> = self.times().iter().map(|t| t.to_string()).collect();
        write!(f, "{{{}}}", times.join(","))
    }
}

impl fmt::Debug for TimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementContext {
    pub preset: ScenarioPreset,
    pub times: TimeSet,
}

impl MeasurementContext {
    pub fn new(preset: ScenarioPreset, times: TimeSet) -> Self {
        Self { preset, times }
    }
}

/// Outcome tuples of a context, enumerated with `Plus` before `Minus` at each
/// position, first measured time most significant: `(+,+), (+,−), (−,+), (−,−)`.
pub fn outcome_tuples(len: usize) -> Vec<Vec<Outcome>> {
    (0..1usize << len).map(|index| decode(index, len)).collect()
}

fn decode(index: usize, len: usize) -> Vec<Outcome> {
    (0..len)
        .map(|pos| if index >> (len - 1 - pos) & 1 == 0 { Outcome::Plus } else { Outcome::Minus })
        .collect()
}

fn encode(outcomes: &[Outcome]) -> usize {
    outcomes.iter().fold(0, |acc, o| (acc << 1) | o.index())
}

/// Normalized probabilities of all outcome tuples of one context.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    times: TimeSet,
    probs: Vec<f64>,
    weight: f64,
}

impl OutcomeDistribution {
    /// Build from a table in [`outcome_tuples`] order. The table is normalized
    /// here; `weight` records the total before normalization.
    pub fn from_weights(times: TimeSet, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != 1 << times.len() {
            return Err(Error::Usage(format!(
                "context {times} needs {} entries, got {}",
                1 << times.len(),
                weights.len()
            )));
        }
        let weight: f64 = weights.iter().sum();
        if weight.is_nan() || weight < MIN_WEIGHT {
            return Err(Error::DegenerateContext { context: times.to_string(), weight });
        }
        let probs = weights.iter().map(|w| w / weight).collect();
        Ok(Self { times, probs, weight })
    }

    pub fn times(&self) -> TimeSet {
        self.times
    }

    /// Sum of the unnormalized chain weights.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn prob(&self, outcomes: &[Outcome]) -> f64 {
        assert_eq!(outcomes.len(), self.times.len(), "outcome tuple length");
        self.probs[encode(outcomes)]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<Outcome>, f64)> + '_ {
        let len = self.times.len();
        self.probs.iter().enumerate().map(move |(i, &p)| (decode(i, len), p))
    }

    /// Probability that the measurement at `time` gave `outcome`, summing the
    /// other entries of this context.
    pub fn marginal(&self, fixed: &[(usize, Outcome)]) -> Result<f64> {
        let mut positions = Vec::with_capacity(fixed.len());
        for &(time, outcome) in fixed {
            let pos = self.times.position(time).ok_or_else(|| {
                Error::Usage(format!("time {time} is not measured in context {}", self.times))
            })?;
            positions.push((pos, outcome));
        }
        Ok(self
            .iter()
            .filter(|(tuple, _)| positions.iter().all(|&(pos, o)| tuple[pos] == o))
            .map(|(_, p)| p)
            .sum())
    }
}

/// State at `t1`, normalized.
pub fn initial_state_at_t1(preset: &ScenarioPreset) -> Result<QubitDensity> {
    preset.validate()?;
    let rho = preset.initial_state.density();
    if preset.pre_evolution {
        rho.evolve(&preset.evolution.propagator(1)?).normalize()
    } else {
        rho.normalize()
    }
}

/// Projector-and-propagator chain for one context, walking the measured times
/// in order. Gaps over unmeasured times use a single composed propagator.
fn chain_weight(
    rho_t1: &QubitDensity,
    ctx: &MeasurementContext,
    outcomes: &[Outcome],
    propagators: &[Mat2; 3],
) -> Result<f64> {
    let preset = &ctx.preset;
    let mut rho = *rho_t1;
    let mut current = 1;
    let mut weight = 1.0;
    for (time, &outcome) in ctx.times.times().into_iter().zip(outcomes) {
        if time > current {
            rho = rho.evolve(&propagators[time - current]);
            current = time;
            if preset.normalization == Normalization::PerStep {
                rho = rho.normalize()?;
            }
        }
        let proj = Projector::new(&preset.observable, outcome)?;
        match preset.normalization {
            Normalization::PerContext => rho = rho.project(&proj),
            Normalization::PerStep => {
                let q = rho.probability(&proj);
                weight *= q;
                if q < MIN_WEIGHT {
                    return Ok(0.0);
                }
                rho = QubitDensity::new_unchecked(rho.project(&proj).mat().scale_real(1.0 / q));
            }
        }
    }
    Ok(match preset.normalization {
        Normalization::PerContext => rho.weight(),
        Normalization::PerStep => weight,
    })
}

fn step_propagators(preset: &ScenarioPreset) -> Result<[Mat2; 3]> {
    Ok([Mat2::identity(), preset.evolution.propagator(1)?, preset.evolution.propagator(2)?])
}

/// Unnormalized weight of one outcome tuple.
pub fn unnormalized_chain(ctx: &MeasurementContext, outcomes: &[Outcome]) -> Result<f64> {
    if outcomes.len() != ctx.times.len() {
        return Err(Error::Usage(format!(
            "context {} takes {} outcomes, got {}",
            ctx.times,
            ctx.times.len(),
            outcomes.len()
        )));
    }
    let rho = initial_state_at_t1(&ctx.preset)?;
    chain_weight(&rho, ctx, outcomes, &step_propagators(&ctx.preset)?)
}

pub fn distribution(ctx: &MeasurementContext) -> Result<OutcomeDistribution> {
    let rho = initial_state_at_t1(&ctx.preset)?;
    let props = step_propagators(&ctx.preset)?;
    distribution_from(&rho, ctx, &props)
}

fn distribution_from(
    rho: &QubitDensity,
    ctx: &MeasurementContext,
    props: &[Mat2; 3],
) -> Result<OutcomeDistribution> {
    let weights = outcome_tuples(ctx.times.len())
        .iter()
        .map(|tuple| chain_weight(rho, ctx, tuple, props))
        .collect::<Result<Vec<_>>>()?;
    OutcomeDistribution::from_weights(ctx.times, weights)
}

/// `(P(+1), P(−1))` at `time` from the normalized state evolved there.
pub fn one_time_probability(preset: &ScenarioPreset, time: usize) -> Result<(f64, f64)> {
    if !(1..=3).contains(&time) {
        return Err(Error::Usage(format!("measurement time must be 1, 2 or 3, got {time}")));
    }
    let mut rho = initial_state_at_t1(preset)?;
    if time > 1 {
        rho = rho.evolve(&preset.evolution.propagator(time - 1)?).normalize()?;
    }
    let plus = rho.probability(&Projector::new(preset.observable(), Outcome::Plus)?);
    let minus = rho.probability(&Projector::new(preset.observable(), Outcome::Minus)?);
    Ok((plus, minus))
}

/// Distributions of all seven contexts of one preset.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextSet {
    preset: ScenarioPreset,
    dists: Vec<OutcomeDistribution>,
}

impl ContextSet {
    pub fn compute(preset: &ScenarioPreset) -> Result<Self> {
        let rho = initial_state_at_t1(preset)?;
        let props = step_propagators(preset)?;
        let dists = TimeSet::ALL
            .iter()
            .map(|&times| distribution_from(&rho, &MeasurementContext::new(*preset, times), &props))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { preset: *preset, dists })
    }

    pub fn preset(&self) -> &ScenarioPreset {
        &self.preset
    }

    pub fn get(&self, times: TimeSet) -> &OutcomeDistribution {
        &self.dists[times.slot()]
    }

    pub fn iter(&self) -> impl Iterator<Item = &OutcomeDistribution> {
        self.dists.iter()
    }
}
