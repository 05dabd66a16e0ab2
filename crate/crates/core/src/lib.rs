//! Leggett-Garg, no-signaling-in-time and arrow-of-time diagnostics for a
//! qubit measured at three times under unitary or PT-symmetric evolution.
//!
//! The crate is organised bottom-up:
//!
//! - [`matcore`]: fixed-size complex matrices, projectors, density operators.
//! - [`ptdyn`]: the PT-symmetric Hamiltonian and its propagator.
//! - [`protocol`]: outcome distributions for every measurement context.
//! - [`lgexpr`]: correlators and LG expressions.
//! - [`macrodiag`]: NSIT/AOT degree tables and decomposition identities.
//! - [`nosignal`]: the Bell-pair signaling demonstration.
//! - [`sweep`]: grid scans, local refinement and figure data.
//! - [`checks`]: the identity suite behind `ptlg check`.
//!
//! ```
//! use ptlg::{lgexpr, protocol::ScenarioPreset};
//!
//! let value = lgexpr::l13(&ScenarioPreset::unitary_standard(std::f64::consts::PI / 6.0)).unwrap();
//! assert!((value - 1.5).abs() < 1e-12);
//! ```

pub mod checks;
pub mod error;
pub mod lgexpr;
pub mod macrodiag;
pub mod matcore;
pub mod nosignal;
pub mod protocol;
pub mod ptdyn;
pub mod reference;
pub mod sweep;

pub use error::{Error, Result};
pub use lgexpr::{CorrelatorSet, Expression, LgReport};
pub use macrodiag::{DegreeReport, Diagnostics, ViolationRecord};
pub use matcore::{Mat2, Mat4, Outcome, Projector, QubitDensity};
pub use protocol::{
    ContextSet, Evolution, InitialState, MeasurementContext, Normalization, OutcomeDistribution, PresetLabel,
    ScenarioPreset, TimeSet,
};
pub use ptdyn::PtParams;
pub use sweep::{FigureOptions, Grid, Point, SweepConfig, SweepResult};
