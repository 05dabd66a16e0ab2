//! Local PT evolution of one half of a Bell pair and the resulting change in
//! the other half's reduced state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{partial_trace_first, tensor, trace_distance, Mat2, Mat4, QubitDensity, STATE_TOL};
use crate::ptdyn::{propagator, PtParams};

/// Two-qubit density operator, possibly unnormalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteState {
    mat: Mat4,
}

impl BipartiteState {
    pub fn new(mat: Mat4) -> Result<Self> {
        let scale = mat.trace().re.abs().max(1.0);
        if !mat.is_finite() || mat.hermiticity_residual() > STATE_TOL * scale {
            return Err(Error::Domain("bipartite state is not Hermitian".into()));
        }
        if mat.trace().re.is_nan() || mat.trace().re < 1e-14 {
            return Err(Error::DegenerateWeight { weight: mat.trace().re });
        }
        Ok(Self { mat })
    }

    pub fn mat(&self) -> &Mat4 {
        &self.mat
    }

    pub fn weight(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn purity(&self) -> f64 {
        (self.mat * self.mat).trace().re / (self.weight() * self.weight())
    }

    /// Apply `local ⊗ I` to both sides.
    pub fn evolve_first(&self, local: &Mat2) -> Self {
        let op = tensor(local, &Mat2::identity());
        Self { mat: op.sandwich(&self.mat) }
    }

    /// Reduced state of the second qubit, unnormalized.
    pub fn reduced_second(&self) -> Mat2 {
        partial_trace_first(&self.mat)
    }
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell_state() -> BipartiteState {
    let half = Complex64::new(0.5, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut rows = [[zero; 4]; 4];
    for &r in &[0usize, 3] {
        for &c in &[0usize, 3] {
            rows[r][c] = half;
        }
    }
    BipartiteState { mat: Mat4::from_rows(rows) }
}

/// Normalized reduced state of the second qubit after `U ⊗ I`.
pub fn bob_reduced(p: &PtParams) -> Result<QubitDensity> {
    let u = propagator(p)?;
    let evolved = bell_state().evolve_first(&u);
    QubitDensity::new(evolved.reduced_second())?.normalize()
}

/// Trace distance from `I/2`.
pub fn signaling_deviation(p: &PtParams) -> Result<f64> {
    let rho = bob_reduced(p)?;
    Ok(trace_distance(rho.mat(), &Mat2::identity().scale_real(0.5)))
}

/// Closed-form matrix entries of the evolved reduced state before
/// normalization, in the form `[[b1, b4], [b3, b2]]`, together with the
/// common denominator `N1 = 2 sec²α sin²t + cos 2t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedClosedForm {
    pub b1: f64,
    pub b2: f64,
    pub b3: Complex64,
    pub b4: Complex64,
    pub n1: f64,
}

impl ReducedClosedForm {
    pub fn new(p: &PtParams) -> Result<Self> {
        p.validate()?;
        let (alpha, t) = (p.alpha, p.t);
        let sec = 1.0 / alpha.cos();
        let sin2 = t.sin().powi(2);
        let cos2t = (2.0 * t).cos();
        let off = 2.0 * alpha.tan() * sec * sin2;
        Ok(Self {
            b1: 0.5 * sec * sec * ((2.0 * (alpha - t)).cos() - cos2t + 2.0),
            b2: 0.5 * sec * sec * ((2.0 * (alpha + t)).cos() - cos2t + 2.0),
            b3: Complex64::new(0.0, -off),
            b4: Complex64::new(0.0, off),
            n1: 2.0 * sec * sec * sin2 + cos2t,
        })
    }

    /// `(b/N1)/2`. The literal `b/N1` has trace 2; halving it gives the unit-trace
    /// state, which is the normalized reduced state.
    pub fn normalized(&self) -> Mat2 {
        let scale = 0.5 / self.n1;
        Mat2::new(
            Complex64::new(self.b1 * scale, 0.0),
            self.b4 * scale,
            self.b3 * scale,
            Complex64::new(self.b2 * scale, 0.0),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(alpha: f64, t: f64) -> PtParams {
        PtParams::new(1.0, alpha, t).unwrap()
    }

    #[test]
    fn bell_state_properties() {
        let bell = bell_state();
        assert!((bell.weight() - 1.0).abs() < 1e-15);
        assert!(bell.reduced_second().max_abs_diff(&Mat2::identity().scale_real(0.5)) < 1e-15);
        assert!((bell.purity() - 1.0).abs() < 1e-15);
        assert!(BipartiteState::new(*bell.mat()).is_ok());
    }

    #[test]
    fn no_signal_without_non_hermiticity_or_time() {
        for &t in &[0.0, 0.4, 1.9] {
            assert!(signaling_deviation(&p(0.0, t)).unwrap() < 1e-12);
        }
        assert!(signaling_deviation(&p(1.1, 0.0)).unwrap() < 1e-12);
        assert!(signaling_deviation(&p(1.1, PI)).unwrap() < 1e-12);
    }

    #[test]
    fn signal_with_pt_evolution() {
        let rho = bob_reduced(&p(PI / 3.0, 0.7)).unwrap();
        assert!((rho.weight() - 1.0).abs() < 1e-12);
        assert!(rho.mat().hermiticity_residual() < 1e-12);
        assert!(signaling_deviation(&p(PI / 3.0, 0.7)).unwrap() > 1e-3);
        assert!(signaling_deviation(&p(2.0 * PI / 5.0, 0.8)).unwrap() > 0.0);
    }

    #[test]
    fn closed_form_diagonals() {
        for &(alpha, t) in &[(0.3, 0.2), (PI / 3.0, 0.7), (1.2, 2.5)] {
            let closed = ReducedClosedForm::new(&p(alpha, t)).unwrap();
            let rho = bob_reduced(&p(alpha, t)).unwrap();
            let expected = closed.normalized();
            assert!((rho.mat().get(0, 0) - expected.get(0, 0)).norm() < 1e-9);
            assert!((rho.mat().get(1, 1) - expected.get(1, 1)).norm() < 1e-9);
            assert!((rho.mat().get(0, 1).norm() - expected.get(0, 1).norm()).abs() < 1e-9);
        }
    }
}
