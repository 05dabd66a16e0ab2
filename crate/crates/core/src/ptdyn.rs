//! PT-symmetric qubit Hamiltonian `H = s [[i sin α, 1], [1, -i sin α]]`,
//! its spectrum, and the non-unitary propagator it generates.
//!
//! Time is always the dimensionless `t = s·τ·cos α`; the physical duration
//! `τ` never appears in the API.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::Mat2;

/// Parameters of the PT-symmetric evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtParams {
    /// Energy scale, strictly positive.
    pub s: f64,
    /// Degree of non-Hermiticity in radians; `|alpha| < π/2`.
    pub alpha: f64,
    /// Dimensionless step duration.
    pub t: f64,
}

impl PtParams {
    pub fn new(s: f64, alpha: f64, t: f64) -> Result<Self> {
        let p = Self { s, alpha, t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha.abs() >= FRAC_PI_2 {
            return Err(Error::ExceptionalPoint { alpha: self.alpha });
        }
        if !self.s.is_finite() || self.s <= 0.0 {
            return Err(Error::Domain(format!("scale s must be positive, got {}", self.s)));
        }
        if !self.t.is_finite() || self.t < 0.0 {
            return Err(Error::Domain(format!("duration t must be >= 0, got {}", self.t)));
        }
        Ok(())
    }

    /// Same Hamiltonian, different duration.
    pub fn with_t(&self, t: f64) -> Self {
        Self { t, ..*self }
    }
}

/// Energies and right eigenvectors of `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    pub e_plus: f64,
    pub e_minus: f64,
    pub v_plus: [Complex64; 2],
    pub v_minus: [Complex64; 2],
}

pub fn hamiltonian(p: &PtParams) -> Result<Mat2> {
    p.validate()?;
    let (sin_a, _) = p.alpha.sin_cos();
    let diag = Complex64::new(0.0, p.s * sin_a);
    let off = Complex64::new(p.s, 0.0);
    Ok(Mat2::new(diag, off, off, -diag))
}

/// `E± = ±s cos α` with eigenvectors `(e^{±iα/2}, ±e^{∓iα/2})`.
///
/// The vectors can be checked directly: the first row of `H·v₊` is
/// `s(i sin α e^{iα/2} + e^{-iα/2}) = s cos α · e^{iα/2}`.
pub fn eigensystem(p: &PtParams) -> Result<EigenSystem> {
    p.validate()?;
    let energy = p.s * p.alpha.cos();
    let half = Complex64::from_polar(1.0, 0.5 * p.alpha);
    Ok(EigenSystem {
        e_plus: energy,
        e_minus: -energy,
        v_plus: [half, half.conj()],
        v_minus: [half.conj(), -half],
    })
}

/// `U(t) = cos t·I − i sin t·H/(s cos α)`, which follows from
/// `H² = (s cos α)² I`. Entry-wise this is
/// `(1/cos α)·[[cos(t−α), −i sin t], [−i sin t, cos(t+α)]]`.
pub fn propagator(p: &PtParams) -> Result<Mat2> {
    p.validate()?;
    Ok(propagator_unchecked(p.alpha, p.t))
}

pub(crate) fn propagator_unchecked(alpha: f64, t: f64) -> Mat2 {
    let sec = 1.0 / alpha.cos();
    let (sin_t, _) = t.sin_cos();
    let off = Complex64::new(0.0, -sin_t);
    Mat2::new(
        Complex64::new((t - alpha).cos() * sec, 0.0),
        off * sec,
        off * sec,
        Complex64::new((t + alpha).cos() * sec, 0.0),
    )
}

/// Max-entry norm of `U(t1)·U(t2) − U(t1+t2)`.
pub fn composition_check(p: &PtParams, t1: f64, t2: f64) -> Result<f64> {
    let a = propagator(&p.with_t(t1))?;
    let b = propagator(&p.with_t(t2))?;
    let ab = propagator(&p.with_t(t1 + t2))?;
    Ok((a * b).max_abs_diff(&ab))
}

pub fn uu_dagger(p: &PtParams) -> Result<Mat2> {
    let u = propagator(p)?;
    Ok(u * u.adjoint())
}

/// Closed form of `U U†`: `[[d1, i·d2], [−i·d2, d3]]` with
/// `d1 = sec²α (cos²(t−α) + sin²t)`, `d2 = 2 sec α tan α sin²t`,
/// `d3 = sec²α (cos²(t+α) + sin²t)`.
pub fn uu_dagger_closed_form(p: &PtParams) -> Result<Mat2> {
    p.validate()?;
    let (alpha, t) = (p.alpha, p.t);
    let sec = 1.0 / alpha.cos();
    let sin2 = t.sin().powi(2);
    let d1 = sec * sec * ((t - alpha).cos().powi(2) + sin2);
    let d2 = 2.0 * sec * sin2 * alpha.tan();
    let d3 = sec * sec * ((t + alpha).cos().powi(2) + sin2);
    Ok(Mat2::new(
        Complex64::new(d1, 0.0),
        Complex64::new(0.0, d2),
        Complex64::new(0.0, -d2),
        Complex64::new(d3, 0.0),
    ))
}

/// Unitary `exp(−i t σ_x)`, the Hermitian limit of [`propagator`].
pub fn sigma_x_rotation(t: f64) -> Mat2 {
    let (sin_t, cos_t) = t.sin_cos();
    let c = Complex64::new(cos_t, 0.0);
    let off = Complex64::new(0.0, -sin_t);
    Mat2::new(c, off, off, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::sigma_x;
    use std::f64::consts::PI;

    fn p(alpha: f64, t: f64) -> PtParams {
        PtParams::new(1.0, alpha, t).unwrap()
    }

    #[test]
    fn hermitian_limit() {
        assert_eq!(hamiltonian(&p(0.0, 0.0)).unwrap(), sigma_x());
        let u = propagator(&p(0.0, 0.9)).unwrap();
        assert!(u.max_abs_diff(&sigma_x_rotation(0.9)) < 1e-15);
    }

    #[test]
    fn hamiltonian_at_pi_over_3() {
        let h = hamiltonian(&p(PI / 3.0, 0.0)).unwrap();
        let r3 = 3f64.sqrt() / 2.0;
        let expected = Mat2::new(
            Complex64::new(0.0, r3),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, -r3),
        );
        assert!(h.max_abs_diff(&expected) < 1e-15);
        assert!(h.trace().norm() < 1e-15);
    }

    #[test]
    fn exceptional_point_rejected() {
        assert!(matches!(PtParams::new(1.0, FRAC_PI_2, 0.1), Err(Error::ExceptionalPoint { .. })));
        assert!(PtParams::new(1.0, -2.0, 0.1).is_err());
        assert!(PtParams::new(0.0, 0.1, 0.1).is_err());
        assert!(PtParams::new(1.0, PI / 2.05, 0.1).is_ok());
    }

    #[test]
    fn eigenpairs() {
        for &alpha in &[0.0, PI / 3.0, 2.0 * PI / 5.0, PI / 2.05] {
            let params = p(alpha, 0.0);
            let h = hamiltonian(&params).unwrap();
            let eig = eigensystem(&params).unwrap();
            assert_eq!(eig.e_plus, -eig.e_minus);
            for (e, v) in [(eig.e_plus, eig.v_plus), (eig.e_minus, eig.v_minus)] {
                for row in 0..2 {
                    let hv = h.get(row, 0) * v[0] + h.get(row, 1) * v[1];
                    assert!((hv - v[row] * e).norm() < 1e-10);
                }
            }
        }
        let eig = eigensystem(&p(PI / 3.0, 0.0)).unwrap();
        assert!((eig.e_plus - 0.5).abs() < 1e-15);
        let overlap = eig.v_plus[0].conj() * eig.v_minus[0] + eig.v_plus[1].conj() * eig.v_minus[1];
        assert!(overlap.norm() > 0.1);

        let eig0 = eigensystem(&p(0.0, 0.0)).unwrap();
        let overlap0 = eig0.v_plus[0].conj() * eig0.v_minus[0] + eig0.v_plus[1].conj() * eig0.v_minus[1];
        assert!(overlap0.norm() < 1e-15);
    }

    #[test]
    fn zero_duration_is_identity() {
        let u = propagator(&p(PI / 3.0, 0.0)).unwrap();
        assert!(u.max_abs_diff(&Mat2::identity()) < 1e-15);
        assert!(uu_dagger(&p(PI / 3.0, 0.0)).unwrap().max_abs_diff(&Mat2::identity()) < 1e-15);
    }

    #[test]
    fn composition_examples() {
        assert!(composition_check(&p(0.0, 0.0), 0.4, 1.1).unwrap() <= 1e-12);
        assert!(composition_check(&p(PI / 3.0, 0.0), 0.3, 0.5).unwrap() <= 1e-12);
        assert!(composition_check(&p(1.2, 0.0), 0.77, 0.0).unwrap() <= 1e-15);
    }

    #[test]
    fn uu_dagger_off_diagonal() {
        let params = p(PI / 3.0, 0.7);
        let m = uu_dagger(&params).unwrap();
        let d2 = 2.0 / (PI / 3.0).cos() * 0.7f64.sin().powi(2) * (PI / 3.0).tan();
        assert!((m.get(0, 1).norm() - d2).abs() < 1e-12);
        assert!(m.max_abs_diff(&uu_dagger_closed_form(&params).unwrap()) < 1e-12);
    }

    #[test]
    fn unitary_when_alpha_zero_or_sin_t_zero() {
        for &t in &[0.3, 0.7, 1.2, 2.9] {
            assert!(uu_dagger(&p(0.0, t)).unwrap().max_abs_diff(&Mat2::identity()) < 1e-12);
        }
        assert!(uu_dagger(&p(1.0, PI)).unwrap().max_abs_diff(&Mat2::identity()) < 1e-12);
        for &alpha in &[PI / 6.0, PI / 3.0, 2.0 * PI / 5.0] {
            for &t in &[0.3, 0.7, 1.2] {
                let dev = uu_dagger(&p(alpha, t)).unwrap().max_abs_diff(&Mat2::identity());
                assert!(dev > 1e-6);
            }
        }
    }

    #[test]
    fn determinant_is_one() {
        for &alpha in &[0.0, 0.4, 1.3, PI / 2.05] {
            for &t in &[0.0, 0.5, 2.0, 5.0] {
                let det = propagator(&p(alpha, t)).unwrap().det();
                assert!((det - Complex64::new(1.0, 0.0)).norm() < 1e-12 * (1.0 / alpha.cos()).powi(2));
            }
        }
    }
}
