//! Small dense complex matrices (2×2 and 4×4) and the qubit-state primitives
//! built on them.
//!
//! Everything here is a plain `Copy` value; operations return new matrices
//! and never mutate their inputs, so values can be shared freely across the
//! worker threads used by parameter sweeps.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used for Hermiticity, idempotence and positivity checks.
pub const STATE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square complex matrix stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct CMat<const N: usize> {
    entries: [[Complex64; N]; N],
}

pub type Mat2 = CMat<2>;
pub type Mat4 = CMat<4>;

impl<const N: usize> CMat<N> {
    pub fn from_rows(entries: [[Complex64; N]; N]) -> Self {
        Self { entries }
    }

    /// Build from real entries.
    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut entries = [[ZERO; N]; N];
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                entries[r][c] = Complex64::new(v, 0.0);
            }
        }
        Self { entries }
    }

    pub fn zeros() -> Self {
        Self { entries: [[ZERO; N]; N] }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for k in 0..N {
            m.entries[k][k] = ONE;
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn rows(&self) -> &[[Complex64; N]; N] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros();
        for r in 0..N {
            for c in 0..N {
                out.entries[c][r] = self.entries[r][c].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|k| self.entries[k][k]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.map(|z| z * factor)
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let mut out = *self;
        for row in out.entries.iter_mut() {
            for z in row.iter_mut() {
                *z = f(*z);
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-entry distance `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(|z| z.is_finite())
    }

    /// Max-entry deviation from Hermiticity.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `self · M · self†`.
    pub fn sandwich(&self, m: &Self) -> Self {
        *self * *m * self.adjoint()
    }
}

impl<const N: usize> Default for CMat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for r in 0..N {
            for c in 0..N {
                let mut acc = ZERO;
                for k in 0..N {
                    acc += self.entries[r][k] * rhs.entries[k][c];
                }
                out.entries[r][c] = acc;
            }
        }
        out
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for r in 0..N {
            for c in 0..N {
                out.entries[r][c] += rhs.entries[r][c];
            }
        }
        out
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const N: usize> Neg for CMat<N> {
    type Output = Self;

    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl<const N: usize> fmt::Debug for CMat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for row in &self.entries {
            list.entry(row);
        }
        list.finish()
    }
}

/// `a · b`. Dimensions are fixed by the type, so mismatches cannot compile.
pub fn mul<const N: usize>(a: &CMat<N>, b: &CMat<N>) -> CMat<N> {
    *a * *b
}

pub fn adjoint<const N: usize>(a: &CMat<N>) -> CMat<N> {
    a.adjoint()
}

pub fn trace<const N: usize>(a: &CMat<N>) -> Complex64 {
    a.trace()
}

impl Mat2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self::from_rows([[a, b], [c, d]])
    }

    pub fn det(&self) -> Complex64 {
        let [[a, b], [c, d]] = self.entries;
        a * d - b * c
    }

    /// Eigenvalues of a Hermitian 2×2 matrix from its trace and determinant,
    /// in ascending order. The anti-Hermitian part is ignored.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let b = (self.entries[0][1] + self.entries[1][0].conj()) * 0.5;
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        [mean - half_gap, mean + half_gap]
    }
}

pub fn sigma_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for ar in 0..2 {
        for ac in 0..2 {
            for br in 0..2 {
                for bc in 0..2 {
                    out.entries[2 * ar + br][2 * ac + bc] = a.entries[ar][ac] * b.entries[br][bc];
                }
            }
        }
    }
    out
}

/// Trace over the first tensor factor of a 4×4 operator.
pub fn partial_trace_first(m: &Mat4) -> Mat2 {
    let mut out = Mat2::zeros();
    for r in 0..2 {
        for c in 0..2 {
            out.entries[r][c] = m.entries[r][c] + m.entries[2 + r][2 + c];
        }
    }
    out
}

/// Outcome of a dichotomic measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn from_sign(sign: f64) -> Result<Self> {
        if sign == 1.0 {
            Ok(Outcome::Plus)
        } else if sign == -1.0 {
            Ok(Outcome::Minus)
        } else {
            Err(Error::Usage(format!("outcome must be +1 or -1, got {sign}")))
        }
    }

    /// Index into two-entry tables: `Plus → 0`, `Minus → 1`.
    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        })
    }
}

/// Spectral projector `(I + m·M)/2` of a dichotomic observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projector {
    observable: Mat2,
    outcome: Outcome,
    mat: Mat2,
}

impl Projector {
    pub fn new(observable: &Mat2, outcome: Outcome) -> Result<Self> {
        check_dichotomic(observable)?;
        let mat = (Mat2::identity() + observable.scale_real(outcome.sign())).scale_real(0.5);
        Ok(Self { observable: *observable, outcome, mat })
    }

    pub fn observable(&self) -> &Mat2 {
        &self.observable
    }

    pub fn outcome(&self) -> Outcome {
        self.outcome
    }

    pub fn mat(&self) -> &Mat2 {
        &self.mat
    }
}

/// Verify `M = M†` and `M² = I` to [`STATE_TOL`].
pub fn check_dichotomic(observable: &Mat2) -> Result<()> {
    let herm = observable.hermiticity_residual();
    let square = (*observable * *observable).max_abs_diff(&Mat2::identity());
    let residual = herm.max(square);
    if residual > STATE_TOL || !observable.is_finite() {
        return Err(Error::NonDichotomic { residual });
    }
    Ok(())
}

pub fn projector(observable: &Mat2, outcome: Outcome) -> Result<Projector> {
    Projector::new(observable, outcome)
}

/// Qubit density operator. May carry a non-unit weight (trace) until
/// [`QubitDensity::normalize`] is called.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensity {
    mat: Mat2,
}

impl QubitDensity {
    /// Wrap a matrix after checking Hermiticity and positivity up to [`STATE_TOL`].
    pub fn new(mat: Mat2) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::Domain("density matrix has non-finite entries".into()));
        }
        // Relative to the weight so unnormalized states are not rejected on scale alone.
        let scale = mat.trace().re.abs().max(1.0);
        let herm = mat.hermiticity_residual();
        if herm > STATE_TOL * scale {
            return Err(Error::Domain(format!("density matrix is not Hermitian (residual {herm:e})")));
        }
        let [low, _] = mat.hermitian_eigenvalues();
        if low < -STATE_TOL * scale {
            return Err(Error::Domain(format!(
                "density matrix is not positive semidefinite (eigenvalue {low:e})"
            )));
        }
        Ok(Self { mat })
    }

    pub(crate) fn new_unchecked(mat: Mat2) -> Self {
        Self { mat }
    }

    pub fn maximally_mixed() -> Self {
        Self { mat: Mat2::identity().scale_real(0.5) }
    }

    /// `|ψ⟩⟨ψ|` for `ψ = (c0, c1)`; the weight is `|c0|² + |c1|²`.
    pub fn from_pure(c0: Complex64, c1: Complex64) -> Self {
        let mat = Mat2::new(c0 * c0.conj(), c0 * c1.conj(), c1 * c0.conj(), c1 * c1.conj());
        Self { mat }
    }

    pub fn mat(&self) -> &Mat2 {
        &self.mat
    }

    pub fn weight(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn normalize(&self) -> Result<Self> {
        let weight = self.weight();
        if weight.is_nan() || weight < 1e-14 {
            return Err(Error::DegenerateWeight { weight });
        }
        Ok(Self { mat: self.mat.scale_real(1.0 / weight) })
    }

    /// `U ρ U†` without renormalization.
    pub fn evolve(&self, propagator: &Mat2) -> Self {
        Self { mat: propagator.sandwich(&self.mat) }
    }

    /// `Π ρ Π` without renormalization.
    pub fn project(&self, projector: &Projector) -> Self {
        Self { mat: projector.mat().sandwich(&self.mat) }
    }

    /// `Tr[ρ Π]`.
    pub fn probability(&self, projector: &Projector) -> f64 {
        (self.mat * *projector.mat()).trace().re
    }

    pub fn purity(&self) -> f64 {
        (self.mat * self.mat).trace().re
    }
}

/// Trace distance `½‖a − b‖₁` between two Hermitian 2×2 matrices.
pub fn trace_distance(a: &Mat2, b: &Mat2) -> f64 {
    let [l0, l1] = (*a - *b).hermitian_eigenvalues();
    0.5 * (l0.abs() + l1.abs())
}
