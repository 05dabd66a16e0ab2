//! Published closed forms, kept separate from the simulation so they can act
//! as independent references.
//!
//! `sec` below is `1/cos α`; every PT formula assumes `ρ(0) = I/2` with `σ_y`
//! measurements.

/// Unitary `L13 = 2 cos 2t − cos 4t`.
pub fn unitary_l13(t: f64) -> f64 {
    2.0 * (2.0 * t).cos() - (4.0 * t).cos()
}

/// Unitary three-time variant for the pure state `(θ, φ)`.
pub fn unitary_v3(t: f64, theta: f64, phi: f64) -> f64 {
    let sin2 = t.sin().powi(2);
    let c2th = (2.0 * theta).cos();
    (2.0 * t).cos() * (1.0 + 4.0 * sin2 * c2th) + 2.0 * sin2 * c2th
        - (4.0 * t).sin() * (2.0 * theta).sin() * phi.sin()
}

fn trig(alpha: f64, t: f64) -> (f64, f64, impl Fn(f64) -> f64) {
    let sec = 1.0 / alpha.cos();
    (sec, t.sin(), move |k: f64| (k * t).cos())
}

/// Normalization of the `⟨M1M2⟩` context.
pub fn norm_12(alpha: f64, t: f64) -> f64 {
    let (sec, s, c) = trig(alpha, t);
    0.5 * (1024.0 * sec.powi(6) * s.powi(6) * c(1.0).powi(4)
        + 64.0 * sec.powi(4) * s.powi(4) * c(1.0).powi(2) * (2.0 * c(2.0) + 5.0 * c(4.0) - 1.0)
        + 4.0 * sec.powi(2) * s.powi(2) * (2.0 * c(2.0) - c(4.0) + 4.0 * (c(6.0) + c(8.0) + 1.0))
        + c(2.0)
        + c(10.0))
}

/// Normalization of the `⟨M2M3⟩` context.
pub fn norm_23(alpha: f64, t: f64) -> f64 {
    let (sec, s, c) = trig(alpha, t);
    128.0 * sec.powi(6) * s.powi(6) * (2.0 * c(1.0) + c(3.0)).powi(2)
        + 8.0 * sec.powi(4) * s.powi(4) * c(4.0) * (24.0 * c(2.0) + 10.0 * c(4.0) + 15.0)
        + 2.0
            * sec.powi(2)
            * s.powi(2)
            * (2.0 * c(4.0) - 1.0)
            * (7.0 * c(2.0) + 4.0 * c(4.0) + 4.0 * c(6.0) + 3.0)
        + c(6.0).powi(2)
}

/// Normalization of the `⟨M1M3⟩` context.
pub fn norm_13(alpha: f64, t: f64) -> f64 {
    let (sec, s, c) = trig(alpha, t);
    0.5 * (256.0 * sec.powi(6) * s.powi(6) * (2.0 * c(1.0) + c(3.0)).powi(2)
        + 16.0
            * sec.powi(4)
            * s.powi(4)
            * (6.0 * c(2.0) + 13.0 * c(4.0) + 12.0 * c(6.0) + 5.0 * c(8.0) + 1.0)
        + 4.0 * sec.powi(2) * s.powi(2) * (7.0 * c(2.0) + c(6.0) + 4.0 * (c(8.0) + c(10.0) + 1.0))
        + c(4.0)
        + c(12.0))
}

/// Numerator of `⟨M1M2⟩`; divide by [`norm_12`].
pub fn corr_12_numerator(alpha: f64, t: f64) -> f64 {
    let (sec, s, c) = trig(alpha, t);
    c(4.0)
        + 512.0 * sec.powi(6) * s.powi(6) * c(1.0).powi(4)
        + 128.0 * sec.powi(4) * s.powi(4) * c(1.0).powi(4) * (4.0 * c(2.0) - 3.0)
        + 2.0 * sec.powi(2) * s.powi(2) * (2.0 * c(4.0) - 1.0) * (2.0 * c(2.0) + 2.0 * c(4.0) - 1.0)
}

/// Numerator of `⟨M2M3⟩`; divide by [`norm_23`].
pub fn corr_23_numerator(alpha: f64, t: f64) -> f64 {
    let (sec, s, c) = trig(alpha, t);
    128.0 * sec.powi(6) * s.powi(6) * (2.0 * c(1.0) + c(3.0)).powi(2)
        + 8.0 * sec.powi(4) * s.powi(4) * (6.0 * c(2.0) + 10.0 * c(4.0) + 10.0 * c(6.0) + 4.0 * c(8.0) + 1.0)
        + c(6.0)
        + 4.0 * sec.powi(2) * s.powi(2) * (c(2.0) + c(4.0) - c(6.0) + c(8.0) + c(10.0) + 1.0)
}

/// Numerator of `⟨M1M3⟩`; divide by [`norm_13`].
pub fn corr_13_numerator(alpha: f64, t: f64) -> f64 {
    let (sec, s, c) = trig(alpha, t);
    128.0 * sec.powi(6) * s.powi(6) * (2.0 * c(1.0) + c(3.0)).powi(2)
        + 8.0 * sec.powi(4) * s.powi(4) * (4.0 * c(2.0) + 12.0 * c(4.0) + 10.0 * c(6.0) + 4.0 * c(8.0) - 1.0)
        + c(4.0)
        - 8.0 * sec.powi(2) * s.powi(4) * (8.0 * c(2.0) + 10.0 * c(4.0) + 6.0 * c(6.0) + 2.0 * c(8.0) + 3.0)
}

pub fn corr_12(alpha: f64, t: f64) -> f64 {
    corr_12_numerator(alpha, t) / norm_12(alpha, t)
}

pub fn corr_23(alpha: f64, t: f64) -> f64 {
    corr_23_numerator(alpha, t) / norm_23(alpha, t)
}

pub fn corr_13(alpha: f64, t: f64) -> f64 {
    corr_13_numerator(alpha, t) / norm_13(alpha, t)
}

/// `corr_12 + corr_23 − corr_13`.
pub fn pt_l13(alpha: f64, t: f64) -> f64 {
    corr_12(alpha, t) + corr_23(alpha, t) - corr_13(alpha, t)
}
