//! Truncated Fock-space states and the catalog of named states.
//!
//! A state is stored by its number-basis amplitudes `f_n = <n|f>`. The disk
//! representation works with the conjugates `f_n*`; see
//! [`FockState::analytic_coeffs`].

use num_complex::Complex64;
use serde::Serialize;

use crate::special::{ln_bessel_i0, ln_factorial};
use crate::{Error, Result};

/// Default truncation `N`.
pub const DEFAULT_TRUNCATION: usize = 256;

/// Default closest approach of an SU(1,1) label to the unit circle.
pub const DEFAULT_EDGE_MARGIN: f64 = 1e-6;

/// Tail bound `|u|^N / N!` required of Barut-Girardello truncations.
pub const BG_TAIL_BOUND: f64 = 1e-14;

const NORM_SLACK: f64 = 1e-12;

/// Finite vector of amplitudes `f_0 .. f_{N-1}` plus the analytically known
/// mass `norm_defect` that the truncation discards.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockState {
    coeffs: Vec<Complex64>,
    norm_defect: f64,
}

impl FockState {
    /// Wraps explicit amplitudes. Fails if the vector is empty or its norm
    /// exceeds one.
    pub fn from_coeffs(coeffs: Vec<Complex64>, norm_defect: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Truncation("a state needs at least one amplitude".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if norm > 1.0 + NORM_SLACK {
            return Err(Error::InvalidArgument(format!(
                "sum |f_n|^2 = {norm} exceeds one"
            )));
        }
        Ok(Self {
            coeffs,
            norm_defect: norm_defect.max(0.0),
        })
    }

    /// Rescales arbitrary amplitudes to unit norm (no phase change).
    pub fn normalized(coeffs: Vec<Complex64>) -> Result<Self> {
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-12) {
            return Err(Error::Degenerate(format!("norm {norm} is numerically zero")));
        }
        Self::from_coeffs(coeffs.into_iter().map(|c| c / norm).collect(), 0.0)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Truncation `N`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn norm_defect(&self) -> f64 {
        self.norm_defect
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Taylor coefficients `f_n*` of the disk function `Z(f; z)`.
    pub fn analytic_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.conj()).collect()
    }

    /// `<self|other>` over the common support.
    pub fn inner_product(&self, other: &FockState) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Copy zero-padded (or cut) to `len` amplitudes. Cutting moves the
    /// discarded mass into `norm_defect`.
    pub fn resized(&self, len: usize) -> FockState {
        let mut coeffs = self.coeffs.clone();
        let dropped: f64 = coeffs.iter().skip(len).map(|c| c.norm_sqr()).sum();
        coeffs.resize(len.max(1), Complex64::new(0.0, 0.0));
        FockState {
            coeffs,
            norm_defect: self.norm_defect + dropped,
        }
    }

}

/// Number state `|m>`.
pub fn make_number(m: usize, truncation: usize) -> Result<FockState> {
    if m >= truncation {
        return Err(Error::Truncation(format!(
            "number state |{m}> does not fit truncation N = {truncation}"
        )));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); truncation];
    coeffs[m] = Complex64::new(1.0, 0.0);
    FockState::from_coeffs(coeffs, 0.0)
}

/// Perelomov SU(1,1) coherent state `|z0>`, amplitudes `(1-|z0|^2)^{1/2} z0^n`.
pub fn make_su11_cs(z0: Complex64, truncation: usize) -> Result<FockState> {
    make_su11_cs_with_margin(z0, truncation, DEFAULT_EDGE_MARGIN)
}

pub fn make_su11_cs_with_margin(
    z0: Complex64,
    truncation: usize,
    margin: f64,
) -> Result<FockState> {
    check_truncation(truncation)?;
    let r = z0.norm();
    if !(r <= 1.0 - margin) {
        return Err(Error::IllConditioned(format!(
            "|z0| = {r} is within {margin} of the unit circle"
        )));
    }
    // f_{n+1} = z0 f_n, so the lowering relation holds bit for bit.
    let coeffs = std::iter::successors(Some(Complex64::new((1.0 - r * r).sqrt(), 0.0)), |f| {
        Some(f * z0)
    })
    .take(truncation)
    .collect();
    FockState::from_coeffs(coeffs, r.powi(2 * truncation as i32))
}

/// Barut-Girardello state `|u0>`, amplitudes `I0(2|u0|)^{-1/2} u0^n / n!`.
pub fn make_bg(u0: Complex64, truncation: usize) -> Result<FockState> {
    check_truncation(truncation)?;
    let r = u0.norm();
    if r > 0.0 {
        let ln_tail = truncation as f64 * r.ln() - ln_factorial(truncation);
        if ln_tail > BG_TAIL_BOUND.ln() {
            return Err(Error::Truncation(format!(
                "|u0|^N/N! = {:e} exceeds {BG_TAIL_BOUND:e}; raise N above {truncation}",
                ln_tail.exp()
            )));
        }
    }
    let ln_norm = ln_bessel_i0(2.0 * r);
    let scale = (-0.5 * ln_norm).exp();
    let mut coeffs = Vec::with_capacity(truncation);
    let mut term = Complex64::new(scale, 0.0);
    for n in 0..truncation {
        if n > 0 {
            term = term * u0 / n as f64;
        }
        coeffs.push(term);
    }
    // Sum the discarded tail term by term; it decays factorially.
    let mut tail = 0.0;
    let mut t = term.norm_sqr();
    for n in truncation.. {
        t *= (r / n as f64).powi(2);
        tail += t;
        if t <= 1e-18 * tail || t == 0.0 {
            break;
        }
    }
    FockState::from_coeffs(coeffs, tail)
}

/// Blaschke state `(1-|z0|^2)^{-1/2}(|z0>_1 - z0* |z0>)`, whose disk function is
/// the Blaschke factor `(z - z0)/(1 - z0* z)`.
pub fn make_blaschke_state(z0: Complex64, truncation: usize) -> Result<FockState> {
    check_truncation(truncation)?;
    let r = z0.norm();
    if !(r < 1.0) {
        return Err(Error::Domain(format!("|z0| = {r} must be below one")));
    }
    let s = 1.0 - r * r;
    let mut coeffs = Vec::with_capacity(truncation);
    coeffs.push(-z0.conj());
    coeffs.extend(powers(z0, truncation - 1).map(|p| p * s));
    let defect = r.powi(2 * (truncation as i32 - 1)) * s;
    FockState::from_coeffs(coeffs, defect)
}

/// Normalisation `2[1 + (1-|z0|^2)/(1+|z0|^2) cos tau]` of `|z0> + e^{i tau}|-z0>`.
///
/// Evaluated as `4[cos^2(tau/2) + |z0|^2 sin^2(tau/2)]/(1+|z0|^2)`, which has
/// no cancellation near `tau = pi`.
pub fn pi_superposition_norm(z0: Complex64, tau: f64) -> f64 {
    let r2 = z0.norm_sqr();
    let (s, c) = (0.5 * tau).sin_cos();
    4.0 * (c * c + r2 * s * s) / (1.0 + r2)
}

/// Prefactor `2 N^{-1/2} (1-|z0|^2)^{1/2} e^{-i tau/2}` of the disk function
/// of the superposition state.
pub fn pi_superposition_amplitude(z0: Complex64, tau: f64) -> Complex64 {
    let norm = pi_superposition_norm(z0, tau);
    Complex64::from_polar(2.0 * ((1.0 - z0.norm_sqr()) / norm).sqrt(), -0.5 * tau)
}

/// Superposition `N^{-1/2}(|z0> + e^{i tau}|-z0>)` of two SU(1,1) coherent states.
pub fn make_pi_superposition(z0: Complex64, tau: f64, truncation: usize) -> Result<FockState> {
    check_truncation(truncation)?;
    let r = z0.norm();
    if !(r < 1.0) {
        return Err(Error::Domain(format!("|z0| = {r} must be below one")));
    }
    if !(-std::f64::consts::PI..=std::f64::consts::PI).contains(&tau) {
        return Err(Error::Domain(format!("tau = {tau} outside [-pi, pi]")));
    }
    let norm = pi_superposition_norm(z0, tau);
    if !(norm > 1e-12) {
        return Err(Error::Degenerate(format!(
            "superposition normalisation {norm:e} vanishes"
        )));
    }
    let r2 = r * r;
    let scale = ((1.0 - r2) / norm).sqrt();
    let phase = Complex64::from_polar(1.0, tau);
    let coeffs = powers(z0, truncation)
        .enumerate()
        .map(|(n, p)| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            (phase * sign + 1.0) * p * scale
        })
        .collect();
    // sum_{n>=N} |1 + e^{i tau}(-1)^n|^2 r^{2n} (1-r^2)/norm
    let r2n = r2.powi(truncation as i32);
    let parity = if truncation.is_multiple_of(2) { 1.0 } else { -1.0 };
    let defect = (1.0 - r2) / norm
        * (2.0 * r2n / (1.0 - r2) + 2.0 * tau.cos() * parity * r2n / (1.0 + r2));
    FockState::from_coeffs(coeffs, defect)
}

/// Coefficientwise linear combination, renormalised to unit norm.
///
/// Truncations are zero-padded to the longest input. No global phase is
/// removed.
pub fn superpose(states: &[FockState], amplitudes: &[Complex64]) -> Result<FockState> {
    if states.is_empty() || states.len() != amplitudes.len() {
        return Err(Error::InvalidArgument(format!(
            "{} states but {} amplitudes",
            states.len(),
            amplitudes.len()
        )));
    }
    let len = states.iter().map(FockState::len).max().unwrap_or(1);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
    for (state, &amp) in states.iter().zip(amplitudes) {
        for (acc, &c) in coeffs.iter_mut().zip(state.coeffs()) {
            *acc += amp * c;
        }
    }
    FockState::normalized(coeffs)
}

/// Number distribution `P(n) = |f_n|^2`.
pub fn number_distribution(state: &FockState) -> Vec<f64> {
    state.coeffs.iter().map(|c| c.norm_sqr()).collect()
}

fn check_truncation(truncation: usize) -> Result<()> {
    if truncation == 0 {
        return Err(Error::Truncation("truncation N must be at least one".into()));
    }
    Ok(())
}

fn powers(z: Complex64, count: usize) -> impl Iterator<Item = Complex64> {
    std::iter::successors(Some(Complex64::new(1.0, 0.0)), move |p| Some(p * z)).take(count)
}
