//! Inner-outer factorisation of `Z(f; z)`.
//!
//! The outer part is `exp(Phi)`, where `Phi` is the analytic completion of
//! `ln|Theta|` on the circle. `Phi` is computed from the Fourier coefficients
//! of `ln|Theta|` (a cepstrum). Zeros of the truncated polynomial that lie
//! close to the circle make `ln|Theta|` nearly singular and spoil the FFT, so
//! their factors are split off first: `ln|e^{it} - r|` has the exact
//! completion `ln|r| + ln(1 - z/r)` for `|r| >= 1` and `ln(1 - r* z)` for
//! `|r| < 1`, and only the smooth remainder goes through the FFT.
//!
//! The inner part is the series quotient `Z / Z_out`. Zeros inside the disk
//! are found from the companion matrix of the truncated polynomial.

use num_complex::Complex64;
use serde::Serialize;

use crate::disk_analytic::{boundary, boundary_values, check_grid, grid_fourier, BoundarySamples};
use crate::fock_state::FockState;
use crate::roots::{cluster, polynomial_roots};
use crate::series;
use crate::{Error, Result};

/// Default threshold on the outer defect below which a state is outer.
pub const DEFAULT_OUTER_TOL: f64 = 1e-6;
/// Default margin: roots with `1 - margin <= |gamma| < 1` are unreliable.
pub const DEFAULT_EDGE_MARGIN: f64 = 1e-3;
/// Roots closer than this are merged into one zero with multiplicity.
pub const CLUSTER_RADIUS: f64 = 1e-7;
/// Allowed deviation of `|Theta_in|` from one.
pub const INNER_MODULUS_TOL: f64 = 1e-6;
/// Amplitudes below this fraction of the largest are treated as exact zeros
/// when stripping the leading monomial `z^k`.
pub const LEADING_ZERO_RELATIVE: f64 = 1e-12;

/// Tuning for [`factorize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorConfig {
    /// Boundary grid size `M` (power of two, `M >= 2N`).
    pub grid: usize,
    pub outer_tol: f64,
    pub edge_margin: f64,
}

impl FactorConfig {
    /// Default settings with `M = 4N`, rounded up to a power of two.
    pub fn for_truncation(n: usize) -> Self {
        Self {
            grid: (4 * n).next_power_of_two(),
            outer_tol: DEFAULT_OUTER_TOL,
            edge_margin: DEFAULT_EDGE_MARGIN,
        }
    }
}

/// Taylor coefficients of `Phi(f; z) = ln Z_out(f; z)`.
#[derive(Debug, Clone, Serialize)]
pub struct PhiSeries {
    pub phi: Vec<Complex64>,
    pub grid_size: usize,
}

impl PhiSeries {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        series::eval(&self.phi, z)
    }

    /// `Phi(0)`, the mean of `ln|Theta|` over the circle.
    pub fn mean_log_modulus(&self) -> f64 {
        self.phi[0].re
    }
}

/// A zero `gamma` of the Blaschke product with multiplicity `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlaschkeZero {
    pub gamma: Complex64,
    pub multiplicity: usize,
}

/// Zeros of `Z(f; z)` in the disk.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroSet {
    /// Order `k` of the leading monomial `z^k` (zero at the origin).
    pub leading_order: usize,
    /// Zeros with `0 < |gamma| < 1 - edge_margin`.
    pub zeros: Vec<BlaschkeZero>,
    /// Roots with `1 - edge_margin <= |gamma| < 1`; indistinguishable from
    /// truncation artefacts and therefore not part of `zeros`.
    pub near_edge: Vec<Complex64>,
}

impl ZeroSet {
    /// `sum_k p_k ln(1/|gamma_k|)` over the reliable zeros.
    pub fn log_depth(&self) -> f64 {
        self.zeros
            .iter()
            .map(|z| -(z.multiplicity as f64) * z.gamma.norm().ln())
            .sum()
    }
}

/// Result of [`factorize`].
#[derive(Debug, Clone)]
pub struct FactoredState {
    pub truncation: usize,
    pub grid_size: usize,
    pub phi: PhiSeries,
    pub outer_coeffs: Vec<Complex64>,
    pub inner_coeffs: Vec<Complex64>,
    pub zeros: ZeroSet,
    /// Outer defect of `Z / z^k` (`k` = leading order); see [`outer_defect`].
    pub outer_defect: f64,
    /// `outer_defect - sum p_k ln(1/|gamma_k|)`: the outer defect of the
    /// inner part divided by its Blaschke product.
    pub singular_defect: f64,
    pub singular_suspected: bool,
    /// `max_n |(outer * inner)_n - f_n*|`.
    pub reconstruction_residual: f64,
    /// `max_j ||Theta_in(theta_j)| - 1|`.
    pub inner_boundary_deviation: f64,
    /// Largest change of an outer coefficient when the grid is doubled.
    pub grid_refinement_delta: f64,
    pub notes: Vec<String>,
}

impl FactoredState {
    /// True when the state is outer to within `outer_tol`.
    pub fn is_outer(&self, outer_tol: f64) -> bool {
        self.zeros.leading_order == 0 && self.outer_defect < outer_tol
    }

    pub fn report(&self) -> FactorReport {
        FactorReport {
            outer_coeffs: self.outer_coeffs.clone(),
            inner_coeffs: self.inner_coeffs.clone(),
            zeros: self.zeros.zeros.clone(),
            near_edge_zeros: self.zeros.near_edge.clone(),
            leading_monomial: self.zeros.leading_order,
            outer_defect: self.outer_defect,
            singular_defect: self.singular_defect,
            reconstruction_residual: self.reconstruction_residual,
            inner_boundary_deviation: self.inner_boundary_deviation,
            grid_refinement_delta: self.grid_refinement_delta,
            singular_suspected: self.singular_suspected,
            grid: GridInfo {
                n: self.truncation,
                m: self.grid_size,
            },
            notes: self.notes.clone(),
        }
    }
}

/// JSON form of a factorisation. Complex numbers serialise as `[re, im]`.
#[derive(Debug, Clone, Serialize)]
pub struct FactorReport {
    pub outer_coeffs: Vec<Complex64>,
    pub inner_coeffs: Vec<Complex64>,
    pub zeros: Vec<BlaschkeZero>,
    pub near_edge_zeros: Vec<Complex64>,
    pub leading_monomial: usize,
    pub outer_defect: f64,
    pub singular_defect: f64,
    pub reconstruction_residual: f64,
    pub inner_boundary_deviation: f64,
    pub grid_refinement_delta: f64,
    pub singular_suspected: bool,
    pub grid: GridInfo,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridInfo {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
}

/// Plain cepstral `Phi`: `phi_0 = c_0`, `phi_k = 2 c_k`, with `c_k` the
/// Fourier coefficients of `ln|Theta|` on the sample grid.
pub fn compute_phi(samples: &BoundarySamples, k: usize) -> Result<PhiSeries> {
    compute_phi_deflated(samples, &[], k)
}

/// Cepstral `Phi` with the factors `(e^{it} - r)` of the given roots removed
/// from `ln|Theta|` before the FFT and added back analytically.
pub fn compute_phi_deflated(
    samples: &BoundarySamples,
    roots: &[Complex64],
    k: usize,
) -> Result<PhiSeries> {
    let m = samples.grid_size;
    if k == 0 || k > m / 2 {
        return Err(Error::InvalidArgument(format!(
            "series length {k} must be in 1..={}",
            m / 2
        )));
    }
    let remainder: Vec<f64> = samples
        .theta
        .iter()
        .zip(&samples.log_abs)
        .map(|(&t, &l)| {
            let e = Complex64::from_polar(1.0, t);
            l - roots.iter().map(|&r| (e - r).norm().ln()).sum::<f64>()
        })
        .collect();
    let c = grid_fourier(&remainder, k);
    let mut phi: Vec<Complex64> = c
        .iter()
        .enumerate()
        .map(|(i, &ck)| if i == 0 { Complex64::new(ck.re, 0.0) } else { 2.0 * ck })
        .collect();
    for &r in roots {
        let w = if r.norm() >= 1.0 {
            phi[0] += r.norm().ln();
            r.inv()
        } else {
            r.conj()
        };
        for (p, l) in phi.iter_mut().zip(series::log_one_minus(w, k)).skip(1) {
            *p += l;
        }
    }
    Ok(PhiSeries { phi, grid_size: m })
}

/// Outer part `exp(Phi)` to `len` Taylor coefficients. `b_0 = e^{phi_0} > 0`.
pub fn outer_part(phi: &PhiSeries, len: usize) -> Vec<Complex64> {
    series::exp(&phi.phi, len)
}

/// Inner part `Z / Z_out` with its boundary deviation `max ||Theta_in| - 1|`.
#[derive(Debug, Clone)]
pub struct InnerPart {
    pub coeffs: Vec<Complex64>,
    pub boundary_deviation: f64,
}

/// Series quotient of `f*` by the outer coefficients.
///
/// Fails with [`Error::IllConditioned`] when `|Theta_in|` misses one by more
/// than [`INNER_MODULUS_TOL`] on the boundary; [`factorize`] reports the
/// same condition as a flag instead.
pub fn inner_part(state: &FockState, outer: &[Complex64]) -> Result<InnerPart> {
    let part = divide_out(state, outer)?;
    if part.boundary_deviation > INNER_MODULUS_TOL {
        return Err(Error::IllConditioned(format!(
            "inner part deviates from unit modulus by {:e} on the circle",
            part.boundary_deviation
        )));
    }
    Ok(part)
}

fn divide_out(state: &FockState, outer: &[Complex64]) -> Result<InnerPart> {
    if outer.first().is_none_or(|b| b.norm() == 0.0) {
        return Err(Error::InvalidArgument("outer part vanishes at the origin".into()));
    }
    let n = state.len();
    let coeffs = series::divide(&state.analytic_coeffs(), outer, n);
    let m = (4 * n).next_power_of_two();
    let boundary_deviation = boundary_values(&coeffs, m)?
        .iter()
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(InnerPart {
        coeffs,
        boundary_deviation,
    })
}

/// Index of the first amplitude that is not (relatively) zero.
pub fn leading_order(coeffs: &[Complex64]) -> Option<usize> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    coeffs
        .iter()
        .position(|c| c.norm() > LEADING_ZERO_RELATIVE * scale)
}

/// Width of the annulus `| |r| - 1 | <= band` whose roots are deflated before
/// the FFT. Outside it, `ln|1 - w e^{it}|` has Fourier coefficients below
/// `e^{-32}` at the grid's Nyquist index.
pub fn deflation_band(grid: usize) -> f64 {
    (32.0 / grid as f64).min(0.25)
}

/// Roots of the stripped polynomial that fall within the deflation band.
fn near_circle(roots: &[Complex64], band: f64) -> Vec<Complex64> {
    roots
        .iter()
        .copied()
        .filter(|r| (r.norm() - 1.0).abs() <= band)
        .collect()
}

struct Stripped {
    order: usize,
    leading: Complex64,
    roots: Vec<Complex64>,
}

fn strip(state: &FockState) -> Result<Stripped> {
    let a = state.analytic_coeffs();
    let order = leading_order(&a)
        .ok_or_else(|| Error::Degenerate("all amplitudes vanish".into()))?;
    let roots = polynomial_roots(&a[order..]);
    Ok(Stripped {
        order,
        leading: a[order],
        roots,
    })
}

/// Outer-function criterion: `(1/2pi) int ln|Theta| - ln|Z(f; 0)|`.
///
/// Zero exactly for outer states, `sum p_k ln(1/|gamma_k|)` for a Blaschke
/// inner part. Returns `+inf` when `Z(f; 0) = 0`. Negative values above
/// `-1e-8` are quadrature noise and clamp to zero.
pub fn outer_defect(state: &FockState, samples: &BoundarySamples) -> Result<f64> {
    let stripped = strip(state)?;
    if stripped.order > 0 {
        return Ok(f64::INFINITY);
    }
    let band = deflation_band(samples.grid_size);
    let phi = compute_phi_deflated(samples, &near_circle(&stripped.roots, band), 1)?;
    Ok(clamp_defect(phi.mean_log_modulus() - stripped.leading.norm().ln()))
}

fn clamp_defect(d: f64) -> f64 {
    if (-1e-8..0.0).contains(&d) {
        0.0
    } else {
        d
    }
}

/// Zeros of the truncated polynomial `sum f_n* z^n` inside the unit disk.
pub fn blaschke_zeros(state: &FockState, edge_margin: f64) -> Result<ZeroSet> {
    let stripped = strip(state)?;
    Ok(classify_zeros(&stripped, edge_margin))
}

fn classify_zeros(stripped: &Stripped, edge_margin: f64) -> ZeroSet {
    let inside: Vec<Complex64> = stripped
        .roots
        .iter()
        .copied()
        .filter(|r| r.norm() < 1.0 - edge_margin)
        .collect();
    let near_edge = stripped
        .roots
        .iter()
        .copied()
        .filter(|r| r.norm() >= 1.0 - edge_margin && r.norm() < 1.0)
        .collect();
    let zeros = cluster(&inside, CLUSTER_RADIUS)
        .into_iter()
        .map(|(gamma, multiplicity)| BlaschkeZero {
            gamma,
            multiplicity,
        })
        .collect();
    ZeroSet {
        leading_order: stripped.order,
        zeros,
        near_edge,
    }
}

/// Taylor coefficients of `prod_k (gamma_k*/|gamma_k| (gamma_k - z)/(1 - gamma_k* z))^{p_k}`.
///
/// A zero at the origin must be expressed as a monomial by the caller.
pub fn blaschke_product(zeros: &[BlaschkeZero], len: usize) -> Result<Vec<Complex64>> {
    let one = Complex64::new(1.0, 0.0);
    let mut out = vec![Complex64::new(0.0, 0.0); len.max(1)];
    out[0] = one;
    for z in zeros {
        let g = z.gamma;
        let r = g.norm();
        if r == 0.0 {
            return Err(Error::InvalidArgument(
                "zero at the origin: use the monomial z^p".into(),
            ));
        }
        if !(r < 1.0) {
            return Err(Error::Domain(format!("|gamma| = {r} is not inside the disk")));
        }
        let unit = g.conj() / r;
        let factor = series::divide(&[unit * g, -unit], &[one, -g.conj()], len);
        for _ in 0..z.multiplicity {
            out = series::multiply(&out, &factor, len);
        }
    }
    out.truncate(len);
    Ok(out)
}

/// Runs boundary sampling, the deflated cepstrum, outer/inner split and zero
/// extraction.
pub fn factorize(state: &FockState, config: &FactorConfig) -> Result<FactoredState> {
    let n = state.len();
    let m = config.grid;
    check_grid(m, 2 * n)?;
    let a = state.analytic_coeffs();
    let stripped = strip(state)?;
    let band = deflation_band(m);
    let deflate = near_circle(&stripped.roots, band);

    let samples = boundary(state, m)?;
    let phi = compute_phi_deflated(&samples, &deflate, m / 2)?;
    let outer = outer_part(&phi, n);
    let inner = divide_out(state, &outer)?;

    let fine = boundary(state, 2 * m)?;
    let fine_outer = outer_part(&compute_phi_deflated(&fine, &deflate, m)?, n);
    let grid_refinement_delta = outer
        .iter()
        .zip(&fine_outer)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);

    let reconstruction_residual = series::multiply(&outer, &inner.coeffs, n)
        .iter()
        .zip(&a)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);

    let zeros = classify_zeros(&stripped, config.edge_margin);
    let outer_defect = clamp_defect(phi.mean_log_modulus() - stripped.leading.norm().ln());
    let singular_defect = outer_defect - zeros.log_depth();
    let singular_suspected = singular_defect > config.outer_tol;

    let mut notes = Vec::new();
    if stripped.order > 0 {
        notes.push(format!(
            "Z(f;0) = 0: leading monomial z^{} factored into the inner part before the outer criterion",
            stripped.order
        ));
    }
    if !zeros.near_edge.is_empty() {
        notes.push(format!(
            "{} root(s) within {} of the unit circle excluded from the Blaschke product",
            zeros.near_edge.len(),
            config.edge_margin
        ));
    }
    if inner.boundary_deviation > INNER_MODULUS_TOL {
        notes.push(format!(
            "ill-conditioned: |Theta_in| deviates from 1 by {:e}",
            inner.boundary_deviation
        ));
    }
    if grid_refinement_delta > INNER_MODULUS_TOL {
        notes.push(format!(
            "outer coefficients move by {grid_refinement_delta:e} when the grid is doubled"
        ));
    }

    Ok(FactoredState {
        truncation: n,
        grid_size: m,
        phi,
        outer_coeffs: outer,
        inner_coeffs: inner.coeffs,
        zeros,
        outer_defect,
        singular_defect,
        singular_suspected,
        reconstruction_residual,
        inner_boundary_deviation: inner.boundary_deviation,
        grid_refinement_delta,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_state::{
        make_blaschke_state, make_number, make_pi_superposition, make_su11_cs, superpose,
    };
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Schwarz integral of ln|Z| by a direct (non-FFT) fine trapezoid sum.
    fn schwarz_oracle(a: &[Complex64], z: Complex64) -> Complex64 {
        let m = 1 << 14;
        let mut acc = c(0.0, 0.0);
        for j in 0..m {
            let t = 2.0 * PI * (j as f64 + 0.5) / m as f64;
            let e = Complex64::from_polar(1.0, t);
            let l = series::eval(a, e).norm().ln();
            acc += (e + z) / (e - z) * l;
        }
        acc / m as f64
    }

    #[test]
    fn coherent_state_phi_closed_form() {
        let state = make_su11_cs(c(0.5, 0.0), 128).unwrap();
        let samples = boundary(&state, 512).unwrap();
        let phi = compute_phi(&samples, 8).unwrap();
        assert!((phi.phi[0].re - 0.5 * 0.75f64.ln()).abs() < 1e-12);
        assert!((phi.phi[1] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((phi.phi[2] - c(0.125, 0.0)).norm() < 1e-12);
        assert!(outer_defect(&state, &samples).unwrap() < 1e-12);
    }

    #[test]
    fn phi_matches_schwarz_integral() {
        let state = make_blaschke_state(c(0.3, -0.4), 64).unwrap();
        let fs = factorize(&state, &FactorConfig::for_truncation(64)).unwrap();
        for z in [c(0.1, 0.2), c(-0.5, 0.3), c(0.0, -0.6)] {
            let want = schwarz_oracle(&state.analytic_coeffs(), z);
            assert!((fs.phi.eval(z) - want).norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn blaschke_state_has_one_zero() {
        let state = make_blaschke_state(c(0.5, 0.0), 256).unwrap();
        let fs = factorize(&state, &FactorConfig::for_truncation(256)).unwrap();
        assert!((fs.outer_defect - 2f64.ln()).abs() < 1e-8);
        assert_eq!(fs.zeros.zeros.len(), 1);
        assert!((fs.zeros.zeros[0].gamma - c(0.5, 0.0)).norm() < 1e-8);
        assert!(fs.singular_defect.abs() < 1e-8);
        assert!(!fs.singular_suspected);
        assert!(fs.inner_boundary_deviation < 1e-8);
    }

    #[test]
    fn pi_superposition_zero() {
        let state = make_pi_superposition(c(0.8, 0.0), 0.75 * PI, 256).unwrap();
        let fs = factorize(&state, &FactorConfig::for_truncation(256)).unwrap();
        assert_eq!(fs.zeros.zeros.len(), 1);
        let g = fs.zeros.zeros[0].gamma;
        // gamma = i cot(tau/2) / z0*
        let want = c(0.0, 1.0 / (0.75 * PI / 2.0).tan() / 0.8);
        assert!((g - want).norm() < 1e-8, "{g}");
        assert!((fs.outer_defect + want.norm().ln()).abs() < 1e-8);
    }

    #[test]
    fn boundary_zero_state_is_outer() {
        let s0 = make_number(0, 16).unwrap();
        let s8 = make_number(8, 16).unwrap();
        let state = superpose(&[s0, s8], &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let fs = factorize(&state, &FactorConfig {
            grid: 512,
            ..FactorConfig::for_truncation(16)
        })
        .unwrap();
        assert!(fs.outer_defect < 1e-10, "{}", fs.outer_defect);
        assert!((fs.inner_coeffs[0] - c(1.0, 0.0)).norm() < 1e-10);
        assert!(fs.inner_coeffs[1..].iter().all(|x| x.norm() < 1e-10));
        assert!(fs.zeros.zeros.is_empty());
    }

    #[test]
    fn number_state_is_monomial() {
        let state = make_number(3, 16).unwrap();
        let fs = factorize(&state, &FactorConfig::for_truncation(16)).unwrap();
        assert_eq!(fs.zeros.leading_order, 3);
        assert!(fs.outer_defect.abs() < 1e-12);
        assert!((fs.inner_coeffs[3] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(!fs.notes.is_empty());
        let samples = boundary(&state, 64).unwrap();
        assert_eq!(outer_defect(&state, &samples).unwrap(), f64::INFINITY);
    }

    #[test]
    fn blaschke_product_series() {
        let g = c(0.2, 0.3);
        let b = blaschke_product(&[BlaschkeZero { gamma: g, multiplicity: 2 }], 64).unwrap();
        for z in [c(0.1, 0.0), c(-0.3, 0.4)] {
            let f = g.conj() / g.norm() * (g - z) / (1.0 - g.conj() * z);
            assert!((series::eval(&b, z) - f * f).norm() < 1e-13);
        }
        assert!(blaschke_product(&[BlaschkeZero { gamma: c(0.0, 0.0), multiplicity: 1 }], 4).is_err());
        assert!(blaschke_product(&[BlaschkeZero { gamma: c(1.0, 0.0), multiplicity: 1 }], 4).is_err());
    }

    #[test]
    fn inner_part_rejects_wrong_outer() {
        let state = make_su11_cs(c(0.5, 0.0), 64).unwrap();
        let bogus = vec![c(1.0, 0.0)];
        assert!(matches!(inner_part(&state, &bogus), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn rejects_small_grid() {
        let state = make_su11_cs(c(0.5, 0.0), 64).unwrap();
        let cfg = FactorConfig { grid: 64, ..FactorConfig::for_truncation(64) };
        assert!(matches!(factorize(&state, &cfg), Err(Error::Aliasing { .. })));
    }

    #[test]
    fn report_serialises() {
        let state = make_blaschke_state(c(0.5, 0.0), 32).unwrap();
        let fs = factorize(&state, &FactorConfig::for_truncation(32)).unwrap();
        let v = serde_json::to_value(fs.report()).unwrap();
        assert_eq!(v["grid"]["N"], 32);
        assert_eq!(v["zeros"][0]["multiplicity"], 1);
        assert!(v["zeros"][0]["gamma"][0].as_f64().unwrap() > 0.49);
    }
}
