//! Number-phase Wigner function
//! `S(f; n, theta) = (1/2pi)[sum_{p=-n}^{n} e^{2ip theta} f_{n-p} f_{n+p}*
//!                   + sum_{p=-n}^{n-1} e^{i(2p+1) theta} f_{n-p-1} f_{n+p}*]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::disk_analytic::midpoint_grid;
use crate::fock_state::{pi_superposition_amplitude, FockState};
use crate::special::{bessel_i0, chebyshev_u, ln_factorial};
use crate::weyl::{apply, WeylElement};
use crate::{Error, Result};

/// Largest imaginary residue tolerated before a value is declared real.
pub const IMAG_TOL: f64 = 1e-12;

fn amp(f: &[Complex64], k: i64) -> Complex64 {
    if k < 0 {
        return Complex64::new(0.0, 0.0);
    }
    f.get(k as usize).copied().unwrap_or(Complex64::new(0.0, 0.0))
}

/// The double sum, before discarding the imaginary part.
pub fn wigner_complex(state: &FockState, n: usize, theta: f64) -> Complex64 {
    let f = state.coeffs();
    let n = n as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in -n..=n {
        acc += Complex64::from_polar(1.0, 2.0 * p as f64 * theta)
            * amp(f, n - p)
            * amp(f, n + p).conj();
    }
    for p in -n..n {
        acc += Complex64::from_polar(1.0, (2 * p + 1) as f64 * theta)
            * amp(f, n - p - 1)
            * amp(f, n + p).conj();
    }
    acc / (2.0 * PI)
}

/// `S(f; n, theta)`.
pub fn wigner(state: &FockState, n: usize, theta: f64) -> f64 {
    wigner_complex(state, n, theta).re
}

/// `(1/(2pi)^2) int dphi (1 + e^{i phi}) e^{-2in phi} Theta*(theta - phi) Theta(theta + phi)`
/// by the trapezoid rule on `points` nodes. The integrand is a trigonometric
/// polynomial, so the rule is exact once `points > 2N + 2n`.
pub fn wigner_integral(state: &FockState, n: usize, theta: f64, points: usize) -> f64 {
    let a = state.analytic_coeffs();
    let boundary = |t: f64| -> Complex64 {
        a.iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::from_polar(1.0, k as f64 * t))
            .sum()
    };
    let h = 2.0 * PI / points as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..points {
        let phi = -PI + j as f64 * h;
        let weight = (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, phi))
            * Complex64::from_polar(1.0, -2.0 * n as f64 * phi);
        acc += weight * boundary(theta - phi).conj() * boundary(theta + phi);
    }
    (acc * h).re / (4.0 * PI * PI)
}

/// `S(f; n, theta_j)` for `n = 0..=n_max` on the midpoint phase grid.
#[derive(Debug, Clone, Serialize)]
pub struct WignerGrid {
    pub n_max: usize,
    pub theta: Vec<f64>,
    /// `values[n][j] = S(f; n, theta_j)`.
    pub values: Vec<Vec<f64>>,
    pub max_imag: f64,
}

impl WignerGrid {
    /// `int S dtheta` for each `n` (trapezoid, weights `2pi/M`).
    pub fn number_marginal(&self) -> Vec<f64> {
        let h = 2.0 * PI / self.theta.len() as f64;
        self.values.iter().map(|row| row.iter().sum::<f64>() * h).collect()
    }

    /// `sum_n S` for each `theta_j`.
    pub fn phase_marginal(&self) -> Vec<f64> {
        (0..self.theta.len())
            .map(|j| self.values.iter().map(|row| row[j]).sum())
            .collect()
    }
}

/// Fourier coefficients `d_k`, `k = -2n..=2n`, of `2pi S(f; n, .)`, stored at
/// index `k + 2n`.
fn harmonics(f: &[Complex64], n: usize) -> Vec<Complex64> {
    let ni = n as i64;
    let mut d = vec![Complex64::new(0.0, 0.0); 4 * n + 1];
    for p in -ni..=ni {
        d[(2 * p + 2 * ni) as usize] = amp(f, ni - p) * amp(f, ni + p).conj();
    }
    for p in -ni..ni {
        d[(2 * p + 1 + 2 * ni) as usize] = amp(f, ni - p - 1) * amp(f, ni + p).conj();
    }
    d
}

/// Fills the grid from the double sum. Fails if any imaginary residue
/// exceeds [`IMAG_TOL`], which would indicate corrupted amplitudes.
pub fn wigner_grid(state: &FockState, n_max: usize, m: usize) -> Result<WignerGrid> {
    if m == 0 {
        return Err(Error::InvalidArgument("phase grid needs at least one point".into()));
    }
    let theta = midpoint_grid(m);
    let f = state.coeffs();
    let mut max_imag: f64 = 0.0;
    let mut values = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let d = harmonics(f, n);
        let row = theta
            .iter()
            .map(|&t| {
                let step = Complex64::from_polar(1.0, t);
                let mut w = Complex64::from_polar(1.0, -2.0 * n as f64 * t);
                let mut acc = Complex64::new(0.0, 0.0);
                for dk in &d {
                    acc += dk * w;
                    w *= step;
                }
                let s = acc / (2.0 * PI);
                max_imag = max_imag.max(s.im.abs());
                s.re
            })
            .collect();
        values.push(row);
    }
    if max_imag > IMAG_TOL {
        return Err(Error::IllConditioned(format!(
            "Wigner function has imaginary residue {max_imag:e}"
        )));
    }
    Ok(WignerGrid {
        n_max,
        theta,
        values,
        max_imag,
    })
}

/// Closed forms of `S` for the named states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    Number { m: usize },
    /// `(|0> + |m>)/sqrt 2`, `m >= 1`.
    NumberOut { m: usize },
    Su11Cs { z: Complex64 },
    Bg { u: Complex64 },
    Blaschke { z: Complex64 },
    PiSuperposition { z: Complex64, tau: f64 },
}

impl ClosedForm {
    pub fn eval(&self, n: usize, theta: f64) -> f64 {
        let ni = n as i64;
        match *self {
            ClosedForm::Number { m } => {
                if n == m {
                    1.0 / (2.0 * PI)
                } else {
                    0.0
                }
            }
            ClosedForm::NumberOut { m } => {
                let k = m.div_ceil(2);
                let delta = |a: usize| if n == a { 1.0 } else { 0.0 };
                (delta(0) + delta(m) + 2.0 * delta(k) * (m as f64 * theta).cos()) / (4.0 * PI)
            }
            ClosedForm::Su11Cs { z } => {
                let (r, x) = (z.norm(), (theta - z.arg()).cos());
                let mut s = r.powi(2 * ni as i32) * chebyshev_u(2 * ni, x);
                if n > 0 {
                    s += r.powi(2 * ni as i32 - 1) * chebyshev_u(2 * ni - 1, x);
                }
                (1.0 - r * r) * s / (2.0 * PI)
            }
            ClosedForm::Bg { u } => {
                let x = 2.0 * u.norm() * (theta - u.arg()).cos();
                let mut s = power_over_factorial(x, 2 * n);
                if n > 0 {
                    s += power_over_factorial(x, 2 * n - 1);
                }
                s / (2.0 * PI * bessel_i0(2.0 * u.norm()))
            }
            ClosedForm::Blaschke { z } => {
                let (r, x) = (z.norm(), (theta - z.arg()).cos());
                let term = |k: i64| {
                    if k < 0 {
                        0.0
                    } else {
                        r.powi(k as i32) * chebyshev_u(k, x)
                    }
                };
                let s = term(2 * ni - 3)
                    + (1.0 - 2.0 * r * x) * term(2 * ni - 2)
                    + (r * r - 2.0 * r * x) * term(2 * ni - 1)
                    + r * r * term(2 * ni);
                s / (2.0 * PI)
            }
            ClosedForm::PiSuperposition { z, tau } => {
                let (r, d) = (z.norm(), theta - z.arg());
                let x = (2.0 * d).cos();
                let a2 = pi_superposition_amplitude(z, tau).norm_sqr();
                let half = 0.5 * tau;
                let mut s = half.cos().powi(2) * r.powi(2 * ni as i32) * chebyshev_u(ni, x);
                if n > 0 {
                    s += (r * r * half.sin().powi(2) - r * tau.sin() * d.sin())
                        * r.powi(2 * (ni as i32 - 1))
                        * chebyshev_u(ni - 1, x);
                }
                a2 * s / (2.0 * PI)
            }
        }
    }
}

fn power_over_factorial(x: f64, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if x == 0.0 {
        return 0.0;
    }
    let sign = if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    sign * (k as f64 * x.abs().ln() - ln_factorial(k)).exp()
}

/// `max |S(g; n, theta) - S(f; n - m, theta - beta)|` over `n <= n_max` and
/// the midpoint grid, with `S(f; n - m, .)` read as zero for `n < m`.
pub fn shift_covariance_residual(
    state: &FockState,
    w: &WeylElement,
    n_max: usize,
    m: usize,
) -> f64 {
    let g = apply(w, state);
    let mut worst: f64 = 0.0;
    for n in 0..=n_max {
        for &t in &midpoint_grid(m) {
            let want = if n >= w.m {
                wigner(state, n - w.m, t - w.beta)
            } else {
                0.0
            };
            worst = worst.max((wigner(&g, n, t) - want).abs());
        }
    }
    worst
}
