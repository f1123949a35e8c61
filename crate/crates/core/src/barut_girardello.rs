//! Barut-Girardello representation `U(f; u) = sum f_n* u^n / n!` and its
//! Laplace-transform link to the disk.
//!
//! Smooth parts are stored by their moments `b_n`, meaning
//! `U(u) = sum b_n u^n / n!`. The transform `L[u^n] = n! z^{n+1}` then maps
//! moments to disk coefficients without factorials, which keeps large
//! truncations free of overflow.
//!
//! Delta atoms follow the symmetric convention `int_0^inf delta = 1/2`, so
//! `L[2 delta] = 1` and an atom at a convolution endpoint counts half.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::factorization::FactoredState;
use crate::fock_state::FockState;
use crate::quadrature::gauss_legendre;
use crate::special::{bessel_i0, bessel_k0, ln_factorial};
use crate::{Error, Result};

/// Truncation error allowed inside [`BgFunction::radius_hint`].
pub const RADIUS_TOL: f64 = 1e-10;
/// Points of the Gauss-Legendre rule used on segments and panels.
pub const SEGMENT_POINTS: usize = 64;

#[derive(Debug, Clone, Serialize)]
pub struct BgFunction {
    /// Weight `a` of `a delta(u)`.
    pub atom: Complex64,
    /// Moments `b_n` of the smooth part `sum b_n u^n / n!`.
    pub moments: Vec<Complex64>,
    /// Largest `|u|` at which the truncated series is within
    /// [`RADIUS_TOL`] of its untruncated value.
    pub radius_hint: f64,
}

impl BgFunction {
    pub fn new(atom: Complex64, moments: Vec<Complex64>) -> Self {
        let radius_hint = validated_radius(moments.len());
        Self {
            atom,
            moments,
            radius_hint,
        }
    }

    /// Taylor coefficient `b_n / n!` of the smooth part.
    pub fn taylor_coeff(&self, n: usize) -> Complex64 {
        self.moments
            .get(n)
            .map_or(Complex64::new(0.0, 0.0), |b| b * (-ln_factorial(n)).exp())
    }

    /// Smooth part at `u`. The atom has no pointwise value.
    pub fn eval(&self, u: Complex64) -> Complex64 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, b) in self.moments.iter().enumerate() {
            if n > 0 {
                term *= u / n as f64;
            }
            acc += b * term;
        }
        acc
    }

    /// `int_0^u` of the smooth part, plus half the atom.
    pub fn integral(&self, u: Complex64) -> Complex64 {
        let mut moments = vec![Complex64::new(0.0, 0.0)];
        moments.extend_from_slice(&self.moments);
        BgFunction::new(Complex64::new(0.0, 0.0), moments).eval(u) + 0.5 * self.atom
    }

    /// Power series of `L[U](z)`: `a/2 + sum b_n z^{n+1}`.
    pub fn laplace_series(&self) -> Vec<Complex64> {
        let mut out = vec![0.5 * self.atom];
        out.extend_from_slice(&self.moments);
        out
    }

    pub fn within_radius(&self, u: Complex64) -> bool {
        u.norm() <= self.radius_hint
    }
}

/// Largest `R` with `R^N/N! / (1 - R/(N+1)) <= RADIUS_TOL`, assuming moments
/// of modulus at most one.
fn validated_radius(n: usize) -> f64 {
    let nf = n as f64;
    let bound = |r: f64| {
        if r >= nf + 1.0 {
            return f64::INFINITY;
        }
        (nf * r.ln() - ln_factorial(n)).exp() / (1.0 - r / (nf + 1.0))
    };
    let (mut lo, mut hi) = (0.0, nf + 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if bound(mid) <= RADIUS_TOL {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `U(f; u)`: atom zero, moments `f_n*`.
pub fn bg_function(state: &FockState) -> BgFunction {
    BgFunction::new(Complex64::new(0.0, 0.0), state.analytic_coeffs())
}

/// `(1/z) int_0^inf U(u) e^{-u/z} du` by panelled Gauss-Legendre quadrature
/// along the positive real axis, with the atom adding `a/(2z)`.
///
/// The integrand envelope `sum |b_n| u^n/n! e^{-u Re(1/z)}` must stay small
/// enough that rounding does not swamp the result; otherwise the call fails
/// with [`Error::IllConditioned`]. Use the series for such `z`.
pub fn laplace_to_disk(u_fn: &BgFunction, z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !(z.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "z = {z} must satisfy Re z > 0 and |z| < 1"
        )));
    }
    let w = z.inv();
    let a = w.re;
    let n = u_fn.moments.len() as f64;
    let h = 1.0 / a;
    // past the peak of every term and past e^{-T a} < 1e-12
    let min_horizon = (n + 28.0) * h;
    let (nodes, weights) = gauss_legendre(SEGMENT_POINTS);
    let mut total = Complex64::new(0.0, 0.0);
    let mut envelope = 0.0;
    for panel in 0..100_000 {
        let left = panel as f64 * h;
        let mut part = Complex64::new(0.0, 0.0);
        let mut env_part = 0.0;
        for (x, wt) in nodes.iter().zip(&weights) {
            let u = left + 0.5 * h * (x + 1.0);
            let (value, env) = damped_terms(&u_fn.moments, u, w);
            part += value * (0.5 * h * wt);
            env_part += env * 0.5 * h * wt;
        }
        total += part;
        envelope += env_part;
        if left + h >= min_horizon && env_part <= 1e-17 * envelope {
            let rounding = 1e-15 * envelope / z.norm();
            if rounding > 1e-8 {
                return Err(Error::IllConditioned(format!(
                    "Laplace integrand envelope {envelope:e} too large at z = {z}"
                )));
            }
            return Ok((total + 0.5 * u_fn.atom) / z);
        }
    }
    Err(Error::IllConditioned(format!(
        "Laplace quadrature did not settle at z = {z}"
    )))
}

// Returns (sum b_n u^n/n! e^{-u w}, sum |b_n| u^n/n! e^{-u Re w}) for real u >= 0.
fn damped_terms(moments: &[Complex64], u: f64, w: Complex64) -> (Complex64, f64) {
    let mut term = (-u * w.re).exp();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut env = 0.0;
    for (n, b) in moments.iter().enumerate() {
        if n > 0 {
            term *= u / n as f64;
        }
        acc += b * term;
        env += b.norm() * term;
    }
    (acc * Complex64::from_polar(1.0, -u * w.im), env)
}

/// `(U_in, U_out)` from the inner coefficients `c_n` and outer coefficients
/// `b_n`: `U_in = L^{-1}[z Z_in]` has moments `c_n`; `U_out = L^{-1}[Z_out]`
/// has atom `2 b_0` and moments `b_{n+1}`.
pub fn bg_factor_parts(fac: &FactoredState) -> (BgFunction, BgFunction) {
    let u_in = BgFunction::new(Complex64::new(0.0, 0.0), fac.inner_coeffs.clone());
    let u_out = BgFunction::new(
        2.0 * fac.outer_coeffs[0],
        fac.outer_coeffs.iter().skip(1).copied().collect(),
    );
    (u_in, u_out)
}

/// `int_0^u U_in(x) U_out(u - x) dx` along the segment from 0 to `u`.
///
/// Atoms sit at the endpoints and count half. A product of two atoms only
/// contributes at `u = 0` and is ignored.
pub fn bg_convolve(u_in: &BgFunction, u_out: &BgFunction, u: Complex64) -> Complex64 {
    let (nodes, weights) = gauss_legendre(SEGMENT_POINTS);
    let smooth: Complex64 = nodes
        .iter()
        .zip(&weights)
        .map(|(x, wt)| {
            let s = 0.5 * (x + 1.0);
            u_in.eval(u * s) * u_out.eval(u * (1.0 - s)) * (0.5 * wt)
        })
        .sum();
    smooth * u + 0.5 * u_out.atom * u_in.eval(u) + 0.5 * u_in.atom * u_out.eval(u)
}

/// `U` of the shifted state `E_+^m |f>` as the repeated integral
/// `(1/(m-1)!) int_0^u (u - x)^{m-1} U(f; x) dx` (`m >= 1`).
pub fn bg_shifted(state: &FockState, m: usize, u: Complex64) -> Complex64 {
    let base = bg_function(state);
    if m == 0 {
        return base.eval(u);
    }
    let (nodes, weights) = gauss_legendre(SEGMENT_POINTS);
    let scale = (-ln_factorial(m - 1)).exp();
    let sum: Complex64 = nodes
        .iter()
        .zip(&weights)
        .map(|(x, wt)| {
            let s = 0.5 * (x + 1.0);
            (u * (1.0 - s)).powu(m as u32 - 1) * base.eval(u * s) * (0.5 * wt)
        })
        .sum();
    sum * u * scale
}

/// Outer part of an outer state in the `U_in = 1` normalisation:
/// `2 f_0* delta(u) + dU/du`.
pub fn outer_state_part(state: &FockState) -> BgFunction {
    let a = state.analytic_coeffs();
    BgFunction::new(2.0 * a[0], a.into_iter().skip(1).collect())
}

/// `U` of `E_+^m |f>` for an outer state through its outer part:
/// `(1/m!) int_0^u (u - x)^m U_out(f; x) dx`, atom at `x = 0` counting half.
pub fn bg_shifted_from_outer(state: &FockState, m: usize, u: Complex64) -> Complex64 {
    let out = outer_state_part(state);
    let (nodes, weights) = gauss_legendre(SEGMENT_POINTS);
    let scale = (-ln_factorial(m)).exp();
    let sum: Complex64 = nodes
        .iter()
        .zip(&weights)
        .map(|(x, wt)| {
            let s = 0.5 * (x + 1.0);
            (u * (1.0 - s)).powu(m as u32) * out.eval(u * s) * (0.5 * wt)
        })
        .sum();
    (sum * u + 0.5 * out.atom * u.powu(m as u32)) * scale
}

/// Density `(2/pi) K_0(2|u|) I_0(2|u|)` of the resolution of the identity.
pub fn bg_measure_weight(u: Complex64) -> Result<f64> {
    let r = u.norm();
    if r == 0.0 {
        return Err(Error::Domain("K_0 is singular at u = 0".into()));
    }
    Ok(2.0 / PI * bessel_k0(2.0 * r) * bessel_i0(2.0 * r))
}

/// `int dmu(u) <n|u><u|m>` for `n, m <= n_max`, by Gauss-Legendre panels in
/// `|u|` and the trapezoid rule in `arg u`.
pub fn identity_resolution(n_max: usize) -> Result<Vec<Vec<Complex64>>> {
    let (nodes, weights) = gauss_legendre(SEGMENT_POINTS);
    let angles = 4 * (n_max + 1);
    let mut edges = vec![0.0, 1e-6, 1e-4, 1e-2, 0.1, 0.5];
    edges.extend((1..=40).map(f64::from));
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n_max + 1]; n_max + 1];
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        for (x, wt) in nodes.iter().zip(&weights) {
            let rho = lo + 0.5 * (hi - lo) * (x + 1.0);
            let radial = 0.5 * (hi - lo) * wt * rho;
            for k in 0..angles {
                let phi = 2.0 * PI * k as f64 / angles as f64;
                let u = Complex64::from_polar(rho, phi);
                let dmu = bg_measure_weight(u)? * radial * 2.0 * PI / angles as f64;
                let norm = bessel_i0(2.0 * rho);
                // <n|u> = I_0^{-1/2} u^n / n!
                let amps: Vec<Complex64> = (0..=n_max)
                    .map(|n| u.powu(n as u32) * (-ln_factorial(n)).exp())
                    .collect();
                for n in 0..=n_max {
                    for m in 0..=n_max {
                        out[n][m] += amps[n] * amps[m].conj() * (dmu / norm);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk_analytic::eval_z;
    use crate::factorization::{factorize, FactorConfig};
    use crate::fock_state::{make_bg, make_blaschke_state, make_number, make_su11_cs, superpose};
    use crate::series;
    use crate::weyl::shift;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn representation_examples() {
        let u = c(0.7, -0.4);
        let f = bg_function(&make_number(3, 16).unwrap());
        assert!((f.eval(u) - u.powu(3) / 6.0).norm() < 1e-15);
        let vac = bg_function(&make_number(0, 4).unwrap());
        assert_eq!(vac.eval(c(2.0, 1.0)), c(1.0, 0.0));
        // U = I0(2|u0|)^{-1/2} sum (u0* u)^n/(n!)^2 = I0(2|u0|)^{-1/2} I0(2 sqrt(u0* u))
        let u0 = 1.5;
        let s = bg_function(&make_bg(c(u0, 0.0), 64).unwrap());
        let x = 0.8;
        let want = bessel_i0(2.0 * (u0 * x).sqrt()) / bessel_i0(2.0 * u0).sqrt();
        assert!((s.eval(c(x, 0.0)) - want).norm() < 1e-12);
    }

    #[test]
    fn radius_hint_is_conservative() {
        let f = BgFunction::new(c(0.0, 0.0), vec![c(1.0, 0.0); 64]);
        let r = f.radius_hint;
        assert!(r > 10.0 && r < 64.0, "{r}");
        let long = BgFunction::new(c(0.0, 0.0), vec![c(1.0, 0.0); 128]);
        // e^R minus its truncated series at R
        let tail = r.exp() - f.eval(c(r, 0.0)).re;
        assert!(tail.abs() < 1e-10 * r.exp().max(1.0));
        assert!((long.eval(c(r, 0.0)) - f.eval(c(r, 0.0))).norm() <= 1e-10 * 1.01);
    }

    #[test]
    fn laplace_examples() {
        let z = c(0.4, 0.0);
        for m in 0..6 {
            let f = bg_function(&make_number(m, 8).unwrap());
            let got = laplace_to_disk(&f, z).unwrap();
            assert!((got - z.powu(m as u32)).norm() < 1e-12, "m = {m}");
        }
        let cs = make_su11_cs(c(0.5, 0.0), 64).unwrap();
        let z = c(0.3, 0.1);
        let got = laplace_to_disk(&bg_function(&cs), z).unwrap();
        let closed = (0.75f64).sqrt() / (1.0 - 0.5 * z);
        assert!((got - closed).norm() < 1e-6);
        assert!((got - eval_z(&cs, z).unwrap()).norm() < 1e-10);
        assert!(laplace_to_disk(&bg_function(&cs), c(-0.1, 0.2)).is_err());
        // atom only: (1/z) * a/2
        let atom = BgFunction::new(c(2.0, 0.0), vec![]);
        assert!((laplace_to_disk(&atom, z).unwrap() - 1.0 / z).norm() < 1e-15);
    }

    #[test]
    fn laplace_refuses_ill_conditioned_points() {
        let f = bg_function(&make_su11_cs(c(0.9, 0.0), 128).unwrap());
        let z = c(0.05, 0.95);
        assert!(matches!(laplace_to_disk(&f, z), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn factor_parts_examples() {
        let n3 = make_number(3, 16).unwrap();
        let fs = factorize(&n3, &FactorConfig::for_truncation(16)).unwrap();
        let (u_in, u_out) = bg_factor_parts(&fs);
        assert!((u_out.atom - c(2.0, 0.0)).norm() < 1e-12);
        assert!(u_out.moments.iter().all(|b| b.norm() < 1e-12));
        let u = c(1.0, 0.0);
        assert!((u_in.eval(u) - c(1.0 / 6.0, 0.0)).norm() < 1e-12);
        assert!((bg_convolve(&u_in, &u_out, u) - c(1.0 / 6.0, 0.0)).norm() < 1e-12);

        let bl = make_blaschke_state(c(0.5, 0.0), 64).unwrap();
        let fs = factorize(&bl, &FactorConfig::for_truncation(64)).unwrap();
        let (u_in, u_out) = bg_factor_parts(&fs);
        assert!((u_out.atom - c(2.0, 0.0)).norm() < 1e-10);
        assert!((u_in.moments[0] - c(-0.5, 0.0)).norm() < 1e-10);
        assert!((u_in.moments[1] - c(0.75, 0.0)).norm() < 1e-10);
        assert!((u_in.moments[2] - c(0.375, 0.0)).norm() < 1e-10);
        // L[U_in] = z Z_in and L[U_out] = Z_out, coefficientwise
        let lin = u_in.laplace_series();
        assert_eq!(lin[0], c(0.0, 0.0));
        assert_eq!(&lin[1..], &fs.inner_coeffs[..]);
        assert_eq!(u_out.laplace_series(), fs.outer_coeffs);
    }

    #[test]
    fn convolution_reproduces_u() {
        let states = [
            make_su11_cs(c(0.5, 0.0), 64).unwrap(),
            make_bg(c(1.0, 0.5), 64).unwrap(),
            make_blaschke_state(c(0.2, -0.6), 64).unwrap(),
        ];
        for state in &states {
            let fs = factorize(state, &FactorConfig::for_truncation(64)).unwrap();
            let (u_in, u_out) = bg_factor_parts(&fs);
            let direct = bg_function(state);
            for u in [c(1.5, 0.0), c(-0.3, 1.2), c(0.0, -2.0)] {
                let got = bg_convolve(&u_in, &u_out, u);
                assert!((got - direct.eval(u)).norm() < 1e-6, "{u}");
            }
        }
    }

    #[test]
    fn outer_part_integrates_back() {
        let s0 = make_number(0, 16).unwrap();
        let s5 = make_number(5, 16).unwrap();
        for state in [
            make_su11_cs(c(0.3, 0.4), 32).unwrap(),
            superpose(&[s0, s5], &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(),
        ] {
            let u = bg_function(&state);
            let out = outer_state_part(&state);
            for x in [c(0.0, 0.0), c(0.7, -0.2), c(-1.5, 1.0)] {
                assert!((out.integral(x) - u.eval(x)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn shifted_representation() {
        let cs = make_su11_cs(c(0.5, 0.0), 64).unwrap();
        let u = c(1.0, 0.0);
        let termwise: Complex64 = cs
            .analytic_coeffs()
            .iter()
            .enumerate()
            .map(|(n, f)| f * (-ln_factorial(n + 1)).exp())
            .sum();
        assert!((bg_shifted(&cs, 1, u) - termwise).norm() < 1e-13);
        for m in 1..4 {
            for u in [c(1.0, 0.0), c(-0.5, 1.5)] {
                let want = bg_function(&shift(&cs, m)).eval(u);
                assert!((bg_shifted(&cs, m, u) - want).norm() < 1e-12);
                assert!((bg_shifted_from_outer(&cs, m, u) - want).norm() < 1e-12);
            }
        }
        let vac = make_number(0, 4).unwrap();
        assert!((bg_shifted(&vac, 1, c(0.6, 0.2)) - c(0.6, 0.2)).norm() < 1e-15);
        // the inner part of a shifted state is u^m/m!
        let fs = factorize(&shift(&cs, 2), &FactorConfig::for_truncation(66)).unwrap();
        let (u_in, _) = bg_factor_parts(&fs);
        let x = c(0.9, 0.3);
        assert!((u_in.eval(x) - x * x / 2.0).norm() < 1e-10);
    }

    #[test]
    fn measure_weight() {
        assert!(bg_measure_weight(c(0.0, 0.0)).is_err());
        for r in [1e-8, 0.1, 1.0, 5.0, 30.0] {
            assert!(bg_measure_weight(c(r, 0.0)).unwrap() > 0.0);
        }
    }

    #[test]
    fn resolution_of_identity() {
        let m = identity_resolution(6).unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).norm() < 1e-3, "({i},{j}) = {v}");
            }
        }
    }

    #[test]
    fn moments_match_taylor_coefficients() {
        let f = bg_function(&make_su11_cs(c(0.5, 0.2), 16).unwrap());
        let taylor: Vec<Complex64> = (0..16).map(|n| f.taylor_coeff(n)).collect();
        let u = c(1.3, -0.7);
        assert!((series::eval(&taylor, u) - f.eval(u)).norm() < 1e-14);
    }
}
