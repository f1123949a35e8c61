//! Analytic representation `Z(f; z) = sum f_n* z^n` in the unit disk, its
//! boundary function on the circle, and the Cauchy/Poisson/conjugate kernels.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::fock_state::FockState;
use crate::series;
use crate::{Error, Result};

/// `ln|Theta|` is clamped below at this value.
pub const LOG_FLOOR: f64 = -700.0;

/// Largest radius accepted by [`reconstruct_from_boundary`].
pub const MAX_RECONSTRUCTION_RADIUS: f64 = 0.99;

/// Samples of the boundary function `Theta(f; theta)` on the midpoint grid
/// `theta_j = -pi + (2j+1) pi / M`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundarySamples {
    pub grid_size: usize,
    pub theta: Vec<f64>,
    pub values: Vec<Complex64>,
    /// `ln|Theta(theta_j)|`, clamped at [`LOG_FLOOR`].
    pub log_abs: Vec<f64>,
}

impl BoundarySamples {
    /// Phase density `|Theta|^2 / 2 pi` at each grid angle.
    pub fn phase_density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr() / (2.0 * PI)).collect()
    }

    /// `(1/2pi) int dtheta Theta(g) Theta*(f)` by the trapezoidal rule; equals
    /// `<g|f>` whenever both bandwidths are below the grid size.
    pub fn inner_product(&self, other: &BoundarySamples) -> Complex64 {
        let sum: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(g, f)| g * f.conj())
            .sum();
        sum / self.grid_size as f64
    }
}

/// `ln|v|`, clamped below at [`LOG_FLOOR`].
pub fn clamped_log_abs(v: Complex64) -> f64 {
    v.norm().ln().max(LOG_FLOOR)
}

/// Midpoint angular grid of size `m`.
pub fn midpoint_grid(m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| -PI + (2 * j + 1) as f64 * PI / m as f64)
        .collect()
}

/// Checks that `m` is a power of two and at least `required`.
pub fn check_grid(m: usize, required: usize) -> Result<()> {
    if !m.is_power_of_two() || m < required {
        return Err(Error::Aliasing {
            grid: m,
            required,
        });
    }
    Ok(())
}

/// `Z(f; z)` for `|z| < 1`, by Horner on the truncated series.
pub fn eval_z(state: &FockState, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "|z| = {} is not inside the unit disk",
            z.norm()
        )));
    }
    Ok(series::eval(&state.analytic_coeffs(), z))
}

/// Boundary function of `state` on an `m`-point midpoint grid (`m >= 2N`).
pub fn boundary(state: &FockState, m: usize) -> Result<BoundarySamples> {
    check_grid(m, 2 * state.len())?;
    let values = boundary_values(&state.analytic_coeffs(), m)?;
    let log_abs = values.iter().map(|&v| clamped_log_abs(v)).collect();
    Ok(BoundarySamples {
        grid_size: m,
        theta: midpoint_grid(m),
        values,
        log_abs,
    })
}

/// Values of a power series on the midpoint grid: zero-padded inverse FFT of
/// the pre-rotated coefficients. Needs `m >= coeffs.len()`.
pub fn boundary_values(coeffs: &[Complex64], m: usize) -> Result<Vec<Complex64>> {
    check_grid(m, coeffs.len())?;
    let offset = -PI + PI / m as f64;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (n, (slot, &a)) in buf.iter_mut().zip(coeffs).enumerate() {
        *slot = a * Complex64::from_polar(1.0, n as f64 * offset);
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    Ok(buf)
}

/// Fourier coefficients `c_k = (1/M) sum_j x_j e^{-i k theta_j}` of real
/// midpoint-grid samples, for `k = 0 .. count-1`.
pub(crate) fn grid_fourier(samples: &[f64], count: usize) -> Vec<Complex64> {
    let m = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let offset = PI - PI / m as f64;
    buf.iter()
        .take(count)
        .enumerate()
        .map(|(k, &b)| b * Complex64::from_polar(1.0, k as f64 * offset) / m as f64)
        .collect()
}

/// Phase distribution `P(theta_j) = |Theta(theta_j)|^2 / 2pi`.
pub fn phase_distribution(state: &FockState, m: usize) -> Result<Vec<f64>> {
    Ok(boundary(state, m)?.phase_density())
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!("kernel radius r = {r} outside [0, 1)")));
    }
    Ok(())
}

/// Cauchy kernel `C(r, theta) = (1 - r e^{i theta})^{-1}`.
pub fn cauchy(r: f64, theta: f64) -> Result<Complex64> {
    check_radius(r)?;
    Ok((Complex64::new(1.0, 0.0) - Complex64::from_polar(r, theta)).inv())
}

/// Poisson kernel `Re[2C - 1] = (1 - r^2)/(1 + r^2 - 2r cos theta)`.
pub fn poisson(r: f64, theta: f64) -> Result<f64> {
    Ok((2.0 * cauchy(r, theta)? - 1.0).re)
}

/// Harmonic conjugate of the Poisson kernel, `Im[2C - 1]`.
pub fn conjugate(r: f64, theta: f64) -> Result<f64> {
    Ok((2.0 * cauchy(r, theta)? - 1.0).im)
}

/// Recovers `Z(f; z)` from boundary samples with the Cauchy integral,
/// discretised by the trapezoidal rule on the sample grid.
///
/// The rule's aliasing error is `|z|^M / (1 - |z|^M)` relative; points where
/// that exceeds `1e-9` are rejected along with `|z| > 0.99`.
pub fn reconstruct_from_boundary(samples: &BoundarySamples, z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    let alias = r.powi(samples.grid_size as i32);
    if r > MAX_RECONSTRUCTION_RADIUS || alias > 1e-9 {
        return Err(Error::IllConditioned(format!(
            "|z| = {r} too close to the circle for a {}-point grid",
            samples.grid_size
        )));
    }
    // C(r, theta - theta') = 1 / (1 - z e^{-i theta'})
    let sum: Complex64 = samples
        .theta
        .iter()
        .zip(&samples.values)
        .map(|(&t, &v)| v / (Complex64::new(1.0, 0.0) - z * Complex64::from_polar(1.0, -t)))
        .sum();
    Ok(sum / samples.grid_size as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_state::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn direct_boundary(state: &FockState, theta: f64) -> Complex64 {
        state
            .analytic_coeffs()
            .iter()
            .enumerate()
            .map(|(n, a)| a * Complex64::from_polar(1.0, n as f64 * theta))
            .sum()
    }

    #[test]
    fn eval_z_examples() {
        let z = c(0.3, -0.2);
        let num = make_number(3, 8).unwrap();
        assert!((eval_z(&num, z).unwrap() - z.powi(3)).norm() < 1e-16);

        let z0 = c(0.5, 0.0);
        let cs = make_su11_cs(z0, 128).unwrap();
        let at = c(0.0, 0.3);
        let closed = 0.75f64.sqrt() / (1.0 - z0.conj() * at);
        assert!((eval_z(&cs, at).unwrap() - closed).norm() < 1e-15);

        let b = make_blaschke_state(c(0.2, 0.4), 16).unwrap();
        assert_eq!(eval_z(&b, c(0.0, 0.0)).unwrap(), b.coeffs()[0].conj());
        assert!(matches!(eval_z(&b, c(1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn boundary_matches_direct_summation() {
        let st = make_pi_superposition(c(0.6, 0.3), 2.0, 64).unwrap();
        let s = boundary(&st, 256).unwrap();
        for (t, v) in s.theta.iter().zip(&s.values) {
            assert!((direct_boundary(&st, *t) - v).norm() < 1e-12);
        }
        assert!(matches!(
            boundary(&st, 100),
            Err(Error::Aliasing { grid: 100, required: 128 })
        ));
        assert!(boundary(&st, 64).is_err());
    }

    #[test]
    fn boundary_examples() {
        let vac = boundary(&make_number(0, 8).unwrap(), 16).unwrap();
        assert!(vac.values.iter().all(|v| (v - 1.0).norm() < 1e-15));

        let n = 16;
        let out = superpose(
            &[make_number(0, n).unwrap(), make_number(1, n).unwrap()],
            &[c(1., 0.), c(1., 0.)],
        )
        .unwrap();
        let s = boundary(&out, 64).unwrap();
        let h = 0.5f64.sqrt();
        for (t, v) in s.theta.iter().zip(&s.values) {
            let want = (1.0 + Complex64::from_polar(1.0, *t)) * h;
            assert!((v - want).norm() < 1e-15);
            assert!(v.norm() > 0.0 && s.log_abs.iter().all(|l| l.is_finite()));
        }

        let bg = make_bg(c(1.0, 0.0), 40).unwrap();
        let i0 = crate::special::bessel_i0(2.0);
        let s = boundary(&bg, 128).unwrap();
        for (t, v) in s.theta.iter().zip(&s.values) {
            let want = Complex64::from_polar(1.0, *t).exp() / i0.sqrt();
            assert!((v - want).norm() < 1e-14);
        }
    }

    #[test]
    fn log_abs_is_clamped() {
        assert_eq!(clamped_log_abs(c(0.0, 0.0)), LOG_FLOOR);
        assert_eq!(clamped_log_abs(c(1e-310, 0.0)), LOG_FLOOR);
        assert!((clamped_log_abs(c(0.0, 2.0)) - 2f64.ln()).abs() < 1e-16);
    }

    #[test]
    fn phase_distribution_examples() {
        let uniform = 1.0 / (2.0 * PI);
        let p = phase_distribution(&make_number(5, 16).unwrap(), 64).unwrap();
        assert!(p.iter().all(|x| (x - uniform).abs() < 1e-15));

        let b = phase_distribution(&make_blaschke_state(c(0.3, -0.4), 128).unwrap(), 512).unwrap();
        assert!(b.iter().all(|x| (x - uniform).abs() < 1e-12));

        let (r, phi) = (0.6, 0.8);
        let cs = make_su11_cs(Complex64::from_polar(r, phi), 128).unwrap();
        let grid = midpoint_grid(512);
        for (t, p) in grid.iter().zip(phase_distribution(&cs, 512).unwrap()) {
            let want = poisson(r, t - phi).unwrap() / (2.0 * PI);
            assert!((p - want).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(cauchy(0.0, 1.3).unwrap(), c(1.0, 0.0));
        assert_eq!(poisson(0.0, 0.2).unwrap(), 1.0);
        assert_eq!(conjugate(0.0, 0.2).unwrap(), 0.0);
        assert!((poisson(0.5, 0.0).unwrap() - 3.0).abs() < 1e-14);
        let q = conjugate(0.999, 0.5).unwrap();
        let cot = 1.0 / 0.25f64.tan();
        assert!(((q - cot) / cot).abs() < 0.01);
        assert!(cauchy(1.0, 0.0).is_err());
        assert!(poisson(-0.1, 0.0).is_err());
    }

    #[test]
    fn kernels_match_closed_forms() {
        for &r in &[0.1, 0.5, 0.9] {
            for &t in &[-2.0, 0.3, 1.7] {
                let den = 1.0 + r * r - 2.0 * r * f64::cos(t);
                assert!((poisson(r, t).unwrap() - (1.0 - r * r) / den).abs() < 1e-13);
                assert!((conjugate(r, t).unwrap() - 2.0 * r * f64::sin(t) / den).abs() < 1e-13);
                let combined = c(poisson(r, t).unwrap(), conjugate(r, t).unwrap());
                assert_eq!(combined, 2.0 * cauchy(r, t).unwrap() - 1.0);
            }
        }
    }

    #[test]
    fn reconstruction_examples() {
        let vac = boundary(&make_number(0, 8).unwrap(), 64).unwrap();
        assert!((reconstruct_from_boundary(&vac, c(0.3, 0.5)).unwrap() - 1.0).norm() < 1e-14);

        let one = make_number(1, 16).unwrap();
        let s = boundary(&one, 1024).unwrap();
        let z = c(0.4, 0.0);
        let oracle = eval_z(&one, z).unwrap();
        assert!((reconstruct_from_boundary(&s, z).unwrap() - oracle).norm() < 1e-8);

        let cs = make_su11_cs(c(0.5, 0.0), 64).unwrap();
        let s = boundary(&cs, 512).unwrap();
        let closed = 0.75f64.sqrt() / (1.0 - 0.15);
        assert!((reconstruct_from_boundary(&s, c(0.3, 0.0)).unwrap() - closed).norm() < 1e-6);

        assert!(matches!(
            reconstruct_from_boundary(&s, c(0.995, 0.0)),
            Err(Error::IllConditioned(_))
        ));
    }

    fn random_state(parts: Vec<(f64, f64)>) -> FockState {
        FockState::normalized(parts.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn parseval_and_inner_product(
            f in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..64),
            g in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..64),
        ) {
            let f = random_state(f).resized(64);
            let g = random_state(g).resized(64);
            let sf = boundary(&f, 256).unwrap();
            let sg = boundary(&g, 256).unwrap();
            let mass: f64 = sf.phase_density().iter().sum::<f64>() * 2.0 * PI / 256.0;
            prop_assert!((mass - (1.0 - f.norm_defect())).abs() < 1e-8);
            let direct = g.inner_product(&f);
            prop_assert!((sg.inner_product(&sf) - direct).norm() < 1e-8);
        }

        #[test]
        fn reconstruction_agrees_with_series(
            f in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..64),
            re in -0.6..0.6f64,
            im in -0.6..0.6f64,
        ) {
            let f = random_state(f).resized(64);
            let s = boundary(&f, 512).unwrap();
            let z = c(re, im);
            let got = reconstruct_from_boundary(&s, z).unwrap();
            prop_assert!((got - eval_z(&f, z).unwrap()).norm() < 1e-6);
        }
    }
}
