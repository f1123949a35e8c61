//! Special functions needed for normalisation and the Barut-Girardello measure.

use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Modified Bessel function of the first kind, order zero.
///
/// Power series below 20, large-argument asymptotic expansion above.
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x < 20.0 {
        i0_series(x)
    } else {
        ln_bessel_i0(x).exp()
    }
}

/// `ln I0(x)`, usable where `I0` itself would overflow.
pub fn ln_bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x < 20.0 {
        return i0_series(x).ln();
    }
    // e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0).powi(2) / (8.0 * kf * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    x - 0.5 * (2.0 * PI * x).ln() + sum.ln()
}

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

/// Modified Bessel function of the second kind, order zero. Requires `x > 0`.
///
/// Series for `x <= 2`; for larger arguments the integral
/// `K0(x) = int_0^inf exp(-x cosh t) dt` is summed with the trapezoidal
/// rule, which converges geometrically for this entire integrand.
pub fn bessel_k0(x: f64) -> f64 {
    assert!(x > 0.0, "K0 is singular at x = 0");
    if x <= 2.0 {
        let q = 0.25 * x * x;
        let i0 = i0_series(x);
        let mut term = 1.0;
        let mut harmonic = 0.0;
        let mut sum = 0.0;
        let mut k = 1.0;
        loop {
            term *= q / (k * k);
            harmonic += 1.0 / k;
            sum += term * harmonic;
            if term * harmonic < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
            k += 1.0;
        }
        -((0.5 * x).ln() + EULER_GAMMA) * i0 + sum
    } else {
        let h = 0.125;
        let mut sum = 0.5 * (-x).exp();
        let mut t: f64 = h;
        loop {
            let v = (-x * t.cosh()).exp();
            sum += v;
            if v < 1e-18 * sum {
                break;
            }
            t += h;
        }
        h * sum
    }
}

/// `ln(n!)` by direct summation (exact enough for the sizes used here).
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Chebyshev polynomial of the second kind, with `U_n = 0` for `n < 0`.
pub fn chebyshev_u(n: i64, x: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn i0_reference_values() {
        // I0(2) = sum 1/(k!)^2, the normalisation of |u = 1>.
        let direct: f64 = (0..30)
            .map(|k| 1.0 / (ln_factorial(k).exp().powi(2)))
            .sum();
        assert!(rel(bessel_i0(2.0), direct) < 1e-14);
        assert!(rel(bessel_i0(1.0), 1.266_065_877_752_008_4) < 1e-14);
        assert!(rel(bessel_i0(20.0), 4.355_828_255_955_353e7) < 1e-13);
        assert!(rel(bessel_i0(30.0), 7.816_722_978_239_774e11) < 1e-13);
        assert_eq!(bessel_i0(0.0), 1.0);
    }

    #[test]
    fn i0_branches_agree_at_split() {
        assert!(rel(i0_series(20.0), ln_bessel_i0(20.0).exp()) < 1e-13);
        assert!(rel(i0_series(25.0), ln_bessel_i0(25.0).exp()) < 1e-13);
    }

    #[test]
    fn k0_reference_values() {
        assert!(rel(bessel_k0(0.1), 2.427_069_024_702_017) < 1e-12);
        assert!(rel(bessel_k0(1.0), 0.421_024_438_240_708_3) < 1e-12);
        assert!(rel(bessel_k0(2.0), 0.113_893_872_749_533_44) < 1e-12);
        assert!(rel(bessel_k0(5.0), 3.691_098_334_042_594_7e-3) < 1e-12);
        assert!(rel(bessel_k0(20.0), 5.741_237_815_336_524e-10) < 1e-12);
    }

    #[test]
    fn k0_continuous_across_split() {
        let below = bessel_k0(2.0);
        let above = bessel_k0(2.0 + 1e-12);
        assert!(rel(below, above) < 1e-10);
    }

    #[test]
    fn chebyshev_matches_trig_form() {
        for n in 0..20 {
            for &t in &[0.3_f64, 1.1, 2.5] {
                let expected = ((n as f64 + 1.0) * t).sin() / t.sin();
                assert!((chebyshev_u(n, t.cos()) - expected).abs() < 1e-12);
            }
        }
        assert_eq!(chebyshev_u(-1, 0.4), 0.0);
        assert_eq!(chebyshev_u(-3, 0.4), 0.0);
    }
}
