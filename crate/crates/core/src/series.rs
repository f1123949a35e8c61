//! Truncated complex power series `sum_k c_k z^k`.

use num_complex::Complex64;

/// Horner evaluation.
pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Value and first derivative at `z`.
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = zero;
    let mut dp = zero;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Cauchy product truncated to `len` terms.
pub fn multiply(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Series quotient `num / den` truncated to `len` terms. `den[0]` must be nonzero.
pub fn divide(num: &[Complex64], den: &[Complex64], len: usize) -> Vec<Complex64> {
    let d0 = den[0];
    assert!(d0.norm() > 0.0, "series division by a series vanishing at 0");
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for n in 0..len {
        let mut acc = num.get(n).copied().unwrap_or_default();
        for k in 1..=n.min(den.len().saturating_sub(1)) {
            acc -= den[k] * out[n - k];
        }
        out[n] = acc / d0;
    }
    out
}

/// `exp` of a power series, truncated to `len` terms.
///
/// Uses `n b_n = sum_{k=1}^{n} k a_k b_{n-k}`, obtained by differentiating `B = exp(A)`.
pub fn exp(a: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut b = vec![Complex64::new(0.0, 0.0); len];
    if len == 0 {
        return b;
    }
    b[0] = a.first().copied().unwrap_or_default().exp();
    for n in 1..len {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=n.min(a.len().saturating_sub(1)) {
            acc += a[k] * b[n - k] * k as f64;
        }
        b[n] = acc / n as f64;
    }
    b
}

/// Taylor coefficients of `ln(1 - w z)`: `-w^k / k` for `k >= 1`.
pub fn log_one_minus(w: Complex64, len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    let mut pow = Complex64::new(1.0, 0.0);
    for (k, c) in out.iter_mut().enumerate().skip(1) {
        pow *= w;
        *c = -pow / k as f64;
    }
    out
}
