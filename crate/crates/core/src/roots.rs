//! Polynomial roots from companion-matrix eigenvalues, polished by Newton steps.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::series;

/// Coefficients below this fraction of the largest one are dropped from the
/// trailing end before building the companion matrix. Their effect on roots
/// inside the closed disk is of the same relative size.
const TRIM_RELATIVE: f64 = 1e-17;

/// All roots of `sum_k coeffs[k] z^k`, ascending powers.
///
/// Leading zero coefficients (roots at the origin) are *not* stripped here;
/// callers that care about the origin should strip them first. Returns an
/// empty vector for constant polynomials.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let degree = match coeffs
        .iter()
        .rposition(|c| c.norm() > TRIM_RELATIVE * scale)
    {
        Some(d) => d,
        None => return Vec::new(),
    };
    if degree == 0 {
        return Vec::new();
    }
    let zeros_at_origin = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let body = &coeffs[zeros_at_origin..=degree];
    let d = body.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    if d == 0 {
        return roots;
    }

    // Rescale z = s w so that |b_0| = |b_d|; keeps companion entries moderate.
    let s = ((body[0].norm().ln() - body[d].norm().ln()) / d as f64).exp();
    let ln_s = s.ln();
    let lead = body[d];
    let scaled: Vec<Complex64> = body
        .iter()
        .enumerate()
        .map(|(i, &b)| b / lead * ((i as f64 - d as f64) * ln_s).exp())
        .collect();

    let mut companion = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        companion[(i, d - 1)] = -scaled[i];
    }
    let eig = companion_eigenvalues(companion);

    roots.extend(eig.iter().map(|&w| polish(coeffs, w * s)));
    roots
}

/// Eigenvalues of a companion matrix.
///
/// Shifted QR stalls on cyclic companions such as that of `1 + z^m`; those
/// are retried after a deterministic perturbation of relative size `1e-12`.
/// The perturbed eigenvalues are then restored by Newton polishing.
fn companion_eigenvalues(companion: DMatrix<Complex64>) -> Vec<Complex64> {
    let d = companion.nrows();
    let max_iter = 200 * d.max(10);
    let mut matrix = companion;
    for attempt in 0..4 {
        if let Some(eig) = matrix
            .clone()
            .try_schur(f64::EPSILON, max_iter)
            .and_then(|schur| schur.eigenvalues())
        {
            return eig.iter().copied().collect();
        }
        let size = 1e-12 * 10f64.powi(attempt) * matrix.norm();
        for i in 0..d {
            for j in 0..d {
                let seed = (i * d + j + 1) as f64;
                matrix[(i, j)] += Complex64::new((seed * 1.618).sin(), (seed * 2.7).cos()) * size;
            }
        }
    }
    panic!("companion eigenvalue iteration failed to converge for degree {d}");
}

/// Newton iterations on the full polynomial; keeps the best iterate seen.
fn polish(coeffs: &[Complex64], start: Complex64) -> Complex64 {
    let mut best = start;
    let mut best_val = series::eval(coeffs, start).norm();
    let mut z = start;
    for _ in 0..60 {
        let (p, dp) = series::eval_with_derivative(coeffs, z);
        if dp.norm() == 0.0 || !p.is_finite() {
            break;
        }
        let step = p / dp;
        z -= step;
        let val = series::eval(coeffs, z).norm();
        if val < best_val {
            best_val = val;
            best = z;
        }
        if step.norm() <= 1e-16 * z.norm().max(1e-300) {
            break;
        }
    }
    // A large move means Newton left the basin of this eigenvalue.
    if (best - start).norm() > 1e-4 * start.norm().max(1.0) {
        start
    } else {
        best
    }
}

/// Groups roots closer than `radius` into `(centroid, multiplicity)` pairs.
pub fn cluster(roots: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for &r in roots {
        match groups
            .iter_mut()
            .find(|(c, _)| (*c - r).norm() < radius)
        {
            Some((c, n)) => {
                *c = (*c * *n as f64 + r) / (*n as f64 + 1.0);
                *n += 1;
            }
            None => groups.push((r, 1)),
        }
    }
    groups
}
