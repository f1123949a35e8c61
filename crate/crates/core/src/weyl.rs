//! Number-phase Weyl semigroup `W(m, beta, gamma) = e^{i gamma} E_+^m e^{i beta N}`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::disk_analytic::eval_z;
use crate::factorization::{factorize, FactorConfig};
use crate::fock_state::{make_bg, make_su11_cs, FockState};
use crate::series;
use crate::{Error, Result};

/// Maps an angle to `(-pi, pi]`.
pub fn canonical_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylElement {
    pub m: usize,
    pub beta: f64,
    pub gamma: f64,
}

impl WeylElement {
    pub fn new(m: usize, beta: f64, gamma: f64) -> Self {
        Self {
            m,
            beta: canonical_angle(beta),
            gamma: canonical_angle(gamma),
        }
    }

    pub fn identity() -> Self {
        Self::new(0, 0.0, 0.0)
    }

    /// `self * other`, i.e. `other` acts first.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement::new(
            self.m + other.m,
            self.beta + other.beta,
            self.gamma + other.gamma + other.m as f64 * self.beta,
        )
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.m, self.beta, self.gamma)
    }
}

/// Parses `"m:beta:gamma"` with angles in radians.
impl FromStr for WeylElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = || Error::Spec(format!("expected m:beta:gamma, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let m = parts[0].parse().map_err(|_| bad())?;
        let beta: f64 = parts[1].parse().map_err(|_| bad())?;
        let gamma: f64 = parts[2].parse().map_err(|_| bad())?;
        if !beta.is_finite() || !gamma.is_finite() {
            return Err(bad());
        }
        Ok(Self::new(m, beta, gamma))
    }
}

/// `g_{n+m} = e^{i beta n + i gamma} f_n`, `g_k = 0` for `k < m`. The
/// truncation grows by `m` so no amplitude is lost.
pub fn apply(w: &WeylElement, state: &FockState) -> FockState {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); w.m];
    coeffs.extend(
        state
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, f)| f * Complex64::from_polar(1.0, w.beta * n as f64 + w.gamma)),
    );
    FockState::from_coeffs(coeffs, state.norm_defect()).expect("isometry preserves the norm")
}

/// `W^dagger`: drops the first `m` amplitudes and undoes the phases.
pub fn apply_adjoint(w: &WeylElement, state: &FockState) -> FockState {
    let coeffs: Vec<Complex64> = state
        .coeffs()
        .iter()
        .skip(w.m)
        .enumerate()
        .map(|(n, g)| g * Complex64::from_polar(1.0, -(w.beta * n as f64 + w.gamma)))
        .collect();
    if coeffs.is_empty() {
        return FockState::from_coeffs(vec![Complex64::new(0.0, 0.0)], state.norm_defect())
            .expect("zero vector");
    }
    FockState::from_coeffs(coeffs, state.norm_defect()).expect("contraction")
}

/// Shifted state `E_+^m |f>`.
pub fn shift(state: &FockState, m: usize) -> FockState {
    apply(&WeylElement::new(m, 0.0, 0.0), state)
}

/// Residuals of the transformation laws of the disk function and its
/// factors under `W`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransformResiduals {
    /// `max |Z(g;z) - e^{-i gamma} z^m Z(f; z e^{-i beta})|`.
    pub analytic: f64,
    /// `max |Phi(g;z) - Phi(f; z e^{-i beta})|`.
    pub phi: f64,
    /// `max |Z_in(g;z) - e^{-i gamma} z^m Z_in(f; z e^{-i beta})|`.
    pub inner: f64,
}

impl TransformResiduals {
    pub fn max(&self) -> f64 {
        self.analytic.max(self.phi).max(self.inner)
    }
}

const SAMPLE_POINTS: [(f64, f64); 6] = [
    (0.0, 0.0),
    (0.3, 0.0),
    (-0.2, 0.45),
    (0.1, -0.6),
    (-0.55, -0.25),
    (0.4, 0.4),
];

/// Checks the transformation laws at a fixed set of interior points.
pub fn transformation_check(w: &WeylElement, state: &FockState) -> Result<TransformResiduals> {
    let g = apply(w, state);
    let ff = factorize(state, &FactorConfig::for_truncation(state.len()))?;
    let fg = factorize(&g, &FactorConfig::for_truncation(g.len()))?;
    let rot = Complex64::from_polar(1.0, -w.beta);
    let phase = Complex64::from_polar(1.0, -w.gamma);
    let mut out = TransformResiduals {
        analytic: 0.0,
        phi: 0.0,
        inner: 0.0,
    };
    for (x, y) in SAMPLE_POINTS {
        let z = Complex64::new(x, y);
        let zm = z.powu(w.m as u32);
        let lhs = eval_z(&g, z)?;
        let rhs = phase * zm * eval_z(state, z * rot)?;
        out.analytic = out.analytic.max((lhs - rhs).norm());
        out.phi = out.phi.max((fg.phi.eval(z) - ff.phi.eval(z * rot)).norm());
        let lhs = series::eval(&fg.inner_coeffs, z);
        let rhs = phase * zm * series::eval(&ff.inner_coeffs, z * rot);
        out.inner = out.inner.max((lhs - rhs).norm());
    }
    Ok(out)
}

/// Family of eigenstates that generate a shifted sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftedFamily {
    /// `|z>_m`: `(E_- - |m-1><m|) |z>_m = z |z>_m`.
    Su11Cs(Complex64),
    /// `|u>_m`: `E_- (N - m) |u>_m = u |u>_m`.
    Bg(Complex64),
}

/// Largest coefficient residual of the eigenrelation of the shifted state,
/// over the components not touched by truncation.
pub fn eigenrelation_residual(family: ShiftedFamily, m: usize, truncation: usize) -> Result<f64> {
    let (base, label) = match family {
        ShiftedFamily::Su11Cs(z) => (make_su11_cs(z, truncation)?, z),
        ShiftedFamily::Bg(u) => (make_bg(u, truncation)?, u),
    };
    let g = shift(&base, m);
    let c = g.coeffs();
    let zero = Complex64::new(0.0, 0.0);
    let mut worst: f64 = 0.0;
    for k in 0..c.len() - 1 {
        let lhs = match family {
            ShiftedFamily::Su11Cs(_) => {
                let projector = if m >= 1 && k == m - 1 { c[m] } else { zero };
                c[k + 1] - projector
            }
            ShiftedFamily::Bg(_) => c[k + 1] * (k as f64 + 1.0 - m as f64),
        };
        worst = worst.max((lhs - label * c[k]).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk_analytic::phase_distribution;
    use crate::fock_state::{make_blaschke_state, make_number, number_distribution};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(seed: &[(f64, f64)]) -> FockState {
        FockState::normalized(seed.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()
    }

    #[test]
    fn composition_examples() {
        let w = WeylElement::new(2, 1.0, -0.5);
        assert_eq!(WeylElement::identity().compose(&w), w);
        let p = WeylElement::new(1, PI / 2.0, 0.0).compose(&WeylElement::new(2, 0.0, 0.0));
        assert_eq!(p.m, 3);
        assert!((p.beta - PI / 2.0).abs() < 1e-15);
        assert!((p.gamma - PI).abs() < 1e-15);
    }

    #[test]
    fn canonical_range() {
        assert_eq!(canonical_angle(PI), PI);
        assert!((canonical_angle(-PI) - PI).abs() < 1e-15);
        assert!((canonical_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn parse_element() {
        let w: WeylElement = "2:0.5:-1".parse().unwrap();
        assert_eq!(w, WeylElement::new(2, 0.5, -1.0));
        assert!("2:0.5".parse::<WeylElement>().is_err());
        assert!("-1:0:0".parse::<WeylElement>().is_err());
    }

    #[test]
    fn apply_examples() {
        let s = make_number(3, 8).unwrap();
        let g = apply(&WeylElement::new(2, 0.0, 0.0), &s);
        assert_eq!(g.coeffs()[5], c(1.0, 0.0));
        assert_eq!(g.len(), 10);

        let z0 = c(0.3, 0.4);
        let rotated = apply(&WeylElement::new(0, 0.7, 0.0), &make_su11_cs(z0, 32).unwrap());
        let want = make_su11_cs(z0 * Complex64::from_polar(1.0, 0.7), 32).unwrap();
        for (a, b) in rotated.coeffs().iter().zip(want.coeffs()) {
            assert!((a - b).norm() < 1e-15);
        }

        let cs = make_su11_cs(z0, 32).unwrap();
        let shifted = shift(&cs, 1);
        assert_eq!(shifted.coeffs()[0], c(0.0, 0.0));
        assert_eq!(shifted.coeffs()[1], cs.coeffs()[0]);
        assert_eq!(shift(&cs, 0), cs);
    }

    #[test]
    fn shift_moves_number_distribution_and_keeps_phase_distribution() {
        let s = make_blaschke_state(c(0.2, -0.5), 32).unwrap();
        let g = shift(&s, 3);
        let (p, q) = (number_distribution(&s), number_distribution(&g));
        assert!(q[..3].iter().all(|&x| x == 0.0));
        assert_eq!(&q[3..], &p[..]);
        let a = phase_distribution(&s.resized(64), 128).unwrap();
        let b = phase_distribution(&g.resized(64), 128).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn adjoint_is_left_inverse_only() {
        let s = random_state(&[(0.5, 0.1), (0.2, -0.3), (0.4, 0.0), (-0.1, 0.2)]);
        let w = WeylElement::new(2, 0.3, 1.1);
        let back = apply_adjoint(&w, &apply(&w, &s));
        for (a, b) in back.coeffs().iter().zip(s.coeffs()) {
            assert!((a - b).norm() < 1e-15);
        }
        let other = apply(&w, &apply_adjoint(&w, &s));
        assert!(other.coeffs()[..2].iter().all(|x| x.norm() == 0.0));
        assert!(other.norm_sqr() < s.norm_sqr() - 0.1);
    }

    #[test]
    fn transformation_laws() {
        let cs = make_su11_cs(c(0.5, 0.0), 64).unwrap();
        let g = shift(&cs, 2);
        let z = c(0.3, 0.0);
        let ratio = eval_z(&g, z).unwrap() / eval_z(&cs, z).unwrap();
        assert!((ratio - c(0.09, 0.0)).norm() < 1e-14);

        let r = transformation_check(&WeylElement::identity(), &cs).unwrap();
        assert!(r.max() < 1e-14);
        let bg = make_bg(c(1.0, 0.0), 64).unwrap();
        let r = transformation_check(&WeylElement::new(1, PI / 3.0, 0.0), &bg).unwrap();
        assert!(r.max() < 1e-9, "{r:?}");
        let bl = make_blaschke_state(c(0.3, 0.2), 64).unwrap();
        let r = transformation_check(&WeylElement::new(2, -0.4, 0.9), &bl).unwrap();
        assert!(r.max() < 1e-9, "{r:?}");
    }

    #[test]
    fn eigenrelations() {
        assert!(eigenrelation_residual(ShiftedFamily::Su11Cs(c(0.5, 0.0)), 2, 64).unwrap() < 1e-12);
        assert!(eigenrelation_residual(ShiftedFamily::Bg(c(1.0, 0.0)), 3, 64).unwrap() < 1e-12);
        assert!(eigenrelation_residual(ShiftedFamily::Su11Cs(c(0.1, 0.6)), 0, 64).unwrap() < 1e-12);
        assert!(eigenrelation_residual(ShiftedFamily::Bg(c(-1.2, 0.8)), 0, 64).unwrap() < 1e-12);
    }

    fn element() -> impl Strategy<Value = WeylElement> {
        (0usize..5, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(m, b, g)| WeylElement::new(m, b, g))
    }

    fn amplitudes() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..12)
            .prop_filter("nonzero", |v| v.iter().any(|&(a, b)| a.abs() + b.abs() > 1e-3))
    }

    fn angle_gap(a: f64, b: f64) -> f64 {
        canonical_angle(a - b).abs()
    }

    proptest! {
        #[test]
        fn composition_is_associative(a in element(), b in element(), c in element()) {
            let l = a.compose(&b).compose(&c);
            let r = a.compose(&b.compose(&c));
            prop_assert_eq!(l.m, r.m);
            prop_assert!(angle_gap(l.beta, r.beta) < 1e-12);
            prop_assert!(angle_gap(l.gamma, r.gamma) < 1e-12);
        }

        #[test]
        fn composition_matches_sequential_action(a in element(), b in element(), amps in amplitudes()) {
            let f = random_state(&amps);
            let one = apply(&a.compose(&b), &f);
            let two = apply(&a, &apply(&b, &f));
            prop_assert_eq!(one.len(), two.len());
            for (x, y) in one.coeffs().iter().zip(two.coeffs()) {
                prop_assert!((x - y).norm() < 1e-12);
            }
        }

        #[test]
        fn action_is_isometric(a in element(), amps in amplitudes()) {
            let f = random_state(&amps);
            let g = apply(&a, &f);
            prop_assert!((g.norm_sqr() - f.norm_sqr()).abs() < 1e-15);
            prop_assert_eq!(g.norm_defect(), f.norm_defect());
        }
    }
}
