//! Named reference states with their known factorisation structure.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::fock_state::FockState;
use crate::state_spec::StateSpec;
use crate::Result;

/// What the factorisation of a catalog state must find.
#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    /// Order of the zero at the origin.
    pub leading_order: usize,
    /// Zeros inside the disk, away from the origin.
    pub zeros: Vec<Complex64>,
    /// `Theta` vanishes somewhere on the circle.
    pub boundary_zeros: bool,
}

impl Expected {
    fn outer() -> Self {
        Self {
            leading_order: 0,
            zeros: Vec::new(),
            boundary_zeros: false,
        }
    }

    /// Outer state (no inner factor at all).
    pub fn is_outer(&self) -> bool {
        self.leading_order == 0 && self.zeros.is_empty()
    }

    /// `sum ln(1/|gamma|)` over the off-origin zeros.
    pub fn log_depth(&self) -> f64 {
        self.zeros.iter().map(|g| -g.norm().ln()).sum()
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: StateSpec,
    pub state: FockState,
    pub expected: Expected,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Zero `i cot(tau/2)/z0*` of the superposition `|z0, tau>`, if inside the disk.
pub fn pi_superposition_zero(z0: Complex64, tau: f64) -> Option<Complex64> {
    let g = c(0.0, 1.0 / (0.5 * tau).tan()) / z0.conj();
    (g.norm() < 1.0).then_some(g)
}

/// Number states `m <= 8`, `|m>_out`, SU(1,1) coherent states with
/// `|z0| <= 0.8`, Barut-Girardello states with `|u0| <= 3`, Blaschke states
/// and `|z0, tau>` in both regimes, at truncation `n` (`n >= 16`).
pub fn catalog(n: usize) -> Result<Vec<CatalogEntry>> {
    let mut specs: Vec<(String, StateSpec, Expected)> = Vec::new();
    for m in 0..=8 {
        let expected = Expected {
            leading_order: m,
            ..Expected::outer()
        };
        specs.push((format!("number m={m}"), StateSpec::Number { m }, expected));
    }
    for m in [1, 2, 3, 5, 8] {
        let expected = Expected {
            boundary_zeros: true,
            ..Expected::outer()
        };
        specs.push((format!("number_out m={m}"), StateSpec::NumberOut { m }, expected));
    }
    for z in [c(0.5, 0.0), c(0.3, 0.4), c(-0.8, 0.0), c(0.0, 0.6)] {
        specs.push((format!("su11_cs z0={z}"), StateSpec::Su11Cs { z }, Expected::outer()));
    }
    for u in [c(1.0, 0.0), c(0.0, 1.5), c(-2.0, 1.0), c(3.0, 0.0)] {
        specs.push((format!("bg u0={u}"), StateSpec::Bg { u }, Expected::outer()));
    }
    for z in [c(0.5, 0.0), c(-0.3, 0.6), c(0.0, -0.7), c(0.1, 0.05)] {
        let expected = Expected {
            zeros: vec![z],
            ..Expected::outer()
        };
        specs.push((format!("blaschke z0={z}"), StateSpec::Blaschke { z }, expected));
    }
    for (z, tau) in [
        (c(0.3, 0.0), 0.75 * PI),
        (c(0.8, 0.0), 0.75 * PI),
        (c(0.5, 0.5), 0.5 * PI),
        (c(0.6, -0.3), 0.85 * PI),
        (c(0.5, 0.0), PI),
    ] {
        let expected = if tau == PI {
            Expected {
                leading_order: 1,
                ..Expected::outer()
            }
        } else {
            Expected {
                zeros: pi_superposition_zero(z, tau).into_iter().collect(),
                ..Expected::outer()
            }
        };
        specs.push((
            format!("pi_superposition z0={z} tau={tau:.4}"),
            StateSpec::PiSuperposition { z, tau },
            expected,
        ));
    }
    specs
        .into_iter()
        .map(|(name, spec, expected)| {
            Ok(CatalogEntry {
                state: spec.build(n)?,
                name,
                spec,
                expected,
            })
        })
        .collect()
}
