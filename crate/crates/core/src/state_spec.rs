//! JSON state specifications, e.g. `{"kind": "su11_cs", "z": [0.5, 0]}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fock_state::{
    make_bg, make_blaschke_state, make_number, make_pi_superposition, make_su11_cs, superpose,
    FockState,
};
use crate::wigner::ClosedForm;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Number { m: usize },
    /// `(|0> + |m>)/sqrt 2`.
    NumberOut { m: usize },
    Su11Cs { z: Complex64 },
    Bg { u: Complex64 },
    Blaschke { z: Complex64 },
    PiSuperposition { z: Complex64, tau: f64 },
    /// Explicit amplitudes `f_n`, rescaled to unit norm.
    Raw { coeffs: Vec<Complex64> },
    Superpose {
        states: Vec<StateSpec>,
        amplitudes: Vec<Complex64>,
    },
}

impl StateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serialises")
    }

    /// Builds the state with truncation `n`. Raw coefficient lists are
    /// zero-padded or cut to `n`.
    pub fn build(&self, n: usize) -> Result<FockState> {
        match self {
            StateSpec::Number { m } => make_number(*m, n),
            StateSpec::NumberOut { m } => {
                if *m == 0 {
                    return Err(Error::Spec("number_out needs m >= 1".into()));
                }
                let one = Complex64::new(1.0, 0.0);
                superpose(&[make_number(0, n)?, make_number(*m, n)?], &[one, one])
            }
            StateSpec::Su11Cs { z } => make_su11_cs(*z, n),
            StateSpec::Bg { u } => make_bg(*u, n),
            StateSpec::Blaschke { z } => make_blaschke_state(*z, n),
            StateSpec::PiSuperposition { z, tau } => make_pi_superposition(*z, *tau, n),
            StateSpec::Raw { coeffs } => {
                if n == 0 {
                    return Err(Error::Truncation("truncation N must be at least one".into()));
                }
                let mut c = coeffs.clone();
                c.resize(n, Complex64::new(0.0, 0.0));
                FockState::normalized(c)
            }
            StateSpec::Superpose { states, amplitudes } => {
                let built = states
                    .iter()
                    .map(|s| s.build(n))
                    .collect::<Result<Vec<_>>>()?;
                superpose(&built, amplitudes)
            }
        }
    }

    /// Closed-form Wigner function of the named state.
    pub fn closed_form(&self) -> Result<ClosedForm> {
        match *self {
            StateSpec::Number { m } => Ok(ClosedForm::Number { m }),
            StateSpec::NumberOut { m } => Ok(ClosedForm::NumberOut { m }),
            StateSpec::Su11Cs { z } => Ok(ClosedForm::Su11Cs { z }),
            StateSpec::Bg { u } => Ok(ClosedForm::Bg { u }),
            StateSpec::Blaschke { z } => Ok(ClosedForm::Blaschke { z }),
            StateSpec::PiSuperposition { z, tau } => Ok(ClosedForm::PiSuperposition { z, tau }),
            StateSpec::Raw { .. } | StateSpec::Superpose { .. } => Err(Error::Spec(
                "no closed-form Wigner function for this kind".into(),
            )),
        }
    }
}
