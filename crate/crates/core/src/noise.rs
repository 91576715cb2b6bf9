//! Independent biased Pauli channel and syndrome extraction.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::CodeLayout;
use crate::error::{check_len, Error, Result};
use crate::pauli::{Pauli, PauliString};

/// How the channel was specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bias {
    /// `η = p_z / (p_x + p_y)` with `p_x = p_y`.
    Finite(f64),
    /// Pure dephasing.
    Infinite,
    /// `(p_x, p_y, p_z)` given directly.
    Custom,
}

impl fmt::Display for Bias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bias::Finite(eta) => write!(f, "{eta}"),
            Bias::Infinite => write!(f, "inf"),
            Bias::Custom => write!(f, "custom"),
        }
    }
}

/// Per-qubit error probabilities of the channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub px: f64,
    pub py: f64,
    pub pz: f64,
    pub bias: Bias,
}

fn check_probability(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} = {v} is not a probability")))
    }
}

impl NoiseParams {
    /// Channel with total error rate `p` and bias `eta`; pass
    /// `f64::INFINITY` for pure dephasing.
    pub fn from_bias(p: f64, eta: f64) -> Result<Self> {
        check_probability("p", p)?;
        if eta.is_nan() || eta <= 0.0 {
            return Err(Error::Parameter(format!("bias must be positive, got {eta}")));
        }
        if eta.is_infinite() {
            return Ok(NoiseParams {
                px: 0.0,
                py: 0.0,
                pz: p,
                bias: Bias::Infinite,
            });
        }
        let pxy = p / (2.0 * (eta + 1.0));
        Ok(NoiseParams {
            px: pxy,
            py: pxy,
            pz: eta * p / (eta + 1.0),
            bias: Bias::Finite(eta),
        })
    }

    pub fn custom(px: f64, py: f64, pz: f64) -> Result<Self> {
        check_probability("p_x", px)?;
        check_probability("p_y", py)?;
        check_probability("p_z", pz)?;
        if px + py + pz > 1.0 + 1e-12 {
            return Err(Error::Parameter(format!(
                "p_x + p_y + p_z = {} exceeds 1",
                px + py + pz
            )));
        }
        Ok(NoiseParams {
            px,
            py,
            pz,
            bias: Bias::Custom,
        })
    }

    /// Total error probability.
    pub fn p(&self) -> f64 {
        self.px + self.py + self.pz
    }

    pub fn p_identity(&self) -> f64 {
        1.0 - self.p()
    }

    /// Probability of an X component (X or Y): what flips a Z-type check.
    pub fn q(&self) -> f64 {
        self.px + self.py
    }

    /// Probability of a Z component (Z or Y): what flips an X check.
    pub fn p_z_component(&self) -> f64 {
        self.py + self.pz
    }

    /// Central-qubit errors that flip both adjacent ZY checks (X or Z).
    pub fn p_flip(&self) -> f64 {
        self.px + self.pz
    }

    /// Central-qubit outcomes that flip neither ZY check (I or Y).
    pub fn p_noflip(&self) -> f64 {
        self.p_identity() + self.py
    }
}

/// Total rate `p` and bias `eta`.
pub fn resolve_params(p: f64, eta: f64) -> Result<NoiseParams> {
    NoiseParams::from_bias(p, eta)
}

pub fn custom_params(px: f64, py: f64, pz: f64) -> Result<NoiseParams> {
    NoiseParams::custom(px, py, pz)
}

/// Random stream owned by trial `trial` of an experiment seeded with
/// `master`. Streams of distinct trials are independent ChaCha streams, so
/// trials can run in any order or in parallel.
pub fn trial_rng(master: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(trial);
    rng
}

/// Draws an error on `n` qubits, each independently I/X/Y/Z.
pub fn sample_error<R: Rng + ?Sized>(params: &NoiseParams, n: usize, rng: &mut R) -> PauliString {
    let mut error = PauliString::identity(n);
    let (cx, cy, cz) = (params.px, params.px + params.py, params.p());
    for j in 0..n {
        let u: f64 = rng.gen();
        if u < cx {
            error.set(j, Pauli::X);
        } else if u < cy {
            error.set(j, Pauli::Y);
        } else if u < cz {
            error.set(j, Pauli::Z);
        }
    }
    error
}

/// Outcomes of the X checks and the ZY checks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syndrome {
    pub s_x: Vec<bool>,
    pub s_zy: Vec<bool>,
}

impl Syndrome {
    pub fn zeros(layout: &CodeLayout) -> Self {
        Syndrome {
            s_x: vec![false; layout.x_checks().len()],
            s_zy: vec![false; layout.zy_checks().len()],
        }
    }

    pub fn is_trivial(&self) -> bool {
        !self.s_x.iter().chain(&self.s_zy).any(|&b| b)
    }

    pub fn xor(&self, other: &Syndrome) -> Result<Syndrome> {
        check_len(self.s_x.len(), other.s_x.len())?;
        check_len(self.s_zy.len(), other.s_zy.len())?;
        Ok(Syndrome {
            s_x: self.s_x.iter().zip(&other.s_x).map(|(a, b)| a ^ b).collect(),
            s_zy: self.s_zy.iter().zip(&other.s_zy).map(|(a, b)| a ^ b).collect(),
        })
    }

    pub fn check_dims(&self, layout: &CodeLayout) -> Result<()> {
        check_len(layout.x_checks().len(), self.s_x.len())?;
        check_len(layout.zy_checks().len(), self.s_zy.len())
    }
}

/// Syndrome of `error`: bit i of each block is the symplectic product of
/// check i with the error.
pub fn syndrome_of(layout: &CodeLayout, error: &PauliString) -> Result<Syndrome> {
    check_len(layout.n(), error.len())?;
    let e_x = error.x_bits();
    let e_z = error.z_bits();
    syndrome_of_vectors(layout, &e_x, &e_z)
}

/// Same as [`syndrome_of`] for an error given as X- and Z-component vectors:
/// `s_x = H_X e_z`, `s_zy = H_Y e_z + H_Z e_x`.
pub fn syndrome_of_vectors(layout: &CodeLayout, e_x: &[bool], e_z: &[bool]) -> Result<Syndrome> {
    let s_x = layout.h_x().mul_vec(e_z)?;
    let from_y = layout.h_y().mul_vec(e_z)?;
    let from_z = layout.h_z().mul_vec(e_x)?;
    Ok(Syndrome {
        s_x,
        s_zy: from_y.iter().zip(&from_z).map(|(a, b)| a ^ b).collect(),
    })
}
