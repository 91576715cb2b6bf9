//! Phase-free Pauli operators in the symplectic (x | z) representation.
//!
//! A qubit carries X when only its x bit is set, Z when only its z bit is
//! set and Y when both are. Global phases are dropped, so [`PauliString`]
//! is an element of the Pauli group modulo phase.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_len, Error, Result};

const WORD: usize = 64;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | '_' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// An n-qubit Pauli operator with its x and z bits packed into words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

fn words(n: usize) -> usize {
    n.div_ceil(WORD)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
        }
    }

    /// Builds an operator from explicit x and z bit vectors.
    pub fn from_bits(x_bits: &[bool], z_bits: &[bool]) -> Result<Self> {
        check_len(x_bits.len(), z_bits.len())?;
        let mut p = PauliString::identity(x_bits.len());
        for (j, (&x, &z)) in x_bits.iter().zip(z_bits).enumerate() {
            p.set(j, Pauli::from_bits(x, z));
        }
        Ok(p)
    }

    /// Operator acting with `pauli` on every listed qubit and identity elsewhere.
    pub fn from_support(n: usize, support: &[usize], pauli: Pauli) -> Self {
        let mut p = PauliString::identity(n);
        for &j in support {
            p.set(j, pauli);
        }
        p
    }

    /// Assembles the operator X^{e_x} Z^{e_z} from two binary error vectors.
    pub fn from_xz_vectors(e_x: &[bool], e_z: &[bool]) -> Result<Self> {
        PauliString::from_bits(e_x, e_z)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn x_bit(&self, j: usize) -> bool {
        assert!(j < self.n, "qubit {j} out of range for {} qubits", self.n);
        self.x[j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn z_bit(&self, j: usize) -> bool {
        assert!(j < self.n, "qubit {j} out of range for {} qubits", self.n);
        self.z[j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn get(&self, j: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(j), self.z_bit(j))
    }

    pub fn set(&mut self, j: usize, pauli: Pauli) {
        assert!(j < self.n, "qubit {j} out of range for {} qubits", self.n);
        let (x, z) = pauli.bits();
        let mask = 1u64 << (j % WORD);
        let w = j / WORD;
        if x {
            self.x[w] |= mask;
        } else {
            self.x[w] &= !mask;
        }
        if z {
            self.z[w] |= mask;
        } else {
            self.z[w] &= !mask;
        }
    }

    /// Right-multiplies qubit `j` by `pauli` (phase dropped).
    pub fn apply(&mut self, j: usize, pauli: Pauli) {
        let (x, z) = pauli.bits();
        let mask = 1u64 << (j % WORD);
        if x {
            self.x[j / WORD] ^= mask;
        }
        if z {
            self.z[j / WORD] ^= mask;
        }
    }

    pub fn x_bits(&self) -> Vec<bool> {
        (0..self.n).map(|j| self.x_bit(j)).collect()
    }

    pub fn z_bits(&self) -> Vec<bool> {
        (0..self.n).map(|j| self.z_bit(j)).collect()
    }

    /// 0 when the operators commute, 1 when they anticommute.
    pub fn symplectic_product(&self, other: &PauliString) -> Result<u8> {
        check_len(self.n, other.n)?;
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc ^= (self.x[w] & other.z[w]).count_ones() ^ (self.z[w] & other.x[w]).count_ones();
        }
        Ok((acc & 1) as u8)
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        Ok(self.symplectic_product(other)? == 0)
    }

    /// Group product modulo phase: componentwise XOR of both bit vectors.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        let mut out = self.clone();
        out.multiply_assign(other)?;
        Ok(out)
    }

    pub fn multiply_assign(&mut self, other: &PauliString) -> Result<()> {
        check_len(self.n, other.n)?;
        for w in 0..self.x.len() {
            self.x[w] ^= other.x[w];
            self.z[w] ^= other.z[w];
        }
        Ok(())
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Qubits where the operator is not the identity, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.get(j) != Pauli::I).collect()
    }

    /// Sparse form: the non-identity letters and the qubits they act on.
    pub fn to_sparse(&self) -> (String, Vec<usize>) {
        let support = self.support();
        let letters = support.iter().map(|&j| self.get(j).as_char()).collect();
        (letters, support)
    }

    pub fn from_sparse(n: usize, letters: &str, qubits: &[usize]) -> Result<Self> {
        let letters: Vec<char> = letters.chars().collect();
        check_len(letters.len(), qubits.len())?;
        let mut p = PauliString::identity(n);
        for (&c, &j) in letters.iter().zip(qubits) {
            let pauli = Pauli::from_char(c)
                .ok_or_else(|| Error::Parse(format!("invalid Pauli letter {c:?}")))?;
            if j >= n {
                return Err(Error::Parse(format!("qubit index {j} out of range for {n} qubits")));
            }
            p.set(j, pauli);
        }
        Ok(p)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses a dense literal over {I, X, Y, Z}; `_` is accepted for I.
    fn from_str(s: &str) -> Result<Self> {
        let letters: Vec<char> = s.trim().chars().collect();
        let mut p = PauliString::identity(letters.len());
        for (j, &c) in letters.iter().enumerate() {
            let pauli = Pauli::from_char(c)
                .ok_or_else(|| Error::Parse(format!("invalid Pauli letter {c:?} at {j}")))?;
            p.set(j, pauli);
        }
        Ok(p)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.n {
            write!(f, "{}", self.get(j).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}
