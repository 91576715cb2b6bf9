//! JSON description of a code layout.
//!
//! Operators are stored sparsely as a letter string plus the qubits it acts
//! on, check matrices as one list of column indices per row. Loading
//! rebuilds the layout from the stabilizers and logicals and rejects files
//! whose redundant fields disagree with them.

use serde::{Deserialize, Serialize};

use crate::codes::{CentralQubit, CodeKind, CodeLayout, Coords};
use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;
use crate::pauli::PauliString;

/// The only placement of Y couplings currently defined.
pub const CANONICAL_DISTRIBUTION: &str = "canonical";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsePauli {
    pub paulis: String,
    pub qubits: Vec<usize>,
}

impl SparsePauli {
    pub fn from_pauli(op: &PauliString) -> Self {
        let (paulis, qubits) = op.to_sparse();
        SparsePauli { paulis, qubits }
    }

    pub fn to_pauli(&self, n: usize) -> Result<PauliString> {
        PauliString::from_sparse(n, &self.paulis, &self.qubits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerSet {
    pub x: Vec<SparsePauli>,
    pub zy: Vec<SparsePauli>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralEntry {
    pub qubit: usize,
    pub checks: [usize; 2],
    pub peripheral: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub kind: CodeKind,
    pub distance: usize,
    pub n: usize,
    pub distribution: String,
    pub stabilizers: StabilizerSet,
    pub h_x: Vec<Vec<usize>>,
    pub h_y: Vec<Vec<usize>>,
    pub h_z: Vec<Vec<usize>>,
    pub logical_x: SparsePauli,
    pub logical_z: SparsePauli,
    pub central_qubits: Vec<CentralEntry>,
    pub coords: Coords,
}

impl CodeFile {
    pub fn from_layout(layout: &CodeLayout) -> Self {
        let sparse = |ops: &[PauliString]| ops.iter().map(SparsePauli::from_pauli).collect();
        CodeFile {
            kind: layout.kind(),
            distance: layout.distance(),
            n: layout.n(),
            distribution: CANONICAL_DISTRIBUTION.to_string(),
            stabilizers: StabilizerSet {
                x: sparse(layout.x_checks()),
                zy: sparse(layout.zy_checks()),
            },
            h_x: layout.h_x().rows().to_vec(),
            h_y: layout.h_y().rows().to_vec(),
            h_z: layout.h_z().rows().to_vec(),
            logical_x: SparsePauli::from_pauli(layout.logical_x()),
            logical_z: SparsePauli::from_pauli(layout.logical_z()),
            central_qubits: layout
                .central_qubits()
                .iter()
                .map(|(&qubit, c)| CentralEntry {
                    qubit,
                    checks: [c.checks.0, c.checks.1],
                    peripheral: [c.peripheral.0, c.peripheral.1],
                })
                .collect(),
            coords: layout.coords().clone(),
        }
    }

    pub fn to_layout(&self) -> Result<CodeLayout> {
        if self.distribution != CANONICAL_DISTRIBUTION {
            return Err(Error::Parse(format!(
                "unsupported Y distribution {:?}",
                self.distribution
            )));
        }
        let n = self.n;
        let ops = |list: &[SparsePauli]| -> Result<Vec<PauliString>> {
            list.iter().map(|s| s.to_pauli(n)).collect()
        };
        let layout = CodeLayout::from_checks(
            self.kind,
            self.distance,
            ops(&self.stabilizers.x)?,
            ops(&self.stabilizers.zy)?,
            Some((self.logical_x.to_pauli(n)?, self.logical_z.to_pauli(n)?)),
            self.coords.clone(),
        )?;
        if layout.n() != n {
            return Err(Error::Parse(format!("n = {n} but the operators span {} qubits", layout.n())));
        }
        let same = |name: &str, stored: &[Vec<usize>], derived: &BinaryMatrix| {
            let stored = BinaryMatrix::new(n, stored.to_vec())?;
            if &stored == derived {
                Ok(())
            } else {
                Err(Error::Parse(format!("{name} does not match the stabilizers")))
            }
        };
        same("h_x", &self.h_x, layout.h_x())?;
        same("h_y", &self.h_y, layout.h_y())?;
        same("h_z", &self.h_z, layout.h_z())?;
        let central: Vec<(usize, CentralQubit)> = self
            .central_qubits
            .iter()
            .map(|c| {
                (
                    c.qubit,
                    CentralQubit {
                        checks: (c.checks[0], c.checks[1]),
                        peripheral: (c.peripheral[0], c.peripheral[1]),
                    },
                )
            })
            .collect();
        let derived: Vec<(usize, CentralQubit)> =
            layout.central_qubits().iter().map(|(&q, &c)| (q, c)).collect();
        if central != derived {
            return Err(Error::Parse("central_qubits does not match the stabilizers".into()));
        }
        Ok(layout)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("code file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_planar, build_xyz_planar};

    #[test]
    fn round_trips_both_kinds() {
        for layout in [build_planar(3).unwrap(), build_xyz_planar(5).unwrap()] {
            let file = CodeFile::from_layout(&layout);
            let text = file.to_json();
            let back = CodeFile::from_json(&text).unwrap().to_layout().unwrap();
            assert_eq!(back.h_x(), layout.h_x());
            assert_eq!(back.h_y(), layout.h_y());
            assert_eq!(back.h_z(), layout.h_z());
            assert_eq!(back.logical_x(), layout.logical_x());
            assert_eq!(back.logical_z(), layout.logical_z());
            assert_eq!(back.central_qubits(), layout.central_qubits());
            assert_eq!(CodeFile::from_layout(&back).to_json(), text);
        }
    }

    #[test]
    fn planar_file_has_empty_y_block() {
        let file = CodeFile::from_layout(&build_planar(3).unwrap());
        assert!(file.h_y.iter().all(Vec::is_empty));
        assert_eq!(file.n, 13);
        assert_eq!(file.stabilizers.x.len() + file.stabilizers.zy.len(), 12);
    }

    #[test]
    fn rejects_inconsistent_matrices() {
        let mut file = CodeFile::from_layout(&build_xyz_planar(3).unwrap());
        file.h_y[0].clear();
        assert!(matches!(file.to_layout(), Err(Error::Parse(_))));
        let mut file = CodeFile::from_layout(&build_xyz_planar(3).unwrap());
        file.distribution = "staggered".into();
        assert!(file.to_layout().is_err());
    }
}
