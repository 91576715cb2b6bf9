//! Binary matrices and the small amount of GF(2) linear algebra the code
//! construction needs.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::pauli::PauliString;

/// Sparse binary matrix stored as the sorted column indices of each row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryMatrix {
    cols: usize,
    rows: Vec<Vec<usize>>,
}

impl BinaryMatrix {
    pub fn new(cols: usize, mut rows: Vec<Vec<usize>>) -> Result<Self> {
        for row in &mut rows {
            row.sort_unstable();
            row.dedup();
            if let Some(&j) = row.last() {
                if j >= cols {
                    return Err(Error::Dimension { expected: cols, found: j + 1 });
                }
            }
        }
        Ok(BinaryMatrix { cols, rows })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            cols,
            rows: vec![Vec::new(); rows],
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&j).is_ok()
    }

    /// Row indices holding a one in each column.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (i, row) in self.rows.iter().enumerate() {
            for &j in row {
                cols[j].push(i);
            }
        }
        cols
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, v: &[bool]) -> Result<Vec<bool>> {
        check_len(self.cols, v.len())?;
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().fold(false, |acc, &j| acc ^ v[j]))
            .collect())
    }

    pub fn to_dense(&self) -> Vec<Vec<bool>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![false; self.cols];
                for &j in row {
                    dense[j] = true;
                }
                dense
            })
            .collect()
    }
}

/// Dense bit row used during elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn zeros(len: usize) -> Self {
        BitRow(vec![0; len.div_ceil(64)])
    }

    fn get(&self, j: usize) -> bool {
        self.0[j / 64] >> (j % 64) & 1 == 1
    }

    fn flip(&mut self, j: usize) {
        self.0[j / 64] ^= 1 << (j % 64);
    }

    fn xor(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }
}

/// Reduced row echelon form in place; returns the pivot column of each
/// surviving row. Zero rows are dropped.
fn rref(rows: &mut Vec<BitRow>, width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(found) = (r..rows.len()).find(|&i| rows[i].get(col)) else {
            continue;
        };
        rows.swap(r, found);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(col) {
                row.xor(&pivot);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Symplectic vector (x | z) of length 2n.
fn to_row(p: &PauliString) -> BitRow {
    let n = p.len();
    let mut row = BitRow::zeros(2 * n);
    for j in 0..n {
        if p.x_bit(j) {
            row.flip(j);
        }
        if p.z_bit(j) {
            row.flip(n + j);
        }
    }
    row
}

fn from_row(row: &BitRow, n: usize) -> PauliString {
    let x: Vec<bool> = (0..n).map(|j| row.get(j)).collect();
    let z: Vec<bool> = (0..n).map(|j| row.get(n + j)).collect();
    PauliString::from_bits(&x, &z).expect("equal lengths by construction")
}

/// Rank over GF(2) of the symplectic matrix of a set of operators.
pub fn symplectic_rank(ops: &[PauliString]) -> usize {
    let Some(first) = ops.first() else { return 0 };
    let n = first.len();
    let mut rows: Vec<BitRow> = ops.iter().map(to_row).collect();
    rref(&mut rows, 2 * n).len()
}

/// Basis of the operators commuting with every member of `ops` (the
/// normalizer, when `ops` generate a stabilizer group).
pub fn commutant_basis(ops: &[PauliString], n: usize) -> Vec<PauliString> {
    // v commutes with s iff <s_x, v_z> + <s_z, v_x> = 0, i.e. v is in the
    // ordinary null space of the rows (s_z | s_x).
    let mut rows: Vec<BitRow> = ops
        .iter()
        .map(|s| {
            let mut row = BitRow::zeros(2 * n);
            for j in 0..n {
                if s.z_bit(j) {
                    row.flip(j);
                }
                if s.x_bit(j) {
                    row.flip(n + j);
                }
            }
            row
        })
        .collect();
    let pivots = rref(&mut rows, 2 * n);
    let mut is_pivot = vec![false; 2 * n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..2 * n).filter(|&c| !is_pivot[c]) {
        let mut v = BitRow::zeros(2 * n);
        v.flip(free);
        for (row, &pc) in rows.iter().zip(&pivots) {
            if row.get(free) {
                v.flip(pc);
            }
        }
        basis.push(from_row(&v, n));
    }
    basis
}

/// True when `op` lies in the GF(2) row space spanned by `ops`.
pub fn in_span(ops: &[PauliString], op: &PauliString) -> bool {
    let n = op.len();
    let mut rows: Vec<BitRow> = ops.iter().map(to_row).collect();
    let before = rref(&mut rows, 2 * n).len();
    rows.push(to_row(op));
    rref(&mut rows, 2 * n).len() == before
}

/// A pair of anticommuting operators that commute with every stabilizer but
/// lie outside the stabilizer group. Fails unless exactly one logical qubit
/// is encoded.
pub fn logical_pair(stabilizers: &[PauliString], n: usize) -> Result<(PauliString, PauliString)> {
    let rank = symplectic_rank(stabilizers);
    let normalizer = commutant_basis(stabilizers, n);
    // The normalizer always contains the stabilizer group when it is abelian.
    if normalizer.len() < rank || normalizer.len() - rank != 2 {
        return Err(Error::Construction(format!(
            "expected one encoded qubit, stabilizer rank {rank} leaves a normalizer of dimension {}",
            normalizer.len()
        )));
    }
    let mut span: Vec<PauliString> = stabilizers.to_vec();
    let mut extra = Vec::new();
    for candidate in normalizer {
        if !in_span(&span, &candidate) {
            span.push(candidate.clone());
            extra.push(candidate);
        }
    }
    let [a, b]: [PauliString; 2] = extra
        .try_into()
        .map_err(|_| Error::Construction("stabilizers do not commute".into()))?;
    if a.symplectic_product(&b)? != 1 {
        return Err(Error::Construction(
            "logical candidates commute; stabilizers are not mutually commuting".into(),
        ));
    }
    Ok((a, b))
}
