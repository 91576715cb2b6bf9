//! Planar and XYZ planar code layouts.
//!
//! # Lattice convention
//!
//! A distance-`d` layout lives on a `(2d-1) x (2d-1)` grid with rows
//! `r = 0..2d-1` numbered top to bottom and columns `c = 0..2d-1` left to
//! right. Lattice row `r` is row `r + 1` in one-based counting.
//!
//! * data qubits sit at `(r, c)` with `r + c` even,
//! * X checks sit at even `r`, odd `c`,
//! * Z (or ZY) checks sit at odd `r`, even `c`.
//!
//! Qubits and checks are indexed in row-major order of their coordinates.
//! Each check acts on its up/down/left/right neighbours that exist, so bulk
//! checks have weight four and X checks on the top/bottom edges or Z checks
//! on the left/right edges have weight three.
//!
//! In the XYZ planar code every Z check trades one Z for a Y: the data rows
//! `r = 4i - 2` (one-based `4i - 1`, `i = 1..=(d-1)/2`) carry Y from the
//! check directly above and the check directly below. Each such qubit is
//! the *central* qubit of that pair of ZY checks; the remaining qubits of a
//! ZY check are its *peripheral* qubits (three in the bulk, two on the left
//! and right edges).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{self, BinaryMatrix};
use crate::pauli::{Pauli, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeKind {
    Planar,
    XyzPlanar,
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::Planar => "planar",
            CodeKind::XyzPlanar => "xyz-planar",
        })
    }
}

impl std::str::FromStr for CodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "planar" => Ok(CodeKind::Planar),
            "xyz" | "xyz-planar" => Ok(CodeKind::XyzPlanar),
            other => Err(Error::Parse(format!("unknown code kind {other:?}"))),
        }
    }
}

/// Central qubit of a pair of ZY checks, with the number of peripheral
/// qubits of each check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralQubit {
    pub checks: (usize, usize),
    pub peripheral: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

/// Lattice positions of everything in a layout.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coords {
    pub data: Vec<Coord>,
    pub x_checks: Vec<Coord>,
    pub zy_checks: Vec<Coord>,
}

/// An immutable code instance.
#[derive(Debug, Clone)]
pub struct CodeLayout {
    kind: CodeKind,
    distance: usize,
    n: usize,
    x_checks: Vec<PauliString>,
    zy_checks: Vec<PauliString>,
    h_x: BinaryMatrix,
    h_y: BinaryMatrix,
    h_z: BinaryMatrix,
    logical_x: PauliString,
    logical_z: PauliString,
    central_qubits: BTreeMap<usize, CentralQubit>,
    coords: Coords,
}

impl CodeLayout {
    /// Assembles a layout from explicit check operators. The check matrices
    /// and the central-qubit map are derived from the operators; when
    /// `logicals` is `None` they are computed with [`compute_logicals`].
    /// No invariant is enforced here, see [`validate_layout`].
    pub fn from_checks(
        kind: CodeKind,
        distance: usize,
        x_checks: Vec<PauliString>,
        zy_checks: Vec<PauliString>,
        logicals: Option<(PauliString, PauliString)>,
        coords: Coords,
    ) -> Result<Self> {
        let n = coords.data.len().max(
            x_checks
                .iter()
                .chain(&zy_checks)
                .map(PauliString::len)
                .max()
                .unwrap_or(0),
        );
        for op in x_checks.iter().chain(&zy_checks) {
            crate::error::check_len(n, op.len())?;
        }
        let support = |ops: &[PauliString], pick: fn(&PauliString, usize) -> bool| {
            let rows = ops
                .iter()
                .map(|op| (0..n).filter(|&j| pick(op, j)).collect())
                .collect();
            BinaryMatrix::new(n, rows)
        };
        let h_x = support(&x_checks, PauliString::x_bit)?;
        let h_y = support(&zy_checks, |op, j| op.get(j) == Pauli::Y)?;
        let h_z = support(&zy_checks, PauliString::z_bit)?;

        let mut central_qubits = BTreeMap::new();
        for (j, col) in h_y.columns().into_iter().enumerate() {
            if let [i1, i2] = col[..] {
                central_qubits.insert(
                    j,
                    CentralQubit {
                        checks: (i1, i2),
                        peripheral: (zy_checks[i1].weight() - 1, zy_checks[i2].weight() - 1),
                    },
                );
            }
        }

        let mut layout = CodeLayout {
            kind,
            distance,
            n,
            x_checks,
            zy_checks,
            h_x,
            h_y,
            h_z,
            logical_x: PauliString::identity(n),
            logical_z: PauliString::identity(n),
            central_qubits,
            coords,
        };
        let (lx, lz) = match logicals {
            Some(pair) => pair,
            None => compute_logicals(&layout)?,
        };
        crate::error::check_len(n, lx.len())?;
        crate::error::check_len(n, lz.len())?;
        layout.logical_x = lx;
        layout.logical_z = lz;
        Ok(layout)
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    /// Number of data qubits.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_checks(&self) -> &[PauliString] {
        &self.x_checks
    }

    pub fn zy_checks(&self) -> &[PauliString] {
        &self.zy_checks
    }

    /// All stabilizer generators, X checks first.
    pub fn stabilizers(&self) -> impl Iterator<Item = &PauliString> {
        self.x_checks.iter().chain(&self.zy_checks)
    }

    pub fn h_x(&self) -> &BinaryMatrix {
        &self.h_x
    }

    /// X components of the ZY checks: ones exactly at Y positions.
    pub fn h_y(&self) -> &BinaryMatrix {
        &self.h_y
    }

    /// Z components of the ZY checks (Y positions included).
    pub fn h_z(&self) -> &BinaryMatrix {
        &self.h_z
    }

    pub fn logical_x(&self) -> &PauliString {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &PauliString {
        &self.logical_z
    }

    pub fn central_qubits(&self) -> &BTreeMap<usize, CentralQubit> {
        &self.central_qubits
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    /// Data qubits with at least one Y in some ZY check.
    pub fn y_qubit_count(&self) -> usize {
        self.h_y.columns().iter().filter(|c| !c.is_empty()).count()
    }

    /// Copy of the layout with different logical operators. Used to probe
    /// the validator.
    pub fn with_logicals(&self, logical_x: PauliString, logical_z: PauliString) -> Self {
        CodeLayout {
            logical_x,
            logical_z,
            ..self.clone()
        }
    }
}

fn check_distance(d: usize) -> Result<()> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::Parameter(format!("distance must be odd ≥ 3, got {d}")));
    }
    Ok(())
}

/// Expected number of data qubits, `d² + (d-1)²`.
pub fn qubit_count(d: usize) -> usize {
    2 * d * d - 2 * d + 1
}

/// Expected number of Y-involved data qubits of the XYZ planar code.
pub fn y_count(d: usize) -> usize {
    (d - 1) / 2 * d
}

fn is_y_row(row: usize) -> bool {
    row % 4 == 2
}

struct Lattice {
    size: usize,
    data_index: BTreeMap<(usize, usize), usize>,
    coords: Coords,
}

impl Lattice {
    fn new(d: usize) -> Self {
        let size = 2 * d - 1;
        let mut coords = Coords::default();
        let mut data_index = BTreeMap::new();
        for row in 0..size {
            for col in 0..size {
                let at = Coord { row, col };
                if (row + col) % 2 == 0 {
                    data_index.insert((row, col), coords.data.len());
                    coords.data.push(at);
                } else if row % 2 == 0 {
                    coords.x_checks.push(at);
                } else {
                    coords.zy_checks.push(at);
                }
            }
        }
        Lattice {
            size,
            data_index,
            coords,
        }
    }

    fn neighbours(&self, at: Coord) -> Vec<(usize, usize)> {
        let (r, c) = (at.row as isize, at.col as isize);
        [(r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)]
            .into_iter()
            .filter(|&(r, c)| r >= 0 && c >= 0 && (r as usize) < self.size && (c as usize) < self.size)
            .map(|(r, c)| (r as usize, c as usize))
            .collect()
    }

    fn qubit(&self, row: usize, col: usize) -> usize {
        self.data_index[&(row, col)]
    }

    fn n(&self) -> usize {
        self.coords.data.len()
    }
}

fn build(d: usize, kind: CodeKind) -> Result<CodeLayout> {
    check_distance(d)?;
    let lattice = Lattice::new(d);
    let n = lattice.n();
    let x_checks = lattice
        .coords
        .x_checks
        .iter()
        .map(|&at| {
            let support: Vec<usize> = lattice
                .neighbours(at)
                .into_iter()
                .map(|(r, c)| lattice.qubit(r, c))
                .collect();
            PauliString::from_support(n, &support, Pauli::X)
        })
        .collect();
    let zy_checks = lattice
        .coords
        .zy_checks
        .iter()
        .map(|&at| {
            let mut op = PauliString::identity(n);
            for (r, c) in lattice.neighbours(at) {
                let central = kind == CodeKind::XyzPlanar && c == at.col && is_y_row(r);
                op.set(lattice.qubit(r, c), if central { Pauli::Y } else { Pauli::Z });
            }
            op
        })
        .collect();
    CodeLayout::from_checks(kind, d, x_checks, zy_checks, None, lattice.coords)
}

/// Standard planar code of odd distance `d`.
pub fn build_planar(d: usize) -> Result<CodeLayout> {
    build(d, CodeKind::Planar)
}

/// XYZ planar code of odd distance `d`.
pub fn build_xyz_planar(d: usize) -> Result<CodeLayout> {
    build(d, CodeKind::XyzPlanar)
}

pub fn build_code(kind: CodeKind, d: usize) -> Result<CodeLayout> {
    build(d, kind)
}

/// Logical operator pair `(X̄, Z̄)` of a layout, ignoring whatever logicals
/// it currently holds.
///
/// The pair is found by GF(2) elimination on the symplectic check matrix.
/// When lattice coordinates are available, a pure-Z string along a data row
/// and a pure-X string down a data column are preferred over the raw
/// elimination output, taking the first rows/columns (from the top/left)
/// that yield valid logicals. For the XYZ code this selects a Y-free row.
pub fn compute_logicals(layout: &CodeLayout) -> Result<(PauliString, PauliString)> {
    let n = layout.n;
    let stabs: Vec<PauliString> = layout.stabilizers().cloned().collect();
    let (a, b) = gf2::logical_pair(&stabs, n)?;
    let in_normalizer = |op: &PauliString| stabs.iter().all(|s| s.commutes_with(op).unwrap_or(false));
    let nontrivial = |op: &PauliString| {
        a.symplectic_product(op).unwrap_or(0) == 1 || b.symplectic_product(op).unwrap_or(0) == 1
    };

    let data = &layout.coords.data;
    let lines = |by_row: bool, pauli: Pauli| -> Vec<PauliString> {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (j, at) in data.iter().enumerate() {
            groups
                .entry(if by_row { at.row } else { at.col })
                .or_default()
                .push(j);
        }
        groups
            .into_values()
            .map(|support| PauliString::from_support(n, &support, pauli))
            .collect()
    };

    let logical_z = if data.len() == n {
        lines(true, Pauli::Z)
            .into_iter()
            .find(|z| in_normalizer(z) && nontrivial(z))
    } else {
        None
    };
    let Some(logical_z) = logical_z else {
        return Ok((a, b));
    };
    let logical_x = lines(false, Pauli::X)
        .into_iter()
        .find(|x| in_normalizer(x) && logical_z.symplectic_product(x).unwrap_or(0) == 1)
        .unwrap_or_else(|| {
            let ab = a.multiply(&b).expect("equal lengths");
            [a.clone(), b.clone(), ab]
                .into_iter()
                .find(|x| logical_z.symplectic_product(x).unwrap_or(0) == 1)
                .expect("some combination of a logical pair anticommutes with a logical")
        });
    Ok((logical_x, logical_z))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    X,
    Zy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckId {
    pub kind: CheckKind,
    pub index: usize,
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CheckKind::X => write!(f, "X{}", self.index),
            CheckKind::Zy => write!(f, "ZY{}", self.index),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogicalKind {
    X,
    Z,
}

/// One broken invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    QubitCount { expected: usize, found: usize },
    CheckCount { expected: usize, found: usize },
    StabilizerRank { expected: usize, found: usize },
    NotPureX { check: usize },
    AnticommutingChecks { first: CheckId, second: CheckId },
    LogicalAnticommutes { logical: LogicalKind, check: CheckId },
    LogicalsCommute,
    YCount { expected: usize, found: usize },
    YColumnWeight { qubit: usize, weight: usize },
    PeripheralCount { qubit: usize, check: usize, count: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::QubitCount { expected, found } => {
                write!(f, "qubit count {found}, expected {expected}")
            }
            Violation::CheckCount { expected, found } => {
                write!(f, "{found} stabilizer generators, expected {expected}")
            }
            Violation::StabilizerRank { expected, found } => {
                write!(f, "stabilizer rank {found}, expected {expected}")
            }
            Violation::NotPureX { check } => write!(f, "X check {check} is not a pure X operator"),
            Violation::AnticommutingChecks { first, second } => {
                write!(f, "stabilizers {first} and {second} anticommute")
            }
            Violation::LogicalAnticommutes { logical, check } => {
                write!(f, "logical {logical:?} anticommutes with stabilizer {check}")
            }
            Violation::LogicalsCommute => write!(f, "logical X and logical Z commute"),
            Violation::YCount { expected, found } => {
                write!(f, "{found} Y-involved qubits, expected {expected}")
            }
            Violation::YColumnWeight { qubit, weight } => {
                write!(f, "qubit {qubit} carries Y in {weight} checks, expected 0 or 2")
            }
            Violation::PeripheralCount { qubit, check, count } => write!(
                f,
                "central qubit {qubit}: ZY check {check} has {count} peripheral qubits, expected 2 or 3"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of a layout and lists the failures.
pub fn validate_layout(layout: &CodeLayout) -> ValidationReport {
    let mut violations = Vec::new();
    let d = layout.distance;
    let n = layout.n;

    if n != qubit_count(d) {
        violations.push(Violation::QubitCount {
            expected: qubit_count(d),
            found: n,
        });
    }
    let m = layout.x_checks.len() + layout.zy_checks.len();
    if m + 1 != n {
        violations.push(Violation::CheckCount {
            expected: n.saturating_sub(1),
            found: m,
        });
    }
    let stabs: Vec<(CheckId, &PauliString)> = layout
        .x_checks
        .iter()
        .enumerate()
        .map(|(index, s)| (CheckId { kind: CheckKind::X, index }, s))
        .chain(
            layout
                .zy_checks
                .iter()
                .enumerate()
                .map(|(index, s)| (CheckId { kind: CheckKind::Zy, index }, s)),
        )
        .collect();
    let owned: Vec<PauliString> = stabs.iter().map(|(_, s)| (*s).clone()).collect();
    let rank = gf2::symplectic_rank(&owned);
    if rank != m {
        violations.push(Violation::StabilizerRank { expected: m, found: rank });
    }
    for (i, x) in layout.x_checks.iter().enumerate() {
        if (0..n).any(|j| x.z_bit(j)) {
            violations.push(Violation::NotPureX { check: i });
        }
    }
    for (a, &(id_a, sa)) in stabs.iter().enumerate() {
        for &(id_b, sb) in &stabs[a + 1..] {
            if sa.symplectic_product(sb).unwrap_or(1) == 1 {
                violations.push(Violation::AnticommutingChecks {
                    first: id_a,
                    second: id_b,
                });
            }
        }
    }
    for (kind, logical) in [(LogicalKind::X, &layout.logical_x), (LogicalKind::Z, &layout.logical_z)] {
        for &(id, s) in &stabs {
            if s.symplectic_product(logical).unwrap_or(1) == 1 {
                violations.push(Violation::LogicalAnticommutes { logical: kind, check: id });
            }
        }
    }
    if layout.logical_x.symplectic_product(&layout.logical_z).unwrap_or(0) != 1 {
        violations.push(Violation::LogicalsCommute);
    }

    let expected_y = match layout.kind {
        CodeKind::Planar => 0,
        CodeKind::XyzPlanar => y_count(d),
    };
    let found_y = layout.y_qubit_count();
    if found_y != expected_y {
        violations.push(Violation::YCount {
            expected: expected_y,
            found: found_y,
        });
    }
    for (qubit, col) in layout.h_y.columns().iter().enumerate() {
        if !(col.is_empty() || col.len() == 2) {
            violations.push(Violation::YColumnWeight {
                qubit,
                weight: col.len(),
            });
        }
    }
    for (&qubit, central) in &layout.central_qubits {
        for (check, count) in [
            (central.checks.0, central.peripheral.0),
            (central.checks.1, central.peripheral.1),
        ] {
            if !(2..=3).contains(&count) {
                violations.push(Violation::PeripheralCount { qubit, check, count });
            }
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_counts() {
        let c3 = build_planar(3).unwrap();
        assert_eq!(c3.n(), 13);
        assert_eq!(c3.x_checks().len() + c3.zy_checks().len(), 12);
        let c5 = build_planar(5).unwrap();
        assert_eq!(c5.n(), 41);
        assert_eq!(c5.x_checks().len(), 20);
        assert_eq!(c5.zy_checks().len(), 20);
        assert!(c5.h_y().is_zero());
        assert!(validate_layout(&c3).is_valid());
    }

    #[test]
    fn invalid_distances_are_rejected() {
        for d in [0, 1, 2, 4, 6] {
            assert!(matches!(build_planar(d), Err(Error::Parameter(_))));
            assert!(matches!(build_xyz_planar(d), Err(Error::Parameter(_))));
        }
    }

    #[test]
    fn check_weights_follow_the_boundaries() {
        let code = build_planar(5).unwrap();
        let coords = code.coords();
        for (s, at) in code.x_checks().iter().zip(&coords.x_checks) {
            let edge = at.row == 0 || at.row == 8;
            assert_eq!(s.weight(), if edge { 3 } else { 4 });
        }
        for (s, at) in code.zy_checks().iter().zip(&coords.zy_checks) {
            let edge = at.col == 0 || at.col == 8;
            assert_eq!(s.weight(), if edge { 3 } else { 4 });
        }
    }

    #[test]
    fn xyz_y_qubits_sit_on_the_row_rule() {
        let c3 = build_xyz_planar(3).unwrap();
        assert_eq!(c3.y_qubit_count(), 3);
        for &j in c3.central_qubits().keys() {
            // Lattice row 2 is one-based row 3.
            assert_eq!(c3.coords().data[j].row, 2);
        }
        let c5 = build_xyz_planar(5).unwrap();
        assert_eq!(c5.y_qubit_count(), 10);
        assert_eq!(c5.central_qubits().len(), 10);
        for col in c5.h_y().columns() {
            assert!(col.is_empty() || col.len() == 2);
        }
        for check in c5.zy_checks() {
            let ys = (0..c5.n()).filter(|&j| check.get(j) == Pauli::Y).count();
            assert_eq!(ys, 1);
        }
    }

    #[test]
    fn central_qubits_have_matching_peripheral_counts() {
        let code = build_xyz_planar(7).unwrap();
        for (&j, central) in code.central_qubits() {
            let col = code.coords().data[j].col;
            let expected = if col == 0 || col == 12 { 2 } else { 3 };
            assert_eq!(central.peripheral, (expected, expected));
        }
    }

    #[test]
    fn xyz_layouts_validate() {
        assert!(validate_layout(&build_xyz_planar(7).unwrap()).is_valid());
    }

    #[test]
    fn planar_logicals_are_straight_strings() {
        let code = build_planar(3).unwrap();
        let z = code.logical_z();
        assert_eq!(z.weight(), 3);
        assert!(z.support().iter().all(|&j| code.coords().data[j].row == 0));
        assert!((0..code.n()).all(|j| !z.x_bit(j)));
        let x = code.logical_x();
        assert_eq!(x.weight(), 3);
        assert!(x.support().iter().all(|&j| code.coords().data[j].col == 0));
        assert_eq!(x.symplectic_product(z).unwrap(), 1);
    }

    #[test]
    fn xyz_logical_z_avoids_y_rows() {
        let code = build_xyz_planar(5).unwrap();
        let (x, z) = compute_logicals(&code).unwrap();
        assert_eq!(x.symplectic_product(&z).unwrap(), 1);
        assert!((0..code.n()).all(|j| !z.x_bit(j)));
        for j in z.support() {
            assert!(!code.central_qubits().contains_key(&j));
        }
        assert_eq!(&z, code.logical_z());
    }

    #[test]
    fn moving_a_y_is_reported_as_anticommuting_pair() {
        let code = build_xyz_planar(5).unwrap();
        let (&central, info) = code.central_qubits().iter().nth(3).unwrap();
        let mut zy = code.zy_checks().to_vec();
        let target = info.checks.0;
        // Turn the Y of one check back into Z; its partner still has Y there.
        zy[target].set(central, Pauli::Z);
        let broken = CodeLayout::from_checks(
            code.kind(),
            code.distance(),
            code.x_checks().to_vec(),
            zy,
            Some((code.logical_x().clone(), code.logical_z().clone())),
            code.coords().clone(),
        )
        .unwrap();
        let report = validate_layout(&broken);
        let pair = Violation::AnticommutingChecks {
            first: CheckId { kind: CheckKind::Zy, index: info.checks.0 },
            second: CheckId { kind: CheckKind::Zy, index: info.checks.1 },
        };
        assert!(report.violations.contains(&pair), "{report}");
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::YColumnWeight { qubit, weight: 1 } if *qubit == central)));
    }

    #[test]
    fn logical_z_on_a_y_row_is_flagged() {
        let code = build_xyz_planar(5).unwrap();
        let row2: Vec<usize> = (0..code.n())
            .filter(|&j| code.coords().data[j].row == 2)
            .collect();
        let shifted = PauliString::from_support(code.n(), &row2, Pauli::Z);
        let report = validate_layout(&code.with_logicals(code.logical_x().clone(), shifted));
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::LogicalAnticommutes { logical: LogicalKind::Z, check: CheckId { kind: CheckKind::Zy, .. } }
        )));
    }

    #[test]
    fn logicals_that_commute_are_flagged() {
        let code = build_planar(3).unwrap();
        let report = validate_layout(&code.with_logicals(code.logical_z().clone(), code.logical_z().clone()));
        assert!(report.violations.contains(&Violation::LogicalsCommute));
    }

    #[test]
    fn both_kinds_share_x_checks() {
        for d in [3, 5, 7] {
            let planar = build_planar(d).unwrap();
            let xyz = build_xyz_planar(d).unwrap();
            assert_eq!(planar.h_x(), xyz.h_x());
            assert_eq!(planar.h_z(), xyz.h_z());
            assert_eq!(planar.n(), xyz.n());
        }
    }
}
