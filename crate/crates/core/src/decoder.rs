//! Posterior edge weights and the two matching decoders.
//!
//! Both decoders run the same two stages. Stage 1 matches the X checks
//! against the Z components of the error. Stage 2 removes from the ZY
//! syndrome the part explained by the stage-1 estimate through the Y
//! positions, then matches the remainder against the X components.
//! pMWPM differs only in stage 1, where the weight of every central qubit
//! is replaced by its posterior given the two adjacent ZY outcomes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codes::{CodeKind, CodeLayout};
use crate::error::{check_len, Error, Result};
use crate::matching::{build_decoding_graph, build_from_weights, fault_weight, DecodingGraph};
use crate::noise::{syndrome_of_vectors, NoiseParams, Syndrome};
use crate::pauli::PauliString;

/// Probabilities that an even / odd number of `k` independent flips, each
/// with probability `q`, occur. Only `k` of 2 and 3 are supported.
pub fn parity_probs(q: f64, k: usize) -> Result<(f64, f64)> {
    let r = 1.0 - q;
    match k {
        2 => Ok((r * r + q * q, 2.0 * q * r)),
        3 => Ok((r * r * r + 3.0 * q * q * r, 3.0 * q * r * r + q * q * q)),
        _ => Err(Error::Parameter(format!("peripheral count must be 2 or 3, got {k}"))),
    }
}

/// Probability that a central qubit carries a Z component (Z or Y) given
/// the outcomes `s1`, `s2` of its two ZY checks with `k1`, `k2` peripheral
/// qubits.
///
/// A zero-probability conditioning event gives 0.
pub fn posterior(params: &NoiseParams, k1: usize, k2: usize, s1: bool, s2: bool) -> Result<f64> {
    let q = params.q();
    let (e1, o1) = parity_probs(q, k1)?;
    let (e2, o2) = parity_probs(q, k2)?;
    if s1 != s2 {
        return Ok(params.py + params.pz);
    }
    let (even, odd) = (e1 * e2, o1 * o2);
    let (num, den) = if s1 {
        (
            params.pz * even + params.py * odd,
            params.p_noflip() * odd + params.p_flip() * even,
        )
    } else {
        (
            params.pz * odd + params.py * even,
            params.p_noflip() * even + params.p_flip() * odd,
        )
    };
    Ok(if den > 0.0 { num / den } else { 0.0 })
}

/// Posteriors and weights for one `(k1, k2)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub p_diff: f64,
    pub p_00: f64,
    pub p_11: f64,
    pub w_diff: f64,
    pub w_00: f64,
    pub w_11: f64,
}

/// One row of the homogeneous table, as exported to CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightRow {
    pub p: f64,
    pub k: usize,
    #[serde(rename = "P_diff")]
    pub p_diff: f64,
    #[serde(rename = "P_00")]
    pub p_00: f64,
    #[serde(rename = "P_11")]
    pub p_11: f64,
    pub w_diff: f64,
    pub w_00: f64,
    pub w_11: f64,
}

/// Precomputed stage-1 weights for one channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightTable {
    pub params: NoiseParams,
    /// Weight of a qubit with no posterior information.
    pub w_prior: f64,
    /// Indexed by `[k1 - 2][k2 - 2]`.
    entries: [[WeightEntry; 2]; 2],
}

impl WeightTable {
    pub fn entry(&self, k1: usize, k2: usize) -> Option<&WeightEntry> {
        if (2..=3).contains(&k1) && (2..=3).contains(&k2) {
            Some(&self.entries[k1 - 2][k2 - 2])
        } else {
            None
        }
    }

    /// Weight for a central qubit whose ZY checks read `(s1, s2)`; falls
    /// back to the prior for unsupported peripheral counts.
    pub fn weight(&self, k1: usize, k2: usize, s1: bool, s2: bool) -> f64 {
        match self.entry(k1, k2) {
            None => self.w_prior,
            Some(e) if s1 != s2 => e.w_diff,
            Some(e) if s1 => e.w_11,
            Some(e) => e.w_00,
        }
    }

    /// Rows for `k1 = k2 = 2` and `k1 = k2 = 3`.
    pub fn rows(&self) -> Vec<WeightRow> {
        [2, 3]
            .into_iter()
            .map(|k| {
                let e = &self.entries[k - 2][k - 2];
                WeightRow {
                    p: self.params.p(),
                    k,
                    p_diff: e.p_diff,
                    p_00: e.p_00,
                    p_11: e.p_11,
                    w_diff: e.w_diff,
                    w_00: e.w_00,
                    w_11: e.w_11,
                }
            })
            .collect()
    }
}

pub fn build_weight_table(params: &NoiseParams) -> WeightTable {
    let entry = |k1: usize, k2: usize| {
        let post = |s1, s2| posterior(params, k1, k2, s1, s2).expect("k in {2, 3}");
        let (p_diff, p_00, p_11) = (post(false, true), post(false, false), post(true, true));
        WeightEntry {
            p_diff,
            p_00,
            p_11,
            w_diff: fault_weight(p_diff),
            w_00: fault_weight(p_00),
            w_11: fault_weight(p_11),
        }
    };
    WeightTable {
        params: *params,
        w_prior: fault_weight(params.p_z_component()),
        entries: [[entry(2, 2), entry(2, 3)], [entry(3, 2), entry(3, 3)]],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Mwpm,
    Pmwpm,
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecoderKind::Mwpm => "mwpm",
            DecoderKind::Pmwpm => "pmwpm",
        })
    }
}

impl std::str::FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mwpm" => Ok(DecoderKind::Mwpm),
            "pmwpm" => Ok(DecoderKind::Pmwpm),
            _ => Err(Error::Parse(format!("unknown decoder {s:?}; expected mwpm or pmwpm"))),
        }
    }
}

/// Estimated Z and X components of the error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correction {
    pub e_z: Vec<bool>,
    pub e_x: Vec<bool>,
}

impl Correction {
    pub fn to_pauli(&self) -> Result<PauliString> {
        PauliString::from_xz_vectors(&self.e_x, &self.e_z)
    }

    /// Whether the correction reproduces `syndrome` exactly.
    pub fn is_consistent(&self, layout: &CodeLayout, syndrome: &Syndrome) -> Result<bool> {
        Ok(&syndrome_of_vectors(layout, &self.e_x, &self.e_z)? == syndrome)
    }
}

/// Reusable decoder for one layout and channel.
///
/// Holds the stage-2 graph and the prior stage-1 graph; pMWPM rebuilds the
/// stage-1 graph per syndrome from a private weight vector.
#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    layout: &'a CodeLayout,
    kind: DecoderKind,
    table: WeightTable,
    g_x: DecodingGraph,
    g_z: DecodingGraph,
}

impl<'a> Decoder<'a> {
    pub fn new(layout: &'a CodeLayout, kind: DecoderKind, params: &NoiseParams) -> Result<Self> {
        Self::with_table(layout, kind, build_weight_table(params))
    }

    pub fn with_table(layout: &'a CodeLayout, kind: DecoderKind, table: WeightTable) -> Result<Self> {
        if kind == DecoderKind::Pmwpm && layout.kind() != CodeKind::XyzPlanar {
            return Err(Error::Parameter(format!(
                "pmwpm needs an xyz-planar layout, got {}",
                layout.kind()
            )));
        }
        let n = layout.n();
        let g_x = build_from_weights(layout.h_x(), &vec![table.w_prior; n])?;
        let g_z = build_decoding_graph(layout.h_z(), &vec![table.params.q(); n])?;
        Ok(Decoder {
            layout,
            kind,
            table,
            g_x,
            g_z,
        })
    }

    pub fn kind(&self) -> DecoderKind {
        self.kind
    }

    pub fn table(&self) -> &WeightTable {
        &self.table
    }

    /// Stage-1 weight of every qubit for the given ZY outcomes.
    pub fn stage1_weights(&self, s_zy: &[bool]) -> Result<Vec<f64>> {
        check_len(self.layout.zy_checks().len(), s_zy.len())?;
        let mut w = vec![self.table.w_prior; self.layout.n()];
        if self.kind == DecoderKind::Pmwpm {
            for (&j, c) in self.layout.central_qubits() {
                let (i1, i2) = c.checks;
                let (k1, k2) = c.peripheral;
                w[j] = self.table.weight(k1, k2, s_zy[i1], s_zy[i2]);
            }
        }
        Ok(w)
    }

    pub fn decode(&self, syndrome: &Syndrome) -> Result<Correction> {
        syndrome.check_dims(self.layout)?;
        let e_z = match self.kind {
            DecoderKind::Mwpm => self.g_x.decode(&syndrome.s_x)?,
            DecoderKind::Pmwpm => {
                let w = self.stage1_weights(&syndrome.s_zy)?;
                build_from_weights(self.layout.h_x(), &w)?.decode(&syndrome.s_x)?
            }
        };
        let delta = self.layout.h_y().mul_vec(&e_z)?;
        let residual: Vec<bool> = syndrome.s_zy.iter().zip(&delta).map(|(a, b)| a ^ b).collect();
        let e_x = self.g_z.decode(&residual)?;
        Ok(Correction { e_z, e_x })
    }
}

/// Posterior-reweighted decoding of an xyz-planar syndrome.
pub fn decode_pmwpm(layout: &CodeLayout, table: &WeightTable, syndrome: &Syndrome) -> Result<Correction> {
    Decoder::with_table(layout, DecoderKind::Pmwpm, table.clone())?.decode(syndrome)
}

/// Plain matching with prior weights; on xyz-planar layouts this is pMWPM
/// without the reweighting.
pub fn decode_mwpm(layout: &CodeLayout, params: &NoiseParams, syndrome: &Syndrome) -> Result<Correction> {
    Decoder::new(layout, DecoderKind::Mwpm, params)?.decode(syndrome)
}
