//! Weighted matching decoder for check matrices whose columns have at most
//! two ones.
//!
//! Every check row is a detector node; one extra virtual node stands for the
//! boundary. A column with two ones becomes an edge between its detectors, a
//! column with a single one becomes an edge to the boundary. Edge weights
//! are log-likelihood ratios `ln((1 - p) / p)`. Faults with `p > 1/2` have
//! negative weight: they are committed up front ("preflipped"), the parity
//! of their endpoints is toggled and the edge keeps `|w|`. This leaves the
//! argmin of the total weight unchanged while making every weight usable by
//! Dijkstra and the blossom matcher.

pub mod blossom;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use crate::error::{check_len, Error, Result};
use crate::gf2::BinaryMatrix;

/// Probabilities are clamped to `[EPSILON, 1 - EPSILON]` before taking logs.
pub const EPSILON: f64 = 1e-12;

/// Log-likelihood weight of a fault with probability `p`, clamped.
pub fn fault_weight(p: f64) -> f64 {
    let p = p.clamp(EPSILON, 1.0 - EPSILON);
    ((1.0 - p) / p).ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// Nonnegative after normalization.
    pub weight: f64,
    pub fault: usize,
}

#[derive(Debug, Clone)]
pub struct DecodingGraph {
    num_detectors: usize,
    num_faults: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    preflip: Vec<usize>,
    preflip_parity: Vec<bool>,
    untracked: Vec<usize>,
}

impl DecodingGraph {
    pub fn num_detectors(&self) -> usize {
        self.num_detectors
    }

    /// Index of the virtual boundary node.
    pub fn boundary(&self) -> usize {
        self.num_detectors
    }

    pub fn num_faults(&self) -> usize {
        self.num_faults
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Faults committed before matching because their weight was negative.
    pub fn preflip(&self) -> &[usize] {
        &self.preflip
    }

    /// Detector parities toggled by the preflipped faults.
    pub fn preflip_parity(&self) -> &[bool] {
        &self.preflip_parity
    }

    /// Columns that touch no detector; such faults are invisible.
    pub fn untracked(&self) -> &[usize] {
        &self.untracked
    }

    /// Plain-text edge list, one `u v weight fault` line per edge; the
    /// boundary node is written as `B`.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        let node = |x: usize| {
            if x == self.num_detectors {
                "B".to_string()
            } else {
                x.to_string()
            }
        };
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {:.17} {}", node(e.u), node(e.v), e.weight, e.fault);
        }
        out
    }

    /// Syndrome with the preflip parities folded in.
    pub fn adjust_syndrome(&self, syndrome: &[bool]) -> Result<Vec<bool>> {
        check_len(self.num_detectors, syndrome.len())?;
        Ok(syndrome
            .iter()
            .zip(&self.preflip_parity)
            .map(|(a, b)| a ^ b)
            .collect())
    }

    /// Full pipeline: preflip adjustment, defect graph, matching, correction.
    pub fn decode(&self, syndrome: &[bool]) -> Result<Vec<bool>> {
        let adjusted = self.adjust_syndrome(syndrome)?;
        let defects = form_defect_graph(self, &adjusted)?;
        let matching = min_weight_perfect_matching(&defects)?;
        Ok(matching_to_correction(self, &defects, &matching))
    }
}

/// Builds the detector graph of `check` with per-column fault
/// probabilities.
pub fn build_decoding_graph(check: &BinaryMatrix, fault_probs: &[f64]) -> Result<DecodingGraph> {
    build_from_weights(
        check,
        &fault_probs.iter().map(|&p| fault_weight(p)).collect::<Vec<_>>(),
    )
}

/// Same as [`build_decoding_graph`] with raw (possibly negative) weights.
pub fn build_from_weights(check: &BinaryMatrix, weights: &[f64]) -> Result<DecodingGraph> {
    check_len(check.num_cols(), weights.len())?;
    let m = check.num_rows();
    let boundary = m;
    let mut graph = DecodingGraph {
        num_detectors: m,
        num_faults: check.num_cols(),
        edges: Vec::with_capacity(check.num_cols()),
        adjacency: vec![Vec::new(); m + 1],
        preflip: Vec::new(),
        preflip_parity: vec![false; m],
        untracked: Vec::new(),
    };
    for (fault, rows) in check.columns().into_iter().enumerate() {
        let (u, v) = match rows[..] {
            [] => {
                graph.untracked.push(fault);
                continue;
            }
            [a] => (a, boundary),
            [a, b] => (a, b),
            _ => {
                return Err(Error::Structure(format!(
                    "column {fault} has {} ones; at most two are matchable",
                    rows.len()
                )))
            }
        };
        let w = weights[fault];
        if w.is_nan() {
            return Err(Error::Parameter(format!("weight of fault {fault} is NaN")));
        }
        if w < 0.0 {
            graph.preflip.push(fault);
            for x in [u, v] {
                if x != boundary {
                    graph.preflip_parity[x] ^= true;
                }
            }
        }
        let id = graph.edges.len();
        graph.edges.push(Edge {
            u,
            v,
            weight: w.abs(),
            fault,
        });
        graph.adjacency[u].push(id);
        graph.adjacency[v].push(id);
    }
    Ok(graph)
}

#[derive(Clone, Copy, PartialEq)]
struct Frontier {
    dist: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on (dist, node).
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest-path tree from one source.
#[derive(Debug, Clone)]
struct PathTree {
    dist: Vec<f64>,
    /// Edge used to reach each node, `usize::MAX` at the source or when
    /// unreachable.
    via: Vec<usize>,
}

const NO_EDGE: usize = usize::MAX;

/// Dijkstra with deterministic tie-breaking: among equal-length paths the
/// one arriving from the smaller (node, fault) is kept. Stops once every
/// node in `targets` is settled.
fn shortest_paths(graph: &DecodingGraph, source: usize, targets: &[bool]) -> PathTree {
    let nodes = graph.num_detectors + 1;
    let mut dist = vec![f64::INFINITY; nodes];
    let mut via = vec![NO_EDGE; nodes];
    let mut pred_key = vec![(usize::MAX, usize::MAX); nodes];
    let mut settled = vec![false; nodes];
    let mut remaining = targets.iter().filter(|&&t| t).count();
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Frontier { dist: 0.0, node: source });
    while let Some(Frontier { dist: d, node: u }) = heap.pop() {
        if settled[u] || d > dist[u] {
            continue;
        }
        settled[u] = true;
        if targets[u] {
            remaining -= 1;
            if remaining == 0 {
                break;
            }
        }
        for &id in &graph.adjacency[u] {
            let e = &graph.edges[id];
            let v = if e.u == u { e.v } else { e.u };
            if settled[v] {
                continue;
            }
            let nd = d + e.weight;
            let key = (u, e.fault);
            if nd < dist[v] || (nd == dist[v] && key < pred_key[v]) {
                let improved = nd < dist[v];
                dist[v] = nd;
                via[v] = id;
                pred_key[v] = key;
                if improved {
                    heap.push(Frontier { dist: nd, node: v });
                }
            }
        }
    }
    PathTree { dist, via }
}

/// Complete graph over the defects with shortest-path distances.
#[derive(Debug, Clone)]
pub struct DefectGraph {
    /// Graph nodes taking part in the matching: the flagged detectors in
    /// increasing order, followed by the boundary when their count is odd.
    nodes: Vec<usize>,
    trees: Vec<PathTree>,
}

impl DefectGraph {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Shortest-path distance between defect `a` and defect `b` (indices
    /// into [`Self::nodes`]).
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.trees[a].dist[self.nodes[b]]
    }

    /// Faults along the shortest path realizing `distance(a, b)`.
    pub fn path(&self, graph: &DecodingGraph, a: usize, b: usize) -> Vec<usize> {
        let tree = &self.trees[a];
        let source = self.nodes[a];
        let mut at = self.nodes[b];
        let mut faults = Vec::new();
        while at != source {
            let id = tree.via[at];
            assert!(id != NO_EDGE, "no path between defects {a} and {b}");
            let e = &graph.edges[id];
            faults.push(e.fault);
            at = if e.u == at { e.v } else { e.u };
        }
        faults.reverse();
        faults
    }
}

/// Shortest-path complete graph over the flagged detectors of an (already
/// preflip-adjusted) syndrome. The boundary joins the defects when their
/// count is odd; paths may pass through the boundary, which lets any number
/// of defects terminate there.
pub fn form_defect_graph(graph: &DecodingGraph, syndrome: &[bool]) -> Result<DefectGraph> {
    check_len(graph.num_detectors, syndrome.len())?;
    let mut nodes: Vec<usize> = (0..graph.num_detectors).filter(|&i| syndrome[i]).collect();
    if nodes.len() % 2 == 1 {
        nodes.push(graph.boundary());
    }
    let mut targets = vec![false; graph.num_detectors + 1];
    for &x in &nodes {
        targets[x] = true;
    }
    let trees: Vec<PathTree> = nodes
        .iter()
        .map(|&s| shortest_paths(graph, s, &targets))
        .collect();
    for (a, tree) in trees.iter().enumerate() {
        let reachable = nodes
            .iter()
            .enumerate()
            .any(|(b, &x)| b != a && tree.dist[x].is_finite());
        if !reachable {
            return Err(Error::Decode(format!(
                "defect at node {} cannot reach any other defect or the boundary",
                nodes[a]
            )));
        }
    }
    Ok(DefectGraph { nodes, trees })
}

/// Minimum-weight perfect matching of the defect graph, as index pairs
/// `(a, b)` with `a < b` sorted by `a`.
pub fn min_weight_perfect_matching(defects: &DefectGraph) -> Result<Vec<(usize, usize)>> {
    let k = defects.len();
    let weights: Vec<Vec<f64>> = (0..k)
        .map(|a| (0..k).map(|b| defects.distance(a, b)).collect())
        .collect();
    perfect_matching(&weights)
}

/// Minimum-weight perfect matching of a complete graph given by a
/// symmetric weight matrix (infinite entries are missing edges).
///
/// Weights are quantized onto an integer grid fine enough that distinct
/// totals closer than about `1e-12 * max|w|` can be confused; the matcher
/// itself is exact on that grid.
pub fn perfect_matching(weights: &[Vec<f64>]) -> Result<Vec<(usize, usize)>> {
    let k = weights.len();
    if k % 2 == 1 {
        return Err(Error::Contract(format!(
            "perfect matching needs an even node count, got {k}"
        )));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let max_abs = weights
        .iter()
        .flatten()
        .filter(|w| w.is_finite())
        .fold(0.0f64, |m, w| m.max(w.abs()));
    // Keep 2 * (k * max) comfortably inside i64.
    let scale = (2f64.powi(40) / max_abs.max(1.0)).min(2f64.powi(40));
    let mut quantized = Vec::with_capacity(k * (k - 1) / 2);
    for a in 0..k {
        for b in a + 1..k {
            let w = weights[a][b];
            if w.is_finite() {
                quantized.push((a, b, (w * scale).round() as i64));
            }
        }
    }
    let top = quantized.iter().map(|e| e.2).max().unwrap_or(0);
    let edges: Vec<(usize, usize, i64)> = quantized
        .into_iter()
        .map(|(a, b, w)| (a, b, top + 1 - w))
        .collect();
    let mate = blossom::max_weight_matching(k, &edges, true);
    let mut pairs = Vec::with_capacity(k / 2);
    for (a, m) in mate.iter().enumerate() {
        match m {
            Some(b) if a < *b => pairs.push((a, *b)),
            Some(_) => {}
            None => {
                return Err(Error::Decode(format!(
                    "no perfect matching exists; node {a} is left unmatched"
                )))
            }
        }
    }
    Ok(pairs)
}

/// Fault vector of a matching: the XOR of every matched pair's path,
/// XORed with the preflipped faults.
pub fn matching_to_correction(
    graph: &DecodingGraph,
    defects: &DefectGraph,
    matching: &[(usize, usize)],
) -> Vec<bool> {
    let mut correction = vec![false; graph.num_faults];
    for &(a, b) in matching {
        for fault in defects.path(graph, a, b) {
            correction[fault] ^= true;
        }
    }
    for &fault in &graph.preflip {
        correction[fault] ^= true;
    }
    correction
}
