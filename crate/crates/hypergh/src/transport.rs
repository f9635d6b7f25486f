//! Powerset (Hausdorff) maps and the neighborhood-chain convexity check.
//!
//! The Hausdorff map sends a hypernetwork `(X, Y, ω)` to one whose nodes are
//! the nonempty subsets of `X`, whose hyperedges are the nonempty subsets of
//! `Y`, and whose kernel is the two-sided best-match value
//!
//! ```text
//! Ω(A, B) = max( max_{x∈A} min_{y∈B} ω(x, y), max_{y∈B} min_{x∈A} ω(x, y) )
//! ```
//!
//! — the formula that turns a metric kernel into the Hausdorff distance
//! between subsets. Map quadruples lift along it by taking images, and the
//! lifted maps never distort more than the originals.
//!
//! The convexity check asks, for every ordered node pair `(x₀, x₁)` and
//! hyperedge `ȳ`, whether the straight-line interpolation between the two
//! difference profiles `Δᵢ(y) = ω(xᵢ, ȳ) − ω(xᵢ, y)` stays within `tol`
//! (uniformly over `y`) of a profile realized by some actual node.

use crate::exec;
use crate::matrix::Matrix;
use crate::metrics::{functional_distortions, FunctionalDistortions, MetricsError};
use crate::model::{from_network, Hypernetwork, MapQuadruple, ModelError, Network};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default per-axis bound for subset enumeration (`2^12 − 1 = 4095` subsets).
pub const DEFAULT_SUBSET_CAP: usize = 12;

/// Ceiling on the number of entries of a powerset kernel
/// (`(2^n − 1)·(2^m − 1)`), chosen so the default cap on both axes just fits.
pub const MAX_POWERSET_ENTRIES: u128 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransportError {
    #[error("{side} axis has {size} elements, above the subset cap {cap}")]
    CapExceeded { side: &'static str, size: usize, cap: usize },
    #[error("powerset kernel would have {entries} entries, above the limit {max}")]
    OutputTooLarge { entries: u128, max: u128 },
    #[error("tolerance must be a non-negative finite number, got {0}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// All nonempty subsets of `0..n`, ordered by size and then lexicographically
/// on the element tuple.
fn subsets_in_order(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::with_capacity((1usize << n) - 1);
    for mask in 1usize..(1 << n) {
        out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn mask_of(subset: &[usize]) -> usize {
    subset.iter().fold(0usize, |m, &i| m | 1 << i)
}

fn subset_id(ids: &[String], subset: &[usize]) -> String {
    let mut s = String::from("{");
    for (k, &i) in subset.iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        s.push_str(&ids[i]);
    }
    s.push('}');
    s
}

fn check_caps(h: &Hypernetwork, cap: usize) -> Result<(), TransportError> {
    let (n, m) = (h.n_nodes(), h.n_edges());
    if n > cap {
        return Err(TransportError::CapExceeded { side: "node", size: n, cap });
    }
    if m > cap {
        return Err(TransportError::CapExceeded { side: "edge", size: m, cap });
    }
    let card = |k: usize| 1u128.checked_shl(k as u32).unwrap_or(u128::MAX).saturating_sub(1);
    let entries = card(n).saturating_mul(card(m));
    if entries > MAX_POWERSET_ENTRIES {
        return Err(TransportError::OutputTooLarge { entries, max: MAX_POWERSET_ENTRIES });
    }
    Ok(())
}

/// `min_{j ∈ mask} table(i, j)` for every `i` and nonempty `mask`, by the
/// low-bit recurrence.
fn min_over_masks(rows: usize, cols: usize, value: impl Fn(usize, usize) -> f64) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|i| {
            let mut t = vec![f64::INFINITY; 1 << cols];
            for mask in 1usize..(1 << cols) {
                let low = mask.trailing_zeros() as usize;
                let rest = mask & (mask - 1);
                t[mask] = value(i, low).min(t[rest]);
            }
            t
        })
        .collect()
}

/// The Hausdorff map of a hypernetwork: nodes and hyperedges become nonempty
/// subsets (identifiers `{a,b,…}` in size-then-lex order) and the kernel
/// becomes the two-sided best-match value `Ω(A, B)`.
pub fn hausdorff_hyper(h: &Hypernetwork, cap: usize) -> Result<Hypernetwork, TransportError> {
    check_caps(h, cap)?;
    let (n, m) = (h.n_nodes(), h.n_edges());
    let node_subsets = subsets_in_order(n);
    let edge_subsets = subsets_in_order(m);
    // min over an edge subset, per node; min over a node subset, per edge.
    let min_edges = min_over_masks(n, m, |x, y| h.weight(x, y));
    let min_nodes = min_over_masks(m, n, |y, x| h.weight(x, y));

    let rows: Vec<Vec<f64>> = exec::map_indexed(node_subsets.len(), |ai| {
        let a = &node_subsets[ai];
        let amask = mask_of(a);
        // max_{x∈A} min_{y∈B} ω, for every B at once.
        let mut fwd = vec![f64::NEG_INFINITY; 1 << m];
        for &x in a {
            for (bmask, v) in fwd.iter_mut().enumerate().skip(1) {
                *v = v.max(min_edges[x][bmask]);
            }
        }
        // max_{y∈B} min_{x∈A} ω by the same low-bit recurrence over B.
        let mut bwd = vec![f64::NEG_INFINITY; 1 << m];
        for bmask in 1usize..(1 << m) {
            let low = bmask.trailing_zeros() as usize;
            let rest = bmask & (bmask - 1);
            bwd[bmask] = min_nodes[low][amask].max(bwd[rest]);
        }
        edge_subsets
            .iter()
            .map(|b| {
                let bm = mask_of(b);
                fwd[bm].max(bwd[bm])
            })
            .collect()
    });

    let nodes = node_subsets.iter().map(|s| subset_id(h.nodes(), s)).collect();
    let edges = edge_subsets.iter().map(|s| subset_id(h.edges(), s)).collect();
    Ok(Hypernetwork::new(nodes, edges, Matrix::from_rows(&rows))?)
}

/// The Hausdorff map of a network: subsets of the node set on both axes.
pub fn hausdorff_network(net: &Network, cap: usize) -> Result<Network, TransportError> {
    let image = hausdorff_hyper(&from_network(net), cap)?;
    Ok(Network::new(image.nodes().to_vec(), image.omega().clone())?)
}

/// Lifts a map quadruple between two hypernetworks to their Hausdorff images
/// by taking set images (`A ↦ φ(A)` and so on). Returns the two images and
/// the lifted quadruple.
pub fn lifted_quadruple(
    a: &Hypernetwork,
    b: &Hypernetwork,
    q: &MapQuadruple,
    cap: usize,
) -> Result<(Hypernetwork, Hypernetwork, MapQuadruple), TransportError> {
    // Re-validate the quadruple against these particular shapes.
    let q = MapQuadruple::new(
        q.phi().to_vec(),
        q.psi().to_vec(),
        q.phi_back().to_vec(),
        q.psi_back().to_vec(),
        (a.n_nodes(), b.n_nodes()),
        (a.n_edges(), b.n_edges()),
    )?;
    let ha = hausdorff_hyper(a, cap)?;
    let hb = hausdorff_hyper(b, cap)?;

    // Position of each mask in size-then-lex order, per axis size.
    let positions = |k: usize| -> Vec<usize> {
        let subsets = subsets_in_order(k);
        let mut pos = vec![0usize; 1 << k];
        for (i, s) in subsets.iter().enumerate() {
            pos[mask_of(s)] = i;
        }
        pos
    };
    let lift = |map: &[usize], src: usize, pos_dst: &[usize]| -> Vec<usize> {
        subsets_in_order(src)
            .iter()
            .map(|s| pos_dst[s.iter().fold(0usize, |m, &x| m | 1 << map[x])])
            .collect()
    };
    let (pa, pb) = (positions(a.n_nodes()), positions(b.n_nodes()));
    let (qa, qb) = (positions(a.n_edges()), positions(b.n_edges()));
    let lifted = MapQuadruple::new(
        lift(q.phi(), a.n_nodes(), &pb),
        lift(q.psi(), a.n_edges(), &qb),
        lift(q.phi_back(), b.n_nodes(), &pa),
        lift(q.psi_back(), b.n_edges(), &qa),
        (ha.n_nodes(), hb.n_nodes()),
        (ha.n_edges(), hb.n_edges()),
    )?;
    Ok((ha, hb, lifted))
}

/// The four (co)distortions of the lifted quadruple on the Hausdorff images.
/// Never exceeds the corresponding distortions of the original quadruple.
pub fn lifted_distortions(
    a: &Hypernetwork,
    b: &Hypernetwork,
    q: &MapQuadruple,
    cap: usize,
) -> Result<FunctionalDistortions, TransportError> {
    let (ha, hb, lifted) = lifted_quadruple(a, b, q, cap)?;
    Ok(functional_distortions(&ha, &hb, &lifted)?)
}

/// The parameter range `[lo, hi] ⊆ [0, 1]` on which one candidate node
/// realizes the interpolated profile within tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverInterval {
    pub candidate: usize,
    pub lo: f64,
    pub hi: f64,
}

/// Full diagnostic for one `(x₀, x₁, ȳ)` triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleCover {
    pub x0: usize,
    pub x1: usize,
    pub edge: usize,
    /// Nonempty feasibility intervals, sorted by `lo` (ties: wider first).
    pub intervals: Vec<CoverInterval>,
    pub covered: bool,
    /// An open subinterval of `[0, 1]` met by no interval, when not covered.
    pub gap: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NnccWitness {
    pub x0: usize,
    pub x1: usize,
    pub edge: usize,
    pub gap: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NnccVerdict {
    Holds,
    Fails { witness: NnccWitness },
}

impl NnccVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, NnccVerdict::Holds)
    }
}

fn check_tol(tol: f64) -> Result<(), TransportError> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(TransportError::InvalidTolerance(tol))
    }
}

fn triple_cover_unchecked(
    h: &Hypernetwork,
    x0: usize,
    x1: usize,
    edge: usize,
    tol: f64,
) -> TripleCover {
    let (n, m) = (h.n_nodes(), h.n_edges());
    let delta0: Vec<f64> = (0..m).map(|y| h.weight(x0, edge) - h.weight(x0, y)).collect();
    let delta1: Vec<f64> = (0..m).map(|y| h.weight(x1, edge) - h.weight(x1, y)).collect();

    let mut intervals: Vec<CoverInterval> = Vec::new();
    for cand in 0..n {
        // Constraints |c_y + s·d_y| ≤ tol, intersected over y and with [0, 1].
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for y in 0..m {
            let c = h.weight(cand, edge) - h.weight(cand, y) - delta0[y];
            let d = delta0[y] - delta1[y];
            if d == 0.0 {
                if c.abs() > tol {
                    hi = f64::NEG_INFINITY;
                    break;
                }
            } else {
                let (a, b) = ((-tol - c) / d, (tol - c) / d);
                let (l, r) = if d > 0.0 { (a, b) } else { (b, a) };
                lo = lo.max(l);
                hi = hi.min(r);
                if lo > hi {
                    break;
                }
            }
        }
        if lo <= hi {
            intervals.push(CoverInterval { candidate: cand, lo, hi });
        }
    }
    intervals.sort_by(|p, q| p.lo.total_cmp(&q.lo).then(q.hi.total_cmp(&p.hi)));

    // Greedy sweep: closed intervals cover [0, 1] iff each step can extend.
    let mut reach = 0.0f64;
    let mut covered = false;
    let mut gap = None;
    let mut idx = 0;
    loop {
        if reach >= 1.0 {
            covered = true;
            break;
        }
        if idx == intervals.len() || intervals[idx].lo > reach {
            let next = if idx == intervals.len() { 1.0 } else { intervals[idx].lo.min(1.0) };
            gap = Some((reach, next));
            break;
        }
        reach = reach.max(intervals[idx].hi);
        idx += 1;
    }
    TripleCover { x0, x1, edge, intervals, covered, gap }
}

/// Feasibility intervals and coverage verdict for one triple.
pub fn triple_cover(
    h: &Hypernetwork,
    x0: usize,
    x1: usize,
    edge: usize,
    tol: f64,
) -> Result<TripleCover, TransportError> {
    check_tol(tol)?;
    for (name, idx, size) in
        [("nodes", x0, h.n_nodes()), ("nodes", x1, h.n_nodes()), ("edges", edge, h.n_edges())]
    {
        if idx >= size {
            return Err(ModelError::IndexOutOfRange { side: name, index: idx, size }.into());
        }
    }
    Ok(triple_cover_unchecked(h, x0, x1, edge, tol))
}

/// Checks the convexity condition for every ordered node pair and hyperedge.
/// The endpoints `s = 0` and `s = 1` are always realized by `x₀` and `x₁`
/// themselves; failure means some interior mixture is uncovered, and the
/// lexicographically first failing triple is returned with its gap.
pub fn nncc_check(h: &Hypernetwork, tol: f64) -> Result<NnccVerdict, TransportError> {
    check_tol(tol)?;
    let (n, m) = (h.n_nodes(), h.n_edges());
    let total = n * n * m;
    let failure = exec::find_map_first_idx(total, |t| {
        let (x0, rest) = (t / (n * m), t % (n * m));
        let (x1, edge) = (rest / m, rest % m);
        let tc = triple_cover_unchecked(h, x0, x1, edge, tol);
        (!tc.covered).then(|| NnccWitness { x0, x1, edge, gap: tc.gap.unwrap() })
    });
    Ok(match failure {
        None => NnccVerdict::Holds,
        Some(witness) => NnccVerdict::Fails { witness },
    })
}
