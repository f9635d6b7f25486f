//! Dowker complexes, persistent homology, and the bottleneck stability bound.
//!
//! For a threshold `δ`, the node-axis Dowker complex has a simplex
//! `σ ⊆ X` whenever some common witness `y` has `ω(x, y) ≥ δ` for every
//! `x ∈ σ`. As `δ` decreases the complexes grow (a contravariant filtration);
//! each simplex appears at `δ*(σ) = max_y min_{x ∈ σ} ω(x, y)`. Persistence
//! is computed by the standard boundary-matrix reduction over GF(2) on the
//! covariant parameter `t = −δ`, and bars are reported in `δ` coordinates
//! `(birth, death)` with `birth ≥ death` and `death = −∞` for essential
//! classes. Node-axis and edge-axis filtrations have the same persistent
//! homology (ephemeral zero-length bars aside) — see
//! [`Barcode::without_ephemeral`].

use crate::model::Hypernetwork;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Node,
    Edge,
}

/// A plain simplicial complex: sorted vertex tuples, closed under faces up to
/// the dimension it was built with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        let mut s = simplex.to_vec();
        s.sort_unstable();
        self.simplices.binary_search_by(|probe| cmp_simplex(probe, &s)).is_ok()
    }
}

fn cmp_simplex(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// A simplex together with the largest threshold at which it is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilteredSimplex {
    pub vertices: Vec<usize>,
    pub threshold: f64,
}

/// The full contravariant Dowker filtration up to a fixed dimension:
/// simplex `σ` is present at every `δ ≤ threshold(σ)`. Simplices are sorted
/// by decreasing threshold, then dimension, then vertex order, which is
/// exactly the covariant reduction order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilteredComplex {
    pub axis: Axis,
    pub max_dim: usize,
    simplices: Vec<FilteredSimplex>,
}

impl FilteredComplex {
    pub fn simplices(&self) -> &[FilteredSimplex] {
        &self.simplices
    }

    /// The complex at threshold `δ`.
    pub fn complex_at(&self, delta: f64) -> SimplicialComplex {
        let mut simplices: Vec<Vec<usize>> = self
            .simplices
            .iter()
            .filter(|s| s.threshold >= delta)
            .map(|s| s.vertices.clone())
            .collect();
        simplices.sort_by(|a, b| cmp_simplex(a, b));
        SimplicialComplex { simplices }
    }
}

fn oriented(h: &Hypernetwork, axis: Axis) -> Hypernetwork {
    match axis {
        Axis::Node => h.clone(),
        Axis::Edge => h.transposed(),
    }
}

/// Appearance threshold `δ*(σ) = max_y min_{x ∈ σ} ω(x, y)`.
fn appearance(h: &Hypernetwork, simplex: &[usize]) -> f64 {
    (0..h.n_edges())
        .map(|y| simplex.iter().map(|&x| h.weight(x, y)).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn subsets_up_to(n: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        n: usize,
        max_size: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !stack.is_empty() {
            out.push(stack.clone());
        }
        if stack.len() == max_size {
            return;
        }
        for v in start..n {
            stack.push(v);
            rec(v + 1, n, max_size, stack, out);
            stack.pop();
        }
    }
    rec(0, n, max_size, &mut stack, &mut out);
    out
}

/// The Dowker complex at a single threshold, built literally from the binary
/// relation `{(x, y) : ω(x, y) ≥ δ}`: every witness column contributes the
/// subsets of its support.
pub fn dowker_complex(
    h: &Hypernetwork,
    delta: f64,
    axis: Axis,
    max_dim: usize,
) -> SimplicialComplex {
    let h = oriented(h, axis);
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for y in 0..h.n_edges() {
        let support: Vec<usize> = (0..h.n_nodes()).filter(|&x| h.weight(x, y) >= delta).collect();
        for subset in subsets_up_to(support.len(), max_dim + 1) {
            seen.push(subset.iter().map(|&i| support[i]).collect());
        }
    }
    seen.sort_by(|a, b| cmp_simplex(a, b));
    seen.dedup();
    SimplicialComplex { simplices: seen }
}

/// The whole filtration: every subset of the node axis up to `max_dim + 1`
/// vertices, tagged with its appearance threshold. (With a total kernel every
/// subset eventually appears, so the `δ → −∞` complex is the full skeleton.)
pub fn dowker_filtration(h: &Hypernetwork, axis: Axis, max_dim: usize) -> FilteredComplex {
    let h = oriented(h, axis);
    let mut simplices: Vec<FilteredSimplex> = subsets_up_to(h.n_nodes(), max_dim + 1)
        .into_iter()
        .map(|vertices| {
            let threshold = appearance(&h, &vertices);
            FilteredSimplex { vertices, threshold }
        })
        .collect();
    simplices.sort_by(|a, b| {
        b.threshold
            .total_cmp(&a.threshold)
            .then(a.vertices.len().cmp(&b.vertices.len()))
            .then_with(|| a.vertices.cmp(&b.vertices))
    });
    FilteredComplex { axis, max_dim, simplices }
}

/// A persistence interval in `δ` coordinates: `birth ≥ death`, and
/// `death = −∞` for essential classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub birth: f64,
    pub death: f64,
}

impl Bar {
    pub fn is_essential(&self) -> bool {
        self.death == f64::NEG_INFINITY
    }

    pub fn is_ephemeral(&self) -> bool {
        self.birth == self.death
    }
}

/// Bars grouped by homology degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Barcode {
    by_degree: Vec<Vec<Bar>>,
}

impl Barcode {
    pub fn degree(&self, k: usize) -> &[Bar] {
        self.by_degree.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len().saturating_sub(1)
    }

    /// Drops zero-length bars; these carry no persistence-module content and
    /// are artifacts of the simplexwise refinement.
    pub fn without_ephemeral(&self) -> Barcode {
        Barcode {
            by_degree: self
                .by_degree
                .iter()
                .map(|bars| bars.iter().copied().filter(|b| !b.is_ephemeral()).collect())
                .collect(),
        }
    }
}

/// Persistent homology of the filtration in degrees `0..=k_max` by boundary
/// reduction over GF(2). The filtration must contain simplices of dimension
/// `k_max + 1` for deaths in degree `k_max` to be detected (as built by
/// [`dowker_filtration`] with `max_dim = k_max + 1`).
pub fn persistence(f: &FilteredComplex, k_max: usize) -> Barcode {
    let simplices = f.simplices();
    let index_of: HashMap<&[usize], usize> =
        simplices.iter().enumerate().map(|(i, s)| (s.vertices.as_slice(), i)).collect();

    // Boundary columns as sorted index lists.
    let mut columns: Vec<Vec<usize>> = simplices
        .iter()
        .map(|s| {
            if s.vertices.len() == 1 {
                return Vec::new();
            }
            let mut faces: Vec<usize> = (0..s.vertices.len())
                .map(|drop| {
                    let mut face = s.vertices.clone();
                    face.remove(drop);
                    *index_of.get(face.as_slice()).expect("filtration is closed under faces")
                })
                .collect();
            faces.sort_unstable();
            faces
        })
        .collect();

    let mut pivot_of: Vec<Option<usize>> = vec![None; simplices.len()];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match pivot_of[low] {
                None => {
                    pivot_of[low] = Some(j);
                    pairs.push((low, j));
                    break;
                }
                Some(other) => {
                    columns[j] = symmetric_difference(&columns[j], &columns[other]);
                }
            }
        }
    }

    let mut killed = vec![false; simplices.len()];
    for &(low, j) in &pairs {
        killed[low] = true;
        killed[j] = true; // a death column never births a class
    }

    let mut by_degree: Vec<Vec<Bar>> = vec![Vec::new(); k_max + 1];
    for &(low, j) in &pairs {
        let degree = simplices[low].vertices.len() - 1;
        if degree <= k_max {
            by_degree[degree]
                .push(Bar { birth: simplices[low].threshold, death: simplices[j].threshold });
        }
    }
    for (i, s) in simplices.iter().enumerate() {
        if !killed[i] && columns[i].is_empty() {
            let degree = s.vertices.len() - 1;
            if degree <= k_max {
                by_degree[degree].push(Bar { birth: s.threshold, death: f64::NEG_INFINITY });
            }
        }
    }
    for bars in &mut by_degree {
        bars.sort_by(|a, b| b.birth.total_cmp(&a.birth).then(b.death.total_cmp(&a.death)));
    }
    Barcode { by_degree }
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Bottleneck distance between degree-`k` barcodes under the sup metric, with
/// diagonal augmentation for finite bars. Essential bars must match essential
/// bars; if their counts differ the distance is infinite.
pub fn bottleneck(a: &Barcode, b: &Barcode, k: usize) -> f64 {
    let (ess_a, fin_a): (Vec<Bar>, Vec<Bar>) =
        a.degree(k).iter().partition(|bar| bar.is_essential());
    let (ess_b, fin_b): (Vec<Bar>, Vec<Bar>) =
        b.degree(k).iter().partition(|bar| bar.is_essential());
    if ess_a.len() != ess_b.len() {
        return f64::INFINITY;
    }

    let mut candidates: Vec<f64> = vec![0.0];
    for x in &ess_a {
        for y in &ess_b {
            candidates.push((x.birth - y.birth).abs());
        }
    }
    for x in &fin_a {
        for y in &fin_b {
            candidates.push(sup_dist(x, y));
        }
        candidates.push((x.birth - x.death) / 2.0);
    }
    for y in &fin_b {
        candidates.push((y.birth - y.death) / 2.0);
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let feasible = |d: f64| -> bool {
        matchable_essential(&ess_a, &ess_b, d) && matchable_finite(&fin_a, &fin_b, d)
    };
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    debug_assert!(feasible(candidates[hi]), "largest candidate always feasible");
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

fn sup_dist(x: &Bar, y: &Bar) -> f64 {
    (x.birth - y.birth).abs().max((x.death - y.death).abs())
}

/// Perfect matching test between equal-sized essential sets under `|birth
/// difference| ≤ d`: optimal is the sorted pairing.
fn matchable_essential(a: &[Bar], b: &[Bar], d: f64) -> bool {
    let mut ba: Vec<f64> = a.iter().map(|x| x.birth).collect();
    let mut bb: Vec<f64> = b.iter().map(|x| x.birth).collect();
    ba.sort_by(f64::total_cmp);
    bb.sort_by(f64::total_cmp);
    ba.iter().zip(&bb).all(|(x, y)| (x - y).abs() <= d)
}

/// Kuhn augmenting-path matching on the diagonal-augmented bipartite graph.
fn matchable_finite(a: &[Bar], b: &[Bar], d: f64) -> bool {
    let n = a.len() + b.len();
    if n == 0 {
        return true;
    }
    // Left: a-bars then diagonal slots for b. Right: b-bars then diagonal
    // slots for a. Edges by closure under d.
    let edge = |l: usize, r: usize| -> bool {
        match (l < a.len(), r < b.len()) {
            (true, true) => sup_dist(&a[l], &b[r]) <= d,
            (true, false) => {
                let i = r - b.len();
                i == l && (a[l].birth - a[l].death) / 2.0 <= d
            }
            (false, true) => {
                let j = l - a.len();
                j == r && (b[r].birth - b[r].death) / 2.0 <= d
            }
            (false, false) => true,
        }
    };
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    fn try_assign(
        l: usize,
        n: usize,
        edge: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        match_right: &mut [Option<usize>],
    ) -> bool {
        for r in 0..n {
            if edge(l, r) && !seen[r] {
                seen[r] = true;
                let free = match match_right[r] {
                    None => true,
                    Some(prev) => try_assign(prev, n, edge, seen, match_right),
                };
                if free {
                    match_right[r] = Some(l);
                    return true;
                }
            }
        }
        false
    }
    (0..n).all(|l| {
        let mut seen = vec![false; n];
        try_assign(l, n, &edge, &mut seen, &mut match_right)
    })
}

/// Stability estimator: the largest bottleneck distance over degrees
/// `0..=k_max` of node-axis persistence. Close inputs have close barcodes —
/// the value never exceeds twice the exact distance (the shift of the induced
/// interleaving is the optimal map distortion, and the distance is half that
/// distortion), so half the returned value is a certified lower bound.
pub fn dowker_bound(a: &Hypernetwork, b: &Hypernetwork, k_max: usize) -> f64 {
    let fa = dowker_filtration(a, Axis::Node, k_max + 1);
    let fb = dowker_filtration(b, Axis::Node, k_max + 1);
    let (pa, pb) = (persistence(&fa, k_max), persistence(&fb, k_max));
    (0..=k_max).map(|k| bottleneck(&pa, &pb, k)).fold(0.0, f64::max)
}
