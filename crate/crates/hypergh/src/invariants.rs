//! Weak-isomorphism invariants and the lower bounds they induce on the
//! hypernetwork distance.
//!
//! The eight invariants of `(X, Y, ω)`:
//! capacity `max ω`; node/edge capacity functions `max` over a row/column;
//! node/edge radii `min` of those functions; the global spectrum (the set of
//! attained values); and per-node/per-edge spectra (row/column value sets).
//!
//! Every bound here is a certified lower bound for the exact distance:
//! mismatch of an invariant under every correspondence forces distortion.
//! The sharpest is the local distortion function
//! `F_n(x, x′) = min over edge correspondences of max |ω(x, y) − ω′(x′, y′)|`,
//! which collapses to the best-partner closed form
//! `max(max_y min_{y′} |…|, max_{y′} min_y |…|)` because coverage is the only
//! constraint on the edge relation.

use crate::exec;
use crate::graphify;
use crate::matrix::Matrix;
use crate::model::{Hypernetwork, Network};
use serde::{Deserialize, Serialize};

/// The eight invariants in one report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantSummary {
    pub capacity: f64,
    pub node_capacity: Vec<f64>,
    pub edge_capacity: Vec<f64>,
    pub node_radius: f64,
    pub edge_radius: f64,
    /// Sorted, deduplicated set of attained values.
    pub spectrum: Vec<f64>,
    pub node_spectrum: Vec<Vec<f64>>,
    pub edge_spectrum: Vec<Vec<f64>>,
}

fn sorted_set(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

pub fn summary(h: &Hypernetwork) -> InvariantSummary {
    let node_capacity: Vec<f64> = (0..h.n_nodes())
        .map(|x| h.omega().row(x).iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let edge_capacity: Vec<f64> = (0..h.n_edges())
        .map(|y| h.omega().col(y).into_iter().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    InvariantSummary {
        capacity: h.omega().max_value(),
        node_radius: node_capacity.iter().copied().fold(f64::INFINITY, f64::min),
        edge_radius: edge_capacity.iter().copied().fold(f64::INFINITY, f64::min),
        node_capacity,
        edge_capacity,
        spectrum: sorted_set(h.omega().values()),
        node_spectrum: (0..h.n_nodes())
            .map(|x| sorted_set(h.omega().row(x).iter().copied()))
            .collect(),
        edge_spectrum: (0..h.n_edges()).map(|y| sorted_set(h.omega().col(y).into_iter())).collect(),
    }
}

/// Hausdorff distance between two finite nonempty sets of reals:
/// the larger of the two directed sup-inf gaps. Linear two-pointer scan on
/// sorted copies.
pub fn hausdorff_reals(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    directed_gap(&sa, &sb).max(directed_gap(&sb, &sa))
}

/// `max_{x ∈ a} min_{y ∈ b} |x − y|` for sorted inputs.
fn directed_gap(a: &[f64], b: &[f64]) -> f64 {
    let mut j = 0;
    let mut worst = 0.0f64;
    for &x in a {
        while j + 1 < b.len() && (b[j + 1] - x).abs() <= (b[j] - x).abs() {
            j += 1;
        }
        worst = worst.max((b[j] - x).abs());
    }
    worst
}

/// `F_n(x, x′)` in closed form (best-partner union over both directions).
pub fn local_distortion_fn(a: &Hypernetwork, b: &Hypernetwork, x: usize, x2: usize) -> f64 {
    row_local_distortion(a.omega().row(x), b.omega().row(x2))
}

fn row_local_distortion(u: &[f64], v: &[f64]) -> f64 {
    let fwd = u
        .iter()
        .map(|a| v.iter().map(|b| (a - b).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let bwd = v
        .iter()
        .map(|b| u.iter().map(|a| (a - b).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    fwd.max(bwd)
}

/// `min` over covering relations of `max` entry: the same best-partner
/// argument as `F_n`, applied to an arbitrary nonnegative cost matrix.
fn min_cover_max(cost: &Matrix) -> f64 {
    let fwd = (0..cost.rows())
        .map(|i| (0..cost.cols()).map(|j| cost.get(i, j)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let bwd = (0..cost.cols())
        .map(|j| (0..cost.rows()).map(|i| cost.get(i, j)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    fwd.max(bwd)
}

/// Scalar bounds computed on the images of a graphification map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphifiedBounds {
    pub capacity_diff: f64,
    pub global_spectrum: f64,
    pub capacity_radius: f64,
}

/// Every implemented lower bound on the exact distance between two
/// hypernetworks. `best` is the largest of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// ½ · min over node correspondences of max `F_n` (and the edge mirror).
    pub local_node: f64,
    pub local_edge: f64,
    /// ½ · min over correspondences of max Hausdorff gap between local spectra.
    pub spectrum_hausdorff_node: f64,
    pub spectrum_hausdorff_edge: f64,
    /// ½ · min over correspondences of max capacity-function gap.
    pub capacity_fn_corr_node: f64,
    pub capacity_fn_corr_edge: f64,
    /// ½ · Hausdorff gap between capacity-function images.
    pub capacity_fn_hausdorff_node: f64,
    pub capacity_fn_hausdorff_edge: f64,
    /// ½ · max of capacity gap and radius gap.
    pub capacity_radius_node: f64,
    pub capacity_radius_edge: f64,
    /// ½ · Hausdorff gap between global spectra.
    pub global_spectrum: f64,
    /// ½ · capacity gap.
    pub capacity_diff: f64,
    pub clique: GraphifiedBounds,
    pub line: GraphifiedBounds,
    pub node_affinity: GraphifiedBounds,
    pub edge_affinity: GraphifiedBounds,
    pub best: f64,
}

impl BoundReport {
    pub fn all_values(&self) -> Vec<f64> {
        let mut v = vec![
            self.local_node,
            self.local_edge,
            self.spectrum_hausdorff_node,
            self.spectrum_hausdorff_edge,
            self.capacity_fn_corr_node,
            self.capacity_fn_corr_edge,
            self.capacity_fn_hausdorff_node,
            self.capacity_fn_hausdorff_edge,
            self.capacity_radius_node,
            self.capacity_radius_edge,
            self.global_spectrum,
            self.capacity_diff,
        ];
        for g in [&self.clique, &self.line, &self.node_affinity, &self.edge_affinity] {
            v.extend([g.capacity_diff, g.global_spectrum, g.capacity_radius]);
        }
        v
    }
}

fn pair_matrix<F: Fn(usize, usize) -> f64 + Sync>(rows: usize, cols: usize, f: F) -> Matrix {
    let data = exec::map_indexed(rows, |i| (0..cols).map(|j| f(i, j)).collect::<Vec<f64>>());
    Matrix::from_rows(&data)
}

fn graphified(ga: &Network, gb: &Network) -> GraphifiedBounds {
    let (sa, sb) =
        (summary(&crate::model::from_network(ga)), summary(&crate::model::from_network(gb)));
    let capacity_diff = 0.5 * (sa.capacity - sb.capacity).abs();
    let global_spectrum = 0.5 * hausdorff_reals(&sa.spectrum, &sb.spectrum);
    let radius_gap =
        (sa.node_radius - sb.node_radius).abs().max((sa.edge_radius - sb.edge_radius).abs());
    GraphifiedBounds {
        capacity_diff,
        global_spectrum,
        capacity_radius: 0.5 * (sa.capacity - sb.capacity).abs().max(radius_gap),
    }
}

/// Computes the whole family of lower bounds. All closed-form; no search.
pub fn lower_bounds(a: &Hypernetwork, b: &Hypernetwork) -> BoundReport {
    let (sa, sb) = (summary(a), summary(b));

    let fn_node = pair_matrix(a.n_nodes(), b.n_nodes(), |x, x2| local_distortion_fn(a, b, x, x2));
    let (ta, tb) = (a.transposed(), b.transposed());
    let fn_edge =
        pair_matrix(a.n_edges(), b.n_edges(), |y, y2| local_distortion_fn(&ta, &tb, y, y2));

    let spec_node = pair_matrix(a.n_nodes(), b.n_nodes(), |x, x2| {
        hausdorff_reals(&sa.node_spectrum[x], &sb.node_spectrum[x2])
    });
    let spec_edge = pair_matrix(a.n_edges(), b.n_edges(), |y, y2| {
        hausdorff_reals(&sa.edge_spectrum[y], &sb.edge_spectrum[y2])
    });

    let cap_node = pair_matrix(a.n_nodes(), b.n_nodes(), |x, x2| {
        (sa.node_capacity[x] - sb.node_capacity[x2]).abs()
    });
    let cap_edge = pair_matrix(a.n_edges(), b.n_edges(), |y, y2| {
        (sa.edge_capacity[y] - sb.edge_capacity[y2]).abs()
    });

    let report = BoundReport {
        local_node: 0.5 * min_cover_max(&fn_node),
        local_edge: 0.5 * min_cover_max(&fn_edge),
        spectrum_hausdorff_node: 0.5 * min_cover_max(&spec_node),
        spectrum_hausdorff_edge: 0.5 * min_cover_max(&spec_edge),
        capacity_fn_corr_node: 0.5 * min_cover_max(&cap_node),
        capacity_fn_corr_edge: 0.5 * min_cover_max(&cap_edge),
        capacity_fn_hausdorff_node: 0.5 * hausdorff_reals(&sa.node_capacity, &sb.node_capacity),
        capacity_fn_hausdorff_edge: 0.5 * hausdorff_reals(&sa.edge_capacity, &sb.edge_capacity),
        capacity_radius_node: 0.5
            * (sa.capacity - sb.capacity).abs().max((sa.node_radius - sb.node_radius).abs()),
        capacity_radius_edge: 0.5
            * (sa.capacity - sb.capacity).abs().max((sa.edge_radius - sb.edge_radius).abs()),
        global_spectrum: 0.5 * hausdorff_reals(&sa.spectrum, &sb.spectrum),
        capacity_diff: 0.5 * (sa.capacity - sb.capacity).abs(),
        clique: graphified(&graphify::clique_expansion(a), &graphify::clique_expansion(b)),
        line: graphified(&graphify::line_graph(a), &graphify::line_graph(b)),
        node_affinity: graphified(&graphify::node_affinity(a), &graphify::node_affinity(b)),
        edge_affinity: graphified(&graphify::edge_affinity(a), &graphify::edge_affinity(b)),
        best: 0.0,
    };
    let best = report.all_values().into_iter().fold(0.0, f64::max);
    BoundReport { best, ..report }
}
