//! Graphification maps: ways to flatten a hypernetwork onto a network, plus
//! the chain/affinity machinery and single-linkage hierarchical clustering.
//!
//! * `bipartite` / `unbipartite`: the lossless labeled two-block view
//!   `[[0, ω], [ωᵀ, 0]]` and its inverse.
//! * `clique_expansion` / `line_graph`: lossy one-axis summaries
//!   `ω_Q(x₁, x₂) = max_y |min_i ω(x_i, y)|` and its column mirror.
//! * `node_affinity` / `edge_affinity`: best bottleneck energy over chains,
//!   computed as a max–min closure over the node⊔edge incidence graph —
//!   chains are never enumerated literally.
//! * `slhc_ultrametric`: min–max closure of a finite metric (single-linkage
//!   hierarchical clustering ultrametric).
//! * `dendrogram`: merge tree of an affinity matrix under decreasing
//!   thresholds.

use crate::matrix::Matrix;
use crate::metrics::{exact_dh_with, DistanceResult, MetricsError, SearchConfig};
use crate::model::{Hypernetwork, ModelError, Network};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphifyError {
    #[error("not a bipartite block matrix: {0}")]
    NotBipartite(String),
    #[error("malformed chain: {0}")]
    MalformedChain(String),
    #[error("kernel is not a finite metric: {0}")]
    NotAMetric(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A network on the disjoint union `X ⊔ Y` whose kernel vanishes on same-side
/// pairs and is symmetric across sides. Identifiers are unique within each
/// side (the two sides may repeat identifiers, as happens for embedded
/// networks where every node doubles as an edge).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledBipartiteNetwork {
    left: Vec<String>,
    right: Vec<String>,
    omega: Matrix,
}

impl LabeledBipartiteNetwork {
    pub fn new(
        left: Vec<String>,
        right: Vec<String>,
        omega: Matrix,
    ) -> Result<Self, GraphifyError> {
        let (l, r) = (left.len(), right.len());
        if l == 0 || r == 0 {
            return Err(GraphifyError::NotBipartite("a side is empty".into()));
        }
        if omega.rows() != l + r || omega.cols() != l + r {
            return Err(GraphifyError::NotBipartite(format!(
                "kernel is {}x{}, expected {}x{}",
                omega.rows(),
                omega.cols(),
                l + r,
                l + r
            )));
        }
        for i in 0..l + r {
            for j in 0..l + r {
                let v = omega.get(i, j);
                if !v.is_finite() {
                    return Err(GraphifyError::Model(ModelError::NonFiniteWeight {
                        row: i,
                        col: j,
                    }));
                }
                let same_side = (i < l) == (j < l);
                if same_side && v != 0.0 {
                    return Err(GraphifyError::NotBipartite(format!(
                        "same-side entry ({i}, {j}) is {v}, expected 0"
                    )));
                }
            }
        }
        for i in 0..l {
            for j in 0..r {
                if omega.get(i, l + j) != omega.get(l + j, i) {
                    return Err(GraphifyError::NotBipartite(format!(
                        "cross entries ({i}, {}) and ({}, {i}) differ",
                        l + j,
                        l + j
                    )));
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        for id in &left {
            if !seen.insert(id.as_str()) {
                return Err(GraphifyError::Model(ModelError::DuplicateIdentifier(id.clone())));
            }
        }
        seen.clear();
        for id in &right {
            if !seen.insert(id.as_str()) {
                return Err(GraphifyError::Model(ModelError::DuplicateIdentifier(id.clone())));
            }
        }
        Ok(LabeledBipartiteNetwork { left, right, omega })
    }

    pub fn left(&self) -> &[String] {
        &self.left
    }

    pub fn right(&self) -> &[String] {
        &self.right
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }
}

/// The two-block bipartite view `[[0, ω], [ωᵀ, 0]]`; lossless.
pub fn bipartite(h: &Hypernetwork) -> LabeledBipartiteNetwork {
    let (nx, ny) = (h.n_nodes(), h.n_edges());
    let omega = Matrix::build(nx + ny, nx + ny, |i, j| {
        if i < nx && j >= nx {
            h.weight(i, j - nx)
        } else if i >= nx && j < nx {
            h.weight(j, i - nx)
        } else {
            0.0
        }
    });
    LabeledBipartiteNetwork { left: h.nodes().to_vec(), right: h.edges().to_vec(), omega }
}

/// Inverse of [`bipartite`]: recovers the hypernetwork from the off-diagonal
/// block.
pub fn unbipartite(b: &LabeledBipartiteNetwork) -> Result<Hypernetwork, GraphifyError> {
    let l = b.left.len();
    let omega = Matrix::build(l, b.right.len(), |i, j| b.omega.get(i, l + j));
    Ok(Hypernetwork::new(b.left.clone(), b.right.clone(), omega)?)
}

/// Distance between labeled bipartite networks. Label-respecting
/// correspondences split into a node part and an edge part, so this equals
/// the hypernetwork distance of the recovered hypernetworks (½ factor
/// included).
pub fn labeled_distance(
    a: &LabeledBipartiteNetwork,
    b: &LabeledBipartiteNetwork,
    cfg: &SearchConfig,
) -> Result<DistanceResult, MetricsError> {
    let ha = unbipartite(a).expect("validated bipartite structure");
    let hb = unbipartite(b).expect("validated bipartite structure");
    exact_dh_with(&ha, &hb, cfg)
}

/// `ω_Q(x₁, x₂) = max_y |min(ω(x₁, y), ω(x₂, y))|`; the diagonal is
/// `max_y |ω(x, y)|`.
pub fn clique_expansion(h: &Hypernetwork) -> Network {
    let omega = Matrix::build(h.n_nodes(), h.n_nodes(), |x1, x2| {
        (0..h.n_edges()).map(|y| h.weight(x1, y).min(h.weight(x2, y)).abs()).fold(0.0, f64::max)
    });
    Network::new(h.nodes().to_vec(), omega).expect("hypernetwork axes are valid")
}

/// Column mirror of [`clique_expansion`]:
/// `ω_L(y₁, y₂) = max_x |min(ω(x, y₁), ω(x, y₂))|`.
pub fn line_graph(h: &Hypernetwork) -> Network {
    clique_expansion(&h.transposed())
}

/// How consecutive chain entries must overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ChainKind {
    Node,
    Edge,
}

fn chain_matches(chain: &[(usize, usize)], kind: ChainKind) -> bool {
    chain.windows(2).enumerate().all(|(i, w)| {
        let share_edge = w[0].1 == w[1].1;
        let share_node = w[0].0 == w[1].0;
        match (kind, i % 2) {
            (ChainKind::Node, 0) | (ChainKind::Edge, 1) => share_edge,
            _ => share_node,
        }
    })
}

/// Bottleneck energy of a node- or edge-chain: `min |ω|` over its entries.
///
/// A node-chain alternates shared hyperedges and shared nodes starting with a
/// shared hyperedge (`(x₀,y₀),(x₁,y₀),(x₁,y₁),(x₂,y₁),…`); an edge-chain
/// starts with a shared node. Chains have even length ≥ 2.
pub fn chain_energy(h: &Hypernetwork, chain: &[(usize, usize)]) -> Result<f64, GraphifyError> {
    if chain.len() < 2 || !chain.len().is_multiple_of(2) {
        return Err(GraphifyError::MalformedChain(format!(
            "chain length {} is not an even number ≥ 2",
            chain.len()
        )));
    }
    for &(x, y) in chain {
        if x >= h.n_nodes() {
            return Err(GraphifyError::Model(ModelError::IndexOutOfRange {
                side: "nodes",
                index: x,
                size: h.n_nodes(),
            }));
        }
        if y >= h.n_edges() {
            return Err(GraphifyError::Model(ModelError::IndexOutOfRange {
                side: "edges",
                index: y,
                size: h.n_edges(),
            }));
        }
    }
    if !chain_matches(chain, ChainKind::Node) && !chain_matches(chain, ChainKind::Edge) {
        return Err(GraphifyError::MalformedChain(
            "consecutive entries must alternate shared hyperedge/node coordinates".into(),
        ));
    }
    Ok(chain.iter().map(|&(x, y)| h.weight(x, y).abs()).fold(f64::INFINITY, f64::min))
}

/// Max–min (widest-path) closure over the complete node⊔edge incidence graph
/// weighted by `|ω|`. Entry `(u, v)` is the best bottleneck over walks of
/// length ≥ 1 from `u` to `v`.
fn maxmin_closure(h: &Hypernetwork) -> Vec<Vec<f64>> {
    let (nx, ny) = (h.n_nodes(), h.n_edges());
    let n = nx + ny;
    let mut w = vec![vec![f64::NEG_INFINITY; n]; n];
    for (x, row) in w.iter_mut().enumerate().take(nx) {
        for y in 0..ny {
            row[nx + y] = h.weight(x, y).abs();
        }
    }
    for (y, row) in w.iter_mut().enumerate().skip(nx) {
        for (x, cell) in row.iter_mut().enumerate().take(nx) {
            *cell = h.weight(x, y - nx).abs();
        }
    }
    for k in 0..n {
        // Row `k` cannot improve during its own phase (`min(w[k][k], ·)` never
        // beats an existing entry), so a snapshot is sound and unborrows `w`.
        let row_k = w[k].clone();
        for row_i in &mut w {
            let wik = row_i[k];
            if wik == f64::NEG_INFINITY {
                continue;
            }
            for (wij, &wkj) in row_i.iter_mut().zip(&row_k) {
                let via = wik.min(wkj);
                if via > *wij {
                    *wij = via;
                }
            }
        }
    }
    w
}

/// `ω_{A_n}(x₁, x₂)`: the largest chain energy over node-chains from `x₁` to
/// `x₂`; the diagonal is `max_y |ω(x, y)|`.
pub fn node_affinity(h: &Hypernetwork) -> Network {
    let w = maxmin_closure(h);
    let omega = Matrix::build(h.n_nodes(), h.n_nodes(), |i, j| w[i][j]);
    Network::new(h.nodes().to_vec(), omega).expect("hypernetwork axes are valid")
}

/// Edge mirror of [`node_affinity`].
pub fn edge_affinity(h: &Hypernetwork) -> Network {
    node_affinity(&h.transposed())
}

/// Single-linkage ultrametric: `u(x, x′) = min` over paths of the largest
/// step. The input must be a finite metric (zero diagonal, symmetry,
/// triangle inequality); the output satisfies the strong triangle inequality.
pub fn slhc_ultrametric(n: &Network) -> Result<Network, GraphifyError> {
    let size = n.n_nodes();
    for i in 0..size {
        if n.weight(i, i) != 0.0 {
            return Err(GraphifyError::NotAMetric(format!(
                "d({i}, {i}) = {} is not 0",
                n.weight(i, i)
            )));
        }
        for j in 0..size {
            if n.weight(i, j) != n.weight(j, i) {
                return Err(GraphifyError::NotAMetric(format!("d({i}, {j}) != d({j}, {i})")));
            }
        }
    }
    for k in 0..size {
        for i in 0..size {
            for j in 0..size {
                if n.weight(i, j) > n.weight(i, k) + n.weight(k, j) {
                    return Err(GraphifyError::NotAMetric(format!(
                        "triangle inequality fails on ({i}, {k}, {j})"
                    )));
                }
            }
        }
    }
    let mut u: Vec<Vec<f64>> = (0..size).map(|i| n.omega().row(i).to_vec()).collect();
    for k in 0..size {
        for i in 0..size {
            for j in 0..size {
                let via = u[i][k].max(u[k][j]);
                if via < u[i][j] {
                    u[i][j] = via;
                }
            }
        }
    }
    let omega = Matrix::build(size, size, |i, j| u[i][j]);
    Ok(Network::new(n.nodes().to_vec(), omega).expect("same axes"))
}

/// One merge of two clusters at a threshold height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeEvent {
    pub height: f64,
    /// Cluster ids: leaf `i` is cluster `i`; the `k`-th merge creates cluster
    /// `n_leaves + k`.
    pub a: usize,
    pub b: usize,
}

/// Merge tree of an affinity matrix: leaves appear at their diagonal entry
/// and clusters merge as the threshold decreases through off-diagonal values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub leaves: Vec<String>,
    pub leaf_heights: Vec<f64>,
    pub merges: Vec<MergeEvent>,
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            self.parent[x] = self.find(self.parent[x]);
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb;
        } else if self.rank[ra] > self.rank[rb] {
            self.parent[rb] = ra;
        } else {
            self.parent[rb] = ra;
            self.rank[ra] += 1;
        }
        Some((ra, rb))
    }
}

/// Single-linkage merge tree: processes off-diagonal entries in decreasing
/// order (ties broken by index), recording one event per union.
pub fn dendrogram(a: &Network) -> Dendrogram {
    let n = a.n_nodes();
    let mut edges: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((a.weight(i, j).max(a.weight(j, i)), i, j));
        }
    }
    edges.sort_by(|l, r| r.0.total_cmp(&l.0).then(l.1.cmp(&r.1)).then(l.2.cmp(&r.2)));
    let mut uf = UnionFind::new(n);
    let mut cluster_of_root: Vec<usize> = (0..n).collect();
    let mut merges = Vec::new();
    for (height, i, j) in edges {
        if let Some((ra, rb)) = uf.union(i, j) {
            let event = MergeEvent { height, a: cluster_of_root[ra], b: cluster_of_root[rb] };
            merges.push(event);
            let fresh = n + merges.len() - 1;
            cluster_of_root[ra] = fresh;
            cluster_of_root[rb] = fresh;
        }
    }
    Dendrogram {
        leaves: a.nodes().to_vec(),
        leaf_heights: (0..n).map(|i| a.weight(i, i)).collect(),
        merges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::from_network;

    fn hyper(rows: &[Vec<f64>]) -> Hypernetwork {
        Hypernetwork::from_weights(Matrix::from_rows(rows)).unwrap()
    }

    #[test]
    fn bipartite_roundtrip() {
        let h = hyper(&[vec![0.2, 0.4], vec![0.6, 0.0], vec![0.1, 0.9]]);
        let b = bipartite(&h);
        assert_eq!(b.omega().get(0, 3), 0.2);
        assert_eq!(b.omega().get(3, 0), 0.2);
        assert_eq!(b.omega().get(0, 1), 0.0);
        assert_eq!(unbipartite(&b).unwrap(), h);
    }

    #[test]
    fn unbipartite_rejects_asymmetric_blocks() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]);
        let err = LabeledBipartiteNetwork::new(vec!["a".into()], vec!["e".into()], m).unwrap_err();
        assert!(matches!(err, GraphifyError::NotBipartite(_)));
    }

    #[test]
    fn clique_diagonal_is_row_max_abs() {
        let h = hyper(&[vec![-0.5, 0.2], vec![0.1, 0.3]]);
        let q = clique_expansion(&h);
        assert_eq!(q.weight(0, 0), 0.5);
        // min(-0.5, 0.1) = -0.5 on edge 0, min(0.2, 0.3) = 0.2 on edge 1.
        assert_eq!(q.weight(0, 1), 0.5);
    }

    #[test]
    fn chain_validation() {
        let h = hyper(&[vec![0.2, 0.4], vec![0.6, 0.1]]);
        // Node-chain between nodes 0 and 1 through edge 0.
        assert_eq!(chain_energy(&h, &[(0, 0), (1, 0)]).unwrap(), 0.2);
        // Single repeated entry is a valid (degenerate) chain.
        assert_eq!(chain_energy(&h, &[(0, 1), (0, 1)]).unwrap(), 0.4);
        assert!(chain_energy(&h, &[(0, 0)]).is_err());
        assert!(chain_energy(&h, &[(0, 0), (1, 1)]).is_err());
        assert!(chain_energy(&h, &[(0, 0), (1, 0), (1, 1), (0, 1), (0, 0), (1, 0)]).is_ok());
    }

    #[test]
    fn affinity_is_at_least_any_chain_energy() {
        let h = hyper(&[vec![0.2, 0.4, 0.0], vec![0.6, 0.0, 0.2], vec![0.0, 0.7, 0.8]]);
        let a = node_affinity(&h);
        let chain = [(0usize, 1usize), (2, 1), (2, 2), (1, 2)];
        let e = chain_energy(&h, &chain).unwrap();
        assert!(a.weight(0, 1) >= e);
        assert_eq!(a.weight(0, 0), 0.4);
    }

    #[test]
    fn slhc_gives_strong_triangle() {
        let d = Network::from_weights(Matrix::from_rows(&[
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]))
        .unwrap();
        let u = slhc_ultrametric(&d).unwrap();
        assert_eq!(u.weight(0, 2), 1.5);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!(u.weight(i, j) <= u.weight(i, k).max(u.weight(k, j)));
                }
            }
        }
    }

    #[test]
    fn slhc_rejects_triangle_violation() {
        let d = Network::from_weights(Matrix::from_rows(&[
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ]))
        .unwrap();
        assert!(matches!(slhc_ultrametric(&d), Err(GraphifyError::NotAMetric(_))));
    }

    #[test]
    fn all_equal_affinity_merges_once() {
        let a =
            Network::from_weights(Matrix::from_rows(&[vec![0.3, 0.3], vec![0.3, 0.3]])).unwrap();
        let d = dendrogram(&a);
        assert_eq!(d.merges.len(), 1);
        assert_eq!(d.merges[0].height, 0.3);
        assert_eq!((d.merges[0].a, d.merges[0].b), (0, 1));
        assert_eq!(d.leaf_heights, vec![0.3, 0.3]);
    }

    #[test]
    fn dendrogram_heights_decrease() {
        let h = hyper(&[vec![0.9, 0.0], vec![0.5, 0.1], vec![0.0, 0.4]]);
        let d = dendrogram(&node_affinity(&h));
        for w in d.merges.windows(2) {
            assert!(w[0].height >= w[1].height);
        }
        assert_eq!(d.merges.len(), 2);
    }

    #[test]
    fn labeled_distance_matches_hyper_distance() {
        let h1 = hyper(&[vec![0.2, 0.4], vec![0.6, 0.0]]);
        let h2 = hyper(&[vec![0.7], vec![0.5]]);
        let cfg = SearchConfig::default();
        let d_b = labeled_distance(&bipartite(&h1), &bipartite(&h2), &cfg).unwrap();
        let d_h = crate::metrics::exact_dh(&h1, &h2).unwrap();
        assert_eq!(d_b.value, d_h.value);
    }

    #[test]
    fn embedded_network_bipartite_keeps_ids() {
        let n =
            Network::from_weights(Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])).unwrap();
        let b = bipartite(&from_network(&n));
        assert_eq!(b.left(), b.right());
    }
}
