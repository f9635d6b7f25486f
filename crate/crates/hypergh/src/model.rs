//! Core value types: hypernetworks, networks, correspondences, and map quadruples.
//!
//! A hypernetwork is a triple `(X, Y, ω)` of a node set, a hyperedge set, and a
//! total real-valued kernel `ω : X × Y → ℝ`. A network is the square special
//! case `(X, ω)` with `ω : X × X → ℝ`. Both are immutable after construction;
//! every constructor validates its invariants and returns `ModelError` on
//! violation rather than panicking.

use crate::matrix::Matrix;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("axis `{0}` is empty; at least one node and one hyperedge are required")]
    EmptyAxis(&'static str),
    #[error("non-finite weight at row {row}, column {col}")]
    NonFiniteWeight { row: usize, col: usize },
    #[error("duplicate identifier `{0}`")]
    DuplicateIdentifier(String),
    #[error("weight matrix is {mrows}x{mcols} but identifier lists imply {rows}x{cols}")]
    ShapeMismatch { mrows: usize, mcols: usize, rows: usize, cols: usize },
    #[error("correspondence does not cover {side} index {index}")]
    CoverageViolation { side: &'static str, index: usize },
    #[error("index {index} out of range for {side} of size {size}")]
    IndexOutOfRange { side: &'static str, index: usize, size: usize },
}

fn check_unique(ids: &[String]) -> Result<(), ModelError> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(ModelError::DuplicateIdentifier(id.clone()));
        }
    }
    Ok(())
}

fn check_finite(omega: &Matrix) -> Result<(), ModelError> {
    for i in 0..omega.rows() {
        for j in 0..omega.cols() {
            if !omega.get(i, j).is_finite() {
                return Err(ModelError::NonFiniteWeight { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// A weighted hypernetwork `(X, Y, ω)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypernetwork {
    nodes: Vec<String>,
    edges: Vec<String>,
    omega: Matrix,
}

impl Hypernetwork {
    pub fn new(nodes: Vec<String>, edges: Vec<String>, omega: Matrix) -> Result<Self, ModelError> {
        if nodes.is_empty() {
            return Err(ModelError::EmptyAxis("nodes"));
        }
        if edges.is_empty() {
            return Err(ModelError::EmptyAxis("edges"));
        }
        if omega.rows() != nodes.len() || omega.cols() != edges.len() {
            return Err(ModelError::ShapeMismatch {
                mrows: omega.rows(),
                mcols: omega.cols(),
                rows: nodes.len(),
                cols: edges.len(),
            });
        }
        check_unique(&nodes)?;
        check_unique(&edges)?;
        check_finite(&omega)?;
        Ok(Hypernetwork { nodes, edges, omega })
    }

    /// Convenience constructor with generated identifiers `x0..` / `y0..`.
    pub fn from_weights(omega: Matrix) -> Result<Self, ModelError> {
        let nodes = (0..omega.rows()).map(|i| format!("x{i}")).collect();
        let edges = (0..omega.cols()).map(|j| format!("y{j}")).collect();
        Hypernetwork::new(nodes, edges, omega)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[String] {
        &self.edges
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    #[inline]
    pub fn weight(&self, node: usize, edge: usize) -> f64 {
        self.omega.get(node, edge)
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// The same data with node and hyperedge roles exchanged (`ω` transposed).
    pub fn transposed(&self) -> Hypernetwork {
        Hypernetwork {
            nodes: self.edges.clone(),
            edges: self.nodes.clone(),
            omega: self.omega.transpose(),
        }
    }

    /// Merges nodes with identical `ω`-rows and hyperedges with identical
    /// `ω`-columns (exact float equality), keeping the first occurrence of each
    /// distinct row/column and its identifier. The result is weakly isomorphic
    /// to the input; this is a preprocessor and is never applied implicitly by
    /// the distance solvers.
    pub fn reduce(&self) -> Hypernetwork {
        let mut keep_rows: Vec<usize> = Vec::new();
        for i in 0..self.n_nodes() {
            if !keep_rows.iter().any(|&k| self.omega.row(k) == self.omega.row(i)) {
                keep_rows.push(i);
            }
        }
        let mut keep_cols: Vec<usize> = Vec::new();
        for j in 0..self.n_edges() {
            if !keep_cols.iter().any(|&k| self.omega.col(k) == self.omega.col(j)) {
                keep_cols.push(j);
            }
        }
        Hypernetwork {
            nodes: keep_rows.iter().map(|&i| self.nodes[i].clone()).collect(),
            edges: keep_cols.iter().map(|&j| self.edges[j].clone()).collect(),
            omega: self.omega.select(&keep_rows, &keep_cols),
        }
    }
}

/// A weighted network `(X, ω)` with a square kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    nodes: Vec<String>,
    omega: Matrix,
}

impl Network {
    pub fn new(nodes: Vec<String>, omega: Matrix) -> Result<Self, ModelError> {
        if nodes.is_empty() {
            return Err(ModelError::EmptyAxis("nodes"));
        }
        if omega.rows() != nodes.len() || omega.cols() != nodes.len() {
            return Err(ModelError::ShapeMismatch {
                mrows: omega.rows(),
                mcols: omega.cols(),
                rows: nodes.len(),
                cols: nodes.len(),
            });
        }
        check_unique(&nodes)?;
        check_finite(&omega)?;
        Ok(Network { nodes, omega })
    }

    pub fn from_weights(omega: Matrix) -> Result<Self, ModelError> {
        let nodes = (0..omega.rows()).map(|i| format!("x{i}")).collect();
        Network::new(nodes, omega)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    #[inline]
    pub fn weight(&self, a: usize, b: usize) -> f64 {
        self.omega.get(a, b)
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }
}

/// Embeds a network as the hypernetwork `(X, X, ω)`: every node doubles as a
/// hyperedge with the same identifier.
pub fn from_network(n: &Network) -> Hypernetwork {
    Hypernetwork { nodes: n.nodes().to_vec(), edges: n.nodes().to_vec(), omega: n.omega().clone() }
}

/// A pair of relations `(S ⊆ X × X′, T ⊆ Y × Y′)`, each covering both of its
/// factors. Pairs are stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondencePair {
    s: Vec<(usize, usize)>,
    t: Vec<(usize, usize)>,
}

fn check_coverage(
    rel: &[(usize, usize)],
    left: usize,
    right: usize,
    left_name: &'static str,
    right_name: &'static str,
) -> Result<(), ModelError> {
    let mut left_hit = vec![false; left];
    let mut right_hit = vec![false; right];
    for &(a, b) in rel {
        if a >= left {
            return Err(ModelError::IndexOutOfRange { side: left_name, index: a, size: left });
        }
        if b >= right {
            return Err(ModelError::IndexOutOfRange { side: right_name, index: b, size: right });
        }
        left_hit[a] = true;
        right_hit[b] = true;
    }
    if let Some(i) = left_hit.iter().position(|&h| !h) {
        return Err(ModelError::CoverageViolation { side: left_name, index: i });
    }
    if let Some(i) = right_hit.iter().position(|&h| !h) {
        return Err(ModelError::CoverageViolation { side: right_name, index: i });
    }
    Ok(())
}

impl CorrespondencePair {
    /// Validates coverage of both relations against the axis sizes
    /// `(|X|, |X′|)` and `(|Y|, |Y′|)`.
    pub fn new(
        mut s: Vec<(usize, usize)>,
        mut t: Vec<(usize, usize)>,
        node_sizes: (usize, usize),
        edge_sizes: (usize, usize),
    ) -> Result<Self, ModelError> {
        s.sort_unstable();
        s.dedup();
        t.sort_unstable();
        t.dedup();
        check_coverage(&s, node_sizes.0, node_sizes.1, "nodes", "nodes'")?;
        check_coverage(&t, edge_sizes.0, edge_sizes.1, "edges", "edges'")?;
        Ok(CorrespondencePair { s, t })
    }

    pub fn s(&self) -> &[(usize, usize)] {
        &self.s
    }

    pub fn t(&self) -> &[(usize, usize)] {
        &self.t
    }
}

/// A quadruple of total maps `(φ : X → X′, ψ : Y → Y′, φ′ : X′ → X, ψ′ : Y′ → Y)`
/// stored as index arrays over the source axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapQuadruple {
    phi: Vec<usize>,
    psi: Vec<usize>,
    phi_back: Vec<usize>,
    psi_back: Vec<usize>,
}

fn check_total(
    map: &[usize],
    domain: usize,
    codomain: usize,
    side: &'static str,
) -> Result<(), ModelError> {
    if map.len() != domain {
        return Err(ModelError::IndexOutOfRange { side, index: map.len(), size: domain });
    }
    for &v in map {
        if v >= codomain {
            return Err(ModelError::IndexOutOfRange { side, index: v, size: codomain });
        }
    }
    Ok(())
}

impl MapQuadruple {
    pub fn new(
        phi: Vec<usize>,
        psi: Vec<usize>,
        phi_back: Vec<usize>,
        psi_back: Vec<usize>,
        node_sizes: (usize, usize),
        edge_sizes: (usize, usize),
    ) -> Result<Self, ModelError> {
        check_total(&phi, node_sizes.0, node_sizes.1, "phi")?;
        check_total(&psi, edge_sizes.0, edge_sizes.1, "psi")?;
        check_total(&phi_back, node_sizes.1, node_sizes.0, "phi_back")?;
        check_total(&psi_back, edge_sizes.1, edge_sizes.0, "psi_back")?;
        Ok(MapQuadruple { phi, psi, phi_back, psi_back })
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn psi(&self) -> &[usize] {
        &self.psi
    }

    pub fn phi_back(&self) -> &[usize] {
        &self.phi_back
    }

    pub fn psi_back(&self) -> &[usize] {
        &self.psi_back
    }

    /// The induced correspondence pair `S = graph(φ) ∪ graph(φ′)ᵀ`,
    /// `T = graph(ψ) ∪ graph(ψ′)ᵀ`.
    pub fn to_correspondences(&self) -> CorrespondencePair {
        let mut s: Vec<(usize, usize)> = self.phi.iter().copied().enumerate().collect();
        s.extend(self.phi_back.iter().copied().enumerate().map(|(x2, x)| (x, x2)));
        let mut t: Vec<(usize, usize)> = self.psi.iter().copied().enumerate().collect();
        t.extend(self.psi_back.iter().copied().enumerate().map(|(y2, y)| (y, y2)));
        s.sort_unstable();
        s.dedup();
        t.sort_unstable();
        t.dedup();
        CorrespondencePair { s, t }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(rows: &[Vec<f64>]) -> Hypernetwork {
        Hypernetwork::from_weights(Matrix::from_rows(rows)).unwrap()
    }

    #[test]
    fn rejects_empty_axes_and_nan() {
        assert_eq!(
            Hypernetwork::new(vec![], vec!["a".into()], Matrix::zeros(0, 1)).unwrap_err(),
            ModelError::EmptyAxis("nodes")
        );
        let err =
            Hypernetwork::from_weights(Matrix::from_rows(&[vec![0.0, f64::NAN]])).unwrap_err();
        assert_eq!(err, ModelError::NonFiniteWeight { row: 0, col: 1 });
    }

    #[test]
    fn rejects_duplicate_identifiers() {
        let err =
            Hypernetwork::new(vec!["a".into(), "a".into()], vec!["e".into()], Matrix::zeros(2, 1))
                .unwrap_err();
        assert_eq!(err, ModelError::DuplicateIdentifier("a".into()));
    }

    #[test]
    fn from_network_duplicates_axis() {
        let n =
            Network::from_weights(Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])).unwrap();
        let h = from_network(&n);
        assert_eq!(h.nodes(), h.edges());
        assert_eq!(h.weight(0, 1), 1.0);
    }

    #[test]
    fn reduce_merges_duplicate_rows_and_is_idempotent() {
        let a = h(&[vec![1.0, 2.0], vec![1.0, 2.0], vec![3.0, 4.0]]);
        let r = a.reduce();
        assert_eq!(r.n_nodes(), 2);
        assert_eq!(r.nodes(), &["x0".to_string(), "x2".to_string()]);
        assert_eq!(r.reduce(), r);
    }

    #[test]
    fn reduce_merges_duplicate_columns() {
        let a = h(&[vec![1.0, 1.0, 2.0], vec![3.0, 3.0, 4.0]]);
        let r = a.reduce();
        assert_eq!(r.n_edges(), 2);
        assert_eq!(r.omega().row(0), &[1.0, 2.0]);
    }

    #[test]
    fn distinct_rows_untouched() {
        let a = h(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert_eq!(a.reduce(), a);
    }

    #[test]
    fn correspondence_requires_coverage() {
        let err = CorrespondencePair::new(vec![(0, 0)], vec![(0, 0)], (2, 1), (1, 1)).unwrap_err();
        assert_eq!(err, ModelError::CoverageViolation { side: "nodes", index: 1 });
        let ok =
            CorrespondencePair::new(vec![(0, 0), (1, 0), (1, 0)], vec![(0, 0)], (2, 1), (1, 1))
                .unwrap();
        assert_eq!(ok.s(), &[(0, 0), (1, 0)]);
    }

    #[test]
    fn quadruple_validates_codomain() {
        let err =
            MapQuadruple::new(vec![2], vec![0], vec![0], vec![0], (1, 2), (1, 1)).unwrap_err();
        assert!(matches!(err, ModelError::IndexOutOfRange { side: "phi", .. }));
    }
}
