//! Distances between hypernetworks and networks.
//!
//! The distance between hypernetworks `(X, Y, ω)` and `(X′, Y′, ω′)` is half
//! the smallest achievable distortion over correspondence pairs
//! `(S ⊆ X × X′, T ⊆ Y × Y′)`, where
//! `dis(S, T) = max |ω(x, y) − ω′(x′, y′)|` over `(x, x′) ∈ S, (y, y′) ∈ T`.
//! An equivalent formulation optimizes over map quadruples
//! `(φ : X → X′, ψ : Y → Y′, φ′ : X′ → X, ψ′ : Y′ → Y)` and the maximum of
//! four (co)distortions; the exact solver works in that formulation because
//! for fixed `(φ, φ′)` the existence of suitable `(ψ, ψ′)` decomposes into
//! independent per-edge feasibility checks.
//!
//! Networks use the analogous single-relation distance with node-map pairs
//! `(φ, φ′)`. Both solvers are exact and enumerate with branch-and-bound
//! pruning; a (configurable) budget rejects instances whose enumeration
//! space is too large.

mod hyper_search;
mod network_search;

use crate::matrix::Matrix;
use crate::model::{CorrespondencePair, Hypernetwork, MapQuadruple, ModelError, Network};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error(
        "enumeration budget exceeded: search space ~{estimate:.3e} exceeds budget {budget:.3e}"
    )]
    BudgetExceeded { estimate: f64, budget: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Knobs for the exact solvers.
///
/// `budget` bounds the size of the brute enumeration space
/// (`|X′|^|X| · |X|^|X′|` on the cheaper axis); `tolerance` relaxes every
/// weight comparison `|a − b| ≤ t` to `|a − b| ≤ t + tolerance` and defaults
/// to strict equality semantics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub budget: f64,
    pub tolerance: f64,
}

pub const DEFAULT_BUDGET: f64 = 1e8;

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_BUDGET, tolerance: 0.0 }
    }
}

/// Witness attached to a computed distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    HyperMaps(MapQuadruple),
    NetworkMaps { phi: Vec<usize>, phi_back: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: f64,
    pub exact: bool,
    pub witness: Witness,
}

/// The four (co)distortions of a map quadruple, in the order
/// `dis(φ, ψ), dis(φ′, ψ′), codis(φ, ψ′), codis(φ′, ψ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalDistortions {
    pub dis_fwd: f64,
    pub dis_bwd: f64,
    pub codis_fwd: f64,
    pub codis_bwd: f64,
}

impl FunctionalDistortions {
    pub fn max(&self) -> f64 {
        self.dis_fwd.max(self.dis_bwd).max(self.codis_fwd).max(self.codis_bwd)
    }
}

/// Distortion of a correspondence pair:
/// `max |ω(x, y) − ω′(x′, y′)|` over `(x, x′) ∈ S`, `(y, y′) ∈ T`.
pub fn distortion_hyper(
    a: &Hypernetwork,
    b: &Hypernetwork,
    cp: &CorrespondencePair,
) -> Result<f64, MetricsError> {
    check_pair_range(cp.s(), a.n_nodes(), b.n_nodes(), "nodes")?;
    check_pair_range(cp.t(), a.n_edges(), b.n_edges(), "edges")?;
    let mut worst = 0.0f64;
    for &(x, x2) in cp.s() {
        for &(y, y2) in cp.t() {
            worst = worst.max((a.weight(x, y) - b.weight(x2, y2)).abs());
        }
    }
    Ok(worst)
}

/// Distortion of a single node relation between two networks:
/// `max |ω(x, z) − ω′(x′, z′)|` over `(x, x′), (z, z′) ∈ R`.
pub fn distortion_network(
    a: &Network,
    b: &Network,
    rel: &[(usize, usize)],
) -> Result<f64, MetricsError> {
    check_pair_range(rel, a.n_nodes(), b.n_nodes(), "nodes")?;
    let mut worst = 0.0f64;
    for &(x, x2) in rel {
        for &(z, z2) in rel {
            worst = worst.max((a.weight(x, z) - b.weight(x2, z2)).abs());
        }
    }
    Ok(worst)
}

fn check_pair_range(
    rel: &[(usize, usize)],
    left: usize,
    right: usize,
    side: &'static str,
) -> Result<(), MetricsError> {
    for &(i, j) in rel {
        if i >= left {
            return Err(ModelError::IndexOutOfRange { side, index: i, size: left }.into());
        }
        if j >= right {
            return Err(ModelError::IndexOutOfRange { side, index: j, size: right }.into());
        }
    }
    Ok(())
}

/// The four (co)distortions of the quadruple `q` between `a` and `b`.
pub fn functional_distortions(
    a: &Hypernetwork,
    b: &Hypernetwork,
    q: &MapQuadruple,
) -> Result<FunctionalDistortions, MetricsError> {
    // Re-validate against these particular shapes.
    let q = MapQuadruple::new(
        q.phi().to_vec(),
        q.psi().to_vec(),
        q.phi_back().to_vec(),
        q.psi_back().to_vec(),
        (a.n_nodes(), b.n_nodes()),
        (a.n_edges(), b.n_edges()),
    )?;
    let mut dis_fwd = 0.0f64;
    let mut dis_bwd = 0.0f64;
    let mut codis_fwd = 0.0f64;
    let mut codis_bwd = 0.0f64;
    for x in 0..a.n_nodes() {
        for y in 0..a.n_edges() {
            dis_fwd = dis_fwd.max((a.weight(x, y) - b.weight(q.phi()[x], q.psi()[y])).abs());
        }
    }
    for x2 in 0..b.n_nodes() {
        for y2 in 0..b.n_edges() {
            dis_bwd = dis_bwd
                .max((a.weight(q.phi_back()[x2], q.psi_back()[y2]) - b.weight(x2, y2)).abs());
        }
    }
    for x in 0..a.n_nodes() {
        for y2 in 0..b.n_edges() {
            codis_fwd =
                codis_fwd.max((a.weight(x, q.psi_back()[y2]) - b.weight(q.phi()[x], y2)).abs());
        }
    }
    for x2 in 0..b.n_nodes() {
        for y in 0..a.n_edges() {
            codis_bwd =
                codis_bwd.max((a.weight(q.phi_back()[x2], y) - b.weight(x2, q.psi()[y])).abs());
        }
    }
    Ok(FunctionalDistortions { dis_fwd, dis_bwd, codis_fwd, codis_bwd })
}

/// Saturating `b1^e1 * b2^e2` as the enumeration-space size.
fn enumeration_cost(b1: usize, e1: usize, b2: usize, e2: usize) -> f64 {
    fn pow(b: usize, e: usize) -> u128 {
        let mut acc: u128 = 1;
        for _ in 0..e {
            acc = acc.saturating_mul(b as u128);
        }
        acc
    }
    let c = pow(b1, e1).saturating_mul(pow(b2, e2));
    c as f64
}

fn check_budget(estimate: f64, cfg: &SearchConfig) -> Result<(), MetricsError> {
    if estimate > cfg.budget {
        return Err(MetricsError::BudgetExceeded { estimate, budget: cfg.budget });
    }
    Ok(())
}

/// Decides whether some map quadruple keeps all four (co)distortions ≤ `t`,
/// returning the lexicographically first witness found by the deterministic
/// search. Enumerates node maps on whichever axis is cheaper (node maps with
/// per-edge feasibility, or the transposed problem).
pub fn decide_dh_leq(
    a: &Hypernetwork,
    b: &Hypernetwork,
    t: f64,
    cfg: &SearchConfig,
) -> Result<Option<MapQuadruple>, MetricsError> {
    let node_cost = enumeration_cost(b.n_nodes(), a.n_nodes(), a.n_nodes(), b.n_nodes());
    let edge_cost = enumeration_cost(b.n_edges(), a.n_edges(), a.n_edges(), b.n_edges());
    let thresh = t + cfg.tolerance;
    if node_cost <= edge_cost {
        check_budget(node_cost, cfg)?;
        Ok(hyper_search::decide(a, b, thresh).map(|m| {
            MapQuadruple::new(
                m.phi,
                m.psi,
                m.phi_back,
                m.psi_back,
                (a.n_nodes(), b.n_nodes()),
                (a.n_edges(), b.n_edges()),
            )
            .expect("search returns well-formed maps")
        }))
    } else {
        check_budget(edge_cost, cfg)?;
        let (ta, tb) = (a.transposed(), b.transposed());
        Ok(hyper_search::decide(&ta, &tb, thresh).map(|m| {
            // Roles swap back: the transposed problem's node maps are ψ, ψ′.
            MapQuadruple::new(
                m.psi,
                m.phi,
                m.psi_back,
                m.phi_back,
                (a.n_nodes(), b.n_nodes()),
                (a.n_edges(), b.n_edges()),
            )
            .expect("search returns well-formed maps")
        }))
    }
}

/// All candidate optimal distortion values: `{ |ω(x, y) − ω′(x′, y′)| }`.
fn hyper_candidates(a: &Hypernetwork, b: &Hypernetwork) -> Vec<f64> {
    let mut vals = Vec::with_capacity(a.n_nodes() * a.n_edges() * b.n_nodes() * b.n_edges());
    for x in 0..a.n_nodes() {
        for y in 0..a.n_edges() {
            let w = a.weight(x, y);
            for x2 in 0..b.n_nodes() {
                for y2 in 0..b.n_edges() {
                    vals.push((w - b.weight(x2, y2)).abs());
                }
            }
        }
    }
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    vals
}

pub fn exact_dh(a: &Hypernetwork, b: &Hypernetwork) -> Result<DistanceResult, MetricsError> {
    exact_dh_with(a, b, &SearchConfig::default())
}

/// Exact hypernetwork distance by bisection over the candidate distortion set.
pub fn exact_dh_with(
    a: &Hypernetwork,
    b: &Hypernetwork,
    cfg: &SearchConfig,
) -> Result<DistanceResult, MetricsError> {
    let theta = hyper_candidates(a, b);
    // The full-product correspondence realizes the largest candidate, so the
    // feasible set is nonempty and bisection is well-defined.
    let mut lo = 0usize;
    let mut hi = theta.len() - 1;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if decide_dh_leq(a, b, theta[mid], cfg)?.is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let witness = decide_dh_leq(a, b, theta[lo], cfg)?
        .expect("bisection invariant: the final candidate is feasible");
    Ok(DistanceResult { value: theta[lo] / 2.0, exact: true, witness: Witness::HyperMaps(witness) })
}

/// Node maps in the two directions witnessing a network comparison.
pub type NodeMapPair = (Vec<usize>, Vec<usize>);

/// Decides `d_N ≤ t/2` for networks, i.e. whether node maps `(φ, φ′)` exist
/// with all four network (co)distortions ≤ `t`.
pub fn decide_dn_leq(
    a: &Network,
    b: &Network,
    t: f64,
    cfg: &SearchConfig,
) -> Result<Option<NodeMapPair>, MetricsError> {
    let cost = enumeration_cost(b.n_nodes(), a.n_nodes(), a.n_nodes(), b.n_nodes());
    check_budget(cost, cfg)?;
    Ok(network_search::decide(a, b, t + cfg.tolerance))
}

fn network_candidates(a: &Network, b: &Network) -> Vec<f64> {
    let mut vals = Vec::new();
    for v in a.omega().values() {
        for w in b.omega().values() {
            vals.push((v - w).abs());
        }
    }
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    vals
}

pub fn exact_dn(a: &Network, b: &Network) -> Result<DistanceResult, MetricsError> {
    exact_dn_with(a, b, &SearchConfig::default())
}

pub fn exact_dn_with(
    a: &Network,
    b: &Network,
    cfg: &SearchConfig,
) -> Result<DistanceResult, MetricsError> {
    let theta = network_candidates(a, b);
    let mut lo = 0usize;
    let mut hi = theta.len() - 1;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if decide_dn_leq(a, b, theta[mid], cfg)?.is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let (phi, phi_back) = decide_dn_leq(a, b, theta[lo], cfg)?
        .expect("bisection invariant: the final candidate is feasible");
    Ok(DistanceResult {
        value: theta[lo] / 2.0,
        exact: true,
        witness: Witness::NetworkMaps { phi, phi_back },
    })
}

/// Weak isomorphism is distance zero; the witness quadruple has all four
/// (co)distortions equal to zero.
pub fn is_weakly_isomorphic(
    a: &Hypernetwork,
    b: &Hypernetwork,
    cfg: &SearchConfig,
) -> Result<Option<MapQuadruple>, MetricsError> {
    decide_dh_leq(a, b, 0.0, cfg)
}

/// Anytime upper bound: alternating pointwise optimization of the quadruple
/// from `restarts` seeded starting points (the first start is greedy).
/// Deterministic for a fixed seed; never below the exact distance.
pub fn upper_bound_dh(
    a: &Hypernetwork,
    b: &Hypernetwork,
    restarts: usize,
    seed: u64,
) -> DistanceResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, MapQuadruple)> = None;
    for restart in 0..restarts.max(1) {
        let q = if restart == 0 { greedy_start(a, b) } else { random_start(a, b, &mut rng) };
        let (m, q) = alternate(a, b, q);
        if best.as_ref().is_none_or(|(bm, _)| m < *bm) {
            best = Some((m, q));
        }
    }
    let (m, q) = best.expect("at least one restart");
    DistanceResult { value: m / 2.0, exact: false, witness: Witness::HyperMaps(q) }
}

/// Hausdorff-style gap between two weight slices (used for greedy seeding).
fn slice_gap(u: &[f64], v: &[f64]) -> f64 {
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

fn greedy_start(a: &Hypernetwork, b: &Hypernetwork) -> MapQuadruple {
    let phi = (0..a.n_nodes())
        .map(|x| argmin(b.n_nodes(), |x2| slice_gap(a.omega().row(x), b.omega().row(x2))))
        .collect();
    let phi_back = (0..b.n_nodes())
        .map(|x2| argmin(a.n_nodes(), |x| slice_gap(a.omega().row(x), b.omega().row(x2))))
        .collect();
    let psi = (0..a.n_edges())
        .map(|y| argmin(b.n_edges(), |y2| slice_gap(&a.omega().col(y), &b.omega().col(y2))))
        .collect();
    let psi_back = (0..b.n_edges())
        .map(|y2| argmin(a.n_edges(), |y| slice_gap(&a.omega().col(y), &b.omega().col(y2))))
        .collect();
    MapQuadruple::new(
        phi,
        psi,
        phi_back,
        psi_back,
        (a.n_nodes(), b.n_nodes()),
        (a.n_edges(), b.n_edges()),
    )
    .expect("greedy maps are total")
}

fn random_start(a: &Hypernetwork, b: &Hypernetwork, rng: &mut ChaCha8Rng) -> MapQuadruple {
    let phi = (0..a.n_nodes()).map(|_| rng.gen_range(0..b.n_nodes())).collect();
    let psi = (0..a.n_edges()).map(|_| rng.gen_range(0..b.n_edges())).collect();
    let phi_back = (0..b.n_nodes()).map(|_| rng.gen_range(0..a.n_nodes())).collect();
    let psi_back = (0..b.n_edges()).map(|_| rng.gen_range(0..a.n_edges())).collect();
    MapQuadruple::new(
        phi,
        psi,
        phi_back,
        psi_back,
        (a.n_nodes(), b.n_nodes()),
        (a.n_edges(), b.n_edges()),
    )
    .expect("random maps are total")
}

fn argmin<F: Fn(usize) -> f64>(n: usize, f: F) -> usize {
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..n {
        let v = f(i);
        if v < best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

/// One round of coordinate descent; each block update is optimal given the
/// other maps, so the objective (max of the four terms) never increases.
fn alternate(a: &Hypernetwork, b: &Hypernetwork, mut q: MapQuadruple) -> (f64, MapQuadruple) {
    let mut current = functional_distortions(a, b, &q).expect("valid quadruple").max();
    for _ in 0..64 {
        let psi: Vec<usize> = (0..a.n_edges())
            .map(|y| {
                argmin(b.n_edges(), |y2| {
                    let t1 = (0..a.n_nodes())
                        .map(|x| (a.weight(x, y) - b.weight(q.phi()[x], y2)).abs())
                        .fold(0.0, f64::max);
                    let t4 = (0..b.n_nodes())
                        .map(|x2| (a.weight(q.phi_back()[x2], y) - b.weight(x2, y2)).abs())
                        .fold(0.0, f64::max);
                    t1.max(t4)
                })
            })
            .collect();
        let psi_back: Vec<usize> = (0..b.n_edges())
            .map(|y2| {
                argmin(a.n_edges(), |y| {
                    let t2 = (0..b.n_nodes())
                        .map(|x2| (a.weight(q.phi_back()[x2], y) - b.weight(x2, y2)).abs())
                        .fold(0.0, f64::max);
                    let t3 = (0..a.n_nodes())
                        .map(|x| (a.weight(x, y) - b.weight(q.phi()[x], y2)).abs())
                        .fold(0.0, f64::max);
                    t2.max(t3)
                })
            })
            .collect();
        q = MapQuadruple::new(
            q.phi().to_vec(),
            psi,
            q.phi_back().to_vec(),
            psi_back,
            (a.n_nodes(), b.n_nodes()),
            (a.n_edges(), b.n_edges()),
        )
        .expect("valid");
        let phi: Vec<usize> = (0..a.n_nodes())
            .map(|x| {
                argmin(b.n_nodes(), |x2| {
                    let t1 = (0..a.n_edges())
                        .map(|y| (a.weight(x, y) - b.weight(x2, q.psi()[y])).abs())
                        .fold(0.0, f64::max);
                    let t3 = (0..b.n_edges())
                        .map(|y2| (a.weight(x, q.psi_back()[y2]) - b.weight(x2, y2)).abs())
                        .fold(0.0, f64::max);
                    t1.max(t3)
                })
            })
            .collect();
        let phi_back: Vec<usize> = (0..b.n_nodes())
            .map(|x2| {
                argmin(a.n_nodes(), |x| {
                    let t2 = (0..b.n_edges())
                        .map(|y2| (a.weight(x, q.psi_back()[y2]) - b.weight(x2, y2)).abs())
                        .fold(0.0, f64::max);
                    let t4 = (0..a.n_edges())
                        .map(|y| (a.weight(x, y) - b.weight(x2, q.psi()[y])).abs())
                        .fold(0.0, f64::max);
                    t2.max(t4)
                })
            })
            .collect();
        q = MapQuadruple::new(
            phi,
            q.psi().to_vec(),
            phi_back,
            q.psi_back().to_vec(),
            (a.n_nodes(), b.n_nodes()),
            (a.n_edges(), b.n_edges()),
        )
        .expect("valid");
        let next = functional_distortions(a, b, &q).expect("valid quadruple").max();
        if next >= current {
            current = current.min(next);
            break;
        }
        current = next;
    }
    (current, q)
}

/// The common-alignment view of an optimal correspondence pair: both returned
/// hypernetworks live on the paired axes (`S`, `T`) and satisfy
/// `d = ½ · max |ω̄ − ω̄′|` entrywise, where `d` is the exact distance.
pub fn align(
    a: &Hypernetwork,
    b: &Hypernetwork,
    cfg: &SearchConfig,
) -> Result<(Hypernetwork, Hypernetwork), MetricsError> {
    let result = exact_dh_with(a, b, cfg)?;
    let Witness::HyperMaps(q) = &result.witness else {
        unreachable!("exact_dh always returns hyper maps");
    };
    let cp = q.to_correspondences();
    let node_ids: Vec<String> =
        cp.s().iter().map(|&(x, x2)| format!("{}|{}", a.nodes()[x], b.nodes()[x2])).collect();
    let edge_ids: Vec<String> =
        cp.t().iter().map(|&(y, y2)| format!("{}|{}", a.edges()[y], b.edges()[y2])).collect();
    let left = Matrix::build(cp.s().len(), cp.t().len(), |i, j| a.weight(cp.s()[i].0, cp.t()[j].0));
    let right =
        Matrix::build(cp.s().len(), cp.t().len(), |i, j| b.weight(cp.s()[i].1, cp.t()[j].1));
    let left = Hypernetwork::new(node_ids.clone(), edge_ids.clone(), left)?;
    let right = Hypernetwork::new(node_ids, edge_ids, right)?;
    Ok((left, right))
}
