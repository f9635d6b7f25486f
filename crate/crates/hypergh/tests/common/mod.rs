//! Shared fixtures and independent brute-force oracles for the integration
//! suites. Everything here favors obviousness over speed: exhaustive
//! enumeration over bitmasks, no pruning, no shared code with the library's
//! solvers.
#![allow(dead_code)]

use hypergh::dowker::Axis;
use hypergh::graphify::LabeledBipartiteNetwork;
use hypergh::matrix::Matrix;
use hypergh::model::{Hypernetwork, Network};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Reference pair used throughout the worked examples.
// ---------------------------------------------------------------------------

/// The 5-node, 4-hyperedge reference hypernetwork.
pub fn fig_h() -> Hypernetwork {
    let omega = Matrix::from_rows(&[
        vec![0.2, 0.4, 0.0, 0.0],
        vec![0.6, 0.0, 0.2, 0.0],
        vec![0.0, 0.0, 0.8, 0.0],
        vec![0.0, 0.2, 0.6, 0.4],
        vec![0.0, 0.6, 0.0, 0.4],
    ]);
    let nodes = ["1", "2", "3", "4", "5"].map(String::from).to_vec();
    let edges = ["A", "B", "C", "D"].map(String::from).to_vec();
    Hypernetwork::new(nodes, edges, omega).unwrap()
}

/// The 5-node, 3-hyperedge counterpart.
pub fn fig_h_prime() -> Hypernetwork {
    let omega = Matrix::from_rows(&[
        vec![0.7, 0.0, 0.0],
        vec![0.5, 0.3, 0.0],
        vec![0.0, 0.7, 0.0],
        vec![0.0, 0.1, 0.7],
        vec![0.3, 0.0, 0.5],
    ]);
    let nodes = ["1'", "2'", "3'", "4'", "5'"].map(String::from).to_vec();
    let edges = ["A'", "B'", "C'"].map(String::from).to_vec();
    Hypernetwork::new(nodes, edges, omega).unwrap()
}

/// Single node, single all-ones hyperedge.
pub fn necessity_small() -> Hypernetwork {
    Hypernetwork::from_weights(Matrix::from_rows(&[vec![1.0]])).unwrap()
}

/// Two nodes on one all-ones hyperedge: weakly but not strongly isomorphic to
/// [`necessity_small`].
pub fn necessity_large() -> Hypernetwork {
    Hypernetwork::from_weights(Matrix::from_rows(&[vec![1.0], vec![1.0]])).unwrap()
}

/// The identity/transposition pair: distance ½ as networks, 0 as
/// hypernetworks.
pub fn swap_pair() -> (Network, Network) {
    let a = Network::from_weights(Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]])).unwrap();
    let b = Network::from_weights(Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])).unwrap();
    (a, b)
}

// ---------------------------------------------------------------------------
// Random instances.
// ---------------------------------------------------------------------------

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random hypernetwork with axis sizes in `1..=max_nodes` × `1..=max_edges`
/// and weights drawn from `{0, quantum, 2·quantum, …, levels·quantum}`.
pub fn random_hyper(
    rng: &mut ChaCha8Rng,
    max_nodes: usize,
    max_edges: usize,
    levels: u32,
    quantum: f64,
) -> Hypernetwork {
    let n = rng.gen_range(1..=max_nodes);
    let m = rng.gen_range(1..=max_edges);
    let omega = Matrix::build(n, m, |_, _| f64::from(rng.gen_range(0..=levels)) * quantum);
    Hypernetwork::from_weights(omega).unwrap()
}

pub fn random_network(
    rng: &mut ChaCha8Rng,
    max_nodes: usize,
    levels: u32,
    quantum: f64,
) -> Network {
    let n = rng.gen_range(1..=max_nodes);
    let omega = Matrix::build(n, n, |_, _| f64::from(rng.gen_range(0..=levels)) * quantum);
    Network::from_weights(omega).unwrap()
}

// ---------------------------------------------------------------------------
// Exhaustive correspondence enumeration.
// ---------------------------------------------------------------------------

/// Every relation `⊆ (0..n) × (0..m)` that covers both factors, as explicit
/// pair lists. Bitmask enumeration: bit `i·m + j` is the pair `(i, j)`.
pub fn covering_relations(n: usize, m: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(n * m <= 16, "oracle relation space too large");
    let mut out = Vec::new();
    'mask: for mask in 1u32..(1 << (n * m)) {
        let mut row_hit = vec![false; n];
        let mut col_hit = vec![false; m];
        let mut pairs = Vec::new();
        for bit in 0..(n * m) {
            if mask >> bit & 1 == 1 {
                let (i, j) = (bit / m, bit % m);
                row_hit[i] = true;
                col_hit[j] = true;
                pairs.push((i, j));
            }
        }
        if row_hit.iter().any(|h| !h) || col_hit.iter().any(|h| !h) {
            continue 'mask;
        }
        out.push(pairs);
    }
    out
}

/// Reference hypernetwork distance: ½ · min over all covering pairs `(S, T)`
/// of `max |ω(x, y) − ω′(x′, y′)|`.
pub fn oracle_dh(a: &Hypernetwork, b: &Hypernetwork) -> f64 {
    let ss = covering_relations(a.n_nodes(), b.n_nodes());
    let ts = covering_relations(a.n_edges(), b.n_edges());
    let mut best = f64::INFINITY;
    for s in &ss {
        // Worst gap over S for every edge pair, then min-max over T.
        let mut g = vec![0.0f64; a.n_edges() * b.n_edges()];
        for &(x, x2) in s {
            for y in 0..a.n_edges() {
                for y2 in 0..b.n_edges() {
                    let v = (a.weight(x, y) - b.weight(x2, y2)).abs();
                    let cell = &mut g[y * b.n_edges() + y2];
                    if v > *cell {
                        *cell = v;
                    }
                }
            }
        }
        for t in &ts {
            let mut dis = 0.0f64;
            for &(y, y2) in t {
                let v = g[y * b.n_edges() + y2];
                if v > dis {
                    dis = v;
                }
            }
            if dis < best {
                best = dis;
            }
        }
    }
    best / 2.0
}

/// Reference network distance: ½ · min over covering relations `R` of
/// `max |ω(x, z) − ω′(x′, z′)|` over pairs of members.
pub fn oracle_dn(a: &Network, b: &Network) -> f64 {
    let mut best = f64::INFINITY;
    for r in covering_relations(a.n_nodes(), b.n_nodes()) {
        let mut dis = 0.0f64;
        for &(x, x2) in &r {
            for &(z, z2) in &r {
                let v = (a.weight(x, z) - b.weight(x2, z2)).abs();
                if v > dis {
                    dis = v;
                }
            }
        }
        if dis < best {
            best = dis;
        }
    }
    best / 2.0
}

/// Reference local distortion: min over covering edge relations of the worst
/// gap between the two rows.
pub fn oracle_local_distortion(a: &Hypernetwork, b: &Hypernetwork, x: usize, x2: usize) -> f64 {
    covering_relations(a.n_edges(), b.n_edges())
        .iter()
        .map(|t| {
            t.iter()
                .map(|&(y, y2)| (a.weight(x, y) - b.weight(x2, y2)).abs())
                .fold(0.0f64, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Reference labeled bipartite distance: ½ · min over label-respecting
/// covering relations (left↔left and right↔right pairs only) of the worst
/// square-kernel gap.
pub fn oracle_labeled(a: &LabeledBipartiteNetwork, b: &LabeledBipartiteNetwork) -> f64 {
    let (l1, r1) = (a.left().len(), a.right().len());
    let (l2, r2) = (b.left().len(), b.right().len());
    let ss = covering_relations(l1, l2);
    let ts = covering_relations(r1, r2);
    let mut best = f64::INFINITY;
    for s in &ss {
        for t in &ts {
            let verts: Vec<(usize, usize)> =
                s.iter().copied().chain(t.iter().map(|&(j, j2)| (l1 + j, l2 + j2))).collect();
            let mut dis = 0.0f64;
            for &(v, v2) in &verts {
                for &(w, w2) in &verts {
                    let d = (a.omega().get(v, w) - b.omega().get(v2, w2)).abs();
                    if d > dis {
                        dis = d;
                    }
                }
            }
            if dis < best {
                best = dis;
            }
        }
    }
    best / 2.0
}

// ---------------------------------------------------------------------------
// Degree-0 persistence by a union-find sweep.
// ---------------------------------------------------------------------------

/// Degree-0 bars of the Dowker filtration by sweeping thresholds downward
/// with a union-find, applying the elder rule at merges. Zero-length bars are
/// kept; essential deaths are `−∞`. Sorted `(birth desc, death desc)`.
pub fn oracle_ph0(h: &Hypernetwork, axis: Axis) -> Vec<(f64, f64)> {
    let h = match axis {
        Axis::Node => h.clone(),
        Axis::Edge => h.transposed(),
    };
    let n = h.n_nodes();
    let vertex_birth: Vec<f64> = (0..n)
        .map(|x| (0..h.n_edges()).map(|y| h.weight(x, y)).fold(f64::NEG_INFINITY, f64::max))
        .collect();

    // Events: (threshold, dim, lex key) in filtration order.
    enum Ev {
        Vertex(usize),
        Edge(usize, usize),
    }
    let mut events: Vec<(f64, usize, Vec<usize>, Ev)> =
        (0..n).map(|v| (vertex_birth[v], 0, vec![v], Ev::Vertex(v))).collect();
    for u in 0..n {
        for v in (u + 1)..n {
            let thr = (0..h.n_edges())
                .map(|y| h.weight(u, y).min(h.weight(v, y)))
                .fold(f64::NEG_INFINITY, f64::max);
            events.push((thr, 1, vec![u, v], Ev::Edge(u, v)));
        }
    }
    events.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut birth = vec![f64::NAN; n];
    let mut bars: Vec<(f64, f64)> = Vec::new();
    for (thr, _, _, ev) in events {
        match ev {
            Ev::Vertex(v) => birth[v] = thr,
            Ev::Edge(u, v) => {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    // Elder rule: the earlier-born (larger δ) component lives on.
                    let (elder, younger) = if birth[ru] >= birth[rv] { (ru, rv) } else { (rv, ru) };
                    bars.push((birth[younger], thr));
                    parent[younger] = elder;
                }
            }
        }
    }
    for (v, &b) in birth.iter().enumerate() {
        if find(&mut parent, v) == v {
            bars.push((b, f64::NEG_INFINITY));
        }
    }
    bars.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
    bars
}

// ---------------------------------------------------------------------------
// Convexity grid oracle.
// ---------------------------------------------------------------------------

/// Whether some node realizes the `s`-interpolated difference profile of
/// `(x0, x1)` at base hyperedge `edge`, within `tol`, by direct evaluation.
pub fn profile_feasible(
    h: &Hypernetwork,
    x0: usize,
    x1: usize,
    edge: usize,
    s: f64,
    tol: f64,
) -> bool {
    (0..h.n_nodes()).any(|cand| {
        (0..h.n_edges()).all(|y| {
            let d0 = h.weight(x0, edge) - h.weight(x0, y);
            let d1 = h.weight(x1, edge) - h.weight(x1, y);
            let target = (1.0 - s) * d0 + s * d1;
            ((h.weight(cand, edge) - h.weight(cand, y)) - target).abs() <= tol
        })
    })
}

/// First `(x0, x1, edge, s)` on the `steps`-point grid where no node realizes
/// the interpolated profile, or `None`.
pub fn grid_counterexample(
    h: &Hypernetwork,
    tol: f64,
    steps: usize,
) -> Option<(usize, usize, usize, f64)> {
    for x0 in 0..h.n_nodes() {
        for x1 in 0..h.n_nodes() {
            for edge in 0..h.n_edges() {
                for k in 0..=steps {
                    let s = k as f64 / steps as f64;
                    if !profile_feasible(h, x0, x1, edge, s, tol) {
                        return Some((x0, x1, edge, s));
                    }
                }
            }
        }
    }
    None
}
