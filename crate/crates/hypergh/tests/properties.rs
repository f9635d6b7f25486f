//! Structural properties beyond the acceptance gate: invariance under
//! reduction and duplication, estimator consistency, serialization
//! round-trips, and metric axioms of the derived comparisons.

mod common;

use common::*;
use hypergh::dowker::{bottleneck, dowker_bound, dowker_filtration, persistence, Axis, Barcode};
use hypergh::graphify::{bipartite, dendrogram, edge_affinity, node_affinity, unbipartite};
use hypergh::invariants::{lower_bounds, summary};
use hypergh::matrix::Matrix;
use hypergh::metrics::{
    align, decide_dh_leq, exact_dh, exact_dn, functional_distortions, upper_bound_dh, SearchConfig,
    Witness,
};
use hypergh::model::Hypernetwork;
use hypergh::transport::{hausdorff_hyper, hausdorff_network, nncc_check};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

const TOL: f64 = 1e-12;

#[test]
fn reduction_is_weakly_isomorphic_to_the_input() {
    let mut r = rng(0x9ed);
    let cfg = SearchConfig::default();
    for _ in 0..200 {
        // Coarse values make duplicate rows and columns likely.
        let h = random_hyper(&mut r, 4, 3, 2, 0.5);
        let reduced = h.reduce();
        assert!(reduced.n_nodes() <= h.n_nodes());
        assert!(reduced.n_edges() <= h.n_edges());
        assert!(
            decide_dh_leq(&h, &reduced, 0.0, &cfg).unwrap().is_some(),
            "reduction changed the weak isomorphism class of {:?}",
            h.omega()
        );
    }
}

/// Duplicates each node and hyperedge with a random multiplicity and shuffles
/// the result; the outcome is weakly isomorphic to the input.
fn duplicate(h: &Hypernetwork, r: &mut impl Rng) -> Hypernetwork {
    let mut rows: Vec<usize> = Vec::new();
    for i in 0..h.n_nodes() {
        for _ in 0..r.gen_range(1..=2) {
            rows.push(i);
        }
    }
    let mut cols: Vec<usize> = Vec::new();
    for j in 0..h.n_edges() {
        for _ in 0..r.gen_range(1..=2) {
            cols.push(j);
        }
    }
    rows.shuffle(r);
    cols.shuffle(r);
    Hypernetwork::from_weights(Matrix::build(rows.len(), cols.len(), |i, j| {
        h.weight(rows[i], cols[j])
    }))
    .unwrap()
}

#[test]
fn duplication_leaves_every_comparison_at_zero() {
    let mut r = rng(0xd0b1e);
    for _ in 0..100 {
        let a = random_hyper(&mut r, 3, 2, 8, 0.125);
        let b = duplicate(&a, &mut r);
        assert_eq!(exact_dh(&a, &b).unwrap().value, 0.0);

        let bounds = lower_bounds(&a, &b);
        assert_eq!(bounds.best, 0.0, "invariant bounds must vanish on a weak-iso pair");
        assert_eq!(dowker_bound(&a, &b, 1), 0.0);

        let (sa, sb) = (summary(&a), summary(&b));
        assert_eq!(sa.capacity, sb.capacity);
        assert_eq!(sa.node_radius, sb.node_radius);
        assert_eq!(sa.edge_radius, sb.edge_radius);
        assert_eq!(sa.spectrum, sb.spectrum);
    }
}

#[test]
fn upper_bound_dominates_and_its_witness_realizes_it() {
    let mut r = rng(0xab0de);
    for case in 0..200 {
        let a = random_hyper(&mut r, 3, 3, 8, 0.125);
        let b = random_hyper(&mut r, 3, 3, 8, 0.125);
        let exact = exact_dh(&a, &b).unwrap().value;
        let upper = upper_bound_dh(&a, &b, 4, case as u64);
        assert!(!upper.exact);
        assert!(upper.value >= exact - TOL, "estimate {} below exact {exact}", upper.value);
        let Witness::HyperMaps(q) = &upper.witness else {
            panic!("hypernetwork estimate must carry a map quadruple")
        };
        let realized = functional_distortions(&a, &b, q).unwrap().max();
        assert!(
            (realized - 2.0 * upper.value).abs() <= TOL,
            "witness distortion {realized} does not realize estimate {}",
            upper.value
        );
    }
}

#[test]
fn alignment_realizes_the_distance_on_a_common_shape() {
    let mut r = rng(0xa116);
    let cfg = SearchConfig::default();
    for _ in 0..100 {
        let a = random_hyper(&mut r, 3, 3, 8, 0.125);
        let b = random_hyper(&mut r, 3, 3, 8, 0.125);
        let value = exact_dh(&a, &b).unwrap().value;
        let (la, lb) = align(&a, &b, &cfg).unwrap();
        assert_eq!(la.n_nodes(), lb.n_nodes());
        assert_eq!(la.n_edges(), lb.n_edges());
        assert_eq!(la.nodes(), lb.nodes());
        assert_eq!(la.edges(), lb.edges());
        let gap = la
            .omega()
            .values()
            .zip(lb.omega().values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        assert!((gap - 2.0 * value).abs() <= TOL, "aligned gap {gap} vs distance {value}");
    }
}

#[test]
fn convexity_verdict_is_monotone_in_the_tolerance() {
    let mut r = rng(0xc0171);
    for _ in 0..100 {
        let h = random_hyper(&mut r, 3, 3, 8, 0.125);
        let tight = nncc_check(&h, 0.05).unwrap();
        let loose = nncc_check(&h, 0.25).unwrap();
        if tight.holds() {
            assert!(loose.holds(), "verdict flipped on a larger tolerance");
        }
    }
}

/// Best achievable min-|ω| over vertex-simple alternating chains between two
/// nodes, by exhaustive depth-first enumeration; the diagonal is the best
/// single-pair chain.
fn chain_oracle(h: &Hypernetwork) -> Matrix {
    let (n, m) = (h.n_nodes(), h.n_edges());
    let mut best = Matrix::build(n, n, |_, _| f64::NEG_INFINITY);

    fn visit(
        h: &Hypernetwork,
        start: usize,
        at_node: usize,
        floor: f64,
        used_nodes: &mut Vec<bool>,
        used_edges: &mut Vec<bool>,
        best: &mut Matrix,
    ) {
        // The root call arrives with floor = ∞ before any pair is traversed;
        // only finite floors correspond to actual chains.
        if floor.is_finite() && floor > best.get(start, at_node) {
            best.set(start, at_node, floor);
        }
        for y in 0..h.n_edges() {
            if used_edges[y] {
                continue;
            }
            let through = floor.min(h.weight(at_node, y).abs());
            used_edges[y] = true;
            // Staying on the same node never helps, so hop to a fresh node.
            for x in 0..h.n_nodes() {
                if used_nodes[x] {
                    continue;
                }
                let reached = through.min(h.weight(x, y).abs());
                used_nodes[x] = true;
                visit(h, start, x, reached, used_nodes, used_edges, best);
                used_nodes[x] = false;
            }
            used_edges[y] = false;
        }
    }

    for start in 0..n {
        // The shortest chain from a node to itself is a single pair.
        let diag = (0..m).map(|y| h.weight(start, y).abs()).fold(f64::NEG_INFINITY, f64::max);
        best.set(start, start, diag);
        let mut used_nodes = vec![false; n];
        let mut used_edges = vec![false; m];
        used_nodes[start] = true;
        visit(h, start, start, f64::INFINITY, &mut used_nodes, &mut used_edges, &mut best);
    }
    best
}

#[test]
fn affinity_equals_exhaustive_chain_enumeration() {
    let check = |h: &Hypernetwork| {
        let want = chain_oracle(h);
        let aff = node_affinity(h);
        for i in 0..h.n_nodes() {
            for j in 0..h.n_nodes() {
                assert!(
                    (aff.weight(i, j) - want.get(i, j)).abs() <= TOL,
                    "affinity ({i},{j}): {} vs chains {}",
                    aff.weight(i, j),
                    want.get(i, j)
                );
            }
        }
        // The edge variant is the node variant of the transpose.
        let te = edge_affinity(h);
        let tw = chain_oracle(&h.transposed());
        for i in 0..h.n_edges() {
            for j in 0..h.n_edges() {
                assert!((te.weight(i, j) - tw.get(i, j)).abs() <= TOL);
            }
        }
    };

    check(&fig_h());
    check(&fig_h_prime());
    let mut r = rng(0xcba1);
    for _ in 0..100 {
        check(&random_hyper(&mut r, 4, 3, 8, 0.125));
    }
}

#[test]
fn dendrogram_merge_heights_reproduce_the_affinity() {
    let mut r = rng(0xdeed);
    for _ in 0..100 {
        let h = random_hyper(&mut r, 5, 4, 8, 0.125);
        let aff = node_affinity(&h);
        let d = dendrogram(&aff);
        let n = aff.n_nodes();
        assert_eq!(d.leaves.len(), n);
        assert_eq!(d.merges.len(), n.saturating_sub(1), "affinity trees are binary and total");
        // Heights never increase along the merge sequence.
        for w in d.merges.windows(2) {
            assert!(w[0].height >= w[1].height);
        }
        // Leaves appear at their diagonal entries.
        for (i, &lh) in d.leaf_heights.iter().enumerate() {
            assert_eq!(lh, aff.weight(i, i));
        }
        // Replaying the merges connects each pair exactly at its affinity.
        let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        for e in &d.merges {
            let (ca, cb) = (members[e.a].clone(), members[e.b].clone());
            for &i in &ca {
                for &j in &cb {
                    assert!(
                        (aff.weight(i, j) - e.height).abs() <= TOL,
                        "nodes {i},{j} joined at {} but affinity is {}",
                        e.height,
                        aff.weight(i, j)
                    );
                }
            }
            let mut merged = ca;
            merged.extend(cb);
            members.push(merged);
        }
    }
}

#[test]
fn bottleneck_satisfies_metric_axioms() {
    let mut r = rng(0xb077);
    let codes: Vec<Barcode> = (0..30)
        .map(|_| {
            let h = random_hyper(&mut r, 4, 3, 4, 0.25);
            persistence(&dowker_filtration(&h, Axis::Node, 2), 1)
        })
        .collect();
    for a in &codes {
        for k in 0..=1 {
            assert_eq!(bottleneck(a, a, k), 0.0);
        }
    }
    for a in &codes {
        for b in &codes {
            for k in 0..=1 {
                assert_eq!(bottleneck(a, b, k), bottleneck(b, a, k));
            }
            for c in &codes {
                for k in 0..=1 {
                    let (ab, bc, ac) =
                        (bottleneck(a, b, k), bottleneck(b, c, k), bottleneck(a, c, k));
                    assert!(ac <= ab + bc + TOL, "triangle: {ac} > {ab} + {bc} in degree {k}");
                }
            }
        }
    }
}

#[test]
fn bipartite_round_trip_is_the_identity() {
    let mut r = rng(0xb1b2);
    for _ in 0..100 {
        let h = random_hyper(&mut r, 4, 3, 8, 0.125);
        let back = unbipartite(&bipartite(&h)).unwrap();
        assert_eq!(back, h);
    }
}

#[test]
fn subset_maps_are_one_lipschitz_end_to_end() {
    let mut r = rng(0x5e75);
    // Hypernetworks: 2×2 inputs give 3×3 powerset kernels, still exactly solvable.
    for _ in 0..100 {
        let ma = Matrix::build(2, 2, |_, _| f64::from(r.gen_range(0..=8i32)) * 0.125);
        let mb = Matrix::build(2, 2, |_, _| f64::from(r.gen_range(0..=8i32)) * 0.125);
        let a = Hypernetwork::from_weights(ma).unwrap();
        let b = Hypernetwork::from_weights(mb).unwrap();
        let d_in = exact_dh(&a, &b).unwrap().value;
        let d_out = exact_dh(&hausdorff_hyper(&a, 4).unwrap(), &hausdorff_hyper(&b, 4).unwrap())
            .unwrap()
            .value;
        assert!(d_out <= d_in + TOL, "powerset images drifted apart: {d_out} > {d_in}");
    }
    // Networks via the square subset kernel.
    for _ in 0..100 {
        let a = random_network(&mut r, 2, 8, 0.125);
        let b = random_network(&mut r, 2, 8, 0.125);
        let d_in = exact_dn(&a, &b).unwrap().value;
        let d_out =
            exact_dn(&hausdorff_network(&a, 4).unwrap(), &hausdorff_network(&b, 4).unwrap())
                .unwrap()
                .value;
        assert!(d_out <= d_in + TOL);
    }
}

#[test]
fn network_distance_is_a_pseudometric_too() {
    let mut r = rng(0x4e7);
    for _ in 0..200 {
        let a = random_network(&mut r, 3, 8, 0.125);
        let b = random_network(&mut r, 3, 8, 0.125);
        let c = random_network(&mut r, 3, 8, 0.125);
        let (ab, ba) = (exact_dn(&a, &b).unwrap().value, exact_dn(&b, &a).unwrap().value);
        assert!((ab - ba).abs() <= TOL);
        let (ac, bc) = (exact_dn(&a, &c).unwrap().value, exact_dn(&b, &c).unwrap().value);
        assert!(ac <= ab + bc + TOL);
        assert_eq!(exact_dn(&a, &a).unwrap().value, 0.0);
    }
}

// ---------------------------------------------------------------------------
// Generative checks.
// ---------------------------------------------------------------------------

fn arb_hyper(max: usize) -> impl Strategy<Value = Hypernetwork> {
    (1..=max, 1..=max).prop_flat_map(|(n, m)| {
        proptest::collection::vec(-8i32..=8, n * m).prop_map(move |cells| {
            let omega = Matrix::build(n, m, |i, j| f64::from(cells[i * m + j]) * 0.125);
            Hypernetwork::from_weights(omega).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_lossless(h in arb_hyper(5)) {
        let text = serde_json::to_string(&h).unwrap();
        let back: Hypernetwork = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn self_distance_is_zero(h in arb_hyper(3)) {
        prop_assert_eq!(exact_dh(&h, &h).unwrap().value, 0.0);
    }

    #[test]
    fn summary_is_internally_consistent(h in arb_hyper(5)) {
        let s = summary(&h);
        prop_assert!(s.spectrum.windows(2).all(|w| w[0] < w[1]), "spectrum sorted strictly");
        prop_assert!(s.spectrum.contains(&s.capacity));
        let node_max = s.node_capacity.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let edge_max = s.edge_capacity.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(s.capacity, node_max);
        prop_assert_eq!(s.capacity, edge_max);
        let node_min = s.node_capacity.iter().copied().fold(f64::INFINITY, f64::min);
        let edge_min = s.edge_capacity.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert_eq!(s.node_radius, node_min);
        prop_assert_eq!(s.edge_radius, edge_min);
    }

    #[test]
    fn transposing_swaps_the_axes(h in arb_hyper(4)) {
        let t = h.transposed();
        let (s, st) = (summary(&h), summary(&t));
        prop_assert_eq!(s.capacity, st.capacity);
        prop_assert_eq!(s.spectrum, st.spectrum);
        prop_assert_eq!(s.node_capacity, st.edge_capacity);
        prop_assert_eq!(s.node_radius, st.edge_radius);
    }
}
