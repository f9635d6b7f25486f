//! Exact decision search for the network distance.
//!
//! With a single relation over one axis, the map formulation optimizes a pair
//! `(φ : X → X′, φ′ : X′ → X)` against four terms:
//! `dis(φ) = max |ω(x, z) − ω′(φx, φz)|`,
//! `dis(φ′) = max |ω(φ′x′, φ′z′) − ω′(x′, z′)|`, and the two mixed
//! codistortions `max |ω(x, φ′x′) − ω′(φx, x′)|`, `max |ω(φ′x′, x) − ω′(x′, φx)|`.
//! The search assigns `φ` then `φ′` depth-first, checking each new assignment
//! against everything already fixed, so violated prefixes are cut immediately.
//! Deterministic lexicographic order; parallel top-level branches preserve it.

use crate::exec;
use crate::model::Network;

struct Ctx<'a> {
    a: &'a Network,
    b: &'a Network,
    t: f64,
}

impl Ctx<'_> {
    /// Checks every constraint that mentions the new assignment `φ(x_k) = c`
    /// together with already-assigned values of `φ`.
    fn ok_fwd(&self, phi: &[usize], k: usize, c: usize) -> bool {
        for (i, &ci) in phi.iter().enumerate().take(k) {
            if (self.a.weight(i, k) - self.b.weight(ci, c)).abs() > self.t
                || (self.a.weight(k, i) - self.b.weight(c, ci)).abs() > self.t
            {
                return false;
            }
        }
        (self.a.weight(k, k) - self.b.weight(c, c)).abs() <= self.t
    }

    /// Checks constraints for `φ′(x′_k) = c`: against previous `φ′` values
    /// (backward distortion) and against the fully assigned `φ` (codistortions).
    fn ok_bwd(&self, phi: &[usize], phi_back: &[usize], k: usize, c: usize) -> bool {
        for (j, &cj) in phi_back.iter().enumerate().take(k) {
            if (self.a.weight(cj, c) - self.b.weight(j, k)).abs() > self.t
                || (self.a.weight(c, cj) - self.b.weight(k, j)).abs() > self.t
            {
                return false;
            }
        }
        if (self.a.weight(c, c) - self.b.weight(k, k)).abs() > self.t {
            return false;
        }
        for (x, &fx) in phi.iter().enumerate() {
            if (self.a.weight(x, c) - self.b.weight(fx, k)).abs() > self.t
                || (self.a.weight(c, x) - self.b.weight(k, fx)).abs() > self.t
            {
                return false;
            }
        }
        true
    }

    fn dfs_fwd(&self, phi: &mut Vec<usize>) -> Option<(Vec<usize>, Vec<usize>)> {
        let k = phi.len();
        if k == self.a.n_nodes() {
            return self.dfs_bwd(phi, &mut Vec::new());
        }
        for c in 0..self.b.n_nodes() {
            if self.ok_fwd(phi, k, c) {
                phi.push(c);
                if let Some(found) = self.dfs_fwd(phi) {
                    return Some(found);
                }
                phi.pop();
            }
        }
        None
    }

    fn dfs_bwd(
        &self,
        phi: &[usize],
        phi_back: &mut Vec<usize>,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        let k = phi_back.len();
        if k == self.b.n_nodes() {
            return Some((phi.to_vec(), phi_back.clone()));
        }
        for c in 0..self.a.n_nodes() {
            if self.ok_bwd(phi, phi_back, k, c) {
                phi_back.push(c);
                if let Some(found) = self.dfs_bwd(phi, phi_back) {
                    return Some(found);
                }
                phi_back.pop();
            }
        }
        None
    }
}

pub(crate) fn decide(a: &Network, b: &Network, t: f64) -> Option<(Vec<usize>, Vec<usize>)> {
    let ctx = Ctx { a, b, t };
    exec::find_map_first_idx(b.n_nodes(), |first| {
        if !ctx.ok_fwd(&[], 0, first) {
            return None;
        }
        let mut phi = vec![first];
        ctx.dfs_fwd(&mut phi)
    })
}
