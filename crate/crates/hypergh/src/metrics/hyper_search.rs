//! Exact decision search for the hypernetwork distance.
//!
//! For a threshold `t`, a quadruple with all four (co)distortions ≤ `t`
//! exists iff some assignment of the node maps `(φ, φ′)` leaves, for every
//! edge `y`, a candidate `y′` with
//! `∀x |ω(x, y) − ω′(φ(x), y′)| ≤ t` and `∀x′ |ω(φ′(x′), y) − ω′(x′, y′)| ≤ t`
//! (and symmetrically for every `y′`). Edge feasibility therefore decomposes
//! pointwise, and the search only enumerates `(φ, φ′)` — depth-first, with
//! incremental pruning as soon as some edge loses its last candidate.
//!
//! The search is deterministic: assignments are tried in increasing index
//! order and the first full assignment found is returned, so the witness is
//! the lexicographically smallest feasible `(φ, φ′)` with the smallest
//! pointwise `(ψ, ψ′)`. Top-level branches (choices of `φ(x₀)`) are searched
//! in parallel with an order-preserving reduction, which keeps the result
//! identical to the sequential search.

use crate::exec;
use crate::model::Hypernetwork;

pub(crate) struct RawQuad {
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
    pub phi_back: Vec<usize>,
    pub psi_back: Vec<usize>,
}

/// Pairs `(y, y′)` are packed as `y * ny2 + y2`.
///
/// Assigning `φ(x) = x2` and assigning `φ′(x2) = x` rule out exactly the same
/// edge pairs — both impose `|ω(x, y) − ω′(x2, y′)| ≤ t` — so a single table
/// indexed by `(x, x2)` serves both directions.
struct Ctx {
    nx: usize,
    nx2: usize,
    ny: usize,
    ny2: usize,
    /// `kill[x * nx2 + x2]`: edge pairs ruled out by pairing node `x` with `x2`.
    kill: Vec<Vec<u32>>,
}

#[derive(Clone)]
struct State {
    kill: Vec<u32>,
    row_zero: Vec<u32>,
    col_zero: Vec<u32>,
    /// Number of rows/columns with no surviving candidate; 0 means feasible so far.
    dead: u32,
}

impl State {
    fn fresh(ny: usize, ny2: usize) -> State {
        State {
            kill: vec![0; ny * ny2],
            row_zero: vec![ny2 as u32; ny],
            col_zero: vec![ny as u32; ny2],
            dead: 0,
        }
    }

    fn apply(&mut self, codes: &[u32], ny2: usize) {
        for &code in codes {
            let c = code as usize;
            self.kill[c] += 1;
            if self.kill[c] == 1 {
                let (row, col) = (c / ny2, c % ny2);
                self.row_zero[row] -= 1;
                if self.row_zero[row] == 0 {
                    self.dead += 1;
                }
                self.col_zero[col] -= 1;
                if self.col_zero[col] == 0 {
                    self.dead += 1;
                }
            }
        }
    }

    fn undo(&mut self, codes: &[u32], ny2: usize) {
        for &code in codes {
            let c = code as usize;
            if self.kill[c] == 1 {
                let (row, col) = (c / ny2, c % ny2);
                if self.row_zero[row] == 0 {
                    self.dead -= 1;
                }
                self.row_zero[row] += 1;
                if self.col_zero[col] == 0 {
                    self.dead -= 1;
                }
                self.col_zero[col] += 1;
            }
            self.kill[c] -= 1;
        }
    }

    fn alive(&self) -> bool {
        self.dead == 0
    }
}

fn build_ctx(a: &Hypernetwork, b: &Hypernetwork, t: f64) -> Ctx {
    let (nx, ny) = (a.n_nodes(), a.n_edges());
    let (nx2, ny2) = (b.n_nodes(), b.n_edges());
    let mut kill = Vec::with_capacity(nx * nx2);
    for x in 0..nx {
        for x2 in 0..nx2 {
            let mut codes = Vec::new();
            for y in 0..ny {
                let w = a.weight(x, y);
                for y2 in 0..ny2 {
                    if (w - b.weight(x2, y2)).abs() > t {
                        codes.push((y * ny2 + y2) as u32);
                    }
                }
            }
            kill.push(codes);
        }
    }
    Ctx { nx, nx2, ny, ny2, kill }
}

impl Ctx {
    /// Positions `0..nx` assign `φ`, positions `nx..nx+nx2` assign `φ′`.
    fn codes_at(&self, pos: usize, cand: usize) -> &[u32] {
        if pos < self.nx {
            &self.kill[pos * self.nx2 + cand]
        } else {
            &self.kill[cand * self.nx2 + (pos - self.nx)]
        }
    }

    fn domain_at(&self, pos: usize) -> usize {
        if pos < self.nx {
            self.nx2
        } else {
            self.nx
        }
    }

    fn dfs(&self, pos: usize, state: &mut State, assign: &mut Vec<usize>) -> Option<RawQuad> {
        if pos == self.nx + self.nx2 {
            return Some(self.extract(state, assign));
        }
        for cand in 0..self.domain_at(pos) {
            let codes = self.codes_at(pos, cand);
            state.apply(codes, self.ny2);
            if state.alive() {
                assign.push(cand);
                if let Some(found) = self.dfs(pos + 1, state, assign) {
                    return Some(found);
                }
                assign.pop();
            }
            state.undo(codes, self.ny2);
        }
        None
    }

    fn extract(&self, state: &State, assign: &[usize]) -> RawQuad {
        let phi = assign[..self.nx].to_vec();
        let phi_back = assign[self.nx..].to_vec();
        let psi = (0..self.ny)
            .map(|y| {
                (0..self.ny2)
                    .find(|&y2| state.kill[y * self.ny2 + y2] == 0)
                    .expect("feasible state has a candidate per edge")
            })
            .collect();
        let psi_back = (0..self.ny2)
            .map(|y2| {
                (0..self.ny)
                    .find(|&y| state.kill[y * self.ny2 + y2] == 0)
                    .expect("feasible state has a candidate per co-edge")
            })
            .collect();
        RawQuad { phi, psi, phi_back, psi_back }
    }
}

pub(crate) fn decide(a: &Hypernetwork, b: &Hypernetwork, t: f64) -> Option<RawQuad> {
    let ctx = build_ctx(a, b, t);
    exec::find_map_first_idx(ctx.nx2, |first| {
        let mut state = State::fresh(ctx.ny, ctx.ny2);
        let codes = ctx.codes_at(0, first);
        state.apply(codes, ctx.ny2);
        if state.alive() {
            let mut assign = vec![first];
            ctx.dfs(1, &mut state, &mut assign)
        } else {
            None
        }
    })
}
