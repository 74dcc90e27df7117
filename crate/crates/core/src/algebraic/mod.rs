//! Algebraic Hamiltonicity test over GF(2^64).
//!
//! On the bipartite forced-matching graph, rows are the in-copies and
//! columns the out-copies of the vertices. Summing the determinant of the
//! sieve matrix over all 0/1 assignments of the row variables leaves only
//! the terms of Hamiltonian cycles; every other cycle cover cancels in
//! characteristic 2. The forced edge of vertex 0 carries two distinct
//! variables, one per traversal direction, so a Hamiltonian cycle and its
//! reversal do not cancel each other.

mod field;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use field::{determinant, Gf64};

use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::reductions::BfmInstance;

pub const SIEVE_CAP: usize = 14;

/// Variable assignment for the sieve polynomial of one bipartite instance.
#[derive(Clone, Debug)]
pub struct SieveInstance {
    n: usize,
    /// `(tail, head)` of every digraph arc, i.e. `tail^out - head^in`.
    arcs: Vec<(usize, usize)>,
    /// Per arc.
    pub z_arc: Vec<Gf64>,
    /// Per vertex, for its forced edge; for vertex 0 this is the value used
    /// when the edge is entered from the in-copy.
    pub z_forced: Vec<Gf64>,
    /// Vertex 0's forced edge entered from the out-copy.
    pub z_forced_back: Gf64,
    /// Per arc, `a` on `tail^out - head^in`.
    pub a_arc: Vec<Gf64>,
    /// Per vertex, `a` on `v^out - v^in`.
    pub a_forced: Vec<Gf64>,
}

impl SieveInstance {
    /// Random `z`, all-zero `a`.
    pub fn random<R: rand::Rng + ?Sized>(b: &BfmInstance, rng: &mut R) -> Self {
        let n = b.original_vertex_count();
        let arcs: Vec<(usize, usize)> = b.free_edges().iter().map(|&(o, i, _)| (o, i - n)).collect();
        SieveInstance {
            n,
            z_arc: arcs.iter().map(|_| Gf64::random(rng)).collect(),
            z_forced: (0..n).map(|_| Gf64::random(rng)).collect(),
            z_forced_back: Gf64::random(rng),
            a_arc: vec![Gf64::ZERO; arcs.len()],
            a_forced: vec![Gf64::ZERO; n],
            arcs,
        }
    }

    /// Replaces `a` with fresh random values, keeping `z`.
    pub fn randomize_a<R: rand::Rng + ?Sized>(&mut self, rng: &mut R) {
        self.a_arc.iter_mut().for_each(|a| *a = Gf64::random(rng));
        self.a_forced.iter_mut().for_each(|a| *a = Gf64::random(rng));
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Number of `z` values: one per bipartite edge plus one for the
    /// doubled forced edge.
    pub fn z_count(&self) -> usize {
        self.z_arc.len() + self.z_forced.len() + 1
    }

    /// Row `v` is `v^in`, column `u` is `u^out`.
    ///
    /// Diagonal: `z(v) * sum over arcs (v, w) of z(v, w) * (a(v, w) + x_w)`.
    /// Off-diagonal, for an arc `(u, v)`:
    /// `z(u, v) * z'(u) * (a(u) + x_u)` where `z'(0)` is the backward value.
    pub fn build_matrix(&self, x: &[bool]) -> Result<Vec<Vec<Gf64>>> {
        let n = self.n;
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
        let bit = |v: usize| if x[v] { Gf64::ONE } else { Gf64::ZERO };
        let mut m = vec![vec![Gf64::ZERO; n]; n];
        for (idx, &(u, v)) in self.arcs.iter().enumerate() {
            let z = self.z_arc[idx];
            m[u][u] += z * (self.a_arc[idx] + bit(v));
            let back = if u == 0 { self.z_forced_back } else { self.z_forced[u] };
            m[v][u] += z * back * (self.a_forced[u] + bit(u));
        }
        for (v, row) in m.iter_mut().enumerate() {
            row[v] *= self.z_forced[v];
        }
        Ok(m)
    }

    /// Sum of determinants over all `2^n` row assignments.
    pub fn phi(&self) -> Gf64 {
        let n = self.n;
        let mut x = vec![false; n];
        let mut total = Gf64::ZERO;
        for mask in 0u64..(1 << n) {
            for (v, slot) in x.iter_mut().enumerate() {
                *slot = mask >> v & 1 == 1;
            }
            total += determinant(self.build_matrix(&x).expect("length matches"));
        }
        total
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
}

pub fn decide_hamiltonicity(g: &WeightedDigraph, trials: usize, seed: u64) -> Result<Decision> {
    decide_hamiltonicity_with_cap(g, trials, seed, SIEVE_CAP)
}

/// One-sided test: `No` is always correct; a `Yes` comes with a non-zero
/// evaluation of the sieve polynomial.
pub fn decide_hamiltonicity_with_cap(
    g: &WeightedDigraph,
    trials: usize,
    seed: u64,
    cap: usize,
) -> Result<Decision> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    if trials == 0 {
        return Err(Error::PreconditionViolated("at least one trial is needed".into()));
    }
    if g.edges().any(|(_, _, w)| w != 1) {
        log::info!("algebraic test decides Hamiltonicity only; arc weights are ignored");
    }
    if n < 2 {
        return Ok(Decision::No);
    }
    let bfm = crate::reductions::atsp_to_bfm(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        if !SieveInstance::random(&bfm, &mut rng).phi().is_zero() {
            return Ok(Decision::Yes);
        }
    }
    Ok(Decision::No)
}
