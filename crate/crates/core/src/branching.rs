//! Branch-and-reduce ATSP solver driven by interfaces and switching walks.
//!
//! Each call inspects the residual graph and applies the first rule that fits:
//!
//! * (a) two vertices left: close the tour directly;
//! * (b) an empty interface: infeasible;
//! * (c) an interface with one arc: force it;
//! * (d) a switching walk that leaves and re-enters the same interface:
//!   drop the other arcs of that interface;
//! * (e) an even walk between distinct interfaces: force its first or its
//!   last arc;
//! * (f) every interface has exactly two arcs: hand over to a base solver;
//! * (g) otherwise branch over the arcs of an out-interface of size >= 3.
//!
//! Forcing an arc contracts it (see [`contract_forced_edge`]); the residual
//! keeps, per vertex, the path of original vertices it stands for, so
//! optimal tours come back in original coordinates.

use crate::error::{Error, Result};
use crate::graph::{
    contract_forced_edge, degree_profile, switching_decomposition, Arc, Interface, Side, Weight,
    WeightedDigraph,
};
use crate::oracle::{held_karp_with_cap, TourSolution, HELD_KARP_CAP};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub beta: f64,
    pub alpha: f64,
}

impl Constants {
    pub fn new() -> Self {
        let beta = 3f64.log2() - 1.0;
        Constants {
            beta,
            alpha: 7.0 / 12.0 - 1.0 / (12.0 * beta),
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::new()
    }
}

/// `2^((n - t1) / 3 + beta * S_out)` for the given graph.
pub fn branching_bound(g: &WeightedDigraph) -> f64 {
    let profile = degree_profile(g);
    let n = g.vertex_count() as f64;
    let exponent = (n - profile.t1() as f64) / 3.0 + Constants::new().beta * profile.s_out as f64;
    exponent.exp2()
}

/// Solver used once every interface has exactly two arcs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BaseSolver {
    /// Held-Karp on the residual; falls back to circuit branching above
    /// its vertex cap.
    #[default]
    HeldKarp,
    /// Force the first or second arc of the first switching circuit.
    CircuitBranching,
}

#[derive(Clone, Debug)]
pub struct BranchingOptions {
    pub base: BaseSolver,
    pub rule_d: bool,
    pub trace: bool,
}

impl Default for BranchingOptions {
    fn default() -> Self {
        BranchingOptions {
            base: BaseSolver::HeldKarp,
            rule_d: true,
            trace: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BranchStats {
    /// Recursion nodes where rule (e) or (g) branched.
    pub branch_nodes: u64,
    /// Invocations of the base solver.
    pub base_cases: u64,
    /// [`branching_bound`] of the input graph.
    pub bound: f64,
    /// Lines `"<depth> <rule> <detail>"`, filled only when tracing.
    pub trace: Vec<String>,
}

/// A contracted graph together with the original paths its vertices
/// represent and the weight already committed to forced arcs.
#[derive(Clone, Debug)]
pub struct Residual {
    pub graph: WeightedDigraph,
    pub segments: Vec<Vec<usize>>,
    pub forced_weight: Weight,
}

impl Residual {
    pub fn new(g: &WeightedDigraph) -> Self {
        Residual {
            graph: g.clone(),
            segments: (0..g.vertex_count()).map(|v| vec![v]).collect(),
            forced_weight: 0,
        }
    }

    pub fn force(&self, arc: Arc) -> Result<Residual> {
        let (graph, contraction) = contract_forced_edge(&self.graph, arc)?;
        let mut segments = vec![Vec::new(); graph.vertex_count()];
        for (old, &new) in contraction.mapping.iter().enumerate() {
            if old != arc.head {
                segments[new].extend_from_slice(&self.segments[old]);
            }
        }
        segments[contraction.merged].extend_from_slice(&self.segments[arc.head]);
        let forced_weight = self
            .forced_weight
            .checked_add(contraction.forced_weight)
            .ok_or(Error::WeightOverflow)?;
        Ok(Residual { graph, segments, forced_weight })
    }

    pub fn without(&self, arcs: &[Arc]) -> Residual {
        Residual {
            graph: self.graph.without_arcs(arcs),
            segments: self.segments.clone(),
            forced_weight: self.forced_weight,
        }
    }

    /// The original arc a residual arc stands for.
    pub fn original_arc(&self, arc: Arc) -> Arc {
        let tail = *self.segments[arc.tail].last().expect("segments are non-empty");
        Arc::new(tail, self.segments[arc.head][0])
    }

    /// True if `original` has been forced, i.e. lies inside one segment.
    pub fn is_contracted(&self, original: Arc) -> bool {
        self.segments
            .iter()
            .any(|s| s.windows(2).any(|w| w[0] == original.tail && w[1] == original.head))
    }

    /// True if `original` is still available as a residual arc.
    pub fn is_present(&self, original: Arc) -> bool {
        self.graph.arcs().any(|a| self.original_arc(a) == original)
    }

    pub fn lift(&self, tour: &[usize]) -> Vec<usize> {
        tour.iter()
            .flat_map(|&v| self.segments[v].iter().copied())
            .collect()
    }

    /// First interface of size 1, scanning vertices in order, out before in.
    pub fn unit_interface_arc(&self) -> Option<Arc> {
        let g = &self.graph;
        (0..g.vertex_count()).find_map(|v| {
            if g.outdeg(v) == 1 {
                Some(Arc::new(v, g.out_neighbors(v)[0].0))
            } else if g.indeg(v) == 1 {
                Some(Arc::new(g.in_neighbors(v)[0].0, v))
            } else {
                None
            }
        })
    }

    pub fn has_empty_interface(&self) -> bool {
        let g = &self.graph;
        (0..g.vertex_count()).any(|v| g.outdeg(v) == 0 || g.indeg(v) == 0)
    }

    /// Applies rule (c) until no interface of size 1 remains, two vertices
    /// remain, or an interface becomes empty. Returns `false` in the last
    /// case.
    pub fn propagate(&mut self) -> Result<bool> {
        loop {
            if self.has_empty_interface() {
                return Ok(false);
            }
            if self.graph.vertex_count() <= 2 {
                return Ok(true);
            }
            match self.unit_interface_arc() {
                Some(arc) => *self = self.force(arc)?,
                None => return Ok(true),
            }
        }
    }
}

pub fn solve_branching(g: &WeightedDigraph) -> Result<(TourSolution, BranchStats)> {
    solve_branching_with(g, &BranchingOptions::default())
}

pub fn solve_branching_with(
    g: &WeightedDigraph,
    options: &BranchingOptions,
) -> Result<(TourSolution, BranchStats)> {
    if g.vertex_count() < 2 {
        return Err(Error::PreconditionViolated("a tour needs at least 2 vertices".into()));
    }
    let mut search = Search {
        options,
        stats: BranchStats {
            bound: branching_bound(g),
            ..BranchStats::default()
        },
    };
    let best = search.run(Residual::new(g), 0)?;
    let solution = match best {
        Some((weight, tour)) => TourSolution::optimal(weight, tour),
        None => TourSolution::Infeasible,
    };
    Ok((solution, search.stats))
}

type Found = Option<(Weight, Vec<usize>)>;

struct Search<'o> {
    options: &'o BranchingOptions,
    stats: BranchStats,
}

impl Search<'_> {
    fn note(&mut self, depth: usize, rule: char, detail: impl FnOnce() -> String) {
        if self.options.trace {
            self.stats.trace.push(format!("{depth} {rule} {}", detail()));
        }
    }

    fn child(&mut self, parent: &Residual, arc: Arc, depth: usize) -> Result<Found> {
        let next = parent.force(arc)?;
        debug_assert!(
            degree_profile(&next.graph).s_out <= degree_profile(&parent.graph).s_out,
            "forcing an arc raised S_out"
        );
        self.run(next, depth + 1)
    }

    fn best_of(&mut self, r: &Residual, arcs: &[Arc], depth: usize) -> Result<Found> {
        let mut best: Found = None;
        for &arc in arcs {
            if let Some((w, tour)) = self.child(r, arc, depth)? {
                if best.as_ref().is_none_or(|(b, _)| w < *b) {
                    best = Some((w, tour));
                }
            }
        }
        Ok(best)
    }

    fn describe(r: &Residual, arcs: &[Arc]) -> String {
        arcs.iter()
            .map(|&a| {
                let o = r.original_arc(a);
                format!("{}>{}", o.tail, o.head)
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn run(&mut self, r: Residual, depth: usize) -> Result<Found> {
        let g = &r.graph;
        let n = g.vertex_count();

        if n == 2 {
            self.note(depth, 'a', || format!("{:?}", r.segments));
            let (Some(there), Some(back)) = (g.weight(0, 1), g.weight(1, 0)) else {
                return Ok(None);
            };
            let total = [there, back]
                .into_iter()
                .try_fold(r.forced_weight, |acc, w| acc.checked_add(w))
                .ok_or(Error::WeightOverflow)?;
            return Ok(Some((total, r.lift(&[0, 1]))));
        }

        if r.has_empty_interface() {
            self.note(depth, 'b', String::new);
            return Ok(None);
        }

        if let Some(arc) = r.unit_interface_arc() {
            self.note(depth, 'c', || Self::describe(&r, &[arc]));
            return self.child(&r, arc, depth);
        }

        let decomposition = switching_decomposition(g)?;

        if self.options.rule_d {
            if let Some(walk) = decomposition.walks.iter().find(|w| w.start() == w.end()) {
                let ends = [walk.edges[0], *walk.edges.last().expect("non-empty walk")];
                let dropped: Vec<Arc> = g
                    .interface(walk.start())
                    .into_iter()
                    .filter(|a| !ends.contains(a))
                    .collect();
                self.note(depth, 'd', || Self::describe(&r, &dropped));
                let next = r.without(&dropped);
                debug_assert!(degree_profile(&next.graph).s_out <= degree_profile(g).s_out);
                return self.run(next, depth + 1);
            }
        }

        let even_walk = decomposition
            .walks
            .iter()
            .find(|w| w.len() % 2 == 0 && w.start() != w.end());
        if let Some(walk) = even_walk {
            let ends = [walk.edges[0], *walk.edges.last().expect("non-empty walk")];
            self.stats.branch_nodes += 1;
            self.note(depth, 'e', || Self::describe(&r, &ends));
            return self.best_of(&r, &ends, depth);
        }

        let wide = (0..n).find(|&v| g.outdeg(v) >= 3);
        let Some(v) = wide else {
            self.stats.base_cases += 1;
            return self.base_case(r, &decomposition.circuits[0].edges, depth);
        };

        let arcs = g.interface(Interface { vertex: v, side: Side::Out });
        self.stats.branch_nodes += 1;
        self.note(depth, 'g', || Self::describe(&r, &arcs));
        self.best_of(&r, &arcs, depth)
    }

    fn base_case(&mut self, r: Residual, circuit: &[Arc], depth: usize) -> Result<Found> {
        let n = r.graph.vertex_count();
        if self.options.base == BaseSolver::HeldKarp && n <= HELD_KARP_CAP {
            self.note(depth, 'f', || format!("held-karp on {n} vertices"));
            return Ok(match held_karp_with_cap(&r.graph, HELD_KARP_CAP)? {
                TourSolution::Optimal { weight, tour } => {
                    let total = r
                        .forced_weight
                        .checked_add(weight)
                        .ok_or(Error::WeightOverflow)?;
                    Some((total, r.lift(&tour)))
                }
                TourSolution::Infeasible => None,
            });
        }
        let pair = [circuit[0], circuit[1]];
        self.note(depth, 'f', || format!("circuit {}", Self::describe(&r, &pair)));
        self.best_of(&r, &pair, depth)
    }
}
