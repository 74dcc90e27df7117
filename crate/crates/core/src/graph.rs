//! Simple weighted digraphs and the structural notions the solvers share:
//! degree statistics, interfaces, the interface graph, switching walks and
//! circuits, and forced-edge contraction.

use std::fmt::Write as _;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Weight = i64;

/// A directed edge, identified by its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
}

impl Arc {
    pub fn new(tail: usize, head: usize) -> Self {
        Arc { tail, head }
    }
}

/// A simple digraph on vertices `0..n` with integer arc weights.
///
/// Adjacency lists are kept sorted, so two graphs with the same arc set
/// compare equal regardless of construction order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDigraph {
    out: Vec<Vec<(usize, Weight)>>,
    inc: Vec<Vec<(usize, Weight)>>,
    m: usize,
}

impl WeightedDigraph {
    /// Builds a digraph, rejecting self-loops, duplicate arcs and
    /// out-of-range endpoints.
    pub fn new<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Weight)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut out: Vec<Vec<(usize, Weight)>> = vec![Vec::new(); n];
        let mut inc: Vec<Vec<(usize, Weight)>> = vec![Vec::new(); n];
        let mut m = 0;
        for (tail, head, w) in arcs {
            for vertex in [tail, head] {
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { vertex, n });
                }
            }
            if tail == head {
                return Err(Error::SelfLoop(tail));
            }
            out[tail].push((head, w));
            inc[head].push((tail, w));
            m += 1;
        }
        for (tail, list) in out.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(pair) = list.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(Error::DuplicateEdge { tail, head: pair[0].0 });
            }
        }
        for list in inc.iter_mut() {
            list.sort_unstable();
        }
        Ok(WeightedDigraph { out, inc, m })
    }

    /// Builds a digraph where every arc has weight 1.
    pub fn unit<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new(n, arcs.into_iter().map(|(u, v)| (u, v, 1)))
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Out-neighbours of `v` with arc weights, sorted by head.
    pub fn out_neighbors(&self, v: usize) -> &[(usize, Weight)] {
        &self.out[v]
    }

    /// In-neighbours of `v` with arc weights, sorted by tail.
    pub fn in_neighbors(&self, v: usize) -> &[(usize, Weight)] {
        &self.inc[v]
    }

    pub fn outdeg(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn indeg(&self, v: usize) -> usize {
        self.inc[v].len()
    }

    pub fn weight(&self, tail: usize, head: usize) -> Option<Weight> {
        let list = self.out.get(tail)?;
        list.binary_search_by_key(&head, |&(h, _)| h)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_arc(&self, tail: usize, head: usize) -> bool {
        self.weight(tail, head).is_some()
    }

    /// All arcs as `(tail, head, weight)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Weight)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(t, list)| list.iter().map(move |&(h, w)| (t, h, w)))
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.edges().map(|(t, h, _)| Arc::new(t, h))
    }

    /// Returns a copy without the listed arcs. Arcs not present are ignored.
    pub fn without_arcs(&self, removed: &[Arc]) -> WeightedDigraph {
        let keep = self
            .edges()
            .filter(|&(t, h, _)| !removed.contains(&Arc::new(t, h)));
        WeightedDigraph::new(self.vertex_count(), keep).expect("subgraph of a simple digraph")
    }

    /// True if `tour` lists every vertex once and consecutive vertices
    /// (cyclically) are joined by arcs.
    pub fn is_hamiltonian_cycle(&self, tour: &[usize]) -> bool {
        let n = self.vertex_count();
        if tour.len() != n || n < 2 {
            return false;
        }
        let mut seen = vec![false; n];
        for &v in tour {
            if v >= n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        (0..n).all(|i| self.has_arc(tour[i], tour[(i + 1) % n]))
    }

    /// Weight of a Hamiltonian cycle, with overflow checking.
    pub fn tour_weight(&self, tour: &[usize]) -> Result<Weight> {
        if !self.is_hamiltonian_cycle(tour) {
            return Err(Error::PreconditionViolated(format!(
                "{tour:?} is not a Hamiltonian cycle"
            )));
        }
        let n = tour.len();
        (0..n).try_fold(0 as Weight, |acc, i| {
            let w = self.weight(tour[i], tour[(i + 1) % n]).expect("checked above");
            acc.checked_add(w).ok_or(Error::WeightOverflow)
        })
    }

    pub fn interface(&self, iface: Interface) -> Vec<Arc> {
        let v = iface.vertex;
        match iface.side {
            Side::Out => self.out[v].iter().map(|&(h, _)| Arc::new(v, h)).collect(),
            Side::In => self.inc[v].iter().map(|&(t, _)| Arc::new(t, v)).collect(),
        }
    }

    pub fn interface_size(&self, iface: Interface) -> usize {
        match iface.side {
            Side::Out => self.outdeg(iface.vertex),
            Side::In => self.indeg(iface.vertex),
        }
    }

    /// Smallest interface size over all vertices and both sides.
    pub fn min_interface_size(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.outdeg(v).min(self.indeg(v)))
            .min()
            .unwrap_or(0)
    }
}

/// Outdegree statistics of a digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    /// `t[i]` is the number of vertices of outdegree `i`, for `i` in `0..n`.
    pub t: Vec<usize>,
    /// Sum of `outdeg - 2` over vertices with outdegree at least 2.
    pub s_out: usize,
    /// Sum of `indeg - 2` over vertices with indegree at least 2.
    pub s_in: usize,
    pub d_avg: Ratio<usize>,
}

impl DegreeProfile {
    pub fn t1(&self) -> usize {
        self.t.get(1).copied().unwrap_or(0)
    }

    pub fn d_avg_f64(&self) -> f64 {
        *self.d_avg.numer() as f64 / *self.d_avg.denom() as f64
    }
}

pub fn degree_profile(g: &WeightedDigraph) -> DegreeProfile {
    let n = g.vertex_count();
    let mut t = vec![0; n];
    let mut s_out = 0;
    let mut s_in = 0;
    for v in 0..n {
        t[g.outdeg(v)] += 1;
        s_out += g.outdeg(v).saturating_sub(2);
        s_in += g.indeg(v).saturating_sub(2);
    }
    DegreeProfile {
        t,
        s_out,
        s_in,
        d_avg: Ratio::new(g.edge_count(), n),
    }
}

/// Which end of its arcs an interface collects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Out,
    In,
}

/// The set of all arcs leaving (`Out`) or entering (`In`) a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interface {
    pub vertex: usize,
    pub side: Side,
}

impl Interface {
    pub fn out(vertex: usize) -> Self {
        Interface { vertex, side: Side::Out }
    }

    pub fn inward(vertex: usize) -> Self {
        Interface { vertex, side: Side::In }
    }
}

/// Bipartite graph with one node per interface and one edge per arc:
/// arc `(u, v)` joins `u`'s out-node to `v`'s in-node.
///
/// Node `v` is the out-node of `v`; node `n + v` is its in-node.
#[derive(Clone, Debug)]
pub struct InterfaceGraph {
    n: usize,
    arcs: Vec<Arc>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl InterfaceGraph {
    pub fn node_count(&self) -> usize {
        2 * self.n
    }

    pub fn edge_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn out_node(&self, v: usize) -> usize {
        v
    }

    pub fn in_node(&self, v: usize) -> usize {
        self.n + v
    }

    pub fn node_interface(&self, node: usize) -> Interface {
        if node < self.n {
            Interface::out(node)
        } else {
            Interface::inward(node - self.n)
        }
    }

    pub fn interface_node(&self, iface: Interface) -> usize {
        match iface.side {
            Side::Out => self.out_node(iface.vertex),
            Side::In => self.in_node(iface.vertex),
        }
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adj[node].len()
    }

    /// Neighbouring nodes of `node`, each with the arc realising the edge.
    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, Arc)> + '_ {
        self.adj[node].iter().map(|&(other, id)| (other, self.arcs[id]))
    }

    /// Undirected edges as `(out-node, in-node)`, one per arc.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().map(|a| (a.tail, self.n + a.head))
    }
}

pub fn interface_graph(g: &WeightedDigraph) -> InterfaceGraph {
    let n = g.vertex_count();
    let arcs: Vec<Arc> = g.arcs().collect();
    let mut adj = vec![Vec::new(); 2 * n];
    for (id, a) in arcs.iter().enumerate() {
        adj[a.tail].push((n + a.head, id));
        adj[n + a.head].push((a.tail, id));
    }
    InterfaceGraph { n, arcs, adj }
}

/// A switching walk or circuit: the arcs in order together with the
/// `len + 1` interfaces visited. For a circuit the first and last
/// interfaces coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchingSequence {
    pub edges: Vec<Arc>,
    pub interfaces: Vec<Interface>,
}

impl SwitchingSequence {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> Interface {
        self.interfaces[0]
    }

    pub fn end(&self) -> Interface {
        *self.interfaces.last().expect("non-empty")
    }

    /// Arcs at odd positions counting from one: `e1, e3, ...`.
    pub fn odd_edges(&self) -> impl Iterator<Item = Arc> + '_ {
        self.edges.iter().copied().step_by(2)
    }

    /// Arcs at even positions counting from one: `e2, e4, ...`.
    pub fn even_edges(&self) -> impl Iterator<Item = Arc> + '_ {
        self.edges.iter().copied().skip(1).step_by(2)
    }
}

/// Partition of the arc set into switching walks and circuits.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SwitchingDecomposition {
    pub walks: Vec<SwitchingSequence>,
    pub circuits: Vec<SwitchingSequence>,
}

/// Splits the arcs of `g` into switching walks and circuits by following
/// the degree-2 chains and cycles of the interface graph.
///
/// Walks are discovered from their smaller endpoint interface, ordered by
/// `(vertex, side)` with `Out` before `In`, so the output is canonical.
pub fn switching_decomposition(g: &WeightedDigraph) -> Result<SwitchingDecomposition> {
    let n = g.vertex_count();
    if let Some(v) = (0..n).find(|&v| g.outdeg(v) < 2 || g.indeg(v) < 2) {
        return Err(Error::PreconditionViolated(format!(
            "vertex {v} has an interface of size at most 1"
        )));
    }
    let ig = interface_graph(g);
    let order: Vec<usize> = (0..n).flat_map(|v| [ig.out_node(v), ig.in_node(v)]).collect();
    let mut used = vec![false; ig.edge_count()];
    let mut decomposition = SwitchingDecomposition::default();

    let trace = |start: usize, first: usize, used: &mut Vec<bool>| -> SwitchingSequence {
        let mut edges = Vec::new();
        let mut interfaces = vec![ig.node_interface(start)];
        let (mut cur, mut via) = ig.adj[start][first];
        loop {
            used[via] = true;
            edges.push(ig.arcs[via]);
            interfaces.push(ig.node_interface(cur));
            if ig.degree(cur) != 2 || cur == start {
                break;
            }
            let &(next, id) = ig.adj[cur]
                .iter()
                .find(|&&(_, id)| id != via)
                .expect("degree-2 node has a second edge");
            cur = next;
            via = id;
        }
        SwitchingSequence { edges, interfaces }
    };

    for &node in &order {
        if ig.degree(node) < 3 {
            continue;
        }
        for slot in 0..ig.degree(node) {
            if !used[ig.adj[node][slot].1] {
                let walk = trace(node, slot, &mut used);
                decomposition.walks.push(walk);
            }
        }
    }
    for &node in &order {
        for slot in 0..ig.degree(node) {
            if !used[ig.adj[node][slot].1] {
                let circuit = trace(node, slot, &mut used);
                decomposition.circuits.push(circuit);
            }
        }
    }
    Ok(decomposition)
}

/// Record of one forced-edge contraction, sufficient to lift a tour of the
/// contracted graph back to the graph it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    /// `mapping[old] = new`; both endpoints of the forced arc map to `merged`.
    pub mapping: Vec<usize>,
    pub merged: usize,
    pub forced: Arc,
    pub forced_weight: Weight,
}

impl Contraction {
    /// Expands the merged vertex into `tail, head` and renames the rest.
    pub fn lift_tour(&self, tour: &[usize]) -> Vec<usize> {
        let mut inverse = vec![usize::MAX; self.mapping.len() - 1];
        for (old, &new) in self.mapping.iter().enumerate() {
            if new != self.merged {
                inverse[new] = old;
            }
        }
        let mut lifted = Vec::with_capacity(tour.len() + 1);
        for &v in tour {
            if v == self.merged {
                lifted.push(self.forced.tail);
                lifted.push(self.forced.head);
            } else {
                lifted.push(inverse[v]);
            }
        }
        lifted
    }
}

/// Forces arc `e = (u, v)` onto the tour: drops `(v, u)`, every other arc
/// leaving `u` and every other arc entering `v`, then merges `u` and `v`
/// into one vertex that keeps `u`'s in-arcs and `v`'s out-arcs.
///
/// The merged vertex takes `u`'s position in the renumbering; vertices
/// after `v` shift down by one.
pub fn contract_forced_edge(g: &WeightedDigraph, e: Arc) -> Result<(WeightedDigraph, Contraction)> {
    let Arc { tail: u, head: v } = e;
    let forced_weight = g.weight(u, v).ok_or(Error::InvalidEdge(u, v))?;
    let n = g.vertex_count();
    if n < 3 {
        return Err(Error::PreconditionViolated(
            "contraction needs at least 3 vertices".into(),
        ));
    }
    let rename = |w: usize| if w > v { w - 1 } else { w };
    let mapping: Vec<usize> = (0..n)
        .map(|w| if w == v { rename(u) } else { rename(w) })
        .collect();
    let arcs = g
        .edges()
        .filter(|&(a, b, _)| a != u && b != v && !(a == v && b == u))
        .map(|(a, b, w)| (mapping[a], mapping[b], w));
    let contracted = WeightedDigraph::new(n - 1, arcs)?;
    Ok((
        contracted,
        Contraction {
            merged: mapping[u],
            mapping,
            forced: e,
            forced_weight,
        },
    ))
}

/// Parses the `p atsp` arc-list format (1-based vertices).
pub fn parse_instance(text: &str) -> Result<WeightedDigraph> {
    let parse_err = |line: usize, message: String| Error::Parse { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        last_line = line_no;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(parse_err(line_no, "second problem line".into()));
                }
                if fields.len() != 4 || fields[1] != "atsp" {
                    return Err(parse_err(line_no, "expected `p atsp <n> <m>`".into()));
                }
                let n = fields[2]
                    .parse::<usize>()
                    .map_err(|e| parse_err(line_no, format!("vertex count: {e}")))?;
                let m = fields[3]
                    .parse::<usize>()
                    .map_err(|e| parse_err(line_no, format!("arc count: {e}")))?;
                if n == 0 {
                    return Err(parse_err(line_no, "vertex count must be positive".into()));
                }
                header = Some((n, m));
            }
            "a" => {
                let (n, _) = header
                    .ok_or_else(|| parse_err(line_no, "arc before problem line".into()))?;
                if fields.len() != 4 {
                    return Err(parse_err(line_no, "expected `a <tail> <head> <weight>`".into()));
                }
                let endpoint = |s: &str| -> Result<usize> {
                    let v = s
                        .parse::<usize>()
                        .map_err(|e| parse_err(line_no, format!("vertex `{s}`: {e}")))?;
                    if v == 0 || v > n {
                        return Err(parse_err(line_no, format!("vertex {v} outside 1..={n}")));
                    }
                    Ok(v - 1)
                };
                let tail = endpoint(fields[1])?;
                let head = endpoint(fields[2])?;
                let weight = fields[3]
                    .parse::<Weight>()
                    .map_err(|e| parse_err(line_no, format!("weight `{}`: {e}", fields[3])))?;
                if tail == head {
                    return Err(Error::SelfLoop(tail));
                }
                if !seen.insert((tail, head)) {
                    return Err(Error::DuplicateEdge { tail, head });
                }
                arcs.push((tail, head, weight));
            }
            other => {
                return Err(parse_err(line_no, format!("unknown line type `{other}`")));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(last_line.max(1), "missing problem line".into()))?;
    if arcs.len() != m {
        return Err(parse_err(
            last_line.max(1),
            format!("header announces {m} arcs, found {}", arcs.len()),
        ));
    }
    WeightedDigraph::new(n, arcs)
}

pub fn serialize_instance(g: &WeightedDigraph) -> String {
    let mut s = String::new();
    writeln!(s, "p atsp {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (t, h, w) in g.edges() {
        writeln!(s, "a {} {} {}", t + 1, h + 1, w).unwrap();
    }
    s
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_arcs() {
        assert_eq!(WeightedDigraph::unit(3, [(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(
            WeightedDigraph::unit(3, [(0, 1), (0, 1)]),
            Err(Error::DuplicateEdge { tail: 0, head: 1 })
        );
        assert_eq!(
            WeightedDigraph::unit(2, [(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
        assert_eq!(WeightedDigraph::unit(0, []), Err(Error::EmptyGraph));
    }

    #[test]
    fn profile_examples() {
        let b3 = degree_profile(&b3());
        assert_eq!(b3.t, vec![0, 0, 3]);
        assert_eq!((b3.s_out, b3.s_in), (0, 0));
        assert_eq!(b3.d_avg, Ratio::from_integer(2));

        let c3 = degree_profile(&c3());
        assert_eq!(c3.t, vec![0, 3, 0]);
        assert_eq!(c3.s_out, 0);
        assert_eq!(c3.d_avg, Ratio::from_integer(1));

        let k4 = degree_profile(&complete(4));
        assert_eq!(k4.t, vec![0, 0, 0, 4]);
        assert_eq!(k4.s_out, 4);
        assert_eq!(k4.d_avg, Ratio::from_integer(3));
    }

    #[test]
    fn interface_graph_examples() {
        let ig = interface_graph(&c3());
        assert_eq!(ig.node_count(), 6);
        let mut edges: Vec<_> = ig.edges().collect();
        edges.sort();
        // out-nodes 0..3, in-nodes 3..6
        assert_eq!(edges, vec![(0, 4), (1, 5), (2, 3)]);
        assert!((0..6).all(|x| ig.degree(x) == 1));

        let ig = interface_graph(&b3());
        assert_eq!(ig.edge_count(), 6);
        assert!((0..6).all(|x| ig.degree(x) == 2));

        let ig = interface_graph(&complete(4));
        assert!((0..8).all(|x| ig.degree(x) == 3));
    }

    #[test]
    fn b3_is_all_circuits() {
        let dec = switching_decomposition(&b3()).unwrap();
        assert!(dec.walks.is_empty());
        let total: usize = dec.circuits.iter().map(|c| c.len()).sum();
        assert_eq!(total, 6);
        // I_G of B3 is a single 6-cycle
        assert_eq!(dec.circuits.len(), 1);
        let c = &dec.circuits[0];
        assert_eq!(c.start(), c.end());
    }

    #[test]
    fn square_with_chord_walks() {
        let mut arcs: Vec<(usize, usize)> =
            (0..4).flat_map(|i| [(i, (i + 1) % 4), ((i + 1) % 4, i)]).collect();
        arcs.extend([(0, 2), (2, 0)]);
        let g = WeightedDigraph::unit(4, arcs).unwrap();
        let dec = switching_decomposition(&g).unwrap();
        assert!(dec.circuits.is_empty());
        let shape: Vec<(Interface, Interface, usize)> =
            dec.walks.iter().map(|w| (w.start(), w.end(), w.len())).collect();
        assert_eq!(
            shape,
            vec![
                (Interface::out(0), Interface::out(2), 2),
                (Interface::out(0), Interface::inward(2), 1),
                (Interface::out(0), Interface::out(2), 2),
                (Interface::inward(0), Interface::inward(2), 2),
                (Interface::inward(0), Interface::out(2), 1),
                (Interface::inward(0), Interface::inward(2), 2),
            ]
        );
        for w in &dec.walks {
            for inner in &w.interfaces[1..w.len()] {
                assert_eq!(g.interface_size(*inner), 2);
            }
            assert_eq!(g.interface_size(w.start()), 3);
            assert_eq!(g.interface_size(w.end()), 3);
        }
    }

    #[test]
    fn decomposition_refuses_thin_interfaces() {
        assert!(matches!(
            switching_decomposition(&c3()),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn contraction_examples() {
        let (g, map) = contract_forced_edge(&c3(), Arc::new(0, 1)).unwrap();
        assert_eq!(map.merged, 0);
        assert_eq!(map.mapping, vec![0, 0, 1]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1, 2), (1, 0, 3)]);
        assert_eq!(map.lift_tour(&[0, 1]), vec![0, 1, 2]);

        let (g, _) = contract_forced_edge(&b3(), Arc::new(0, 1)).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1, 1), (1, 0, 1)]);

        assert_eq!(
            contract_forced_edge(&c3(), Arc::new(1, 0)).unwrap_err(),
            Error::InvalidEdge(1, 0)
        );
    }

    #[test]
    fn parse_examples() {
        let g = parse_instance("p atsp 3 3\na 1 2 1\na 2 3 2\na 3 1 3\n").unwrap();
        assert_eq!(g, c3());
        let g = parse_instance("c empty\np atsp 2 0\n").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 0));
        assert_eq!(parse_instance("p atsp 2 1\na 1 1 5\n"), Err(Error::SelfLoop(0)));
        assert_eq!(
            parse_instance("p atsp 2 2\na 1 2 5\na 1 2 6\n"),
            Err(Error::DuplicateEdge { tail: 0, head: 1 })
        );
        match parse_instance("p atsp 2 1\na 1 x 5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_instance("p atsp 3 2\na 1 2 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    fn arb_digraph() -> impl Strategy<Value = WeightedDigraph> {
        (2usize..9).prop_flat_map(|n| {
            proptest::collection::btree_map((0..n, 0..n), -50i64..50, 0..(n * n))
                .prop_map(move |arcs| {
                    let arcs = arcs.into_iter().filter(|((u, v), _)| u != v);
                    WeightedDigraph::new(n, arcs.map(|((u, v), w)| (u, v, w))).unwrap()
                })
        })
    }

    /// Digraphs with every interface of size at least 2: a relabelled
    /// `i -> i+1, i -> i+2` circulant plus random extra arcs.
    fn arb_thick_digraph() -> impl Strategy<Value = WeightedDigraph> {
        (3usize..9).prop_flat_map(|n| {
            let labels = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
            let extra = proptest::collection::btree_set((0..n, 0..n), 0..(n * n / 2));
            (labels, extra).prop_map(move |(labels, extra)| {
                let mut arcs: std::collections::BTreeSet<(usize, usize)> = (0..n)
                    .flat_map(|i| [(labels[i], labels[(i + 1) % n]), (labels[i], labels[(i + 2) % n])])
                    .collect();
                arcs.extend(extra.into_iter().filter(|(u, v)| u != v));
                WeightedDigraph::unit(n, arcs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn serialize_round_trips(g in arb_digraph()) {
            prop_assert_eq!(parse_instance(&serialize_instance(&g)).unwrap(), g);
        }

        #[test]
        fn profile_satisfies_counting_conditions(g in arb_digraph()) {
            let p = degree_profile(&g);
            prop_assert_eq!(p.t.iter().sum::<usize>(), g.vertex_count());
            let arcs: usize = p.t.iter().enumerate().map(|(i, c)| i * c).sum();
            prop_assert_eq!(arcs, g.edge_count());
            if g.min_interface_size() >= 2 {
                prop_assert_eq!(p.s_out, p.s_in);
            }
        }

        #[test]
        fn contraction_keeps_graph_simple_and_s_bounded(g in arb_digraph(), pick in 0usize..64) {
            prop_assume!(g.vertex_count() >= 3 && g.edge_count() > 0);
            let e = g.arcs().nth(pick % g.edge_count()).unwrap();
            let (h, map) = contract_forced_edge(&g, e).unwrap();
            prop_assert_eq!(h.vertex_count(), g.vertex_count() - 1);
            prop_assert!(degree_profile(&h).s_out <= degree_profile(&g).s_out);
            prop_assert_eq!(map.mapping[e.tail], map.mapping[e.head]);
        }

        #[test]
        fn decomposition_partitions_edges(g in arb_thick_digraph()) {
            let dec = switching_decomposition(&g).unwrap();
            let mut all: Vec<Arc> = dec.walks.iter().chain(&dec.circuits)
                .flat_map(|s| s.edges.iter().copied()).collect();
            all.sort();
            prop_assert_eq!(all, g.arcs().collect::<Vec<_>>());
            prop_assert_eq!(&switching_decomposition(&g).unwrap(), &dec);
            for seq in dec.walks.iter().chain(&dec.circuits) {
                for pair in seq.edges.windows(2) {
                    let shares_tail = pair[0].tail == pair[1].tail;
                    let shares_head = pair[0].head == pair[1].head;
                    prop_assert!(shares_tail ^ shares_head);
                }
            }
            for w in &dec.walks {
                prop_assert!(g.interface_size(w.start()) > 2);
                prop_assert!(g.interface_size(w.end()) > 2);
                for inner in &w.interfaces[1..w.len()] {
                    prop_assert_eq!(g.interface_size(*inner), 2);
                }
            }
            for c in &dec.circuits {
                prop_assert_eq!(c.start(), c.end());
                prop_assert!(c.interfaces.iter().all(|i| g.interface_size(*i) == 2));
            }
        }
    }
}
