//! Test-only oracles, written independently of the library's solvers, and
//! the shared seeded instance suite.

#![allow(dead_code)]

use sparse_atsp::algebraic::{Gf64, SieveInstance};
use sparse_atsp::oracle::enumerate_hamiltonian_cycles;
use sparse_atsp::portfolio::{generate_instance, InstanceClass};
use sparse_atsp::{Weight, WeightedDigraph};

/// Minimum-weight Hamiltonian cycle of an undirected graph that contains
/// every edge in `required`, by exhaustive depth-first search from node 0.
/// Each cycle is visited in both directions; the result is the cheapest.
pub fn undirected_min_cycle(
    nodes: usize,
    edges: &[(usize, usize, Weight)],
    required: &[(usize, usize)],
) -> Option<(Weight, Vec<usize>)> {
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b, w) in edges {
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    let mut partner = vec![None; nodes];
    for &(a, b) in required {
        partner[a] = Some(b);
        partner[b] = Some(a);
    }
    let mut best: Option<(Weight, Vec<usize>)> = None;
    let mut path = vec![0];
    let mut seen = vec![false; nodes];
    seen[0] = true;
    search(&adj, &partner, &mut path, &mut seen, 0, &mut best);
    best
}

fn search(
    adj: &[Vec<(usize, Weight)>],
    partner: &[Option<usize>],
    path: &mut Vec<usize>,
    seen: &mut [bool],
    weight: Weight,
    best: &mut Option<(Weight, Vec<usize>)>,
) {
    let nodes = adj.len();
    let here = *path.last().unwrap();
    if path.len() == nodes {
        let Some(&(_, w)) = adj[here].iter().find(|&&(x, _)| x == 0) else { return };
        let uses = |a: usize, b: usize| {
            (0..nodes).any(|i| {
                let (x, y) = (path[i], path[(i + 1) % nodes]);
                (x, y) == (a, b) || (x, y) == (b, a)
            })
        };
        let complete = (0..nodes).all(|a| partner[a].is_none_or(|b| uses(a, b)));
        if complete && best.as_ref().is_none_or(|(b, _)| weight + w < *b) {
            *best = Some((weight + w, path.clone()));
        }
        return;
    }
    // away from node 0, an unvisited required partner can only be reached
    // by the very next step
    let forced = partner[here].filter(|&p| here != 0 && !seen[p]);
    for &(next, w) in &adj[here] {
        if seen[next] || forced.is_some_and(|p| p != next) {
            continue;
        }
        seen[next] = true;
        path.push(next);
        search(adj, partner, path, seen, weight + w, best);
        path.pop();
        seen[next] = false;
    }
}

/// Permanent of the 0/1 adjacency matrix by Ryser's inclusion-exclusion.
pub fn permanent(g: &WeightedDigraph) -> u64 {
    let n = g.vertex_count();
    let mut total: i128 = 0;
    for mask in 1u32..(1 << n) {
        let mut product: i128 = 1;
        for row in 0..n {
            let count = (0..n).filter(|&c| mask >> c & 1 == 1 && g.has_arc(row, c)).count();
            product *= count as i128;
            if product == 0 {
                break;
            }
        }
        let sign = if (n as u32 - mask.count_ones()).is_multiple_of(2) { 1 } else { -1 };
        total += sign * product;
    }
    total as u64
}

#[derive(Clone, Debug)]
pub struct SuiteInstance {
    pub class: InstanceClass,
    pub n: usize,
    pub d: f64,
    pub seed: u64,
    pub graph: WeightedDigraph,
}

/// `count` instances of one class on a grid of `n` in `3..=12` and `d` in
/// `[1.5, 4]`, one seed each.
pub fn suite(class: InstanceClass, count: usize) -> Vec<SuiteInstance> {
    (0..count)
        .map(|i| {
            let n = 3 + i % 10;
            let d = 1.5 + 0.25 * ((i / 10) % 11) as f64;
            let seed = 1000 * class_tag(class) + i as u64;
            let graph = generate_instance(class, n, d, seed).expect("suite parameters are valid");
            SuiteInstance { class, n: graph.vertex_count(), d, seed, graph }
        })
        .collect()
}

pub fn full_suite(per_class: usize) -> Vec<SuiteInstance> {
    InstanceClass::ALL
        .into_iter()
        .flat_map(|class| suite(class, per_class))
        .collect()
}

fn class_tag(class: InstanceClass) -> u64 {
    InstanceClass::ALL.iter().position(|&c| c == class).unwrap() as u64
}

/// Each Hamiltonian cycle contributes one monomial per direction of the
/// doubled forced edge at vertex 0.
pub fn monomial_sum(g: &WeightedDigraph, inst: &SieveInstance) -> Gf64 {
    let n = g.vertex_count();
    let forced_rest: Gf64 = (1..n).map(|v| inst.z_forced[v]).product();
    enumerate_hamiltonian_cycles(g)
        .unwrap()
        .iter()
        .map(|tour| {
            let arcs: Gf64 = (0..n)
                .map(|i| {
                    let arc = (tour[i], tour[(i + 1) % n]);
                    let idx = inst.arcs().iter().position(|&a| a == arc).unwrap();
                    inst.z_arc[idx]
                })
                .product();
            (inst.z_forced[0] + inst.z_forced_back) * arcs * forced_rest
        })
        .sum()
}
