//! Hardness constructions as instance generators, each with a certificate
//! that carries witnesses across the reduction, plus the source-side
//! brute-force oracles and a small graph enumerator.

use std::collections::HashSet;

use itertools::Itertools;
use thiserror::Error;

use crate::exploration::{StarInstance, Visit};
use crate::graph::{EdgeId, StaticGraph, TemporalGraph, TemporalWalk, Time, TimeEdge, VertexId};
use crate::reach::MrdInstance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("clique size r = {0} must be at least 2")]
    CliqueTooSmall(usize),
    #[error("coloring has {found} entries for {n} vertices")]
    ColoringLength { n: usize, found: usize },
    #[error("vertices {0} and {1} share a color")]
    ImproperColoring(VertexId, VertexId),
}

/// Bookkeeping for the 3-coloring construction. Vertex `v` (0-based) plays
/// the role of index `v + 1` in the time formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringCertificate {
    pub n: usize,
    /// The `N` in the time formulas; at least `n`.
    pub scale: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

/// Smallest scale at which vertex blocks are disjoint: `2N² > 6(N + 1)`.
pub const MIN_COLORING_SCALE: usize = 4;

impl ColoringCertificate {
    /// `t^i_ψ = 2iN² + 2ψ(N + 1)` for 1-based `i`.
    pub fn slot(&self, i: usize, psi: usize) -> Time {
        let n = self.scale as Time;
        2 * i as Time * n * n + 2 * psi as Time * (n + 1)
    }

    pub fn vertex_edge(&self, v: VertexId) -> EdgeId {
        v
    }

    /// Star edge of color `xi` for the static edge at position `idx`.
    pub fn gadget_edge(&self, idx: usize, xi: usize) -> EdgeId {
        self.n + 3 * idx + xi
    }

    /// The exploration induced by a proper 3-coloring.
    pub fn coloring_to_visits(&self, coloring: &[u8]) -> Result<Vec<Visit>, ReductionError> {
        if coloring.len() != self.n {
            return Err(ReductionError::ColoringLength { n: self.n, found: coloring.len() });
        }
        if let Some(&(a, b)) = self.edges.iter().find(|&&(a, b)| coloring[a] == coloring[b]) {
            return Err(ReductionError::ImproperColoring(a, b));
        }
        let mut visits = Vec::with_capacity(self.n + 3 * self.edges.len());
        for (v, &c) in coloring.iter().enumerate() {
            let c = c as usize;
            visits.push(Visit::new(self.vertex_edge(v), self.slot(v + 1, c), self.slot(v + 1, c + 1)));
        }
        for (idx, &(a, b)) in self.edges.iter().enumerate() {
            let (j, k) = (a + 1, b + 1);
            for xi in 0..3 {
                // Use the slot inside the window of an endpoint not colored xi.
                let (owner, other) = if coloring[a] as usize != xi { (j, k) } else { (k, j) };
                let base = self.slot(owner, xi) + 2 * other as Time;
                visits.push(Visit::new(self.gadget_edge(idx, xi), base - 1, base));
            }
        }
        Ok(visits)
    }

    /// Colors vertex `v` by the slot its visit enters at.
    pub fn visits_to_coloring(&self, visits: &[Visit]) -> Option<Vec<u8>> {
        let mut coloring = vec![None; self.n];
        for v in visits.iter().filter(|v| v.edge < self.n) {
            let i = v.edge + 1;
            coloring[v.edge] = (0..3).find(|&psi| self.slot(i, psi) == v.enter).map(|c| c as u8);
        }
        coloring.into_iter().collect()
    }
}

/// Star with `n + 3m` edges and four times per edge: one edge per vertex and
/// three per static edge, one for each color. Times use `N = max(n, 4)`;
/// below that, consecutive vertex blocks overlap and a single edge already
/// yields an unexplorable star.
pub fn reduce_3col_to_starexp(g: &StaticGraph) -> (StarInstance, ColoringCertificate) {
    reduce_3col_to_starexp_scaled(g, g.n().max(MIN_COLORING_SCALE))
}

/// The same construction with an explicit `N ≥ n` in the time formulas.
pub fn reduce_3col_to_starexp_scaled(g: &StaticGraph, scale: usize) -> (StarInstance, ColoringCertificate) {
    assert!(scale >= g.n(), "scale must be at least the vertex count");
    let cert = ColoringCertificate { n: g.n(), scale, edges: g.edges().to_vec() };
    let mut leaf_times: Vec<Vec<Time>> = (1..=g.n()).map(|i| (0..4).map(|psi| cert.slot(i, psi)).collect()).collect();
    for &(a, b) in g.edges() {
        let (j, k) = ((a + 1) as Time, (b + 1) as Time);
        for xi in 0..3 {
            let tj = cert.slot(a + 1, xi);
            let tk = cert.slot(b + 1, xi);
            leaf_times.push(vec![tj + 2 * k - 1, tj + 2 * k, tk + 2 * j - 1, tk + 2 * j]);
        }
    }
    let star = StarInstance::from_leaf_times(leaf_times).expect("construction yields a valid star");
    (star, cert)
}

/// Backtracking 3-coloring for small graphs.
pub fn three_coloring(g: &StaticGraph) -> Option<Vec<u8>> {
    fn go(adj: &[Vec<bool>], colors: &mut Vec<u8>) -> bool {
        let v = colors.len();
        if v == adj.len() {
            return true;
        }
        for c in 0..3 {
            if (0..v).all(|u| !adj[v][u] || colors[u] != c) {
                colors.push(c);
                if go(adj, colors) {
                    return true;
                }
                colors.pop();
            }
        }
        false
    }
    let adj = g.adjacency_matrix();
    let mut colors = Vec::with_capacity(g.n());
    go(&adj, &mut colors).then_some(colors)
}

pub fn is_three_colorable(g: &StaticGraph) -> bool {
    three_coloring(g).is_some()
}

/// Twin-center construction with an anchor leaf forcing the circuit's ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleStarCertificate {
    /// Number of original star edges; leaf `j` is vertex `j + 2`.
    pub leaves: usize,
    /// Edges `c1 x_j` and `c2 x_j` are `2j` and `2j + 1`.
    pub dummy: Option<[EdgeId; 2]>,
    pub anchor: [EdgeId; 2],
    pub lifetime: Time,
}

pub const C1: VertexId = 0;
pub const C2: VertexId = 1;

impl DoubleStarCertificate {
    /// Turns an exploration into a circuit: leaf passes alternate between
    /// the centers starting from `c2`, then the dummy, then the anchor.
    pub fn exploration_to_circuit(&self, visits: &[Visit]) -> TemporalWalk {
        let mut order = visits.to_vec();
        order.sort_by_key(|v| v.enter);
        let mut steps = Vec::with_capacity(2 * order.len() + 4);
        let mut at = C2;
        for v in &order {
            let (out_edge, back_edge) =
                if at == C2 { (2 * v.edge + 1, 2 * v.edge) } else { (2 * v.edge, 2 * v.edge + 1) };
            steps.push(TimeEdge::new(out_edge, v.enter));
            steps.push(TimeEdge::new(back_edge, v.exit));
            at = if at == C2 { C1 } else { C2 };
        }
        if let Some([d1, d2]) = self.dummy {
            let (a, b) = if at == C2 { (d2, d1) } else { (d1, d2) };
            steps.push(TimeEdge::new(a, self.lifetime + 1));
            steps.push(TimeEdge::new(b, self.lifetime + 2));
        }
        steps.push(TimeEdge::new(self.anchor[0], self.lifetime + 3));
        steps.push(TimeEdge::new(self.anchor[1], self.lifetime + 4));
        TemporalWalk::new(C2, steps)
    }

    /// Each leaf is passed once; the pass times form its visit.
    pub fn circuit_to_exploration(&self, walk: &TemporalWalk) -> Option<Vec<Visit>> {
        let mut times: Vec<Vec<Time>> = vec![Vec::new(); self.leaves];
        for step in &walk.steps {
            if step.edge < 2 * self.leaves {
                times[step.edge / 2].push(step.time);
            }
        }
        times
            .into_iter()
            .enumerate()
            .map(|(j, t)| match t.as_slice() {
                &[a, b] => Some(Visit::new(j, a.min(b), a.max(b))),
                _ => None,
            })
            .collect()
    }
}

/// Splits the center into `c1 = 0` and `c2 = 1`, each joined to every leaf
/// with the leaf's original times. A dummy leaf keeps the leaf count odd and
/// an anchor leaf `z` (`c1 z` at `Λ + 3`, `c2 z` at `Λ + 4`) pins every
/// circuit to start at `c2`.
pub fn reduce_starexp_to_doublestar(s: &StarInstance) -> (TemporalGraph, DoubleStarCertificate) {
    let m = s.edge_count();
    let lifetime = s.graph().lifetime().unwrap_or(0);
    let mut triples = Vec::with_capacity(2 * m + 4);
    for j in 0..m {
        triples.push((C1, j + 2, s.times(j).to_vec()));
        triples.push((C2, j + 2, s.times(j).to_vec()));
    }
    let mut next_leaf = m + 2;
    let dummy = m.is_multiple_of(2).then(|| {
        let d = next_leaf;
        next_leaf += 1;
        triples.push((C1, d, vec![lifetime + 1, lifetime + 2]));
        triples.push((C2, d, vec![lifetime + 1, lifetime + 2]));
        [2 * m, 2 * m + 1]
    });
    let z = next_leaf;
    let anchor = [triples.len(), triples.len() + 1];
    triples.push((C1, z, vec![lifetime + 3]));
    triples.push((C2, z, vec![lifetime + 4]));
    let g = TemporalGraph::from_triples(z + 1, triples).expect("double star is simple");
    (g, DoubleStarCertificate { leaves: m, dummy, anchor, lifetime })
}

/// Vertex layout of the clique construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCertificate {
    pub r: usize,
    pub original_n: usize,
    pub original_m: usize,
    /// Disjoint edges appended to the source graph.
    pub padding_edges: usize,
    /// The (possibly padded) graph the instance was built from.
    pub graph: StaticGraph,
    pub source: VertexId,
    /// `s v_i` is edge `i` at time `i + 1`.
    pub vertex_edges: Vec<EdgeId>,
}

impl CliqueCertificate {
    pub fn vertex_node(&self, v: VertexId) -> VertexId {
        1 + v
    }

    /// Deleting the source edges of the clique's vertices.
    pub fn clique_to_deletions(&self, clique: &[VertexId]) -> Vec<TimeEdge> {
        let mut out: Vec<TimeEdge> =
            clique.iter().map(|&v| TimeEdge::new(self.vertex_edges[v], v as Time + 1)).collect();
        out.sort_unstable();
        out
    }

    /// The vertices whose source edge was deleted.
    pub fn deletions_to_clique(&self, deletions: &[TimeEdge]) -> Vec<VertexId> {
        let mut out: Vec<VertexId> =
            deletions.iter().filter_map(|d| self.vertex_edges.iter().position(|&e| e == d.edge)).collect();
        out.sort_unstable();
        out
    }
}

fn binom2(r: usize) -> usize {
    r * r.saturating_sub(1) / 2
}

/// MinReachDelete image of `(g, r)`: source `s`, a vertex node per vertex,
/// an edge node per edge and two incidence nodes per edge. Every time is used
/// by exactly one edge, so the image has interval-membership-width one.
///
/// For `r ≥ 3` the graph is first padded with disjoint edges until
/// `m > r + C(r, 2)`.
pub fn reduce_clique_to_mrd(g: &StaticGraph, r: usize) -> Result<(MrdInstance, CliqueCertificate), ReductionError> {
    if r < 2 {
        return Err(ReductionError::CliqueTooSmall(r));
    }
    let mut edges = g.edges().to_vec();
    let mut n = g.n();
    let mut padding_edges = 0;
    if r >= 3 {
        while edges.len() <= r + binom2(r) {
            edges.push((n, n + 1));
            n += 2;
            padding_edges += 1;
        }
    }
    let padded = StaticGraph::new(n, edges.clone()).expect("padding keeps the graph simple");
    let m = edges.len();
    let (nt, mt) = (n as Time, m as Time);
    let s = 0;
    let vnode = |v: VertexId| 1 + v;
    let enode = |j: usize| 1 + n + j;
    let wnode = |j: usize, side: usize| 1 + n + m + 2 * j + side;

    let mut triples = Vec::with_capacity(n + 6 * m);
    for v in 0..n {
        triples.push((s, vnode(v), vec![v as Time + 1]));
    }
    for (j, &(a, b)) in edges.iter().enumerate() {
        let base = nt + 4 * j as Time;
        triples.push((vnode(a), wnode(j, 0), vec![base + 1]));
        triples.push((wnode(j, 0), enode(j), vec![base + 2]));
        triples.push((vnode(b), wnode(j, 1), vec![base + 3]));
        triples.push((wnode(j, 1), enode(j), vec![base + 4]));
    }
    for j in 0..m {
        for side in 0..2 {
            let q = (2 * j + side) as Time;
            triples.push((s, wnode(j, side), vec![nt + 4 * mt + q + 1]));
        }
    }
    let graph = TemporalGraph::from_triples(1 + n + 3 * m, triples).expect("construction is simple");
    let h = 1 + (n - r.min(n)) + 2 * m + (m - binom2(r).min(m));
    let inst = MrdInstance::new(graph, vec![s], r, h).expect("source exists");
    let cert = CliqueCertificate {
        r,
        original_n: g.n(),
        original_m: g.m(),
        padding_edges,
        graph: padded,
        source: s,
        vertex_edges: (0..n).collect(),
    };
    Ok((inst, cert))
}

/// Some `r`-clique of `g`, by exhaustive search.
pub fn find_clique(g: &StaticGraph, r: usize) -> Option<Vec<VertexId>> {
    let adj = g.adjacency_matrix();
    (0..g.n()).combinations(r).find(|c| c.iter().tuple_combinations().all(|(&a, &b)| adj[a][b]))
}

pub fn is_connected(g: &StaticGraph) -> bool {
    if g.n() == 0 {
        return true;
    }
    let adj = g.adjacency_matrix();
    let mut seen = vec![false; g.n()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for u in 0..g.n() {
            if adj[v][u] && !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// One representative per isomorphism class of graphs on exactly `n`
/// vertices (`n ≤ 7`), in a fixed order.
pub fn nonisomorphic_graphs(n: usize) -> Vec<StaticGraph> {
    assert!(n <= 7, "enumeration is exhaustive over all labelled graphs");
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).expect("pair exists");
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let images: Vec<Vec<usize>> =
        perms.iter().map(|p| pairs.iter().map(|&(a, b)| index(p[a], p[b])).collect()).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let canon = images
            .iter()
            .map(|img| {
                img.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).fold(0u64, |acc, (_, &j)| acc | 1 << j)
            })
            .min()
            .unwrap_or(0);
        if seen.insert(canon) {
            let edges = pairs.iter().enumerate().filter(|&(i, _)| canon >> i & 1 == 1).map(|(_, &p)| p).collect();
            out.push(StaticGraph::new(n, edges).expect("simple"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reach::{brute_force_mrd, min_reach_delete_branching, temporal_reach_without};
    use crate::star::brute_force_star_exp_capped;
    use crate::verify::{verify_euler_circuit, verify_star_exploration};
    use crate::width::imw;

    fn k(n: usize) -> StaticGraph {
        StaticGraph::new(n, (0..n).tuple_combinations().collect()).unwrap()
    }

    #[test]
    fn coloring_times_for_triangle() {
        let (star, cert) = reduce_3col_to_starexp_scaled(&k(3), 3);
        assert_eq!(star.edge_count(), 12);
        assert_eq!(star.times(0), &[18, 26, 34, 42]);
        assert_eq!(star.times(cert.gadget_edge(0, 0)), &[21, 22, 37, 38]);
        assert!((0..12).all(|e| star.times(e).len() == 4));
    }

    #[test]
    fn unscaled_blocks_overlap_for_tiny_graphs() {
        let (star, _) = reduce_3col_to_starexp_scaled(&k(2), 2);
        assert_eq!(brute_force_star_exp_capped(&star, 63).unwrap(), None);
        let (star, _) = reduce_3col_to_starexp(&k(2));
        assert!(brute_force_star_exp_capped(&star, 63).unwrap().is_some());
    }

    #[test]
    fn triangle_image_is_explored_by_its_coloring() {
        let g = k(3);
        let (star, cert) = reduce_3col_to_starexp(&g);
        let coloring = three_coloring(&g).unwrap();
        let visits = cert.coloring_to_visits(&coloring).unwrap();
        assert_eq!(verify_star_exploration(&star, &visits), Ok(()));
        assert_eq!(cert.visits_to_coloring(&visits), Some(coloring));
        assert!(cert.coloring_to_visits(&[0, 0, 1]).is_err());
    }

    #[test]
    fn edgeless_image_is_explorable() {
        let g = StaticGraph::new(3, vec![]).unwrap();
        let (star, cert) = reduce_3col_to_starexp(&g);
        assert_eq!(star.edge_count(), 3);
        let visits = cert.coloring_to_visits(&[0, 0, 0]).unwrap();
        assert_eq!(verify_star_exploration(&star, &visits), Ok(()));
    }

    #[test]
    fn k4_image_is_not_explorable() {
        let (star, _) = reduce_3col_to_starexp(&k(4));
        assert!(!is_three_colorable(&k(4)));
        assert_eq!(brute_force_star_exp_capped(&star, 63).unwrap(), None);
    }

    #[test]
    fn double_star_examples() {
        let s = StarInstance::from_leaf_times(vec![vec![1, 2], vec![3, 4]]).unwrap();
        let (g, cert) = reduce_starexp_to_doublestar(&s);
        assert_eq!(g.m(), 8);
        assert!(cert.dummy.is_some());
        let w = cert.exploration_to_circuit(&[Visit::new(0, 1, 2), Visit::new(1, 3, 4)]);
        assert_eq!(verify_euler_circuit(&g, &w), Ok(()));
        assert_eq!(cert.circuit_to_exploration(&w), Some(vec![Visit::new(0, 1, 2), Visit::new(1, 3, 4)]));

        let odd = StarInstance::from_leaf_times(vec![vec![1, 2]]).unwrap();
        let (g, cert) = reduce_starexp_to_doublestar(&odd);
        assert_eq!((g.m(), cert.dummy), (4, None));
    }

    #[test]
    fn anchor_blocks_the_twin_center_shortcut() {
        // Not explorable, yet the bare twin-center graph has a circuit.
        let s = StarInstance::from_leaf_times(vec![vec![1, 10], vec![2, 3]]).unwrap();
        assert_eq!(crate::star::brute_force_star_exp(&s).unwrap(), None);
        let bare = TemporalGraph::from_triples(
            4,
            vec![(0, 2, vec![1, 10]), (1, 2, vec![1, 10]), (0, 3, vec![2, 3]), (1, 3, vec![2, 3])],
        )
        .unwrap();
        assert!(crate::euler::brute_force_temp_euler(&bare).unwrap().is_some());
        let (g, _) = reduce_starexp_to_doublestar(&s);
        assert_eq!(crate::euler::brute_force_temp_euler(&g).unwrap(), None);
    }

    #[test]
    fn four_leaf_double_star_is_not_eulerian() {
        let s = StarInstance::from_leaf_times(vec![vec![1, 9], vec![3, 5], vec![4, 6], vec![7, 8, 9]]).unwrap();
        let (g, _) = reduce_starexp_to_doublestar(&s);
        assert_eq!(g.m(), 12);
        assert_eq!(crate::euler::solve_temp_euler(&g).unwrap(), None);
    }

    #[test]
    fn clique_image_shape() {
        let g = StaticGraph::new(4, vec![(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let (inst, cert) = reduce_clique_to_mrd(&g, 2).unwrap();
        assert_eq!(cert.padding_edges, 0);
        assert_eq!(inst.graph.n(), 1 + 4 + 3 * 4);
        assert_eq!(imw(&inst.graph), 1);
        let mut times: Vec<Time> = inst.graph.edges().iter().flat_map(|e| e.times.clone()).collect();
        let total = times.len();
        times.sort_unstable();
        times.dedup();
        assert_eq!(times.len(), total);
        assert_eq!(inst.h, 1 + 2 + 8 + 3);
        assert!(reduce_clique_to_mrd(&g, 1).is_err());
    }

    #[test]
    fn k4_contains_a_triangle() {
        let (inst, cert) = reduce_clique_to_mrd(&k(4), 3).unwrap();
        assert!(cert.padding_edges > 0);
        assert!(inst.graph.m() > 0);
        let dels = cert.clique_to_deletions(&[0, 1, 2]);
        assert!(temporal_reach_without(&inst.graph, &inst.sources, &dels).len() <= inst.h);
        let found = min_reach_delete_branching(&inst).unwrap();
        let clique = cert.deletions_to_clique(&found);
        assert_eq!(clique.len(), 3);
        assert!(clique.iter().tuple_combinations().all(|(&a, &b)| cert.graph.has_edge(a, b)));
    }

    #[test]
    fn path_has_no_triangle_image() {
        let g = StaticGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let (inst, _) = reduce_clique_to_mrd(&g, 3).unwrap();
        assert_eq!(min_reach_delete_branching(&inst), None);
    }

    #[test]
    fn small_clique_image_matches_oracle() {
        let g = StaticGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let (inst, _) = reduce_clique_to_mrd(&g, 2).unwrap();
        assert_eq!(brute_force_mrd(&inst).unwrap().is_some(), find_clique(&g, 2).is_some());
    }

    #[test]
    fn graph_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| nonisomorphic_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34]);
        let connected: usize =
            (1..=5).map(|n| nonisomorphic_graphs(n).iter().filter(|g| is_connected(g)).count()).sum();
        assert_eq!(connected, 31);
    }

    #[test]
    fn coloring_oracle() {
        assert!(is_three_colorable(&k(3)));
        assert!(!is_three_colorable(&k(4)));
        let c5 = StaticGraph::new(5, (0..5).map(|i| (i, (i + 1) % 5)).collect()).unwrap();
        let col = three_coloring(&c5).unwrap();
        assert!(c5.edges().iter().all(|&(a, b)| col[a] != col[b]));
        assert_eq!(find_clique(&c5, 3), None);
        assert_eq!(find_clique(&k(4), 3), Some(vec![0, 1, 2]));
    }
}
