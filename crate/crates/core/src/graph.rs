//! Temporal graph data model.
//!
//! A [`TemporalGraph`] is a finite simple undirected graph on dense vertex ids
//! `0..n` together with a non-empty, strictly increasing list of activity
//! times per edge. Graphs are immutable once built; every solver in the crate
//! borrows them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Discrete time step. Valid times are `>= 1`.
pub type Time = u64;
/// Dense vertex id in `0..n`.
pub type VertexId = usize;
/// Index into [`TemporalGraph::edges`].
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge}: vertex {vertex} is out of range for {n} vertices")]
    VertexOutOfRange { edge: EdgeId, vertex: VertexId, n: usize },
    #[error("edge {edge}: self-loop on vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} duplicates edge {first} ({u}-{v})")]
    DuplicateEdge { edge: EdgeId, first: EdgeId, u: VertexId, v: VertexId },
    #[error("edge {edge} has an empty time list")]
    EmptyTimes { edge: EdgeId },
    #[error("edge {edge} has non-positive time 0")]
    NonPositiveTime { edge: EdgeId },
    #[error("edge {edge}: times are not strictly increasing")]
    TimesNotIncreasing { edge: EdgeId },
    #[error("time {time} is outside the lifetime 1..={lifetime}")]
    TimeOutOfRange { time: Time, lifetime: Time },
    #[error("graph has no edges, so its lifetime is empty")]
    EmptyLifetime,
    #[error("label table has {labels} entries for {n} vertices")]
    LabelCount { labels: usize, n: usize },
    #[error("invalid vertex label {0:?}")]
    InvalidLabel(String),
}

/// An undirected edge `u-v` with its sorted time-set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub times: Vec<Time>,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, times: Vec<Time>) -> Self {
        Edge { u, v, times }
    }

    pub fn first_time(&self) -> Time {
        self.times[0]
    }

    pub fn last_time(&self) -> Time {
        self.times[self.times.len() - 1]
    }

    pub fn is_active(&self, t: Time) -> bool {
        self.times.binary_search(&t).is_ok()
    }

    /// Smallest activity time strictly greater than `t`.
    pub fn next_time_after(&self, t: Time) -> Option<Time> {
        let idx = self.times.partition_point(|&x| x <= t);
        self.times.get(idx).copied()
    }

    pub fn has_endpoint(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite to `x`, if `x` is an endpoint.
    pub fn other(&self, x: VertexId) -> Option<VertexId> {
        if self.u == x {
            Some(self.v)
        } else if self.v == x {
            Some(self.u)
        } else {
            None
        }
    }

    /// Unordered endpoint pair, smaller id first.
    pub fn key(&self) -> (VertexId, VertexId) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

/// One appearance of an edge: the edge index and a time in its time-set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TimeEdge {
    pub edge: EdgeId,
    pub time: Time,
}

impl TimeEdge {
    pub fn new(edge: EdgeId, time: Time) -> Self {
        TimeEdge { edge, time }
    }
}

/// A walk given by its start vertex and the sequence of traversed time-edges.
/// The head position is implied: each step moves to the far endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalWalk {
    pub start: VertexId,
    pub steps: Vec<TimeEdge>,
}

impl TemporalWalk {
    pub fn new(start: VertexId, steps: Vec<TimeEdge>) -> Self {
        TemporalWalk { start, steps }
    }

    pub fn empty(start: VertexId) -> Self {
        TemporalWalk { start, steps: Vec::new() }
    }

    /// Vertices visited by the walk, starting with `start`. Stops early at the
    /// first step whose edge is not incident with the current head.
    pub fn vertices(&self, g: &TemporalGraph) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut head = self.start;
        out.push(head);
        for step in &self.steps {
            match g.edges.get(step.edge).and_then(|e| e.other(head)) {
                Some(next) => {
                    head = next;
                    out.push(head);
                }
                None => break,
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    n: usize,
    edges: Vec<Edge>,
    labels: Option<Vec<String>>,
    incidence: Vec<Vec<EdgeId>>,
}

impl TemporalGraph {
    /// Builds and validates a temporal graph. Time lists must already be
    /// sorted, deduplicated and positive.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut incidence = vec![Vec::new(); n];
        let mut seen = std::collections::HashMap::with_capacity(edges.len());
        for (id, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { edge: id, vertex: x, n });
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop { edge: id, vertex: e.u });
            }
            if let Some(&first) = seen.get(&e.key()) {
                return Err(GraphError::DuplicateEdge { edge: id, first, u: e.u, v: e.v });
            }
            seen.insert(e.key(), id);
            if e.times.is_empty() {
                return Err(GraphError::EmptyTimes { edge: id });
            }
            if e.times[0] == 0 {
                return Err(GraphError::NonPositiveTime { edge: id });
            }
            if e.times.windows(2).any(|w| w[0] >= w[1]) {
                return Err(GraphError::TimesNotIncreasing { edge: id });
            }
            incidence[e.u].push(id);
            incidence[e.v].push(id);
        }
        Ok(TemporalGraph { n, edges, labels: None, incidence })
    }

    /// Convenience constructor from `(u, v, times)` triples; times are sorted
    /// and deduplicated before validation.
    pub fn from_triples<I>(n: usize, triples: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId, Vec<Time>)>,
    {
        let edges = triples
            .into_iter()
            .map(|(u, v, mut times)| {
                times.sort_unstable();
                times.dedup();
                Edge::new(u, v, times)
            })
            .collect();
        Self::new(n, edges)
    }

    /// Attaches a vertex label table. Labels must be non-empty, unique and
    /// free of whitespace and `#`.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount { labels: labels.len(), n: self.n });
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if l.is_empty() || l.contains(char::is_whitespace) || l.contains('#') || !seen.insert(l) {
                return Err(GraphError::InvalidLabel(l.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of a vertex: its label if present, else its id.
    pub fn label(&self, v: VertexId) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    /// Edges incident with `v`, in increasing edge index.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v].len()
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.incidence[u].iter().copied().find(|&e| self.edges[e].other(u) == Some(v))
    }

    /// Largest time on any edge; `None` for an edgeless graph.
    pub fn lifetime(&self) -> Option<Time> {
        self.edges.iter().map(Edge::last_time).max()
    }

    /// `E_t`: the edges whose time-set contains `t`, in increasing index.
    pub fn active_edges_at(&self, t: Time) -> Result<Vec<EdgeId>, GraphError> {
        let lifetime = self.lifetime().ok_or(GraphError::EmptyLifetime)?;
        if t == 0 || t > lifetime {
            return Err(GraphError::TimeOutOfRange { time: t, lifetime });
        }
        Ok((0..self.edges.len()).filter(|&e| self.edges[e].is_active(t)).collect())
    }

    pub fn time_edge_count(&self) -> usize {
        self.edges.iter().map(|e| e.times.len()).sum()
    }

    /// All time-edges sorted by `(time, edge)`.
    pub fn time_edges(&self) -> Vec<TimeEdge> {
        let mut out: Vec<TimeEdge> = self
            .edges
            .iter()
            .enumerate()
            .flat_map(|(id, e)| e.times.iter().map(move |&t| TimeEdge::new(id, t)))
            .collect();
        out.sort_unstable_by_key(|te| (te.time, te.edge));
        out
    }

    /// Largest number of activity times on any edge.
    pub fn max_times_per_edge(&self) -> usize {
        self.edges.iter().map(|e| e.times.len()).max().unwrap_or(0)
    }

    /// Copy of the graph with the given appearances removed. Edges that lose
    /// every time are dropped; the returned map sends new edge ids to old ones.
    pub fn without_time_edges(&self, removed: &[TimeEdge]) -> (TemporalGraph, Vec<EdgeId>) {
        let removed: std::collections::HashSet<TimeEdge> = removed.iter().copied().collect();
        let mut edges = Vec::new();
        let mut back = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            let times: Vec<Time> =
                e.times.iter().copied().filter(|&t| !removed.contains(&TimeEdge::new(id, t))).collect();
            if !times.is_empty() {
                edges.push(Edge::new(e.u, e.v, times));
                back.push(id);
            }
        }
        let g = TemporalGraph::new(self.n, edges).expect("subgraph of a valid graph is valid");
        let g = match &self.labels {
            Some(l) => g.with_labels(l.clone()).expect("labels already validated"),
            None => g,
        };
        (g, back)
    }
}

/// A plain simple undirected graph, the source side of the hardness
/// constructions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaticGraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
}

impl StaticGraph {
    /// Validates simplicity; edges are stored with the smaller endpoint first.
    pub fn new(n: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self, GraphError> {
        let mut seen = std::collections::HashMap::new();
        let mut norm = Vec::with_capacity(edges.len());
        for (id, (u, v)) in edges.into_iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { edge: id, vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { edge: id, vertex: u });
            }
            let key = (u.min(v), u.max(v));
            if let Some(&first) = seen.get(&key) {
                return Err(GraphError::DuplicateEdge { edge: id, first, u, v });
            }
            seen.insert(key, id);
            norm.push(key);
        }
        Ok(StaticGraph { n, edges: norm })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.contains(&key)
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.n]; self.n];
        for &(u, v) in &self.edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_leaf_star() -> TemporalGraph {
        // c = 0, w = 1, x = 2, y = 3, z = 4
        TemporalGraph::from_triples(
            5,
            vec![(0, 1, vec![1, 9]), (0, 2, vec![3, 5]), (0, 3, vec![4, 6]), (0, 4, vec![7, 8, 9])],
        )
        .unwrap()
    }

    #[test]
    fn lifetime_examples() {
        assert_eq!(four_leaf_star().lifetime(), Some(9));
        let single = TemporalGraph::from_triples(2, vec![(0, 1, vec![1])]).unwrap();
        assert_eq!(single.lifetime(), Some(1));
        let two = TemporalGraph::from_triples(3, vec![(0, 1, vec![1, 10]), (1, 2, vec![2, 3])]).unwrap();
        assert_eq!(two.lifetime(), Some(10));
        let empty = TemporalGraph::new(3, vec![]).unwrap();
        assert_eq!(empty.lifetime(), None);
    }

    #[test]
    fn active_edges_examples() {
        let g = four_leaf_star();
        assert_eq!(g.active_edges_at(9).unwrap(), vec![0, 3]);
        assert!(g.active_edges_at(2).unwrap().is_empty());
        let tri = TemporalGraph::from_triples(3, vec![(0, 1, vec![1]), (1, 2, vec![2]), (2, 0, vec![3])]).unwrap();
        assert_eq!(tri.active_edges_at(2).unwrap(), vec![1]);
        assert!(matches!(g.active_edges_at(0), Err(GraphError::TimeOutOfRange { .. })));
        assert!(matches!(g.active_edges_at(10), Err(GraphError::TimeOutOfRange { .. })));
    }

    #[test]
    fn rejects_invalid_graphs() {
        assert!(matches!(TemporalGraph::from_triples(2, vec![(0, 0, vec![1])]), Err(GraphError::SelfLoop { .. })));
        assert!(matches!(
            TemporalGraph::from_triples(2, vec![(0, 1, vec![1]), (1, 0, vec![2])]),
            Err(GraphError::DuplicateEdge { .. })
        ));
        assert!(matches!(TemporalGraph::from_triples(2, vec![(0, 1, vec![])]), Err(GraphError::EmptyTimes { .. })));
        assert!(matches!(
            TemporalGraph::from_triples(2, vec![(0, 1, vec![0, 3])]),
            Err(GraphError::NonPositiveTime { .. })
        ));
        assert!(matches!(
            TemporalGraph::new(2, vec![Edge::new(0, 1, vec![3, 3])]),
            Err(GraphError::TimesNotIncreasing { .. })
        ));
        assert!(matches!(
            TemporalGraph::from_triples(2, vec![(0, 2, vec![1])]),
            Err(GraphError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn next_time_after_is_strict() {
        let e = Edge::new(0, 1, vec![2, 5, 9]);
        assert_eq!(e.next_time_after(0), Some(2));
        assert_eq!(e.next_time_after(2), Some(5));
        assert_eq!(e.next_time_after(8), Some(9));
        assert_eq!(e.next_time_after(9), None);
    }

    #[test]
    fn removing_time_edges_drops_empty_edges() {
        let g = four_leaf_star();
        let (h, back) = g.without_time_edges(&[TimeEdge::new(1, 3), TimeEdge::new(1, 5), TimeEdge::new(3, 8)]);
        assert_eq!(h.m(), 3);
        assert_eq!(back, vec![0, 2, 3]);
        assert_eq!(h.edge(2).times, vec![7, 9]);
    }
}
