//! Temporal stars and their explorations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, EdgeId, GraphError, TemporalGraph, Time};

/// The star center is always vertex 0.
pub const CENTER: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StarError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge {0} is not incident with the center vertex 0")]
    NotIncidentWithCenter(EdgeId),
    #[error("a star on {n} vertices needs {expected} edges, found {found}")]
    WrongEdgeCount { n: usize, expected: usize, found: usize },
    #[error("edge {edge} has {count} times, more than the bound k = {k}")]
    TooManyTimes { edge: EdgeId, count: usize, k: usize },
}

/// A temporal star: center 0, leaves `1..n`, at most `k` times per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarInstance {
    graph: TemporalGraph,
    k: usize,
}

impl StarInstance {
    pub fn new(graph: TemporalGraph, k: usize) -> Result<Self, StarError> {
        let n = graph.n().max(1);
        if graph.m() != n - 1 {
            return Err(StarError::WrongEdgeCount { n, expected: n - 1, found: graph.m() });
        }
        for (id, e) in graph.edges().iter().enumerate() {
            if !e.has_endpoint(CENTER) {
                return Err(StarError::NotIncidentWithCenter(id));
            }
            if e.times.len() > k {
                return Err(StarError::TooManyTimes { edge: id, count: e.times.len(), k });
            }
        }
        Ok(StarInstance { graph, k })
    }

    /// Wraps a star-shaped graph, taking `k` as the measured maximum.
    pub fn from_graph(graph: TemporalGraph) -> Result<Self, StarError> {
        let k = graph.max_times_per_edge();
        Self::new(graph, k)
    }

    /// Star whose `i`-th edge joins the center with leaf `i + 1`.
    pub fn from_leaf_times(leaf_times: Vec<Vec<Time>>) -> Result<Self, StarError> {
        let n = leaf_times.len() + 1;
        let triples = leaf_times.into_iter().enumerate().map(|(i, t)| (CENTER, i + 1, t));
        let graph = TemporalGraph::from_triples(n, triples)?;
        Self::from_graph(graph)
    }

    pub fn graph(&self) -> &TemporalGraph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.graph.m()
    }

    pub fn times(&self, edge: EdgeId) -> &[Time] {
        &self.graph.edge(edge).times
    }

    pub fn leaf(&self, edge: EdgeId) -> usize {
        let e: &Edge = self.graph.edge(edge);
        e.other(CENTER).expect("star edges touch the center")
    }

    pub fn into_graph(self) -> TemporalGraph {
        self.graph
    }
}

/// Leaving the center along `edge` at `enter` and returning at `exit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Visit {
    pub edge: EdgeId,
    pub enter: Time,
    pub exit: Time,
}

impl Visit {
    pub fn new(edge: EdgeId, enter: Time, exit: Time) -> Self {
        Visit { edge, enter, exit }
    }

    /// Closed intervals `[enter, exit]` share a time.
    pub fn conflicts_with(&self, other: &Visit) -> bool {
        self.enter <= other.exit && other.enter <= self.exit
    }
}

/// One conflict-free visit per star edge, sorted by enter time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exploration {
    pub visits: Vec<Visit>,
}

impl Exploration {
    pub fn new(mut visits: Vec<Visit>) -> Self {
        visits.sort_by_key(|v| (v.enter, v.exit, v.edge));
        Exploration { visits }
    }
}
