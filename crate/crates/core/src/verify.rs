//! Witness verifiers. Both are pure and report the first violation found.

use thiserror::Error;

use crate::exploration::{StarInstance, Visit};
use crate::graph::{EdgeId, TemporalGraph, TemporalWalk, VertexId};

/// An exhaustive oracle refused an instance above its size cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{what} {size} exceeds the oracle cap {cap}")]
pub struct CapExceeded {
    pub what: &'static str,
    pub size: usize,
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitViolation {
    #[error("start vertex {0} is out of range")]
    StartOutOfRange(VertexId),
    #[error("step {step}: edge index {edge} does not exist")]
    UnknownEdge { step: usize, edge: EdgeId },
    #[error("step {step}: edge {edge} is not active at the given time")]
    InactiveTime { step: usize, edge: EdgeId },
    #[error("step {step}: edge {edge} is not incident with the current vertex")]
    NotIncident { step: usize, edge: EdgeId },
    #[error("step {step}: time does not strictly increase")]
    TimesNotIncreasing { step: usize },
    #[error("step {step}: edge {edge} is traversed a second time")]
    RepeatedEdge { step: usize, edge: EdgeId },
    #[error("edge {0} is never traversed")]
    MissingEdge(EdgeId),
    #[error("walk ends at {end}, not at its start {start}")]
    NotClosed { start: VertexId, end: VertexId },
}

/// Accepts exactly the strict temporal walks whose edge sequence is a static
/// Euler circuit of `g`.
pub fn verify_euler_circuit(g: &TemporalGraph, walk: &TemporalWalk) -> Result<(), CircuitViolation> {
    if walk.steps.is_empty() && g.m() == 0 {
        return Ok(());
    }
    if walk.start >= g.n() {
        return Err(CircuitViolation::StartOutOfRange(walk.start));
    }
    let mut used = vec![false; g.m()];
    let mut head = walk.start;
    let mut last_time = 0;
    for (step, te) in walk.steps.iter().enumerate() {
        let edge = g.edges().get(te.edge).ok_or(CircuitViolation::UnknownEdge { step, edge: te.edge })?;
        if !edge.is_active(te.time) {
            return Err(CircuitViolation::InactiveTime { step, edge: te.edge });
        }
        if step > 0 && te.time <= last_time {
            return Err(CircuitViolation::TimesNotIncreasing { step });
        }
        if used[te.edge] {
            return Err(CircuitViolation::RepeatedEdge { step, edge: te.edge });
        }
        head = edge.other(head).ok_or(CircuitViolation::NotIncident { step, edge: te.edge })?;
        used[te.edge] = true;
        last_time = te.time;
    }
    if let Some(missing) = used.iter().position(|&u| !u) {
        return Err(CircuitViolation::MissingEdge(missing));
    }
    if head != walk.start {
        return Err(CircuitViolation::NotClosed { start: walk.start, end: head });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplorationViolation {
    #[error("visit refers to unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("edge {0} is visited more than once")]
    DuplicateVisit(EdgeId),
    #[error("edge {0} is never visited")]
    MissingVisit(EdgeId),
    #[error("visit of edge {0} does not leave before it returns")]
    EmptyInterval(EdgeId),
    #[error("visit of edge {0} uses a time at which the edge is inactive")]
    InactiveTime(EdgeId),
    #[error("visits of edges {0} and {1} conflict")]
    Conflict(EdgeId, EdgeId),
}

/// Accepts exactly one visit per edge with pairwise disjoint closed intervals.
pub fn verify_star_exploration(s: &StarInstance, visits: &[Visit]) -> Result<(), ExplorationViolation> {
    let g = s.graph();
    let mut seen = vec![false; g.m()];
    for v in visits {
        let edge = g.edges().get(v.edge).ok_or(ExplorationViolation::UnknownEdge(v.edge))?;
        if std::mem::replace(&mut seen[v.edge], true) {
            return Err(ExplorationViolation::DuplicateVisit(v.edge));
        }
        if v.enter >= v.exit {
            return Err(ExplorationViolation::EmptyInterval(v.edge));
        }
        if !edge.is_active(v.enter) || !edge.is_active(v.exit) {
            return Err(ExplorationViolation::InactiveTime(v.edge));
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(ExplorationViolation::MissingVisit(missing));
    }
    let mut sorted: Vec<&Visit> = visits.iter().collect();
    sorted.sort_by_key(|v| (v.enter, v.exit));
    for pair in sorted.windows(2) {
        if pair[0].conflicts_with(pair[1]) {
            return Err(ExplorationViolation::Conflict(pair[0].edge, pair[1].edge));
        }
    }
    Ok(())
}
