//! Interval-membership bags and widths, for edges and for vertices.

use crate::graph::{EdgeId, TemporalGraph, Time, VertexId};

/// Edge bags `F_t` for `t = 1..=lifetime`. Edge `e` sits in every bag from
/// its first to its last activity time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeBagSequence {
    pub lifetime: Time,
    /// `bags[t - 1]` is `F_t`, sorted by edge index.
    pub bags: Vec<Vec<EdgeId>>,
    /// Per edge, the closed range of bags containing it.
    pub intervals: Vec<(Time, Time)>,
    pub width: usize,
    /// Number of bag insertions performed; equals the total bag mass.
    pub insertions: usize,
}

impl EdgeBagSequence {
    /// `F_t`, empty outside `1..=lifetime`.
    pub fn bag(&self, t: Time) -> &[EdgeId] {
        if t == 0 || t > self.lifetime {
            return &[];
        }
        &self.bags[(t - 1) as usize]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.bags.iter().map(Vec::len).collect()
    }
}

/// Vertex bags: `x` is in bag `t` iff some edge at `x` starts no later than
/// `t` and some edge at `x` ends no earlier than `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexBagSequence {
    pub lifetime: Time,
    pub bags: Vec<Vec<VertexId>>,
    /// `None` for isolated vertices.
    pub intervals: Vec<Option<(Time, Time)>>,
    pub width: usize,
    pub insertions: usize,
}

impl VertexBagSequence {
    pub fn bag(&self, t: Time) -> &[VertexId] {
        if t == 0 || t > self.lifetime {
            return &[];
        }
        &self.bags[(t - 1) as usize]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.bags.iter().map(Vec::len).collect()
    }
}

fn fill<I: Copy>(lifetime: Time, spans: impl Iterator<Item = (I, Time, Time)>) -> (Vec<Vec<I>>, usize, usize) {
    let mut bags = vec![Vec::new(); lifetime as usize];
    let mut insertions = 0;
    for (item, lo, hi) in spans {
        for bag in &mut bags[(lo - 1) as usize..hi as usize] {
            bag.push(item);
            insertions += 1;
        }
    }
    let width = bags.iter().map(Vec::len).max().unwrap_or(0);
    (bags, insertions, width)
}

pub fn edge_bag_sequence(g: &TemporalGraph) -> EdgeBagSequence {
    let lifetime = g.lifetime().unwrap_or(0);
    let intervals: Vec<(Time, Time)> = g.edges().iter().map(|e| (e.first_time(), e.last_time())).collect();
    // Edges are filled in index order, so every bag comes out sorted.
    let (bags, insertions, width) = fill(lifetime, intervals.iter().enumerate().map(|(e, &(a, b))| (e, a, b)));
    EdgeBagSequence { lifetime, bags, intervals, width, insertions }
}

pub fn imw(g: &TemporalGraph) -> usize {
    edge_bag_sequence(g).width
}

/// `(b_x, B_x)`: earliest first time and latest last time over edges at `x`.
pub fn vertex_intervals(g: &TemporalGraph) -> Vec<Option<(Time, Time)>> {
    let mut spans: Vec<Option<(Time, Time)>> = vec![None; g.n()];
    for e in g.edges() {
        for x in [e.u, e.v] {
            spans[x] = Some(match spans[x] {
                None => (e.first_time(), e.last_time()),
                Some((a, b)) => (a.min(e.first_time()), b.max(e.last_time())),
            });
        }
    }
    spans
}

pub fn vertex_bag_sequence(g: &TemporalGraph) -> VertexBagSequence {
    let lifetime = g.lifetime().unwrap_or(0);
    let intervals = vertex_intervals(g);
    let spans = intervals.iter().enumerate().filter_map(|(x, s)| s.map(|(a, b)| (x, a, b)));
    let (bags, insertions, width) = fill(lifetime, spans);
    VertexBagSequence { lifetime, bags, intervals, width, insertions }
}

pub fn vimw(g: &TemporalGraph) -> usize {
    vertex_bag_sequence(g).width
}

/// `t*`: the latest time whose bag contains every earlier bag, i.e. the
/// earliest last activity time over all edges.
pub fn seed_time(g: &TemporalGraph) -> Option<Time> {
    g.edges().iter().map(|e| e.last_time()).min()
}

/// `(t, size)` at `t = 1` and at every `t` where the bag size changes.
pub fn size_changes(sizes: &[usize]) -> Vec<(Time, usize)> {
    let mut out: Vec<(Time, usize)> = Vec::new();
    for (i, &s) in sizes.iter().enumerate() {
        if out.last().is_none_or(|&(_, prev)| prev != s) {
            out.push((i as Time + 1, s));
        }
    }
    out
}
