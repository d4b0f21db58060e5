//! Temporal reachability and MinReachDelete: delete at most `k` time-edges
//! so that at most `h` vertices are temporally reachable from the sources.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use thiserror::Error;

use crate::graph::{TemporalGraph, Time, TimeEdge, VertexId};
use crate::verify::CapExceeded;
use crate::width::vertex_intervals;

/// Vertices reachable from `sources` by strict temporal paths, sources
/// included, sorted.
pub fn temporal_reach(g: &TemporalGraph, sources: &[VertexId]) -> Vec<VertexId> {
    temporal_reach_without(g, sources, &[])
}

pub fn temporal_reach_without(g: &TemporalGraph, sources: &[VertexId], deleted: &[TimeEdge]) -> Vec<VertexId> {
    reach_forest(g, sources, deleted).iter().enumerate().filter(|(_, a)| a.is_some()).map(|(v, _)| v).collect()
}

/// How a vertex was first reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arrival {
    Source,
    /// Reached at `via.time` from `from` along `via`.
    Via {
        from: VertexId,
        via: TimeEdge,
    },
}

/// First-arrival forest: one sweep over time-edges in time order, where a
/// vertex reached at `t` may leave at times after `t` only.
pub fn reach_forest(g: &TemporalGraph, sources: &[VertexId], deleted: &[TimeEdge]) -> Vec<Option<Arrival>> {
    let deleted: HashSet<TimeEdge> = deleted.iter().copied().collect();
    let mut arrival: Vec<Option<Arrival>> = vec![None; g.n()];
    let mut reached_at: Vec<Option<Time>> = vec![None; g.n()];
    for &s in sources {
        arrival[s] = Some(Arrival::Source);
        reached_at[s] = Some(0);
    }
    for te in g.time_edges() {
        if deleted.contains(&te) {
            continue;
        }
        let e = g.edge(te.edge);
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            if reached_at[a].is_some_and(|t| t < te.time) && reached_at[b].is_none() {
                reached_at[b] = Some(te.time);
                arrival[b] = Some(Arrival::Via { from: a, via: te });
            }
        }
    }
    arrival
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MrdError {
    #[error("source vertex {0} is out of range")]
    SourceOutOfRange(VertexId),
    #[error("vertex bag of size {width} exceeds the supported maximum {cap}")]
    BagTooLarge { width: usize, cap: usize },
    #[error("{count} useful time-edges at time {time} exceed the supported maximum {cap}")]
    TooManyActive { time: Time, count: usize, cap: usize },
    #[error("layer at time {time} exceeds {cap} states")]
    TooManyStates { time: Time, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrdInstance {
    pub graph: TemporalGraph,
    /// Sorted, deduplicated.
    pub sources: Vec<VertexId>,
    pub k: usize,
    pub h: usize,
}

impl MrdInstance {
    pub fn new(graph: TemporalGraph, mut sources: Vec<VertexId>, k: usize, h: usize) -> Result<Self, MrdError> {
        if let Some(&bad) = sources.iter().find(|&&s| s >= graph.n()) {
            return Err(MrdError::SourceOutOfRange(bad));
        }
        sources.sort_unstable();
        sources.dedup();
        Ok(MrdInstance { graph, sources, k, h })
    }

    /// Whether deleting `deletions` meets both budgets.
    pub fn accepts(&self, deletions: &[TimeEdge]) -> bool {
        let unique: HashSet<&TimeEdge> = deletions.iter().collect();
        unique.len() == deletions.len()
            && deletions.len() <= self.k
            && deletions.iter().all(|te| te.edge < self.graph.m() && self.graph.edge(te.edge).is_active(te.time))
            && temporal_reach_without(&self.graph, &self.sources, deletions).len() <= self.h
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrdConfig {
    /// Drop states another state of the same layer provably does as well as.
    pub prune: bool,
    pub max_bag: usize,
    /// Cap on time-edges per step that could be worth deleting.
    pub max_active: usize,
    pub max_states: usize,
}

impl Default for MrdConfig {
    fn default() -> Self {
        MrdConfig { prune: true, max_bag: 64, max_active: 20, max_states: 5_000_000 }
    }
}

/// `(r, f)` with its cost: `r` counts reached vertices (sources included),
/// bit `j` of `flags` marks the `j`-th vertex of the current bag as reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReachState {
    pub r: usize,
    pub flags: u64,
    pub cost: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrdRun {
    /// Minimum-size deletion set, sorted, if the instance is a yes.
    pub deletions: Option<Vec<TimeEdge>>,
    pub peak_layer: usize,
    pub layers: usize,
    pub vertex_width: usize,
}

struct Layer {
    states: Vec<ReachState>,
    preds: Vec<(usize, Vec<TimeEdge>)>,
}

pub fn solve_min_reach_delete(inst: &MrdInstance) -> Result<Option<Vec<TimeEdge>>, MrdError> {
    Ok(run_min_reach_delete(inst, &MrdConfig::default())?.deletions)
}

fn dominates(t: &ReachState, s: &ReachState) -> bool {
    t.flags & !s.flags == 0 && t.cost <= s.cost && t.r + (s.flags & !t.flags).count_ones() as usize <= s.r
}

/// The layered dynamic program over vertex bags. Only times with activity
/// get a layer: between them flags can only be dropped by vertices leaving
/// the bag or set for sources entering it.
pub fn run_min_reach_delete(inst: &MrdInstance, config: &MrdConfig) -> Result<MrdRun, MrdError> {
    let g = &inst.graph;
    let spans = vertex_intervals(g);
    let is_source = {
        let mut v = vec![false; g.n()];
        for &s in &inst.sources {
            v[s] = true;
        }
        v
    };
    let mut by_time: HashMap<Time, Vec<TimeEdge>> = HashMap::new();
    for te in g.time_edges() {
        by_time.entry(te.time).or_default().push(te);
    }
    let mut times: Vec<Time> = by_time.keys().copied().collect();
    times.sort_unstable();

    let start = ReachState { r: inst.sources.len(), flags: 0, cost: 0 };
    if start.r > inst.h {
        return Ok(MrdRun { deletions: None, peak_layer: 0, layers: 0, vertex_width: 0 });
    }
    let mut layers = vec![Layer { states: vec![start], preds: vec![(usize::MAX, Vec::new())] }];
    let mut bag: Vec<VertexId> = Vec::new();
    let mut peak = 1;
    let mut vertex_width = 0;

    for &t in &times {
        let next_bag: Vec<VertexId> = (0..g.n()).filter(|&x| spans[x].is_some_and(|(a, b)| a <= t && t <= b)).collect();
        vertex_width = vertex_width.max(next_bag.len());
        if next_bag.len() > config.max_bag.min(64) {
            return Err(MrdError::BagTooLarge { width: next_bag.len(), cap: config.max_bag.min(64) });
        }
        let pos: HashMap<VertexId, usize> = next_bag.iter().enumerate().map(|(j, &x)| (x, j)).collect();
        let remap: Vec<(usize, usize)> =
            bag.iter().enumerate().filter_map(|(i, x)| pos.get(x).map(|&j| (i, j))).collect();
        let mut source_bits = 0u64;
        for (j, &x) in next_bag.iter().enumerate() {
            if is_source[x] {
                source_bits |= 1 << j;
            }
        }
        let active: Vec<(TimeEdge, usize, usize)> = by_time[&t]
            .iter()
            .map(|&te| {
                let e = g.edge(te.edge);
                (te, pos[&e.u], pos[&e.v])
            })
            .collect();

        let prev = layers.last().expect("initial layer");
        let mut index: HashMap<(usize, u64), usize> = HashMap::new();
        let mut next = Layer { states: Vec::new(), preds: Vec::new() };
        for (pi, st) in prev.states.iter().enumerate() {
            let mut flags = source_bits;
            for &(i, j) in &remap {
                flags |= (st.flags >> i & 1) << j;
            }
            // Only edges from a reached to an unreached vertex can spread
            // reachability now; deleting any other appearance is wasted.
            let useful: Vec<(TimeEdge, usize, usize)> = active
                .iter()
                .filter(|&&(_, a, b)| (flags >> a & 1) != (flags >> b & 1))
                .map(|&(te, a, b)| if flags >> a & 1 == 1 { (te, a, b) } else { (te, b, a) })
                .collect();
            if useful.len() > config.max_active {
                return Err(MrdError::TooManyActive { time: t, count: useful.len(), cap: config.max_active });
            }
            let budget = inst.k - st.cost;
            for size in 0..=budget.min(useful.len()) {
                for chosen in (0..useful.len()).combinations(size) {
                    let mut newly = 0u64;
                    let mut c = 0;
                    for (idx, &(_, _, b)) in useful.iter().enumerate() {
                        if c < chosen.len() && chosen[c] == idx {
                            c += 1;
                            continue;
                        }
                        newly |= 1 << b;
                    }
                    let r = st.r + newly.count_ones() as usize;
                    if r > inst.h {
                        continue;
                    }
                    let cost = st.cost + size;
                    let key = (r, flags | newly);
                    match index.get(&key) {
                        Some(&at) if next.states[at].cost <= cost => {}
                        Some(&at) => {
                            next.states[at].cost = cost;
                            next.preds[at] = (pi, chosen.iter().map(|&i| useful[i].0).collect());
                        }
                        None => {
                            index.insert(key, next.states.len());
                            next.states.push(ReachState { r, flags: key.1, cost });
                            next.preds.push((pi, chosen.iter().map(|&i| useful[i].0).collect()));
                        }
                    }
                }
            }
            if next.states.len() > config.max_states {
                return Err(MrdError::TooManyStates { time: t, cap: config.max_states });
            }
        }

        let mut order: Vec<usize> = (0..next.states.len()).collect();
        order.sort_by_key(|&i| (next.states[i].r, next.states[i].flags));
        if config.prune {
            let states = &next.states;
            order = order
                .iter()
                .copied()
                .filter(|&i| !order.iter().any(|&j| j != i && dominates(&states[j], &states[i])))
                .collect();
        }
        let layer = Layer {
            states: order.iter().map(|&i| next.states[i]).collect(),
            preds: order.iter().map(|&i| next.preds[i].clone()).collect(),
        };
        peak = peak.max(layer.states.len());
        let empty = layer.states.is_empty();
        layers.push(layer);
        bag = next_bag;
        if empty {
            break;
        }
    }

    let last = layers.last().expect("initial layer");
    let best = (0..last.states.len()).min_by_key(|&i| (last.states[i].cost, i));
    let deletions = best.map(|mut idx| {
        let mut out = Vec::new();
        for layer in layers.iter().skip(1).rev() {
            let (pred, dels) = &layer.preds[idx];
            out.extend(dels.iter().copied());
            idx = *pred;
        }
        out.sort_unstable();
        out
    });
    Ok(MrdRun { deletions, peak_layer: peak, layers: layers.len() - 1, vertex_width })
}

pub const DEFAULT_MRD_ORACLE_CAP: usize = 1_000_000;

fn subsets_up_to(total: usize, k: usize) -> u128 {
    let mut sum = 0u128;
    let mut binom = 1u128;
    for i in 0..=k.min(total) {
        sum += binom;
        binom = binom * (total - i) as u128 / (i as u128 + 1);
    }
    sum
}

pub fn brute_force_mrd(inst: &MrdInstance) -> Result<Option<Vec<TimeEdge>>, CapExceeded> {
    brute_force_mrd_capped(inst, DEFAULT_MRD_ORACLE_CAP)
}

/// Tries every set of at most `k` time-edges by increasing size.
pub fn brute_force_mrd_capped(inst: &MrdInstance, cap: usize) -> Result<Option<Vec<TimeEdge>>, CapExceeded> {
    let all = inst.graph.time_edges();
    let count = subsets_up_to(all.len(), inst.k);
    if count > cap as u128 {
        return Err(CapExceeded { what: "candidate deletion sets", size: count.min(usize::MAX as u128) as usize, cap });
    }
    for size in 0..=inst.k.min(all.len()) {
        for chosen in all.iter().copied().combinations(size) {
            if temporal_reach_without(&inst.graph, &inst.sources, &chosen).len() <= inst.h {
                let mut chosen = chosen;
                chosen.sort_unstable();
                return Ok(Some(chosen));
            }
        }
    }
    Ok(None)
}

/// Exact search by iterative deepening. Every solution must cut the current
/// first-arrival forest, so only forest edges are branched on, and deleting
/// a forest edge unreaches at most its subtree.
pub fn min_reach_delete_branching(inst: &MrdInstance) -> Option<Vec<TimeEdge>> {
    struct Search<'a> {
        inst: &'a MrdInstance,
        seen: HashSet<Vec<TimeEdge>>,
    }
    impl Search<'_> {
        fn go(&mut self, deleted: &mut Vec<TimeEdge>, budget: usize) -> bool {
            let g = &self.inst.graph;
            let forest = reach_forest(g, &self.inst.sources, deleted);
            let reached = forest.iter().filter(|a| a.is_some()).count();
            if reached <= self.inst.h {
                return true;
            }
            if budget == 0 {
                return false;
            }
            let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); g.n()];
            let mut tree_edges = Vec::new();
            for (v, a) in forest.iter().enumerate() {
                if let Some(Arrival::Via { from, via }) = a {
                    children[*from].push(v);
                    tree_edges.push((*via, v));
                }
            }
            fn size(children: &[Vec<VertexId>], v: VertexId) -> usize {
                1 + children[v].iter().map(|&c| size(children, c)).sum::<usize>()
            }
            let mut ranked: Vec<(usize, TimeEdge)> =
                tree_edges.iter().map(|&(te, v)| (size(&children, v), te)).collect();
            ranked.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            // Vertices that end up unreached all lie in subtrees of deleted
            // forest edges, so a branch on `te` needs its subtree plus the
            // largest `budget − 1` others to cover the excess.
            let need = reached - self.inst.h;
            let top: usize = ranked.iter().take(budget).map(|x| x.0).sum();
            let lead: usize = ranked.iter().take(budget - 1).map(|x| x.0).sum();
            for (i, (sub, te)) in ranked.into_iter().enumerate() {
                let best = if i < budget { top } else { lead + sub };
                if best < need {
                    break;
                }
                deleted.push(te);
                let mut key = deleted.clone();
                key.sort_unstable();
                if self.seen.insert(key) && self.go(deleted, budget - 1) {
                    return true;
                }
                deleted.pop();
            }
            false
        }
    }
    for depth in 0..=inst.k {
        let mut search = Search { inst, seen: HashSet::new() };
        let mut deleted = Vec::new();
        if search.go(&mut deleted, depth) {
            deleted.sort_unstable();
            return Some(deleted);
        }
    }
    None
}
