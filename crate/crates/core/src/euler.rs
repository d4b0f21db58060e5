//! Temporal Euler circuits: the bag dynamic program with witness
//! reconstruction, an exhaustive oracle, and the bounded-gap win-win entry.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::graph::{EdgeId, TemporalGraph, TemporalWalk, Time, TimeEdge, VertexId};
use crate::verify::CapExceeded;
use crate::width::seed_time;

pub const DEFAULT_MAX_WIDTH: usize = 64;
pub const DEFAULT_MAX_STATES: usize = 20_000_000;
pub const DEFAULT_EULER_ORACLE_CAP: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerConfig {
    /// Largest supported bag; flags live in a `u64`.
    pub max_width: usize,
    /// Largest supported layer.
    pub max_states: usize,
}

impl Default for EulerConfig {
    fn default() -> Self {
        EulerConfig { max_width: DEFAULT_MAX_WIDTH, max_states: DEFAULT_MAX_STATES }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EulerError {
    #[error("interval-membership-width {width} exceeds the supported maximum {cap}")]
    WidthTooLarge { width: usize, cap: usize },
    #[error("layer at time {time} exceeds {cap} states")]
    TooManyStates { time: Time, cap: usize },
}

/// `(f, s, x)`: traversal flags over the current bag (bit `j` belongs to the
/// `j`-th smallest edge index of the bag), start vertex, current vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EulerState {
    pub flags: u64,
    pub start: VertexId,
    pub at: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerLayer {
    /// 0 for the seed layer.
    pub time: Time,
    pub bag: Vec<EdgeId>,
    pub states: Vec<EulerState>,
    /// Per state: index of its predecessor in the previous layer and the
    /// time-edge taken, `None` for staying put.
    pub preds: Vec<(usize, Option<TimeEdge>)>,
}

impl EulerLayer {
    pub fn flagged_edges(&self, s: &EulerState) -> Vec<EdgeId> {
        self.bag.iter().enumerate().filter(|&(j, _)| s.flags >> j & 1 == 1).map(|(_, &e)| e).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerStats {
    pub time: Time,
    pub states: usize,
    pub bag: usize,
    pub end_vertices: usize,
    pub transitions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerRun {
    pub walk: Option<TemporalWalk>,
    /// Seed layer first, then one layer per non-trivial time step. Times at
    /// which nothing is active and no edge leaves the bag repeat the
    /// previous layer and are skipped.
    pub layers: Vec<EulerLayer>,
    pub stats: Vec<LayerStats>,
    pub width: usize,
    pub seed_time: Option<Time>,
}

impl EulerRun {
    pub fn peak_layer(&self) -> usize {
        self.stats.iter().map(|s| s.states).max().unwrap_or(0)
    }
}

pub fn solve_temp_euler(g: &TemporalGraph) -> Result<Option<TemporalWalk>, EulerError> {
    Ok(run_temp_euler(g, &EulerConfig::default())?.walk)
}

fn full_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Runs the dynamic program and keeps every layer.
pub fn run_temp_euler(g: &TemporalGraph, config: &EulerConfig) -> Result<EulerRun, EulerError> {
    let cap = config.max_width.min(64);
    let Some(t_star) = seed_time(g) else {
        return Ok(EulerRun {
            walk: Some(TemporalWalk::empty(0)),
            layers: Vec::new(),
            stats: Vec::new(),
            width: 0,
            seed_time: None,
        });
    };

    // Every time at which some edge is active or some edge leaves the bag.
    let lifetime = g.lifetime().expect("graph has edges");
    let mut events: BTreeMap<Time, Vec<EdgeId>> = BTreeMap::new();
    for (id, e) in g.edges().iter().enumerate() {
        for &t in &e.times {
            events.entry(t).or_default().push(id);
        }
        if e.last_time() < lifetime {
            events.entry(e.last_time() + 1).or_default();
        }
    }

    let mut seeds: Vec<VertexId> =
        g.edges().iter().filter(|e| e.first_time() <= t_star).flat_map(|e| [e.u, e.v]).collect();
    seeds.sort_unstable();
    seeds.dedup();
    let seed_states: Vec<EulerState> = seeds.iter().map(|&x| EulerState { flags: 0, start: x, at: x }).collect();
    let mut layers = vec![EulerLayer {
        time: 0,
        bag: Vec::new(),
        preds: vec![(usize::MAX, None); seed_states.len()],
        states: seed_states,
    }];
    let mut stats = Vec::new();
    let mut width = 0;

    for (&t, active) in &events {
        let prev = layers.last().expect("seed layer");
        let mut bag: Vec<EdgeId> = prev.bag.iter().copied().filter(|&e| g.edge(e).last_time() >= t).collect();
        bag.extend(active.iter().copied().filter(|&e| g.edge(e).first_time() == t));
        bag.sort_unstable();
        width = width.max(bag.len());
        if bag.len() > cap {
            return Err(EulerError::WidthTooLarge { width: bag.len(), cap });
        }

        let mut expiring: u64 = 0;
        let mut remap: Vec<(usize, usize)> = Vec::with_capacity(bag.len());
        for (i, &e) in prev.bag.iter().enumerate() {
            match bag.binary_search(&e) {
                Ok(j) => remap.push((i, j)),
                Err(_) => expiring |= 1 << i,
            }
        }
        let moves: Vec<(usize, EdgeId)> =
            active.iter().map(|&e| (bag.binary_search(&e).expect("active edges are in the bag"), e)).collect();

        let mut index: HashMap<EulerState, usize> = HashMap::new();
        let mut states = Vec::new();
        let mut preds = Vec::new();
        let mut transitions = 0;
        let mut push = |state: EulerState, pred: (usize, Option<TimeEdge>), states: &mut Vec<EulerState>| {
            if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(state) {
                slot.insert(states.len());
                states.push(state);
                preds.push(pred);
            }
        };
        for (pi, st) in prev.states.iter().enumerate() {
            if st.flags & expiring != expiring {
                continue;
            }
            let mut flags = 0u64;
            for &(i, j) in &remap {
                flags |= (st.flags >> i & 1) << j;
            }
            for &(j, e) in &moves {
                if flags >> j & 1 == 1 {
                    continue;
                }
                if let Some(next) = g.edge(e).other(st.at) {
                    transitions += 1;
                    let state = EulerState { flags: flags | 1 << j, start: st.start, at: next };
                    push(state, (pi, Some(TimeEdge::new(e, t))), &mut states);
                }
            }
            transitions += 1;
            push(EulerState { flags, start: st.start, at: st.at }, (pi, None), &mut states);
            if states.len() > config.max_states {
                return Err(EulerError::TooManyStates { time: t, cap: config.max_states });
            }
        }

        let mut ends: Vec<VertexId> = states.iter().map(|s| s.at).collect();
        ends.sort_unstable();
        ends.dedup();
        stats.push(LayerStats { time: t, states: states.len(), bag: bag.len(), end_vertices: ends.len(), transitions });
        let empty = states.is_empty();
        layers.push(EulerLayer { time: t, bag, states, preds });
        if empty {
            break;
        }
    }

    let last = layers.last().expect("seed layer");
    let walk = if last.time == lifetime {
        let full = full_mask(last.bag.len());
        last.states.iter().position(|s| s.flags == full && s.start == s.at).map(|idx| reconstruct(&layers, idx))
    } else {
        None
    };
    Ok(EulerRun { walk, layers, stats, width, seed_time: Some(t_star) })
}

fn reconstruct(layers: &[EulerLayer], mut idx: usize) -> TemporalWalk {
    let start = layers.last().expect("non-empty").states[idx].start;
    let mut steps = Vec::new();
    for layer in layers.iter().skip(1).rev() {
        let (pred, step) = layer.preds[idx];
        steps.extend(step);
        idx = pred;
    }
    steps.reverse();
    TemporalWalk::new(start, steps)
}

/// Exhaustive search over edge orders from every start vertex; each order is
/// given its earliest strictly increasing times.
pub fn brute_force_temp_euler(g: &TemporalGraph) -> Result<Option<TemporalWalk>, CapExceeded> {
    brute_force_temp_euler_capped(g, DEFAULT_EULER_ORACLE_CAP)
}

pub fn brute_force_temp_euler_capped(g: &TemporalGraph, cap: usize) -> Result<Option<TemporalWalk>, CapExceeded> {
    check_cap(g, cap)?;
    if g.m() == 0 {
        return Ok(Some(TemporalWalk::empty(0)));
    }
    for start in (0..g.n()).filter(|&x| g.degree(x) > 0) {
        if let Some(w) = search_from(g, start) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Like [`brute_force_temp_euler`] but only for circuits starting at `start`.
pub fn brute_force_temp_euler_from(
    g: &TemporalGraph,
    start: VertexId,
    cap: usize,
) -> Result<Option<TemporalWalk>, CapExceeded> {
    check_cap(g, cap)?;
    if g.m() == 0 {
        return Ok(Some(TemporalWalk::empty(start)));
    }
    Ok(search_from(g, start))
}

fn check_cap(g: &TemporalGraph, cap: usize) -> Result<(), CapExceeded> {
    if g.m() > cap.min(63) {
        return Err(CapExceeded { what: "edge count", size: g.m(), cap: cap.min(63) });
    }
    Ok(())
}

fn search_from(g: &TemporalGraph, start: VertexId) -> Option<TemporalWalk> {
    fn dfs(g: &TemporalGraph, start: VertexId, at: VertexId, time: Time, used: u64, steps: &mut Vec<TimeEdge>) -> bool {
        if used == full_mask(g.m()) {
            return at == start;
        }
        for &e in g.incident(at) {
            if used >> e & 1 == 1 {
                continue;
            }
            let edge = g.edge(e);
            if let Some(t) = edge.next_time_after(time) {
                steps.push(TimeEdge::new(e, t));
                if dfs(g, start, edge.other(at).expect("incident"), t, used | 1 << e, steps) {
                    return true;
                }
                steps.pop();
            }
        }
        false
    }
    let mut steps = Vec::new();
    dfs(g, start, start, 0, 0, &mut steps).then(|| TemporalWalk::new(start, steps))
}

/// Outcome of a win-win entry point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WinWin<W> {
    /// The width bound alone proves there is no solution.
    CertifiedNo { width: usize, bound: u64 },
    /// The bound held and the exact solver ran.
    Decided(Option<W>),
}

impl<W> WinWin<W> {
    pub fn witness(&self) -> Option<&W> {
        match self {
            WinWin::Decided(Some(w)) => Some(w),
            _ => None,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.witness().is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WinWinError {
    #[error("edge {edge} has {count} times, more than k = {k}")]
    TooManyTimes { edge: EdgeId, count: usize, k: usize },
    #[error("edge {edge} has a gap of {gap}, more than u = {u}")]
    GapAboveMax { edge: EdgeId, gap: Time, u: Time },
    #[error("edge {edge} has a gap of {gap}, less than l = {l}")]
    GapBelowMin { edge: EdgeId, gap: Time, l: Time },
    #[error("l = {l} exceeds u = {u}")]
    InvertedGaps { l: Time, u: Time },
    #[error(transparent)]
    Solver(#[from] EulerError),
}

/// Smallest and largest gap between consecutive times of one edge, over all
/// edges; `None` when no edge has two times.
pub fn gap_range(g: &TemporalGraph) -> Option<(Time, Time)> {
    g.edges().iter().flat_map(|e| e.times.windows(2).map(|w| w[1] - w[0])).fold(None, |acc, gap| match acc {
        None => Some((gap, gap)),
        Some((lo, hi)) => Some((lo.min(gap), hi.max(gap))),
    })
}

/// Checks `≤ k` times per edge and every gap in `[l, u]`.
pub fn validate_gaps(g: &TemporalGraph, k: usize, l: Time, u: Time) -> Result<(), WinWinError> {
    if l > u {
        return Err(WinWinError::InvertedGaps { l, u });
    }
    for (id, e) in g.edges().iter().enumerate() {
        if e.times.len() > k {
            return Err(WinWinError::TooManyTimes { edge: id, count: e.times.len(), k });
        }
        for w in e.times.windows(2) {
            let gap = w[1] - w[0];
            if gap > u {
                return Err(WinWinError::GapAboveMax { edge: id, gap, u });
            }
            if gap < l {
                return Err(WinWinError::GapBelowMin { edge: id, gap, l });
            }
        }
    }
    Ok(())
}

/// `2(k−1)u + 1`, the largest width a temporally Eulerian graph can have.
pub fn euler_width_bound(k: usize, u: Time) -> u64 {
    2u64.saturating_mul(k.saturating_sub(1) as u64).saturating_mul(u).saturating_add(1)
}

/// Certifies "no" when the width exceeds the bound, else runs the DP. `k`
/// and `u` default to the values measured on `g`.
pub fn solve_temp_euler_winwin(
    g: &TemporalGraph,
    k: Option<usize>,
    u: Option<Time>,
) -> Result<WinWin<TemporalWalk>, WinWinError> {
    let k = k.unwrap_or_else(|| g.max_times_per_edge());
    let u = u.unwrap_or_else(|| gap_range(g).map_or(0, |(_, hi)| hi));
    validate_gaps(g, k, 0, u)?;
    let bound = euler_width_bound(k, u);
    let width = crate::width::imw(g);
    if width as u64 > bound {
        return Ok(WinWin::CertifiedNo { width, bound });
    }
    Ok(WinWin::Decided(solve_temp_euler(g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_euler_circuit;

    fn triangle(times: [Vec<Time>; 3]) -> TemporalGraph {
        let [a, b, c] = times;
        TemporalGraph::from_triples(3, vec![(0, 1, a), (1, 2, b), (2, 0, c)]).unwrap()
    }

    #[test]
    fn triangle_circuit() {
        let g = triangle([vec![1], vec![2], vec![3]]);
        let w = solve_temp_euler(&g).unwrap().unwrap();
        assert_eq!(w, TemporalWalk::new(0, vec![TimeEdge::new(0, 1), TimeEdge::new(1, 2), TimeEdge::new(2, 3)]));
        assert_eq!(verify_euler_circuit(&g, &w), Ok(()));
        assert_eq!(brute_force_temp_euler(&g).unwrap(), Some(w));
    }

    #[test]
    fn simultaneous_triangle_is_not_eulerian() {
        let g = triangle([vec![1], vec![1], vec![1]]);
        assert_eq!(solve_temp_euler(&g).unwrap(), None);
        assert_eq!(brute_force_temp_euler(&g).unwrap(), None);
    }

    #[test]
    fn reversed_triangle_is_eulerian() {
        let g = triangle([vec![3], vec![2], vec![1]]);
        let w = brute_force_temp_euler(&g).unwrap().unwrap();
        assert_eq!(verify_euler_circuit(&g, &w), Ok(()));
        let w = solve_temp_euler(&g).unwrap().unwrap();
        assert_eq!(verify_euler_circuit(&g, &w), Ok(()));
    }

    #[test]
    fn odd_degree_has_no_circuit() {
        let g =
            TemporalGraph::from_triples(4, vec![(0, 1, vec![1]), (1, 2, vec![2]), (2, 3, vec![3]), (3, 1, vec![4])])
                .unwrap();
        assert_eq!(brute_force_temp_euler(&g).unwrap(), None);
        assert_eq!(solve_temp_euler(&g).unwrap(), None);
    }

    #[test]
    fn oracle_cap() {
        let g = TemporalGraph::from_triples(11, (0..10).map(|i| (i, i + 1, vec![i as Time + 1]))).unwrap();
        assert!(brute_force_temp_euler(&g).is_err());
    }

    #[test]
    fn empty_graph_is_trivially_eulerian() {
        let g = TemporalGraph::new(2, vec![]).unwrap();
        let w = solve_temp_euler(&g).unwrap().unwrap();
        assert_eq!(verify_euler_circuit(&g, &w), Ok(()));
    }

    #[test]
    fn skips_quiet_times() {
        let g = triangle([vec![10], vec![20], vec![30]]);
        let run = run_temp_euler(&g, &EulerConfig::default()).unwrap();
        assert_eq!(run.stats.iter().map(|s| s.time).collect::<Vec<_>>(), vec![10, 11, 20, 21, 30]);
        assert!(run.walk.is_some());
    }

    #[test]
    fn width_guard() {
        let g = triangle([vec![1, 5], vec![2, 6], vec![3, 7]]);
        let config = EulerConfig { max_width: 2, ..EulerConfig::default() };
        assert!(matches!(run_temp_euler(&g, &config), Err(EulerError::WidthTooLarge { width: 3, cap: 2 })));
    }

    #[test]
    fn winwin_certifies_and_delegates() {
        // Four nested edges each with gap 1 except the spans overlap: k = 2, u = 1
        // gives bound 3 while the width is 4.
        let g = TemporalGraph::from_triples(
            5,
            vec![(0, 1, vec![4, 5]), (1, 2, vec![3, 4]), (2, 3, vec![4, 5]), (3, 4, vec![3, 4])],
        )
        .unwrap();
        assert_eq!(crate::width::imw(&g), 4);
        assert_eq!(solve_temp_euler_winwin(&g, Some(2), Some(1)).unwrap(), WinWin::CertifiedNo { width: 4, bound: 3 });
        let tri = triangle([vec![1], vec![2], vec![3]]);
        let out = solve_temp_euler_winwin(&tri, Some(1), Some(7)).unwrap();
        assert_eq!(out.witness(), solve_temp_euler(&tri).unwrap().as_ref());
        assert_eq!(euler_width_bound(1, 100), 1);
    }

    #[test]
    fn winwin_validates() {
        let g = triangle([vec![1, 9], vec![2], vec![3]]);
        assert!(matches!(
            solve_temp_euler_winwin(&g, Some(2), Some(3)),
            Err(WinWinError::GapAboveMax { edge: 0, gap: 8, u: 3 })
        ));
        assert!(matches!(solve_temp_euler_winwin(&g, Some(1), None), Err(WinWinError::TooManyTimes { edge: 0, .. })));
        assert_eq!(gap_range(&g), Some((8, 8)));
    }
}
