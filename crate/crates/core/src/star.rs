//! Star exploration: normalization, the triangle-gadget reduction to temporal
//! Euler circuits, an exhaustive oracle, and the bounded-gap win-win entry.

use std::collections::HashMap;

use thiserror::Error;

use crate::euler::{gap_range, run_temp_euler, validate_gaps, EulerConfig, EulerError, WinWin, WinWinError};
use crate::exploration::{Exploration, StarInstance, Visit, CENTER};
use crate::graph::{EdgeId, TemporalGraph, TemporalWalk, Time};
use crate::verify::CapExceeded;

pub const DEFAULT_STAR_ORACLE_CAP: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    /// A single time can never be visited: the star is a certified no.
    #[error("edge {edge} has fewer than two times and can never be visited")]
    Unvisitable { edge: EdgeId },
    #[error("edge {edge} has {count} times, more than k = {k}")]
    TooManyTimes { edge: EdgeId, count: usize, k: usize },
}

/// A normalized star and the data to map its explorations back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedStar {
    pub star: StarInstance,
    /// Every original time was multiplied by this (1 or 2).
    pub factor: Time,
    /// Edges `0..original_edges` are the original edges, in order.
    pub original_edges: usize,
    /// Blocker edges added for padding, grouped per window.
    pub gadgets: Vec<Vec<EdgeId>>,
}

impl NormalizedStar {
    pub fn is_gadget(&self, edge: EdgeId) -> bool {
        edge >= self.original_edges
    }

    /// Drops gadget visits and undoes the time scaling.
    pub fn map_back(&self, visits: &[Visit]) -> Exploration {
        Exploration::new(
            visits
                .iter()
                .filter(|v| !self.is_gadget(v.edge))
                .map(|v| Visit::new(v.edge, v.enter / self.factor, v.exit / self.factor))
                .collect(),
        )
    }
}

fn check_visitable(s: &StarInstance) -> Result<(), NormalizeError> {
    match (0..s.edge_count()).find(|&e| s.times(e).len() < 2) {
        Some(edge) => Err(NormalizeError::Unvisitable { edge }),
        None => Ok(()),
    }
}

/// Doubles every time when any time is odd; leaves the star alone otherwise.
pub fn scale_to_even(s: &StarInstance) -> (StarInstance, Time) {
    let any_odd = (0..s.edge_count()).any(|e| s.times(e).iter().any(|t| t % 2 == 1));
    if !any_odd {
        return (s.clone(), 1);
    }
    let leaf_times = (0..s.edge_count()).map(|e| s.times(e).iter().map(|t| 2 * t).collect()).collect();
    (StarInstance::from_leaf_times(leaf_times).expect("scaling keeps a star valid"), 2)
}

/// Produces an equivalent star with even times and exactly `k` times per
/// edge.
///
/// Padding uses blocker windows after the scaled lifetime. Window `j` holds
/// `⌊k/2⌋` new edges that all share the times `w_1 < … < w_k`; any
/// exploration must visit them with disjoint visits, which always cover
/// `w_2`. An edge short by `d` times receives `w_2` of windows `1..=d`, and
/// a visit using such a time would meet a blocker visit.
pub fn normalize_star(s: &StarInstance, k: usize) -> Result<NormalizedStar, NormalizeError> {
    check_visitable(s)?;
    for e in 0..s.edge_count() {
        if s.times(e).len() > k {
            return Err(NormalizeError::TooManyTimes { edge: e, count: s.times(e).len(), k });
        }
    }
    let (scaled, factor) = scale_to_even(s);
    let m = scaled.edge_count();
    let deficit = (0..m).map(|e| k - scaled.times(e).len()).max().unwrap_or(0);
    if deficit == 0 {
        return Ok(NormalizedStar { star: scaled, factor, original_edges: m, gadgets: Vec::new() });
    }

    let lifetime = scaled.graph().lifetime().unwrap_or(0);
    let k_t = k as Time;
    let window = |j: usize| -> Vec<Time> {
        let base = lifetime + j as Time * (2 * k_t + 2);
        (1..=k_t).map(|i| base + 2 * i).collect()
    };
    let mut leaf_times: Vec<Vec<Time>> = (0..m)
        .map(|e| {
            let mut t = scaled.times(e).to_vec();
            t.extend((0..k - t.len()).map(|j| window(j)[1]));
            t
        })
        .collect();
    let mut gadgets = Vec::with_capacity(deficit);
    for j in 0..deficit {
        let ids: Vec<EdgeId> = (0..k / 2).map(|i| m + j * (k / 2) + i).collect();
        leaf_times.extend(ids.iter().map(|_| window(j)));
        gadgets.push(ids);
    }
    let star =
        StarInstance::new(StarInstance::from_leaf_times(leaf_times).expect("padded star is valid").into_graph(), k)
            .expect("every edge has exactly k times");
    Ok(NormalizedStar { star, factor, original_edges: m, gadgets })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("edge {edge} has odd time {time}; scale the star first")]
    OddTime { edge: EdgeId, time: Time },
    #[error("edge {edge} has fewer than two times")]
    TooFewTimes { edge: EdgeId },
}

/// Star edge `i` becomes the triangle on the center, `2i + 1` and `2i + 2`,
/// formed by image edges `3i, 3i + 1, 3i + 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleMap {
    pub triangles: Vec<[EdgeId; 3]>,
}

impl TriangleMap {
    /// Reads one visit per star edge off a temporal Euler circuit of the image.
    pub fn circuit_to_visits(&self, s: &StarInstance, walk: &TemporalWalk) -> Option<Vec<Visit>> {
        let owner: HashMap<EdgeId, usize> =
            self.triangles.iter().enumerate().flat_map(|(i, tri)| tri.iter().map(move |&e| (e, i))).collect();
        // Maximal runs of consecutive steps inside one triangle.
        let mut runs: Vec<(usize, Time, Time)> = Vec::new();
        for step in &walk.steps {
            let tri = *owner.get(&step.edge)?;
            match runs.last_mut() {
                Some(run) if run.0 == tri => run.2 = step.time,
                _ => runs.push((tri, step.time, step.time)),
            }
        }
        let split = match (runs.first(), runs.last()) {
            (Some(a), Some(b)) if runs.len() > 1 && a.0 == b.0 => Some(a.0),
            _ => None,
        };
        let mut visits = Vec::with_capacity(self.triangles.len());
        let (mut lo, mut hi) = (Time::MAX, 0);
        for &(tri, first, last) in &runs {
            if Some(tri) != split {
                visits.push(Visit::new(tri, first, last));
                lo = lo.min(first);
                hi = hi.max(last);
            }
        }
        if let Some(tri) = split {
            // The circuit starts inside this triangle, so its steps straddle
            // every other visit; pick a pair of its times entirely before or
            // entirely after them.
            let t = s.times(tri);
            let n = t.len();
            let pair = if t[1] < lo {
                (t[0], t[1])
            } else if t[n - 2] > hi {
                (t[n - 2], t[n - 1])
            } else {
                return None;
            };
            visits.push(Visit::new(tri, pair.0, pair.1));
        }
        (visits.len() == self.triangles.len()).then_some(visits)
    }
}

/// Builds the triangle-gadget graph. Accepts any star with even times and at
/// least two times per edge; with exactly `k` times per edge every image edge
/// has `k − 1` times.
pub fn reduce_star_to_euler(s: &StarInstance) -> Result<(TemporalGraph, TriangleMap), ReduceError> {
    let m = s.edge_count();
    let mut triples = Vec::with_capacity(3 * m);
    let mut triangles = Vec::with_capacity(m);
    for i in 0..m {
        let t = s.times(i);
        if t.len() < 2 {
            return Err(ReduceError::TooFewTimes { edge: i });
        }
        if let Some(&odd) = t.iter().find(|&&x| x % 2 == 1) {
            return Err(ReduceError::OddTime { edge: i, time: odd });
        }
        let (x1, x2) = (2 * i + 1, 2 * i + 2);
        let head = &t[..t.len() - 1];
        triples.push((CENTER, x1, head.to_vec()));
        triples.push((x1, x2, head.iter().map(|x| x + 1).collect()));
        triples.push((x2, CENTER, t[1..].to_vec()));
        triangles.push([3 * i, 3 * i + 1, 3 * i + 2]);
    }
    let g = TemporalGraph::from_triples(2 * m + 1, triples).expect("triangle gadgets form a simple graph");
    Ok((g, TriangleMap { triangles }))
}

/// Decides explorability through the Euler dynamic program on the triangle
/// image and returns a verified-shape exploration.
pub fn solve_star_exp(s: &StarInstance) -> Result<Option<Exploration>, EulerError> {
    solve_star_exp_with(s, &EulerConfig::default())
}

pub fn solve_star_exp_with(s: &StarInstance, config: &EulerConfig) -> Result<Option<Exploration>, EulerError> {
    if check_visitable(s).is_err() {
        return Ok(None);
    }
    let (scaled, factor) = scale_to_even(s);
    let (image, map) = reduce_star_to_euler(&scaled).expect("scaled star meets the reduction's preconditions");
    let Some(walk) = run_temp_euler(&image, config)?.walk else {
        return Ok(None);
    };
    let visits = map.circuit_to_visits(&scaled, &walk).expect("every circuit of the image maps back");
    Ok(Some(Exploration::new(
        visits.into_iter().map(|v| Visit::new(v.edge, v.enter / factor, v.exit / factor)).collect(),
    )))
}

pub fn brute_force_star_exp(s: &StarInstance) -> Result<Option<Exploration>, CapExceeded> {
    brute_force_star_exp_capped(s, DEFAULT_STAR_ORACLE_CAP)
}

/// Exhaustive search over visit orders. Each order is scheduled greedily
/// (earliest enter after the previous exit, then earliest exit); reaching a
/// set of visited edges later than before is pruned.
pub fn brute_force_star_exp_capped(s: &StarInstance, cap: usize) -> Result<Option<Exploration>, CapExceeded> {
    let m = s.edge_count();
    if m > cap.min(63) {
        return Err(CapExceeded { what: "edge count", size: m, cap: cap.min(63) });
    }
    struct Search<'a> {
        s: &'a StarInstance,
        full: u64,
        best: HashMap<u64, Time>,
        visits: Vec<Visit>,
    }
    impl Search<'_> {
        fn next_visit(&self, e: EdgeId, after: Time) -> Option<(Time, Time)> {
            let edge = self.s.graph().edge(e);
            let enter = edge.next_time_after(after)?;
            Some((enter, edge.next_time_after(enter)?))
        }

        fn dfs(&mut self, mask: u64, time: Time) -> bool {
            if mask == self.full {
                return true;
            }
            match self.best.get(&mask) {
                Some(&t) if t <= time => return false,
                _ => {
                    self.best.insert(mask, time);
                }
            }
            let open: Vec<EdgeId> = (0..self.s.edge_count()).filter(|&e| mask >> e & 1 == 0).collect();
            let mut options = Vec::with_capacity(open.len());
            for &e in &open {
                match self.next_visit(e, time) {
                    Some(v) => options.push((e, v)),
                    None => return false,
                }
            }
            for (e, (enter, exit)) in options {
                self.visits.push(Visit::new(e, enter, exit));
                if self.dfs(mask | 1 << e, exit) {
                    return true;
                }
                self.visits.pop();
            }
            false
        }
    }
    let full = if m == 0 { 0 } else { u64::MAX >> (64 - m) };
    let mut search = Search { s, full, best: HashMap::new(), visits: Vec::new() };
    Ok(search.dfs(0, 0).then(|| Exploration::new(search.visits)))
}

/// `(2(k−1)u + 1) / (ℓ + 1)` compared without division: a star of width `w`
/// is certainly unexplorable when `w(ℓ + 1) > 2(k−1)u + 1`.
pub fn star_bound_violated(width: usize, k: usize, l: Time, u: Time) -> bool {
    let lhs = (width as u128) * (l as u128 + 1);
    let rhs = 2 * (k.saturating_sub(1) as u128) * u as u128 + 1;
    lhs > rhs
}

/// Certifies "no" when the width exceeds the bounded-gap limit, else solves
/// exactly. Omitted parameters are measured on the star.
pub fn solve_star_winwin(
    s: &StarInstance,
    k: Option<usize>,
    l: Option<Time>,
    u: Option<Time>,
) -> Result<WinWin<Exploration>, WinWinError> {
    let g = s.graph();
    let measured = gap_range(g).unwrap_or((0, 0));
    let k = k.unwrap_or_else(|| g.max_times_per_edge());
    let l = l.unwrap_or(measured.0);
    let u = u.unwrap_or(measured.1);
    validate_gaps(g, k, l, u)?;
    let width = crate::width::imw(g);
    if star_bound_violated(width, k, l, u) {
        let bound = (2 * k.saturating_sub(1) as u64 * u + 1) / (l + 1);
        return Ok(WinWin::CertifiedNo { width, bound });
    }
    Ok(WinWin::Decided(solve_star_exp(s)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_star_exploration;
    use crate::width::imw;
    use proptest::prelude::*;

    fn star(times: Vec<Vec<Time>>) -> StarInstance {
        StarInstance::from_leaf_times(times).unwrap()
    }

    fn four_leaf() -> StarInstance {
        star(vec![vec![1, 9], vec![3, 5], vec![4, 6], vec![7, 8, 9]])
    }

    #[test]
    fn single_triangle_image() {
        let (g, map) = reduce_star_to_euler(&star(vec![vec![2, 4, 6]])).unwrap();
        let times: Vec<&[Time]> = g.edges().iter().map(|e| e.times.as_slice()).collect();
        assert_eq!(times, vec![&[2, 4][..], &[3, 5], &[4, 6]]);
        assert_eq!(map.triangles, vec![[0, 1, 2]]);
        let (g, _) = reduce_star_to_euler(&star(vec![vec![2, 4]])).unwrap();
        let times: Vec<&[Time]> = g.edges().iter().map(|e| e.times.as_slice()).collect();
        assert_eq!(times, vec![&[2][..], &[3], &[4]]);
    }

    #[test]
    fn three_edge_image_shape() {
        let (g, _) = reduce_star_to_euler(&star(vec![vec![2, 4], vec![6, 8], vec![10, 12]])).unwrap();
        assert_eq!((g.n(), g.m()), (7, 9));
        for tri in 0..3 {
            let touching = (3 * tri..3 * tri + 3).filter(|&e| g.edge(e).has_endpoint(CENTER)).count();
            assert_eq!(touching, 2);
        }
    }

    #[test]
    fn reduction_preconditions() {
        assert_eq!(reduce_star_to_euler(&star(vec![vec![2, 3]])), Err(ReduceError::OddTime { edge: 0, time: 3 }));
        assert_eq!(reduce_star_to_euler(&star(vec![vec![2]])), Err(ReduceError::TooFewTimes { edge: 0 }));
    }

    #[test]
    fn two_edge_image_is_eulerian() {
        let (g, _) = reduce_star_to_euler(&star(vec![vec![2, 4], vec![6, 8]])).unwrap();
        assert!(crate::euler::brute_force_temp_euler(&g).unwrap().is_some());
        assert!(crate::euler::solve_temp_euler(&g).unwrap().is_some());
    }

    #[test]
    fn solve_examples() {
        let s = star(vec![vec![1, 2], vec![3, 4]]);
        let ex = solve_star_exp(&s).unwrap().unwrap();
        assert_eq!(ex.visits, vec![Visit::new(0, 1, 2), Visit::new(1, 3, 4)]);
        assert_eq!(solve_star_exp(&four_leaf()).unwrap(), None);
        assert_eq!(brute_force_star_exp(&four_leaf()).unwrap(), None);
    }

    #[test]
    fn oracle_examples() {
        let ex = brute_force_star_exp(&star(vec![vec![5, 9]])).unwrap().unwrap();
        assert_eq!(ex.visits, vec![Visit::new(0, 5, 9)]);
        assert_eq!(brute_force_star_exp(&star(vec![vec![1, 2], vec![1, 2]])).unwrap(), None);
        assert!(brute_force_star_exp(&star(vec![vec![1, 2]; 8])).is_err());
        assert!(brute_force_star_exp_capped(&star((0..8).map(|i| vec![2 * i + 1, 2 * i + 2]).collect()), 8)
            .unwrap()
            .is_some());
    }

    #[test]
    fn normalize_examples() {
        let n = normalize_star(&star(vec![vec![1, 3]]), 3).unwrap();
        assert_eq!(n.factor, 2);
        assert_eq!(&n.star.times(0)[..2], &[2, 6]);
        assert!(n.star.times(0)[2] > 6 && n.star.times(0)[2].is_multiple_of(2));
        assert_eq!(n.gadgets, vec![vec![1]]);

        let s = star(vec![vec![2, 4, 8], vec![6, 10, 12]]);
        let n = normalize_star(&s, 3).unwrap();
        assert_eq!((n.factor, &n.star, n.gadgets.len()), (1, &s, 0));

        assert_eq!(normalize_star(&star(vec![vec![2, 4], vec![5]]), 3), Err(NormalizeError::Unvisitable { edge: 1 }));
        assert!(matches!(normalize_star(&star(vec![vec![1, 2, 3, 4]]), 3), Err(NormalizeError::TooManyTimes { .. })));
    }

    #[test]
    fn padding_cannot_rescue_a_blocked_star() {
        // A must be visited (1, 10), which swallows B = {2, 3}.
        let s = star(vec![vec![1, 10], vec![2, 3]]);
        assert_eq!(brute_force_star_exp(&s).unwrap(), None);
        let n = normalize_star(&s, 3).unwrap();
        assert_eq!(brute_force_star_exp(&n.star).unwrap(), None);
    }

    #[test]
    fn winwin_examples() {
        // k = 2, l = u = 3: bound 7/4, so width 2 already certifies "no".
        let s = star(vec![vec![1, 4], vec![2, 5], vec![3, 6], vec![4, 7]]);
        assert_eq!(imw(s.graph()), 4);
        let out = solve_star_winwin(&s, Some(2), Some(3), Some(3)).unwrap();
        assert!(matches!(out, WinWin::CertifiedNo { width: 4, .. }));
        assert_eq!(brute_force_star_exp(&s).unwrap(), None);

        let s = star(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(solve_star_winwin(&s, None, None, None).unwrap(), WinWin::Decided(solve_star_exp(&s).unwrap()));
        assert!(solve_star_winwin(&s, Some(2), Some(2), Some(3)).is_err());
    }

    fn arb_star(max_edges: usize, max_times: usize) -> impl Strategy<Value = StarInstance> {
        proptest::collection::vec(proptest::collection::btree_set(1u64..16, 2..=max_times), 1..=max_edges)
            .prop_map(|ts| star(ts.into_iter().map(|t| t.into_iter().collect()).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn dp_matches_oracle(s in arb_star(5, 4)) {
            let dp = solve_star_exp(&s).unwrap();
            let oracle = brute_force_star_exp(&s).unwrap();
            prop_assert_eq!(dp.is_some(), oracle.is_some());
            if let Some(ex) = dp {
                prop_assert_eq!(verify_star_exploration(&s, &ex.visits), Ok(()));
            }
        }

        #[test]
        fn normalization_preserves_answers(s in arb_star(4, 3), extra in 0usize..2) {
            let k = s.k() + extra;
            let n = normalize_star(&s, k).unwrap();
            prop_assert!((0..n.star.edge_count()).all(|e| n.star.times(e).len() == k));
            prop_assert!((0..n.star.edge_count()).all(|e| n.star.times(e).iter().all(|t| t % 2 == 0)));
            let before = brute_force_star_exp(&s).unwrap();
            let after = brute_force_star_exp_capped(&n.star, 12).unwrap();
            prop_assert_eq!(before.is_some(), after.is_some());
            if let Some(ex) = after {
                let back = n.map_back(&ex.visits);
                prop_assert_eq!(verify_star_exploration(&s, &back.visits), Ok(()));
            }
        }

        #[test]
        fn image_width_and_arity(s in arb_star(5, 4)) {
            let n = normalize_star(&s, s.k()).unwrap();
            let (g, _) = reduce_star_to_euler(&n.star).unwrap();
            prop_assert!(imw(&g) <= 3 * imw(n.star.graph()));
            prop_assert!(g.edges().iter().all(|e| e.times.len() == s.k() - 1));
        }
    }
}
