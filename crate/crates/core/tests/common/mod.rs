#![allow(dead_code)]

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempo_core::{MrdInstance, StarInstance, TemporalGraph, Time};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn distinct_times(rng: &mut ChaCha8Rng, count: usize, lifetime: Time) -> Vec<Time> {
    let mut t: Vec<Time> = rand::seq::index::sample(rng, lifetime as usize, count.min(lifetime as usize))
        .into_iter()
        .map(|x| x as Time + 1)
        .collect();
    t.sort_unstable();
    t
}

/// Random simple temporal graph with up to `max_m` edges on `n` vertices.
pub fn random_temporal(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_m: usize,
    max_times: usize,
    lifetime: Time,
) -> TemporalGraph {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let m = rng.gen_range(1..=max_m.min(pairs.len()));
    let triples: Vec<_> = pairs[..m]
        .iter()
        .map(|&(u, v)| {
            let count = rng.gen_range(1..=max_times);
            (u, v, distinct_times(rng, count, lifetime))
        })
        .collect();
    TemporalGraph::from_triples(n, triples).unwrap()
}

/// Edge-disjoint union of random cycles with at most `max_m` edges, walked
/// by a random Euler circuit whose steps receive increasing times; every
/// edge then gets up to `max_times − 1` decoy times.
pub fn planted_euler(rng: &mut ChaCha8Rng, n: usize, max_m: usize, max_times: usize, lifetime: Time) -> TemporalGraph {
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    for _ in 0..20 {
        let len = rng.gen_range(3..=n);
        let mut cycle: Vec<usize> = (0..n).collect();
        cycle.shuffle(rng);
        cycle.truncate(len);
        let new: Vec<(usize, usize)> = (0..len)
            .map(|i| {
                let (a, b) = (cycle[i], cycle[(i + 1) % len]);
                (a.min(b), a.max(b))
            })
            .collect();
        let touches = edges.is_empty() || cycle.iter().any(|&v| edges.iter().any(|&(a, b)| a == v || b == v));
        if touches && edges.len() + new.len() <= max_m && new.iter().all(|e| !edges.contains(e)) {
            edges.extend(new);
        }
    }
    if edges.is_empty() {
        edges.extend([(0, 1), (1, 2), (0, 2)]);
    }
    let edge_list: Vec<(usize, usize)> =
        edges.into_iter().collect::<std::collections::BTreeSet<_>>().into_iter().collect();

    // Hierholzer with shuffled adjacency.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, &(a, b)) in edge_list.iter().enumerate() {
        adj[a].push(id);
        adj[b].push(id);
    }
    for list in &mut adj {
        list.shuffle(rng);
    }
    let mut used = vec![false; edge_list.len()];
    let start = edge_list[0].0;
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut order = Vec::new();
    while let Some(&(v, via)) = stack.last() {
        if let Some(pos) = adj[v].iter().position(|&e| !used[e]) {
            let e = adj[v].swap_remove(pos);
            used[e] = true;
            let (a, b) = edge_list[e];
            stack.push((if a == v { b } else { a }, Some(e)));
        } else {
            stack.pop();
            if let Some(e) = via {
                order.push(e);
            }
        }
    }
    let times = distinct_times(rng, order.len(), lifetime);
    let mut sets: Vec<Vec<Time>> = vec![Vec::new(); edge_list.len()];
    for (step, &e) in order.iter().rev().enumerate() {
        sets[e].push(times[step]);
    }
    for set in &mut sets {
        let extra = rng.gen_range(0..max_times);
        for _ in 0..extra {
            set.push(rng.gen_range(1..=lifetime));
        }
    }
    let triples = edge_list.iter().zip(sets).map(|(&(a, b), t)| (a, b, t));
    TemporalGraph::from_triples(n, triples).unwrap()
}

/// Mix of random, planted and perturbed-planted instances.
pub fn euler_suite_instance(rng: &mut ChaCha8Rng, i: usize) -> TemporalGraph {
    let n = rng.gen_range(3..=6);
    match i % 3 {
        0 => random_temporal(rng, n, 8, 3, 20),
        1 => planted_euler(rng, n, 8, 3, 20),
        _ => {
            let g = planted_euler(rng, n, 8, 3, 20);
            let victim = rng.gen_range(0..g.m());
            let triples = g.edges().iter().enumerate().map(|(id, e)| {
                let t = if id == victim {
                    let count = rng.gen_range(1..=3);
                    distinct_times(rng, count, 20)
                } else {
                    e.times.clone()
                };
                (e.u, e.v, t)
            });
            TemporalGraph::from_triples(n, triples.collect::<Vec<_>>()).unwrap()
        }
    }
}

/// Star with `1..=max_edges` edges, `2..=max_times` times each.
pub fn random_star(rng: &mut ChaCha8Rng, max_edges: usize, max_times: usize, lifetime: Time) -> StarInstance {
    let m = rng.gen_range(1..=max_edges);
    let leaf_times = (0..m)
        .map(|_| {
            let count = rng.gen_range(2..=max_times);
            distinct_times(rng, count, lifetime)
        })
        .collect();
    StarInstance::from_leaf_times(leaf_times).unwrap()
}

/// Small MinReachDelete instance: at most 5 vertices (so the vertex width is
/// at most 5) and at most `max_time_edges` time-edges.
pub fn random_mrd(rng: &mut ChaCha8Rng, max_time_edges: usize) -> MrdInstance {
    let n = rng.gen_range(3..=5);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let mut budget = rng.gen_range(2..=max_time_edges);
    let mut triples = Vec::new();
    for (u, v) in pairs {
        if budget == 0 {
            break;
        }
        let count = rng.gen_range(1..=2.min(budget));
        budget -= count;
        triples.push((u, v, distinct_times(rng, count, 8)));
    }
    let g = TemporalGraph::from_triples(n, triples).unwrap();
    let sources: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..n)).collect();
    let k = rng.gen_range(0..=3);
    let h = rng.gen_range(1..=n);
    MrdInstance::new(g, sources, k, h).unwrap()
}

/// Cycle whose edge `i` has times `2i + 1, 2i + 3, …`: width stays fixed
/// while the lifetime grows linearly with `m`.
pub fn cycle_chain(m: usize, times_per_edge: usize) -> TemporalGraph {
    let triples = (0..m).map(|i| {
        let base = 2 * i as Time + 1;
        (i, (i + 1) % m, (0..times_per_edge as Time).map(|j| base + 2 * j).collect::<Vec<_>>())
    });
    TemporalGraph::from_triples(m, triples.collect::<Vec<_>>()).unwrap()
}

/// Naive edge bags straight from the definition.
pub fn naive_edge_bags(g: &TemporalGraph) -> Vec<Vec<usize>> {
    let lifetime = g.lifetime().unwrap_or(0);
    (1..=lifetime)
        .map(|t| (0..g.m()).filter(|&e| g.edge(e).first_time() <= t && t <= g.edge(e).last_time()).collect())
        .collect()
}

/// Naive vertex bags: some incident edge starts by `t`, some ends from `t` on.
pub fn naive_vertex_bags(g: &TemporalGraph) -> Vec<Vec<usize>> {
    let lifetime = g.lifetime().unwrap_or(0);
    (1..=lifetime)
        .map(|t| {
            (0..g.n())
                .filter(|&x| {
                    let inc = g.incident(x);
                    inc.iter().any(|&e| g.edge(e).first_time() <= t) && inc.iter().any(|&e| g.edge(e).last_time() >= t)
                })
                .collect()
        })
        .collect()
}
