//! Fixtures for the criterion benches: families whose width stays fixed
//! while the lifetime grows, so time per unit of lifetime can be compared.

use tempo_core::{MrdInstance, TemporalGraph, Time};

/// Cycle on `m` vertices; edge `i` is active at `2i + 1, 2i + 3, …`
/// (`times` values). Eulerian, with width `times` and lifetime about `2m`.
pub fn cycle_chain(m: usize, times: usize) -> TemporalGraph {
    let triples: Vec<_> = (0..m)
        .map(|i| {
            let base = 2 * i as Time + 1;
            (i, (i + 1) % m, (0..times as Time).map(|j| base + 2 * j).collect::<Vec<_>>())
        })
        .collect();
    TemporalGraph::from_triples(m, triples).expect("cycle is simple")
}

/// Path from a source at vertex 0 with a pendant leaf at every path vertex;
/// vertex width stays at most four. Asks to cut reach down to a third of
/// the vertices with two deletions.
pub fn reach_chain(len: usize) -> MrdInstance {
    let mut triples = Vec::with_capacity(2 * len);
    for i in 0..len {
        let t = 2 * i as Time + 1;
        triples.push((i, i + 1, vec![t]));
        triples.push((i + 1, len + 1 + i, vec![t + 1]));
    }
    let g = TemporalGraph::from_triples(2 * len + 1, triples).expect("caterpillar is simple");
    let n = g.n();
    MrdInstance::new(g, vec![0], 2, n / 3).expect("source exists")
}
