//! Seeded instance generators. Randomness comes from ChaCha8 seeded with
//! `seed_from_u64`, so a spec reproduces the same bytes on every platform.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exploration::StarInstance;
use crate::graph::{TemporalGraph, Time};
use crate::io::Instance;
use crate::star::{reduce_star_to_euler, scale_to_even};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    RandomTemporal,
    RandomStar,
    GapBoundedStar,
    EulerImage,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::RandomTemporal, Family::RandomStar, Family::GapBoundedStar, Family::EulerImage];

    pub fn name(self) -> &'static str {
        match self {
            Family::RandomTemporal => "random-temporal",
            Family::RandomStar => "random-star",
            Family::GapBoundedStar => "gap-bounded-star",
            Family::EulerImage => "euler-image",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| GenError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("inconsistent spec: {0}")]
    Inconsistent(String),
}

/// Parameters of a generated instance. For star families `n` is the number
/// of vertices (center plus `n − 1` leaves) and `m` is ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub seed: u64,
    pub family: Family,
    pub n: usize,
    pub m: usize,
    /// Most times per edge.
    pub k: usize,
    /// Smallest and largest gap between consecutive times (gap-bounded stars).
    pub l: Time,
    pub u: Time,
    /// Largest time drawn (first times for gap-bounded stars).
    pub lifetime: Time,
}

impl GenSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        GenSpec { seed, family, n: 5, m: 6, k: 3, l: 1, u: 3, lifetime: 20 }
    }

    fn check(&self) -> Result<(), GenError> {
        let bad = |msg: String| Err(GenError::Inconsistent(msg));
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if self.lifetime == 0 {
            return bad("lifetime must be at least 1".into());
        }
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        match self.family {
            Family::RandomTemporal => {
                let pairs = self.n * (self.n - 1) / 2;
                if self.m > pairs {
                    return bad(format!("m = {} exceeds the {pairs} vertex pairs", self.m));
                }
            }
            Family::RandomStar | Family::EulerImage => {
                if self.k < 2 || self.lifetime < 2 {
                    return bad("stars need k ≥ 2 and lifetime ≥ 2 so every edge can be visited".into());
                }
            }
            Family::GapBoundedStar => {
                if self.k < 2 {
                    return bad("k must be at least 2".into());
                }
                if self.l > self.u || self.l == 0 {
                    return bad(format!("need 1 ≤ l ≤ u, got l = {}, u = {}", self.l, self.u));
                }
            }
        }
        Ok(())
    }
}

fn random_times(rng: &mut ChaCha8Rng, count: usize, lifetime: Time) -> Vec<Time> {
    let count = count.min(lifetime as usize);
    let mut picked: Vec<Time> = sample(rng, lifetime as usize, count).into_iter().map(|t| t as Time + 1).collect();
    picked.sort_unstable();
    picked
}

fn random_star(rng: &mut ChaCha8Rng, spec: &GenSpec) -> StarInstance {
    let leaf_times = (1..spec.n)
        .map(|_| {
            let count = rng.gen_range(2..=spec.k);
            random_times(rng, count, spec.lifetime)
        })
        .collect();
    StarInstance::from_leaf_times(leaf_times).expect("generated star is valid")
}

/// Builds the instance described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<Instance, GenError> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let graph = match spec.family {
        Family::RandomTemporal => {
            let pairs: Vec<(usize, usize)> = (0..spec.n).flat_map(|u| (u + 1..spec.n).map(move |v| (u, v))).collect();
            let chosen: BTreeSet<usize> = sample(&mut rng, pairs.len(), spec.m).into_iter().collect();
            let triples: Vec<_> = chosen
                .into_iter()
                .map(|i| {
                    let count = rng.gen_range(1..=spec.k);
                    (pairs[i].0, pairs[i].1, random_times(&mut rng, count, spec.lifetime))
                })
                .collect();
            TemporalGraph::from_triples(spec.n, triples).expect("generated graph is valid")
        }
        Family::RandomStar => random_star(&mut rng, spec).into_graph(),
        Family::GapBoundedStar => {
            let leaf_times = (1..spec.n)
                .map(|_| {
                    let count = rng.gen_range(2..=spec.k);
                    let mut t = rng.gen_range(1..=spec.lifetime);
                    let mut times = vec![t];
                    for _ in 1..count {
                        t += rng.gen_range(spec.l..=spec.u);
                        times.push(t);
                    }
                    times
                })
                .collect();
            StarInstance::from_leaf_times(leaf_times).expect("generated star is valid").into_graph()
        }
        Family::EulerImage => {
            let (scaled, _) = scale_to_even(&random_star(&mut rng, spec));
            reduce_star_to_euler(&scaled).expect("scaled star reduces").0
        }
    };
    Ok(Instance::new(graph))
}
