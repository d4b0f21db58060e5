//! `tempo bench`: run the exact solver over a suite of instance files.
//!
//! Instances with sources and both budgets go to the reachability program,
//! everything else to the Euler program. Rows come out in input order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use tempo_core::euler::run_temp_euler;
use tempo_core::io::Instance;
use tempo_core::reach::{run_min_reach_delete, MrdConfig};
use tempo_core::width::{edge_bag_sequence, imw, seed_time, vimw};
use tempo_core::{MrdInstance, TemporalGraph, Time};

use crate::commands::{config, load, print};
use crate::{Failure, Format, Guards, Outcome};

/// First line of every CSV the command writes.
pub const CSV_SCHEMA: &str = "# tempo-bench csv v1; times in microseconds";

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub index: usize,
    pub name: String,
    pub problem: &'static str,
    pub n: usize,
    pub m: usize,
    pub imw: usize,
    pub vimw: usize,
    /// Width the solver's running time depends on: imw for Euler, vimw for
    /// reachability.
    pub width: usize,
    pub lifetime: Time,
    pub decision: String,
    pub time_us: u128,
    pub peak_layer: usize,
    /// Euler runs only: peak layer within `4·w·|V(F_t*)|·2^w`.
    pub within_bound: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Aggregate {
    pub width: usize,
    pub lifetime: Time,
    pub count: usize,
    pub mean_us: u128,
    pub max_us: u128,
    pub max_peak: usize,
}

/// Files named directly, plus every regular file of each directory in name
/// order.
fn expand(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("listing {}", p.display()))
                .map_err(Failure::Input)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn peak_bound(g: &TemporalGraph, w: usize) -> Option<u128> {
    let t_star = seed_time(g)?;
    let seeds: BTreeSet<usize> =
        edge_bag_sequence(g).bag(t_star).iter().flat_map(|&e| [g.edge(e).u, g.edge(e).v]).collect();
    Some(4 * w as u128 * seeds.len() as u128 * (1u128 << w.min(100)))
}

fn bench_one(index: usize, path: &Path, guards: &Guards, warn: u64) -> Row {
    let name = path.display().to_string();
    let mut row = Row {
        index,
        name,
        problem: "-",
        n: 0,
        m: 0,
        imw: 0,
        vimw: 0,
        width: 0,
        lifetime: 0,
        decision: String::new(),
        time_us: 0,
        peak_layer: 0,
        within_bound: None,
    };
    let inst: Instance = match load(path, warn) {
        Ok(i) => i,
        Err(Failure::Input(e) | Failure::Guard(e)) => {
            row.decision = format!("error: {e:#}");
            return row;
        }
    };
    let g = &inst.graph;
    row.n = g.n();
    row.m = g.m();
    row.imw = imw(g);
    row.vimw = vimw(g);
    row.lifetime = g.lifetime().unwrap_or(0);
    match (inst.k, inst.h) {
        (Some(k), Some(h)) if !inst.sources.is_empty() => {
            row.problem = "mrd";
            row.width = row.vimw;
            let m = match MrdInstance::new(inst.graph.clone(), inst.sources.clone(), k as usize, h as usize) {
                Ok(m) => m,
                Err(e) => {
                    row.decision = format!("error: {e}");
                    return row;
                }
            };
            let start = Instant::now();
            let result = run_min_reach_delete(&m, &MrdConfig::default());
            row.time_us = start.elapsed().as_micros();
            match result {
                Ok(run) => {
                    row.decision = if run.deletions.is_some() { "yes" } else { "no" }.into();
                    row.peak_layer = run.peak_layer;
                }
                Err(e) => row.decision = format!("guard: {e}"),
            }
        }
        _ => {
            row.problem = "euler";
            row.width = row.imw;
            let start = Instant::now();
            let result = run_temp_euler(g, &config(guards));
            row.time_us = start.elapsed().as_micros();
            match result {
                Ok(run) => {
                    row.decision = if run.walk.is_some() { "yes" } else { "no" }.into();
                    row.peak_layer = run.peak_layer();
                    row.within_bound = peak_bound(g, run.width).map(|b| run.peak_layer() as u128 <= b);
                }
                Err(e) => row.decision = format!("guard: {e}"),
            }
        }
    }
    row
}

/// Mean and maximum time per `(width, lifetime)` over rows that finished.
pub fn aggregate(rows: &[Row]) -> Vec<Aggregate> {
    let mut groups: BTreeMap<(usize, Time), Vec<&Row>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.decision == "yes" || r.decision == "no") {
        groups.entry((r.width, r.lifetime)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((width, lifetime), rs)| Aggregate {
            width,
            lifetime,
            count: rs.len(),
            mean_us: rs.iter().map(|r| r.time_us).sum::<u128>() / rs.len() as u128,
            max_us: rs.iter().map(|r| r.time_us).max().unwrap_or(0),
            max_peak: rs.iter().map(|r| r.peak_layer).max().unwrap_or(0),
        })
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn bound_cell(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

pub fn render(rows: &[Row], aggregates: &[Aggregate], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            writeln!(out, "{CSV_SCHEMA}").unwrap();
            out.push_str("index,name,problem,n,m,imw,vimw,width,lifetime,decision,time_us,peak_layer,within_bound\n");
            for r in rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.index,
                    csv_field(&r.name),
                    r.problem,
                    r.n,
                    r.m,
                    r.imw,
                    r.vimw,
                    r.width,
                    r.lifetime,
                    csv_field(&r.decision),
                    r.time_us,
                    r.peak_layer,
                    bound_cell(r.within_bound)
                )
                .unwrap();
            }
            out.push_str("# aggregates\nwidth,lifetime,count,mean_us,max_us,max_peak\n");
            for a in aggregates {
                writeln!(out, "{},{},{},{},{},{}", a.width, a.lifetime, a.count, a.mean_us, a.max_us, a.max_peak)
                    .unwrap();
            }
        }
        Format::Json => {
            let v =
                json!({ "schema": "tempo-bench v1", "time_unit": "us", "instances": rows, "aggregates": aggregates });
            writeln!(out, "{v:#}").unwrap();
        }
        Format::Text => {
            if rows.is_empty() {
                return out;
            }
            writeln!(
                out,
                "{:<4} {:<28} {:<6} {:>4} {:>4} {:>4} {:>5} {:>8} {:>10} {:>10} {:>6}  decision",
                "#", "name", "kind", "n", "m", "imw", "vimw", "lifetime", "time_us", "peak", "bound"
            )
            .unwrap();
            for r in rows {
                writeln!(
                    out,
                    "{:<4} {:<28} {:<6} {:>4} {:>4} {:>4} {:>5} {:>8} {:>10} {:>10} {:>6}  {}",
                    r.index,
                    r.name,
                    r.problem,
                    r.n,
                    r.m,
                    r.imw,
                    r.vimw,
                    r.lifetime,
                    r.time_us,
                    r.peak_layer,
                    bound_cell(r.within_bound),
                    r.decision
                )
                .unwrap();
            }
            out.push('\n');
            writeln!(
                out,
                "{:>5} {:>8} {:>5} {:>10} {:>10} {:>10}",
                "width", "lifetime", "count", "mean_us", "max_us", "max_peak"
            )
            .unwrap();
            for a in aggregates {
                writeln!(
                    out,
                    "{:>5} {:>8} {:>5} {:>10} {:>10} {:>10}",
                    a.width, a.lifetime, a.count, a.mean_us, a.max_us, a.max_peak
                )
                .unwrap();
            }
        }
    }
    out
}

pub fn run(inputs: &[PathBuf], jobs: usize, guards: &Guards, format: Format, warn: u64) -> Result<Outcome, Failure> {
    let files = expand(inputs)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::Input(anyhow!("thread pool: {e}")))?;
    let rows: Vec<Row> =
        pool.install(|| files.par_iter().enumerate().map(|(i, p)| bench_one(i, p, guards, warn)).collect());
    print(&render(&rows, &aggregate(&rows), format));
    Ok(Outcome::Yes)
}
