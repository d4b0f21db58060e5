use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Context};
use serde_json::{json, Value};
use tempo_core::euler::{
    euler_width_bound, gap_range, run_temp_euler, validate_gaps, EulerConfig, EulerError, EulerRun,
};
use tempo_core::gen::{generate, GenSpec};
use tempo_core::io::{
    format_circuit, format_deletions, format_exploration, parse_static_graph, read_instance, write_instance,
    write_instance_json, Instance,
};
use tempo_core::reach::{brute_force_mrd, run_min_reach_delete, temporal_reach_without, MrdConfig, MrdError};
use tempo_core::reductions::{reduce_3col_to_starexp, reduce_clique_to_mrd, reduce_starexp_to_doublestar};
use tempo_core::star::{scale_to_even, solve_star_exp_with, star_bound_violated};
use tempo_core::width::{edge_bag_sequence, imw, size_changes, vertex_bag_sequence, vimw};
use tempo_core::{
    brute_force_star_exp, reduce_star_to_euler, MrdInstance, StarInstance, StaticGraph, TemporalGraph, TemporalWalk,
    TimeEdge, Visit,
};

use crate::{bench, Cli, Command, Failure, Format, Guards, Outcome, ReduceKind};

/// Above this vertex width the reachability program's layers get large.
const MRD_VIMW_WARN: usize = 7;

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let warn = cli.warn_lifetime;
    match &cli.command {
        Command::Width { file, vertex, format } => width(&load(file, warn)?, *vertex, format.format),
        Command::Euler { file, witness, winwin, stats, guards, format } => {
            euler(&load(file, warn)?, *witness, winwin.as_deref(), *stats, guards, format.format)
        }
        Command::Starexp { file, witness, winwin, oracle, guards, format } => {
            starexp(&load(file, warn)?, *witness, winwin.as_deref(), *oracle, guards, format.format)
        }
        Command::Mrd { file, k, h, witness, oracle, no_prune, format } => {
            mrd(load(file, warn)?, *k, *h, *witness, *oracle, !*no_prune, format.format)
        }
        Command::Reduce { kind, input, r, output, format } => {
            reduce(*kind, input, *r, output.as_deref(), format.format)
        }
        Command::Gen { family, seed, n, m, k, l, u, lifetime, output, format } => {
            let spec = GenSpec { seed: *seed, family: *family, n: *n, m: *m, k: *k, l: *l, u: *u, lifetime: *lifetime };
            let inst = generate(&spec).map_err(Failure::input)?;
            emit_instance(&inst, "", output.as_deref(), format.format)
        }
        Command::Bench { inputs, jobs, guards, format } => bench::run(inputs, *jobs, guards, format.format, warn),
    }
}

pub fn config(guards: &Guards) -> EulerConfig {
    EulerConfig { max_width: guards.max_width, max_states: guards.max_states }
}

pub fn load(path: &Path, warn_lifetime: u64) -> Result<Instance, Failure> {
    let inst = read_instance(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::Input)?;
    warn_if_long(&inst.graph, path, warn_lifetime);
    Ok(inst)
}

pub fn warn_if_long(g: &TemporalGraph, path: &Path, threshold: u64) {
    if let Some(l) = g.lifetime().filter(|&l| l > threshold) {
        eprintln!("warning: {} has lifetime {l} (above {threshold}); runtime grows with it", path.display());
    }
}

pub fn euler_failure(e: EulerError) -> Failure {
    Failure::guard(e)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) ends output quietly.
pub fn print(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(s.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
        }
    }
}

fn width(inst: &Instance, vertex: bool, format: Format) -> Result<Outcome, Failure> {
    let g = &inst.graph;
    let (variant, sizes, w, lifetime) = if vertex {
        let seq = vertex_bag_sequence(g);
        ("vertex", seq.sizes(), seq.width, seq.lifetime)
    } else {
        let seq = edge_bag_sequence(g);
        ("edge", seq.sizes(), seq.width, seq.lifetime)
    };
    let changes = size_changes(&sizes);
    match format {
        Format::Text => {
            let mut out = format!("# {variant} bags, lifetime {lifetime}\n");
            for (t, s) in &changes {
                writeln!(out, "t {t} size {s}").unwrap();
            }
            writeln!(out, "width {w}").unwrap();
            print(&out);
        }
        Format::Csv => {
            let mut out = format!("# variant={variant} width={w} lifetime={lifetime}\nt,size\n");
            for (t, s) in &changes {
                writeln!(out, "{t},{s}").unwrap();
            }
            print(&out);
        }
        Format::Json => {
            let changes: Vec<Value> = changes.iter().map(|(t, s)| json!({ "t": t, "size": s })).collect();
            print(&format!(
                "{:#}\n",
                json!({ "variant": variant, "width": w, "lifetime": lifetime, "changes": changes })
            ));
        }
    }
    Ok(Outcome::Yes)
}

/// A "no" proved by a width bound alone.
struct Certificate {
    width: usize,
    bound: u64,
}

fn pair(values: Option<&[u64]>, what: &str) -> Result<Option<(u64, u64)>, Failure> {
    match values {
        None | Some([]) => Ok(None),
        Some(&[a, b]) => Ok(Some((a, b))),
        Some(_) => Err(Failure::Input(anyhow!("--winwin takes no values or both {what}"))),
    }
}

fn steps_json(g: &TemporalGraph, walk: &TemporalWalk) -> Vec<Value> {
    let verts = walk.vertices(g);
    walk.steps
        .iter()
        .zip(verts.windows(2))
        .map(|(te, w)| json!({ "from": g.label(w[0]), "to": g.label(w[1]), "time": te.time }))
        .collect()
}

fn decision_word(yes: bool) -> &'static str {
    if yes {
        "yes"
    } else {
        "no"
    }
}

fn euler(
    inst: &Instance,
    witness: bool,
    winwin: Option<&[u64]>,
    stats: bool,
    guards: &Guards,
    format: Format,
) -> Result<Outcome, Failure> {
    let g = &inst.graph;
    let mut certificate = None;
    if winwin.is_some() {
        let measured_u = gap_range(g).map_or(0, |(_, hi)| hi);
        let (k, u) = pair(winwin, "K and U")?.unwrap_or((g.max_times_per_edge() as u64, measured_u));
        validate_gaps(g, k as usize, 0, u).map_err(Failure::input)?;
        let (w, bound) = (imw(g), euler_width_bound(k as usize, u));
        if w as u64 > bound {
            certificate = Some(Certificate { width: w, bound });
        }
    }
    let run = match certificate {
        Some(_) => None,
        None => Some(run_temp_euler(g, &config(guards)).map_err(euler_failure)?),
    };
    let walk = run.as_ref().and_then(|r| r.walk.as_ref());
    let yes = walk.is_some();
    match format {
        Format::Text => {
            let mut out = String::new();
            match &certificate {
                Some(c) => writeln!(out, "no (certified: width {} exceeds bound {})", c.width, c.bound).unwrap(),
                None => writeln!(out, "{}", decision_word(yes)).unwrap(),
            }
            if let Some(r) = &run {
                writeln!(out, "# width {}, {} layers, peak layer {}", r.width, r.stats.len(), r.peak_layer()).unwrap();
            }
            if let (true, Some(w)) = (witness, walk) {
                out.push_str(&format_circuit(g, w));
            }
            if let (true, Some(r)) = (stats, &run) {
                out.push_str("# time states bag end_vertices transitions\n");
                for s in &r.stats {
                    writeln!(out, "{} {} {} {} {}", s.time, s.states, s.bag, s.end_vertices, s.transitions).unwrap();
                }
            }
            print(&out);
        }
        Format::Csv => {
            let mut out = String::from("decision,certified,width,peak_layer\n");
            let (w, peak) =
                run.as_ref().map_or((certificate.as_ref().map_or(0, |c| c.width), 0), |r| (r.width, r.peak_layer()));
            writeln!(out, "{},{},{w},{peak}", decision_word(yes), certificate.is_some()).unwrap();
            if let (true, Some(r)) = (stats, &run) {
                out.push_str(&stats_csv(r));
            }
            print(&out);
        }
        Format::Json => {
            let mut v = json!({ "decision": decision_word(yes), "certified": certificate.is_some() });
            if let Some(c) = &certificate {
                v["width"] = json!(c.width);
                v["bound"] = json!(c.bound);
            }
            if let Some(r) = &run {
                v["width"] = json!(r.width);
                v["peak_layer"] = json!(r.peak_layer());
            }
            if let (true, Some(w)) = (witness, walk) {
                v["start"] = json!(g.label(w.start));
                v["circuit"] = Value::Array(steps_json(g, w));
            }
            if let (true, Some(r)) = (stats, &run) {
                v["stats"] = r
                    .stats
                    .iter()
                    .map(|s| {
                        json!({ "time": s.time, "states": s.states, "bag": s.bag,
                                "end_vertices": s.end_vertices, "transitions": s.transitions })
                    })
                    .collect();
            }
            print(&format!(
                "{v:#}
"
            ));
        }
    }
    Ok(if yes { Outcome::Yes } else { Outcome::No })
}

fn stats_csv(r: &EulerRun) -> String {
    let mut out = String::from("# layers\ntime,states,bag,end_vertices,transitions\n");
    for s in &r.stats {
        writeln!(out, "{},{},{},{},{}", s.time, s.states, s.bag, s.end_vertices, s.transitions).unwrap();
    }
    out
}

fn visits_json(g: &TemporalGraph, visits: &[Visit]) -> Vec<Value> {
    visits
        .iter()
        .map(|v| {
            let e = g.edge(v.edge);
            json!({ "leaf": g.label(e.u.max(e.v)), "enter": v.enter, "exit": v.exit })
        })
        .collect()
}

fn starexp(
    inst: &Instance,
    witness: bool,
    winwin: Option<&[u64]>,
    oracle: bool,
    guards: &Guards,
    format: Format,
) -> Result<Outcome, Failure> {
    let s = StarInstance::from_graph(inst.graph.clone()).map_err(Failure::input)?;
    let g = s.graph();
    let mut certificate = None;
    if winwin.is_some() {
        let measured = gap_range(g).unwrap_or((0, 0));
        let (l, u) = pair(winwin, "L and U")?.unwrap_or(measured);
        let k = s.k();
        validate_gaps(g, k, l, u).map_err(Failure::input)?;
        let w = imw(g);
        if star_bound_violated(w, k, l, u) {
            certificate = Some(Certificate { width: w, bound: (2 * (k as u64 - 1) * u + 1) / (l + 1) });
        }
    }
    let answer = match (&certificate, oracle) {
        (Some(_), _) => None,
        (None, true) => brute_force_star_exp(&s).map_err(Failure::guard)?,
        (None, false) => solve_star_exp_with(&s, &config(guards)).map_err(euler_failure)?,
    };
    let yes = answer.is_some();
    match format {
        Format::Text => {
            let mut out = String::new();
            match &certificate {
                Some(c) => writeln!(out, "no (certified: width {} exceeds bound {})", c.width, c.bound).unwrap(),
                None => writeln!(out, "{}", decision_word(yes)).unwrap(),
            }
            if let (true, Some(x)) = (witness, &answer) {
                out.push_str(&format_exploration(g, &x.visits));
            }
            print(&out);
        }
        Format::Csv => {
            let mut out = String::from("decision,certified,width,edges\n");
            writeln!(out, "{},{},{},{}", decision_word(yes), certificate.is_some(), imw(g), s.edge_count()).unwrap();
            if let (true, Some(x)) = (witness, &answer) {
                out.push_str("# visits\nleaf,enter,exit\n");
                for v in &x.visits {
                    writeln!(out, "{},{},{}", g.label(s.leaf(v.edge)), v.enter, v.exit).unwrap();
                }
            }
            print(&out);
        }
        Format::Json => {
            let mut v = json!({ "decision": decision_word(yes), "certified": certificate.is_some(), "width": imw(g) });
            if let Some(c) = &certificate {
                v["bound"] = json!(c.bound);
            }
            if let (true, Some(x)) = (witness, &answer) {
                v["visits"] = Value::Array(visits_json(g, &x.visits));
            }
            print(&format!(
                "{v:#}
"
            ));
        }
    }
    Ok(if yes { Outcome::Yes } else { Outcome::No })
}

fn budget(flag: Option<u64>, param: Option<u64>, name: &str) -> Result<usize, Failure> {
    flag.or(param)
        .map(|v| v as usize)
        .ok_or_else(|| Failure::Input(anyhow!("no {name} given: pass --{name} or add `param {name} <int>`")))
}

pub fn mrd_failure(e: MrdError) -> Failure {
    match e {
        MrdError::SourceOutOfRange(_) => Failure::input(e),
        _ => Failure::guard(e),
    }
}

#[allow(clippy::too_many_arguments)]
fn mrd(
    inst: Instance,
    k: Option<u64>,
    h: Option<u64>,
    witness: bool,
    oracle: bool,
    prune: bool,
    format: Format,
) -> Result<Outcome, Failure> {
    let k = budget(k, inst.k, "k")?;
    let h = budget(h, inst.h, "h")?;
    let m = MrdInstance::new(inst.graph, inst.sources, k, h).map_err(mrd_failure)?;
    let vw = vimw(&m.graph);
    if vw > MRD_VIMW_WARN {
        eprintln!("warning: vertex width {vw} is above {MRD_VIMW_WARN}; layers may be large");
    }
    let (deletions, peak) = if oracle {
        (brute_force_mrd(&m).map_err(Failure::guard)?, None)
    } else {
        let run = run_min_reach_delete(&m, &MrdConfig { prune, ..MrdConfig::default() }).map_err(mrd_failure)?;
        (run.deletions, Some(run.peak_layer))
    };
    let g = &m.graph;
    let reached = deletions.as_ref().map(|d| temporal_reach_without(g, &m.sources, d).len());
    let yes = deletions.is_some();
    match format {
        Format::Text => {
            let mut out = format!("{}\n", decision_word(yes));
            if let (Some(d), Some(r)) = (&deletions, reached) {
                writeln!(out, "# deletions {}, reached {r}", d.len()).unwrap();
            }
            writeln!(out, "# vertex width {vw}{}", peak.map_or(String::new(), |p| format!(", peak layer {p}")))
                .unwrap();
            if let (true, Some(d)) = (witness, &deletions) {
                out.push_str(&format_deletions(g, d));
            }
            print(&out);
        }
        Format::Csv => {
            let mut out = String::from("decision,deletions,reached,vertex_width\n");
            let count = deletions.as_ref().map_or(String::new(), |d| d.len().to_string());
            let reached = reached.map_or(String::new(), |r| r.to_string());
            writeln!(out, "{},{count},{reached},{vw}", decision_word(yes)).unwrap();
            if let (true, Some(d)) = (witness, &deletions) {
                out.push_str("# deletions\nu,v,time\n");
                for te in d {
                    let e = g.edge(te.edge);
                    writeln!(out, "{},{},{}", g.label(e.u), g.label(e.v), te.time).unwrap();
                }
            }
            print(&out);
        }
        Format::Json => {
            let mut v = json!({ "decision": decision_word(yes), "vertex_width": vw });
            if let (Some(d), Some(r)) = (&deletions, reached) {
                v["deletion_count"] = json!(d.len());
                v["reached"] = json!(r);
            }
            if let (true, Some(d)) = (witness, &deletions) {
                v["deletions"] = Value::Array(deletions_json(g, d));
            }
            print(&format!(
                "{v:#}
"
            ));
        }
    }
    Ok(if yes { Outcome::Yes } else { Outcome::No })
}

fn deletions_json(g: &TemporalGraph, d: &[TimeEdge]) -> Vec<Value> {
    d.iter()
        .map(|te| {
            let e = g.edge(te.edge);
            json!({ "u": g.label(e.u), "v": g.label(e.v), "time": te.time })
        })
        .collect()
}

fn read_static(path: &Path) -> Result<StaticGraph, Failure> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::Input)?;
    parse_static_graph(&text).with_context(|| format!("parsing {}", path.display())).map_err(Failure::Input)
}

fn read_star(path: &Path) -> Result<StarInstance, Failure> {
    let inst = read_instance(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::Input)?;
    StarInstance::from_graph(inst.graph).map_err(Failure::input)
}

fn reduce(
    kind: ReduceKind,
    input: &Path,
    r: Option<usize>,
    output: Option<&Path>,
    format: Format,
) -> Result<Outcome, Failure> {
    let (inst, note) = match kind {
        ReduceKind::ColStar => {
            let g = read_static(input)?;
            let (star, cert) = reduce_3col_to_starexp(&g);
            let note = format!(
                "# 3-colouring image of a {}-vertex graph, time scale {}: vertex edges 0..{}, gadget edges after\n",
                cert.n, cert.scale, cert.n
            );
            (Instance::new(star.into_graph()), note)
        }
        ReduceKind::StarEuler => {
            let s = read_star(input)?;
            let (scaled, factor) = scale_to_even(&s);
            let (image, _) = reduce_star_to_euler(&scaled).map_err(Failure::input)?;
            let note = format!("# triangle image, times scaled by {factor}; star edge i is edges 3i..3i+2\n");
            (Instance::new(image), note)
        }
        ReduceKind::StarDoublestar => {
            let s = read_star(input)?;
            let (image, cert) = reduce_starexp_to_doublestar(&s);
            let note = format!(
                "# double star: centers 0 and 1, leaf j is vertex j+2{}, anchor edges {} {}\n",
                if cert.dummy.is_some() { ", dummy leaf added" } else { "" },
                cert.anchor[0],
                cert.anchor[1]
            );
            (Instance::new(image), note)
        }
        ReduceKind::CliqueMrd => {
            let r = r.ok_or_else(|| Failure::Input(anyhow!("clique-mrd needs -r <int>")))?;
            let g = read_static(input)?;
            let (m, cert) = reduce_clique_to_mrd(&g, r).map_err(Failure::input)?;
            let note = format!(
                "# clique image for r = {r}: source 0, vertex v is node v+1, {} padding edges\n",
                cert.padding_edges
            );
            let inst = Instance { graph: m.graph, sources: m.sources, k: Some(m.k as u64), h: Some(m.h as u64) };
            (inst, note)
        }
    };
    emit_instance(&inst, &note, output, format)
}

fn emit_instance(inst: &Instance, note: &str, output: Option<&Path>, format: Format) -> Result<Outcome, Failure> {
    let text = match format {
        Format::Text => format!("{note}{}", write_instance(inst)),
        Format::Json => format!("{}\n", write_instance_json(inst)),
        Format::Csv => return Err(Failure::Input(anyhow!("instances are written as text or json, not csv"))),
    };
    match output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display())).map_err(Failure::Input)?
        }
        None => print(&text),
    }
    Ok(Outcome::Yes)
}
