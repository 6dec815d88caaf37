use std::fmt::Write as _;
use std::fs;
use std::time::Duration;

use aam::altcyc::{solve, MechanismTrace, Outcome, SolveOptions, DEFAULT_MAX_COST};
use aam::chemio::ReactionDocument;
use aam::ilpgen::{build_ilp2, build_ilp4, enumerate_optima, export_lp, IlpModel};
use aam::mapping::{decompose_cycles, AtomMap, InstanceError, Origin, ReactionInstance};
use anyhow::anyhow;
use serde::Serialize;

use crate::input::read_reaction;
use crate::{emit, exit, with_jobs, ExportArgs, Failure, Format, MapArgs, Solver};

fn usage(msg: &str) -> Failure {
    Failure::new(exit::PARSE, anyhow!("{msg}"))
}

pub fn instance(doc: &ReactionDocument) -> Result<ReactionInstance, Failure> {
    if !doc.is_balanced() {
        return Err(Failure::new(
            exit::UNBALANCED,
            anyhow!("unbalanced reaction: the sides carry different atoms or charge"),
        ));
    }
    ReactionInstance::from_document(doc).map_err(|e: InstanceError| Failure::new(exit::UNBALANCED, e))
}

pub fn model(inst: &ReactionInstance, solver: Solver) -> IlpModel {
    match solver {
        Solver::Ilp4 => build_ilp4(inst),
        _ => build_ilp2(inst),
    }
}

/// `e1:4` is atom 4 of educt species 1; `#2` marks the second copy of a
/// species with a count.
fn vertex_name(side: char, origin: Origin) -> String {
    match origin {
        Origin::Atom { species, copy, atom } if copy > 0 => format!("{side}{species}#{}:{atom}", copy + 1),
        Origin::Atom { species, atom, .. } => format!("{side}{species}:{atom}"),
        Origin::Special(l) => l.to_string(),
        Origin::Padding(l) => format!("{l}*"),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AtomPair {
    label: String,
    educt: String,
    product: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ChangedPair {
    u: usize,
    v: usize,
    change: i32,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Step {
    from: usize,
    to: usize,
    sign: i32,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MapEntry {
    cost: u32,
    /// Educt vertex -> product vertex.
    map: Vec<usize>,
    atoms: Vec<AtomPair>,
    /// Pairs of educt vertices whose weight changes.
    transition_state: Vec<ChangedPair>,
    /// Closed alternating walks over educt vertices; steps alternate +1, -1.
    cycles: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mechanism: Option<Vec<Vec<Step>>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MapReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    solver: &'static str,
    status: &'static str,
    min_cost: Option<u32>,
    max_cost: Option<u32>,
    /// Educt vertex names, indexed like `map`.
    educt_vertices: Vec<String>,
    product_vertices: Vec<String>,
    maps: Vec<MapEntry>,
}

fn entry(inst: &ReactionInstance, map: &AtomMap, trace: Option<&MechanismTrace>) -> MapEntry {
    let ts = map.transition_state(inst);
    let cycles = decompose_cycles(&ts)
        .map(|d| d.cycles.iter().map(|c| c.walk().to_vec()).collect())
        .unwrap_or_default();
    MapEntry {
        cost: map.cost(),
        map: map.as_slice().to_vec(),
        atoms: (0..inst.len())
            .map(|i| AtomPair {
                label: inst.g1().label(i).to_string(),
                educt: vertex_name('e', inst.origin1(i)),
                product: vertex_name('p', inst.origin2(map.image(i))),
            })
            .collect(),
        transition_state: ts
            .edges()
            .iter()
            .map(|(&(u, v), &change)| ChangedPair { u, v, change })
            .collect(),
        cycles,
        mechanism: trace.map(|t| {
            t.paths
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|s| Step {
                            from: s.from,
                            to: s.to,
                            sign: s.sign,
                        })
                        .collect()
                })
                .collect()
        }),
    }
}

fn solver_name(s: Solver) -> &'static str {
    match s {
        Solver::Altcyc => "altcyc",
        Solver::Ilp2 => "ilp2",
        Solver::Ilp4 => "ilp4",
    }
}

pub fn run_map(args: &MapArgs) -> Result<u8, Failure> {
    let flags = &args.solve;
    let ilp = flags.solver != Solver::Altcyc;
    if ilp && (flags.elementary || flags.connected) {
        return Err(usage("--elementary and --connected apply to --solver altcyc only"));
    }
    match args.format {
        Format::Csv => return Err(usage("--format csv is for the stats command")),
        Format::Lp if !ilp => return Err(usage("--format lp needs --solver ilp2 or ilp4")),
        Format::Mechanism if ilp => return Err(usage("--format mechanism needs --solver altcyc")),
        _ => {}
    }
    if flags.max_cost.is_some_and(|k| k % 2 == 1) {
        return Err(usage("--max-cost must be even"));
    }
    let doc = read_reaction(&args.input)?;
    let inst = instance(&doc)?;
    if args.format == Format::Lp {
        emit(&export_lp(&model(&inst, flags.solver)))?;
        return Ok(0);
    }
    let timeout = flags.timeout_ms.map(Duration::from_millis);
    let mut report = MapReport {
        id: doc.id.clone(),
        solver: solver_name(flags.solver),
        status: "solved",
        min_cost: None,
        max_cost: flags.max_cost,
        educt_vertices: (0..inst.len()).map(|i| vertex_name('e', inst.origin1(i))).collect(),
        product_vertices: (0..inst.len()).map(|p| vertex_name('p', inst.origin2(p))).collect(),
        maps: Vec::new(),
    };
    let code;
    if ilp {
        let m = model(&inst, flags.solver);
        let e = with_jobs(flags.jobs, || enumerate_optima(&inst, &m, timeout))?
            .map_err(|e| Failure::new(exit::OTHER, e))?;
        report.min_cost = e.min_cost;
        report.maps = e.maps.iter().map(|m| entry(&inst, m, None)).collect();
        code = if !e.complete {
            report.status = "timeout";
            exit::TIMEOUT
        } else if e.min_cost.zip(flags.max_cost).is_some_and(|(c, k)| c > k) {
            report.status = "bound-exhausted";
            report.maps.clear();
            report.min_cost = None;
            exit::BOUND_EXHAUSTED
        } else {
            0
        };
    } else {
        let options = SolveOptions {
            max_cost: flags.max_cost.unwrap_or(DEFAULT_MAX_COST),
            connected_only: flags.connected,
            elementary_only: flags.elementary,
            timeout,
            parallel: true,
        };
        report.max_cost = Some(options.max_cost);
        let s = with_jobs(flags.jobs, || solve(&inst, &options))?;
        report.min_cost = s.min_cost;
        report.maps = s.maps.iter().map(|m| entry(&inst, &m.map, Some(&m.trace))).collect();
        (report.status, code) = match s.outcome {
            Outcome::Solved => ("solved", 0),
            Outcome::BoundExhausted => ("bound-exhausted", exit::BOUND_EXHAUSTED),
            Outcome::Timeout => ("timeout", exit::TIMEOUT),
        };
    }
    let out = match args.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Mechanism => mechanism_text(&inst, &report),
        _ => text(&inst, &report),
    };
    emit(&out)?;
    Ok(code)
}

fn pair_name(inst: &ReactionInstance, r: &MapReport, u: usize, v: usize) -> String {
    let l = |x: usize| inst.g1().label(x).to_string();
    if u == v {
        format!("{} {} (lone pairs)", l(u), r.educt_vertices[u])
    } else {
        format!("{} {} -- {} {}", l(u), r.educt_vertices[u], l(v), r.educt_vertices[v])
    }
}

fn text(inst: &ReactionInstance, r: &MapReport) -> String {
    let mut out = String::new();
    if let Some(id) = &r.id {
        writeln!(out, "reaction: {id}").unwrap();
    }
    writeln!(out, "solver: {}", r.solver).unwrap();
    writeln!(out, "status: {}", r.status).unwrap();
    match r.min_cost {
        Some(c) => writeln!(out, "min cost: {c}").unwrap(),
        None => writeln!(out, "min cost: none within bound").unwrap(),
    }
    writeln!(out, "classes: {}", r.maps.len()).unwrap();
    for (k, m) in r.maps.iter().enumerate() {
        writeln!(out, "\nclass {}", k + 1).unwrap();
        writeln!(out, "  map (educt -> product):").unwrap();
        for a in &m.atoms {
            writeln!(out, "    {:<10} {:<12} -> {}", a.label, a.educt, a.product).unwrap();
        }
        writeln!(out, "  transition state:").unwrap();
        for c in &m.transition_state {
            writeln!(out, "    {:+}  {}", c.change, pair_name(inst, r, c.u, c.v)).unwrap();
        }
        writeln!(out, "  cycles:").unwrap();
        for c in &m.cycles {
            let names: Vec<&str> = c.iter().map(|&v| r.educt_vertices[v].as_str()).collect();
            writeln!(out, "    ({}) length {}", names.join(" "), c.len()).unwrap();
        }
    }
    out
}

fn mechanism_text(inst: &ReactionInstance, r: &MapReport) -> String {
    let mut out = String::new();
    for (k, m) in r.maps.iter().enumerate() {
        writeln!(out, "class {} (cost {})", k + 1, m.cost).unwrap();
        let mut n = 0;
        for (p, path) in m.mechanism.iter().flatten().enumerate() {
            writeln!(out, "  path {}", p + 1).unwrap();
            for s in path {
                n += 1;
                let verb = if s.sign > 0 { "form" } else { "break" };
                writeln!(out, "    {n:>2}. {verb:<5} {:+}  {}", s.sign, pair_name(inst, r, s.from, s.to)).unwrap();
            }
        }
    }
    out
}

pub fn run_export(args: &ExportArgs) -> Result<u8, Failure> {
    if args.solver == Solver::Altcyc {
        return Err(usage("export-lp needs --solver ilp2 or ilp4"));
    }
    let doc = read_reaction(&args.input)?;
    let inst = instance(&doc)?;
    let text = export_lp(&model(&inst, args.solver));
    match &args.output {
        Some(path) => fs::write(path, text)?,
        None => emit(&text)?,
    }
    Ok(0)
}
