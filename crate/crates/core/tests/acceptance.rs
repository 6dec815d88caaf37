//! Acceptance run: one PASS/FAIL line per criterion, then a nonzero exit if
//! any failed. Seeds and tolerances are fixed below.

use std::cell::Cell;
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use aam::altcyc::{solve, Outcome, SolveOptions};
use aam::chemio::parse_reaction_json;
use aam::element::Element;
use aam::ilpgen::{build_ilp2, build_ilp4, enumerate_optima, solve_exact, ExactOptions};
use aam::mapping::{
    brute_force_min_cost, complete_partial, decompose_cycles, same_classes, AtomMap, EquivalenceClasses,
    ReactionInstance, TransitionState,
};
use aam::netcomp::{
    filter_by_ts_length, generate_2to2, generate_from_histograms, histogram, naive_2to2, FilterOptions,
    GenerateOptions, Status,
};
use aam::synth::{random_molecule, random_pool, random_reaction, SynthOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_INSTANCES: usize = 600;
const ORACLE_MAX_ATOMS: usize = 10;
const ILP_INSTANCES: usize = 300;
const ILP_MAX_ATOMS: usize = 8;
const CASE_BUDGET: Duration = Duration::from_secs(60);
const LADDER: std::ops::RangeInclusive<usize> = 4..=20;
const ILP4_MIN_SLOPE: f64 = 1.8;
const POOLS: usize = 50;
const POOL_MAX: usize = 40;
const GENERATOR_LADDER: [usize; 6] = [25, 50, 100, 200, 400, 800];
const GENERATOR_MAX_EXPONENT: f64 = 2.3;
const MONOTONE_POOL: usize = 60;
const LARGE_POOL: usize = 200;
const LARGE_BUDGET: Duration = Duration::from_millis(100);

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("criterion {id}: {} | {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn instance(json: &str) -> ReactionInstance {
    ReactionInstance::from_document(&parse_reaction_json(json).unwrap()).unwrap()
}

/// Zero flux, even absolute degree, exact cycle reconstruction with even
/// (hence alternating) cycles.
fn structure_holds(inst: &ReactionInstance, map: &AtomMap) -> bool {
    let ts = map.transition_state(inst);
    if ts.flux_violation().is_some() || (0..inst.len()).any(|v| ts.abs_degree(v) % 2 == 1) {
        return false;
    }
    let Ok(d) = decompose_cycles(&ts) else {
        return false;
    };
    d.reconstruct() == ts
        && d.cycles.iter().all(|c| c.len() % 2 == 0)
        && ts.total() == map.cost()
}

/// Least-squares slope of `ln y` against `ln x`.
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn main() -> ExitCode {
    let mut r = Report { failures: 0 };
    let structure_checked = Cell::new(0usize);
    let structure_bad = Cell::new(0usize);
    let check = |inst: &ReactionInstance, map: &AtomMap| {
        structure_checked.set(structure_checked.get() + 1);
        if !structure_holds(inst, map) {
            structure_bad.set(structure_bad.get() + 1);
        }
    };

    // 1. altcyc against the exhaustive oracle.
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let opts = SynthOptions {
        max_atoms: ORACLE_MAX_ATOMS,
        max_walk: 10,
        ..SynthOptions::default()
    };
    let mut bad = 0;
    let mut largest = 0;
    let mut costs = BTreeSet::new();
    for _ in 0..ORACLE_INSTANCES {
        let (g1, g2) = random_reaction(&mut rng, &opts);
        let inst = ReactionInstance::from_graphs(g1, g2).unwrap();
        largest = largest.max(inst.len());
        let oracle = brute_force_min_cost(&inst, Some(inst.len())).unwrap();
        let s = solve(&inst, &SolveOptions::default());
        let found: Vec<AtomMap> = s.maps.iter().map(|m| m.map.clone()).collect();
        costs.insert(oracle.min_cost);
        if s.min_cost != Some(oracle.min_cost) || !same_classes(&inst, &found, &oracle.classes) {
            bad += 1;
        }
        for m in &s.maps {
            check(&inst, &m.map);
            if m.trace.replay() != m.map.transition_state(&inst) || !m.trace.alternates() {
                structure_bad.set(structure_bad.get() + 1);
            }
        }
        for m in &oracle.classes {
            check(&inst, m);
        }
    }
    r.line(
        "1 oracle equivalence",
        bad == 0,
        format!(
            "{ORACLE_INSTANCES} instances, <= {ORACLE_MAX_ATOMS} atoms per side (<= {largest} vertices), costs {costs:?}, mismatches {bad}, exact, {:.1?}",
            t.elapsed()
        ),
    );

    // 2. ILP2 / 2 == ILP4 == oracle; enumerated classes == altcyc classes.
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = SynthOptions {
        max_atoms: ILP_MAX_ATOMS,
        ..SynthOptions::default()
    };
    let mut bad = 0;
    for _ in 0..ILP_INSTANCES {
        let (g1, g2) = random_reaction(&mut rng, &opts);
        let inst = ReactionInstance::from_graphs(g1, g2).unwrap();
        let oracle = brute_force_min_cost(&inst, Some(inst.len())).unwrap();
        let want = oracle.min_cost as i64;
        let ilp2 = build_ilp2(&inst);
        let o2 = solve_exact(&ilp2, &ExactOptions::default()).objective;
        let o4 = solve_exact(&build_ilp4(&inst), &ExactOptions::default()).objective;
        let e = enumerate_optima(&inst, &ilp2, None).unwrap();
        let s = solve(&inst, &SolveOptions::default());
        let alt: Vec<AtomMap> = s.maps.iter().map(|m| m.map.clone()).collect();
        if o2 != Some(2 * want) || o4 != Some(want) || !e.complete || !same_classes(&inst, &e.maps, &alt) {
            bad += 1;
        }
        for m in e.maps.iter().chain(&alt) {
            check(&inst, m);
        }
    }
    r.line(
        "2 cross-solver agreement",
        bad == 0,
        format!(
            "{ILP_INSTANCES} instances, <= {ILP_MAX_ATOMS} atoms per side, ILP2/2 = ILP4 = oracle and class sets equal, mismatches {bad}, exact, {:.1?}",
            t.elapsed()
        ),
    );

    // 4. Worked instances (run before 3 so their maps are checked too).
    let t = Instant::now();
    let da = instance(r#"{"educts":[{"smiles":"C=C"},{"smiles":"C=CC=C"}],"products":[{"smiles":"C1=CCCCC1"}]}"#);
    let s = solve(&da, &SolveOptions::default());
    let da_time = t.elapsed();
    // Reference numbering: ethene C2=C3 (educt 0, 1), diene C4, C5, C6, C1
    // (educt 6..9); product ring C1..C6 is 0..5.
    let mut partial = vec![None; da.len()];
    for (e, p) in [(0, 3), (1, 4), (6, 5), (7, 0), (8, 1), (9, 2)] {
        partial[e] = Some(p);
    }
    let mapped = [0, 1, 6, 7, 8, 9];
    let mut weights = Vec::new();
    for (k, &u) in mapped.iter().enumerate() {
        for &v in &mapped[k + 1..] {
            let d = da.w2(partial[u].unwrap(), partial[v].unwrap()) - da.w1(u, v);
            if d != 0 {
                weights.push(((u, v), d));
            }
        }
    }
    let reference = complete_partial(&da, &partial, &TransitionState::from_edges(weights)).unwrap();
    let mut classes = EquivalenceClasses::new();
    for m in &s.maps {
        classes.insert(&da, m.map.clone());
        check(&da, &m.map);
    }
    let carbon_cycle = decompose_cycles(&reference.transition_state(&da))
        .map(|d| {
            d.cycles.len() == 1
                && d.cycles[0].len() == 6
                && d.cycles[0].is_elementary()
                && d.cycles[0]
                    .walk()
                    .iter()
                    .all(|&v| da.g1().label(v).element() == Some(Element::C))
        })
        .unwrap_or(false);
    let da_ok = s.outcome == Outcome::Solved
        && s.min_cost == Some(6)
        && reference.cost() == 6
        && classes.find(&da, &reference).is_some()
        && carbon_cycle
        && da_time <= CASE_BUDGET;
    r.line(
        "4a diels-alder",
        da_ok,
        format!(
            "min cost {:?} (want 6), {} classes, reference map in class set: {}, its transition state one elementary 6-cycle over C: {carbon_cycle}, {da_time:.1?} (budget {CASE_BUDGET:?})",
            s.min_cost,
            s.maps.len(),
            classes.find(&da, &reference).is_some()
        ),
    );

    let t = Instant::now();
    let stork = instance(
        r#"{"educts":[{"smiles":"CC(C)=CCCC(C)=CCCC(C)=CCCC(=O)O"}],
            "products":[{"smiles":"CC1(C)CCCC2(C)C1CCC1(C)OC(=O)CCC21"}]}"#,
    );
    let s = solve(&stork, &SolveOptions::default());
    let stork_time = t.elapsed();
    // Reference educt atoms: C1 = 1, C2 = 3, C5 = 6, C6 = 8, C9 = 11,
    // C10 = 13, O15 = 18 and its hydrogen h.
    let h = *stork
        .g1()
        .neighbors(18)
        .iter()
        .find(|&&x| stork.g1().label(x).element() == Some(Element::H))
        .unwrap();
    let expected = TransitionState::from_edges([
        ((18, h), -1),
        ((11, 18), 1),
        ((11, 13), -1),
        ((6, 13), 1),
        ((6, 8), -1),
        ((1, 8), 1),
        ((1, 3), -1),
        ((3, h), 1),
    ]);
    let ts_ok = s.maps.iter().any(|m| {
        let ts = m.map.transition_state(&stork);
        ts == expected && ts.is_connected()
    });
    for m in &s.maps {
        check(&stork, &m.map);
    }
    r.line(
        "4b stork cyclisation",
        s.min_cost == Some(8) && ts_ok && stork_time <= CASE_BUDGET,
        format!(
            "min cost {:?} (want 8), {} classes, connected transition state with the eight expected steps: {ts_ok}, {stork_time:.1?} (budget {CASE_BUDGET:?})",
            s.min_cost,
            s.maps.len()
        ),
    );

    // 3. Structure of every map produced above.
    r.line(
        "3 transition-state structure",
        structure_bad.get() == 0 && structure_checked.get() > 0,
        format!(
            "{} maps: zero flux, even |change| degrees, exact alternating-cycle reconstruction; violations {}",
            structure_checked.get(),
            structure_bad.get()
        ),
    );

    // 5. Model sizes.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = Vec::new();
    let mut slope_points = Vec::new();
    let mut covered = Vec::new();
    for atoms in LADDER {
        let opts = SynthOptions {
            min_atoms: atoms,
            max_atoms: atoms,
            charges: false,
            ..SynthOptions::default()
        };
        let (g1, g2) = random_reaction(&mut rng, &opts);
        let inst = ReactionInstance::from_graphs(g1, g2).unwrap();
        // Vertices include the padded special vertices.
        let n = inst.len();
        covered.push(n);
        let pairs = inst.compatible_pairs();
        let rows2 = build_ilp2(&inst).stats().rows;
        if rows2 != 2 * n + n + 2 * pairs.len() {
            bad.push(n);
        }
        // Independent count of ILP4 rows: three per product variable, the
        // assignment rows, and one per educt pair whose weight can change.
        let mut products = 0;
        let mut changing = BTreeSet::new();
        for (a, &(i, p)) in pairs.iter().enumerate() {
            if loop_changes(&inst, i, p) {
                changing.insert((i, i));
            }
            for &(j, q) in &pairs[a + 1..] {
                if i != j && p != q {
                    products += 1;
                    if inst.w2(p, q) != inst.w1(i, j) {
                        changing.insert((i.min(j), i.max(j)));
                    }
                }
            }
        }
        let rows4 = build_ilp4(&inst).stats().rows;
        if rows4 != 3 * products + 2 * n + changing.len() {
            bad.push(n);
        }
        slope_points.push((pairs.len() as f64, rows4 as f64));
    }
    let slope = loglog_slope(&slope_points);
    r.line(
        "5 model-size law",
        bad.is_empty() && slope >= ILP4_MIN_SLOPE,
        format!(
            "{} to {} atoms, vertex counts {covered:?}, ILP2 rows = 3n + 2*pairs exactly, ILP4 rows = independent count exactly; bad sizes {bad:?}; ILP4 rows vs pairs log-log slope {slope:.3} (>= {ILP4_MIN_SLOPE})",
            LADDER.start(),
            LADDER.end()
        ),
    );

    // 6. Generator against the quartic oracle, and its comparison count.
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = 0;
    let mut total = 0;
    for k in 0..POOLS {
        let size = rng.gen_range(2..=POOL_MAX);
        let pool = random_pool(&mut rng, size, &SynthOptions::default());
        let hs: Vec<_> = pool.iter().map(histogram).collect();
        let opts = GenerateOptions {
            cancel_spectators: k % 2 == 1,
        };
        let fast = generate_2to2(&pool, opts).candidates;
        total += fast.len();
        if fast != naive_2to2(&hs, opts) {
            bad += 1;
        }
    }
    let mut points = Vec::new();
    for &n in &GENERATOR_LADDER {
        let hs: Vec<_> = (0..n)
            .map(|_| {
                let atoms = rng.gen_range(3..=10);
                histogram(&random_molecule(&mut rng, atoms, &SynthOptions::default()))
            })
            .collect();
        points.push((n as f64, generate_from_histograms(&hs, GenerateOptions::default()).comparisons as f64));
    }
    let exponent = loglog_slope(&points);
    r.line(
        "6 2-to-2 generator",
        bad == 0 && exponent < GENERATOR_MAX_EXPONENT,
        format!(
            "{POOLS} pools of <= {POOL_MAX} molecules, {total} candidates, mismatches vs naive {bad}; comparisons on n = {GENERATOR_LADDER:?}: {:?}, fit exponent {exponent:.3} (< {GENERATOR_MAX_EXPONENT}), {:.1?}",
            points.iter().map(|p| p.1 as u64).collect::<Vec<_>>(),
            t.elapsed()
        ),
    );

    // 7. Filter monotonicity and a full large-pool run.
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pool = random_pool(&mut rng, MONOTONE_POOL, &SynthOptions::default());
    let cands = generate_2to2(&pool, GenerateOptions::default()).candidates;
    let run = |k_max| {
        filter_by_ts_length(
            &pool,
            &cands,
            &FilterOptions {
                k_max,
                budget: None,
                ..FilterOptions::default()
            },
        )
    };
    let (f4, f6, f8) = (run(4), run(6), run(8));
    let passes = |f: &[aam::netcomp::Filtered]| -> BTreeSet<usize> {
        f.iter().enumerate().filter(|(_, x)| x.status == Status::Pass).map(|(k, _)| k).collect()
    };
    let (p4, p6, p8) = (passes(&f4), passes(&f6), passes(&f8));
    let monotone = p4.is_subset(&p6) && p6.is_subset(&p8);
    let large = random_pool(&mut rng, LARGE_POOL, &SynthOptions::default());
    let large_cands = generate_2to2(&large, GenerateOptions::default()).candidates;
    let tl = Instant::now();
    let out = filter_by_ts_length(
        &large,
        &large_cands,
        &FilterOptions {
            k_max: 8,
            budget: Some(LARGE_BUDGET),
            ..FilterOptions::default()
        },
    );
    let count = |s: Status| out.iter().filter(|f| f.status == s).count();
    let completed = out.len() == large_cands.len() && large.len() == LARGE_POOL;
    r.line(
        "7 filter monotonicity and large pool",
        monotone && completed,
        format!(
            "{} candidates from {MONOTONE_POOL} molecules: passes at k = 4, 6, 8: {}, {}, {} (nested: {monotone}); {LARGE_POOL}-molecule pool: {} candidates, {} pass, {} fail, {} timeout at k_max 8 with {LARGE_BUDGET:?} each, {:.1?}; total {:.1?}",
            cands.len(),
            p4.len(),
            p6.len(),
            p8.len(),
            out.len(),
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Timeout),
            tl.elapsed(),
            t.elapsed()
        ),
    );

    println!("acceptance: {} failed", r.failures);
    if r.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// True if mapping `i -> p` changes the loop weight.
fn loop_changes(inst: &ReactionInstance, i: usize, p: usize) -> bool {
    inst.w2(p, p) != inst.w1(i, i)
}
