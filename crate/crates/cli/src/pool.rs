use std::fmt::Write as _;
use std::time::Duration;

use aam::netcomp::{
    dataset_stats, dedup_isomorphic, filter_by_ts_length, generate_2to2, CandidateRecord, FilterOptions,
    GenerateOptions,
};
use anyhow::anyhow;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::input::read_pool;
use crate::{emit, exit, with_jobs, CandidateArgs, Failure, Format, Solver, StatsArgs};

pub fn run_candidates(args: &CandidateArgs) -> Result<u8, Failure> {
    let flags = &args.solve;
    let usage = |m: &str| Failure::new(exit::PARSE, anyhow!("{m}"));
    if flags.solver != Solver::Altcyc {
        return Err(usage("candidates are filtered with --solver altcyc only"));
    }
    if !matches!(args.format, Format::Json | Format::Text) {
        return Err(usage("candidates support --format json or text"));
    }
    let k_max = flags.max_cost.unwrap_or(8);
    if k_max % 2 == 1 {
        return Err(usage("--max-cost must be even"));
    }
    let pool = read_pool(&args.pool)?;
    let kept = dedup_isomorphic(&pool.molecules);
    if kept.len() < pool.molecules.len() {
        eprintln!(
            "aam: dropped {} molecule(s) isomorphic to an earlier one",
            pool.molecules.len() - kept.len()
        );
    }
    let molecules: Vec<_> = kept.iter().map(|&k| pool.molecules[k].clone()).collect();
    let ids: Vec<String> = kept.iter().map(|&k| pool.ids[k].clone()).collect();
    let generated = generate_2to2(
        &molecules,
        GenerateOptions {
            cancel_spectators: args.cancel_spectators,
        },
    );
    let mut candidates = generated.candidates;
    if let Some(n) = args.sample {
        if n < candidates.len() {
            let mut rng = ChaCha8Rng::seed_from_u64(flags.seed);
            let mut picked = sample(&mut rng, candidates.len(), n).into_vec();
            picked.sort_unstable();
            candidates = picked.into_iter().map(|k| candidates[k].clone()).collect();
        }
    }
    let options = FilterOptions {
        k_max,
        budget: flags.timeout_ms.map(Duration::from_millis),
        connected_only: flags.connected,
        elementary_only: flags.elementary,
    };
    let filtered = with_jobs(flags.jobs, || filter_by_ts_length(&molecules, &candidates, &options))?;
    let mut out = String::new();
    for f in &filtered {
        let r = CandidateRecord::new(f, &ids);
        match args.format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(&r).expect("record serializes")).unwrap(),
            _ => {
                let cost = r.min_cost.map_or_else(|| "-".to_string(), |c| c.to_string());
                writeln!(
                    out,
                    "{} -> {}\t{}\t{}\t{}",
                    r.left_ids.join(" + "),
                    r.right_ids.join(" + "),
                    r.formula,
                    serde_json::to_value(r.status).expect("status serializes").as_str().unwrap_or_default(),
                    cost
                )
                .unwrap();
            }
        }
    }
    emit(&out)?;
    Ok(0)
}

pub fn run_stats(args: &StatsArgs) -> Result<u8, Failure> {
    let pool = read_pool(&args.pool)?;
    let stats = dataset_stats(&pool.molecules, &pool.reactions);
    match args.format {
        Format::Json => emit(&(serde_json::to_string_pretty(&stats).expect("stats serialize") + "\n"))?,
        Format::Csv => {
            let mut out = String::from("distribution,value,count\n");
            for (size, n) in &stats.isomer_set_sizes {
                writeln!(out, "isomer_set_size,{size},{n}").unwrap();
            }
            for (freq, n) in &stats.participation_histogram {
                writeln!(out, "participation,{freq},{n}").unwrap();
            }
            emit(&out)?;
        }
        _ => return Err(Failure::new(exit::PARSE, anyhow!("stats supports --format csv or json"))),
    }
    Ok(0)
}
