//! Search-tree solver: grows alternating paths of unit weight changes from
//! seed pairs, closes them into cycles, and completes each closed candidate
//! to a full map by isomorphism of the unchanged remainder. The cost bound is
//! raised step by step until some candidate completes.

mod bound;
mod search;
mod trace;

use std::sync::atomic::AtomicBool;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::mapping::{complete_partial, AtomMap, EquivalenceClasses, ReactionInstance};

pub use bound::cost_lower_bound;
pub use search::{Candidate, Mode};
pub use trace::{weight_along_path, MechanismTrace, Step};

use search::{Limits, Prepared, Search};

pub const DEFAULT_MAX_COST: u32 = 10;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_cost: u32,
    /// Keep only maps whose transition state is connected.
    pub connected_only: bool,
    /// Search single elementary cycles only.
    pub elementary_only: bool,
    pub timeout: Option<Duration>,
    /// Split the seeds across the rayon pool.
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_cost: DEFAULT_MAX_COST,
            connected_only: false,
            elementary_only: false,
            timeout: None,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Solved,
    /// No map within `max_cost`.
    BoundExhausted,
    Timeout,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolvedMap {
    pub map: AtomMap,
    pub trace: MechanismTrace,
}

#[derive(Debug, Clone, Serialize)]
pub struct Solution {
    pub outcome: Outcome,
    pub min_cost: Option<u32>,
    /// One map per equivalence class, in discovery order.
    pub maps: Vec<SolvedMap>,
    pub candidates: usize,
    /// Largest bound fully searched.
    pub searched_up_to: Option<u32>,
    /// Costs below this were ruled out without searching.
    pub lower_bound: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("cycle length {0} is odd; alternating cycles have even length")]
    OddLength(u32),
}

struct Batch {
    candidates: Vec<Candidate>,
    timed_out: bool,
}

fn run(inst: &ReactionInstance, k: u32, mode: Mode, parallel: bool, deadline: Option<Instant>) -> Batch {
    let pre = Prepared::new(inst);
    let stop = AtomicBool::new(false);
    let seeds = pre.seeds();
    let per_seed = |&(i, p): &(usize, usize)| {
        let mut s = Search::new(
            &pre,
            mode,
            Limits {
                deadline,
                stop: &stop,
            },
        );
        s.run_seed(i, p, k);
        (s.out, s.timed_out)
    };
    let parts: Vec<(Vec<Candidate>, bool)> = if parallel {
        seeds.par_iter().map(per_seed).collect()
    } else {
        seeds.iter().map(per_seed).collect()
    };
    let mut seen = std::collections::HashSet::new();
    let mut candidates = Vec::new();
    let mut timed_out = false;
    for (cands, t) in parts {
        timed_out |= t;
        for c in cands {
            if seen.insert(c.key()) {
                candidates.push(c);
            }
        }
    }
    Batch {
        candidates,
        timed_out,
    }
}

/// Closed single elementary cycles of length `k` whose partial maps are not
/// ruled out by a weight-count bound; one candidate per partial map.
pub fn search_elementary(inst: &ReactionInstance, k: u32) -> Result<Vec<Candidate>, SearchError> {
    if k % 2 == 1 {
        return Err(SearchError::OddLength(k));
    }
    Ok(run(inst, k, Mode::Elementary, false, None).candidates)
}

/// Like [`search_elementary`] but allowing revisits, weight changes above one
/// and several closed paths.
pub fn search_general(inst: &ReactionInstance, k: u32) -> Result<Vec<Candidate>, SearchError> {
    if k % 2 == 1 {
        return Err(SearchError::OddLength(k));
    }
    Ok(run(inst, k, Mode::General, false, None).candidates)
}

/// Minimum cost and one map per equivalence class of optimal maps.
pub fn solve(inst: &ReactionInstance, options: &SolveOptions) -> Solution {
    let deadline = options.timeout.map(|t| Instant::now() + t);
    let mode = if options.elementary_only {
        Mode::Elementary
    } else {
        Mode::General
    };
    let lower_bound = cost_lower_bound(inst);
    let mut total = 0;
    let mut searched = lower_bound.checked_sub(2).map(|b| b.min(options.max_cost & !1));
    let mut ell = lower_bound;
    while ell <= options.max_cost {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Solution {
                outcome: Outcome::Timeout,
                min_cost: None,
                maps: Vec::new(),
                candidates: total,
                searched_up_to: searched,
                lower_bound,
            };
        }
        let batch = if ell == 0 {
            let n = inst.len();
            Batch {
                candidates: vec![Candidate {
                    partial: vec![None; n],
                    trace: MechanismTrace::default(),
                }],
                timed_out: false,
            }
        } else {
            run(inst, ell, mode, options.parallel, deadline)
        };
        total += batch.candidates.len();
        let completed: Vec<Option<AtomMap>> = if options.parallel {
            batch
                .candidates
                .par_iter()
                .map(|c| complete_partial(inst, &c.partial, &c.path_weights()).ok())
                .collect()
        } else {
            batch
                .candidates
                .iter()
                .map(|c| complete_partial(inst, &c.partial, &c.path_weights()).ok())
                .collect()
        };
        let mut classes = EquivalenceClasses::new();
        let mut maps = Vec::new();
        for (c, m) in batch.candidates.into_iter().zip(completed) {
            let Some(m) = m else { continue };
            debug_assert_eq!(m.cost(), ell);
            if options.connected_only && !m.transition_state(inst).is_connected() {
                continue;
            }
            if classes.insert(inst, m.clone()) {
                maps.push(SolvedMap {
                    map: m,
                    trace: c.trace,
                });
            }
        }
        if !maps.is_empty() && !batch.timed_out {
            return Solution {
                outcome: Outcome::Solved,
                min_cost: Some(ell),
                maps,
                candidates: total,
                searched_up_to: Some(ell),
                lower_bound,
            };
        }
        if batch.timed_out {
            // Lower bounds were searched completely, so a map found here is
            // optimal even though its class list may be incomplete.
            return Solution {
                outcome: Outcome::Timeout,
                min_cost: (!maps.is_empty()).then_some(ell),
                maps,
                candidates: total,
                searched_up_to: searched,
                lower_bound,
            };
        }
        searched = Some(ell);
        ell += 2;
    }
    Solution {
        outcome: Outcome::BoundExhausted,
        min_cost: None,
        maps: Vec::new(),
        candidates: total,
        searched_up_to: searched,
        lower_bound,
    }
}
