//! Network completion: proposing balanced reactions between the molecules of
//! a pool and keeping those with a short transition state.
//!
//! [`generate_2to2`] lists every pair of molecule multisets with at most two
//! members per side and equal atom/charge histograms by sorting all pair sums
//! once and scanning runs of equal histograms. [`filter_by_ts_length`] runs
//! the alternating-cycle solver on each candidate with a cost bound.

mod histogram;
mod stats;

use std::cell::Cell;
use std::cmp::Ordering;
use std::time::Duration;

use rayon::prelude::*;
use serde::Serialize;

use crate::altcyc::{solve, Outcome, SolveOptions};
use crate::mapping::ReactionInstance;
use crate::molgraph::{are_isomorphic, disjoint_union, fingerprint, MoleculeGraph};

pub use histogram::{histogram, AtomHistogram};
pub use stats::{dataset_stats, DatasetStats};

/// Two sides of a proposed reaction, as sorted pool indices (one or two each,
/// repeats allowed).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CandidatePair {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub histogram: AtomHistogram,
}

impl CandidatePair {
    /// True if some molecule occurs on both sides.
    pub fn has_spectator(&self) -> bool {
        self.left.iter().any(|x| self.right.contains(x))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GenerateOptions {
    /// Drop candidates that share a molecule between the sides; after
    /// cancelling it they reduce to a smaller candidate, which is emitted on
    /// its own.
    pub cancel_spectators: bool,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub candidates: Vec<CandidatePair>,
    /// Histogram comparisons made by the sort and the scan.
    pub comparisons: u64,
}

/// Indices of the first member of every isomorphism class, in pool order.
pub fn dedup_isomorphic(molecules: &[MoleculeGraph]) -> Vec<usize> {
    let prints: Vec<u64> = molecules.iter().map(fingerprint).collect();
    let mut kept: Vec<usize> = Vec::new();
    for (k, g) in molecules.iter().enumerate() {
        let dup = kept
            .iter()
            .any(|&j| prints[j] == prints[k] && are_isomorphic(&molecules[j], g).is_some());
        if !dup {
            kept.push(k);
        }
    }
    kept
}

fn sides(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for i in 0..n {
        for j in i..n {
            out.push(vec![i, j]);
        }
    }
    out
}

fn side_histogram(hs: &[AtomHistogram], side: &[usize]) -> AtomHistogram {
    side.iter().fold(AtomHistogram::default(), |acc, &k| acc + &hs[k])
}

/// Every unordered pair of distinct sides with equal histograms. Output is
/// sorted by histogram, then by `(left, right)` with `left < right`.
pub fn generate_2to2(molecules: &[MoleculeGraph], options: GenerateOptions) -> Generated {
    let hs: Vec<AtomHistogram> = molecules.iter().map(histogram).collect();
    generate_from_histograms(&hs, options)
}

pub fn generate_from_histograms(hs: &[AtomHistogram], options: GenerateOptions) -> Generated {
    let comparisons = Cell::new(0u64);
    let cmp = |a: &AtomHistogram, b: &AtomHistogram| -> Ordering {
        comparisons.set(comparisons.get() + 1);
        a.cmp(b)
    };
    let mut sums: Vec<(AtomHistogram, Vec<usize>)> = sides(hs.len())
        .into_iter()
        .map(|s| (side_histogram(hs, &s), s))
        .collect();
    sums.sort_by(|a, b| cmp(&a.0, &b.0).then_with(|| a.1.cmp(&b.1)));
    let mut candidates = Vec::new();
    let mut start = 0;
    while start < sums.len() {
        let mut end = start + 1;
        while end < sums.len() && cmp(&sums[start].0, &sums[end].0) == Ordering::Equal {
            end += 1;
        }
        for a in start..end {
            for b in a + 1..end {
                let c = CandidatePair {
                    left: sums[a].1.clone(),
                    right: sums[b].1.clone(),
                    histogram: sums[a].0.clone(),
                };
                if !(options.cancel_spectators && c.has_spectator()) {
                    candidates.push(c);
                }
            }
        }
        start = end;
    }
    Generated {
        candidates,
        comparisons: comparisons.get(),
    }
}

/// Quartic reference: every pair of sides compared directly.
pub fn naive_2to2(hs: &[AtomHistogram], options: GenerateOptions) -> Vec<CandidatePair> {
    let all = sides(hs.len());
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if a >= b {
                continue;
            }
            let (ha, hb) = (side_histogram(hs, a), side_histogram(hs, b));
            if ha == hb {
                let c = CandidatePair {
                    left: a.clone(),
                    right: b.clone(),
                    histogram: ha,
                };
                if !(options.cancel_spectators && c.has_spectator()) {
                    out.push(c);
                }
            }
        }
    }
    out.sort_by(|x, y| x.histogram.cmp(&y.histogram).then_with(|| (&x.left, &x.right).cmp(&(&y.left, &y.right))));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Timeout,
}

#[derive(Debug, Clone)]
pub struct FilterOptions {
    /// Largest transition-state length accepted; even.
    pub k_max: u32,
    pub budget: Option<Duration>,
    pub connected_only: bool,
    pub elementary_only: bool,
}

impl Default for FilterOptions {
    fn default() -> Self {
        FilterOptions {
            k_max: 8,
            budget: Some(Duration::from_millis(100)),
            connected_only: false,
            elementary_only: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Filtered {
    pub candidate: CandidatePair,
    pub status: Status,
    pub min_cost: Option<u32>,
    pub classes: Option<usize>,
}

/// Reaction instance of a candidate: each side is the disjoint union of its
/// molecules.
pub fn candidate_instance(molecules: &[MoleculeGraph], c: &CandidatePair) -> Option<ReactionInstance> {
    let side = |s: &[usize]| {
        let gs: Vec<&MoleculeGraph> = s.iter().map(|&k| &molecules[k]).collect();
        disjoint_union(&gs).0
    };
    // Equal histograms can still disagree on aromatic vertices.
    ReactionInstance::from_graphs(side(&c.left), side(&c.right)).ok()
}

/// Solves every candidate with cost bound `k_max`, in parallel, keeping the
/// input order.
pub fn filter_by_ts_length(molecules: &[MoleculeGraph], candidates: &[CandidatePair], options: &FilterOptions) -> Vec<Filtered> {
    candidates
        .par_iter()
        .map(|c| filter_one(molecules, c, options))
        .collect()
}

pub fn filter_one(molecules: &[MoleculeGraph], c: &CandidatePair, options: &FilterOptions) -> Filtered {
    let mut out = Filtered {
        candidate: c.clone(),
        status: Status::Fail,
        min_cost: None,
        classes: None,
    };
    let Some(inst) = candidate_instance(molecules, c) else {
        return out;
    };
    let s = solve(
        &inst,
        &SolveOptions {
            max_cost: options.k_max,
            connected_only: options.connected_only,
            elementary_only: options.elementary_only,
            timeout: options.budget,
            parallel: false,
        },
    );
    out.status = match s.outcome {
        Outcome::Solved => Status::Pass,
        Outcome::BoundExhausted => Status::Fail,
        Outcome::Timeout => Status::Timeout,
    };
    if out.status == Status::Pass {
        out.min_cost = s.min_cost;
        out.classes = Some(s.maps.len());
    }
    out
}

/// One line of candidate output.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateRecord {
    pub left_ids: Vec<String>,
    pub right_ids: Vec<String>,
    pub formula: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_cost: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<usize>,
    pub status: Status,
}

impl CandidateRecord {
    pub fn new(f: &Filtered, ids: &[String]) -> Self {
        let names = |s: &[usize]| s.iter().map(|&k| ids[k].clone()).collect();
        CandidateRecord {
            left_ids: names(&f.candidate.left),
            right_ids: names(&f.candidate.right),
            formula: f.candidate.histogram.formula(),
            min_cost: f.min_cost,
            classes: f.classes,
            status: f.status,
        }
    }
}
