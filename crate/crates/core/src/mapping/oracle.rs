use super::equivalence::EquivalenceClasses;
use super::instance::ReactionInstance;
use super::transition::{cost, AtomMap};

pub const DEFAULT_ORACLE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{vertices} vertices exceed the brute-force limit of {limit}")]
pub struct TooLarge {
    pub vertices: usize,
    pub limit: usize,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub min_cost: u32,
    /// One map per equivalence class of optimal maps.
    pub classes: Vec<AtomMap>,
    /// Number of optimal bijections visited.
    pub optimal_maps: usize,
}

struct Enum<'a> {
    inst: &'a ReactionInstance,
    candidates: Vec<Vec<usize>>,
    psi: Vec<usize>,
    used: Vec<bool>,
    best: u32,
    optimal: Vec<Vec<usize>>,
}

impl Enum<'_> {
    /// Change contributed by pairs `{i, j}` with `j <= i` once `i` is placed.
    fn delta(&self, i: usize, p: usize) -> u32 {
        let mut d = self.inst.w2(p, p).abs_diff(self.inst.w1(i, i));
        for j in 0..i {
            d += self.inst.w2(p, self.psi[j]).abs_diff(self.inst.w1(i, j));
        }
        d
    }

    fn run(&mut self, i: usize, acc: u32) {
        if acc > self.best {
            return;
        }
        if i == self.psi.len() {
            debug_assert_eq!(cost(self.inst, &self.psi), Ok(acc));
            if acc < self.best {
                self.best = acc;
                self.optimal.clear();
            }
            self.optimal.push(self.psi.clone());
            return;
        }
        for k in 0..self.candidates[i].len() {
            let p = self.candidates[i][k];
            if self.used[p] {
                continue;
            }
            self.used[p] = true;
            self.psi[i] = p;
            let d = self.delta(i, p);
            self.run(i + 1, acc + d);
            self.used[p] = false;
        }
    }
}

/// Exhaustive search over all label-preserving bijections. Partial sums of
/// the cost only grow, so branches already above the best cost are cut;
/// every optimal bijection is still visited.
pub fn brute_force_min_cost(
    inst: &ReactionInstance,
    limit: Option<usize>,
) -> Result<OracleResult, TooLarge> {
    let limit = limit.unwrap_or(DEFAULT_ORACLE_LIMIT);
    let n = inst.len();
    if n > limit {
        return Err(TooLarge { vertices: n, limit });
    }
    let candidates = (0..n)
        .map(|i| (0..n).filter(|&p| inst.g1().label(i) == inst.g2().label(p)).collect())
        .collect();
    let mut e = Enum {
        inst,
        candidates,
        psi: vec![0; n],
        used: vec![false; n],
        best: u32::MAX,
        optimal: Vec::new(),
    };
    e.run(0, 0);
    let mut classes = EquivalenceClasses::new();
    let optimal_maps = e.optimal.len();
    for psi in e.optimal {
        classes.insert(inst, AtomMap::new(inst, psi).expect("label-preserving"));
    }
    Ok(OracleResult {
        min_cost: e.best,
        classes: classes.into_maps(),
        optimal_maps,
    })
}
