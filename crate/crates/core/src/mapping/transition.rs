use std::collections::BTreeMap;

use serde::Serialize;

use super::instance::ReactionInstance;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("map has {got} entries, instance has {expected} vertices")]
    Length { got: usize, expected: usize },
    #[error("vertex {0} of the product side is hit twice")]
    NotBijective(usize),
    #[error("vertex {i} ({l1}) is mapped to {p} ({l2})")]
    LabelMismatch {
        i: usize,
        p: usize,
        l1: String,
        l2: String,
    },
}

pub(crate) fn key(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

fn check(inst: &ReactionInstance, psi: &[usize]) -> Result<(), MapError> {
    let n = inst.len();
    if psi.len() != n {
        return Err(MapError::Length {
            got: psi.len(),
            expected: n,
        });
    }
    let mut hit = vec![false; n];
    for (i, &p) in psi.iter().enumerate() {
        if p >= n || std::mem::replace(&mut hit[p], true) {
            return Err(MapError::NotBijective(p));
        }
        let (l1, l2) = (inst.g1().label(i), inst.g2().label(p));
        if l1 != l2 {
            return Err(MapError::LabelMismatch {
                i,
                p,
                l1: l1.to_string(),
                l2: l2.to_string(),
            });
        }
    }
    Ok(())
}

/// Signed weight change of every pair touched by the edges of either graph.
/// Only pairs where at least one side is nonzero can change.
fn changes(inst: &ReactionInstance, psi: &[usize]) -> BTreeMap<(usize, usize), i32> {
    let n = inst.len();
    let mut inv = vec![0; n];
    for (i, &p) in psi.iter().enumerate() {
        inv[p] = i;
    }
    let mut out = BTreeMap::new();
    let support = inst
        .g1()
        .edges()
        .map(|((u, v), _)| (u, v))
        .chain(inst.g2().edges().map(|((p, q), _)| key(inv[p], inv[q])));
    for (u, v) in support {
        let d = inst.w2(psi[u], psi[v]) - inst.w1(u, v);
        if d != 0 {
            out.insert((u, v), d);
        }
    }
    out
}

/// `sum over all vertex pairs e of |w2(psi(e)) - w1(e)|`.
pub fn cost(inst: &ReactionInstance, psi: &[usize]) -> Result<u32, MapError> {
    check(inst, psi)?;
    Ok(changes(inst, psi).values().map(|d| d.unsigned_abs()).sum())
}

/// A label-preserving bijection from educt to product vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AtomMap {
    psi: Vec<usize>,
    cost: u32,
}

impl AtomMap {
    pub fn new(inst: &ReactionInstance, psi: Vec<usize>) -> Result<Self, MapError> {
        let cost = cost(inst, &psi)?;
        Ok(AtomMap { psi, cost })
    }

    pub fn cost(&self) -> u32 {
        self.cost
    }

    pub fn image(&self, i: usize) -> usize {
        self.psi[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.psi
    }

    pub fn transition_state(&self, inst: &ReactionInstance) -> TransitionState {
        TransitionState {
            edges: changes(inst, &self.psi),
        }
    }
}

/// Pairs of educt vertices whose weight changes, with the signed change.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TransitionState {
    edges: BTreeMap<(usize, usize), i32>,
}

pub fn transition_state(inst: &ReactionInstance, psi: &[usize]) -> Result<TransitionState, MapError> {
    check(inst, psi)?;
    Ok(TransitionState {
        edges: changes(inst, psi),
    })
}

impl TransitionState {
    pub fn from_edges(edges: impl IntoIterator<Item = ((usize, usize), i32)>) -> Self {
        let mut map = BTreeMap::new();
        for ((u, v), w) in edges {
            *map.entry(key(u, v)).or_insert(0) += w;
        }
        map.retain(|_, w| *w != 0);
        TransitionState { edges: map }
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), i32> {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn weight(&self, u: usize, v: usize) -> i32 {
        self.edges.get(&key(u, v)).copied().unwrap_or(0)
    }

    /// Endpoints of changed pairs, ascending.
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.edges.keys().flat_map(|&(u, v)| [u, v]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Sum of |change|, i.e. the cost of the generating map.
    pub fn total(&self) -> u32 {
        self.edges.values().map(|w| w.unsigned_abs()).sum()
    }

    /// Signed change around `v`, loops counted twice.
    pub fn flux(&self, v: usize) -> i32 {
        self.edges
            .iter()
            .filter(|(&(a, b), _)| a == v || b == v)
            .map(|(&(a, b), &w)| if a == b { 2 * w } else { w })
            .sum()
    }

    /// Sum of |change| around `v`, loops counted twice.
    pub fn abs_degree(&self, v: usize) -> u32 {
        self.edges
            .iter()
            .filter(|(&(a, b), _)| a == v || b == v)
            .map(|(&(a, b), &w)| if a == b { 2 * w.unsigned_abs() } else { w.unsigned_abs() })
            .sum()
    }

    /// First vertex violating the zero-flux condition, with its flux.
    pub fn flux_violation(&self) -> Option<(usize, i32)> {
        self.vertices()
            .into_iter()
            .map(|v| (v, self.flux(v)))
            .find(|&(_, f)| f != 0)
    }

    pub fn is_connected(&self) -> bool {
        let vs = self.vertices();
        let Some(&start) = vs.first() else {
            return true;
        };
        let mut seen = vec![start];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &(a, b) in self.edges.keys() {
                let y = if a == x {
                    b
                } else if b == x {
                    a
                } else {
                    continue;
                };
                if !seen.contains(&y) {
                    seen.push(y);
                    stack.push(y);
                }
            }
        }
        seen.len() == vs.len()
    }
}

/// A closed alternating walk `walk[0] -> walk[1] -> ... -> walk[0]`; step `t`
/// has weight `+1` for even `t` and `-1` for odd `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    walk: Vec<usize>,
}

impl Cycle {
    pub fn walk(&self) -> &[usize] {
        &self.walk
    }

    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    /// `((u, v), sign)` for every step, closing step included.
    pub fn steps(&self) -> impl Iterator<Item = ((usize, usize), i32)> + '_ {
        let l = self.walk.len();
        (0..l).map(move |t| {
            let sign = if t % 2 == 0 { 1 } else { -1 };
            ((self.walk[t], self.walk[(t + 1) % l]), sign)
        })
    }

    /// No vertex repeats.
    pub fn is_elementary(&self) -> bool {
        let mut v = self.walk.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }

    /// Rotation starting at the smallest vertex that opens a `+1` step.
    fn normalized(walk: Vec<usize>) -> Cycle {
        let start = (0..walk.len())
            .step_by(2)
            .min_by_key(|&t| walk[t])
            .unwrap_or(0);
        let mut w = walk;
        w.rotate_left(start);
        Cycle { walk: w }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CycleDecomposition {
    pub cycles: Vec<Cycle>,
}

impl CycleDecomposition {
    /// Per-pair sum of the cycle weights.
    pub fn reconstruct(&self) -> TransitionState {
        TransitionState::from_edges(self.cycles.iter().flat_map(|c| c.steps().collect::<Vec<_>>()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("zero-flux condition violated at vertex {vertex} (flux {flux})")]
pub struct FluxError {
    pub vertex: usize,
    pub flux: i32,
}

/// Splits a transition state into closed alternating walks, then splits each
/// walk at repeated vertices (even gaps only, so alternation survives) until
/// no further split is possible.
pub fn decompose_cycles(ts: &TransitionState) -> Result<CycleDecomposition, FluxError> {
    if let Some((vertex, flux)) = ts.flux_violation() {
        return Err(FluxError { vertex, flux });
    }
    let mut residual = ts.edges.clone();
    let mut walks = Vec::new();
    loop {
        let Some(start) = residual
            .iter()
            .filter(|(_, &w)| w > 0)
            .map(|(&(a, _), _)| a)
            .min()
        else {
            break;
        };
        let mut walk = vec![start];
        let mut at = start;
        let mut sign = 1;
        loop {
            // Lowest-index neighbor with residual of the wanted sign.
            let next = residual
                .iter()
                .filter(|(&(a, b), &w)| (a == at || b == at) && w.signum() == sign)
                .map(|(&(a, b), _)| if a == at { b } else { a })
                .min()
                .expect("zero flux guarantees a continuation");
            let k = key(at, next);
            let w = residual.get_mut(&k).unwrap();
            *w -= sign;
            if *w == 0 {
                residual.remove(&k);
            }
            at = next;
            if at == start && sign == -1 {
                break;
            }
            walk.push(at);
            sign = -sign;
        }
        walks.push(walk);
    }
    let mut cycles = Vec::new();
    for w in walks {
        split(w, &mut cycles);
    }
    Ok(CycleDecomposition { cycles })
}

fn split(walk: Vec<usize>, out: &mut Vec<Cycle>) {
    let l = walk.len();
    for i in 0..l {
        for j in (i + 2..l).step_by(2) {
            if walk[i] == walk[j] {
                let inner: Vec<usize> = walk[i..j].to_vec();
                let mut outer: Vec<usize> = walk[..i].to_vec();
                outer.extend_from_slice(&walk[j..]);
                // Keep the +1 step first in each piece.
                let inner = if i % 2 == 1 { rotate_one(inner) } else { inner };
                split(outer, out);
                split(inner, out);
                return;
            }
        }
    }
    out.push(Cycle::normalized(walk));
}

fn rotate_one(mut w: Vec<usize>) -> Vec<usize> {
    w.rotate_left(1);
    w
}
