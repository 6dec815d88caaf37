use crate::iso::{self, combine, ColoredGraph};
use crate::molgraph::MoleculeGraph;

use super::instance::ReactionInstance;
use super::transition::{AtomMap, TransitionState};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompletionError {
    #[error("partial map is not an injective label-preserving map")]
    BadPartial,
    #[error("pair ({u}, {v}): path weight {path}, but the map changes it by {required}")]
    WeightMismatch {
        u: usize,
        v: usize,
        path: i32,
        required: i32,
    },
    #[error("path weight on ({u}, {v}) leaves the mapped vertex set")]
    OutsidePartial { u: usize, v: usize },
    #[error("the unchanged remainders of both graphs are not isomorphic")]
    NotIsomorphic,
}

const PIN: u64 = 0x5EED_0000_0000_0000;

fn remainder(g: &MoleculeGraph, inside: &[bool], pins: &[Option<usize>]) -> ColoredGraph {
    let colors = (0..g.vertex_count())
        .map(|v| match pins[v] {
            Some(k) => combine(PIN, k as u64),
            None => g.label(v).code(),
        })
        .collect();
    let mut c = ColoredGraph::new(colors);
    for ((u, v), e) in g.edges() {
        if !(inside[u] && inside[v]) {
            c.set_edge(u, v, e.weight as i64 as u64);
        }
    }
    c
}

/// Extends a partial map to a full map whose transition state equals the
/// given path weights. `partial[i]` is the image of educt vertex `i`, if
/// mapped. Pairs inside the mapped set must change exactly by their path
/// weight; everything else must be preserved, which is decided by an
/// isomorphism of the remainders with mapped vertices pinned to each other.
pub fn complete_partial(
    inst: &ReactionInstance,
    partial: &[Option<usize>],
    path_weights: &TransitionState,
) -> Result<AtomMap, CompletionError> {
    let n = inst.len();
    if partial.len() != n {
        return Err(CompletionError::BadPartial);
    }
    let mut inside1 = vec![false; n];
    let mut inside2 = vec![false; n];
    let mut pins1 = vec![None; n];
    let mut pins2 = vec![None; n];
    let mapped: Vec<usize> = (0..n).filter(|&i| partial[i].is_some()).collect();
    for &i in &mapped {
        let p = partial[i].unwrap();
        if p >= n || inside2[p] || inst.g1().label(i) != inst.g2().label(p) {
            return Err(CompletionError::BadPartial);
        }
        inside1[i] = true;
        inside2[p] = true;
        pins1[i] = Some(i);
        pins2[p] = Some(i);
    }
    for (&(u, v), _) in path_weights.edges() {
        if !(inside1[u] && inside1[v]) {
            return Err(CompletionError::OutsidePartial { u, v });
        }
    }
    for (a, &u) in mapped.iter().enumerate() {
        for &v in &mapped[a..] {
            let required = inst.w2(partial[u].unwrap(), partial[v].unwrap()) - inst.w1(u, v);
            let path = path_weights.weight(u, v);
            if path != required {
                return Err(CompletionError::WeightMismatch {
                    u,
                    v,
                    path,
                    required,
                });
            }
        }
    }
    let a = remainder(inst.g1(), &inside1, &pins1);
    let b = remainder(inst.g2(), &inside2, &pins2);
    let f = iso::find_isomorphism(&a, &b).ok_or(CompletionError::NotIsomorphic)?;
    Ok(AtomMap::new(inst, f).expect("pinned isomorphism preserves labels"))
}
