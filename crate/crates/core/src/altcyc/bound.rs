use pathfinding::prelude::{kuhn_munkres_min, Matrix};

use crate::mapping::ReactionInstance;

use super::search::matching_cost;

/// Twice the cost lower bound contributed by sending `v` to `p`: per neighbor
/// label, the cheapest pairing of incident weights, plus twice the loop change.
fn local_cost(inst: &ReactionInstance, codes: &[u64], v: usize, p: usize) -> u32 {
    let (g1, g2) = (inst.g1(), inst.g2());
    let label = |c: u64| codes.binary_search(&c).unwrap_or(usize::MAX);
    let mut ws: Vec<(usize, i32, bool)> = Vec::new();
    for &u in g1.neighbors(v).iter().filter(|&&u| u != v) {
        ws.push((label(g1.label(u).code()), g1.weight(v, u), false));
    }
    for &q in g2.neighbors(p).iter().filter(|&&q| q != p) {
        ws.push((label(g2.label(q).code()), g2.weight(p, q), true));
    }
    matching_cost(&mut ws) + 2 * g1.loop_weight(v).abs_diff(g2.loop_weight(p))
}

/// Lower bound on the cost of any map: every changed pair is charged at both
/// ends, so half the cheapest label-preserving assignment of local costs is
/// a bound. Rounded up to even, since every map cost is even.
pub fn cost_lower_bound(inst: &ReactionInstance) -> u32 {
    let (g1, g2) = (inst.g1(), inst.g2());
    let mut codes: Vec<u64> = g1.labels().iter().map(|l| l.code()).collect();
    codes.sort_unstable();
    codes.dedup();
    let mut twice = 0i64;
    for &code in &codes {
        let left: Vec<usize> = (0..inst.len()).filter(|&v| g1.label(v).code() == code).collect();
        let right: Vec<usize> = (0..inst.len()).filter(|&p| g2.label(p).code() == code).collect();
        if left.is_empty() || left.len() != right.len() {
            continue;
        }
        let m = Matrix::from_rows(
            left.iter()
                .map(|&v| right.iter().map(|&p| local_cost(inst, &codes, v, p) as i64).collect::<Vec<_>>()),
        )
        .expect("rectangular");
        twice += kuhn_munkres_min(&m).0;
    }
    let half = (twice as u32).div_ceil(2);
    half + half % 2
}
