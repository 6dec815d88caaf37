//! Random molecules and balanced reactions for tests and benchmarks.
//!
//! Molecules are built by bonding random atoms and turning leftover valence
//! electrons into lone pairs, radicals or charges, so every atom has the
//! weighted degree of its element. Reactions apply a random closed
//! alternating walk of unit changes to the educt side, which keeps every
//! weighted degree and hence yields a balanced instance.

use std::collections::HashMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::element::Element;
use crate::molgraph::{are_isomorphic, disjoint_union, fingerprint, EdgeKind, GraphBuilder, MoleculeGraph, VertexLabel};

#[derive(Debug, Clone)]
pub struct SynthOptions {
    pub min_atoms: usize,
    pub max_atoms: usize,
    /// Elements with relative frequencies.
    pub elements: Vec<(Element, u32)>,
    /// Allow formal charges on atoms with an odd electron left over.
    pub charges: bool,
    /// Upper bound on the length of the reaction walk; even.
    pub max_walk: usize,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            min_atoms: 3,
            max_atoms: 10,
            elements: vec![(Element::C, 3), (Element::H, 4), (Element::O, 2), (Element::N, 1)],
            charges: true,
            max_walk: 8,
        }
    }
}

fn bond_capacity(e: Element) -> i32 {
    match e.valence_electrons() {
        Some(v) if v >= 4 => 8 - v,
        Some(v) => v,
        None => 0,
    }
}

fn max_order(a: VertexLabel, b: VertexLabel) -> i32 {
    if a == VertexLabel::Atom(Element::H) || b == VertexLabel::Atom(Element::H) {
        1
    } else {
        3
    }
}

/// A graph of `atoms` atoms (not necessarily connected) whose weighted
/// degrees all equal the valence-electron counts of their elements.
pub fn random_molecule<R: Rng>(rng: &mut R, atoms: usize, options: &SynthOptions) -> MoleculeGraph {
    let dist = WeightedIndex::new(options.elements.iter().map(|e| e.1)).expect("nonempty element weights");
    let elems: Vec<Element> = (0..atoms).map(|_| options.elements[dist.sample(rng)].0).collect();
    let labels: Vec<VertexLabel> = elems.iter().map(|&e| VertexLabel::Atom(e)).collect();
    let mut cap: Vec<i32> = elems.iter().map(|&e| bond_capacity(e)).collect();
    let mut bonds: HashMap<(usize, usize), i32> = HashMap::new();
    let bond = |u: usize, v: usize, cap: &mut Vec<i32>, bonds: &mut HashMap<(usize, usize), i32>| {
        let k = (u.min(v), u.max(v));
        let w = bonds.get(&k).copied().unwrap_or(0);
        if u != v && cap[u] > 0 && cap[v] > 0 && w < max_order(labels[u], labels[v]) {
            bonds.insert(k, w + 1);
            cap[u] -= 1;
            cap[v] -= 1;
        }
    };
    let mut order: Vec<usize> = (0..atoms).collect();
    order.shuffle(rng);
    for t in 1..atoms {
        let u = order[t];
        let v = order[rng.gen_range(0..t)];
        bond(u, v, &mut cap, &mut bonds);
    }
    for _ in 0..atoms * 2 {
        if atoms < 2 || !rng.gen_bool(0.6) {
            break;
        }
        let u = rng.gen_range(0..atoms);
        let v = rng.gen_range(0..atoms);
        bond(u, v, &mut cap, &mut bonds);
    }

    let mut b = GraphBuilder::new();
    for &l in &labels {
        b.add_vertex(l);
    }
    let mut charge = None;
    let mut radical = None;
    let mut keys: Vec<_> = bonds.iter().map(|(&k, &w)| (k, w)).collect();
    keys.sort_unstable();
    for ((u, v), w) in keys {
        b.add_edge(u, v, EdgeKind::Plain, w).expect("valid bond");
    }
    for v in 0..atoms {
        let ve = elems[v].valence_electrons().unwrap_or(0);
        let left = ve - (bond_capacity(elems[v]) - cap[v]);
        let (loops, q, r) = if left % 2 == 0 {
            (left / 2, 0, 0)
        } else if options.charges && rng.gen_bool(0.3) {
            if rng.gen_bool(0.5) {
                ((left - 1) / 2, 1, 0)
            } else {
                ((left + 1) / 2, -1, 0)
            }
        } else {
            ((left - 1) / 2, 0, 1)
        };
        if loops > 0 {
            b.add_edge(v, v, EdgeKind::Plain, loops).expect("valid loop");
        }
        if q != 0 {
            let c = *charge.get_or_insert_with(|| b.add_vertex(VertexLabel::Charge));
            b.add_edge(v, c, EdgeKind::Plain, q).expect("valid charge edge");
        }
        if r != 0 {
            let x = *radical.get_or_insert_with(|| b.add_vertex(VertexLabel::Radical));
            b.add_edge(v, x, EdgeKind::Plain, r).expect("valid radical edge");
        }
    }
    b.build().expect("generated molecule is valid")
}

fn allowed(labels: &[VertexLabel], u: usize, v: usize, w: i32) -> bool {
    use VertexLabel::*;
    let (a, b) = (labels[u], labels[v]);
    if u == v {
        return if a.is_special() { w == 0 } else { (0..=3).contains(&w) };
    }
    match (a, b) {
        (Atom(_), Atom(_)) => (0..=max_order(a, b)).contains(&w),
        (x, y) if x.is_special() && y.is_special() => w == 0,
        (Charge, _) | (_, Charge) => (-2..=2).contains(&w),
        _ => (0..=2).contains(&w),
    }
}

/// Applies a random closed alternating walk of `len` unit steps to `g`,
/// returning the changed weights, or `None` if no walk was found.
fn random_walk<R: Rng>(rng: &mut R, labels: &[VertexLabel], w: &[i32], len: usize) -> Option<Vec<i32>> {
    let n = labels.len();
    for _ in 0..200 {
        let mut cur = w.to_vec();
        let start = rng.gen_range(0..n);
        let mut h = start;
        let mut sigma = 1;
        let mut ok = true;
        let mut signs: HashMap<(usize, usize), i32> = HashMap::new();
        for step in 0..len {
            let choices: Vec<usize> = if step + 1 == len {
                vec![start]
            } else {
                (0..n).collect()
            };
            let valid: Vec<usize> = choices
                .into_iter()
                .filter(|&u| allowed(labels, h, u, cur[h * n + u] + sigma))
                .filter(|&u| signs.get(&(h.min(u), h.max(u))).is_none_or(|&s| s == sigma))
                .collect();
            let Some(&u) = valid.choose(rng) else {
                ok = false;
                break;
            };
            signs.insert((h.min(u), h.max(u)), sigma);
            cur[h * n + u] += sigma;
            if u != h {
                cur[u * n + h] += sigma;
            }
            h = u;
            sigma = -sigma;
        }
        if ok && cur != w {
            return Some(cur);
        }
    }
    None
}

fn from_dense(labels: &[VertexLabel], w: &[i32], perm: &[usize]) -> MoleculeGraph {
    let n = labels.len();
    let mut inv = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    let mut b = GraphBuilder::new();
    for &v in &inv {
        b.add_vertex(labels[v]);
    }
    for u in 0..n {
        for v in u..n {
            let x = w[u * n + v];
            if x != 0 {
                b.add_edge(perm[u], perm[v], EdgeKind::Plain, x).expect("walk keeps weights valid");
            }
        }
    }
    b.build().expect("walk keeps weights valid")
}

/// Educt and product graphs of a random balanced reaction. Both sides carry
/// a Charge and a Radical vertex; product vertices are shuffled.
pub fn random_reaction<R: Rng>(rng: &mut R, options: &SynthOptions) -> (MoleculeGraph, MoleculeGraph) {
    let atoms = rng.gen_range(options.min_atoms..=options.max_atoms);
    let g = random_molecule(rng, atoms, options);
    let mut b = g.to_builder();
    if g.charge_vertex().is_none() {
        b.add_vertex(VertexLabel::Charge);
    }
    if g.radical_vertex().is_none() {
        b.add_vertex(VertexLabel::Radical);
    }
    let g1 = b.build().expect("padding keeps the graph valid");
    let n = g1.vertex_count();
    let labels = g1.labels().to_vec();
    let mut w = vec![0; n * n];
    for ((u, v), e) in g1.edges() {
        w[u * n + v] = e.weight;
        w[v * n + u] = e.weight;
    }
    let mut len = 2 * rng.gen_range(2..=options.max_walk.max(4) / 2);
    let changed = loop {
        if len == 0 {
            break w.clone();
        }
        if let Some(c) = random_walk(rng, &labels, &w, len) {
            break c;
        }
        len -= 2;
    };
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    (g1, from_dense(&labels, &changed, &perm))
}

/// Up to `size` pairwise non-isomorphic molecules. Besides random molecules
/// the pool holds the products of random reactions between pool members, so
/// balanced pairs occur much more often than by chance.
pub fn random_pool<R: Rng>(rng: &mut R, size: usize, options: &SynthOptions) -> Vec<MoleculeGraph> {
    let mut pool: Vec<MoleculeGraph> = Vec::new();
    let mut prints: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut add = |g: MoleculeGraph, pool: &mut Vec<MoleculeGraph>| {
        if pool.len() >= size || g.labels().iter().all(|l| l.is_special()) {
            return;
        }
        let f = fingerprint(&g);
        let bucket = prints.entry(f).or_default();
        if bucket.iter().any(|&i| are_isomorphic(&pool[i], &g).is_some()) {
            return;
        }
        bucket.push(pool.len());
        pool.push(g);
    };
    let mut stalls = 0;
    while pool.len() < size && stalls < 50 * size.max(1) {
        let before = pool.len();
        if pool.len() < 2 || rng.gen_bool(0.5) {
            let atoms = rng.gen_range(options.min_atoms..=options.max_atoms);
            for c in random_molecule(rng, atoms, options).components() {
                add(c, &mut pool);
            }
        } else {
            let a = rng.gen_range(0..pool.len());
            let b = rng.gen_range(0..pool.len());
            let (u, _) = disjoint_union(&[&pool[a], &pool[b]]);
            let n = u.vertex_count();
            let labels = u.labels().to_vec();
            let mut w = vec![0; n * n];
            for ((x, y), e) in u.edges() {
                w[x * n + y] = e.weight;
                w[y * n + x] = e.weight;
            }
            let len = 2 * rng.gen_range(2..=options.max_walk.max(4) / 2);
            if let Some(c) = random_walk(rng, &labels, &w, len) {
                let ident: Vec<usize> = (0..n).collect();
                for m in from_dense(&labels, &c, &ident).components() {
                    add(m, &mut pool);
                }
            }
        }
        stalls = if pool.len() == before { stalls + 1 } else { 0 };
    }
    pool
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::mapping::ReactionInstance;

    #[test]
    fn molecules_respect_valence() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let g = random_molecule(&mut rng, 8, &SynthOptions::default());
            for v in 0..g.vertex_count() {
                if let VertexLabel::Atom(e) = g.label(v) {
                    assert_eq!(g.weighted_degree(v).unwrap(), e.valence_electrons().unwrap());
                }
            }
        }
    }

    #[test]
    fn reactions_are_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let (g1, g2) = random_reaction(&mut rng, &SynthOptions::default());
            assert_eq!(g1.vertex_count(), g2.vertex_count());
            let inst = ReactionInstance::from_graphs(g1, g2).unwrap();
            for v in 0..inst.len() {
                if !inst.g2().label(v).is_special() {
                    assert_eq!(inst.g2().weighted_degree(v).unwrap(), inst.g2().label(v).element().unwrap().valence_electrons().unwrap());
                }
            }
        }
    }

    #[test]
    fn pools_are_non_isomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let options = SynthOptions {
            min_atoms: 2,
            max_atoms: 5,
            ..SynthOptions::default()
        };
        let pool = random_pool(&mut rng, 30, &options);
        assert_eq!(pool.len(), 30);
        for i in 0..pool.len() {
            for j in 0..i {
                assert!(are_isomorphic(&pool[i], &pool[j]).is_none());
            }
        }
    }
}
