use std::collections::BTreeMap;

use crate::iso::{self, mix, ColoredGraph};
use crate::molgraph::VertexLabel;

use super::instance::ReactionInstance;
use super::transition::{key, AtomMap, TransitionState};

/// Overlay of `G1` and `psi^-1(G2)`: every pair that is an edge on either side,
/// labeled with both weights (`None` stands for "no edge on this side").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceGraph {
    labels: Vec<VertexLabel>,
    edges: BTreeMap<(usize, usize), (Option<i32>, Option<i32>)>,
}

fn nonzero(w: i32) -> Option<i32> {
    (w != 0).then_some(w)
}

pub fn equivalence_graph(inst: &ReactionInstance, psi: &AtomMap) -> EquivalenceGraph {
    let psi = psi.as_slice();
    let n = inst.len();
    let mut inv = vec![0; n];
    for (i, &p) in psi.iter().enumerate() {
        inv[p] = i;
    }
    let mut edges = BTreeMap::new();
    let support = inst
        .g1()
        .edges()
        .map(|(e, _)| e)
        .chain(inst.g2().edges().map(|((p, q), _)| key(inv[p], inv[q])));
    for (u, v) in support {
        edges.insert(
            (u, v),
            (nonzero(inst.w1(u, v)), nonzero(inst.w2(psi[u], psi[v]))),
        );
    }
    EquivalenceGraph {
        labels: inst.g1().labels().to_vec(),
        edges,
    }
}

impl EquivalenceGraph {
    /// Vertex label pair; both components agree for label-preserving maps.
    pub fn vertex_label(&self, v: usize) -> (VertexLabel, VertexLabel) {
        (self.labels[v], self.labels[v])
    }

    pub fn pair_label(&self, u: usize, v: usize) -> (Option<i32>, Option<i32>) {
        self.edges.get(&key(u, v)).copied().unwrap_or((None, None))
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), (Option<i32>, Option<i32>)> {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    fn colored(&self) -> ColoredGraph {
        let mut g = ColoredGraph::new(self.labels.iter().map(|l| l.code()).collect());
        let half = |w: Option<i32>| match w {
            None => 0u64,
            Some(w) => mix(w as i64 as u64) & 0xFFFF_FFFF | 1,
        };
        for (&(u, v), &(a, b)) in &self.edges {
            g.set_edge(u, v, (half(a) << 32) | half(b));
        }
        g
    }
}

pub fn equivalent(inst: &ReactionInstance, psi: &AtomMap, phi: &AtomMap) -> bool {
    if psi.cost() != phi.cost() {
        return false;
    }
    let a = equivalence_graph(inst, psi).colored();
    let b = equivalence_graph(inst, phi).colored();
    iso::find_isomorphism(&a, &b).is_some()
}

struct Representative {
    invariant: u64,
    graph: ColoredGraph,
}

/// Representatives of pairwise non-equivalent maps, in insertion order.
///
/// Two maps with the same transition state have identical equivalence graphs,
/// so exact transition-state repeats are dropped before any isomorphism test.
#[derive(Default)]
pub struct EquivalenceClasses {
    maps: Vec<AtomMap>,
    reps: Vec<Representative>,
    seen: std::collections::HashSet<Vec<((usize, usize), i32)>>,
}

impl EquivalenceClasses {
    pub fn new() -> Self {
        Self::default()
    }

    /// Keeps `map` if it is not equivalent to a stored representative.
    pub fn insert(&mut self, inst: &ReactionInstance, map: AtomMap) -> bool {
        let ts: TransitionState = map.transition_state(inst);
        let ts_key: Vec<_> = ts.edges().iter().map(|(&e, &w)| (e, w)).collect();
        if !self.seen.insert(ts_key) {
            return false;
        }
        let graph = equivalence_graph(inst, &map).colored();
        let invariant = iso::invariant(&graph);
        for (rep, m) in self.reps.iter().zip(&self.maps) {
            if rep.invariant == invariant
                && m.cost() == map.cost()
                && iso::find_isomorphism(&rep.graph, &graph).is_some()
            {
                return false;
            }
        }
        self.reps.push(Representative { invariant, graph });
        self.maps.push(map);
        true
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[AtomMap] {
        &self.maps
    }

    pub fn into_maps(self) -> Vec<AtomMap> {
        self.maps
    }

    /// Index of the stored class equivalent to `map`, if any.
    pub fn find(&self, inst: &ReactionInstance, map: &AtomMap) -> Option<usize> {
        let graph = equivalence_graph(inst, map).colored();
        let invariant = iso::invariant(&graph);
        (0..self.maps.len()).find(|&k| {
            self.reps[k].invariant == invariant
                && self.maps[k].cost() == map.cost()
                && iso::find_isomorphism(&self.reps[k].graph, &graph).is_some()
        })
    }
}

/// True if both lists describe the same set of classes.
pub fn same_classes(inst: &ReactionInstance, a: &[AtomMap], b: &[AtomMap]) -> bool {
    let mut ca = EquivalenceClasses::new();
    for m in a {
        ca.insert(inst, m.clone());
    }
    let mut cb = EquivalenceClasses::new();
    for m in b {
        cb.insert(inst, m.clone());
    }
    ca.len() == cb.len() && cb.maps().iter().all(|m| ca.find(inst, m).is_some())
}
