//! Molecule graphs: labeled, edge-weighted, undirected graphs with loops.
//!
//! Atoms are vertices labeled by element. Bonds are edges whose weight is the
//! number of shared electron pairs. Lone pairs are loops on the owning atom.
//! Charges, free radicals and aromatic complexes are modeled with special
//! vertices: one Charge vertex per graph whose edge weights are the atom
//! charges, one Radical vertex whose edge weights count unpaired electrons,
//! and one Aromatic vertex per aromatic complex whose edge weights count the
//! electrons each atom contributes to it.
//!
//! With these conventions the weighted degree of an atom (loops counted
//! twice, charge edges included) equals its valence-electron count, which is
//! what makes every transition state decompose into alternating cycles.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::iso::{self, ColoredGraph};

/// Vertex label; the three special labels never coincide with an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VertexLabel {
    Atom(Element),
    Charge,
    Radical,
    Aromatic,
}

impl VertexLabel {
    pub fn is_special(self) -> bool {
        !matches!(self, VertexLabel::Atom(_))
    }

    pub fn element(self) -> Option<Element> {
        match self {
            VertexLabel::Atom(e) => Some(e),
            _ => None,
        }
    }

    /// Dense integer code, stable across runs.
    pub fn code(self) -> u64 {
        match self {
            VertexLabel::Atom(e) => e.atomic_number() as u64,
            VertexLabel::Charge => 1001,
            VertexLabel::Radical => 1002,
            VertexLabel::Aromatic => 1003,
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Atom(e) => write!(f, "{e}"),
            VertexLabel::Charge => f.write_str("<charge>"),
            VertexLabel::Radical => f.write_str("<radical>"),
            VertexLabel::Aromatic => f.write_str("<aromatic>"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Single, double and triple bonds, lone-pair loops and special edges.
    Plain,
    /// A ring bond of an aromatic complex; always weight 1.
    Aromatic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub kind: EdgeKind,
    pub weight: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (graph has {len} vertices)")]
    VertexOutOfRange { vertex: usize, len: usize },
    #[error("edge {{{u},{v}}} has weight {weight}, not allowed for {what}")]
    BadWeight {
        u: usize,
        v: usize,
        weight: i32,
        what: &'static str,
    },
    #[error("edge {{{u},{v}}} joins two special vertices")]
    SpecialPair { u: usize, v: usize },
    #[error("special vertex {0} cannot carry a loop")]
    SpecialLoop(usize),
    #[error("more than one {0} vertex")]
    DuplicateSpecial(&'static str),
    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(usize, usize),
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Immutable molecule graph. Vertex indices are dense and 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoleculeGraph {
    labels: Vec<VertexLabel>,
    edges: BTreeMap<(usize, usize), Edge>,
    adjacency: Vec<Vec<usize>>,
    charge: Option<usize>,
    radical: Option<usize>,
    aromatic: Vec<usize>,
}

/// Incremental constructor; [`GraphBuilder::build`] checks every invariant.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    labels: Vec<VertexLabel>,
    edges: BTreeMap<(usize, usize), Edge>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: VertexLabel) -> usize {
        self.labels.push(label);
        self.labels.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> VertexLabel {
        self.labels[v]
    }

    pub fn add_edge(&mut self, u: usize, v: usize, kind: EdgeKind, weight: i32) -> Result<(), GraphError> {
        let len = self.labels.len();
        for x in [u, v] {
            if x >= len {
                return Err(GraphError::VertexOutOfRange { vertex: x, len });
            }
        }
        let k = key(u, v);
        if self.edges.contains_key(&k) {
            return Err(GraphError::DuplicateEdge(k.0, k.1));
        }
        self.edges.insert(k, Edge { kind, weight });
        Ok(())
    }

    /// Adds `delta` to the weight of `{u, v}`, creating or deleting the edge
    /// as needed. Used when assembling molecules from piecewise information.
    pub fn bump_edge(&mut self, u: usize, v: usize, kind: EdgeKind, delta: i32) {
        let k = key(u, v);
        let w = self.edges.get(&k).map_or(0, |e| e.weight) + delta;
        if w == 0 {
            self.edges.remove(&k);
        } else {
            self.edges.insert(k, Edge { kind, weight: w });
        }
    }

    pub fn edge(&self, u: usize, v: usize) -> Option<Edge> {
        self.edges.get(&key(u, v)).copied()
    }

    pub fn build(self) -> Result<MoleculeGraph, GraphError> {
        let n = self.labels.len();
        let mut charge = None;
        let mut radical = None;
        let mut aromatic = Vec::new();
        for (v, l) in self.labels.iter().enumerate() {
            match l {
                VertexLabel::Charge if charge.replace(v).is_some() => {
                    return Err(GraphError::DuplicateSpecial("charge"))
                }
                VertexLabel::Radical if radical.replace(v).is_some() => {
                    return Err(GraphError::DuplicateSpecial("radical"))
                }
                VertexLabel::Aromatic => aromatic.push(v),
                _ => {}
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for (&(u, v), e) in &self.edges {
            validate_edge(&self.labels, u, v, *e)?;
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for a in adjacency.iter_mut() {
            a.sort_unstable();
        }
        Ok(MoleculeGraph {
            labels: self.labels,
            edges: self.edges,
            adjacency,
            charge,
            radical,
            aromatic,
        })
    }
}

fn validate_edge(labels: &[VertexLabel], u: usize, v: usize, e: Edge) -> Result<(), GraphError> {
    use VertexLabel::*;
    let bad = |what| GraphError::BadWeight {
        u,
        v,
        weight: e.weight,
        what,
    };
    let (lu, lv) = (labels[u], labels[v]);
    if u == v {
        return match lu {
            Atom(_) if e.weight >= 1 => Ok(()),
            Atom(_) => Err(bad("a lone-pair loop")),
            // Padding vertices that stand in for an aromatic complex on the
            // Kekule side of a reaction hold their electrons as a loop.
            Aromatic if e.weight >= 1 => Ok(()),
            _ => Err(GraphError::SpecialLoop(u)),
        };
    }
    match (lu, lv) {
        (Atom(_), Atom(_)) => match e.kind {
            EdgeKind::Aromatic if e.weight == 1 => Ok(()),
            EdgeKind::Aromatic => Err(bad("an aromatic ring bond")),
            EdgeKind::Plain if (1..=3).contains(&e.weight) => Ok(()),
            EdgeKind::Plain => Err(bad("a bond")),
        },
        (a, b) if a.is_special() && b.is_special() => Err(GraphError::SpecialPair { u, v }),
        (Charge, _) | (_, Charge) if e.weight != 0 => Ok(()),
        (Charge, _) | (_, Charge) => Err(bad("a charge edge")),
        (Radical, _) | (_, Radical) if e.weight >= 1 => Ok(()),
        (Radical, _) | (_, Radical) => Err(bad("a radical edge")),
        _ if e.weight >= 1 => Ok(()),
        _ => Err(bad("an aromatic-complex edge")),
    }
}

impl MoleculeGraph {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> VertexLabel {
        self.labels[v]
    }

    pub fn edge(&self, u: usize, v: usize) -> Option<Edge> {
        self.edges.get(&key(u, v)).copied()
    }

    /// Weight of `{u, v}`, zero when absent.
    pub fn weight(&self, u: usize, v: usize) -> i32 {
        self.edge(u, v).map_or(0, |e| e.weight)
    }

    /// All stored edges as `((u, v), edge)` with `u <= v`.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), Edge)> + '_ {
        self.edges.iter().map(|(&k, &e)| (k, e))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors other than `v` itself, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn loop_weight(&self, v: usize) -> i32 {
        self.weight(v, v)
    }

    pub fn charge_vertex(&self) -> Option<usize> {
        self.charge
    }

    pub fn radical_vertex(&self) -> Option<usize> {
        self.radical
    }

    pub fn aromatic_vertices(&self) -> &[usize] {
        &self.aromatic
    }

    /// Sum of incident edge weights, loops counted twice.
    pub fn weighted_degree(&self, v: usize) -> Result<i32, GraphError> {
        if v >= self.vertex_count() {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                len: self.vertex_count(),
            });
        }
        Ok(self.degree_unchecked(v))
    }

    pub(crate) fn degree_unchecked(&self, v: usize) -> i32 {
        let open: i32 = self.adjacency[v].iter().map(|&u| self.weight(v, u)).sum();
        open + 2 * self.loop_weight(v)
    }

    /// The view over every unordered vertex pair, absent pairs weighing zero.
    pub fn universe(&self) -> EdgeUniverse<'_> {
        EdgeUniverse { graph: self }
    }

    /// Formal charge of an atom: the weight of its edge to the Charge vertex.
    pub fn charge_of(&self, v: usize) -> i32 {
        self.charge.map_or(0, |c| self.weight(v, c))
    }

    pub fn radicals_of(&self, v: usize) -> i32 {
        self.radical.map_or(0, |r| self.weight(v, r))
    }

    /// Splits the graph into molecules: components of the non-Charge,
    /// non-Radical vertices, each with its own Charge or Radical vertex when
    /// it has charged or radical atoms. Ordered by smallest vertex index.
    pub fn components(&self) -> Vec<MoleculeGraph> {
        let n = self.vertex_count();
        let shared = |v: usize| matches!(self.labels[v], VertexLabel::Charge | VertexLabel::Radical);
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if comp[s] != usize::MAX || shared(s) {
                continue;
            }
            comp[s] = count;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &u in &self.adjacency[v] {
                    if comp[u] == usize::MAX && !shared(u) {
                        comp[u] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        (0..count)
            .map(|c| {
                let mut b = GraphBuilder::new();
                let mut local = vec![usize::MAX; n];
                for v in (0..n).filter(|&v| comp[v] == c) {
                    local[v] = b.add_vertex(self.labels[v]);
                }
                for special in [self.charge, self.radical].into_iter().flatten() {
                    if self.adjacency[special].iter().any(|&u| comp[u] == c) {
                        local[special] = b.add_vertex(self.labels[special]);
                    }
                }
                for (&(u, v), e) in &self.edges {
                    if local[u] != usize::MAX && local[v] != usize::MAX {
                        b.add_edge(local[u], local[v], e.kind, e.weight).expect("subgraph of a valid graph");
                    }
                }
                b.build().expect("subgraph of a valid graph")
            })
            .collect()
    }

    /// Reopens the graph for extension (used for padding special vertices).
    pub fn to_builder(&self) -> GraphBuilder {
        GraphBuilder {
            labels: self.labels.clone(),
            edges: self.edges.clone(),
        }
    }

    /// Colored view that distinguishes edge kind and weight.
    pub(crate) fn colored(&self) -> ColoredGraph {
        let mut g = ColoredGraph::new(self.labels.iter().map(|l| l.code()).collect());
        for ((u, v), e) in self.edges() {
            let kind = match e.kind {
                EdgeKind::Plain => 0u64,
                EdgeKind::Aromatic => 1u64,
            };
            g.set_edge(u, v, (kind << 32) | (e.weight as u32 as u64));
        }
        g
    }
}

/// Every unordered vertex pair of a graph together with its weight.
#[derive(Debug, Clone, Copy)]
pub struct EdgeUniverse<'a> {
    graph: &'a MoleculeGraph,
}

impl EdgeUniverse<'_> {
    pub fn weight(&self, u: usize, v: usize) -> i32 {
        self.graph.weight(u, v)
    }

    /// All `n(n+1)/2` pairs `(u, v, w)` with `u <= v`, zero weights included.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, i32)> + '_ {
        let n = self.graph.vertex_count();
        (0..n).flat_map(move |u| (u..n).map(move |v| (u, v, self.graph.weight(u, v))))
    }
}

/// Result of [`disjoint_union`]: `provenance[k][v]` is the global index of
/// vertex `v` of input `k`.
pub type Provenance = Vec<Vec<usize>>;

/// Places the inputs side by side. The Charge vertices of all inputs are
/// merged into one (likewise Radical); aromatic vertices stay per complex.
///
/// Global order: the non-merged vertices of input 0, input 1, ..., then the
/// merged Charge vertex, then the merged Radical vertex.
pub fn disjoint_union(graphs: &[&MoleculeGraph]) -> (MoleculeGraph, Provenance) {
    let mut b = GraphBuilder::new();
    let mut prov: Provenance = graphs.iter().map(|g| vec![usize::MAX; g.vertex_count()]).collect();
    for (k, g) in graphs.iter().enumerate() {
        for v in 0..g.vertex_count() {
            if !matches!(g.label(v), VertexLabel::Charge | VertexLabel::Radical) {
                prov[k][v] = b.add_vertex(g.label(v));
            }
        }
    }
    if graphs.iter().any(|g| g.charge.is_some()) {
        let c = b.add_vertex(VertexLabel::Charge);
        for (k, g) in graphs.iter().enumerate() {
            if let Some(x) = g.charge {
                prov[k][x] = c;
            }
        }
    }
    if graphs.iter().any(|g| g.radical.is_some()) {
        let r = b.add_vertex(VertexLabel::Radical);
        for (k, g) in graphs.iter().enumerate() {
            if let Some(x) = g.radical {
                prov[k][x] = r;
            }
        }
    }
    for (k, g) in graphs.iter().enumerate() {
        for ((u, v), e) in g.edges() {
            // Special vertices never touch each other, so merged endpoints
            // cannot produce colliding keys.
            b.add_edge(prov[k][u], prov[k][v], e.kind, e.weight)
                .expect("union of valid graphs is valid");
        }
    }
    (b.build().expect("union of valid graphs is valid"), prov)
}

/// Label-, kind- and weight-preserving isomorphism `g1 -> g2`, if any.
pub fn are_isomorphic(g1: &MoleculeGraph, g2: &MoleculeGraph) -> Option<Vec<usize>> {
    iso::find_isomorphism(&g1.colored(), &g2.colored())
}

/// Isomorphism-invariant fingerprint, useful as a cheap negative test.
pub fn fingerprint(g: &MoleculeGraph) -> u64 {
    iso::invariant(&g.colored())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(e: Element) -> VertexLabel {
        VertexLabel::Atom(e)
    }

    /// Pyruvate as drawn: CH3-C(=O)-C(=O)-O(-), lone pairs on every O.
    pub(crate) fn pyruvate() -> MoleculeGraph {
        let mut b = GraphBuilder::new();
        let c1 = b.add_vertex(atom(Element::C));
        let c2 = b.add_vertex(atom(Element::C));
        let c3 = b.add_vertex(atom(Element::C));
        let o1 = b.add_vertex(atom(Element::O));
        let o2 = b.add_vertex(atom(Element::O));
        let o3 = b.add_vertex(atom(Element::O));
        let hs: Vec<usize> = (0..3).map(|_| b.add_vertex(atom(Element::H))).collect();
        let q = b.add_vertex(VertexLabel::Charge);
        let p = EdgeKind::Plain;
        b.add_edge(c1, c2, p, 1).unwrap();
        b.add_edge(c2, o1, p, 2).unwrap();
        b.add_edge(c2, c3, p, 1).unwrap();
        b.add_edge(c3, o2, p, 2).unwrap();
        b.add_edge(c3, o3, p, 1).unwrap();
        for h in hs {
            b.add_edge(c1, h, p, 1).unwrap();
        }
        b.add_edge(o1, o1, p, 2).unwrap();
        b.add_edge(o2, o2, p, 2).unwrap();
        b.add_edge(o3, o3, p, 3).unwrap();
        b.add_edge(o3, q, p, -1).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn weighted_degree_counts_loops_twice() {
        let mut b = GraphBuilder::new();
        let c = b.add_vertex(atom(Element::C));
        let o = b.add_vertex(atom(Element::O));
        let q = b.add_vertex(VertexLabel::Charge);
        let lonely = b.add_vertex(atom(Element::N));
        b.add_edge(c, o, EdgeKind::Plain, 1).unwrap();
        b.add_edge(o, o, EdgeKind::Plain, 2).unwrap();
        b.add_edge(o, q, EdgeKind::Plain, -1).unwrap();
        let g = b.build().unwrap();
        assert_eq!(g.weighted_degree(o).unwrap(), 4);
        assert_eq!(g.weighted_degree(lonely).unwrap(), 0);
        assert!(matches!(
            g.weighted_degree(9),
            Err(GraphError::VertexOutOfRange { vertex: 9, len: 4 })
        ));
    }

    #[test]
    fn pyruvate_degrees() {
        let g = pyruvate();
        assert_eq!(g.weighted_degree(0).unwrap(), 4);
        for o in 3..6 {
            assert_eq!(g.weighted_degree(o).unwrap(), 6);
        }
        assert_eq!(g.charge_of(5), -1);
    }

    #[test]
    fn invariants_are_enforced() {
        let mut b = GraphBuilder::new();
        let c = b.add_vertex(atom(Element::C));
        let d = b.add_vertex(atom(Element::C));
        b.add_edge(c, d, EdgeKind::Plain, 4).unwrap();
        assert!(matches!(b.build(), Err(GraphError::BadWeight { .. })));

        let mut b = GraphBuilder::new();
        let q = b.add_vertex(VertexLabel::Charge);
        let r = b.add_vertex(VertexLabel::Radical);
        b.add_edge(q, r, EdgeKind::Plain, 1).unwrap();
        assert!(matches!(b.build(), Err(GraphError::SpecialPair { .. })));

        let mut b = GraphBuilder::new();
        let q = b.add_vertex(VertexLabel::Charge);
        b.add_edge(q, q, EdgeKind::Plain, 1).unwrap();
        assert_eq!(b.build(), Err(GraphError::SpecialLoop(0)));

        let mut b = GraphBuilder::new();
        b.add_vertex(VertexLabel::Charge);
        b.add_vertex(VertexLabel::Charge);
        assert!(matches!(b.build(), Err(GraphError::DuplicateSpecial(_))));

        let mut b = GraphBuilder::new();
        let c = b.add_vertex(atom(Element::C));
        let d = b.add_vertex(atom(Element::C));
        b.add_edge(c, d, EdgeKind::Aromatic, 2).unwrap();
        assert!(b.build().is_err());
    }

    #[test]
    fn universe_has_zero_for_absent_pairs() {
        let g = pyruvate();
        let u = g.universe();
        assert_eq!(u.weight(0, 1), 1);
        assert_eq!(u.weight(0, 5), 0);
        let n = g.vertex_count();
        assert_eq!(u.pairs().count(), n * (n + 1) / 2);
        let nonzero: usize = u.pairs().filter(|&(_, _, w)| w != 0).count();
        assert_eq!(nonzero, g.edge_count());
        for (a, b, w) in u.pairs() {
            if w < 0 {
                assert!(g.charge_vertex() == Some(a) || g.charge_vertex() == Some(b));
            }
        }
    }

    #[test]
    fn union_of_one_is_a_copy() {
        let g = pyruvate();
        let (u, prov) = disjoint_union(&[&g]);
        assert_eq!(prov[0], (0..g.vertex_count()).collect::<Vec<_>>());
        assert_eq!(u, g);
    }

    #[test]
    fn union_of_single_atoms() {
        let mut b = GraphBuilder::new();
        b.add_vertex(atom(Element::C));
        let c = b.build().unwrap();
        let (u, _) = disjoint_union(&[&c, &c]);
        assert_eq!(u.vertex_count(), 2);
        assert_eq!(u.edge_count(), 0);
    }

    #[test]
    fn union_merges_charge_vertices() {
        let g = pyruvate();
        let (u, prov) = disjoint_union(&[&g, &g]);
        let charges: Vec<_> = (0..u.vertex_count())
            .filter(|&v| u.label(v) == VertexLabel::Charge)
            .collect();
        assert_eq!(charges.len(), 1);
        let q = charges[0];
        assert_eq!(u.neighbors(q).len(), 2);
        assert_eq!(u.weighted_degree(q).unwrap(), -2);
        assert_eq!(prov[0][9], q);
        assert_eq!(prov[1][9], q);
        let before: i32 = (0..g.vertex_count()).map(|v| g.degree_unchecked(v)).sum::<i32>() * 2;
        let after: i32 = (0..u.vertex_count()).map(|v| u.degree_unchecked(v)).sum();
        assert_eq!(before, after);
    }

    #[test]
    fn isomorphism_of_rotated_kekule_benzene() {
        let ring = |rot: usize| {
            let mut b = GraphBuilder::new();
            for _ in 0..6 {
                b.add_vertex(atom(Element::C));
            }
            for _ in 0..6 {
                b.add_vertex(atom(Element::H));
            }
            for k in 0..6 {
                let u = (k + rot) % 6;
                let v = (k + 1 + rot) % 6;
                b.add_edge(u, v, EdgeKind::Plain, if k % 2 == 0 { 2 } else { 1 }).unwrap();
                b.add_edge(k, 6 + (k + rot) % 6, EdgeKind::Plain, 1).unwrap();
            }
            b.build().unwrap()
        };
        let a = ring(0);
        let b = ring(1);
        let f = are_isomorphic(&a, &b).expect("rotated rings are isomorphic");
        for ((u, v), e) in a.edges() {
            assert_eq!(b.edge(f[u], f[v]), Some(e));
        }
        assert!(are_isomorphic(&a, &a).is_some());
    }

    #[test]
    fn ethanol_is_not_dimethyl_ether() {
        let build = |ether: bool| {
            let mut b = GraphBuilder::new();
            let c1 = b.add_vertex(atom(Element::C));
            let c2 = b.add_vertex(atom(Element::C));
            let o = b.add_vertex(atom(Element::O));
            let p = EdgeKind::Plain;
            let mut hs = (0..6).map(|_| b.add_vertex(atom(Element::H))).collect::<Vec<_>>();
            if ether {
                b.add_edge(c1, o, p, 1).unwrap();
                b.add_edge(c2, o, p, 1).unwrap();
                for (k, h) in hs.drain(..).enumerate() {
                    b.add_edge(if k < 3 { c1 } else { c2 }, h, p, 1).unwrap();
                }
            } else {
                b.add_edge(c1, c2, p, 1).unwrap();
                b.add_edge(c2, o, p, 1).unwrap();
                for (k, h) in hs.drain(..).enumerate() {
                    let owner = match k {
                        0..=2 => c1,
                        3 | 4 => c2,
                        _ => o,
                    };
                    b.add_edge(owner, h, p, 1).unwrap();
                }
            }
            b.add_edge(o, o, p, 2).unwrap();
            b.build().unwrap()
        };
        let ethanol = build(false);
        let ether = build(true);
        assert!(are_isomorphic(&ethanol, &ether).is_none());
        assert_ne!(fingerprint(&ethanol), fingerprint(&ether));
    }
}
