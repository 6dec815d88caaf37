use std::collections::BTreeMap;

use crate::chemio::{ReactionDocument, Species};
use crate::molgraph::{disjoint_union, EdgeKind, MoleculeGraph, VertexLabel};

/// Where a vertex of an instance graph came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    /// Atom `atom` of copy `copy` of species `species` on that side.
    Atom {
        species: usize,
        copy: u32,
        atom: usize,
    },
    /// A merged Charge/Radical vertex, or an Aromatic vertex of a species.
    Special(VertexLabel),
    /// Added so both sides have the same special vertices.
    Padding(VertexLabel),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("unbalanced reaction: {0}")]
    Unbalanced(String),
}

/// Dense symmetric weight table over every vertex pair.
#[derive(Debug, Clone)]
pub struct WeightTable {
    n: usize,
    data: Vec<i32>,
}

impl WeightTable {
    fn new(g: &MoleculeGraph) -> Self {
        let n = g.vertex_count();
        let mut data = vec![0; n * n];
        for ((u, v), e) in g.edges() {
            data[u * n + v] = e.weight;
            data[v * n + u] = e.weight;
        }
        WeightTable { n, data }
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> i32 {
        self.data[u * self.n + v]
    }
}

/// A balanced mapping problem: educt graph `g1` and product graph `g2` with
/// equal vertex-label multisets.
#[derive(Debug, Clone)]
pub struct ReactionInstance {
    g1: MoleculeGraph,
    g2: MoleculeGraph,
    origin1: Vec<Origin>,
    origin2: Vec<Origin>,
    w1: WeightTable,
    w2: WeightTable,
}

fn expand(side: &[Species]) -> (MoleculeGraph, Vec<Origin>) {
    let mut graphs = Vec::new();
    let mut owners = Vec::new();
    for (k, s) in side.iter().enumerate() {
        for c in 0..s.count {
            graphs.push(&s.graph);
            owners.push((k, c));
        }
    }
    let (g, prov) = disjoint_union(&graphs);
    let mut origin = vec![Origin::Padding(VertexLabel::Charge); g.vertex_count()];
    for (idx, local) in prov.iter().enumerate() {
        let (species, copy) = owners[idx];
        for (atom, &global) in local.iter().enumerate() {
            origin[global] = match graphs[idx].label(atom) {
                VertexLabel::Atom(_) => Origin::Atom {
                    species,
                    copy,
                    atom,
                },
                l => Origin::Special(l),
            };
        }
    }
    (g, origin)
}

fn label_counts(g: &MoleculeGraph) -> BTreeMap<VertexLabel, usize> {
    let mut m = BTreeMap::new();
    for &l in g.labels() {
        *m.entry(l).or_insert(0) += 1;
    }
    m
}

/// Adds whatever special vertices one side lacks: an isolated Charge or
/// Radical vertex, or Aromatic vertices carrying their electrons as a loop
/// (the Kekule side of an aromatic/Kekule pair).
fn pad(
    g: MoleculeGraph,
    mut origin: Vec<Origin>,
    other: &MoleculeGraph,
) -> (MoleculeGraph, Vec<Origin>) {
    let mut b = g.to_builder();
    if g.charge_vertex().is_none() && other.charge_vertex().is_some() {
        b.add_vertex(VertexLabel::Charge);
        origin.push(Origin::Padding(VertexLabel::Charge));
    }
    if g.radical_vertex().is_none() && other.radical_vertex().is_some() {
        b.add_vertex(VertexLabel::Radical);
        origin.push(Origin::Padding(VertexLabel::Radical));
    }
    let degrees = |h: &MoleculeGraph| {
        let mut d: Vec<i32> = h.aromatic_vertices().iter().map(|&a| h.degree_unchecked(a)).collect();
        d.sort_unstable();
        d
    };
    let mine = degrees(&g);
    let mut theirs = degrees(other);
    for d in mine {
        if let Some(pos) = theirs.iter().position(|&x| x == d) {
            theirs.remove(pos);
        }
    }
    let excess = other.aromatic_vertices().len() as isize - g.aromatic_vertices().len() as isize;
    for &d in theirs.iter().take(excess.max(0) as usize) {
        let a = b.add_vertex(VertexLabel::Aromatic);
        origin.push(Origin::Padding(VertexLabel::Aromatic));
        if d > 0 && d % 2 == 0 {
            b.add_edge(a, a, EdgeKind::Plain, d / 2).unwrap();
        }
    }
    (b.build().expect("padding keeps the graph valid"), origin)
}

impl ReactionInstance {
    /// Expands multiplicities, merges each side into one graph and pads
    /// special vertices. Fails when the sides carry different atoms.
    pub fn from_document(doc: &ReactionDocument) -> Result<Self, InstanceError> {
        let (g1, o1) = expand(&doc.educts);
        let (g2, o2) = expand(&doc.products);
        let c1: i32 = (0..g1.vertex_count()).map(|v| g1.charge_of(v)).sum();
        let c2: i32 = (0..g2.vertex_count()).map(|v| g2.charge_of(v)).sum();
        if c1 != c2 {
            return Err(InstanceError::Unbalanced(format!(
                "total charge {c1} on the educt side, {c2} on the product side"
            )));
        }
        Self::with_origins(g1, o1, g2, o2)
    }

    /// Instance over two prepared graphs (origins are synthesized).
    pub fn from_graphs(g1: MoleculeGraph, g2: MoleculeGraph) -> Result<Self, InstanceError> {
        let origin = |g: &MoleculeGraph| {
            (0..g.vertex_count())
                .map(|v| match g.label(v) {
                    VertexLabel::Atom(_) => Origin::Atom {
                        species: 0,
                        copy: 0,
                        atom: v,
                    },
                    l => Origin::Special(l),
                })
                .collect()
        };
        let (o1, o2) = (origin(&g1), origin(&g2));
        Self::with_origins(g1, o1, g2, o2)
    }

    fn with_origins(
        g1: MoleculeGraph,
        o1: Vec<Origin>,
        g2: MoleculeGraph,
        o2: Vec<Origin>,
    ) -> Result<Self, InstanceError> {
        let (g1, o1) = pad(g1, o1, &g2);
        let (g2, o2) = pad(g2, o2, &g1);
        let (l1, l2) = (label_counts(&g1), label_counts(&g2));
        if l1 != l2 {
            let mut diff = Vec::new();
            for l in l1.keys().chain(l2.keys()) {
                let (a, b) = (l1.get(l).copied().unwrap_or(0), l2.get(l).copied().unwrap_or(0));
                if a != b && !diff.iter().any(|s: &String| s.starts_with(&format!("{l}:"))) {
                    diff.push(format!("{l}: {a} vs {b}"));
                }
            }
            return Err(InstanceError::Unbalanced(diff.join(", ")));
        }
        Ok(ReactionInstance {
            w1: WeightTable::new(&g1),
            w2: WeightTable::new(&g2),
            g1,
            g2,
            origin1: o1,
            origin2: o2,
        })
    }

    pub fn g1(&self) -> &MoleculeGraph {
        &self.g1
    }

    pub fn g2(&self) -> &MoleculeGraph {
        &self.g2
    }

    pub fn len(&self) -> usize {
        self.g1.vertex_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn w1(&self, u: usize, v: usize) -> i32 {
        self.w1.get(u, v)
    }

    #[inline]
    pub fn w2(&self, p: usize, q: usize) -> i32 {
        self.w2.get(p, q)
    }

    pub fn origin1(&self, v: usize) -> Origin {
        self.origin1[v]
    }

    pub fn origin2(&self, p: usize) -> Origin {
        self.origin2[p]
    }

    /// Vertex pairs `(i, p)` with equal labels, in `(i, p)` order.
    pub fn compatible_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for p in 0..n {
                if self.g1.label(i) == self.g2.label(p) {
                    out.push((i, p));
                }
            }
        }
        out
    }

    /// Size of the label class of educt vertex `i`.
    pub fn class_size(&self, i: usize) -> usize {
        let l = self.g1.label(i);
        self.g1.labels().iter().filter(|&&x| x == l).count()
    }
}
