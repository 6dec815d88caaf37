//! Reading and writing molecules and reaction documents.
//!
//! Reaction documents are JSON:
//!
//! ```json
//! {"id": "diels-alder",
//!  "educts": [{"smiles": "C=C"}, {"smiles": "C=CC=C"}],
//!  "products": [{"smiles": "C1=CCCCC1"}]}
//! ```
//!
//! A molecule is either `{"smiles": ..., "count"?: n}` or an explicit atom
//! list `{"atoms": [...], "bonds": [...], "aromaticRings"?: [...], "count"?: n}`.
//! Explicit atoms list every hydrogen; lone pairs are derived unless
//! `lonePairs` is given, in which case it is taken verbatim.

mod smiles;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::molgraph::{EdgeKind, GraphBuilder, GraphError, MoleculeGraph, VertexLabel};

pub use smiles::{parse_smiles, SmilesError};

#[derive(Debug, thiserror::Error)]
pub enum ChemError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("{place}: {source}")]
    Smiles {
        place: String,
        #[source]
        source: SmilesError,
    },
    #[error("{place}: valence violation on atom {atom}: {message}")]
    Valence {
        place: String,
        atom: usize,
        message: String,
    },
    #[error("{place}: {source}")]
    Graph {
        place: String,
        #[source]
        source: GraphError,
    },
}

/// One molecule of a reaction side together with its stoichiometric count.
#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub graph: MoleculeGraph,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReactionDocument {
    pub id: Option<String>,
    pub educts: Vec<Species>,
    pub products: Vec<Species>,
}

/// Atom-label and charge totals of one side of a reaction.
fn side_totals(side: &[Species]) -> (BTreeMap<Element, u64>, i64) {
    let mut counts = BTreeMap::new();
    let mut charge = 0i64;
    for s in side {
        for v in 0..s.graph.vertex_count() {
            if let VertexLabel::Atom(e) = s.graph.label(v) {
                *counts.entry(e).or_insert(0) += s.count as u64;
                charge += (s.graph.charge_of(v) * s.count as i32) as i64;
            }
        }
    }
    (counts, charge)
}

impl ReactionDocument {
    /// Same atoms with multiplicity and the same total charge on both sides.
    pub fn is_balanced(&self) -> bool {
        side_totals(&self.educts) == side_totals(&self.products)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    educts: Vec<MolSpec>,
    products: Vec<MolSpec>,
}

/// Wire form of one molecule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MolSpec {
    Smiles(SmilesSpec),
    Explicit(ExplicitSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmilesSpec {
    pub smiles: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ExplicitSpec {
    pub atoms: Vec<AtomSpec>,
    #[serde(default)]
    pub bonds: Vec<BondSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aromatic_rings: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct AtomSpec {
    pub element: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charge: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radicals: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lone_pairs: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BondSpec {
    pub a: usize,
    pub b: usize,
    pub order: i32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub aromatic: bool,
}

impl MolSpec {
    pub fn count(&self) -> Option<i64> {
        match self {
            MolSpec::Smiles(s) => s.count,
            MolSpec::Explicit(e) => e.count,
        }
    }
}

/// Builds the graph described by a wire molecule. `place` names the molecule
/// in error messages.
pub fn molecule_from_spec(spec: &MolSpec, place: &str) -> Result<MoleculeGraph, ChemError> {
    match spec {
        MolSpec::Smiles(s) => parse_smiles(&s.smiles).map_err(|source| ChemError::Smiles {
            place: place.to_string(),
            source,
        }),
        MolSpec::Explicit(e) => explicit_molecule(e, place),
    }
}

fn explicit_molecule(spec: &ExplicitSpec, place: &str) -> Result<MoleculeGraph, ChemError> {
    let schema = |msg: String| ChemError::Schema(format!("{place}: {msg}"));
    let n = spec.atoms.len();
    if n == 0 {
        return Err(schema("molecule has no atoms".into()));
    }
    let mut elements = Vec::with_capacity(n);
    for (k, a) in spec.atoms.iter().enumerate() {
        let e: Element = a
            .element
            .parse()
            .map_err(|_| schema(format!("atom {k}: unknown element `{}`", a.element)))?;
        if e.valence_electrons().is_none() {
            return Err(schema(format!("atom {k}: unsupported element {e}")));
        }
        elements.push(e);
    }
    let mut ring_of = vec![None; n];
    for (r, ring) in spec.aromatic_rings.iter().enumerate() {
        for &k in ring {
            if k >= n {
                return Err(schema(format!("aromatic ring {r}: atom {k} out of range")));
            }
            if ring_of[k].replace(r).is_some() {
                return Err(schema(format!("atom {k} listed in two aromatic rings")));
            }
        }
    }
    let mut g = GraphBuilder::new();
    for &e in &elements {
        g.add_vertex(VertexLabel::Atom(e));
    }
    let mut bond_sum = vec![0i32; n];
    for (k, b) in spec.bonds.iter().enumerate() {
        if b.a >= n || b.b >= n || b.a == b.b {
            return Err(schema(format!("bond {k}: bad endpoints ({}, {})", b.a, b.b)));
        }
        if !(1..=3).contains(&b.order) || (b.aromatic && b.order != 1) {
            return Err(schema(format!("bond {k}: bad order {}", b.order)));
        }
        let kind = if b.aromatic {
            EdgeKind::Aromatic
        } else {
            EdgeKind::Plain
        };
        g.add_edge(b.a, b.b, kind, b.order)
            .map_err(|_| schema(format!("bond {k}: duplicate bond")))?;
        bond_sum[b.a] += b.order;
        bond_sum[b.b] += b.order;
    }

    let mut pi = vec![0i32; n];
    let mut lone = vec![0i32; n];
    let mut rad = vec![0i32; n];
    for (k, a) in spec.atoms.iter().enumerate() {
        let group = elements[k].valence_electrons().unwrap();
        let charge = a.charge.unwrap_or(0);
        let given_rad = a.radicals.unwrap_or(0);
        let valence = |message: String| ChemError::Valence {
            place: place.to_string(),
            atom: k,
            message,
        };
        if given_rad < 0 || a.lone_pairs.is_some_and(|lp| lp < 0) {
            return Err(schema(format!("atom {k}: negative electron count")));
        }
        let aromatic = ring_of[k].is_some();
        match a.lone_pairs {
            Some(lp) => {
                lone[k] = lp;
                rad[k] = given_rad;
                if aromatic {
                    pi[k] = group - bond_sum[k] - charge - given_rad - 2 * lp;
                    if pi[k] < 1 {
                        return Err(valence(format!("no electrons left for the aromatic complex ({})", pi[k])));
                    }
                }
            }
            None => {
                if aromatic {
                    pi[k] = smiles::pi_electrons(group, bond_sum[k], 0, charge, given_rad);
                }
                let rest = group - bond_sum[k] - charge - given_rad - pi[k];
                if rest < 0 {
                    return Err(valence(format!("{} electrons over budget", -rest)));
                }
                lone[k] = rest / 2;
                rad[k] = given_rad;
                if rest % 2 == 1 {
                    if a.radicals.is_some() {
                        return Err(valence("odd electron count with explicit radicals".into()));
                    }
                    rad[k] += 1;
                }
            }
        }
    }
    for k in 0..n {
        if lone[k] > 0 {
            g.add_edge(k, k, EdgeKind::Plain, lone[k]).unwrap();
        }
    }
    for _ in &spec.aromatic_rings {
        g.add_vertex(VertexLabel::Aromatic);
    }
    for k in 0..n {
        if let Some(r) = ring_of[k] {
            g.add_edge(k, n + r, EdgeKind::Plain, pi[k]).unwrap();
        }
    }
    if spec.atoms.iter().any(|a| a.charge.unwrap_or(0) != 0) {
        let q = g.add_vertex(VertexLabel::Charge);
        for (k, a) in spec.atoms.iter().enumerate() {
            let c = a.charge.unwrap_or(0);
            if c != 0 {
                g.add_edge(k, q, EdgeKind::Plain, c).unwrap();
            }
        }
    }
    if rad.iter().any(|&r| r > 0) {
        let rv = g.add_vertex(VertexLabel::Radical);
        for (k, &r) in rad.iter().enumerate() {
            if r > 0 {
                g.add_edge(k, rv, EdgeKind::Plain, r).unwrap();
            }
        }
    }
    g.build().map_err(|source| ChemError::Graph {
        place: place.to_string(),
        source,
    })
}

/// Lossless explicit form of a molecule graph (special vertices folded back
/// into per-atom fields).
pub fn molecule_to_spec(g: &MoleculeGraph, count: Option<u32>) -> ExplicitSpec {
    let atoms: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| !g.label(v).is_special())
        .collect();
    let mut local = vec![usize::MAX; g.vertex_count()];
    for (k, &v) in atoms.iter().enumerate() {
        local[v] = k;
    }
    let atom_specs = atoms
        .iter()
        .map(|&v| {
            let charge = g.charge_of(v);
            let radicals = g.radicals_of(v);
            AtomSpec {
                element: g.label(v).to_string(),
                charge: (charge != 0).then_some(charge),
                radicals: (radicals != 0).then_some(radicals),
                lone_pairs: Some(g.loop_weight(v)),
            }
        })
        .collect();
    let bonds = g
        .edges()
        .filter(|&((u, v), _)| u != v && !g.label(u).is_special() && !g.label(v).is_special())
        .map(|((u, v), e)| BondSpec {
            a: local[u],
            b: local[v],
            order: e.weight,
            aromatic: e.kind == EdgeKind::Aromatic,
        })
        .collect();
    let aromatic_rings = g
        .aromatic_vertices()
        .iter()
        .map(|&a| g.neighbors(a).iter().map(|&v| local[v]).collect())
        .collect();
    ExplicitSpec {
        atoms: atom_specs,
        bonds,
        aromatic_rings,
        count: count.map(i64::from),
    }
}

fn read_side(specs: &[MolSpec], side: &str) -> Result<Vec<Species>, ChemError> {
    if specs.is_empty() {
        return Err(ChemError::Schema(format!("`{side}` must list at least one molecule")));
    }
    specs
        .iter()
        .enumerate()
        .map(|(k, spec)| {
            let place = format!("{side}[{k}]");
            let count = spec.count().unwrap_or(1);
            if count < 1 || count > u32::MAX as i64 {
                return Err(ChemError::Schema(format!("{place}: count must be >= 1")));
            }
            Ok(Species {
                graph: molecule_from_spec(spec, &place)?,
                count: count as u32,
            })
        })
        .collect()
}

/// Parses a reaction document. Unbalanced documents parse fine; see
/// [`ReactionDocument::is_balanced`].
pub fn parse_reaction_json(text: &str) -> Result<ReactionDocument, ChemError> {
    let doc: DocSpec = serde_json::from_str(text)?;
    Ok(ReactionDocument {
        id: doc.id,
        educts: read_side(&doc.educts, "educts")?,
        products: read_side(&doc.products, "products")?,
    })
}

/// Canonical JSON with explicit atom lists.
pub fn serialize_reaction(doc: &ReactionDocument) -> String {
    let side = |s: &[Species]| {
        s.iter()
            .map(|sp| MolSpec::Explicit(molecule_to_spec(&sp.graph, (sp.count != 1).then_some(sp.count))))
            .collect()
    };
    let spec = DocSpec {
        id: doc.id.clone(),
        educts: side(&doc.educts),
        products: side(&doc.products),
    };
    serde_json::to_string_pretty(&spec).expect("document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::are_isomorphic;

    const DIELS_ALDER: &str = r#"{"educts":[{"smiles":"C=C"},{"smiles":"C=CC=C"}],"products":[{"smiles":"C1=CCCCC1"}]}"#;

    #[test]
    fn diels_alder_is_balanced() {
        let doc = parse_reaction_json(DIELS_ALDER).unwrap();
        assert_eq!(doc.educts.len(), 2);
        assert!(doc.is_balanced());
    }

    #[test]
    fn unbalanced_documents_still_parse() {
        let doc = parse_reaction_json(r#"{"educts":[{"smiles":"C"}],"products":[{"smiles":"CC"}]}"#).unwrap();
        assert!(!doc.is_balanced());
        let doc = parse_reaction_json(
            r#"{"educts":[{"smiles":"O"},{"smiles":"O"}],"products":[{"smiles":"O","count":2}]}"#,
        )
        .unwrap();
        assert!(doc.is_balanced());
    }

    #[test]
    fn schema_errors() {
        for bad in [
            r#"{"educts":[],"products":[{"smiles":"C"}]}"#,
            r#"{"educts":[{"smiles":"C"}]}"#,
            r#"{"educts":[{"smiles":"C","count":0}],"products":[{"smiles":"C"}]}"#,
            r#"{"educts":[{"smile":"C"}],"products":[{"smiles":"C"}]}"#,
            r#"{"educts":[{"atoms":[{"element":"C"}],"bonds":[{"a":0,"b":3,"order":1}]}],"products":[{"smiles":"C"}]}"#,
        ] {
            assert!(parse_reaction_json(bad).is_err(), "{bad}");
        }
        assert!(matches!(
            parse_reaction_json(r#"{"educts":[],"products":[{"smiles":"C"}]}"#),
            Err(ChemError::Schema(_))
        ));
        assert!(matches!(
            parse_reaction_json(r#"{"educts":[{"smiles":"C("}],"products":[{"smiles":"C"}]}"#),
            Err(ChemError::Smiles { .. })
        ));
    }

    #[test]
    fn explicit_lone_pairs_are_verbatim() {
        let doc = parse_reaction_json(
            r#"{"educts":[{"atoms":[{"element":"O","lonePairs":1},{"element":"H"},{"element":"H"}],
                "bonds":[{"a":0,"b":1,"order":1},{"a":0,"b":2,"order":1}]}],
                "products":[{"smiles":"O"}]}"#,
        )
        .unwrap();
        assert_eq!(doc.educts[0].graph.loop_weight(0), 1);
        let derived = parse_reaction_json(
            r#"{"educts":[{"atoms":[{"element":"O"},{"element":"H"},{"element":"H"}],
                "bonds":[{"a":0,"b":1,"order":1},{"a":0,"b":2,"order":1}]}],
                "products":[{"smiles":"O"}]}"#,
        )
        .unwrap();
        assert_eq!(derived.educts[0].graph.loop_weight(0), 2);
        assert!(are_isomorphic(&derived.educts[0].graph, &derived.products[0].graph).is_some());
    }

    #[test]
    fn explicit_aromatic_ring_matches_smiles() {
        let mut atoms = String::new();
        let mut bonds = String::new();
        for k in 0..6 {
            atoms.push_str(r#"{"element":"C"},"#);
            bonds.push_str(&format!(r#"{{"a":{k},"b":{},"order":1,"aromatic":true}},"#, (k + 1) % 6));
            bonds.push_str(&format!(r#"{{"a":{k},"b":{},"order":1}},"#, k + 6));
        }
        for _ in 0..6 {
            atoms.push_str(r#"{"element":"H"},"#);
        }
        atoms.pop();
        bonds.pop();
        let text = format!(
            r#"{{"educts":[{{"atoms":[{atoms}],"bonds":[{bonds}],"aromaticRings":[[0,1,2,3,4,5]]}}],"products":[{{"smiles":"c1ccccc1"}}]}}"#
        );
        let doc = parse_reaction_json(&text).unwrap();
        assert!(are_isomorphic(&doc.educts[0].graph, &doc.products[0].graph).is_some());
    }

    #[test]
    fn round_trip_is_isomorphic() {
        let text = r#"{"id":"mix","educts":[{"smiles":"CC(=O)C(=O)[O-]"},{"smiles":"c1ccncc1","count":2},{"smiles":"[CH3]"}],
                      "products":[{"smiles":"[H+]"},{"smiles":"c1cc[nH]c1"}]}"#;
        let doc = parse_reaction_json(text).unwrap();
        let again = parse_reaction_json(&serialize_reaction(&doc)).unwrap();
        assert_eq!(again.id.as_deref(), Some("mix"));
        for (a, b) in doc.educts.iter().chain(&doc.products).zip(again.educts.iter().chain(&again.products)) {
            assert_eq!(a.count, b.count);
            assert!(are_isomorphic(&a.graph, &b.graph).is_some());
        }
        assert_eq!(serialize_reaction(&again), serialize_reaction(&doc));
    }

    #[test]
    fn single_atom_document() {
        let doc = parse_reaction_json(r#"{"educts":[{"smiles":"[H+]"}],"products":[{"smiles":"[H+]"}]}"#).unwrap();
        let text = serialize_reaction(&doc);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["educts"][0]["atoms"][0]["element"], "H");
        assert_eq!(v["educts"][0]["atoms"][0]["charge"], 1);
        assert!(v.get("id").is_none());
    }
}
