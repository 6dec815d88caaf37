use super::*;
use crate::chemio::parse_reaction_json;
use crate::element::Element;
use crate::molgraph::{EdgeKind, GraphBuilder, MoleculeGraph, VertexLabel};

fn carbons(n: usize, bonds: &[(usize, usize, i32)]) -> MoleculeGraph {
    let mut b = GraphBuilder::new();
    for _ in 0..n {
        b.add_vertex(VertexLabel::Atom(Element::C));
    }
    for &(u, v, w) in bonds {
        b.add_edge(u, v, EdgeKind::Plain, w).unwrap();
    }
    b.build().unwrap()
}

/// Heavy-atom Diels-Alder skeleton with the figure numbering shifted to 0.
pub(crate) fn diels_alder_skeleton() -> ReactionInstance {
    let g1 = carbons(6, &[(1, 2, 2), (3, 4, 2), (4, 5, 1), (5, 0, 2)]);
    let g2 = carbons(6, &[(0, 1, 2), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 0, 1)]);
    ReactionInstance::from_graphs(g1, g2).unwrap()
}

const FIG3: [usize; 6] = [2, 3, 4, 5, 0, 1];

#[test]
fn identity_costs_nothing() {
    let g = carbons(3, &[(0, 1, 1), (1, 2, 2)]);
    let inst = ReactionInstance::from_graphs(g.clone(), g).unwrap();
    assert_eq!(cost(&inst, &[0, 1, 2]), Ok(0));
    assert!(transition_state(&inst, &[0, 1, 2]).unwrap().is_empty());
    let r = brute_force_min_cost(&inst, None).unwrap();
    assert_eq!(r.min_cost, 0);
}

#[test]
fn single_weight_difference_of_two() {
    let g1 = carbons(2, &[(0, 1, 1)]);
    let g2 = carbons(2, &[(0, 1, 3)]);
    let inst = ReactionInstance::from_graphs(g1, g2).unwrap();
    assert_eq!(cost(&inst, &[0, 1]), Ok(2));
    assert_eq!(cost(&inst, &[1, 0]), Ok(2));
}

#[test]
fn figure_map_costs_six_and_is_one_cycle() {
    let inst = diels_alder_skeleton();
    assert_eq!(cost(&inst, &FIG3), Ok(6));
    let ts = transition_state(&inst, &FIG3).unwrap();
    assert_eq!(ts.edges().len(), 6);
    assert!(ts.edges().values().all(|w| w.abs() == 1));
    assert_eq!(ts.flux_violation(), None);
    let dec = decompose_cycles(&ts).unwrap();
    assert_eq!(dec.cycles.len(), 1);
    assert_eq!(dec.cycles[0].len(), 6);
    assert!(dec.cycles[0].is_elementary());
    assert_eq!(dec.reconstruct(), ts);
    // The cycle visits the six carbons in ring order.
    let mut w = dec.cycles[0].walk().to_vec();
    w.sort_unstable();
    assert_eq!(w, vec![0, 1, 2, 3, 4, 5]);
}

#[test]
fn usage_errors() {
    let inst = diels_alder_skeleton();
    assert!(matches!(cost(&inst, &[0, 1]), Err(MapError::Length { .. })));
    assert!(matches!(cost(&inst, &[0, 0, 1, 2, 3, 4]), Err(MapError::NotBijective(0))));
}

#[test]
fn label_mismatch_is_rejected() {
    let doc = parse_reaction_json(r#"{"educts":[{"smiles":"CO"}],"products":[{"smiles":"OC"}]}"#).unwrap();
    let inst = ReactionInstance::from_document(&doc).unwrap();
    let n = inst.len();
    let mut psi: Vec<usize> = (0..n).collect();
    // Product heavy atoms are O then C; identity maps C onto O.
    psi.swap(0, 1);
    assert_eq!(cost(&inst, &psi).map(|_| ()), Ok(()));
    psi.swap(0, 1);
    assert!(matches!(cost(&inst, &psi), Err(MapError::LabelMismatch { .. })));
}

#[test]
fn unbalanced_documents_fail() {
    let doc = parse_reaction_json(r#"{"educts":[{"smiles":"C"}],"products":[{"smiles":"CC"}]}"#).unwrap();
    assert!(matches!(ReactionInstance::from_document(&doc), Err(InstanceError::Unbalanced(_))));
    let doc = parse_reaction_json(r#"{"educts":[{"smiles":"O"}],"products":[{"smiles":"[OH-]"},{"smiles":"[H]"}]}"#).unwrap();
    assert!(ReactionInstance::from_document(&doc).is_err());
}

#[test]
fn charge_vertex_is_padded() {
    let doc = parse_reaction_json(
        r#"{"educts":[{"smiles":"O"}],"products":[{"smiles":"[OH-]"},{"smiles":"[H+]"}]}"#,
    )
    .unwrap();
    let inst = ReactionInstance::from_document(&doc).unwrap();
    assert_eq!(inst.len(), 4);
    assert!(inst.g1().charge_vertex().is_some());
    assert_eq!(inst.origin1(3), Origin::Padding(VertexLabel::Charge));
    let r = brute_force_min_cost(&inst, None).unwrap();
    // Break O-H (1), one more lone pair on O (1), charge edges -1 on O and
    // +1 on H (2).
    assert_eq!(r.min_cost, 4);
    assert_eq!(r.classes.len(), 1);
}

#[test]
fn water_from_hydrogen_and_oxygen() {
    // Toy: H-H + O with two unpaired electrons vs H2O; only two bijections.
    let doc = parse_reaction_json(
        r#"{"educts":[{"smiles":"[H][H]"},{"atoms":[{"element":"O","radicals":2}],"bonds":[]}],
            "products":[{"smiles":"O"}]}"#,
    )
    .unwrap();
    let inst = ReactionInstance::from_document(&doc).unwrap();
    let r = brute_force_min_cost(&inst, None).unwrap();
    let n = inst.len();
    let mut all = Vec::new();
    for a in [1usize, 2] {
        let mut psi: Vec<usize> = (0..n).collect();
        // product: O, H, H, then the padded Radical vertex
        psi[0] = a;
        psi[1] = 3 - a;
        psi[2] = 0;
        all.push(cost(&inst, &psi).unwrap());
    }
    assert_eq!(r.min_cost, *all.iter().min().unwrap());
    // H-H broken (1), two O-H formed (2), radical edge 2 -> 0 (2).
    assert_eq!(r.min_cost, 5);
    assert_eq!(r.classes.len(), 1);
}

#[test]
fn stripped_skeleton_admits_a_cheaper_map() {
    // Without hydrogens the carbons are not valence-saturated, and laying the
    // diene's first double bond onto the ring double bond needs only four
    // changes. The hydrogens are what make the six-cycle optimal.
    let inst = diels_alder_skeleton();
    let r = brute_force_min_cost(&inst, None).unwrap();
    assert_eq!(r.min_cost, 4);
    assert_eq!(cost(&inst, &[3, 4, 5, 0, 1, 2]), Ok(4));
    let fig = AtomMap::new(&inst, FIG3.to_vec()).unwrap();
    assert!(r.classes.iter().all(|m| !equivalent(&inst, m, &fig)));
}

#[test]
fn full_diels_alder_oracle() {
    let doc = parse_reaction_json(
        r#"{"educts":[{"smiles":"C=C"},{"smiles":"C=CC=C"}],"products":[{"smiles":"C1=CCCCC1"}]}"#,
    )
    .unwrap();
    let inst = ReactionInstance::from_document(&doc).unwrap();
    assert_eq!(inst.len(), 16);
    let r = brute_force_min_cost(&inst, Some(16)).unwrap();
    assert_eq!(r.min_cost, 6);
    // Besides the cycloaddition there is a second cost-6 class in which one
    // hydrogen of the diene shifts along the ring closure.
    assert_eq!(r.classes.len(), 2);
    let carbons_only = |m: &AtomMap| {
        m.transition_state(&inst)
            .vertices()
            .iter()
            .all(|&v| inst.g1().label(v) == VertexLabel::Atom(Element::C))
    };
    assert_eq!(r.classes.iter().filter(|m| carbons_only(m)).count(), 1);
    for m in &r.classes {
        let dec = decompose_cycles(&m.transition_state(&inst)).unwrap();
        assert_eq!(dec.cycles.len(), 1);
        assert_eq!(dec.cycles[0].len(), 6);
        assert!(dec.cycles[0].is_elementary());
    }
}

#[test]
fn oracle_refuses_large_instances() {
    let g = carbons(13, &[]);
    let inst = ReactionInstance::from_graphs(g.clone(), g).unwrap();
    let err = brute_force_min_cost(&inst, None).unwrap_err();
    assert_eq!((err.vertices, err.limit), (13, 12));
    assert!(brute_force_min_cost(&diels_alder_skeleton(), Some(6)).is_ok());
}

#[test]
fn overlay_of_two_four_cycles() {
    let mut edges = Vec::new();
    for base in [0usize, 10] {
        let c = [base, base + 1, base + 2, base + 3];
        for t in 0..4 {
            edges.push(((c[t], c[(t + 1) % 4]), if t % 2 == 0 { 1 } else { -1 }));
        }
    }
    let ts = TransitionState::from_edges(edges);
    let dec = decompose_cycles(&ts).unwrap();
    assert_eq!(dec.cycles.len(), 2);
    assert!(dec.cycles.iter().all(|c| c.len() == 4 && c.is_elementary()));
    assert_eq!(dec.reconstruct(), ts);
}

#[test]
fn figure_eight_walk_is_split() {
    // Two 4-cycles sharing vertex 0.
    let ts = TransitionState::from_edges([
        ((0, 1), 1),
        ((1, 2), -1),
        ((2, 3), 1),
        ((3, 0), -1),
        ((0, 4), 1),
        ((4, 5), -1),
        ((5, 6), 1),
        ((6, 0), -1),
    ]);
    let dec = decompose_cycles(&ts).unwrap();
    assert_eq!(dec.reconstruct(), ts);
    assert_eq!(dec.cycles.len(), 2);
    for c in &dec.cycles {
        assert!(c.is_elementary());
        for ((u, v), s) in c.steps() {
            assert_eq!(ts.weight(u, v), s);
        }
    }
}

#[test]
fn empty_and_violating_states() {
    assert!(decompose_cycles(&TransitionState::default()).unwrap().cycles.is_empty());
    let ts = TransitionState::from_edges([((0, 1), 1), ((1, 2), -1)]);
    let err = decompose_cycles(&ts).unwrap_err();
    assert_eq!(err.vertex, 0);
}

#[test]
fn loops_count_twice_in_flux() {
    // A lone pair becomes a bond: O loop -1 (flux -2), two bonds +1.
    let ts = TransitionState::from_edges([((0, 0), -1), ((0, 1), 1), ((0, 2), 1), ((1, 2), -1)]);
    assert_eq!(ts.flux(0), 0);
    assert_eq!(ts.flux(1), 0);
    let dec = decompose_cycles(&ts).unwrap();
    assert_eq!(dec.reconstruct(), ts);
}

#[test]
fn equivalence_graph_of_identity_has_equal_components() {
    let g = carbons(3, &[(0, 1, 1), (1, 2, 2)]);
    let inst = ReactionInstance::from_graphs(g.clone(), g).unwrap();
    let id = AtomMap::new(&inst, vec![0, 1, 2]).unwrap();
    let eg = equivalence_graph(&inst, &id);
    for (_, (a, b)) in eg.edges() {
        assert_eq!(a, b);
    }
    assert!(equivalent(&inst, &id, &id));
    let flip = AtomMap::new(&inst, vec![2, 1, 0]).unwrap();
    assert!(!equivalent(&inst, &id, &flip));
}

#[test]
fn symmetric_bystander_keeps_one_class() {
    // Kekule benzene bystander next to an allyl shift 6=7-8 -> 6-7=8.
    let ring = [(0, 1, 2), (1, 2, 1), (2, 3, 2), (3, 4, 1), (4, 5, 2), (5, 0, 1)];
    let mut e1 = ring.to_vec();
    e1.extend([(6, 7, 2), (7, 8, 1)]);
    let mut e2 = ring.to_vec();
    e2.extend([(6, 7, 1), (7, 8, 2)]);
    let inst = ReactionInstance::from_graphs(carbons(9, &e1), carbons(9, &e2)).unwrap();
    let id = AtomMap::new(&inst, (0..9).collect()).unwrap();
    let rotated = AtomMap::new(&inst, vec![2, 3, 4, 5, 0, 1, 6, 7, 8]).unwrap();
    assert_eq!(id.cost(), 2);
    assert_eq!(rotated.cost(), 2);
    assert_ne!(id, rotated);
    assert!(equivalent(&inst, &id, &rotated));
    let mut classes = EquivalenceClasses::new();
    assert!(classes.insert(&inst, id));
    assert!(!classes.insert(&inst, rotated));
    let r = brute_force_min_cost(&inst, None).unwrap();
    assert_eq!(r.min_cost, 0);
}
