//! A strict SMILES subset: organic-subset and bracket atoms, `-` `=` `#` `:`
//! bonds, branches, ring closures and lowercase aromatic `c n o s`.
//!
//! Implicit hydrogens become explicit H vertices, remaining valence
//! electrons become lone-pair loops (an odd leftover becomes one radical),
//! charges attach to the Charge vertex and every connected aromatic system
//! gets one Aromatic vertex.

use std::collections::HashMap;

use crate::element::Element;
use crate::molgraph::{EdgeKind, GraphBuilder, MoleculeGraph, VertexLabel};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SmilesError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("valence violation on atom {atom} (byte {offset}): {message}")]
    Valence {
        atom: usize,
        offset: usize,
        message: String,
    },
    #[error("unsupported SMILES feature at byte {offset}: {feature}")]
    Unsupported { offset: usize, feature: &'static str },
}

#[derive(Debug, Clone)]
struct Atom {
    element: Element,
    aromatic: bool,
    hydrogens: Option<i32>,
    charge: i32,
    offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BondSym {
    Single,
    Double,
    Triple,
    Aromatic,
}

#[derive(Debug, Clone, Copy)]
struct Bond {
    a: usize,
    b: usize,
    sym: Option<BondSym>,
    offset: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> SmilesError {
    SmilesError::Syntax {
        offset,
        message: message.into(),
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<u8> {
        self.bytes.get(self.pos + k).copied()
    }

    fn number(&mut self) -> Option<i32> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            std::str::from_utf8(&self.bytes[start..self.pos])
                .unwrap()
                .parse()
                .unwrap()
        })
    }
}

fn aromatic_symbol(ch: u8) -> Option<Element> {
    match ch {
        b'c' => Some(Element::C),
        b'n' => Some(Element::N),
        b'o' => Some(Element::O),
        b's' => Some(Element::S),
        _ => None,
    }
}

fn bracket_atom(r: &mut Reader<'_>) -> Result<Atom, SmilesError> {
    let open = r.pos;
    r.pos += 1;
    if matches!(r.peek(), Some(b'0'..=b'9')) {
        return Err(SmilesError::Unsupported {
            offset: r.pos,
            feature: "isotope",
        });
    }
    let sym_at = r.pos;
    let (element, aromatic) = match r.peek() {
        Some(ch) if ch.is_ascii_uppercase() => {
            let two = r.peek_at(1).filter(u8::is_ascii_lowercase).and_then(|lo| {
                std::str::from_utf8(&[ch, lo]).ok()?.parse::<Element>().ok()
            });
            match two {
                Some(e) => {
                    r.pos += 2;
                    (e, false)
                }
                None => {
                    r.pos += 1;
                    let e = (ch as char)
                        .to_string()
                        .parse::<Element>()
                        .map_err(|_| syntax(sym_at, "unknown element"))?;
                    (e, false)
                }
            }
        }
        Some(ch) => match aromatic_symbol(ch) {
            Some(e) => {
                r.pos += 1;
                (e, true)
            }
            None if ch == b'*' => {
                return Err(SmilesError::Unsupported {
                    offset: sym_at,
                    feature: "wildcard atom",
                })
            }
            None => return Err(syntax(sym_at, "expected element symbol")),
        },
        None => return Err(syntax(sym_at, "unterminated bracket atom")),
    };
    if element.valence_electrons().is_none() {
        return Err(SmilesError::Unsupported {
            offset: sym_at,
            feature: "element outside the supported set",
        });
    }
    if r.peek() == Some(b'@') {
        return Err(SmilesError::Unsupported {
            offset: r.pos,
            feature: "stereo mark",
        });
    }
    let mut hydrogens = 0;
    if r.peek() == Some(b'H') {
        r.pos += 1;
        hydrogens = r.number().unwrap_or(1);
    }
    let mut charge = 0;
    if let Some(sign @ (b'+' | b'-')) = r.peek() {
        let unit = if sign == b'+' { 1 } else { -1 };
        r.pos += 1;
        if let Some(n) = r.number() {
            charge = unit * n;
        } else {
            charge = unit;
            while r.peek() == Some(sign) {
                r.pos += 1;
                charge += unit;
            }
        }
    }
    match r.peek() {
        Some(b']') => r.pos += 1,
        Some(b':') => {
            return Err(SmilesError::Unsupported {
                offset: r.pos,
                feature: "atom class",
            })
        }
        Some(_) => return Err(syntax(r.pos, "unexpected character in bracket atom")),
        None => return Err(syntax(open, "unterminated bracket atom")),
    }
    Ok(Atom {
        element,
        aromatic,
        hydrogens: Some(hydrogens),
        charge,
        offset: open,
    })
}

fn organic_atom(r: &mut Reader<'_>) -> Option<Atom> {
    let offset = r.pos;
    let ch = r.peek()?;
    let (element, aromatic, len) = match (ch, r.peek_at(1)) {
        (b'C', Some(b'l')) => (Element::CL, false, 2),
        (b'B', Some(b'r')) => (Element::BR, false, 2),
        (b'B', _) => (Element::B, false, 1),
        (b'C', _) => (Element::C, false, 1),
        (b'N', _) => (Element::N, false, 1),
        (b'O', _) => (Element::O, false, 1),
        (b'P', _) => (Element::P, false, 1),
        (b'S', _) => (Element::S, false, 1),
        (b'F', _) => (Element::F, false, 1),
        (b'I', _) => (Element::I, false, 1),
        (b'H', _) => (Element::H, false, 1),
        (lower, _) => (aromatic_symbol(lower)?, true, 1),
    };
    r.pos += len;
    Some(Atom {
        element,
        aromatic,
        hydrogens: None,
        charge: 0,
        offset,
    })
}

/// Tokenizes and checks the structure, returning atoms and bonds.
fn read(text: &str) -> Result<(Vec<Atom>, Vec<Bond>), SmilesError> {
    let mut r = Reader {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut atoms: Vec<Atom> = Vec::new();
    let mut bonds: Vec<Bond> = Vec::new();
    let mut prev: Option<usize> = None;
    let mut pending: Option<(BondSym, usize)> = None;
    let mut branches: Vec<(Option<usize>, usize)> = Vec::new();
    let mut rings: HashMap<i32, (usize, Option<BondSym>, usize)> = HashMap::new();

    while let Some(ch) = r.peek() {
        let at = r.pos;
        match ch {
            b'[' | b'A'..=b'Z' | b'a'..=b'z' => {
                let atom = if ch == b'[' {
                    bracket_atom(&mut r)?
                } else {
                    match organic_atom(&mut r) {
                        Some(a) => a,
                        None => return Err(syntax(at, format!("unexpected `{}`", ch as char))),
                    }
                };
                let idx = atoms.len();
                atoms.push(atom);
                if let Some(p) = prev {
                    bonds.push(Bond {
                        a: p,
                        b: idx,
                        sym: pending.take().map(|(s, _)| s),
                        offset: at,
                    });
                } else if let Some((_, off)) = pending {
                    return Err(syntax(off, "bond without a preceding atom"));
                }
                prev = Some(idx);
            }
            b'-' | b'=' | b'#' | b':' => {
                if pending.is_some() {
                    return Err(syntax(at, "two consecutive bond symbols"));
                }
                let sym = match ch {
                    b'-' => BondSym::Single,
                    b'=' => BondSym::Double,
                    b'#' => BondSym::Triple,
                    _ => BondSym::Aromatic,
                };
                pending = Some((sym, at));
                r.pos += 1;
            }
            b'/' | b'\\' => {
                return Err(SmilesError::Unsupported {
                    offset: at,
                    feature: "directional bond",
                })
            }
            b'$' => {
                return Err(SmilesError::Unsupported {
                    offset: at,
                    feature: "quadruple bond",
                })
            }
            b'*' => {
                return Err(SmilesError::Unsupported {
                    offset: at,
                    feature: "wildcard atom",
                })
            }
            b'.' => {
                return Err(SmilesError::Unsupported {
                    offset: at,
                    feature: "disconnected components",
                })
            }
            b'(' => {
                if prev.is_none() {
                    return Err(syntax(at, "branch without a preceding atom"));
                }
                if pending.is_some() {
                    return Err(syntax(at, "bond symbol before branch"));
                }
                branches.push((prev, at));
                r.pos += 1;
            }
            b')' => {
                if pending.is_some() {
                    return Err(syntax(at, "dangling bond at end of branch"));
                }
                let (p, _) = branches.pop().ok_or_else(|| syntax(at, "unmatched `)`"))?;
                prev = p;
                r.pos += 1;
            }
            b'0'..=b'9' | b'%' => {
                let label = if ch == b'%' {
                    r.pos += 1;
                    let (d1, d2) = (r.peek_at(0), r.peek_at(1));
                    match (d1, d2) {
                        (Some(x @ b'0'..=b'9'), Some(y @ b'0'..=b'9')) => {
                            r.pos += 2;
                            ((x - b'0') * 10 + (y - b'0')) as i32
                        }
                        _ => return Err(syntax(at, "`%` must be followed by two digits")),
                    }
                } else {
                    r.pos += 1;
                    (ch - b'0') as i32
                };
                let cur = prev.ok_or_else(|| syntax(at, "ring closure without an atom"))?;
                let sym = pending.take().map(|(s, _)| s);
                match rings.remove(&label) {
                    Some((other, other_sym, _)) => {
                        if other == cur {
                            return Err(syntax(at, "ring closure onto the same atom"));
                        }
                        let sym = match (sym, other_sym) {
                            (Some(x), Some(y)) if x != y => {
                                return Err(syntax(at, "conflicting ring-closure bond symbols"))
                            }
                            (x, y) => x.or(y),
                        };
                        bonds.push(Bond {
                            a: other,
                            b: cur,
                            sym,
                            offset: at,
                        });
                    }
                    None => {
                        rings.insert(label, (cur, sym, at));
                    }
                }
            }
            b'@' => {
                return Err(SmilesError::Unsupported {
                    offset: at,
                    feature: "stereo mark",
                })
            }
            _ => return Err(syntax(at, format!("unexpected `{}`", ch as char))),
        }
    }
    if atoms.is_empty() {
        return Err(syntax(0, "empty SMILES"));
    }
    if let Some((_, off)) = pending {
        return Err(syntax(off, "dangling bond at end of input"));
    }
    if let Some(&(_, off)) = branches.last() {
        return Err(syntax(off, "unclosed branch"));
    }
    if let Some((_, &(_, _, off))) = rings.iter().min_by_key(|(_, v)| v.2) {
        return Err(syntax(off, "unclosed ring"));
    }
    let mut seen = std::collections::HashSet::new();
    for b in &bonds {
        if !seen.insert((b.a.min(b.b), b.a.max(b.b))) {
            return Err(syntax(b.offset, "duplicate bond between the same atoms"));
        }
    }
    Ok((atoms, bonds))
}

/// Electrons an aromatic atom contributes to its complex: one when the rest
/// pairs up evenly, otherwise two (pyrrole-type N, furan-type O).
pub(crate) fn pi_electrons(group: i32, bonds: i32, hydrogens: i32, charge: i32, radicals: i32) -> i32 {
    let rest = group - bonds - hydrogens - charge - radicals - 1;
    if rest >= 0 && rest % 2 == 0 {
        1
    } else {
        2
    }
}

/// Parses one molecule of the SMILES subset into a molecule graph.
pub fn parse_smiles(text: &str) -> Result<MoleculeGraph, SmilesError> {
    let (atoms, bonds) = read(text)?;
    let n = atoms.len();

    let mut kinds = Vec::with_capacity(bonds.len());
    for b in &bonds {
        let both_aromatic = atoms[b.a].aromatic && atoms[b.b].aromatic;
        let (kind, weight) = match b.sym {
            None if both_aromatic => (EdgeKind::Aromatic, 1),
            None | Some(BondSym::Single) => (EdgeKind::Plain, 1),
            Some(BondSym::Double) => (EdgeKind::Plain, 2),
            Some(BondSym::Triple) => (EdgeKind::Plain, 3),
            Some(BondSym::Aromatic) if both_aromatic => (EdgeKind::Aromatic, 1),
            Some(BondSym::Aromatic) => {
                return Err(syntax(b.offset, "aromatic bond between non-aromatic atoms"))
            }
        };
        kinds.push((kind, weight));
    }

    let mut bond_sum = vec![0i32; n];
    let mut aromatic_bonds = vec![0usize; n];
    for (b, &(kind, w)) in bonds.iter().zip(&kinds) {
        bond_sum[b.a] += w;
        bond_sum[b.b] += w;
        if kind == EdgeKind::Aromatic {
            aromatic_bonds[b.a] += 1;
            aromatic_bonds[b.b] += 1;
        }
    }

    let mut hydrogens = vec![0i32; n];
    let mut pi = vec![0i32; n];
    let mut lone_pairs = vec![0i32; n];
    let mut radicals = vec![0i32; n];
    for (k, a) in atoms.iter().enumerate() {
        if a.aromatic && aromatic_bonds[k] == 0 {
            return Err(syntax(a.offset, "aromatic atom outside an aromatic ring"));
        }
        let group = a.element.valence_electrons().expect("checked while reading");
        let b = bond_sum[k];
        hydrogens[k] = match a.hydrogens {
            Some(h) => h,
            None if a.aromatic => (a.element.default_valences()[0] - b - 1).max(0),
            None => a
                .element
                .default_valences()
                .iter()
                .find(|&&v| v >= b)
                .map_or(0, |&v| v - b),
        };
        if a.aromatic {
            pi[k] = pi_electrons(group, b, hydrogens[k], a.charge, 0);
        }
        let rest = group - b - hydrogens[k] - a.charge - pi[k];
        if rest < 0 {
            return Err(SmilesError::Valence {
                atom: k,
                offset: a.offset,
                message: format!(
                    "{} uses {} more electrons than its {} valence electrons",
                    a.element, -rest, group
                ),
            });
        }
        lone_pairs[k] = rest / 2;
        radicals[k] = rest % 2;
    }

    let mut g = GraphBuilder::new();
    for a in &atoms {
        g.add_vertex(VertexLabel::Atom(a.element));
    }
    for (b, &(kind, w)) in bonds.iter().zip(&kinds) {
        g.add_edge(b.a, b.b, kind, w).expect("bonds are unique");
    }
    for (k, &h) in hydrogens.iter().enumerate() {
        for _ in 0..h {
            let hv = g.add_vertex(VertexLabel::Atom(Element::H));
            g.add_edge(k, hv, EdgeKind::Plain, 1).unwrap();
        }
    }
    for (k, &lp) in lone_pairs.iter().enumerate() {
        if lp > 0 {
            g.add_edge(k, k, EdgeKind::Plain, lp).unwrap();
        }
    }

    // One Aromatic vertex per connected aromatic system.
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for start in 0..n {
        if !atoms[start].aromatic || comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = ncomp;
        while let Some(x) = stack.pop() {
            for (b, &(kind, _)) in bonds.iter().zip(&kinds) {
                if kind != EdgeKind::Aromatic {
                    continue;
                }
                let y = if b.a == x {
                    b.b
                } else if b.b == x {
                    b.a
                } else {
                    continue;
                };
                if comp[y] == usize::MAX {
                    comp[y] = ncomp;
                    stack.push(y);
                }
            }
        }
        ncomp += 1;
    }
    let arom: Vec<usize> = (0..ncomp).map(|_| g.add_vertex(VertexLabel::Aromatic)).collect();
    for k in 0..n {
        if atoms[k].aromatic {
            g.add_edge(k, arom[comp[k]], EdgeKind::Plain, pi[k]).unwrap();
        }
    }

    if atoms.iter().any(|a| a.charge != 0) {
        let q = g.add_vertex(VertexLabel::Charge);
        for (k, a) in atoms.iter().enumerate() {
            if a.charge != 0 {
                g.add_edge(k, q, EdgeKind::Plain, a.charge).unwrap();
            }
        }
    }
    if radicals.iter().any(|&r| r > 0) {
        let rv = g.add_vertex(VertexLabel::Radical);
        for (k, &r) in radicals.iter().enumerate() {
            if r > 0 {
                g.add_edge(k, rv, EdgeKind::Plain, r).unwrap();
            }
        }
    }
    g.build().map_err(|e| syntax(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(g: &MoleculeGraph, e: Element) -> usize {
        g.labels().iter().filter(|&&l| l == VertexLabel::Atom(e)).count()
    }

    fn assert_valence_invariant(g: &MoleculeGraph) {
        for v in 0..g.vertex_count() {
            if let VertexLabel::Atom(e) = g.label(v) {
                assert_eq!(
                    g.weighted_degree(v).unwrap(),
                    e.valence_electrons().unwrap(),
                    "atom {v} ({e})"
                );
            }
        }
    }

    #[test]
    fn pyruvate() {
        let g = parse_smiles("CC(=O)C(=O)[O-]").unwrap();
        assert_eq!(count(&g, Element::C) + count(&g, Element::O), 6);
        assert_eq!(count(&g, Element::H), 3);
        assert_eq!(g.neighbors(0).iter().filter(|&&v| g.label(v) == VertexLabel::Atom(Element::H)).count(), 3);
        let q = g.charge_vertex().unwrap();
        assert_eq!(g.neighbors(q), &[5]);
        assert_eq!(g.weight(5, q), -1);
        assert_eq!(g.loop_weight(2), 2);
        assert_eq!(g.loop_weight(4), 2);
        assert_eq!(g.loop_weight(5), 3);
        assert_valence_invariant(&g);
    }

    #[test]
    fn water_and_proton() {
        let w = parse_smiles("O").unwrap();
        assert_eq!(count(&w, Element::H), 2);
        assert_eq!(w.loop_weight(0), 2);
        let p = parse_smiles("[H+]").unwrap();
        assert_eq!(p.vertex_count(), 2);
        assert_eq!(p.loop_weight(0), 0);
        assert_eq!(p.weight(0, p.charge_vertex().unwrap()), 1);
    }

    #[test]
    fn benzene_and_heteroaromatics() {
        let b = parse_smiles("c1ccccc1").unwrap();
        assert_eq!(count(&b, Element::H), 6);
        assert_eq!(b.aromatic_vertices().len(), 1);
        let a = b.aromatic_vertices()[0];
        assert_eq!(b.weighted_degree(a).unwrap(), 6);
        assert_valence_invariant(&b);

        let pyridine = parse_smiles("c1ccncc1").unwrap();
        assert_eq!(count(&pyridine, Element::H), 5);
        assert_eq!(pyridine.loop_weight(3), 1);
        assert_valence_invariant(&pyridine);

        let pyrrole = parse_smiles("c1cc[nH]c1").unwrap();
        let a = pyrrole.aromatic_vertices()[0];
        assert_eq!(pyrrole.weighted_degree(a).unwrap(), 6);
        assert_valence_invariant(&pyrrole);

        let furan = parse_smiles("c1ccoc1").unwrap();
        assert_eq!(furan.loop_weight(3), 1);
        assert_valence_invariant(&furan);

        let naphthalene = parse_smiles("c1ccc2ccccc2c1").unwrap();
        assert_eq!(naphthalene.aromatic_vertices().len(), 1);
        assert_valence_invariant(&naphthalene);
    }

    #[test]
    fn valences() {
        for s in [
            "C=C", "C#N", "CC(=O)O", "C[N+](C)(C)C", "OP(=O)(O)O", "CS(=O)(=O)O", "FC(Cl)(Br)I",
            "[NH4+]", "[OH-]", "B(O)(O)O", "C1=CCCCC1", "[CH3]", "[H][H]",
        ] {
            let g = parse_smiles(s).unwrap_or_else(|e| panic!("{s}: {e}"));
            assert_valence_invariant(&g);
        }
        let methyl = parse_smiles("[CH3]").unwrap();
        assert_eq!(methyl.radicals_of(0), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_smiles("C(C"), Err(SmilesError::Syntax { offset: 1, .. })));
        assert!(matches!(parse_smiles("C1CC"), Err(SmilesError::Syntax { offset: 1, .. })));
        assert!(matches!(parse_smiles("C="), Err(SmilesError::Syntax { .. })));
        assert!(matches!(parse_smiles(""), Err(SmilesError::Syntax { .. })));
        assert!(matches!(parse_smiles("CX"), Err(SmilesError::Syntax { offset: 1, .. })));
        assert!(matches!(
            parse_smiles("C[C@H](O)N"),
            Err(SmilesError::Unsupported { offset: 3, .. })
        ));
        assert!(matches!(parse_smiles("[13C]"), Err(SmilesError::Unsupported { .. })));
        assert!(matches!(parse_smiles("C*"), Err(SmilesError::Unsupported { .. })));
        assert!(matches!(parse_smiles("F/C=C/F"), Err(SmilesError::Unsupported { .. })));
        assert!(matches!(parse_smiles("C.C"), Err(SmilesError::Unsupported { .. })));
        assert!(matches!(parse_smiles("[Fe]"), Err(SmilesError::Unsupported { .. })));
        assert!(matches!(
            parse_smiles("[CH5]"),
            Err(SmilesError::Valence { atom: 0, .. })
        ));
        assert!(matches!(parse_smiles("C(C)(C)(C)(C)C"), Err(SmilesError::Valence { .. })));
    }
}
