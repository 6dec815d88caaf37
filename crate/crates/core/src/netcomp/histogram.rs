use std::collections::BTreeMap;
use std::fmt::Write;
use std::ops::Add;

use serde::Serialize;

use crate::molgraph::{MoleculeGraph, VertexLabel};

/// Atom counts by element symbol, total formal charge and radical count.
///
/// The derived order compares the `(symbol, count)` sequences
/// lexicographically, then charge, then radicals.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AtomHistogram {
    pub counts: BTreeMap<String, u32>,
    pub charge: i32,
    pub radicals: i32,
}

impl AtomHistogram {
    pub fn is_zero(&self) -> bool {
        self.counts.is_empty() && self.charge == 0 && self.radicals == 0
    }

    /// Hill-order sum formula (C, H, then alphabetical; alphabetical
    /// throughout without carbon), with a charge suffix such as `-` or `+2`.
    pub fn formula(&self) -> String {
        let mut order: Vec<(&String, &u32)> = self.counts.iter().collect();
        if self.counts.contains_key("C") {
            let rank = |s: &str| match s {
                "C" => 0,
                "H" => 1,
                _ => 2,
            };
            order.sort_by_key(|&(s, _)| (rank(s), s.clone()));
        }
        let mut out = String::new();
        for (s, &c) in order {
            out.push_str(s);
            if c > 1 {
                write!(out, "{c}").unwrap();
            }
        }
        match self.charge {
            0 => {}
            1 => out.push('+'),
            -1 => out.push('-'),
            q if q > 0 => write!(out, "+{q}").unwrap(),
            q => write!(out, "-{}", -q).unwrap(),
        }
        for _ in 0..self.radicals {
            out.push('.');
        }
        out
    }
}

impl Add<&AtomHistogram> for AtomHistogram {
    type Output = AtomHistogram;

    fn add(mut self, other: &AtomHistogram) -> AtomHistogram {
        for (s, &c) in &other.counts {
            *self.counts.entry(s.clone()).or_insert(0) += c;
        }
        self.charge += other.charge;
        self.radicals += other.radicals;
        self
    }
}

pub fn histogram(g: &MoleculeGraph) -> AtomHistogram {
    let mut h = AtomHistogram::default();
    for v in 0..g.vertex_count() {
        if let VertexLabel::Atom(e) = g.label(v) {
            *h.counts.entry(e.symbol().to_string()).or_insert(0) += 1;
            h.charge += g.charge_of(v);
            h.radicals += g.radicals_of(v);
        }
    }
    h
}
