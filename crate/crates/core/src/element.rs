//! Chemical elements and the valence-electron table used to derive lone pairs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

const SYMBOLS: [&str; 118] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl",
    "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As",
    "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In",
    "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb",
    "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl",
    "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk",
    "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh",
    "Fl", "Mc", "Lv", "Ts", "Og",
];

/// A chemical element, stored by atomic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u8);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown element symbol `{0}`")]
pub struct UnknownElement(pub String);

impl Element {
    pub const H: Element = Element(1);
    pub const B: Element = Element(5);
    pub const C: Element = Element(6);
    pub const N: Element = Element(7);
    pub const O: Element = Element(8);
    pub const F: Element = Element(9);
    pub const P: Element = Element(15);
    pub const S: Element = Element(16);
    pub const CL: Element = Element(17);
    pub const BR: Element = Element(35);
    pub const I: Element = Element(53);

    pub fn from_atomic_number(z: u8) -> Option<Element> {
        (1..=118).contains(&z).then_some(Element(z))
    }

    pub fn atomic_number(self) -> u8 {
        self.0
    }

    pub fn symbol(self) -> &'static str {
        SYMBOLS[self.0 as usize - 1]
    }

    /// Number of valence electrons an atom of this element owns when neutral.
    ///
    /// Only the elements the chemistry front end understands have an entry;
    /// hydrogen counts its single electron (its one bond gives weighted
    /// degree 1, no loop).
    pub fn valence_electrons(self) -> Option<i32> {
        match self.0 {
            1 => Some(1),
            5 => Some(3),
            6 => Some(4),
            7 | 15 => Some(5),
            8 | 16 => Some(6),
            9 | 17 | 35 | 53 => Some(7),
            _ => None,
        }
    }

    /// Standard SMILES valences, smallest first, used for implicit hydrogens.
    pub fn default_valences(self) -> &'static [i32] {
        match self.0 {
            1 => &[1],
            5 => &[3],
            6 => &[4],
            7 => &[3, 5],
            8 => &[2],
            15 => &[3, 5],
            16 => &[2, 4, 6],
            9 | 17 | 35 | 53 => &[1],
            _ => &[],
        }
    }
}

impl FromStr for Element {
    type Err = UnknownElement;

    /// Accepts any capitalization and normalizes to the canonical symbol.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut canon = String::with_capacity(s.len());
        for (k, ch) in s.chars().enumerate() {
            if k == 0 {
                canon.extend(ch.to_uppercase());
            } else {
                canon.extend(ch.to_lowercase());
            }
        }
        SYMBOLS
            .iter()
            .position(|&sym| sym == canon)
            .map(|idx| Element(idx as u8 + 1))
            .ok_or_else(|| UnknownElement(s.to_string()))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_normalize_case() {
        assert_eq!("cl".parse::<Element>().unwrap(), Element::CL);
        assert_eq!("BR".parse::<Element>().unwrap(), Element::BR);
        assert_eq!("Og".parse::<Element>().unwrap().atomic_number(), 118);
        assert!("Xx".parse::<Element>().is_err());
    }

    #[test]
    fn valence_table() {
        assert_eq!(Element::O.valence_electrons(), Some(6));
        assert_eq!(Element::H.valence_electrons(), Some(1));
        assert_eq!(Element::from_atomic_number(26).unwrap().valence_electrons(), None);
    }
}
