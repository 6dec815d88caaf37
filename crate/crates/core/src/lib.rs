//! Atom-atom mapping of balanced chemical reactions via alternating cycles.
//!
//! Molecules are modeled as labeled, edge-weighted graphs whose weighted
//! degrees equal the valence-electron counts of their atoms; lone pairs are
//! loops and charges, radicals and aromatic systems are special vertices.
//! An atom-atom map is a label-preserving bijection between the educt and
//! product graphs, and its cost is the total change of edge weights.

pub mod altcyc;
pub mod chemio;
pub mod element;
pub mod ilpgen;
pub mod iso;
pub mod mapping;
pub mod molgraph;
pub mod netcomp;
pub mod synth;
