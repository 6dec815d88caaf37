//! Atom-atom maps between the two sides of a balanced reaction: cost,
//! transition states and their alternating-cycle decomposition, equivalence
//! of maps, completion of partial maps, and an exhaustive reference solver.

mod completion;
mod equivalence;
mod instance;
mod oracle;
mod transition;

pub use completion::{complete_partial, CompletionError};
pub use equivalence::{equivalence_graph, equivalent, same_classes, EquivalenceClasses, EquivalenceGraph};
pub use instance::{InstanceError, Origin, ReactionInstance};
pub use oracle::{brute_force_min_cost, OracleResult, TooLarge, DEFAULT_ORACLE_LIMIT};
pub use transition::{
    cost, decompose_cycles, transition_state, AtomMap, Cycle, CycleDecomposition, FluxError,
    MapError, TransitionState,
};

#[cfg(test)]
mod tests;
