//! Displacement context-free grammars, generalized Dyck languages and the
//! automata that recognize them.

pub mod dcfg;
pub mod monoids;
pub mod names;
pub mod search;
pub mod terms;
pub mod transducer;
pub mod two_stack;
pub mod valence;
pub mod word;
