//! Classical Processes (CP) and Structural Classical Processes (SCP).
//!
//! CP types processes against linear contexts that are split at every cut
//! and output. SCP keeps contexts structural and recovers linearity with a
//! separate syntactic predicate, `lin(x; P)`. This crate implements both
//! calculi, the translations between them, their reduction relations, and
//! executable checks of the correspondence.

pub mod cli;
pub mod linearity;
pub mod metatheory;
pub mod reduction;
pub mod syntax;
pub mod textio;
pub mod translation;
pub mod typing;
