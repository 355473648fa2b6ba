//! Names, session types, contexts and the two process languages.

pub mod binding;
mod context;
mod name;
mod process;
mod types;

pub use binding::{alpha_eq, canonical, free_names, Canon, Tag, Term};
pub use context::{ContextError, TypingContext};
pub use name::{fresh, nm, Name};
pub use process::{CpProcess, ProcessExt, ScpProcess};
pub use types::{dual, types_up_to_depth, SessionType};

/// Which of the two process languages a term or file belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Calculus {
    Cp,
    Scp,
}
