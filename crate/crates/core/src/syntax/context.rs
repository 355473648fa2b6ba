use std::collections::BTreeSet;

use super::{Name, SessionType};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("name {0} is already bound in the context")]
    Duplicate(Name),
}

/// An ordered assignment of session types to channel names.
///
/// Order only matters for printing; lookups are by name and two contexts
/// with the same bindings describe the same judgment (see
/// [`TypingContext::same_bindings`]).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct TypingContext {
    entries: Vec<(Name, SessionType)>,
}

impl TypingContext {
    pub fn new() -> TypingContext {
        TypingContext::default()
    }

    pub fn from_entries(
        entries: impl IntoIterator<Item = (Name, SessionType)>,
    ) -> Result<TypingContext, ContextError> {
        let mut ctx = TypingContext::new();
        for (n, t) in entries {
            ctx.push(n, t)?;
        }
        Ok(ctx)
    }

    pub fn push(&mut self, name: Name, ty: SessionType) -> Result<(), ContextError> {
        if self.contains(&name) {
            return Err(ContextError::Duplicate(name));
        }
        self.entries.push((name, ty));
        Ok(())
    }

    /// Returns a copy extended with `name: ty`.
    pub fn extend(&self, name: &Name, ty: &SessionType) -> Result<TypingContext, ContextError> {
        let mut ctx = self.clone();
        ctx.push(name.clone(), ty.clone())?;
        Ok(ctx)
    }

    pub fn lookup(&self, name: &Name) -> Option<&SessionType> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.lookup(name).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, SessionType)> {
        self.entries.iter()
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.entries.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn without(&self, name: &Name) -> TypingContext {
        TypingContext {
            entries: self
                .entries
                .iter()
                .filter(|(n, _)| n != name)
                .cloned()
                .collect(),
        }
    }

    /// Keeps only the bindings whose names are in `keep`, in order.
    pub fn restrict(&self, keep: &BTreeSet<Name>) -> TypingContext {
        TypingContext {
            entries: self
                .entries
                .iter()
                .filter(|(n, _)| keep.contains(n))
                .cloned()
                .collect(),
        }
    }

    /// Replaces the name `from` by `to`, keeping its type and position.
    pub fn rename(&self, from: &Name, to: &Name) -> TypingContext {
        TypingContext {
            entries: self
                .entries
                .iter()
                .map(|(n, t)| (if n == from { to.clone() } else { n.clone() }, t.clone()))
                .collect(),
        }
    }

    /// Replaces the type bound to `name`, keeping its position.
    pub fn retype(&self, name: &Name, ty: &SessionType) -> TypingContext {
        TypingContext {
            entries: self
                .entries
                .iter()
                .map(|(n, t)| (n.clone(), if n == name { ty.clone() } else { t.clone() }))
                .collect(),
        }
    }

    /// Equality up to exchange.
    pub fn same_bindings(&self, other: &TypingContext) -> bool {
        self.len() == other.len() && self.entries.iter().all(|(n, t)| other.lookup(n) == Some(t))
    }

    /// Disjoint union; fails on a shared name.
    pub fn union(&self, other: &TypingContext) -> Result<TypingContext, ContextError> {
        let mut ctx = self.clone();
        for (n, t) in other.iter() {
            ctx.push(n.clone(), t.clone())?;
        }
        Ok(ctx)
    }
}
