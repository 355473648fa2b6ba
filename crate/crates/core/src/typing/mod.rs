//! Derivation-producing type checkers.
//!
//! CP judgments `Δ ⊢ P` use a linear context that is split at cuts and
//! outputs. SCP judgments `Γ ⊢ P` use a structural context that only grows
//! towards the leaves; linearity is delegated to embedded `lin` derivations.

mod cp;
mod scp;

use std::fmt;

use thiserror::Error;

use crate::linearity::LinDerivation;
use crate::syntax::{alpha_eq, CpProcess, Name, ScpProcess, TypingContext};

pub use cp::{cp_check, cp_diagnose, validate_cp};
pub use scp::{scp_check, scp_diagnose, strengthen, validate_scp, weaken};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CpRule {
    Id,
    Cut,
    Tensor,
    Par,
    Plus1,
    Plus2,
    With,
    One,
    Bot,
}

impl CpRule {
    pub fn name(self) -> &'static str {
        match self {
            CpRule::Id => "Cid",
            CpRule::Cut => "Ccut",
            CpRule::Tensor => "C⊗",
            CpRule::Par => "C⅋",
            CpRule::Plus1 => "C⊕₁",
            CpRule::Plus2 => "C⊕₂",
            CpRule::With => "C&",
            CpRule::One => "C1",
            CpRule::Bot => "C⊥",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ScpRule {
    Id,
    Cut,
    Tensor,
    Par,
    Plus1,
    Plus2,
    With,
    One,
    Bot,
}

impl ScpRule {
    pub fn name(self) -> &'static str {
        match self {
            ScpRule::Id => "Sid",
            ScpRule::Cut => "Scut",
            ScpRule::Tensor => "S⊗",
            ScpRule::Par => "S⅋",
            ScpRule::Plus1 => "S⊕₁",
            ScpRule::Plus2 => "S⊕₂",
            ScpRule::With => "S&",
            ScpRule::One => "S1",
            ScpRule::Bot => "S⊥",
        }
    }

    /// Number of embedded linearity premises.
    pub fn lin_arity(self) -> usize {
        match self {
            ScpRule::Cut => 2,
            ScpRule::Tensor | ScpRule::Par => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for CpRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for ScpRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CpDerivation {
    pub rule: CpRule,
    pub context: TypingContext,
    pub process: CpProcess,
    pub premises: Vec<CpDerivation>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ScpDerivation {
    pub rule: ScpRule,
    pub context: TypingContext,
    pub process: ScpProcess,
    pub premises: Vec<ScpDerivation>,
    pub lin_premises: Vec<LinDerivation>,
}

impl CpDerivation {
    pub fn rules(&self) -> Vec<CpRule> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(CpDerivation::size).sum::<usize>()
    }

    /// Same rule tree, with every judgment equal up to exchange and α.
    pub fn same_as(&self, other: &CpDerivation) -> bool {
        self.rule == other.rule
            && self.context.same_bindings(&other.context)
            && alpha_eq(&self.process, &other.process)
            && self.premises.len() == other.premises.len()
            && self
                .premises
                .iter()
                .zip(&other.premises)
                .all(|(a, b)| a.same_as(b))
    }
}

impl ScpDerivation {
    pub fn rules(&self) -> Vec<ScpRule> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ScpDerivation::size).sum::<usize>()
    }

    /// Same rule tree, with every judgment equal up to exchange and α.
    /// Embedded linearity derivations are compared by their rule sequence.
    pub fn same_as(&self, other: &ScpDerivation) -> bool {
        self.rule == other.rule
            && self.context.same_bindings(&other.context)
            && alpha_eq(&self.process, &other.process)
            && self.premises.len() == other.premises.len()
            && self.lin_premises.len() == other.lin_premises.len()
            && self
                .lin_premises
                .iter()
                .zip(&other.lin_premises)
                .all(|(a, b)| a.rules() == b.rules())
            && self
                .premises
                .iter()
                .zip(&other.premises)
                .all(|(a, b)| a.same_as(b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("{0} is already bound in the context")]
    AlreadyBound(Name),
    #[error("{0} is not bound in the context")]
    NotBound(Name),
    #[error("{0} occurs free in the process")]
    OccursFree(Name),
    #[error("{0} clashes with a binder of the process")]
    ClashesWithBinder(Name),
    #[error("the derivation is not valid")]
    Invalid,
    #[error("linearity witnesses do not match the free names: {0}")]
    WitnessMismatch(String),
}

/// Where a checker gave up: the innermost judgment without a derivation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{reason} at {judgment}")]
pub struct Failure {
    pub judgment: String,
    pub reason: String,
}

impl Failure {
    fn new<P: fmt::Display>(ctx: &TypingContext, p: &P, reason: &str) -> Failure {
        Failure {
            judgment: crate::textio::judgment(ctx, p),
            reason: reason.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::{parse_cp_judgment, parse_scp_judgment};

    #[test]
    fn failures_point_at_the_innermost_judgment() {
        let (c, p) = parse_cp_judgment("x:1, y:bot |- wait y. wait y. close x").unwrap();
        let f = cp_diagnose(&c, &p).unwrap_err();
        assert_eq!(f.judgment, "x:1 |- wait y. close x");
        assert_eq!(f.to_string(), "no rule applies at x:1 |- wait y. close x");

        let (c, p) =
            parse_scp_judgment("z:1 |- nu x:1 (close x | wait x. wait x. close z)").unwrap();
        let f = scp_diagnose(&c, &p).unwrap_err();
        assert!(f.reason.starts_with("no linearity derivation for x"), "{f}");
        assert!(f.judgment.starts_with("z:1 |- nu x:1"), "{f}");

        let (c, p) = parse_scp_judgment("x:1 |- wait x. close x").unwrap();
        assert_eq!(
            scp_diagnose(&c, &p).unwrap_err().judgment,
            "x:1 |- wait x. close x"
        );
    }
}
