//! Small-step reduction for both calculi.
//!
//! Reduction happens only at cuts: a principal step or commuting conversion
//! at the root cut, or a step inside either side of it. Structural
//! equivalence is applied on demand and recorded in `β≡` steps.

mod equiv;
mod rules;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{canonical, Name, SessionType, Term};

pub use equiv::{
    assoc, assoc_reverse, comm, equiv_check, equivalents, replay_equiv, EquivDerivation, EquivRule,
};

/// A process calculus with cuts, as seen by the reduction engine.
pub trait Reducible: Term {
    fn as_cut(&self) -> Option<(&Name, &SessionType, &Self, &Self)>;
    fn cut(x: Name, a: SessionType, l: Self, r: Self) -> Self;
    /// Principal communication at `nu x:a (l | r)`, sender on the left.
    fn principal_steps(x: &Name, a: &SessionType, l: &Self, r: &Self) -> Vec<(StepRule, Self)>;
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum StepRule {
    BetaFwd,
    BetaOneBot,
    BetaTensorPar,
    BetaInl,
    BetaInr,
    KappaOut1,
    KappaOut2,
    KappaInp,
    KappaInl,
    KappaInr,
    KappaCase,
    KappaWait,
    BetaCut1,
    BetaCut2,
    BetaEquiv,
}

impl StepRule {
    pub fn name(self) -> &'static str {
        use StepRule::*;
        match self {
            BetaFwd => "βfwd",
            BetaOneBot => "β1⊥",
            BetaTensorPar => "β⊗⅋",
            BetaInl => "βinl",
            BetaInr => "βinr",
            KappaOut1 => "κ_out1",
            KappaOut2 => "κ_out2",
            KappaInp => "κ_inp",
            KappaInl => "κ_inl",
            KappaInr => "κ_inr",
            KappaCase => "κ_case",
            KappaWait => "κ_wait",
            BetaCut1 => "βcut1",
            BetaCut2 => "βcut2",
            BetaEquiv => "β≡",
        }
    }

    /// Preference used by the principal-first strategy: lower is preferred.
    pub fn rank(self) -> u8 {
        use StepRule::*;
        match self {
            BetaFwd | BetaOneBot | BetaTensorPar | BetaInl | BetaInr => 0,
            KappaOut1 | KappaOut2 | KappaInp | KappaInl | KappaInr | KappaCase | KappaWait => 1,
            BetaCut1 | BetaCut2 => 2,
            BetaEquiv => 3,
        }
    }

    pub fn is_principal(self) -> bool {
        self.rank() == 0
    }
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One reduction `source → target`.
///
/// `βcut1`/`βcut2` and `β≡` carry the step they wrap in `inner`; `β≡` also
/// carries the equivalences applied before and after it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionStep<P> {
    pub rule: StepRule,
    pub source: P,
    pub target: P,
    /// Path from the root to the cut where the base rule fires.
    pub position: Vec<Side>,
    pub equiv_pre: Option<EquivDerivation<P>>,
    pub equiv_post: Option<EquivDerivation<P>>,
    pub inner: Option<Box<ReductionStep<P>>>,
}

impl<P: Reducible> ReductionStep<P> {
    fn base(rule: StepRule, source: &P, target: P) -> Self {
        ReductionStep {
            rule,
            source: source.clone(),
            target,
            position: vec![],
            equiv_pre: None,
            equiv_post: None,
            inner: None,
        }
    }

    fn under(side: Side, source: &P, inner: ReductionStep<P>) -> Self {
        let (x, a, l, r) = source.as_cut().expect("congruence only under cuts");
        let (rule, target) = match side {
            Side::Left => (
                StepRule::BetaCut1,
                P::cut(x.clone(), a.clone(), inner.target.clone(), r.clone()),
            ),
            Side::Right => (
                StepRule::BetaCut2,
                P::cut(x.clone(), a.clone(), l.clone(), inner.target.clone()),
            ),
        };
        let mut position = vec![side];
        position.extend(inner.position.iter().copied());
        ReductionStep {
            rule,
            source: source.clone(),
            target,
            position,
            equiv_pre: None,
            equiv_post: None,
            inner: Some(Box::new(inner)),
        }
    }

    fn modulo(
        source: &P,
        pre: Option<EquivDerivation<P>>,
        inner: ReductionStep<P>,
        post: Option<(P, EquivDerivation<P>)>,
    ) -> Self {
        let (target, post) = match post {
            Some((t, d)) => (t, Some(d)),
            None => (inner.target.clone(), None),
        };
        ReductionStep {
            rule: StepRule::BetaEquiv,
            source: source.clone(),
            target,
            position: inner.position.clone(),
            equiv_pre: pre,
            equiv_post: post,
            inner: Some(Box::new(inner)),
        }
    }

    /// The innermost non-congruence rule.
    pub fn base_rule(&self) -> StepRule {
        match &self.inner {
            Some(s) => s.base_rule(),
            None => self.rule,
        }
    }

    /// Re-applies the recorded rule to `source`.
    pub fn replay(&self) -> Option<P> {
        apply(self, &self.source)
    }

    /// `replay` reproduces `target` up to α.
    pub fn is_consistent(&self) -> bool {
        self.replay()
            .is_some_and(|t| crate::syntax::alpha_eq(&t, &self.target))
    }
}

fn apply<P: Reducible>(step: &ReductionStep<P>, src: &P) -> Option<P> {
    match step.rule {
        StepRule::BetaCut1 | StepRule::BetaCut2 => {
            let (x, a, l, r) = src.as_cut()?;
            let inner = step.inner.as_deref()?;
            Some(if step.rule == StepRule::BetaCut1 {
                P::cut(x.clone(), a.clone(), apply(inner, l)?, r.clone())
            } else {
                P::cut(x.clone(), a.clone(), l.clone(), apply(inner, r)?)
            })
        }
        StepRule::BetaEquiv => {
            let q = match &step.equiv_pre {
                Some(d) => replay_equiv(d, src)?,
                None => src.clone(),
            };
            let t = apply(step.inner.as_deref()?, &q)?;
            match &step.equiv_post {
                Some(d) => replay_equiv(d, &t),
                None => Some(t),
            }
        }
        rule => {
            let (x, a, l, r) = src.as_cut()?;
            rules::base_steps(x, a, l, r)
                .into_iter()
                .find(|(r, _)| *r == rule)
                .map(|(_, t)| t)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EnumOptions {
    pub use_equiv_closure: bool,
    pub equiv_depth: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            use_equiv_closure: false,
            equiv_depth: 2,
        }
    }
}

impl EnumOptions {
    pub fn with_closure(equiv_depth: usize) -> Self {
        EnumOptions {
            use_equiv_closure: true,
            equiv_depth,
        }
    }
}

/// Steps available without structural equivalence, plus the mirrored
/// orientation of the root cut.
fn direct<P: Reducible>(p: &P, opts: EnumOptions) -> Vec<ReductionStep<P>> {
    let Some((x, a, l, r)) = p.as_cut() else {
        return vec![];
    };
    let mut out: Vec<ReductionStep<P>> = rules::base_steps(x, a, l, r)
        .into_iter()
        .map(|(rule, t)| ReductionStep::base(rule, p, t))
        .collect();
    let flipped = comm(p).expect("a cut");
    let flip = EquivDerivation {
        rule: EquivRule::Comm,
        sides: (p.clone(), flipped.clone()),
        premises: vec![],
    };
    for (rule, t) in rules::base_steps(x, &a.dual(), r, l) {
        let inner = ReductionStep::base(rule, &flipped, t);
        out.push(ReductionStep::modulo(p, Some(flip.clone()), inner, None));
    }
    for s in enumerate_steps(l, opts) {
        out.push(ReductionStep::under(Side::Left, p, s));
    }
    for s in enumerate_steps(r, opts) {
        out.push(ReductionStep::under(Side::Right, p, s));
    }
    out
}

/// Every step from `p`, sorted by position and then by rule preference.
///
/// With `use_equiv_closure`, steps from processes reachable by at most
/// `equiv_depth` root rewrites are added, and so are targets reachable from
/// a step's target within the remaining rewrite budget. Such steps are kept
/// only when their target is new up to α.
pub fn enumerate_steps<P: Reducible>(p: &P, opts: EnumOptions) -> Vec<ReductionStep<P>> {
    let mut out = direct(p, opts);
    if opts.use_equiv_closure && p.as_cut().is_some() {
        let mut seen: HashSet<_> = out.iter().map(|s| canonical(&s.target)).collect();
        let mut closed = Vec::new();
        let mut starts = vec![(p.clone(), None, opts.equiv_depth)];
        for (q, d) in equivalents(p, opts.equiv_depth) {
            let left = opts.equiv_depth - d.rewrites();
            starts.push((q, Some(d), left));
        }
        for (q, pre, budget) in starts {
            let steps = if pre.is_some() {
                direct(&q, EnumOptions::default())
            } else {
                out.clone()
            };
            for s in steps {
                if pre.is_some() && seen.insert(canonical(&s.target)) {
                    closed.push(ReductionStep::modulo(p, pre.clone(), s.clone(), None));
                }
                for (t, post) in equivalents(&s.target, budget) {
                    if seen.insert(canonical(&t)) {
                        closed.push(ReductionStep::modulo(
                            p,
                            pre.clone(),
                            s.clone(),
                            Some((t, post)),
                        ));
                    }
                }
            }
        }
        out.extend(closed);
    }
    out.sort_by(|a, b| (&a.position, a.rule.rank()).cmp(&(&b.position, b.rule.rank())));
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    /// The first step in enumeration order.
    First,
    /// β before κ before βcut before β≡, then by position.
    PrincipalFirst,
    ByIndex(usize),
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum StepError {
    #[error("redex index {index} out of range ({available} available)")]
    IndexOutOfRange { index: usize, available: usize },
}

/// Picks one step according to `strategy`; `None` when `p` is stuck.
pub fn step<P: Reducible>(
    p: &P,
    strategy: Strategy,
    opts: EnumOptions,
) -> Result<Option<ReductionStep<P>>, StepError> {
    let mut steps = enumerate_steps(p, opts);
    match strategy {
        Strategy::First => Ok(steps.into_iter().next()),
        Strategy::PrincipalFirst => {
            let best = (0..steps.len()).min_by_key(|&i| {
                let s = &steps[i];
                (s.base_rank(), s.rule.rank(), s.position.clone())
            });
            Ok(best.map(|i| steps.swap_remove(i)))
        }
        Strategy::ByIndex(index) => {
            let available = steps.len();
            if index >= available {
                return Err(StepError::IndexOutOfRange { index, available });
            }
            Ok(Some(steps.swap_remove(index)))
        }
    }
}

impl<P: Reducible> ReductionStep<P> {
    /// Rank of the rule doing the work, looking through `βcut`.
    fn base_rank(&self) -> u8 {
        match (self.rule, &self.inner) {
            (StepRule::BetaCut1 | StepRule::BetaCut2, Some(s)) => s.base_rank(),
            (r, _) => r.rank(),
        }
    }
}

/// Applies `step` repeatedly, stopping when stuck or after `max_steps`.
pub fn trace<P: Reducible>(
    p: &P,
    strategy: Strategy,
    opts: EnumOptions,
    max_steps: usize,
) -> Result<Vec<ReductionStep<P>>, StepError> {
    let mut out = Vec::new();
    let mut cur = p.clone();
    while out.len() < max_steps {
        match step(&cur, strategy, opts)? {
            Some(s) => {
                cur = s.target.clone();
                out.push(s);
            }
            None => break,
        }
    }
    Ok(out)
}
