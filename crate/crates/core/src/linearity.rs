//! The linearity predicate `lin(x; P)` on SCP processes.
//!
//! A derivation exists iff `x` and each of its continuation channels are used
//! exactly once along every path through `P`. Side conditions of the form
//! "`x` not free in a subterm" are evaluated per scope, so a binder that
//! shadows `x` makes `x` absent from that scope. This is equivalent to
//! renaming binders apart before checking, and leaves the caller's binder
//! names untouched in the returned derivation.

use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::binding::{is_free_in, Scope};
use crate::syntax::{Name, ScpProcess, Tag, Term, TypingContext};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum LinRule {
    Lfwd1,
    Lfwd2,
    Lclose,
    Lwait,
    Lout,
    Linp,
    Linl,
    Linr,
    Lcase,
    Lwait2,
    Lout2,
    Lout3,
    Linp2,
    Linl2,
    Linr2,
    Lcase2,
    Lpcomp1,
    Lpcomp2,
}

impl LinRule {
    pub const ALL: [LinRule; 18] = [
        LinRule::Lfwd1,
        LinRule::Lfwd2,
        LinRule::Lclose,
        LinRule::Lwait,
        LinRule::Lout,
        LinRule::Linp,
        LinRule::Linl,
        LinRule::Linr,
        LinRule::Lcase,
        LinRule::Lwait2,
        LinRule::Lout2,
        LinRule::Lout3,
        LinRule::Linp2,
        LinRule::Linl2,
        LinRule::Linr2,
        LinRule::Lcase2,
        LinRule::Lpcomp1,
        LinRule::Lpcomp2,
    ];

    pub fn name(self) -> &'static str {
        use LinRule::*;
        match self {
            Lfwd1 => "Lfwd1",
            Lfwd2 => "Lfwd2",
            Lclose => "Lclose",
            Lwait => "Lwait",
            Lout => "Lout",
            Linp => "Linp",
            Linl => "Linl",
            Linr => "Linr",
            Lcase => "Lcase",
            Lwait2 => "Lwait2",
            Lout2 => "Lout2",
            Lout3 => "Lout3",
            Linp2 => "Linp2",
            Linl2 => "Linl2",
            Linr2 => "Linr2",
            Lcase2 => "Lcase2",
            Lpcomp1 => "Lpcomp1",
            Lpcomp2 => "Lpcomp2",
        }
    }

    pub fn arity(self) -> usize {
        use LinRule::*;
        match self {
            Lfwd1 | Lfwd2 | Lclose | Lwait => 0,
            Lcase | Lcase2 => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for LinRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A derivation of `lin(subject; process)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinDerivation {
    pub rule: LinRule,
    pub subject: Name,
    pub process: ScpProcess,
    pub premises: Vec<LinDerivation>,
}

impl LinDerivation {
    /// Rule names in pre-order.
    pub fn rules(&self) -> Vec<LinRule> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(LinDerivation::size).sum::<usize>()
    }
}

/// Witnesses for every name of a context.
pub type LinWitnesses = BTreeMap<Name, LinDerivation>;

fn free_in_scope(x: &Name, s: &Scope<'_, ScpProcess>) -> bool {
    !s.binders.contains(&x) && is_free_in(x, s.body)
}

fn node(rule: LinRule, x: &Name, p: &ScpProcess, premises: Vec<LinDerivation>) -> LinDerivation {
    LinDerivation {
        rule,
        subject: x.clone(),
        process: p.clone(),
        premises,
    }
}

/// Decides `lin(x; p)`, returning its unique derivation.
pub fn lin_check(x: &Name, p: &ScpProcess) -> Option<LinDerivation> {
    use LinRule::*;
    let v = p.view();
    let principal = match v.tag {
        Tag::Fwd => {
            let (a, b) = (v.names[0], v.names[1]);
            return if a == x && b != x {
                Some(node(Lfwd1, x, p, vec![]))
            } else if b == x && a != x {
                Some(node(Lfwd2, x, p, vec![]))
            } else {
                None
            };
        }
        Tag::Cut => None,
        _ => Some(v.names[0]),
    };
    let s = &v.scopes;
    if principal == Some(x) {
        // Principal rules: x itself must not reappear, the continuation must
        // be linear in its scope.
        if s.iter().any(|sc| free_in_scope(x, sc)) {
            return None;
        }
        let cont = |i: usize| lin_check(s[i].binders[0], s[i].body);
        return match v.tag {
            Tag::Close => Some(node(Lclose, x, p, vec![])),
            Tag::Wait => Some(node(Lwait, x, p, vec![])),
            Tag::Out => Some(node(Lout, x, p, vec![cont(1)?])),
            Tag::Inp => Some(node(Linp, x, p, vec![cont(0)?])),
            Tag::Inl => Some(node(Linl, x, p, vec![cont(0)?])),
            Tag::Inr => Some(node(Linr, x, p, vec![cont(0)?])),
            Tag::Case => Some(node(Lcase, x, p, vec![cont(0)?, cont(1)?])),
            Tag::Fwd | Tag::Cut => unreachable!(),
        };
    }
    // Congruence rules: x must be free in the scope recursed into, which
    // also rules out a binder equal to x.
    let inner = |i: usize| {
        if free_in_scope(x, &s[i]) {
            lin_check(x, s[i].body)
        } else {
            None
        }
    };
    match v.tag {
        Tag::Close => None,
        Tag::Wait => Some(node(Lwait2, x, p, vec![inner(0)?])),
        Tag::Inp => Some(node(Linp2, x, p, vec![inner(0)?])),
        Tag::Inl => Some(node(Linl2, x, p, vec![inner(0)?])),
        Tag::Inr => Some(node(Linr2, x, p, vec![inner(0)?])),
        Tag::Case => Some(node(Lcase2, x, p, vec![inner(0)?, inner(1)?])),
        Tag::Out | Tag::Cut => {
            let (first, second) = match v.tag {
                Tag::Out => (Lout2, Lout3),
                _ => (Lpcomp1, Lpcomp2),
            };
            if free_in_scope(x, &s[1]) {
                if free_in_scope(x, &s[0]) {
                    return None;
                }
                Some(node(second, x, p, vec![inner(1)?]))
            } else {
                Some(node(first, x, p, vec![inner(0)?]))
            }
        }
        Tag::Fwd => unreachable!(),
    }
}

/// `lin(Δ; P)`: a witness for every name in `delta`, or `None` if any fails.
pub fn lin_all(delta: &TypingContext, p: &ScpProcess) -> Option<LinWitnesses> {
    delta
        .iter()
        .map(|(n, _)| lin_check(n, p).map(|d| (n.clone(), d)))
        .collect()
}

/// Re-checks every node of `d` as an instance of its rule.
pub fn validate_lin(d: &LinDerivation) -> bool {
    valid_node(d) && d.premises.iter().all(validate_lin)
}

fn valid_node(d: &LinDerivation) -> bool {
    use LinRule::*;
    if d.premises.len() != d.rule.arity() {
        return false;
    }
    let x = &d.subject;
    let v = d.process.view();
    let s = &v.scopes;
    let expected_tag = match d.rule {
        Lfwd1 | Lfwd2 => Tag::Fwd,
        Lclose => Tag::Close,
        Lwait | Lwait2 => Tag::Wait,
        Lout | Lout2 | Lout3 => Tag::Out,
        Linp | Linp2 => Tag::Inp,
        Linl | Linl2 => Tag::Inl,
        Linr | Linr2 => Tag::Inr,
        Lcase | Lcase2 => Tag::Case,
        Lpcomp1 | Lpcomp2 => Tag::Cut,
    };
    if v.tag != expected_tag {
        return false;
    }
    // premise i must be about scope `scope` with subject `subject`
    let premise_is = |i: usize, scope: usize, subject: &Name| {
        let pr = &d.premises[i];
        pr.subject == *subject && pr.process == *s[scope].body
    };
    let principal_is_x = v.names.first() == Some(&x);
    let avoids_x = || s.iter().all(|sc| !free_in_scope(x, sc));
    match d.rule {
        Lfwd1 => v.names[0] == x && v.names[1] != x,
        Lfwd2 => v.names[1] == x && v.names[0] != x,
        Lclose | Lwait => principal_is_x && avoids_x(),
        Lout => principal_is_x && avoids_x() && premise_is(0, 1, s[1].binders[0]),
        Linp | Linl | Linr => principal_is_x && avoids_x() && premise_is(0, 0, s[0].binders[0]),
        Lcase => {
            principal_is_x
                && avoids_x()
                && premise_is(0, 0, s[0].binders[0])
                && premise_is(1, 1, s[1].binders[0])
        }
        Lwait2 | Linp2 | Linl2 | Linr2 => {
            !principal_is_x && !s[0].binders.contains(&x) && premise_is(0, 0, x)
        }
        Lcase2 => {
            !principal_is_x
                && s.iter().all(|sc| !sc.binders.contains(&x))
                && premise_is(0, 0, x)
                && premise_is(1, 1, x)
        }
        Lout2 | Lpcomp1 => {
            !principal_is_x
                && !s[0].binders.contains(&x)
                && !free_in_scope(x, &s[1])
                && premise_is(0, 0, x)
        }
        Lout3 | Lpcomp2 => {
            !principal_is_x
                && !s[1].binders.contains(&x)
                && !free_in_scope(x, &s[0])
                && premise_is(0, 1, x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{nm, SessionType};
    use LinRule::*;

    fn close(x: &str) -> ScpProcess {
        ScpProcess::close(nm(x))
    }

    fn wait(x: &str, p: ScpProcess) -> ScpProcess {
        ScpProcess::wait(nm(x), p)
    }

    fn fwd(x: &str, y: &str) -> ScpProcess {
        ScpProcess::fwd(nm(x), nm(y))
    }

    #[test]
    fn forwarder_axiom() {
        let d = lin_check(&nm("x"), &fwd("x", "y")).unwrap();
        assert_eq!(d.rule, Lfwd1);
        assert!(validate_lin(&d));
        assert_eq!(lin_check(&nm("y"), &fwd("x", "y")).unwrap().rule, Lfwd2);
        assert!(lin_check(&nm("x"), &fwd("x", "x")).is_none());
    }

    #[test]
    fn repeated_wait_is_not_linear() {
        let p = wait("y", wait("y", close("x")));
        assert!(lin_check(&nm("y"), &p).is_none());
        let d = lin_check(&nm("x"), &p).unwrap();
        assert_eq!(d.rules(), vec![Lwait2, Lwait2, Lclose]);
    }

    #[test]
    fn congruence_through_cut() {
        let p = ScpProcess::cut(
            nm("x"),
            SessionType::One,
            close("x"),
            wait("x", fwd("z", "q")),
        );
        let d = lin_check(&nm("z"), &p).unwrap();
        assert_eq!(d.rules(), vec![Lpcomp2, Lwait2, Lfwd1]);
        assert!(validate_lin(&d));
    }

    #[test]
    fn lin_all_examples() {
        let ctx = TypingContext::from_entries([(nm("x"), SessionType::One)]).unwrap();
        let m = lin_all(&ctx, &close("x")).unwrap();
        assert_eq!(m[&nm("x")].rule, Lclose);
        let ctx =
            TypingContext::from_entries([(nm("x"), SessionType::One), (nm("y"), SessionType::Bot)])
                .unwrap();
        assert!(lin_all(&ctx, &wait("y", wait("y", close("x")))).is_none());
        assert!(lin_all(&TypingContext::new(), &close("q"))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn continuation_must_be_linear() {
        // x[inl>w]. fwd w y is linear in x; x[inl>w]. wait w. close w is not
        let p = ScpProcess::inl(nm("x"), nm("w"), fwd("w", "y"));
        assert_eq!(lin_check(&nm("x"), &p).unwrap().rules(), vec![Linl, Lfwd1]);
        let q = ScpProcess::inl(nm("x"), nm("w"), wait("w", close("w")));
        assert!(lin_check(&nm("x"), &q).is_none());
        let r = ScpProcess::inl(nm("x"), nm("w"), wait("x", fwd("w", "y")));
        assert!(lin_check(&nm("x"), &r).is_none());
    }

    #[test]
    fn validator_rejects_broken_side_conditions() {
        let bad_wait = LinDerivation {
            rule: Lwait,
            subject: nm("x"),
            process: wait("x", close("x")),
            premises: vec![],
        };
        assert!(!validate_lin(&bad_wait));

        let p = ScpProcess::cut(nm("x"), SessionType::One, fwd("z", "a"), fwd("z", "b"));
        let bogus = LinDerivation {
            rule: Lpcomp1,
            subject: nm("z"),
            process: p.clone(),
            premises: vec![lin_check(&nm("z"), &fwd("z", "a")).unwrap()],
        };
        assert!(!validate_lin(&bogus));
        assert!(lin_check(&nm("z"), &p).is_none());
    }
}
