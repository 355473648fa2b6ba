//! Single-step rules applied at a cut: forwarding, principal communication,
//! and commuting conversions. Every rule here expects the active prefix on
//! the left of the cut; the mirrored orientation is reached through `comm`.

use std::collections::BTreeSet;

use super::{Reducible, StepRule};
use crate::syntax::binding::{all_names, free_names, is_free_in, rename, Scope};
use crate::syntax::{fresh, CpProcess, Name, ScpProcess, SessionType, Tag, Term};

fn free_in_scope<P: Term>(x: &Name, s: &Scope<'_, P>) -> bool {
    !s.binders.contains(&x) && is_free_in(x, s.body)
}

/// Picks one name to bind in both `a_body` (currently bound as `a`) and
/// `b_body` (currently bound as `b`), avoiding `avoid` and any capture.
fn merge_binder<P: Term>(
    a: &Name,
    a_body: &P,
    b: &Name,
    b_body: &P,
    avoid: &BTreeSet<Name>,
) -> (Name, P, P) {
    let ok = |n: &Name| {
        !avoid.contains(n)
            && (n == a || !is_free_in(n, a_body))
            && (n == b || !is_free_in(n, b_body))
    };
    let n = if ok(a) {
        a.clone()
    } else if ok(b) {
        b.clone()
    } else {
        let mut used = all_names(a_body);
        used.extend(all_names(b_body));
        used.extend(avoid.iter().cloned());
        used.insert(a.clone());
        used.insert(b.clone());
        fresh(&used, a.base())
    };
    let a_body = rename(a_body, a, &n);
    let b_body = rename(b_body, b, &n);
    (n, a_body, b_body)
}

/// `βfwd`: `nu x (fwd x y | Q) → [y/x]Q`.
fn beta_fwd<P: Reducible>(x: &Name, l: &P, r: &P) -> Option<P> {
    let v = l.view();
    (v.tag == Tag::Fwd && v.names[0] == x && v.names[1] != x).then(|| rename(r, x, v.names[1]))
}

/// `β1⊥`: `nu x:1 (close x | wait x. P) → P`.
fn beta_close<P: Reducible>(x: &Name, a: &SessionType, l: &P, r: &P) -> Option<P> {
    let (lv, rv) = (l.view(), r.view());
    (*a == SessionType::One
        && lv.tag == Tag::Close
        && lv.names[0] == x
        && rv.tag == Tag::Wait
        && rv.names[0] == x)
        .then(|| rv.scopes[0].body.clone())
}

/// Commuting conversion: the cut on `z` moves under the left prefix, whose
/// subject differs from `z`.
fn kappa<P: Reducible>(z: &Name, c: &SessionType, l: &P, q: &P) -> Option<(StepRule, P)> {
    let v = l.view();
    if matches!(v.tag, Tag::Fwd | Tag::Close | Tag::Cut) || v.names[0] == z {
        return None;
    }
    let (rule, targets): (StepRule, &[usize]) = match v.tag {
        Tag::Wait => (StepRule::KappaWait, &[0]),
        Tag::Inp => (StepRule::KappaInp, &[0]),
        Tag::Inl => (StepRule::KappaInl, &[0]),
        Tag::Inr => (StepRule::KappaInr, &[0]),
        Tag::Case => (StepRule::KappaCase, &[0, 1]),
        Tag::Out if free_in_scope(z, &v.scopes[0]) => (StepRule::KappaOut1, &[0]),
        Tag::Out => (StepRule::KappaOut2, &[1]),
        _ => unreachable!(),
    };
    let mut avoid = free_names(q);
    avoid.insert(z.clone());
    let mut used = all_names(l);
    used.extend(all_names(q));
    used.insert(z.clone());
    let names = v.names.iter().map(|n| (*n).clone()).collect();
    let scopes = v
        .scopes
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut bs: Vec<Name> = s.binders.iter().map(|b| (*b).clone()).collect();
            if !targets.contains(&i) {
                return (bs, s.body.clone());
            }
            let mut body = s.body.clone();
            for b in bs.iter_mut() {
                if avoid.contains(b) {
                    let nb = fresh(&used, b.base());
                    used.insert(nb.clone());
                    body = rename(&body, b, &nb);
                    *b = nb;
                }
            }
            (bs, P::cut(z.clone(), c.clone(), body, q.clone()))
        })
        .collect();
    Some((rule, l.rebuild(names, scopes)))
}

/// All rules that fire at `nu x:a (l | r)` with the active prefix on the left.
pub(super) fn base_steps<P: Reducible>(
    x: &Name,
    a: &SessionType,
    l: &P,
    r: &P,
) -> Vec<(StepRule, P)> {
    let mut out = Vec::new();
    if let Some(t) = beta_fwd(x, l, r) {
        out.push((StepRule::BetaFwd, t));
    }
    if let Some(t) = beta_close(x, a, l, r) {
        out.push((StepRule::BetaOneBot, t));
    }
    out.extend(P::principal_steps(x, a, l, r));
    out.extend(kappa(x, a, l, r));
    out
}

impl Reducible for CpProcess {
    fn as_cut(&self) -> Option<(&Name, &SessionType, &Self, &Self)> {
        match self {
            CpProcess::Cut {
                chan,
                ann,
                left,
                right,
            } => Some((chan, ann, left, right)),
            _ => None,
        }
    }

    fn cut(x: Name, a: SessionType, l: Self, r: Self) -> Self {
        CpProcess::cut(x, a, l, r)
    }

    fn principal_steps(x: &Name, a: &SessionType, l: &Self, r: &Self) -> Vec<(StepRule, Self)> {
        use CpProcess::*;
        match (a, l, r) {
            // nu x:A*B (x[y](P | Q) | x(y'). R) → nu y:A (P | nu x:B (Q | [y/y']R))
            (
                SessionType::Tensor(ta, tb),
                Out {
                    chan,
                    sent,
                    payload,
                    cont,
                },
                Inp {
                    chan: c2,
                    recv,
                    body,
                },
            ) if chan == x && c2 == x => {
                let mut avoid = free_names(&**cont);
                avoid.insert(x.clone());
                let (y, p, r) = merge_binder(sent, &**payload, recv, &**body, &avoid);
                let inner = CpProcess::cut(x.clone(), (**tb).clone(), (**cont).clone(), r);
                vec![(
                    StepRule::BetaTensorPar,
                    CpProcess::cut(y, (**ta).clone(), p, inner),
                )]
            }
            // nu x:A+B (x[inl]. P | case x {Q1; Q2}) → nu x:A (P | Q1)
            (
                SessionType::Plus(ta, tb),
                Inl { chan, body } | Inr { chan, body },
                Case {
                    chan: c2,
                    left,
                    right,
                },
            ) if chan == x && c2 == x => {
                let (rule, ty, q) = match l {
                    Inl { .. } => (StepRule::BetaInl, ta, left),
                    _ => (StepRule::BetaInr, tb, right),
                };
                vec![(
                    rule,
                    CpProcess::cut(x.clone(), (**ty).clone(), (**body).clone(), (**q).clone()),
                )]
            }
            _ => vec![],
        }
    }
}

impl Reducible for ScpProcess {
    fn as_cut(&self) -> Option<(&Name, &SessionType, &Self, &Self)> {
        match self {
            ScpProcess::Cut {
                chan,
                ann,
                left,
                right,
            } => Some((chan, ann, left, right)),
            _ => None,
        }
    }

    fn cut(x: Name, a: SessionType, l: Self, r: Self) -> Self {
        ScpProcess::cut(x, a, l, r)
    }

    fn principal_steps(x: &Name, a: &SessionType, l: &Self, r: &Self) -> Vec<(StepRule, Self)> {
        use ScpProcess::*;
        match (a, l, r) {
            // nu x:A*B (x[y>w](P | Q) | x(w', y'). R)
            //   → nu y:A (P | nu w:B (Q | [w/w'][y/y']R))
            (
                SessionType::Tensor(ta, tb),
                Out {
                    chan,
                    sent,
                    payload,
                    cont,
                    body: q,
                },
                Inp {
                    chan: c2,
                    cont: cont2,
                    recv,
                    body: r,
                },
            ) if chan == x && c2 == x && cont2 != recv => {
                let avoid = free_names(&**q);
                let (y, p, r) = merge_binder(sent, &**payload, recv, &**r, &avoid);
                let avoid = BTreeSet::from([y.clone()]);
                let (w, q, r) = merge_binder(cont, &**q, cont2, &r, &avoid);
                let inner = ScpProcess::cut(w, (**tb).clone(), q, r);
                vec![(
                    StepRule::BetaTensorPar,
                    ScpProcess::cut(y, (**ta).clone(), p, inner),
                )]
            }
            // nu x:A+B (x[inl>w]. P | case x {w1. Q1; w2. Q2}) → nu w:A (P | [w/w1]Q1)
            (
                SessionType::Plus(ta, tb),
                Inl { chan, cont, body } | Inr { chan, cont, body },
                Case {
                    chan: c2,
                    left_cont,
                    left,
                    right_cont,
                    right,
                },
            ) if chan == x && c2 == x => {
                let (rule, ty, w2, q) = match l {
                    Inl { .. } => (StepRule::BetaInl, ta, left_cont, left),
                    _ => (StepRule::BetaInr, tb, right_cont, right),
                };
                let (w, p, q) = merge_binder(cont, &**body, w2, &**q, &BTreeSet::new());
                vec![(rule, ScpProcess::cut(w, (**ty).clone(), p, q))]
            }
            _ => vec![],
        }
    }
}
