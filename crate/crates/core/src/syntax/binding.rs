//! Binding structure shared by both process calculi.
//!
//! Each process constructor is viewed as a tag, an optional type annotation,
//! a list of names in free position and a list of scopes (binders plus a
//! body). Free names, capture-avoiding renaming, α-equivalence and binder
//! normalization are written once against this view.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

use super::{fresh, Name, SessionType};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Tag {
    Fwd,
    Cut,
    Out,
    Inp,
    Inl,
    Inr,
    Case,
    Close,
    Wait,
}

pub struct Scope<'a, T> {
    pub binders: Vec<&'a Name>,
    pub body: &'a T,
}

pub struct View<'a, T> {
    pub tag: Tag,
    pub ann: Option<&'a SessionType>,
    pub names: Vec<&'a Name>,
    pub scopes: Vec<Scope<'a, T>>,
}

pub trait Term: Clone + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn view(&self) -> View<'_, Self>;

    /// Rebuilds a node of the same constructor and annotation from new parts.
    /// `names` and `scopes` must have the shapes returned by [`Term::view`].
    fn rebuild(&self, names: Vec<Name>, scopes: Vec<(Vec<Name>, Self)>) -> Self;
}

pub fn free_names<T: Term>(t: &T) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_free(t, &mut Vec::new(), &mut out);
    out
}

fn collect_free<'a, T: Term>(t: &'a T, bound: &mut Vec<&'a Name>, out: &mut BTreeSet<Name>) {
    let v = t.view();
    for n in v.names {
        if !bound.contains(&n) {
            out.insert(n.clone());
        }
    }
    for s in v.scopes {
        let mark = bound.len();
        bound.extend(s.binders);
        collect_free(s.body, bound, out);
        bound.truncate(mark);
    }
}

pub fn is_free_in<T: Term>(name: &Name, t: &T) -> bool {
    let v = t.view();
    v.names.contains(&name)
        || v.scopes
            .iter()
            .any(|s| !s.binders.contains(&name) && is_free_in(name, s.body))
}

/// Every name occurring anywhere in the term, bound or free.
pub fn all_names<T: Term>(t: &T) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fn go<T: Term>(t: &T, out: &mut BTreeSet<Name>) {
        let v = t.view();
        out.extend(v.names.into_iter().cloned());
        for s in v.scopes {
            out.extend(s.binders.into_iter().cloned());
            go(s.body, out);
        }
    }
    go(t, &mut out);
    out
}

/// Binder occurrences in pre-order.
pub fn binders<T: Term>(t: &T) -> Vec<Name> {
    let mut out = Vec::new();
    fn go<T: Term>(t: &T, out: &mut Vec<Name>) {
        for s in t.view().scopes {
            out.extend(s.binders.into_iter().cloned());
            go(s.body, out);
        }
    }
    go(t, &mut out);
    out
}

/// Number of process constructors.
pub fn size<T: Term>(t: &T) -> usize {
    1 + t.view().scopes.iter().map(|s| size(s.body)).sum::<usize>()
}

/// Capture-avoiding replacement of the free occurrences of `from` by `to`.
pub fn rename<T: Term>(t: &T, from: &Name, to: &Name) -> T {
    if from == to || !is_free_in(from, t) {
        return t.clone();
    }
    let v = t.view();
    let names = v
        .names
        .iter()
        .map(|n| if *n == from { to.clone() } else { (*n).clone() })
        .collect();
    // A binder equal to `to` would capture it. The replacement is chosen once
    // per node because a cut shares its binder between both scopes.
    let captures = v
        .scopes
        .iter()
        .any(|s| s.binders.contains(&to) && !s.binders.contains(&from) && is_free_in(from, s.body));
    let replacement = captures.then(|| {
        let mut avoid = all_names(t);
        avoid.insert(from.clone());
        avoid.insert(to.clone());
        fresh(&avoid, to.base())
    });
    let scopes = v
        .scopes
        .iter()
        .map(|s| {
            let mut bs: Vec<Name> = s.binders.iter().map(|b| (*b).clone()).collect();
            if bs.contains(from) {
                return (bs, s.body.clone());
            }
            let mut body = s.body.clone();
            if let Some(r) = &replacement {
                if bs.contains(to) {
                    body = rename(&body, to, r);
                    for b in bs.iter_mut().filter(|b| *b == to) {
                        *b = r.clone();
                    }
                }
            }
            (bs, rename(&body, from, to))
        })
        .collect();
    t.rebuild(names, scopes)
}

/// Nameless form of a term: free names kept, bound names replaced by
/// de Bruijn indices counting binders outward.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CanonName {
    Free(Name),
    Bound(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Canon {
    tag: Tag,
    ann: Option<SessionType>,
    names: Vec<CanonName>,
    scopes: Vec<(usize, Canon)>,
}

pub fn canonical<T: Term>(t: &T) -> Canon {
    fn go<'a, T: Term>(t: &'a T, env: &mut Vec<&'a Name>) -> Canon {
        let v = t.view();
        let names = v
            .names
            .iter()
            .map(|n| match env.iter().rposition(|b| b == n) {
                Some(pos) => CanonName::Bound(env.len() - 1 - pos),
                None => CanonName::Free((*n).clone()),
            })
            .collect();
        let scopes = v
            .scopes
            .into_iter()
            .map(|s| {
                let mark = env.len();
                let count = s.binders.len();
                env.extend(s.binders);
                let body = go(s.body, env);
                env.truncate(mark);
                (count, body)
            })
            .collect();
        Canon {
            tag: v.tag,
            ann: v.ann.cloned(),
            names,
            scopes,
        }
    }
    go(t, &mut Vec::new())
}

pub fn alpha_eq<T: Term>(a: &T, b: &T) -> bool {
    a == b || canonical(a) == canonical(b)
}

/// Renames binders so that no binder coincides with a name in `avoid`, a
/// free name of the term, or an enclosing binder. Binders that already
/// satisfy this are left alone, so a normalized term is returned unchanged.
pub fn freshen<T: Term>(t: &T, avoid: &BTreeSet<Name>) -> T {
    let mut used = all_names(t);
    used.extend(avoid.iter().cloned());
    let mut blocked: Vec<Name> = avoid.iter().cloned().collect();
    blocked.extend(free_names(t));
    let mut subst = Vec::new();
    freshen_go(t, &mut blocked, &mut subst, &mut used)
}

fn freshen_go<T: Term>(
    t: &T,
    blocked: &mut Vec<Name>,
    subst: &mut Vec<(Name, Name)>,
    used: &mut BTreeSet<Name>,
) -> T {
    let v = t.view();
    let lookup = |n: &Name, subst: &[(Name, Name)]| {
        subst
            .iter()
            .rev()
            .find(|(old, _)| old == n)
            .map(|(_, new)| new.clone())
            .unwrap_or_else(|| n.clone())
    };
    let names = v.names.iter().map(|n| lookup(n, subst)).collect();
    // one replacement per distinct binder of the node, shared by its scopes
    let mut chosen: Vec<(Name, Name)> = Vec::new();
    for s in &v.scopes {
        for b in &s.binders {
            if blocked.contains(b) && !chosen.iter().any(|(old, _)| old == *b) {
                let nb = fresh(used, b.base());
                used.insert(nb.clone());
                chosen.push(((*b).clone(), nb));
            }
        }
    }
    let scopes = v
        .scopes
        .iter()
        .map(|s| {
            let mark_b = blocked.len();
            let mark_s = subst.len();
            let mut new_binders = Vec::new();
            for b in &s.binders {
                let nb = chosen
                    .iter()
                    .find(|(old, _)| old == *b)
                    .map(|(_, new)| new.clone())
                    .unwrap_or_else(|| (*b).clone());
                subst.push(((*b).clone(), nb.clone()));
                blocked.push(nb.clone());
                new_binders.push(nb);
            }
            let body = freshen_go(s.body, blocked, subst, used);
            blocked.truncate(mark_b);
            subst.truncate(mark_s);
            (new_binders, body)
        })
        .collect();
    t.rebuild(names, scopes)
}

/// True iff [`freshen`] with the same `avoid` would leave the term unchanged.
pub fn is_normalized<T: Term>(t: &T, avoid: &BTreeSet<Name>) -> bool {
    let mut blocked: Vec<Name> = avoid.iter().cloned().collect();
    blocked.extend(free_names(t));
    fn go<T: Term>(t: &T, blocked: &mut Vec<Name>) -> bool {
        t.view().scopes.iter().all(|s| {
            let mark = blocked.len();
            for b in &s.binders {
                if blocked.contains(b) {
                    blocked.truncate(mark);
                    return false;
                }
                blocked.push((*b).clone());
            }
            let ok = go(s.body, blocked);
            blocked.truncate(mark);
            ok
        })
    }
    go(t, &mut blocked)
}

/// Node-local hygiene: renames any binder of the top node that is also a
/// free name of the node itself (for example a continuation binder equal to
/// the principal channel).
pub fn make_hygienic<T: Term>(t: T) -> T {
    let fns = free_names(&t);
    let v = t.view();
    if v.scopes
        .iter()
        .all(|s| s.binders.iter().all(|b| !fns.contains(*b)))
    {
        return t;
    }
    let mut used = all_names(&t);
    let names = v.names.iter().map(|n| (*n).clone()).collect();
    let scopes = v
        .scopes
        .iter()
        .map(|s| {
            let mut bs = Vec::new();
            let mut body = s.body.clone();
            for b in &s.binders {
                if fns.contains(*b) {
                    let nb = fresh(&used, b.base());
                    used.insert(nb.clone());
                    body = rename(&body, b, &nb);
                    bs.push(nb);
                } else {
                    bs.push((*b).clone());
                }
            }
            (bs, body)
        })
        .collect();
    t.rebuild(names, scopes)
}

/// The per-node invariant maintained by the smart constructors, checked at
/// every node.
pub fn is_hygienic<T: Term>(t: &T) -> bool {
    let fns = free_names(t);
    let v = t.view();
    v.scopes
        .iter()
        .all(|s| s.binders.iter().all(|b| !fns.contains(*b)) && is_hygienic(s.body))
}
