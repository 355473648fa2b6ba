//! Brute-force derivation search used as an independent reference for the
//! syntax-directed checkers.
//!
//! Every rule is tried at every node, CP contexts are split in every possible
//! way, and free names are computed here rather than taken from the library.
//! All derivations are returned, so a result longer than one exposes an
//! ambiguity in the rule set.

use std::collections::BTreeSet;

use scpkit::linearity::{LinDerivation, LinRule};
use scpkit::syntax::{CpProcess, Name, ScpProcess, SessionType, TypingContext};
use scpkit::typing::{CpDerivation, CpRule, ScpDerivation, ScpRule};

fn minus(mut s: BTreeSet<Name>, bound: &[&Name]) -> BTreeSet<Name> {
    for b in bound {
        s.remove(*b);
    }
    s
}

fn one(x: &Name) -> BTreeSet<Name> {
    BTreeSet::from([x.clone()])
}

pub fn fv_scp(p: &ScpProcess) -> BTreeSet<Name> {
    use ScpProcess::*;
    let mut s = match p {
        Fwd(x, y) => return BTreeSet::from([x.clone(), y.clone()]),
        Close(x) => return one(x),
        Cut {
            chan, left, right, ..
        } => {
            let mut s = fv_scp(left);
            s.extend(fv_scp(right));
            return minus(s, &[chan]);
        }
        Wait { body, .. } => fv_scp(body),
        Out {
            sent,
            payload,
            cont,
            body,
            ..
        } => {
            let mut s = minus(fv_scp(payload), &[sent]);
            s.extend(minus(fv_scp(body), &[cont]));
            s
        }
        Inp {
            cont, recv, body, ..
        } => minus(fv_scp(body), &[cont, recv]),
        Inl { cont, body, .. } | Inr { cont, body, .. } => minus(fv_scp(body), &[cont]),
        Case {
            left_cont,
            left,
            right_cont,
            right,
            ..
        } => {
            let mut s = minus(fv_scp(left), &[left_cont]);
            s.extend(minus(fv_scp(right), &[right_cont]));
            s
        }
    };
    s.insert(chan_of(p).clone());
    s
}

fn chan_of(p: &ScpProcess) -> &Name {
    use ScpProcess::*;
    match p {
        Fwd(x, _) | Close(x) => x,
        Cut { chan, .. }
        | Wait { chan, .. }
        | Out { chan, .. }
        | Inp { chan, .. }
        | Inl { chan, .. }
        | Inr { chan, .. }
        | Case { chan, .. } => chan,
    }
}

/// `x` free in `p` once the names in `bound` are taken as bound.
fn free_under(x: &Name, p: &ScpProcess, bound: &[&Name]) -> bool {
    !bound.contains(&x) && fv_scp(p).contains(x)
}

fn product<T: Clone>(lists: Vec<Vec<T>>) -> Vec<Vec<T>> {
    lists.into_iter().fold(vec![vec![]], |acc, l| {
        acc.iter()
            .flat_map(|prefix| {
                l.iter().map(move |item| {
                    let mut v = prefix.clone();
                    v.push(item.clone());
                    v
                })
            })
            .collect()
    })
}

/// Every derivation of `lin(x; p)`.
pub fn lin_all_derivations(x: &Name, p: &ScpProcess) -> Vec<LinDerivation> {
    use LinRule::*;
    use ScpProcess::*;
    let mut out = Vec::new();
    let mut emit = |rule: LinRule, premises: Vec<Vec<LinDerivation>>| {
        for ps in product(premises) {
            out.push(LinDerivation {
                rule,
                subject: x.clone(),
                process: p.clone(),
                premises: ps,
            });
        }
    };
    for rule in LinRule::ALL {
        match (rule, p) {
            (Lfwd1, Fwd(a, b)) if a == x && b != x => emit(rule, vec![]),
            (Lfwd2, Fwd(a, b)) if b == x && a != x => emit(rule, vec![]),
            (Lclose, Close(a)) if a == x => emit(rule, vec![]),
            (Lwait, Wait { chan, body }) if chan == x && !free_under(x, body, &[]) => {
                emit(rule, vec![])
            }
            (Lwait2, Wait { chan, body }) if chan != x => {
                emit(rule, vec![lin_all_derivations(x, body)])
            }
            (
                Lout,
                Out {
                    chan,
                    sent,
                    payload,
                    cont,
                    body,
                },
            ) if chan == x && !free_under(x, payload, &[sent]) && !free_under(x, body, &[cont]) => {
                emit(rule, vec![lin_all_derivations(cont, body)])
            }
            (
                Lout2,
                Out {
                    chan,
                    sent,
                    payload,
                    cont,
                    body,
                },
            ) if chan != x && free_under(x, payload, &[sent]) && !free_under(x, body, &[cont]) => {
                emit(rule, vec![lin_all_derivations(x, payload)])
            }
            (
                Lout3,
                Out {
                    chan,
                    sent,
                    payload,
                    cont,
                    body,
                },
            ) if chan != x && !free_under(x, payload, &[sent]) && free_under(x, body, &[cont]) => {
                emit(rule, vec![lin_all_derivations(x, body)])
            }
            (
                Linp,
                Inp {
                    chan,
                    cont,
                    recv,
                    body,
                },
            ) if chan == x && !free_under(x, body, &[cont, recv]) => {
                emit(rule, vec![lin_all_derivations(cont, body)])
            }
            (
                Linp2,
                Inp {
                    chan,
                    cont,
                    recv,
                    body,
                },
            ) if chan != x && free_under(x, body, &[cont, recv]) => {
                emit(rule, vec![lin_all_derivations(x, body)])
            }
            (Linl, Inl { chan, cont, body }) | (Linr, Inr { chan, cont, body })
                if chan == x && !free_under(x, body, &[cont]) =>
            {
                emit(rule, vec![lin_all_derivations(cont, body)])
            }
            (Linl2, Inl { chan, cont, body }) | (Linr2, Inr { chan, cont, body })
                if chan != x && free_under(x, body, &[cont]) =>
            {
                emit(rule, vec![lin_all_derivations(x, body)])
            }
            (
                Lcase,
                Case {
                    chan,
                    left_cont,
                    left,
                    right_cont,
                    right,
                },
            ) if chan == x
                && !free_under(x, left, &[left_cont])
                && !free_under(x, right, &[right_cont]) =>
            {
                emit(
                    rule,
                    vec![
                        lin_all_derivations(left_cont, left),
                        lin_all_derivations(right_cont, right),
                    ],
                )
            }
            (
                Lcase2,
                Case {
                    chan,
                    left_cont,
                    left,
                    right_cont,
                    right,
                },
            ) if chan != x
                && free_under(x, left, &[left_cont])
                && free_under(x, right, &[right_cont]) =>
            {
                emit(
                    rule,
                    vec![lin_all_derivations(x, left), lin_all_derivations(x, right)],
                )
            }
            (
                Lpcomp1,
                Cut {
                    chan, left, right, ..
                },
            ) if free_under(x, left, &[chan]) && !free_under(x, right, &[chan]) => {
                emit(rule, vec![lin_all_derivations(x, left)])
            }
            (
                Lpcomp2,
                Cut {
                    chan, left, right, ..
                },
            ) if !free_under(x, left, &[chan]) && free_under(x, right, &[chan]) => {
                emit(rule, vec![lin_all_derivations(x, right)])
            }
            _ => {}
        }
    }
    out
}

type Entries = Vec<(Name, SessionType)>;

fn ctx(entries: &Entries) -> TypingContext {
    TypingContext::from_entries(entries.clone()).expect("distinct names")
}

fn find(entries: &Entries, x: &Name) -> Option<SessionType> {
    entries.iter().find(|(n, _)| n == x).map(|(_, t)| t.clone())
}

fn with(entries: &Entries, x: &Name, t: &SessionType) -> Option<Entries> {
    if find(entries, x).is_some() {
        return None;
    }
    let mut e = entries.clone();
    e.push((x.clone(), t.clone()));
    Some(e)
}

fn without(entries: &Entries, x: &Name) -> Entries {
    entries.iter().filter(|(n, _)| n != x).cloned().collect()
}

/// Every way of dividing `entries` into two parts.
fn splits(entries: &Entries) -> Vec<(Entries, Entries)> {
    (0..1u32 << entries.len())
        .map(|mask| {
            let (l, r): (Vec<_>, Vec<_>) = entries
                .iter()
                .enumerate()
                .partition(|(i, _)| mask & (1 << i) != 0);
            (
                l.into_iter().map(|(_, e)| e.clone()).collect(),
                r.into_iter().map(|(_, e)| e.clone()).collect(),
            )
        })
        .collect()
}

fn cp_search(entries: &Entries, p: &CpProcess) -> Vec<CpDerivation> {
    use CpProcess::*;
    use SessionType as T;
    let mut out = Vec::new();
    let mut emit = |rule: CpRule, premises: Vec<Vec<CpDerivation>>| {
        for ps in product(premises) {
            out.push(CpDerivation {
                rule,
                context: ctx(entries),
                process: p.clone(),
                premises: ps,
            });
        }
    };
    let all = [
        CpRule::Id,
        CpRule::Cut,
        CpRule::Tensor,
        CpRule::Par,
        CpRule::Plus1,
        CpRule::Plus2,
        CpRule::With,
        CpRule::One,
        CpRule::Bot,
    ];
    for rule in all {
        match (rule, p) {
            (CpRule::Id, Fwd(x, y)) => {
                if entries.len() == 2 && x != y {
                    if let (Some(a), Some(b)) = (find(entries, x), find(entries, y)) {
                        if b == a.dual() {
                            emit(rule, vec![]);
                        }
                    }
                }
            }
            (CpRule::One, Close(x)) => {
                if entries.len() == 1 && find(entries, x) == Some(T::One) {
                    emit(rule, vec![]);
                }
            }
            (CpRule::Bot, Wait { chan, body }) => {
                if find(entries, chan) == Some(T::Bot) {
                    emit(rule, vec![cp_search(&without(entries, chan), body)]);
                }
            }
            (
                CpRule::Cut,
                Cut {
                    chan,
                    ann,
                    left,
                    right,
                },
            ) => {
                if find(entries, chan).is_some() {
                    continue;
                }
                for (l, r) in splits(entries) {
                    let l = with(&l, chan, ann).unwrap();
                    let r = with(&r, chan, &ann.dual()).unwrap();
                    emit(rule, vec![cp_search(&l, left), cp_search(&r, right)]);
                }
            }
            (
                CpRule::Tensor,
                Out {
                    chan,
                    sent,
                    payload,
                    cont,
                },
            ) => {
                let Some(T::Tensor(a, b)) = find(entries, chan) else {
                    continue;
                };
                if find(entries, sent).is_some() {
                    continue;
                }
                for (l, r) in splits(&without(entries, chan)) {
                    let l = with(&l, sent, &a).unwrap();
                    let r = with(&r, chan, &b).unwrap();
                    emit(rule, vec![cp_search(&l, payload), cp_search(&r, cont)]);
                }
            }
            (CpRule::Par, Inp { chan, recv, body }) => {
                let Some(T::Par(a, b)) = find(entries, chan) else {
                    continue;
                };
                let rest = without(entries, chan);
                if let Some(e) = with(&rest, chan, &b).and_then(|e| with(&e, recv, &a)) {
                    emit(rule, vec![cp_search(&e, body)]);
                }
            }
            (CpRule::Plus1, Inl { chan, body }) | (CpRule::Plus2, Inr { chan, body }) => {
                let Some(T::Plus(a, b)) = find(entries, chan) else {
                    continue;
                };
                let t = if rule == CpRule::Plus1 { a } else { b };
                let e = with(&without(entries, chan), chan, &t).unwrap();
                emit(rule, vec![cp_search(&e, body)]);
            }
            (CpRule::With, Case { chan, left, right }) => {
                let Some(T::With(a, b)) = find(entries, chan) else {
                    continue;
                };
                let rest = without(entries, chan);
                let l = with(&rest, chan, &a).unwrap();
                let r = with(&rest, chan, &b).unwrap();
                emit(rule, vec![cp_search(&l, left), cp_search(&r, right)]);
            }
            _ => {}
        }
    }
    out
}

fn scp_search(entries: &Entries, p: &ScpProcess) -> Vec<ScpDerivation> {
    use ScpProcess::*;
    use SessionType as T;
    let mut out = Vec::new();
    let mut emit =
        |rule: ScpRule, premises: Vec<Vec<ScpDerivation>>, lins: Vec<Vec<LinDerivation>>| {
            for ps in product(premises) {
                for ls in product(lins.clone()) {
                    out.push(ScpDerivation {
                        rule,
                        context: ctx(entries),
                        process: p.clone(),
                        premises: ps.clone(),
                        lin_premises: ls,
                    });
                }
            }
        };
    let all = [
        ScpRule::Id,
        ScpRule::Cut,
        ScpRule::Tensor,
        ScpRule::Par,
        ScpRule::Plus1,
        ScpRule::Plus2,
        ScpRule::With,
        ScpRule::One,
        ScpRule::Bot,
    ];
    for rule in all {
        match (rule, p) {
            (ScpRule::Id, Fwd(x, y)) => {
                if let (Some(a), Some(b)) = (find(entries, x), find(entries, y)) {
                    if b == a.dual() {
                        emit(rule, vec![], vec![]);
                    }
                }
            }
            (ScpRule::One, Close(x)) => {
                if find(entries, x) == Some(T::One) {
                    emit(rule, vec![], vec![]);
                }
            }
            (ScpRule::Bot, Wait { chan, body }) => {
                if find(entries, chan) == Some(T::Bot) {
                    emit(rule, vec![scp_search(entries, body)], vec![]);
                }
            }
            (
                ScpRule::Cut,
                Cut {
                    chan,
                    ann,
                    left,
                    right,
                },
            ) => {
                let (Some(l), Some(r)) =
                    (with(entries, chan, ann), with(entries, chan, &ann.dual()))
                else {
                    continue;
                };
                emit(
                    rule,
                    vec![scp_search(&l, left), scp_search(&r, right)],
                    vec![
                        lin_all_derivations(chan, left),
                        lin_all_derivations(chan, right),
                    ],
                );
            }
            (
                ScpRule::Tensor,
                Out {
                    chan,
                    sent,
                    payload,
                    cont,
                    body,
                },
            ) => {
                let Some(T::Tensor(a, b)) = find(entries, chan) else {
                    continue;
                };
                let (Some(l), Some(r)) = (with(entries, sent, &a), with(entries, cont, &b)) else {
                    continue;
                };
                emit(
                    rule,
                    vec![scp_search(&l, payload), scp_search(&r, body)],
                    vec![lin_all_derivations(sent, payload)],
                );
            }
            (
                ScpRule::Par,
                Inp {
                    chan,
                    cont,
                    recv,
                    body,
                },
            ) => {
                let Some(T::Par(a, b)) = find(entries, chan) else {
                    continue;
                };
                let Some(e) = with(entries, cont, &b).and_then(|e| with(&e, recv, &a)) else {
                    continue;
                };
                emit(
                    rule,
                    vec![scp_search(&e, body)],
                    vec![lin_all_derivations(recv, body)],
                );
            }
            (ScpRule::Plus1, Inl { chan, cont, body })
            | (ScpRule::Plus2, Inr { chan, cont, body }) => {
                let Some(T::Plus(a, b)) = find(entries, chan) else {
                    continue;
                };
                let t = if rule == ScpRule::Plus1 { a } else { b };
                if let Some(e) = with(entries, cont, &t) {
                    emit(rule, vec![scp_search(&e, body)], vec![]);
                }
            }
            (
                ScpRule::With,
                Case {
                    chan,
                    left_cont,
                    left,
                    right_cont,
                    right,
                },
            ) => {
                let Some(T::With(a, b)) = find(entries, chan) else {
                    continue;
                };
                let (Some(l), Some(r)) =
                    (with(entries, left_cont, &a), with(entries, right_cont, &b))
                else {
                    continue;
                };
                emit(
                    rule,
                    vec![scp_search(&l, left), scp_search(&r, right)],
                    vec![],
                );
            }
            _ => {}
        }
    }
    out
}

/// Every CP derivation of `delta ⊢ p`.
pub fn cp_derivations(delta: &TypingContext, p: &CpProcess) -> Vec<CpDerivation> {
    cp_search(&delta.iter().cloned().collect(), p)
}

/// Every SCP derivation of `gamma ⊢ p`, embedded linearity derivations
/// included.
pub fn scp_derivations(gamma: &TypingContext, p: &ScpProcess) -> Vec<ScpDerivation> {
    scp_search(&gamma.iter().cloned().collect(), p)
}
