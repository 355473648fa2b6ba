use std::collections::BTreeSet;

use super::{CpDerivation, CpRule, Failure};
use crate::syntax::{free_names, CpProcess, Name, ProcessExt, SessionType, TypingContext};

/// Checks `delta ⊢ p` in CP.
///
/// Context splits at cuts and outputs are read off the free names of the
/// left subterm, which is complete because every derivable CP judgment types
/// exactly its free names. Binders that collide with `delta` are renamed
/// apart first, so the returned derivation may mention an α-variant of `p`.
pub fn cp_check(delta: &TypingContext, p: &CpProcess) -> Option<CpDerivation> {
    cp_diagnose(delta, p).ok()
}

/// As [`cp_check`], reporting the innermost judgment that has no derivation.
pub fn cp_diagnose(delta: &TypingContext, p: &CpProcess) -> Result<CpDerivation, Failure> {
    let p = p.freshen(&delta.names());
    let mut loc = None;
    check(delta, &p, &mut loc).ok_or_else(|| loc.expect("failures are recorded"))
}

fn leaf(rule: CpRule, delta: &TypingContext, p: &CpProcess) -> CpDerivation {
    CpDerivation {
        rule,
        context: delta.clone(),
        process: p.clone(),
        premises: vec![],
    }
}

/// Splits `delta` into the part typing `names` and the rest.
fn split(delta: &TypingContext, names: &BTreeSet<Name>) -> (TypingContext, TypingContext) {
    let left = delta.restrict(names);
    let rest: BTreeSet<Name> = delta.names().difference(names).cloned().collect();
    (left, delta.restrict(&rest))
}

/// Checks `p`, recording the innermost failing judgment in `loc`.
fn check(delta: &TypingContext, p: &CpProcess, loc: &mut Option<Failure>) -> Option<CpDerivation> {
    let d = check_node(delta, p, loc);
    if d.is_none() && loc.is_none() {
        *loc = Some(Failure::new(delta, p, "no rule applies"));
    }
    d
}

fn check_node(
    delta: &TypingContext,
    p: &CpProcess,
    loc: &mut Option<Failure>,
) -> Option<CpDerivation> {
    use CpProcess::*;
    use SessionType as T;
    let node = |rule, premises| {
        Some(CpDerivation {
            rule,
            context: delta.clone(),
            process: p.clone(),
            premises,
        })
    };
    match p {
        Fwd(x, y) => {
            let a = delta.lookup(x)?;
            let b = delta.lookup(y)?;
            (delta.len() == 2 && x != y && *b == a.dual()).then(|| leaf(CpRule::Id, delta, p))
        }
        Close(x) => (delta.len() == 1 && delta.lookup(x) == Some(&T::One))
            .then(|| leaf(CpRule::One, delta, p)),
        Wait { chan, body } => {
            if delta.lookup(chan) != Some(&T::Bot) {
                return None;
            }
            node(CpRule::Bot, vec![check(&delta.without(chan), body, loc)?])
        }
        Cut {
            chan,
            ann,
            left,
            right,
        } => {
            if delta.contains(chan) {
                return None;
            }
            let mut used = free_names(&**left);
            used.remove(chan);
            let (d1, d2) = split(delta, &used);
            let l = check(&d1.extend(chan, ann).ok()?, left, loc)?;
            let r = check(&d2.extend(chan, &ann.dual()).ok()?, right, loc)?;
            node(CpRule::Cut, vec![l, r])
        }
        Out {
            chan,
            sent,
            payload,
            cont,
        } => {
            let T::Tensor(a, b) = delta.lookup(chan)? else {
                return None;
            };
            if delta.contains(sent) {
                return None;
            }
            let mut used = free_names(&**payload);
            used.remove(sent);
            used.remove(chan);
            let (d1, d2) = split(delta, &used);
            let l = check(&d1.extend(sent, a).ok()?, payload, loc)?;
            let r = check(&d2.retype(chan, b), cont, loc)?;
            node(CpRule::Tensor, vec![l, r])
        }
        Inp { chan, recv, body } => {
            let T::Par(a, b) = delta.lookup(chan)? else {
                return None;
            };
            let ctx = delta.retype(chan, b).extend(recv, a).ok()?;
            node(CpRule::Par, vec![check(&ctx, body, loc)?])
        }
        Inl { chan, body } | Inr { chan, body } => {
            let T::Plus(a, b) = delta.lookup(chan)? else {
                return None;
            };
            let (rule, ty) = match p {
                Inl { .. } => (CpRule::Plus1, a),
                _ => (CpRule::Plus2, b),
            };
            node(rule, vec![check(&delta.retype(chan, ty), body, loc)?])
        }
        Case { chan, left, right } => {
            let T::With(a, b) = delta.lookup(chan)? else {
                return None;
            };
            let l = check(&delta.retype(chan, a), left, loc)?;
            let r = check(&delta.retype(chan, b), right, loc)?;
            node(CpRule::With, vec![l, r])
        }
    }
}

/// Re-checks every node of `d` as an instance of its rule, comparing
/// contexts up to exchange.
pub fn validate_cp(d: &CpDerivation) -> bool {
    valid_node(d) && d.premises.iter().all(validate_cp)
}

/// `a` and `b` are disjoint and together have the bindings of `whole`.
fn partitions(whole: &TypingContext, a: &TypingContext, b: &TypingContext) -> bool {
    match a.union(b) {
        Ok(u) => u.same_bindings(whole),
        Err(_) => false,
    }
}

fn valid_node(d: &CpDerivation) -> bool {
    use CpProcess::*;
    use SessionType as T;
    let ctx = &d.context;
    let prem = &d.premises;
    let arity = match d.rule {
        CpRule::Id | CpRule::One => 0,
        CpRule::Cut | CpRule::Tensor | CpRule::With => 2,
        _ => 1,
    };
    if prem.len() != arity {
        return false;
    }
    let has = |c: &TypingContext, n: &Name, t: &SessionType| c.lookup(n) == Some(t);
    match (&d.process, d.rule) {
        (Fwd(x, y), CpRule::Id) => match ctx.lookup(x) {
            Some(a) => ctx.len() == 2 && x != y && has(ctx, y, &a.dual()),
            None => false,
        },
        (Close(x), CpRule::One) => ctx.len() == 1 && has(ctx, x, &T::One),
        (Wait { chan, body }, CpRule::Bot) => {
            has(ctx, chan, &T::Bot)
                && prem[0].process == **body
                && prem[0].context.same_bindings(&ctx.without(chan))
        }
        (
            Cut {
                chan,
                ann,
                left,
                right,
            },
            CpRule::Cut,
        ) => {
            let (l, r) = (&prem[0], &prem[1]);
            !ctx.contains(chan)
                && l.process == **left
                && r.process == **right
                && has(&l.context, chan, ann)
                && has(&r.context, chan, &ann.dual())
                && partitions(ctx, &l.context.without(chan), &r.context.without(chan))
        }
        (
            Out {
                chan,
                sent,
                payload,
                cont,
            },
            CpRule::Tensor,
        ) => {
            let Some(T::Tensor(a, b)) = ctx.lookup(chan) else {
                return false;
            };
            let (l, r) = (&prem[0], &prem[1]);
            sent != chan
                && !ctx.contains(sent)
                && l.process == **payload
                && r.process == **cont
                && has(&l.context, sent, a)
                && has(&r.context, chan, b)
                && partitions(
                    &ctx.without(chan),
                    &l.context.without(sent),
                    &r.context.without(chan),
                )
        }
        (Inp { chan, recv, body }, CpRule::Par) => {
            let Some(T::Par(a, b)) = ctx.lookup(chan) else {
                return false;
            };
            match ctx.retype(chan, b).extend(recv, a) {
                Ok(expected) => {
                    prem[0].process == **body && prem[0].context.same_bindings(&expected)
                }
                Err(_) => false,
            }
        }
        (Inl { chan, body }, CpRule::Plus1) | (Inr { chan, body }, CpRule::Plus2) => {
            let Some(T::Plus(a, b)) = ctx.lookup(chan) else {
                return false;
            };
            let ty = if d.rule == CpRule::Plus1 { a } else { b };
            prem[0].process == **body && prem[0].context.same_bindings(&ctx.retype(chan, ty))
        }
        (Case { chan, left, right }, CpRule::With) => {
            let Some(T::With(a, b)) = ctx.lookup(chan) else {
                return false;
            };
            prem[0].process == **left
                && prem[1].process == **right
                && prem[0].context.same_bindings(&ctx.retype(chan, a))
                && prem[1].context.same_bindings(&ctx.retype(chan, b))
        }
        _ => false,
    }
}
