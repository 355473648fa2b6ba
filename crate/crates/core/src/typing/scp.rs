use super::{DerivationError, Failure, ScpDerivation, ScpRule};
use crate::linearity::{lin_check, validate_lin, LinDerivation};
use crate::syntax::binding::binders;
use crate::syntax::{Name, ProcessExt, ScpProcess, SessionType, TypingContext};

/// Checks `gamma ⊢ p` in SCP.
///
/// Persistent channels are looked up in the ambient context rather than
/// removed from it, so premise contexts only ever extend the conclusion.
/// Binders that collide with `gamma` are renamed apart first.
pub fn scp_check(gamma: &TypingContext, p: &ScpProcess) -> Option<ScpDerivation> {
    scp_diagnose(gamma, p).ok()
}

/// As [`scp_check`], reporting the innermost judgment that has no
/// derivation, or the embedded linearity premise that fails.
pub fn scp_diagnose(gamma: &TypingContext, p: &ScpProcess) -> Result<ScpDerivation, Failure> {
    let p = p.freshen(&gamma.names());
    let mut loc = None;
    check(gamma, &p, &mut loc).ok_or_else(|| loc.expect("failures are recorded"))
}

fn lin_at(
    gamma: &TypingContext,
    p: &ScpProcess,
    x: &Name,
    body: &ScpProcess,
    loc: &mut Option<Failure>,
) -> Option<LinDerivation> {
    let d = lin_check(x, body);
    if d.is_none() && loc.is_none() {
        *loc = Some(Failure::new(
            gamma,
            p,
            &format!("no linearity derivation for {x} in {body}"),
        ));
    }
    d
}

/// Checks `p`, recording the innermost failing judgment in `loc`.
fn check(
    gamma: &TypingContext,
    p: &ScpProcess,
    loc: &mut Option<Failure>,
) -> Option<ScpDerivation> {
    let d = check_node(gamma, p, loc);
    if d.is_none() && loc.is_none() {
        *loc = Some(Failure::new(gamma, p, "no rule applies"));
    }
    d
}

fn check_node(
    gamma: &TypingContext,
    p: &ScpProcess,
    loc: &mut Option<Failure>,
) -> Option<ScpDerivation> {
    use ScpProcess::*;
    use SessionType as T;
    let node = |rule, premises, lin_premises| {
        Some(ScpDerivation {
            rule,
            context: gamma.clone(),
            process: p.clone(),
            premises,
            lin_premises,
        })
    };
    let ext = |n: &Name, t: &SessionType| gamma.extend(n, t).ok();
    match p {
        Fwd(x, y) => {
            let a = gamma.lookup(x)?;
            (gamma.lookup(y)? == &a.dual()).then_some(())?;
            node(ScpRule::Id, vec![], vec![])
        }
        Close(x) => {
            (gamma.lookup(x)? == &T::One).then_some(())?;
            node(ScpRule::One, vec![], vec![])
        }
        Wait { chan, body } => {
            (gamma.lookup(chan)? == &T::Bot).then_some(())?;
            node(ScpRule::Bot, vec![check(gamma, body, loc)?], vec![])
        }
        Cut {
            chan,
            ann,
            left,
            right,
        } => {
            let l = check(&ext(chan, ann)?, left, loc)?;
            let r = check(&ext(chan, &ann.dual())?, right, loc)?;
            let ll = lin_at(gamma, p, chan, left, loc)?;
            let lr = lin_at(gamma, p, chan, right, loc)?;
            node(ScpRule::Cut, vec![l, r], vec![ll, lr])
        }
        Out {
            chan,
            sent,
            payload,
            cont,
            body,
        } => {
            let T::Tensor(a, b) = gamma.lookup(chan)? else {
                return None;
            };
            let l = check(&ext(sent, a)?, payload, loc)?;
            let lin = lin_at(gamma, p, sent, payload, loc)?;
            let r = check(&ext(cont, b)?, body, loc)?;
            node(ScpRule::Tensor, vec![l, r], vec![lin])
        }
        Inp {
            chan,
            cont,
            recv,
            body,
        } => {
            let T::Par(a, b) = gamma.lookup(chan)? else {
                return None;
            };
            let ctx = ext(cont, b)?.extend(recv, a).ok()?;
            let d = check(&ctx, body, loc)?;
            let lin = lin_at(gamma, p, recv, body, loc)?;
            node(ScpRule::Par, vec![d], vec![lin])
        }
        Inl { chan, cont, body } | Inr { chan, cont, body } => {
            let T::Plus(a, b) = gamma.lookup(chan)? else {
                return None;
            };
            let (rule, ty) = match p {
                Inl { .. } => (ScpRule::Plus1, a),
                _ => (ScpRule::Plus2, b),
            };
            node(rule, vec![check(&ext(cont, ty)?, body, loc)?], vec![])
        }
        Case {
            chan,
            left_cont,
            left,
            right_cont,
            right,
        } => {
            let T::With(a, b) = gamma.lookup(chan)? else {
                return None;
            };
            let l = check(&ext(left_cont, a)?, left, loc)?;
            let r = check(&ext(right_cont, b)?, right, loc)?;
            node(ScpRule::With, vec![l, r], vec![])
        }
    }
}

/// Re-checks every node of `d`: rule instance, context growth and the
/// embedded linearity derivations.
pub fn validate_scp(d: &ScpDerivation) -> bool {
    valid_node(d) && d.premises.iter().all(validate_scp)
}

fn valid_node(d: &ScpDerivation) -> bool {
    use ScpProcess::*;
    use SessionType as T;
    let ctx = &d.context;
    let prem = &d.premises;
    let arity = match d.rule {
        ScpRule::Id | ScpRule::One => 0,
        ScpRule::Cut | ScpRule::Tensor | ScpRule::With => 2,
        _ => 1,
    };
    if prem.len() != arity || d.lin_premises.len() != d.rule.lin_arity() {
        return false;
    }
    let lin_ok = |i: usize, subject: &Name, body: &ScpProcess| {
        let l: &LinDerivation = &d.lin_premises[i];
        l.subject == *subject && l.process == *body && validate_lin(l)
    };
    // premise i proves `body` in `ctx` extended by `extra`
    let premise_ok = |i: usize, body: &ScpProcess, extra: &[(&Name, &SessionType)]| {
        let mut expected = ctx.clone();
        for (n, t) in extra {
            if expected.push((*n).clone(), (*t).clone()).is_err() {
                return false;
            }
        }
        prem[i].process == *body && prem[i].context.same_bindings(&expected)
    };
    match (&d.process, d.rule) {
        (Fwd(x, y), ScpRule::Id) => match ctx.lookup(x) {
            Some(a) => ctx.lookup(y) == Some(&a.dual()),
            None => false,
        },
        (Close(x), ScpRule::One) => ctx.lookup(x) == Some(&T::One),
        (Wait { chan, body }, ScpRule::Bot) => {
            ctx.lookup(chan) == Some(&T::Bot) && premise_ok(0, body, &[])
        }
        (
            Cut {
                chan,
                ann,
                left,
                right,
            },
            ScpRule::Cut,
        ) => {
            premise_ok(0, left, &[(chan, ann)])
                && premise_ok(1, right, &[(chan, &ann.dual())])
                && lin_ok(0, chan, left)
                && lin_ok(1, chan, right)
        }
        (
            Out {
                chan,
                sent,
                payload,
                cont,
                body,
            },
            ScpRule::Tensor,
        ) => {
            let Some(T::Tensor(a, b)) = ctx.lookup(chan) else {
                return false;
            };
            premise_ok(0, payload, &[(sent, a)])
                && premise_ok(1, body, &[(cont, b)])
                && lin_ok(0, sent, payload)
        }
        (
            Inp {
                chan,
                cont,
                recv,
                body,
            },
            ScpRule::Par,
        ) => {
            let Some(T::Par(a, b)) = ctx.lookup(chan) else {
                return false;
            };
            premise_ok(0, body, &[(cont, b), (recv, a)]) && lin_ok(0, recv, body)
        }
        (Inl { chan, cont, body }, ScpRule::Plus1) | (Inr { chan, cont, body }, ScpRule::Plus2) => {
            let Some(T::Plus(a, b)) = ctx.lookup(chan) else {
                return false;
            };
            let ty = if d.rule == ScpRule::Plus1 { a } else { b };
            premise_ok(0, body, &[(cont, ty)])
        }
        (
            Case {
                chan,
                left_cont,
                left,
                right_cont,
                right,
            },
            ScpRule::With,
        ) => {
            let Some(T::With(a, b)) = ctx.lookup(chan) else {
                return false;
            };
            premise_ok(0, left, &[(left_cont, a)]) && premise_ok(1, right, &[(right_cont, b)])
        }
        _ => false,
    }
}

fn map_contexts(d: &ScpDerivation, f: &dyn Fn(&TypingContext) -> TypingContext) -> ScpDerivation {
    ScpDerivation {
        rule: d.rule,
        context: f(&d.context),
        process: d.process.clone(),
        premises: d.premises.iter().map(|p| map_contexts(p, f)).collect(),
        lin_premises: d.lin_premises.clone(),
    }
}

/// Adds `x: a` to every judgment of `d`. The rule tree is unchanged.
pub fn weaken(
    d: &ScpDerivation,
    x: &Name,
    a: &SessionType,
) -> Result<ScpDerivation, DerivationError> {
    if d.context.contains(x) {
        return Err(DerivationError::AlreadyBound(x.clone()));
    }
    if d.process.free_names().contains(x) {
        return Err(DerivationError::OccursFree(x.clone()));
    }
    if binders(&d.process).contains(x) {
        return Err(DerivationError::ClashesWithBinder(x.clone()));
    }
    Ok(map_contexts(d, &|c| {
        c.extend(x, a)
            .expect("premise contexts only contain the root names and binders")
    }))
}

/// Removes `x` from every judgment of `d`; `x` must not occur free in the
/// process.
pub fn strengthen(d: &ScpDerivation, x: &Name) -> Result<ScpDerivation, DerivationError> {
    if !d.context.contains(x) {
        return Err(DerivationError::NotBound(x.clone()));
    }
    if d.process.free_names().contains(x) {
        return Err(DerivationError::OccursFree(x.clone()));
    }
    Ok(map_contexts(d, &|c| c.without(x)))
}
