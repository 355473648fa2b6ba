//! The translations between CP and SCP, on processes and on derivations.
//!
//! `encode` makes every continuation explicit by rebinding the principal
//! channel; `decode` substitutes the principal channel back for the
//! continuation binder. On derivations, `encode_derivation` additionally
//! produces linearity witnesses for every context name and
//! `decode_derivation` reads the CP context splits off those witnesses.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::linearity::{validate_lin, LinDerivation, LinRule, LinWitnesses};
use crate::syntax::binding::{all_names, is_normalized};
use crate::syntax::{free_names, fresh, CpProcess, Name, ProcessExt, ScpProcess, SessionType};
use crate::typing::{
    cp_check, validate_cp, validate_scp, weaken, CpDerivation, CpRule, DerivationError,
    ScpDerivation, ScpRule,
};

/// CP to SCP. Each continuation binder starts out as the principal name
/// itself and is then renamed apart.
pub fn encode(p: &CpProcess) -> ScpProcess {
    encode_raw(p).freshen(&BTreeSet::new())
}

fn encode_raw(p: &CpProcess) -> ScpProcess {
    use CpProcess::*;
    match p {
        Fwd(x, y) => ScpProcess::fwd(x.clone(), y.clone()),
        Cut {
            chan,
            ann,
            left,
            right,
        } => ScpProcess::cut(
            chan.clone(),
            ann.clone(),
            encode_raw(left),
            encode_raw(right),
        ),
        Out {
            chan,
            sent,
            payload,
            cont,
        } => ScpProcess::out(
            chan.clone(),
            sent.clone(),
            encode_raw(payload),
            chan.clone(),
            encode_raw(cont),
        ),
        Inp { chan, recv, body } => {
            ScpProcess::inp(chan.clone(), chan.clone(), recv.clone(), encode_raw(body))
        }
        Inl { chan, body } => ScpProcess::inl(chan.clone(), chan.clone(), encode_raw(body)),
        Inr { chan, body } => ScpProcess::inr(chan.clone(), chan.clone(), encode_raw(body)),
        Case { chan, left, right } => ScpProcess::case(
            chan.clone(),
            chan.clone(),
            encode_raw(left),
            chan.clone(),
            encode_raw(right),
        ),
        Close(x) => ScpProcess::close(x.clone()),
        Wait { chan, body } => ScpProcess::wait(chan.clone(), encode_raw(body)),
    }
}

/// SCP to CP: `[x/w]` for every continuation binder `w` of a prefix on `x`.
pub fn decode(p: &ScpProcess) -> CpProcess {
    use ScpProcess::*;
    // [x/w] body, after moving any binder equal to x out of the way
    let subst = |body: CpProcess, x: &Name, w: &Name| body.rename(w, x);
    match p {
        Fwd(x, y) => CpProcess::fwd(x.clone(), y.clone()),
        Cut {
            chan,
            ann,
            left,
            right,
        } => CpProcess::cut(chan.clone(), ann.clone(), decode(left), decode(right)),
        Out {
            chan,
            sent,
            payload,
            cont,
            body,
        } => CpProcess::out(
            chan.clone(),
            sent.clone(),
            decode(payload),
            subst(decode(body), chan, cont),
        ),
        Inp {
            chan,
            cont,
            recv,
            body,
        } => {
            let mut inner = decode(body);
            let mut recv = recv.clone();
            if recv == *chan {
                let mut avoid = all_names(&inner);
                avoid.insert(chan.clone());
                let r = fresh(&avoid, recv.base());
                inner = inner.rename(&recv, &r);
                recv = r;
            }
            if *cont != recv {
                inner = subst(inner, chan, cont);
            }
            CpProcess::inp(chan.clone(), recv, inner)
        }
        Inl { chan, cont, body } => CpProcess::inl(chan.clone(), subst(decode(body), chan, cont)),
        Inr { chan, cont, body } => CpProcess::inr(chan.clone(), subst(decode(body), chan, cont)),
        Case {
            chan,
            left_cont,
            left,
            right_cont,
            right,
        } => CpProcess::case(
            chan.clone(),
            subst(decode(left), chan, left_cont),
            subst(decode(right), chan, right_cont),
        ),
        Close(x) => CpProcess::close(x.clone()),
        Wait { chan, body } => CpProcess::wait(chan.clone(), decode(body)),
    }
}

fn rename_lin(d: &LinDerivation, from: &Name, to: &Name) -> LinDerivation {
    LinDerivation {
        rule: d.rule,
        subject: if d.subject == *from {
            to.clone()
        } else {
            d.subject.clone()
        },
        process: d.process.rename(from, to),
        premises: d.premises.iter().map(|p| rename_lin(p, from, to)).collect(),
    }
}

fn rename_scp(d: &ScpDerivation, from: &Name, to: &Name) -> ScpDerivation {
    ScpDerivation {
        rule: d.rule,
        context: d.context.rename(from, to),
        process: d.process.rename(from, to),
        premises: d.premises.iter().map(|p| rename_scp(p, from, to)).collect(),
        lin_premises: d
            .lin_premises
            .iter()
            .map(|l| rename_lin(l, from, to))
            .collect(),
    }
}

fn rename_cp(d: &CpDerivation, from: &Name, to: &Name) -> CpDerivation {
    CpDerivation {
        rule: d.rule,
        context: d.context.rename(from, to),
        process: d.process.rename(from, to),
        premises: d.premises.iter().map(|p| rename_cp(p, from, to)).collect(),
    }
}

fn weaken_all(
    d: ScpDerivation,
    extra: impl IntoIterator<Item = (Name, SessionType)>,
) -> ScpDerivation {
    extra.into_iter().fold(d, |d, (n, t)| {
        weaken(&d, &n, &t).expect("names of sibling contexts are fresh for the premise")
    })
}

fn lin(
    rule: LinRule,
    subject: &Name,
    p: &ScpProcess,
    premises: Vec<LinDerivation>,
) -> LinDerivation {
    LinDerivation {
        rule,
        subject: subject.clone(),
        process: p.clone(),
        premises,
    }
}

/// Builds an SCP derivation of `Δ ⊢ ε(P)` and witnesses of `lin(Δ; ε(P))`
/// from a CP derivation of `Δ ⊢ P`, by induction on the CP derivation.
pub fn encode_derivation(
    d: &CpDerivation,
) -> Result<(ScpDerivation, LinWitnesses), DerivationError> {
    if !validate_cp(d) {
        return Err(DerivationError::Invalid);
    }
    let d = if is_normalized(&d.process, &d.context.names()) {
        d.clone()
    } else {
        cp_check(&d.context, &d.process).ok_or(DerivationError::Invalid)?
    };
    let mut supply = all_names(&d.process);
    supply.extend(d.context.names());
    Ok(Encoder { supply }.go(&d))
}

struct Encoder {
    supply: BTreeSet<Name>,
}

impl Encoder {
    fn fresh(&mut self, like: &Name) -> Name {
        let n = fresh(&self.supply, like.base());
        self.supply.insert(n.clone());
        n
    }

    /// Encodes the premise, then renames the persistent channel `x` to the
    /// fresh continuation name `w`.
    fn continuation(&mut self, d: &CpDerivation, x: &Name) -> (Name, ScpDerivation, LinWitnesses) {
        let (s, l) = self.go(d);
        let w = self.fresh(x);
        let s = rename_scp(&s, x, &w);
        let l = l
            .into_iter()
            .map(|(n, ld)| {
                let n = if n == *x { w.clone() } else { n };
                (n, rename_lin(&ld, x, &w))
            })
            .collect();
        (w, s, l)
    }

    fn go(&mut self, d: &CpDerivation) -> (ScpDerivation, LinWitnesses) {
        use LinRule::*;
        let ctx = &d.context;
        let node = |rule, process: ScpProcess, premises, lin_premises| ScpDerivation {
            rule,
            context: ctx.clone(),
            process,
            premises,
            lin_premises,
        };
        let ty = |n: &Name| ctx.lookup(n).expect("validated").clone();
        let others = |x: &Name| -> Vec<Name> {
            ctx.iter()
                .map(|(n, _)| n.clone())
                .filter(|n| n != x)
                .collect()
        };
        match (&d.process, d.rule) {
            (CpProcess::Fwd(x, y), CpRule::Id) => {
                let p = ScpProcess::Fwd(x.clone(), y.clone());
                let lins = [
                    (x.clone(), lin(Lfwd1, x, &p, vec![])),
                    (y.clone(), lin(Lfwd2, y, &p, vec![])),
                ];
                (
                    node(ScpRule::Id, p, vec![], vec![]),
                    lins.into_iter().collect(),
                )
            }
            (CpProcess::Close(x), CpRule::One) => {
                let p = ScpProcess::Close(x.clone());
                let lins = [(x.clone(), lin(Lclose, x, &p, vec![]))];
                (
                    node(ScpRule::One, p, vec![], vec![]),
                    lins.into_iter().collect(),
                )
            }
            (CpProcess::Wait { chan: x, .. }, CpRule::Bot) => {
                let (s, mut l) = self.go(&d.premises[0]);
                let p = ScpProcess::Wait {
                    chan: x.clone(),
                    body: Arc::new(s.process.clone()),
                };
                let s = weaken_all(s, [(x.clone(), SessionType::Bot)]);
                let mut lins = LinWitnesses::new();
                lins.insert(x.clone(), lin(Lwait, x, &p, vec![]));
                for z in others(x) {
                    let prem = l.remove(&z).expect("premise witnesses cover its context");
                    lins.insert(z.clone(), lin(Lwait2, &z, &p, vec![prem]));
                }
                (node(ScpRule::Bot, p, vec![s], vec![]), lins)
            }
            (CpProcess::Cut { chan: x, ann, .. }, CpRule::Cut) => {
                let (d1, d2) = (&d.premises[0], &d.premises[1]);
                let (s1, mut l1) = self.go(d1);
                let (s2, mut l2) = self.go(d2);
                let p = ScpProcess::Cut {
                    chan: x.clone(),
                    ann: ann.clone(),
                    left: Arc::new(s1.process.clone()),
                    right: Arc::new(s2.process.clone()),
                };
                let lx1 = l1.remove(x).expect("cut channel witnessed on the left");
                let lx2 = l2.remove(x).expect("cut channel witnessed on the right");
                let left_names = d1.context.without(x);
                let right_names = d2.context.without(x);
                let s1 = weaken_all(s1, right_names.iter().cloned());
                let s2 = weaken_all(s2, left_names.iter().cloned());
                let mut lins = LinWitnesses::new();
                for (z, ld) in l1 {
                    lins.insert(z.clone(), lin(Lpcomp1, &z, &p, vec![ld]));
                }
                for (z, ld) in l2 {
                    lins.insert(z.clone(), lin(Lpcomp2, &z, &p, vec![ld]));
                }
                (node(ScpRule::Cut, p, vec![s1, s2], vec![lx1, lx2]), lins)
            }
            (
                CpProcess::Out {
                    chan: x, sent: y, ..
                },
                CpRule::Tensor,
            ) => {
                let (d1, d2) = (&d.premises[0], &d.premises[1]);
                let (s1, mut l1) = self.go(d1);
                let (w, s2, mut l2) = self.continuation(d2, x);
                let p = ScpProcess::Out {
                    chan: x.clone(),
                    sent: y.clone(),
                    payload: Arc::new(s1.process.clone()),
                    cont: w.clone(),
                    body: Arc::new(s2.process.clone()),
                };
                let ly = l1.remove(y).expect("sent channel witnessed");
                let lw = l2.remove(&w).expect("continuation witnessed");
                let xt = (x.clone(), ty(x));
                let left_names = d1.context.without(y);
                let right_names = d2.context.without(x);
                let s1 = weaken_all(s1, right_names.iter().cloned().chain([xt.clone()]));
                let s2 = weaken_all(s2, left_names.iter().cloned().chain([xt]));
                let mut lins = LinWitnesses::new();
                lins.insert(x.clone(), lin(Lout, x, &p, vec![lw]));
                for (z, ld) in l1 {
                    lins.insert(z.clone(), lin(Lout2, &z, &p, vec![ld]));
                }
                for (z, ld) in l2 {
                    lins.insert(z.clone(), lin(Lout3, &z, &p, vec![ld]));
                }
                (node(ScpRule::Tensor, p, vec![s1, s2], vec![ly]), lins)
            }
            (
                CpProcess::Inp {
                    chan: x, recv: y, ..
                },
                CpRule::Par,
            ) => {
                let (w, s, mut l) = self.continuation(&d.premises[0], x);
                let p = ScpProcess::Inp {
                    chan: x.clone(),
                    cont: w.clone(),
                    recv: y.clone(),
                    body: Arc::new(s.process.clone()),
                };
                let ly = l.remove(y).expect("received channel witnessed");
                let lw = l.remove(&w).expect("continuation witnessed");
                let s = weaken_all(s, [(x.clone(), ty(x))]);
                let mut lins = LinWitnesses::new();
                lins.insert(x.clone(), lin(Linp, x, &p, vec![lw]));
                for (z, ld) in l {
                    lins.insert(z.clone(), lin(Linp2, &z, &p, vec![ld]));
                }
                (node(ScpRule::Par, p, vec![s], vec![ly]), lins)
            }
            (CpProcess::Inl { chan: x, .. }, CpRule::Plus1)
            | (CpProcess::Inr { chan: x, .. }, CpRule::Plus2) => {
                let (w, s, mut l) = self.continuation(&d.premises[0], x);
                let body = Arc::new(s.process.clone());
                let (p, rule, principal, congruence) = if d.rule == CpRule::Plus1 {
                    let p = ScpProcess::Inl {
                        chan: x.clone(),
                        cont: w.clone(),
                        body,
                    };
                    (p, ScpRule::Plus1, Linl, Linl2)
                } else {
                    let p = ScpProcess::Inr {
                        chan: x.clone(),
                        cont: w.clone(),
                        body,
                    };
                    (p, ScpRule::Plus2, Linr, Linr2)
                };
                let lw = l.remove(&w).expect("continuation witnessed");
                let s = weaken_all(s, [(x.clone(), ty(x))]);
                let mut lins = LinWitnesses::new();
                lins.insert(x.clone(), lin(principal, x, &p, vec![lw]));
                for (z, ld) in l {
                    lins.insert(z.clone(), lin(congruence, &z, &p, vec![ld]));
                }
                (node(rule, p, vec![s], vec![]), lins)
            }
            (CpProcess::Case { chan: x, .. }, CpRule::With) => {
                let (w1, s1, mut l1) = self.continuation(&d.premises[0], x);
                let (w2, s2, mut l2) = self.continuation(&d.premises[1], x);
                let p = ScpProcess::Case {
                    chan: x.clone(),
                    left_cont: w1.clone(),
                    left: Arc::new(s1.process.clone()),
                    right_cont: w2.clone(),
                    right: Arc::new(s2.process.clone()),
                };
                let lw1 = l1.remove(&w1).expect("continuation witnessed");
                let lw2 = l2.remove(&w2).expect("continuation witnessed");
                let s1 = weaken_all(s1, [(x.clone(), ty(x))]);
                let s2 = weaken_all(s2, [(x.clone(), ty(x))]);
                let mut lins = LinWitnesses::new();
                lins.insert(x.clone(), lin(Lcase, x, &p, vec![lw1, lw2]));
                for (z, ld1) in l1 {
                    let ld2 = l2.remove(&z).expect("both branches type the same names");
                    lins.insert(z.clone(), lin(Lcase2, &z, &p, vec![ld1, ld2]));
                }
                (node(ScpRule::With, p, vec![s1, s2], vec![]), lins)
            }
            _ => unreachable!("validated derivation pairs each rule with its constructor"),
        }
    }
}

/// Builds a CP derivation of `Δ ⊢ δ(P)` from an SCP derivation of `Γ ⊢ P`
/// and witnesses of `lin(Δ; P)`, where `Δ` is `Γ` restricted to `fn(P)`.
///
/// The witnesses must cover exactly the free names of `P`, each must prove
/// linearity of its key in exactly `d.process`, and all must validate.
pub fn decode_derivation(
    d: &ScpDerivation,
    lins: &LinWitnesses,
) -> Result<CpDerivation, DerivationError> {
    if !validate_scp(d) {
        return Err(DerivationError::Invalid);
    }
    for (n, l) in lins {
        if l.subject != *n || l.process != d.process || !validate_lin(l) {
            return Err(DerivationError::WitnessMismatch(format!(
                "the witness for {n} does not prove lin({n}; P) for this process"
            )));
        }
    }
    go_decode(d, lins)
}

fn go_decode(d: &ScpDerivation, lins: &LinWitnesses) -> Result<CpDerivation, DerivationError> {
    use ScpProcess::*;
    let fns = free_names(&d.process);
    let keys: BTreeSet<Name> = lins.keys().cloned().collect();
    if keys != fns {
        let missing: Vec<String> = fns.difference(&keys).map(|n| n.to_string()).collect();
        let extra: Vec<String> = keys.difference(&fns).map(|n| n.to_string()).collect();
        let mut msg = String::new();
        if !missing.is_empty() {
            msg.push_str(&format!(
                "no linearity derivation for {}",
                missing.join(", ")
            ));
        }
        if !extra.is_empty() {
            if !msg.is_empty() {
                msg.push_str("; ");
            }
            msg.push_str(&format!("unexpected witnesses for {}", extra.join(", ")));
        }
        return Err(DerivationError::WitnessMismatch(msg));
    }
    let context = d.context.restrict(&fns);
    let node = |rule, process, premises| {
        Ok(CpDerivation {
            rule,
            context: context.clone(),
            process,
            premises,
        })
    };
    // witnesses for the scope `i`, sorted by the congruence rule chosen for
    // each name: names whose witness uses rule `side` go to this scope
    let route = |side: &[LinRule], i: usize| -> LinWitnesses {
        lins.iter()
            .filter(|(_, l)| side.contains(&l.rule))
            .map(|(n, l)| (n.clone(), l.premises[i].clone()))
            .collect()
    };
    let principal_premise = |x: &Name, i: usize| lins[x].premises[i].clone();
    match &d.process {
        Fwd(..) => node(CpRule::Id, decode(&d.process), vec![]),
        Close(..) => node(CpRule::One, decode(&d.process), vec![]),
        Wait { chan, .. } => {
            let prem = go_decode(&d.premises[0], &route(&[LinRule::Lwait2], 0))?;
            let p = CpProcess::wait(chan.clone(), prem.process.clone());
            node(CpRule::Bot, p, vec![prem])
        }
        Cut { chan, ann, .. } => {
            let mut left = route(&[LinRule::Lpcomp1], 0);
            left.insert(chan.clone(), d.lin_premises[0].clone());
            let mut right = route(&[LinRule::Lpcomp2], 0);
            right.insert(chan.clone(), d.lin_premises[1].clone());
            let l = go_decode(&d.premises[0], &left)?;
            let r = go_decode(&d.premises[1], &right)?;
            let p = CpProcess::cut(
                chan.clone(),
                ann.clone(),
                l.process.clone(),
                r.process.clone(),
            );
            node(CpRule::Cut, p, vec![l, r])
        }
        Out {
            chan, sent, cont, ..
        } => {
            let mut left = route(&[LinRule::Lout2], 0);
            left.insert(sent.clone(), d.lin_premises[0].clone());
            let mut right = route(&[LinRule::Lout3], 0);
            right.insert(cont.clone(), principal_premise(chan, 0));
            let l = go_decode(&d.premises[0], &left)?;
            let r = rename_cp(&go_decode(&d.premises[1], &right)?, cont, chan);
            let p = CpProcess::Out {
                chan: chan.clone(),
                sent: sent.clone(),
                payload: Arc::new(l.process.clone()),
                cont: Arc::new(r.process.clone()),
            };
            node(CpRule::Tensor, p, vec![l, r])
        }
        Inp {
            chan, cont, recv, ..
        } => {
            let mut inner = route(&[LinRule::Linp2], 0);
            inner.insert(cont.clone(), principal_premise(chan, 0));
            inner.insert(recv.clone(), d.lin_premises[0].clone());
            let b = rename_cp(&go_decode(&d.premises[0], &inner)?, cont, chan);
            let p = CpProcess::Inp {
                chan: chan.clone(),
                recv: recv.clone(),
                body: Arc::new(b.process.clone()),
            };
            node(CpRule::Par, p, vec![b])
        }
        Inl { chan, cont, .. } | Inr { chan, cont, .. } => {
            let congruence = if d.rule == ScpRule::Plus1 {
                LinRule::Linl2
            } else {
                LinRule::Linr2
            };
            let mut inner = route(&[congruence], 0);
            inner.insert(cont.clone(), principal_premise(chan, 0));
            let b = rename_cp(&go_decode(&d.premises[0], &inner)?, cont, chan);
            let body = Arc::new(b.process.clone());
            let (rule, p) = if d.rule == ScpRule::Plus1 {
                (
                    CpRule::Plus1,
                    CpProcess::Inl {
                        chan: chan.clone(),
                        body,
                    },
                )
            } else {
                (
                    CpRule::Plus2,
                    CpProcess::Inr {
                        chan: chan.clone(),
                        body,
                    },
                )
            };
            node(rule, p, vec![b])
        }
        Case {
            chan,
            left_cont,
            right_cont,
            ..
        } => {
            let mut left = route(&[LinRule::Lcase2], 0);
            left.insert(left_cont.clone(), principal_premise(chan, 0));
            let mut right = route(&[LinRule::Lcase2], 1);
            right.insert(right_cont.clone(), principal_premise(chan, 1));
            let l = rename_cp(&go_decode(&d.premises[0], &left)?, left_cont, chan);
            let r = rename_cp(&go_decode(&d.premises[1], &right)?, right_cont, chan);
            let p = CpProcess::Case {
                chan: chan.clone(),
                left: Arc::new(l.process.clone()),
                right: Arc::new(r.process.clone()),
            };
            node(CpRule::With, p, vec![l, r])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearity::lin_all;
    use crate::syntax::{alpha_eq, nm};
    use crate::textio::{parse_cp, parse_cp_judgment, parse_scp, parse_scp_judgment};
    use crate::typing::scp_check;

    #[test]
    fn encode_examples() {
        let p = parse_cp("fwd x y").unwrap();
        assert_eq!(encode(&p).to_string(), "fwd x y");
        let p = parse_cp("x[inl]. close x").unwrap();
        assert!(alpha_eq(
            &encode(&p),
            &parse_scp("x[inl>w]. close w").unwrap()
        ));
        let p = parse_cp("x(y). fwd x y").unwrap();
        assert!(alpha_eq(
            &encode(&p),
            &parse_scp("x(w, y). fwd w y").unwrap()
        ));
    }

    #[test]
    fn decode_examples() {
        let p = parse_scp("x[inl>w]. fwd w y").unwrap();
        assert_eq!(decode(&p).to_string(), "x[inl]. fwd x y");
        let p = parse_scp("case x {w. close w; w. wait w. close z}").unwrap();
        assert_eq!(decode(&p).to_string(), "case x {close x; wait x. close z}");
        let p = parse_cp("nu x:1 (close x | wait x. close z)").unwrap();
        assert!(alpha_eq(&decode(&encode(&p)), &p));
    }

    #[test]
    fn decode_avoids_capture() {
        // the received name coincides with the principal channel
        let p = parse_scp("x(w, x). wait x. close w").unwrap();
        let q = decode(&p);
        assert!(
            alpha_eq(&q, &parse_cp("x(y). wait y. close x").unwrap()),
            "{q}"
        );
    }

    #[test]
    fn derivation_examples() {
        let (ctx, p) = parse_cp_judgment("x:1 |- close x").unwrap();
        let d = cp_check(&ctx, &p).unwrap();
        let (s, l) = encode_derivation(&d).unwrap();
        assert_eq!(s.rule, ScpRule::One);
        assert_eq!(l[&nm("x")].rule, LinRule::Lclose);

        let (ctx, p) = parse_cp_judgment("x:1, y:bot |- wait y. close x").unwrap();
        let d = cp_check(&ctx, &p).unwrap();
        let (s, l) = encode_derivation(&d).unwrap();
        assert_eq!(s.rules(), vec![ScpRule::Bot, ScpRule::One]);
        assert_eq!(l[&nm("y")].rules(), vec![LinRule::Lwait]);
        assert_eq!(l[&nm("x")].rules(), vec![LinRule::Lwait2, LinRule::Lclose]);
        assert!(validate_scp(&s));
        assert!(decode_derivation(&s, &l).unwrap().same_as(&d));
    }

    #[test]
    fn decode_strengthens_unused_names() {
        let (ctx, p) = parse_scp_judgment("x:1, z:bot |- close x").unwrap();
        let s = scp_check(&ctx, &p).unwrap();
        let l = lin_all(&ctx.without(&nm("z")), &s.process).unwrap();
        let d = decode_derivation(&s, &l).unwrap();
        assert_eq!(d.rule, CpRule::One);
        assert_eq!(d.context.to_string(), "x:1");
    }

    #[test]
    fn decode_rejects_missing_witness() {
        let (ctx, p) = parse_scp_judgment("x:1, y:bot |- wait y. wait y. close x").unwrap();
        let s = scp_check(&ctx, &p).unwrap();
        let l = lin_all(&ctx.without(&nm("y")), &s.process).unwrap();
        let err = decode_derivation(&s, &l).unwrap_err();
        assert!(
            err.to_string().contains("no linearity derivation for y"),
            "{err}"
        );
    }

    #[test]
    fn scut_round_trip() {
        let (ctx, p) = parse_scp_judgment("z:1 |- nu x:1 (close x | wait x. close z)").unwrap();
        let s = scp_check(&ctx, &p).unwrap();
        let l = lin_all(&ctx, &s.process).unwrap();
        let d = decode_derivation(&s, &l).unwrap();
        assert_eq!(
            d.rules(),
            vec![CpRule::Cut, CpRule::One, CpRule::Bot, CpRule::One]
        );
        assert!(validate_cp(&d));
    }

    #[test]
    fn every_rule_round_trips() {
        for src in [
            "x:1 * 1 |- x[y](close y | close x)",
            "x:bot par bot, z:1 |- x(y). wait y. wait x. close z",
            "x:(1 + bot) & 1 |- case x {x[inl]. close x; close x}",
            "x:bot + 1, z:bot |- x[inr]. wait z. close x",
            "x:1 * bot, y:bot par 1 |- fwd x y",
        ] {
            let (ctx, p) = parse_cp_judgment(src).unwrap();
            let d = cp_check(&ctx, &p).unwrap();
            let (s, l) = encode_derivation(&d).unwrap();
            assert!(validate_scp(&s), "{src}");
            assert!(l.values().all(validate_lin), "{src}");
            assert!(alpha_eq(&s.process, &encode(&p)), "{src}");
            let back = decode_derivation(&s, &l).unwrap();
            assert!(back.same_as(&d), "{src}");
            assert!(scp_check(&ctx, &s.process).unwrap().same_as(&s), "{src}");
        }
    }
}
