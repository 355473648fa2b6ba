//! Property checks over typed processes. Each check returns a [`Report`]
//! rather than panicking, so callers can assert that it is empty.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::linearity::{lin_all, lin_check, LinWitnesses};
use crate::reduction::{enumerate_steps, equivalents, EnumOptions, ReductionStep};
use crate::syntax::binding::all_names;
use crate::syntax::{
    alpha_eq, canonical, fresh, CpProcess, ProcessExt, ScpProcess, SessionType, TypingContext,
};
use crate::textio::judgment;
use crate::translation::{decode, decode_derivation, encode, encode_derivation};
use crate::typing::{
    cp_check, scp_check, strengthen, validate_cp, validate_scp, weaken, CpDerivation, ScpDerivation,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// The judgment or step that failed, printed.
    pub instance: String,
    pub property: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    /// Number of instances examined.
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new(suite: &str) -> Report {
        Report {
            suite: suite.to_string(),
            ..Report::default()
        }
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, instance: impl fmt::Display, property: &str, detail: impl Into<String>) {
        self.violations.push(Violation {
            instance: instance.to_string(),
            property: property.to_string(),
            detail: detail.into(),
        });
    }

    /// Adds the counts and violations of `other`.
    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    /// Runs `f` on every item in parallel and merges the results.
    pub fn collect<T: Sync>(
        suite: &str,
        items: &[T],
        f: impl Fn(&T) -> Report + Sync + Send,
    ) -> Report {
        items.par_iter().map(f).reduce(
            || Report::new(suite),
            |mut a, b| {
                a.absorb(b);
                a
            },
        )
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} checked, {} violations",
            self.suite,
            self.checked,
            self.violations.len()
        )?;
        for v in &self.violations {
            writeln!(f, "  [{}] {}: {}", v.property, v.instance, v.detail)?;
        }
        Ok(())
    }
}

/// Step enumeration used by the subject-reduction and agreement suites.
pub fn suite_options() -> EnumOptions {
    EnumOptions::with_closure(2)
}

/// Checks one SCP step: the target is typed and linear in `ctx` restricted
/// to its free names, and free names are preserved.
pub fn check_scp_step(ctx: &TypingContext, step: &ReductionStep<ScpProcess>) -> Option<String> {
    let q = &step.target;
    let fq = q.free_names();
    if fq != step.source.free_names() {
        return Some(format!("{} changes the free names", step.rule));
    }
    let restricted = ctx.restrict(&fq);
    if scp_check(&restricted, q).is_none() {
        return Some(format!("{} target {q} is not typed", step.rule));
    }
    if lin_all(&restricted, q).is_none() {
        return Some(format!("{} target {q} is not linear", step.rule));
    }
    None
}

/// Checks every step from `p` (with ≡-closure of depth 2) against
/// [`check_scp_step`]. The input itself must be typed and linear.
pub fn check_subject_reduction(ctx: &TypingContext, p: &ScpProcess, lins: &LinWitnesses) -> Report {
    let steps = enumerate_steps(p, suite_options());
    check_subject_reduction_steps(ctx, p, lins, &steps)
}

/// As [`check_subject_reduction`], over a given list of steps.
pub fn check_subject_reduction_steps(
    ctx: &TypingContext,
    p: &ScpProcess,
    lins: &LinWitnesses,
    steps: &[ReductionStep<ScpProcess>],
) -> Report {
    let mut r = Report::new("subject-reduction");
    let instance = judgment(ctx, p);
    let names: BTreeSet<_> = lins.keys().cloned().collect();
    if scp_check(ctx, p).is_none() || names != ctx.names() || lin_all(ctx, p).is_none() {
        r.fail(&instance, "precondition", "input is not typed and linear");
        return r;
    }
    for s in steps {
        r.checked += 1;
        if let Some(detail) = check_scp_step(ctx, s) {
            r.fail(&instance, "scp-subject-reduction", detail);
        }
    }
    r
}

/// CP subject reduction: every step target is typed in `ctx` restricted to
/// its free names.
pub fn check_subject_reduction_cp(ctx: &TypingContext, p: &CpProcess) -> Report {
    let mut r = Report::new("subject-reduction");
    let instance = judgment(ctx, p);
    if cp_check(ctx, p).is_none() {
        r.fail(&instance, "precondition", "input is not typed");
        return r;
    }
    for s in enumerate_steps(p, suite_options()) {
        r.checked += 1;
        let q = &s.target;
        if q.free_names() != p.free_names() {
            r.fail(
                &instance,
                "cp-subject-reduction",
                format!("{} changes the free names", s.rule),
            );
        } else if cp_check(&ctx.restrict(&q.free_names()), q).is_none() {
            r.fail(
                &instance,
                "cp-subject-reduction",
                format!("{} target {q} is not typed", s.rule),
            );
        }
    }
    r
}

/// Input to [`check_adequacy`].
pub enum AdequacyInput<'a> {
    Cp(&'a CpDerivation),
    Scp(&'a ScpDerivation, &'a LinWitnesses),
}

/// The translations are mutually inverse on processes and derivations.
///
/// For a CP derivation `D` of `Δ ⊢ P`: δ(ε(P)) = P, `Δ ⊢ ε(P)` in SCP,
/// `lin(Δ; ε(P))`, and δ(ε(D)) = D. For an SCP derivation with witnesses:
/// δ succeeds, ε(δ(P)) = P and ε(δ(D)) = D.
pub fn check_adequacy(input: AdequacyInput<'_>) -> Report {
    let mut r = Report::new("adequacy");
    r.checked = 1;
    match input {
        AdequacyInput::Cp(d) => {
            let (ctx, p) = (&d.context, &d.process);
            let instance = judgment(ctx, p);
            let e = encode(p);
            if !alpha_eq(&decode(&e), p) {
                r.fail(
                    &instance,
                    "decode-encode",
                    format!("decodes to {}", decode(&e)),
                );
            }
            if scp_check(ctx, &e).is_none() {
                r.fail(&instance, "encode-typed", format!("{e} is not SCP-typed"));
            }
            if lin_all(ctx, &e).is_none() {
                r.fail(&instance, "encode-linear", format!("{e} is not linear"));
            }
            match encode_derivation(d) {
                Err(err) => r.fail(&instance, "encode-derivation", err.to_string()),
                Ok((sd, lins)) => match decode_derivation(&sd, &lins) {
                    Err(err) => r.fail(&instance, "decode-derivation", err.to_string()),
                    Ok(back) if !back.same_as(d) => {
                        r.fail(&instance, "derivation-round-trip", "δ(ε(D)) differs from D")
                    }
                    Ok(_) => {}
                },
            }
        }
        AdequacyInput::Scp(d, lins) => {
            let instance = judgment(&d.context, &d.process);
            match decode_derivation(d, lins) {
                Err(err) => r.fail(&instance, "decode-derivation", err.to_string()),
                Ok(cd) => {
                    if !alpha_eq(&encode(&decode(&d.process)), &d.process) {
                        r.fail(&instance, "encode-decode", "ε(δ(P)) differs from P");
                    }
                    match encode_derivation(&cd) {
                        Ok((sd, _)) => {
                            let expected = strengthen_to(d, &cd.context);
                            if !expected.is_some_and(|e| sd.same_as(&e)) {
                                r.fail(
                                    &instance,
                                    "derivation-round-trip",
                                    "ε(δ(D)) differs from D",
                                );
                            }
                        }
                        Err(err) => r.fail(&instance, "encode-derivation", err.to_string()),
                    }
                }
            }
        }
    }
    r
}

/// `d` with every name outside `keep` strengthened away.
fn strengthen_to(d: &ScpDerivation, keep: &TypingContext) -> Option<ScpDerivation> {
    let mut out = d.clone();
    for (n, _) in d.context.iter() {
        if !keep.contains(n) {
            out = strengthen(&out, n).ok()?;
        }
    }
    Some(out)
}

/// Weakening then strengthening by a fresh name is the identity, and the
/// weakened derivation is valid.
pub fn check_weakening(d: &ScpDerivation) -> Report {
    let mut r = Report::new("lemmas");
    r.checked = 1;
    let instance = judgment(&d.context, &d.process);
    let mut avoid = all_names(&d.process);
    avoid.extend(d.context.names());
    let z = fresh(&avoid, "z");
    for a in [
        SessionType::One,
        SessionType::tensor(SessionType::Bot, SessionType::One),
    ] {
        match weaken(d, &z, &a) {
            Err(e) => r.fail(&instance, "weakening", e.to_string()),
            Ok(w) => {
                if !validate_scp(&w) {
                    r.fail(&instance, "weakening", "weakened derivation is invalid");
                }
                match strengthen(&w, &z) {
                    Ok(s) if s == *d => {}
                    Ok(_) => r.fail(
                        &instance,
                        "strengthening",
                        "round trip changed the derivation",
                    ),
                    Err(e) => r.fail(&instance, "strengthening", e.to_string()),
                }
            }
        }
    }
    r
}

/// Linearity facts about `p`, typed in `ctx`:
/// `lin(x; P)` implies `x ∈ fn(P)`; typing plus linearity gives
/// `fn(P) = dom Δ`; linearity is invariant under renaming to a fresh name.
pub fn check_linearity_lemmas(ctx: &TypingContext, p: &ScpProcess) -> Report {
    let mut r = Report::new("lemmas");
    r.checked = 1;
    let instance = judgment(ctx, p);
    let fnp = p.free_names();
    let mut names = all_names(p);
    names.extend(ctx.names());
    let outsider = fresh(&names, "q");
    for x in names.iter().chain([&outsider]) {
        if lin_check(x, p).is_some() && !fnp.contains(x) {
            r.fail(
                &instance,
                "linear-names-are-free",
                format!("lin({x}) holds but {x} is not free"),
            );
        }
    }
    if scp_check(ctx, p).is_some() && lin_all(ctx, p).is_some() && fnp != ctx.names() {
        r.fail(
            &instance,
            "free-names-match-context",
            "fn(P) differs from dom Δ",
        );
    }
    for x in &fnp {
        let y = fresh(&names, x.base());
        let q = p.rename(x, &y);
        if lin_check(x, p).is_some() != lin_check(&y, &q).is_some() {
            r.fail(
                &instance,
                "linearity-genericity",
                format!("renaming {x} to {y}"),
            );
        }
        for z in fnp.iter().filter(|z| *z != x) {
            if lin_check(z, p).is_some() != lin_check(z, &q).is_some() {
                r.fail(
                    &instance,
                    "linearity-genericity",
                    format!("lin({z}) after renaming {x}"),
                );
            }
        }
    }
    r
}

/// Every process within `depth` rewrites of `p` keeps the typing (both
/// calculi) and the linearity (SCP) of `p`.
pub fn check_equiv_preservation(d: &CpDerivation, depth: usize) -> Report {
    let mut r = Report::new("lemmas");
    let ctx = &d.context;
    let instance = judgment(ctx, &d.process);
    for (q, _) in equivalents(&d.process, depth) {
        r.checked += 1;
        if cp_check(ctx, &q).is_none() {
            r.fail(&instance, "equiv-preserves-cp-typing", q.to_string());
        }
    }
    let e = encode(&d.process);
    for (q, _) in equivalents(&e, depth) {
        r.checked += 1;
        if scp_check(ctx, &q).is_none() {
            r.fail(&instance, "equiv-preserves-scp-typing", q.to_string());
        }
        if lin_all(ctx, &q).is_none() {
            r.fail(&instance, "equiv-preserves-linearity", q.to_string());
        }
    }
    r
}

/// Native SCP steps from `p` coincide up to α with the CP steps of δ(p)
/// carried back through ε; both sides use ≡-closure of depth 2.
pub fn check_semantics_agreement(p: &ScpProcess) -> Report {
    let mut r = Report::new("agreement");
    r.checked = 1;
    let native: BTreeSet<_> = enumerate_steps(p, suite_options())
        .into_iter()
        .map(|s| canonical(&s.target))
        .collect();
    let transported: BTreeSet<_> = enumerate_steps(&decode(p), suite_options())
        .into_iter()
        .map(|s| canonical(&encode(&s.target)))
        .collect();
    if native != transported {
        let only_native = native.difference(&transported).count();
        let only_cp = transported.difference(&native).count();
        r.fail(
            p,
            "semantics-agreement",
            format!("{only_native} targets only in SCP, {only_cp} only through CP"),
        );
    }
    r
}

/// The SCP derivation and witnesses for an enumerated CP judgment.
pub fn scp_counterpart(d: &CpDerivation) -> Option<(ScpDerivation, LinWitnesses)> {
    encode_derivation(d)
        .ok()
        .filter(|(sd, _)| validate_scp(sd) && validate_cp(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::StepRule;
    use crate::textio::{parse_cp_judgment, parse_scp_judgment};

    fn cp_derivation(src: &str) -> CpDerivation {
        let (c, p) = parse_cp_judgment(src).unwrap();
        cp_check(&c, &p).unwrap()
    }

    #[test]
    fn adequacy_on_an_axiom() {
        let d = cp_derivation("x:1 |- close x");
        let r = check_adequacy(AdequacyInput::Cp(&d));
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn adequacy_rejects_the_nonlinear_example() {
        let (ctx, p) = parse_scp_judgment("x:1, y:bot |- wait y. wait y. close x").unwrap();
        let d = scp_check(&ctx, &p).unwrap();
        let lins: LinWitnesses = [(
            crate::syntax::nm("x"),
            lin_check(&crate::syntax::nm("x"), &p).unwrap(),
        )]
        .into_iter()
        .collect();
        let r = check_adequacy(AdequacyInput::Scp(&d, &lins));
        assert_eq!(r.violations.len(), 1);
        assert!(
            r.violations[0]
                .detail
                .contains("no linearity derivation for y"),
            "{r}"
        );
    }

    #[test]
    fn subject_reduction_instances() {
        let (ctx, p) = parse_scp_judgment(
            "z:1 |- nu x:1 + 1 (x[inl>w]. close w | case x {v. wait v. close z; v. wait v. close z})",
        )
        .unwrap();
        let lins = lin_all(&ctx, &p).unwrap();
        let r = check_subject_reduction(&ctx, &p, &lins);
        assert!(r.is_ok() && r.checked > 0, "{r}");

        let (ctx, p) = parse_scp_judgment("y:1 |- nu x:bot (fwd x y | close x)").unwrap();
        let lins = lin_all(&ctx, &p).unwrap();
        let steps = enumerate_steps(&p, suite_options());
        assert_eq!(steps[0].rule, StepRule::BetaFwd);
        assert!(check_subject_reduction_steps(&ctx, &p, &lins, &steps).is_ok());

        // a corrupted target is caught
        let mut bad = steps.clone();
        bad[0].target = crate::textio::parse_scp("wait y. close y").unwrap();
        assert!(!check_subject_reduction_steps(&ctx, &p, &lins, &bad).is_ok());
    }

    #[test]
    fn lemma_checks_pass_on_examples() {
        let d = cp_derivation("z:1 |- nu x:bot (wait x. close z | close x)");
        let (sd, _) = scp_counterpart(&d).unwrap();
        assert!(check_weakening(&sd).is_ok());
        assert!(check_linearity_lemmas(&d.context, &sd.process).is_ok());
        assert!(check_equiv_preservation(&d, 2).is_ok());
        assert!(check_semantics_agreement(&sd.process).is_ok());
    }
}
