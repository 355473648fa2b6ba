//! JSON export of derivations and reduction steps, and indented text trees
//! for terminal output.

use std::fmt::{Display, Write};

use serde_json::{json, Value};

use super::printer::judgment;
use crate::linearity::LinDerivation;
use crate::reduction::{ReductionStep, Side};
use crate::syntax::TypingContext;
use crate::typing::{CpDerivation, ScpDerivation};

fn context(ctx: &TypingContext) -> Value {
    Value::Array(
        ctx.iter()
            .map(|(n, t)| json!([n.to_string(), t.to_string()]))
            .collect(),
    )
}

pub fn lin_derivation(d: &LinDerivation) -> Value {
    json!({
        "rule": d.rule.name(),
        "subject": d.subject.to_string(),
        "process": d.process.to_string(),
        "premises": d.premises.iter().map(lin_derivation).collect::<Vec<_>>(),
    })
}

pub fn cp_derivation(d: &CpDerivation) -> Value {
    json!({
        "rule": d.rule.name(),
        "context": context(&d.context),
        "process": d.process.to_string(),
        "premises": d.premises.iter().map(cp_derivation).collect::<Vec<_>>(),
    })
}

/// Includes the embedded linearity derivations under `lin`.
pub fn scp_derivation(d: &ScpDerivation) -> Value {
    json!({
        "rule": d.rule.name(),
        "context": context(&d.context),
        "process": d.process.to_string(),
        "premises": d.premises.iter().map(scp_derivation).collect::<Vec<_>>(),
        "lin": d.lin_premises.iter().map(lin_derivation).collect::<Vec<_>>(),
    })
}

/// `{rule, source, target, position}`; positions are `"left"`/`"right"`.
pub fn step<P: Display>(s: &ReductionStep<P>) -> Value {
    let position: Vec<&str> = s
        .position
        .iter()
        .map(|side| match side {
            Side::Left => "left",
            Side::Right => "right",
        })
        .collect();
    json!({
        "rule": s.rule.name(),
        "source": s.source.to_string(),
        "target": s.target.to_string(),
        "position": position,
    })
}

fn line(out: &mut String, depth: usize, rule: &str, text: &str) {
    let _ = writeln!(out, "{:indent$}{rule:<6} {text}", "", indent = 2 * depth);
}

fn lin_tree_at(out: &mut String, d: &LinDerivation, depth: usize) {
    line(
        out,
        depth,
        d.rule.name(),
        &format!("lin({}; {})", d.subject, d.process),
    );
    for p in &d.premises {
        lin_tree_at(out, p, depth + 1);
    }
}

/// One judgment per line, premises indented under their conclusion.
pub fn lin_tree(d: &LinDerivation) -> String {
    let mut out = String::new();
    lin_tree_at(&mut out, d, 0);
    out
}

fn cp_tree_at(out: &mut String, d: &CpDerivation, depth: usize) {
    line(out, depth, d.rule.name(), &judgment(&d.context, &d.process));
    for p in &d.premises {
        cp_tree_at(out, p, depth + 1);
    }
}

pub fn cp_tree(d: &CpDerivation) -> String {
    let mut out = String::new();
    cp_tree_at(&mut out, d, 0);
    out
}

fn scp_tree_at(out: &mut String, d: &ScpDerivation, depth: usize) {
    line(out, depth, d.rule.name(), &judgment(&d.context, &d.process));
    for l in &d.lin_premises {
        lin_tree_at(out, l, depth + 1);
    }
    for p in &d.premises {
        scp_tree_at(out, p, depth + 1);
    }
}

/// Embedded linearity derivations are listed before the typing premises.
pub fn scp_tree(d: &ScpDerivation) -> String {
    let mut out = String::new();
    scp_tree_at(&mut out, d, 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{enumerate_steps, EnumOptions};
    use crate::textio::{parse_cp, parse_cp_judgment, parse_scp_judgment};
    use crate::typing::{cp_check, scp_check};

    #[test]
    fn derivation_shape() {
        let (c, p) = parse_cp_judgment("x:1, y:bot |- wait y. close x").unwrap();
        let v = cp_derivation(&cp_check(&c, &p).unwrap());
        assert_eq!(v["rule"], "C⊥");
        assert_eq!(v["context"], json!([["x", "1"], ["y", "bot"]]));
        assert_eq!(v["premises"][0]["process"], "close x");

        let (c, p) = parse_scp_judgment("z:1 |- nu x:1 (close x | wait x. close z)").unwrap();
        let v = scp_derivation(&scp_check(&c, &p).unwrap());
        assert_eq!(v["lin"][0]["rule"], "Lclose");
    }

    #[test]
    fn step_shape() {
        let p = parse_cp("nu x:bot (fwd x y | close x)").unwrap();
        let s = &enumerate_steps(&p, EnumOptions::default())[0];
        let v = step(s);
        assert_eq!(v["rule"], "βfwd");
        assert_eq!(v["target"], "close y");
        assert_eq!(v["position"], json!([]));
    }

    #[test]
    fn trees_indent_premises() {
        let (c, p) = parse_cp_judgment("x:1, y:bot |- wait y. close x").unwrap();
        let t = cp_tree(&cp_check(&c, &p).unwrap());
        assert_eq!(
            t,
            "C⊥     x:1, y:bot |- wait y. close x\n  C1     x:1 |- close x\n"
        );
    }
}
