//! Canonical surface syntax. Every `Display` impl here is the inverse of the
//! corresponding parser up to α-equivalence.

use std::fmt::{self, Display, Formatter};

use crate::syntax::{CpProcess, ScpProcess, SessionType, TypingContext};

/// Operator spellings for one output style.
struct Glyphs {
    one: &'static str,
    bot: &'static str,
    tensor: &'static str,
    par: &'static str,
    plus: &'static str,
    with: &'static str,
}

const ASCII: Glyphs = Glyphs {
    one: "1",
    bot: "bot",
    tensor: "*",
    par: "par",
    plus: "+",
    with: "&",
};

const UNICODE: Glyphs = Glyphs {
    one: "1",
    bot: "⊥",
    tensor: "⊗",
    par: "⅋",
    plus: "⊕",
    with: "&",
};

fn write_type(f: &mut Formatter<'_>, a: &SessionType, g: &Glyphs) -> fmt::Result {
    use SessionType::*;
    let (op, l, r) = match a {
        One => return f.write_str(g.one),
        Bot => return f.write_str(g.bot),
        Tensor(l, r) => (g.tensor, l, r),
        Par(l, r) => (g.par, l, r),
        Plus(l, r) => (g.plus, l, r),
        With(l, r) => (g.with, l, r),
    };
    write_operand(f, l, g)?;
    write!(f, " {op} ")?;
    write_operand(f, r, g)
}

fn write_operand(f: &mut Formatter<'_>, a: &SessionType, g: &Glyphs) -> fmt::Result {
    if a.is_atom() {
        write_type(f, a, g)
    } else {
        f.write_str("(")?;
        write_type(f, a, g)?;
        f.write_str(")")
    }
}

impl Display for SessionType {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_type(f, self, &ASCII)
    }
}

struct UnicodeType<'a>(&'a SessionType);

impl Display for UnicodeType<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_type(f, self.0, &UNICODE)
    }
}

/// Mathematical notation for a type. Output only; the parser reads ASCII.
pub fn type_unicode(a: &SessionType) -> String {
    UnicodeType(a).to_string()
}

/// A cut annotation: compound types are parenthesized so the following `(`
/// of the cut body cannot be misread.
struct Annotation<'a>(&'a SessionType);

impl Display for Annotation<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_operand(f, self.0, &ASCII)
    }
}

impl Display for TypingContext {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (i, (n, t)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}:{t}")?;
        }
        Ok(())
    }
}

impl Display for CpProcess {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        use CpProcess::*;
        match self {
            Fwd(x, y) => write!(f, "fwd {x} {y}"),
            Cut {
                chan,
                ann,
                left,
                right,
            } => write!(f, "nu {chan}:{} ({left} | {right})", Annotation(ann)),
            Out {
                chan,
                sent,
                payload,
                cont,
            } => write!(f, "{chan}[{sent}]({payload} | {cont})"),
            Inp { chan, recv, body } => write!(f, "{chan}({recv}). {body}"),
            Inl { chan, body } => write!(f, "{chan}[inl]. {body}"),
            Inr { chan, body } => write!(f, "{chan}[inr]. {body}"),
            Case { chan, left, right } => write!(f, "case {chan} {{{left}; {right}}}"),
            Close(x) => write!(f, "close {x}"),
            Wait { chan, body } => write!(f, "wait {chan}. {body}"),
        }
    }
}

impl Display for ScpProcess {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        use ScpProcess::*;
        match self {
            Fwd(x, y) => write!(f, "fwd {x} {y}"),
            Cut {
                chan,
                ann,
                left,
                right,
            } => write!(f, "nu {chan}:{} ({left} | {right})", Annotation(ann)),
            Out {
                chan,
                sent,
                payload,
                cont,
                body,
            } => write!(f, "{chan}[{sent}>{cont}]({payload} | {body})"),
            Inp {
                chan,
                cont,
                recv,
                body,
            } => write!(f, "{chan}({cont}, {recv}). {body}"),
            Inl { chan, cont, body } => write!(f, "{chan}[inl>{cont}]. {body}"),
            Inr { chan, cont, body } => write!(f, "{chan}[inr>{cont}]. {body}"),
            Case {
                chan,
                left_cont,
                left,
                right_cont,
                right,
            } => write!(
                f,
                "case {chan} {{{left_cont}. {left}; {right_cont}. {right}}}"
            ),
            Close(x) => write!(f, "close {x}"),
            Wait { chan, body } => write!(f, "wait {chan}. {body}"),
        }
    }
}

/// `ctx |- proc`, with no leading space for the empty context.
pub fn judgment<P: Display>(ctx: &TypingContext, p: &P) -> String {
    if ctx.is_empty() {
        format!("|- {p}")
    } else {
        format!("{ctx} |- {p}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::nm;
    use SessionType::*;

    #[test]
    fn compound_operands_are_parenthesized() {
        let t = SessionType::with(SessionType::plus(One, Bot), One);
        assert_eq!(t.to_string(), "(1 + bot) & 1");
        assert_eq!(type_unicode(&t), "(1 ⊕ ⊥) & 1");
    }

    #[test]
    fn processes() {
        assert_eq!(CpProcess::fwd(nm("x"), nm("y")).to_string(), "fwd x y");
        let p = ScpProcess::wait(
            nm("y"),
            ScpProcess::wait(nm("y"), ScpProcess::close(nm("x"))),
        );
        assert_eq!(p.to_string(), "wait y. wait y. close x");
        let c = CpProcess::cut(
            nm("x"),
            SessionType::tensor(One, Bot),
            CpProcess::close(nm("x")),
            CpProcess::close(nm("z")),
        );
        assert_eq!(c.to_string(), "nu x:(1 * bot) (close x | close z)");
    }
}
