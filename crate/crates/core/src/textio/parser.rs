//! Recursive-descent parser for the ASCII surface syntax.

use thiserror::Error;

use crate::syntax::{Calculus, CpProcess, Name, ScpProcess, SessionType, TypingContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

const KEYWORDS: [&str; 9] = [
    "fwd", "nu", "case", "close", "wait", "inl", "inr", "bot", "par",
];

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    One,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Bar,
    Turnstile,
    Semi,
    Colon,
    Comma,
    Dot,
    Star,
    Plus,
    Amp,
    Gt,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => {
                let s = match other {
                    Tok::One => "1",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrack => "[",
                    Tok::RBrack => "]",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::Bar => "|",
                    Tok::Turnstile => "|-",
                    Tok::Semi => ";",
                    Tok::Colon => ":",
                    Tok::Comma => ",",
                    Tok::Dot => ".",
                    Tok::Star => "*",
                    Tok::Plus => "+",
                    Tok::Amp => "&",
                    Tok::Gt => ">",
                    Tok::Ident(_) | Tok::Eof => unreachable!(),
                };
                format!("`{s}`")
            }
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: start_line,
                col: start_col,
            });
            continue;
        } else {
            let two = chars.get(i + 1).copied();
            let (tok, len) = match (c, two) {
                ('|', Some('-')) => (Tok::Turnstile, 2),
                ('|', _) => (Tok::Bar, 1),
                ('1', _) => (Tok::One, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBrack, 1),
                (']', _) => (Tok::RBrack, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                (';', _) => (Tok::Semi, 1),
                (':', _) => (Tok::Colon, 1),
                (',', _) => (Tok::Comma, 1),
                ('.', _) => (Tok::Dot, 1),
                ('*', _) => (Tok::Star, 1),
                ('+', _) => (Tok::Plus, 1),
                ('&', _) => (Tok::Amp, 1),
                ('>', _) => (Tok::Gt, 1),
                _ => {
                    return Err(ParseError {
                        line,
                        col,
                        message: format!("unexpected character {c:?}"),
                    })
                }
            };
            advance(len, &mut i, &mut col);
            tok
        };
        out.push(Spanned {
            tok,
            line: start_line,
            col: start_col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        let s = &self.toks[self.pos];
        Err(ParseError {
            line: s.line,
            col: s.col,
            message: message.into(),
        })
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!(
                "expected {}, found {}",
                t.describe(),
                self.peek().describe()
            ))
        }
    }

    fn keyword(&self) -> Option<&str> {
        match self.peek() {
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => Some(s.as_str()),
            _ => None,
        }
    }

    fn name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => {
                self.error(format!("keyword `{s}` cannot be used as a name"))
            }
            Tok::Ident(s) => match Name::parse(&s) {
                Some(n) => {
                    self.bump();
                    Ok(n)
                }
                None => self.error(format!("invalid name `{s}`")),
            },
            t => self.error(format!("expected a name, found {}", t.describe())),
        }
    }

    fn finish(&self) -> PResult<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => self.error(format!("unexpected {} after end of input", t.describe())),
        }
    }

    fn ty(&mut self) -> PResult<SessionType> {
        let left = self.ty_operand()?;
        let ctor: fn(SessionType, SessionType) -> SessionType = match self.peek() {
            Tok::Star => SessionType::tensor,
            Tok::Plus => SessionType::plus,
            Tok::Amp => SessionType::with,
            Tok::Ident(s) if s == "par" => SessionType::par,
            _ => return Ok(left),
        };
        self.bump();
        let right = self.ty()?;
        Ok(ctor(left, right))
    }

    fn ty_operand(&mut self) -> PResult<SessionType> {
        match self.peek() {
            Tok::One => {
                self.bump();
                Ok(SessionType::One)
            }
            Tok::Ident(s) if s == "bot" => {
                self.bump();
                Ok(SessionType::Bot)
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            t => self.error(format!("expected a type, found {}", t.describe())),
        }
    }

    fn context(&mut self) -> PResult<TypingContext> {
        let mut ctx = TypingContext::new();
        if matches!(self.peek(), Tok::Turnstile | Tok::Eof) {
            return Ok(ctx);
        }
        loop {
            let (line, col) = (self.toks[self.pos].line, self.toks[self.pos].col);
            let n = self.name()?;
            self.expect(Tok::Colon)?;
            let t = self.ty()?;
            if ctx.push(n.clone(), t).is_err() {
                return Err(ParseError {
                    line,
                    col,
                    message: format!("duplicate context name `{n}`"),
                });
            }
            if *self.peek() != Tok::Comma {
                return Ok(ctx);
            }
            self.bump();
        }
    }

    fn distinct(&self, a: &Name, b: &Name) -> PResult<()> {
        if a == b {
            self.error(format!("`{a}` is bound twice in the same scope"))
        } else {
            Ok(())
        }
    }

    /// A label selection `[inl` or `[inr` after the channel name.
    fn label(&mut self) -> Option<bool> {
        match self.peek() {
            Tok::Ident(s) if s == "inl" => Some(true),
            Tok::Ident(s) if s == "inr" => Some(false),
            _ => None,
        }
    }

    fn cp(&mut self) -> PResult<CpProcess> {
        match self.keyword() {
            Some("fwd") => {
                self.bump();
                Ok(CpProcess::fwd(self.name()?, self.name()?))
            }
            Some("nu") => {
                self.bump();
                let x = self.name()?;
                self.expect(Tok::Colon)?;
                let a = self.ty()?;
                self.expect(Tok::LParen)?;
                let p = self.cp()?;
                self.expect(Tok::Bar)?;
                let q = self.cp()?;
                self.expect(Tok::RParen)?;
                Ok(CpProcess::cut(x, a, p, q))
            }
            Some("case") => {
                self.bump();
                let x = self.name()?;
                self.expect(Tok::LBrace)?;
                if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Dot {
                    return self.error("case branches bind no continuation in CP");
                }
                let p = self.cp()?;
                self.expect(Tok::Semi)?;
                let q = self.cp()?;
                self.expect(Tok::RBrace)?;
                Ok(CpProcess::case(x, p, q))
            }
            Some("close") => {
                self.bump();
                Ok(CpProcess::close(self.name()?))
            }
            Some("wait") => {
                self.bump();
                let x = self.name()?;
                self.expect(Tok::Dot)?;
                Ok(CpProcess::wait(x, self.cp()?))
            }
            _ => {
                let x = self.name()?;
                match self.peek() {
                    Tok::LBrack => {
                        self.bump();
                        if let Some(left) = self.label() {
                            self.bump();
                            if *self.peek() == Tok::Gt {
                                return self.error("selection binds no continuation in CP");
                            }
                            self.expect(Tok::RBrack)?;
                            self.expect(Tok::Dot)?;
                            let p = self.cp()?;
                            return Ok(if left {
                                CpProcess::inl(x, p)
                            } else {
                                CpProcess::inr(x, p)
                            });
                        }
                        let y = self.name()?;
                        if *self.peek() == Tok::Gt {
                            return self.error("output binds no continuation in CP");
                        }
                        self.expect(Tok::RBrack)?;
                        self.expect(Tok::LParen)?;
                        let p = self.cp()?;
                        self.expect(Tok::Bar)?;
                        let q = self.cp()?;
                        self.expect(Tok::RParen)?;
                        Ok(CpProcess::out(x, y, p, q))
                    }
                    Tok::LParen => {
                        self.bump();
                        let y = self.name()?;
                        if *self.peek() == Tok::Comma {
                            return self.error("input binds no continuation in CP");
                        }
                        self.expect(Tok::RParen)?;
                        self.expect(Tok::Dot)?;
                        Ok(CpProcess::inp(x, y, self.cp()?))
                    }
                    t => self.error(format!(
                        "expected `[` or `(` after channel, found {}",
                        t.describe()
                    )),
                }
            }
        }
    }

    fn scp(&mut self) -> PResult<ScpProcess> {
        match self.keyword() {
            Some("fwd") => {
                self.bump();
                Ok(ScpProcess::fwd(self.name()?, self.name()?))
            }
            Some("nu") => {
                self.bump();
                let x = self.name()?;
                self.expect(Tok::Colon)?;
                let a = self.ty()?;
                self.expect(Tok::LParen)?;
                let p = self.scp()?;
                self.expect(Tok::Bar)?;
                let q = self.scp()?;
                self.expect(Tok::RParen)?;
                Ok(ScpProcess::cut(x, a, p, q))
            }
            Some("case") => {
                self.bump();
                let x = self.name()?;
                self.expect(Tok::LBrace)?;
                let w1 = self.name()?;
                self.expect(Tok::Dot)?;
                let p = self.scp()?;
                self.expect(Tok::Semi)?;
                let w2 = self.name()?;
                self.expect(Tok::Dot)?;
                let q = self.scp()?;
                self.expect(Tok::RBrace)?;
                Ok(ScpProcess::case(x, w1, p, w2, q))
            }
            Some("close") => {
                self.bump();
                Ok(ScpProcess::close(self.name()?))
            }
            Some("wait") => {
                self.bump();
                let x = self.name()?;
                self.expect(Tok::Dot)?;
                Ok(ScpProcess::wait(x, self.scp()?))
            }
            _ => {
                let x = self.name()?;
                match self.peek() {
                    Tok::LBrack => {
                        self.bump();
                        if let Some(left) = self.label() {
                            self.bump();
                            if *self.peek() != Tok::Gt {
                                return self.error("selection must bind a continuation: `[inl>w]`");
                            }
                            self.bump();
                            let w = self.name()?;
                            self.expect(Tok::RBrack)?;
                            self.expect(Tok::Dot)?;
                            let p = self.scp()?;
                            return Ok(if left {
                                ScpProcess::inl(x, w, p)
                            } else {
                                ScpProcess::inr(x, w, p)
                            });
                        }
                        let y = self.name()?;
                        if *self.peek() != Tok::Gt {
                            return self.error("output must bind a continuation: `x[y>w]`");
                        }
                        self.bump();
                        let w = self.name()?;
                        self.expect(Tok::RBrack)?;
                        self.expect(Tok::LParen)?;
                        let p = self.scp()?;
                        self.expect(Tok::Bar)?;
                        let q = self.scp()?;
                        self.expect(Tok::RParen)?;
                        Ok(ScpProcess::out(x, y, p, w, q))
                    }
                    Tok::LParen => {
                        self.bump();
                        let w = self.name()?;
                        if *self.peek() != Tok::Comma {
                            return self.error("input must bind a continuation: `x(w, y)`");
                        }
                        self.bump();
                        let y = self.name()?;
                        self.distinct(&w, &y)?;
                        self.expect(Tok::RParen)?;
                        self.expect(Tok::Dot)?;
                        Ok(ScpProcess::inp(x, w, y, self.scp()?))
                    }
                    t => self.error(format!(
                        "expected `[` or `(` after channel, found {}",
                        t.describe()
                    )),
                }
            }
        }
    }
}

fn whole<T>(src: &str, f: impl FnOnce(&mut Parser) -> PResult<T>) -> PResult<T> {
    let mut p = Parser::new(src)?;
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

pub fn parse_type(src: &str) -> PResult<SessionType> {
    whole(src, Parser::ty)
}

pub fn parse_context(src: &str) -> PResult<TypingContext> {
    whole(src, Parser::context)
}

pub fn parse_cp(src: &str) -> PResult<CpProcess> {
    whole(src, Parser::cp)
}

pub fn parse_scp(src: &str) -> PResult<ScpProcess> {
    whole(src, Parser::scp)
}

/// A process of either calculus, as read from a file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AnyProcess {
    Cp(CpProcess),
    Scp(ScpProcess),
}

impl std::fmt::Display for AnyProcess {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnyProcess::Cp(p) => p.fmt(f),
            AnyProcess::Scp(p) => p.fmt(f),
        }
    }
}

pub fn parse_process(src: &str, calculus: Calculus) -> PResult<AnyProcess> {
    match calculus {
        Calculus::Cp => parse_cp(src).map(AnyProcess::Cp),
        Calculus::Scp => parse_scp(src).map(AnyProcess::Scp),
    }
}

fn judgment_with<T>(
    src: &str,
    proc: impl FnOnce(&mut Parser) -> PResult<T>,
) -> PResult<(TypingContext, T)> {
    whole(src, |p| {
        let ctx = p.context()?;
        p.expect(Tok::Turnstile)?;
        Ok((ctx, proc(p)?))
    })
}

pub fn parse_cp_judgment(src: &str) -> PResult<(TypingContext, CpProcess)> {
    judgment_with(src, Parser::cp)
}

pub fn parse_scp_judgment(src: &str) -> PResult<(TypingContext, ScpProcess)> {
    judgment_with(src, Parser::scp)
}

pub fn parse_judgment(src: &str, calculus: Calculus) -> PResult<(TypingContext, AnyProcess)> {
    match calculus {
        Calculus::Cp => judgment_with(src, |p| p.cp().map(AnyProcess::Cp)),
        Calculus::Scp => judgment_with(src, |p| p.scp().map(AnyProcess::Scp)),
    }
}
