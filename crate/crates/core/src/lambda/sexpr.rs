//! Canonical prefix serialization of terms.
//!
//! ```text
//! (app (const "zwemmen" VB "np->s") (const "eenden" NN "np"))
//! (lam x "np" (app f x))
//! ```

use std::fmt;

use thiserror::Error;

use super::term::{app, lam, Const, Term};
use super::ty::Ty;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected end of input")]
    Eof,
    #[error("unexpected token {found:?} at byte {pos}, expected {expected}")]
    Unexpected { found: String, pos: usize, expected: &'static str },
    #[error("unterminated string starting at byte {0}")]
    UnterminatedString(usize),
    #[error("bad type {ty:?}: {msg}")]
    BadType { ty: String, msg: String },
    #[error("trailing input at byte {0}")]
    Trailing(usize),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Str(String),
    Sym(String),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '(' => {
                it.next();
                out.push((i, Tok::Open));
            }
            ')' => {
                it.next();
                out.push((i, Tok::Close));
            }
            '"' => {
                it.next();
                let mut s = String::new();
                let mut closed = false;
                while let Some((_, ch)) = it.next() {
                    match ch {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => match it.next() {
                            Some((_, e)) => s.push(e),
                            None => return Err(ParseError::UnterminatedString(i)),
                        },
                        other => s.push(other),
                    }
                }
                if !closed {
                    return Err(ParseError::UnterminatedString(i));
                }
                out.push((i, Tok::Str(s)));
            }
            _ => {
                let mut s = String::new();
                while let Some(&(_, ch)) = it.peek() {
                    if ch.is_whitespace() || ch == '(' || ch == ')' || ch == '"' {
                        break;
                    }
                    s.push(ch);
                    it.next();
                }
                out.push((i, Tok::Sym(s)));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        let t = self.toks.get(self.pos).cloned().ok_or(ParseError::Eof)?;
        self.pos += 1;
        Ok(t)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn unexpected(pos: usize, tok: &Tok, expected: &'static str) -> ParseError {
        let found = match tok {
            Tok::Open => "(".to_string(),
            Tok::Close => ")".to_string(),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Sym(s) => s.clone(),
        };
        ParseError::Unexpected { found, pos, expected }
    }

    fn text(&mut self, expected: &'static str) -> Result<String, ParseError> {
        match self.next()? {
            (_, Tok::Str(s)) | (_, Tok::Sym(s)) => Ok(s),
            (p, t) => Err(Self::unexpected(p, &t, expected)),
        }
    }

    fn ty(&mut self) -> Result<Ty, ParseError> {
        let s = self.text("a type")?;
        s.parse().map_err(|e: super::TypeError| ParseError::BadType { ty: s.clone(), msg: e.to_string() })
    }

    fn close(&mut self) -> Result<(), ParseError> {
        match self.next()? {
            (_, Tok::Close) => Ok(()),
            (p, t) => Err(Self::unexpected(p, &t, "')'")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.next()? {
            (_, Tok::Sym(s)) => Ok(Term::Var(s)),
            (_, Tok::Open) => {
                let (p, head) = self.next()?;
                match &head {
                    Tok::Sym(k) if k == "app" => {
                        let f = self.term()?;
                        let mut args = vec![self.term()?];
                        while !matches!(self.peek(), Some(Tok::Close) | None) {
                            args.push(self.term()?);
                        }
                        self.close()?;
                        Ok(args.into_iter().fold(f, app))
                    }
                    Tok::Sym(k) if k == "const" => {
                        let lemma = self.text("a lemma")?;
                        let pos = self.text("a tag")?;
                        let ty = self.ty()?;
                        self.close()?;
                        Ok(Term::Const(Const { lemma, pos, ty }))
                    }
                    Tok::Sym(k) if k == "lam" => {
                        let x = match self.next()? {
                            (_, Tok::Sym(x)) => x,
                            (p, t) => return Err(Self::unexpected(p, &t, "a variable")),
                        };
                        let ty = self.ty()?;
                        let body = self.term()?;
                        self.close()?;
                        Ok(lam(&x, ty, body))
                    }
                    _ => Err(Self::unexpected(p, &head, "app, const or lam")),
                }
            }
            (p, t) => Err(Self::unexpected(p, &t, "a term")),
        }
    }
}

/// Parses exactly one term.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let t = p.term()?;
    if let Some((pos, _)) = p.toks.get(p.pos) {
        return Err(ParseError::Trailing(*pos));
    }
    Ok(t)
}

/// Parses a whitespace-separated sequence of terms.
pub fn parse_terms(src: &str) -> Result<Vec<Term>, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let mut out = Vec::new();
    while p.pos < p.toks.len() {
        out.push(p.term()?);
    }
    Ok(out)
}

fn is_plain_symbol(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '(' || c == ')' || c == '"' || c == '\\')
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Const(c) => {
                let pos = if is_plain_symbol(&c.pos) { c.pos.clone() } else { quote(&c.pos) };
                write!(f, "(const {} {} {})", quote(&c.lemma), pos, quote(&c.ty.to_string()))
            }
            Term::App(..) => {
                let (head, args) = self.head_and_args();
                write!(f, "(app {head}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
            Term::Abs(x, ty, b) => write!(f, "(lam {x} {} {b})", quote(&ty.to_string())),
        }
    }
}

impl Term {
    /// Compact human-readable rendering, e.g. `een hond (kijken rond)`.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        pretty_into(self, &mut out, false);
        out
    }
}

fn pretty_into(t: &Term, out: &mut String, as_arg: bool) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Const(c) => out.push_str(&c.lemma),
        Term::App(..) => {
            let (head, args) = t.head_and_args();
            if as_arg {
                out.push('(');
            }
            pretty_into(head, out, true);
            for a in args {
                out.push(' ');
                pretty_into(a, out, true);
            }
            if as_arg {
                out.push(')');
            }
        }
        Term::Abs(x, _, b) => {
            if as_arg {
                out.push('(');
            }
            out.push('λ');
            out.push_str(x);
            out.push_str(". ");
            pretty_into(b, out, false);
            if as_arg {
                out.push(')');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::term::{constant, var};

    #[test]
    fn round_trip() {
        let src = r#"(app (const "zwemmen" VB "np->s") (const "eenden" NN "np"))"#;
        let t = parse_term(src).unwrap();
        assert_eq!(t.to_string(), src);
        assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn nary_and_binary_app_agree() {
        let a = parse_term(r#"(app (const "f" VB "np->np->s") x y)"#).unwrap();
        let b = parse_term(r#"(app (app (const "f" VB "np->np->s") x) y)"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn lambda_and_whitespace() {
        let t = parse_term("(lam x \"np\"\n   (app (const \"f\" VB \"np->s\") x))").unwrap();
        assert_eq!(t, lam("x", Ty::np(), app(constant("f", "VB", Ty::vp()), var("x"))));
        assert_eq!(t.pretty(), "λx. f x");
    }

    #[test]
    fn escapes() {
        let t = constant("a\"b\\c", "NN", Ty::n());
        assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn errors() {
        assert!(parse_term("(app f").is_err());
        assert!(parse_term("(const \"x\" NN \"np->\")").is_err());
        assert!(parse_term("(foo x)").is_err());
        assert!(parse_term("x y").is_err());
        assert!(parse_term("\"abc").is_err());
        assert_eq!(parse_terms("x y").unwrap().len(), 2);
    }

    #[test]
    fn pretty_nesting() {
        let t = parse_term(
            r#"(app (const "een" DT "n->(np->s)->s") (const "hond" NN "n") (app (const "kijken" VB "pr->np->s") (const "rond" RP "pr")))"#,
        )
        .unwrap();
        assert_eq!(t.pretty(), "een hond (kijken rond)");
    }
}
