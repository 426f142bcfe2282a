//! Text syntax for terms.
//!
//! ```text
//! term    := concat ( "+" INT concat )*        left-associative
//! concat  := atom ( "."? atom )*               left-associative
//! atom    := STRING | "1" | IDENT | "(" term ")"
//! ```
//!
//! Concatenation binds tighter than intercalation. Identifiers start with an
//! uppercase letter and name nonterminals; string literals use the word
//! notation of [`SeparatorWord`](super::SeparatorWord).

use super::{Term, TermError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Str(String),
    One,
    Ident(String),
    Dot,
    Plus(usize),
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, TermError> {
    let err = |offset: usize, message: &str| TermError::Syntax {
        offset,
        message: message.to_string(),
    };
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'(' => {
                out.push((i, Tok::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::Close));
                i += 1;
            }
            b'.' => {
                out.push((i, Tok::Dot));
                i += 1;
            }
            b'+' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i] == b' ' {
                    i += 1;
                }
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if digits_start == i {
                    return Err(err(start, "expected an index after `+`"));
                }
                let j: usize = src[digits_start..i]
                    .parse()
                    .map_err(|_| err(start, "index too large"))?;
                out.push((start, Tok::Plus(j)));
            }
            b'"' => {
                let start = i;
                i += 1;
                let body_start = i;
                while i < bytes.len() && bytes[i] != b'"' {
                    i += 1;
                }
                if i == bytes.len() {
                    return Err(err(start, "unterminated string literal"));
                }
                out.push((start, Tok::Str(src[body_start..i].to_string())));
                i += 1;
            }
            b'1' => {
                if bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric()) {
                    return Err(err(i, "bare separator must stand alone"));
                }
                out.push((i, Tok::One));
                i += 1;
            }
            c if c.is_ascii_uppercase() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => return Err(err(i, "unexpected character")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, message: &str) -> TermError {
        TermError::Syntax {
            offset: self.offset(),
            message: message.to_string(),
        }
    }

    fn term(&mut self) -> Result<Term, TermError> {
        let mut left = self.concat()?;
        while let Some(Tok::Plus(j)) = self.peek() {
            let j = *j;
            self.pos += 1;
            let right = self.concat()?;
            left = Term::intercal(j, left, right);
        }
        Ok(left)
    }

    fn concat(&mut self) -> Result<Term, TermError> {
        let mut left = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Dot) => {
                    self.pos += 1;
                    let right = self.atom()?;
                    left = Term::concat(left, right);
                }
                Some(Tok::Str(_) | Tok::One | Tok::Ident(_) | Tok::Open) => {
                    let right = self.atom()?;
                    left = Term::concat(left, right);
                }
                _ => return Ok(left),
            }
        }
    }

    fn atom(&mut self) -> Result<Term, TermError> {
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Term::Literal(s.parse()?))
            }
            Some(Tok::One) => {
                self.pos += 1;
                Ok(Term::Separator)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Term::Nonterminal(name))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let t = self.term()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error("expected a literal, `1`, a nonterminal or `(`")),
        }
    }
}

/// Parses a term in the text syntax.
pub fn parse_term(src: &str) -> Result<Term, TermError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input"));
    }
    Ok(t)
}
