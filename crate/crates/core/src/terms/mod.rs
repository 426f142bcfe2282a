//! Separator words, the ranked term algebra over concatenation and
//! intercalation, and evaluation of ground terms.
//!
//! A separator word is a word over an alphabet extended with a distinguished
//! separator, written `1`. Its rank is the number of separators. The `j`-th
//! intercalation `w +j v` replaces the `j`-th separator of `w` (counting from
//! one) by `v`:
//!
//! ```
//! use displace::terms::SeparatorWord;
//! let w: SeparatorWord = "a1b11d".parse().unwrap();
//! let v: SeparatorWord = "c1c".parse().unwrap();
//! assert_eq!(w.intercalate(2, &v).unwrap().to_string(), "a1bc1c1d");
//! ```

mod parse;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use parse::parse_term;

use crate::word::{self, Piece};

/// A letter of a separator word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Symbol(String),
    Separator,
}

impl Letter {
    pub fn symbol(s: impl Into<String>) -> Self {
        Letter::Symbol(s.into())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("intercalation index {index} out of range for a word of rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("unknown nonterminal `{0}`")]
    UnknownNonterminal(String),
    #[error("term is not ground: contains nonterminal `{0}`")]
    NotGround(String),
    #[error("malformed term: {0}")]
    Malformed(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

/// A word over `Σ ∪ {1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeparatorWord {
    letters: Vec<Letter>,
}

impl SeparatorWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        SeparatorWord { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn separator() -> Self {
        SeparatorWord {
            letters: vec![Letter::Separator],
        }
    }

    /// A separator-free word made of the given symbols.
    pub fn from_symbols<S: AsRef<str>>(symbols: &[S]) -> Self {
        SeparatorWord {
            letters: symbols
                .iter()
                .map(|s| Letter::Symbol(s.as_ref().to_string()))
                .collect(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of separators.
    pub fn rank(&self) -> usize {
        self.letters
            .iter()
            .filter(|l| matches!(l, Letter::Separator))
            .count()
    }

    /// Number of alphabet letters, ignoring separators.
    pub fn symbol_count(&self) -> usize {
        self.len() - self.rank()
    }

    pub fn concat(&self, other: &SeparatorWord) -> SeparatorWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        SeparatorWord { letters }
    }

    /// Replaces the `j`-th separator (1-based) by `v`.
    pub fn intercalate(&self, j: usize, v: &SeparatorWord) -> Result<SeparatorWord, TermError> {
        let rank = self.rank();
        if j == 0 || j > rank {
            return Err(TermError::IndexOutOfRange { index: j, rank });
        }
        let at = self
            .letters
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, Letter::Separator))
            .nth(j - 1)
            .map(|(i, _)| i)
            .expect("rank checked above");
        let mut letters = Vec::with_capacity(self.len() + v.len() - 1);
        letters.extend_from_slice(&self.letters[..at]);
        letters.extend(v.letters.iter().cloned());
        letters.extend_from_slice(&self.letters[at + 1..]);
        Ok(SeparatorWord { letters })
    }

    /// The separator-free segments `s_0, …, s_r` of `s_0 1 s_1 … 1 s_r`.
    pub fn segments(&self) -> Vec<Vec<String>> {
        let mut out = vec![Vec::new()];
        for l in &self.letters {
            match l {
                Letter::Separator => out.push(Vec::new()),
                Letter::Symbol(s) => out.last_mut().unwrap().push(s.clone()),
            }
        }
        out
    }

    /// The symbols of a separator-free word, or `None` if it has separators.
    pub fn to_symbols(&self) -> Option<Vec<String>> {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::Symbol(s) => Some(s.clone()),
                Letter::Separator => None,
            })
            .collect()
    }
}

impl FromStr for SeparatorWord {
    type Err = TermError;

    /// Parses `a1b11d` or `x'1 1 x^2`; a standalone `1` is the separator.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = word::pieces(s)
            .into_iter()
            .map(|p| match p {
                Piece::One => Letter::Separator,
                Piece::Symbol(s) => Letter::Symbol(s),
            })
            .collect();
        Ok(SeparatorWord { letters })
    }
}

impl fmt::Display for SeparatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let short = self.letters.iter().all(|l| match l {
            Letter::Symbol(s) => s.chars().count() == 1,
            Letter::Separator => true,
        });
        let mut first = true;
        for l in &self.letters {
            if !short && !first {
                f.write_str(" ")?;
            }
            first = false;
            match l {
                Letter::Separator => f.write_str("1")?,
                Letter::Symbol(s) => f.write_str(s)?,
            }
        }
        Ok(())
    }
}

/// A term of the displacement algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Nonterminal(String),
    Literal(SeparatorWord),
    Separator,
    Concat(Box<Term>, Box<Term>),
    /// `Intercal(j, left, right)` is `left +j right`.
    Intercal(usize, Box<Term>, Box<Term>),
}

impl Term {
    pub fn nt(name: impl Into<String>) -> Term {
        Term::Nonterminal(name.into())
    }

    /// A literal leaf parsed from the compact notation (`"a1b"`).
    pub fn lit(text: &str) -> Term {
        Term::Literal(text.parse().expect("literal parsing is infallible"))
    }

    pub fn concat(left: Term, right: Term) -> Term {
        Term::Concat(Box::new(left), Box::new(right))
    }

    pub fn intercal(j: usize, left: Term, right: Term) -> Term {
        Term::Intercal(j, Box::new(left), Box::new(right))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Nonterminal(_) => false,
            Term::Literal(_) | Term::Separator => true,
            Term::Concat(l, r) | Term::Intercal(_, l, r) => l.is_ground() && r.is_ground(),
        }
    }

    /// Nonterminal leaves, left to right.
    pub fn nonterminals(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_nonterminals(&mut out);
        out
    }

    fn collect_nonterminals<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Nonterminal(n) => out.push(n),
            Term::Literal(_) | Term::Separator => {}
            Term::Concat(l, r) | Term::Intercal(_, l, r) => {
                l.collect_nonterminals(out);
                r.collect_nonterminals(out);
            }
        }
    }

    /// Replaces the leftmost nonterminal leaf by `replacement`. Returns
    /// `None` when the term is ground.
    pub fn replace_leftmost_nonterminal(&self, replacement: &Term) -> Option<Term> {
        match self {
            Term::Nonterminal(_) => Some(replacement.clone()),
            Term::Literal(_) | Term::Separator => None,
            Term::Concat(l, r) => match l.replace_leftmost_nonterminal(replacement) {
                Some(nl) => Some(Term::Concat(Box::new(nl), r.clone())),
                None => r
                    .replace_leftmost_nonterminal(replacement)
                    .map(|nr| Term::Concat(l.clone(), Box::new(nr))),
            },
            Term::Intercal(j, l, r) => match l.replace_leftmost_nonterminal(replacement) {
                Some(nl) => Some(Term::Intercal(*j, Box::new(nl), r.clone())),
                None => r
                    .replace_leftmost_nonterminal(replacement)
                    .map(|nr| Term::Intercal(*j, l.clone(), Box::new(nr))),
            },
        }
    }

    /// Total number of alphabet letters in literal leaves.
    pub fn literal_symbol_count(&self) -> usize {
        match self {
            Term::Literal(w) => w.symbol_count(),
            Term::Nonterminal(_) | Term::Separator => 0,
            Term::Concat(l, r) | Term::Intercal(_, l, r) => {
                l.literal_symbol_count() + r.literal_symbol_count()
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, false)
    }
}

impl Term {
    // `nested`: the term sits inside a concatenation, where an intercalation
    // needs parentheses.
    fn write(&self, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match self {
            Term::Nonterminal(n) => f.write_str(n),
            Term::Literal(w) => write!(f, "\"{w}\""),
            Term::Separator => f.write_str("1"),
            Term::Concat(l, r) => {
                l.write(f, true)?;
                f.write_str(" . ")?;
                // concatenation is parsed left-associatively
                if matches!(**r, Term::Concat(..)) {
                    f.write_str("(")?;
                    r.write(f, false)?;
                    f.write_str(")")
                } else {
                    r.write(f, true)
                }
            }
            Term::Intercal(j, l, r) => {
                if nested {
                    f.write_str("(")?;
                }
                l.write(f, false)?;
                write!(f, " +{j} ")?;
                if matches!(**r, Term::Intercal(..)) {
                    f.write_str("(")?;
                    r.write(f, false)?;
                    f.write_str(")")?;
                } else {
                    r.write(f, false)?;
                }
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Lookup of nonterminal ranks.
pub trait RankLookup {
    fn rank_of(&self, name: &str) -> Option<usize>;
}

impl RankLookup for HashMap<String, usize> {
    fn rank_of(&self, name: &str) -> Option<usize> {
        self.get(name).copied()
    }
}

impl RankLookup for std::collections::BTreeMap<String, usize> {
    fn rank_of(&self, name: &str) -> Option<usize> {
        self.get(name).copied()
    }
}

impl<F: Fn(&str) -> Option<usize>> RankLookup for F {
    fn rank_of(&self, name: &str) -> Option<usize> {
        self(name)
    }
}

/// Rank computed bottom-up. Intercalation requires the left rank to be at
/// least `j`, otherwise the term is malformed.
pub fn term_rank(t: &Term, ranks: &impl RankLookup) -> Result<usize, TermError> {
    match t {
        Term::Nonterminal(n) => ranks
            .rank_of(n)
            .ok_or_else(|| TermError::UnknownNonterminal(n.clone())),
        Term::Literal(w) => Ok(w.rank()),
        Term::Separator => Ok(1),
        Term::Concat(l, r) => Ok(term_rank(l, ranks)? + term_rank(r, ranks)?),
        Term::Intercal(j, l, r) => {
            let (rl, rr) = (term_rank(l, ranks)?, term_rank(r, ranks)?);
            if *j == 0 || rl < *j {
                return Err(TermError::Malformed(format!(
                    "+{j} applied to a left operand of rank {rl}"
                )));
            }
            Ok(rl + rr - 1)
        }
    }
}

/// Why a term is not in `Tm_k`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("subterm `{subterm}` violates Tm_{k}: {reason}")]
pub struct TmViolation {
    pub subterm: String,
    pub k: usize,
    pub reason: String,
}

/// Checks membership in `Tm_k`: every subterm has rank at most `k`,
/// concatenation needs `rk(A)+rk(B) ≤ k`, and `A +j B` needs `j ≤ k`,
/// `rk(A) ≥ j` and `rk(A)+rk(B) ≤ k+1`.
pub fn check_term_in_tm_k(t: &Term, k: usize, ranks: &impl RankLookup) -> Result<(), TmViolation> {
    check_rec(t, k, ranks).map(|_| ())
}

fn check_rec(t: &Term, k: usize, ranks: &impl RankLookup) -> Result<usize, TmViolation> {
    let violation = |reason: String| TmViolation {
        subterm: t.to_string(),
        k,
        reason,
    };
    let rank = match t {
        Term::Nonterminal(n) => ranks
            .rank_of(n)
            .ok_or_else(|| violation(format!("unknown nonterminal `{n}`")))?,
        Term::Literal(w) => w.rank(),
        Term::Separator => 1,
        Term::Concat(l, r) => {
            let (rl, rr) = (check_rec(l, k, ranks)?, check_rec(r, k, ranks)?);
            if rl + rr > k {
                return Err(violation(format!("concatenation of ranks {rl}+{rr} exceeds {k}")));
            }
            rl + rr
        }
        Term::Intercal(j, l, r) => {
            let (rl, rr) = (check_rec(l, k, ranks)?, check_rec(r, k, ranks)?);
            if *j == 0 || *j > k {
                return Err(violation(format!("index {j} outside 1..={k}")));
            }
            if rl < *j {
                return Err(violation(format!("left operand rank {rl} is below index {j}")));
            }
            if rl + rr > k + 1 {
                return Err(violation(format!("operand ranks {rl}+{rr} exceed {}", k + 1)));
            }
            rl + rr - 1
        }
    };
    if rank > k {
        return Err(violation(format!("rank {rank} exceeds {k}")));
    }
    Ok(rank)
}

/// The value function on ground terms.
pub fn eval_ground_term(t: &Term) -> Result<SeparatorWord, TermError> {
    match t {
        Term::Nonterminal(n) => Err(TermError::NotGround(n.clone())),
        Term::Literal(w) => Ok(w.clone()),
        Term::Separator => Ok(SeparatorWord::separator()),
        Term::Concat(l, r) => Ok(eval_ground_term(l)?.concat(&eval_ground_term(r)?)),
        Term::Intercal(j, l, r) => {
            let lw = eval_ground_term(l)?;
            let rw = eval_ground_term(r)?;
            lw.intercalate(*j, &rw).map_err(|e| TermError::Malformed(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_nts() -> HashMap<String, usize> {
        HashMap::new()
    }

    fn w(s: &str) -> SeparatorWord {
        s.parse().unwrap()
    }

    #[test]
    fn rank_counts_separators() {
        assert_eq!(w("a1b11d").rank(), 3);
        assert_eq!(w("").rank(), 0);
        assert_eq!(w("abc").rank(), 0);
    }

    #[test]
    fn intercalation_examples() {
        assert_eq!(w("a1b11d").intercalate(2, &w("c1c")).unwrap(), w("a1bc1c1d"));
        assert_eq!(w("1").intercalate(1, &w("ab")).unwrap(), w("ab"));
        assert_eq!(
            w("a1b").intercalate(2, &w("x")),
            Err(TermError::IndexOutOfRange { index: 2, rank: 1 })
        );
        assert!(w("a1b").intercalate(0, &w("x")).is_err());
    }

    #[test]
    fn term_rank_examples() {
        let mut ranks = HashMap::new();
        ranks.insert("N".to_string(), 2);
        assert_eq!(term_rank(&Term::lit("a1b"), &ranks), Ok(1));
        assert_eq!(
            term_rank(&Term::intercal(1, Term::Separator, Term::lit("ab")), &ranks),
            Ok(0)
        );
        assert_eq!(
            term_rank(&Term::concat(Term::nt("N"), Term::lit("1")), &ranks),
            Ok(3)
        );
        assert_eq!(
            term_rank(&Term::nt("M"), &ranks),
            Err(TermError::UnknownNonterminal("M".into()))
        );
    }

    #[test]
    fn tm_k_membership() {
        let ranks = no_nts();
        let ok = Term::intercal(1, Term::Separator, Term::Separator);
        assert!(check_term_in_tm_k(&ok, 1, &ranks).is_ok());
        let bad = Term::concat(Term::Separator, Term::Separator);
        let v = check_term_in_tm_k(&bad, 1, &ranks).unwrap_err();
        assert_eq!(v.subterm, bad.to_string());

        // (aT +1 a) +1 a with rk(T) = 2, as in the copy-power grammar
        let mut ranks = HashMap::new();
        ranks.insert("T".to_string(), 2);
        let body = parse_term(r#"("a" . T +1 "a") +1 "a""#).unwrap();
        assert!(check_term_in_tm_k(&body, 2, &ranks).is_ok());
        assert!(check_term_in_tm_k(&body, 1, &ranks).is_err());
    }

    #[test]
    fn intercalation_needs_enough_left_rank() {
        let t = Term::intercal(2, Term::lit("a1"), Term::lit("b"));
        assert!(check_term_in_tm_k(&t, 3, &no_nts()).is_err());
        assert!(matches!(eval_ground_term(&t), Err(TermError::Malformed(_))));
    }

    #[test]
    fn ground_evaluation() {
        let t = Term::concat(Term::lit("a1"), Term::lit("1d"));
        assert_eq!(eval_ground_term(&t).unwrap(), w("a11d"));
        let t = Term::intercal(1, Term::lit("b1"), Term::concat(Term::lit("a"), Term::lit("c")));
        assert_eq!(eval_ground_term(&t).unwrap(), w("bac"));
        assert_eq!(
            eval_ground_term(&Term::nt("S")),
            Err(TermError::NotGround("S".into()))
        );
    }

    #[test]
    fn copy_power_derivation_of_aba_cubed() {
        // the fully expanded ground term of the derivation of (aba)^3
        let t = parse_term(
            r#"("a" . (("b" . (("a" . "11" +1 "1a") +2 "1a") +1 "1b") +2 "1b") +1 "a") +1 "a""#,
        )
        .unwrap();
        assert!(t.is_ground());
        assert_eq!(eval_ground_term(&t).unwrap().to_string(), "abaabaaba");
    }

    #[test]
    fn display_parses_back() {
        let terms = [
            r#"("a" . T +1 "a") +1 "a""#,
            r#""x^1" . (S1 +1 "x'1 1 x^2") . "x'2""#,
            r#"A . (B . C)"#,
            r#"A +1 (B +2 C)"#,
            r#""" . 1"#,
        ];
        for src in terms {
            let t = parse_term(src).unwrap();
            let again = parse_term(&t.to_string()).unwrap();
            assert_eq!(t, again, "{src} -> {t}");
        }
    }
}
