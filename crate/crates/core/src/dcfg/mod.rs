//! Displacement context-free grammars.
//!
//! A [`Grammar`] pairs ranked nonterminals with rules `A -> term`. The chart
//! recognizer in [`Recognizer`] decides membership; [`enumerate_language`]
//! lists the language up to a length bound and is used as an oracle.

mod chart;
mod enumerate;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::monoids::RankedAlphabet;
use crate::terms::{check_term_in_tm_k, parse_term, term_rank, Letter, RankLookup, Term, TermError};

pub use chart::{derive, recognize, DeriveOutcome, Derivation, Recognizer, MAX_CHART_RANK, MAX_WORD_LEN};
pub use enumerate::{enumerate_language, minimal_yields};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DcfgError {
    #[error("invalid grammar: {}", join_violations(.0))]
    InvalidGrammar(Vec<Violation>),
    #[error("symbol `{0}` is not in the grammar alphabet")]
    ForeignSymbol(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("nonterminal rank {0} is above the supported maximum {MAX_CHART_RANK}")]
    RankTooLarge(usize),
    #[error("word of length {0} is above the supported maximum {MAX_WORD_LEN}")]
    WordTooLong(usize),
    #[error("{0}")]
    Precondition(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// One failed well-formedness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    StartRank { start: String, rank: usize },
    UnknownStart(String),
    UnknownLhs { rule: usize, lhs: String },
    RankMismatch { rule: usize, lhs: String, expected: usize, found: usize },
    NotInTmK { rule: usize, detail: String },
    UndeclaredNonterminal { rule: usize, name: String },
    ForeignSymbol { rule: usize, symbol: String },
    NameClash(String),
    DuplicateNonterminal(String),
    BadSymbol(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::StartRank { start, rank } => write!(f, "start rank: `{start}` has rank {rank}"),
            Violation::UnknownStart(s) => write!(f, "unknown start: `{s}`"),
            Violation::UnknownLhs { rule, lhs } => write!(f, "rule {rule}: undeclared left-hand side `{lhs}`"),
            Violation::RankMismatch {
                rule,
                lhs,
                expected,
                found,
            } => write!(
                f,
                "rank mismatch: rule {rule} for `{lhs}` has a body of rank {found}, expected {expected}"
            ),
            Violation::NotInTmK { rule, detail } => write!(f, "rule {rule}: {detail}"),
            Violation::UndeclaredNonterminal { rule, name } => {
                write!(f, "rule {rule}: undeclared nonterminal `{name}`")
            }
            Violation::ForeignSymbol { rule, symbol } => write!(f, "rule {rule}: symbol `{symbol}` not in alphabet"),
            Violation::NameClash(n) => write!(f, "`{n}` is both a nonterminal and a terminal"),
            Violation::DuplicateNonterminal(n) => write!(f, "nonterminal `{n}` declared twice"),
            Violation::BadSymbol(s) => write!(f, "`{s}` cannot be an alphabet symbol"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: String,
    pub rhs: Term,
}

/// A `k`-DCFG `⟨N, Σ, P, S⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    pub k: usize,
    /// Terminal symbols in declaration order.
    pub alphabet: Vec<String>,
    /// Nonterminals with their ranks, in declaration order.
    pub nonterminals: Vec<(String, usize)>,
    pub rules: Vec<Rule>,
    pub start: String,
}

impl RankLookup for Grammar {
    fn rank_of(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().find(|(n, _)| n == name).map(|(_, r)| *r)
    }
}

impl Grammar {
    pub fn nonterminal_index(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|(n, _)| n == name)
    }

    pub fn terminal_index(&self, symbol: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == symbol)
    }

    /// Maps a word to terminal indices.
    pub fn encode<S: AsRef<str>>(&self, word: &[S]) -> Result<Vec<u32>, DcfgError> {
        word.iter()
            .map(|s| {
                self.terminal_index(s.as_ref())
                    .map(|i| i as u32)
                    .ok_or_else(|| DcfgError::ForeignSymbol(s.as_ref().to_string()))
            })
            .collect()
    }

    pub fn decode(&self, word: &[u32]) -> Vec<String> {
        word.iter().map(|&i| self.alphabet[i as usize].clone()).collect()
    }

    /// All well-formedness violations; empty when the grammar is valid.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = BTreeMap::new();
        for (n, _) in &self.nonterminals {
            if seen.insert(n.as_str(), ()).is_some() {
                out.push(Violation::DuplicateNonterminal(n.clone()));
            }
            if self.alphabet.contains(n) {
                out.push(Violation::NameClash(n.clone()));
            }
        }
        for s in &self.alphabet {
            if s.is_empty() || s == "1" || s.chars().any(char::is_whitespace) || s.contains('"') {
                out.push(Violation::BadSymbol(s.clone()));
            }
        }
        match self.rank_of(&self.start) {
            None => out.push(Violation::UnknownStart(self.start.clone())),
            Some(0) => {}
            Some(rank) => out.push(Violation::StartRank {
                start: self.start.clone(),
                rank,
            }),
        }
        for (i, rule) in self.rules.iter().enumerate() {
            let Some(expected) = self.rank_of(&rule.lhs) else {
                out.push(Violation::UnknownLhs {
                    rule: i,
                    lhs: rule.lhs.clone(),
                });
                continue;
            };
            let mut undeclared = false;
            for name in rule.rhs.nonterminals() {
                if self.rank_of(name).is_none() {
                    undeclared = true;
                    out.push(Violation::UndeclaredNonterminal {
                        rule: i,
                        name: name.to_string(),
                    });
                }
            }
            let mut foreign = Vec::new();
            collect_literal_symbols(&rule.rhs, &mut foreign);
            for s in foreign {
                if !self.alphabet.iter().any(|a| a == s) {
                    out.push(Violation::ForeignSymbol {
                        rule: i,
                        symbol: s.to_string(),
                    });
                }
            }
            if undeclared {
                continue;
            }
            if let Err(v) = check_term_in_tm_k(&rule.rhs, self.k, self) {
                out.push(Violation::NotInTmK {
                    rule: i,
                    detail: v.to_string(),
                });
                continue;
            }
            match term_rank(&rule.rhs, self) {
                Ok(found) if found != expected => out.push(Violation::RankMismatch {
                    rule: i,
                    lhs: rule.lhs.clone(),
                    expected,
                    found,
                }),
                Ok(_) => {}
                Err(e) => out.push(Violation::NotInTmK {
                    rule: i,
                    detail: e.to_string(),
                }),
            }
        }
        out
    }

    /// `Ok` iff [`Grammar::violations`] is empty.
    pub fn validate(&self) -> Result<(), DcfgError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(DcfgError::InvalidGrammar(v))
        }
    }

    /// Parses the line-oriented grammar format.
    pub fn parse(text: &str) -> Result<Grammar, DcfgError> {
        let mut k = None;
        let mut alphabet = Vec::new();
        let mut nonterminals = Vec::new();
        let mut rules = Vec::new();
        let mut start = None;
        for (n, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| DcfgError::Parse { line: n + 1, message };
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match keyword {
                "k" => k = Some(rest.parse::<usize>().map_err(|_| err(format!("bad rank bound `{rest}`")))?),
                "alphabet" => alphabet.extend(rest.split_whitespace().map(String::from)),
                "nonterm" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    let [name, rank] = parts.as_slice() else {
                        return Err(err("expected `nonterm <name> <rank>`".into()));
                    };
                    let rank = rank.parse().map_err(|_| err(format!("bad rank `{rank}`")))?;
                    nonterminals.push((name.to_string(), rank));
                }
                "start" => start = Some(rest.to_string()),
                "rule" => {
                    let (lhs, rhs) = rest
                        .split_once("->")
                        .ok_or_else(|| err("expected `rule <lhs> -> <term>`".into()))?;
                    let rhs = parse_term(rhs.trim()).map_err(|e| err(e.to_string()))?;
                    rules.push(Rule {
                        lhs: lhs.trim().to_string(),
                        rhs,
                    });
                }
                other => return Err(err(format!("unknown declaration `{other}`"))),
            }
        }
        let missing = |what: &str| DcfgError::Parse {
            line: 0,
            message: format!("missing `{what}` declaration"),
        };
        Ok(Grammar {
            k: k.ok_or_else(|| missing("k"))?,
            alphabet,
            nonterminals,
            rules,
            start: start.ok_or_else(|| missing("start"))?,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("k {}\nalphabet {}\n", self.k, self.alphabet.join(" "));
        for (n, r) in &self.nonterminals {
            out.push_str(&format!("nonterm {n} {r}\n"));
        }
        out.push_str(&format!("start {}\n", self.start));
        for rule in &self.rules {
            out.push_str(&format!("rule {} -> {}\n", rule.lhs, rule.rhs));
        }
        out
    }
}

// `#` inside a quoted literal is an ordinary character.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn collect_literal_symbols<'a>(t: &'a Term, out: &mut Vec<&'a str>) {
    match t {
        Term::Literal(w) => {
            for l in w.letters() {
                if let Letter::Symbol(s) = l {
                    out.push(s);
                }
            }
        }
        Term::Nonterminal(_) | Term::Separator => {}
        Term::Concat(l, r) | Term::Intercal(_, l, r) => {
            collect_literal_symbols(l, out);
            collect_literal_symbols(r, out);
        }
    }
}

/// The grammar `G_i` for `{ w^{i+1} | w ∈ {a,b}+ }`.
pub fn build_copy_power_grammar(i: usize) -> Result<Grammar, DcfgError> {
    if i == 0 {
        return Err(DcfgError::Precondition("copy-power index must be at least 1".into()));
    }
    let mut rules = Vec::new();
    for c in ["a", "b"] {
        // S -> (…(cT +1 c) …) +1 c
        let mut s = Term::concat(Term::lit(c), Term::nt("T"));
        for _ in 0..i {
            s = Term::intercal(1, s, Term::lit(c));
        }
        rules.push(Rule {
            lhs: "S".into(),
            rhs: s,
        });
    }
    for c in ["a", "b"] {
        // T -> (…(cT +1 1c) +2 1c …) +i 1c
        let mut t = Term::concat(Term::lit(c), Term::nt("T"));
        for j in 1..=i {
            t = Term::intercal(j, t, Term::lit(&format!("1{c}")));
        }
        rules.push(Rule {
            lhs: "T".into(),
            rhs: t,
        });
    }
    rules.push(Rule {
        lhs: "T".into(),
        rhs: Term::lit(&"1".repeat(i)),
    });
    Ok(Grammar {
        k: i,
        alphabet: vec!["a".into(), "b".into()],
        nonterminals: vec![("S".into(), 0), ("T".into(), i)],
        rules,
        start: "S".into(),
    })
}

/// Name of the nonterminal `S_i` in [`build_dyck_grammar`].
pub fn dyck_nonterminal(i: usize) -> String {
    format!("S{i}")
}

/// The `(L-1)`-DCFG `G_X` generating `D(X)`.
pub fn build_dyck_grammar(x: &RankedAlphabet) -> Grammar {
    let l = x.rank();
    let s = |i: usize| Term::nt(dyck_nonterminal(i));
    let mut rules = Vec::new();
    let mut add = |lhs: usize, rhs: Term| {
        rules.push(Rule {
            lhs: dyck_nonterminal(lhs),
            rhs,
        })
    };
    for i in 0..l {
        for j in 0..l - i {
            add(i + j, Term::concat(s(i), s(j)));
        }
    }
    for i in 1..l {
        for j in 0..=l - i {
            for p in 1..=i {
                add(i + j - 1, Term::intercal(p, s(i), s(j)));
            }
        }
    }
    for sym in 0..x.len() {
        let name = x.name(sym);
        let r = x.arity(sym) - 1;
        let mut inner = s(r);
        for p in 1..=r {
            let glue = format!("{name}'{p} 1 {name}^{}", p + 1);
            inner = Term::intercal(p, inner, Term::lit(&glue));
        }
        let open = Term::lit(&format!("{name}^1"));
        let close = Term::lit(&format!("{name}'{}", r + 1));
        add(r, Term::concat(Term::concat(open, inner), close));
    }
    add(0, Term::lit(""));
    if l >= 2 {
        add(1, Term::Separator);
    }
    let alphabet = x.letters().iter().map(|b| x.render_letter(b)).collect();
    Grammar {
        k: l - 1,
        alphabet,
        nonterminals: (0..l).map(|i| (dyck_nonterminal(i), i)).collect(),
        rules,
        start: dyck_nonterminal(0),
    }
}

impl From<TermError> for DcfgError {
    fn from(e: TermError) -> Self {
        DcfgError::Precondition(e.to_string())
    }
}
