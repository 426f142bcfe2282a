use std::fmt;

use super::MonoidError;

/// A ranked alphabet `X` with arity function `ρ : X → 1..L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedAlphabet {
    names: Vec<String>,
    arity: Vec<usize>,
}

/// A multibracket `x^j` (opening) or `x'j` (closing, barred).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BracketLetter {
    /// Index of `x` in the alphabet.
    pub symbol: usize,
    /// 1-based level, at most the arity of `x`.
    pub level: usize,
    pub barred: bool,
}

impl BracketLetter {
    pub fn open(symbol: usize, level: usize) -> Self {
        BracketLetter {
            symbol,
            level,
            barred: false,
        }
    }

    pub fn close(symbol: usize, level: usize) -> Self {
        BracketLetter {
            symbol,
            level,
            barred: true,
        }
    }
}

/// The symbol `a_{x,i}` of the alphabet on which the two polycyclic
/// projections act.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ASymbol {
    pub symbol: usize,
    pub index: usize,
}

impl RankedAlphabet {
    pub fn new<S: Into<String>>(entries: impl IntoIterator<Item = (S, usize)>) -> Result<Self, MonoidError> {
        let mut names = Vec::new();
        let mut arity = Vec::new();
        for (name, a) in entries {
            let name = name.into();
            if a == 0 {
                return Err(MonoidError::BadAlphabet(format!("arity of `{name}` must be positive")));
            }
            if name.is_empty()
                || name.contains(['^', '\''])
                || name.chars().any(char::is_whitespace)
            {
                return Err(MonoidError::BadAlphabet(format!("invalid bracket name `{name}`")));
            }
            if names.contains(&name) {
                return Err(MonoidError::BadAlphabet(format!("duplicate bracket `{name}`")));
            }
            names.push(name);
            arity.push(a);
        }
        if names.is_empty() {
            return Err(MonoidError::BadAlphabet("empty alphabet".into()));
        }
        Ok(RankedAlphabet { names, arity })
    }

    /// Parses lines `bracket x 2`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, MonoidError> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || MonoidError::Parse {
                line: n + 1,
                message: format!("expected `bracket <name> <arity>`, got `{line}`"),
            };
            match parts.as_slice() {
                ["bracket", name, a] => {
                    let a: usize = a.parse().map_err(|_| bad())?;
                    entries.push((name.to_string(), a));
                }
                _ => return Err(bad()),
            }
        }
        Self::new(entries)
    }

    pub fn to_text(&self) -> String {
        self.names
            .iter()
            .zip(&self.arity)
            .map(|(n, a)| format!("bracket {n} {a}\n"))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, symbol: usize) -> &str {
        &self.names[symbol]
    }

    pub fn arity(&self, symbol: usize) -> usize {
        self.arity[symbol]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The rank `L`, the largest arity.
    pub fn rank(&self) -> usize {
        self.arity.iter().copied().max().unwrap_or(0)
    }

    /// `B(X)` in a fixed order: by symbol, then level, opening before closing.
    pub fn letters(&self) -> Vec<BracketLetter> {
        let mut out = Vec::new();
        for (s, &a) in self.arity.iter().enumerate() {
            for level in 1..=a {
                out.push(BracketLetter::open(s, level));
                out.push(BracketLetter::close(s, level));
            }
        }
        out
    }

    /// The alphabet `A = { a_{x,i} }`.
    pub fn a_symbols(&self) -> Vec<ASymbol> {
        let mut out = Vec::new();
        for (s, &a) in self.arity.iter().enumerate() {
            for index in 1..=a {
                out.push(ASymbol { symbol: s, index });
            }
        }
        out
    }

    pub fn contains(&self, l: &BracketLetter) -> bool {
        l.symbol < self.len() && l.level >= 1 && l.level <= self.arity[l.symbol]
    }

    /// Renders `x^j` or `x'j`.
    pub fn render_letter(&self, l: &BracketLetter) -> String {
        let mark = if l.barred { '\'' } else { '^' };
        format!("{}{}{}", self.names[l.symbol], mark, l.level)
    }

    pub fn render_word(&self, w: &[BracketLetter]) -> String {
        w.iter()
            .map(|l| self.render_letter(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse_letter(&self, token: &str) -> Result<BracketLetter, MonoidError> {
        let bad = || MonoidError::BadLetter(token.to_string());
        let pos = token.rfind(['^', '\'']).ok_or_else(bad)?;
        let symbol = self.index_of(&token[..pos]).ok_or_else(bad)?;
        let level: usize = token[pos + 1..].parse().map_err(|_| bad())?;
        let letter = BracketLetter {
            symbol,
            level,
            barred: token.as_bytes()[pos] == b'\'',
        };
        if !self.contains(&letter) {
            return Err(bad());
        }
        Ok(letter)
    }

    /// Parses a whitespace-separated multibracket word (`x^1 x'1`).
    pub fn parse_word(&self, text: &str) -> Result<Vec<BracketLetter>, MonoidError> {
        text.split_whitespace().map(|t| self.parse_letter(t)).collect()
    }
}

impl fmt::Display for RankedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .names
            .iter()
            .zip(&self.arity)
            .map(|(n, a)| format!("{n}:{a}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
