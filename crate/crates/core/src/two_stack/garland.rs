//! Stack images of transitions and the garland conditions on words of
//! paired bracket letters.

use std::fmt;

use super::{Command, Gstsa, GstsaTransition, TwoStackError};

/// A stack symbol, barred when it is removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StackLetter {
    pub symbol: String,
    pub barred: bool,
}

impl StackLetter {
    pub fn open(symbol: impl Into<String>) -> Self {
        StackLetter {
            symbol: symbol.into(),
            barred: false,
        }
    }

    pub fn close(symbol: impl Into<String>) -> Self {
        StackLetter {
            symbol: symbol.into(),
            barred: true,
        }
    }
}

impl fmt::Display for StackLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.symbol, if self.barred { "'" } else { "" })
    }
}

/// One letter of a garland word: the effect on stack 1 and on stack 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairLetter {
    pub first: StackLetter,
    pub second: StackLetter,
}

impl fmt::Display for PairLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.first, self.second)
    }
}

/// Parses `<a,a> <a',b> <b,b'>`; a trailing `'` bars a symbol.
pub fn parse_garland_word(text: &str) -> Result<Vec<PairLetter>, String> {
    let letter = |s: &str| {
        let s = s.trim();
        if s.is_empty() || s == "'" {
            return Err(format!("empty stack symbol in `{text}`"));
        }
        Ok(match s.strip_suffix('\'') {
            Some(base) => StackLetter::close(base),
            None => StackLetter::open(s),
        })
    };
    text.split_whitespace()
        .map(|tok| {
            let inner = tok
                .strip_prefix('<')
                .and_then(|t| t.strip_suffix('>'))
                .ok_or_else(|| format!("expected `<x,y>`, found `{tok}`"))?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| format!("expected `<x,y>`, found `{tok}`"))?;
            Ok(PairLetter {
                first: letter(a)?,
                second: letter(b)?,
            })
        })
        .collect()
}

pub fn render_garland_word(w: &[PairLetter]) -> String {
    w.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// The stack image of a transition. Coordinate `i` records what happens on
/// stack `i`, so RETURN `α1 α2`, which removes `α1` from stack 2 and puts
/// `α2` on stack 1, maps to `<α2, α1'>`.
pub fn psi(m: &Gstsa, t: &GstsaTransition) -> Result<PairLetter, TwoStackError> {
    let (a1, a2) = t.symbols.ok_or(TwoStackError::KeepHasNoImage)?;
    let (a1, a2) = (m.symbols.name(a1), m.symbols.name(a2));
    let (first, second) = match t.command {
        Command::Push => (StackLetter::open(a1), StackLetter::open(a2)),
        Command::Move => (StackLetter::close(a1), StackLetter::open(a2)),
        Command::Return => (StackLetter::open(a2), StackLetter::close(a1)),
        Command::Pop => (StackLetter::close(a1), StackLetter::close(a2)),
        Command::Keep => return Err(TwoStackError::KeepHasNoImage),
    };
    Ok(PairLetter { first, second })
}

/// Stack image of a computation given by transition indices; KEEP steps
/// contribute nothing.
pub fn psi_image(m: &Gstsa, transitions: &[usize]) -> Vec<PairLetter> {
    transitions
        .iter()
        .filter_map(|&t| psi(m, &m.transitions[t]).ok())
        .collect()
}

/// The contraction partner of every position of a correct bracket
/// sequence, `None` when the sequence is not correct.
pub fn contraction_relation(seq: &[&StackLetter]) -> Option<Vec<usize>> {
    let mut partner = vec![usize::MAX; seq.len()];
    let mut open: Vec<usize> = Vec::new();
    for (j, l) in seq.iter().enumerate() {
        if l.barred {
            let i = open.pop()?;
            if seq[i].symbol != l.symbol {
                return None;
            }
            partner[i] = j;
            partner[j] = i;
        } else {
            open.push(j);
        }
    }
    open.is_empty().then_some(partner)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GarlandViolation {
    /// Projection 1 or 2 is not a correct bracket sequence.
    Unbalanced { projection: usize },
    /// The link `(j1, i2)` of projection 2 joins links `(i1, j1)` and
    /// `(i2, j2)` of projection 1 in a forbidden order.
    Crossing { i1: usize, j1: usize, i2: usize, j2: usize },
    /// An ascending alternating chain with more than `k` links.
    ChainTooLong { chain: Vec<usize>, k: usize },
    /// A position that lies on no closed chain.
    OpenChain { position: usize },
}

impl fmt::Display for GarlandViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GarlandViolation::Unbalanced { projection } => {
                write!(f, "projection {projection} is not a correct bracket sequence")
            }
            GarlandViolation::Crossing { i1, j1, i2, j2 } => {
                write!(f, "links ({i1},{j1}) and ({i2},{j2}) joined at ({j1},{i2}) in a forbidden order")
            }
            GarlandViolation::ChainTooLong { chain, k } => {
                let c: Vec<String> = chain.iter().map(ToString::to_string).collect();
                write!(f, "ascending chain {} has {} links, more than {k}", c.join("<"), chain.len() / 2)
            }
            GarlandViolation::OpenChain { position } => write!(f, "position {position} lies on no closed chain"),
        }
    }
}

fn relations(w: &[PairLetter]) -> Result<(Vec<usize>, Vec<usize>), GarlandViolation> {
    let p1: Vec<&StackLetter> = w.iter().map(|l| &l.first).collect();
    let p2: Vec<&StackLetter> = w.iter().map(|l| &l.second).collect();
    let r1 = contraction_relation(&p1).ok_or(GarlandViolation::Unbalanced { projection: 1 })?;
    let r2 = contraction_relation(&p2).ok_or(GarlandViolation::Unbalanced { projection: 2 })?;
    Ok((r1, r2))
}

// The ascending chain starting with the projection-1 link at `i`.
fn chain_from(r1: &[usize], r2: &[usize], i: usize) -> Vec<usize> {
    let mut chain = Vec::new();
    let mut i = i;
    loop {
        let j = r1[i];
        chain.push(i);
        chain.push(j);
        let next = r2[j];
        if next <= j || r1[next] <= next {
            return chain;
        }
        i = next;
    }
}

/// Checks the three garland conditions with bound `k`.
///
/// The order condition accepts, for each projection-2 link `(j1, i2)` with
/// `j1 < i2`, `i1 = R1(j1)`, `j2 = R1(i2)`: either `i1 < j1 < i2 < j2`
/// (a MOVE later returned), or `j1 < i1` together with `j2 < i2` (a PUSH
/// later popped).
pub fn check_garland(w: &[PairLetter], k: usize) -> Result<(), GarlandViolation> {
    let (r1, r2) = relations(w)?;
    for j1 in 0..w.len() {
        let i2 = r2[j1];
        if j1 >= i2 {
            continue;
        }
        let (i1, j2) = (r1[j1], r1[i2]);
        let returned = i1 < j1 && i2 < j2;
        let popped = j1 < i1 && j2 < i2;
        if !(returned || popped || i1 == j2) {
            return Err(GarlandViolation::Crossing { i1, j1, i2, j2 });
        }
    }
    for i in 0..w.len() {
        if r1[i] > i {
            let chain = chain_from(&r1, &r2, i);
            if chain.len() / 2 > k {
                return Err(GarlandViolation::ChainTooLong { chain, k });
            }
        }
    }
    Ok(())
}

pub fn is_k_garland(w: &[PairLetter], k: usize) -> bool {
    check_garland(w, k).is_ok()
}

/// Splits the positions of a `k`-garland into closed chains
/// `i1 < j1 < … < il < jl`, each closed by the projection-2 link `(jl, i1)`.
pub fn extract_garland_cycles(w: &[PairLetter], k: usize) -> Result<Vec<Vec<usize>>, GarlandViolation> {
    check_garland(w, k)?;
    let (r1, r2) = relations(w)?;
    let mut covered = vec![false; w.len()];
    let mut cycles = Vec::new();
    for i in 0..w.len() {
        // a chain starts where both links leave to the right
        if r1[i] <= i || r2[i] <= i {
            continue;
        }
        let chain = chain_from(&r1, &r2, i);
        let last = *chain.last().expect("chains have two positions per link");
        if r2[last] != i {
            return Err(GarlandViolation::OpenChain { position: i });
        }
        for &p in &chain {
            covered[p] = true;
        }
        cycles.push(chain);
    }
    match covered.iter().position(|c| !c) {
        Some(position) => Err(GarlandViolation::OpenChain { position }),
        None => Ok(cycles),
    }
}
