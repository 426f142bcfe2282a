//! Simultaneous two-stack automata.
//!
//! Both stacks hold `(symbol, counter)` cells. PUSH adds a cell with counter
//! 1 to each stack, MOVE shifts a cell from the first stack to the second
//! and RETURN shifts it back, each time incrementing the counter, and POP
//! removes a finished cell from both. In the plain model the counter bound
//! comes from the symbol's arity; in the generalized model the two stacks
//! may receive different symbols and the bound is the machine rank.

mod computations;
mod garland;
mod lookup;

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::names::{content_lines, SymbolTable};
use crate::search::{search_trace, search_with, Outcome, RunBudget, SearchSpace};

pub use computations::{
    check_counter_discipline, check_stack_balance, enumerate_accepting_computations, is_identity_preserving,
    Computation, ComputationSet, DEFAULT_COMPUTATION_CAP,
};
pub use garland::{
    check_garland, contraction_relation, extract_garland_cycles, is_k_garland, parse_garland_word, psi,
    psi_image, render_garland_word, GarlandViolation, PairLetter, StackLetter,
};
pub use lookup::eliminate_lookup_gstsa;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwoStackError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no initial state")]
    MissingInitial,
    #[error("symbol {symbol} has arity {arity} outside 1..{rank}")]
    BadArity { symbol: String, arity: usize, rank: usize },
    #[error("KEEP transitions have no stack image")]
    KeepHasNoImage,
    #[error("not a garland: {0}")]
    NotAGarland(GarlandViolation),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    Push,
    Move,
    Return,
    Pop,
    Keep,
}

impl Command {
    fn parse(s: &str) -> Option<Command> {
        Some(match s {
            "PUSH" => Command::Push,
            "MOVE" => Command::Move,
            "RETURN" => Command::Return,
            "POP" => Command::Pop,
            "KEEP" => Command::Keep,
            _ => return None,
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Push => "PUSH",
            Command::Move => "MOVE",
            Command::Return => "RETURN",
            Command::Pop => "POP",
            Command::Keep => "KEEP",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StsaTransition {
    pub from: usize,
    pub input: Option<usize>,
    pub command: Command,
    /// `None` exactly for KEEP.
    pub symbol: Option<usize>,
    pub to: usize,
}

/// A simultaneous two-stack automaton of rank `rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stsa {
    pub states: SymbolTable,
    pub alphabet: SymbolTable,
    pub symbols: SymbolTable,
    pub arity: Vec<usize>,
    pub rank: usize,
    pub transitions: Vec<StsaTransition>,
    pub initial: usize,
    pub finals: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GstsaTransition {
    pub from: usize,
    pub input: Option<usize>,
    pub command: Command,
    /// `(α1, α2)`; `None` exactly for KEEP.
    pub symbols: Option<(usize, usize)>,
    /// Required top of each stack, deepest symbol first; empty when blind.
    pub observe: [Vec<usize>; 2],
    pub to: usize,
}

/// A generalized simultaneous two-stack automaton of rank `rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gstsa {
    pub states: SymbolTable,
    pub alphabet: SymbolTable,
    pub symbols: SymbolTable,
    pub rank: usize,
    pub transitions: Vec<GstsaTransition>,
    pub initial: usize,
    pub finals: Vec<usize>,
}

fn initial_states() -> SymbolTable {
    let mut states = SymbolTable::new();
    states.intern("q0");
    states
}

fn set_final(states: &mut SymbolTable, finals: &mut Vec<usize>, state: &str) {
    let s = states.intern(state);
    if !finals.contains(&s) {
        finals.push(s);
    }
}

impl Stsa {
    /// An empty machine with initial state `q0`.
    pub fn new(rank: usize) -> Self {
        Stsa {
            states: initial_states(),
            alphabet: SymbolTable::new(),
            symbols: SymbolTable::new(),
            arity: Vec::new(),
            rank,
            transitions: Vec::new(),
            initial: 0,
            finals: Vec::new(),
        }
    }

    pub fn add_symbol(&mut self, name: &str, arity: usize) -> usize {
        let s = self.symbols.intern(name);
        if s == self.arity.len() {
            self.arity.push(arity);
        } else {
            self.arity[s] = arity;
        }
        s
    }

    /// Adds a transition by names; `symbol` must be declared unless the
    /// command is KEEP.
    pub fn add(&mut self, from: &str, input: Option<&str>, command: Command, symbol: Option<&str>, to: &str) {
        let from = self.states.intern(from);
        let to = self.states.intern(to);
        let input = input.map(|a| self.alphabet.intern(a));
        let symbol = symbol.map(|s| self.symbols.get(s).expect("declared stack symbol"));
        self.transitions.push(StsaTransition {
            from,
            input,
            command,
            symbol,
            to,
        });
    }

    pub fn set_final(&mut self, state: &str) {
        set_final(&mut self.states, &mut self.finals, state);
    }

    pub fn validate(&self) -> Result<(), TwoStackError> {
        for (s, &a) in self.arity.iter().enumerate() {
            if a == 0 || a > self.rank {
                return Err(TwoStackError::BadArity {
                    symbol: self.symbols.name(s).to_string(),
                    arity: a,
                    rank: self.rank,
                });
            }
        }
        Ok(())
    }

    /// Parses the plain machine format:
    ///
    /// ```text
    /// rank 2
    /// sym A arity 2
    /// state q0 init
    /// state q1 final
    /// trans q0 a PUSH A -> q0
    /// trans q0 _ KEEP -> q1
    /// ```
    pub fn parse(text: &str) -> Result<Self, TwoStackError> {
        let raw = RawMachine::parse(text)?;
        let mut m = Stsa::new(0);
        m.states = raw.states;
        m.alphabet = raw.alphabet;
        m.initial = raw.initial;
        m.finals = raw.finals;
        for (line, name, arity) in &raw.symbols {
            let Some(arity) = arity else {
                return Err(parse_error(*line, format!("symbol {name} needs `arity <n>`")));
            };
            m.add_symbol(name, *arity);
        }
        m.rank = raw.rank.unwrap_or_else(|| m.arity.iter().copied().max().unwrap_or(1));
        for t in raw.transitions {
            if !t.observe[0].is_empty() || !t.observe[1].is_empty() {
                return Err(parse_error(t.line, "observation windows need a generalized machine".into()));
            }
            let symbol = match (t.command, t.symbols.as_slice()) {
                (Command::Keep, []) => None,
                (Command::Keep, _) => return Err(parse_error(t.line, "KEEP takes no symbol".into())),
                (_, [s]) => Some(
                    m.symbols
                        .get(s)
                        .ok_or_else(|| parse_error(t.line, format!("undeclared symbol {s}")))?,
                ),
                _ => return Err(parse_error(t.line, format!("{} takes exactly one symbol", t.command))),
            };
            m.transitions.push(StsaTransition {
                from: t.from,
                input: t.input,
                command: t.command,
                symbol,
                to: t.to,
            });
        }
        m.validate()?;
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("rank {}\n", self.rank);
        for (s, name) in self.symbols.names().iter().enumerate() {
            let _ = writeln!(out, "sym {name} arity {}", self.arity[s]);
        }
        write_states(&mut out, &self.alphabet, &self.states, self.initial, &self.finals);
        for t in &self.transitions {
            let sym = t.symbol.map(|s| format!(" {}", self.symbols.name(s))).unwrap_or_default();
            let _ = writeln!(
                out,
                "trans {} {} {}{} -> {}",
                self.states.name(t.from),
                t.input.map_or("_", |a| self.alphabet.name(a)),
                t.command,
                sym,
                self.states.name(t.to)
            );
        }
        out
    }
}

impl Gstsa {
    /// An empty machine with initial state `q0`.
    pub fn new(rank: usize) -> Self {
        Gstsa {
            states: initial_states(),
            alphabet: SymbolTable::new(),
            symbols: SymbolTable::new(),
            rank,
            transitions: Vec::new(),
            initial: 0,
            finals: Vec::new(),
        }
    }

    /// Adds a blind transition by names; `symbols` is `None` for KEEP.
    pub fn add(&mut self, from: &str, input: Option<&str>, command: Command, symbols: Option<(&str, &str)>, to: &str) {
        self.add_observing(from, input, command, symbols, [&[], &[]], to);
    }

    pub fn add_observing(
        &mut self,
        from: &str,
        input: Option<&str>,
        command: Command,
        symbols: Option<(&str, &str)>,
        observe: [&[&str]; 2],
        to: &str,
    ) {
        let from = self.states.intern(from);
        let to = self.states.intern(to);
        let input = input.map(|a| self.alphabet.intern(a));
        let symbols = symbols.map(|(a, b)| (self.symbols.intern(a), self.symbols.intern(b)));
        let observe = observe.map(|w| w.iter().map(|s| self.symbols.intern(s)).collect());
        self.transitions.push(GstsaTransition {
            from,
            input,
            command,
            symbols,
            observe,
            to,
        });
    }

    pub fn set_final(&mut self, state: &str) {
        set_final(&mut self.states, &mut self.finals, state);
    }

    /// Longest observation window on either stack.
    pub fn depth(&self) -> usize {
        self.transitions
            .iter()
            .flat_map(|t| t.observe.iter().map(Vec::len))
            .max()
            .unwrap_or(0)
    }

    /// Parses the generalized format: as [`Stsa::parse`] but with `sym A`
    /// declarations (optional), two symbols per command and an optional
    /// `obs [A B|C]` clause before the arrow. A single symbol stands for a
    /// repeated pair.
    pub fn parse(text: &str) -> Result<Self, TwoStackError> {
        let raw = RawMachine::parse(text)?;
        let mut m = Gstsa::new(raw.rank.unwrap_or(1));
        m.states = raw.states;
        m.alphabet = raw.alphabet;
        m.initial = raw.initial;
        m.finals = raw.finals;
        for (_, name, _) in &raw.symbols {
            m.symbols.intern(name);
        }
        for t in raw.transitions {
            let symbols = match (t.command, t.symbols.as_slice()) {
                (Command::Keep, []) => None,
                (Command::Keep, _) => return Err(parse_error(t.line, "KEEP takes no symbol".into())),
                (_, [s]) => {
                    let s = m.symbols.intern(s);
                    Some((s, s))
                }
                (_, [a, b]) => Some((m.symbols.intern(a), m.symbols.intern(b))),
                _ => return Err(parse_error(t.line, format!("{} takes two symbols", t.command))),
            };
            let observe = t.observe.map(|w| w.iter().map(|s| m.symbols.intern(s)).collect());
            m.transitions.push(GstsaTransition {
                from: t.from,
                input: t.input,
                command: t.command,
                symbols,
                observe,
                to: t.to,
            });
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("rank {}\n", self.rank);
        for name in self.symbols.names() {
            let _ = writeln!(out, "sym {name}");
        }
        write_states(&mut out, &self.alphabet, &self.states, self.initial, &self.finals);
        for t in &self.transitions {
            let syms = t
                .symbols
                .map(|(a, b)| format!(" {} {}", self.symbols.name(a), self.symbols.name(b)))
                .unwrap_or_default();
            let obs = if t.observe.iter().all(Vec::is_empty) {
                String::new()
            } else {
                let w = |v: &[usize]| v.iter().map(|&s| self.symbols.name(s)).collect::<Vec<_>>().join(" ");
                format!(" obs [{}|{}]", w(&t.observe[0]), w(&t.observe[1]))
            };
            let _ = writeln!(
                out,
                "trans {} {} {}{}{} -> {}",
                self.states.name(t.from),
                t.input.map_or("_", |a| self.alphabet.name(a)),
                t.command,
                syms,
                obs,
                self.states.name(t.to)
            );
        }
        out
    }
}

fn write_states(out: &mut String, alphabet: &SymbolTable, states: &SymbolTable, initial: usize, finals: &[usize]) {
    if !alphabet.is_empty() {
        let _ = writeln!(out, "alphabet {}", alphabet.names().join(" "));
    }
    for (i, name) in states.names().iter().enumerate() {
        let mut line = format!("state {name}");
        if i == initial {
            line.push_str(" init");
        }
        if finals.contains(&i) {
            line.push_str(" final");
        }
        let _ = writeln!(out, "{line}");
    }
}

fn parse_error(line: usize, message: String) -> TwoStackError {
    TwoStackError::Parse { line, message }
}

struct RawTransition {
    line: usize,
    from: usize,
    input: Option<usize>,
    command: Command,
    symbols: Vec<String>,
    observe: [Vec<String>; 2],
    to: usize,
}

struct RawMachine {
    rank: Option<usize>,
    symbols: Vec<(usize, String, Option<usize>)>,
    states: SymbolTable,
    alphabet: SymbolTable,
    initial: usize,
    finals: Vec<usize>,
    transitions: Vec<RawTransition>,
}

impl RawMachine {
    fn parse(text: &str) -> Result<Self, TwoStackError> {
        let mut raw = RawMachine {
            rank: None,
            symbols: Vec::new(),
            states: SymbolTable::new(),
            alphabet: SymbolTable::new(),
            initial: 0,
            finals: Vec::new(),
            transitions: Vec::new(),
        };
        let mut initial = None;
        for (line, content) in content_lines(text) {
            let err = |m: &str| parse_error(line, m.to_string());
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens.as_slice() {
                ["rank", k] => raw.rank = Some(k.parse().map_err(|_| err("rank must be a number"))?),
                ["alphabet", letters @ ..] => {
                    for a in letters {
                        raw.alphabet.intern(a);
                    }
                }
                ["sym", name] => raw.symbols.push((line, name.to_string(), None)),
                ["sym", name, "arity", a] => {
                    let a = a.parse().map_err(|_| err("arity must be a number"))?;
                    raw.symbols.push((line, name.to_string(), Some(a)));
                }
                ["state", name, flags @ ..] => {
                    let s = raw.states.intern(name);
                    for flag in flags {
                        match *flag {
                            "init" | "initial" => {
                                if initial.replace(s).is_some_and(|old| old != s) {
                                    return Err(err("second initial state"));
                                }
                            }
                            "final" => {
                                if !raw.finals.contains(&s) {
                                    raw.finals.push(s);
                                }
                            }
                            _ => return Err(err("unknown state flag")),
                        }
                    }
                }
                ["trans", ..] => {
                    let t = Self::parse_transition(&mut raw, line, &tokens[1..])?;
                    raw.transitions.push(t);
                }
                _ => return Err(err("unknown declaration")),
            }
        }
        raw.initial = initial.ok_or(TwoStackError::MissingInitial)?;
        Ok(raw)
    }

    fn parse_transition(raw: &mut RawMachine, line: usize, tokens: &[&str]) -> Result<RawTransition, TwoStackError> {
        let shape = || parse_error(line, "expected `trans <from> <input> <COMMAND> [symbols] [obs [..|..]] -> <to>`".into());
        let arrow = tokens.iter().position(|t| *t == "->").ok_or_else(shape)?;
        if arrow < 3 || tokens.len() != arrow + 2 {
            return Err(shape());
        }
        let command = Command::parse(tokens[2]).ok_or_else(|| parse_error(line, format!("unknown command {}", tokens[2])))?;
        let body = &tokens[3..arrow];
        let (symbols, observe) = match body.iter().position(|t| *t == "obs") {
            None => (body.to_vec(), [Vec::new(), Vec::new()]),
            Some(o) => {
                let clause = body[o + 1..].join(" ");
                let inner = clause
                    .strip_prefix('[')
                    .and_then(|c| c.strip_suffix(']'))
                    .ok_or_else(|| parse_error(line, "expected `obs [<stack 1>|<stack 2>]`".into()))?;
                let (a, b) = inner
                    .split_once('|')
                    .ok_or_else(|| parse_error(line, "expected `obs [<stack 1>|<stack 2>]`".into()))?;
                let split = |w: &str| w.split_whitespace().map(str::to_string).collect::<Vec<_>>();
                (body[..o].to_vec(), [split(a), split(b)])
            }
        };
        Ok(RawTransition {
            line,
            from: raw.states.intern(tokens[0]),
            input: match tokens[1] {
                "_" => None,
                a => Some(raw.alphabet.intern(a)),
            },
            command,
            symbols: symbols.iter().map(|s| s.to_string()).collect(),
            observe,
            to: raw.states.intern(tokens[arrow + 1]),
        })
    }
}

/// A stack cell: symbol and exchange counter.
pub type Cell = (usize, usize);

/// An instantaneous description; the unread input is `word[position..]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: usize,
    pub position: usize,
    /// Bottom first.
    pub stack1: Vec<Cell>,
    pub stack2: Vec<Cell>,
}

impl Configuration {
    pub fn initial(state: usize) -> Self {
        Configuration {
            state,
            position: 0,
            stack1: Vec::new(),
            stack2: Vec::new(),
        }
    }

    pub fn height(&self) -> usize {
        self.stack1.len() + self.stack2.len()
    }
}

/// Renders a stack as `(A,1) (B,2)`, bottom first.
pub fn render_stack(symbols: &SymbolTable, stack: &[Cell]) -> String {
    stack
        .iter()
        .map(|&(s, c)| format!("({},{c})", symbols.name(s)))
        .collect::<Vec<_>>()
        .join(" ")
}

// Counter bound of a plain machine (per symbol) or a generalized one.
#[derive(Clone, Copy)]
enum Bounds<'a> {
    Arity(&'a [usize]),
    Rank(usize),
}

// A transition of either kind in generalized form.
#[derive(Clone, Copy)]
struct Op<'a> {
    command: Command,
    symbols: (usize, usize),
    observe: [&'a [usize]; 2],
}

fn apply(op: Op<'_>, bounds: Bounds<'_>, c: &Configuration) -> Option<(Vec<Cell>, Vec<Cell>)> {
    let tops = |s: &[Cell], w: &[usize]| s.len() >= w.len() && s[s.len() - w.len()..].iter().map(|c| c.0).eq(w.iter().copied());
    if !tops(&c.stack1, op.observe[0]) || !tops(&c.stack2, op.observe[1]) {
        return None;
    }
    let (a1, a2) = op.symbols;
    // MOVE and RETURN bound `i < limit`
    let limit = || match bounds {
        Bounds::Arity(ar) => ar[a1],
        Bounds::Rank(k) => k,
    };
    let mut s1 = c.stack1.clone();
    let mut s2 = c.stack2.clone();
    match op.command {
        Command::Keep => {}
        Command::Push => {
            s1.push((a1, 1));
            s2.push((a2, 1));
        }
        Command::Move => {
            let (x, n) = s1.pop()?;
            if x != a1 || n % 2 == 0 || n.div_ceil(2) >= limit() {
                return None;
            }
            s2.push((a2, n + 1));
        }
        Command::Return => {
            let (x, n) = s2.pop()?;
            if x != a1 || n % 2 == 1 || n / 2 >= limit() {
                return None;
            }
            s1.push((a2, n + 1));
        }
        Command::Pop => {
            let (x, n) = s1.pop()?;
            let ok = x == a1
                && match bounds {
                    Bounds::Arity(ar) => n == 2 * ar[a1] - 1,
                    Bounds::Rank(k) => n % 2 == 1 && n.div_ceil(2) <= k,
                };
            if !ok || s2.pop()? != (a2, 1) {
                return None;
            }
        }
    }
    Some((s1, s2))
}

fn advance(input: Option<usize>, word: &[usize], c: &Configuration) -> Option<usize> {
    match input {
        None => Some(c.position),
        Some(a) if word.get(c.position) == Some(&a) => Some(c.position + 1),
        Some(_) => None,
    }
}

fn stsa_op(t: &StsaTransition) -> Op<'static> {
    let s = t.symbol.unwrap_or(0);
    Op {
        command: t.command,
        symbols: (s, s),
        observe: [&[], &[]],
    }
}

fn gstsa_op(t: &GstsaTransition) -> Op<'_> {
    Op {
        command: t.command,
        symbols: t.symbols.unwrap_or((0, 0)),
        observe: [&t.observe[0], &t.observe[1]],
    }
}

/// Fires `t` in `c` on input `word`; `None` when inapplicable.
pub fn stsa_step(m: &Stsa, word: &[usize], c: &Configuration, t: &StsaTransition) -> Option<Configuration> {
    if t.from != c.state {
        return None;
    }
    let position = advance(t.input, word, c)?;
    let (stack1, stack2) = apply(stsa_op(t), Bounds::Arity(&m.arity), c)?;
    Some(Configuration {
        state: t.to,
        position,
        stack1,
        stack2,
    })
}

/// Fires `t` in `c` on input `word`; `None` when inapplicable.
pub fn gstsa_step(m: &Gstsa, word: &[usize], c: &Configuration, t: &GstsaTransition) -> Option<Configuration> {
    if t.from != c.state {
        return None;
    }
    let position = advance(t.input, word, c)?;
    let (stack1, stack2) = apply(gstsa_op(t), Bounds::Rank(m.rank), c)?;
    Some(Configuration {
        state: t.to,
        position,
        stack1,
        stack2,
    })
}

struct Space<'a> {
    initial: usize,
    finals: &'a [usize],
    word: Vec<usize>,
    bounds: Bounds<'a>,
    // per state: (input, to, op)
    out: Vec<Vec<(Option<usize>, usize, Op<'a>)>>,
}

impl<'a> Space<'a> {
    fn for_stsa(m: &'a Stsa, word: Vec<usize>) -> Self {
        let mut out = vec![Vec::new(); m.states.len()];
        for t in &m.transitions {
            out[t.from].push((t.input, t.to, stsa_op(t)));
        }
        Space {
            initial: m.initial,
            finals: &m.finals,
            word,
            bounds: Bounds::Arity(&m.arity),
            out,
        }
    }

    fn for_gstsa(m: &'a Gstsa, word: Vec<usize>) -> Self {
        let mut out = vec![Vec::new(); m.states.len()];
        for t in &m.transitions {
            out[t.from].push((t.input, t.to, gstsa_op(t)));
        }
        Space {
            initial: m.initial,
            finals: &m.finals,
            word,
            bounds: Bounds::Rank(m.rank),
            out,
        }
    }
}

impl SearchSpace for Space<'_> {
    type Config = Configuration;

    fn initial(&self) -> Vec<Configuration> {
        vec![Configuration::initial(self.initial)]
    }

    fn is_accepting(&self, c: &Configuration) -> bool {
        c.position == self.word.len() && c.stack1.is_empty() && c.stack2.is_empty() && self.finals.contains(&c.state)
    }

    fn successors(&self, c: &Configuration, out: &mut Vec<(Configuration, bool)>) {
        for &(input, to, op) in &self.out[c.state] {
            let Some(position) = advance(input, &self.word, c) else {
                continue;
            };
            if let Some((stack1, stack2)) = apply(op, self.bounds, c) {
                out.push((
                    Configuration {
                        state: to,
                        position,
                        stack1,
                        stack2,
                    },
                    input.is_none(),
                ));
            }
        }
    }

    fn stack_height(&self, c: &Configuration) -> usize {
        c.height()
    }
}

pub fn run_stsa_with<S: AsRef<str>>(
    m: &Stsa,
    w: &[S],
    budget: &RunBudget,
    visit: impl FnMut(&Configuration),
) -> Outcome {
    match m.alphabet.encode(w) {
        Some(word) => search_with(&Space::for_stsa(m, word), budget, visit),
        None => Outcome::Reject,
    }
}

pub fn run_stsa<S: AsRef<str>>(m: &Stsa, w: &[S], budget: &RunBudget) -> Outcome {
    run_stsa_with(m, w, budget, |_| {})
}

/// The configurations of one accepting run, if any.
pub fn trace_stsa<S: AsRef<str>>(m: &Stsa, w: &[S], budget: &RunBudget) -> (Outcome, Option<Vec<Configuration>>) {
    match m.alphabet.encode(w) {
        Some(word) => search_trace(&Space::for_stsa(m, word), budget),
        None => (Outcome::Reject, None),
    }
}

pub fn run_gstsa_with<S: AsRef<str>>(
    m: &Gstsa,
    w: &[S],
    budget: &RunBudget,
    visit: impl FnMut(&Configuration),
) -> Outcome {
    match m.alphabet.encode(w) {
        Some(word) => search_with(&Space::for_gstsa(m, word), budget, visit),
        None => Outcome::Reject,
    }
}

pub fn run_gstsa<S: AsRef<str>>(m: &Gstsa, w: &[S], budget: &RunBudget) -> Outcome {
    run_gstsa_with(m, w, budget, |_| {})
}

/// The rank-2 machine for `{ a^m b^n a^m b^n }`.
pub fn build_copy_machine() -> Stsa {
    let mut m = Stsa::new(2);
    m.add_symbol("A", 2);
    m.add_symbol("B", 2);
    for i in 0..=6 {
        m.states.intern(&format!("q{i}"));
    }
    m.alphabet.intern("a");
    m.alphabet.intern("b");
    let loops = [
        ("q0", Some("a"), Command::Push, "A"),
        ("q1", Some("b"), Command::Push, "B"),
        ("q2", None, Command::Move, "B"),
        ("q3", Some("a"), Command::Move, "A"),
        ("q4", None, Command::Return, "A"),
        ("q5", Some("b"), Command::Return, "B"),
    ];
    for (i, (q, a, c, s)) in loops.into_iter().enumerate() {
        m.add(q, a, c, Some(s), q);
        m.add(q, None, Command::Keep, None, &format!("q{}", i + 1));
    }
    m.add("q6", None, Command::Pop, Some("B"), "q6");
    m.add("q6", None, Command::Pop, Some("A"), "q6");
    m.set_final("q6");
    m
}

fn fresh_state(states: &mut SymbolTable, from: usize, to: usize) -> usize {
    let base = format!("{}~{}", states.name(from), states.name(to));
    let name = states.fresh(&base);
    states.intern(&name)
}

/// Replaces every KEEP edge by a PUSH and a POP of a fresh arity-1 symbol
/// through a fresh middle state.
pub fn desugar_keep_stsa(m: &Stsa) -> Stsa {
    if m.transitions.iter().all(|t| t.command != Command::Keep) {
        return m.clone();
    }
    let mut out = m.clone();
    out.transitions.clear();
    let z = {
        let name = m.symbols.fresh("Z");
        out.add_symbol(&name, 1)
    };
    out.rank = out.rank.max(1);
    for t in &m.transitions {
        if t.command != Command::Keep {
            out.transitions.push(t.clone());
            continue;
        }
        let mid = fresh_state(&mut out.states, t.from, t.to);
        out.transitions.push(StsaTransition {
            from: t.from,
            input: t.input,
            command: Command::Push,
            symbol: Some(z),
            to: mid,
        });
        out.transitions.push(StsaTransition {
            from: mid,
            input: None,
            command: Command::Pop,
            symbol: Some(z),
            to: t.to,
        });
    }
    out
}

/// The same replacement for a generalized machine, pushing `Z` on both
/// stacks. Observation windows stay on the first half.
pub fn desugar_keep_gstsa(m: &Gstsa) -> Gstsa {
    if m.transitions.iter().all(|t| t.command != Command::Keep) {
        return m.clone();
    }
    let mut out = m.clone();
    out.transitions.clear();
    let z = out.symbols.intern(&m.symbols.fresh("Z"));
    out.rank = out.rank.max(1);
    for t in &m.transitions {
        if t.command != Command::Keep {
            out.transitions.push(t.clone());
            continue;
        }
        let mid = fresh_state(&mut out.states, t.from, t.to);
        out.transitions.push(GstsaTransition {
            command: Command::Push,
            symbols: Some((z, z)),
            to: mid,
            ..t.clone()
        });
        out.transitions.push(GstsaTransition {
            from: mid,
            input: None,
            command: Command::Pop,
            symbols: Some((z, z)),
            observe: [Vec::new(), Vec::new()],
            to: t.to,
        });
    }
    out
}

/// The generalized machine running in lockstep with `m`.
///
/// A symbol `A` of arity `r > 1` is split into `A@1 … A@r`, where `A@t` is
/// the copy that sits on the first stack with counter `2t − 1` (and on the
/// second with `2t` after a MOVE). This keeps the per-symbol counter bounds
/// under the machine-wide bound. Arity-1 symbols keep their name. KEEP edges
/// are carried over unchanged.
pub fn stsa_to_gstsa(m: &Stsa) -> Gstsa {
    let mut out = Gstsa::new(m.rank);
    out.states = m.states.clone();
    out.alphabet = m.alphabet.clone();
    out.initial = m.initial;
    out.finals = m.finals.clone();
    let levels: Vec<Vec<usize>> = (0..m.symbols.len())
        .map(|s| {
            let name = m.symbols.name(s);
            let ar = m.arity[s];
            if ar == 1 {
                vec![out.symbols.intern(name)]
            } else {
                (1..=ar).map(|t| out.symbols.intern(&format!("{name}@{t}"))).collect()
            }
        })
        .collect();
    for t in &m.transitions {
        let base = GstsaTransition {
            from: t.from,
            input: t.input,
            command: t.command,
            symbols: None,
            observe: [Vec::new(), Vec::new()],
            to: t.to,
        };
        let Some(s) = t.symbol else {
            out.transitions.push(base);
            continue;
        };
        let lv = &levels[s];
        let ar = lv.len();
        match t.command {
            Command::Push => out.transitions.push(GstsaTransition {
                symbols: Some((lv[0], lv[0])),
                ..base
            }),
            Command::Pop => out.transitions.push(GstsaTransition {
                symbols: Some((lv[ar - 1], lv[0])),
                ..base
            }),
            Command::Move => {
                for &s in &lv[..ar - 1] {
                    out.transitions.push(GstsaTransition {
                        symbols: Some((s, s)),
                        ..base.clone()
                    });
                }
            }
            Command::Return => {
                for pair in lv.windows(2) {
                    out.transitions.push(GstsaTransition {
                        symbols: Some((pair[0], pair[1])),
                        ..base.clone()
                    });
                }
            }
            Command::Keep => unreachable!("KEEP has no symbol"),
        }
    }
    out
}
