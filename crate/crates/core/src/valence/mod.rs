//! Valence automata over polycyclic monoids and their direct products, and
//! pushdown automata that may look at the top of their stack.
//!
//! A valence automaton carries a register holding one polycyclic element per
//! component. Every edge multiplies the register by a fixed element; a word
//! is accepted when some path reading it ends in a final state with every
//! component back at the identity.

mod pda;

use std::fmt::Write as _;

use thiserror::Error;

use crate::monoids::{pc_reduce_word, Generator, Polycyclic};
use crate::names::{content_lines, SymbolTable};
use crate::search::{search_with, Outcome, RunBudget, SearchSpace};

pub use pda::{
    eliminate_lookup_pda, eliminate_lookup_pda_detailed, pda_to_valence, run_lookup_pda, run_lookup_pda_with,
    LookupElimination, LookupPda, PdaConfig, PdaOp, PdaTransition,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValenceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no initial state")]
    MissingInitial,
    #[error("edge element has {found} components, the automaton has {expected}")]
    ComponentMismatch { expected: usize, found: usize },
    #[error("lookup depth {0} where a blind pushdown automaton is required")]
    NonzeroDepth(usize),
    #[error("transition {index}: POP {popped} must pop the top observed symbol {observed}")]
    BadWindow {
        index: usize,
        popped: String,
        observed: String,
    },
}

/// One register component per factor of the product monoid.
pub type Register = Vec<Polycyclic<u32>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValenceEdge {
    pub from: usize,
    /// `None` for an edge that reads nothing.
    pub input: Option<usize>,
    pub element: Register,
    pub to: usize,
}

/// An automaton over `P(A_1) × … × P(A_c)`, `c = components`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValenceAutomaton {
    pub states: SymbolTable,
    pub alphabet: SymbolTable,
    /// Generators of the register monoids, shared by all components.
    pub registers: SymbolTable,
    pub components: usize,
    pub edges: Vec<ValenceEdge>,
    pub initial: usize,
    pub finals: Vec<usize>,
}

impl ValenceAutomaton {
    /// An automaton with a single initial state `q0` and no edges.
    pub fn new(components: usize) -> Self {
        let mut states = SymbolTable::new();
        states.intern("q0");
        ValenceAutomaton {
            states,
            alphabet: SymbolTable::new(),
            registers: SymbolTable::new(),
            components,
            edges: Vec::new(),
            initial: 0,
            finals: Vec::new(),
        }
    }

    pub fn identity_element(&self) -> Register {
        vec![Polycyclic::identity(); self.components]
    }

    /// Adds an edge given by names; `input` is `None` for a silent edge and
    /// each component of `element` is a generator list `(push?, symbol)`.
    pub fn add_edge(&mut self, from: &str, input: Option<&str>, element: &[Vec<(bool, &str)>], to: &str) {
        assert_eq!(element.len(), self.components, "component count");
        let from = self.states.intern(from);
        let to = self.states.intern(to);
        let input = input.map(|a| self.alphabet.intern(a));
        let element = element
            .iter()
            .map(|gens| {
                let word: Vec<Generator<u32>> = gens
                    .iter()
                    .map(|&(push, s)| {
                        let s = self.registers.intern(s) as u32;
                        if push {
                            Generator::Push(s)
                        } else {
                            Generator::Pop(s)
                        }
                    })
                    .collect();
                pc_reduce_word(&word)
            })
            .collect();
        self.edges.push(ValenceEdge {
            from,
            input,
            element,
            to,
        });
    }

    pub fn set_final(&mut self, state: &str) {
        let s = self.states.intern(state);
        if !self.finals.contains(&s) {
            self.finals.push(s);
        }
    }

    /// Renders a register element with this automaton's generator names.
    pub fn render_element(&self, e: &[Polycyclic<u32>]) -> String {
        e.iter()
            .map(|c| match c {
                Polycyclic::Zero => "0".to_string(),
                c if c.is_identity() => "1".to_string(),
                c => c
                    .pops()
                    .iter()
                    .map(|&s| format!("pop:{}", self.registers.name(s as usize)))
                    .chain(c.pushes().iter().map(|&s| format!("push:{}", self.registers.name(s as usize))))
                    .collect::<Vec<_>>()
                    .join(","),
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Parses the valence automaton format:
    ///
    /// ```text
    /// alphabet a b c
    /// state q0 init
    /// state q2 final
    /// edge q0 a push:x|1 -> q0
    /// edge q0 _ pop:x,push:y|1 -> q1
    /// ```
    pub fn parse(text: &str) -> Result<Self, ValenceError> {
        let mut states = SymbolTable::new();
        let mut alphabet = SymbolTable::new();
        let mut registers = SymbolTable::new();
        let mut components = None;
        let mut edges = Vec::new();
        let mut initial = None;
        let mut finals = Vec::new();
        for (line, content) in content_lines(text) {
            let err = |message: String| ValenceError::Parse { line, message };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens[0] {
                "alphabet" => {
                    for t in &tokens[1..] {
                        alphabet.intern(t);
                    }
                }
                "state" => {
                    let name = tokens.get(1).ok_or_else(|| err("expected a state name".into()))?;
                    let s = states.intern(name);
                    for flag in &tokens[2..] {
                        match *flag {
                            "init" | "initial" => {
                                if initial.replace(s).is_some_and(|old| old != s) {
                                    return Err(err("second initial state".into()));
                                }
                            }
                            "final" => {
                                if !finals.contains(&s) {
                                    finals.push(s);
                                }
                            }
                            other => return Err(err(format!("unknown state flag `{other}`"))),
                        }
                    }
                }
                "edge" => {
                    let arrow = tokens
                        .iter()
                        .position(|t| *t == "->")
                        .ok_or_else(|| err("expected `edge <from> <input> <element> -> <to>`".into()))?;
                    if arrow < 4 || tokens.len() != arrow + 2 {
                        return Err(err("expected `edge <from> <input> <element> -> <to>`".into()));
                    }
                    let from = states.intern(tokens[1]);
                    let input = match tokens[2] {
                        "_" => None,
                        a => Some(alphabet.intern(a)),
                    };
                    let element_text = tokens[3..arrow].concat();
                    let element = parse_element(&element_text, &mut registers).map_err(err)?;
                    match components {
                        None => components = Some(element.len()),
                        Some(c) if c != element.len() => {
                            return Err(ValenceError::ComponentMismatch {
                                expected: c,
                                found: element.len(),
                            })
                        }
                        Some(_) => {}
                    }
                    let to = states.intern(tokens[arrow + 1]);
                    edges.push(ValenceEdge {
                        from,
                        input,
                        element,
                        to,
                    });
                }
                other => return Err(err(format!("unknown declaration `{other}`"))),
            }
        }
        Ok(ValenceAutomaton {
            states,
            alphabet,
            registers,
            components: components.unwrap_or(1),
            edges,
            initial: initial.ok_or(ValenceError::MissingInitial)?,
            finals,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.alphabet.is_empty() {
            let _ = writeln!(out, "alphabet {}", self.alphabet.names().join(" "));
        }
        for (i, name) in self.states.names().iter().enumerate() {
            let mut line = format!("state {name}");
            if i == self.initial {
                line.push_str(" init");
            }
            if self.finals.contains(&i) {
                line.push_str(" final");
            }
            let _ = writeln!(out, "{line}");
        }
        for e in &self.edges {
            let input = e.input.map_or("_", |a| self.alphabet.name(a));
            let _ = writeln!(
                out,
                "edge {} {} {} -> {}",
                self.states.name(e.from),
                input,
                self.render_element(&e.element),
                self.states.name(e.to)
            );
        }
        out
    }
}

fn parse_element(text: &str, registers: &mut SymbolTable) -> Result<Register, String> {
    text.split('|')
        .map(|component| match component {
            "1" => Ok(Polycyclic::identity()),
            "0" => Ok(Polycyclic::Zero),
            gens => {
                let word = gens
                    .split(',')
                    .map(|g| match g.split_once(':') {
                        Some(("push", s)) if !s.is_empty() => Ok(Generator::Push(registers.intern(s) as u32)),
                        Some(("pop", s)) if !s.is_empty() => Ok(Generator::Pop(registers.intern(s) as u32)),
                        _ => Err(format!("bad generator `{g}`, expected push:<sym> or pop:<sym>")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(pc_reduce_word(&word))
            }
        })
        .collect()
}

/// The three-state automaton over `S_1 × S_2` for `{ a^n b^n c^n | n ≥ 1 }`.
pub fn build_example1() -> ValenceAutomaton {
    let mut m = ValenceAutomaton::new(2);
    let (alpha, beta) = ("alpha", "beta");
    m.add_edge("q0", Some("a"), &[vec![(true, alpha)], vec![]], "q0");
    m.add_edge("q0", Some("b"), &[vec![(false, alpha)], vec![(true, beta)]], "q1");
    m.add_edge("q1", Some("b"), &[vec![(false, alpha)], vec![(true, beta)]], "q1");
    m.add_edge("q1", Some("c"), &[vec![], vec![(false, beta)]], "q2");
    m.add_edge("q2", Some("c"), &[vec![], vec![(false, beta)]], "q2");
    m.set_final("q2");
    m
}

/// A configuration of a valence automaton run.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValenceConfig {
    pub state: usize,
    pub position: usize,
    pub register: Register,
}

struct ValenceSpace<'a> {
    m: &'a ValenceAutomaton,
    word: Vec<usize>,
    out_edges: Vec<Vec<usize>>,
}

// A component that is zero, or that owes a pop to an empty stack, can never
// return to the identity.
fn dead(r: &[Polycyclic<u32>]) -> bool {
    r.iter().any(|c| c.is_zero() || !c.pops().is_empty())
}

impl SearchSpace for ValenceSpace<'_> {
    type Config = ValenceConfig;

    fn initial(&self) -> Vec<ValenceConfig> {
        vec![ValenceConfig {
            state: self.m.initial,
            position: 0,
            register: self.m.identity_element(),
        }]
    }

    fn is_accepting(&self, c: &ValenceConfig) -> bool {
        c.position == self.word.len()
            && self.m.finals.contains(&c.state)
            && c.register.iter().all(Polycyclic::is_identity)
    }

    fn successors(&self, c: &ValenceConfig, out: &mut Vec<(ValenceConfig, bool)>) {
        for &ei in &self.out_edges[c.state] {
            let e = &self.m.edges[ei];
            let position = match e.input {
                None => c.position,
                Some(a) if self.word.get(c.position) == Some(&a) => c.position + 1,
                Some(_) => continue,
            };
            let register: Register = c
                .register
                .iter()
                .zip(&e.element)
                .map(|(r, x)| r.multiply(x))
                .collect();
            if dead(&register) {
                continue;
            }
            out.push((
                ValenceConfig {
                    state: e.to,
                    position,
                    register,
                },
                e.input.is_none(),
            ));
        }
    }

    fn stack_height(&self, c: &ValenceConfig) -> usize {
        c.register.iter().map(Polycyclic::size).sum()
    }
}

/// Runs `m` on `w`, reporting every explored configuration to `visit`.
pub fn run_valence_with<S: AsRef<str>>(
    m: &ValenceAutomaton,
    w: &[S],
    budget: &RunBudget,
    visit: impl FnMut(&ValenceConfig),
) -> Outcome {
    let Some(word) = m.alphabet.encode(w) else {
        return Outcome::Reject;
    };
    let mut out_edges = vec![Vec::new(); m.states.len()];
    for (i, e) in m.edges.iter().enumerate() {
        out_edges[e.from].push(i);
    }
    let space = ValenceSpace { m, word, out_edges };
    search_with(&space, budget, visit)
}

pub fn run_valence<S: AsRef<str>>(m: &ValenceAutomaton, w: &[S], budget: &RunBudget) -> Outcome {
    run_valence_with(m, w, budget, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::BudgetDimension;
    use crate::word::tokenize;

    fn run(m: &ValenceAutomaton, w: &str) -> Outcome {
        let w = tokenize(w);
        run_valence(m, &w, &RunBudget::for_word(w.len(), m.components))
    }

    #[test]
    fn example1_language() {
        let m = build_example1();
        assert_eq!(run(&m, "abc"), Outcome::Accept);
        assert_eq!(run(&m, "aabbcc"), Outcome::Accept);
        assert_eq!(run(&m, ""), Outcome::Reject);
        assert_eq!(run(&m, "aabc"), Outcome::Reject);
        assert_eq!(run(&m, "abcc"), Outcome::Reject);
        assert_eq!(run(&m, "abd"), Outcome::Reject);
    }

    #[test]
    fn silent_push_loop_exhausts_budget() {
        let m = ValenceAutomaton::parse("state q0 init final\nedge q0 _ push:a -> q0\n").unwrap();
        let budget = RunBudget {
            max_configurations: 50,
            max_stack_height: 10,
            max_silent_steps: 100,
        };
        assert_eq!(
            run_valence(&m, &tokenize("a"), &budget),
            Outcome::Reject,
            "the letter `a` is not in the alphabet"
        );
        let m = ValenceAutomaton::parse("alphabet b\nstate q0 init\nedge q0 _ push:a -> q0\n").unwrap();
        assert_eq!(
            run_valence(&m, &tokenize("b"), &budget),
            Outcome::Unknown(BudgetDimension::StackHeight)
        );
    }

    #[test]
    fn file_round_trip() {
        let m = build_example1();
        let text = m.to_text();
        assert!(text.contains("edge q0 b pop:alpha|push:beta -> q1"), "{text}");
        assert_eq!(ValenceAutomaton::parse(&text).unwrap(), m);
        assert!(matches!(
            ValenceAutomaton::parse("state q init\nedge q a 1 -> q\nedge q a 1|1 -> q\n"),
            Err(ValenceError::ComponentMismatch { .. })
        ));
        assert!(ValenceAutomaton::parse("state q\n").is_err());
        assert!(ValenceAutomaton::parse("state q init\nedge q a pull:x -> q\n").is_err());
    }
}
