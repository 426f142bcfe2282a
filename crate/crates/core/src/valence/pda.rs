//! Pushdown automata that may observe a bounded suffix of their stack, and
//! the construction that makes them blind by caching the observed window in
//! the state.

use std::fmt::Write as _;

use super::{ValenceAutomaton, ValenceEdge, ValenceError};
use crate::monoids::Polycyclic;
use crate::names::{content_lines, SymbolTable};
use crate::search::{search_with, Outcome, RunBudget, SearchSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PdaOp {
    Push(usize),
    Pop(usize),
    /// Leaves the stack alone; produced by the construction at depth 0.
    Nop,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdaTransition {
    pub from: usize,
    pub input: Option<usize>,
    /// Observed top of the stack, deepest symbol first.
    pub window: Vec<usize>,
    pub op: PdaOp,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LookupPda {
    pub states: SymbolTable,
    pub alphabet: SymbolTable,
    pub stack: SymbolTable,
    pub transitions: Vec<PdaTransition>,
    pub initial: usize,
    pub finals: Vec<usize>,
}

impl LookupPda {
    pub fn new() -> Self {
        let mut states = SymbolTable::new();
        states.intern("q0");
        LookupPda {
            states,
            alphabet: SymbolTable::new(),
            stack: SymbolTable::new(),
            transitions: Vec::new(),
            initial: 0,
            finals: Vec::new(),
        }
    }

    /// Longest observed window.
    pub fn depth(&self) -> usize {
        self.transitions.iter().map(|t| t.window.len()).max().unwrap_or(0)
    }

    /// Adds a transition by names. `op` is `("PUSH", B)`, `("POP", A)` or
    /// `("NOP", "")`.
    pub fn add(&mut self, from: &str, input: Option<&str>, window: &[&str], op: (&str, &str), to: &str) {
        let from = self.states.intern(from);
        let to = self.states.intern(to);
        let input = input.map(|a| self.alphabet.intern(a));
        let window = window.iter().map(|s| self.stack.intern(s)).collect();
        let op = match op.0 {
            "PUSH" => PdaOp::Push(self.stack.intern(op.1)),
            "POP" => PdaOp::Pop(self.stack.intern(op.1)),
            _ => PdaOp::Nop,
        };
        self.transitions.push(PdaTransition {
            from,
            input,
            window,
            op,
            to,
        });
    }

    pub fn set_final(&mut self, state: &str) {
        let s = self.states.intern(state);
        if !self.finals.contains(&s) {
            self.finals.push(s);
        }
    }

    /// A POP must remove the top observed symbol when it observes anything.
    pub fn validate(&self) -> Result<(), ValenceError> {
        for (index, t) in self.transitions.iter().enumerate() {
            if let (PdaOp::Pop(x), Some(&top)) = (t.op, t.window.last()) {
                if x != top {
                    return Err(ValenceError::BadWindow {
                        index,
                        popped: self.stack.name(x).to_string(),
                        observed: self.stack.name(top).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Parses `state` lines, an optional `alphabet` line and transitions
    /// `ptrans q0 a [A B] PUSH C -> q1` (`_` for no input, `[]` or no
    /// brackets for an empty window, `NOP` for no stack change).
    pub fn parse(text: &str) -> Result<Self, ValenceError> {
        let mut p = LookupPda::new();
        p.states = SymbolTable::new();
        let mut initial = None;
        for (line, content) in content_lines(text) {
            let err = |message: &str| ValenceError::Parse {
                line,
                message: message.to_string(),
            };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens[0] {
                "alphabet" => {
                    for t in &tokens[1..] {
                        p.alphabet.intern(t);
                    }
                }
                "stack" => {
                    for t in &tokens[1..] {
                        p.stack.intern(t);
                    }
                }
                "state" => {
                    let name = tokens.get(1).ok_or_else(|| err("expected a state name"))?;
                    let s = p.states.intern(name);
                    for flag in &tokens[2..] {
                        match *flag {
                            "init" | "initial" => {
                                if initial.replace(s).is_some_and(|old| old != s) {
                                    return Err(err("second initial state"));
                                }
                            }
                            "final" => {
                                if !p.finals.contains(&s) {
                                    p.finals.push(s);
                                }
                            }
                            _ => return Err(err("unknown state flag")),
                        }
                    }
                }
                "ptrans" => {
                    let shape = "expected `ptrans <from> <input> [window] PUSH|POP <sym> -> <to>`";
                    let rest = content["ptrans".len()..].trim();
                    let (lhs, to) = rest.split_once("->").ok_or_else(|| err(shape))?;
                    let to = to.trim();
                    if to.is_empty() || to.contains(char::is_whitespace) {
                        return Err(err(shape));
                    }
                    let (head, window, tail): (Vec<&str>, &str, Vec<&str>) = match (lhs.find('['), lhs.find(']')) {
                        (Some(a), Some(b)) if a < b => (
                            lhs[..a].split_whitespace().collect(),
                            &lhs[a + 1..b],
                            lhs[b + 1..].split_whitespace().collect(),
                        ),
                        (None, None) => {
                            let parts: Vec<&str> = lhs.split_whitespace().collect();
                            if parts.len() < 3 {
                                return Err(err(shape));
                            }
                            (parts[..2].to_vec(), "", parts[2..].to_vec())
                        }
                        _ => return Err(err(shape)),
                    };
                    if head.len() != 2 {
                        return Err(err(shape));
                    }
                    let from = p.states.intern(head[0]);
                    let input = match head[1] {
                        "_" => None,
                        a => Some(p.alphabet.intern(a)),
                    };
                    let window = window.split_whitespace().map(|s| p.stack.intern(s)).collect();
                    let op = match tail.as_slice() {
                        ["PUSH", b] => PdaOp::Push(p.stack.intern(b)),
                        ["POP", a] => PdaOp::Pop(p.stack.intern(a)),
                        ["NOP"] => PdaOp::Nop,
                        _ => return Err(err(shape)),
                    };
                    let to = p.states.intern(to);
                    p.transitions.push(PdaTransition {
                        from,
                        input,
                        window,
                        op,
                        to,
                    });
                }
                _ => return Err(err("unknown declaration")),
            }
        }
        p.initial = initial.ok_or(ValenceError::MissingInitial)?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.alphabet.is_empty() {
            let _ = writeln!(out, "alphabet {}", self.alphabet.names().join(" "));
        }
        if !self.stack.is_empty() {
            let _ = writeln!(out, "stack {}", self.stack.names().join(" "));
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
        for t in &self.transitions {
            let window: Vec<&str> = t.window.iter().map(|&s| self.stack.name(s)).collect();
            let op = match t.op {
                PdaOp::Push(b) => format!("PUSH {}", self.stack.name(b)),
                PdaOp::Pop(a) => format!("POP {}", self.stack.name(a)),
                PdaOp::Nop => "NOP".to_string(),
            };
            let _ = writeln!(
                out,
                "ptrans {} {} [{}] {} -> {}",
                self.states.name(t.from),
                t.input.map_or("_", |a| self.alphabet.name(a)),
                window.join(" "),
                op,
                self.states.name(t.to)
            );
        }
        out
    }
}

impl Default for LookupPda {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PdaConfig {
    pub state: usize,
    pub position: usize,
    /// Bottom first.
    pub stack: Vec<usize>,
}

struct PdaSpace<'a> {
    p: &'a LookupPda,
    word: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl SearchSpace for PdaSpace<'_> {
    type Config = PdaConfig;

    fn initial(&self) -> Vec<PdaConfig> {
        vec![PdaConfig {
            state: self.p.initial,
            position: 0,
            stack: Vec::new(),
        }]
    }

    fn is_accepting(&self, c: &PdaConfig) -> bool {
        c.position == self.word.len() && c.stack.is_empty() && self.p.finals.contains(&c.state)
    }

    fn successors(&self, c: &PdaConfig, out: &mut Vec<(PdaConfig, bool)>) {
        for &ti in &self.out[c.state] {
            let t = &self.p.transitions[ti];
            let position = match t.input {
                None => c.position,
                Some(a) if self.word.get(c.position) == Some(&a) => c.position + 1,
                Some(_) => continue,
            };
            if !c.stack.ends_with(&t.window) {
                continue;
            }
            let mut stack = c.stack.clone();
            match t.op {
                PdaOp::Push(b) => stack.push(b),
                PdaOp::Pop(a) => {
                    if stack.pop() != Some(a) {
                        continue;
                    }
                }
                PdaOp::Nop => {}
            }
            out.push((
                PdaConfig {
                    state: t.to,
                    position,
                    stack,
                },
                t.input.is_none(),
            ));
        }
    }

    fn stack_height(&self, c: &PdaConfig) -> usize {
        c.stack.len()
    }
}

pub fn run_lookup_pda_with<S: AsRef<str>>(
    p: &LookupPda,
    w: &[S],
    budget: &RunBudget,
    visit: impl FnMut(&PdaConfig),
) -> Outcome {
    let Some(word) = p.alphabet.encode(w) else {
        return Outcome::Reject;
    };
    let mut out = vec![Vec::new(); p.states.len()];
    for (i, t) in p.transitions.iter().enumerate() {
        out[t.from].push(i);
    }
    search_with(&PdaSpace { p, word, out }, budget, visit)
}

pub fn run_lookup_pda<S: AsRef<str>>(p: &LookupPda, w: &[S], budget: &RunBudget) -> Outcome {
    run_lookup_pda_with(p, w, budget, |_| {})
}

/// Result of [`eliminate_lookup_pda_detailed`].
#[derive(Clone, Debug)]
pub struct LookupElimination {
    pub pda: LookupPda,
    /// Depth of the source machine.
    pub depth: usize,
    /// Output stack symbols of the bottom markers, bottom first.
    pub markers: Vec<usize>,
    /// For each output state, the source state and cached window it stands
    /// for; `None` for the start, final and chaining states.
    pub product_states: Vec<Option<(usize, Vec<usize>)>>,
}

fn windows(symbols: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..symbols).map(move |s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

/// The blind machine recognizing the same language.
pub fn eliminate_lookup_pda(p: &LookupPda) -> LookupPda {
    eliminate_lookup_pda_detailed(p).pda
}

/// Caches the top `d` stack symbols (`d` = depth) in the state. Every output
/// stack cell holds a source symbol paired with the window that was cached
/// when it was pushed, so a pop can restore the window below it. `d` bottom
/// markers are pushed first and removed one by one at the end.
pub fn eliminate_lookup_pda_detailed(p: &LookupPda) -> LookupElimination {
    let d = p.depth();
    // extended stack alphabet: source symbols then markers
    let mut ext: Vec<String> = p.stack.names().to_vec();
    let mut marker_ext = Vec::new();
    for i in 1..=d {
        let name = p.stack.fresh(&format!("Z{i}"));
        let name = {
            let mut n = name;
            while ext.contains(&n) {
                n.push('\'');
            }
            n
        };
        marker_ext.push(ext.len());
        ext.push(name);
    }
    let all_windows = windows(ext.len(), d);

    let mut out = LookupPda::new();
    out.states = SymbolTable::new();
    out.alphabet = p.alphabet.clone();
    let render_window = |w: &[usize]| w.iter().map(|&s| ext[s].as_str()).collect::<Vec<_>>().join(".");
    let cell_name = |b: usize, w: &[usize]| {
        if d == 0 {
            ext[b].clone()
        } else {
            format!("{}<{}>", ext[b], render_window(w))
        }
    };

    let start_name = p.states.fresh("start");
    let final_name = p.states.fresh("accept");
    let start = out.states.intern(&start_name);
    let accept = out.states.intern(&final_name);
    let mut product_states = vec![None, None];
    // product state indices: q * |windows| + window index
    let window_index = |w: &[usize]| w.iter().fold(0, |acc, &s| acc * ext.len() + s);
    let mut product = Vec::with_capacity(p.states.len() * all_windows.len());
    for q in 0..p.states.len() {
        for w in &all_windows {
            let name = format!("{}<{}>", p.states.name(q), render_window(w));
            let name = if out.states.get(&name).is_some() {
                out.states.fresh(&name)
            } else {
                name
            };
            product.push(out.states.intern(&name));
            product_states.push(Some((q, w.clone())));
        }
    }
    let pstate = |q: usize, w: &[usize]| product[q * all_windows.len() + window_index(w)];

    let push_cell = |out: &mut LookupPda, from: usize, input: Option<usize>, cell: String, to: usize| {
        let b = out.stack.intern(&cell);
        out.transitions.push(PdaTransition {
            from,
            input,
            window: Vec::new(),
            op: PdaOp::Push(b),
            to,
        });
    };

    // prelude
    let marker_window: Vec<usize> = marker_ext.clone();
    let mut markers = Vec::new();
    let entry = pstate(p.initial, &marker_window);
    if d == 0 {
        out.transitions.push(PdaTransition {
            from: start,
            input: None,
            window: Vec::new(),
            op: PdaOp::Nop,
            to: entry,
        });
    } else {
        let mut cur = start;
        for (i, &z) in marker_ext.iter().enumerate() {
            let next = if i + 1 == d {
                entry
            } else {
                let n = out.states.fresh(&format!("{start_name}.{}", i + 1));
                product_states.push(None);
                out.states.intern(&n)
            };
            let cell = cell_name(z, &marker_window);
            push_cell(&mut out, cur, None, cell.clone(), next);
            markers.push(out.stack.get(&cell).expect("just interned"));
            cur = next;
        }
    }

    // translated transitions
    for t in &p.transitions {
        let l = t.window.len();
        for w in &all_windows {
            if w[d - l..] != t.window[..] {
                continue;
            }
            let from = pstate(t.from, w);
            match t.op {
                PdaOp::Push(b) => {
                    let mut nw = w[usize::from(d > 0)..].to_vec();
                    if d > 0 {
                        nw.push(b);
                    }
                    let cell = cell_name(b, w);
                    push_cell(&mut out, from, t.input, cell, pstate(t.to, &nw));
                }
                PdaOp::Pop(x) => {
                    if d == 0 {
                        let c = out.stack.intern(&cell_name(x, w));
                        out.transitions.push(PdaTransition {
                            from,
                            input: t.input,
                            window: Vec::new(),
                            op: PdaOp::Pop(c),
                            to: pstate(t.to, w),
                        });
                        continue;
                    }
                    if w[d - 1] != x {
                        continue;
                    }
                    for a0 in 0..ext.len() {
                        let mut below = vec![a0];
                        below.extend_from_slice(&w[..d - 1]);
                        let c = out.stack.intern(&cell_name(x, &below));
                        out.transitions.push(PdaTransition {
                            from,
                            input: t.input,
                            window: Vec::new(),
                            op: PdaOp::Pop(c),
                            to: pstate(t.to, &below),
                        });
                    }
                }
                PdaOp::Nop => out.transitions.push(PdaTransition {
                    from,
                    input: t.input,
                    window: Vec::new(),
                    op: PdaOp::Nop,
                    to: pstate(t.to, w),
                }),
            }
        }
    }

    // finale: remove the markers one by one through a shared chain
    let mut chain = Vec::new();
    for i in (1..d).rev() {
        let n = out.states.fresh(&format!("{final_name}.{i}"));
        product_states.push(None);
        chain.push(out.states.intern(&n));
    }
    chain.push(accept);
    for &f in &p.finals {
        let from = pstate(f, &marker_window);
        let op = if d == 0 { PdaOp::Nop } else { PdaOp::Pop(markers[d - 1]) };
        out.transitions.push(PdaTransition {
            from,
            input: None,
            window: Vec::new(),
            op,
            to: chain[0],
        });
    }
    for i in 1..d {
        out.transitions.push(PdaTransition {
            from: chain[i - 1],
            input: None,
            window: Vec::new(),
            op: PdaOp::Pop(markers[d - 1 - i]),
            to: chain[i],
        });
    }
    out.initial = start;
    out.finals = vec![accept];
    LookupElimination {
        pda: out,
        depth: d,
        markers,
        product_states,
    }
}

/// The blind PDA as an automaton over one polycyclic monoid.
pub fn pda_to_valence(p: &LookupPda) -> Result<ValenceAutomaton, ValenceError> {
    let d = p.depth();
    if d != 0 {
        return Err(ValenceError::NonzeroDepth(d));
    }
    let edges = p
        .transitions
        .iter()
        .map(|t| ValenceEdge {
            from: t.from,
            input: t.input,
            element: vec![match t.op {
                PdaOp::Push(b) => Polycyclic::push(b as u32),
                PdaOp::Pop(a) => Polycyclic::pop(a as u32),
                PdaOp::Nop => Polycyclic::identity(),
            }],
            to: t.to,
        })
        .collect();
    Ok(ValenceAutomaton {
        states: p.states.clone(),
        alphabet: p.alphabet.clone(),
        registers: p.stack.clone(),
        components: 1,
        edges,
        initial: p.initial,
        finals: p.finals.clone(),
    })
}
