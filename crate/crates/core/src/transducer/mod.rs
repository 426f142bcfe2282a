//! Finite transducers, their images of enumerable languages, and the
//! valence automaton for the image of a generalized Dyck language.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::dcfg::{build_dyck_grammar, enumerate_language, DcfgError, Grammar};
use crate::monoids::{phi1, phi2, MonoidError, Polycyclic, RankedAlphabet};
use crate::names::{content_lines, SymbolTable};
use crate::valence::{ValenceAutomaton, ValenceEdge};
use crate::word::{render, tokenize};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransducerError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no initial state")]
    MissingInitial,
    #[error("a cycle reading nothing writes output through state {0}")]
    UnboundedOutput(String),
    #[error("a cycle reading input writes nothing through state {0}; the input length is unbounded")]
    UnboundedInput(String),
    #[error(transparent)]
    Source(#[from] DcfgError),
    #[error(transparent)]
    Alphabet(#[from] MonoidError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransducerEdge {
    pub from: usize,
    pub input: Vec<usize>,
    pub output: Vec<usize>,
    pub to: usize,
}

/// A finite transducer with word-pair edge labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTransducer {
    pub states: SymbolTable,
    pub input: SymbolTable,
    pub output: SymbolTable,
    pub edges: Vec<TransducerEdge>,
    pub initial: usize,
    pub finals: Vec<usize>,
}

// An edge reading and writing at most one letter each.
#[derive(Clone, Copy, Debug)]
struct Step {
    from: usize,
    input: Option<usize>,
    output: Option<usize>,
    to: usize,
}

struct Normalized {
    states: usize,
    // original state of each normalized state, for diagnostics
    origin: Vec<usize>,
    steps: Vec<Step>,
    out: Vec<Vec<usize>>,
}

impl FiniteTransducer {
    /// A transducer with the single state `p`, initial and final.
    pub fn new() -> Self {
        let mut states = SymbolTable::new();
        states.intern("p");
        FiniteTransducer {
            states,
            input: SymbolTable::new(),
            output: SymbolTable::new(),
            edges: Vec::new(),
            initial: 0,
            finals: vec![0],
        }
    }

    /// The identity on `letters`.
    pub fn identity<S: AsRef<str>>(letters: &[S]) -> Self {
        let mut t = FiniteTransducer::new();
        for a in letters {
            t.add("p", &[a.as_ref()], &[a.as_ref()], "p");
        }
        t
    }

    /// A one-state letter-to-letter relabeling.
    pub fn relabeling(pairs: &[(&str, &str)]) -> Self {
        let mut t = FiniteTransducer::new();
        for (a, b) in pairs {
            t.add("p", &[a], &[b], "p");
        }
        t
    }

    pub fn add(&mut self, from: &str, input: &[&str], output: &[&str], to: &str) {
        let from = self.states.intern(from);
        let to = self.states.intern(to);
        let input = input.iter().map(|a| self.input.intern(a)).collect();
        let output = output.iter().map(|a| self.output.intern(a)).collect();
        self.edges.push(TransducerEdge { from, input, output, to });
    }

    /// Parses `tstate p init`, `tstate p final` and `tedge p "u" / "v" -> q`
    /// lines; quoted words are tokenized like command-line words.
    pub fn parse(text: &str) -> Result<Self, TransducerError> {
        let mut t = FiniteTransducer::new();
        t.states = SymbolTable::new();
        t.finals.clear();
        let mut initial = None;
        for (line, content) in content_lines(text) {
            let err = |m: &str| TransducerError::Parse {
                line,
                message: m.to_string(),
            };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens.as_slice() {
                ["tstate", name, flags @ ..] => {
                    let s = t.states.intern(name);
                    for flag in flags {
                        match *flag {
                            "init" | "initial" => {
                                if initial.replace(s).is_some_and(|old| old != s) {
                                    return Err(err("second initial state"));
                                }
                            }
                            "final" => {
                                if !t.finals.contains(&s) {
                                    t.finals.push(s);
                                }
                            }
                            _ => return Err(err("unknown state flag")),
                        }
                    }
                }
                ["tedge", ..] => {
                    let shape = "expected `tedge <from> \"u\" / \"v\" -> <to>`";
                    let rest = content["tedge".len()..].trim();
                    let (from, rest) = rest.split_once(char::is_whitespace).ok_or_else(|| err(shape))?;
                    let (u, rest) = quoted(rest.trim_start()).ok_or_else(|| err(shape))?;
                    let rest = rest.trim_start().strip_prefix('/').ok_or_else(|| err(shape))?;
                    let (v, rest) = quoted(rest.trim_start()).ok_or_else(|| err(shape))?;
                    let to = rest.trim_start().strip_prefix("->").ok_or_else(|| err(shape))?.trim();
                    if to.is_empty() || to.contains(char::is_whitespace) {
                        return Err(err(shape));
                    }
                    let u = tokenize(u);
                    let v = tokenize(v);
                    let u: Vec<&str> = u.iter().map(String::as_str).collect();
                    let v: Vec<&str> = v.iter().map(String::as_str).collect();
                    t.add(from, &u, &v, to);
                }
                _ => return Err(err("unknown declaration")),
            }
        }
        t.initial = initial.ok_or(TransducerError::MissingInitial)?;
        Ok(t)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, name) in self.states.names().iter().enumerate() {
            let mut line = format!("tstate {name}");
            if i == self.initial {
                line.push_str(" init");
            }
            if self.finals.contains(&i) {
                line.push_str(" final");
            }
            let _ = writeln!(out, "{line}");
        }
        for e in &self.edges {
            let u: Vec<&str> = e.input.iter().map(|&a| self.input.name(a)).collect();
            let v: Vec<&str> = e.output.iter().map(|&a| self.output.name(a)).collect();
            let _ = writeln!(
                out,
                "tedge {} \"{}\" / \"{}\" -> {}",
                self.states.name(e.from),
                render(&u),
                render(&v),
                self.states.name(e.to)
            );
        }
        out
    }

    fn normalize(&self) -> Normalized {
        let mut n = Normalized {
            states: self.states.len(),
            origin: (0..self.states.len()).collect(),
            steps: Vec::new(),
            out: Vec::new(),
        };
        for e in &self.edges {
            let len = e.input.len().max(e.output.len()).max(1);
            let mut cur = e.from;
            for i in 0..len {
                let next = if i + 1 == len {
                    e.to
                } else {
                    n.origin.push(e.from);
                    n.states += 1;
                    n.states - 1
                };
                n.steps.push(Step {
                    from: cur,
                    input: e.input.get(i).copied(),
                    output: e.output.get(i).copied(),
                    to: next,
                });
                cur = next;
            }
        }
        n.out = vec![Vec::new(); n.states];
        for (i, s) in n.steps.iter().enumerate() {
            n.out[s.from].push(i);
        }
        n
    }

    /// Every `v` with `(u, v)` in the relation and `|v| ≤ cap`. The flag is
    /// set when some path was cut for producing more than `cap` letters.
    pub fn apply_to_word<S: AsRef<str>>(&self, u: &[S], cap: usize) -> (BTreeSet<Vec<String>>, bool) {
        let mut outputs = BTreeSet::new();
        let Some(u) = self.input.encode(u) else {
            return (outputs, false);
        };
        let n = self.normalize();
        let mut capped = false;
        let mut seen: FxHashSet<(usize, usize, Vec<usize>)> = FxHashSet::default();
        let mut queue = VecDeque::from([(self.initial, 0usize, Vec::new())]);
        while let Some((q, pos, out)) = queue.pop_front() {
            if !seen.insert((q, pos, out.clone())) {
                continue;
            }
            if pos == u.len() && self.finals.contains(&q) {
                outputs.insert(out.iter().map(|&a| self.output.name(a).to_string()).collect());
            }
            for &si in &n.out[q] {
                let s = n.steps[si];
                let pos = match s.input {
                    None => pos,
                    Some(a) if u.get(pos) == Some(&a) => pos + 1,
                    Some(_) => continue,
                };
                let mut out = out.clone();
                if let Some(b) = s.output {
                    if out.len() == cap {
                        capped = true;
                        continue;
                    }
                    out.push(b);
                }
                queue.push_back((s.to, pos, out));
            }
        }
        (outputs, capped)
    }

    // States reachable from the initial state and co-reachable to a final.
    fn useful(&self, n: &Normalized) -> Vec<bool> {
        let mut fwd = vec![false; n.states];
        let mut stack = vec![self.initial];
        while let Some(q) = stack.pop() {
            if std::mem::replace(&mut fwd[q], true) {
                continue;
            }
            stack.extend(n.out[q].iter().map(|&s| n.steps[s].to));
        }
        let mut back = vec![false; n.states];
        let mut stack: Vec<usize> = self.finals.clone();
        while let Some(q) = stack.pop() {
            if std::mem::replace(&mut back[q], true) {
                continue;
            }
            stack.extend(n.steps.iter().filter(|s| s.to == q).map(|s| s.from));
        }
        fwd.iter().zip(&back).map(|(a, b)| *a && *b).collect()
    }

    /// The longest input that a useful path writing at most `max_out`
    /// letters can read.
    pub fn input_bound(&self, max_out: usize) -> Result<usize, TransducerError> {
        let n = self.normalize();
        let useful = self.useful(&n);
        let steps: Vec<Step> = n
            .steps
            .iter()
            .copied()
            .filter(|s| useful[s.from] && useful[s.to])
            .collect();
        // cycles reading nothing must write nothing, and vice versa
        for (pick, err) in [
            (
                (|s: &Step| s.input.is_none()) as fn(&Step) -> bool,
                TransducerError::UnboundedOutput as fn(String) -> TransducerError,
            ),
            (|s: &Step| s.output.is_none(), TransducerError::UnboundedInput),
        ] {
            let sub: Vec<Step> = steps.iter().copied().filter(pick).collect();
            if let Some(q) = productive_cycle(n.states, &sub) {
                return Err(err(self.states.name(n.origin[q]).to_string()));
            }
        }
        // best[k][q]: most input read from q to a final with ≤ k output
        let mut best: Vec<Vec<Option<usize>>> = Vec::with_capacity(max_out + 1);
        for k in 0..=max_out {
            let mut row: Vec<Option<usize>> = (0..n.states)
                .map(|q| (useful[q] && self.finals.contains(&q)).then_some(0))
                .collect();
            if k > 0 {
                for q in 0..n.states {
                    row[q] = row[q].max(best[k - 1][q]);
                }
            }
            loop {
                let mut changed = false;
                for s in &steps {
                    let w = usize::from(s.input.is_some());
                    let tail = match s.output {
                        None => row[s.to],
                        Some(_) if k > 0 => best[k - 1][s.to],
                        Some(_) => None,
                    };
                    if let Some(t) = tail {
                        if row[s.from].is_none_or(|r| r < t + w) {
                            row[s.from] = Some(t + w);
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            best.push(row);
        }
        Ok(best[max_out][self.initial].unwrap_or(0))
    }
}

impl Default for FiniteTransducer {
    fn default() -> Self {
        Self::new()
    }
}

fn quoted(s: &str) -> Option<(&str, &str)> {
    let s = s.strip_prefix('"')?;
    let end = s.find('"')?;
    Some((&s[..end], &s[end + 1..]))
}

// A state on a cycle of `steps` in which some step reads or writes
// something, found through strongly connected components.
fn productive_cycle(states: usize, steps: &[Step]) -> Option<usize> {
    let mut adj = vec![Vec::new(); states];
    for s in steps {
        adj[s.from].push(s.to);
    }
    let comp = tarjan(&adj);
    steps
        .iter()
        .find(|s| comp[s.from] == comp[s.to] && (s.input.is_some() || s.output.is_some()))
        .map(|s| s.from)
}

fn tarjan(adj: &[Vec<usize>]) -> Vec<usize> {
    struct T<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        comp: Vec<usize>,
        next: usize,
        comps: usize,
    }
    impl T<'_> {
        fn visit(&mut self, v: usize) {
            self.index[v] = Some(self.next);
            self.low[v] = self.next;
            self.next += 1;
            self.stack.push(v);
            self.on[v] = true;
            for i in 0..self.adj[v].len() {
                let w = self.adj[v][i];
                match self.index[w] {
                    None => {
                        self.visit(w);
                        self.low[v] = self.low[v].min(self.low[w]);
                    }
                    Some(iw) if self.on[w] => self.low[v] = self.low[v].min(iw),
                    Some(_) => {}
                }
            }
            if Some(self.low[v]) == self.index[v] {
                while let Some(w) = self.stack.pop() {
                    self.on[w] = false;
                    self.comp[w] = self.comps;
                    if w == v {
                        break;
                    }
                }
                self.comps += 1;
            }
        }
    }
    let n = adj.len();
    let mut t = T {
        adj,
        index: vec![None; n],
        low: vec![0; n],
        on: vec![false; n],
        stack: Vec::new(),
        comp: vec![0; n],
        next: 0,
        comps: 0,
    };
    for v in 0..n {
        if t.index[v].is_none() {
            t.visit(v);
        }
    }
    t.comp
}

/// A language that can list its words up to a length.
pub trait WordSource {
    fn words_up_to(&self, max_len: usize) -> Result<Vec<Vec<String>>, TransducerError>;
}

impl WordSource for Grammar {
    fn words_up_to(&self, max_len: usize) -> Result<Vec<Vec<String>>, TransducerError> {
        Ok(enumerate_language(self, max_len)?)
    }
}

/// The generalized Dyck language over a ranked alphabet.
pub struct DyckSource(pub RankedAlphabet);

impl WordSource for DyckSource {
    fn words_up_to(&self, max_len: usize) -> Result<Vec<Vec<String>>, TransducerError> {
        Ok(enumerate_language(&build_dyck_grammar(&self.0), max_len)?)
    }
}

/// A finite list of words.
pub struct FiniteSource(pub Vec<Vec<String>>);

impl WordSource for FiniteSource {
    fn words_up_to(&self, max_len: usize) -> Result<Vec<Vec<String>>, TransducerError> {
        Ok(self.0.iter().filter(|w| w.len() <= max_len).cloned().collect())
    }
}

/// `{ v : |v| ≤ max_out, (u, v) ∈ t for some u in the source }`.
pub fn image_up_to(
    t: &FiniteTransducer,
    source: &dyn WordSource,
    max_out: usize,
) -> Result<BTreeSet<Vec<String>>, TransducerError> {
    let max_in = t.input_bound(max_out)?;
    let mut image = BTreeSet::new();
    for u in source.words_up_to(max_in)? {
        image.extend(t.apply_to_word(&u, max_out).0);
    }
    Ok(image)
}

/// A valence automaton over `P(A) × P(A)` accepting the image of `D(X)`
/// under `t`: every letter read by `t` multiplies the register by its
/// images under the two projections whose joint identity language is `D(X)`.
pub fn transducer_to_valence(t: &FiniteTransducer, x: &RankedAlphabet) -> Result<ValenceAutomaton, TransducerError> {
    let n = t.normalize();
    let mut m = ValenceAutomaton::new(2);
    m.states = SymbolTable::new();
    for q in 0..n.states {
        let name = if q < t.states.len() {
            t.states.name(q).to_string()
        } else {
            format!("{}.{}", t.states.name(n.origin[q]), q)
        };
        let name = m.states.fresh(&name);
        m.states.intern(&name);
    }
    m.alphabet = t.output.clone();
    for a in x.a_symbols() {
        m.registers.intern(&format!("a_{}_{}", x.name(a.symbol), a.index));
    }
    let register = |a: crate::monoids::ASymbol| {
        x.a_symbols()
            .iter()
            .position(|b| *b == a)
            .expect("image symbols belong to A") as u32
    };
    for s in &n.steps {
        let element = match s.input {
            None => vec![Polycyclic::identity(), Polycyclic::identity()],
            Some(a) => {
                let l = x.parse_letter(t.input.name(a))?;
                vec![
                    Polycyclic::generator(phi1(&l).map(register)),
                    Polycyclic::generator(phi2(x, &l).map(register)),
                ]
            }
        };
        m.edges.push(ValenceEdge {
            from: s.from,
            input: s.output,
            element,
            to: s.to,
        });
    }
    m.initial = t.initial;
    m.finals = t.finals.clone();
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(words: &[&str]) -> BTreeSet<Vec<String>> {
        words.iter().map(|w| tokenize(w)).collect()
    }

    fn one_bracket() -> RankedAlphabet {
        RankedAlphabet::new([("x", 1)]).unwrap()
    }

    #[test]
    fn identity_and_relabeling_images() {
        let x = one_bracket();
        let id = FiniteTransducer::identity(&["x^1", "x'1"]);
        let img = image_up_to(&id, &DyckSource(x.clone()), 4).unwrap();
        assert_eq!(img, set(&["", "x^1 x'1", "x^1 x'1 x^1 x'1", "x^1 x^1 x'1 x'1"]));
        let relabel = FiniteTransducer::relabeling(&[("x^1", "a"), ("x'1", "b")]);
        let img = image_up_to(&relabel, &DyckSource(x), 4).unwrap();
        assert_eq!(img, set(&["", "ab", "abab", "aabb"]));
    }

    #[test]
    fn degenerate_cycles_are_errors() {
        let mut t = FiniteTransducer::new();
        t.add("p", &[], &["a"], "p");
        assert!(matches!(
            image_up_to(&t, &FiniteSource(vec![vec![]]), 3),
            Err(TransducerError::UnboundedOutput(_))
        ));
        let mut t = FiniteTransducer::new();
        t.add("p", &["a"], &[], "p");
        assert!(matches!(t.input_bound(3), Err(TransducerError::UnboundedInput(_))));
    }

    #[test]
    fn word_application() {
        let id = FiniteTransducer::identity(&["a", "b"]);
        assert_eq!(id.apply_to_word(&tokenize("ab"), 5).0, set(&["ab"]));
        let mut del = FiniteTransducer::new();
        del.add("p", &["a"], &[], "p");
        del.add("p", &["b"], &[], "p");
        assert_eq!(del.apply_to_word(&tokenize("abba"), 5).0, set(&[""]));
        let relabel = FiniteTransducer::relabeling(&[("x^1", "a"), ("x'1", "b")]);
        assert_eq!(relabel.apply_to_word(&tokenize("x^1 x'1"), 5).0, set(&["ab"]));
        let (out, capped) = id.apply_to_word(&tokenize("abab"), 2);
        assert!(out.is_empty() && capped);
    }

    #[test]
    fn multi_letter_edges_and_bounds() {
        let mut t = FiniteTransducer::new();
        t.add("p", &["a", "b"], &["c"], "p");
        assert_eq!(t.input_bound(3).unwrap(), 6);
        assert_eq!(t.apply_to_word(&tokenize("abab"), 5).0, set(&["cc"]));
        assert_eq!(FiniteTransducer::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn parse_format() {
        let t = FiniteTransducer::parse("tstate p init final\ntedge p \"x^1\" / \"a\" -> p\ntedge p \"x'1\" / \"\" -> p\n")
            .unwrap();
        assert_eq!(t.edges.len(), 2);
        assert!(t.edges[1].output.is_empty());
        assert!(FiniteTransducer::parse("tstate p init\ntedge p x / y -> p\n").is_err());
        assert!(FiniteTransducer::parse("tstate p\n").is_err());
    }

    #[test]
    fn valence_composition_matches_image() {
        let x = one_bracket();
        let relabel = FiniteTransducer::relabeling(&[("x^1", "a"), ("x'1", "b")]);
        let v = transducer_to_valence(&relabel, &x).unwrap();
        let img = image_up_to(&relabel, &DyckSource(x), 6).unwrap();
        crate::word::for_each_index_word(2, 6, |w| {
            let w: Vec<&str> = w.iter().map(|&i| ["a", "b"][i]).collect();
            let budget = crate::search::RunBudget::for_word(w.len(), 1);
            let accepted = crate::valence::run_valence(&v, &w, &budget).is_accept();
            let owned: Vec<String> = w.iter().map(|s| s.to_string()).collect();
            assert_eq!(accepted, img.contains(&owned), "{w:?}");
        });
    }
}
