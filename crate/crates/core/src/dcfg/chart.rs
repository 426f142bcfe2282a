//! Bottom-up chart recognition over tuples of substrings.
//!
//! Rule bodies are split into binary nodes shared across the grammar. An
//! item is a node (or nonterminal) together with the `r + 1` segments of the
//! input its value occupies, `r` being the node's rank. Empty segments carry
//! no position: an empty piece fits anywhere between its neighbours, so the
//! only constraint left is the left-to-right order of the nonempty ones.

use rustc_hash::FxHashMap;

use super::{DcfgError, Grammar};
use crate::terms::{term_rank, Term};

/// Largest nonterminal or subterm rank the chart supports.
pub const MAX_CHART_RANK: usize = 7;
/// Longest input the chart supports.
pub const MAX_WORD_LEN: usize = 254;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Seg {
    start: u8,
    end: u8,
}

const FLOAT: Seg = Seg { start: 255, end: 255 };

impl Seg {
    fn is_float(self) -> bool {
        self == FLOAT
    }
}

fn join(a: Seg, b: Seg) -> Option<Seg> {
    if a.is_float() {
        Some(b)
    } else if b.is_float() {
        Some(a)
    } else if a.end == b.start {
        Some(Seg {
            start: a.start,
            end: b.end,
        })
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Item {
    sym: u32,
    len: u8,
    segs: [Seg; MAX_CHART_RANK + 1],
}

impl Item {
    fn new(sym: u32) -> Self {
        Item {
            sym,
            len: 0,
            segs: [FLOAT; MAX_CHART_RANK + 1],
        }
    }

    fn push(&mut self, s: Seg) {
        self.segs[self.len as usize] = s;
        self.len += 1;
    }

    fn segs(&self) -> &[Seg] {
        &self.segs[..self.len as usize]
    }

    fn ordered(&self) -> bool {
        let mut last = 0u8;
        for s in self.segs() {
            if s.is_float() {
                continue;
            }
            if s.start < last {
                return false;
            }
            last = s.end;
        }
        true
    }
}

#[derive(Clone, Debug)]
enum NodeKind {
    Nonterminal,
    Literal(Vec<Vec<u32>>),
    Concat(u32, u32),
    Intercal(usize, u32, u32),
}

#[derive(Clone, Copy, Debug)]
enum Origin {
    Leaf,
    Pair(u32, u32),
    Unit { rule: u32, child: u32 },
}

/// A grammar compiled for repeated recognition.
#[derive(Clone, Debug)]
pub struct Recognizer {
    grammar: Grammar,
    nodes: Vec<NodeKind>,
    ranks: Vec<usize>,
    rule_roots: Vec<u32>,
    leaves: Vec<u32>,
    as_left: Vec<Vec<u32>>,
    as_right: Vec<Vec<u32>>,
    units: Vec<Vec<(u32, u32)>>,
    start: u32,
    // chart state, reused between inputs
    items: Vec<Item>,
    origins: Vec<Origin>,
    index: FxHashMap<Item, u32>,
    by_sym: Vec<Vec<u32>>,
    agenda: Vec<u32>,
}

/// A leftmost derivation: the rules applied, in order, and the ground term
/// they produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rules: Vec<usize>,
    /// Sentential forms from the start symbol to the ground term.
    pub forms: Vec<Term>,
}

impl Derivation {
    pub fn ground_term(&self) -> &Term {
        self.forms.last().expect("a derivation has at least the start form")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeriveOutcome {
    Found(Derivation),
    Absent,
    BudgetExhausted,
}

struct Compiler<'g> {
    grammar: &'g Grammar,
    nodes: Vec<NodeKind>,
    ranks: Vec<usize>,
    keys: FxHashMap<String, u32>,
}

impl Compiler<'_> {
    fn intern(&mut self, key: String, kind: NodeKind, rank: usize) -> Result<u32, DcfgError> {
        if rank > MAX_CHART_RANK {
            return Err(DcfgError::RankTooLarge(rank));
        }
        if let Some(&id) = self.keys.get(&key) {
            return Ok(id);
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(kind);
        self.ranks.push(rank);
        self.keys.insert(key, id);
        Ok(id)
    }

    fn node(&mut self, t: &Term) -> Result<u32, DcfgError> {
        match t {
            Term::Nonterminal(n) => Ok(self
                .grammar
                .nonterminal_index(n)
                .expect("validated grammar") as u32),
            Term::Separator => self.intern("L[[], []]".into(), NodeKind::Literal(vec![vec![], vec![]]), 1),
            Term::Literal(w) => {
                let segments = w
                    .segments()
                    .iter()
                    .map(|seg| self.grammar.encode(seg))
                    .collect::<Result<Vec<_>, _>>()?;
                self.intern(format!("L{segments:?}"), NodeKind::Literal(segments), w.rank())
            }
            Term::Concat(l, r) => {
                let (a, b) = (self.node(l)?, self.node(r)?);
                let rank = self.ranks[a as usize] + self.ranks[b as usize];
                self.intern(format!("c{a},{b}"), NodeKind::Concat(a, b), rank)
            }
            Term::Intercal(j, l, r) => {
                let (a, b) = (self.node(l)?, self.node(r)?);
                let rank = self.ranks[a as usize] + self.ranks[b as usize] - 1;
                self.intern(format!("i{j},{a},{b}"), NodeKind::Intercal(*j, a, b), rank)
            }
        }
    }
}

impl Recognizer {
    pub fn new(grammar: &Grammar) -> Result<Self, DcfgError> {
        grammar.validate()?;
        let mut c = Compiler {
            grammar,
            nodes: Vec::new(),
            ranks: Vec::new(),
            keys: FxHashMap::default(),
        };
        for (name, rank) in &grammar.nonterminals {
            c.intern(format!("N{name}"), NodeKind::Nonterminal, *rank)?;
        }
        let mut rule_roots = Vec::new();
        for rule in &grammar.rules {
            // ranks were checked by validate; this only guards the chart width
            term_rank(&rule.rhs, grammar)?;
            rule_roots.push(c.node(&rule.rhs)?);
        }
        let n = c.nodes.len();
        let mut as_left = vec![Vec::new(); n];
        let mut as_right = vec![Vec::new(); n];
        let mut leaves = Vec::new();
        for (id, kind) in c.nodes.iter().enumerate() {
            match kind {
                NodeKind::Concat(a, b) | NodeKind::Intercal(_, a, b) => {
                    as_left[*a as usize].push(id as u32);
                    as_right[*b as usize].push(id as u32);
                }
                NodeKind::Literal(_) => leaves.push(id as u32),
                NodeKind::Nonterminal => {}
            }
        }
        let mut units = vec![Vec::new(); n];
        for (i, rule) in grammar.rules.iter().enumerate() {
            let lhs = grammar.nonterminal_index(&rule.lhs).expect("validated grammar");
            units[rule_roots[i] as usize].push((i as u32, lhs as u32));
        }
        let start = grammar.nonterminal_index(&grammar.start).expect("validated grammar") as u32;
        Ok(Recognizer {
            grammar: grammar.clone(),
            nodes: c.nodes,
            ranks: c.ranks,
            rule_roots,
            leaves,
            as_left,
            as_right,
            units,
            start,
            items: Vec::new(),
            origins: Vec::new(),
            index: FxHashMap::default(),
            by_sym: vec![Vec::new(); n],
            agenda: Vec::new(),
        })
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    /// Membership of a word given as terminal indices.
    pub fn recognize_encoded(&mut self, w: &[u32]) -> Result<bool, DcfgError> {
        Ok(self.run(w, usize::MAX)?.0.is_some())
    }

    /// Membership of a word given as symbols.
    pub fn recognize<S: AsRef<str>>(&mut self, w: &[S]) -> Result<bool, DcfgError> {
        let encoded = self.grammar.encode(w)?;
        self.recognize_encoded(&encoded)
    }

    /// Finds a leftmost derivation of `w`. `max_steps` bounds the number of
    /// chart items processed.
    pub fn derive<S: AsRef<str>>(&mut self, w: &[S], max_steps: usize) -> Result<DeriveOutcome, DcfgError> {
        let encoded = self.grammar.encode(w)?;
        let (goal, exhausted) = self.run(&encoded, max_steps)?;
        match goal {
            Some(id) => {
                let mut rules = Vec::new();
                self.collect_rules(id, &mut rules);
                let mut forms = vec![Term::nt(self.grammar.start.clone())];
                for &r in &rules {
                    let next = forms
                        .last()
                        .unwrap()
                        .replace_leftmost_nonterminal(&self.grammar.rules[r].rhs)
                        .expect("a nonterminal is left while rules remain");
                    forms.push(next);
                }
                Ok(DeriveOutcome::Found(Derivation { rules, forms }))
            }
            None if exhausted => Ok(DeriveOutcome::BudgetExhausted),
            None => Ok(DeriveOutcome::Absent),
        }
    }

    // Rules of the recorded derivation of a nonterminal item, in pre-order.
    fn collect_rules(&self, id: u32, out: &mut Vec<usize>) {
        let Origin::Unit { rule, child } = self.origins[id as usize] else {
            unreachable!("nonterminal items come from rules");
        };
        out.push(rule as usize);
        self.collect_node(self.rule_roots[rule as usize], child, out);
    }

    fn collect_node(&self, node: u32, id: u32, out: &mut Vec<usize>) {
        match &self.nodes[node as usize] {
            NodeKind::Nonterminal => self.collect_rules(id, out),
            NodeKind::Literal(_) => {}
            NodeKind::Concat(a, b) | NodeKind::Intercal(_, a, b) => {
                let Origin::Pair(x, y) = self.origins[id as usize] else {
                    unreachable!("operator items come from pairs");
                };
                self.collect_node(*a, x, out);
                self.collect_node(*b, y, out);
            }
        }
    }

    fn goal(&self, n: usize) -> Item {
        let mut g = Item::new(self.start);
        g.push(if n == 0 {
            FLOAT
        } else {
            Seg {
                start: 0,
                end: n as u8,
            }
        });
        g
    }

    // Returns the goal item if derivable and whether the budget cut the run.
    fn run(&mut self, w: &[u32], budget: usize) -> Result<(Option<u32>, bool), DcfgError> {
        if w.len() > MAX_WORD_LEN {
            return Err(DcfgError::WordTooLong(w.len()));
        }
        if let Some(&bad) = w.iter().find(|&&t| t as usize >= self.grammar.alphabet.len()) {
            return Err(DcfgError::ForeignSymbol(format!("#{bad}")));
        }
        self.items.clear();
        self.origins.clear();
        self.index.clear();
        self.agenda.clear();
        for v in &mut self.by_sym {
            v.clear();
        }
        let goal = self.goal(w.len());

        for i in 0..self.leaves.len() {
            let leaf = self.leaves[i];
            self.seed(leaf, w);
        }
        if let Some(&id) = self.index.get(&goal) {
            return Ok((Some(id), false));
        }
        let mut steps = 0usize;
        while let Some(id) = self.agenda.pop() {
            if steps >= budget {
                return Ok((None, true));
            }
            steps += 1;
            let it = self.items[id as usize];
            let sym = it.sym as usize;
            for u in 0..self.units[sym].len() {
                let (rule, lhs) = self.units[sym][u];
                let mut up = it;
                up.sym = lhs;
                self.add(up, Origin::Unit { rule, child: id });
            }
            for p in 0..self.as_left[sym].len() {
                let parent = self.as_left[sym][p];
                let right = self.child(parent, false);
                let mut n = 0;
                while n < self.by_sym[right].len() {
                    let other = self.by_sym[right][n];
                    if let Some(res) = self.combine(parent, &it, &self.items[other as usize]) {
                        self.add(res, Origin::Pair(id, other));
                    }
                    n += 1;
                }
            }
            for p in 0..self.as_right[sym].len() {
                let parent = self.as_right[sym][p];
                let left = self.child(parent, true);
                let mut n = 0;
                while n < self.by_sym[left].len() {
                    let other = self.by_sym[left][n];
                    if let Some(res) = self.combine(parent, &self.items[other as usize], &it) {
                        self.add(res, Origin::Pair(other, id));
                    }
                    n += 1;
                }
            }
            if let Some(&id) = self.index.get(&goal) {
                return Ok((Some(id), false));
            }
        }
        Ok((None, false))
    }

    fn child(&self, parent: u32, left: bool) -> usize {
        match self.nodes[parent as usize] {
            NodeKind::Concat(a, b) | NodeKind::Intercal(_, a, b) => (if left { a } else { b }) as usize,
            _ => unreachable!("parents are operator nodes"),
        }
    }

    fn add(&mut self, item: Item, origin: Origin) {
        if self.index.contains_key(&item) {
            return;
        }
        let id = self.items.len() as u32;
        self.items.push(item);
        self.origins.push(origin);
        self.index.insert(item, id);
        self.by_sym[item.sym as usize].push(id);
        self.agenda.push(id);
    }

    fn seed(&mut self, leaf: u32, w: &[u32]) {
        let NodeKind::Literal(segments) = &self.nodes[leaf as usize] else {
            unreachable!("leaves are literals");
        };
        let segments = segments.clone();
        let mut item = Item::new(leaf);
        self.place(&segments, 0, w, &mut item);
    }

    fn place(&mut self, segments: &[Vec<u32>], from: usize, w: &[u32], item: &mut Item) {
        let Some((seg, rest)) = segments.split_first() else {
            self.add(*item, Origin::Leaf);
            return;
        };
        if seg.is_empty() {
            item.push(FLOAT);
            self.place(rest, from, w, item);
            item.len -= 1;
            return;
        }
        let mut s = from;
        while s + seg.len() <= w.len() {
            if w[s..s + seg.len()] == seg[..] {
                item.push(Seg {
                    start: s as u8,
                    end: (s + seg.len()) as u8,
                });
                self.place(rest, s + seg.len(), w, item);
                item.len -= 1;
            }
            s += 1;
        }
    }

    fn combine(&self, parent: u32, a: &Item, b: &Item) -> Option<Item> {
        let mut out = Item::new(parent);
        let (x, y) = (a.segs(), b.segs());
        match self.nodes[parent as usize] {
            NodeKind::Concat(..) => {
                for &s in &x[..x.len() - 1] {
                    out.push(s);
                }
                out.push(join(x[x.len() - 1], y[0])?);
                for &s in &y[1..] {
                    out.push(s);
                }
            }
            NodeKind::Intercal(j, ..) => {
                // x_0 … x_{j-1} · y_0 … y_s · x_j … x_r
                for &s in &x[..j - 1] {
                    out.push(s);
                }
                if y.len() == 1 {
                    out.push(join(join(x[j - 1], y[0])?, x[j])?);
                } else {
                    out.push(join(x[j - 1], y[0])?);
                    for &s in &y[1..y.len() - 1] {
                        out.push(s);
                    }
                    out.push(join(y[y.len() - 1], x[j])?);
                }
                for &s in &x[j + 1..] {
                    out.push(s);
                }
            }
            _ => unreachable!("parents are operator nodes"),
        }
        debug_assert_eq!(out.len as usize, self.ranks[parent as usize] + 1);
        out.ordered().then_some(out)
    }
}

/// `w ∈ L(g)`.
pub fn recognize<S: AsRef<str>>(g: &Grammar, w: &[S]) -> Result<bool, DcfgError> {
    Recognizer::new(g)?.recognize(w)
}

/// A leftmost derivation of `w`, if one exists within `max_steps` chart
/// items.
pub fn derive<S: AsRef<str>>(g: &Grammar, w: &[S], max_steps: usize) -> Result<DeriveOutcome, DcfgError> {
    Recognizer::new(g)?.derive(w, max_steps)
}

// Used by tests to check derivations against the value function.
#[cfg(test)]
fn value(t: &Term) -> Vec<String> {
    use crate::terms::Letter;
    crate::terms::eval_ground_term(t)
        .unwrap()
        .letters()
        .iter()
        .map(|l| match l {
            Letter::Symbol(s) => s.clone(),
            Letter::Separator => panic!("separator in a rank-0 value"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dcfg::{build_copy_power_grammar, build_dyck_grammar};
    use crate::monoids::RankedAlphabet;
    use crate::word::tokenize;

    #[test]
    fn g2_examples() {
        let g = build_copy_power_grammar(2).unwrap();
        let mut r = Recognizer::new(&g).unwrap();
        assert!(r.recognize(&tokenize("abaabaaba")).unwrap());
        assert!(r.recognize(&tokenize("aaa")).unwrap());
        assert!(!r.recognize(&tokenize("ab")).unwrap());
        assert!(!r.recognize(&tokenize("")).unwrap());
        assert!(!r.recognize(&tokenize("abaabaabb")).unwrap());
        assert!(matches!(r.recognize(&tokenize("abc")), Err(DcfgError::ForeignSymbol(_))));
    }

    #[test]
    fn g2_derivation_of_aba_cubed() {
        let g = build_copy_power_grammar(2).unwrap();
        let w = tokenize("abaabaaba");
        let DeriveOutcome::Found(d) = derive(&g, &w, 100_000).unwrap() else {
            panic!("no derivation");
        };
        // S -> aT…, T -> bT…, T -> aT…, T -> 11
        assert_eq!(d.rules, vec![0, 3, 2, 4]);
        assert_eq!(d.forms.len(), 5);
        assert_eq!(
            d.forms[1].to_string(),
            r#""a" . T +1 "a" +1 "a""#
        );
        assert_eq!(value(d.ground_term()), w);
    }

    #[test]
    fn derive_reports_absence_and_budget() {
        let g = build_copy_power_grammar(2).unwrap();
        assert_eq!(derive(&g, &tokenize("ab"), 1000).unwrap(), DeriveOutcome::Absent);
        assert_eq!(
            derive(&g, &tokenize("abaabaaba"), 1).unwrap(),
            DeriveOutcome::BudgetExhausted
        );
        let DeriveOutcome::Found(d) = derive(&g, &tokenize("aaa"), 1000).unwrap() else {
            panic!()
        };
        assert_eq!(d.rules.last(), Some(&4));
    }

    #[test]
    fn dyck_examples() {
        let x = RankedAlphabet::new([("x", 2)]).unwrap();
        let g = build_dyck_grammar(&x);
        let mut r = Recognizer::new(&g).unwrap();
        assert!(r.recognize(&tokenize("x^1 x'1 x^2 x'2")).unwrap());
        assert!(r.recognize(&tokenize("")).unwrap());
        assert!(!r.recognize(&tokenize("x^1 x^2 x'1 x'2")).unwrap());
        assert!(!r.recognize(&tokenize("x^1 x'1")).unwrap());
        assert!(r.recognize(&tokenize("x^1 x^1 x'1 x'1 x^2 x^2 x'2 x'2")).unwrap());
    }

    #[test]
    fn empty_literals_float() {
        let g = Grammar::parse(
            "k 2\nalphabet a b\nnonterm S 0\nnonterm T 1\nstart S\n\
             rule S -> T +1 \"\"\nrule T -> \"a1\" . \"\" . \"1b\" +1 \"\"\n",
        )
        .unwrap();
        assert_eq!(g.violations(), vec![]);
        assert!(recognize(&g, &tokenize("ab")).unwrap());
        assert!(!recognize(&g, &tokenize("ba")).unwrap());
    }
}
