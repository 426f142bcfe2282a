//! Exhaustive bottom-up enumeration of `L(G) ∩ Σ^{≤n}`.
//!
//! Values are separator words over terminal indices. Each nonterminal's
//! value set is grown to a fixpoint, semi-naively: in every round each rule
//! is evaluated with at least one nonterminal occurrence drawn from the
//! values found in the previous round. Values longer than the bound minus
//! the minimal yield of the rest of the rule body are dropped.

use rustc_hash::FxHashSet;

use super::{DcfgError, Grammar};
use crate::terms::{Letter, Term};

const SEP: u32 = u32::MAX;

type Value = Vec<u32>;

fn letters_count(v: &[u32]) -> usize {
    v.iter().filter(|&&c| c != SEP).count()
}

fn intercalate(left: &[u32], j: usize, right: &[u32]) -> Value {
    let at = left
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == SEP)
        .nth(j - 1)
        .map(|(i, _)| i)
        .expect("rank checked by validation");
    let mut out = Vec::with_capacity(left.len() + right.len() - 1);
    out.extend_from_slice(&left[..at]);
    out.extend_from_slice(right);
    out.extend_from_slice(&left[at + 1..]);
    out
}

/// Shortest terminal yield of every nonterminal, `None` when it derives no
/// ground term.
pub fn minimal_yields(g: &Grammar) -> Vec<Option<usize>> {
    let mut best: Vec<Option<usize>> = vec![None; g.nonterminals.len()];
    loop {
        let mut changed = false;
        for rule in &g.rules {
            let Some(lhs) = g.nonterminal_index(&rule.lhs) else {
                continue;
            };
            if let Some(m) = term_min(g, &rule.rhs, &best) {
                if best[lhs].is_none_or(|b| m < b) {
                    best[lhs] = Some(m);
                    changed = true;
                }
            }
        }
        if !changed {
            return best;
        }
    }
}

fn term_min(g: &Grammar, t: &Term, best: &[Option<usize>]) -> Option<usize> {
    match t {
        Term::Nonterminal(n) => best[g.nonterminal_index(n)?],
        Term::Literal(w) => Some(w.symbol_count()),
        Term::Separator => Some(0),
        Term::Concat(l, r) | Term::Intercal(_, l, r) => Some(term_min(g, l, best)? + term_min(g, r, best)?),
    }
}

// Which slice of a nonterminal's values an occurrence may draw from.
#[derive(Clone, Copy)]
enum Source {
    Old,
    Delta,
    All,
}

struct Pool {
    values: Vec<Value>,
    seen: FxHashSet<Value>,
    old_end: usize,
    delta_end: usize,
}

impl Pool {
    fn slice(&self, s: Source) -> &[Value] {
        match s {
            Source::Old => &self.values[..self.old_end],
            Source::Delta => &self.values[self.old_end..self.delta_end],
            Source::All => &self.values[..self.delta_end],
        }
    }
}

struct Enumerator<'g> {
    g: &'g Grammar,
    max_len: usize,
    mins: Vec<Option<usize>>,
    pools: Vec<Pool>,
}

impl Enumerator<'_> {
    // Values of `t` bucketed by letter count, each at most `slack`.
    // `occ` numbers nonterminal leaves left to right; `sources[i]` says
    // where occurrence `i` draws from.
    fn eval(&self, t: &Term, slack: usize, sources: &[Source], occ: &mut usize) -> Vec<FxHashSet<Value>> {
        let mut out: Vec<FxHashSet<Value>> = vec![FxHashSet::default(); slack + 1];
        match t {
            Term::Nonterminal(n) => {
                let idx = self.g.nonterminal_index(n).expect("validated grammar");
                let src = sources[*occ];
                *occ += 1;
                for v in self.pools[idx].slice(src) {
                    let c = letters_count(v);
                    if c <= slack {
                        out[c].insert(v.clone());
                    }
                }
            }
            Term::Literal(w) => {
                let v: Value = w
                    .letters()
                    .iter()
                    .map(|l| match l {
                        Letter::Separator => SEP,
                        Letter::Symbol(s) => self.g.terminal_index(s).expect("validated grammar") as u32,
                    })
                    .collect();
                let c = letters_count(&v);
                if c <= slack {
                    out[c].insert(v);
                }
            }
            Term::Separator => {
                out[0].insert(vec![SEP]);
            }
            Term::Concat(l, r) | Term::Intercal(_, l, r) => {
                let (ml, mr) = (self.min(l), self.min(r));
                if ml + mr > slack {
                    // still consume the occurrence numbers of both sides
                    *occ += l.nonterminals().len() + r.nonterminals().len();
                    return out;
                }
                let left = self.eval(l, slack - mr, sources, occ);
                let right = self.eval(r, slack - ml, sources, occ);
                for (cl, ls) in left.iter().enumerate() {
                    if ls.is_empty() {
                        continue;
                    }
                    for (cr, rs) in right.iter().enumerate().take(slack - cl + 1) {
                        for a in ls {
                            for b in rs {
                                let v = match t {
                                    Term::Intercal(j, ..) => intercalate(a, *j, b),
                                    _ => {
                                        let mut v = a.clone();
                                        v.extend_from_slice(b);
                                        v
                                    }
                                };
                                out[cl + cr].insert(v);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn min(&self, t: &Term) -> usize {
        term_min(self.g, t, &self.mins).unwrap_or(usize::MAX / 4)
    }

    fn run(&mut self) {
        let rule_nts: Vec<usize> = self.g.rules.iter().map(|r| r.rhs.nonterminals().len()).collect();
        let mut first = true;
        loop {
            let mut fresh: Vec<(usize, Value)> = Vec::new();
            for (ri, rule) in self.g.rules.iter().enumerate() {
                let lhs = self.g.nonterminal_index(&rule.lhs).expect("validated grammar");
                let m = self.min(&rule.rhs);
                if m > self.max_len {
                    continue;
                }
                let n = rule_nts[ri];
                let mut plans: Vec<Vec<Source>> = Vec::new();
                if n == 0 {
                    if first {
                        plans.push(Vec::new());
                    }
                } else {
                    for d in 0..n {
                        plans.push(
                            (0..n)
                                .map(|o| match o.cmp(&d) {
                                    std::cmp::Ordering::Less => Source::Old,
                                    std::cmp::Ordering::Equal => Source::Delta,
                                    std::cmp::Ordering::Greater => Source::All,
                                })
                                .collect(),
                        );
                    }
                }
                for plan in plans {
                    let mut occ = 0;
                    for bucket in self.eval(&rule.rhs, self.max_len, &plan, &mut occ) {
                        fresh.extend(bucket.into_iter().map(|v| (lhs, v)));
                    }
                }
            }
            first = false;
            for p in &mut self.pools {
                p.old_end = p.delta_end;
            }
            for (lhs, v) in fresh {
                let pool = &mut self.pools[lhs];
                if pool.seen.insert(v.clone()) {
                    pool.values.push(v);
                }
            }
            let mut any = false;
            for p in &mut self.pools {
                p.delta_end = p.values.len();
                any |= p.delta_end > p.old_end;
            }
            if !any {
                return;
            }
        }
    }
}

/// Every word of `L(g)` with at most `max_len` letters, in length-lexicographic
/// order of the alphabet declaration.
pub fn enumerate_language(g: &Grammar, max_len: usize) -> Result<Vec<Vec<String>>, DcfgError> {
    g.validate()?;
    let mut e = Enumerator {
        g,
        max_len,
        mins: minimal_yields(g),
        pools: (0..g.nonterminals.len())
            .map(|_| Pool {
                values: Vec::new(),
                seen: FxHashSet::default(),
                old_end: 0,
                delta_end: 0,
            })
            .collect(),
    };
    e.run();
    let start = g.nonterminal_index(&g.start).expect("validated grammar");
    let mut words = e.pools[start].values.clone();
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(words.iter().map(|w| g.decode(w)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dcfg::{build_copy_power_grammar, build_dyck_grammar};
    use crate::monoids::RankedAlphabet;
    use crate::word::tokenize;

    fn words(list: &[&str]) -> Vec<Vec<String>> {
        list.iter().map(|w| tokenize(w)).collect()
    }

    #[test]
    fn g2_up_to_three() {
        let g = build_copy_power_grammar(2).unwrap();
        assert_eq!(enumerate_language(&g, 3).unwrap(), words(&["aaa", "bbb"]));
        assert_eq!(enumerate_language(&g, 0).unwrap(), words(&[]));
        assert_eq!(enumerate_language(&g, 6).unwrap().len(), 6);
    }

    #[test]
    fn one_bracket_dyck_up_to_four() {
        let x = RankedAlphabet::new([("x", 1)]).unwrap();
        let g = build_dyck_grammar(&x);
        assert_eq!(
            enumerate_language(&g, 4).unwrap(),
            words(&["", "x^1 x'1", "x^1 x^1 x'1 x'1", "x^1 x'1 x^1 x'1"])
        );
        assert_eq!(enumerate_language(&g, 0).unwrap(), words(&[""]));
    }

    #[test]
    fn minimal_yields_of_g2() {
        let g = build_copy_power_grammar(2).unwrap();
        assert_eq!(minimal_yields(&g), vec![Some(3), Some(0)]);
        let dead = Grammar::parse("k 0\nalphabet a\nnonterm S 0\nstart S\nrule S -> \"a\" . S\n").unwrap();
        assert_eq!(minimal_yields(&dead), vec![None]);
        assert_eq!(enumerate_language(&dead, 5).unwrap(), words(&[]));
    }
}
