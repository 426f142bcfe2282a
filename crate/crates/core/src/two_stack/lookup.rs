//! Removing stack observation from a generalized machine.
//!
//! The top `d` symbols of both stacks are cached in the state. A stack cell
//! of the output holds a source symbol together with the window of its
//! stack that was cached when the cell was created, which is what a later
//! removal restores. Markers `Z1..Zd` are pushed on both stacks first and
//! popped at the end.

use super::{Command, Gstsa, GstsaTransition};
use crate::names::SymbolTable;

fn all_windows(symbols: usize, d: usize) -> Vec<Vec<usize>> {
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

struct Builder {
    d: usize,
    ext: Vec<String>,
    windows: usize,
    out: Gstsa,
    product: Vec<usize>,
}

impl Builder {
    fn window_index(&self, w: &[usize]) -> usize {
        w.iter().fold(0, |acc, &s| acc * self.ext.len() + s)
    }

    fn state(&self, q: usize, w1: &[usize], w2: &[usize]) -> usize {
        self.product[(q * self.windows + self.window_index(w1)) * self.windows + self.window_index(w2)]
    }

    fn cell(&mut self, b: usize, w: &[usize]) -> usize {
        let name = if self.d == 0 {
            self.ext[b].clone()
        } else {
            let w: Vec<&str> = w.iter().map(|&s| self.ext[s].as_str()).collect();
            format!("{}<{}>", self.ext[b], w.join("."))
        };
        self.out.symbols.intern(&name)
    }

    fn emit(&mut self, from: usize, input: Option<usize>, command: Command, symbols: Option<(usize, usize)>, to: usize) {
        self.out.transitions.push(GstsaTransition {
            from,
            input,
            command,
            symbols,
            observe: [Vec::new(), Vec::new()],
            to,
        });
    }

    // window after pushing `b`
    fn shifted(&self, w: &[usize], b: usize) -> Vec<usize> {
        if self.d == 0 {
            return Vec::new();
        }
        let mut n = w[1..].to_vec();
        n.push(b);
        n
    }

    // windows after removing the top, one per symbol that may show up below
    fn unshifted(&self, w: &[usize]) -> Vec<Vec<usize>> {
        if self.d == 0 {
            return vec![Vec::new()];
        }
        (0..self.ext.len())
            .map(|a0| {
                let mut n = vec![a0];
                n.extend_from_slice(&w[..self.d - 1]);
                n
            })
            .collect()
    }
}

/// A blind machine with the language of `m`. It has
/// `2 + |Q|·|Γ'|^{2d}` states plus `2(d − 1)` chaining states for the
/// marker prelude and finale, where `Γ'` adds the `d` markers to `Γ`.
pub fn eliminate_lookup_gstsa(m: &Gstsa) -> Gstsa {
    let d = m.depth();
    let mut ext: Vec<String> = m.symbols.names().to_vec();
    let mut markers = Vec::new();
    for i in 1..=d {
        let mut name = format!("Z{i}");
        while ext.contains(&name) {
            name.push('\'');
        }
        markers.push(ext.len());
        ext.push(name);
    }
    let windows = all_windows(ext.len(), d);

    let mut out = Gstsa::new(m.rank.max(1));
    out.states = SymbolTable::new();
    out.alphabet = m.alphabet.clone();
    let start = out.states.intern(&m.states.fresh("start"));
    let accept = out.states.intern(&m.states.fresh("accept"));
    let render = |w: &[usize]| w.iter().map(|&s| ext[s].as_str()).collect::<Vec<_>>().join(".");
    let mut product = Vec::with_capacity(m.states.len() * windows.len() * windows.len());
    for q in 0..m.states.len() {
        for w1 in &windows {
            for w2 in &windows {
                let base = format!("{}<{}|{}>", m.states.name(q), render(w1), render(w2));
                let name = out.states.fresh(&base);
                product.push(out.states.intern(&name));
            }
        }
    }
    let mut b = Builder {
        d,
        windows: windows.len(),
        ext,
        out,
        product,
    };

    // prelude: Z1 … Zd on both stacks
    let entry = b.state(m.initial, &markers, &markers);
    if d == 0 {
        b.emit(start, None, Command::Keep, None, entry);
    }
    let mut cur = start;
    let mut marker_cells = Vec::new();
    for (i, &z) in markers.iter().enumerate() {
        let next = if i + 1 == d {
            entry
        } else {
            let name = b.out.states.fresh(&format!("start.{}", i + 1));
            b.out.states.intern(&name)
        };
        let c = b.cell(z, &markers);
        marker_cells.push(c);
        b.emit(cur, None, Command::Push, Some((c, c)), next);
        cur = next;
    }

    for t in &m.transitions {
        for w1 in &windows {
            if !w1.ends_with(&t.observe[0]) {
                continue;
            }
            for w2 in &windows {
                if !w2.ends_with(&t.observe[1]) {
                    continue;
                }
                let from = b.state(t.from, w1, w2);
                let Some((a1, a2)) = t.symbols else {
                    let to = b.state(t.to, w1, w2);
                    b.emit(from, t.input, Command::Keep, None, to);
                    continue;
                };
                let top = |w: &[usize], s: usize| d == 0 || w[d - 1] == s;
                match t.command {
                    Command::Push => {
                        let (c1, c2) = (b.cell(a1, w1), b.cell(a2, w2));
                        let to = b.state(t.to, &b.shifted(w1, a1), &b.shifted(w2, a2));
                        b.emit(from, t.input, Command::Push, Some((c1, c2)), to);
                    }
                    Command::Move if top(w1, a1) => {
                        let c2 = b.cell(a2, w2);
                        let nw2 = b.shifted(w2, a2);
                        for below in b.unshifted(w1) {
                            let c1 = b.cell(a1, &below);
                            let to = b.state(t.to, &below, &nw2);
                            b.emit(from, t.input, Command::Move, Some((c1, c2)), to);
                        }
                    }
                    Command::Return if top(w2, a1) => {
                        let c2 = b.cell(a2, w1);
                        let nw1 = b.shifted(w1, a2);
                        for below in b.unshifted(w2) {
                            let c1 = b.cell(a1, &below);
                            let to = b.state(t.to, &nw1, &below);
                            b.emit(from, t.input, Command::Return, Some((c1, c2)), to);
                        }
                    }
                    Command::Pop if top(w1, a1) && top(w2, a2) => {
                        for below1 in b.unshifted(w1) {
                            for below2 in b.unshifted(w2) {
                                let c1 = b.cell(a1, &below1);
                                let c2 = b.cell(a2, &below2);
                                let to = b.state(t.to, &below1, &below2);
                                b.emit(from, t.input, Command::Pop, Some((c1, c2)), to);
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
    }

    // finale: remove the markers one by one through a shared chain
    let mut chain = Vec::new();
    for i in (1..d).rev() {
        let name = b.out.states.fresh(&format!("accept.{i}"));
        chain.push(b.out.states.intern(&name));
    }
    chain.push(accept);
    for &f in &m.finals {
        let from = b.state(f, &markers, &markers);
        if d == 0 {
            b.emit(from, None, Command::Keep, None, accept);
        } else {
            let z = marker_cells[d - 1];
            b.emit(from, None, Command::Pop, Some((z, z)), chain[0]);
        }
    }
    for i in 1..d {
        let z = marker_cells[d - 1 - i];
        b.emit(chain[i - 1], None, Command::Pop, Some((z, z)), chain[i]);
    }
    b.out.initial = start;
    b.out.finals = vec![accept];
    b.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::RunBudget;
    use crate::two_stack::run_gstsa;
    use crate::word::{for_each_index_word, tokenize};

    // a pushes A; b pushes B but only on top of an A; c pops either
    fn sighted() -> Gstsa {
        Gstsa::parse(
            "rank 2\nstate p init final\nstate r final\n\
             trans p a PUSH A A -> p\n\
             trans p b PUSH B B obs [A|] -> p\n\
             trans p c POP A A -> r\n\
             trans p c POP B B -> r\n\
             trans r c POP A A -> r\n\
             trans r c POP B B -> r\n",
        )
        .unwrap()
    }

    fn accepts(m: &Gstsa, w: &[String]) -> bool {
        let o = run_gstsa(m, w, &RunBudget::for_word(w.len(), m.rank.max(1)));
        assert!(!o.is_unknown());
        o.is_accept()
    }

    #[test]
    fn sighted_language_is_kept() {
        let m = sighted();
        let blind = eliminate_lookup_gstsa(&m);
        assert_eq!(blind.depth(), 0);
        // 2 + |Q|·|{A, B, Z1}|^2
        assert_eq!(blind.states.len(), 2 + 2 * 9);
        assert!(accepts(&m, &tokenize("abcc")));
        assert!(!accepts(&m, &tokenize("bc")));
        let letters = ["a", "b", "c"];
        for_each_index_word(3, 6, |w| {
            let w: Vec<String> = w.iter().map(|&i| letters[i].to_string()).collect();
            assert_eq!(accepts(&m, &w), accepts(&blind, &w), "{w:?}");
        });
    }

    #[test]
    fn blind_input_and_deeper_windows() {
        let mut m = Gstsa::new(2);
        m.add("q0", Some("a"), Command::Push, Some(("A", "B")), "q0");
        m.add("q0", Some("b"), Command::Move, Some(("A", "C")), "q1");
        m.add("q1", Some("c"), Command::Return, Some(("C", "D")), "q2");
        m.add("q2", Some("d"), Command::Pop, Some(("D", "B")), "q3");
        m.set_final("q3");
        let blind = eliminate_lookup_gstsa(&m);
        assert_eq!(blind.states.len(), 2 + 4);
        for w in ["abcd", "abc", "", "aabcd"] {
            let w = tokenize(w);
            assert_eq!(accepts(&m, &w), accepts(&blind, &w));
        }

        let mut deep = Gstsa::new(1);
        deep.add("q0", Some("a"), Command::Push, Some(("A", "A")), "q0");
        deep.add_observing("q0", Some("b"), Command::Pop, Some(("A", "A")), [&["A", "A"], &[]], "q1");
        deep.add("q1", Some("b"), Command::Pop, Some(("A", "A")), "q1");
        deep.set_final("q1");
        let blind = eliminate_lookup_gstsa(&deep);
        assert_eq!(blind.states.len(), 2 + 2 * 3usize.pow(4) + 2);
        for w in ["ab", "aabb", "aaabbb", "abab", "aab"] {
            let w = tokenize(w);
            assert_eq!(accepts(&deep, &w), accepts(&blind, &w), "{w:?}");
        }
    }
}
