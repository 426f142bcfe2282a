//! Brute-force decision of `D(X)` straight from the partition definition.

use super::{BracketLetter, MonoidError, RankedAlphabet};

pub const DEFAULT_PARTITION_CAP: usize = 12;

/// Condition 1 for one block: `i_1 < j_1 < … < i_r < j_r` with `r = ρ(x)`,
/// `w[i_l] = x^l` and `w[j_l] = x'l` for a single `x`.
fn block_labels_ok(alphabet: &RankedAlphabet, w: &[BracketLetter], block: &[usize]) -> bool {
    if block.is_empty() || !block.len().is_multiple_of(2) || block.windows(2).any(|p| p[0] >= p[1]) {
        return false;
    }
    let Some(&first) = block.first() else {
        return false;
    };
    let Some(head) = w.get(first) else {
        return false;
    };
    let x = head.symbol;
    if block.len() != 2 * alphabet.arity(x) {
        return false;
    }
    block.chunks(2).enumerate().all(|(l, pair)| {
        w.get(pair[0]) == Some(&BracketLetter::open(x, l + 1))
            && w.get(pair[1]) == Some(&BracketLetter::close(x, l + 1))
    })
}

/// Condition 2 for two blocks, each sorted ascending as
/// `i_1 < j_1 < … < i_r < j_r`.
pub fn blocks_compatible(h: &[usize], g: &[usize]) -> bool {
    let (r, s) = (h.len() / 2, g.len() / 2);
    let i = |b: &[usize], l: usize| b[2 * (l - 1)];
    let j = |b: &[usize], l: usize| b[2 * (l - 1) + 1];

    // one entirely before the other
    if j(h, r) < i(g, 1) || j(g, s) < i(h, 1) {
        return true;
    }
    // one inside a gap of the other
    if (1..r).any(|l| j(h, l) < i(g, 1) && j(g, s) < i(h, l + 1)) {
        return true;
    }
    if (1..s).any(|l| j(g, l) < i(h, 1) && j(h, r) < i(g, l + 1)) {
        return true;
    }
    // every link of one inside some link of the other
    let inside = |a: &[usize], na: usize, b: &[usize], nb: usize| {
        (1..=na).all(|l| (1..=nb).any(|m| i(b, m) < i(a, l) && j(a, l) < j(b, m)))
    };
    inside(h, r, g, s) || inside(g, s, h, r)
}

/// Checks a proposed partition of `Pos(w)` against both conditions.
pub fn check_partition(alphabet: &RankedAlphabet, w: &[BracketLetter], blocks: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; w.len()];
    for b in blocks {
        if !block_labels_ok(alphabet, w, b) {
            return false;
        }
        for &p in b {
            if seen[p] {
                return false;
            }
            seen[p] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return false;
    }
    for (n, h) in blocks.iter().enumerate() {
        for g in &blocks[n + 1..] {
            if !blocks_compatible(h, g) {
                return false;
            }
        }
    }
    true
}

struct Search<'a> {
    alphabet: &'a RankedAlphabet,
    w: &'a [BracketLetter],
    used: Vec<bool>,
    blocks: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self) -> bool {
        let Some(start) = self.used.iter().position(|u| !u) else {
            return true;
        };
        // the smallest free position opens a new block, so it must be x^1
        let head = self.w[start];
        if head.barred || head.level != 1 {
            return false;
        }
        let arity = self.alphabet.arity(head.symbol);
        let mut block = vec![start];
        self.used[start] = true;
        let found = self.extend(&mut block, head.symbol, arity);
        self.used[start] = false;
        found
    }

    // Grows `block` one position at a time following the label pattern
    // x^1 x'1 x^2 … x'r, then checks it against the blocks chosen so far.
    fn extend(&mut self, block: &mut Vec<usize>, x: usize, arity: usize) -> bool {
        if block.len() == 2 * arity {
            if !self.blocks.iter().all(|g| blocks_compatible(block, g)) {
                return false;
            }
            self.blocks.push(block.clone());
            let found = self.run();
            if !found {
                self.blocks.pop();
            }
            return found;
        }
        let n = block.len();
        let level = n / 2 + 1;
        let wanted = if n.is_multiple_of(2) {
            BracketLetter::open(x, level)
        } else {
            BracketLetter::close(x, level)
        };
        let after = *block.last().unwrap() + 1;
        for p in after..self.w.len() {
            if self.used[p] || self.w[p] != wanted {
                continue;
            }
            self.used[p] = true;
            block.push(p);
            let found = self.extend(block, x, arity);
            block.pop();
            self.used[p] = false;
            if found {
                return true;
            }
        }
        false
    }
}

/// Searches for a partition witnessing `w ∈ D(X)`.
pub fn find_partition(
    alphabet: &RankedAlphabet,
    w: &[BracketLetter],
    cap: usize,
) -> Result<Option<Vec<Vec<usize>>>, MonoidError> {
    if w.len() > cap {
        return Err(MonoidError::CapExceeded { len: w.len(), cap });
    }
    if !w.len().is_multiple_of(2) || w.iter().any(|l| !alphabet.contains(l)) {
        return Ok(None);
    }
    let mut search = Search {
        alphabet,
        w,
        used: vec![false; w.len()],
        blocks: Vec::new(),
    };
    Ok(search.run().then_some(search.blocks))
}

/// `w ∈ D(X)` decided by exhaustive partition search.
pub fn is_dyck_by_partition(alphabet: &RankedAlphabet, w: &[BracketLetter], cap: usize) -> Result<bool, MonoidError> {
    find_partition(alphabet, w, cap).map(|p| p.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair() {
        let x = RankedAlphabet::new([("x", 1)]).unwrap();
        let w = x.parse_word("x^1 x'1").unwrap();
        assert_eq!(find_partition(&x, &w, 12).unwrap(), Some(vec![vec![0, 1]]));
    }

    #[test]
    fn crossing_links_have_no_partition() {
        let x = RankedAlphabet::new([("x", 2)]).unwrap();
        let w = x.parse_word("x^1 x^2 x'1 x'2").unwrap();
        assert_eq!(is_dyck_by_partition(&x, &w, 12), Ok(false));
    }

    #[test]
    fn odd_length_and_cap() {
        let x = RankedAlphabet::new([("x", 1)]).unwrap();
        let w = x.parse_word("x^1 x'1 x^1").unwrap();
        assert_eq!(is_dyck_by_partition(&x, &w, 12), Ok(false));
        let long = vec![BracketLetter::open(0, 1); 14];
        assert_eq!(
            is_dyck_by_partition(&x, &long, 12),
            Err(MonoidError::CapExceeded { len: 14, cap: 12 })
        );
    }

    #[test]
    fn two_chains_interleaved_in_gaps() {
        // x-chain 0,1,4,5 with a second x-chain sitting in its gap
        let x = RankedAlphabet::new([("x", 2)]).unwrap();
        let w = x.parse_word("x^1 x'1 x^1 x'1 x^2 x'2 x^2 x'2").unwrap();
        let p = find_partition(&x, &w, 12).unwrap().unwrap();
        assert!(check_partition(&x, &w, &p));
    }

    #[test]
    fn check_partition_rejects_bad_blocks() {
        let x = RankedAlphabet::new([("x", 2)]).unwrap();
        let w = x.parse_word("x^1 x'1 x^2 x'2").unwrap();
        assert!(check_partition(&x, &w, &[vec![0, 1, 2, 3]]));
        assert!(!check_partition(&x, &w, &[vec![0, 1], vec![2, 3]]));
        assert!(!check_partition(&x, &w, &[vec![0, 1, 2]]));
    }
}
