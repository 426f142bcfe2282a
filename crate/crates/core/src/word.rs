//! Tokenizing and rendering words over symbol alphabets.
//!
//! Words are written either as bare strings where every character is one
//! symbol (`abba`), or as whitespace-separated tokens when symbols have
//! more than one character (`x^1 x'1`). A token shaped like a multibracket
//! letter (`name^j` or `name'j`) is always kept whole; any other token is
//! split into characters.

/// Returns true when `token` looks like `x^3` or `x'3`.
pub fn is_bracket_token(token: &str) -> bool {
    let Some(pos) = token.rfind(['^', '\'']) else {
        return false;
    };
    let (name, level) = (&token[..pos], &token[pos + 1..]);
    !name.is_empty()
        && !level.is_empty()
        && level.bytes().all(|b| b.is_ascii_digit())
        && !name.contains(['^', '\''])
        && !name.chars().any(char::is_whitespace)
}

/// One raw piece of a word: a symbol, or the digit `1` standing alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Piece {
    Symbol(String),
    One,
}

pub(crate) fn pieces(text: &str) -> Vec<Piece> {
    let mut out = Vec::new();
    for token in text.split_whitespace() {
        if is_bracket_token(token) {
            out.push(Piece::Symbol(token.to_string()));
        } else {
            for ch in token.chars() {
                if ch == '1' {
                    out.push(Piece::One);
                } else {
                    out.push(Piece::Symbol(ch.to_string()));
                }
            }
        }
    }
    out
}

/// Splits a word written on the command line or in a file into symbols.
/// The digit `1` is kept as an ordinary symbol here; callers that forbid it
/// reject it when checking the alphabet.
pub fn tokenize(text: &str) -> Vec<String> {
    pieces(text)
        .into_iter()
        .map(|p| match p {
            Piece::Symbol(s) => s,
            Piece::One => "1".to_string(),
        })
        .collect()
}

/// Renders a word so that [`tokenize`] reads it back unchanged.
pub fn render<S: AsRef<str>>(word: &[S]) -> String {
    if word.iter().all(|s| s.as_ref().chars().count() == 1) {
        word.iter().map(|s| s.as_ref()).collect()
    } else {
        word.iter()
            .map(|s| s.as_ref())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// All words over `alphabet` of length at most `max_len`, in
/// length-lexicographic order (shorter first, then by alphabet order).
pub fn words_up_to<T: Clone>(alphabet: &[T], max_len: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len().max(1));
        for w in &layer {
            for a in alphabet {
                let mut v = w.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Visits every word over `alphabet` (given as indices `0..size`) of length
/// at most `max_len` without materializing the whole set.
pub fn for_each_index_word(size: usize, max_len: usize, mut f: impl FnMut(&[usize])) {
    if size == 0 {
        f(&[]);
        return;
    }
    let mut word: Vec<usize> = Vec::with_capacity(max_len);
    for len in 0..=max_len {
        word.clear();
        word.resize(len, 0);
        loop {
            f(&word);
            let mut carry = true;
            let mut i = len;
            while carry && i > 0 {
                i -= 1;
                word[i] += 1;
                if word[i] == size {
                    word[i] = 0;
                } else {
                    carry = false;
                }
            }
            if carry {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_tokens_stay_whole() {
        assert_eq!(tokenize("x^1 x'1 x^2"), vec!["x^1", "x'1", "x^2"]);
        assert_eq!(tokenize("abba"), vec!["a", "b", "b", "a"]);
        assert!(!is_bracket_token("x^"));
        assert!(!is_bracket_token("^2"));
    }

    #[test]
    fn render_round_trips() {
        for text in ["abba", "x^1 x'1", ""] {
            assert_eq!(render(&tokenize(text)), text);
        }
    }

    #[test]
    fn index_words_are_counted_and_ordered() {
        let mut seen = Vec::new();
        for_each_index_word(2, 3, |w| seen.push(w.to_vec()));
        assert_eq!(seen.len(), 1 + 2 + 4 + 8);
        assert_eq!(seen[0], Vec::<usize>::new());
        assert_eq!(seen[1], vec![0]);
        assert_eq!(seen[3], vec![0, 0]);
        assert_eq!(seen.last().unwrap(), &vec![1, 1, 1]);
        let direct = words_up_to(&[0usize, 1], 3);
        assert_eq!(direct, seen);
    }
}
