use std::collections::HashMap;

/// Interned names: states, input letters, stack symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index of `name`, adding it if absent.
    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// `base`, or `base` with primes appended, whichever is not taken yet.
    pub fn fresh(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.index.contains_key(&name) {
            name.push('\'');
        }
        name
    }

    /// Maps each symbol of `word` to its index; `None` for unknown symbols.
    pub fn encode<S: AsRef<str>>(&self, word: &[S]) -> Option<Vec<usize>> {
        word.iter().map(|s| self.get(s.as_ref())).collect()
    }
}

impl<S: AsRef<str>> FromIterator<S> for SymbolTable {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut t = SymbolTable::new();
        for s in iter {
            t.intern(s.as_ref());
        }
        t
    }
}

/// Non-empty lines of a declaration file with `#` comments removed, paired
/// with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(n, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((n + 1, line))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_and_fresh_names() {
        let mut t: SymbolTable = ["q0", "q1"].into_iter().collect();
        assert_eq!(t.intern("q1"), 1);
        assert_eq!(t.intern("q2"), 2);
        assert_eq!(t.fresh("q0"), "q0'");
        assert_eq!(t.fresh("z"), "z");
        assert_eq!(t.encode(&["q2", "q0"]), Some(vec![2, 0]));
        assert_eq!(t.encode(&["x"]), None);
    }
}
