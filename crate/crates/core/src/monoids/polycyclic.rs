use std::fmt;
use std::hash::Hash;

/// A generator of a polycyclic monoid: push or pop of one stack symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator<T> {
    Push(T),
    Pop(T),
}

impl<T> Generator<T> {
    pub fn symbol(&self) -> &T {
        match self {
            Generator::Push(t) | Generator::Pop(t) => t,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Generator<U> {
        match self {
            Generator::Push(t) => Generator::Push(f(t)),
            Generator::Pop(t) => Generator::Pop(f(t)),
        }
    }
}

/// An element of the polycyclic monoid with zero, in normal form.
///
/// A non-zero element is the partial stack map "pop `pops` (top first),
/// then push `pushes` (bottom first)". Composition is read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polycyclic<T> {
    Zero,
    Elem { pops: Vec<T>, pushes: Vec<T> },
}

impl<T> Default for Polycyclic<T> {
    fn default() -> Self {
        Polycyclic::Elem {
            pops: Vec::new(),
            pushes: Vec::new(),
        }
    }
}

impl<T: Clone + Eq> Polycyclic<T> {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn push(t: T) -> Self {
        Polycyclic::Elem {
            pops: Vec::new(),
            pushes: vec![t],
        }
    }

    pub fn pop(t: T) -> Self {
        Polycyclic::Elem {
            pops: vec![t],
            pushes: Vec::new(),
        }
    }

    pub fn generator(g: Generator<T>) -> Self {
        match g {
            Generator::Push(t) => Self::push(t),
            Generator::Pop(t) => Self::pop(t),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Polycyclic::Elem { pops, pushes } if pops.is_empty() && pushes.is_empty())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Polycyclic::Zero)
    }

    /// Size of the normal form, `|pops| + |pushes|`; zero has size 0.
    pub fn size(&self) -> usize {
        match self {
            Polycyclic::Zero => 0,
            Polycyclic::Elem { pops, pushes } => pops.len() + pushes.len(),
        }
    }

    pub fn pushes(&self) -> &[T] {
        match self {
            Polycyclic::Zero => &[],
            Polycyclic::Elem { pushes, .. } => pushes,
        }
    }

    pub fn pops(&self) -> &[T] {
        match self {
            Polycyclic::Zero => &[],
            Polycyclic::Elem { pops, .. } => pops,
        }
    }

    /// The product `self · other`.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.multiply_in_place(other);
        out
    }

    pub fn multiply_in_place(&mut self, other: &Self) {
        let (Polycyclic::Elem { pops, pushes }, Polycyclic::Elem { pops: pops2, pushes: pushes2 }) =
            (&mut *self, other)
        else {
            *self = Polycyclic::Zero;
            return;
        };
        let mut consumed = 0;
        for p in pops2 {
            match pushes.last() {
                Some(top) if top == p => {
                    pushes.pop();
                    consumed += 1;
                }
                Some(_) => {
                    *self = Polycyclic::Zero;
                    return;
                }
                None => break,
            }
        }
        pops.extend(pops2[consumed..].iter().cloned());
        pushes.extend(pushes2.iter().cloned());
    }

    /// Multiplies by a single generator.
    pub fn apply(&mut self, g: &Generator<T>) {
        let Polycyclic::Elem { pops, pushes } = self else {
            return;
        };
        match g {
            Generator::Push(t) => pushes.push(t.clone()),
            Generator::Pop(t) => match pushes.last() {
                Some(top) if top == t => {
                    pushes.pop();
                }
                Some(_) => *self = Polycyclic::Zero,
                None => pops.push(t.clone()),
            },
        }
    }

    pub fn map<U: Clone + Eq>(&self, f: impl Fn(&T) -> U) -> Polycyclic<U> {
        match self {
            Polycyclic::Zero => Polycyclic::Zero,
            Polycyclic::Elem { pops, pushes } => Polycyclic::Elem {
                pops: pops.iter().map(&f).collect(),
                pushes: pushes.iter().map(&f).collect(),
            },
        }
    }
}

/// Left-to-right product of a generator word.
pub fn pc_reduce_word<T: Clone + Eq>(word: &[Generator<T>]) -> Polycyclic<T> {
    let mut acc = Polycyclic::identity();
    for g in word {
        acc.apply(g);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// The pairs `(i, j)`, `i < j`, of positions that cancel when a generator
/// word reduces to the identity. `None` if the word is not the identity.
pub fn contraction_pairs<T: Eq>(word: &[Generator<T>]) -> Option<Vec<(usize, usize)>> {
    let mut stack: Vec<usize> = Vec::new();
    let mut pairs = Vec::with_capacity(word.len() / 2);
    for (i, g) in word.iter().enumerate() {
        match g {
            Generator::Push(_) => stack.push(i),
            Generator::Pop(t) => {
                let open = stack.pop()?;
                if word[open].symbol() != t {
                    return None;
                }
                pairs.push((open, i));
            }
        }
    }
    stack.is_empty().then_some(pairs)
}

/// Component-wise pair of polycyclic elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductElement<T> {
    pub first: Polycyclic<T>,
    pub second: Polycyclic<T>,
}

impl<T: Clone + Eq> ProductElement<T> {
    pub fn identity() -> Self {
        ProductElement {
            first: Polycyclic::identity(),
            second: Polycyclic::identity(),
        }
    }

    pub fn new(first: Polycyclic<T>, second: Polycyclic<T>) -> Self {
        ProductElement { first, second }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        ProductElement {
            first: self.first.multiply(&other.first),
            second: self.second.multiply(&other.second),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.first.is_identity() && self.second.is_identity()
    }

    pub fn has_zero(&self) -> bool {
        self.first.is_zero() || self.second.is_zero()
    }
}

impl<T: fmt::Display> fmt::Display for Generator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Push(t) => write!(f, "push:{t}"),
            Generator::Pop(t) => write!(f, "pop:{t}"),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Polycyclic<T> {
    /// Renders the normal form as a generator sequence, `1` for the
    /// identity and `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polycyclic::Zero => f.write_str("0"),
            Polycyclic::Elem { pops, pushes } if pops.is_empty() && pushes.is_empty() => {
                f.write_str("1")
            }
            Polycyclic::Elem { pops, pushes } => {
                let parts: Vec<String> = pops
                    .iter()
                    .map(|t| format!("pop:{t}"))
                    .chain(pushes.iter().map(|t| format!("push:{t}")))
                    .collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl<T: fmt::Display> fmt::Display for ProductElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.first, self.second)
    }
}
