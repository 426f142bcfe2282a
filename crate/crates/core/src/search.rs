//! Budgeted nondeterministic search shared by all machine models.
//!
//! A run explores configurations depth-first and remembers every visited
//! one. [`Outcome::Reject`] is returned only when the whole reachable space
//! was explored without any branch being cut by the budget; otherwise a
//! failed search reports [`Outcome::Unknown`] with the dimension that cut it.

use std::fmt;
use std::hash::Hash;

use rustc_hash::FxHashMap;

/// Limits on a single run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunBudget {
    /// Distinct configurations remembered before giving up.
    pub max_configurations: usize,
    /// Largest total stack height (or register size) allowed.
    pub max_stack_height: usize,
    /// Longest run of consecutive moves that read no input.
    pub max_silent_steps: usize,
}

impl RunBudget {
    pub const DEFAULT_MAX_CONFIGURATIONS: usize = 200_000;

    /// Defaults for a word of length `len` on a machine of rank `k`:
    /// stack height `2(len + 2)k`, 200000 configurations, and a silent-step
    /// bound equal to the configuration bound.
    pub fn for_word(len: usize, k: usize) -> Self {
        RunBudget {
            max_configurations: Self::DEFAULT_MAX_CONFIGURATIONS,
            max_stack_height: 2 * (len + 2) * k.max(1),
            max_silent_steps: Self::DEFAULT_MAX_CONFIGURATIONS,
        }
    }

    /// Same budget with any `Some` field replaced.
    pub fn with_overrides(self, configs: Option<usize>, stack: Option<usize>, silent: Option<usize>) -> Self {
        RunBudget {
            max_configurations: configs.unwrap_or(self.max_configurations),
            max_stack_height: stack.unwrap_or(self.max_stack_height),
            max_silent_steps: silent.unwrap_or(self.max_silent_steps),
        }
    }
}

/// The budget dimension that stopped a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BudgetDimension {
    Configurations,
    StackHeight,
    SilentSteps,
}

impl fmt::Display for BudgetDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetDimension::Configurations => "max-configs",
            BudgetDimension::StackHeight => "max-stack",
            BudgetDimension::SilentSteps => "max-silent",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Accept,
    Reject,
    Unknown(BudgetDimension),
}

impl Outcome {
    pub fn is_accept(self) -> bool {
        self == Outcome::Accept
    }

    pub fn is_unknown(self) -> bool {
        matches!(self, Outcome::Unknown(_))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Accept => "accept",
            Outcome::Reject => "reject",
            Outcome::Unknown(_) => "unknown",
        })
    }
}

/// A nondeterministic machine run on a fixed input.
pub trait SearchSpace {
    type Config: Clone + Eq + Hash;

    fn initial(&self) -> Vec<Self::Config>;

    fn is_accepting(&self, c: &Self::Config) -> bool;

    /// Successors of `c`, each flagged `true` when the move read no input.
    fn successors(&self, c: &Self::Config, out: &mut Vec<(Self::Config, bool)>);

    fn stack_height(&self, c: &Self::Config) -> usize;
}

/// Runs a search; `visit` sees every configuration the first time it is
/// explored.
pub fn search_with<S: SearchSpace>(space: &S, budget: &RunBudget, mut visit: impl FnMut(&S::Config)) -> Outcome {
    // configuration -> smallest silent-run length it was reached with
    let mut seen: FxHashMap<S::Config, usize> = FxHashMap::default();
    let mut cut: Option<BudgetDimension> = None;
    let mut stack: Vec<(S::Config, usize)> = Vec::new();
    let mut next = Vec::new();

    for c in space.initial() {
        if space.stack_height(&c) > budget.max_stack_height {
            cut.get_or_insert(BudgetDimension::StackHeight);
            continue;
        }
        stack.push((c, 0));
    }
    while let Some((c, silent)) = stack.pop() {
        match seen.get(&c) {
            Some(&s) if s <= silent => continue,
            Some(_) => {}
            None => {
                if seen.len() >= budget.max_configurations {
                    cut.get_or_insert(BudgetDimension::Configurations);
                    continue;
                }
            }
        }
        seen.insert(c.clone(), silent);
        visit(&c);
        if space.is_accepting(&c) {
            return Outcome::Accept;
        }
        next.clear();
        space.successors(&c, &mut next);
        for (n, is_silent) in next.drain(..) {
            let s = if is_silent { silent + 1 } else { 0 };
            if s > budget.max_silent_steps {
                cut.get_or_insert(BudgetDimension::SilentSteps);
                continue;
            }
            if space.stack_height(&n) > budget.max_stack_height {
                cut.get_or_insert(BudgetDimension::StackHeight);
                continue;
            }
            stack.push((n, s));
        }
    }
    match cut {
        Some(d) => Outcome::Unknown(d),
        None => Outcome::Reject,
    }
}

pub fn search<S: SearchSpace>(space: &S, budget: &RunBudget) -> Outcome {
    search_with(space, budget, |_| {})
}

/// Runs a search and, on acceptance, returns the configurations along the
/// accepting path, initial configuration first.
pub fn search_trace<S: SearchSpace>(space: &S, budget: &RunBudget) -> (Outcome, Option<Vec<S::Config>>) {
    let mut seen: FxHashMap<S::Config, (usize, Option<S::Config>)> = FxHashMap::default();
    let mut cut: Option<BudgetDimension> = None;
    let mut stack: Vec<(S::Config, usize, Option<S::Config>)> = Vec::new();
    let mut next = Vec::new();

    for c in space.initial() {
        if space.stack_height(&c) > budget.max_stack_height {
            cut.get_or_insert(BudgetDimension::StackHeight);
            continue;
        }
        stack.push((c, 0, None));
    }
    while let Some((c, silent, parent)) = stack.pop() {
        match seen.get(&c) {
            Some(&(s, _)) if s <= silent => continue,
            Some(_) => {}
            None => {
                if seen.len() >= budget.max_configurations {
                    cut.get_or_insert(BudgetDimension::Configurations);
                    continue;
                }
            }
        }
        seen.insert(c.clone(), (silent, parent));
        if space.is_accepting(&c) {
            let mut path = vec![c.clone()];
            let mut cur = c;
            while let Some((_, Some(p))) = seen.get(&cur) {
                path.push(p.clone());
                cur = p.clone();
                // a re-explored configuration may have been re-parented
                // into a loop; no usable trace then
                if path.len() > seen.len() {
                    return (Outcome::Accept, None);
                }
            }
            path.reverse();
            return (Outcome::Accept, Some(path));
        }
        next.clear();
        space.successors(&c, &mut next);
        for (n, is_silent) in next.drain(..) {
            let s = if is_silent { silent + 1 } else { 0 };
            if s > budget.max_silent_steps {
                cut.get_or_insert(BudgetDimension::SilentSteps);
                continue;
            }
            if space.stack_height(&n) > budget.max_stack_height {
                cut.get_or_insert(BudgetDimension::StackHeight);
                continue;
            }
            stack.push((n, s, Some(c.clone())));
        }
    }
    let outcome = match cut {
        Some(d) => Outcome::Unknown(d),
        None => Outcome::Reject,
    };
    (outcome, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    // counter machine: from n go to n+1 silently or, at n == target, read
    // the single input letter and accept
    struct Counter {
        target: usize,
    }

    impl SearchSpace for Counter {
        type Config = (usize, bool);

        fn initial(&self) -> Vec<(usize, bool)> {
            vec![(0, false)]
        }

        fn is_accepting(&self, c: &(usize, bool)) -> bool {
            c.1
        }

        fn successors(&self, c: &(usize, bool), out: &mut Vec<((usize, bool), bool)>) {
            if c.1 {
                return;
            }
            out.push(((c.0 + 1, false), true));
            if c.0 == self.target {
                out.push(((c.0, true), false));
            }
        }

        fn stack_height(&self, c: &(usize, bool)) -> usize {
            c.0
        }
    }

    #[test]
    fn outcomes_follow_the_binding_dimension() {
        let roomy = RunBudget {
            max_configurations: 100,
            max_stack_height: 1000,
            max_silent_steps: 1000,
        };
        assert_eq!(search(&Counter { target: 5 }, &roomy), Outcome::Accept);
        let low = RunBudget {
            max_stack_height: 3,
            ..roomy
        };
        assert_eq!(
            search(&Counter { target: 5 }, &low),
            Outcome::Unknown(BudgetDimension::StackHeight)
        );
        let quiet = RunBudget {
            max_silent_steps: 2,
            ..roomy
        };
        assert_eq!(
            search(&Counter { target: 5 }, &quiet),
            Outcome::Unknown(BudgetDimension::SilentSteps)
        );
        let few = RunBudget {
            max_configurations: 3,
            ..roomy
        };
        assert_eq!(
            search(&Counter { target: 5 }, &few),
            Outcome::Unknown(BudgetDimension::Configurations)
        );
    }

    #[test]
    fn trace_follows_parents() {
        let roomy = RunBudget {
            max_configurations: 100,
            max_stack_height: 1000,
            max_silent_steps: 1000,
        };
        let (o, path) = search_trace(&Counter { target: 3 }, &roomy);
        assert_eq!(o, Outcome::Accept);
        let path = path.unwrap();
        assert_eq!(path.first(), Some(&(0, false)));
        assert_eq!(path.last(), Some(&(3, true)));
        assert_eq!(path.len(), 5);
    }

    #[test]
    fn defaults_scale_with_word_and_rank() {
        let b = RunBudget::for_word(10, 2);
        assert_eq!(b.max_stack_height, 48);
        assert_eq!(b.max_configurations, 200_000);
        let o = b.with_overrides(Some(5), None, Some(7));
        assert_eq!((o.max_configurations, o.max_stack_height, o.max_silent_steps), (5, 48, 7));
    }
}
