//! Accepting computations of generalized machines and the stack invariants
//! every computation keeps.

use super::{apply, gstsa_op, gstsa_step, Bounds, Command, Configuration, Gstsa};
use crate::search::RunBudget;

pub const DEFAULT_COMPUTATION_CAP: usize = 1000;

/// A run: the fired transitions and the configurations around them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Computation {
    pub transitions: Vec<usize>,
    /// One more than `transitions`, starting with the initial configuration.
    pub configurations: Vec<Configuration>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputationSet {
    pub computations: Vec<Computation>,
    /// Set when the cap or the budget cut the enumeration short.
    pub truncated: bool,
}

struct Frame {
    config: Configuration,
    next: usize,
    silent: usize,
}

/// Every accepting computation of `m` on `w`, up to `cap` of them, by
/// depth-first search over transition sequences. The budget bounds the
/// number of explored steps, the stack height and runs of silent steps.
pub fn enumerate_accepting_computations<S: AsRef<str>>(
    m: &Gstsa,
    w: &[S],
    budget: &RunBudget,
    cap: usize,
) -> ComputationSet {
    let mut set = ComputationSet {
        computations: Vec::new(),
        truncated: false,
    };
    let Some(word) = m.alphabet.encode(w) else {
        return set;
    };
    let mut out = vec![Vec::new(); m.states.len()];
    for (i, t) in m.transitions.iter().enumerate() {
        out[t.from].push(i);
    }
    let accepting = |c: &Configuration| {
        c.position == word.len() && c.stack1.is_empty() && c.stack2.is_empty() && m.finals.contains(&c.state)
    };
    let record = |frames: &[Frame], path: &[usize], set: &mut ComputationSet| {
        set.computations.push(Computation {
            transitions: path.to_vec(),
            configurations: frames.iter().map(|f| f.config.clone()).collect(),
        });
        set.computations.len() >= cap
    };

    let mut frames = vec![Frame {
        config: Configuration::initial(m.initial),
        next: 0,
        silent: 0,
    }];
    let mut path: Vec<usize> = Vec::new();
    let mut steps = 1;
    if accepting(&frames[0].config) && record(&frames, &path, &mut set) {
        set.truncated = true;
        return set;
    }
    while let Some(top) = frames.last_mut() {
        let Some(&ti) = out[top.config.state].get(top.next) else {
            frames.pop();
            path.pop();
            continue;
        };
        top.next += 1;
        let t = &m.transitions[ti];
        let Some(n) = gstsa_step(m, &word, &top.config, t) else {
            continue;
        };
        let silent = if t.input.is_none() { top.silent + 1 } else { 0 };
        if silent > budget.max_silent_steps || n.height() > budget.max_stack_height {
            set.truncated = true;
            continue;
        }
        if steps >= budget.max_configurations {
            set.truncated = true;
            break;
        }
        steps += 1;
        let accepted = accepting(&n);
        path.push(ti);
        frames.push(Frame {
            config: n,
            next: 0,
            silent,
        });
        if accepted && record(&frames, &path, &mut set) {
            set.truncated = true;
            break;
        }
    }
    set
}

/// Whether the consecutive transitions, fired from empty stacks and
/// ignoring input, end with empty stacks.
pub fn is_identity_preserving(m: &Gstsa, transitions: &[usize]) -> bool {
    let Some(&first) = transitions.first() else {
        return true;
    };
    let mut c = Configuration::initial(m.transitions[first].from);
    for &ti in transitions {
        let t = &m.transitions[ti];
        if t.from != c.state {
            return false;
        }
        match apply(gstsa_op(t), Bounds::Rank(m.rank), &c) {
            Some((s1, s2)) => {
                c.stack1 = s1;
                c.stack2 = s2;
                c.state = t.to;
            }
            None => return false,
        }
    }
    c.stack1.is_empty() && c.stack2.is_empty()
}

/// Counter parity and range in a configuration of a rank-`k` machine:
/// odd counters up to `2k − 1` on stack 1; on stack 2 either 1 or an even
/// counter up to `2k − 2`.
pub fn check_counter_discipline(c: &Configuration, k: usize) -> bool {
    c.stack1.iter().all(|&(_, n)| n % 2 == 1 && n < 2 * k)
        && c.stack2.iter().all(|&(_, n)| n == 1 || (n % 2 == 0 && n < 2 * k - 1))
}

/// Total height changes by +2 on PUSH, −2 on POP and 0 otherwise.
pub fn check_stack_balance(before: &Configuration, after: &Configuration, command: Command) -> bool {
    let delta = after.height() as isize - before.height() as isize;
    delta
        == match command {
            Command::Push => 2,
            Command::Pop => -2,
            Command::Move | Command::Return | Command::Keep => 0,
        }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::two_stack::{build_copy_machine, psi_image, stsa_to_gstsa};
    use crate::word::tokenize;

    #[test]
    fn copy_machine_computations() {
        let g = stsa_to_gstsa(&build_copy_machine());
        let w = tokenize("abab");
        let set = enumerate_accepting_computations(&g, &w, &RunBudget::for_word(4, 2), DEFAULT_COMPUTATION_CAP);
        assert!(!set.truncated);
        assert!(!set.computations.is_empty());
        for c in &set.computations {
            assert!(is_identity_preserving(&g, &c.transitions));
            assert!(super::super::is_k_garland(&psi_image(&g, &c.transitions), 2));
            for (i, &t) in c.transitions.iter().enumerate() {
                let cmd = g.transitions[t].command;
                assert!(check_stack_balance(&c.configurations[i], &c.configurations[i + 1], cmd));
                assert!(check_counter_discipline(&c.configurations[i + 1], 2));
            }
        }
        let none = enumerate_accepting_computations(&g, &tokenize("abba"), &RunBudget::for_word(4, 2), 10);
        assert!(none.computations.is_empty());
    }

    #[test]
    fn empty_computation() {
        let mut m = Gstsa::new(1);
        m.set_final("q0");
        let set = enumerate_accepting_computations::<&str>(&m, &[], &RunBudget::for_word(0, 1), 10);
        assert_eq!(set.computations.len(), 1);
        assert!(set.computations[0].transitions.is_empty());
        assert!(is_identity_preserving(&m, &[]));
    }

    #[test]
    fn cap_truncates() {
        let g = stsa_to_gstsa(&build_copy_machine());
        let set = enumerate_accepting_computations::<&str>(&g, &[], &RunBudget::for_word(0, 2), 1);
        assert_eq!(set.computations.len(), 1);
        assert!(set.truncated);
    }
}
