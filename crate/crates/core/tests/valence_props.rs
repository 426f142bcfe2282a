use displace::search::{Outcome, RunBudget};
use displace::valence::{
    build_example1, eliminate_lookup_pda, eliminate_lookup_pda_detailed, pda_to_valence, run_lookup_pda,
    run_lookup_pda_with, run_valence, LookupPda, ValenceAutomaton,
};
use displace::word::for_each_index_word;
use proptest::prelude::*;

const LETTERS: [&str; 3] = ["a", "b", "c"];

fn words(size: usize, max_len: usize) -> Vec<Vec<&'static str>> {
    let mut out = Vec::new();
    for_each_index_word(size, max_len, |w| out.push(w.iter().map(|&i| LETTERS[i]).collect()));
    out
}

fn pda(p: &LookupPda, w: &[&str]) -> Outcome {
    run_lookup_pda(p, w, &RunBudget::for_word(w.len(), 1))
}

fn valence(m: &ValenceAutomaton, w: &[&str]) -> Outcome {
    run_valence(m, w, &RunBudget::for_word(w.len(), m.components))
}

#[test]
fn example1_language() {
    let m = build_example1();
    for w in words(3, 8) {
        let n = w.len() / 3;
        let expected = n >= 1 && w.concat() == format!("{}{}{}", "a".repeat(n), "b".repeat(n), "c".repeat(n));
        assert_eq!(valence(&m, &w), if expected { Outcome::Accept } else { Outcome::Reject }, "{w:?}");
    }
}

#[test]
fn example1_file_round_trip() {
    let m = build_example1();
    let back = ValenceAutomaton::parse(&m.to_text()).unwrap();
    for w in words(3, 6) {
        assert_eq!(valence(&m, &w), valence(&back, &w));
    }
}

type Spec = (usize, usize, Vec<usize>, bool, usize, usize);

// (from, input, window, push?, symbol, to) over two states and stack {A, B}
fn transition() -> impl Strategy<Value = Spec> {
    (
        0usize..2,
        0usize..2,
        prop::collection::vec(0usize..2, 0..=2),
        any::<bool>(),
        0usize..2,
        0usize..2,
    )
}

fn build(specs: &[Spec], finals: (bool, bool)) -> LookupPda {
    let mut p = LookupPda::new();
    let states = ["q0", "q1"];
    let stack = ["A", "B"];
    for (from, input, window, push, symbol, to) in specs {
        let window: Vec<&str> = window.iter().map(|&s| stack[s]).collect();
        let op = if *push {
            ("PUSH", stack[*symbol])
        } else {
            ("POP", window.last().copied().unwrap_or(stack[*symbol]))
        };
        p.add(states[*from], Some(LETTERS[*input]), &window, op, states[*to]);
    }
    if finals.0 {
        p.set_final("q0");
    }
    if finals.1 {
        p.set_final("q1");
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn elimination_and_bridge_keep_the_language(
        specs in prop::collection::vec(transition(), 1..=6),
        finals in (any::<bool>(), any::<bool>()),
    ) {
        let p = build(&specs, finals);
        p.validate().unwrap();
        let blind = eliminate_lookup_pda(&p);
        prop_assert_eq!(blind.depth(), 0);
        let v = pda_to_valence(&blind).unwrap();
        for w in words(2, 6) {
            let expected = pda(&p, &w);
            prop_assert!(!expected.is_unknown());
            prop_assert_eq!(pda(&blind, &w), expected, "{:?}", w);
            prop_assert_eq!(valence(&v, &w), expected, "{:?}", w);
        }
    }

    #[test]
    fn results_do_not_depend_on_transition_order(
        specs in prop::collection::vec(transition(), 1..=6),
        finals in (any::<bool>(), any::<bool>()),
        rotation in 0usize..6,
    ) {
        let p = build(&specs, finals);
        let mut q = p.clone();
        q.transitions.reverse();
        let r = rotation % q.transitions.len();
        q.transitions.rotate_left(r);
        for w in words(2, 5) {
            prop_assert_eq!(pda(&p, &w), pda(&q, &w));
        }
    }
}

#[test]
fn example1_is_order_independent() {
    let m = build_example1();
    let mut r = m.clone();
    r.edges.reverse();
    for w in words(3, 7) {
        assert_eq!(valence(&m, &w), valence(&r, &w));
    }
}

// Markers stay at the bottom of the stack in every product state.
#[test]
fn markers_stay_at_the_bottom() {
    let mut p = LookupPda::new();
    p.add("q0", Some("a"), &[], ("PUSH", "A"), "q0");
    p.add("q0", Some("c"), &[], ("PUSH", "C"), "q0");
    p.add("q0", Some("b"), &["A", "A"], ("POP", "A"), "q1");
    p.add("q1", Some("b"), &["C"], ("POP", "C"), "q1");
    p.add("q1", Some("b"), &["A"], ("POP", "A"), "q1");
    p.set_final("q1");
    let e = eliminate_lookup_pda_detailed(&p);
    assert_eq!(e.depth, 2);
    let mut visited = 0;
    for w in words(3, 6) {
        let original = pda(&p, &w);
        let budget = RunBudget::for_word(w.len(), 1);
        let outcome = run_lookup_pda_with(&e.pda, &w, &budget, |c| {
            if e.product_states[c.state].is_some() {
                visited += 1;
                assert_eq!(&c.stack[..e.depth], &e.markers[..]);
                assert!(c.stack[e.depth..].iter().all(|s| !e.markers.contains(s)));
            }
        });
        assert_eq!(outcome, original, "{w:?}");
    }
    assert!(visited > 0);
}
