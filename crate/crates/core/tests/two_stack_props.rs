use displace::search::{Outcome, RunBudget};
use displace::two_stack::{
    build_copy_machine, check_counter_discipline, check_stack_balance, desugar_keep_gstsa, desugar_keep_stsa,
    eliminate_lookup_gstsa, enumerate_accepting_computations, is_identity_preserving, is_k_garland, psi_image,
    run_gstsa, run_gstsa_with, run_stsa, stsa_to_gstsa, Command, Gstsa, Stsa, DEFAULT_COMPUTATION_CAP,
};
use displace::word::for_each_index_word;

const ANBNCNDN: &str = "rank 2
state q0 init
state q1
state q2
state q3 final
trans q0 a PUSH A B -> q0
trans q0 _ KEEP -> q1
trans q1 b MOVE A C -> q1
trans q1 _ KEEP -> q2
trans q2 c RETURN C D -> q2
trans q2 _ KEEP -> q3
trans q3 d POP D B -> q3
";

const WW: &str = "rank 2
state q0 init
state q1
state q2
state q3 final
trans q0 a PUSH A P -> q0
trans q0 b PUSH B Q -> q0
trans q0 _ KEEP -> q1
trans q1 _ MOVE A A2 -> q1
trans q1 _ MOVE B B2 -> q1
trans q1 _ KEEP -> q2
trans q2 a RETURN A2 A3 -> q2
trans q2 b RETURN B2 B3 -> q2
trans q2 _ KEEP -> q3
trans q3 _ POP A3 P -> q3
trans q3 _ POP B3 Q -> q3
";

fn machines() -> Vec<(&'static str, Gstsa, Vec<&'static str>)> {
    vec![
        ("copy", stsa_to_gstsa(&build_copy_machine()), vec!["a", "b"]),
        ("anbncndn", Gstsa::parse(ANBNCNDN).unwrap(), vec!["a", "b", "c", "d"]),
        ("ww", Gstsa::parse(WW).unwrap(), vec!["a", "b"]),
    ]
}

fn words<'a>(letters: &[&'a str], max_len: usize) -> Vec<Vec<&'a str>> {
    let mut out = Vec::new();
    for_each_index_word(letters.len(), max_len, |w| out.push(w.iter().map(|&i| letters[i]).collect()));
    out
}

fn stsa(m: &Stsa, w: &[&str]) -> Outcome {
    run_stsa(m, w, &RunBudget::for_word(w.len(), m.rank))
}

fn gstsa(m: &Gstsa, w: &[&str]) -> Outcome {
    run_gstsa(m, w, &RunBudget::for_word(w.len(), m.rank))
}

fn is_copy_word(w: &[&str]) -> bool {
    // a^m b^n a^m b^n
    let s = w.concat();
    let half = s.len() / 2;
    s.len() % 2 == 0 && s[..half] == s[half..] && !s[..half].contains("ba")
}

#[test]
fn copy_machine_language() {
    let m = build_copy_machine();
    for w in words(&["a", "b"], 10) {
        let expected = if is_copy_word(&w) { Outcome::Accept } else { Outcome::Reject };
        assert_eq!(stsa(&m, &w), expected, "{w:?}");
    }
}

#[test]
fn embedding_and_desugaring_keep_languages() {
    let m = build_copy_machine();
    let g = stsa_to_gstsa(&m);
    let plain = desugar_keep_stsa(&m);
    assert!(plain.transitions.iter().all(|t| t.command != Command::Keep));
    for w in words(&["a", "b"], 10) {
        let expected = stsa(&m, &w);
        assert_eq!(gstsa(&g, &w), expected, "{w:?}");
        assert_eq!(stsa(&plain, &w), expected, "{w:?}");
    }
}

#[test]
fn hand_built_machines_languages() {
    let ms = machines();
    let (abcd, ww) = (&ms[1].1, &ms[2].1);
    for w in words(&["a", "b", "c", "d"], 8) {
        let s = w.concat();
        let n = s.len() / 4;
        let expected = s == format!("{}{}{}{}", "a".repeat(n), "b".repeat(n), "c".repeat(n), "d".repeat(n));
        assert_eq!(gstsa(abcd, &w).is_accept(), expected, "{s}");
    }
    for w in words(&["a", "b"], 8) {
        let s = w.concat();
        let half = s.len() / 2;
        let expected = s.len() % 2 == 0 && s[..half] == s[half..];
        assert_eq!(gstsa(ww, &w).is_accept(), expected, "{s}");
    }
}

#[test]
fn gstsa_conversions_keep_languages() {
    for (name, m, letters) in machines() {
        let plain = desugar_keep_gstsa(&m);
        assert!(plain.transitions.iter().all(|t| t.command != Command::Keep), "{name}");
        let blind = eliminate_lookup_gstsa(&m);
        for w in words(&letters, 6) {
            let expected = gstsa(&m, &w);
            assert!(!expected.is_unknown());
            assert_eq!(gstsa(&plain, &w), expected, "{name} {w:?}");
            assert_eq!(gstsa(&blind, &w), expected, "{name} {w:?}");
        }
    }
}

#[test]
fn accepting_computations_are_garlands() {
    for (name, m, letters) in machines() {
        let mut accepted = 0;
        for w in words(&letters, 8) {
            let set = enumerate_accepting_computations(&m, &w, &RunBudget::for_word(w.len(), m.rank), DEFAULT_COMPUTATION_CAP);
            assert!(!set.truncated, "{name} {w:?}");
            for c in &set.computations {
                accepted += 1;
                assert!(is_k_garland(&psi_image(&m, &c.transitions), m.rank), "{name} {w:?}");
                assert!(is_identity_preserving(&m, &c.transitions));
                for (i, &t) in c.transitions.iter().enumerate() {
                    let (before, after) = (&c.configurations[i], &c.configurations[i + 1]);
                    assert!(check_stack_balance(before, after, m.transitions[t].command));
                    assert!(check_counter_discipline(after, m.rank));
                }
            }
        }
        assert!(accepted > 0, "{name}");
    }
}

#[test]
fn visited_configurations_keep_counter_discipline() {
    for (name, m, letters) in machines() {
        for w in words(&letters, 7) {
            let budget = RunBudget::for_word(w.len(), m.rank);
            run_gstsa_with(&m, &w, &budget, |c| assert!(check_counter_discipline(c, m.rank), "{name} {w:?}"));
        }
    }
}

// Garlands over the stack image of consecutive transition chains come from
// identity-preserving chains.
#[test]
fn garland_chains_preserve_identity() {
    fn extend(m: &Gstsa, chain: &mut Vec<usize>, image_len: usize, found: &mut (usize, usize)) {
        let image = psi_image(m, chain);
        if !chain.is_empty() && is_k_garland(&image, m.rank) {
            found.0 += 1;
            assert!(is_identity_preserving(m, chain), "{chain:?}");
        }
        if chain.len() == 9 {
            return;
        }
        let state = chain.last().map(|&t| m.transitions[t].to);
        for (i, t) in m.transitions.iter().enumerate() {
            if state.is_some_and(|s| s != t.from) {
                continue;
            }
            let len = image_len + usize::from(t.command != Command::Keep);
            if len > 6 {
                continue;
            }
            chain.push(i);
            found.1 += 1;
            extend(m, chain, len, found);
            chain.pop();
        }
    }
    for (name, m, _) in machines() {
        let mut found = (0, 0);
        extend(&m, &mut Vec::new(), 0, &mut found);
        assert!(found.0 > 0, "{name}: no garland chains among {}", found.1);
    }
}
