use displace::monoids::{
    chain_cycles, check_partition, for_each_bracket_word, is_dyck_by_monoid, is_dyck_by_partition, pc_reduce_word,
    phi1, phi2, sx_reduce, BracketLetter, Generator, Polycyclic, ProductElement, RankedAlphabet,
};
use proptest::prelude::*;

fn generator() -> impl Strategy<Value = Generator<u8>> {
    (any::<bool>(), 0u8..3).prop_map(|(push, s)| if push { Generator::Push(s) } else { Generator::Pop(s) })
}

fn element() -> impl Strategy<Value = Polycyclic<u8>> {
    prop::collection::vec(generator(), 0..=6).prop_map(|w| pc_reduce_word(&w))
}

fn alphabet() -> impl Strategy<Value = RankedAlphabet> {
    prop_oneof![
        Just(RankedAlphabet::new([("x", 2)]).unwrap()),
        Just(RankedAlphabet::new([("x", 3)]).unwrap()),
        Just(RankedAlphabet::new([("y", 1), ("x", 2)]).unwrap()),
    ]
}

fn word_and_split() -> impl Strategy<Value = (RankedAlphabet, Vec<BracketLetter>, usize)> {
    alphabet().prop_flat_map(|x| {
        let letters = x.letters();
        let n = letters.len();
        (Just(x), prop::collection::vec(0..n, 0..=10)).prop_flat_map(move |(x, idx)| {
            let w: Vec<BracketLetter> = idx.iter().map(|&i| letters[i]).collect();
            let len = w.len();
            (Just(x), Just(w), 0..=len)
        })
    })
}

// Brute-force stack semantics: the element as a partial map on short stacks.
fn act(e: &Polycyclic<u8>, stack: &[u8]) -> Option<Vec<u8>> {
    match e {
        Polycyclic::Zero => None,
        Polycyclic::Elem { pops, pushes } => {
            let mut s = stack.to_vec();
            for p in pops {
                if s.pop()? != *p {
                    return None;
                }
            }
            s.extend_from_slice(pushes);
            Some(s)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn multiplication_is_associative(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
    }

    #[test]
    fn multiplication_composes_stack_maps(a in element(), b in element(), stack in prop::collection::vec(0u8..3, 0..8)) {
        let expected = act(&a, &stack).and_then(|s| act(&b, &s));
        let product = a.multiply(&b);
        // zero is the empty map; otherwise the product acts as the composite
        if product.is_zero() {
            prop_assert_eq!(expected, None);
        } else {
            prop_assert_eq!(act(&product, &stack), expected);
        }
    }

    #[test]
    fn projections_are_homomorphisms((x, w, split) in word_and_split()) {
        let (u, v) = w.split_at(split);
        let whole = sx_reduce(&x, &w);
        let parts: ProductElement<_> = sx_reduce(&x, u).multiply(&sx_reduce(&x, v));
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn letter_images_match_their_definition((x, w, _) in word_and_split()) {
        for l in &w {
            let g1 = phi1(l);
            prop_assert_eq!(matches!(g1, Generator::Push(_)), !l.barred);
            prop_assert_eq!(g1.symbol().index, l.level);
            let g2 = phi2(&x, l);
            let arity = x.arity(l.symbol);
            let expected = match (l.barred, l.level) {
                (false, 1) => Generator::Push(1),
                (false, j) => Generator::Pop(j),
                (true, j) if j == arity => Generator::Pop(1),
                (true, j) => Generator::Push(j + 1),
            };
            prop_assert_eq!(g2.map(|a| a.index), expected);
        }
    }
}

#[test]
fn chain_cycles_are_valid_partitions() {
    for x in [
        RankedAlphabet::new([("x", 2)]).unwrap(),
        RankedAlphabet::new([("x", 3)]).unwrap(),
        RankedAlphabet::new([("y", 1), ("x", 2)]).unwrap(),
    ] {
        for_each_bracket_word(&x, 8, |w| {
            if is_dyck_by_monoid(&x, w) {
                let cycles = chain_cycles(&x, w).unwrap();
                assert!(check_partition(&x, w, &cycles), "{}", x.render_word(w));
            }
        });
    }
}

#[test]
fn monoid_and_partition_validators_agree() {
    for x in [
        RankedAlphabet::new([("x", 2)]).unwrap(),
        RankedAlphabet::new([("y", 1), ("x", 2)]).unwrap(),
    ] {
        for_each_bracket_word(&x, 6, |w| {
            assert_eq!(
                is_dyck_by_monoid(&x, w),
                is_dyck_by_partition(&x, w, 12).unwrap(),
                "{}",
                x.render_word(w)
            );
        });
    }
}
