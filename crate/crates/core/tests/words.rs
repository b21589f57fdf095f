mod common;

use std::collections::BTreeMap;

use ibig::IBig;
use proptest::prelude::*;

use common::word_strategy;
use relmod::words::{g, w};
use relmod::{Gen, Word};

fn abc() -> Vec<Gen> {
    vec![g("a"), g("b"), g("c")]
}

proptest! {
    #[test]
    fn cancelling_pair_insertion_is_undone(
        word in word_strategy(abc(), 8),
        pos in 0usize..64,
        which in 0usize..3,
        sign in prop_oneof![Just(1i8), Just(-1i8)],
    ) {
        let letters = word.letters(1024).unwrap();
        let cut = pos % (letters.len() + 1);
        let gen = abc()[which].clone();
        let mut padded = letters[..cut].to_vec();
        padded.push((gen.clone(), sign));
        padded.push((gen, -sign));
        padded.extend_from_slice(&letters[cut..]);
        prop_assert_eq!(Word::from_letters(&padded), word);
    }

    #[test]
    fn mul_is_associative(a in word_strategy(abc(), 6), b in word_strategy(abc(), 6), c in word_strategy(abc(), 6)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn inverse_is_an_involution(a in word_strategy(abc(), 8)) {
        prop_assert_eq!(a.inv().inv(), a.clone());
        prop_assert!(a.mul(&a.inv()).is_identity());
    }

    #[test]
    fn substitution_is_a_homomorphism(
        a in word_strategy(abc(), 5),
        b in word_strategy(abc(), 5),
        ia in word_strategy(vec![g("x"), g("y")], 3),
        ib in word_strategy(vec![g("x"), g("y")], 3),
        ic in word_strategy(vec![g("x"), g("y")], 3),
    ) {
        let m = BTreeMap::from([(g("a"), ia), (g("b"), ib), (g("c"), ic)]);
        prop_assert_eq!(
            a.mul(&b).substitute(&m).unwrap(),
            a.substitute(&m).unwrap().mul(&b.substitute(&m).unwrap())
        );
    }

    #[test]
    fn exponent_sums_add(a in word_strategy(abc(), 8), b in word_strategy(abc(), 8)) {
        for gen in abc() {
            prop_assert_eq!(a.mul(&b).exponent_sum(&gen), a.exponent_sum(&gen) + b.exponent_sum(&gen));
        }
    }

    #[test]
    fn display_round_trips(a in word_strategy(vec![g("x"), g("z_-2"), g("u_3'")], 8)) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Word>().unwrap(), a);
    }

    #[test]
    fn cyclic_reduction_is_a_conjugate(a in word_strategy(abc(), 8)) {
        let (conj, core) = a.cyclic_core();
        prop_assert_eq!(core.conj(&conj), a.clone());
        prop_assert_eq!(a.cyclically_reduced(), core);
    }
}

#[test]
fn big_exponents_stay_exact() {
    let huge = IBig::from(10).pow(40);
    let a = Word::power(g("x"), huge.clone());
    assert_eq!(a.mul(&a).exponent_sum(&g("x")), &huge * IBig::from(2));
    assert!(a.mul(&a.inv()).is_identity());
    assert_eq!(w("x^3 x^-3 y").to_string(), "y");
}
