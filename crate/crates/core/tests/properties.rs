mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{gluing_census, LocalOracle};
use shiftlab::metric::{agree, closer_than, distance};
use shiftlab::{
    omega_prefixes, sequence_omega_prefixes, DyadicDistance, IndexMap, Point, PointStream, Subshift, Symbol, Word,
};

fn word(max_len: usize, symbols: u64) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..symbols, 0..=max_len).prop_map(Word::from_values)
}

fn nonempty_word(max_len: usize, symbols: u64) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..symbols, 1..=max_len).prop_map(Word::from_values)
}

fn ep_point() -> impl Strategy<Value = Point> {
    (word(5, 3), nonempty_word(4, 3)).prop_map(|(pre, per)| Point::periodic(pre, per).unwrap())
}

fn any_point() -> impl Strategy<Value = Point> {
    prop_oneof![
        4 => ep_point(),
        1 => Just(Point::remark1()),
        1 => Just(Point::remark2()),
        1 => (word(3, 3), 0..40usize).prop_map(|(h, n)| Point::heads_then_tail(h, Point::remark1().shift(n))),
    ]
}

fn basis() -> impl Strategy<Value = Vec<Word>> {
    prop::collection::vec(nonempty_word(3, 5), 1..=4)
}

fn naive_symbol(pre: &Word, per: &Word, i: usize) -> Symbol {
    if i < pre.len() { pre[i] } else { per[(i - pre.len()) % per.len()] }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normal_form_spells_the_same_sequence(pre in word(6, 3), per in nonempty_word(5, 3)) {
        let p = Point::periodic(pre.clone(), per.clone()).unwrap();
        for i in 0..60 {
            prop_assert_eq!(p.symbol_at(i), naive_symbol(&pre, &per, i));
        }
    }

    #[test]
    fn normal_form_is_canonical(pre in word(4, 3), per in nonempty_word(3, 3), reps in 1..4usize, unroll in 0..5usize) {
        // pre · per^ω = (pre · per[0, unroll)) · (rotated per)^ω, with the period repeated
        let a = Point::periodic(pre.clone(), per.clone()).unwrap();
        let p = per.len();
        let mut pre2 = pre.clone().into_vec();
        pre2.extend((0..unroll).map(|j| per[j % p]));
        let rot: Vec<Symbol> = (0..p * reps).map(|j| per[(unroll + j) % p]).collect();
        let b = Point::periodic(Word::new(pre2), Word::new(rot)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn distance_is_a_symmetric_ultrametric(x in ep_point(), y in ep_point(), z in ep_point()) {
        let d = |a: &Point, b: &Point| distance(a, b, 64).value;
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= d(&x, &y).max(d(&y, &z)));
        prop_assert_eq!(d(&x, &y) == DyadicDistance::Zero, x == y);
    }

    #[test]
    fn strict_bound_is_prefix_agreement(x in any_point(), y in any_point(), m in 0u32..8) {
        let n = m as usize + 1;
        prop_assert_eq!(closer_than(&x, &y, DyadicDistance::pow2_neg(m)), x.prefix(n) == y.prefix(n));
        prop_assert_eq!(agree(&x, &y, n), x.prefix(n) == y.prefix(n));
    }

    #[test]
    fn shifts_compose(x in any_point(), a in 0..50usize, b in 0..50usize) {
        let lhs = x.shift(a).shift(b);
        let rhs = x.shift(a + b);
        prop_assert_eq!(lhs.prefix(40), rhs.prefix(40));
        prop_assert_eq!(lhs.prefix(40), x.window(a + b, a + b + 40));
    }

    #[test]
    fn literal_codec_round_trips(x in ep_point()) {
        let back: Point = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn local_equals_global_over_the_countable_alphabet(ws in basis(), w in word(6, 7)) {
        let gamma = Subshift::explicit(ws).unwrap();
        prop_assert_eq!(gamma.is_locally_allowed(&w), gamma.is_globally_allowed(&w));
    }

    #[test]
    fn allowed_words_are_factorial_and_extendable(ws in basis(), size in 2u64..5, w in word(5, 4)) {
        let Ok(gamma) = Subshift::explicit_finite(ws, size) else { return Ok(()) };
        if !gamma.is_globally_allowed(&w) {
            return Ok(());
        }
        for i in 0..=w.len() {
            for j in i..=w.len() {
                prop_assert!(gamma.is_globally_allowed(&w[i..j]));
            }
        }
        // one-sided points always continue to the right
        prop_assert!((0..size).any(|s| gamma.is_globally_allowed(&w.concat(&[Symbol(s)]))));
    }

    #[test]
    fn gluing_holds_at_the_bound(ws in basis(), u in word(3, 6), w in word(4, 6), v in word(3, 6)) {
        let gamma = Subshift::explicit(ws).unwrap();
        if w.len() >= gamma.gluing_bound() {
            prop_assert!(gamma.verify_gluing(&u, &w, &v).unwrap());
        } else {
            prop_assert!(gamma.verify_gluing(&u, &w, &v).is_err());
        }
    }

    #[test]
    fn subsequences_shrink_exact_omega(
        t in prop::collection::vec(ep_point(), 0..4),
        c in prop::collection::vec(ep_point(), 1..4),
        stride in 1..5usize,
        offset in 0..6usize,
        square in any::<bool>(),
        n in 1..4usize,
    ) {
        let stream = PointStream::Cyclic { transient: t, cycle: c };
        let map = if square { IndexMap::Square { offset } } else { IndexMap::Affine { stride, offset } };
        let whole = sequence_omega_prefixes(&stream, n, 8, 2);
        let part = sequence_omega_prefixes(&stream.clone().subsequence(map), n, 8, 2);
        prop_assert!(whole.exact && part.exact);
        prop_assert!(part.prefixes.is_subset(&whole.prefixes));
    }

    #[test]
    fn ladder_for_periodic_points_ignores_parameters(x in ep_point(), n in 1..4usize, t0 in 4..32usize, levels in 1..4usize) {
        let a = omega_prefixes(&x, n, t0, levels);
        let b = omega_prefixes(&x, n, 2 * t0, 2 * levels);
        prop_assert!(a.exact);
        prop_assert_eq!(a.prefixes, b.prefixes);
    }
}

#[test]
fn ladder_refinement_never_grows_on_schemes() {
    for x in [Point::remark1(), Point::remark2()] {
        for n in 1..=3 {
            for (t0, levels) in [(8, 1), (8, 2), (16, 2), (32, 3), (64, 4)] {
                // more rungs intersect more windows
                let base = omega_prefixes(&x, n, t0, levels).prefixes;
                assert!(omega_prefixes(&x, n, t0, 2 * levels).prefixes.is_subset(&base));
            }
        }
    }
}

#[test]
fn census_detects_gluing_below_the_bound() {
    // with basis {010}, u=0, w=1, v=0 glues two allowed words into a forbidden one
    let oracle = LocalOracle::new(&[vec![0, 1, 0]]);
    let (_, bad) = gluing_census(&oracle, 3, 1..=1);
    assert!(bad > 0);
    let (total, bad) = gluing_census(&oracle, 3, 2..=4);
    assert_eq!(bad, 0);
    let words = |k: u32| (0..=3).map(|j| 3u128.pow(j)).sum::<u128>().pow(2) * 3u128.pow(k);
    assert_eq!(total, words(2) + words(3) + words(4));
}

#[test]
fn census_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let short = common::all_words(3, 0..=3);
    for _ in 0..20 {
        let basis: Vec<Vec<u8>> = (0..rng.gen_range(1..=3))
            .map(|_| (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..3u8)).collect())
            .collect();
        let oracle = LocalOracle::new(&basis);
        for mid in 0..=3usize {
            let (total, bad) = gluing_census(&oracle, 3, mid..=mid);
            let mut count = 0u128;
            let mut brute = 0u128;
            for u in &short {
                for w in common::all_words(3, mid..=mid) {
                    for v in &short {
                        count += 1;
                        let l = |x: &[&[u8]]| oracle.local(&x.concat());
                        if l(&[u, &w]) && l(&[&w, v]) && !l(&[u, &w, v]) {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!((total, bad), (count, brute), "basis {basis:?}, |w| = {mid}");
        }
    }
}
