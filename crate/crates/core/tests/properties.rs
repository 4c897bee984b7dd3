use biorder::magnus::magnus_sign;
use biorder::noniso::{
    conjugate_letters, nonisolation_witness, telescoped_map, AdjustedOrder, NonIsoInput,
};
use biorder::oracle::{compare, MagnusOrder, OrderOracle};
use biorder::pl::{chain_germ, random_bump};
use biorder::rational::{int, q};
use biorder::realization::{merge, standard_realization, FactorSpec, Realization};
use biorder::sign::Sign;
use biorder::types::{phi, psi, TypeAlphaOrder};
use biorder::word::{normal_form, w, Letter};
use biorder::{PLMap, Word};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn letters(factors: u8, len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..factors, prop_oneof![-3i64..=-1, 1i64..=3]), 0..len)
        .prop_map(|v| normal_form(v.into_iter().map(|(f, k)| Letter::cyclic(f, k))))
}

fn merged() -> &'static Realization {
    static R: OnceLock<Realization> = OnceLock::new();
    R.get_or_init(|| {
        let z = standard_realization(&FactorSpec::z(int(0)));
        merge(&z, &z, &q(1, 10), 3, 7).unwrap().realization
    })
}

fn bump(seed: u64) -> PLMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_bump(&int(-3), &int(2), &q(1, 2), &mut rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_laws(u in letters(2, 8), v in letters(2, 8), x in letters(2, 8)) {
        prop_assert_eq!(u.multiply(&v).multiply(&x), u.multiply(&v.multiply(&x)));
        prop_assert!(u.multiply(&u.inverse()).is_identity());
        prop_assert_eq!(u.inverse().inverse(), u.clone());
        prop_assert_eq!(u.multiply(&v).inverse(), v.inverse().multiply(&u.inverse()));
    }

    #[test]
    fn word_text_round_trip(u in letters(4, 10)) {
        prop_assert_eq!(u.to_string().parse::<Word>().unwrap(), u);
    }

    #[test]
    fn realization_is_a_homomorphism(u in letters(2, 5), v in letters(2, 5)) {
        let r = merged();
        prop_assert_eq!(r.realize_word(&u.multiply(&v)), r.realize_word(&u).compose(&r.realize_word(&v)));
        prop_assert_eq!(r.realize_word(&u.inverse()), r.realize_word(&u).inverse());
    }

    #[test]
    fn lazy_germ_matches_composition(s1 in 0u64..1000, s2 in 0u64..1000, s3 in 0u64..1000) {
        let (f, g, h) = (bump(s1), bump(s2), bump(s3));
        let whole = f.compose(&g).compose(&h);
        let (crit, sign) = chain_germ(&[&f, &g, &h]);
        prop_assert_eq!(crit, whole.critical_point());
        prop_assert_eq!(sign, whole.sign());
    }

    #[test]
    fn pl_text_round_trip(s in 0u64..1000) {
        let f = bump(s);
        prop_assert_eq!(f.to_string().parse::<PLMap>().unwrap(), f);
    }

    #[test]
    fn realized_order_is_conjugation_invariant(u in letters(2, 5), v in letters(2, 5)) {
        let r = merged();
        prop_assert_eq!(r.realized_sign(&v.conjugate_by(&u)), r.realized_sign(&v));
        prop_assert_eq!(r.realized_sign(&v.inverse()), -r.realized_sign(&v));
    }

    #[test]
    fn magnus_is_conjugation_invariant(u in letters(2, 4), v in letters(2, 4)) {
        prop_assert_eq!(magnus_sign(&v.conjugate_by(&u)).unwrap(), magnus_sign(&v).unwrap());
        prop_assert_eq!(MagnusOrder.sign(&v.inverse()), -MagnusOrder.sign(&v));
        prop_assert_eq!(MagnusOrder.sign(&v) == Sign::Zero, v.is_identity());
    }

    #[test]
    fn type_alpha_is_translation_invariant(u in letters(2, 4), v in letters(2, 4), x in letters(2, 3)) {
        let o = TypeAlphaOrder::magnus(q(3, 2)).unwrap();
        let c = compare(&o, &u, &v);
        prop_assert_eq!(compare(&o, &x.multiply(&u), &x.multiply(&v)), c);
        prop_assert_eq!(compare(&o, &u.multiply(&x), &v.multiply(&x)), c);
    }

    #[test]
    fn psi_is_additive(u in letters(2, 6), v in letters(2, 6)) {
        let al = q(5, 2);
        let fix = |w: &Word| w.multiply(&Word::gen(0, -phi(w)));
        let (u, v) = (fix(&u), fix(&v));
        prop_assert_eq!(psi(&u.multiply(&v), &al).unwrap(), psi(&u, &al).unwrap() + psi(&v, &al).unwrap());
    }
}

#[test]
fn adjusted_words_telescope() {
    let wit = nonisolation_witness(&NonIsoInput::new(
        merged().clone(),
        vec![w("a"), w("b"), w("ab")],
        4,
        1,
        7,
    ))
    .unwrap();
    let o: &AdjustedOrder = &wit.order1;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let ball = merged().ball(3);
    for f in ball.choose_multiple(&mut rng, 10) {
        let adjusted = conjugate_letters(f, &o.g_factors, o.tau_factor);
        assert_eq!(o.merged.realize_word(&adjusted), telescoped_map(o, f));
    }
}
