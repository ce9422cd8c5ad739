use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

use polyzeta::group::{pair, random_grouplike, NcSeries};
use polyzeta::numerics::{format_fixed, ApproxReal};
use polyzeta::transforms::{apply_transform, box_op, nabla, TransformKind};
use polyzeta::words::{
    antipode, coproduct, in_w_plus, lambda_inverse, lambda_map, letter_shuffle_power, regularize_ab, regularize_b,
    Letter, Word, WordPoly,
};

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::bool::ANY, 0..=max_len)
        .prop_map(|bits| Word::from_letters(&bits.iter().map(|&b| if b { Letter::B } else { Letter::A }).collect::<Vec<_>>()))
}

fn poly(max_len: usize) -> impl Strategy<Value = WordPoly> {
    prop::collection::vec((word(max_len), -4i64..=4, 1i64..=3), 0..4).prop_map(|terms| {
        let mut p = WordPoly::zero();
        for (w, n, d) in terms {
            p.add_term(w, BigRational::new(n.into(), d.into()));
        }
        p
    })
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-10_000i64..10_000, 1i64..1000).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shuffle_is_commutative_and_associative(x in poly(3), y in poly(3), z in poly(2)) {
        prop_assert_eq!(x.shuffle(&y), y.shuffle(&x));
        prop_assert_eq!(x.shuffle(&y).shuffle(&z), x.shuffle(&y.shuffle(&z)));
    }

    #[test]
    fn antipode_is_the_shuffle_inverse(w in word(6)) {
        let mut conv = WordPoly::zero();
        for (l, r) in coproduct(&w) {
            conv += &antipode(&l).shuffle(&WordPoly::from(r));
        }
        let unit = if w.is_empty() { WordPoly::one() } else { WordPoly::zero() };
        prop_assert_eq!(conv, unit);
    }

    #[test]
    fn lambda_round_trips(w in word(8)) {
        prop_assume!(!w.is_empty() && in_w_plus(&w));
        prop_assert_eq!(lambda_inverse(&lambda_map(&w).unwrap()), w);
    }

    #[test]
    fn regularizations_reassemble(h in poly(5)) {
        let mut back = WordPoly::zero();
        for (j, hj) in regularize_b(&h) {
            back += &hj.shuffle(&letter_shuffle_power(Letter::B, j));
        }
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(regularize_ab(&h).expand(), h);
    }

    #[test]
    fn transforms_respect_their_orders(h in poly(5)) {
        let s = |p: &WordPoly| apply_transform(TransformKind::Sigma, p);
        let t = |p: &WordPoly| apply_transform(TransformKind::Tau, p);
        prop_assert_eq!(s(&s(&h)), h.clone());
        prop_assert_eq!(t(&t(&t(&h))), h.antipode());
    }

    #[test]
    fn box_and_nabla_are_linear(x in poly(4), y in poly(4), c in -3i64..=3) {
        let c = BigRational::from_integer(c.into());
        let comb = &x.scale(&c) + &y;
        prop_assert_eq!(box_op(&comb), &box_op(&x).scale(&c) + &box_op(&y));
        prop_assert_eq!(nabla(&comb), &nabla(&x).scale(&c) + &nabla(&y));
    }

    #[test]
    fn interval_arithmetic_encloses_exact_results(x in rational(), y in rational(), scale in 8u32..80) {
        let (ax, ay) = (ApproxReal::from_rational(&x, scale), ApproxReal::from_rational(&y, scale));
        prop_assert!((&ax + &ay).contains(&(&x + &y)));
        prop_assert!((&ax - &ay).contains(&(&x - &y)));
        prop_assert!((&ax * &ay).contains(&(&x * &y)));
        prop_assert!(ax.div_integer(&BigInt::from(7)).unwrap().contains(&(&x / BigRational::from_integer(7.into()))));
        if let Ok(q) = ax.div(&ay) {
            prop_assert!(q.contains(&(&x / &y)));
        }
    }

    #[test]
    fn fixed_formatting_is_within_half_an_ulp(x in rational(), digits in 0u32..12) {
        let s = format_fixed(&x, digits);
        let back = polyzeta::numerics::parse_decimal(&s).unwrap();
        let ulp = BigRational::new(1.into(), BigInt::from(10).pow(digits));
        prop_assert!((back - &x).abs() <= ulp / BigRational::from_integer(2.into()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn grouplikes_have_primitive_logs_and_dual_transforms(seed in any::<u64>()) {
        let g = random_grouplike(5, seed);
        prop_assert!(g.is_grouplike());
        prop_assert!(g.log().unwrap().is_primitive());
        let gs = g.mul(&g.transform(TransformKind::Sigma));
        prop_assert_eq!(gs.transform(TransformKind::Sigma), gs.clone());
        for w in Word::all_up_to(4) {
            let h = WordPoly::from(w);
            prop_assert_eq!(pair(&box_op(&h), &g).unwrap(), pair(&h, &gs).unwrap());
        }
        prop_assert_eq!(g.mul(&g.inv().unwrap()), NcSeries::one(5));
    }
}
