use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use workbench_core::anomaly::{
    modular_defect, parse_relator, reduce_boundary, regauge, verify_anomalous_theory, verify_anomaly, ModularData,
};
use workbench_core::character2::{from_cocycle, verify_cocycle_identity, verify_two_character};
use workbench_core::cobordism::{parse_ast, random_word, serialize_word, Dimension, Object};
use workbench_core::group::small_catalog;
use workbench_core::sampling;
use workbench_core::scalar::{parse_scalar, Scalar, DEFAULT_CONDUCTOR_CAP};

const CONDUCTORS: [u32; 8] = [1, 2, 3, 4, 6, 8, 12, 24];

fn scalar() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((0..CONDUCTORS.len(), 0i64..24, -5i64..=5, 1i64..=4), 1..=3).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(n, k, p, q)| &Scalar::from_ratio(p, q) * &Scalar::root_of_unity(CONDUCTORS[n], k))
            .sum()
    })
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn complex_embedding_is_a_ring_homomorphism(a in scalar(), b in scalar()) {
        let (x, y) = (a.embed_complex(), b.embed_complex());
        let sum = (&a + &b).embed_complex();
        let prod = (&a * &b).embed_complex();
        prop_assert!(close(sum, (x.0 + y.0, x.1 + y.1)));
        prop_assert!(close(prod, (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)));
    }

    #[test]
    fn literals_are_canonical(a in scalar()) {
        let text = a.to_string();
        let back = parse_scalar(&text, DEFAULT_CONDUCTOR_CAP).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn conjugation_is_an_involution(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, ..ProptestConfig::default() })]

    #[test]
    fn words_round_trip(seed in any::<u64>(), dim in 0usize..3, depth in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (dim, source) = match dim {
            0 => (Dimension::Two, Object::Circles(1)),
            1 => (Dimension::One, Object::Points(Vec::new())),
            _ => (Dimension::Constrained, Object::Constrained(Vec::new())),
        };
        let w = random_word(&mut rng, dim, depth, &source, 3);
        prop_assert!(w.ast.depth() <= depth);
        let text = serialize_word(&w);
        let (ast, _) = parse_ast(&text, dim).unwrap();
        prop_assert_eq!(&ast, &w.ast);
        prop_assert_eq!(ast.to_string(), text);
    }

    #[test]
    fn cocycle_iff_character_on_catalog(seed in any::<u64>(), which in 0usize..16) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let groups = small_catalog(8);
        let (_, g) = &groups[which % groups.len()];
        let alpha = if seed % 2 == 0 {
            sampling::random_mu_table(&mut rng, g, 4)
        } else {
            sampling::random_cohomologous(&mut rng, &workbench_core::character2::Cocycle::trivial(g.clone()), 4)
        };
        prop_assert_eq!(
            verify_two_character(&from_cocycle(&alpha)).passed(),
            verify_cocycle_identity(&alpha).passed()
        );
    }

    #[test]
    fn defects_multiply(seed in any::<u64>(), len in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pieces = ["(ST)^3s^2", "S^4", "S^2", "STs^1t^1", "sS", "(ST)^3S^-2"];
        for m in [ModularData::semion(), ModularData::toric_code()] {
            let chosen: Vec<&str> = (0..len).map(|_| pieces[rand::Rng::gen_range(&mut rng, 0..pieces.len())]).collect();
            let mut expected = Scalar::one();
            let mut ok = true;
            for p in &chosen {
                match modular_defect(&m, &parse_relator(p).unwrap()) {
                    Ok(d) => expected = &expected * &d,
                    Err(_) => ok = false,
                }
            }
            if ok {
                let whole = parse_relator(&chosen.join("")).unwrap();
                prop_assert_eq!(modular_defect(&m, &whole).unwrap(), expected);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    #[test]
    fn regauged_reductions_stay_coherent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bc = sampling::random_boundary_table(&mut rng, 2);
        let z = reduce_boundary(&Scalar::from_ratio(1, 2), &bc).unwrap();
        let beta: Vec<Scalar> = (0..z.maps.len())
            .map(|m| {
                if z.anomaly.model.identities.contains(&m) {
                    Scalar::one()
                } else {
                    sampling::random_nonzero_rational(&mut rng, 3)
                }
            })
            .collect();
        let r = regauge(&z, &beta).unwrap();
        prop_assert!(verify_anomaly(&r.anomaly).passed());
        prop_assert!(verify_anomalous_theory(&r).passed());
    }
}
