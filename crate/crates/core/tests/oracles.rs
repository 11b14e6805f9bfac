use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use workbench_core::character2::{
    commutator_pairing, from_cocycle, klein_cocycle, verify_character_morphism, verify_cocycle_identity,
    CharacterMorphism, Cocycle,
};
use workbench_core::cobordism::{eval_1d, mapping_cylinder, s3_irreps, transmission, Sign};
use workbench_core::frobenius::handle_element;
use workbench_core::group::{build_catalog_group, conjugacy_classes, cyclic, symmetric};
use workbench_core::projrep::{from_fixed_point, to_fixed_point, verify_fixed_point, verify_projrep};
use workbench_core::sampling;
use workbench_core::scalar::Scalar;

type C = (f64, f64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cadd(a: C, b: C) -> C {
    (a.0 + b.0, a.1 + b.1)
}

fn cinv(a: C) -> C {
    let n = a.0 * a.0 + a.1 * a.1;
    (a.0 / n, -a.1 / n)
}

fn near(a: C, b: C, tol: f64) -> bool {
    (a.0 - b.0).abs() < tol && (a.1 - b.1).abs() < tol
}

/// Gauss-Jordan over f64 complex numbers.
fn complex_inverse(m: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { (1.0, 0.0) } else { (0.0, 0.0) }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| {
                let nx = a[x][col].0.hypot(a[x][col].1);
                let ny = a[y][col].0.hypot(a[y][col].1);
                nx.partial_cmp(&ny).unwrap()
            })
            .unwrap();
        a.swap(col, pivot);
        let p = cinv(a[col][col]);
        for v in a[col].iter_mut() {
            *v = cmul(*v, p);
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                for c in 0..2 * n {
                    let sub = cmul(f, a[col][c]);
                    a[r][c] = (a[r][c].0 - sub.0, a[r][c].1 - sub.1);
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

#[test]
fn inverse_of_one_plus_zeta3() {
    let x = &Scalar::one() + &Scalar::root_of_unity(3, 1);
    let inv = x.inv().unwrap();
    // 1 + ζ + ζ² = 0 gives (1 + ζ)·(−ζ) = −ζ − ζ² = 1
    assert_eq!(inv, -Scalar::root_of_unity(3, 1));
    let t = 2.0 * std::f64::consts::PI / 3.0;
    assert!(near(inv.embed_complex(), cinv((1.0 + t.cos(), t.sin())), 1e-12));
}

#[test]
fn zeta8_squared_squared() {
    let z = Scalar::root_of_unity(8, 2);
    assert_eq!(&z * &z, Scalar::from_integer(-1));
    assert_eq!(z, Scalar::root_of_unity(4, 1));
}

#[test]
fn roots_embed_on_the_unit_circle() {
    for n in 1..=24u32 {
        for k in 0..n as i64 {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let got = Scalar::root_of_unity(n, k).embed_complex();
            assert!(near(got, (t.cos(), t.sin()), 1e-12), "ζ_{n}^{k}: {got:?}");
        }
    }
}

#[test]
fn s3_classes_by_brute_force() {
    let g = symmetric(3).unwrap();
    let perms: Vec<Vec<usize>> = g
        .elements()
        .map(|x| g.name(x).bytes().map(|b| (b - b'1') as usize).collect())
        .collect();
    let compose = |s: &[usize], t: &[usize]| -> Vec<usize> { (0..3).map(|i| s[t[i]]).collect() };
    let inverse = |s: &[usize]| -> Vec<usize> {
        let mut out = vec![0; 3];
        for (i, &v) in s.iter().enumerate() {
            out[v] = i;
        }
        out
    };
    let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();

    let mut noncommuting = 0;
    for a in &perms {
        for b in &perms {
            if compose(a, b) != compose(b, a) {
                noncommuting += 1;
            }
        }
    }
    assert!(noncommuting > 0);
    assert!(!g.is_abelian());

    let mut expected: Vec<Vec<usize>> = Vec::new();
    for p in &perms {
        let mut class: Vec<usize> = perms
            .iter()
            .map(|h| index(&compose(&compose(h, p), &inverse(h))))
            .collect();
        class.sort();
        class.dedup();
        if !expected.contains(&class) {
            expected.push(class);
        }
    }
    expected.sort_by_key(|c| c[0]);
    assert_eq!(conjugacy_classes(&g), expected);
    let mut sizes: Vec<usize> = expected.iter().map(Vec::len).collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 2, 3]);
}

#[test]
fn klein_cocycle_against_sign_table() {
    let alpha = klein_cocycle();
    let g = alpha.group().clone();
    let sign = |x: usize, y: usize| if (x % 2) * (y / 2) == 1 { -1i64 } else { 1 };
    for x in g.elements() {
        for y in g.elements() {
            assert_eq!(alpha.value(x, y), &Scalar::from_integer(sign(x, y)));
            for z in g.elements() {
                let lhs = sign(x, y) * sign(g.mul(x, y), z);
                let rhs = sign(y, z) * sign(x, g.mul(y, z));
                assert_eq!(lhs, rhs);
            }
            let pairing = sign(x, y) * sign(y, x);
            assert_eq!(commutator_pairing(&alpha, x, y).unwrap(), Scalar::from_integer(pairing));
        }
    }
    assert!(verify_cocycle_identity(&alpha).passed());
    assert_eq!(commutator_pairing(&alpha, 1, 2).unwrap(), Scalar::from_integer(-1));
}

#[test]
fn commutator_pairing_ignores_coboundaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let alpha = klein_cocycle();
    let g = alpha.group().clone();
    for _ in 0..100 {
        let beta = sampling::random_gauge(&mut rng, &g, 8);
        let twisted = alpha.product(&Cocycle::coboundary(g.clone(), &beta)).unwrap();
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(
                    commutator_pairing(&twisted, x, y).unwrap(),
                    commutator_pairing(&alpha, x, y).unwrap()
                );
            }
        }
    }
}

#[test]
fn coboundaries_give_character_morphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let g = cyclic(4).unwrap();
    for _ in 0..50 {
        let alpha = sampling::random_cohomologous(&mut rng, &Cocycle::trivial(g.clone()), 4);
        let beta = sampling::random_gauge(&mut rng, &g, 4);
        let target = alpha.product(&Cocycle::coboundary(g.clone(), &beta)).unwrap();
        let m = CharacterMorphism {
            source: from_cocycle(&alpha),
            target: from_cocycle(&target),
            xi: beta.clone(),
        };
        assert!(verify_character_morphism(&m).unwrap().passed());
        let mut wrong = beta.clone();
        wrong[1] = -&wrong[1];
        let bad = CharacterMorphism { xi: wrong, ..m };
        assert!(!verify_character_morphism(&bad).unwrap().passed());
    }
}

#[test]
fn random_fixed_points_on_z4() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let g = cyclic(4).unwrap();
    for _ in 0..100 {
        let alpha = sampling::random_cohomologous(&mut rng, &Cocycle::trivial(g.clone()), 4);
        let rho = sampling::random_projrep(&mut rng, &alpha);
        assert!(verify_projrep(&rho).passed());
        let p = to_fixed_point(&rho);
        assert!(verify_fixed_point(&p).passed());
        assert_eq!(from_fixed_point(&p).unwrap(), rho);
    }
}

#[test]
fn handle_element_against_float_gram() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let a = sampling::random_commutative_algebra(&mut rng, 3);
        let n = a.dim();
        let mult: Vec<Vec<Vec<C>>> = a
            .mult()
            .iter()
            .map(|r| r.iter().map(|c| c.iter().map(Scalar::embed_complex).collect()).collect())
            .collect();
        let eps: Vec<C> = a.counit().iter().map(Scalar::embed_complex).collect();
        // G_ij = ε(e_i e_j)
        let gram: Vec<Vec<C>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold((0.0, 0.0), |acc, k| cadd(acc, cmul(mult[i][j][k], eps[k]))))
                    .collect()
            })
            .collect();
        let ginv = complex_inverse(&gram);
        let mut h = vec![(0.0, 0.0); n];
        for i in 0..n {
            for j in 0..n {
                for (k, hk) in h.iter_mut().enumerate() {
                    *hk = cadd(*hk, cmul(ginv[i][j], mult[i][j][k]));
                }
            }
        }
        let exact = handle_element(&a).unwrap();
        for k in 0..n {
            assert!(near(exact[k].embed_complex(), h[k], 1e-9), "{exact:?} vs {h:?}");
        }
    }
}

#[test]
fn group_algebra_handle_is_order_times_unit() {
    for spec in ["cyclic(2)", "cyclic(3)", "cyclic(6)", "klein"] {
        let g = build_catalog_group(spec).unwrap();
        let a = workbench_core::frobenius::make_group_algebra(&g);
        let h = handle_element(&a).unwrap();
        let expected: Vec<Scalar> = a.unit().iter().map(|u| u * &Scalar::from_integer(g.order() as i64)).collect();
        assert_eq!(h, expected);
    }
}

#[test]
fn three_cycle_cylinder_is_a_permutation_matrix() {
    let d = 2;
    let perm = [1, 2, 0];
    let w = mapping_cylinder(&[Sign::Plus; 3], &perm).unwrap();
    let zero = vec![Scalar::zero(); d];
    let m = eval_1d(&w, d, &zero, &zero).unwrap();
    let size = d * d * d;
    for x in 0..size {
        let digits = [x / 4, (x / 2) % 2, x % 2];
        let mut moved = [0; 3];
        for i in 0..3 {
            moved[perm[i]] = digits[i];
        }
        let y = moved[0] * 4 + moved[1] * 2 + moved[2];
        for r in 0..size {
            let want = if r == y { Scalar::one() } else { Scalar::zero() };
            assert_eq!(m.get(r, x), &want, "column {x}, row {r}");
        }
    }
}

#[test]
fn transmission_matches_s3_characters() {
    let g = symmetric(3).unwrap();
    let classes = conjugacy_classes(&g);
    let fixed_points = |x: usize| g.name(x).bytes().enumerate().filter(|&(i, b)| (b - b'1') as usize == i).count() as i64;
    // transpositions are exactly the elements fixing one point
    let parity = |x: usize| if fixed_points(x) == 1 { -1 } else { 1 };
    for (name, rho) in s3_irreps() {
        let got = transmission(&g, &rho).unwrap();
        let want: Vec<Scalar> = classes
            .iter()
            .map(|c| {
                let x = c[0];
                Scalar::from_integer(match name {
                    "trivial" => 1,
                    "sign" => parity(x),
                    _ => fixed_points(x) - 1,
                })
            })
            .collect();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn random_cohomologous_stays_a_cocycle() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let g = build_catalog_group("symmetric(3)").unwrap();
    for _ in 0..50 {
        let n = [2u32, 4, 6][rng.gen_range(0..3)];
        let alpha = sampling::random_cohomologous(&mut rng, &Cocycle::trivial(g.clone()), n);
        for x in g.elements() {
            for y in g.elements() {
                for z in g.elements() {
                    let lhs = alpha.value(x, y) * alpha.value(g.mul(x, y), z);
                    let rhs = alpha.value(y, z) * alpha.value(x, g.mul(y, z));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
