//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test -p workbench-cli --test acceptance -- --nocapture`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use workbench_core::anomaly::{
    auto_model_1d, find_word, modular_defect, parse_relator, reduce_boundary, verify_anomalous_theory,
    verify_anomaly, BoundaryTable, ModularData,
};
use workbench_core::character2::{
    from_cocycle, klein_cocycle, verify_cocycle_identity, verify_two_character, Cocycle,
};
use workbench_core::cobordism::{
    eval_1d, eval_closed_2d, genus_word, parse_ast, parse_word, random_word, s3_irreps, serialize_word,
    transmission, Dimension, Object, FROBENIUS_RELATIONS,
};
use workbench_core::frobenius::{make_group_algebra, verify_frobenius, FrobeniusAlgebra};
use workbench_core::group::{conjugacy_classes, cyclic, small_catalog, symmetric};
use workbench_core::matrix::Matrix;
use workbench_core::projrep::{
    extract_holonomy, from_fixed_point, pauli, to_fixed_point, verify_fixed_point, verify_projrep,
};
use workbench_core::sampling;
use workbench_core::scalar::Scalar;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// 1. cocycle identity versus 2-character coherence
// ---------------------------------------------------------------------------

fn criterion_1() -> Outcome {
    let z2 = cyclic(2).unwrap();
    let mut cocycles = 0;
    let mut checked = 0;
    for bits in 0..16u32 {
        let values = (0..2)
            .map(|g| {
                (0..2)
                    .map(|h| Scalar::from_integer(if bits >> (2 * g + h) & 1 == 1 { -1 } else { 1 }))
                    .collect()
            })
            .collect();
        let alpha = Cocycle::from_table_unchecked(z2.clone(), values).unwrap();
        let a = verify_cocycle_identity(&alpha).passed();
        let b = verify_two_character(&from_cocycle(&alpha)).passed();
        ensure(a == b, || format!("Z2 table {bits:04b}: cocycle {a}, character {b}"))?;
        cocycles += a as usize;
        checked += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, g) in small_catalog(8) {
        let klein_twist = (name == "product(cyclic(2),cyclic(2))")
            .then(|| Cocycle::from_table_unchecked(g.clone(), klein_cocycle().values().to_vec()).unwrap());
        for i in 0..500 {
            let alpha = match i % 3 {
                0 => sampling::random_mu_table(&mut rng, &g, 4),
                1 => sampling::random_cohomologous(&mut rng, &Cocycle::trivial(g.clone()), 4),
                _ => match &klein_twist {
                    Some(k) => sampling::random_cohomologous(&mut rng, k, 4),
                    None => sampling::random_mu_table(&mut rng, &g, 4),
                },
            };
            let a = verify_cocycle_identity(&alpha).passed();
            let b = verify_two_character(&from_cocycle(&alpha)).passed();
            ensure(a == b, || format!("{name} sample {i}: cocycle {a}, character {b}"))?;
            cocycles += a as usize;
            checked += 1;
        }
    }
    Ok(format!("{checked} tables agree, {cocycles} of them cocycles"))
}

// ---------------------------------------------------------------------------
// 2. realization equivalence
// ---------------------------------------------------------------------------

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let z4 = cyclic(4).unwrap();
    let klein = klein_cocycle();
    let mut reps = vec![pauli()];
    for i in 0..100 {
        let twist = match i % 3 {
            0 => Cocycle::trivial(z4.clone()),
            1 => Cocycle::trivial(klein.group().clone()),
            _ => klein.clone(),
        };
        let alpha = sampling::random_cohomologous(&mut rng, &twist, 4);
        reps.push(sampling::random_projrep(&mut rng, &alpha));
    }
    for (i, rho) in reps.iter().enumerate() {
        ensure(verify_projrep(rho).passed(), || format!("rep {i} does not verify"))?;
        let p = to_fixed_point(rho);
        let v = verify_fixed_point(&p);
        ensure(v.passed(), || format!("rep {i}: fixed point fails: {v}"))?;
        let back = from_fixed_point(&p).map_err(|e| format!("rep {i}: {e}"))?;
        ensure(&back == rho, || format!("rep {i}: round trip changed the data"))?;
        ensure(verify_projrep(&back).passed(), || format!("rep {i}: round trip does not verify"))?;
    }
    Ok(format!("{} representations round-trip", reps.len()))
}

// ---------------------------------------------------------------------------
// 3. holonomy
// ---------------------------------------------------------------------------

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let modules = sampling::small_crossed_modules();
    for i in 0..200 {
        let (name, x) = &modules[i % modules.len()];
        let p = sampling::random_two_group_fixed_point(&mut rng, x);
        ensure(p.dim > 0, || format!("{name}: zero-dimensional sample"))?;
        let v = verify_fixed_point(&p);
        ensure(v.passed(), || format!("{name} sample {i}: {v}"))?;
        let hol = p.character.holonomy.as_ref().expect("2-group character");
        for a in x.fiber.elements() {
            for g in x.base.elements() {
                let got = extract_holonomy(&p, a, g).map_err(|e| format!("{name}: {e}"))?;
                ensure(got == hol[a][g], || format!("{name} sample {i}: holonomy at (a={a}, g={g}) is {got}"))?;
            }
        }
    }

    let characters = sampling::nonconstant_holonomy_characters();
    for (name, c) in &characters {
        for k in 0..1000 {
            let p = sampling::random_fixed_point_candidate(&mut rng, c);
            if p.dim > 0 && verify_fixed_point(&p).passed() {
                return Err(format!("{name}: candidate {k} verifies"));
            }
        }
    }
    Ok(format!(
        "200 holonomies match, none of {} x 1000 candidates verify",
        characters.len()
    ))
}

// ---------------------------------------------------------------------------
// 4. 2d theories
// ---------------------------------------------------------------------------

/// `H = Σ (G⁻¹)_{ji} e_i e_j` from the Gram matrix `G_ij = ε(e_i e_j)`.
fn handle_from_gram(a: &FrobeniusAlgebra) -> Vec<Scalar> {
    let n = a.dim();
    let gram = Matrix::from_fn(n, n, |i, j| a.apply_counit(&a.multiply(&a.basis_vector(i), &a.basis_vector(j))));
    let inv = gram.inverse().expect("nondegenerate pairing");
    let mut h = vec![Scalar::zero(); n];
    for i in 0..n {
        for j in 0..n {
            let term = a.multiply(&a.basis_vector(i), &a.basis_vector(j));
            for k in 0..n {
                h[k] = &h[k] + &(inv.get(j, i) * &term[k]);
            }
        }
    }
    h
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut algebras = Vec::new();
    while algebras.len() < 10 {
        let a = sampling::random_commutative_algebra(&mut rng, 3);
        if verify_frobenius(&a).verdict.passed() {
            algebras.push(a);
        }
    }
    for (i, a) in algebras.iter().enumerate() {
        for (name, lhs, rhs) in FROBENIUS_RELATIONS {
            let l = eval_closed_2d(&parse_word(lhs, Dimension::Two).unwrap(), a, None).map_err(|e| e.to_string())?;
            let r = eval_closed_2d(&parse_word(rhs, Dimension::Two).unwrap(), a, None).map_err(|e| e.to_string())?;
            ensure(l == r, || format!("algebra {i}: {name} fails"))?;
        }
        let h = handle_from_gram(a);
        for g in 0..=3u32 {
            let word = eval_closed_2d(&genus_word(g as usize), a, None).map_err(|e| e.to_string())?;
            let mut power = a.unit().to_vec();
            for _ in 0..g {
                power = a.multiply(&power, &h);
            }
            let expected = a.apply_counit(&power);
            ensure(word.get(0, 0) == &expected, || format!("algebra {i}: genus {g} gives {}", word.get(0, 0)))?;
        }
    }
    let torus = parse_word("cup ; comul ; mul ; cap", Dimension::Two).unwrap();
    for n in [2, 3, 6] {
        let a = make_group_algebra(&cyclic(n).unwrap());
        let v = eval_closed_2d(&torus, &a, None).map_err(|e| e.to_string())?;
        ensure(v.get(0, 0) == &Scalar::from_integer(n as i64), || format!("torus over Z{n} gives {}", v.get(0, 0)))?;
    }
    Ok("7 relations on 10 algebras, genus 0..3, torus over Z2, Z3, Z6".into())
}

// ---------------------------------------------------------------------------
// 5. boundary reduction
// ---------------------------------------------------------------------------

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let lambdas = [
        Scalar::one(),
        Scalar::from_integer(2),
        Scalar::from_ratio(1, 2),
        Scalar::root_of_unity(4, 1),
    ];
    for i in 0..20 {
        let dim = 1 + i % 3;
        let bc = sampling::random_boundary_table(&mut rng, dim);
        for lambda in &lambdas {
            let z = reduce_boundary(lambda, &bc).map_err(|e| format!("table {i}, λ = {lambda}: {e}"))?;
            let a = verify_anomaly(&z.anomaly);
            let t = verify_anomalous_theory(&z);
            ensure(a.passed() && t.passed(), || format!("table {i}, λ = {lambda}: {a}; {t}"))?;
        }
    }

    let wm = auto_model_1d().map_err(|e| e.to_string())?;
    let circle = find_word(&wm, "", "coev ; swap ; ev").ok_or("circle missing from the model")?;
    let strip = find_word(&wm, "", "lbnd ; rbnd").ok_or("strip missing from the model")?;
    for i in 0..20 {
        let dim = 1 + i % 3;
        let v: Vec<Scalar> = (0..dim).map(|_| sampling::random_integer(&mut rng, 3)).collect();
        let phi: Vec<Scalar> = (0..dim).map(|_| sampling::random_integer(&mut rng, 3)).collect();
        let z = reduce_boundary(&Scalar::one(), &BoundaryTable::standard(v.clone(), phi.clone()))
            .map_err(|e| e.to_string())?;
        ensure(z.anomaly.psi.iter().all(Scalar::is_one), || "λ = 1 anomaly is not trivial".into())?;
        let pairing: Scalar = v.iter().zip(&phi).map(|(a, b)| a * b).sum();
        let honest_circle = eval_1d(&wm.words[circle], dim, &v, &phi).map_err(|e| e.to_string())?;
        let honest_strip = eval_1d(&wm.words[strip], dim, &v, &phi).map_err(|e| e.to_string())?;
        ensure(z.maps[circle].get(0, 0) == &Scalar::from_integer(dim as i64), || format!("circle = {}", z.maps[circle].get(0, 0)))?;
        ensure(z.maps[strip].get(0, 0) == &pairing, || format!("strip = {}", z.maps[strip].get(0, 0)))?;
        ensure(z.maps[circle] == honest_circle && z.maps[strip] == honest_strip, || "differs from the 1d theory".into())?;
    }
    Ok("80 reductions coherent, λ = 1 matches (v, φ)".into())
}

// ---------------------------------------------------------------------------
// 6. transmission
// ---------------------------------------------------------------------------

fn criterion_6() -> Outcome {
    let g = symmetric(3).unwrap();
    let fixed = |x: usize| g.name(x).bytes().enumerate().filter(|&(i, b)| (b - b'1') as usize == i).count() as i64;
    for (name, rho) in s3_irreps() {
        let got = transmission(&g, &rho).map_err(|e| e.to_string())?;
        for (k, class) in conjugacy_classes(&g).iter().enumerate() {
            let x = class[0];
            let trace: Scalar = (0..rho.dim).map(|i| rho.mats[x].get(i, i).clone()).sum();
            let character = match name {
                "trivial" => 1,
                "sign" if fixed(x) == 1 => -1,
                "sign" => 1,
                _ => fixed(x) - 1,
            };
            ensure(got[k] == trace && trace == Scalar::from_integer(character), || {
                format!("{name} on class {k}: {} vs {character}", got[k])
            })?;
        }
    }
    Ok("3 irreducibles, 3 classes each".into())
}

// ---------------------------------------------------------------------------
// 7. modular defect
// ---------------------------------------------------------------------------

type C = (f64, f64);

fn cmatmul(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold((0.0, 0.0), |acc, k| {
                        let (x, y) = (a[i][k], b[k][j]);
                        (acc.0 + x.0 * y.0 - x.1 * y.1, acc.1 + x.0 * y.1 + x.1 * y.0)
                    })
                })
                .collect()
        })
        .collect()
}

/// `(ST)³·S⁻²` in floating point, with `S⁻¹ = S̄ᵀ` for unitary `S`.
fn float_defect(s: Vec<Vec<C>>, t: Vec<Vec<C>>) -> Result<C, String> {
    let n = s.len();
    let s_inv: Vec<Vec<C>> = (0..n).map(|i| (0..n).map(|j| (s[j][i].0, -s[j][i].1)).collect()).collect();
    let st = cmatmul(&s, &t);
    let mut m = cmatmul(&cmatmul(&st, &st), &st);
    m = cmatmul(&cmatmul(&m, &s_inv), &s_inv);
    let c = m[0][0];
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let want = if i == j { c } else { (0.0, 0.0) };
            if (x.0 - want.0).abs() > 1e-9 || (x.1 - want.1).abs() > 1e-9 {
                return Err("float relator is not scalar".into());
            }
        }
    }
    Ok(c)
}

fn criterion_7() -> Outcome {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let re = |x: f64| (x, 0.0);
    let semion_float = (
        vec![vec![re(r), re(r)], vec![re(r), re(-r)]],
        vec![vec![re(1.0), re(0.0)], vec![re(0.0), (0.0, 1.0)]],
    );
    let h = [[1.0, 1.0, 1.0, 1.0], [1.0, 1.0, -1.0, -1.0], [1.0, -1.0, 1.0, -1.0], [1.0, -1.0, -1.0, 1.0]];
    let toric_float = (
        h.iter().map(|row| row.iter().map(|&x| re(x / 2.0)).collect()).collect(),
        (0..4)
            .map(|i| (0..4).map(|j| re(if i != j { 0.0 } else if i == 3 { -1.0 } else { 1.0 })).collect())
            .collect(),
    );
    let relator = parse_relator("(ST)^3 S^-2").map_err(|e| e.to_string())?;
    let cases = [
        ("semion", ModularData::semion(), semion_float, Scalar::root_of_unity(8, 1)),
        ("toric code", ModularData::toric_code(), toric_float, Scalar::one()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut products = 0;
    for (name, m, (sf, tf), exact) in cases {
        let d = modular_defect(&m, &relator).map_err(|e| format!("{name}: {e}"))?;
        let f = float_defect(sf, tf)?;
        let e = d.embed_complex();
        ensure((e.0 - f.0).abs() < 1e-9 && (e.1 - f.1).abs() < 1e-9, || format!("{name}: {d} vs float {f:?}"))?;
        ensure(d == exact, || format!("{name}: {d} vs exact {exact}"))?;

        // pieces with scalar value, and their letter counts
        let pieces = [("(ST)^3", 6), ("S^2", 2), ("s^2", 2), ("S^4", 4), ("T^4", 4), ("t^4", 4), ("T(ST)^3t", 8), ("sS", 2)];
        let scalar_pieces: Vec<(&str, usize, Scalar)> = pieces
            .iter()
            .filter_map(|&(p, len)| Some((p, len, modular_defect(&m, &parse_relator(p).ok()?).ok()?)))
            .collect();
        for _ in 0..200 {
            let mut text = String::new();
            let mut letters = 0;
            let mut expected = Scalar::one();
            loop {
                let (p, len, v) = &scalar_pieces[rng.gen_range(0..scalar_pieces.len())];
                if letters + len > 12 {
                    break;
                }
                text.push_str(p);
                letters += len;
                expected = &expected * v;
            }
            if text.is_empty() {
                continue;
            }
            let got = modular_defect(&m, &parse_relator(&text).map_err(|e| e.to_string())?)
                .map_err(|e| format!("{name} {text}: {e}"))?;
            ensure(got == expected, || format!("{name}: defect of {text} is {got}, expected {expected}"))?;
            products += 1;
        }
    }
    Ok(format!("semion q8, toric code 1, {products} products multiplicative"))
}

// ---------------------------------------------------------------------------
// 8. determinism and round trips
// ---------------------------------------------------------------------------

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn criterion_8() -> Outcome {
    let runs: Vec<Vec<String>> = vec![
        vec!["projrep".into(), "verify".into(), fixture("pauli.json")],
        vec!["--seed".into(), "8".into(), "cob".into(), "random".into(), "--count".into(), "50".into()],
        vec!["--format".into(), "json".into(), "cocycle".into(), "verify".into(), fixture("klein_cocycle.json"), fixture("bad_cocycle.json")],
        vec!["--parallel".into(), "anomaly".into(), "reduce".into(), fixture("boundary.json"), fixture("boundary_bad.json")],
        vec!["modular".into(), "defect".into(), fixture("semion.json"), "(ST)^3 S^-2".into()],
    ];
    for args in &runs {
        let outputs: Vec<(Option<i32>, Vec<u8>)> = (0..3)
            .map(|_| {
                let o = Command::new(env!("CARGO_BIN_EXE_workbench")).args(args).output().expect("binary runs");
                (o.status.code(), o.stdout)
            })
            .collect();
        ensure(outputs.iter().all(|o| o == &outputs[0]), || format!("{args:?} differs between runs"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let sources = [
        (Dimension::Two, Object::Circles(1)),
        (Dimension::Two, Object::Circles(0)),
        (Dimension::One, Object::Points(Vec::new())),
        (Dimension::Constrained, Object::Constrained(Vec::new())),
    ];
    for i in 0..1000 {
        let (dim, source) = &sources[i % sources.len()];
        let depth = rng.gen_range(1..=6);
        let w = random_word(&mut rng, *dim, depth, source, 3);
        ensure(w.ast.depth() <= 6, || format!("word {i} is too deep"))?;
        let text = serialize_word(&w);
        let (ast, _) = parse_ast(&text, *dim).map_err(|e| format!("word {i} `{text}`: {e}"))?;
        ensure(ast == w.ast && ast.to_string() == text, || format!("word {i} `{text}` does not round-trip"))?;
    }
    Ok(format!("{} CLI runs stable, 1000 words round-trip", runs.len()))
}

// ---------------------------------------------------------------------------

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Outcome, u64); 8] = [
        (1, criterion_1, 5),
        (2, criterion_2, 5),
        (3, criterion_3, 30),
        (4, criterion_4, 10),
        (5, criterion_5, 10),
        (6, criterion_6, 1),
        (7, criterion_7, 2),
        (8, criterion_8, 5),
    ];
    let mut failed = Vec::new();
    for (n, f, budget) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(budget);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        println!("criterion {n}: {status} ({:.2} s of {budget} s) {detail}", elapsed.as_secs_f64());
        if status == "FAIL" {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
