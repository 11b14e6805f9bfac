//! Seeded generators for the property sweeps: cocycle tables, invertible
//! matrices, projective representations, fixed points over strict 2-groups,
//! commutative Frobenius algebras and boundary tables.

use rand::Rng;

use crate::anomaly::BoundaryTable;
use crate::character2::{Cocycle, CharacterDomain, TwoCharacter, TRIVIAL_LINE};
use crate::frobenius::{diagonal, field, truncated_polynomial, FrobeniusAlgebra};
use crate::group::{cyclic, CrossedModule, FiniteGroup};
use crate::matrix::Matrix;
use crate::projrep::{HomotopyFixedPoint, ProjRep};
use crate::scalar::Scalar;

/// `ζ_n^k` for uniform `k`.
pub fn random_root<R: Rng + ?Sized>(rng: &mut R, n: u32) -> Scalar {
    Scalar::root_of_unity(n, rng.gen_range(0..n as i64))
}

/// A nonzero rational `p/q` with `|p| ≤ bound`, `1 ≤ q ≤ 3`.
pub fn random_nonzero_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Scalar {
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-bound..=bound);
    }
    Scalar::from_ratio(p, rng.gen_range(1..=3))
}

pub fn random_integer<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Scalar {
    Scalar::from_integer(rng.gen_range(-bound..=bound))
}

/// A normalized table (`α(e,·) = α(·,e) = 1`) with entries uniform in `μ_n`.
/// Usually not a cocycle.
pub fn random_mu_table<R: Rng + ?Sized>(rng: &mut R, g: &FiniteGroup, n: u32) -> Cocycle {
    let e = g.identity();
    let values = g
        .elements()
        .map(|a| {
            g.elements()
                .map(|b| if a == e || b == e { Scalar::one() } else { random_root(rng, n) })
                .collect()
        })
        .collect();
    Cocycle::from_table_unchecked(g.clone(), values).expect("square table")
}

/// A normalized `μ_n` gauge `β` with `β(e) = 1`.
pub fn random_gauge<R: Rng + ?Sized>(rng: &mut R, g: &FiniteGroup, n: u32) -> Vec<Scalar> {
    g.elements()
        .map(|x| if x == g.identity() { Scalar::one() } else { random_root(rng, n) })
        .collect()
}

/// `α·δβ` for a uniform `μ_n` gauge `β`.
pub fn random_cohomologous<R: Rng + ?Sized>(rng: &mut R, alpha: &Cocycle, n: u32) -> Cocycle {
    let beta = random_gauge(rng, alpha.group(), n);
    alpha
        .product(&Cocycle::coboundary(alpha.group().clone(), &beta))
        .expect("same group")
}

/// An invertible matrix with small integer entries.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| random_integer(rng, 2));
        if m.is_invertible() {
            return m;
        }
    }
}

/// `P·(β·ρ)·P⁻¹` for a random gauge `β` (entries in `μ_4` times small
/// rationals) and random invertible `P`.
pub fn perturb_projrep<R: Rng + ?Sized>(rng: &mut R, rho: &ProjRep) -> ProjRep {
    let g = rho.group();
    let beta: Vec<Scalar> = g
        .elements()
        .map(|x| {
            if x == g.identity() {
                Scalar::one()
            } else {
                &random_root(rng, 4) * &random_nonzero_rational(rng, 3)
            }
        })
        .collect();
    let p = random_invertible(rng, rho.dim);
    rho.rescale(&beta).conjugate_by(&p).expect("P is invertible")
}

/// A random verified projective representation of `g`: either the twisted
/// regular representation of a random `μ_4` coboundary times `twist`, or a
/// perturbation of it.
pub fn random_projrep<R: Rng + ?Sized>(rng: &mut R, twist: &Cocycle) -> ProjRep {
    let alpha = random_cohomologous(rng, twist, 4);
    let regular = crate::projrep::twisted_regular_rep(&alpha);
    perturb_projrep(rng, &regular)
}

/// A random commutative Frobenius algebra of dimension `1..=max_dim`,
/// presented in a random basis.
pub fn random_commutative_algebra<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> FrobeniusAlgebra {
    let n = rng.gen_range(1..=max_dim);
    let base = match rng.gen_range(0..3) {
        0 if n == 1 => field(random_nonzero_rational(rng, 4)),
        1 => {
            // 𝕂[x]/xⁿ is Frobenius iff the top coefficient of ε is nonzero
            let mut counit: Vec<Scalar> = (0..n).map(|_| random_integer(rng, 2)).collect();
            counit[n - 1] = random_nonzero_rational(rng, 3);
            truncated_polynomial(counit).expect("positive dimension")
        }
        _ => diagonal(&(0..n).map(|_| random_nonzero_rational(rng, 4)).collect::<Vec<_>>()),
    };
    let p = random_invertible(rng, base.dim());
    base.change_basis(&p).expect("P is invertible")
}

/// A consistent boundary table: random `v`, `φ`, pairing `K` and `C = K⁻¹`.
pub fn random_boundary_table<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> BoundaryTable {
    let cev = random_invertible(rng, dim);
    BoundaryTable {
        dim,
        ldisk: (0..dim).map(|_| random_integer(rng, 3)).collect(),
        rdisk: (0..dim).map(|_| random_integer(rng, 3)).collect(),
        ccoev: cev.inverse().expect("invertible"),
        cev,
    }
}

/// Crossed modules with `|G|, |A| ≤ 4` used by the holonomy sweeps.
pub fn small_crossed_modules() -> Vec<(String, CrossedModule)> {
    let c = |n| cyclic(n).expect("cyclic");
    let klein = crate::group::build_catalog_group("klein").expect("catalog");
    vec![
        ("Z1 <- Z2".into(), CrossedModule::trivial(c(1), c(2))),
        ("Z2 <- Z2 (trivial)".into(), CrossedModule::trivial(c(2), c(2))),
        ("Z2 <- Z2 (identity)".into(), CrossedModule::identity_on(c(2))),
        ("Z3 <- Z3 (identity)".into(), CrossedModule::identity_on(c(3))),
        ("Z4 <- Z1".into(), CrossedModule::trivial(c(4), c(1))),
        ("Z4 <- Z4 (identity)".into(), CrossedModule::identity_on(c(4))),
        ("Z2 <- Z4 (trivial)".into(), CrossedModule::trivial(c(2), c(4))),
        ("K4 <- K4 (identity)".into(), CrossedModule::identity_on(klein)),
    ]
}

/// A nonzero fixed point `φ_g = c_g·ρ(g)` over a 2-group, where `ρ` is an
/// honest representation trivial on `δ(A)`, together with the character it
/// forces: `ψ_{g,h} = c_g c_h / c_{gh}` and `ψ_{a,g} = c_g / c_{δ(a)g}`.
pub fn random_two_group_fixed_point<R: Rng + ?Sized>(rng: &mut R, x: &CrossedModule) -> HomotopyFixedPoint {
    let g = &x.base;
    let coeff: Vec<Scalar> = g
        .elements()
        .map(|_| &random_root(rng, 4) * &random_nonzero_rational(rng, 3))
        .collect();
    let dim = rng.gen_range(1..=3);
    let image = x.boundary_image();
    let rho: Vec<Matrix> = if image.len() == 1 {
        // δ trivial: any representation of G; use the regular one conjugated
        let regular = crate::projrep::twisted_regular_rep(&Cocycle::trivial(g.clone()));
        let p = random_invertible(rng, g.order());
        regular.conjugate_by(&p).expect("invertible").mats
    } else {
        vec![Matrix::identity(dim); g.order()]
    };
    let maps: Vec<Matrix> = rho.iter().zip(&coeff).map(|(m, c)| m.scale(c)).collect();
    let psi = g
        .elements()
        .map(|a| {
            g.elements()
                .map(|b| (&coeff[a] * &coeff[b]).div(&coeff[g.mul(a, b)]).expect("nonzero"))
                .collect()
        })
        .collect();
    let holonomy = x
        .fiber
        .elements()
        .map(|a| {
            g.elements()
                .map(|h| coeff[h].div(&coeff[x.target(a, h)]).expect("nonzero"))
                .collect()
        })
        .collect();
    let character = TwoCharacter {
        domain: CharacterDomain::TwoGroup(x.clone()),
        line_labels: vec![TRIVIAL_LINE.to_string(); g.order()],
        psi,
        holonomy: Some(holonomy),
    };
    let dim = maps[0].rows();
    HomotopyFixedPoint { character, dim, maps }
}

/// Characters over trivial-boundary crossed modules with `ψ_{a,g} = χ(a)` for
/// a nontrivial character `χ` of `A`, and `ψ_{g,h} = α` on `G`.
pub fn nonconstant_holonomy_characters() -> Vec<(String, TwoCharacter)> {
    let c = |n| cyclic(n).expect("cyclic");
    // (|G|, |A|, χ(generator) as ζ_|A|^k, ψ_{g,h} a coboundary of this gauge on G)
    let cases: [(usize, usize, i64, Option<[i64; 2]>); 10] = [
        (1, 2, 1, None),
        (1, 3, 1, None),
        (1, 3, 2, None),
        (1, 4, 1, None),
        (1, 4, 2, None),
        (1, 4, 3, None),
        (2, 2, 1, None),
        (2, 2, 1, Some([0, 1])),
        (2, 4, 1, Some([0, 3])),
        (2, 3, 1, None),
    ];
    cases
        .iter()
        .map(|&(ng, na, k, gauge)| {
            let x = CrossedModule::trivial(c(ng), c(na));
            let alpha = match gauge {
                None => Cocycle::trivial(x.base.clone()),
                Some(exps) => {
                    let beta: Vec<Scalar> = exps.iter().take(ng).map(|&e| Scalar::root_of_unity(4, e)).collect();
                    Cocycle::coboundary(x.base.clone(), &beta)
                }
            };
            let chi = |a: usize| Scalar::root_of_unity(na as u32, k * a as i64);
            let holonomy = (0..na).map(|a| vec![chi(a); ng]).collect();
            let name = format!("Z{ng} <- Z{na}, χ = ζ{na}^{k}{}", if gauge.is_some() { ", twisted ψ" } else { "" });
            let character = TwoCharacter {
                domain: CharacterDomain::TwoGroup(x),
                line_labels: vec![TRIVIAL_LINE.to_string(); ng],
                psi: alpha.values().to_vec(),
                holonomy: Some(holonomy),
            };
            (name, character)
        })
        .collect()
}

/// A candidate fixed point for `c`: either matrices of a projective
/// representation realizing its `ψ` table, or random invertible matrices.
pub fn random_fixed_point_candidate<R: Rng + ?Sized>(rng: &mut R, c: &TwoCharacter) -> HomotopyFixedPoint {
    let g = c.group();
    let maps = if rng.gen_bool(0.5) {
        // realizes ψ through T(α⁻¹), so only the holonomy diagram can fail
        let alpha = c.psi_cocycle().inverse();
        perturb_projrep(rng, &crate::projrep::twisted_regular_rep(&alpha)).mats
    } else {
        let dim = rng.gen_range(1..=3);
        let mut maps: Vec<Matrix> = g.elements().map(|_| random_invertible(rng, dim)).collect();
        maps[g.identity()] = Matrix::identity(dim);
        maps
    };
    let dim = maps[0].rows();
    HomotopyFixedPoint {
        character: c.clone(),
        dim,
        maps,
    }
}
