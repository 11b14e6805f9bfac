//! Projective representations, homotopy fixed points of 2-characters, the
//! realization functor between them, and the holonomy obstruction.
//!
//! A projective representation satisfies `φ_{gh} = α(g,h)·φ_g·φ_h`, while a
//! fixed point for a 2-character with scalar `ψ` satisfies
//! `φ_{gh}·ψ_{g,h} = φ_g·φ_h`. The same matrices therefore form a fixed point
//! for `T(α⁻¹)`: [`to_fixed_point`] copies the matrices and targets that
//! character, and [`from_fixed_point`] inverts the table back.

use crate::character2::{
    from_cocycle, CharacterError, Cocycle, TwoCharacter,
};
use crate::group::FiniteGroup;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::verdict::{Failure, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjRepError {
    #[error("expected {expected} matrices of size {dim}×{dim}")]
    Shape { expected: usize, dim: usize },
    #[error("character is not of the form T(α) over a discrete group")]
    CharacterNotCocycleForm,
    #[error("φ_{{δ(a)g}}⁻¹·φ_g is not a scalar multiple of the identity at (a={0}, g={1})")]
    NotScalarMultiple(usize, usize),
    #[error("holonomy is only defined over a 2-group character")]
    NotTwoGroup,
    #[error("holonomy extraction needs a nonzero fixed point")]
    ZeroDimensional,
    #[error("matrix for element {0} is singular")]
    Singular(usize),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

/// `(V, φ^α)` with `φ^α_{gh} = α(g,h)·φ^α_g·φ^α_h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjRep {
    pub cocycle: Cocycle,
    pub dim: usize,
    pub mats: Vec<Matrix>,
}

impl ProjRep {
    pub fn new(cocycle: Cocycle, dim: usize, mats: Vec<Matrix>) -> Result<Self, ProjRepError> {
        check_shape(cocycle.group().order(), dim, &mats)?;
        Ok(ProjRep { cocycle, dim, mats })
    }

    pub fn group(&self) -> &FiniteGroup {
        self.cocycle.group()
    }

    /// A linear representation viewed as projective with trivial cocycle.
    pub fn honest(group: FiniteGroup, dim: usize, mats: Vec<Matrix>) -> Result<Self, ProjRepError> {
        Self::new(Cocycle::trivial(group), dim, mats)
    }

    /// Reads `α(g,h)` off `φ_{gh} = α(g,h)·φ_g·φ_h` and checks it is a cocycle.
    pub fn infer(group: FiniteGroup, dim: usize, mats: Vec<Matrix>) -> Result<Self, ProjRepError> {
        check_shape(group.order(), dim, &mats)?;
        let inverses = inverses(&mats)?;
        let mut values = Vec::with_capacity(group.order());
        for g in group.elements() {
            let mut row = Vec::with_capacity(group.order());
            for h in group.elements() {
                // α(g,h) = φ_{gh}·φ_h⁻¹·φ_g⁻¹
                let m = mats[group.mul(g, h)]
                    .matmul(&inverses[h])
                    .matmul(&inverses[g]);
                let a = if dim == 0 {
                    Scalar::one()
                } else {
                    m.as_scalar_multiple_of_identity().ok_or_else(|| {
                        CharacterError::NotACocycle(format!(
                            "φ({}) is not proportional to φ({})·φ({})",
                            group.name(group.mul(g, h)),
                            group.name(g),
                            group.name(h)
                        ))
                    })?
                };
                row.push(a);
            }
            values.push(row);
        }
        let cocycle = Cocycle::new(group, values)?;
        Ok(ProjRep { cocycle, dim, mats })
    }

    /// `φ'_g = β(g)·φ_g`, a projective representation for `α·δβ`.
    pub fn rescale(&self, beta: &[Scalar]) -> ProjRep {
        let g = self.group().clone();
        let cocycle = self
            .cocycle
            .product(&Cocycle::coboundary(g, beta))
            .expect("same group");
        let mats = self.mats.iter().zip(beta).map(|(m, b)| m.scale(b)).collect();
        ProjRep {
            cocycle,
            dim: self.dim,
            mats,
        }
    }

    /// `P·φ_g·P⁻¹`; the cocycle is unchanged.
    pub fn conjugate_by(&self, p: &Matrix) -> Option<ProjRep> {
        let pinv = p.inverse()?;
        let mats = self.mats.iter().map(|m| p.matmul(m).matmul(&pinv)).collect();
        Some(ProjRep {
            cocycle: self.cocycle.clone(),
            dim: self.dim,
            mats,
        })
    }
}

fn check_shape(n: usize, dim: usize, mats: &[Matrix]) -> Result<(), ProjRepError> {
    let ok = mats.len() == n && mats.iter().all(|m| m.rows() == dim && m.cols() == dim);
    if ok {
        Ok(())
    } else {
        Err(ProjRepError::Shape { expected: n, dim })
    }
}

fn inverses(mats: &[Matrix]) -> Result<Vec<Matrix>, ProjRepError> {
    mats.iter()
        .enumerate()
        .map(|(i, m)| m.inverse().ok_or(ProjRepError::Singular(i)))
        .collect()
}

fn first_singular(mats: &[Matrix]) -> Option<usize> {
    mats.iter().position(|m| !m.is_invertible())
}

/// Exhaustive check of `φ_{gh} = α(g,h)·φ_g·φ_h` over all pairs.
pub fn verify_projrep(r: &ProjRep) -> Verdict {
    let g = r.group();
    let n = g.order();
    if check_shape(n, r.dim, &r.mats).is_err() {
        return Verdict::fail("shape", "pairs", vec![], "matrix list has the wrong shape".into());
    }
    if let Some(i) = first_singular(&r.mats) {
        return Verdict::fail(
            "invertibility",
            "pairs",
            vec![i],
            format!("φ({}) is singular", g.name(i)),
        );
    }
    let mut v = Verdict::new("projective relation", "pairs");
    for a in g.elements() {
        for b in g.elements() {
            let rhs = r.mats[a].matmul(&r.mats[b]).scale(r.cocycle.value(a, b));
            let ok = r.mats[g.mul(a, b)] == rhs;
            if !v.record(ok, || pair_failure("projective relation", g, a, b)) {
                return v.finish();
            }
        }
    }
    v.finish()
}

fn pair_failure(relation: &str, g: &FiniteGroup, a: usize, b: usize) -> Failure {
    Failure::new(relation, vec![a, b], format!("(g={}, h={})", g.name(a), g.name(b)))
}

// ---------------------------------------------------------------------------
// Homotopy fixed points
// ---------------------------------------------------------------------------

/// `(V, φ)` with `φ_g: W_g ⊗ V → V`, lines trivialized so `φ_g` is a plain matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyFixedPoint {
    pub character: TwoCharacter,
    pub dim: usize,
    pub maps: Vec<Matrix>,
}

impl HomotopyFixedPoint {
    pub fn new(character: TwoCharacter, dim: usize, maps: Vec<Matrix>) -> Result<Self, ProjRepError> {
        check_shape(character.group().order(), dim, &maps)?;
        Ok(HomotopyFixedPoint { character, dim, maps })
    }
}

/// The realization functor: same space, same matrices, over `T(α⁻¹)`.
pub fn to_fixed_point(r: &ProjRep) -> HomotopyFixedPoint {
    HomotopyFixedPoint {
        character: from_cocycle(&r.cocycle.inverse()),
        dim: r.dim,
        maps: r.mats.clone(),
    }
}

/// Inverse of [`to_fixed_point`] on characters of the form `T(β)`.
pub fn from_fixed_point(p: &HomotopyFixedPoint) -> Result<ProjRep, ProjRepError> {
    if !p.character.is_cocycle_form() {
        return Err(ProjRepError::CharacterNotCocycleForm);
    }
    let beta = Cocycle::from_table_unchecked(p.character.group().clone(), p.character.psi.clone())?;
    Ok(ProjRep {
        cocycle: beta.inverse(),
        dim: p.dim,
        mats: p.maps.clone(),
    })
}

/// Checks `φ_{gh}·ψ_{g,h} = φ_g·φ_h` on all pairs and, over a 2-group,
/// `φ_g = φ_{δ(a)g}·ψ_{a,g}` on every morphism `a: g → δ(a)g`.
pub fn verify_fixed_point(p: &HomotopyFixedPoint) -> Verdict {
    let c = &p.character;
    let g = c.group();
    if check_shape(g.order(), p.dim, &p.maps).is_err() {
        return Verdict::fail("shape", "instances", vec![], "map list has the wrong shape".into());
    }
    if let Some(i) = first_singular(&p.maps) {
        return Verdict::fail(
            "invertibility",
            "instances",
            vec![i],
            format!("φ({}) is singular", g.name(i)),
        );
    }
    let mut v = Verdict::new("homotopy fixed point", "instances");
    for a in g.elements() {
        for b in g.elements() {
            let lhs = p.maps[g.mul(a, b)].scale(c.psi(a, b));
            let rhs = p.maps[a].matmul(&p.maps[b]);
            if !v.record(lhs == rhs, || pair_failure("compatibility", g, a, b)) {
                return v.finish();
            }
        }
    }
    if let (Some(x), Some(hol)) = (c.crossed_module(), &c.holonomy) {
        for a in x.fiber.elements() {
            for gi in g.elements() {
                let rhs = p.maps[x.target(a, gi)].scale(&hol[a][gi]);
                if !v.record(p.maps[gi] == rhs, || {
                    Failure::new(
                        "holonomy diagram",
                        vec![a, gi],
                        format!("(a={}, g={})", x.fiber.name(a), g.name(gi)),
                    )
                }) {
                    return v.finish();
                }
            }
        }
    }
    v.finish()
}

/// The scalar `λ` with `φ_{δ(a)g}⁻¹·φ_g = λ·id`.
pub fn extract_holonomy(p: &HomotopyFixedPoint, a: usize, g: usize) -> Result<Scalar, ProjRepError> {
    let x = p.character.crossed_module().ok_or(ProjRepError::NotTwoGroup)?;
    if p.dim == 0 {
        return Err(ProjRepError::ZeroDimensional);
    }
    let h = x.target(a, g);
    let inv = p.maps[h].inverse().ok_or(ProjRepError::Singular(h))?;
    inv.matmul(&p.maps[g])
        .as_scalar_multiple_of_identity()
        .ok_or(ProjRepError::NotScalarMultiple(a, g))
}

/// `φ_g e_h = α(g,h)⁻¹·e_{gh}` on `𝕂[G]`.
///
/// With `α` itself as coefficient the matrices satisfy the relation for `α⁻¹`
/// instead; the inverse is the choice that verifies against `α`.
pub fn twisted_regular_rep(alpha: &Cocycle) -> ProjRep {
    let g = alpha.group();
    let n = g.order();
    let mats = g
        .elements()
        .map(|x| {
            let mut m = Matrix::zeros(n, n);
            for h in g.elements() {
                let c = alpha.value(x, h).inv().expect("cocycle values are nonzero");
                m.set(g.mul(x, h), h, c);
            }
            m
        })
        .collect();
    ProjRep {
        cocycle: alpha.clone(),
        dim: n,
        mats,
    }
}

/// The Pauli representation of the Klein four-group: `X` at `(1,0)`, `Z` at
/// `(0,1)` and `XZ` at `(1,1)`, with `α` read off the products.
pub fn pauli() -> ProjRep {
    let k = crate::group::build_catalog_group("klein").expect("catalog");
    let x = Matrix::from_integers(&[&[0, 1], &[1, 0]]);
    let z = Matrix::from_integers(&[&[1, 0], &[0, -1]]);
    let xz = x.matmul(&z);
    let mats = vec![Matrix::identity(2), z, x, xz];
    ProjRep::infer(k, 2, mats).expect("Pauli matrices form a projective representation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character2::{klein_cocycle, verify_cocycle, CharacterDomain};
    use crate::group::{build_catalog_group, cyclic, CrossedModule};

    #[test]
    fn trivial_rep_passes() {
        let g = cyclic(3).unwrap();
        let r = ProjRep::honest(g, 1, vec![Matrix::identity(1); 3]).unwrap();
        assert_eq!(verify_projrep(&r).to_string(), "projective relation holds (9/9 pairs)");
        let p = to_fixed_point(&r);
        assert!(verify_fixed_point(&p).passed());
        assert_eq!(from_fixed_point(&p).unwrap(), r);
    }

    #[test]
    fn pauli_fixture() {
        let r = pauli();
        assert!(verify_cocycle(&r.cocycle).passed());
        assert!(!r.cocycle.is_trivial());
        assert_eq!(verify_projrep(&r).to_string(), "projective relation holds (16/16 pairs)");
        // XZ = -ZX, so the commutator pairing of (1,0) and (0,1) is -1
        let pairing = crate::character2::commutator_pairing(&r.cocycle, 2, 1).unwrap();
        assert_eq!(pairing, Scalar::from_integer(-1));
    }

    #[test]
    fn pauli_sign_flip_fails() {
        let mut r = pauli();
        r.mats[3] = r.mats[3].scale(&Scalar::from_integer(-1));
        let v = verify_projrep(&r);
        assert!(!v.passed());
        assert_eq!(v.failure.unwrap().relation, "projective relation");
    }

    #[test]
    fn realization_round_trip() {
        let r = pauli();
        let p = to_fixed_point(&r);
        assert!(verify_fixed_point(&p).passed());
        assert_eq!(p.maps, r.mats);
        let back = from_fixed_point(&p).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn zero_dimensional_fixed_point() {
        let r = ProjRep::new(klein_cocycle(), 0, vec![Matrix::zeros(0, 0); 4]).unwrap();
        assert!(verify_projrep(&r).passed());
        let p = to_fixed_point(&r);
        assert!(verify_fixed_point(&p).passed());
        assert_eq!(extract_holonomy(&p.clone_lifted(), 0, 0), Err(ProjRepError::ZeroDimensional));
    }

    impl HomotopyFixedPoint {
        fn clone_lifted(&self) -> HomotopyFixedPoint {
            HomotopyFixedPoint {
                character: self.character.lift_to_two_group(),
                dim: self.dim,
                maps: self.maps.clone(),
            }
        }
    }

    #[test]
    fn from_fixed_point_rejects_two_group_characters() {
        let p = to_fixed_point(&pauli()).clone_lifted();
        assert_eq!(from_fixed_point(&p), Err(ProjRepError::CharacterNotCocycleForm));
    }

    // Brute force over both candidate coefficient conventions.
    fn regular_with(alpha: &Cocycle, invert: bool) -> ProjRep {
        let g = alpha.group();
        let n = g.order();
        let mats = g
            .elements()
            .map(|x| {
                Matrix::from_fn(n, n, |row, col| {
                    if row != g.mul(x, col) {
                        Scalar::zero()
                    } else if invert {
                        alpha.value(x, col).inv().unwrap()
                    } else {
                        alpha.value(x, col).clone()
                    }
                })
            })
            .collect();
        ProjRep {
            cocycle: alpha.clone(),
            dim: n,
            mats,
        }
    }

    #[test]
    fn twisted_regular_convention() {
        let alpha = klein_cocycle();
        let inverted = regular_with(&alpha, true);
        // over μ_2 both agree; use a μ_4 cocycle to separate them
        assert!(verify_projrep(&inverted).passed());
        assert_eq!(twisted_regular_rep(&alpha), inverted);
        let g = cyclic(4).unwrap();
        let beta: Vec<Scalar> = (0..4).map(|k| Scalar::root_of_unity(8, [0, 1, 3, 2][k])).collect();
        let twisted = Cocycle::coboundary(g, &beta);
        assert!(verify_projrep(&regular_with(&twisted, true)).passed());
        assert!(!verify_projrep(&regular_with(&twisted, false)).passed());
        assert!(verify_projrep(&twisted_regular_rep(&twisted)).passed());
    }

    #[test]
    fn regular_rep_of_z2() {
        let r = twisted_regular_rep(&Cocycle::trivial(cyclic(2).unwrap()));
        assert_eq!(r.dim, 2);
        assert_eq!(r.mats[1], Matrix::from_integers(&[&[0, 1], &[1, 0]]));
    }

    fn holonomy_character(sign: i64) -> TwoCharacter {
        // δ trivial, A = Z2, ψ_{a,g} = sign^a
        let x = CrossedModule::trivial(cyclic(2).unwrap(), cyclic(2).unwrap());
        TwoCharacter {
            domain: CharacterDomain::TwoGroup(x),
            line_labels: vec!["K".into(); 2],
            psi: vec![vec![Scalar::one(); 2]; 2],
            holonomy: Some(vec![
                vec![Scalar::one(); 2],
                vec![Scalar::from_integer(sign); 2],
            ]),
        }
    }

    #[test]
    fn holonomy_is_extracted() {
        let c = holonomy_character(1);
        let p = HomotopyFixedPoint::new(c, 1, vec![Matrix::identity(1); 2]).unwrap();
        assert!(verify_fixed_point(&p).passed());
        for a in 0..2 {
            for g in 0..2 {
                assert!(extract_holonomy(&p, a, g).unwrap().is_one());
            }
        }
    }

    #[test]
    fn nonconstant_holonomy_blocks_fixed_points() {
        let c = holonomy_character(-1);
        assert!(crate::character2::verify_two_character(&c).passed());
        let p = HomotopyFixedPoint::new(c, 1, vec![Matrix::identity(1); 2]).unwrap();
        let v = verify_fixed_point(&p);
        assert_eq!(v.failure.unwrap().relation, "holonomy diagram");
    }

    #[test]
    fn non_scalar_holonomy_is_flagged() {
        let x = CrossedModule::identity_on(build_catalog_group("klein").unwrap());
        let c = TwoCharacter {
            domain: CharacterDomain::TwoGroup(x),
            line_labels: vec!["K".into(); 4],
            psi: vec![vec![Scalar::one(); 4]; 4],
            holonomy: Some(vec![vec![Scalar::one(); 4]; 4]),
        };
        let maps = vec![
            Matrix::identity(2),
            Matrix::from_integers(&[&[1, 0], &[0, -1]]),
            Matrix::from_integers(&[&[0, 1], &[1, 0]]),
            Matrix::from_integers(&[&[0, -1], &[1, 0]]),
        ];
        let p = HomotopyFixedPoint::new(c, 2, maps).unwrap();
        assert!(!verify_fixed_point(&p).passed());
        assert_eq!(extract_holonomy(&p, 1, 0), Err(ProjRepError::NotScalarMultiple(1, 0)));
    }
}
