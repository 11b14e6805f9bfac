//! Semitrivialized anomalies on finite presented cobordism models, anomalous
//! theories with their coherence diagrams, the reduction of a boundary
//! condition of the Euler theory to a 1d anomalous theory, and projective
//! defects of modular data.
//!
//! A model lists objects, generating morphisms, the composable pairs it knows
//! about (with their composite), and declared diffeomorphisms between parallel
//! morphisms. Lines are trivialized, so `ψ_{M'M}` and `f_{MM'*}` are nonzero
//! scalars and `φ_M` is a plain matrix `V_Σ → V_Σ'`.
//!
//! Euler bookkeeping: a 1d cobordism `M: Σ_in → Σ_out` carries
//! `e(M) = χ(M) − |Σ_in|`, which is additive under gluing and vanishes on
//! cylinders. Per generator: `id`, `swap`, `rbnd` give 0, `coev`, `lbnd` give
//! +1, `ev` gives −1. The Euler theory `E_λ` evaluated on `M × [0̲,1]` then
//! contributes `λ^{e(M)}`.

use std::collections::HashMap;
use std::fmt;

use crate::character2::{CharacterDomain, TwoCharacter, TRIVIAL_LINE};
use crate::cobordism::{
    eval_with, parse_word_from, swap_matrix, typecheck_from, Ast, CobError, CobWord, Dimension, Gen, Object, Sign,
};
use crate::group::FiniteGroup;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::verdict::{Failure, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnomalyError {
    #[error("malformed model: {0}")]
    Model(String),
    #[error("malformed data: {0}")]
    Shape(String),
    #[error("boundary data is inconsistent: {0}")]
    InconsistentBoundaryData(String),
    #[error("λ must be nonzero")]
    ZeroLambda,
    #[error("relator does not evaluate to a scalar multiple of the identity")]
    NotProjectivelyTrivial,
    #[error("relator parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Cob(#[from] CobError),
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelMorphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// `second ∘ first = result`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Composition {
    pub second: usize,
    pub first: usize,
    pub result: usize,
}

/// A finite presentation of a cobordism category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobModel {
    pub objects: Vec<String>,
    pub morphisms: Vec<ModelMorphism>,
    /// `identities[o]` is the trivial cylinder on object `o`.
    pub identities: Vec<usize>,
    pub compositions: Vec<Composition>,
    /// Declared diffeomorphisms `M → M'` between parallel morphisms.
    pub diffeos: Vec<(usize, usize)>,
    /// Objects with empty boundary, where `V = 𝕂` is forced.
    pub empty_objects: Vec<usize>,
}

impl CobModel {
    pub fn validate(&self) -> Result<(), AnomalyError> {
        let (no, nm) = (self.objects.len(), self.morphisms.len());
        let err = |m: String| Err(AnomalyError::Model(m));
        for (i, m) in self.morphisms.iter().enumerate() {
            if m.source >= no || m.target >= no {
                return err(format!("morphism {i} has an unknown endpoint"));
            }
        }
        if self.identities.len() != no {
            return err("one identity per object is required".into());
        }
        for (o, &id) in self.identities.iter().enumerate() {
            if id >= nm || self.morphisms[id].source != o || self.morphisms[id].target != o {
                return err(format!("identity of object {o} is not an endomorphism of it"));
            }
        }
        let mut seen = HashMap::new();
        for (k, c) in self.compositions.iter().enumerate() {
            if c.second >= nm || c.first >= nm || c.result >= nm {
                return err(format!("composition {k} names an unknown morphism"));
            }
            let (s, f, r) = (&self.morphisms[c.second], &self.morphisms[c.first], &self.morphisms[c.result]);
            if f.target != s.source || r.source != f.source || r.target != s.target {
                return err(format!("composition {k} is not composable as declared"));
            }
            if seen.insert((c.second, c.first), c.result).is_some() {
                return err(format!("composition {k} is declared twice"));
            }
        }
        for (k, &(a, b)) in self.diffeos.iter().enumerate() {
            if a >= nm || b >= nm {
                return err(format!("diffeomorphism {k} names an unknown morphism"));
            }
            let (x, y) = (&self.morphisms[a], &self.morphisms[b]);
            if x.source != y.source || x.target != y.target {
                return err(format!("diffeomorphism {k} relates non-parallel morphisms"));
            }
        }
        if self.empty_objects.iter().any(|&o| o >= no) {
            return err("unknown empty object".into());
        }
        Ok(())
    }

    fn composition_index(&self) -> HashMap<(usize, usize), usize> {
        self.compositions
            .iter()
            .enumerate()
            .map(|(k, c)| ((c.second, c.first), k))
            .collect()
    }

    fn is_identity(&self, m: usize) -> bool {
        self.identities.contains(&m)
    }
}

/// Incremental construction of a [`CobModel`] keyed by names.
#[derive(Debug, Default)]
pub struct ModelBuilder {
    model: CobModelParts,
    object_index: HashMap<String, usize>,
    morphism_index: HashMap<String, usize>,
    composition_keys: HashMap<(usize, usize), usize>,
}

#[derive(Debug, Default)]
struct CobModelParts {
    objects: Vec<String>,
    morphisms: Vec<ModelMorphism>,
    identities: Vec<Option<usize>>,
    compositions: Vec<Composition>,
    diffeos: Vec<(usize, usize)>,
    empty_objects: Vec<usize>,
}

impl ModelBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an object (and its identity morphism `id:<label>`) if new.
    pub fn object(&mut self, label: &str, empty: bool) -> usize {
        if let Some(&o) = self.object_index.get(label) {
            return o;
        }
        let o = self.model.objects.len();
        self.model.objects.push(label.to_string());
        self.model.identities.push(None);
        self.object_index.insert(label.to_string(), o);
        if empty {
            self.model.empty_objects.push(o);
        }
        let id = self.morphism(&format!("id:{label}"), o, o);
        self.model.identities[o] = Some(id);
        o
    }

    /// Adds a morphism if its name is new; returns its index either way.
    pub fn morphism(&mut self, name: &str, source: usize, target: usize) -> usize {
        if let Some(&m) = self.morphism_index.get(name) {
            return m;
        }
        let m = self.model.morphisms.len();
        self.model.morphisms.push(ModelMorphism {
            name: name.to_string(),
            source,
            target,
        });
        self.morphism_index.insert(name.to_string(), m);
        m
    }

    pub fn identity(&self, object: usize) -> usize {
        self.model.identities[object].expect("identities are created with objects")
    }

    pub fn compose(&mut self, second: usize, first: usize, result: usize) {
        if self.composition_keys.contains_key(&(second, first)) {
            return;
        }
        self.composition_keys.insert((second, first), self.model.compositions.len());
        self.model.compositions.push(Composition { second, first, result });
    }

    pub fn diffeo(&mut self, from: usize, to: usize) {
        self.model.diffeos.push((from, to));
    }

    pub fn morphism_named(&self, name: &str) -> Option<usize> {
        self.morphism_index.get(name).copied()
    }

    /// Adds `id ∘ M = M` and `M ∘ id = M` for every morphism.
    pub fn unit_compositions(&mut self) {
        for m in 0..self.model.morphisms.len() {
            let (s, t) = (self.model.morphisms[m].source, self.model.morphisms[m].target);
            let (is, it) = (self.identity(s), self.identity(t));
            self.compose(it, m, m);
            self.compose(m, is, m);
        }
    }

    pub fn build(self) -> Result<CobModel, AnomalyError> {
        let identities = self
            .model
            .identities
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| AnomalyError::Model("object without identity".into()))?;
        let model = CobModel {
            objects: self.model.objects,
            morphisms: self.model.morphisms,
            identities,
            compositions: self.model.compositions,
            diffeos: self.model.diffeos,
            empty_objects: self.model.empty_objects,
        };
        model.validate()?;
        Ok(model)
    }
}

// ---------------------------------------------------------------------------
// Anomalies and anomalous theories
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemitrivializedAnomaly {
    pub model: CobModel,
    /// Label of the trivialized line `W_M`; identities carry [`TRIVIAL_LINE`].
    pub lines: Vec<String>,
    /// `psi[k]` is `ψ_{M'M}` for `model.compositions[k]`.
    pub psi: Vec<Scalar>,
    /// `diffeo_action[k]` is `f_{MM'*}` for `model.diffeos[k]`.
    pub diffeo_action: Vec<Scalar>,
}

impl SemitrivializedAnomaly {
    pub fn trivial(model: CobModel) -> Self {
        SemitrivializedAnomaly {
            lines: vec![TRIVIAL_LINE.to_string(); model.morphisms.len()],
            psi: vec![Scalar::one(); model.compositions.len()],
            diffeo_action: vec![Scalar::one(); model.diffeos.len()],
            model,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnomalousTheory {
    pub anomaly: SemitrivializedAnomaly,
    /// `dim V_Σ` per object.
    pub spaces: Vec<usize>,
    /// `φ_M` per morphism, a `dim V_target × dim V_source` matrix.
    pub maps: Vec<Matrix>,
}

fn morphism_label(model: &CobModel, m: usize) -> String {
    model.morphisms[m].name.clone()
}

/// ψ associativity on every composable triple in the model, and the unit
/// conditions for identities.
pub fn verify_anomaly(w: &SemitrivializedAnomaly) -> Verdict {
    let model = &w.model;
    if let Err(e) = model.validate() {
        return Verdict::fail("model", "instances", vec![], e.to_string());
    }
    if w.lines.len() != model.morphisms.len()
        || w.psi.len() != model.compositions.len()
        || w.diffeo_action.len() != model.diffeos.len()
    {
        return Verdict::fail("shape", "instances", vec![], "anomaly tables do not match the model".into());
    }
    if let Some(k) = w.psi.iter().position(Scalar::is_zero) {
        return Verdict::fail("invertibility", "instances", vec![k], format!("ψ of composition {k} is zero"));
    }
    if let Some(k) = w.diffeo_action.iter().position(Scalar::is_zero) {
        return Verdict::fail("invertibility", "instances", vec![k], format!("diffeomorphism {k} acts by zero"));
    }
    let mut v = Verdict::new("anomaly coherence", "instances");
    for &id in &model.identities {
        let ok = w.lines[id] == TRIVIAL_LINE;
        if !v.record(ok, || {
            Failure::new("unit", vec![id], format!("identity {} carries line {}", morphism_label(model, id), w.lines[id]))
        }) {
            return v.finish();
        }
    }
    for (k, c) in model.compositions.iter().enumerate() {
        if model.is_identity(c.second) || model.is_identity(c.first) {
            let ok = w.psi[k].is_one();
            if !v.record(ok, || {
                Failure::new(
                    "unit",
                    vec![c.second, c.first],
                    format!(
                        "ψ({}, {}) = {} against an identity",
                        morphism_label(model, c.second),
                        morphism_label(model, c.first),
                        w.psi[k]
                    ),
                )
            }) {
                return v.finish();
            }
        }
    }
    let index = model.composition_index();
    for (k1, c1) in model.compositions.iter().enumerate() {
        // c1: M' ∘ M = P; look for M'' with M'' ∘ M' = Q
        for (k2, c2) in model.compositions.iter().enumerate() {
            if c2.first != c1.second {
                continue;
            }
            let (Some(&k3), Some(&k4)) = (index.get(&(c2.second, c1.result)), index.get(&(c2.result, c1.first))) else {
                continue;
            };
            let (m, m1, m2) = (c1.first, c1.second, c2.second);
            let same = model.compositions[k3].result == model.compositions[k4].result;
            if !v.record(same, || {
                Failure::new(
                    "model associativity",
                    vec![m2, m1, m],
                    format!("composites of ({}, {}, {}) differ", morphism_label(model, m2), morphism_label(model, m1), morphism_label(model, m)),
                )
            }) {
                return v.finish();
            }
            // ψ_{M'',M'∘M}·ψ_{M',M} = ψ_{M''∘M',M}·ψ_{M'',M'}
            let lhs = &w.psi[k3] * &w.psi[k1];
            let rhs = &w.psi[k4] * &w.psi[k2];
            if !v.record(lhs == rhs, || {
                Failure::new(
                    "associativity",
                    vec![m2, m1, m],
                    format!("({}, {}, {})", morphism_label(model, m2), morphism_label(model, m1), morphism_label(model, m)),
                )
            }) {
                return v.finish();
            }
        }
    }
    v.finish()
}

/// Dimensions, identities, `anom1` over declared diffeomorphisms and `anom2`
/// over composable pairs.
pub fn verify_anomalous_theory(z: &AnomalousTheory) -> Verdict {
    let w = &z.anomaly;
    let model = &w.model;
    if let Err(e) = model.validate() {
        return Verdict::fail("model", "diagrams", vec![], e.to_string());
    }
    if z.spaces.len() != model.objects.len() || z.maps.len() != model.morphisms.len() {
        return Verdict::fail("shape", "diagrams", vec![], "theory tables do not match the model".into());
    }
    if w.psi.len() != model.compositions.len() || w.diffeo_action.len() != model.diffeos.len() {
        return Verdict::fail("shape", "diagrams", vec![], "anomaly tables do not match the model".into());
    }
    let mut v = Verdict::new("anomalous theory", "diagrams");
    for &o in &model.empty_objects {
        if !v.record(z.spaces[o] == 1, || {
            Failure::new("dimensions", vec![o], format!("V({}) must be 𝕂", model.objects[o]))
        }) {
            return v.finish();
        }
    }
    for (m, mor) in model.morphisms.iter().enumerate() {
        let ok = z.maps[m].rows() == z.spaces[mor.target] && z.maps[m].cols() == z.spaces[mor.source];
        if !v.record(ok, || {
            Failure::new("dimensions", vec![m], format!("φ({}) has the wrong shape", mor.name))
        }) {
            return v.finish();
        }
    }
    for (o, &id) in model.identities.iter().enumerate() {
        let ok = z.maps[id] == Matrix::identity(z.spaces[o]);
        if !v.record(ok, || {
            Failure::new("identity", vec![id], format!("φ({}) is not the identity", morphism_label(model, id)))
        }) {
            return v.finish();
        }
    }
    for (k, &(a, b)) in model.diffeos.iter().enumerate() {
        // φ_M = φ_{M'}·(f ⊗ id)
        let ok = z.maps[a] == z.maps[b].scale(&w.diffeo_action[k]);
        if !v.record(ok, || {
            Failure::new(
                "anom1",
                vec![a, b],
                format!("({} ≅ {})", morphism_label(model, a), morphism_label(model, b)),
            )
        }) {
            return v.finish();
        }
    }
    for (k, c) in model.compositions.iter().enumerate() {
        // φ_{M'}·(id ⊗ φ_M) = φ_{M'∘M}·(ψ_{M'M} ⊗ id)
        let lhs = z.maps[c.second].matmul(&z.maps[c.first]);
        let rhs = z.maps[c.result].scale(&w.psi[k]);
        if !v.record(lhs == rhs, || {
            Failure::new(
                "anom2",
                vec![c.second, c.first],
                format!("({}, {})", morphism_label(model, c.second), morphism_label(model, c.first)),
            )
        }) {
            return v.finish();
        }
    }
    v.finish()
}

/// Change of trivialization of the lines by `β` (with `β = 1` on identities):
/// `ψ' = ψ·β(P)/(β(M')β(M))`, `f' = f·β(M')/β(M)`, `φ'_M = φ_M/β(M)`.
pub fn regauge(z: &AnomalousTheory, beta: &[Scalar]) -> Result<AnomalousTheory, AnomalyError> {
    let model = &z.anomaly.model;
    if beta.len() != model.morphisms.len() {
        return Err(AnomalyError::Shape("one gauge scalar per morphism is required".into()));
    }
    if beta.iter().any(Scalar::is_zero) {
        return Err(AnomalyError::Shape("gauge scalars must be nonzero".into()));
    }
    if model.identities.iter().any(|&id| !beta[id].is_one()) {
        return Err(AnomalyError::Shape("gauge must be 1 on identities".into()));
    }
    let div = |a: &Scalar, b: &Scalar| a.div(b).expect("nonzero");
    let psi = model
        .compositions
        .iter()
        .zip(&z.anomaly.psi)
        .map(|(c, p)| div(&(p * &beta[c.result]), &(&beta[c.second] * &beta[c.first])))
        .collect();
    let diffeo_action = model
        .diffeos
        .iter()
        .zip(&z.anomaly.diffeo_action)
        .map(|(&(a, b), f)| div(&(f * &beta[b]), &beta[a]))
        .collect();
    let maps = z
        .maps
        .iter()
        .zip(beta)
        .map(|(m, b)| m.scale(&b.inv().expect("nonzero")))
        .collect();
    let lines = z
        .anomaly
        .lines
        .iter()
        .zip(beta)
        .map(|(l, b)| if b.is_one() { l.clone() } else { format!("{l}·({b})") })
        .collect();
    Ok(AnomalousTheory {
        anomaly: SemitrivializedAnomaly {
            model: model.clone(),
            lines,
            psi,
            diffeo_action,
        },
        spaces: z.spaces.clone(),
        maps,
    })
}

// ---------------------------------------------------------------------------
// Cylinderization and boundary reduction
// ---------------------------------------------------------------------------

fn cylinder_gen(g: Gen) -> Result<Gen, CobError> {
    Ok(match g {
        Gen::Id(n) => Gen::Strip(n),
        Gen::Swap => Gen::CSwap,
        Gen::Ev => Gen::CEv,
        Gen::Coev => Gen::CCoev,
        Gen::Lbnd => Gen::LDisk,
        Gen::Rbnd => Gen::RDisk,
        g => return Err(CobError::Type { pos: None, msg: format!("{g} is not a 1d generator") }),
    })
}

fn cylinder_ast(a: &Ast) -> Result<Ast, CobError> {
    Ok(match a {
        Ast::Gen(g) => Ast::Gen(cylinder_gen(*g)?),
        Ast::Seq(v) => Ast::Seq(v.iter().map(cylinder_ast).collect::<Result<_, _>>()?),
        Ast::Par(v) => Ast::Par(v.iter().map(cylinder_ast).collect::<Result<_, _>>()?),
    })
}

/// `M ↦ M × [0̲,1]`, generator by generator.
pub fn cylinderize(w: &CobWord) -> Result<CobWord, CobError> {
    let Object::Points(src) = &w.source else {
        return Err(CobError::Type { pos: None, msg: "cylinderize needs a 1d word".into() });
    };
    typecheck_from(cylinder_ast(&w.ast)?, Dimension::Constrained, &Object::Constrained(src.clone()))
}

/// `e(M) = χ(M) − |Σ_in|`, summed over generators.
pub fn euler_weight(w: &CobWord) -> i64 {
    w.ast
        .generators()
        .iter()
        .map(|g| match g {
            Gen::Coev | Gen::Lbnd | Gen::CCoev | Gen::LDisk => 1,
            Gen::Ev | Gen::CEv => -1,
            _ => 0,
        })
        .sum()
}

/// Values of a boundary condition on the constrained generators, with
/// `V = 𝕂^dim`: `ldisk ↦ v`, `rdisk ↦ φ`, `cev(e_i ⊗ e_j*) = K_{ij}` and
/// `ccoev = Σ C_{ji} e_j* ⊗ e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryTable {
    pub dim: usize,
    pub ldisk: Vec<Scalar>,
    pub rdisk: Vec<Scalar>,
    pub cev: Matrix,
    pub ccoev: Matrix,
}

impl BoundaryTable {
    /// Standard duality pairing with the given boundary vectors.
    pub fn standard(v: Vec<Scalar>, phi: Vec<Scalar>) -> Self {
        let dim = v.len();
        BoundaryTable {
            dim,
            ldisk: v,
            rdisk: phi,
            cev: Matrix::identity(dim),
            ccoev: Matrix::identity(dim),
        }
    }

    fn check(&self) -> Result<(), AnomalyError> {
        let d = self.dim;
        let ok = self.ldisk.len() == d
            && self.rdisk.len() == d
            && (self.cev.rows(), self.cev.cols()) == (d, d)
            && (self.ccoev.rows(), self.ccoev.cols()) == (d, d);
        if ok {
            Ok(())
        } else {
            Err(AnomalyError::Shape(format!("boundary table entries must match dimension {d}")))
        }
    }
}

/// Evaluate a constrained word on a boundary table.
pub fn eval_constrained(w: &CobWord, bc: &BoundaryTable) -> Result<Matrix, AnomalyError> {
    bc.check()?;
    let d = bc.dim;
    let m = eval_with(&w.ast, &mut |g| match g {
        Gen::Strip(n) => Ok(Matrix::identity(d.pow(*n as u32))),
        Gen::CSwap => Ok(swap_matrix(d)),
        Gen::CEv => Ok(Matrix::row(bc.cev.entries().to_vec())),
        Gen::CCoev => Ok(Matrix::column(bc.ccoev.entries().to_vec())),
        Gen::LDisk => Ok(Matrix::column(bc.ldisk.clone())),
        Gen::RDisk => Ok(Matrix::row(bc.rdisk.clone())),
        g => Err(CobError::Type { pos: None, msg: format!("{g} is not a constrained generator") }),
    })?;
    Ok(m)
}

/// A chain `L_1 ; … ; L_k` of layers starting at `source`.
struct Chain {
    source: &'static str,
    layers: &'static [&'static str],
}

/// Chains whose contiguous pieces make up the automatic 1d model, and the
/// declared diffeomorphisms between the resulting morphisms.
const CHAINS: [Chain; 10] = [
    Chain { source: "", layers: &["coev", "swap", "ev"] },
    Chain { source: "", layers: &["coev", "swap", "swap", "swap", "ev"] },
    Chain { source: "", layers: &["lbnd", "rbnd"] },
    Chain { source: "+", layers: &["id1 | coev", "ev | id1"] },
    Chain { source: "-", layers: &["coev | id1", "id1 | ev"] },
    Chain { source: "++", layers: &["swap", "swap"] },
    Chain { source: "+-", layers: &["swap", "swap"] },
    Chain { source: "", layers: &["lbnd | lbnd", "swap", "rbnd | rbnd"] },
    Chain { source: "", layers: &["lbnd", "id1 | coev", "ev | id1", "rbnd"] },
    Chain { source: "", layers: &["coev", "coev | id2", "id1 | ev | id1", "swap", "ev"] },
];

/// `(source, word, source', word')`: the first is diffeomorphic to the second.
const DIFFEOS: [(&str, &str, &str, &str); 6] = [
    ("+", "id1 | coev ; ev | id1", "+", "id1"),
    ("-", "coev | id1 ; id1 | ev", "-", "id1"),
    ("++", "swap ; swap", "++", "id2"),
    ("+-", "swap ; swap", "+-", "id2"),
    ("", "coev ; swap ; swap ; swap ; ev", "", "coev ; swap ; ev"),
    ("", "lbnd ; id1 | coev ; ev | id1 ; rbnd", "", "lbnd ; rbnd"),
];

/// The automatic 1d model together with the word of every morphism.
pub struct WordModel {
    pub model: CobModel,
    pub words: Vec<CobWord>,
}

fn object_label(o: &Object) -> String {
    o.to_string()
}

fn points(signs: &str) -> Result<Object, AnomalyError> {
    Ok(Object::parse(signs)?)
}

fn word_name(w: &CobWord) -> String {
    format!("{} : {}", w.ast, object_label(&w.source))
}

/// Builds the 1d model from [`CHAINS`] and [`DIFFEOS`].
pub fn auto_model_1d() -> Result<WordModel, AnomalyError> {
    let mut b = ModelBuilder::new();
    let mut words: Vec<Option<CobWord>> = Vec::new();
    let add_object = |b: &mut ModelBuilder, words: &mut Vec<Option<CobWord>>, o: &Object| -> Result<usize, AnomalyError> {
        let before = b.model.morphisms.len();
        let idx = b.object(&object_label(o), o.is_empty());
        if b.model.morphisms.len() > before {
            let id = typecheck_from(Ast::Gen(Gen::Id(o.len())), Dimension::One, o)?;
            words.push(Some(id));
        }
        Ok(idx)
    };
    let add_word = |b: &mut ModelBuilder, words: &mut Vec<Option<CobWord>>, w: CobWord| -> Result<usize, AnomalyError> {
        let s = add_object(b, words, &w.source)?;
        let t = add_object(b, words, &w.target)?;
        // identity words are the identities themselves
        if let Ast::Gen(Gen::Id(_)) = w.ast {
            return Ok(b.identity(s));
        }
        let before = b.model.morphisms.len();
        let m = b.morphism(&word_name(&w), s, t);
        if b.model.morphisms.len() > before {
            words.push(Some(w));
        }
        Ok(m)
    };
    for chain in &CHAINS {
        let src = points(chain.source)?;
        // pieces[i][j] = morphism for layers i..=j
        let k = chain.layers.len();
        let mut layer_words = Vec::with_capacity(k);
        let mut cur = src.clone();
        for text in chain.layers {
            let w = parse_word_from(text, Dimension::One, &cur)?;
            cur = w.target.clone();
            layer_words.push(w);
        }
        let mut pieces = vec![vec![0usize; k]; k];
        for i in 0..k {
            for j in i..k {
                let ast = Ast::seq(layer_words[i..=j].iter().map(|w| w.ast.clone()).collect());
                let w = typecheck_from(ast, Dimension::One, &layer_words[i].source)?;
                pieces[i][j] = add_word(&mut b, &mut words, w)?;
            }
        }
        for i in 0..k {
            for j in i..k {
                for l in j + 1..k {
                    b.compose(pieces[j + 1][l], pieces[i][j], pieces[i][l]);
                }
            }
        }
    }
    for (s1, w1, s2, w2) in DIFFEOS {
        let a = parse_word_from(w1, Dimension::One, &points(s1)?)?;
        let c = parse_word_from(w2, Dimension::One, &points(s2)?)?;
        let ia = add_word(&mut b, &mut words, a)?;
        let ic = add_word(&mut b, &mut words, c)?;
        b.diffeo(ia, ic);
    }
    b.unit_compositions();
    let model = b.build()?;
    let words = words.into_iter().collect::<Option<Vec<_>>>().expect("every morphism has a word");
    Ok(WordModel { model, words })
}

fn lambda_power(lambda: &Scalar, e: i64) -> Scalar {
    lambda.pow(e).expect("λ is nonzero")
}

/// The anomalous 1d theory induced by a boundary condition `bc` of the Euler
/// theory `E_λ`: `φ_M = λ^{e(M)}·bc(M × [0̲,1])`, lines `λ^{e(M)}`,
/// `ψ_{M'M} = λ^{e(M'∘M) − e(M') − e(M)}` and `f_{MM'*} = λ^{e(M') − e(M)}`.
pub fn reduce_boundary(lambda: &Scalar, bc: &BoundaryTable) -> Result<AnomalousTheory, AnomalyError> {
    if lambda.is_zero() {
        return Err(AnomalyError::ZeroLambda);
    }
    bc.check()?;
    let WordModel { model, words } = auto_model_1d()?;
    let e: Vec<i64> = words.iter().map(euler_weight).collect();
    let mut maps = Vec::with_capacity(words.len());
    for (w, &ew) in words.iter().zip(&e) {
        let b = eval_constrained(&cylinderize(w)?, bc)?;
        maps.push(b.scale(&lambda_power(lambda, ew)));
    }
    let lines = e
        .iter()
        .map(|&k| if k == 0 { TRIVIAL_LINE.to_string() } else { format!("λ^{k}") })
        .collect();
    let psi = model
        .compositions
        .iter()
        .map(|c| lambda_power(lambda, e[c.result] - e[c.second] - e[c.first]))
        .collect();
    let diffeo_action = model
        .diffeos
        .iter()
        .map(|&(a, b)| lambda_power(lambda, e[b] - e[a]))
        .collect();
    let spaces = model
        .objects
        .iter()
        .enumerate()
        .map(|(o, _)| bc.dim.pow(words[model.identities[o]].source.len() as u32))
        .collect();
    let theory = AnomalousTheory {
        anomaly: SemitrivializedAnomaly {
            model,
            lines,
            psi,
            diffeo_action,
        },
        spaces,
        maps,
    };
    for v in [verify_anomaly(&theory.anomaly), verify_anomalous_theory(&theory)] {
        if let Some(f) = v.failure {
            return Err(AnomalyError::InconsistentBoundaryData(format!("{} violated at {}", f.relation, f.message)));
        }
    }
    Ok(theory)
}

/// Index of the morphism with the given word and source in the automatic model.
pub fn find_word(wm: &WordModel, source: &str, word: &str) -> Option<usize> {
    let w = parse_word_from(word, Dimension::One, &Object::parse(source).ok()?).ok()?;
    if let Ast::Gen(Gen::Id(_)) = w.ast {
        let label = object_label(&w.source);
        let o = wm.model.objects.iter().position(|x| *x == label)?;
        return Some(wm.model.identities[o]);
    }
    let name = word_name(&w);
    wm.model.morphisms.iter().position(|m| m.name == name)
}

// ---------------------------------------------------------------------------
// Mapping-cylinder models and the bridge to 2-characters
// ---------------------------------------------------------------------------

/// One object `+^n`, one morphism per element of `symmetric(n)` (its mapping
/// cylinder), and `M_σ ∘ M_τ = M_{στ}` for every pair. Morphism `k` is the
/// cylinder of group element `k`.
pub fn cylinder_model(g: &FiniteGroup, n: usize) -> Result<(CobModel, Vec<CobWord>), AnomalyError> {
    let signs = vec![Sign::Plus; n];
    let label = object_label(&Object::Points(signs.clone()));
    let perm_of = |x: usize| -> Result<Vec<usize>, AnomalyError> {
        let name = g.name(x);
        let p: Vec<usize> = name.bytes().map(|c| c.wrapping_sub(b'1') as usize).collect();
        if p.len() != n || p.iter().any(|&i| i >= n) {
            return Err(AnomalyError::Model(format!("element {name:?} is not a permutation of {n} points")));
        }
        Ok(p)
    };
    let mut words = Vec::with_capacity(g.order());
    let mut morphisms = Vec::with_capacity(g.order());
    for x in g.elements() {
        let w = crate::cobordism::mapping_cylinder(&signs, &perm_of(x)?)?;
        morphisms.push(ModelMorphism {
            name: format!("cyl({})", g.name(x)),
            source: 0,
            target: 0,
        });
        words.push(w);
    }
    let compositions = g
        .elements()
        .flat_map(|a| g.elements().map(move |b| Composition { second: a, first: b, result: g.mul(a, b) }))
        .collect();
    let model = CobModel {
        objects: vec![label],
        morphisms,
        identities: vec![g.identity()],
        compositions,
        diffeos: Vec::new(),
        empty_objects: if n == 0 { vec![0] } else { Vec::new() },
    };
    model.validate()?;
    Ok((model, words))
}

/// Restricts an anomaly on a [`cylinder_model`] to the 2-character
/// `ψ_{σ,τ} = ψ_{M_σ M_τ}` of the permutation group.
pub fn restrict_to_character(w: &SemitrivializedAnomaly, g: &FiniteGroup) -> Result<TwoCharacter, AnomalyError> {
    let n = g.order();
    if w.model.morphisms.len() != n || w.model.compositions.len() != n * n {
        return Err(AnomalyError::Model("anomaly does not live on a mapping-cylinder model of this group".into()));
    }
    let mut psi = vec![vec![Scalar::one(); n]; n];
    for (c, p) in w.model.compositions.iter().zip(&w.psi) {
        if c.result != g.mul(c.second, c.first) {
            return Err(AnomalyError::Model("composition table differs from the group law".into()));
        }
        psi[c.second][c.first] = p.clone();
    }
    Ok(TwoCharacter {
        domain: CharacterDomain::Discrete(g.clone()),
        line_labels: w.lines.clone(),
        psi,
        holonomy: None,
    })
}

// ---------------------------------------------------------------------------
// Modular data
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularData {
    pub dim: usize,
    pub s: Matrix,
    pub t: Matrix,
}

impl ModularData {
    pub fn new(s: Matrix, t: Matrix) -> Result<Self, AnomalyError> {
        let dim = s.rows();
        if dim == 0 || !s.is_square() || t.rows() != dim || t.cols() != dim {
            return Err(AnomalyError::Shape("S and T must be square of the same positive size".into()));
        }
        if !s.is_invertible() {
            return Err(AnomalyError::Shape("S is not invertible".into()));
        }
        let diagonal = (0..dim).all(|i| (0..dim).all(|j| i == j || t.get(i, j).is_zero()));
        if !diagonal {
            return Err(AnomalyError::Shape("T is not diagonal".into()));
        }
        if (0..dim).any(|i| t.get(i, i).is_zero()) {
            return Err(AnomalyError::Shape("T is not invertible".into()));
        }
        Ok(ModularData { dim, s, t })
    }

    /// Toric code: `S = ½·(Hadamard pattern)`, `T = diag(1, 1, 1, −1)`.
    pub fn toric_code() -> Self {
        let s = Matrix::from_integers(&[&[1, 1, 1, 1], &[1, 1, -1, -1], &[1, -1, 1, -1], &[1, -1, -1, 1]])
            .scale(&Scalar::from_ratio(1, 2));
        let t = Matrix::diagonal(&[Scalar::one(), Scalar::one(), Scalar::one(), Scalar::from_integer(-1)]);
        ModularData::new(s, t).expect("toric code data")
    }

    /// Semion: `S = (1/√2)[[1,1],[1,−1]]` with `1/√2 = (ζ_8 + ζ_8⁻¹)/2`, `T = diag(1, ζ_4)`.
    pub fn semion() -> Self {
        let r = &(&Scalar::root_of_unity(8, 1) + &Scalar::root_of_unity(8, -1)) * &Scalar::from_ratio(1, 2);
        let s = Matrix::from_integers(&[&[1, 1], &[1, -1]]).scale(&r);
        let t = Matrix::diagonal(&[Scalar::one(), Scalar::root_of_unity(4, 1)]);
        ModularData::new(s, t).expect("semion data")
    }
}

/// A word in `S`, `T` and their inverses `s`, `t`, with parentheses and
/// integer powers `^k`; letters multiply left to right as matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relator {
    S,
    T,
    SInv,
    TInv,
    Product(Vec<Relator>),
    Power(Box<Relator>, i64),
}

impl fmt::Display for Relator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relator::S => f.write_str("S"),
            Relator::T => f.write_str("T"),
            Relator::SInv => f.write_str("s"),
            Relator::TInv => f.write_str("t"),
            Relator::Product(v) if v.is_empty() => f.write_str("1"),
            Relator::Product(v) => v.iter().try_for_each(|r| write!(f, "{r}")),
            Relator::Power(r, k) => match **r {
                Relator::Product(_) => write!(f, "({r})^{k}"),
                _ => write!(f, "{r}^{k}"),
            },
        }
    }
}

pub fn parse_relator(text: &str) -> Result<Relator, AnomalyError> {
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut at = 0;
    let r = relator_product(&chars, &mut at, text.len())?;
    if at < chars.len() {
        return Err(AnomalyError::Parse { pos: chars[at].0, msg: format!("unexpected {:?}", chars[at].1) });
    }
    Ok(r)
}

fn relator_product(chars: &[(usize, char)], at: &mut usize, end: usize) -> Result<Relator, AnomalyError> {
    let mut parts = Vec::new();
    while *at < chars.len() {
        let (pos, c) = chars[*at];
        let base = match c {
            'S' => Relator::S,
            'T' => Relator::T,
            's' => Relator::SInv,
            't' => Relator::TInv,
            '1' => Relator::Product(Vec::new()),
            '*' | '.' | '·' => {
                *at += 1;
                continue;
            }
            '(' => {
                *at += 1;
                let inner = relator_product(chars, at, end)?;
                if chars.get(*at).map(|x| x.1) != Some(')') {
                    let p = chars.get(*at).map_or(end, |x| x.0);
                    return Err(AnomalyError::Parse { pos: p, msg: "expected ')'".into() });
                }
                *at += 1;
                parts.push(with_power(inner, chars, at, end)?);
                continue;
            }
            ')' => break,
            _ => return Err(AnomalyError::Parse { pos, msg: format!("unexpected {c:?}") }),
        };
        *at += 1;
        parts.push(with_power(base, chars, at, end)?);
    }
    Ok(if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        Relator::Product(parts)
    })
}

fn with_power(base: Relator, chars: &[(usize, char)], at: &mut usize, end: usize) -> Result<Relator, AnomalyError> {
    if chars.get(*at).map(|x| x.1) != Some('^') {
        return Ok(base);
    }
    *at += 1;
    let start = *at;
    let mut digits = String::new();
    while let Some(&(_, c)) = chars.get(*at) {
        if c.is_ascii_digit() || (c == '-' && *at == start) {
            digits.push(c);
            *at += 1;
        } else {
            break;
        }
    }
    let pos = chars.get(start).map_or(end, |x| x.0);
    let k: i64 = digits
        .parse()
        .map_err(|_| AnomalyError::Parse { pos, msg: "expected an integer exponent".into() })?;
    Ok(Relator::Power(Box::new(base), k))
}

/// The matrix a relator evaluates to.
pub fn relator_matrix(m: &ModularData, r: &Relator) -> Matrix {
    let inverse = |x: &Matrix| x.inverse().expect("S and T are invertible");
    match r {
        Relator::S => m.s.clone(),
        Relator::T => m.t.clone(),
        Relator::SInv => inverse(&m.s),
        Relator::TInv => inverse(&m.t),
        Relator::Product(v) => v
            .iter()
            .fold(Matrix::identity(m.dim), |acc, x| acc.matmul(&relator_matrix(m, x))),
        Relator::Power(x, k) => {
            let base = relator_matrix(m, x);
            let base = if *k < 0 { inverse(&base) } else { base };
            (0..k.unsigned_abs()).fold(Matrix::identity(m.dim), |acc, _| acc.matmul(&base))
        }
    }
}

/// The scalar `c` with `relator(S, T) = c·id`.
pub fn modular_defect(m: &ModularData, relator: &Relator) -> Result<Scalar, AnomalyError> {
    relator_matrix(m, relator)
        .as_scalar_multiple_of_identity()
        .ok_or(AnomalyError::NotProjectivelyTrivial)
}
