//! JSON documents for every data type. Scalars are literals such as
//! `"1/2*q8^3 + -1/2*q8"` (plain integers are accepted too); matrices are
//! lists of rows; groups are either catalog strings (`"symmetric(3)"`) or
//! inline `{order, table, names}` objects.

use serde::{Deserialize, Serialize};

use crate::anomaly::{
    AnomalousTheory, BoundaryTable, CobModel, Composition, ModelMorphism, ModularData, SemitrivializedAnomaly,
};
use crate::character2::{Cocycle, CharacterDomain, TwoCharacter, TRIVIAL_LINE};
use crate::frobenius::{make_group_algebra, AlgModule, FrobeniusAlgebra};
use crate::group::{build_catalog_group, CrossedModule, FiniteGroup};
use crate::matrix::Matrix;
use crate::projrep::{HomotopyFixedPoint, ProjRep};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("JSON error: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(e: impl std::fmt::Display) -> FormatError {
    FormatError::Invalid(e.to_string())
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub type MatrixDoc = Vec<Vec<Scalar>>;

pub fn matrix_from_doc(rows: &MatrixDoc) -> Result<Matrix, FormatError> {
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, 0));
    }
    Matrix::from_rows(rows.clone()).ok_or_else(|| invalid("matrix rows have different lengths"))
}

pub fn matrix_to_doc(m: &Matrix) -> MatrixDoc {
    m.to_rows()
}

fn square(flat: &[Scalar], n: usize, what: &str) -> Result<Vec<Vec<Scalar>>, FormatError> {
    if flat.len() != n * n {
        return Err(invalid(format!("{what} needs {} entries, found {}", n * n, flat.len())));
    }
    Ok(flat.chunks(n.max(1)).map(<[Scalar]>::to_vec).collect())
}

fn flatten(rows: &[Vec<Scalar>]) -> Vec<Scalar> {
    rows.iter().flatten().cloned().collect()
}

// ---------------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub order: usize,
    /// Row-major multiplication table.
    pub table: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Catalog(String),
    Inline(GroupDoc),
}

impl GroupRef {
    pub fn build(&self) -> Result<FiniteGroup, FormatError> {
        match self {
            GroupRef::Catalog(s) => build_catalog_group(s).map_err(invalid),
            GroupRef::Inline(d) => {
                if d.table.len() != d.order * d.order {
                    return Err(invalid("group table must have order² entries"));
                }
                let table = d.table.chunks(d.order.max(1)).map(<[usize]>::to_vec).collect();
                FiniteGroup::from_table(table, d.names.clone()).map_err(invalid)
            }
        }
    }

    pub fn inline(g: &FiniteGroup) -> GroupRef {
        GroupRef::Inline(GroupDoc {
            order: g.order(),
            table: g.table().iter().flatten().copied().collect(),
            names: Some(g.names().to_vec()),
        })
    }
}

/// Either a plain group or a crossed module; group files may hold both shapes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossedModuleDoc {
    pub base: GroupRef,
    pub fiber: GroupRef,
    /// `boundary[a] = δ(a)`.
    pub boundary: Vec<usize>,
    /// Row-major `action[g][a]`; omitted means trivial action.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<usize>>,
}

impl CrossedModuleDoc {
    pub fn build(&self) -> Result<CrossedModule, FormatError> {
        let base = self.base.build()?;
        let fiber = self.fiber.build()?;
        let (nb, nf) = (base.order(), fiber.order());
        if self.boundary.len() != nf || self.boundary.iter().any(|&x| x >= nb) {
            return Err(invalid("boundary must map every fiber element into the base"));
        }
        let action = match &self.action {
            None => (0..nb).map(|_| (0..nf).collect()).collect(),
            Some(flat) => {
                if flat.len() != nb * nf || flat.iter().any(|&x| x >= nf) {
                    return Err(invalid("action must be a |G|×|A| table of fiber elements"));
                }
                flat.chunks(nf.max(1)).map(<[usize]>::to_vec).collect()
            }
        };
        Ok(CrossedModule {
            base,
            fiber,
            boundary: self.boundary.clone(),
            action,
        })
    }

    pub fn from_crossed_module(x: &CrossedModule) -> Self {
        CrossedModuleDoc {
            base: GroupRef::inline(&x.base),
            fiber: GroupRef::inline(&x.fiber),
            boundary: x.boundary.clone(),
            action: Some(x.action.iter().flatten().copied().collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupFile {
    CrossedModule(CrossedModuleDoc),
    Group(GroupRef),
}

// ---------------------------------------------------------------------------
// Cocycles and characters
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleDoc {
    pub group: GroupRef,
    /// Row-major `α(g,h)`.
    pub table: Vec<Scalar>,
}

impl CocycleDoc {
    /// The table as given, without checking the cocycle identity.
    pub fn build(&self) -> Result<Cocycle, FormatError> {
        let g = self.group.build()?;
        let values = square(&self.table, g.order(), "cocycle table")?;
        Cocycle::from_table_unchecked(g, values).map_err(invalid)
    }

    pub fn from_cocycle(a: &Cocycle) -> Self {
        CocycleDoc {
            group: GroupRef::inline(a.group()),
            table: flatten(a.values()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossed_module: Option<CrossedModuleDoc>,
    /// Line labels; omitted means every line is `K`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<Vec<String>>,
    /// Row-major `ψ_{g,h}`.
    pub psi: Vec<Scalar>,
    /// Row-major `ψ_{a,g}` over a crossed module.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holonomy: Option<Vec<Scalar>>,
}

impl CharacterDoc {
    pub fn build(&self) -> Result<TwoCharacter, FormatError> {
        let domain = match (&self.group, &self.crossed_module) {
            (Some(g), None) => CharacterDomain::Discrete(g.build()?),
            (None, Some(x)) => CharacterDomain::TwoGroup(x.build()?),
            _ => return Err(invalid("a character needs exactly one of `group` and `crossed_module`")),
        };
        let n = domain.objects().order();
        let psi = square(&self.psi, n, "psi")?;
        let line_labels = match &self.lines {
            Some(l) if l.len() == n => l.clone(),
            Some(_) => return Err(invalid("one line label per group element is required")),
            None => vec![TRIVIAL_LINE.to_string(); n],
        };
        let holonomy = match (&domain, &self.holonomy) {
            (CharacterDomain::Discrete(_), None) => None,
            (CharacterDomain::Discrete(_), Some(_)) => return Err(invalid("holonomy needs a crossed module")),
            (CharacterDomain::TwoGroup(x), Some(h)) => {
                let nf = x.fiber.order();
                if h.len() != nf * n {
                    return Err(invalid("holonomy must be a |A|×|G| table"));
                }
                Some(h.chunks(n.max(1)).map(<[Scalar]>::to_vec).collect())
            }
            (CharacterDomain::TwoGroup(x), None) => Some(vec![vec![Scalar::one(); n]; x.fiber.order()]),
        };
        Ok(TwoCharacter {
            domain,
            line_labels,
            psi,
            holonomy,
        })
    }

    pub fn from_character(c: &TwoCharacter) -> Self {
        let (group, crossed_module) = match &c.domain {
            CharacterDomain::Discrete(g) => (Some(GroupRef::inline(g)), None),
            CharacterDomain::TwoGroup(x) => (None, Some(CrossedModuleDoc::from_crossed_module(x))),
        };
        let trivial = c.line_labels.iter().all(|l| l == TRIVIAL_LINE);
        CharacterDoc {
            group,
            crossed_module,
            lines: (!trivial).then(|| c.line_labels.clone()),
            psi: flatten(&c.psi),
            holonomy: c.holonomy.as_ref().map(|h| flatten(h)),
        }
    }
}

// ---------------------------------------------------------------------------
// Projective representations and fixed points
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjRepDoc {
    pub group: GroupRef,
    pub dim: usize,
    /// Row-major `α`; omitted means it is read off the matrices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<Vec<Scalar>>,
    pub matrices: Vec<MatrixDoc>,
}

impl ProjRepDoc {
    pub fn build(&self) -> Result<ProjRep, FormatError> {
        let g = self.group.build()?;
        let mats = self.matrices.iter().map(matrix_from_doc).collect::<Result<Vec<_>, _>>()?;
        match &self.cocycle {
            None => ProjRep::infer(g, self.dim, mats).map_err(invalid),
            Some(t) => {
                let values = square(t, g.order(), "cocycle")?;
                let alpha = Cocycle::from_table_unchecked(g, values).map_err(invalid)?;
                ProjRep::new(alpha, self.dim, mats).map_err(invalid)
            }
        }
    }

    pub fn from_projrep(r: &ProjRep) -> Self {
        ProjRepDoc {
            group: GroupRef::inline(r.group()),
            dim: r.dim,
            cocycle: Some(flatten(r.cocycle.values())),
            matrices: r.mats.iter().map(matrix_to_doc).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointDoc {
    pub character: CharacterDoc,
    pub dim: usize,
    pub maps: Vec<MatrixDoc>,
}

impl FixedPointDoc {
    pub fn build(&self) -> Result<HomotopyFixedPoint, FormatError> {
        let c = self.character.build()?;
        let maps = self.maps.iter().map(matrix_from_doc).collect::<Result<Vec<_>, _>>()?;
        HomotopyFixedPoint::new(c, self.dim, maps).map_err(invalid)
    }

    pub fn from_fixed_point(p: &HomotopyFixedPoint) -> Self {
        FixedPointDoc {
            character: CharacterDoc::from_character(&p.character),
            dim: p.dim,
            maps: p.maps.iter().map(matrix_to_doc).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Frobenius algebras
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub dim: usize,
    /// `action[i]` is the matrix of basis element `e_i`.
    pub action: Vec<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    /// Shortcut for `𝕂[G]` with `ε(g) = δ_{g,e}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_algebra: Option<GroupRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// `mult[(i·dim + j)·dim + k]` is the coefficient of `e_k` in `e_i e_j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counit: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<ModuleDoc>,
}

impl AlgebraDoc {
    pub fn build(&self) -> Result<FrobeniusAlgebra, FormatError> {
        if let Some(g) = &self.group_algebra {
            return Ok(make_group_algebra(&g.build()?));
        }
        let (Some(n), Some(mult), Some(unit), Some(counit)) = (self.dim, &self.mult, &self.unit, &self.counit) else {
            return Err(invalid("an algebra needs `group_algebra` or all of dim, mult, unit, counit"));
        };
        if mult.len() != n * n * n {
            return Err(invalid(format!("mult needs dim³ = {} entries", n * n * n)));
        }
        let table = (0..n)
            .map(|i| (0..n).map(|j| mult[(i * n + j) * n..(i * n + j + 1) * n].to_vec()).collect())
            .collect();
        FrobeniusAlgebra::new(table, unit.clone(), counit.clone()).map_err(invalid)
    }

    pub fn build_modules(&self, a: &FrobeniusAlgebra) -> Result<Vec<AlgModule>, FormatError> {
        self.modules
            .iter()
            .map(|m| {
                let action = m.action.iter().map(matrix_from_doc).collect::<Result<Vec<_>, _>>()?;
                AlgModule::new(a.clone(), m.dim, action).map_err(invalid)
            })
            .collect()
    }

    pub fn from_algebra(a: &FrobeniusAlgebra) -> Self {
        AlgebraDoc {
            group_algebra: None,
            dim: Some(a.dim()),
            mult: Some(a.mult().iter().flatten().flatten().cloned().collect()),
            unit: Some(a.unit().to_vec()),
            counit: Some(a.counit().to_vec()),
            modules: Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// Anomalies, theories, boundary tables, modular data
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub objects: Vec<String>,
    /// Objects with empty boundary.
    #[serde(default)]
    pub empty: Vec<String>,
    /// Non-identity morphisms; every object gets `id:<label>` automatically.
    pub morphisms: Vec<MorphismDoc>,
    /// `[second, first, result]` by morphism name; unit compositions are added.
    pub compositions: Vec<[String; 3]>,
    /// `[M, M']` by morphism name.
    #[serde(default)]
    pub diffeos: Vec<[String; 2]>,
}

impl ModelDoc {
    pub fn build(&self) -> Result<CobModel, FormatError> {
        let object = |label: &str| {
            self.objects
                .iter()
                .position(|o| o == label)
                .ok_or_else(|| invalid(format!("unknown object {label:?}")))
        };
        let mut morphisms: Vec<ModelMorphism> = self
            .objects
            .iter()
            .enumerate()
            .map(|(o, label)| ModelMorphism {
                name: format!("id:{label}"),
                source: o,
                target: o,
            })
            .collect();
        for m in &self.morphisms {
            if morphisms.iter().any(|x| x.name == m.name) {
                return Err(invalid(format!("morphism {:?} declared twice", m.name)));
            }
            morphisms.push(ModelMorphism {
                name: m.name.clone(),
                source: object(&m.source)?,
                target: object(&m.target)?,
            });
        }
        let morphism = |name: &str| {
            morphisms
                .iter()
                .position(|x| x.name == name)
                .ok_or_else(|| invalid(format!("unknown morphism {name:?}")))
        };
        let mut compositions = Vec::new();
        for [s, f, r] in &self.compositions {
            compositions.push(Composition {
                second: morphism(s)?,
                first: morphism(f)?,
                result: morphism(r)?,
            });
        }
        let identities: Vec<usize> = (0..self.objects.len()).collect();
        for (m, mor) in morphisms.iter().enumerate() {
            for c in [
                Composition { second: identities[mor.target], first: m, result: m },
                Composition { second: m, first: identities[mor.source], result: m },
            ] {
                if !compositions.iter().any(|x| x.second == c.second && x.first == c.first) {
                    compositions.push(c);
                }
            }
        }
        let diffeos = self
            .diffeos
            .iter()
            .map(|[a, b]| Ok((morphism(a)?, morphism(b)?)))
            .collect::<Result<Vec<_>, FormatError>>()?;
        let empty_objects = self.empty.iter().map(|l| object(l)).collect::<Result<Vec<_>, _>>()?;
        let model = CobModel {
            objects: self.objects.clone(),
            morphisms,
            identities,
            compositions,
            diffeos,
            empty_objects,
        };
        model.validate().map_err(invalid)?;
        Ok(model)
    }
}

/// An anomaly, optionally with a theory on top of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnomalyDoc {
    pub model: ModelDoc,
    /// Per declared morphism (not identities); omitted means all `K`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<Vec<String>>,
    /// `ψ` per declared composition, in order; omitted means all 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<Scalar>>,
    /// Per declared diffeomorphism; omitted means all 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diffeo_action: Option<Vec<Scalar>>,
    /// `dim V` per object.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spaces: Option<Vec<usize>>,
    /// `φ_M` per declared morphism; identities are filled in.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<MatrixDoc>>,
}

impl AnomalyDoc {
    pub fn build_anomaly(&self) -> Result<SemitrivializedAnomaly, FormatError> {
        let model = self.model.build()?;
        let (no, nd) = (self.model.objects.len(), self.model.morphisms.len());
        let declared = |what: &str, len: usize, expected: usize| {
            if len == expected {
                Ok(())
            } else {
                Err(invalid(format!("{what} needs {expected} entries, found {len}")))
            }
        };
        let mut w = SemitrivializedAnomaly::trivial(model);
        if let Some(lines) = &self.lines {
            declared("lines", lines.len(), nd)?;
            w.lines[no..].clone_from_slice(lines);
        }
        if let Some(psi) = &self.psi {
            declared("psi", psi.len(), self.model.compositions.len())?;
            w.psi[..psi.len()].clone_from_slice(psi);
        }
        if let Some(f) = &self.diffeo_action {
            declared("diffeo_action", f.len(), w.diffeo_action.len())?;
            w.diffeo_action = f.clone();
        }
        Ok(w)
    }

    /// `None` when the document carries no theory data.
    pub fn build_theory(&self) -> Result<Option<AnomalousTheory>, FormatError> {
        let (Some(spaces), Some(maps)) = (&self.spaces, &self.maps) else {
            if self.spaces.is_some() || self.maps.is_some() {
                return Err(invalid("a theory needs both `spaces` and `maps`"));
            }
            return Ok(None);
        };
        let anomaly = self.build_anomaly()?;
        let no = self.model.objects.len();
        if spaces.len() != no || maps.len() != self.model.morphisms.len() {
            return Err(invalid("one space per object and one map per declared morphism are required"));
        }
        let mut all = spaces.iter().map(|&d| Matrix::identity(d)).collect::<Vec<_>>();
        for m in maps {
            all.push(matrix_from_doc(m)?);
        }
        Ok(Some(AnomalousTheory {
            anomaly,
            spaces: spaces.clone(),
            maps: all,
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryDoc {
    pub lambda: Scalar,
    pub dim: usize,
    pub ldisk: Vec<Scalar>,
    pub rdisk: Vec<Scalar>,
    /// Pairing `K`; omitted means the standard one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cev: Option<MatrixDoc>,
    /// Copairing `C`; omitted means the standard one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ccoev: Option<MatrixDoc>,
}

impl BoundaryDoc {
    pub fn build(&self) -> Result<(Scalar, BoundaryTable), FormatError> {
        let pairing = |m: &Option<MatrixDoc>| match m {
            Some(rows) => matrix_from_doc(rows),
            None => Ok(Matrix::identity(self.dim)),
        };
        Ok((
            self.lambda.clone(),
            BoundaryTable {
                dim: self.dim,
                ldisk: self.ldisk.clone(),
                rdisk: self.rdisk.clone(),
                cev: pairing(&self.cev)?,
                ccoev: pairing(&self.ccoev)?,
            },
        ))
    }

    pub fn from_table(lambda: &Scalar, bc: &BoundaryTable) -> Self {
        BoundaryDoc {
            lambda: lambda.clone(),
            dim: bc.dim,
            ldisk: bc.ldisk.clone(),
            rdisk: bc.rdisk.clone(),
            cev: Some(matrix_to_doc(&bc.cev)),
            ccoev: Some(matrix_to_doc(&bc.ccoev)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularDoc {
    #[serde(rename = "S")]
    pub s: MatrixDoc,
    #[serde(rename = "T")]
    pub t: MatrixDoc,
}

impl ModularDoc {
    pub fn build(&self) -> Result<ModularData, FormatError> {
        ModularData::new(matrix_from_doc(&self.s)?, matrix_from_doc(&self.t)?).map_err(invalid)
    }

    pub fn from_data(m: &ModularData) -> Self {
        ModularDoc {
            s: matrix_to_doc(&m.s),
            t: matrix_to_doc(&m.t),
        }
    }
}
