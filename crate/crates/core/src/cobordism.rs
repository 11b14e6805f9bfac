//! A typed word language for 1d and 2d cobordisms and its evaluation functors.
//!
//! ```text
//! word := par (";" par)*
//! par  := atom ("|" atom)*
//! atom := GEN | "(" word ")"
//! ```
//!
//! `a ; b` applies `a` first, so a sequence `M_1 ; … ; M_k` evaluates to the
//! matrix product `M_k ⋯ M_1`. `|` is the monoidal product with the left
//! factor most significant. Whitespace is ignored.
//!
//! Generators by dimension:
//!
//! * 2d closed: `id<n>`, `swap`, `cup` (0→1 circles), `cap` (1→0), `mul` (2→1),
//!   `comul` (1→2), and `defect` (1→1, a circle carrying a defect line);
//! * 1d: `id<n>`, `swap`, `ev` (`+-` → ∅), `coev` (∅ → `-+`), `lbnd` (∅ → `+`,
//!   left end constrained) and `rbnd` (`+` → ∅, right end constrained);
//! * 2d constrained (products of 1d generators with the constrained interval):
//!   `strip<n>`, `cswap`, `cev`, `ccoev`, `ldisk`, `rdisk`, typed like their 1d
//!   counterparts.
//!
//! `id` and `strip` without a count mean one strand; `id0` is the empty identity
//! and the empty text parses to it.

use std::fmt;

use rand::Rng;

use crate::frobenius::{FrobeniusAlgebra, FrobeniusError};
use crate::group::{conjugacy_classes, FiniteGroup};
use crate::matrix::Matrix;
use crate::projrep::ProjRep;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CobError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("type error{}: {msg}", match .pos { Some(p) => format!(" at byte {p}"), None => String::new() })]
    Type { pos: Option<usize>, msg: String },
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("word uses `defect` but no defect operator was supplied")]
    MissingDefect,
    #[error("point {index} changes sign under the bijection")]
    SignMismatch { index: usize },
    #[error("transmission needs an honest representation (trivial cocycle)")]
    TwistedInput,
    #[error("malformed input: {0}")]
    Shape(String),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    One,
    Two,
    Constrained,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::One => "1",
            Dimension::Two => "2",
            Dimension::Constrained => "2c",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    Id(usize),
    Swap,
    Cup,
    Cap,
    Mul,
    Comul,
    Defect,
    Ev,
    Coev,
    Lbnd,
    Rbnd,
    Strip(usize),
    CSwap,
    CEv,
    CCoev,
    LDisk,
    RDisk,
}

impl Gen {
    pub fn dimension(&self) -> Option<Dimension> {
        use Gen::*;
        match self {
            Id(_) | Swap => None,
            Cup | Cap | Mul | Comul | Defect => Some(Dimension::Two),
            Ev | Coev | Lbnd | Rbnd => Some(Dimension::One),
            Strip(_) | CSwap | CEv | CCoev | LDisk | RDisk => Some(Dimension::Constrained),
        }
    }

    fn allowed_in(&self, d: Dimension) -> bool {
        match self {
            Gen::Id(_) | Gen::Swap => d != Dimension::Constrained,
            g => g.dimension() == Some(d),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Gen::*;
        match self {
            Id(n) => write!(f, "id{n}"),
            Strip(n) => write!(f, "strip{n}"),
            Swap => f.write_str("swap"),
            Cup => f.write_str("cup"),
            Cap => f.write_str("cap"),
            Mul => f.write_str("mul"),
            Comul => f.write_str("comul"),
            Defect => f.write_str("defect"),
            Ev => f.write_str("ev"),
            Coev => f.write_str("coev"),
            Lbnd => f.write_str("lbnd"),
            Rbnd => f.write_str("rbnd"),
            CSwap => f.write_str("cswap"),
            CEv => f.write_str("cev"),
            CCoev => f.write_str("ccoev"),
            LDisk => f.write_str("ldisk"),
            RDisk => f.write_str("rdisk"),
        }
    }
}

/// Composition tree. `Seq` and `Par` always have at least two children.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ast {
    Gen(Gen),
    Seq(Vec<Ast>),
    Par(Vec<Ast>),
}

impl Ast {
    /// Sequential composition, collapsing a single child.
    pub fn seq(mut parts: Vec<Ast>) -> Ast {
        if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Ast::Seq(parts)
        }
    }

    /// Monoidal product, collapsing a single child.
    pub fn par(mut parts: Vec<Ast>) -> Ast {
        if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Ast::Par(parts)
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Ast::Gen(_) => 0,
            Ast::Seq(v) | Ast::Par(v) => 1 + v.iter().map(Ast::depth).max().unwrap_or(0),
        }
    }

    pub fn generators(&self) -> Vec<Gen> {
        let mut out = Vec::new();
        self.collect_gens(&mut out);
        out
    }

    fn collect_gens(&self, out: &mut Vec<Gen>) {
        match self {
            Ast::Gen(g) => out.push(*g),
            Ast::Seq(v) | Ast::Par(v) => v.iter().for_each(|a| a.collect_gens(out)),
        }
    }
}

impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ast::Gen(g) => write!(f, "{g}"),
            Ast::Seq(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ; ")?;
                    }
                    match p {
                        Ast::Seq(_) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
            Ast::Par(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    match p {
                        Ast::Gen(_) => write!(f, "{p}")?,
                        _ => write!(f, "({p})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Boundary objects: circle counts in 2d, signed points in 1d, and constrained
/// intervals `[±` (one per cylinderized point) in the constrained calculus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Object {
    Circles(usize),
    Points(Vec<Sign>),
    Constrained(Vec<Sign>),
}

impl Object {
    pub fn len(&self) -> usize {
        match self {
            Object::Circles(n) => *n,
            Object::Points(v) | Object::Constrained(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn parse(text: &str) -> Result<Object, CobError> {
        let t = text.trim();
        if let Some(n) = t.strip_prefix("circles:") {
            return n
                .parse()
                .map(Object::Circles)
                .map_err(|_| CobError::Parse { pos: 8, msg: format!("bad circle count {n:?}") });
        }
        if t == "∅" || t.is_empty() {
            return Ok(Object::Points(Vec::new()));
        }
        let constrained = t.starts_with('[');
        let mut signs = Vec::new();
        for (pos, c) in t.char_indices() {
            match (c, constrained) {
                ('+', _) => signs.push(Sign::Plus),
                ('-', _) => signs.push(Sign::Minus),
                ('[' | ']', true) => {}
                _ => return Err(CobError::Parse { pos, msg: format!("unexpected {c:?} in object") }),
            }
        }
        Ok(if constrained {
            Object::Constrained(signs)
        } else {
            Object::Points(signs)
        })
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::Circles(n) => write!(f, "circles:{n}"),
            Object::Points(v) if v.is_empty() => f.write_str("∅"),
            Object::Points(v) => v.iter().try_for_each(|s| write!(f, "{s}")),
            Object::Constrained(v) if v.is_empty() => f.write_str("∅"),
            Object::Constrained(v) => v.iter().try_for_each(|s| write!(f, "[{s}]")),
        }
    }
}

/// A typechecked word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobWord {
    pub dimension: Dimension,
    pub ast: Ast,
    pub source: Object,
    pub target: Object,
}

impl fmt::Display for CobWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ast)
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Semi,
    Bar,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, CobError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1
            }
            b';' => {
                out.push((Tok::Semi, i));
                i += 1
            }
            b'|' => {
                out.push((Tok::Bar, i));
                i += 1
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_lowercase() {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(CobError::Parse { pos: i, msg: format!("unexpected character {ch:?}") });
            }
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn parse_gen(name: &str, pos: usize, dim: Dimension) -> Result<Gen, CobError> {
    let digits = name.trim_start_matches(|c: char| c.is_ascii_lowercase());
    let stem = &name[..name.len() - digits.len()];
    let count = |default: usize| -> Result<usize, CobError> {
        if digits.is_empty() {
            Ok(default)
        } else {
            digits
                .parse()
                .map_err(|_| CobError::Parse { pos, msg: format!("bad strand count in {name:?}") })
        }
    };
    let g = match (stem, digits.is_empty()) {
        ("id", _) => Gen::Id(count(1)?),
        ("strip", _) => Gen::Strip(count(1)?),
        (_, false) => {
            return Err(CobError::Parse { pos, msg: format!("unknown generator {name:?}") })
        }
        ("swap", _) => Gen::Swap,
        ("cup", _) => Gen::Cup,
        ("cap", _) => Gen::Cap,
        ("mul", _) => Gen::Mul,
        ("comul", _) => Gen::Comul,
        ("defect", _) => Gen::Defect,
        ("ev", _) => Gen::Ev,
        ("coev", _) => Gen::Coev,
        ("lbnd", _) => Gen::Lbnd,
        ("rbnd", _) => Gen::Rbnd,
        ("cswap", _) => Gen::CSwap,
        ("cev", _) => Gen::CEv,
        ("ccoev", _) => Gen::CCoev,
        ("ldisk", _) => Gen::LDisk,
        ("rdisk", _) => Gen::RDisk,
        _ => return Err(CobError::Parse { pos, msg: format!("unknown generator {name:?}") }),
    };
    if !g.allowed_in(dim) {
        return Err(CobError::Parse {
            pos,
            msg: format!("generator {name:?} is not available in dimension {dim}"),
        });
    }
    Ok(g)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    dim: Dimension,
    joints: Vec<usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn word(&mut self) -> Result<Ast, CobError> {
        let mut parts = vec![self.par()?];
        while *self.peek() == Tok::Semi {
            self.joints.push(self.pos());
            self.at += 1;
            parts.push(self.par()?);
        }
        Ok(Ast::seq(parts))
    }

    fn par(&mut self) -> Result<Ast, CobError> {
        let mut parts = vec![self.atom()?];
        while *self.peek() == Tok::Bar {
            self.at += 1;
            parts.push(self.atom()?);
        }
        Ok(Ast::par(parts))
    }

    fn atom(&mut self) -> Result<Ast, CobError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.at += 1;
                Ok(Ast::Gen(parse_gen(&name, pos, self.dim)?))
            }
            Tok::LParen => {
                self.at += 1;
                let w = self.word()?;
                if *self.peek() != Tok::RParen {
                    return Err(CobError::Parse { pos: self.pos(), msg: "expected ')'".into() });
                }
                self.at += 1;
                Ok(w)
            }
            Tok::End => Err(CobError::Parse { pos, msg: "unexpected end of word".into() }),
            t => Err(CobError::Parse { pos, msg: format!("expected a generator or '(', found {}", tok_name(&t)) }),
        }
    }
}

fn tok_name(t: &Tok) -> &'static str {
    match t {
        Tok::Ident(_) => "a generator",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
        Tok::Semi => "';'",
        Tok::Bar => "'|'",
        Tok::End => "end of input",
    }
}

/// Syntax only; returns the tree and the byte offsets of every `;` in source order.
pub fn parse_ast(text: &str, dim: Dimension) -> Result<(Ast, Vec<usize>), CobError> {
    let toks = tokenize(text)?;
    if toks.len() == 1 {
        let empty = match dim {
            Dimension::Constrained => Gen::Strip(0),
            _ => Gen::Id(0),
        };
        return Ok((Ast::Gen(empty), Vec::new()));
    }
    let mut p = Parser {
        toks,
        at: 0,
        dim,
        joints: Vec::new(),
    };
    let ast = p.word()?;
    if *p.peek() != Tok::End {
        return Err(CobError::Parse { pos: p.pos(), msg: format!("unexpected {}", tok_name(p.peek())) });
    }
    Ok((ast, p.joints))
}

/// Parse and typecheck.
pub fn parse_word(text: &str, dim: Dimension) -> Result<CobWord, CobError> {
    let (ast, joints) = parse_ast(text, dim)?;
    typecheck_at(ast, dim, None, &joints)
}

/// Parse and typecheck against a prescribed source object.
pub fn parse_word_from(text: &str, dim: Dimension, source: &Object) -> Result<CobWord, CobError> {
    let (ast, joints) = parse_ast(text, dim)?;
    typecheck_at(ast, dim, Some(source), &joints)
}

pub fn serialize_word(w: &CobWord) -> String {
    w.ast.to_string()
}

// ---------------------------------------------------------------------------
// Typing
// ---------------------------------------------------------------------------

/// Union-find over boundary-point sign variables.
struct Unifier {
    parent: Vec<usize>,
    value: Vec<Option<Sign>>,
}

impl Unifier {
    fn fresh(&mut self, s: Option<Sign>) -> usize {
        self.parent.push(self.parent.len());
        self.value.push(s);
        self.parent.len() - 1
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn unify(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return true;
        }
        match (self.value[ra], self.value[rb]) {
            (Some(x), Some(y)) if x != y => false,
            (va, vb) => {
                self.parent[ra] = rb;
                self.value[rb] = vb.or(va);
                true
            }
        }
    }

    fn resolve(&mut self, x: usize) -> Option<Sign> {
        let r = self.find(x);
        self.value[r]
    }
}

type Boundary = Vec<usize>;

struct Typer<'a> {
    u: Unifier,
    dim: Dimension,
    joints: &'a [usize],
    next_joint: usize,
}

impl Typer<'_> {
    fn fixed(&mut self, signs: &[Sign]) -> Boundary {
        signs.iter().map(|&s| self.u.fresh(Some(s))).collect()
    }

    fn gen_type(&mut self, g: Gen) -> (Boundary, Boundary) {
        use Sign::*;
        let two_d = self.dim == Dimension::Two;
        let circles = |t: &mut Self, n: usize| t.fixed(&vec![Plus; n]);
        match g {
            Gen::Id(n) | Gen::Strip(n) => {
                let b: Boundary = if two_d {
                    circles(self, n)
                } else {
                    (0..n).map(|_| self.u.fresh(None)).collect()
                };
                (b.clone(), b)
            }
            Gen::Swap | Gen::CSwap => {
                let (x, y) = if two_d {
                    (self.u.fresh(Some(Plus)), self.u.fresh(Some(Plus)))
                } else {
                    (self.u.fresh(None), self.u.fresh(None))
                };
                (vec![x, y], vec![y, x])
            }
            Gen::Cup => (vec![], circles(self, 1)),
            Gen::Cap => (circles(self, 1), vec![]),
            Gen::Mul => (circles(self, 2), circles(self, 1)),
            Gen::Comul => (circles(self, 1), circles(self, 2)),
            Gen::Defect => (circles(self, 1), circles(self, 1)),
            Gen::Ev | Gen::CEv => (self.fixed(&[Plus, Minus]), vec![]),
            Gen::Coev | Gen::CCoev => (vec![], self.fixed(&[Minus, Plus])),
            Gen::Lbnd | Gen::LDisk => (vec![], self.fixed(&[Plus])),
            Gen::Rbnd | Gen::RDisk => (self.fixed(&[Plus]), vec![]),
        }
    }

    fn render(&mut self, b: &Boundary) -> String {
        if self.dim == Dimension::Two {
            return format!("circles:{}", b.len());
        }
        if b.is_empty() {
            return "∅".into();
        }
        let constrained = self.dim == Dimension::Constrained;
        b.iter()
            .map(|&x| {
                let s = match self.u.resolve(x) {
                    Some(s) => s.to_string(),
                    None => "?".to_string(),
                };
                if constrained {
                    format!("[{s}]")
                } else {
                    s
                }
            })
            .collect()
    }

    fn type_of(&mut self, ast: &Ast) -> Result<(Boundary, Boundary), CobError> {
        match ast {
            Ast::Gen(g) => {
                if !g.allowed_in(self.dim) {
                    return Err(CobError::Type {
                        pos: None,
                        msg: format!("generator {g} is not available in dimension {}", self.dim),
                    });
                }
                Ok(self.gen_type(*g))
            }
            Ast::Par(parts) => {
                let (mut s, mut t) = (Vec::new(), Vec::new());
                for p in parts {
                    let (ps, pt) = self.type_of(p)?;
                    s.extend(ps);
                    t.extend(pt);
                }
                Ok((s, t))
            }
            Ast::Seq(parts) => {
                let (source, mut cur) = self.type_of(&parts[0])?;
                for p in &parts[1..] {
                    let joint = self.next_joint;
                    self.next_joint += 1;
                    let (ps, pt) = self.type_of(p)?;
                    let ok = ps.len() == cur.len()
                        && cur.iter().zip(&ps).all(|(&a, &b)| self.u.unify(a, b));
                    if !ok {
                        let (l, r) = (self.render(&cur), self.render(&ps));
                        return Err(CobError::Type {
                            pos: self.joints.get(joint).copied(),
                            msg: format!("inner boundaries differ: {l} vs {r}"),
                        });
                    }
                    cur = pt;
                }
                Ok((source, cur))
            }
        }
    }

    fn object(&mut self, b: &Boundary) -> Object {
        match self.dim {
            Dimension::Two => Object::Circles(b.len()),
            d => {
                let signs = b.iter().map(|&x| self.u.resolve(x).unwrap_or(Sign::Plus)).collect();
                if d == Dimension::One {
                    Object::Points(signs)
                } else {
                    Object::Constrained(signs)
                }
            }
        }
    }
}

/// Typecheck a tree; unresolved point signs default to `+`.
pub fn typecheck(ast: Ast, dim: Dimension) -> Result<CobWord, CobError> {
    typecheck_at(ast, dim, None, &[])
}

/// Typecheck with the source pinned to `source`.
pub fn typecheck_from(ast: Ast, dim: Dimension, source: &Object) -> Result<CobWord, CobError> {
    typecheck_at(ast, dim, Some(source), &[])
}

fn typecheck_at(ast: Ast, dim: Dimension, source: Option<&Object>, joints: &[usize]) -> Result<CobWord, CobError> {
    let mut t = Typer {
        u: Unifier {
            parent: Vec::new(),
            value: Vec::new(),
        },
        dim,
        joints,
        next_joint: 0,
    };
    let (s, tgt) = t.type_of(&ast)?;
    if let Some(obj) = source {
        let given = match (dim, obj) {
            (Dimension::Two, Object::Circles(n)) => t.fixed(&vec![Sign::Plus; *n]),
            (Dimension::One, Object::Points(v)) | (Dimension::Constrained, Object::Constrained(v)) => t.fixed(v),
            _ => return Err(CobError::Type { pos: None, msg: format!("object {obj} does not live in dimension {dim}") }),
        };
        let ok = given.len() == s.len() && given.iter().zip(&s).all(|(&a, &b)| t.u.unify(a, b));
        if !ok {
            let r = t.render(&s);
            return Err(CobError::Type { pos: None, msg: format!("source {obj} does not match {r}") });
        }
    }
    let source = t.object(&s);
    let target = t.object(&tgt);
    Ok(CobWord {
        dimension: dim,
        ast,
        source,
        target,
    })
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Evaluate a tree given the matrix of every leaf.
pub fn eval_with<E>(ast: &Ast, leaf: &mut dyn FnMut(&Gen) -> Result<Matrix, E>) -> Result<Matrix, E> {
    match ast {
        Ast::Gen(g) => leaf(g),
        Ast::Seq(parts) => {
            let mut acc = eval_with(&parts[0], leaf)?;
            for p in &parts[1..] {
                acc = eval_with(p, leaf)?.matmul(&acc);
            }
            Ok(acc)
        }
        Ast::Par(parts) => {
            let mut acc = Matrix::identity(1);
            for p in parts {
                acc = acc.kron(&eval_with(p, leaf)?);
            }
            Ok(acc)
        }
    }
}

/// The factor exchange on `V ⊗ V` for `dim V = d`.
pub fn swap_matrix(d: usize) -> Matrix {
    Matrix::from_fn(d * d, d * d, |r, c| {
        let (i, j) = (c / d, c % d);
        if r == j * d + i {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

/// `Σ_i e_i ⊗ e_i` as a column (`coev`) or row (`ev`).
fn pairing_vector(d: usize) -> Vec<Scalar> {
    (0..d * d)
        .map(|k| if k / d == k % d { Scalar::one() } else { Scalar::zero() })
        .collect()
}

fn identity_power(d: usize, n: usize) -> Matrix {
    Matrix::identity(d.pow(n as u32))
}

/// Closed 2d evaluation through the commutative Frobenius algebra `a`;
/// `defect` is the operator `A → A` assigned to the defect cylinder.
pub fn eval_closed_2d(w: &CobWord, a: &FrobeniusAlgebra, defect: Option<&Matrix>) -> Result<Matrix, CobError> {
    if w.dimension != Dimension::Two {
        return Err(CobError::Type { pos: None, msg: "closed evaluation needs a 2d word".into() });
    }
    if !a.is_commutative() {
        return Err(CobError::NotCommutative);
    }
    let d = a.dim();
    let comul = a.comult_matrix()?;
    if let Some(m) = defect {
        if m.rows() != d || m.cols() != d {
            return Err(CobError::Shape(format!("defect operator must be {d}×{d}")));
        }
    }
    eval_with(&w.ast, &mut |g| match g {
        Gen::Id(n) => Ok(identity_power(d, *n)),
        Gen::Swap => Ok(swap_matrix(d)),
        Gen::Cup => Ok(a.unit_matrix()),
        Gen::Cap => Ok(a.counit_matrix()),
        Gen::Mul => Ok(a.mult_matrix()),
        Gen::Comul => Ok(comul.clone()),
        Gen::Defect => defect.cloned().ok_or(CobError::MissingDefect),
        g => Err(CobError::Type { pos: None, msg: format!("{g} is not a closed 2d generator") }),
    })
}

/// `cup ; comul ; mul ; … ; cap` with `g` handles (`cup ; cap` for `g = 0`).
pub fn genus_word(g: usize) -> CobWord {
    let mut parts = vec![Ast::Gen(Gen::Cup)];
    for _ in 0..g {
        parts.push(Ast::Gen(Gen::Comul));
        parts.push(Ast::Gen(Gen::Mul));
    }
    parts.push(Ast::Gen(Gen::Cap));
    typecheck(Ast::seq(parts), Dimension::Two).expect("genus words are well typed")
}

/// `ε(H^g)`.
pub fn genus_invariant(g: u32, a: &FrobeniusAlgebra) -> Result<Scalar, CobError> {
    let h = crate::frobenius::handle_element(a)?;
    Ok(a.apply_counit(&a.power(&h, g)))
}

/// 1d evaluation with `dim V = d`, `lbnd ↦ v` and `rbnd ↦ φ`.
pub fn eval_1d(w: &CobWord, d: usize, v: &[Scalar], phi: &[Scalar]) -> Result<Matrix, CobError> {
    if w.dimension != Dimension::One {
        return Err(CobError::Type { pos: None, msg: "1d evaluation needs a 1d word".into() });
    }
    if v.len() != d || phi.len() != d {
        return Err(CobError::Shape(format!("boundary vectors must have length {d}")));
    }
    eval_with(&w.ast, &mut |g| match g {
        Gen::Id(n) => Ok(identity_power(d, *n)),
        Gen::Swap => Ok(swap_matrix(d)),
        Gen::Ev => Ok(Matrix::row(pairing_vector(d))),
        Gen::Coev => Ok(Matrix::column(pairing_vector(d))),
        Gen::Lbnd => Ok(Matrix::column(v.to_vec())),
        Gen::Rbnd => Ok(Matrix::row(phi.to_vec())),
        g => Err(CobError::Type { pos: None, msg: format!("{g} is not a 1d generator") }),
    })
}

// ---------------------------------------------------------------------------
// Mapping cylinders
// ---------------------------------------------------------------------------

/// Word for the bijection sending point `i` of `source` to point `perm[i]`,
/// built from adjacent swaps.
pub fn mapping_cylinder(source: &[Sign], perm: &[usize]) -> Result<CobWord, CobError> {
    let n = source.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(CobError::Shape("not a bijection".into()));
    }
    // current[k] = destination of the strand now at position k
    let mut current = perm.to_vec();
    let mut layers = Vec::new();
    let mut sorted = false;
    while !sorted {
        sorted = true;
        for k in 0..n.saturating_sub(1) {
            if current[k] > current[k + 1] {
                current.swap(k, k + 1);
                layers.push(swap_layer(k, n));
                sorted = false;
            }
        }
    }
    let ast = if layers.is_empty() {
        Ast::Gen(Gen::Id(n))
    } else {
        Ast::seq(layers)
    };
    typecheck_from(ast, Dimension::One, &Object::Points(source.to_vec()))
}

/// Target signs of a bijection, or the first point whose sign would change.
pub fn permuted_signs(source: &[Sign], target: &[Sign], perm: &[usize]) -> Result<(), CobError> {
    for (i, (&s, &p)) in source.iter().zip(perm).enumerate() {
        if target.get(p) != Some(&s) {
            return Err(CobError::SignMismatch { index: i });
        }
    }
    Ok(())
}

/// Mapping cylinder of a bijection `source → target`, checked for orientation.
pub fn mapping_cylinder_between(source: &[Sign], target: &[Sign], perm: &[usize]) -> Result<CobWord, CobError> {
    if source.len() != target.len() {
        return Err(CobError::Shape("source and target differ in length".into()));
    }
    permuted_signs(source, target, perm)?;
    mapping_cylinder(source, perm)
}

fn swap_layer(k: usize, n: usize) -> Ast {
    let mut parts = Vec::new();
    if k > 0 {
        parts.push(Ast::Gen(Gen::Id(k)));
    }
    parts.push(Ast::Gen(Gen::Swap));
    if k + 2 < n {
        parts.push(Ast::Gen(Gen::Id(n - k - 2)));
    }
    Ast::par(parts)
}

/// The operator on `V^{⊗n}` moving tensor factor `i` to position `perm[i]`.
pub fn permutation_operator(perm: &[usize], d: usize) -> Matrix {
    let n = perm.len();
    let size = d.pow(n as u32);
    Matrix::from_fn(size, size, |r, c| {
        // digits of c, most significant first
        let mut digits = vec![0; n];
        let mut x = c;
        for i in (0..n).rev() {
            digits[i] = x % d;
            x /= d;
        }
        let mut out = vec![0; n];
        for i in 0..n {
            out[perm[i]] = digits[i];
        }
        let idx = out.iter().fold(0, |acc, &k| acc * d + k);
        if idx == r {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

// ---------------------------------------------------------------------------
// Transmission
// ---------------------------------------------------------------------------

/// Traces of an honest representation on conjugacy-class representatives
/// (classes ordered by their minimal element).
pub fn transmission(g: &FiniteGroup, rho: &ProjRep) -> Result<Vec<Scalar>, CobError> {
    if !rho.cocycle.is_trivial() {
        return Err(CobError::TwistedInput);
    }
    if rho.group() != g {
        return Err(CobError::Shape("representation lives on a different group".into()));
    }
    Ok(conjugacy_classes(g)
        .iter()
        .map(|class| rho.mats[class[0]].trace())
        .collect())
}

/// Trivial, sign and standard 2-dimensional representations of `symmetric(3)`.
pub fn s3_irreps() -> Vec<(&'static str, ProjRep)> {
    let g = crate::group::symmetric(3).expect("catalog");
    let perm = |x: usize| -> Vec<usize> {
        g.name(x).bytes().map(|b| (b - b'1') as usize).collect()
    };
    let perm_matrix = |x: usize| {
        let p = perm(x);
        Matrix::from_fn(3, 3, |r, c| if p[c] == r { Scalar::one() } else { Scalar::zero() })
    };
    let sign = |x: usize| {
        let p = perm(x);
        let inversions = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    };
    // basis e1 − e2, e2 − e3 of the sum-zero plane, with a left inverse
    let b = Matrix::from_integers(&[&[1, 0], &[-1, 1], &[0, -1]]);
    let l = Matrix::from_integers(&[&[1, 0, 0], &[0, 0, -1]]);
    let trivial = g.elements().map(|_| Matrix::identity(1)).collect();
    let signs = g
        .elements()
        .map(|x| Matrix::scalar(1, Scalar::from_integer(sign(x))))
        .collect();
    let standard = g
        .elements()
        .map(|x| l.matmul(&perm_matrix(x)).matmul(&b))
        .collect();
    vec![
        ("trivial", ProjRep::honest(g.clone(), 1, trivial).expect("shape")),
        ("sign", ProjRep::honest(g.clone(), 1, signs).expect("shape")),
        ("standard", ProjRep::honest(g.clone(), 2, standard).expect("shape")),
    ]
}

// ---------------------------------------------------------------------------
// Fixed relation words and random words
// ---------------------------------------------------------------------------

/// The defining relations of a commutative Frobenius algebra as pairs of 2d words.
pub const FROBENIUS_RELATIONS: [(&str, &str, &str); 7] = [
    ("associativity", "mul | id1 ; mul", "id1 | mul ; mul"),
    ("coassociativity", "comul ; comul | id1", "comul ; id1 | comul"),
    ("Frobenius law", "mul ; comul", "id1 | comul ; mul | id1"),
    ("unit", "cup | id1 ; mul", "id1"),
    ("counit", "comul ; cap | id1", "id1"),
    ("commutativity", "swap ; mul", "mul"),
    ("swap naturality", "mul | id1 ; swap", "id1 | swap ; swap | id1 ; id1 | mul"),
];

/// A random well-typed word of nesting depth at most `depth`, starting from
/// `source` and keeping every intermediate boundary within `max_width` points.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, dim: Dimension, depth: usize, source: &Object, max_width: usize) -> CobWord {
    let signs: Vec<Sign> = match source {
        Object::Circles(n) => vec![Sign::Plus; *n],
        Object::Points(v) | Object::Constrained(v) => v.clone(),
    };
    let (ast, _) = random_ast(rng, dim, depth, &signs, max_width.max(signs.len()));
    typecheck_from(ast, dim, source).expect("random words are well typed")
}

fn random_ast<R: Rng + ?Sized>(rng: &mut R, dim: Dimension, depth: usize, src: &[Sign], width: usize) -> (Ast, Vec<Sign>) {
    // a layer is a `Par` of generators, so it already uses one level
    let choice = if depth <= 1 { 0 } else { rng.gen_range(0..3) };
    match choice {
        1 => {
            let k = rng.gen_range(2..=3);
            let mut parts = Vec::new();
            let mut cur = src.to_vec();
            for _ in 0..k {
                let (a, t) = random_ast(rng, dim, depth - 1, &cur, width);
                parts.push(a);
                cur = t;
            }
            (Ast::Seq(parts), cur)
        }
        2 if src.len() >= 2 => {
            let cut = rng.gen_range(1..src.len());
            let room = width.saturating_sub(src.len());
            let (a, ta) = random_ast(rng, dim, depth - 1, &src[..cut], cut + room / 2);
            let (b, tb) = random_ast(rng, dim, depth - 1, &src[cut..], src.len() - cut + room / 2);
            let mut t = ta;
            t.extend(tb);
            (Ast::Par(vec![a, b]), t)
        }
        _ => random_layer(rng, dim, src, width),
    }
}

/// One layer: generators placed side by side over `src`.
fn random_layer<R: Rng + ?Sized>(rng: &mut R, dim: Dimension, src: &[Sign], width: usize) -> (Ast, Vec<Sign>) {
    use Sign::*;
    let mut parts = Vec::new();
    let mut out = Vec::new();
    let mut i = 0;
    let constrained = dim == Dimension::Constrained;
    let id = |n| if constrained { Gen::Strip(n) } else { Gen::Id(n) };
    loop {
        let rest = &src[i..];
        let room = width.saturating_sub(out.len() + rest.len());
        let mut options: Vec<(Gen, usize, Vec<Sign>)> = Vec::new();
        if !rest.is_empty() {
            options.push((id(1), 1, vec![rest[0]]));
        }
        if rest.len() >= 2 {
            let sw = if constrained { Gen::CSwap } else { Gen::Swap };
            options.push((sw, 2, vec![rest[1], rest[0]]));
        }
        match dim {
            Dimension::Two => {
                if rest.len() >= 2 {
                    options.push((Gen::Mul, 2, vec![Plus]));
                }
                if !rest.is_empty() {
                    options.push((Gen::Cap, 1, vec![]));
                    if room >= 1 {
                        options.push((Gen::Comul, 1, vec![Plus, Plus]));
                    }
                }
                if room >= 1 {
                    options.push((Gen::Cup, 0, vec![Plus]));
                }
            }
            _ => {
                let (ev, coev, l, r) = if constrained {
                    (Gen::CEv, Gen::CCoev, Gen::LDisk, Gen::RDisk)
                } else {
                    (Gen::Ev, Gen::Coev, Gen::Lbnd, Gen::Rbnd)
                };
                if rest.len() >= 2 && rest[0] == Plus && rest[1] == Minus {
                    options.push((ev, 2, vec![]));
                }
                if rest.first() == Some(&Plus) {
                    options.push((r, 1, vec![]));
                }
                if room >= 2 {
                    options.push((coev, 0, vec![Minus, Plus]));
                }
                if room >= 1 {
                    options.push((l, 0, vec![Plus]));
                }
            }
        }
        if rest.is_empty() && (parts.len() >= 2 || options.is_empty() || rng.gen_bool(0.5)) {
            break;
        }
        if options.is_empty() {
            break;
        }
        let (g, consumed, produced) = options.swap_remove(rng.gen_range(0..options.len()));
        parts.push(Ast::Gen(g));
        out.extend(produced);
        i += consumed;
    }
    if parts.is_empty() {
        parts.push(Ast::Gen(id(0)));
    }
    (Ast::par(parts), out)
}
