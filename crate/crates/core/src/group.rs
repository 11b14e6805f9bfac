//! Finite groups given by multiplication tables, homomorphisms, and strict
//! 2-groups presented as crossed modules.
//!
//! Catalog groups list their elements in lexicographic order of a canonical
//! exponent word, identity first:
//!
//! * `cyclic(n)`: `k` for `0 ≤ k < n`, named `"k"`;
//! * `dihedral(n)` (order `2n`): `s^j r^i` ordered by `(j, i)`, named `e`, `r`, `r^2`, …, `s`, `sr`, …;
//! * `symmetric(n)`: permutations in lexicographic one-line notation (1-based), e.g. `"132"`;
//!   the product `στ` applies `τ` first;
//! * `product(G, H)`: pairs ordered by `(g, h)`, named `"(g,h)"`.

use std::fmt;

use crate::verdict::{Failure, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("unsupported catalog parameters: {0}")]
    UnsupportedParams(String),
    #[error("malformed group table: {0}")]
    Malformed(String),
    #[error("group axioms fail: {0}")]
    NotAGroup(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("elements {0} and {1} do not commute")]
    NotCommuting(usize, usize),
}

/// A finite group given by its Cayley table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    names: Vec<String>,
}

/// Largest order for which associativity is checked on every triple.
pub const EXHAUSTIVE_ASSOCIATIVITY_BOUND: usize = 64;

impl FiniteGroup {
    /// Build from a table, deriving identity and inverses and verifying the axioms.
    pub fn from_table(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self, GroupError> {
        let g = Self::from_table_unchecked(table, names)?;
        let v = verify_group(&g);
        match v.failure {
            None => Ok(g),
            Some(f) => Err(GroupError::NotAGroup(f.message)),
        }
    }

    /// Shape checks only; the group axioms are left to [`verify_group`].
    pub fn from_table_unchecked(
        table: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Malformed("empty table".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(GroupError::Malformed("table is not square".into()));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::Malformed(format!("entry {x} out of range")));
            }
        }
        let names = match names {
            Some(v) if v.len() == n => v,
            Some(v) => {
                return Err(GroupError::Malformed(format!(
                    "{} names for {} elements",
                    v.len(),
                    n
                )))
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .unwrap_or(0);
        let inverses = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x][y] == identity && table[y][x] == identity)
                    .unwrap_or(identity)
            })
            .collect();
        Ok(FiniteGroup {
            table,
            identity,
            inverses,
            names,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn element(&self, name: &str) -> Result<usize, GroupError> {
        self.names
            .iter()
            .position(|n| n == name)
            .or_else(|| name.parse::<usize>().ok().filter(|&i| i < self.order()))
            .ok_or_else(|| GroupError::UnknownElement(name.to_string()))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// `g h g⁻¹`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// A greedy generating set: repeatedly adds the smallest element not yet generated.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order()];
        span[self.identity] = true;
        while let Some(x) = span.iter().position(|&b| !b) {
            gens.push(x);
            span = self.closure(&gens);
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut span = vec![false; self.order()];
        span[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !span[y] {
                    span[y] = true;
                    frontier.push(y);
                }
            }
        }
        span
    }

    /// Index of `(g, h)` in `self × other`, matching [`product`]'s ordering.
    pub fn pair_index(&self, other: &FiniteGroup, g: usize, h: usize) -> usize {
        g * other.order() + h
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {}, {:?})", self.order(), self.names)
    }
}

/// Exhaustive check of the group axioms (associativity sampled above
/// [`EXHAUSTIVE_ASSOCIATIVITY_BOUND`]).
pub fn verify_group(g: &FiniteGroup) -> Verdict {
    let n = g.order();
    let mut v = Verdict::new("group axioms", "checks");
    let e = g.identity;
    let id_ok = (0..n).all(|x| g.table[e][x] == x && g.table[x][e] == x);
    v.record(id_ok, || {
        Failure::new("identity", vec![e], "no two-sided identity element".into())
    });
    for x in 0..n {
        let y = g.inverses[x];
        let ok = g.table[x][y] == e && g.table[y][x] == e;
        if !v.record(ok, || {
            Failure::new("inverse", vec![x], format!("element {} has no inverse", g.name(x)))
        }) {
            return v.finish();
        }
    }
    let triples: Box<dyn Iterator<Item = (usize, usize, usize)>> = if n <= EXHAUSTIVE_ASSOCIATIVITY_BOUND {
        Box::new((0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))))
    } else {
        // deterministic stride sample of 262144 triples
        let count = 1usize << 18;
        Box::new((0..count).map(move |i| {
            let s = i.wrapping_mul(2_654_435_761) ^ (i >> 3);
            (s % n, (s / n) % n, (s / (n * n)) % n)
        }))
    };
    for (a, b, c) in triples {
        let ok = g.table[g.table[a][b]][c] == g.table[a][g.table[b][c]];
        if !v.record(ok, || {
            Failure::new(
                "associativity",
                vec![a, b, c],
                format!("({}, {}, {})", g.name(a), g.name(b), g.name(c)),
            )
        }) {
            break;
        }
    }
    v.finish()
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

/// Largest group order the catalog will build.
pub const CATALOG_ORDER_BOUND: usize = 120;

pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 || n > CATALOG_ORDER_BOUND {
        return Err(GroupError::UnsupportedParams(format!("cyclic({n})")));
    }
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let names = (0..n).map(|k| k.to_string()).collect();
    FiniteGroup::from_table(table, Some(names))
}

pub fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 || 2 * n > CATALOG_ORDER_BOUND {
        return Err(GroupError::UnsupportedParams(format!("dihedral({n})")));
    }
    // index j*n + i  <->  s^j r^i
    let idx = |j: usize, i: usize| j * n + i;
    let mut table = vec![vec![0; 2 * n]; 2 * n];
    for a in 0..2 {
        for b in 0..n {
            for c in 0..2 {
                for d in 0..n {
                    // (s^a r^b)(s^c r^d) = s^{a+c} r^{(-1)^c b + d}
                    let rb = if c == 1 { (n - b) % n } else { b };
                    table[idx(a, b)][idx(c, d)] = idx((a + c) % 2, (rb + d) % n);
                }
            }
        }
    }
    let name = |j: usize, i: usize| -> String {
        let r = match i {
            0 => String::new(),
            1 => "r".to_string(),
            k => format!("r^{k}"),
        };
        match (j, i) {
            (0, 0) => "e".to_string(),
            (0, _) => r,
            (_, _) => format!("s{r}"),
        }
    };
    let names = (0..2).flat_map(|j| (0..n).map(move |i| (j, i))).map(|(j, i)| name(j, i)).collect();
    FiniteGroup::from_table(table, Some(names))
}

pub fn symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 || n > 5 {
        return Err(GroupError::UnsupportedParams(format!("symmetric({n})")));
    }
    let perms = permutations(n);
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation listed");
    let table = perms
        .iter()
        .map(|s| {
            perms
                .iter()
                .map(|t| {
                    let st: Vec<usize> = (0..n).map(|x| s[t[x]]).collect();
                    index(&st)
                })
                .collect()
        })
        .collect();
    let names = perms
        .iter()
        .map(|p| p.iter().map(|x| (x + 1).to_string()).collect::<String>())
        .collect();
    FiniteGroup::from_table(table, Some(names))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    let (m, n) = (g.order(), h.order());
    if m * n > CATALOG_ORDER_BOUND {
        return Err(GroupError::UnsupportedParams(format!(
            "product of orders {m} and {n}"
        )));
    }
    let table = (0..m * n)
        .map(|x| {
            (0..m * n)
                .map(|y| g.mul(x / n, y / n) * n + h.mul(x % n, y % n))
                .collect()
        })
        .collect();
    let names = (0..m * n)
        .map(|x| format!("({},{})", g.name(x / n), h.name(x % n)))
        .collect();
    FiniteGroup::from_table(table, Some(names))
}

/// Build a catalog group from a textual spec such as `cyclic(4)`,
/// `dihedral(3)`, `symmetric(3)`, `klein`, or `product(cyclic(2),cyclic(2))`.
pub fn build_catalog_group(spec: &str) -> Result<FiniteGroup, GroupError> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || GroupError::UnsupportedParams(spec.to_string());
    if s == "trivial" {
        return cyclic(1);
    }
    if s == "klein" {
        return product(&cyclic(2)?, &cyclic(2)?);
    }
    let open = s.find('(').ok_or_else(bad)?;
    if !s.ends_with(')') {
        return Err(bad());
    }
    let (name, args) = (&s[..open], &s[open + 1..s.len() - 1]);
    match name {
        "cyclic" | "dihedral" | "symmetric" => {
            let n: usize = args.parse().map_err(|_| bad())?;
            match name {
                "cyclic" => cyclic(n),
                "dihedral" => dihedral(n),
                _ => symmetric(n),
            }
        }
        "product" => {
            // split at the top-level comma
            let mut depth = 0usize;
            let split = args
                .char_indices()
                .find(|&(_, c)| {
                    match c {
                        '(' => depth += 1,
                        ')' => depth = depth.saturating_sub(1),
                        _ => {}
                    }
                    c == ',' && depth == 0
                })
                .map(|(i, _)| i)
                .ok_or_else(bad)?;
            product(
                &build_catalog_group(&args[..split])?,
                &build_catalog_group(&args[split + 1..])?,
            )
        }
        _ => Err(bad()),
    }
}

/// Catalog groups of order at most `bound`, in a fixed order.
pub fn small_catalog(bound: usize) -> Vec<(String, FiniteGroup)> {
    let specs = [
        "cyclic(1)",
        "cyclic(2)",
        "cyclic(3)",
        "cyclic(4)",
        "product(cyclic(2),cyclic(2))",
        "cyclic(5)",
        "cyclic(6)",
        "symmetric(3)",
        "cyclic(7)",
        "cyclic(8)",
        "product(cyclic(2),cyclic(4))",
        "product(cyclic(2),product(cyclic(2),cyclic(2)))",
        "dihedral(4)",
        "cyclic(9)",
        "product(cyclic(3),cyclic(3))",
        "dihedral(5)",
        "cyclic(12)",
        "dihedral(6)",
        "symmetric(4)",
        "symmetric(5)",
    ];
    specs
        .iter()
        .map(|s| (s.to_string(), build_catalog_group(s).expect("catalog spec")))
        .filter(|(_, g)| g.order() <= bound)
        .collect()
}

// ---------------------------------------------------------------------------
// Conjugacy
// ---------------------------------------------------------------------------

/// Conjugacy classes sorted by their minimal element; each class is sorted.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.order()];
    let mut classes = Vec::new();
    for x in g.elements() {
        if seen[x] {
            continue;
        }
        let mut class: Vec<usize> = g.elements().map(|h| g.conjugate(h, x)).collect();
        class.sort_unstable();
        class.dedup();
        for &y in &class {
            seen[y] = true;
        }
        classes.push(class);
    }
    classes
}

// ---------------------------------------------------------------------------
// Homomorphisms
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    pub images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: FiniteGroup, target: FiniteGroup, images: Vec<usize>) -> Result<Self, GroupError> {
        let h = GroupHom {
            source,
            target,
            images,
        };
        let v = h.verify();
        match v.failure {
            None => Ok(h),
            Some(f) => Err(GroupError::Malformed(f.message)),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn verify(&self) -> Verdict {
        let mut v = Verdict::new("homomorphism", "pairs");
        if self.images.len() != self.source.order() || self.images.iter().any(|&y| y >= self.target.order()) {
            return Verdict::fail("homomorphism", "pairs", vec![], "image table has the wrong shape".into());
        }
        'outer: for a in self.source.elements() {
            for b in self.source.elements() {
                let lhs = self.images[self.source.mul(a, b)];
                let rhs = self.target.mul(self.images[a], self.images[b]);
                if !v.record(lhs == rhs, || {
                    Failure::new(
                        "homomorphism",
                        vec![a, b],
                        format!("({}, {})", self.source.name(a), self.source.name(b)),
                    )
                }) {
                    break 'outer;
                }
            }
        }
        v.finish()
    }
}

// ---------------------------------------------------------------------------
// Crossed modules
// ---------------------------------------------------------------------------

/// A strict 2-group `δ: A → G` with `G` acting on `A`. Objects are elements
/// of `G`; a morphism `g → δ(a)g` is labelled by `a ∈ A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedModule {
    pub base: FiniteGroup,
    pub fiber: FiniteGroup,
    /// `boundary[a] = δ(a)`.
    pub boundary: Vec<usize>,
    /// `action[g][a] = g·a`.
    pub action: Vec<Vec<usize>>,
}

impl CrossedModule {
    pub fn delta(&self, a: usize) -> usize {
        self.boundary[a]
    }

    pub fn act(&self, g: usize, a: usize) -> usize {
        self.action[g][a]
    }

    /// Target of the morphism labelled `a` out of `g`: `δ(a)·g`.
    pub fn target(&self, a: usize, g: usize) -> usize {
        self.base.mul(self.delta(a), g)
    }

    /// Trivial boundary and trivial action (requires `A` abelian to be a crossed module).
    pub fn trivial(base: FiniteGroup, fiber: FiniteGroup) -> Self {
        let boundary = vec![base.identity(); fiber.order()];
        let action = base.elements().map(|_| fiber.elements().collect()).collect();
        CrossedModule {
            base,
            fiber,
            boundary,
            action,
        }
    }

    /// `G` acting on itself by conjugation with `δ = id`.
    pub fn identity_on(g: FiniteGroup) -> Self {
        let boundary = g.elements().collect();
        let action = g
            .elements()
            .map(|x| g.elements().map(|a| g.conjugate(x, a)).collect())
            .collect();
        CrossedModule {
            base: g.clone(),
            fiber: g,
            boundary,
            action,
        }
    }

    /// Image of the boundary, sorted.
    pub fn boundary_image(&self) -> Vec<usize> {
        let mut im: Vec<usize> = self.boundary.clone();
        im.sort_unstable();
        im.dedup();
        im
    }

    /// `π₀ = G / im δ` with cosets ordered by their minimal element, and the
    /// projection `G → π₀`.
    pub fn pi0(&self) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        let im = self.boundary_image();
        let g = &self.base;
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        for x in g.elements() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(x);
            for &k in &im {
                coset_of[g.mul(k, x)] = idx;
            }
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset_of[g.mul(a, b)]).collect())
            .collect();
        let names = reps.iter().map(|&r| format!("[{}]", g.name(r))).collect();
        let quotient = FiniteGroup::from_table(table, Some(names))?;
        Ok((quotient, coset_of))
    }
}

/// Checks equivariance `δ(g·a) = g δ(a) g⁻¹` and the Peiffer identity
/// `δ(a)·b = a b a⁻¹`, then that `δ` is a homomorphism and `G` acts by automorphisms.
pub fn verify_crossed_module(x: &CrossedModule) -> Verdict {
    let (g, a) = (&x.base, &x.fiber);
    let mut v = Verdict::new("crossed module identities", "checks");
    let shape_ok = x.boundary.len() == a.order()
        && x.boundary.iter().all(|&d| d < g.order())
        && x.action.len() == g.order()
        && x.action.iter().all(|row| row.len() == a.order() && row.iter().all(|&y| y < a.order()));
    if !shape_ok {
        return Verdict::fail(
            "shape",
            "checks",
            vec![],
            "boundary or action table has the wrong shape".into(),
        );
    }
    for gi in g.elements() {
        for ai in a.elements() {
            let ok = x.delta(x.act(gi, ai)) == g.conjugate(gi, x.delta(ai));
            if !v.record(ok, || {
                Failure::new(
                    "equivariance",
                    vec![gi, ai],
                    format!("(g={}, a={})", g.name(gi), a.name(ai)),
                )
            }) {
                return v.finish();
            }
        }
    }
    for ai in a.elements() {
        for bi in a.elements() {
            let ok = x.act(x.delta(ai), bi) == a.conjugate(ai, bi);
            if !v.record(ok, || {
                Failure::new(
                    "Peiffer identity",
                    vec![ai, bi],
                    format!("(a={}, b={})", a.name(ai), a.name(bi)),
                )
            }) {
                return v.finish();
            }
        }
    }
    for ai in a.elements() {
        for bi in a.elements() {
            let ok = x.delta(a.mul(ai, bi)) == g.mul(x.delta(ai), x.delta(bi));
            if !v.record(ok, || {
                Failure::new(
                    "boundary homomorphism",
                    vec![ai, bi],
                    format!("(a={}, b={})", a.name(ai), a.name(bi)),
                )
            }) {
                return v.finish();
            }
        }
    }
    for gi in g.elements() {
        for ai in a.elements() {
            for bi in a.elements() {
                let ok = x.act(gi, a.mul(ai, bi)) == a.mul(x.act(gi, ai), x.act(gi, bi));
                if !v.record(ok, || {
                    Failure::new(
                        "action by automorphisms",
                        vec![gi, ai, bi],
                        format!("(g={}, a={}, b={})", g.name(gi), a.name(ai), a.name(bi)),
                    )
                }) {
                    return v.finish();
                }
            }
        }
        for hi in g.elements() {
            for ai in a.elements() {
                let ok = x.act(g.mul(gi, hi), ai) == x.act(gi, x.act(hi, ai));
                if !v.record(ok, || {
                    Failure::new(
                        "action law",
                        vec![gi, hi, ai],
                        format!("(g={}, h={}, a={})", g.name(gi), g.name(hi), a.name(ai)),
                    )
                }) {
                    return v.finish();
                }
            }
        }
    }
    v.finish()
}
