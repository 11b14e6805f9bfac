//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored as a residue modulo the cyclotomic polynomial `Φ_N`
//! in the power basis `1, ζ, …, ζ^{φ(N)-1}`, with integer numerators over a
//! single positive common denominator. Elements of different conductors are
//! combined inside `Q(ζ_lcm)`.
//!
//! Conductors are kept in a canonical shape: `N ≡ 2 (mod 4)` is replaced by
//! `N / 2` (the fields coincide) and elements whose irrational part vanishes
//! are demoted to conductor 1. The textual form goes further and always uses
//! the smallest conductor containing the element.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default bound on the conductor of any scalar built from user input.
pub const DEFAULT_CONDUCTOR_CAP: u32 = 120;

thread_local! {
    static CONDUCTOR_CAP: std::cell::Cell<u32> = const { std::cell::Cell::new(DEFAULT_CONDUCTOR_CAP) };
}

/// Cap used by `FromStr` and deserialization on this thread.
pub fn conductor_cap() -> u32 {
    CONDUCTOR_CAP.with(|c| c.get())
}

/// Sets the cap for this thread and returns the previous one.
pub fn set_conductor_cap(cap: u32) -> u32 {
    CONDUCTOR_CAP.with(|c| c.replace(cap))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {conductor} exceeds the configured cap {cap}")]
    ConductorOverflow { conductor: u64, cap: u32 },
    #[error("invalid root of unity order {0}")]
    InvalidOrder(i64),
    #[error("scalar parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

// ---------------------------------------------------------------------------
// Cyclotomic field tables
// ---------------------------------------------------------------------------

struct Field {
    degree: usize,
    /// `x^k mod Φ_N` for `k < max(N, 2·degree)`.
    reductions: Vec<Vec<i64>>,
    modulus: Vec<i64>,
}

fn field(n: u32) -> Arc<Field> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(f) = cache.read().expect("field cache poisoned").get(&n) {
        return f.clone();
    }
    let built = Arc::new(build_field(n));
    cache
        .write()
        .expect("field cache poisoned")
        .entry(n)
        .or_insert(built)
        .clone()
}

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = exact_div_monic(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "cyclotomic division not exact");
    quot
}

fn build_field(n: u32) -> Field {
    let modulus = cyclotomic_polynomial(n);
    let degree = modulus.len() - 1;
    let len = (n as usize).max(2 * degree).max(1);
    let mut reductions = Vec::with_capacity(len);
    let mut cur = vec![0i64; degree];
    if degree > 0 {
        cur[0] = 1;
    }
    for _ in 0..len {
        reductions.push(cur.clone());
        // multiply by x and reduce the overflow term with the monic modulus
        let top = cur[degree - 1];
        for i in (1..degree).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..degree {
                cur[i] = cur[i]
                    .checked_sub(top.checked_mul(modulus[i]).expect("reduction overflow"))
                    .expect("reduction overflow");
            }
        }
    }
    Field {
        degree,
        reductions,
        modulus,
    }
}

pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn canonical_conductor(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

// ---------------------------------------------------------------------------
// Scalar
// ---------------------------------------------------------------------------

/// An exact element of a cyclotomic field.
#[derive(Clone)]
pub struct Scalar {
    conductor: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            conductor: 1,
            num: vec![BigInt::zero()],
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar {
            conductor: 1,
            num: vec![BigInt::from(n)],
            den: BigInt::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Scalar {
            conductor: 1,
            num: vec![r.numer().clone()],
            den: r.denom().clone(),
        }
        .normalized()
    }

    /// `n / d`; panics if `d == 0`.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `ζ_n^k` without a conductor bound.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "root of unity of order 0");
        let k = k.rem_euclid(n as i64) as u32;
        let g = n.gcd(&k);
        let (mut n, mut k) = (n / g, k / g);
        if k == 0 {
            return Scalar::one();
        }
        let mut negate = false;
        if n % 4 == 2 {
            // ζ_{2m} = -ζ_m^{(m+1)/2} for odd m
            let m = n / 2;
            if k % 2 == 1 {
                negate = true;
            }
            k = ((k as u64 * ((m as u64 + 1) / 2)) % m as u64) as u32;
            n = m;
        }
        let out = if n == 1 || k == 0 {
            Scalar::one()
        } else {
            let f = field(n);
            Scalar {
                conductor: n,
                num: f.reductions[k as usize].iter().map(|&c| BigInt::from(c)).collect(),
                den: BigInt::one(),
            }
            .normalized()
        };
        if negate {
            -out
        } else {
            out
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.num[0].is_one() && self.den.is_one()
    }

    /// Power-basis coefficients at the stored conductor.
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        (self.conductor == 1).then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    fn normalized(mut self) -> Self {
        if self.den.is_negative() {
            self.den = -self.den;
            for c in &mut self.num {
                *c = -c.clone();
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
        if self.conductor != 1 && self.num[1..].iter().all(Zero::is_zero) {
            let c0 = self.num.swap_remove(0);
            self.num = vec![c0];
            self.conductor = 1;
        }
        if self.is_zero() {
            self.den = BigInt::one();
        }
        self
    }

    /// Numerators of `self` written in `Q(ζ_target)`; `conductor` must divide `target`.
    fn embedded_num(&self, target: u32) -> Vec<BigInt> {
        if self.conductor == target {
            return self.num.clone();
        }
        let f = field(target);
        let step = (target / self.conductor) as usize;
        let mut out = vec![BigInt::zero(); f.degree];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, &r) in f.reductions[j * step].iter().enumerate() {
                if r != 0 {
                    out[i] += c * r;
                }
            }
        }
        out
    }

    fn common_conductor(&self, other: &Scalar) -> u32 {
        canonical_conductor(self.conductor.lcm(&other.conductor))
    }

    /// Conductor of `self op other` before any demotion.
    pub fn joint_conductor(&self, other: &Scalar) -> u32 {
        self.common_conductor(other)
    }

    fn add_impl(&self, other: &Scalar) -> Scalar {
        let n = self.common_conductor(other);
        let a = self.embedded_num(n);
        let b = other.embedded_num(n);
        let num = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| x * &other.den + y * &self.den)
            .collect();
        Scalar {
            conductor: n,
            num,
            den: &self.den * &other.den,
        }
        .normalized()
    }

    fn mul_impl(&self, other: &Scalar) -> Scalar {
        if self.conductor == 1 || other.conductor == 1 {
            let (s, v) = if self.conductor == 1 {
                (&self.num[0], other)
            } else {
                (&other.num[0], self)
            };
            let den = if self.conductor == 1 {
                &self.den * &other.den
            } else {
                &other.den * &self.den
            };
            return Scalar {
                conductor: v.conductor,
                num: v.num.iter().map(|c| c * s).collect(),
                den,
            }
            .normalized();
        }
        let n = self.common_conductor(other);
        let f = field(n);
        let a = self.embedded_num(n);
        let b = other.embedded_num(n);
        let d = f.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut num: Vec<BigInt> = prod[..d].to_vec();
        for (k, c) in prod.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (i, &r) in f.reductions[k].iter().enumerate() {
                if r != 0 {
                    num[i] += c * r;
                }
            }
        }
        Scalar {
            conductor: n,
            num,
            den: &self.den * &other.den,
        }
        .normalized()
    }

    /// Multiplicative inverse via extended Euclid against `Φ_N`.
    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.conductor == 1 {
            return Ok(Scalar {
                conductor: 1,
                num: vec![self.den.clone()],
                den: self.num[0].clone(),
            }
            .normalized());
        }
        let f = field(self.conductor);
        let a: Vec<BigRational> = self.coefficients();
        let m: Vec<BigRational> = f
            .modulus
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let s = poly::inverse_mod(&a, &m).ok_or(ScalarError::DivisionByZero)?;
        Ok(Scalar::from_power_basis(self.conductor, &s))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &other.inv()?)
    }

    /// Build from rational power-basis coefficients of `Q(ζ_n)`; extra
    /// coefficients beyond `φ(n)` are reduced modulo `Φ_n`.
    pub fn from_power_basis(n: u32, coeffs: &[BigRational]) -> Scalar {
        let mut acc = Scalar::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&Scalar::from_rational(c) * &Scalar::root_of_unity(n, k as i64));
        }
        acc
    }

    pub fn pow(&self, e: i64) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Image under complex conjugation `ζ_N ↦ ζ_N^{-1}`.
    pub fn conjugate(&self) -> Scalar {
        if self.conductor == 1 {
            return self.clone();
        }
        let n = self.conductor;
        let f = field(n);
        let mut num = vec![BigInt::zero(); f.degree];
        num[0] = self.num[0].clone();
        for (k, c) in self.num.iter().enumerate().skip(1) {
            if c.is_zero() {
                continue;
            }
            for (i, &r) in f.reductions[n as usize - k].iter().enumerate() {
                if r != 0 {
                    num[i] += c * r;
                }
            }
        }
        Scalar {
            conductor: n,
            num,
            den: self.den.clone(),
        }
        .normalized()
    }

    /// Complex value under `ζ_N ↦ exp(2πi/N)`.
    pub fn embed_complex(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let den = big_to_f64(&self.den);
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = big_to_f64(c) / den;
            let theta = std::f64::consts::TAU * k as f64 / n;
            re += w * theta.cos();
            im += w * theta.sin();
        }
        (re, im)
    }

    /// The same element written over the smallest conductor that contains it.
    pub fn minimal_form(&self) -> Scalar {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let target: Vec<BigRational> = self.coefficients();
        for m in 2..n {
            if n % m != 0 || m % 4 == 2 {
                continue;
            }
            if let Some(c) = solve_in_subfield(n, m, &target) {
                return Scalar::from_power_basis(m, &c);
            }
        }
        self.clone()
    }

    /// Whether `self` is a root of unity of order dividing `n`.
    pub fn is_root_of_unity_of_order(&self, n: u32) -> bool {
        matches!(self.pow(n as i64), Ok(p) if p.is_one())
    }
}

fn big_to_f64(b: &BigInt) -> f64 {
    b.to_f64().unwrap_or(f64::NAN)
}

/// Coefficients `c` with `Σ c_j ζ_m^j = target` inside `Q(ζ_n)`, if any.
fn solve_in_subfield(n: u32, m: u32, target: &[BigRational]) -> Option<Vec<BigRational>> {
    let fm = field(m);
    let fnn = field(n);
    let step = (n / m) as usize;
    let rows = fnn.degree;
    let cols = fm.degree;
    // augmented system: columns are the embedded basis ζ_m^j
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..cols)
                .map(|j| BigRational::from_integer(BigInt::from(fnn.reductions[j * step][i])))
                .collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, p);
        let inv = a[pivot_row][col].recip();
        for x in a[pivot_row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..=cols {
                    let delta = &factor * &a[pivot_row][c];
                    a[r][c] = &a[r][c] - &delta;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if a[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut sol = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = a[r][cols].clone();
    }
    Some(sol)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.den == other.den && self.num == other.num;
        }
        let n = self.common_conductor(other);
        let a = self.embedded_num(n);
        let b = other.embedded_num(n);
        a.iter()
            .zip(b.iter())
            .all(|(x, y)| x * &other.den == y * &self.den)
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.$imp(rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$imp(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$imp(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Mul, mul, mul_impl);

impl Scalar {
    fn sub_impl(&self, rhs: &Scalar) -> Scalar {
        self.add_impl(&-rhs)
    }
}
forward_binop!(Sub, sub, sub_impl);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            conductor: self.conductor,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

impl fmt::Display for Scalar {
    /// Canonical literal: rational part first, then `c*qN^k` terms in
    /// increasing `k` over the minimal conductor, joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.minimal_form();
        if s.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (k, c) in s.coefficients().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = if c.is_integer() {
                c.numer().to_string()
            } else {
                format!("{}/{}", c.numer(), c.denom())
            };
            if k == 0 {
                terms.push(coeff);
                continue;
            }
            let root = if k == 1 {
                format!("q{}", s.conductor)
            } else {
                format!("q{}^{}", s.conductor, k)
            };
            if c.is_one() {
                terms.push(root);
            } else {
                terms.push(format!("{coeff}*{root}"));
            }
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl std::str::FromStr for Scalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s, conductor_cap())
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Lit {
            Int(i64),
            Text(String),
        }
        match Lit::deserialize(deserializer)? {
            Lit::Int(n) => Ok(Scalar::from_integer(n)),
            Lit::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

// ---------------------------------------------------------------------------
// Expression trees and the literal grammar
// ---------------------------------------------------------------------------

/// A scalar expression; leaves are rationals or roots of unity.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarExpr {
    Rational(BigRational),
    Root { order: u32, power: i64 },
    Add(Box<ScalarExpr>, Box<ScalarExpr>),
    Mul(Box<ScalarExpr>, Box<ScalarExpr>),
    Neg(Box<ScalarExpr>),
    Inv(Box<ScalarExpr>),
}

fn check_cap(conductor: u64, cap: u32) -> Result<(), ScalarError> {
    if conductor > cap as u64 {
        Err(ScalarError::ConductorOverflow { conductor, cap })
    } else {
        Ok(())
    }
}

/// `ζ_n^k` in canonical form, refusing conductors above `cap`.
pub fn root_of_unity(n: i64, k: i64, cap: u32) -> Result<Scalar, ScalarError> {
    if n < 1 {
        return Err(ScalarError::InvalidOrder(n));
    }
    let g = (n as u64).gcd(&(k.rem_euclid(n) as u64));
    check_cap(canonical_conductor((n as u64 / g.max(1)) as u32) as u64, cap)?;
    Ok(Scalar::root_of_unity(n as u32, k))
}

impl ScalarExpr {
    pub fn eval(&self, cap: u32) -> Result<Scalar, ScalarError> {
        match self {
            ScalarExpr::Rational(r) => Ok(Scalar::from_rational(r)),
            ScalarExpr::Root { order, power } => root_of_unity(*order as i64, *power, cap),
            ScalarExpr::Add(a, b) => {
                let (x, y) = (a.eval(cap)?, b.eval(cap)?);
                check_cap(x.joint_conductor(&y) as u64, cap)?;
                Ok(&x + &y)
            }
            ScalarExpr::Mul(a, b) => {
                let (x, y) = (a.eval(cap)?, b.eval(cap)?);
                check_cap(x.joint_conductor(&y) as u64, cap)?;
                Ok(&x * &y)
            }
            ScalarExpr::Neg(a) => Ok(-a.eval(cap)?),
            ScalarExpr::Inv(a) => a.eval(cap)?.inv(),
        }
    }
}

/// Evaluate a scalar expression tree exactly.
pub fn arith_eval(expr: &ScalarExpr, cap: u32) -> Result<Scalar, ScalarError> {
    expr.eval(cap)
}

/// Parse a scalar literal such as `1/2*q8^3 + -1/2*q8`.
pub fn parse_scalar(text: &str, cap: u32) -> Result<Scalar, ScalarError> {
    parse_scalar_expr(text)?.eval(cap)
}

pub fn parse_scalar_expr(text: &str) -> Result<ScalarExpr, ScalarError> {
    let mut p = LitParser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct LitParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl LitParser<'_> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ScalarExpr, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = ScalarExpr::Add(Box::new(acc), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = ScalarExpr::Add(Box::new(acc), Box::new(ScalarExpr::Neg(Box::new(rhs))));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr, ScalarError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = ScalarExpr::Mul(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ScalarExpr, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'q') => {
                self.pos += 1;
                let order = self.unsigned()?;
                if order.is_zero() {
                    return Err(self.err("root of unity order must be positive"));
                }
                let power = if self.src.get(self.pos) == Some(&b'^') {
                    self.pos += 1;
                    self.signed()?
                } else {
                    BigInt::one()
                };
                let order = u32::try_from(order).map_err(|_| self.err("order too large"))?;
                let power = i64::try_from(power).map_err(|_| self.err("exponent too large"))?;
                Ok(ScalarExpr::Root { order, power })
            }
            Some(c) if c == b'-' || c.is_ascii_digit() => {
                let n = self.signed()?;
                let d = if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let d = self.unsigned()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    d
                } else {
                    BigInt::one()
                };
                Ok(ScalarExpr::Rational(BigRational::new(n, d)))
            }
            _ => Err(self.err("expected a rational, a root qN, or '('")),
        }
    }

    fn unsigned(&mut self) -> Result<BigInt, ScalarError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn signed(&mut self) -> Result<BigInt, ScalarError> {
        let neg = if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let v = self.unsigned()?;
        Ok(if neg { -v } else { v })
    }
}

// ---------------------------------------------------------------------------
// Rational polynomial helpers for inversion
// ---------------------------------------------------------------------------

mod poly {
    use num_rational::BigRational;
    use num_traits::Zero;

    fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
        while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    fn degree(p: &[BigRational]) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }

    fn divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let db = degree(b).expect("division by zero polynomial");
        let mut r = a.to_vec();
        let mut q = vec![BigRational::zero(); a.len().max(1)];
        let lead = b[db].clone();
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let c = &r[dr] / &lead;
            let shift = dr - db;
            for (i, bi) in b.iter().enumerate().take(db + 1) {
                r[i + shift] = &r[i + shift] - &(&c * bi);
            }
            q[shift] = &q[shift] + &c;
        }
        (trim(q), trim(r))
    }

    fn sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let len = a.len().max(q.len() + b.len());
        let mut out = vec![BigRational::zero(); len];
        for (i, x) in a.iter().enumerate() {
            out[i] = x.clone();
        }
        for (i, x) in q.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] - &(x * y);
            }
        }
        trim(out)
    }

    /// `s` with `s·a ≡ 1 (mod m)`, or `None` if `gcd(a, m) ≠ 1`.
    pub fn inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
        let (mut r0, mut r1) = (m.to_vec(), trim(a.to_vec()));
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![num_traits::One::one()]);
        while degree(&r1).is_some() {
            let (q, r) = divmod(&r0, &r1);
            let s2 = sub_mul(&s0, &q, &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is the gcd; it must be a nonzero constant
        if degree(&r0) != Some(0) {
            return None;
        }
        let c = r0[0].clone();
        let (_, s) = divmod(&s0, m);
        Some(s.into_iter().map(|x| x / &c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u32, k: i64) -> Scalar {
        Scalar::root_of_unity(n, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len() - 1, euler_phi(105) as usize);
        assert!(p105.contains(&-2));
    }

    #[test]
    fn rational_arithmetic() {
        let s = Scalar::from_ratio(1, 2) + Scalar::from_ratio(1, 3);
        assert_eq!(s, Scalar::from_ratio(5, 6));
        assert_eq!(s.to_string(), "5/6");
    }

    #[test]
    fn fourth_root_squares_to_minus_one() {
        assert_eq!(&q(4, 1) * &q(4, 1), Scalar::from_integer(-1));
    }

    #[test]
    fn inverse_of_one_plus_zeta3() {
        let x = Scalar::one() + q(3, 1);
        let inv = x.inv().unwrap();
        assert!((&x * &inv).is_one());
        // 1 + ζ = -ζ², so the inverse is -ζ; -ζ² multiplies back to ζ instead
        assert_eq!(inv, -q(3, 1));
        assert!(!(&x * &-q(3, 2)).is_one());
    }

    #[test]
    fn root_reduction() {
        assert!(q(1, 0).is_one());
        assert_eq!(q(2, 1), Scalar::from_integer(-1));
        assert_eq!(q(8, 2), q(4, 1));
        assert_eq!(q(8, 2).to_string(), "q4");
        assert_eq!(q(6, 1), -q(3, 2));
        assert_eq!(q(6, 1).conductor(), 3);
    }

    #[test]
    fn conjugation() {
        assert_eq!(Scalar::from_ratio(3, 4).conjugate(), Scalar::from_ratio(3, 4));
        assert_eq!(q(8, 1).conjugate(), q(8, 7));
        let s = q(3, 1) + q(3, 2);
        assert_eq!(s.conjugate(), s);
        assert_eq!(s, Scalar::from_integer(-1));
    }

    #[test]
    fn complex_embedding() {
        let (re, im) = Scalar::from_integer(-1).embed_complex();
        assert_eq!((re, im), (-1.0, 0.0));
        let z = q(8, 1);
        let (re, im) = (&z + &z.conjugate()).embed_complex();
        assert!((re - std::f64::consts::SQRT_2).abs() < 1e-10 && im.abs() < 1e-10);
        let (re, im) = q(3, 1).embed_complex();
        assert!((re + 0.5).abs() < 1e-10 && (im - 0.866_025_403_8).abs() < 1e-10);
    }

    #[test]
    fn literal_grammar() {
        let s: Scalar = "1/2*q8^3 + -1/2*q8".parse().unwrap();
        assert_eq!(s, Scalar::from_ratio(1, 2) * (q(8, 3) - q(8, 1)));
        let text = s.to_string();
        let again: Scalar = text.parse().unwrap();
        assert_eq!(again.to_string(), text);
        assert_eq!("(1 + q3)*q3^2".parse::<Scalar>().unwrap(), q(3, 2) + Scalar::one());
        assert_eq!("q4^-1".parse::<Scalar>().unwrap(), -q(4, 1));
        assert_eq!("2 - 3".parse::<Scalar>().unwrap(), Scalar::from_integer(-1));
        assert!(matches!("1/0".parse::<Scalar>(), Err(ScalarError::Parse { .. })));
        assert!(matches!("q8 +".parse::<Scalar>(), Err(ScalarError::Parse { pos: 4, .. })));
    }

    #[test]
    fn expression_errors() {
        let zero = ScalarExpr::Add(
            Box::new(ScalarExpr::Root { order: 3, power: 1 }),
            Box::new(ScalarExpr::Neg(Box::new(ScalarExpr::Root { order: 3, power: 1 }))),
        );
        let e = ScalarExpr::Inv(Box::new(zero));
        assert_eq!(arith_eval(&e, DEFAULT_CONDUCTOR_CAP), Err(ScalarError::DivisionByZero));
        let big = parse_scalar_expr("q7*q24").unwrap();
        assert!(matches!(
            arith_eval(&big, DEFAULT_CONDUCTOR_CAP),
            Err(ScalarError::ConductorOverflow { conductor: 168, cap: 120 })
        ));
        assert!(matches!(
            root_of_unity(121, 1, DEFAULT_CONDUCTOR_CAP),
            Err(ScalarError::ConductorOverflow { .. })
        ));
        // ζ_242^2 = ζ_121, still over the cap; ζ_242^121 = -1 is fine
        assert!(root_of_unity(242, 121, DEFAULT_CONDUCTOR_CAP).unwrap() == Scalar::from_integer(-1));
    }

    #[test]
    fn root_orders() {
        for n in 1..=24u32 {
            for k in 0..n as i64 {
                let z = q(n, k);
                let order = n / n.gcd(&(k as u32));
                assert!(z.is_root_of_unity_of_order(order));
                for d in 1..order {
                    if order % d == 0 {
                        assert!(!z.is_root_of_unity_of_order(d), "ζ_{n}^{k} has order < {order}");
                    }
                }
            }
        }
    }

    #[test]
    fn minimal_form_shrinks_conductor() {
        // ζ_12^3 = ζ_4 computed through a product in conductor 12
        let z = &q(12, 1) * &q(12, 2);
        assert_eq!(z.minimal_form().conductor(), 4);
        let sqrt2 = q(8, 1) + q(8, 7);
        let sqrt3 = q(12, 1) + q(12, 11);
        let s = &sqrt2 * &sqrt3; // √6 lives in Q(ζ_24)
        assert_eq!(s.minimal_form().conductor(), 24);
        assert_eq!(s.to_string().parse::<Scalar>().unwrap(), s);
    }
}
