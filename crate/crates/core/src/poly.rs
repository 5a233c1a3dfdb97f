//! Sparse multivariate polynomials in the action variable ∂ and four formal
//! λ-variables.
//!
//! Terms are kept sorted by [`Monomial`] with no zero coefficients, so
//! structural equality is polynomial equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::{Coeff, Scalar};

pub const NUM_VARS: usize = 5;

/// A polynomial variable: the action variable ∂ or one of four λ-slots.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarId {
    Action,
    Lam(u8),
}

impl VarId {
    pub const D: VarId = VarId::Action;
    pub const LAMBDA: VarId = VarId::Lam(0);
    pub const MU: VarId = VarId::Lam(1);
    pub const GAMMA: VarId = VarId::Lam(2);
    /// Reserved for composed binders such as `−∂−λ`.
    pub const SCRATCH: VarId = VarId::Lam(3);

    pub const ALL: [VarId; NUM_VARS] = [
        VarId::Action,
        VarId::Lam(0),
        VarId::Lam(1),
        VarId::Lam(2),
        VarId::Lam(3),
    ];

    pub fn index(self) -> usize {
        match self {
            VarId::Action => 0,
            VarId::Lam(i) => {
                assert!(i < 4, "λ-slot {i} out of range");
                1 + i as usize
            }
        }
    }

    pub fn from_index(i: usize) -> VarId {
        VarId::ALL[i]
    }

    /// Canonical print name: D, L, M, G, N.
    pub fn name(self) -> &'static str {
        ["D", "L", "M", "G", "N"][self.index()]
    }
}

/// Exponent vector packed as `[deg | e_∂ | e_λ0 | e_λ1 | e_λ2 | e_λ3]`,
/// eight bits per field. Integer order on the packed word is graded order
/// with ∂ first, so multiplication is a plain add.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(u64);

const FIELD: u64 = 0xff;
const DEG_SHIFT: u32 = 40;

fn shift_of(var: usize) -> u32 {
    8 * (4 - var as u32)
}

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: [u32; NUM_VARS]) -> Monomial {
        let deg: u32 = exps.iter().sum();
        assert!(deg <= FIELD as u32, "monomial degree {deg} exceeds 255");
        let mut word = (deg as u64) << DEG_SHIFT;
        for (v, e) in exps.iter().enumerate() {
            word |= (*e as u64) << shift_of(v);
        }
        Monomial(word)
    }

    pub fn var(v: VarId) -> Monomial {
        let mut e = [0; NUM_VARS];
        e[v.index()] = 1;
        Monomial::from_exponents(e)
    }

    pub fn exponent(self, v: VarId) -> u32 {
        ((self.0 >> shift_of(v.index())) & FIELD) as u32
    }

    pub fn exponents(self) -> [u32; NUM_VARS] {
        let mut out = [0; NUM_VARS];
        for (i, e) in out.iter_mut().enumerate() {
            *e = ((self.0 >> shift_of(i)) & FIELD) as u32;
        }
        out
    }

    pub fn degree(self) -> u32 {
        (self.0 >> DEG_SHIFT) as u32
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Monomial) -> Monomial {
        assert!(
            self.degree() + other.degree() <= FIELD as u32,
            "monomial degree overflow"
        );
        Monomial(self.0 + other.0)
    }

    /// Same monomial with the exponent of `v` set to zero.
    fn without(self, v: VarId) -> Monomial {
        let e = self.exponent(v) as u64;
        Monomial(self.0 - (e << shift_of(v.index())) - (e << DEG_SHIFT))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("substitution expression is not affine (degree {0})")]
    NotAffine(u32),
}

/// Exact sparse polynomial in ∂, λ₀..λ₃.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<C = Scalar> {
    terms: Vec<(Monomial, C)>,
}

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Poly::monomial(Monomial::ONE, c)
    }

    pub fn from_i64(n: i64) -> Self {
        Poly::constant(C::from_i64(n))
    }

    pub fn var(v: VarId) -> Self {
        Poly::monomial(Monomial::var(v), C::one())
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(mut terms: Vec<(Monomial, C)>) -> Self {
        terms.sort_unstable_by_key(|(m, _)| *m);
        let mut out: Vec<(Monomial, C)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((last, acc)) if *last == m => acc.add_assign(&c),
                _ => {
                    if let Some((_, acc)) = out.last() {
                        if acc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, acc)) = out.last() {
            if acc.is_zero() {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the exact monomial `m`.
    pub fn coefficient(&self, m: Monomial) -> C {
        match self.terms.binary_search_by_key(&m, |(k, _)| *k) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => C::zero(),
        }
    }

    /// Constant term.
    pub fn constant_term(&self) -> C {
        self.coefficient(Monomial::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == Monomial::ONE)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, v: VarId) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) > 0)
    }

    /// True when every monomial only involves variables from `allowed`.
    pub fn uses_only(&self, allowed: &[VarId]) -> bool {
        VarId::ALL
            .iter()
            .filter(|v| !allowed.contains(v))
            .all(|v| !self.contains(*v))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (*m, k.mul(c))).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, k)| (*m, k.neg())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let rhs = |c: &C| if negate { c.neg() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0, rhs(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate {
                        a[i].1.add(&b[j].1.neg())
                    } else {
                        a[i].1.add(&b[j].1)
                    };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (*m, rhs(c))));
        Poly { terms: out }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() == 1 && self.terms[0].0 == Monomial::ONE {
            return other.scale(&self.terms[0].1);
        }
        if other.terms.len() == 1 && other.terms[0].0 == Monomial::ONE {
            return self.scale(&other.terms[0].1);
        }
        let mut prods = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                prods.push((ma.mul(*mb), ca.mul(cb)));
            }
        }
        Poly::from_terms(prods)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Polynomial multiplying `vⁿ` in `self`, with `v` removed.
    pub fn coeff_extract(&self, v: VarId, n: u32) -> Self {
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exponent(v) == n)
                .map(|(m, c)| (m.without(v), c.clone()))
                .collect(),
        )
    }

    /// Splits `self = Σ vᵏ·rₖ`, returning `[r₀, r₁, ...]`.
    fn split_by(&self, v: VarId) -> Vec<Poly<C>> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut parts: Vec<Vec<(Monomial, C)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            parts[m.exponent(v) as usize].push((m.without(v), c.clone()));
        }
        parts.into_iter().map(Poly::from_terms).collect()
    }

    /// Replaces every occurrence of `v` by the affine expression `e`.
    pub fn subst(&self, v: VarId, e: &AffineExpr<C>) -> Self {
        if !self.contains(v) {
            return self.clone();
        }
        self.compose(v, &e.to_poly())
    }

    /// Replaces `v` by an arbitrary polynomial (Horner evaluation).
    pub fn compose(&self, v: VarId, q: &Poly<C>) -> Self {
        if !self.contains(v) {
            return self.clone();
        }
        let parts = self.split_by(v);
        let mut acc = Poly::zero();
        for part in parts.iter().rev() {
            acc = acc.mul(q).add(part);
        }
        acc
    }

    /// Renames `from` to `to` when `to` does not occur; falls back to
    /// substitution otherwise.
    pub fn rename(&self, from: VarId, to: VarId) -> Self {
        if from == to || !self.contains(from) {
            return self.clone();
        }
        if self.contains(to) {
            return self.subst(from, &AffineExpr::var(to));
        }
        let (fi, ti) = (from.index(), to.index());
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.exponents();
                    e.swap(fi, ti);
                    (Monomial::from_exponents(e), c.clone())
                })
                .collect(),
        )
    }

    /// Maps every coefficient through `f`, dropping zeros.
    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))).collect())
    }

    pub fn try_map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> Option<D>) -> Option<Poly<D>> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            out.push((*m, f(c)?));
        }
        Some(Poly::from_terms(out))
    }

    /// Formats with custom variable names (indexed like [`VarId::index`]).
    pub fn display_with<'a>(&'a self, names: &'a [&'a str; NUM_VARS]) -> PolyDisplay<'a, C> {
        PolyDisplay { poly: self, names }
    }
}

pub const CANONICAL_NAMES: [&str; NUM_VARS] = ["D", "L", "M", "G", "N"];

pub struct PolyDisplay<'a, C> {
    poly: &'a Poly<C>,
    names: &'a [&'a str; NUM_VARS],
}

impl<C: Coeff> fmt::Display for PolyDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        // Canonical order: descending total degree, then ∂ before λ₀ before ...
        for (idx, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let (negative, abs) = c.sign_abs();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if *m == Monomial::ONE || !abs.is_one() {
                factors.push(abs.to_string());
            }
            for (v, e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.names[v].to_string()),
                    _ => factors.push(format!("{}^{}", self.names[v], e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with(&CANONICAL_NAMES).fmt(f)
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Self) -> Poly<C> {
        Poly::add(self, rhs)
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Self) -> Poly<C> {
        Poly::sub(self, rhs)
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Self) -> Poly<C> {
        Poly::mul(self, rhs)
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::neg(self)
    }
}

/// Rational linear combination of variables plus a constant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineExpr<C = Scalar> {
    coeffs: [C; NUM_VARS],
    constant: C,
}

impl<C: Coeff> AffineExpr<C> {
    pub fn zero() -> Self {
        AffineExpr {
            coeffs: std::array::from_fn(|_| C::zero()),
            constant: C::zero(),
        }
    }

    pub fn var(v: VarId) -> Self {
        let mut e = AffineExpr::<C>::zero();
        e.coeffs[v.index()] = C::one();
        e
    }

    /// `Σ kᵢ·vᵢ` from small integer coefficients.
    pub fn combo(parts: &[(i64, VarId)]) -> Self {
        let mut e = AffineExpr::<C>::zero();
        for (k, v) in parts {
            e.coeffs[v.index()].add_assign(&C::from_i64(*k));
        }
        e
    }

    pub fn with_constant(mut self, c: C) -> Self {
        self.constant = c;
        self
    }

    pub fn coefficient(&self, v: VarId) -> &C {
        &self.coeffs[v.index()]
    }

    /// The single variable this expression equals, if it is exactly one.
    pub fn as_var(&self) -> Option<VarId> {
        if !self.constant.is_zero() {
            return None;
        }
        let mut found = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if found.is_some() || !c.is_one() {
                return None;
            }
            found = Some(VarId::from_index(i));
        }
        found
    }

    pub fn contains(&self, v: VarId) -> bool {
        !self.coeffs[v.index()].is_zero()
    }

    pub fn to_poly(&self) -> Poly<C> {
        let mut terms: Vec<(Monomial, C)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::var(VarId::from_index(i)), c.clone()))
            .collect();
        terms.push((Monomial::ONE, self.constant.clone()));
        Poly::from_terms(terms)
    }

    /// Accepts a polynomial of total degree at most one.
    pub fn try_from_poly(p: &Poly<C>) -> Result<Self, PolyError> {
        let deg = p.total_degree().unwrap_or(0);
        if deg > 1 {
            return Err(PolyError::NotAffine(deg));
        }
        let mut e = AffineExpr::<C>::zero();
        for (m, c) in p.terms() {
            if *m == Monomial::ONE {
                e.constant = c.clone();
            } else {
                let v = (0..NUM_VARS)
                    .find(|&i| m.exponents()[i] == 1)
                    .expect("degree-one monomial");
                e.coeffs[v] = c.clone();
            }
        }
        Ok(e)
    }
}

/// Substitution entry point that validates affinity of a general polynomial.
pub fn poly_subst<C: Coeff>(p: &Poly<C>, v: VarId, e: &Poly<C>) -> Result<Poly<C>, PolyError> {
    let affine = AffineExpr::try_from_poly(e)?;
    Ok(p.subst(v, &affine))
}
