//! Free Z2-graded C[∂]-modules of finite rank.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{AffineExpr, Poly, VarId};
use crate::scalar::{Coeff, Scalar};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u8) -> Option<Parity> {
        match b {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `(-1)^{|a||b|}` as ±1.
pub fn sign(a: Parity, b: Parity) -> i64 {
    if a.is_odd() && b.is_odd() {
        -1
    } else {
        1
    }
}

/// Ordered list of named, parity-tagged generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedBasis {
    names: Vec<String>,
    parities: Vec<Parity>,
}

impl GradedBasis {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, Parity)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut parities = Vec::new();
        for (n, p) in gens {
            let n = n.into();
            if names.contains(&n) {
                return Err(Error::DuplicateBasisName(n));
            }
            names.push(n);
            parities.push(p);
        }
        if names.is_empty() {
            return Err(Error::EmptyBasis);
        }
        Ok(GradedBasis { names, parities })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// `Σ pᵢ(∂, λ…)·eᵢ` over a basis of fixed rank. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Element<C = Scalar> {
    rank: usize,
    terms: BTreeMap<usize, Poly<C>>,
}

impl<C: Coeff> Element<C> {
    pub fn zero(rank: usize) -> Self {
        Element {
            rank,
            terms: BTreeMap::new(),
        }
    }

    /// The generator `eᵢ`.
    pub fn basis(rank: usize, i: usize) -> Self {
        Element::term(rank, i, Poly::one())
    }

    pub fn term(rank: usize, i: usize, p: Poly<C>) -> Self {
        assert!(i < rank, "basis index {i} out of range for rank {rank}");
        let mut e = Element::zero(rank);
        if !p.is_zero() {
            e.terms.insert(i, p);
        }
        e
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (usize, Poly<C>)>) -> Self {
        let mut e = Element::zero(rank);
        for (i, p) in terms {
            e.add_term(i, &p);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Poly<C>)> {
        self.terms.iter().map(|(i, p)| (*i, p))
    }

    pub fn coeff(&self, i: usize) -> Poly<C> {
        self.terms.get(&i).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    /// Adds `p·eᵢ` in place.
    pub fn add_term(&mut self, i: usize, p: &Poly<C>) {
        assert!(i < self.rank, "basis index {i} out of range for rank {}", self.rank);
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.get(&i) {
            Some(q) => q.add(p),
            None => p.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&i);
        } else {
            self.terms.insert(i, sum);
        }
    }

    /// `self + s·other`.
    pub fn combine(&self, other: &Self, s: &Poly<C>) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::BasisMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        let mut out = self.clone();
        out.add_scaled(other, s);
        Ok(out)
    }

    /// In-place `self += s·other`. Ranks must agree.
    pub fn add_scaled(&mut self, other: &Self, s: &Poly<C>) {
        debug_assert_eq!(self.rank, other.rank);
        if s.is_zero() {
            return;
        }
        for (i, p) in &other.terms {
            self.add_term(*i, &p.mul(s));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Poly::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Poly::from_i64(-1));
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|p| p.neg())
    }

    pub fn scale(&self, s: &Poly<C>) -> Self {
        self.map(|p| p.mul(s))
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        let c = C::from_i64(k);
        self.map(|p| p.scale(&c))
    }

    pub fn subst(&self, v: VarId, e: &AffineExpr<C>) -> Self {
        self.map(|p| p.subst(v, e))
    }

    pub fn rename(&self, from: VarId, to: VarId) -> Self {
        self.map(|p| p.rename(from, to))
    }

    pub fn coeff_extract(&self, v: VarId, n: u32) -> Self {
        self.map(|p| p.coeff_extract(v, n))
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.terms.values().any(|p| p.contains(v))
    }

    pub fn map(&self, mut f: impl FnMut(&Poly<C>) -> Poly<C>) -> Self {
        Element::from_terms(self.rank, self.terms.iter().map(|(i, p)| (*i, f(p))))
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Element<D> {
        Element::from_terms(
            self.rank,
            self.terms.iter().map(|(i, p)| (*i, p.map_coeffs(&mut f))),
        )
    }

    /// Common parity of the support, or `None` for the zero element or a
    /// mixed-parity element.
    pub fn parity(&self, basis: &GradedBasis) -> Option<Parity> {
        let mut it = self.terms.keys().map(|i| basis.parity(*i));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Renders as `(poly)*name + ...` in basis order, or `0`.
    pub fn display<'a>(&'a self, basis: &'a GradedBasis) -> ElementDisplay<'a, C> {
        ElementDisplay {
            elem: self,
            basis,
        }
    }
}

pub struct ElementDisplay<'a, C> {
    elem: &'a Element<C>,
    basis: &'a GradedBasis,
}

impl<C: Coeff> fmt::Display for ElementDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return f.write_str("0");
        }
        for (k, (i, p)) in self.elem.terms().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})*{}", p, self.basis.name(i))?;
        }
        Ok(())
    }
}

/// Even ∂-linear endomorphism given by a square matrix of ∂-polynomials.
/// Column `j` is the image of `eⱼ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleMap<C = Scalar> {
    columns: Vec<Element<C>>,
}

impl<C: Coeff> ModuleMap<C> {
    pub fn from_columns(columns: Vec<Element<C>>) -> Result<Self> {
        let n = columns.len();
        for (j, col) in columns.iter().enumerate() {
            if col.rank() != n {
                return Err(Error::DimensionMismatch {
                    map: n,
                    element: col.rank(),
                });
            }
            for (i, p) in col.terms() {
                if !p.uses_only(&[VarId::D]) {
                    return Err(Error::MapNotActionOnly { row: i, col: j });
                }
            }
        }
        Ok(ModuleMap { columns })
    }

    pub fn identity(rank: usize) -> Self {
        ModuleMap {
            columns: (0..rank).map(|i| Element::basis(rank, i)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        ModuleMap {
            columns: (0..rank).map(|_| Element::zero(rank)).collect(),
        }
    }

    /// Diagonal map with the given ∂-polynomials.
    pub fn diagonal(entries: Vec<Poly<C>>) -> Result<Self> {
        let n = entries.len();
        Self::from_columns(
            entries
                .into_iter()
                .enumerate()
                .map(|(i, p)| Element::term(n, i, p))
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &Element<C> {
        &self.columns[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Poly<C> {
        self.columns[j].coeff(i)
    }

    pub fn apply(&self, a: &Element<C>) -> Result<Element<C>> {
        if a.rank() != self.rank() {
            return Err(Error::DimensionMismatch {
                map: self.rank(),
                element: a.rank(),
            });
        }
        let mut out = Element::zero(self.rank());
        for (j, p) in a.terms() {
            out.add_scaled(&self.columns[j], p);
        }
        Ok(out)
    }

    /// Even maps send every generator to an element of the same parity.
    pub fn is_even(&self, basis: &GradedBasis) -> bool {
        self.columns.iter().enumerate().all(|(j, col)| {
            col.support()
                .all(|i| basis.parity(i) == basis.parity(j))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d() -> Poly {
        Poly::var(VarId::D)
    }

    #[test]
    fn combine_examples() {
        let x = Element::<Scalar>::basis(2, 0);
        let y = Element::basis(2, 1);
        assert_eq!(x.combine(&y, &Poly::zero()).unwrap(), x);
        assert!(x.combine(&x, &Poly::from_i64(-1)).unwrap().is_zero());
        let e = x.combine(&y, &d()).unwrap();
        assert_eq!(e.coeff(0), Poly::one());
        assert_eq!(e.coeff(1), d());
        assert!(x.combine(&Element::basis(3, 0), &d()).is_err());
    }

    #[test]
    fn map_examples() {
        let x = Element::<Scalar>::basis(2, 0);
        assert_eq!(ModuleMap::identity(2).apply(&x).unwrap(), x);
        let dm = ModuleMap::diagonal(vec![d(), d()]).unwrap();
        assert_eq!(dm.apply(&x).unwrap(), Element::term(2, 0, d()));
        assert!(ModuleMap::zero(2).apply(&x).unwrap().is_zero());
        assert!(ModuleMap::identity(3).apply(&x).is_err());
        let bad = Element::<Scalar>::term(1, 0, Poly::var(VarId::LAMBDA));
        assert!(ModuleMap::from_columns(vec![bad]).is_err());
    }

    #[test]
    fn basis_validation() {
        assert!(GradedBasis::new([("x", Parity::Even), ("x", Parity::Odd)]).is_err());
        assert!(GradedBasis::new(Vec::<(String, Parity)>::new()).is_err());
        assert_eq!(Parity::Odd + Parity::Odd, Parity::Even);
    }
}
