//! λ-product tables and their sesquilinear extension.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::gmodule::{Element, GradedBasis};
use crate::poly::{AffineExpr, Poly, VarId};
use crate::report::{CheckReport, Violation};
use crate::scalar::{Coeff, Scalar};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TableKind {
    Circ,
    Bracket,
    Star,
}

impl TableKind {
    pub const ALL: [TableKind; 3] = [TableKind::Circ, TableKind::Bracket, TableKind::Star];

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Circ => "circ",
            TableKind::Bracket => "bracket",
            TableKind::Star => "star",
        }
    }

    pub fn from_name(s: &str) -> Option<TableKind> {
        TableKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Generator products `eᵢ ∘_λ eⱼ`, stored densely for all ordered pairs.
/// Entries are polynomials in `D` and the table variable λ₀.
#[derive(Clone, Debug)]
pub struct ProductTable<C = Scalar> {
    kind: TableKind,
    rank: usize,
    entries: Vec<Element<C>>,
    // entries with λ₀ renamed to λ₁, λ₂, λ₃; index 0 is `entries` itself
    renamed: [Vec<Element<C>>; 3],
}

impl<C: Coeff> PartialEq for ProductTable<C> {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.rank == other.rank && self.entries == other.entries
    }
}

impl<C: Coeff> Eq for ProductTable<C> {}

impl<C: Coeff> ProductTable<C> {
    pub fn zero(kind: TableKind, rank: usize) -> Self {
        Self::build(kind, rank, vec![Element::zero(rank); rank * rank])
    }

    /// Builds a table from `(i, j, eᵢ∘eⱼ)` triples; unlisted pairs are zero and
    /// repeated pairs accumulate.
    pub fn from_entries(
        kind: TableKind,
        rank: usize,
        entries: impl IntoIterator<Item = (usize, usize, Element<C>)>,
    ) -> Result<Self> {
        let mut dense = vec![Element::zero(rank); rank * rank];
        for (i, j, e) in entries {
            if i >= rank || j >= rank || e.rank() != rank {
                return Err(Error::BasisMismatch {
                    left: rank,
                    right: e.rank().max(i + 1).max(j + 1),
                });
            }
            for (_, p) in e.terms() {
                if !p.uses_only(&[VarId::D, VarId::LAMBDA]) {
                    return Err(Error::IllegalVariable {
                        table: kind.name().to_string(),
                        pair: format!("{i},{j}"),
                    });
                }
            }
            let slot = &mut dense[i * rank + j];
            *slot = slot.add(&e);
        }
        Ok(Self::build(kind, rank, dense))
    }

    fn build(kind: TableKind, rank: usize, entries: Vec<Element<C>>) -> Self {
        let rename = |to: VarId| -> Vec<Element<C>> {
            entries.iter().map(|e| e.rename(VarId::LAMBDA, to)).collect()
        };
        let renamed = [rename(VarId::MU), rename(VarId::GAMMA), rename(VarId::SCRATCH)];
        ProductTable {
            kind,
            rank,
            entries,
            renamed,
        }
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn with_kind(&self, kind: TableKind) -> Self {
        let mut t = self.clone();
        t.kind = kind;
        t
    }

    pub fn entry(&self, i: usize, j: usize) -> &Element<C> {
        &self.entries[i * self.rank + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Element::is_zero)
    }

    /// Nonzero entries in `(i, j)` order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Element<C>)> {
        let r = self.rank;
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(move |(k, e)| (k / r, k % r, e))
    }

    /// Largest λ-degree over all entries.
    pub fn lambda_degree(&self) -> u32 {
        self.entries
            .iter()
            .flat_map(|e| e.terms().map(|(_, p)| p.degree_in(VarId::LAMBDA).unwrap_or(0)))
            .max()
            .unwrap_or(0)
    }

    fn entries_for(&self, v: VarId) -> &[Element<C>] {
        match v {
            VarId::Lam(0) => &self.entries,
            VarId::Lam(k) => &self.renamed[k as usize - 1],
            VarId::Action => unreachable!("binder must be a λ-variable"),
        }
    }

    /// `a ∘_v b` by sesquilinear extension of the generator table:
    /// `Σ pᵢ[∂↦−v]·qⱼ[∂↦∂+v]·t(i,j)[λ₀↦v]`.
    ///
    /// Other λ-variables in the operands are central scalars, so a bare binder
    /// is safe even when it already occurs in `a` or `b`.
    pub fn apply(&self, a: &Element<C>, b: &Element<C>, v: VarId) -> Result<Element<C>> {
        if v == VarId::D {
            return Err(Error::BinderCollision(v));
        }
        for e in [a, b] {
            if e.rank() != self.rank {
                return Err(Error::BasisMismatch {
                    left: self.rank,
                    right: e.rank(),
                });
            }
        }
        let table = self.entries_for(v);
        let left_sub = AffineExpr::combo(&[(-1, v)]);
        let right_sub = AffineExpr::combo(&[(1, VarId::D), (1, v)]);
        let rights: Vec<(usize, Poly<C>)> = b
            .terms()
            .map(|(j, q)| (j, q.subst(VarId::D, &right_sub)))
            .collect();
        let mut out = Element::zero(self.rank);
        for (i, p) in a.terms() {
            let lp = p.subst(VarId::D, &left_sub);
            for (j, rq) in &rights {
                let e = &table[i * self.rank + j];
                if e.is_zero() {
                    continue;
                }
                out.add_scaled(e, &lp.mul(rq));
            }
        }
        Ok(out)
    }

    /// `a ∘_E b` for an affine binder `E`, evaluated through the scratch
    /// variable and substituted after expansion (∂ in `E` is the outer ∂).
    pub fn apply_at(&self, a: &Element<C>, b: &Element<C>, e: &AffineExpr<C>) -> Result<Element<C>> {
        if let Some(v) = e.as_var() {
            return self.apply(a, b, v);
        }
        if a.contains(VarId::SCRATCH) || b.contains(VarId::SCRATCH) || e.contains(VarId::SCRATCH) {
            return Err(Error::BinderCollision(VarId::SCRATCH));
        }
        Ok(self.apply(a, b, VarId::SCRATCH)?.subst(VarId::SCRATCH, e))
    }

    /// `a_(n) b = n!·[vⁿ](a ∘_v b)`.
    pub fn nth_product(&self, a: &Element<C>, b: &Element<C>, n: u32) -> Result<Element<C>> {
        if a.contains(VarId::SCRATCH) || b.contains(VarId::SCRATCH) {
            return Err(Error::BinderCollision(VarId::SCRATCH));
        }
        let full = self.apply(a, b, VarId::SCRATCH)?;
        let mut fact = C::one();
        for k in 2..=n as i64 {
            fact = fact.mul(&C::from_i64(k));
        }
        Ok(full
            .coeff_extract(VarId::SCRATCH, n)
            .map(|p| p.scale(&fact)))
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> ProductTable<D> {
        ProductTable::build(
            self.kind,
            self.rank,
            self.entries.iter().map(|e| e.map_coeffs(&mut f)).collect(),
        )
    }
}

/// A basis with up to three tables; the object axiom checks run over.
#[derive(Clone, Debug)]
pub struct Structure<C = Scalar> {
    basis: GradedBasis,
    tables: BTreeMap<TableKind, ProductTable<C>>,
}

impl<C: Coeff> PartialEq for Structure<C> {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.tables == other.tables
    }
}

impl<C: Coeff> Eq for Structure<C> {}

impl<C: Coeff> Structure<C> {
    pub fn new(basis: GradedBasis) -> Self {
        Structure {
            basis,
            tables: BTreeMap::new(),
        }
    }

    pub fn with_table(mut self, table: ProductTable<C>) -> Result<Self> {
        self.set_table(table)?;
        Ok(self)
    }

    pub fn set_table(&mut self, table: ProductTable<C>) -> Result<()> {
        if table.rank() != self.basis.rank() {
            return Err(Error::BasisMismatch {
                left: self.basis.rank(),
                right: table.rank(),
            });
        }
        self.tables.insert(table.kind(), table);
        Ok(())
    }

    pub fn remove_table(&mut self, kind: TableKind) -> Option<ProductTable<C>> {
        self.tables.remove(&kind)
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn table(&self, kind: TableKind) -> Option<&ProductTable<C>> {
        self.tables.get(&kind)
    }

    pub fn require(&self, kind: TableKind) -> Result<&ProductTable<C>> {
        self.table(kind).ok_or(Error::MissingTable(kind.name()))
    }

    pub fn tables(&self) -> impl Iterator<Item = &ProductTable<C>> {
        self.tables.values()
    }

    pub fn generator(&self, i: usize) -> Element<C> {
        Element::basis(self.rank(), i)
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Structure<D> {
        Structure {
            basis: self.basis.clone(),
            tables: self
                .tables
                .iter()
                .map(|(k, t)| (*k, t.map_coeffs(&mut f)))
                .collect(),
        }
    }
}

impl Structure<Scalar> {
    /// Reduction modulo a prime, or `None` if some coefficient has a
    /// denominator divisible by it.
    pub fn try_reduce<D: Coeff>(&self) -> Option<Structure<D>> {
        let mut failed = false;
        let out = self.map_coeffs(|c| {
            D::from_scalar(c).unwrap_or_else(|| {
                failed = true;
                D::zero()
            })
        });
        (!failed).then_some(out)
    }
}

/// A rational structure plus named parameters and provenance; the unit of file I/O.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDef {
    pub structure: Structure<Scalar>,
    pub params: BTreeMap<String, Poly>,
    pub provenance: String,
}

impl AlgebraDef {
    pub fn new(structure: Structure<Scalar>) -> Self {
        AlgebraDef {
            structure,
            params: BTreeMap::new(),
            provenance: String::new(),
        }
    }

    pub fn with_provenance(mut self, p: impl Into<String>) -> Self {
        self.provenance = p.into();
        self
    }

    pub fn with_param(mut self, name: impl Into<String>, value: Poly) -> Self {
        self.params.insert(name.into(), value);
        self
    }

    pub fn basis(&self) -> &GradedBasis {
        self.structure.basis()
    }

    pub fn rank(&self) -> usize {
        self.structure.rank()
    }

    pub fn table(&self, kind: TableKind) -> Option<&ProductTable> {
        self.structure.table(kind)
    }

    pub fn require(&self, kind: TableKind) -> Result<&ProductTable> {
        self.structure.require(kind)
    }

    /// Parses a basis-element name into a generator.
    pub fn element_named(&self, name: &str) -> Option<Element> {
        self.basis()
            .index_of(name)
            .map(|i| self.structure.generator(i))
    }
}

/// Parity closure and variable hygiene for every table; no algebraic axioms.
pub fn validate_table<C: Coeff>(s: &Structure<C>) -> CheckReport {
    let basis = s.basis();
    let mut report = CheckReport::new("validate");
    for t in s.tables() {
        for (i, j, e) in t.nonzero_entries() {
            let want = basis.parity(i) + basis.parity(j);
            let pair = vec![basis.name(i).to_string(), basis.name(j).to_string()];
            for (k, p) in e.terms() {
                if basis.parity(k) != want {
                    report.violations.push(Violation {
                        identity: format!("{}:parity_closure", t.kind()),
                        tuple: pair.clone(),
                        binders: String::new(),
                        residual: format!("({})*{}", p, basis.name(k)),
                    });
                }
                if !p.uses_only(&[VarId::D, VarId::LAMBDA]) {
                    report.violations.push(Violation {
                        identity: format!("{}:variables", t.kind()),
                        tuple: pair.clone(),
                        binders: String::new(),
                        residual: format!("({})*{}", p, basis.name(k)),
                    });
                }
            }
        }
    }
    report
}

/// `n!` as a rational, for reconstruction tests.
pub fn factorial(n: u32) -> Scalar {
    let mut acc = BigInt::from(1);
    for k in 2..=n {
        acc *= k;
    }
    BigRational::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::Parity;
    use crate::parse::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    fn vir() -> ProductTable {
        ProductTable::from_entries(
            TableKind::Bracket,
            1,
            [(0, 0, Element::term(1, 0, p("D+2*L")))],
        )
        .unwrap()
    }

    #[test]
    fn virasoro_bracket() {
        let t = vir();
        let l = Element::basis(1, 0);
        let r = t.apply(&l, &l, VarId::LAMBDA).unwrap();
        assert_eq!(r, Element::term(1, 0, p("D+2*L")));

        let dl = Element::term(1, 0, p("D"));
        let r = t.apply(&dl, &l, VarId::LAMBDA).unwrap();
        assert_eq!(r, Element::term(1, 0, p("-L*(D+2*L)")));
    }

    #[test]
    fn virasoro_nth_products() {
        let t = vir();
        let l = Element::basis(1, 0);
        assert_eq!(t.nth_product(&l, &l, 1).unwrap(), Element::term(1, 0, p("2")));
        assert_eq!(t.nth_product(&l, &l, 0).unwrap(), Element::term(1, 0, p("D")));
        assert!(t.nth_product(&l, &l, 2).unwrap().is_zero());
    }

    #[test]
    fn composite_binder() {
        let t = vir();
        let l = Element::basis(1, 0);
        // [L_{-D-λ} L] = (D + 2(-D-λ)) L = (-D - 2λ) L
        let e = AffineExpr::combo(&[(-1, VarId::D), (-1, VarId::LAMBDA)]);
        let r = t.apply_at(&l, &l, &e).unwrap();
        assert_eq!(r, Element::term(1, 0, p("-D-2*L")));
        let dirty = Element::term(1, 0, Poly::var(VarId::SCRATCH));
        assert!(matches!(
            t.apply_at(&dirty, &l, &e),
            Err(Error::BinderCollision(_))
        ));
    }

    #[test]
    fn parity_closure_reported() {
        let basis = GradedBasis::new([("x", Parity::Even), ("y", Parity::Odd)]).unwrap();
        let t = ProductTable::<Scalar>::from_entries(TableKind::Circ, 2, [(0, 0, Element::basis(2, 1))])
            .unwrap();
        let s = Structure::new(basis.clone()).with_table(t).unwrap();
        let rep = validate_table(&s);
        assert!(!rep.pass());
        assert_eq!(rep.violations[0].tuple, vec!["x", "x"]);
        let empty = Structure::<Scalar>::new(basis)
            .with_table(ProductTable::zero(TableKind::Circ, 2))
            .unwrap();
        assert!(validate_table(&empty).pass());
    }
}
