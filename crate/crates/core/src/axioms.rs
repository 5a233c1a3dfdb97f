//! Axiom and derived-identity checkers.
//!
//! Every identity is sesquilinear in each slot, so checking it on basis
//! generators proves it on the whole free module. Binders follow a fixed
//! protocol: λ = λ₀, μ = λ₁, γ = λ₂, and composed binders such as `−∂−λ`
//! go through the scratch variable λ₃.

use std::fmt;

use rayon::prelude::*;

use crate::conformal::{ProductTable, Structure, TableKind};
use crate::error::{Error, Result};
use crate::gmodule::{sign, Element, ModuleMap, Parity};
use crate::poly::{AffineExpr, VarId};
use crate::report::{CheckReport, Violation};
use crate::scalar::Coeff;

const D: VarId = VarId::D;
const L: VarId = VarId::LAMBDA;
const M: VarId = VarId::MU;
const G: VarId = VarId::GAMMA;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AxiomId {
    Commutative,
    Associative,
    SkewSymmetry,
    Jacobi,
    Leibniz,
    LeibnizRight,
    TransposedLeibniz,
    TransposedLeibnizRight,
    LeftSymmetric,
    Novikov,
    HomJacobi,
    NpCompatF7,
    NpCompatH8,
    PrelieCommHh1,
    PreliePoisson47,
    PreliePoisson48,
    Derivation,
    HalfDerivation,
    AssocConjugates,
    CommExchange,
    NpConjugates,
}

impl AxiomId {
    pub const ALL: [AxiomId; 21] = [
        AxiomId::Commutative,
        AxiomId::Associative,
        AxiomId::SkewSymmetry,
        AxiomId::Jacobi,
        AxiomId::Leibniz,
        AxiomId::LeibnizRight,
        AxiomId::TransposedLeibniz,
        AxiomId::TransposedLeibnizRight,
        AxiomId::LeftSymmetric,
        AxiomId::Novikov,
        AxiomId::HomJacobi,
        AxiomId::NpCompatF7,
        AxiomId::NpCompatH8,
        AxiomId::PrelieCommHh1,
        AxiomId::PreliePoisson47,
        AxiomId::PreliePoisson48,
        AxiomId::Derivation,
        AxiomId::HalfDerivation,
        AxiomId::AssocConjugates,
        AxiomId::CommExchange,
        AxiomId::NpConjugates,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Commutative => "commutative",
            AxiomId::Associative => "associative",
            AxiomId::SkewSymmetry => "skew_symmetry",
            AxiomId::Jacobi => "jacobi",
            AxiomId::Leibniz => "leibniz",
            AxiomId::LeibnizRight => "leibniz_right",
            AxiomId::TransposedLeibniz => "transposed_leibniz",
            AxiomId::TransposedLeibnizRight => "transposed_leibniz_right",
            AxiomId::LeftSymmetric => "left_symmetric",
            AxiomId::Novikov => "novikov",
            AxiomId::HomJacobi => "hom_jacobi",
            AxiomId::NpCompatF7 => "np_compat_f7",
            AxiomId::NpCompatH8 => "np_compat_h8",
            AxiomId::PrelieCommHh1 => "prelie_comm_hh1",
            AxiomId::PreliePoisson47 => "prelie_poisson_47",
            AxiomId::PreliePoisson48 => "prelie_poisson_48",
            AxiomId::Derivation => "derivation",
            AxiomId::HalfDerivation => "half_derivation",
            AxiomId::AssocConjugates => "assoc_conjugates",
            AxiomId::CommExchange => "comm_exchange",
            AxiomId::NpConjugates => "np_conjugates",
        }
    }

    pub fn from_name(s: &str) -> Option<AxiomId> {
        AxiomId::ALL.into_iter().find(|a| a.name() == s)
    }

    /// Number of generator slots.
    pub fn arity(self) -> usize {
        match self {
            AxiomId::Commutative | AxiomId::SkewSymmetry | AxiomId::Derivation => 2,
            _ => 3,
        }
    }

    pub fn tables(self) -> &'static [TableKind] {
        use TableKind::*;
        match self {
            AxiomId::Commutative
            | AxiomId::Associative
            | AxiomId::Derivation
            | AxiomId::AssocConjugates
            | AxiomId::CommExchange => &[Circ],
            AxiomId::SkewSymmetry | AxiomId::Jacobi | AxiomId::HomJacobi => &[Bracket],
            AxiomId::Leibniz
            | AxiomId::LeibnizRight
            | AxiomId::TransposedLeibniz
            | AxiomId::TransposedLeibnizRight
            | AxiomId::HalfDerivation => &[Circ, Bracket],
            AxiomId::LeftSymmetric | AxiomId::Novikov => &[Star],
            AxiomId::NpCompatF7
            | AxiomId::NpCompatH8
            | AxiomId::PrelieCommHh1
            | AxiomId::PreliePoisson47
            | AxiomId::PreliePoisson48
            | AxiomId::NpConjugates => &[Circ, Star],
        }
    }

    /// Whether the check needs an auxiliary module map (α or D).
    pub fn needs_map(self) -> bool {
        matches!(self, AxiomId::HomJacobi | AxiomId::Derivation)
    }

    fn binders(self) -> &'static str {
        if self.arity() == 2 {
            "λ=L"
        } else {
            "λ=L μ=M"
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SuiteId {
    CommAssoc,
    Lie,
    Pcsa,
    Tpcsa,
    LeftSymmetric,
    Novikov,
    NovikovPoisson,
    PrelieCommutative,
    PreliePoisson,
    DiffNovikovPoisson,
}

impl SuiteId {
    pub const ALL: [SuiteId; 10] = [
        SuiteId::CommAssoc,
        SuiteId::Lie,
        SuiteId::Pcsa,
        SuiteId::Tpcsa,
        SuiteId::LeftSymmetric,
        SuiteId::Novikov,
        SuiteId::NovikovPoisson,
        SuiteId::PrelieCommutative,
        SuiteId::PreliePoisson,
        SuiteId::DiffNovikovPoisson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::CommAssoc => "comm_assoc",
            SuiteId::Lie => "lie",
            SuiteId::Pcsa => "pcsa",
            SuiteId::Tpcsa => "tpcsa",
            SuiteId::LeftSymmetric => "left_symmetric",
            SuiteId::Novikov => "novikov",
            SuiteId::NovikovPoisson => "novikov_poisson",
            SuiteId::PrelieCommutative => "prelie_commutative",
            SuiteId::PreliePoisson => "prelie_poisson",
            SuiteId::DiffNovikovPoisson => "diff_novikov_poisson",
        }
    }

    pub fn from_name(s: &str) -> Option<SuiteId> {
        SuiteId::ALL.into_iter().find(|a| a.name() == s)
    }

    pub fn axioms(self) -> &'static [AxiomId] {
        use AxiomId::*;
        match self {
            SuiteId::CommAssoc => &[Commutative, Associative],
            SuiteId::Lie => &[SkewSymmetry, Jacobi],
            SuiteId::Pcsa => &[Commutative, Associative, SkewSymmetry, Jacobi, Leibniz],
            SuiteId::Tpcsa => &[
                Commutative,
                Associative,
                SkewSymmetry,
                Jacobi,
                TransposedLeibniz,
            ],
            SuiteId::LeftSymmetric => &[LeftSymmetric],
            SuiteId::Novikov => &[LeftSymmetric, Novikov],
            SuiteId::NovikovPoisson => &[
                Commutative,
                Associative,
                LeftSymmetric,
                Novikov,
                NpCompatF7,
                NpCompatH8,
            ],
            SuiteId::PrelieCommutative => &[Commutative, Associative, LeftSymmetric, PrelieCommHh1],
            SuiteId::PreliePoisson => &[
                Commutative,
                Associative,
                LeftSymmetric,
                PreliePoisson47,
                PreliePoisson48,
            ],
            SuiteId::DiffNovikovPoisson => &[
                Commutative,
                Associative,
                LeftSymmetric,
                Novikov,
                NpCompatF7,
                NpCompatH8,
                PrelieCommHh1,
            ],
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The seven identities every TPCSA satisfies.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum DerivedId {
    Eqh,
    Eqw,
    Eqs,
    Equ,
    Eql,
    Ss1,
    Ss2,
}

impl DerivedId {
    pub const ALL: [DerivedId; 7] = [
        DerivedId::Eqh,
        DerivedId::Eqw,
        DerivedId::Eqs,
        DerivedId::Equ,
        DerivedId::Eql,
        DerivedId::Ss1,
        DerivedId::Ss2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DerivedId::Eqh => "eqh",
            DerivedId::Eqw => "eqw",
            DerivedId::Eqs => "eqs",
            DerivedId::Equ => "equ",
            DerivedId::Eql => "eql",
            DerivedId::Ss1 => "ss1",
            DerivedId::Ss2 => "ss2",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            DerivedId::Eqh | DerivedId::Eqw => 3,
            _ => 4,
        }
    }

    fn binders(self) -> &'static str {
        match self {
            DerivedId::Eqh | DerivedId::Eqw => "λ=L μ=M",
            _ => "λ=L μ=M γ=G",
        }
    }
}

/// `Σ kᵢ·vᵢ` as a binder.
fn at<C: Coeff>(parts: &[(i64, VarId)]) -> AffineExpr<C> {
    AffineExpr::combo(parts)
}

/// `Σ kᵢ·eᵢ` over elements of equal rank.
fn lin<C: Coeff>(rank: usize, parts: &[(i64, &Element<C>)]) -> Element<C> {
    let mut out = Element::zero(rank);
    for (k, e) in parts {
        out = out.add(&e.scale_i64(*k));
    }
    out
}

struct Ctx<'a, C: Coeff> {
    s: &'a Structure<C>,
    map: Option<&'a ModuleMap<C>>,
}

impl<C: Coeff> Ctx<'_, C> {
    fn rank(&self) -> usize {
        self.s.rank()
    }

    fn g(&self, i: usize) -> Element<C> {
        self.s.generator(i)
    }

    fn p(&self, i: usize) -> Parity {
        self.s.basis().parity(i)
    }

    fn sg(&self, i: usize, j: usize) -> i64 {
        sign(self.p(i), self.p(j))
    }

    fn t(&self, kind: TableKind) -> Result<&ProductTable<C>> {
        self.s.require(kind)
    }

    fn map(&self) -> Result<&ModuleMap<C>> {
        self.map.ok_or(Error::MissingAux("module map"))
    }

    fn op(
        &self,
        kind: TableKind,
        a: &Element<C>,
        b: &Element<C>,
        bind: &[(i64, VarId)],
    ) -> Result<Element<C>> {
        self.t(kind)?.apply_at(a, b, &at(bind))
    }

    fn circ(&self, a: &Element<C>, b: &Element<C>, bind: &[(i64, VarId)]) -> Result<Element<C>> {
        self.op(TableKind::Circ, a, b, bind)
    }

    fn br(&self, a: &Element<C>, b: &Element<C>, bind: &[(i64, VarId)]) -> Result<Element<C>> {
        self.op(TableKind::Bracket, a, b, bind)
    }

    fn star(&self, a: &Element<C>, b: &Element<C>, bind: &[(i64, VarId)]) -> Result<Element<C>> {
        self.op(TableKind::Star, a, b, bind)
    }

    /// Residuals (left minus right) of `id` at generator tuple `t`. Remarks
    /// with several equalities yield one residual per equality.
    fn residuals(&self, id: AxiomId, t: &[usize]) -> Result<Vec<Element<C>>> {
        use TableKind::{Circ as O, Star as S};
        let n = self.rank();
        let a = self.g(t[0]);
        let b = self.g(t[1]);
        let sab = self.sg(t[0], t[1]);
        let one = |e: Element<C>| Ok(vec![e]);
        match id {
            AxiomId::Commutative => {
                let l = self.circ(&a, &b, &[(1, L)])?;
                let r = self.circ(&b, &a, &[(-1, D), (-1, L)])?;
                one(lin(n, &[(1, &l), (-sab, &r)]))
            }
            AxiomId::SkewSymmetry => {
                let l = self.br(&a, &b, &[(1, L)])?;
                let r = self.br(&b, &a, &[(-1, L), (-1, D)])?;
                one(lin(n, &[(1, &l), (sab, &r)]))
            }
            AxiomId::Derivation => {
                let dm = self.map()?;
                let l = dm.apply(&self.circ(&a, &b, &[(1, L)])?)?;
                let r1 = self.circ(&dm.apply(&a)?, &b, &[(1, L)])?;
                let r2 = self.circ(&a, &dm.apply(&b)?, &[(1, L)])?;
                one(lin(n, &[(1, &l), (-1, &r1), (-1, &r2)]))
            }
            _ => {
                let c = self.g(t[2]);
                let sbc = self.sg(t[1], t[2]);
                match id {
                    AxiomId::Associative => {
                        let l = self.circ(&a, &self.circ(&b, &c, &[(1, M)])?, &[(1, L)])?;
                        let r = self.circ(&self.circ(&a, &b, &[(1, L)])?, &c, &[(1, L), (1, M)])?;
                        one(l.sub(&r))
                    }
                    AxiomId::Jacobi => {
                        let l = self.br(&a, &self.br(&b, &c, &[(1, M)])?, &[(1, L)])?;
                        let r1 = self.br(&self.br(&a, &b, &[(1, L)])?, &c, &[(1, L), (1, M)])?;
                        let r2 = self.br(&b, &self.br(&a, &c, &[(1, L)])?, &[(1, M)])?;
                        one(lin(n, &[(1, &l), (-1, &r1), (-sab, &r2)]))
                    }
                    AxiomId::Leibniz => {
                        let l = self.br(&a, &self.circ(&b, &c, &[(1, M)])?, &[(1, L)])?;
                        let r1 = self.circ(&self.br(&a, &b, &[(1, L)])?, &c, &[(1, L), (1, M)])?;
                        let r2 = self.circ(&b, &self.br(&a, &c, &[(1, L)])?, &[(1, M)])?;
                        one(lin(n, &[(1, &l), (-1, &r1), (-sab, &r2)]))
                    }
                    AxiomId::LeibnizRight => {
                        let l = self.br(&self.circ(&a, &b, &[(1, L)])?, &c, &[(1, M)])?;
                        let r1 = self.circ(&a, &self.br(&b, &c, &[(1, M), (-1, L)])?, &[(1, L)])?;
                        let r2 =
                            self.circ(&b, &self.br(&a, &c, &[(1, L)])?, &[(1, M), (-1, L)])?;
                        one(lin(n, &[(1, &l), (-1, &r1), (-sab, &r2)]))
                    }
                    AxiomId::TransposedLeibniz | AxiomId::HalfDerivation => {
                        // For the ½-derivation φ = L(a): the sign (−1)^{|x||φ|}
                        // with |φ| = |a| and x = b coincides with (−1)^{|a||b|}.
                        let l = self.circ(&a, &self.br(&b, &c, &[(1, M)])?, &[(1, L)])?;
                        let r1 = self.br(&self.circ(&a, &b, &[(1, L)])?, &c, &[(1, L), (1, M)])?;
                        let r2 = self.br(&b, &self.circ(&a, &c, &[(1, L)])?, &[(1, M)])?;
                        one(lin(n, &[(2, &l), (-1, &r1), (-sab, &r2)]))
                    }
                    AxiomId::TransposedLeibnizRight => {
                        let l = self.circ(&self.br(&a, &b, &[(1, L)])?, &c, &[(1, M)])?;
                        let r1 = self.br(&a, &self.circ(&b, &c, &[(1, M), (-1, L)])?, &[(1, L)])?;
                        let r2 = self.br(&b, &self.circ(&a, &c, &[(1, L)])?, &[(1, M), (-1, L)])?;
                        one(lin(n, &[(2, &l), (-1, &r1), (sab, &r2)]))
                    }
                    AxiomId::LeftSymmetric => {
                        let ab_c = self.star(&self.star(&a, &b, &[(1, L)])?, &c, &[(1, L), (1, M)])?;
                        let a_bc = self.star(&a, &self.star(&b, &c, &[(1, M)])?, &[(1, L)])?;
                        let ba_c = self.star(&self.star(&b, &a, &[(1, M)])?, &c, &[(1, L), (1, M)])?;
                        let b_ac = self.star(&b, &self.star(&a, &c, &[(1, L)])?, &[(1, M)])?;
                        one(lin(n, &[(1, &ab_c), (-1, &a_bc), (-sab, &ba_c), (sab, &b_ac)]))
                    }
                    AxiomId::Novikov => {
                        let l = self.star(&self.star(&a, &b, &[(1, L)])?, &c, &[(1, L), (1, M)])?;
                        let r = self.star(&self.star(&a, &c, &[(1, L)])?, &b, &[(-1, M), (-1, D)])?;
                        one(lin(n, &[(1, &l), (-sbc, &r)]))
                    }
                    AxiomId::HomJacobi => {
                        let al = self.map()?;
                        let l = self.br(&al.apply(&a)?, &self.br(&b, &c, &[(1, M)])?, &[(1, L)])?;
                        let r1 = self.br(
                            &self.br(&a, &b, &[(1, L)])?,
                            &al.apply(&c)?,
                            &[(1, L), (1, M)],
                        )?;
                        let r2 = self.br(&al.apply(&b)?, &self.br(&a, &c, &[(1, L)])?, &[(1, M)])?;
                        one(lin(n, &[(1, &l), (-1, &r1), (-sab, &r2)]))
                    }
                    AxiomId::NpCompatF7 | AxiomId::PreliePoisson47 => {
                        let l = self.star(&self.circ(&a, &b, &[(1, L)])?, &c, &[(1, L), (1, M)])?;
                        let r = self.circ(&a, &self.star(&b, &c, &[(1, M)])?, &[(1, L)])?;
                        one(l.sub(&r))
                    }
                    AxiomId::NpCompatH8 | AxiomId::PreliePoisson48 => {
                        let ab_c = self.circ(&self.star(&a, &b, &[(1, L)])?, &c, &[(1, L), (1, M)])?;
                        let a_bc = self.star(&a, &self.circ(&b, &c, &[(1, M)])?, &[(1, L)])?;
                        let ba_c = self.circ(&self.star(&b, &a, &[(1, M)])?, &c, &[(1, L), (1, M)])?;
                        let b_ac = self.star(&b, &self.circ(&a, &c, &[(1, L)])?, &[(1, M)])?;
                        one(lin(n, &[(1, &ab_c), (-1, &a_bc), (-sab, &ba_c), (sab, &b_ac)]))
                    }
                    AxiomId::PrelieCommHh1 => {
                        let l = self.star(&a, &self.circ(&b, &c, &[(1, M)])?, &[(1, L)])?;
                        let r1 = self.circ(&self.star(&a, &b, &[(1, L)])?, &c, &[(1, L), (1, M)])?;
                        let r2 = self.circ(&b, &self.star(&a, &c, &[(1, L)])?, &[(1, M)])?;
                        one(lin(n, &[(1, &l), (-1, &r1), (-sab, &r2)]))
                    }
                    AxiomId::CommExchange => {
                        let l = self.circ(&a, &self.circ(&b, &c, &[(1, M)])?, &[(1, L)])?;
                        let r = self.circ(&b, &self.circ(&a, &c, &[(1, L)])?, &[(1, M)])?;
                        one(lin(n, &[(1, &l), (-sab, &r)]))
                    }
                    AxiomId::AssocConjugates => self.conjugates(O, O, &a, &b, &c),
                    AxiomId::NpConjugates => self.conjugates(O, S, &a, &b, &c),
                    AxiomId::Commutative | AxiomId::SkewSymmetry | AxiomId::Derivation => {
                        unreachable!()
                    }
                }
            }
        }
    }

    /// The three conjugate forms of associativity, with the outer operation
    /// of the right-hand side taken from `right`.
    fn conjugates(
        &self,
        left: TableKind,
        right: TableKind,
        a: &Element<C>,
        b: &Element<C>,
        c: &Element<C>,
    ) -> Result<Vec<Element<C>>> {
        let flip_m = [(-1, D), (-1, M)];
        let flip_l = [(-1, D), (-1, L)];
        let shifted = [(-1, D), (1, M), (-1, L)];
        // a ∘_λ (b ⋆_{−∂−μ} c) = (a ∘_λ b) ⋆_{−∂−μ} c
        let l1 = self.op(left, a, &self.op(right, b, c, &flip_m)?, &[(1, L)])?;
        let r1 = self.op(right, &self.op(left, a, b, &[(1, L)])?, c, &flip_m)?;
        // a ∘_{−∂−λ} (b ⋆_μ c) = (a ∘_{−∂−μ} b) ⋆_{−∂+μ−λ} c
        let l2 = self.op(left, a, &self.op(right, b, c, &[(1, M)])?, &flip_l)?;
        let r2 = self.op(right, &self.op(left, a, b, &flip_m)?, c, &shifted)?;
        // a ∘_{−∂−λ} (b ⋆_{−∂−μ} c) = (a ∘_{−∂+μ−λ} b) ⋆_{−∂−μ} c
        let l3 = self.op(left, a, &self.op(right, b, c, &flip_m)?, &flip_l)?;
        let r3 = self.op(right, &self.op(left, a, b, &shifted)?, c, &flip_m)?;
        Ok(vec![l1.sub(&r1), l2.sub(&r2), l3.sub(&r3)])
    }

    fn derived(&self, id: DerivedId, t: &[usize]) -> Result<Element<C>> {
        let n = self.rank();
        match id {
            DerivedId::Eqh | DerivedId::Eqw => {
                let (x, y, z) = (self.g(t[0]), self.g(t[1]), self.g(t[2]));
                let sxz = self.sg(t[0], t[2]);
                let sxy = self.sg(t[0], t[1]);
                let syz = self.sg(t[1], t[2]);
                let (a1, a2, a3) = if id == DerivedId::Eqh {
                    (
                        self.circ(&x, &self.br(&y, &z, &[(1, M)])?, &[(1, L)])?,
                        self.circ(&y, &self.br(&z, &x, &[(-1, D), (-1, L)])?, &[(1, M)])?,
                        self.circ(&z, &self.br(&x, &y, &[(1, L)])?, &[(-1, D), (-1, L), (-1, M)])?,
                    )
                } else {
                    (
                        self.circ(&self.br(&x, &y, &[(1, L)])?, &z, &[(1, M)])?,
                        self.circ(&self.br(&y, &z, &[(1, M), (-1, L)])?, &x, &[(-1, D), (-1, L)])?,
                        self.circ(
                            &self.br(&z, &x, &[(-1, D), (-1, L)])?,
                            &y,
                            &[(-1, D), (-1, M), (1, L)],
                        )?,
                    )
                };
                Ok(lin(n, &[(sxz, &a1), (sxy, &a2), (syz, &a3)]))
            }
            DerivedId::Eqs | DerivedId::Equ | DerivedId::Eql => {
                let (h, x, y, z) = (self.g(t[0]), self.g(t[1]), self.g(t[2]), self.g(t[3]));
                let sxz = self.sg(t[1], t[3]);
                let sxy = self.sg(t[1], t[2]);
                let syz = self.sg(t[2], t[3]);
                let (a1, a2, a3) = match id {
                    DerivedId::Eqs => (
                        self.br(
                            &self.circ(&h, &self.br(&x, &y, &[(1, G)])?, &[(1, L)])?,
                            &z,
                            &[(1, L), (1, M)],
                        )?,
                        self.br(
                            &self.circ(&h, &self.br(&y, &z, &[(1, M), (-1, G)])?, &[(1, L)])?,
                            &x,
                            &[(-1, D), (-1, G)],
                        )?,
                        self.br(
                            &self.circ(&h, &self.br(&z, &x, &[(-1, D), (-1, G)])?, &[(1, L)])?,
                            &y,
                            &[(-1, D), (-1, M), (1, G)],
                        )?,
                    ),
                    DerivedId::Equ => (
                        self.br(
                            &self.circ(&h, &x, &[(1, L)])?,
                            &self.br(&y, &z, &[(1, M), (-1, G)])?,
                            &[(1, L), (1, G)],
                        )?,
                        self.br(
                            &self.circ(&h, &y, &[(1, L)])?,
                            &self.br(&z, &x, &[(-1, D), (-1, G)])?,
                            &[(1, L), (1, M), (-1, G)],
                        )?,
                        self.br(
                            &self.circ(&h, &z, &[(1, L)])?,
                            &self.br(&x, &y, &[(1, G)])?,
                            &[(-1, D), (-1, M)],
                        )?,
                    ),
                    _ => (
                        self.circ(
                            &self.br(&h, &x, &[(1, L)])?,
                            &self.br(&y, &z, &[(1, M), (-1, G)])?,
                            &[(1, L), (1, G)],
                        )?,
                        self.circ(
                            &self.br(&h, &y, &[(1, L)])?,
                            &self.br(&z, &x, &[(-1, D), (-1, G)])?,
                            &[(1, L), (1, M), (-1, G)],
                        )?,
                        self.circ(
                            &self.br(&h, &z, &[(1, L)])?,
                            &self.br(&x, &y, &[(1, G)])?,
                            &[(-1, D), (-1, M)],
                        )?,
                    ),
                };
                Ok(lin(n, &[(sxz, &a1), (sxy, &a2), (syz, &a3)]))
            }
            DerivedId::Ss1 | DerivedId::Ss2 => {
                let (u, v, x, y) = (self.g(t[0]), self.g(t[1]), self.g(t[2]), self.g(t[3]));
                let (pu, pv, px) = (self.p(t[0]), self.p(t[1]), self.p(t[2]));
                let svx = sign(pv, px);
                let suv = sign(pu, pv);
                let sux = sign(pu, px);
                let uv_xy = self.circ(
                    &self.circ(&u, &v, &[(1, L)])?,
                    &self.br(&x, &y, &[(1, M), (-1, L)])?,
                    &[(1, L), (1, G)],
                )?;
                if id == DerivedId::Ss1 {
                    let s_u_xv = sign(pu, px + pv);
                    let a1 = self.br(
                        &self.circ(&u, &x, &[(1, L)])?,
                        &self.circ(&v, &y, &[(1, G)])?,
                        &[(1, M)],
                    )?;
                    let a2 = self.br(
                        &self.circ(&v, &x, &[(1, G)])?,
                        &self.circ(&u, &y, &[(1, L)])?,
                        &[(1, G), (1, M), (-1, L)],
                    )?;
                    Ok(lin(n, &[(svx, &a1), (s_u_xv, &a2), (-2, &uv_xy)]))
                } else {
                    let a1 = self.circ(
                        &x,
                        &self.br(&u, &self.circ(&v, &y, &[(1, G)])?, &[(1, L)])?,
                        &[(1, M), (-1, L)],
                    )?;
                    let a2 = self.circ(
                        &self.br(&self.circ(&v, &x, &[(1, G)])?, &u, &[(1, G), (1, M), (-1, L)])?,
                        &y,
                        &[(1, G), (1, M)],
                    )?;
                    Ok(lin(n, &[(svx, &a1), (suv, &a2), (-sux, &uv_xy)]))
                }
            }
        }
    }
}

/// All `rank^arity` generator tuples in lexicographic order.
fn tuples(rank: usize, arity: usize) -> Vec<Vec<usize>> {
    let total = rank.pow(arity as u32);
    (0..total)
        .map(|mut k| {
            let mut t = vec![0; arity];
            for slot in t.iter_mut().rev() {
                *slot = k % rank;
                k /= rank;
            }
            t
        })
        .collect()
}

fn require_inputs<C: Coeff>(s: &Structure<C>, id: AxiomId, map: Option<&ModuleMap<C>>) -> Result<()> {
    for k in id.tables() {
        s.require(*k)?;
    }
    if id.needs_map() {
        let m = map.ok_or(Error::MissingAux(if id == AxiomId::HomJacobi {
            "α map for hom_jacobi"
        } else {
            "derivation map"
        }))?;
        if m.rank() != s.rank() {
            return Err(Error::DimensionMismatch {
                map: m.rank(),
                element: s.rank(),
            });
        }
    }
    Ok(())
}

fn violation<C: Coeff>(
    s: &Structure<C>,
    identity: String,
    t: &[usize],
    binders: &str,
    r: &Element<C>,
) -> Violation {
    Violation {
        identity,
        tuple: t.iter().map(|i| s.basis().name(*i).to_string()).collect(),
        binders: binders.to_string(),
        residual: r.display(s.basis()).to_string(),
    }
}

/// Exhaustive check of one axiom over all generator tuples.
pub fn check_axiom<C: Coeff>(
    s: &Structure<C>,
    id: AxiomId,
    map: Option<&ModuleMap<C>>,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(id.name());
    report.violations = axiom_violations(s, id, map)?;
    Ok(report)
}

fn axiom_violations<C: Coeff>(
    s: &Structure<C>,
    id: AxiomId,
    map: Option<&ModuleMap<C>>,
) -> Result<Vec<Violation>> {
    require_inputs(s, id, map)?;
    let ctx = Ctx { s, map };
    let per_tuple: Vec<Vec<Violation>> = tuples(s.rank(), id.arity())
        .par_iter()
        .map(|t| -> Result<Vec<Violation>> {
            let rs = ctx.residuals(id, t)?;
            let multi = rs.len() > 1;
            Ok(rs
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.is_zero())
                .map(|(k, r)| {
                    let name = if multi {
                        format!("{}.{}", id.name(), k + 1)
                    } else {
                        id.name().to_string()
                    };
                    violation(s, name, t, id.binders(), r)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_tuple.into_iter().flatten().collect())
}

/// Sequential early-exit check: true iff every residual vanishes.
pub fn axiom_holds<C: Coeff>(
    s: &Structure<C>,
    id: AxiomId,
    map: Option<&ModuleMap<C>>,
) -> Result<bool> {
    require_inputs(s, id, map)?;
    let ctx = Ctx { s, map };
    for t in tuples(s.rank(), id.arity()) {
        if ctx.residuals(id, &t)?.iter().any(|r| !r.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn suite_holds<C: Coeff>(s: &Structure<C>, suite: SuiteId, map: Option<&ModuleMap<C>>) -> Result<bool> {
    for id in suite.axioms() {
        if !axiom_holds(s, *id, map)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All axioms of a suite, concatenated in suite order.
pub fn check_suite<C: Coeff>(
    s: &Structure<C>,
    suite: SuiteId,
    map: Option<&ModuleMap<C>>,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(suite.name());
    for id in suite.axioms() {
        report.violations.extend(axiom_violations(s, *id, map)?);
    }
    Ok(report)
}

/// Residual of one derived identity at one tuple (for tests and benches).
pub fn derived_residual<C: Coeff>(s: &Structure<C>, id: DerivedId, t: &[usize]) -> Result<Element<C>> {
    s.require(TableKind::Circ)?;
    s.require(TableKind::Bracket)?;
    Ctx { s, map: None }.derived(id, t)
}

/// The seven identities, over all tuples. Requires the tpcsa suite to pass.
pub fn check_derived_identities<C: Coeff>(s: &Structure<C>) -> Result<CheckReport> {
    let pre = check_suite(s, SuiteId::Tpcsa, None)?;
    if !pre.pass() {
        return Err(Error::Precondition(format!(
            "structure fails the tpcsa suite ({} violations)",
            pre.violations.len()
        )));
    }
    let ctx = Ctx { s, map: None };
    let mut report = CheckReport::new("derived");
    for id in DerivedId::ALL {
        let found: Vec<Option<Violation>> = tuples(s.rank(), id.arity())
            .par_iter()
            .map(|t| -> Result<Option<Violation>> {
                let r = ctx.derived(id, t)?;
                Ok((!r.is_zero()).then(|| violation(s, id.name().to_string(), t, id.binders(), &r)))
            })
            .collect::<Result<_>>()?;
        report.violations.extend(found.into_iter().flatten());
    }
    Ok(report)
}

/// Outcome of the PCSA ∩ TPCSA characterization check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatVerdict {
    pub leibniz: bool,
    pub transposed_leibniz: bool,
    pub products_vanish: bool,
    pub report: CheckReport,
}

impl CompatVerdict {
    /// `(leibniz ∧ transposed) ⇔ vanishing`.
    pub fn consistent(&self) -> bool {
        (self.leibniz && self.transposed_leibniz) == self.products_vanish
    }
}

/// Computes the three verdicts and checks the biconditional. The report's
/// violations are nonempty only when the biconditional fails.
pub fn check_compat_equivalence<C: Coeff>(s: &Structure<C>) -> Result<CompatVerdict> {
    for suite in [SuiteId::CommAssoc, SuiteId::Lie] {
        let r = check_suite(s, suite, None)?;
        if !r.pass() {
            return Err(Error::Precondition(format!("structure fails the {suite} suite")));
        }
    }
    let leib = check_axiom(s, AxiomId::Leibniz, None)?;
    let tl = check_axiom(s, AxiomId::TransposedLeibniz, None)?;

    let ctx = Ctx { s, map: None };
    let mut witness: Option<Violation> = None;
    'outer: for t in tuples(s.rank(), 3) {
        let (a, b, c) = (ctx.g(t[0]), ctx.g(t[1]), ctx.g(t[2]));
        let forms = [
            ("a∘[b c]", ctx.circ(&a, &ctx.br(&b, &c, &[(1, M)])?, &[(1, L)])?),
            ("[b a]∘c", ctx.circ(&ctx.br(&b, &a, &[(1, M), (-1, L)])?, &c, &[(1, M)])?),
            ("[(a∘b) c]", ctx.br(&ctx.circ(&a, &b, &[(1, L)])?, &c, &[(1, L), (1, M)])?),
        ];
        for (label, r) in forms {
            if !r.is_zero() {
                witness = Some(violation(s, format!("vanishing {label}"), &t, "λ=L μ=M", &r));
                break 'outer;
            }
        }
    }

    let mut report = CheckReport::new("compat_equivalence");
    let verdict = |b: bool| if b { "holds" } else { "fails" };
    report.notes.push(format!("(i) leibniz {}", verdict(leib.pass())));
    report
        .notes
        .push(format!("(ii) transposed_leibniz {}", verdict(tl.pass())));
    report
        .notes
        .push(format!("(iii) products vanish: {}", witness.is_none()));
    for (tag, v) in [
        ("leibniz", leib.violations.first()),
        ("transposed_leibniz", tl.violations.first()),
        ("", witness.as_ref()),
    ] {
        if let Some(v) = v {
            let name = if tag.is_empty() { &v.identity } else { tag };
            report.notes.push(format!(
                "witness {} ({}): {}",
                name,
                v.tuple.join(","),
                v.residual
            ));
        }
    }
    let out = CompatVerdict {
        leibniz: leib.pass(),
        transposed_leibniz: tl.pass(),
        products_vanish: witness.is_none(),
        report,
    };
    if !out.consistent() {
        let mut out = out;
        out.report.violations.push(Violation {
            identity: "compat_equivalence".to_string(),
            tuple: Vec::new(),
            binders: String::new(),
            residual: "biconditional fails".to_string(),
        });
        return Ok(out);
    }
    Ok(out)
}
