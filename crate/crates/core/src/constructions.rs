//! Table-to-table constructions. Each one verifies the suite its theorem
//! promises before returning; a failure there is a finding, not a user error.

use crate::axioms::{axiom_holds, check_axiom, check_suite, AxiomId, SuiteId};
use crate::conformal::{validate_table, AlgebraDef, ProductTable, Structure, TableKind};
use crate::error::{Error, Result};
use crate::gmodule::{sign, Element, GradedBasis, ModuleMap, Parity};
use crate::poly::{AffineExpr, VarId};
use crate::scalar::{Coeff, Scalar};

fn require_suite(s: &Structure, suite: SuiteId, what: &str) -> Result<()> {
    let r = check_suite(s, suite, None)?;
    if r.pass() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{what} fails the {suite} suite ({} violations)",
            r.violations.len()
        )))
    }
}

fn ensure_suite(s: &Structure, suite: SuiteId, construction: &str) -> Result<()> {
    let r = check_suite(s, suite, None)?;
    if r.pass() {
        Ok(())
    } else {
        Err(Error::Finding(format!(
            "{construction} output fails the {suite} suite: {}",
            r.violations
                .first()
                .map(|v| format!("{} ({}) residual {}", v.identity, v.tuple.join(","), v.residual))
                .unwrap_or_default()
        )))
    }
}

fn ensure_valid<C: Coeff>(s: &Structure<C>, what: &str) -> Result<()> {
    let r = validate_table(s);
    match r.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::Precondition(format!(
            "{what}: {} at ({}) target {}",
            v.identity,
            v.tuple.join(","),
            v.residual
        ))),
    }
}

fn require_even(basis: &GradedBasis, h: &Element) -> Result<()> {
    if h.rank() != basis.rank() {
        return Err(Error::BasisMismatch {
            left: basis.rank(),
            right: h.rank(),
        });
    }
    match h.parity(basis) {
        None if h.is_zero() => Ok(()),
        Some(Parity::Even) => Ok(()),
        _ => Err(Error::NotEven),
    }
}

fn carries_action(h: &Element) -> bool {
    h.terms().any(|(_, p)| p.contains(VarId::D))
}

/// `[a_λ b] = a∗_λ b − (−1)^{|a||b|} b∗_{−∂−λ} a` on generators.
pub fn commutator_bracket<C: Coeff>(s: &Structure<C>) -> Result<ProductTable<C>> {
    ensure_valid(s, "star table")?;
    let star = s.require(TableKind::Star)?;
    let n = s.rank();
    let flip = AffineExpr::combo(&[(-1, VarId::D), (-1, VarId::LAMBDA)]);
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (s.generator(i), s.generator(j));
            let l = star.apply(&a, &b, VarId::LAMBDA)?;
            let r = star.apply_at(&b, &a, &flip)?;
            let sg = sign(s.basis().parity(i), s.basis().parity(j));
            entries.push((i, j, l.sub(&r.scale_i64(sg))));
        }
    }
    ProductTable::from_entries(TableKind::Bracket, n, entries)
}

/// Adds the commutator bracket of the star table; verifies skew-symmetry,
/// and Jacobi when the star is left-symmetric.
pub fn commutator(def: &AlgebraDef) -> Result<AlgebraDef> {
    let bracket = commutator_bracket(&def.structure)?;
    let mut s = def.structure.clone();
    s.set_table(bracket)?;
    if !axiom_holds(&s, AxiomId::SkewSymmetry, None)? {
        return Err(Error::Finding("commutator bracket is not skew-symmetric".into()));
    }
    if axiom_holds(&s, AxiomId::LeftSymmetric, None)? {
        ensure_suite(&s, SuiteId::Lie, "commutator")?;
    }
    let mut out = AlgebraDef::new(s).with_provenance(format!("commutator of [{}]", def.provenance));
    out.params = def.params.clone();
    Ok(out)
}

/// `a ∗_λ b = a ∘_λ D(b)` for an even derivation `D` of the circ product.
pub fn derivation_star(def: &AlgebraDef, d: &ModuleMap) -> Result<AlgebraDef> {
    let s = &def.structure;
    require_suite(s, SuiteId::CommAssoc, "circ product")?;
    if d.rank() != s.rank() {
        return Err(Error::DimensionMismatch {
            map: d.rank(),
            element: s.rank(),
        });
    }
    if !d.is_even(s.basis()) {
        return Err(Error::Precondition("derivation map is not even".into()));
    }
    let dr = check_axiom(s, AxiomId::Derivation, Some(d))?;
    if !dr.pass() {
        return Err(Error::Precondition(format!(
            "map is not a derivation of circ ({} violations)",
            dr.violations.len()
        )));
    }
    let circ = s.require(TableKind::Circ)?;
    let n = s.rank();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let e = circ.apply(&s.generator(i), &d.apply(&s.generator(j))?, VarId::LAMBDA)?;
            entries.push((i, j, e));
        }
    }
    let mut out = Structure::new(s.basis().clone()).with_table(circ.clone())?;
    out.set_table(ProductTable::from_entries(TableKind::Star, n, entries)?)?;
    ensure_suite(&out, SuiteId::Novikov, "derivation_star")?;
    ensure_suite(&out, SuiteId::NovikovPoisson, "derivation_star")?;
    Ok(AlgebraDef::new(out).with_provenance(format!("derivation_star of [{}]", def.provenance)))
}

/// `α_h(x) = h ∘_(0) x`.
pub fn hom_map_from_element(def: &AlgebraDef, h: &Element) -> Result<ModuleMap> {
    require_even(def.basis(), h)?;
    let circ = def.require(TableKind::Circ)?;
    let cols = (0..def.rank())
        .map(|j| circ.nth_product(h, &def.structure.generator(j), 0))
        .collect::<Result<Vec<_>>>()?;
    ModuleMap::from_columns(cols)
}

/// `[x_λ y]^h = h ∘_(0) [x_λ y]`; the result keeps the original circ.
pub fn h_modified_bracket(def: &AlgebraDef, h: &Element) -> Result<AlgebraDef> {
    require_even(def.basis(), h)?;
    let s = &def.structure;
    require_suite(s, SuiteId::Tpcsa, "input")?;
    let circ = s.require(TableKind::Circ)?;
    let br = s.require(TableKind::Bracket)?;
    let n = s.rank();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            entries.push((i, j, circ.nth_product(h, br.entry(i, j), 0)?));
        }
    }
    let mut out = s.clone();
    out.set_table(ProductTable::from_entries(TableKind::Bracket, n, entries)?)?;
    ensure_suite(&out, SuiteId::Tpcsa, "h_modified_bracket")?;
    let mut prov = format!(
        "h_modified_bracket h={} of [{}]",
        h.display(s.basis()),
        def.provenance
    );
    if carries_action(h) {
        prov.push_str(" (h carries ∂-coefficients)");
    }
    Ok(AlgebraDef::new(out).with_provenance(prov))
}

fn disjoint_names(a: &GradedBasis, b: &GradedBasis) -> Vec<(String, Parity)> {
    let clash = a.names().iter().any(|n| b.index_of(n).is_some());
    let tag = |basis: &GradedBasis, k: usize| -> Vec<(String, Parity)> {
        basis
            .names()
            .iter()
            .zip(basis.parities())
            .map(|(n, p)| {
                let name = if clash { format!("{n}_{k}") } else { n.clone() };
                (name, *p)
            })
            .collect()
    };
    let mut out = tag(a, 1);
    out.extend(tag(b, 2));
    out
}

fn embed(e: &Element, offset: usize, rank: usize) -> Element {
    Element::from_terms(rank, e.terms().map(|(k, p)| (k + offset, p.clone())))
}

/// Blockwise sum; basis names get `_1`/`_2` suffixes when they clash.
pub fn direct_sum(a: &AlgebraDef, b: &AlgebraDef) -> Result<AlgebraDef> {
    let kinds = |d: &AlgebraDef| -> Vec<TableKind> {
        TableKind::ALL.into_iter().filter(|k| d.table(*k).is_some()).collect()
    };
    if kinds(a) != kinds(b) {
        return Err(Error::Precondition("summands carry different table kinds".into()));
    }
    let basis = GradedBasis::new(disjoint_names(a.basis(), b.basis()))?;
    let (na, n) = (a.rank(), a.rank() + b.rank());
    let mut s = Structure::new(basis);
    for kind in kinds(a) {
        let mut entries = Vec::new();
        for (off, d) in [(0, a), (na, b)] {
            for (i, j, e) in d.require(kind)?.nonzero_entries() {
                entries.push((i + off, j + off, embed(e, off, n)));
            }
        }
        s.set_table(ProductTable::from_entries(kind, n, entries)?)?;
    }
    if kinds(a).contains(&TableKind::Circ) && kinds(a).contains(&TableKind::Bracket) {
        let both = check_suite(&a.structure, SuiteId::Tpcsa, None)?.pass()
            && check_suite(&b.structure, SuiteId::Tpcsa, None)?.pass();
        if both {
            ensure_suite(&s, SuiteId::Tpcsa, "direct_sum")?;
        }
    }
    Ok(AlgebraDef::new(s).with_provenance(format!(
        "direct_sum of [{}] and [{}]",
        a.provenance, b.provenance
    )))
}

/// `(Σ pₖ eₖ) ⊗ (Σ q_l f_l) = Σ pₖ q_l (eₖ⊗f_l)`, valid since ∂⊗1 = 1⊗∂.
fn tensor_elements(a: &Element, b: &Element) -> Element {
    let nb = b.rank();
    let mut out = Element::zero(a.rank() * nb);
    for (k, p) in a.terms() {
        for (l, q) in b.terms() {
            out.add_term(k * nb + l, &p.mul(q));
        }
    }
    out
}

fn tensor_basis(a: &GradedBasis, b: &GradedBasis) -> Result<GradedBasis> {
    let mut gens = Vec::new();
    for i in 0..a.rank() {
        for j in 0..b.rank() {
            gens.push((
                format!("{}*{}", a.name(i), b.name(j)),
                a.parity(i) + b.parity(j),
            ));
        }
    }
    GradedBasis::new(gens)
}

/// Tensor product tables. `second` is the table combined with circ in the
/// two-summand formula (bracket for TPCSAs, star for pre-Lie Poisson).
fn tensor_with(a: &AlgebraDef, b: &AlgebraDef, second: TableKind) -> Result<Structure> {
    let basis = tensor_basis(a.basis(), b.basis())?;
    let (na, nb) = (a.rank(), b.rank());
    let n = na * nb;
    let (c1, c2) = (a.require(TableKind::Circ)?, b.require(TableKind::Circ)?);
    let (s1, s2) = (a.require(second)?, b.require(second)?);
    let mut circ = Vec::new();
    let mut other = Vec::new();
    for a1 in 0..na {
        for a2 in 0..nb {
            for b1 in 0..na {
                for b2 in 0..nb {
                    let sg = sign(b.basis().parity(a2), a.basis().parity(b1));
                    let (i, j) = (a1 * nb + a2, b1 * nb + b2);
                    let cc = tensor_elements(c1.entry(a1, b1), c2.entry(a2, b2));
                    let so = tensor_elements(s1.entry(a1, b1), c2.entry(a2, b2))
                        .add(&tensor_elements(c1.entry(a1, b1), s2.entry(a2, b2)));
                    circ.push((i, j, cc.scale_i64(sg)));
                    other.push((i, j, so.scale_i64(sg)));
                }
            }
        }
    }
    Structure::new(basis)
        .with_table(ProductTable::from_entries(TableKind::Circ, n, circ)?)?
        .with_table(ProductTable::from_entries(second, n, other)?)
}

pub fn tensor_tpcsa(a: &AlgebraDef, b: &AlgebraDef) -> Result<AlgebraDef> {
    require_suite(&a.structure, SuiteId::Tpcsa, "left factor")?;
    require_suite(&b.structure, SuiteId::Tpcsa, "right factor")?;
    let s = tensor_with(a, b, TableKind::Bracket)?;
    ensure_suite(&s, SuiteId::Tpcsa, "tensor_tpcsa")?;
    Ok(AlgebraDef::new(s).with_provenance(format!(
        "tensor_tpcsa of [{}] and [{}]",
        a.provenance, b.provenance
    )))
}

pub fn tensor_prelie_poisson(a: &AlgebraDef, b: &AlgebraDef) -> Result<AlgebraDef> {
    require_suite(&a.structure, SuiteId::PreliePoisson, "left factor")?;
    require_suite(&b.structure, SuiteId::PreliePoisson, "right factor")?;
    let s = tensor_with(a, b, TableKind::Star)?;
    ensure_suite(&s, SuiteId::PreliePoisson, "tensor_prelie_poisson")?;
    Ok(AlgebraDef::new(s).with_provenance(format!(
        "tensor_prelie_poisson of [{}] and [{}]",
        a.provenance, b.provenance
    )))
}

/// Finite-dimensional product `u·v` of constant vectors via a constant table.
fn fd_product(t: &ProductTable, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    let n = u.len();
    let mut out = vec![<Scalar as Coeff>::zero(); n];
    for (i, ui) in u.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            if Coeff::is_zero(ui) || Coeff::is_zero(vj) {
                continue;
            }
            for (k, p) in t.entry(i, j).terms() {
                out[k] += ui * vj * p.constant_term();
            }
        }
    }
    out
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![<Scalar as Coeff>::zero(); n];
    v[i] = <Scalar as Coeff>::one();
    v
}

fn comb(parts: &[(i64, &[Scalar])]) -> Vec<Scalar> {
    let n = parts[0].1.len();
    let mut out = vec![<Scalar as Coeff>::zero(); n];
    for (k, v) in parts {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += x * crate::scalar::int(*k);
        }
    }
    out
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Coeff::is_zero)
}

/// Current conformal superalgebra `C[∂] ⊗ g` of a finite-dimensional Lie
/// superalgebra given by constant bracket entries. An optional constant circ
/// table lifts an ordinary transposed Poisson superalgebra.
pub fn current_bracket(def: &AlgebraDef) -> Result<AlgebraDef> {
    let s = &def.structure;
    ensure_valid(s, "input tables")?;
    for t in s.tables() {
        for (i, j, e) in t.nonzero_entries() {
            if e.terms().any(|(_, p)| !p.is_constant()) {
                return Err(Error::Precondition(format!(
                    "{} entry ({},{}) is not constant",
                    t.kind(),
                    s.basis().name(i),
                    s.basis().name(j)
                )));
            }
        }
    }
    let br = s.require(TableKind::Bracket)?;
    let n = s.rank();
    let par = |i: usize| s.basis().parity(i);
    let name = |t: &[usize]| {
        t.iter()
            .map(|i| s.basis().name(*i))
            .collect::<Vec<_>>()
            .join(",")
    };
    let e: Vec<Vec<Scalar>> = (0..n).map(|i| unit(n, i)).collect();
    for a in 0..n {
        for b in 0..n {
            let l = fd_product(br, &e[a], &e[b]);
            let r = fd_product(br, &e[b], &e[a]);
            if !is_zero_vec(&comb(&[(1, &l), (sign(par(a), par(b)), &r)])) {
                return Err(Error::NotLieSuperalgebra(format!(
                    "antisymmetry fails at ({})",
                    name(&[a, b])
                )));
            }
            for c in 0..n {
                let lhs = fd_product(br, &e[a], &fd_product(br, &e[b], &e[c]));
                let r1 = fd_product(br, &fd_product(br, &e[a], &e[b]), &e[c]);
                let r2 = fd_product(br, &e[b], &fd_product(br, &e[a], &e[c]));
                if !is_zero_vec(&comb(&[(1, &lhs), (-1, &r1), (-sign(par(a), par(b)), &r2)])) {
                    return Err(Error::NotLieSuperalgebra(format!(
                        "Jacobi fails at ({})",
                        name(&[a, b, c])
                    )));
                }
            }
        }
    }
    let mut suite = SuiteId::Lie;
    if let Some(circ) = s.table(TableKind::Circ) {
        for a in 0..n {
            for b in 0..n {
                let l = fd_product(circ, &e[a], &e[b]);
                let r = fd_product(circ, &e[b], &e[a]);
                if !is_zero_vec(&comb(&[(1, &l), (-sign(par(a), par(b)), &r)])) {
                    return Err(Error::Precondition(format!(
                        "product is not supercommutative at ({})",
                        name(&[a, b])
                    )));
                }
                for c in 0..n {
                    let ab_c = fd_product(circ, &fd_product(circ, &e[a], &e[b]), &e[c]);
                    let a_bc = fd_product(circ, &e[a], &fd_product(circ, &e[b], &e[c]));
                    if !is_zero_vec(&comb(&[(1, &ab_c), (-1, &a_bc)])) {
                        return Err(Error::Precondition(format!(
                            "product is not associative at ({})",
                            name(&[a, b, c])
                        )));
                    }
                    // 2z·[x,y] = [z·x,y] + (−1)^{|x||z|}[x,z·y] with (z,x,y) = (a,b,c)
                    let l = fd_product(circ, &e[a], &fd_product(br, &e[b], &e[c]));
                    let r1 = fd_product(br, &fd_product(circ, &e[a], &e[b]), &e[c]);
                    let r2 = fd_product(br, &e[b], &fd_product(circ, &e[a], &e[c]));
                    if !is_zero_vec(&comb(&[(2, &l), (-1, &r1), (-sign(par(a), par(b)), &r2)])) {
                        return Err(Error::Precondition(format!(
                            "transposed Leibniz rule fails at ({})",
                            name(&[a, b, c])
                        )));
                    }
                }
            }
        }
        suite = SuiteId::Tpcsa;
    }
    ensure_suite(s, suite, "current_bracket")?;
    let mut out = AlgebraDef::new(s.clone())
        .with_provenance(format!("current algebra of [{}]", def.provenance));
    out.params = def.params.clone();
    Ok(out)
}
