//! Rank-(1+1) compatible TPCSA structures: symbolic sufficiency checks for
//! the classified families and exhaustive bounded search for necessity.
//!
//! The ansatz is `x∘x = f x`, `x∘y = g y`, `y∘y = h x` with `y∘x` completed
//! by commutativity. Commutativity then forces `f(∂,λ) = f(∂,−∂−λ)` and
//! `h(∂,λ) = −h(∂,−∂−λ)`, leaving `g` free; these per-slot conditions are
//! enumerated first so the quadratic checks only see commutative candidates.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::axioms::{axiom_holds, check_derived_identities, check_suite, AxiomId, SuiteId};
use crate::catalog::{build, rank2_structure, rtype_bracket, rtype_params, Params};
use crate::conformal::Structure;
use crate::error::{Error, Result};
use crate::format::print_param;
use crate::poly::{AffineExpr, Monomial, Poly, VarId};
use crate::report::CheckReport;
use crate::scalar::{Coeff, Scalar};

pub const DEFAULT_CEILING: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub rtype: u8,
    pub lie: BTreeMap<String, Poly>,
    pub degree: u32,
    pub grid: Vec<Scalar>,
    pub prime: Option<u32>,
    pub ceiling: u64,
}

impl SearchConfig {
    /// Config with the default grid `{−1, 0, 1}`, no prime and the default ceiling.
    pub fn new(rtype: u8, lie: &Params, degree: u32) -> Result<Self> {
        Ok(SearchConfig {
            rtype,
            lie: rtype_params(rtype, lie)?,
            degree,
            grid: [-1, 0, 1].map(crate::scalar::int).to_vec(),
            prime: None,
            ceiling: DEFAULT_CEILING,
        })
    }

    pub fn with_grid(mut self, grid: Vec<Scalar>) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_prime(mut self, p: Option<u32>) -> Self {
        self.prime = p;
        self
    }

    pub fn with_ceiling(mut self, c: u64) -> Self {
        self.ceiling = c;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(1..=5).contains(&self.rtype) {
            return Err(Error::Param(format!("unknown type r{}", self.rtype)));
        }
        if self.grid.is_empty() {
            return Err(Error::Param("coefficient grid is empty".into()));
        }
        let mut g = self.grid.clone();
        g.sort();
        g.dedup();
        if g.len() != self.grid.len() {
            return Err(Error::Param("coefficient grid has repeated values".into()));
        }
        if let Some(p) = self.prime {
            if p < 3 || !crate::scalar::SUPPORTED_PRIMES.contains(&p) {
                return Err(Error::UnsupportedPrime(p));
            }
        }
        Ok(())
    }

    /// Ansatz monomials `∂^a λ^b` with `a + b ≤ d`, by total degree then
    /// descending ∂ exponent.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        for t in 0..=self.degree {
            for a in (0..=t).rev() {
                out.push(Monomial::from_exponents([a, t - a, 0, 0, 0]));
            }
        }
        out
    }

    /// Nominal search-space size `|grid|^(3m)`.
    pub fn candidate_count(&self) -> BigUint {
        let m = self.monomials().len() as u32;
        BigUint::from(self.grid.len()).pow(3 * m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub f: Poly,
    pub g: Poly,
    pub h: Poly,
    /// Grid coefficients of `f`, `g`, `h` in ansatz-monomial order.
    pub coefficients: Vec<Scalar>,
    pub tpcsa: bool,
    pub family_match: bool,
}

impl Solution {
    pub fn is_trivial(&self) -> bool {
        self.f.is_zero() && self.g.is_zero() && self.h.is_zero()
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "f": self.f.to_string(),
            "g": self.g.to_string(),
            "h": self.h.to_string(),
            "tpcsa": self.tpcsa,
            "family_match": self.family_match,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub candidates: BigUint,
    pub commutative: u64,
    pub solutions: Vec<Solution>,
    pub findings: Vec<String>,
}

impl SearchReport {
    pub fn to_json_value(&self) -> Value {
        let cfg = &self.config;
        let lie: serde_json::Map<String, Value> = cfg
            .lie
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(print_param(k, v))))
            .collect();
        let mut v = json!({
            "type": format!("r{}", cfg.rtype),
            "lie": lie,
            "degree": cfg.degree,
            "grid": cfg.grid.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "candidates": self.candidates.to_string(),
            "commutative": self.commutative,
            "solutions": self.solutions.iter().map(Solution::to_json_value).collect::<Vec<_>>(),
        });
        if let Some(p) = cfg.prime {
            v["prime"] = json!(p);
        }
        if !self.findings.is_empty() {
            v["findings"] = json!(self.findings);
        }
        v
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("json");
        s.push('\n');
        s
    }
}

impl std::fmt::Display for SearchReport {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cfg = &self.config;
        writeln!(
            out,
            "search r{} degree {}: {} candidates, {} commutative, {} solutions",
            cfg.rtype,
            cfg.degree,
            self.candidates,
            self.commutative,
            self.solutions.len()
        )?;
        for s in &self.solutions {
            writeln!(
                out,
                "  f = {}; g = {}; h = {}; family match: {}",
                s.f, s.g, s.h, s.family_match
            )?;
        }
        for f in &self.findings {
            writeln!(out, "  FINDING: {f}")?;
        }
        Ok(())
    }
}

fn flip() -> AffineExpr<Scalar> {
    AffineExpr::combo(&[(-1, VarId::D), (-1, VarId::LAMBDA)])
}

/// All grid instantiations of one slot satisfying `p(∂,−∂−λ) = sign·p(∂,λ)`
/// (no condition when `sign` is `None`), as (coefficients, poly).
fn slot_values(cfg: &SearchConfig, mons: &[Monomial], sign: Option<i64>) -> Vec<(Vec<Scalar>, Poly)> {
    let k = cfg.grid.len();
    let m = mons.len();
    let total = k.pow(m as u32);
    let mut out = Vec::new();
    let mut idx = vec![0usize; m];
    for _ in 0..total {
        let coeffs: Vec<Scalar> = idx.iter().map(|i| cfg.grid[*i].clone()).collect();
        let p = Poly::from_terms(mons.iter().copied().zip(coeffs.iter().cloned()).collect());
        let keep = match sign {
            None => true,
            Some(s) => p.subst(VarId::LAMBDA, &flip()) == p.scale(&crate::scalar::int(s)),
        };
        if keep {
            out.push((coeffs, p));
        }
        for d in (0..m).rev() {
            idx[d] += 1;
            if idx[d] < k {
                break;
            }
            idx[d] = 0;
        }
    }
    out
}

fn quick_check<C: Coeff>(s: &Structure<C>) -> Result<bool> {
    Ok(axiom_holds(s, AxiomId::Associative, None)?
        && axiom_holds(s, AxiomId::TransposedLeibniz, None)?)
}

fn prime_check(s: &Structure, p: u32) -> Result<bool> {
    crate::with_prime_field!(p, F => match s.try_reduce::<F>() {
        Some(r) => quick_check(&r),
        None => quick_check(s),
    })
    .unwrap_or_else(|| Err(Error::UnsupportedPrime(p)))
}

/// Exhaustive grid search for commutative compatible products on `r{rtype}`.
/// Every emitted solution passes the full tpcsa suite over the rationals.
pub fn search_compatible(cfg: &SearchConfig) -> Result<SearchReport> {
    cfg.validate()?;
    let candidates = cfg.candidate_count();
    if candidates > BigUint::from(cfg.ceiling) {
        return Err(Error::CeilingExceeded {
            count: candidates.to_string(),
            ceiling: cfg.ceiling,
        });
    }
    let bracket = rtype_bracket(cfg.rtype, &cfg.lie)?;
    let mut bare = rank2_structure(bracket.clone(), Poly::zero(), Poly::zero(), Poly::zero());
    bare.remove_table(crate::conformal::TableKind::Circ);
    if !check_suite(&bare, SuiteId::Lie, None)?.pass() {
        return Err(Error::Param(format!(
            "r{} with the given parameters is not a Lie conformal superalgebra",
            cfg.rtype
        )));
    }
    let mons = cfg.monomials();
    let fs = slot_values(cfg, &mons, Some(1));
    let gs = slot_values(cfg, &mons, None);
    let hs = slot_values(cfg, &mons, Some(-1));
    let (nf, ng, nh) = (fs.len() as u64, gs.len() as u64, hs.len() as u64);
    let total = nf * ng * nh;

    let found: Vec<Result<Option<Solution>>> = (0..total)
        .into_par_iter()
        .map(|k| {
            let (fi, rest) = (k / (ng * nh), k % (ng * nh));
            let (gi, hi) = (rest / nh, rest % nh);
            let (f, g, h) = (&fs[fi as usize], &gs[gi as usize], &hs[hi as usize]);
            let s = rank2_structure(bracket.clone(), f.1.clone(), g.1.clone(), h.1.clone());
            let quick = match cfg.prime {
                Some(p) => prime_check(&s, p)?,
                None => quick_check(&s)?,
            };
            if !quick || !check_suite(&s, SuiteId::Tpcsa, None)?.pass() {
                return Ok(None);
            }
            let family_match = match_family(&f.1, &g.1, &h.1, cfg.rtype, &cfg.lie)?;
            let coefficients = f.0.iter().chain(&g.0).chain(&h.0).cloned().collect();
            Ok(Some(Solution {
                f: f.1.clone(),
                g: g.1.clone(),
                h: h.1.clone(),
                coefficients,
                tpcsa: true,
                family_match,
            }))
        })
        .collect();
    let mut solutions = Vec::new();
    for r in found {
        if let Some(s) = r? {
            solutions.push(s);
        }
    }
    solutions.sort_by(|a, b| a.coefficients.cmp(&b.coefficients));
    let findings = solutions
        .iter()
        .filter(|s| !s.family_match)
        .map(|s| {
            format!(
                "r{} solution f = {}, g = {}, h = {} lies outside the classified family",
                cfg.rtype, s.f, s.g, s.h
            )
        })
        .collect();
    Ok(SearchReport {
        config: cfg.clone(),
        candidates,
        commutative: total,
        solutions,
        findings,
    })
}

/// `p(∂, λ)` rewritten in `u = ∂ + 2λ`: substitutes `λ ↦ (u − ∂)/2`.
fn in_virasoro_variable(p: &Poly) -> Poly {
    let half = crate::scalar::rat(1, 2);
    let lam = Poly::var(VarId::SCRATCH)
        .sub(&Poly::var(VarId::D))
        .scale(&half);
    p.compose(VarId::LAMBDA, &lam)
}

fn is_constant_pair(f: &Poly, g: &Poly, h: &Poly, equal: bool) -> bool {
    f.is_constant() && g.is_constant() && h.is_zero() && (!equal || f == g)
}

/// Whether `(f, g, h)` lies in the classified family for `r{rtype}`.
pub fn match_family(f: &Poly, g: &Poly, h: &Poly, rtype: u8, lie: &BTreeMap<String, Poly>) -> Result<bool> {
    if f.is_zero() && g.is_zero() && h.is_zero() {
        return Ok(true);
    }
    let abelian = || -> Result<bool> {
        let br = rtype_bracket(rtype, lie)?;
        let s = rank2_structure(br, f.clone(), g.clone(), h.clone());
        Ok(check_suite(&s, SuiteId::CommAssoc, None)?.pass())
    };
    let get = |k: &str| {
        lie.get(k)
            .cloned()
            .ok_or_else(|| Error::Param(format!("r{rtype} requires `{k}`")))
    };
    Ok(match rtype {
        1 => {
            if get("p")?.is_zero() {
                abelian()?
            } else {
                let u = in_virasoro_variable(h);
                f.is_zero()
                    && g.is_zero()
                    && u.terms().iter().all(|(m, _)| m.exponent(VarId::SCRATCH) % 2 == 1)
            }
        }
        2 => {
            let q = get("q")?;
            if q.is_zero() {
                abelian()?
            } else if q.is_constant() {
                is_constant_pair(f, g, h, true)
            } else {
                false
            }
        }
        3 => f.is_constant() && g.is_zero() && h.is_zero(),
        4 => get("beta")? == Poly::from_i64(2) && is_constant_pair(f, g, h, true),
        5 => false,
        _ => return Err(Error::Param(format!("unknown type r{rtype}"))),
    })
}

/// A member of a classified family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Trivial,
    /// `x∘x = c x` with `x∘y = c y` (R2, R4) or `x∘y = 0` (R3).
    Constant(Scalar),
    /// `y∘y = (∂+2λ)Φ(∂,(∂+2λ)²) x` for R1, `Φ` in the `s, t` variables.
    Phi(Poly),
}

/// Builds the family instance through the catalog and runs the tpcsa suite
/// plus the derived identities.
pub fn verify_sufficiency(rtype: u8, lie: &Params, family: &Family) -> Result<CheckReport> {
    rtype_params(rtype, lie)?;
    let base = format!("r{rtype}");
    let mut p: Params = lie.clone();
    let name = match (rtype, family) {
        (_, Family::Trivial) => {
            p.insert("on".into(), base);
            "trivial_product".to_string()
        }
        (1, Family::Phi(phi)) => {
            p.insert("phi".into(), print_param("phi", phi));
            "r1_tpcsa".to_string()
        }
        (2..=4, Family::Constant(c)) => {
            p.insert("c".into(), c.to_string());
            format!("{base}_tpcsa")
        }
        _ => {
            return Err(Error::Param(format!(
                "{family:?} is not a classified family for {base}"
            )))
        }
    };
    let def = build(&name, &p)?;
    let mut report = check_suite(&def.structure, SuiteId::Tpcsa, None)?;
    let derived = check_derived_identities(&def.structure)?;
    report.suite = format!("sufficiency {}", def.provenance.trim_start_matches("catalog "));
    report.extend(derived);
    Ok(report)
}
