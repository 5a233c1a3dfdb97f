//! Built-in algebras: Virasoro, Neveu–Schwarz, current algebras, the five
//! rank-(1+1) Lie conformal superalgebras R1..R5 and their compatible
//! transposed Poisson structures.

use std::collections::BTreeMap;

use crate::axioms::{check_suite, SuiteId};
use crate::conformal::{AlgebraDef, ProductTable, Structure, TableKind};
use crate::error::{Error, Result};
use crate::format::{parse_param, print_param};
use crate::gmodule::{Element, GradedBasis, Parity};
use crate::poly::{Poly, VarId};

pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static [(&'static str, &'static str)],
    pub summary: &'static str,
}

/// Every key with its parameters and defaults.
pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "vir",
        params: &[("c", "")],
        summary: "Virasoro [L_λ L] = (∂+2λ)L; with c, also L∘_λ L = cL",
    },
    CatalogEntry {
        name: "ns",
        params: &[],
        summary: "Neveu-Schwarz superalgebra on L (even), G (odd)",
    },
    CatalogEntry {
        name: "current",
        params: &[("s", "1")],
        summary: "current algebra of the 2-dim Lie algebra [e,f] = s·e",
    },
    CatalogEntry {
        name: "r1",
        params: &[("p", "D")],
        summary: "[y_λ y] = p(∂)x",
    },
    CatalogEntry {
        name: "r2",
        params: &[("q", "1")],
        summary: "[x_λ y] = q(λ)y",
    },
    CatalogEntry {
        name: "r3",
        params: &[],
        summary: "[x_λ x] = (∂+2λ)x",
    },
    CatalogEntry {
        name: "r4",
        params: &[("beta", "2"), ("gamma", "0")],
        summary: "[x_λ x] = (∂+2λ)x, [x_λ y] = (∂+βλ+γ)y",
    },
    CatalogEntry {
        name: "r5",
        params: &[("alpha", "1")],
        summary: "[x_λ x] = (∂+2λ)x, [x_λ y] = (∂+3/2λ)y, [y_λ y] = αx",
    },
    CatalogEntry {
        name: "r1_tpcsa",
        params: &[("p", "D"), ("phi", "1")],
        summary: "r1 with y∘_λ y = (∂+2λ)Φ(∂,(∂+2λ)^2)x",
    },
    CatalogEntry {
        name: "r2_tpcsa",
        params: &[("q", "1"), ("c", "1")],
        summary: "r2 with x∘_λ x = cx, x∘_λ y = cy (c = 0 unless q is constant)",
    },
    CatalogEntry {
        name: "r3_tpcsa",
        params: &[("c", "1")],
        summary: "r3 with x∘_λ x = cx",
    },
    CatalogEntry {
        name: "r4_tpcsa",
        params: &[("beta", "2"), ("gamma", "0"), ("c", "1")],
        summary: "r4 with x∘_λ x = cx, x∘_λ y = cy (c = 0 unless β = 2)",
    },
    CatalogEntry {
        name: "trivial_product",
        params: &[("on", "ns")],
        summary: "zero λ-product on the bracket of another entry; other params are forwarded",
    },
];

pub fn entry(name: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

/// Suite every build of `name` is verified against.
pub fn defining_suite(name: &str) -> SuiteId {
    if name.ends_with("_tpcsa") || name == "trivial_product" {
        SuiteId::Tpcsa
    } else {
        SuiteId::Lie
    }
}

pub type Params = BTreeMap<String, String>;

/// Convenience for `&[("beta", "2")]`-style literals.
pub fn params(pairs: &[(&str, &str)]) -> Params {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

struct Args<'a> {
    name: &'a str,
    given: &'a Params,
    parsed: BTreeMap<String, Poly>,
}

impl Args<'_> {
    fn get(&mut self, key: &str) -> Result<Option<Poly>> {
        let spec = entry(self.name).expect("known entry");
        let default = spec
            .params
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, d)| *d)
            .unwrap_or("");
        let text = match self.given.get(key) {
            Some(t) => t.as_str(),
            None if default.is_empty() => return Ok(None),
            None => default,
        };
        let p = parse_param(key, text)?;
        self.parsed.insert(key.to_string(), p.clone());
        Ok(Some(p))
    }

    fn poly(&mut self, key: &str) -> Result<Poly> {
        self.get(key)?
            .ok_or_else(|| Error::Param(format!("{} requires `{key}`", self.name)))
    }

    fn poly_in(&mut self, key: &str, var: VarId, var_name: &str) -> Result<Poly> {
        let p = self.poly(key)?;
        if !p.uses_only(&[var]) {
            return Err(Error::Param(format!(
                "`{key}` must be a polynomial in {var_name} only, got {p}"
            )));
        }
        Ok(p)
    }

    fn lie(&mut self, rtype: u8) -> Result<BTreeMap<String, Poly>> {
        let mut lie = BTreeMap::new();
        match rtype {
            1 => {
                lie.insert("p".to_string(), self.poly_in("p", VarId::D, "D")?);
            }
            2 => {
                lie.insert("q".to_string(), self.poly_in("q", VarId::LAMBDA, "L")?);
            }
            3 => {}
            4 => {
                lie.insert("beta".to_string(), self.constant("beta")?);
                lie.insert("gamma".to_string(), self.constant("gamma")?);
            }
            5 => {
                lie.insert("alpha".to_string(), self.constant("alpha")?);
            }
            _ => return Err(Error::Param(format!("unknown type r{rtype}"))),
        }
        Ok(lie)
    }

    fn constant(&mut self, key: &str) -> Result<Poly> {
        let p = self.poly(key)?;
        if !p.is_constant() {
            return Err(Error::Param(format!("`{key}` must be a rational constant, got {p}")));
        }
        Ok(p)
    }
}

fn xy_basis() -> GradedBasis {
    GradedBasis::new([("x", Parity::Even), ("y", Parity::Odd)]).expect("static basis")
}

fn e(rank: usize, k: usize, p: Poly) -> Element {
    Element::term(rank, k, p)
}

fn poly(s: &str) -> Poly {
    crate::parse::parse_poly(s).expect("static polynomial")
}

fn table(kind: TableKind, rank: usize, entries: Vec<(usize, usize, Element)>) -> ProductTable {
    ProductTable::from_entries(kind, rank, entries).expect("catalog table")
}

/// Skew partner `[b_λ a] = −(−1)^{|a||b|}[a_{−∂−λ} b]` of a single entry.
fn skew_partner(entry: &Element, sign: i64) -> Element {
    let flip = crate::poly::AffineExpr::combo(&[(-1, VarId::D), (-1, VarId::LAMBDA)]);
    entry.subst(VarId::LAMBDA, &flip).scale_i64(-sign)
}

fn rank2_bracket(xx: Poly, xy: Poly, yy: Poly) -> ProductTable {
    let xx_e = e(2, 0, xx);
    let xy_e = e(2, 1, xy);
    let yy_e = e(2, 0, yy);
    let yx_e = skew_partner(&xy_e, 1);
    table(
        TableKind::Bracket,
        2,
        vec![(0, 0, xx_e), (0, 1, xy_e), (1, 0, yx_e), (1, 1, yy_e)],
    )
}

fn rank2_circ(f: Poly, g: Poly, h: Poly) -> ProductTable {
    let flip = crate::poly::AffineExpr::combo(&[(-1, VarId::D), (-1, VarId::LAMBDA)]);
    let yx = g.subst(VarId::LAMBDA, &flip);
    table(
        TableKind::Circ,
        2,
        vec![
            (0, 0, e(2, 0, f)),
            (0, 1, e(2, 1, g)),
            (1, 0, e(2, 1, yx)),
            (1, 1, e(2, 0, h)),
        ],
    )
}

/// Rank-(1+1) structure with the given bracket and `x∘x = f x`,
/// `x∘y = g y`, `y∘y = h x` (with `y∘x` completed by commutativity).
pub fn rank2_structure(bracket: ProductTable, f: Poly, g: Poly, h: Poly) -> Structure {
    Structure::new(xy_basis())
        .with_table(bracket)
        .and_then(|s| s.with_table(rank2_circ(f, g, h)))
        .expect("rank-2 tables")
}

/// Parses and type-checks the Lie parameters of type `r{rtype}`, filling
/// catalog defaults for missing ones.
pub fn rtype_params(rtype: u8, given: &Params) -> Result<BTreeMap<String, Poly>> {
    let name = match rtype {
        1 => "r1",
        2 => "r2",
        3 => "r3",
        4 => "r4",
        5 => "r5",
        _ => return Err(Error::Param(format!("unknown type r{rtype}"))),
    };
    let spec = entry(name).expect("rank-2 entries exist");
    if let Some(k) = given.keys().find(|k| !spec.params.iter().any(|(p, _)| p == k)) {
        return Err(Error::Param(format!("{name} takes no parameter `{k}`")));
    }
    let mut args = Args {
        name,
        given,
        parsed: BTreeMap::new(),
    };
    args.lie(rtype)
}

/// Lie bracket of type R1..R5 from already-parsed parameters.
pub fn rtype_bracket(rtype: u8, lie: &BTreeMap<String, Poly>) -> Result<ProductTable> {
    let get = |k: &str| {
        lie.get(k)
            .cloned()
            .ok_or_else(|| Error::Param(format!("r{rtype} requires `{k}`")))
    };
    let d = Poly::var(VarId::D);
    let l = Poly::var(VarId::LAMBDA);
    let vir = poly("D+2*L");
    Ok(match rtype {
        1 => rank2_bracket(Poly::zero(), Poly::zero(), get("p")?),
        2 => rank2_bracket(Poly::zero(), get("q")?, Poly::zero()),
        3 => rank2_bracket(vir, Poly::zero(), Poly::zero()),
        4 => {
            let xy = d.add(&l.mul(&get("beta")?)).add(&get("gamma")?);
            rank2_bracket(vir, xy, Poly::zero())
        }
        5 => rank2_bracket(vir, poly("D+3/2*L"), get("alpha")?),
        _ => return Err(Error::Param(format!("unknown type r{rtype}"))),
    })
}

/// Builds a catalog entry and verifies it against its defining suite.
pub fn build(name: &str, given: &Params) -> Result<AlgebraDef> {
    let spec = entry(name).ok_or_else(|| Error::Param(format!("unknown catalog entry `{name}`")))?;
    if name != "trivial_product" {
        if let Some(k) = given.keys().find(|k| !spec.params.iter().any(|(p, _)| p == k)) {
            return Err(Error::Param(format!("{name} takes no parameter `{k}`")));
        }
    }
    let mut args = Args {
        name,
        given,
        parsed: BTreeMap::new(),
    };
    let structure = match name {
        "vir" => {
            let basis = GradedBasis::new([("L", Parity::Even)])?;
            let br = table(TableKind::Bracket, 1, vec![(0, 0, e(1, 0, poly("D+2*L")))]);
            let mut s = Structure::new(basis).with_table(br)?;
            if let Some(c) = args.get("c")? {
                if !c.is_constant() {
                    return Err(Error::Param(format!("`c` must be a rational constant, got {c}")));
                }
                s.set_table(table(TableKind::Circ, 1, vec![(0, 0, e(1, 0, c))]))?;
            }
            s
        }
        "ns" => {
            let basis = GradedBasis::new([("L", Parity::Even), ("G", Parity::Odd)])?;
            let br = table(
                TableKind::Bracket,
                2,
                vec![
                    (0, 0, e(2, 0, poly("D+2*L"))),
                    (0, 1, e(2, 1, poly("D+3/2*L"))),
                    (1, 0, e(2, 1, poly("1/2*D+3/2*L"))),
                    (1, 1, e(2, 0, poly("1"))),
                ],
            );
            Structure::new(basis).with_table(br)?
        }
        "current" => {
            let s_val = args.constant("s")?;
            let basis = GradedBasis::new([("e", Parity::Even), ("f", Parity::Even)])?;
            let br = table(
                TableKind::Bracket,
                2,
                vec![(0, 1, e(2, 0, s_val.clone())), (1, 0, e(2, 0, s_val.neg()))],
            );
            Structure::new(basis).with_table(br)?
        }
        "r1" | "r2" | "r3" | "r4" | "r5" | "r1_tpcsa" | "r2_tpcsa" | "r3_tpcsa" | "r4_tpcsa" => {
            let rtype = name.as_bytes()[1] - b'0';
            let lie = args.lie(rtype)?;
            let br = rtype_bracket(rtype, &lie)?;
            if !name.ends_with("_tpcsa") {
                Structure::new(xy_basis()).with_table(br)?
            } else {
                let (f, g, h) = match rtype {
                    1 => {
                        let phi = args.poly("phi")?;
                        if !phi.uses_only(&[VarId::D, VarId::LAMBDA]) {
                            return Err(Error::Param("`phi` must be a polynomial in s, t".into()));
                        }
                        let t = poly("D+2*L");
                        let h = t.mul(&phi.compose(VarId::LAMBDA, &t.mul(&t)));
                        (Poly::zero(), Poly::zero(), h)
                    }
                    2 => {
                        let c = args.constant("c")?;
                        if !lie["q"].is_constant() && !c.is_zero() {
                            return Err(Error::Param(
                                "nonconstant q admits only the trivial structure (c = 0)".into(),
                            ));
                        }
                        (c.clone(), c, Poly::zero())
                    }
                    3 => (args.constant("c")?, Poly::zero(), Poly::zero()),
                    4 => {
                        let c = args.constant("c")?;
                        let beta_is_two = lie["beta"] == Poly::from_i64(2);
                        if !beta_is_two && !c.is_zero() {
                            return Err(Error::Param(
                                "β ≠ 2 admits only the trivial structure (c = 0)".into(),
                            ));
                        }
                        (c.clone(), c, Poly::zero())
                    }
                    _ => unreachable!(),
                };
                rank2_structure(br, f, g, h)
            }
        }
        "trivial_product" => {
            let on = given.get("on").map(String::as_str).unwrap_or("ns");
            if on == "trivial_product" {
                return Err(Error::Param("trivial_product cannot wrap itself".into()));
            }
            let mut inner_params = given.clone();
            inner_params.remove("on");
            let inner = build(on, &inner_params)?;
            let mut s = inner.structure;
            s.set_table(ProductTable::zero(TableKind::Circ, s.rank()))?;
            args.parsed = inner.params;
            let mut def = AlgebraDef::new(s);
            def.params = args.parsed;
            def.provenance = format!("catalog trivial_product on={on}{}", render(&def.params));
            return verify(name, def);
        }
        _ => unreachable!("entry table and match agree"),
    };
    let mut def = AlgebraDef::new(structure);
    def.params = args.parsed;
    def.provenance = format!("catalog {name}{}", render(&def.params));
    verify(name, def)
}

fn render(params: &BTreeMap<String, Poly>) -> String {
    params
        .iter()
        .map(|(k, v)| format!(" {k}={}", print_param(k, v)))
        .collect()
}

fn verify(name: &str, def: AlgebraDef) -> Result<AlgebraDef> {
    let suite = defining_suite(name);
    let report = check_suite(&def.structure, suite, None)?;
    if !report.pass() {
        return Err(Error::Finding(format!(
            "catalog entry {name} fails its defining suite {suite}: {} violations",
            report.violations.len()
        )));
    }
    Ok(def)
}
