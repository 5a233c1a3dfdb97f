//! Algebra file format (JSON).
//!
//! ```json
//! { "basis": [ {"name": "x", "parity": 0}, {"name": "y", "parity": 1} ],
//!   "tables": { "bracket": { "x,x": {"x": "D + 2*L"} } },
//!   "params": { "beta": "2" },
//!   "provenance": "..." }
//! ```
//!
//! Saving is canonical: tables in the order circ, bracket, star; pairs and
//! targets in basis order; zero entries omitted; params sorted by name.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::conformal::{validate_table, AlgebraDef, ProductTable, Structure, TableKind};
use crate::error::{Error, Result};
use crate::gmodule::{Element, GradedBasis, ModuleMap, Parity};
use crate::parse::{parse_poly, parse_poly_with, PHI_VARS};
use crate::poly::{Poly, CANONICAL_NAMES};

type TargetMap = IndexMap<String, String>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    basis: Vec<Gen>,
    #[serde(default)]
    tables: IndexMap<String, IndexMap<String, TargetMap>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    params: IndexMap<String, String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    provenance: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Gen {
    name: String,
    parity: u8,
}

/// Parameters written with the two-variable names `s`, `t`.
pub fn is_two_variable_param(name: &str) -> bool {
    name == "phi"
}

pub fn parse_param(name: &str, text: &str) -> Result<Poly> {
    let parsed = if is_two_variable_param(name) {
        parse_poly_with(text, PHI_VARS)
    } else {
        parse_poly(text)
    };
    parsed.map_err(|source| Error::Parse {
        context: format!("param `{name}`"),
        source,
    })
}

pub fn print_param(name: &str, p: &Poly) -> String {
    if is_two_variable_param(name) {
        let mut names = CANONICAL_NAMES;
        names[0] = "s";
        names[1] = "t";
        p.display_with(&names).to_string()
    } else {
        p.to_string()
    }
}

pub fn load_algebra(bytes: &[u8]) -> Result<AlgebraDef> {
    let doc: Doc = serde_json::from_slice(bytes).map_err(|e| Error::Schema(e.to_string()))?;
    let mut gens = Vec::with_capacity(doc.basis.len());
    for g in doc.basis {
        let parity = Parity::from_bit(g.parity)
            .ok_or_else(|| Error::Schema(format!("parity of `{}` must be 0 or 1", g.name)))?;
        if g.name.is_empty() || g.name.contains(',') || g.name.trim() != g.name {
            return Err(Error::Schema(format!("invalid basis name `{}`", g.name)));
        }
        gens.push((g.name, parity));
    }
    let basis = GradedBasis::new(gens)?;
    let rank = basis.rank();
    let index = |name: &str, ctx: &str| {
        basis
            .index_of(name.trim())
            .ok_or_else(|| Error::Schema(format!("unknown basis name `{name}` in {ctx}")))
    };

    let mut structure = Structure::new(basis.clone());
    for (tname, pairs) in &doc.tables {
        let kind = TableKind::from_name(tname)
            .ok_or_else(|| Error::Schema(format!("unknown table `{tname}`")))?;
        let mut entries = Vec::new();
        for (key, targets) in pairs {
            let ctx = format!("{tname} table pair \"{key}\"");
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| Error::Schema(format!("pair key \"{key}\" is not `name,name`")))?;
            let (i, j) = (index(a, &ctx)?, index(b, &ctx)?);
            let mut elem = Element::zero(rank);
            for (target, text) in targets {
                let k = index(target, &ctx)?;
                let poly = parse_poly(text).map_err(|source| Error::Parse {
                    context: format!("{ctx} target `{target}`"),
                    source,
                })?;
                elem.add_term(k, &poly);
            }
            entries.push((i, j, elem));
        }
        structure.set_table(ProductTable::from_entries(kind, rank, entries)?)?;
    }

    let report = validate_table(&structure);
    if let Some(v) = report.violations.first() {
        let (table, _) = v.identity.split_once(':').unwrap_or((&v.identity, ""));
        return Err(Error::Parity {
            table: table.to_string(),
            pair: v.tuple.join(","),
            target: v.residual.clone(),
        });
    }

    let mut params = BTreeMap::new();
    for (name, text) in &doc.params {
        params.insert(name.clone(), parse_param(name, text)?);
    }
    Ok(AlgebraDef {
        structure,
        params,
        provenance: doc.provenance,
    })
}

pub fn save_algebra(def: &AlgebraDef) -> String {
    let basis = def.basis();
    let mut tables = IndexMap::new();
    for kind in TableKind::ALL {
        let Some(t) = def.table(kind) else { continue };
        let mut pairs = IndexMap::new();
        for (i, j, e) in t.nonzero_entries() {
            let targets: TargetMap = e
                .terms()
                .map(|(k, p)| (basis.name(k).to_string(), p.to_string()))
                .collect();
            pairs.insert(format!("{},{}", basis.name(i), basis.name(j)), targets);
        }
        tables.insert(kind.name().to_string(), pairs);
    }
    let doc = Doc {
        basis: basis
            .names()
            .iter()
            .zip(basis.parities())
            .map(|(n, p)| Gen {
                name: n.clone(),
                parity: p.bit(),
            })
            .collect(),
        tables,
        params: def
            .params
            .iter()
            .map(|(k, v)| (k.clone(), print_param(k, v)))
            .collect(),
        provenance: def.provenance.clone(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("document serializes");
    out.push('\n');
    out
}


/// Auxiliary input for checks and constructions:
/// `{"map": {"x": {"x": "D"}}}` gives columns of a module map by generator,
/// `{"element": {"x": "1"}}` an element. Either key may be absent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Aux {
    pub map: Option<ModuleMap>,
    pub element: Option<Element>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct AuxDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    map: Option<IndexMap<String, TargetMap>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    element: Option<TargetMap>,
}

fn element_from(basis: &GradedBasis, targets: &TargetMap, ctx: &str) -> Result<Element> {
    let mut e = Element::zero(basis.rank());
    for (name, text) in targets {
        let k = basis
            .index_of(name)
            .ok_or_else(|| Error::Schema(format!("unknown basis name `{name}` in {ctx}")))?;
        let p = parse_poly(text).map_err(|source| Error::Parse {
            context: format!("{ctx} target `{name}`"),
            source,
        })?;
        e.add_term(k, &p);
    }
    Ok(e)
}

fn targets_of(basis: &GradedBasis, e: &Element) -> TargetMap {
    e.terms()
        .map(|(k, p)| (basis.name(k).to_string(), p.to_string()))
        .collect()
}

pub fn load_aux(bytes: &[u8], basis: &GradedBasis) -> Result<Aux> {
    let doc: AuxDoc = serde_json::from_slice(bytes).map_err(|e| Error::Schema(e.to_string()))?;
    let map = match doc.map {
        None => None,
        Some(cols) => {
            let mut columns = vec![Element::zero(basis.rank()); basis.rank()];
            for (name, targets) in &cols {
                let j = basis
                    .index_of(name)
                    .ok_or_else(|| Error::Schema(format!("unknown basis name `{name}` in map")))?;
                columns[j] = element_from(basis, targets, &format!("map column `{name}`"))?;
            }
            Some(ModuleMap::from_columns(columns)?)
        }
    };
    let element = doc
        .element
        .map(|t| element_from(basis, &t, "element"))
        .transpose()?;
    Ok(Aux { map, element })
}

pub fn save_aux(aux: &Aux, basis: &GradedBasis) -> String {
    let doc = AuxDoc {
        map: aux.map.as_ref().map(|m| {
            (0..m.rank())
                .map(|j| (basis.name(j).to_string(), targets_of(basis, m.column(j))))
                .collect()
        }),
        element: aux.element.as_ref().map(|e| targets_of(basis, e)),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("aux serializes");
    s.push('\n');
    s
}
