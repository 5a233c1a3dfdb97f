//! Exact λ-product tables over C[∂] and symbolic checks for (transposed)
//! Poisson conformal superalgebras.

pub mod axioms;
pub mod catalog;
pub mod classify;
pub mod conformal;
pub mod constructions;
pub mod error;
pub mod format;
pub mod gmodule;
pub mod parse;
pub mod poly;
pub mod report;
pub mod scalar;

pub use axioms::{check_axiom, check_compat_equivalence, check_derived_identities, check_suite, AxiomId, DerivedId, SuiteId};
pub use conformal::{validate_table, AlgebraDef, ProductTable, Structure, TableKind};
pub use error::{Error, Result};
pub use format::{load_algebra, load_aux, save_algebra, save_aux, Aux};
pub use gmodule::{Element, GradedBasis, ModuleMap, Parity};
pub use parse::{parse_poly, ParseError};
pub use poly::{AffineExpr, Monomial, Poly, VarId};
pub use report::{CheckReport, Violation};
pub use scalar::{Coeff, Fp, Scalar};
