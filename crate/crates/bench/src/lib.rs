//! Fixtures shared by the benchmarks.

use tpcsa_core::catalog::{build, params};
use tpcsa_core::classify::SearchConfig;
use tpcsa_core::constructions::tensor_tpcsa;
use tpcsa_core::{parse_poly, AlgebraDef, Poly};

pub fn r4_tpcsa() -> AlgebraDef {
    build("r4_tpcsa", &params(&[("beta", "2"), ("gamma", "0"), ("c", "1")])).expect("catalog entry")
}

pub fn r4_tensor_square() -> AlgebraDef {
    let a = r4_tpcsa();
    tensor_tpcsa(&a, &a).expect("tensor square")
}

pub fn dense_poly(seed: i64) -> Poly {
    let text = format!("{seed}*D^3*L + 2*D^2*L^2 - 1/3*L^3*M + D*M^2 + {seed}/7*G*N - 5");
    parse_poly_all(&text)
}

fn parse_poly_all(text: &str) -> Poly {
    tpcsa_core::parse::parse_poly_with(text, tpcsa_core::parse::ALL_VARS).expect("fixture polynomial")
}

pub fn r5_search() -> SearchConfig {
    SearchConfig::new(5, &params(&[("alpha", "1")]), 1).expect("search config")
}

pub fn virasoro_entry() -> Poly {
    parse_poly("D + 2*L").expect("fixture polynomial")
}
