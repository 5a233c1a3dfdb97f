//! Acceptance gate: one PASS/FAIL line per criterion, exact residuals,
//! pinned wall-clock bounds. Exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use tpcsa_core::axioms::axiom_holds;
use tpcsa_core::catalog::{build, params, ENTRIES};
use tpcsa_core::classify::{search_compatible, SearchConfig, SearchReport};
use tpcsa_core::constructions::{
    commutator, derivation_star, h_modified_bracket, hom_map_from_element, tensor_prelie_poisson,
    tensor_tpcsa,
};
use tpcsa_core::parse::{parse_poly_with, ALL_VARS};
use tpcsa_core::scalar::rat;
use tpcsa_core::{
    check_axiom, check_compat_equivalence, check_derived_identities, check_suite, load_algebra,
    save_algebra, AlgebraDef, AxiomId, Element, GradedBasis, ModuleMap, Monomial, Parity, Poly,
    ProductTable, Structure, SuiteId, TableKind, VarId,
};

const CATALOG_BOUND: Duration = Duration::from_secs(5);
const SUFFICIENCY_BOUND: Duration = Duration::from_secs(10);
const DERIVED_BOUND: Duration = Duration::from_secs(60);
const TENSOR_BOUND: Duration = Duration::from_secs(60);
const SEARCH_BOUND: Duration = Duration::from_secs(120);
const SEARCH_CANDIDATES: u64 = 19_683;
const ROUND_TRIPS: usize = 1000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn def(name: &str, p: &[(&str, &str)]) -> Result<AlgebraDef, String> {
    build(name, &params(p)).map_err(|e| format!("{name}: {e}"))
}

fn suite_passes(d: &AlgebraDef, suite: SuiteId) -> Result<(), String> {
    let r = check_suite(&d.structure, suite, None).map_err(|e| e.to_string())?;
    ensure(r.pass(), format!("{} fails {suite}: {r}", d.provenance))
}

fn timed(bound: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    ensure(took < bound, format!("took {took:.2?}, bound {bound:?}"))?;
    Ok(format!("{detail}; {took:.2?} < {bound:?}"))
}

fn r4c1() -> Result<AlgebraDef, String> {
    def("r4_tpcsa", &[("beta", "2"), ("gamma", "0"), ("c", "1")])
}

fn r1phi1() -> Result<AlgebraDef, String> {
    def("r1_tpcsa", &[("p", "D"), ("phi", "1")])
}

fn trivial_ns() -> Result<AlgebraDef, String> {
    def("trivial_product", &[("on", "ns")])
}

fn vir_c1() -> Result<AlgebraDef, String> {
    def("vir", &[("c", "1")])
}

fn unit_circ() -> AlgebraDef {
    let basis = GradedBasis::new([("x", Parity::Even)]).expect("basis");
    let circ = ProductTable::from_entries(TableKind::Circ, 1, vec![(0, 0, Element::term(1, 0, Poly::from_i64(1)))])
        .expect("table");
    AlgebraDef::new(Structure::new(basis).with_table(circ).expect("structure"))
}

fn c1_catalog_soundness() -> Outcome {
    timed(CATALOG_BOUND, || {
        let cases: &[(&str, &[(&str, &str)])] = &[
            ("vir", &[]),
            ("ns", &[]),
            ("r1", &[("p", "D")]),
            ("r2", &[("q", "1")]),
            ("r2", &[("q", "L")]),
            ("r3", &[]),
            ("r4", &[("beta", "2"), ("gamma", "0")]),
            ("r4", &[("beta", "3"), ("gamma", "1")]),
            ("r5", &[("alpha", "1")]),
        ];
        for (name, p) in cases {
            suite_passes(&def(name, p)?, SuiteId::Lie)?;
        }
        Ok(format!("{} entries pass lie", cases.len()))
    })
}

fn c2_sufficiency() -> Outcome {
    timed(SUFFICIENCY_BOUND, || {
        let mut cases: Vec<(&str, Vec<(&str, &str)>)> = Vec::new();
        for phi in ["1", "s", "t"] {
            cases.push(("r1_tpcsa", vec![("p", "D"), ("phi", phi)]));
        }
        for c in ["0", "1", "2"] {
            cases.push(("r2_tpcsa", vec![("q", "1"), ("c", c)]));
        }
        for c in ["0", "1"] {
            cases.push(("r3_tpcsa", vec![("c", c)]));
            for gamma in ["0", "1"] {
                cases.push(("r4_tpcsa", vec![("beta", "2"), ("gamma", gamma), ("c", c)]));
            }
        }
        cases.push(("trivial_product", vec![("on", "r2"), ("q", "L")]));
        cases.push(("trivial_product", vec![("on", "r4"), ("beta", "3"), ("gamma", "0")]));
        cases.push(("trivial_product", vec![("on", "r5"), ("alpha", "1")]));
        for (name, p) in &cases {
            suite_passes(&def(name, p)?, SuiteId::Tpcsa)?;
        }
        Ok(format!("{} instances pass tpcsa", cases.len()))
    })
}

fn derived_pass(d: &AlgebraDef) -> Result<usize, String> {
    let r = check_derived_identities(&d.structure).map_err(|e| e.to_string())?;
    ensure(r.pass(), format!("{}: {r}", d.provenance))?;
    Ok(d.rank())
}

fn c3_derived_identities() -> Outcome {
    timed(DERIVED_BOUND, || {
        let a = r4c1()?;
        let b = r1phi1()?;
        let t = tensor_tpcsa(&a, &a).map_err(|e| e.to_string())?;
        let ranks = [derived_pass(&a)?, derived_pass(&b)?, derived_pass(&t)?];
        Ok(format!("7 identities vanish on ranks {ranks:?}"))
    })
}

fn c4_tensor() -> Outcome {
    timed(TENSOR_BOUND, || {
        let inputs = [r4c1()?, r1phi1()?, trivial_ns()?];
        let mut n = 0;
        for a in &inputs {
            for b in &inputs {
                let t = tensor_tpcsa(a, b).map_err(|e| e.to_string())?;
                suite_passes(&t, SuiteId::Tpcsa)?;
                n += 1;
            }
        }
        Ok(format!("{n} ordered tensor products pass tpcsa"))
    })
}

fn hom_lie(d: &AlgebraDef, h: &str) -> Result<(), String> {
    let h = d.element_named(h).ok_or("missing generator")?;
    let alpha = hom_map_from_element(d, &h).map_err(|e| e.to_string())?;
    let r = check_axiom(&d.structure, AxiomId::HomJacobi, Some(&alpha)).map_err(|e| e.to_string())?;
    ensure(r.pass(), format!("{}: {r}", d.provenance))
}

fn c5_hom_lie() -> Outcome {
    hom_lie(&r4c1()?, "x")?;
    hom_lie(&vir_c1()?, "L")?;
    Ok("hom_jacobi holds for α_x on r4 and α_L on vir".into())
}

fn c6_h_modification() -> Outcome {
    let d = r4c1()?;
    let h = d.element_named("x").ok_or("missing x")?;
    let out = h_modified_bracket(&d, &h).map_err(|e| e.to_string())?;
    ensure(out.table(TableKind::Circ) == d.table(TableKind::Circ), "circ changed")?;
    suite_passes(&out, SuiteId::Tpcsa)?;
    Ok("modified bracket with original circ passes tpcsa".into())
}

fn c7_pipeline() -> Outcome {
    let d = ModuleMap::diagonal(vec![Poly::var(VarId::D)]).map_err(|e| e.to_string())?;
    let np = derivation_star(&unit_circ(), &d).map_err(|e| e.to_string())?;
    suite_passes(&np, SuiteId::Novikov)?;
    suite_passes(&np, SuiteId::NovikovPoisson)?;
    let with_br = commutator(&np).map_err(|e| e.to_string())?;
    let vir = def("vir", &[])?;
    ensure(
        with_br.table(TableKind::Bracket) == vir.table(TableKind::Bracket),
        "commutator differs from the Virasoro bracket",
    )?;
    let mut s = with_br.structure.clone();
    s.remove_table(TableKind::Star);
    suite_passes(&AlgebraDef::new(s), SuiteId::Tpcsa)?;
    Ok("star = (D + L)x, commutator = Virasoro, tpcsa holds".into())
}

/// Star-bearing corpus: derivation-induced products, their tensor squares and
/// every rank-1 `(x∘x, x∗x)` pair with `x∘x = a + b∂`, `x∗x` of degree ≤ 2,
/// coefficients in {−1, 0, 1}.
fn star_corpus() -> Result<Vec<Structure>, String> {
    let mut out = Vec::new();
    let bases = [unit_circ(), r4c1()?, def("r3_tpcsa", &[("c", "1")])?];
    for b in &bases {
        let d = ModuleMap::diagonal(vec![Poly::var(VarId::D); b.rank()]).map_err(|e| e.to_string())?;
        let mut circ_only = b.structure.clone();
        circ_only.remove_table(TableKind::Bracket);
        let np = derivation_star(&AlgebraDef::new(circ_only), &d).map_err(|e| e.to_string())?;
        if np.rank() == 1 {
            out.push(tensor_prelie_poisson(&np, &np).map_err(|e| e.to_string())?.structure);
        }
        out.push(np.structure);
    }
    let grid = [-1i64, 0, 1];
    let mons: Vec<Monomial> = (0..=2u32)
        .flat_map(|t| (0..=t).rev().map(move |a| Monomial::from_exponents([a, t - a, 0, 0, 0])))
        .collect();
    let basis = GradedBasis::new([("x", Parity::Even)]).map_err(|e| e.to_string())?;
    for a in grid {
        for b in grid {
            let f = Poly::from_terms(vec![(Monomial::ONE, rat(a, 1)), (Monomial::var(VarId::D), rat(b, 1))]);
            for k in 0..3usize.pow(mons.len() as u32) {
                let mut idx = k;
                let terms = mons
                    .iter()
                    .map(|m| {
                        let c = grid[idx % 3];
                        idx /= 3;
                        (*m, rat(c, 1))
                    })
                    .collect();
                let tab = |kind, p| ProductTable::from_entries(kind, 1, vec![(0, 0, Element::term(1, 0, p))]);
                let s = Structure::new(basis.clone())
                    .with_table(tab(TableKind::Circ, f.clone()).map_err(|e| e.to_string())?)
                    .and_then(|s| s.with_table(tab(TableKind::Star, Poly::from_terms(terms))?))
                    .map_err(|e| e.to_string())?;
                out.push(s);
            }
        }
    }
    Ok(out)
}

fn c8_implications() -> Outcome {
    let corpus = star_corpus()?;
    let holds = |s: &Structure, suite| -> Result<bool, String> {
        tpcsa_core::axioms::suite_holds(s, suite, None).map_err(|e| e.to_string())
    };
    let (mut np, mut pc) = (0, 0);
    for s in &corpus {
        if holds(s, SuiteId::NovikovPoisson)? {
            np += 1;
            ensure(holds(s, SuiteId::PreliePoisson)?, "novikov_poisson without prelie_poisson")?;
        }
        if holds(s, SuiteId::PrelieCommutative)?
            && axiom_holds(s, AxiomId::NpCompatF7, None).map_err(|e| e.to_string())?
        {
            pc += 1;
            ensure(holds(s, SuiteId::PreliePoisson)?, "prelie_commutative + f7 without prelie_poisson")?;
        }
    }
    ensure(np > 0 && pc > 0, "implication premises never met")?;
    Ok(format!(
        "{} structures, {np} novikov_poisson, {pc} prelie_commutative+f7, 0 counterexamples",
        corpus.len()
    ))
}

fn c9_compat() -> Outcome {
    let v = |d: &AlgebraDef| check_compat_equivalence(&d.structure).map_err(|e| e.to_string());
    let t = v(&trivial_ns()?)?;
    ensure(t.consistent() && t.products_vanish, "trivial NS verdict")?;
    for d in [r4c1()?, vir_c1()?] {
        let r = v(&d)?;
        ensure(r.consistent(), format!("{}: inconsistent", d.provenance))?;
        ensure(!r.leibniz && !r.products_vanish, format!("{}: {}", d.provenance, r.report))?;
    }
    Ok("biconditional consistent on 3 structures".into())
}

fn single_worker_search(cfg: &SearchConfig) -> Result<(SearchReport, Duration), String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let r = pool.install(|| search_compatible(cfg)).map_err(|e| e.to_string())?;
    Ok((r, start.elapsed()))
}

fn c10_classification() -> Outcome {
    type Shape = (&'static str, &'static str, &'static str);
    type Case = (u8, Vec<(&'static str, &'static str)>, Vec<Shape>);
    let cases: Vec<Case> = vec![
        (5, vec![("alpha", "1")], vec![("0", "0", "0")]),
        (3, vec![], vec![("-1", "0", "0"), ("0", "0", "0"), ("1", "0", "0")]),
        (
            4,
            vec![("beta", "2"), ("gamma", "0")],
            vec![("-1", "-1", "0"), ("0", "0", "0"), ("1", "1", "0")],
        ),
        (4, vec![("beta", "0"), ("gamma", "0")], vec![("0", "0", "0")]),
        (2, vec![("q", "L")], vec![("0", "0", "0")]),
    ];
    let mut slowest = Duration::ZERO;
    for (t, lie, expected) in &cases {
        let cfg = SearchConfig::new(*t, &params(lie), 1).map_err(|e| e.to_string())?;
        let (r, took) = single_worker_search(&cfg)?;
        slowest = slowest.max(took);
        ensure(took < SEARCH_BOUND, format!("r{t} took {took:.2?}"))?;
        ensure(
            r.candidates <= SEARCH_CANDIDATES.into(),
            format!("r{t}: {} candidates", r.candidates),
        )?;
        let got: Vec<(String, String, String)> = r
            .solutions
            .iter()
            .map(|s| (s.f.to_string(), s.g.to_string(), s.h.to_string()))
            .collect();
        let want: Vec<(String, String, String)> = expected
            .iter()
            .map(|(f, g, h)| (f.to_string(), g.to_string(), h.to_string()))
            .collect();
        ensure(got == want, format!("r{t} {lie:?}: got {got:?}"))?;
        ensure(r.solutions.iter().all(|s| s.family_match), format!("r{t}: family mismatch"))?;
    }
    Ok(format!(
        "{} searches match, slowest {slowest:.2?} < {SEARCH_BOUND:?} single-worker",
        cases.len()
    ))
}

fn c11_half_derivation() -> Outcome {
    let mut corpus = vec![r4c1()?, r1phi1()?, trivial_ns()?, vir_c1()?];
    for (name, p) in [
        ("r1_tpcsa", vec![("p", "D"), ("phi", "s^2*t - 2*t^3 + 1/3")]),
        ("r2_tpcsa", vec![("q", "1"), ("c", "2")]),
        ("r3_tpcsa", vec![("c", "1")]),
        ("r4_tpcsa", vec![("beta", "2"), ("gamma", "1"), ("c", "1")]),
        ("trivial_product", vec![("on", "r5"), ("alpha", "1")]),
    ] {
        corpus.push(def(name, &p)?);
    }
    let a = r4c1()?;
    corpus.push(tensor_tpcsa(&a, &a).map_err(|e| e.to_string())?);
    let x = a.element_named("x").ok_or("missing x")?;
    corpus.push(h_modified_bracket(&a, &x).map_err(|e| e.to_string())?);
    let mut n = 0;
    for d in &corpus {
        if !check_suite(&d.structure, SuiteId::Tpcsa, None).map_err(|e| e.to_string())?.pass() {
            continue;
        }
        let r = check_axiom(&d.structure, AxiomId::HalfDerivation, None).map_err(|e| e.to_string())?;
        ensure(r.pass(), format!("{}: {r}", d.provenance))?;
        n += 1;
    }
    ensure(n == corpus.len(), "corpus member fails tpcsa")?;
    Ok(format!("left multiplications are ½-derivations on {n} TPCSAs"))
}

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn c12_round_trip() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let coeff = (-9i64..=9, 1i64..=6).prop_map(|(n, d)| rat(n, d));
    let term = (proptest::collection::vec(0u32..=4, 5), coeff);
    let strat = proptest::collection::vec(term, 0..=6);
    for i in 0..ROUND_TRIPS {
        let terms = strat
            .new_tree(&mut runner)
            .map_err(|e| e.to_string())?
            .current()
            .into_iter()
            .map(|(e, c)| (Monomial::from_exponents([e[0], e[1], e[2], e[3], e[4]]), c))
            .collect();
        let p = Poly::from_terms(terms);
        let text = p.to_string();
        let back = parse_poly_with(&text, ALL_VARS).map_err(|e| format!("case {i} `{text}`: {e}"))?;
        ensure(back == p && back.to_string() == text, format!("case {i}: `{text}`"))?;
    }
    let mut files = 0;
    for e in ENTRIES {
        let d = def(e.name, &[])?;
        let text = save_algebra(&d);
        let again = load_algebra(text.as_bytes()).map_err(|e| e.to_string())?;
        ensure(again == d && save_algebra(&again) == text, format!("catalog {} re-serializes differently", e.name))?;
        files += 1;
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(data_dir())
        .map_err(|e| format!("data directory: {e}"))?
        .filter_map(|r| r.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    ensure(!paths.is_empty(), "no canonical data files")?;
    for p in &paths {
        let bytes = std::fs::read(p).map_err(|e| e.to_string())?;
        let d = load_algebra(&bytes).map_err(|e| format!("{}: {e}", p.display()))?;
        ensure(
            save_algebra(&d).as_bytes() == bytes.as_slice(),
            format!("{} is not byte-identical after re-serialization", p.display()),
        )?;
        files += 1;
    }
    Ok(format!("{ROUND_TRIPS} random polys and {files} files round-trip"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("catalog soundness", c1_catalog_soundness),
        ("classified families are sufficient", c2_sufficiency),
        ("seven derived identities", c3_derived_identities),
        ("tensor products of TPCSAs", c4_tensor),
        ("hom-Lie structure from h", c5_hom_lie),
        ("h-modified bracket", c6_h_modification),
        ("derivation, Novikov-Poisson, commutator pipeline", c7_pipeline),
        ("implications between pre-Lie suites", c8_implications),
        ("PCSA and TPCSA compatibility", c9_compat),
        ("rank (1+1) classification search", c10_classification),
        ("½-derivation remark", c11_half_derivation),
        ("parser and file round trip", c12_round_trip),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
