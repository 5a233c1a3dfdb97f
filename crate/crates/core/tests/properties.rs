use proptest::prelude::*;
use tpcsa_core::axioms::axiom_holds;
use tpcsa_core::catalog::{build, params, rank2_structure, rtype_bracket, rtype_params};
use tpcsa_core::conformal::factorial;
use tpcsa_core::constructions::{derivation_star, h_modified_bracket, hom_map_from_element, tensor_tpcsa};
use tpcsa_core::parse::{parse_poly_with, ALL_VARS};
use tpcsa_core::scalar::{int, rat};
use tpcsa_core::{
    check_derived_identities, check_suite, AffineExpr, AlgebraDef, AxiomId, Element, ModuleMap,
    Monomial, Poly, Scalar, Structure, SuiteId, TableKind, VarId,
};

fn coeff() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn poly_in(vars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, vars), coeff()), 0..=max_terms).prop_map(
        move |terms| {
            let terms = terms
                .into_iter()
                .map(|(e, c)| {
                    let mut exps = [0u32; 5];
                    exps[..e.len()].copy_from_slice(&e);
                    (Monomial::from_exponents(exps), c)
                })
                .collect();
            Poly::from_terms(terms)
        },
    )
}

fn any_poly() -> impl Strategy<Value = Poly> {
    poly_in(5, 3, 5)
}

fn d_poly() -> impl Strategy<Value = Poly> {
    poly_in(1, 2, 3)
}

fn small_int() -> impl Strategy<Value = i64> {
    -2i64..=2
}

fn flip() -> AffineExpr<Scalar> {
    AffineExpr::combo(&[(-1, VarId::D), (-1, VarId::LAMBDA)])
}

/// Commutative rank-(1+1) structure on type `rtype` with
/// `f = a + b∂`, `g` arbitrary affine, `h = k(∂ + 2λ)`.
fn rank2(rtype: u8, a: i64, b: i64, g: (i64, i64, i64), k: i64) -> Structure {
    let lie = rtype_params(rtype, &params(&[])).unwrap();
    let f = Poly::from_i64(a).add(&Poly::var(VarId::D).scale(&int(b)));
    let g = Poly::from_i64(g.0)
        .add(&Poly::var(VarId::D).scale(&int(g.1)))
        .add(&Poly::var(VarId::LAMBDA).scale(&int(g.2)));
    let h = Poly::var(VarId::D)
        .add(&Poly::var(VarId::LAMBDA).scale(&int(2)))
        .scale(&int(k));
    rank2_structure(rtype_bracket(rtype, &lie).unwrap(), f, g, h)
}

fn rank2_args() -> impl Strategy<Value = (u8, i64, i64, (i64, i64, i64), i64)> {
    (1u8..=5, small_int(), small_int(), (small_int(), small_int(), small_int()), small_int())
}

fn corpus() -> Vec<AlgebraDef> {
    let mut out = Vec::new();
    for (name, p) in [
        ("vir", vec![("c", "1")]),
        ("ns", vec![]),
        ("r4_tpcsa", vec![("beta", "2"), ("gamma", "0"), ("c", "1")]),
        ("r1_tpcsa", vec![("p", "D"), ("phi", "1")]),
        ("r3_tpcsa", vec![("c", "1")]),
        ("trivial_product", vec![("on", "ns")]),
    ] {
        out.push(build(name, &params(&p)).unwrap());
    }
    out
}

fn random_element(rank: usize, coeffs: &[Poly]) -> Element {
    Element::from_terms(rank, coeffs.iter().take(rank).cloned().enumerate())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn display_parse_round_trip(p in any_poly()) {
        let text = p.to_string();
        let back = parse_poly_with(&text, ALL_VARS).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_string(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws(a in any_poly(), b in any_poly(), c in any_poly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&Poly::one()), a.clone());
        prop_assert!(a.mul(&Poly::zero()).is_zero());
    }

    #[test]
    fn skew_flip_is_an_involution(p in any_poly()) {
        prop_assert_eq!(p.subst(VarId::LAMBDA, &flip()).subst(VarId::LAMBDA, &flip()), p);
    }

    #[test]
    fn coefficient_extraction_reconstructs(p in any_poly(), v in 0usize..5) {
        let v = VarId::ALL[v];
        let mut sum = Poly::zero();
        for n in 0..=p.degree_in(v).unwrap_or(0) {
            sum = sum.add(&p.coeff_extract(v, n).mul(&Poly::var(v).pow(n)));
        }
        prop_assert_eq!(sum, p);
    }

    #[test]
    fn substitution_is_a_ring_map(a in any_poly(), b in any_poly(), k in small_int()) {
        let e = AffineExpr::combo(&[(k, VarId::D), (1, VarId::MU)]);
        let s = |p: &Poly| p.subst(VarId::LAMBDA, &e);
        prop_assert_eq!(s(&a.mul(&b)), s(&a).mul(&s(&b)));
        prop_assert_eq!(s(&a.add(&b)), s(&a).add(&s(&b)));
        prop_assert_eq!(s(&a), a.compose(VarId::LAMBDA, &e.to_poly()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sesquilinearity(which in 0usize..6, kind in 0usize..2, cs in prop::collection::vec(d_poly(), 4)) {
        let def = &corpus()[which];
        let kind = [TableKind::Circ, TableKind::Bracket][kind];
        let Some(t) = def.table(kind) else { return Ok(()); };
        let n = def.rank();
        let a = random_element(n, &cs);
        let b = random_element(n, &cs[1..]);
        let d = Poly::var(VarId::D);
        let lam = Poly::var(VarId::LAMBDA);
        let ab = t.apply(&a, &b, VarId::LAMBDA).unwrap();
        prop_assert_eq!(t.apply(&a.scale(&d), &b, VarId::LAMBDA).unwrap(), ab.scale(&lam.neg()));
        prop_assert_eq!(t.apply(&a, &b.scale(&d), VarId::LAMBDA).unwrap(), ab.scale(&d.add(&lam)));
    }

    #[test]
    fn nth_products_reconstruct(which in 0usize..6, cs in prop::collection::vec(d_poly(), 4)) {
        let def = &corpus()[which];
        let n = def.rank();
        let a = random_element(n, &cs);
        let b = random_element(n, &cs[1..]);
        for t in def.structure.tables() {
            let full = t.apply(&a, &b, VarId::LAMBDA).unwrap();
            let mut sum = Element::zero(n);
            for k in 0..=full.terms().map(|(_, p)| p.degree_in(VarId::LAMBDA).unwrap_or(0)).max().unwrap_or(0) {
                let w = Poly::var(VarId::LAMBDA).pow(k).scale(&(int(1) / factorial(k)));
                sum = sum.add(&t.nth_product(&a, &b, k).unwrap().scale(&w));
            }
            prop_assert_eq!(sum, full);
        }
    }

    #[test]
    fn paired_forms_agree((t, a, b, g, k) in rank2_args()) {
        let s = rank2(t, a, b, g, k);
        prop_assert_eq!(
            axiom_holds(&s, AxiomId::Leibniz, None).unwrap(),
            axiom_holds(&s, AxiomId::LeibnizRight, None).unwrap()
        );
        prop_assert_eq!(
            axiom_holds(&s, AxiomId::TransposedLeibniz, None).unwrap(),
            axiom_holds(&s, AxiomId::TransposedLeibnizRight, None).unwrap()
        );
    }

    #[test]
    fn remarks_follow_from_base_suites((t, a, b, g, k) in rank2_args()) {
        let s = rank2(t, a, b, g, k);
        if axiom_holds(&s, AxiomId::Associative, None).unwrap() {
            prop_assert!(axiom_holds(&s, AxiomId::AssocConjugates, None).unwrap());
        }
        if check_suite(&s, SuiteId::CommAssoc, None).unwrap().pass() {
            prop_assert!(axiom_holds(&s, AxiomId::CommExchange, None).unwrap());
        }
        if check_suite(&s, SuiteId::Tpcsa, None).unwrap().pass() {
            prop_assert!(check_derived_identities(&s).unwrap().pass());
            prop_assert!(axiom_holds(&s, AxiomId::HalfDerivation, None).unwrap());
        }
    }

    #[test]
    fn transposed_leibniz_in_nth_form((t, a, b, g, k) in rank2_args()) {
        let s = rank2(t, a, b, g, k);
        if !check_suite(&s, SuiteId::Tpcsa, None).unwrap().pass() {
            return Ok(());
        }
        let circ = s.require(TableKind::Circ).unwrap();
        let br = s.require(TableKind::Bracket).unwrap();
        let gens: Vec<Element> = (0..2).map(|i| s.generator(i)).collect();
        for (ia, x) in gens.iter().enumerate() {
            for y in &gens {
                for z in &gens {
                    for n in 0..3u32 {
                        for m in 0..3u32 {
                            let lhs = circ.nth_product(x, &br.nth_product(y, z, m).unwrap(), n).unwrap().scale_i64(2);
                            let mut rhs = Element::zero(2);
                            for j in 0..=n {
                                let binom = factorial(n) / (factorial(j) * factorial(n - j));
                                let xy = circ.nth_product(x, y, j).unwrap();
                                rhs = rhs.add(&br.nth_product(&xy, z, n + m - j).unwrap().scale(&Poly::constant(binom)));
                            }
                            let iy = gens.iter().position(|e| e == y).unwrap();
                            let sg = tpcsa_core::gmodule::sign(s.basis().parity(ia), s.basis().parity(iy));
                            let tail = br.nth_product(y, &circ.nth_product(x, z, n).unwrap(), m).unwrap();
                            rhs = rhs.add(&tail.scale_i64(sg));
                            prop_assert_eq!(lhs, rhs, "n={} m={}", n, m);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn implications_between_suites(f in (small_int(), small_int()), p in poly_in(2, 2, 3)) {
        // rank 1: x∘x = (a + b∂)x, x∗x = p(∂,λ)x
        let basis = tpcsa_core::GradedBasis::new([("x", tpcsa_core::Parity::Even)]).unwrap();
        let fx = Poly::from_i64(f.0).add(&Poly::var(VarId::D).scale(&int(f.1)));
        let circ = tpcsa_core::ProductTable::from_entries(TableKind::Circ, 1, vec![(0, 0, Element::term(1, 0, fx))]).unwrap();
        let star = tpcsa_core::ProductTable::from_entries(TableKind::Star, 1, vec![(0, 0, Element::term(1, 0, p))]).unwrap();
        let s = Structure::new(basis).with_table(circ).unwrap().with_table(star).unwrap();
        if check_suite(&s, SuiteId::NovikovPoisson, None).unwrap().pass() {
            prop_assert!(check_suite(&s, SuiteId::PreliePoisson, None).unwrap().pass());
            prop_assert!(axiom_holds(&s, AxiomId::NpConjugates, None).unwrap());
        }
        if check_suite(&s, SuiteId::PrelieCommutative, None).unwrap().pass()
            && axiom_holds(&s, AxiomId::NpCompatF7, None).unwrap()
        {
            prop_assert!(check_suite(&s, SuiteId::PreliePoisson, None).unwrap().pass());
        }
    }

    #[test]
    fn derivation_pipeline_invariants(c in small_int(), k in small_int()) {
        let basis = tpcsa_core::GradedBasis::new([("x", tpcsa_core::Parity::Even)]).unwrap();
        let circ = tpcsa_core::ProductTable::from_entries(
            TableKind::Circ, 1, vec![(0, 0, Element::term(1, 0, Poly::from_i64(c)))]).unwrap();
        let def = AlgebraDef::new(Structure::new(basis).with_table(circ).unwrap());
        let d = ModuleMap::diagonal(vec![Poly::var(VarId::D).scale(&int(k))]).unwrap();
        let np = derivation_star(&def, &d).unwrap();
        prop_assert!(check_suite(&np.structure, SuiteId::PreliePoisson, None).unwrap().pass());
        let with_br = tpcsa_core::constructions::commutator(&np).unwrap();
        let mut tp = with_br.structure.clone();
        tp.remove_table(TableKind::Star);
        prop_assert!(check_suite(&tp, SuiteId::Tpcsa, None).unwrap().pass());
    }

    #[test]
    fn h_modification_invariants(c in small_int(), h0 in small_int(), h1 in small_int()) {
        let def = build("r4_tpcsa", &params(&[("beta", "2"), ("gamma", "1"), ("c", &c.to_string())])).unwrap();
        let hp = Poly::from_i64(h0).add(&Poly::var(VarId::D).scale(&int(h1)));
        let h = Element::term(2, 0, hp);
        let out = h_modified_bracket(&def, &h).unwrap();
        prop_assert!(check_suite(&out.structure, SuiteId::Tpcsa, None).unwrap().pass());
        let alpha = hom_map_from_element(&def, &h).unwrap();
        let rep = tpcsa_core::check_axiom(&def.structure, AxiomId::HomJacobi, Some(&alpha)).unwrap();
        prop_assert!(rep.pass(), "{}", rep);
    }
}

#[test]
fn tensor_parities_are_sums() {
    let defs = corpus();
    let tp: Vec<&AlgebraDef> = defs
        .iter()
        .filter(|d| d.table(TableKind::Circ).is_some() && check_suite(&d.structure, SuiteId::Tpcsa, None).unwrap().pass())
        .collect();
    for a in &tp {
        for b in &tp {
            if a.rank() * b.rank() > 4 {
                continue;
            }
            let t = tensor_tpcsa(a, b).unwrap();
            for i in 0..a.rank() {
                for j in 0..b.rank() {
                    let k = i * b.rank() + j;
                    assert_eq!(t.basis().parity(k), a.basis().parity(i) + b.basis().parity(j));
                }
            }
        }
    }
}
