use tpcsa_core::catalog::params;
use tpcsa_core::classify::{match_family, search_compatible, verify_sufficiency, Family, SearchConfig};
use tpcsa_core::scalar::int;
use tpcsa_core::{parse_poly, AffineExpr, Error, Poly, VarId};

fn cfg(rtype: u8, lie: &[(&str, &str)], d: u32) -> SearchConfig {
    SearchConfig::new(rtype, &params(lie), d).unwrap()
}

fn shapes(r: &tpcsa_core::classify::SearchReport) -> Vec<(String, String, String)> {
    r.solutions
        .iter()
        .map(|s| (s.f.to_string(), s.g.to_string(), s.h.to_string()))
        .collect()
}

fn triple(f: &str, g: &str, h: &str) -> (String, String, String) {
    (f.into(), g.into(), h.into())
}

#[test]
fn r5_only_trivial() {
    let r = search_compatible(&cfg(5, &[("alpha", "1")], 1)).unwrap();
    assert_eq!(r.candidates.to_string(), "19683");
    assert_eq!(shapes(&r), [triple("0", "0", "0")]);
}

#[test]
fn r3_constant_f() {
    let r = search_compatible(&cfg(3, &[], 1)).unwrap();
    assert_eq!(
        shapes(&r),
        [triple("-1", "0", "0"), triple("0", "0", "0"), triple("1", "0", "0")]
    );
    assert!(r.solutions.iter().all(|s| s.family_match));
    assert!(r.findings.is_empty());
}

#[test]
fn r4_beta_two_and_beta_zero() {
    let r = search_compatible(&cfg(4, &[("beta", "2"), ("gamma", "0")], 1)).unwrap();
    assert_eq!(
        shapes(&r),
        [triple("-1", "-1", "0"), triple("0", "0", "0"), triple("1", "1", "0")]
    );
    let r = search_compatible(&cfg(4, &[("beta", "0"), ("gamma", "0")], 1)).unwrap();
    assert_eq!(shapes(&r), [triple("0", "0", "0")]);
}

#[test]
fn r2_nonconstant_q_is_rigid() {
    let r = search_compatible(&cfg(2, &[("q", "L")], 1)).unwrap();
    assert_eq!(shapes(&r), [triple("0", "0", "0")]);
}

#[test]
fn prime_prefilter_agrees() {
    let base = cfg(4, &[("beta", "2"), ("gamma", "1")], 1);
    let exact = search_compatible(&base).unwrap();
    let fast = search_compatible(&base.clone().with_prime(Some(5))).unwrap();
    assert_eq!(exact.solutions, fast.solutions);
}

fn assert_r1_shape(r: &tpcsa_core::classify::SearchReport) {
    let flip = AffineExpr::combo(&[(-1, VarId::D), (-1, VarId::LAMBDA)]);
    for s in &r.solutions {
        assert!(s.f.is_zero() && s.g.is_zero(), "{s:?}");
        assert_eq!(s.h.subst(VarId::LAMBDA, &flip), s.h.neg());
        assert!(s.family_match);
    }
}

#[test]
fn r1_solutions_are_odd_in_virasoro_variable() {
    // h = (∂+2λ)Φ needs a λ-coefficient twice a ∂-coefficient, so {−1,0,1}
    // admits only h = 0 while {−2,…,2} admits h = ±(∂+2λ).
    let r = search_compatible(&cfg(1, &[("p", "D")], 2).with_ceiling(400_000_000)).unwrap();
    assert_r1_shape(&r);
    assert_eq!(r.solutions.len(), 1);
    let wide = cfg(1, &[("p", "D")], 1).with_grid((-2..=2).map(int).collect());
    let r = search_compatible(&wide).unwrap();
    assert_r1_shape(&r);
    assert_eq!(
        shapes(&r),
        [triple("0", "0", "-D - 2*L"), triple("0", "0", "0"), triple("0", "0", "D + 2*L")]
    );
}

#[test]
fn ceiling_refuses_with_count() {
    match search_compatible(&cfg(5, &[("alpha", "1")], 2)) {
        Err(Error::CeilingExceeded { count, ceiling }) => {
            assert_eq!(count, "387420489");
            assert_eq!(ceiling, 10_000_000);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn family_matching() {
    let lie = tpcsa_core::catalog::rtype_params(4, &params(&[("beta", "2"), ("gamma", "0")])).unwrap();
    let one = Poly::from_i64(1);
    assert!(match_family(&one, &one, &Poly::zero(), 4, &lie).unwrap());
    assert!(!match_family(&one, &Poly::zero(), &Poly::zero(), 4, &lie).unwrap());
    for t in 1..=5u8 {
        let lie = tpcsa_core::catalog::rtype_params(t, &params(&[])).unwrap();
        assert!(match_family(&Poly::zero(), &Poly::zero(), &Poly::zero(), t, &lie).unwrap());
    }
    let r1 = tpcsa_core::catalog::rtype_params(1, &params(&[])).unwrap();
    let h = parse_poly("D^3 + 6*D^2*L + 12*D*L^2 + 8*L^3 + D + 2*L").unwrap();
    assert!(match_family(&Poly::zero(), &Poly::zero(), &h, 1, &r1).unwrap());
    assert!(!match_family(&Poly::zero(), &Poly::zero(), &parse_poly("D").unwrap(), 1, &r1).unwrap());
}

#[test]
fn sufficiency_reports() {
    let ok = |t, lie: &[(&str, &str)], fam| verify_sufficiency(t, &params(lie), &fam).unwrap().pass();
    assert!(ok(3, &[], Family::Constant(int(1))));
    assert!(ok(4, &[("beta", "2"), ("gamma", "1")], Family::Constant(int(2))));
    assert!(ok(5, &[("alpha", "1")], Family::Trivial));
    assert!(ok(1, &[("p", "D")], Family::Phi(parse_poly("D*L").unwrap())));
    assert!(matches!(
        verify_sufficiency(5, &params(&[("alpha", "1")]), &Family::Constant(int(1))),
        Err(Error::Param(_))
    ));
}
