use jnalg::catalog::{fixture, Model};
use jnalg::random;
use jnalg::{extend, Expr, Multivector, Sampling};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model(name: &str) -> Model {
    Model::from_doc(&fixture(name).unwrap()).unwrap()
}

#[test]
fn extension_anchor_adds_phi0_along_t() {
    let e = extend(&model("abelian2").jacobi).unwrap();
    let rows = e.hat().anchor();
    assert_eq!(e.hat().base_dim(), 2);
    assert!(rows[0][0].is_zero() && rows[1][0].is_zero() && rows[1][1].is_zero());
    assert_eq!(rows[0][1].eval_slice(&[0.3, 0.0]).unwrap(), 1.0);
}

#[test]
fn extension_is_a_lie_algebroid_and_phi0_is_exact() {
    let s = Sampling::default();
    for name in ["abelian2", "tmr_of_jacobi", "tmr_dual", "contact_r3", "e2_line"] {
        let e = extend(&model(name).jacobi).unwrap();
        assert!(e.hat().validate(&s).iter().all(|r| r.pass), "{name}");
        assert!(e.check_exact_phi(&s).unwrap().pass, "{name}");
    }
}

#[test]
fn coordinate_t_is_reserved() {
    let mut doc = fixture("tangent(2)").unwrap();
    doc.n = None;
    doc.p = None;
    doc.eta = None;
    doc.nu = None;
    doc.mu = None;
    doc.coords = vec!["t".into(), "y".into()];
    let err = Model::from_doc(&doc).unwrap_err().to_string();
    assert!(err.contains("coords") && err.contains("last"), "{err}");
    doc.coords = vec!["y".into(), "t".into()];
    let m = Model::from_doc(&doc).unwrap();
    assert!(extend(&m.jacobi).is_err());
}

#[test]
fn poissonized_bivectors_are_poisson() {
    let s = Sampling::default();
    for name in ["abelian2", "tangent(2)", "tmr_of_jacobi", "contact_r3", "e2_line"] {
        let m = model(name);
        let e = extend(&m.jacobi).unwrap();
        assert!(e.check_poisson(m.p.as_ref().unwrap(), &s).unwrap().pass, "{name}");
    }
}

#[test]
fn non_jacobi_bivector_does_not_poissonize() {
    let mut doc = fixture("contact_r3").unwrap();
    doc.p.as_mut().unwrap().insert("1,3".into(), "x".into());
    let m = Model::from_doc(&doc).unwrap();
    let e = extend(&m.jacobi).unwrap();
    assert!(!e.check_poisson(m.p.as_ref().unwrap(), &Sampling::default()).unwrap().pass);
}

#[test]
fn gauge_weights_follow_the_degree() {
    let e = extend(&model("abelian2").jacobi).unwrap();
    let one = Multivector::scalar(2, Expr::one());
    // degree 0 picks up e^t, degree 1 is untouched
    let g = e.gauge_mv(&one);
    assert!((g.coeffs()[0].eval_slice(&[0.0, 1.0]).unwrap() - 1f64.exp()).abs() < 1e-12);
    let x = Multivector::from_components(vec![Expr::one(), Expr::zero()]);
    assert_eq!(e.gauge_mv(&x), x);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gauging_intertwines_brackets(seed in any::<u64>(), p in 0usize..3, q in 0usize..3) {
        prop_assume!(p + q > 0);
        let m = model("tmr_of_jacobi");
        let e = extend(&m.jacobi).unwrap();
        let vars = m.jacobi.algebroid().vars();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Multivector = random::antisym(3, p, vars, 2, 0.8, &mut rng);
        let y: Multivector = random::antisym(3, q, vars, 2, 0.8, &mut rng);
        let r = e.check_gauging_bracket(&x, &y, &Sampling::default()).unwrap();
        prop_assert!(r.pass, "residual {}", r.residual);
    }
}

