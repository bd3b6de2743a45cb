use jnalg::catalog::{fixture, Model};
use jnalg::random;
use jnalg::{AForm, Algebroid, Expr, Multivector, Sampling, VarSpace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FIXTURES: [&str; 7] = ["abelian2", "tangent(2)", "tangent(3)", "tmr_of_jacobi", "tmr_dual", "contact_r3", "e2_line"];

fn model(name: &str) -> Model {
    Model::from_doc(&fixture(name).unwrap()).unwrap()
}

fn max_abs(exprs: &[Expr], pts: &[Vec<f64>]) -> f64 {
    pts.iter()
        .flat_map(|p| exprs.iter().map(move |e| e.eval_slice(p).unwrap().abs()))
        .fold(0.0, f64::max)
}

fn plane() -> Algebroid {
    Algebroid::tangent(VarSpace::new(&["x", "y"]).unwrap())
}

// su(2) over a line: [e1,e2] = x e3 and cyclic, zero anchor
fn twisted_su2() -> Algebroid {
    let v = VarSpace::new(&["x"]).unwrap();
    let x = v.coord(0);
    Algebroid::antisymmetric(v, 3, vec![vec![Expr::zero()]; 3], move |k, i, j| match (k, i, j) {
        (2, 0, 1) | (0, 1, 2) => x.clone(),
        (1, 0, 2) => -x.clone(),
        _ => Expr::zero(),
    })
    .unwrap()
}

#[test]
fn abelian_fixture_validates_exactly() {
    let m = model("abelian2");
    for r in m.jacobi.algebroid().validate(&Sampling::default()) {
        assert!(r.pass && r.residual == 0.0, "{}", r.check);
    }
}

#[test]
fn every_fixture_validates() {
    let s = Sampling::default();
    for name in FIXTURES {
        for r in model(name).jacobi.algebroid().validate(&s) {
            assert!(r.pass, "{name}: {} {}", r.check, r.residual);
        }
    }
}

#[test]
fn non_antisymmetric_structure_is_named() {
    let v = VarSpace::new(&["x"]).unwrap();
    let a = Algebroid::new(v, 2, vec![vec![Expr::zero()]; 2], |k, i, j| {
        if k == 0 && i != j { Expr::one() } else { Expr::zero() }
    })
    .unwrap();
    let rs = a.validate(&Sampling::default());
    let bad: Vec<_> = rs.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect();
    assert_eq!(bad, ["structure antisymmetry"]);
}

#[test]
fn structure_with_zero_anchor_must_be_a_lie_algebra() {
    let rs = twisted_su2().validate(&Sampling::default());
    assert!(rs.iter().all(|r| r.pass));
}

#[test]
fn differential_of_coframe_on_abelian_vanishes() {
    let a = model("abelian2").jacobi.algebroid().clone();
    for k in 0..2 {
        assert!(a.differential(&a.coframe(k)).unwrap().is_structurally_zero());
    }
}

#[test]
fn differential_squares_to_zero_on_functions() {
    let s = Sampling::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in FIXTURES {
        let a = model(name).jacobi.algebroid().clone();
        let pts = s.points_for(a.vars());
        for _ in 0..10 {
            let f = random::function(a.vars(), a.base_dim(), &mut rng);
            let dd = a.differential(&a.differential(&AForm::scalar(a.rank(), f)).unwrap()).unwrap();
            assert!(max_abs(dd.coeffs(), &pts) < 1e-10, "{name}");
        }
    }
}

#[test]
fn schouten_on_abelian_bivector_vanishes() {
    let m = model("abelian2");
    let p = m.p.unwrap();
    assert!(m.jacobi.algebroid().schouten(&p, &p).unwrap().simplified().is_structurally_zero());
}

#[test]
fn lie_derivative_of_constant_form_on_abelian_vanishes() {
    let a = model("abelian2").jacobi.algebroid().clone();
    let x = a.vars().coord(0);
    let w = AForm::from_coeffs(2, 1, vec![Expr::num(2.0), Expr::num(-1.0)]).unwrap();
    let v = Multivector::from_components(vec![x.clone(), x.sin()]);
    assert!(a.lie_derivative(&v, &w).unwrap().simplified().is_structurally_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tangent_bracket_is_the_commutator(seed in any::<u64>()) {
        let a = plane();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Multivector = random::antisym(2, 1, a.vars(), 2, 1.0, &mut rng);
        let y: Multivector = random::antisym(2, 1, a.vars(), 2, 1.0, &mut rng);
        let b = a.schouten(&x, &y).unwrap();
        let pts = Sampling::default().points_for(a.vars());
        for mu in 0..2 {
            let mut c = Expr::zero();
            for nu in 0..2 {
                c = c + &x.coeffs()[nu] * y.coeffs()[mu].diff(nu) - &y.coeffs()[nu] * x.coeffs()[mu].diff(nu);
            }
            prop_assert!(max_abs(&[&b.coeffs()[mu] - &c], &pts) < 1e-10);
        }
    }

    #[test]
    fn tangent_differential_of_one_forms(seed in any::<u64>()) {
        let a = plane();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: AForm = random::antisym(2, 1, a.vars(), 2, 1.0, &mut rng);
        let d = a.differential(&w).unwrap();
        let expect = w.coeffs()[1].diff(0) - w.coeffs()[0].diff(1);
        let pts = Sampling::default().points_for(a.vars());
        prop_assert!(max_abs(&[&d.coeffs()[0] - &expect], &pts) < 1e-10);
    }

    #[test]
    fn tangent_lie_derivative_of_one_forms(seed in any::<u64>()) {
        // (L_X w)_mu = X^nu d_nu w_mu + w_nu d_mu X^nu
        let a = plane();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Multivector = random::antisym(2, 1, a.vars(), 2, 1.0, &mut rng);
        let w: AForm = random::antisym(2, 1, a.vars(), 2, 1.0, &mut rng);
        let l = a.lie_derivative(&x, &w).unwrap();
        let pts = Sampling::default().points_for(a.vars());
        for mu in 0..2 {
            let mut c = Expr::zero();
            for nu in 0..2 {
                c = c + &x.coeffs()[nu] * w.coeffs()[mu].diff(nu) + &w.coeffs()[nu] * x.coeffs()[nu].diff(mu);
            }
            prop_assert!(max_abs(&[&l.coeffs()[mu] - &c], &pts) < 1e-10);
        }
    }

    #[test]
    fn lie_derivative_commutes_with_d(seed in any::<u64>(), p in 0usize..2) {
        let a = twisted_su2();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Multivector = random::antisym(3, 1, a.vars(), 1, 1.0, &mut rng);
        let w: AForm = random::antisym(3, p, a.vars(), 1, 1.0, &mut rng);
        let l = a.differential(&a.lie_derivative(&x, &w).unwrap()).unwrap();
        let r = a.lie_derivative(&x, &a.differential(&w).unwrap()).unwrap();
        let pts = Sampling::default().points_for(a.vars());
        prop_assert!(max_abs(l.sub(&r).unwrap().coeffs(), &pts) < 1e-9);
    }
}
