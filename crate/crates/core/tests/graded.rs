use jnalg::graded::{contract_form, contract_mv, evaluate, pairing, sharp};
use jnalg::random;
use jnalg::{AForm, Expr, Multivector, VarSpace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vars() -> VarSpace {
    VarSpace::new(&["x", "y"]).unwrap()
}

fn pts() -> Vec<Vec<f64>> {
    vec![vec![0.3, -0.7], vec![-0.9, 0.2], vec![0.5, 0.5]]
}

fn assert_same<K: jnalg::graded::Side>(a: &jnalg::graded::Antisym<K>, b: &jnalg::graded::Antisym<K>) {
    assert_eq!(a.degree(), b.degree());
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        for p in pts() {
            let d = (x - y).eval_slice(&p).unwrap();
            assert!(d.abs() < 1e-10, "{x} vs {y} differ by {d}");
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn wedge_expands_bilinearly() {
    let v = vars();
    let (x, y) = (v.coord(0), v.coord(1));
    let a = Multivector::basis(3, &[0], x.clone()).unwrap();
    let b = Multivector::basis(3, &[1], y.clone()).unwrap().add(&Multivector::basis(3, &[2], Expr::one()).unwrap()).unwrap();
    let w = a.wedge(&b).unwrap();
    assert_eq!(w.get(&[0, 1]).eval_slice(&[2.0, 3.0]).unwrap(), 6.0);
    assert_eq!(w.get(&[0, 2]).eval_slice(&[2.0, 3.0]).unwrap(), 2.0);
    assert!(w.get(&[1, 2]).is_zero());
}

#[test]
fn basis_sorts_with_sign() {
    let w = AForm::basis(3, &[2, 0], Expr::one()).unwrap();
    assert_eq!(w.get(&[0, 2]).as_num(), Some(-1.0));
    assert_eq!(w.component(&[2, 0]).as_num(), Some(1.0));
    assert!(AForm::basis(3, &[1, 1], Expr::one()).unwrap().is_structurally_zero());
}

#[test]
fn full_contraction_applies_innermost_first() {
    let e12 = Multivector::basis(2, &[0, 1], Expr::one()).unwrap();
    let eps12 = AForm::basis(2, &[0, 1], Expr::one()).unwrap();
    let c = contract_mv(&e12, &eps12).unwrap();
    assert_eq!(c.value().unwrap().as_num(), Some(-1.0));
    assert_eq!(pairing(&eps12, &e12).unwrap().as_num(), Some(1.0));
}

#[test]
fn sharp_recovers_the_bivector() {
    let v = vars();
    let p = Multivector::basis(3, &[0, 2], v.coord(0)).unwrap();
    let a = AForm::basis(3, &[0], Expr::one()).unwrap();
    let b = AForm::basis(3, &[2], Expr::one()).unwrap();
    let lhs = pairing(&b, &sharp(&p, &a).unwrap()).unwrap();
    let rhs = evaluate(&p, &[a, b]).unwrap();
    assert_eq!((lhs - rhs).eval_slice(&[0.4, 0.0]).unwrap(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), p in 0usize..4, q in 0usize..4) {
        let v = vars();
        let mut r = rng(seed);
        let a: AForm = random::antisym(4, p, &v, 2, 0.8, &mut r);
        let b: AForm = random::antisym(4, q, &v, 2, 0.8, &mut r);
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let s = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
        assert_same(&ab, &ba.scale(&Expr::num(s)));
    }

    #[test]
    fn wedge_is_associative(seed in any::<u64>(), p in 0usize..3, q in 0usize..3, r_ in 0usize..3) {
        let v = vars();
        let mut r = rng(seed);
        let a: Multivector = random::antisym(5, p, &v, 2, 0.8, &mut r);
        let b: Multivector = random::antisym(5, q, &v, 2, 0.8, &mut r);
        let c: Multivector = random::antisym(5, r_, &v, 2, 0.8, &mut r);
        assert_same(&a.wedge(&b).unwrap().wedge(&c).unwrap(), &a.wedge(&b.wedge(&c).unwrap()).unwrap());
    }

    #[test]
    fn contraction_by_a_covector_is_an_antiderivation(seed in any::<u64>(), p in 1usize..3, q in 0usize..3) {
        let v = vars();
        let mut r = rng(seed);
        let phi: AForm = random::antisym(4, 1, &v, 2, 1.0, &mut r);
        let a: Multivector = random::antisym(4, p, &v, 2, 0.8, &mut r);
        let b: Multivector = random::antisym(4, q, &v, 2, 0.8, &mut r);
        let lhs = contract_form(&phi, &a.wedge(&b).unwrap()).unwrap();
        let mut rhs = contract_form(&phi, &a).unwrap().wedge(&b).unwrap();
        if q > 0 {
            let s = if p % 2 == 0 { 1.0 } else { -1.0 };
            rhs = rhs.add(&a.wedge(&contract_form(&phi, &b).unwrap()).unwrap().scale(&Expr::num(s))).unwrap();
        }
        assert_same(&lhs, &rhs);
    }

    #[test]
    fn contraction_is_adjoint_to_wedge(seed in any::<u64>(), p in 1usize..3) {
        // <i_X w, Y> = <w, X ^ Y> for a vector X
        let v = vars();
        let mut r = rng(seed);
        let x: Multivector = random::antisym(4, 1, &v, 2, 1.0, &mut r);
        let y: Multivector = random::antisym(4, p, &v, 2, 0.8, &mut r);
        let w: AForm = random::antisym(4, p + 1, &v, 2, 0.8, &mut r);
        let lhs = pairing(&contract_mv(&x, &w).unwrap(), &y).unwrap();
        let rhs = pairing(&w, &x.wedge(&y).unwrap()).unwrap();
        for pt in pts() {
            prop_assert!((&lhs - &rhs).eval_slice(&pt).unwrap().abs() < 1e-10);
        }
    }
}
