use jnalg::catalog::{fixture, Model};
use jnalg::modular::{
    field_hierarchy, jacobi_modular_form, marrero_field, modular_form, poisson_modular_field, xnp_closed_form,
    xnp_field,
};
use jnalg::{Algebroid, Error, Expr, JnAlgebroid, ModularData, Multivector, Sampling, VarSpace};

fn model(name: &str) -> Model {
    Model::from_doc(&fixture(name).unwrap()).unwrap()
}

fn max_abs(exprs: &[Expr], vars: &VarSpace) -> f64 {
    Sampling::default()
        .points_for(vars)
        .iter()
        .flat_map(|p| exprs.iter().map(move |e| e.eval_slice(p).unwrap().abs()))
        .fold(0.0, f64::max)
}

fn jn(name: &str) -> (Model, JnAlgebroid) {
    let m = model(name);
    let tri = m.jacobi.dual_of(m.p.as_ref().unwrap()).unwrap();
    let jn = JnAlgebroid::new(tri, m.n.clone().unwrap(), &Sampling::default()).unwrap();
    (m, jn)
}

#[test]
fn abelian_modular_forms() {
    let m = model("abelian2");
    let md = m.modular.unwrap();
    let eta = md.eta_top(2);
    assert!(modular_form(m.jacobi.algebroid(), &eta, &md.mu).unwrap().simplified().is_structurally_zero());
    let xi = jacobi_modular_form(&m.jacobi, &eta, &md.mu).unwrap();
    assert_eq!(max_abs(&[&xi.coeffs()[0] + 1.0, xi.coeffs()[1].clone()], m.jacobi.algebroid().vars()), 0.0);
}

#[test]
fn tangent_modular_form_is_dlog_of_the_densities() {
    // xi_a = d_a ln(eta) + d_a ln(mu) for eta = e^y, mu = 2 + sin x
    let m = model("tangent(2)");
    let md = m.modular.unwrap();
    let vars = m.jacobi.algebroid().vars();
    let x = vars.coord(0);
    let xi = modular_form(m.jacobi.algebroid(), &md.eta_top(2), &md.mu).unwrap();
    let want0 = x.cos() / (x.sin() + 2.0);
    assert!(max_abs(&[&xi.coeffs()[0] - &want0, &xi.coeffs()[1] - 1.0], vars) < 1e-12);
}

#[test]
fn rescaling_eta_shifts_xi_by_an_exact_form() {
    let m = model("tmr_of_jacobi");
    let a = m.jacobi.algebroid();
    let md = m.modular.unwrap();
    let (x, y) = (a.vars().coord(0), a.vars().coord(1));
    let f = (x * y).exp();
    let xi = modular_form(a, &md.eta_top(3), &md.mu).unwrap();
    let xi2 = modular_form(a, &md.eta_top(3).scale(&f), &md.mu).unwrap();
    let dlog = a.differential(&jnalg::AForm::scalar(3, f.ln())).unwrap();
    assert!(max_abs(xi2.sub(&xi).unwrap().sub(&dlog).unwrap().coeffs(), a.vars()) < 1e-10);
}

#[test]
fn vanishing_top_section_is_refused() {
    let m = model("tangent(2)");
    let md = ModularData::new(Expr::zero(), Expr::one(), Expr::one());
    assert!(matches!(
        md.check_nonvanishing(m.jacobi.algebroid().vars(), &Sampling::default()),
        Err(Error::VanishingTop { .. })
    ));
}

#[test]
fn poisson_modular_field_in_the_plane() {
    // X = (d_y f, -d_x f) for Pi = f d/dx ^ d/dy and the standard density
    let vars = VarSpace::new(&["x", "y"]).unwrap();
    let (x, y) = (vars.coord(0), vars.coord(1));
    let t = Algebroid::tangent(vars.clone());
    let pi = Multivector::from_coeffs(2, 2, vec![x.clone() * &x + y.sin()]).unwrap();
    let v = poisson_modular_field(&t, &pi, &Expr::one(), &Sampling::default()).unwrap();
    assert!(max_abs(&[&v.coeffs()[0] - y.cos(), &v.coeffs()[1] + x * 2.0], &vars) < 1e-12);
}

#[test]
fn zero_bivector_has_zero_marrero_field() {
    let m = model("abelian2");
    let tri = m.jacobi.dual_of(&Multivector::zero(2, 2)).unwrap();
    let field = marrero_field(&tri, &ModularData::standard()).unwrap();
    assert!(field.simplified().is_structurally_zero());
}

#[test]
fn modular_field_of_scalar_operator() {
    // N = (2 + x) Id, P = (1 + x^2) d/dx ^ d/dy gives X = -2 (1 + x^2) d/dy
    let (m, jn) = jn("tangent(2)");
    let vars = m.jacobi.algebroid().vars();
    let x = vars.coord(0);
    let want = [Expr::zero(), (x.clone() * &x + 1.0) * -2.0];
    let closed = xnp_closed_form(&jn).unwrap();
    let field = xnp_field(&jn, m.modular.as_ref().unwrap()).unwrap();
    for v in [closed, field] {
        assert!(max_abs(&[&v.coeffs()[0] - &want[0], &v.coeffs()[1] - &want[1]], vars) < 1e-10);
    }
}

#[test]
fn field_hierarchy_levels_agree() {
    let s = Sampling::default();
    for name in ["tangent(2)", "tmr_of_jacobi", "contact_r3"] {
        let (_, jn) = jn(name);
        let mut wanted = vec![(1, 2), (2, 1), (0, 3)];
        if jn.n().rank() <= 3 {
            wanted.push((-1, 1));
        }
        let (levels, reports) = field_hierarchy(&jn, &wanted, &s).unwrap();
        assert_eq!(levels.len(), wanted.len());
        for r in reports {
            assert!(r.pass, "{name}: {} {}", r.check, r.residual);
        }
    }
}

#[test]
fn negative_levels_need_a_small_rank() {
    let (_, jn) = jn("contact_r3");
    let r = field_hierarchy(&jn, &[(-1, 1)], &Sampling::default());
    assert!(matches!(r, Err(Error::Unsupported(_))));
}
