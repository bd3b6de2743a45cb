//! Modular forms of Lie and Jacobi algebroids, their relations through the
//! extension `A^`, the duality formulas, the modular field of a
//! Jacobi-Nijenhuis algebroid and its Hamiltonian hierarchy.

use crate::algebroid::Algebroid;
use crate::error::{Error, Result};
use crate::expr::{simplify_basic, Expr, VarSpace};
use crate::graded::{contract_mv, pairing, sharp, AForm, Multivector};
use crate::jacobi::{check_cocycle, BaseJacobiPair, JacobiAlgebroid, Triangular};
use crate::nijenhuis::{deform_unchecked, deformed_jacobi, Endo, JnAlgebroid};
use crate::poisson::extend;
use crate::sampling::{Report, Residual, Sampling};

const TOP_FLOOR: f64 = 1e-6;

/// Coefficients of the top sections: `eta = eta e_1^..^e_n`,
/// `nu = nu eps^1^..^eps^n` and `mu = mu dx^1^..^dx^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularData {
    pub eta: Expr,
    pub nu: Expr,
    pub mu: Expr,
}

impl ModularData {
    pub fn new(eta: Expr, nu: Expr, mu: Expr) -> ModularData {
        ModularData { eta, nu, mu }
    }

    /// `eta = e_1^..^e_n`, `nu = eps^1^..^eps^n`, `mu = dx^1^..^dx^m`.
    pub fn standard() -> ModularData {
        ModularData { eta: Expr::one(), nu: Expr::one(), mu: Expr::one() }
    }

    pub fn eta_top(&self, rank: usize) -> Multivector {
        Multivector::from_coeffs(rank, rank, vec![self.eta.clone()]).expect("one coefficient")
    }

    pub fn nu_top(&self, rank: usize) -> AForm {
        AForm::from_coeffs(rank, rank, vec![self.nu.clone()]).expect("one coefficient")
    }

    /// Fails when a top coefficient comes close to zero at a sample point.
    pub fn check_nonvanishing(&self, vars: &VarSpace, s: &Sampling) -> Result<()> {
        for p in s.points_for(vars) {
            for e in [&self.eta, &self.nu, &self.mu] {
                let v = e.eval_slice(&p)?;
                if !(v.abs() > TOP_FLOOR) {
                    return Err(Error::VanishingTop { value: v });
                }
            }
        }
        Ok(())
    }

    /// `<nu, eta> = 1`.
    pub fn check_normalized(&self, vars: &VarSpace, s: &Sampling) -> Result<()> {
        let r = Residual::of([&(&self.nu * &self.eta - 1.0)], &s.points_for(vars));
        if !r.passes(s.tol) {
            return Err(Error::Identity { what: "<nu,eta> = 1".into(), residual: r.value });
        }
        Ok(())
    }
}

/// `div_mu(V) = top(L_V mu) / top(mu)` on the tangent algebroid of `vars`.
pub fn divergence(vars: &VarSpace, mu: &Expr, v: &[Expr]) -> Result<Expr> {
    let m = vars.len();
    if v.len() != m {
        return Err(Error::Dimension(format!("vector field needs {m} components, got {}", v.len())));
    }
    let t = Algebroid::tangent(vars.clone());
    let vol = AForm::from_coeffs(m, m, vec![mu.clone()])?;
    let l = t.lie_derivative(&Multivector::from_components(v.to_vec()), &vol)?;
    Ok(simplify_basic(&(l.top()? / mu)))
}

/// `<xi, e_a> = top([e_a, eta]) / top(eta) + div_mu(rho(e_a))`.
pub fn modular_form(a: &Algebroid, eta: &Multivector, mu: &Expr) -> Result<AForm> {
    let n = a.rank();
    if eta.degree() != n {
        return Err(Error::Degree(format!("eta must be a top section of degree {n}")));
    }
    let top = eta.top()?;
    let mut c = Vec::with_capacity(n);
    for i in 0..n {
        let b = a.schouten(&a.frame(i), eta)?;
        let div = divergence(a.vars(), mu, &a.rho(&a.frame(i))?)?;
        c.push(simplify_basic(&(b.top()? / &top + div)));
    }
    AForm::from_coeffs(n, 1, c)
}

/// `xi^phi0 = xi - (n-1) phi0`.
pub fn jacobi_modular_form(j: &JacobiAlgebroid, eta: &Multivector, mu: &Expr) -> Result<AForm> {
    let xi = modular_form(j.algebroid(), eta, mu)?;
    let n = j.rank() as f64;
    xi.sub(&j.phi0().scale(&Expr::num(n - 1.0)))
}

/// The modular form of `A*_P` as a section of `A`.
pub fn dual_modular_form(tri: &Triangular, md: &ModularData) -> Result<Multivector> {
    let n = tri.jacobi().rank();
    let nu = md.nu_top(n).dualize();
    Ok(modular_form(tri.dual(), &nu, &md.mu)?.dualize())
}

/// `xi^X0_{A*} = xi_{A*} - (n-1) X0`.
pub fn dual_jacobi_modular_form(tri: &Triangular, md: &ModularData) -> Result<Multivector> {
    let n = tri.jacobi().rank() as f64;
    dual_modular_form(tri, md)?.sub(&tri.x0().scale(&Expr::num(n - 1.0)))
}

fn cocycle(a: &Algebroid, w: &AForm, check: &str, s: &Sampling) -> Result<Report> {
    let mut r = check_cocycle(a, w, s)?;
    r.check = check.into();
    r.anchor = "d(xi) = 0".into();
    Ok(r)
}

/// Cocycle checks of `xi_A` and `xi^phi0_A`, the change of section under
/// the given positive rescalings `(f_eta, f_mu)`, the flatness of `D^phi0`
/// and the comparison with modular forms of `A^`.
pub fn modular_reports(j: &JacobiAlgebroid, md: &ModularData, rescalings: &[(Expr, Expr)], s: &Sampling) -> Result<Vec<Report>> {
    let a = j.algebroid();
    let n = a.rank();
    md.check_nonvanishing(a.vars(), s)?;
    let pts = s.points_for(a.vars());
    let eta = md.eta_top(n);
    let xi = modular_form(a, &eta, &md.mu)?;
    let xi_phi = jacobi_modular_form(j, &eta, &md.mu)?;
    let mut out = vec![
        cocycle(a, &xi, "modular form cocycle", s)?,
        cocycle(a, &xi_phi, "Jacobi modular form cocycle", s)?,
    ];

    let mut change = Residual::zero();
    for (fe, fm) in rescalings {
        let f = simplify_basic(&(fe * fm));
        let sign = sign_on(&f, &pts)?;
        let eta2 = eta.scale(fe);
        let mu2 = simplify_basic(&(&md.mu * fm));
        let xi2 = modular_form(a, &eta2, &mu2)?;
        let dl = a.differential(&AForm::scalar(n, simplify_basic(&(f * sign)).ln()))?;
        let diff = xi2.sub(&xi)?.sub(&dl)?;
        change = change.merge(Residual::of(diff.coeffs(), &pts));
    }
    out.push(Report::new("change of section", "xi' = xi + d ln|f| for eta'(x)mu' = f eta(x)mu", change, s));
    out.push(flatness(j, md, s)?);

    let ext = extend(j)?;
    let hpts = s.points_for(ext.hat().vars());
    let xi_hat = modular_form(ext.hat(), &eta, &md.mu)?;
    let xi_hat_g = modular_form(ext.hat(), &ext.gauge_mv(&eta), &md.mu)?;
    out.push(Report::new(
        "modular form of the extension",
        "xi_A^(eta (x) mu^dt) = xi_A",
        Residual::between(xi_hat.coeffs(), xi.coeffs(), &hpts),
        s,
    ));
    out.push(Report::new(
        "gauged modular form of the extension",
        "xi_A^(eta~ (x) mu^dt) = xi^phi0_A",
        Residual::between(xi_hat_g.coeffs(), xi_phi.coeffs(), &hpts),
        s,
    ));
    Ok(out)
}

fn sign_on(f: &Expr, pts: &[Vec<f64>]) -> Result<f64> {
    let mut sign = 0.0;
    for p in pts {
        let v = f.eval_slice(p)?;
        let sv = if v > TOP_FLOOR {
            1.0
        } else if v < -TOP_FLOOR {
            -1.0
        } else {
            0.0
        };
        if sv == 0.0 || (sign != 0.0 && sv != sign) {
            return Err(Error::Config("rescaling must keep a constant sign on the sample box".into()));
        }
        sign = sv;
    }
    Ok(if sign == 0.0 { 1.0 } else { sign })
}

// D^phi0_X (f eta (x) mu), as a coefficient against eta (x) mu
fn rep(j: &JacobiAlgebroid, md: &ModularData, x: &Multivector, f: &Expr) -> Result<Expr> {
    let a = j.algebroid();
    let eta = md.eta_top(a.rank());
    let b = j.sj_bracket(x, &eta.scale(f))?;
    let div = divergence(a.vars(), &md.mu, &a.rho(x)?)?;
    Ok(simplify_basic(&(b.top()? / &md.eta + f * &div)))
}

/// `D_X D_Y s - D_Y D_X s = D_[X,Y] s` on frame pairs, for `s` equal to
/// `eta (x) mu` and a non-constant multiple of it.
pub fn flatness(j: &JacobiAlgebroid, md: &ModularData, s: &Sampling) -> Result<Report> {
    let a = j.algebroid();
    let n = a.rank();
    let pts = s.points_for(a.vars());
    let mut tests = vec![Expr::one()];
    if a.base_dim() > 0 {
        let x = a.vars().coord(0);
        tests.push(simplify_basic(&(x.sin() + 2.0)));
    }
    let mut worst = Residual::zero();
    for f in &tests {
        for i in 0..n {
            for k in i + 1..n {
                let (x, y) = (a.frame(i), a.frame(k));
                let xy = rep(j, md, &x, &rep(j, md, &y, f)?)?;
                let yx = rep(j, md, &y, &rep(j, md, &x, f)?)?;
                let br = rep(j, md, &a.schouten(&x, &y)?, f)?;
                worst = worst.merge(Residual::of([&(xy - yx - br)], &pts));
            }
        }
    }
    Ok(Report::new("flat representation", "D^phi0_X D^phi0_Y - D^phi0_Y D^phi0_X = D^phi0_[X,Y]", worst, s))
}

/// `M(eps^a) = xi_{A*}(eps^a) + X0^a + i_P d eps^a - div_mu(rho(P# eps^a))`.
pub fn marrero_field(tri: &Triangular, md: &ModularData) -> Result<Multivector> {
    let j = tri.jacobi();
    let a = j.algebroid();
    let n = a.rank();
    let xi = dual_modular_form(tri, md)?;
    let mut c = Vec::with_capacity(n);
    for i in 0..n {
        let e = a.coframe(i);
        let ipd = contract_mv(tri.p(), &a.differential(&e)?)?.value()?;
        let div = divergence(a.vars(), &md.mu, &a.rho(&sharp(tri.p(), &e)?)?)?;
        c.push(simplify_basic(&(&xi.coeffs()[i] + &tri.x0().coeffs()[i] + ipd - div)));
    }
    Multivector::from_coeffs(n, 1, c)
}

/// The relations of the dual modular forms with those of `A^*`, and the
/// Marrero field against the modular field of `(A^, P~)`.
pub fn dual_reports(tri: &Triangular, md: &ModularData, s: &Sampling) -> Result<Vec<Report>> {
    let j = tri.jacobi();
    let a = j.algebroid();
    let n = a.rank();
    md.check_nonvanishing(a.vars(), s)?;
    let ext = extend(j)?;
    let hat_tri = ext.hat_dual(tri.p())?;
    let hpts = s.points_for(ext.hat().vars());
    let et = ext.t().exp();

    let xi = dual_modular_form(tri, md)?;
    let xi_x0 = dual_jacobi_modular_form(tri, md)?;
    let nu = md.nu_top(n);
    let nu_hat = ext.gauge_form(&nu);
    let hat_md = ModularData::new(md.eta.clone(), nu_hat.top()?, md.mu.clone());
    let xi_hat_g = dual_modular_form(&hat_tri, &hat_md)?;
    let xi_hat = dual_modular_form(&hat_tri, md)?;

    let lifted = xi_hat_g.scale(&et);
    let lifted_x0 = xi_hat.scale(&et).add(tri.x0())?;

    let mut out = vec![
        cocycle(tri.dual(), &xi.clone().dualize(), "dual modular form cocycle", s)?,
        Report::new(
            "dual modular form through the extension",
            "xi_{A*} = e^t xi_{A^*} w.r.t. e^{nt} nu (x) mu^dt",
            Residual::between(xi.coeffs(), lifted.coeffs(), &hpts),
            s,
        ),
        Report::new(
            "dual Jacobi modular form through the extension",
            "xi^X0_{A*} = e^t xi_{A^*} w.r.t. nu (x) mu^dt + X0",
            Residual::between(xi_x0.coeffs(), lifted_x0.coeffs(), &hpts),
            s,
        ),
    ];

    // X^(a) nu^ = -a ^ d^ i_P~ nu^
    let m = marrero_field(tri, md)?;
    let pt = hat_tri.p();
    let inner = ext.hat().differential(&contract_mv(pt, &nu_hat)?)?;
    let mut xhat = Vec::with_capacity(n);
    let mut gen = Vec::with_capacity(n);
    let nu_dual = nu_hat.clone().dualize();
    for i in 0..n {
        let e = a.coframe(i);
        let w = e.wedge(&inner)?.neg();
        let v = simplify_basic(&(w.top()? / nu_hat.top()?));
        // [a, nu^]_P~ + e^{-t} (i_P d a) nu^
        let br = hat_tri.dual().schouten(&e.clone().dualize(), &nu_dual)?;
        let ipd = contract_mv(tri.p(), &a.differential(&e)?)?.value()?;
        let g = simplify_basic(&(br.top()? / nu_hat.top()? + (-ext.t()).exp() * ipd));
        gen.push(&v - &g);
        xhat.push(simplify_basic(&(&et * &v)));
    }
    out.push(Report::new(
        "modular field generator",
        "X^(a) nu^ = [a,nu^]_P~ + e^{-t} (i_P da) nu^",
        Residual::of(&gen, &hpts),
        s,
    ));
    out.push(Report::new(
        "Marrero field through the extension",
        "e^t X^ = M",
        Residual::between(&xhat, m.coeffs(), &hpts),
        s,
    ));
    // xi_{A*}(phi0) = M(phi0) - div_mu(rho(X0))
    let phi = j.phi0();
    let lhs = pairing(phi, &xi)?;
    let rhs = pairing(phi, &m)? - divergence(a.vars(), &md.mu, &a.rho(tri.x0())?)?;
    out.push(Report::new(
        "modular forms on phi0",
        "xi_{A*}(phi0) = M(phi0) - div_mu(rho(X0))",
        Residual::of([&(lhs - rhs)], &s.points_for(a.vars())),
        s,
    ));
    Ok(out)
}

/// The modular vector field of a Poisson bivector on the tangent algebroid:
/// `X(f) = div_mu(Pi# df)`.
pub fn poisson_modular_field(tangent: &Algebroid, pi: &Multivector, mu: &Expr, s: &Sampling) -> Result<Multivector> {
    let b = tangent.schouten(pi, pi)?;
    let r = Residual::of(b.coeffs(), &s.points_for(tangent.vars()));
    if !r.passes(s.tol) {
        return Err(Error::Identity { what: "[Pi,Pi] = 0".into(), residual: r.value });
    }
    poisson_modular_field_unchecked(tangent, pi, mu)
}

fn poisson_modular_field_unchecked(tangent: &Algebroid, pi: &Multivector, mu: &Expr) -> Result<Multivector> {
    let m = tangent.rank();
    let c = (0..m)
        .map(|i| {
            let v = sharp(pi, &tangent.coframe(i))?;
            divergence(tangent.vars(), mu, v.coeffs())
        })
        .collect::<Result<Vec<_>>>()?;
    Multivector::from_coeffs(m, 1, c)
}

/// `e^{-t}(P_M + d/dt ^ E_M)` on `M x R`.
pub fn poissonize_pair(pair: &BaseJacobiPair) -> Result<(Algebroid, Multivector)> {
    let vars = pair.tangent().vars().with_time()?;
    let m = pair.tangent().rank();
    let t = vars.coord(m);
    let tangent = Algebroid::tangent(vars);
    let mut c = Vec::new();
    for i in 0..=m {
        for k in i + 1..=m {
            c.push(if k == m { -pair.em.coeffs()[i].clone() } else { pair.pm.component(&[i, k]) });
        }
    }
    let pi = Multivector::from_coeffs(m + 1, 2, c)?.scale(&(-t).exp());
    Ok((tangent, pi))
}

/// `V = e^t X` for the Poisson bivector of the pair on `M x R` and `mu ^ dt`.
pub fn jacobi_manifold_modular_field(pair: &BaseJacobiPair, mu: &Expr, s: &Sampling) -> Result<Multivector> {
    let (tangent, pi) = poissonize_pair(pair)?;
    let t = tangent.vars().coord(tangent.rank() - 1);
    Ok(poisson_modular_field(&tangent, &pi, mu, s)?.scale(&t.exp()))
}

/// `rho(xi_{A*}) = rho(M) + V + div_mu(rho(X0)) d/dt` on `M x R`.
pub fn bridge_report(tri: &Triangular, md: &ModularData, s: &Sampling) -> Result<Report> {
    let a = tri.jacobi().algebroid();
    let xi = dual_modular_form(tri, md)?;
    let m = marrero_field(tri, md)?;
    let v = jacobi_manifold_modular_field(&tri.induced_base()?, &md.mu, s)?;
    let mut lhs = a.rho(&xi)?;
    lhs.push(Expr::zero());
    let mut rhs = a.rho(&m)?;
    rhs.push(divergence(a.vars(), &md.mu, &a.rho(tri.x0())?)?);
    let rhs: Vec<Expr> = rhs.iter().zip(v.coeffs()).map(|(x, y)| x + y).collect();
    let pts = s.points_for(&a.vars().with_time()?);
    Ok(Report::new(
        "modular fields on the base",
        "rho(xi_{A*}) = rho(M) + V + div_mu(rho(X0)) d/dt",
        Residual::between(&lhs, &rhs, &pts),
        s,
    ))
}

/// The duality relations between the modular forms of `A` and `A*`, over
/// frame covectors and the given extra forms.
pub fn duality_battery(tri: &Triangular, md: &ModularData, extra: &[AForm], s: &Sampling) -> Result<Vec<Report>> {
    let j = tri.jacobi();
    let a = j.algebroid();
    let n = a.rank();
    md.check_nonvanishing(a.vars(), s)?;
    md.check_normalized(a.vars(), s)?;
    let pts = s.points_for(a.vars());
    let eta = md.eta_top(n);
    let nu = md.nu_top(n);
    let p = tri.p();
    let nf = n as f64;

    let xi_a = modular_form(a, &eta, &md.mu)?;
    let xi_phi = jacobi_modular_form(j, &eta, &md.mu)?;
    let xi_d = dual_modular_form(tri, md)?;
    let xi_dx = dual_jacobi_modular_form(tri, md)?;
    let dipnu = a.differential(&contract_mv(p, &nu)?)?;

    let mut alphas: Vec<AForm> = (0..n).map(|i| a.coframe(i)).collect();
    alphas.extend(extra.iter().cloned());

    let (mut tres, mut v1, mut v2, mut v3) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for al in &alphas {
        let corr = pairing(&al.wedge(&dipnu)?, &eta)? * 2.0;
        let lhs = pairing(al, &sharp(p, &xi_a)?)?;
        let lhs_phi = pairing(al, &sharp(p, &xi_phi)?)?;
        let ax = pairing(al, tri.x0())?;
        let d = pairing(al, &xi_d)?;
        let dx = pairing(al, &xi_dx)?;
        tres.push(&lhs + &d + &corr);
        v1.push(&lhs + &dx + &ax + &corr);
        v2.push(&lhs + &d - &ax * (nf - 2.0) + &corr);
        v3.push(&lhs_phi + &dx - &ax * (nf - 2.0) + &corr);
    }
    let mut out = Vec::new();
    if j.phi0().is_structurally_zero() {
        out.push(Report::new(
            "modular duality",
            "P#xi_A(a) = -xi_{A*}(a) - 2<a ^ d i_P nu, eta>",
            Residual::of(&tres, &pts),
            s,
        ));
    }
    out.push(Report::new(
        "Jacobi modular duality",
        "P#xi_A(a) = -xi^X0_{A*}(a) - <a,X0> - 2<a ^ d i_P nu, eta>",
        Residual::of(&v1, &pts),
        s,
    ));
    out.push(Report::new(
        "Jacobi modular duality, untwisted dual",
        "P#xi_A(a) = -xi_{A*}(a) + (n-2)<a,X0> - 2<a ^ d i_P nu, eta>",
        Residual::of(&v2, &pts),
        s,
    ));
    out.push(Report::new(
        "Jacobi modular duality, twisted both sides",
        "P#xi^phi0_A(a) = -xi^X0_{A*}(a) + (n-2)<a,X0> - 2<a ^ d i_P nu, eta>",
        Residual::of(&v3, &pts),
        s,
    ));

    // L_X nu = div(X) nu and the triangular duality on (A^, P~)
    let ext = extend(j)?;
    let hat_tri = ext.hat_dual(p)?;
    let hat = ext.hat();
    let hpts = s.points_for(hat.vars());
    let pt = hat_tri.p();
    let nu_d = nu.clone().dualize();
    let dipt = hat.differential(&contract_mv(pt, &nu)?)?;
    let xi_hat = modular_form(hat, &eta, &md.mu)?;
    let xi_hat_d = dual_modular_form(&hat_tri, md)?;
    let (mut l1, mut l2, mut t_hat) = (Vec::new(), Vec::new(), Vec::new());
    for al in &alphas {
        let lie = hat.lie_derivative(&sharp(pt, al)?, &nu)?;
        let br = hat_tri.dual().schouten(&al.clone().dualize(), &nu_d)?.dualize();
        let ipda = contract_mv(pt, &hat.differential(al)?)?.value()?;
        let first = br.add(&nu.scale(&(ipda * 2.0)))?;
        let second = br.neg().sub(&al.wedge(&dipt)?.scale(&Expr::num(2.0)))?;
        l1.extend(lie.sub(&first)?.into_coeffs());
        l2.extend(lie.sub(&second)?.into_coeffs());
        let corr = pairing(&al.wedge(&dipt)?, &eta)? * 2.0;
        t_hat.push(pairing(al, &sharp(pt, &xi_hat)?)? + pairing(al, &xi_hat_d)? + corr);
    }
    out.push(Report::new(
        "Lie derivative of a top form",
        "L_{P~# a} nu = [a,nu]_P~ + 2 i_P~(d a) nu",
        Residual::of(&l1, &hpts),
        s,
    ));
    out.push(Report::new(
        "Lie derivative of a top form, second form",
        "L_{P~# a} nu = -[a,nu]_P~ - 2 a ^ d i_P~ nu",
        Residual::of(&l2, &hpts),
        s,
    ));
    out.push(Report::new(
        "modular duality on the extension",
        "P~#xi_A^(a) = -xi_{A^*}(a) - 2<a ^ d^ i_P~ nu, eta>",
        Residual::of(&t_hat, &hpts),
        s,
    ));
    Ok(out)
}

/// `h_0 = ln det N`, `h_i = tr(N^i) / i`.
pub fn hamiltonian(n: &Endo, i: i64, vars: &VarSpace, s: &Sampling) -> Result<Expr> {
    if i <= 0 {
        let det = nonsingular(n, vars, s)?;
        if i == 0 {
            let sign = sign_on(&det, &s.points_for(vars)).unwrap_or(1.0);
            return Ok(simplify_basic(&(det * sign)).ln());
        }
    }
    let tr = n.ipow(i)?.trace();
    Ok(simplify_basic(&(tr / i as f64)))
}

/// `det N`, failing when it nearly vanishes at a sample point.
pub fn nonsingular(n: &Endo, vars: &VarSpace, s: &Sampling) -> Result<Expr> {
    let det = n.det();
    for p in s.points_for(vars) {
        let v = det.eval_slice(&p)?;
        if !(v.abs() > TOP_FLOOR) {
            return Err(Error::Singular { det: v });
        }
    }
    Ok(det)
}

/// `d_Q h = -Q# dh` for an `A`-bivector `Q`.
pub fn hamiltonian_field(a: &Algebroid, q: &Multivector, h: &Expr) -> Result<Multivector> {
    let dh = a.differential(&AForm::scalar(a.rank(), h.clone()))?;
    Ok(sharp(q, &dh)?.neg())
}

fn power_bivector(jn: &JnAlgebroid, k: i64) -> Result<Multivector> {
    if k < 0 {
        nonsingular(jn.n(), jn.jacobi().algebroid().vars(), &Sampling::default())?;
    }
    jn.n().ipow(k)?.on_bivector(jn.p())
}

/// `X_(N,P) = d_P(tr N) = -P# d(tr N)`.
pub fn xnp_closed_form(jn: &JnAlgebroid) -> Result<Multivector> {
    hamiltonian_field(jn.jacobi().algebroid(), jn.p(), &jn.n().trace())
}

/// `X_(N,P) = xi_{A*_N*} - N xi_{A*}`, the modular field of the
/// Jacobi-Nijenhuis algebroid.
pub fn xnp_field(jn: &JnAlgebroid, md: &ModularData) -> Result<Multivector> {
    let tri = jn.triangular();
    let n = jn.n();
    let deformed = deform_unchecked(tri.dual(), &n.transpose())?;
    let nu = md.nu_top(n.rank()).dualize();
    let xi_n = modular_form(&deformed, &nu, &md.mu)?.dualize();
    let xi = dual_modular_form(tri, md)?;
    xi_n.sub(&n.apply(&xi)?)
}

/// Both definitions of `X_(N,P)`, the closed form `d_P(tr N)`, and
/// invariance under rescaling of `nu` and `mu`.
pub fn xnp_reports(jn: &JnAlgebroid, md: &ModularData, rescaled: &[ModularData], s: &Sampling) -> Result<Vec<Report>> {
    let tri = jn.triangular();
    let n = jn.n();
    let a = jn.jacobi().algebroid();
    md.check_nonvanishing(a.vars(), s)?;
    let pts = s.points_for(a.vars());
    let x = xnp_field(jn, md)?;
    let r = n.rank() as f64;

    let deformed = deform_unchecked(tri.dual(), &n.transpose())?;
    let nu = md.nu_top(n.rank()).dualize();
    let x1 = n.apply(tri.x0())?;
    let xi_n_x1 = modular_form(&deformed, &nu, &md.mu)?.dualize().sub(&x1.scale(&Expr::num(r - 1.0)))?;
    let twisted = xi_n_x1.sub(&n.apply(&dual_jacobi_modular_form(tri, md)?)?)?;
    let closed = xnp_closed_form(jn)?;

    let mut inv = Residual::zero();
    for other in rescaled {
        other.check_nonvanishing(a.vars(), s)?;
        inv = inv.merge(Residual::between(xnp_field(jn, other)?.coeffs(), x.coeffs(), &pts));
    }
    Ok(vec![
        Report::new(
            "modular field, twisted definition",
            "xi_{A*_N*} - N xi_{A*} = xi^X1_{A*_N*} - N xi^X0_{A*}",
            Residual::between(x.coeffs(), twisted.coeffs(), &pts),
            s,
        ),
        Report::new(
            "modular field is Hamiltonian",
            "X_(N,P) = d_P(tr N)",
            Residual::between(x.coeffs(), closed.coeffs(), &pts),
            s,
        ),
        Report::new("modular field independent of sections", "X_(N,P) does not depend on nu, mu", inv, s),
    ])
}

/// One level of the hierarchy of `X_(N,P)`.
#[derive(Debug, Clone)]
pub struct Level {
    pub i: i64,
    pub j: i64,
    pub field: Multivector,
}

/// `N^(i+j-1) X_(N,P) = d_{N^iP} h_j = d_{N^jP} h_i` for each requested
/// `(i, j)`. For a degenerate `N` and `i + j > 1` the forms that need an
/// inverse are replaced by `d_{N^(j-1)P} h_(i+1)`.
pub fn field_hierarchy(jn: &JnAlgebroid, levels: &[(i64, i64)], s: &Sampling) -> Result<(Vec<Level>, Vec<Report>)> {
    let a = jn.jacobi().algebroid();
    let vars = a.vars();
    let n = jn.n();
    let pts = s.points_for(vars);
    let x = xnp_closed_form(jn)?;
    let mut out = Vec::new();
    let mut reports = Vec::new();
    for &(i, j) in levels {
        let mut cands: Vec<Multivector> = Vec::new();
        let mut tolerate = |r: Result<Multivector>| -> Result<()> {
            match r {
                Ok(v) => {
                    cands.push(v);
                    Ok(())
                }
                Err(Error::Singular { .. }) if i + j > 1 => Ok(()),
                Err(e) => Err(e),
            }
        };
        let k = i + j - 1;
        let nk = if k < 0 { nonsingular(n, vars, s).and_then(|_| n.ipow(k)) } else { n.ipow(k) };
        tolerate(nk.and_then(|nk| nk.apply(&x)))?;
        tolerate(hamiltonian(n, j, vars, s).and_then(|h| hamiltonian_field(a, &power_bivector(jn, i)?, &h)))?;
        tolerate(hamiltonian(n, i, vars, s).and_then(|h| hamiltonian_field(a, &power_bivector(jn, j)?, &h)))?;
        if i + j > 1 && j >= 1 && i >= 0 {
            tolerate(hamiltonian(n, i + 1, vars, s).and_then(|h| hamiltonian_field(a, &power_bivector(jn, j - 1)?, &h)))?;
        }
        if cands.len() < 2 {
            return Err(Error::Singular { det: 0.0 });
        }
        let mut worst = Residual::zero();
        for c in &cands[1..] {
            worst = worst.merge(Residual::between(cands[0].coeffs(), c.coeffs(), &pts));
        }
        reports.push(Report::new(
            format!("modular hierarchy ({i}, {j})"),
            "N^(i+j-1) X_(N,P) = d_{N^i P} h_j = d_{N^j P} h_i",
            worst,
            s,
        ));
        out.push(Level { i, j, field: cands.swap_remove(0) });
    }
    Ok((out, reports))
}

/// The hierarchies covered on `M` and on `M x R`:
/// `X_M = rho(X) = -(N^iP)_M# dh_j` and `Y = X_M + <dh_j, E_M^i> d/dt`.
pub fn covered_fields(jn: &JnAlgebroid, levels: &[Level], s: &Sampling) -> Result<(Vec<(Vec<Expr>, Vec<Expr>)>, Vec<Report>)> {
    let j = jn.jacobi();
    let a = j.algebroid();
    let vars = a.vars();
    let pts = s.points_for(vars);
    let tangent = Algebroid::tangent(vars.clone());
    let m = a.base_dim();
    let mut fields = Vec::new();
    let mut reports = Vec::new();
    for l in levels {
        let xm = a.rho(&l.field)?;
        let mut worst = Residual::zero();
        let mut y = None;
        for (pi, hj) in [(l.i, l.j), (l.j, l.i)] {
            let h = match hamiltonian(jn.n(), hj, vars, s) {
                Ok(h) => h,
                Err(Error::Singular { .. }) => continue,
                Err(e) => return Err(e),
            };
            let q = power_bivector(jn, pi)?;
            let pair = j.dual_of(&q)?.induced_base()?;
            let dh = tangent.differential(&AForm::scalar(m, h))?;
            let xm2 = sharp(&pair.pm, &dh)?.neg();
            worst = worst.merge(Residual::between(&xm, xm2.coeffs(), &pts));
            let dt = pairing(&dh, &pair.em)?;
            // the d/dt component must be <phi0, X>
            let phx = pairing(j.phi0(), &l.field)?;
            worst = worst.merge(Residual::of([&(&dt - &phx)], &pts));
            if y.is_none() {
                y = Some(dt);
            }
        }
        reports.push(Report::new(
            format!("covered hierarchy ({}, {})", l.i, l.j),
            "rho(X^(i+j)) = -(N^iP)_M# dh_j, <phi0,X^(i+j)> = <dh_j, E_M^i>",
            worst,
            s,
        ));
        let mut yv = xm.clone();
        yv.push(y.unwrap_or_else(|| pairing(j.phi0(), &l.field).unwrap_or_else(|_| Expr::zero())));
        fields.push((xm, yv));
    }
    Ok((fields, reports))
}

/// `<a, M_(N,P)> = <a, X_(N,P)> + i_P d_N a - i_P d N* a` on frame covectors,
/// with `M_(N,P) = M_(A_N,phi1,P) - N M_(A,phi0,P)`. The field built from
/// `(A, phi0, NP)` differs from `M_(A_N,phi1,P)` by `i_P d_N a - i_NP d a`.
pub fn mnp_relation(jn: &JnAlgebroid, md: &ModularData, rescaled: &[ModularData], s: &Sampling) -> Result<Vec<Report>> {
    let j = jn.jacobi();
    let a = j.algebroid();
    let n = jn.n();
    let pts = s.points_for(a.vars());
    let jd = deformed_jacobi(j, n)?;
    let tri_n = jd.dual_of(jn.p())?;
    let tri_np = j.dual_of(&n.on_bivector(jn.p())?)?;
    let mnp = |d: &ModularData| -> Result<(Multivector, Multivector)> {
        let base = n.apply(&marrero_field(jn.triangular(), d)?)?;
        Ok((marrero_field(&tri_n, d)?.sub(&base)?, marrero_field(&tri_np, d)?.sub(&base)?))
    };
    let (m1, m2) = mnp(md)?;
    let x = xnp_closed_form(jn)?;
    let np = n.on_bivector(jn.p())?;
    let (mut rel, mut gap) = (Vec::new(), Vec::new());
    for i in 0..a.rank() {
        let e = a.coframe(i);
        let ipdn = contract_mv(jn.p(), &jd.algebroid().differential(&e)?)?.value()?;
        let ipdns = contract_mv(jn.p(), &a.differential(&n.apply_dual(&e)?)?)?.value()?;
        let inpd = contract_mv(&np, &a.differential(&e)?)?.value()?;
        rel.push(&m1.coeffs()[i] - &x.coeffs()[i] - &ipdn + ipdns);
        gap.push(&m1.coeffs()[i] - &m2.coeffs()[i] - ipdn + inpd);
    }
    let mut inv = Residual::zero();
    for other in rescaled {
        let (o1, _) = mnp(other)?;
        inv = inv.merge(Residual::between(o1.coeffs(), m1.coeffs(), &pts));
    }
    Ok(vec![
        Report::new(
            "Marrero fields of the pair",
            "<a,M_(N,P)> = <a,X_(N,P)> + i_P d_N a - i_P d N*a",
            Residual::of(&rel, &pts),
            s,
        ),
        Report::new(
            "Marrero fields of the pair, NP form",
            "M_(A_N,phi1,P)(a) - M_(A,phi0,NP)(a) = i_P d_N a - i_NP d a",
            Residual::of(&gap, &pts),
            s,
        ),
        Report::new("Marrero fields of the pair independent of nu", "M_(N,P) does not depend on nu", inv, s),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divergence_of_radial_field() {
        let vars = VarSpace::new(&["x", "y"]).unwrap();
        let v = vec![vars.coord(0), vars.coord(1)];
        let d = divergence(&vars, &Expr::one(), &v).unwrap();
        assert_eq!(d.as_num(), Some(2.0));
    }
}
