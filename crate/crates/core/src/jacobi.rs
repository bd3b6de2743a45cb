//! Jacobi algebroids `(A, phi0)`: the Schouten-Jacobi bracket, the twisted
//! differential and Lie derivative, Jacobi bivectors and the triangular
//! structure they induce on `A*`.

use crate::algebroid::{lie_with, sign, Algebroid};
use crate::error::{Error, Result};
use crate::expr::{simplify_basic, Expr};
use crate::graded::{contract_form, evaluate, sharp, AForm, Multivector};
use crate::sampling::{Report, Residual, Sampling};

/// Residual report of `d(phi)` on `a`.
pub fn check_cocycle(a: &Algebroid, phi: &AForm, s: &Sampling) -> Result<Report> {
    let d = a.differential(phi)?;
    let pts = s.points_for(a.vars());
    Ok(Report::new("1-cocycle", "d(phi) = 0", Residual::of(d.coeffs(), &pts), s))
}

#[derive(Debug, Clone)]
pub struct JacobiAlgebroid {
    a: Algebroid,
    phi0: AForm,
}

impl JacobiAlgebroid {
    pub fn new(a: Algebroid, phi0: AForm) -> Result<JacobiAlgebroid> {
        a.check_rank(phi0.rank())?;
        if phi0.degree() != 1 {
            return Err(Error::Degree(format!("phi0 must be a 1-form, got degree {}", phi0.degree())));
        }
        Ok(JacobiAlgebroid { a, phi0 })
    }

    /// `(A, 0)`.
    pub fn untwisted(a: Algebroid) -> JacobiAlgebroid {
        let phi0 = AForm::zero(a.rank(), 1);
        JacobiAlgebroid { a, phi0 }
    }

    pub fn algebroid(&self) -> &Algebroid {
        &self.a
    }

    pub fn phi0(&self) -> &AForm {
        &self.phi0
    }

    pub fn rank(&self) -> usize {
        self.a.rank()
    }

    pub fn check_cocycle(&self, s: &Sampling) -> Result<Report> {
        check_cocycle(&self.a, &self.phi0, s)
    }

    /// `[P,Q]^phi0 = [P,Q] + (p-1) P ^ i_phi0 Q - (-1)^(p-1) (q-1) i_phi0 P ^ Q`.
    pub fn sj_bracket(&self, x: &Multivector, y: &Multivector) -> Result<Multivector> {
        let (p, q) = (x.degree(), y.degree());
        let mut out = self.a.schouten(x, y)?;
        if p == 0 && q == 0 {
            return Ok(out);
        }
        if q > 0 && p != 1 {
            let t = x.wedge(&contract_form(&self.phi0, y)?)?;
            out = out.add(&t.scale(&Expr::num(p as f64 - 1.0)))?;
        }
        if p > 0 && q != 1 {
            let t = contract_form(&self.phi0, x)?.wedge(y)?;
            let c = -sign(p - 1) * (q as f64 - 1.0);
            out = out.add(&t.scale(&Expr::num(c)))?;
        }
        Ok(out)
    }

    /// `d^phi0 w = dw + phi0 ^ w`.
    pub fn phi_diff(&self, w: &AForm) -> Result<AForm> {
        self.a.differential(w)?.add(&self.phi0.wedge(w)?)
    }

    /// `L^phi0_X w = i_X d^phi0 w + (-1)^(p-1) d^phi0 i_X w`.
    pub fn phi_lie(&self, x: &Multivector, w: &AForm) -> Result<AForm> {
        self.a.check_rank(x.rank())?;
        lie_with(x, w, |f| self.phi_diff(f))
    }

    /// `rho^phi0(X) f = rho(X) f + f <phi0, X>`.
    pub fn rho_phi(&self, x: &Multivector, f: &Expr) -> Result<Expr> {
        let pair = crate::graded::pairing(&self.phi0, x)?;
        Ok(simplify_basic(&(self.a.act(x, f)? + f * &pair)))
    }

    pub fn is_jacobi_bivector(&self, p: &Multivector, s: &Sampling) -> Result<Report> {
        if p.degree() != 2 {
            return Err(Error::Degree(format!("expected a bivector, got degree {}", p.degree())));
        }
        let b = self.sj_bracket(p, p)?;
        let pts = s.points_for(self.a.vars());
        Ok(Report::new("Jacobi bivector", "[P,P]^phi0 = 0", Residual::of(b.coeffs(), &pts), s))
    }

    /// `[a,b]_P = L^phi0_{P#a} b - L^phi0_{P#b} a - d^phi0 P(a,b)`.
    pub fn dual_bracket(&self, p: &Multivector, alpha: &AForm, beta: &AForm) -> Result<AForm> {
        let t1 = self.phi_lie(&sharp(p, alpha)?, beta)?;
        let t2 = self.phi_lie(&sharp(p, beta)?, alpha)?;
        let pab = evaluate(p, &[alpha.clone(), beta.clone()])?;
        let t3 = self.phi_diff(&AForm::scalar(self.rank(), pab))?;
        t1.sub(&t2)?.sub(&t3)
    }

    /// The Lie algebroid `A*_P` (frame `eps^i`, anchor `rho o P#`) and the
    /// section `X0 = -P#(phi0)`, without checking that `P` is Jacobi.
    pub fn dual_of(&self, p: &Multivector) -> Result<Triangular> {
        if p.degree() != 2 {
            return Err(Error::Degree(format!("expected a bivector, got degree {}", p.degree())));
        }
        self.a.check_rank(p.rank())?;
        let n = self.rank();
        let mut anchor = Vec::with_capacity(n);
        for a in 0..n {
            anchor.push(self.a.rho(&sharp(p, &self.a.coframe(a))?)?);
        }
        let mut upper = vec![Expr::zero(); n * n * n];
        for i in 0..n {
            for j in i + 1..n {
                let b = self.dual_bracket(p, &self.a.coframe(i), &self.a.coframe(j))?;
                for k in 0..n {
                    upper[k * n * n + i * n + j] = b.coeffs()[k].clone();
                }
            }
        }
        let dual = Algebroid::antisymmetric(self.a.vars().clone(), n, anchor, |k, i, j| {
            upper[k * n * n + i * n + j].clone()
        })?;
        let x0 = sharp(p, &self.phi0)?.neg();
        Ok(Triangular { j: self.clone(), p: p.clone(), dual, x0 })
    }

    /// As [`JacobiAlgebroid::dual_of`], failing unless `[P,P]^phi0` vanishes
    /// at the sample points.
    pub fn build_dual(&self, p: &Multivector, s: &Sampling) -> Result<Triangular> {
        let r = self.is_jacobi_bivector(p, s)?;
        if !r.pass {
            return Err(Error::Identity { what: "[P,P]^phi0 = 0".into(), residual: r.residual });
        }
        self.dual_of(p)
    }

    /// Compatibility of two Jacobi bivectors, with the two identities that
    /// follow from it.
    pub fn bivectors_compatible(&self, p1: &Multivector, p2: &Multivector, s: &Sampling) -> Result<Vec<Report>> {
        let pts = s.points_for(self.a.vars());
        let b = self.sj_bracket(p1, p2)?;
        let s1 = sharp(p1, &self.phi0)?;
        let s2 = sharp(p2, &self.phi0)?;
        let first = self.a.schouten(p1, p2)?.add(&s1.wedge(p2)?)?.add(&s2.wedge(p1)?)?;
        let second = self.a.schouten(&s1, p2)?.add(&self.a.schouten(&s2, p1)?)?;
        Ok(vec![
            Report::new("compatible bivectors", "[P1,P2]^phi0 = 0", Residual::of(b.coeffs(), &pts), s),
            Report::new(
                "compatibility, untwisted form",
                "[P1,P2] + P1#(phi0) ^ P2 + P2#(phi0) ^ P1 = 0",
                Residual::of(first.coeffs(), &pts),
                s,
            ),
            Report::new(
                "compatibility, sharp form",
                "[P1#(phi0),P2] + [P2#(phi0),P1] = 0",
                Residual::of(second.coeffs(), &pts),
                s,
            ),
        ])
    }
}

/// `(A, phi0, P)` together with the induced `(A*_P, X0)`.
#[derive(Debug, Clone)]
pub struct Triangular {
    j: JacobiAlgebroid,
    p: Multivector,
    dual: Algebroid,
    x0: Multivector,
}

impl Triangular {
    pub fn jacobi(&self) -> &JacobiAlgebroid {
        &self.j
    }

    pub fn p(&self) -> &Multivector {
        &self.p
    }

    /// `A*` with frame `eps^i`; its sections are stored as multivectors whose
    /// coefficients are the `eps^i` components.
    pub fn dual(&self) -> &Algebroid {
        &self.dual
    }

    pub fn x0(&self) -> &Multivector {
        &self.x0
    }

    /// `X0` seen as a 1-form on `A*`.
    pub fn x0_form(&self) -> AForm {
        self.x0.clone().dualize()
    }

    pub fn check_x0_cocycle(&self, s: &Sampling) -> Result<Report> {
        let mut r = check_cocycle(&self.dual, &self.x0_form(), s)?;
        r.check = "X0 cocycle of the dual".into();
        r.anchor = "d_*(X0) = 0".into();
        Ok(r)
    }

    /// `P_M = rho^2 P`, `E_M = rho(P#(phi0))` on the tangent algebroid of the base.
    pub fn induced_base(&self) -> Result<BaseJacobiPair> {
        let a = self.j.algebroid();
        let tangent = Algebroid::tangent(a.vars().clone());
        let pm = push_bivector(a, &self.p)?;
        let em = Multivector::from_components(a.rho(&sharp(&self.p, self.j.phi0())?)?);
        Ok(BaseJacobiPair { tangent, pm, em })
    }
}

/// `rho^2 P` for an `A`-bivector.
pub fn push_bivector(a: &Algebroid, p: &Multivector) -> Result<Multivector> {
    a.check_rank(p.rank())?;
    let m = a.base_dim();
    let rows: Vec<Multivector> = (0..a.rank())
        .map(|i| a.rho(&a.frame(i)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .map(Multivector::from_components)
        .collect();
    let mut parts = Vec::new();
    for (idx, c) in p.iter() {
        if c.is_zero() {
            continue;
        }
        parts.push(rows[idx[0]].wedge(&rows[idx[1]])?.scale(c));
    }
    Multivector::sum_of(m, 2, &parts)
}

/// A Jacobi pair `(P_M, E_M)` on the base manifold.
#[derive(Debug, Clone)]
pub struct BaseJacobiPair {
    tangent: Algebroid,
    pub pm: Multivector,
    pub em: Multivector,
}

impl BaseJacobiPair {
    pub fn new(tangent: Algebroid, pm: Multivector, em: Multivector) -> Result<BaseJacobiPair> {
        tangent.check_rank(pm.rank())?;
        tangent.check_rank(em.rank())?;
        if pm.degree() != 2 || em.degree() != 1 {
            return Err(Error::Degree("a Jacobi pair is a bivector and a vector field".into()));
        }
        Ok(BaseJacobiPair { tangent, pm, em })
    }

    pub fn tangent(&self) -> &Algebroid {
        &self.tangent
    }

    pub fn check(&self, s: &Sampling) -> Result<Vec<Report>> {
        let t = &self.tangent;
        let pts = s.points_for(t.vars());
        let r1 = t.schouten(&self.pm, &self.pm)?.add(&self.em.wedge(&self.pm)?.scale(&Expr::num(2.0)))?;
        let r2 = t.schouten(&self.em, &self.pm)?;
        Ok(vec![
            Report::new("base Jacobi pair", "[P_M,P_M] = -2 E_M ^ P_M", Residual::of(r1.coeffs(), &pts), s),
            Report::new("base Jacobi pair, Reeb field", "[E_M,P_M] = 0", Residual::of(r2.coeffs(), &pts), s),
        ])
    }
}

/// The two conditions for `(L1,E1)` and `(L2,E2)` to be compatible.
pub fn check_base_compatibility(a: &BaseJacobiPair, b: &BaseJacobiPair, s: &Sampling) -> Result<Vec<Report>> {
    let t = &a.tangent;
    let pts = s.points_for(t.vars());
    let r1 = t
        .schouten(&a.pm, &b.pm)?
        .add(&a.em.wedge(&b.pm)?)?
        .add(&b.em.wedge(&a.pm)?)?;
    let r2 = t.schouten(&a.em, &b.pm)?.add(&t.schouten(&b.em, &a.pm)?)?;
    Ok(vec![
        Report::new(
            "base compatibility",
            "[L1,L2] = -E1 ^ L2 - E2 ^ L1",
            Residual::of(r1.coeffs(), &pts),
            s,
        ),
        Report::new("base compatibility, Reeb fields", "[E1,L2] + [E2,L1] = 0", Residual::of(r2.coeffs(), &pts), s),
    ])
}
