//! The extension `A^ = A x R` over `M x R` induced by `phi0`, and the
//! gauge maps relating Jacobi data on `A` to Poisson data on `A^`.

use crate::algebroid::Algebroid;
use crate::error::{Error, Result};
use crate::expr::{simplify_basic, Expr};
use crate::graded::{pairing, AForm, Antisym, Multivector, Side};
use crate::jacobi::{JacobiAlgebroid, Triangular};
use crate::sampling::{Report, Residual, Sampling};

#[derive(Debug, Clone)]
pub struct Extended {
    hat: Algebroid,
    origin: JacobiAlgebroid,
    t: Expr,
}

/// `A^` with anchor `rho^(X) = rho(X) + <phi0,X> d/dt` and the brackets of `A`.
pub fn extend(j: &JacobiAlgebroid) -> Result<Extended> {
    let a = j.algebroid();
    let vars = a.vars().with_time()?;
    let m = a.base_dim();
    let anchor: Vec<Vec<Expr>> = a
        .anchor()
        .iter()
        .zip(j.phi0().coeffs())
        .map(|(row, phi)| {
            let mut r = row.clone();
            r.push(phi.clone());
            r
        })
        .collect();
    let t = vars.coord(m);
    let hat = Algebroid::new(vars, a.rank(), anchor, |k, i, jj| a.c(k, i, jj).clone())?;
    Ok(Extended { hat, origin: j.clone(), t })
}

fn weighted<K: Side>(x: &Antisym<K>, t: &Expr, weight: f64) -> Antisym<K> {
    if weight == 0.0 {
        return x.clone();
    }
    let g = (Expr::num(weight) * t).exp();
    x.scale(&g)
}

impl Extended {
    pub fn hat(&self) -> &Algebroid {
        &self.hat
    }

    pub fn origin(&self) -> &JacobiAlgebroid {
        &self.origin
    }

    /// The coordinate `t`.
    pub fn t(&self) -> &Expr {
        &self.t
    }

    /// `(A^, 0)`.
    pub fn hat_jacobi(&self) -> JacobiAlgebroid {
        JacobiAlgebroid::untwisted(self.hat.clone())
    }

    /// `phi0 = d^ t`.
    pub fn check_exact_phi(&self, s: &Sampling) -> Result<Report> {
        let dt = self.hat.differential(&AForm::scalar(self.hat.rank(), self.t.clone()))?;
        let r = dt.sub(self.origin.phi0())?;
        let pts = s.points_for(self.hat.vars());
        Ok(Report::new("phi0 exact on the extension", "phi0 = d^ t", Residual::of(r.coeffs(), &pts), s))
    }

    /// `X~ = e^{-(p-1)t} X`.
    pub fn gauge_mv(&self, x: &Multivector) -> Multivector {
        weighted(x, &self.t, 1.0 - x.degree() as f64)
    }

    /// `w^ = e^{pt} w`.
    pub fn gauge_form(&self, w: &AForm) -> AForm {
        weighted(w, &self.t, w.degree() as f64)
    }

    /// `[X~, Y~]_A^ = ([X,Y]^phi0)~`.
    pub fn check_gauging_bracket(&self, x: &Multivector, y: &Multivector, s: &Sampling) -> Result<Report> {
        let lhs = self.hat.schouten(&self.gauge_mv(x), &self.gauge_mv(y))?;
        let rhs = self.gauge_mv(&self.origin.sj_bracket(x, y)?);
        let pts = s.points_for(self.hat.vars());
        Ok(Report::new(
            format!("gauged bracket, degrees ({}, {})", x.degree(), y.degree()),
            "[X~,Y~]_A^ = ([X,Y]^phi0)~",
            Residual::between(lhs.coeffs(), rhs.coeffs(), &pts),
            s,
        ))
    }

    /// `[P~, P~]_A^ = 0`.
    pub fn check_poisson(&self, p: &Multivector, s: &Sampling) -> Result<Report> {
        let pt = self.gauge_mv(p);
        let b = self.hat.schouten(&pt, &pt)?;
        let pts = s.points_for(self.hat.vars());
        Ok(Report::new("poissonized bivector", "[P~,P~]_A^ = 0", Residual::of(b.coeffs(), &pts), s))
    }

    /// `A^*` with the structure of the Poisson bivector `P~ = e^{-t} P`.
    pub fn hat_dual(&self, p: &Multivector) -> Result<Triangular> {
        self.hat_jacobi().dual_of(&self.gauge_mv(p))
    }

    /// The degree-one gauge relation `[e^t a, e^t b]_P~ = e^t [a,b]_P` and
    /// the bracket of time-independent sections
    /// `[a,b]_P~ = e^{-t}([a,b]_P - <a,X0> b + <b,X0> a)`.
    pub fn check_dual_gauging(
        &self,
        tri: &Triangular,
        hat_tri: &Triangular,
        alpha: &AForm,
        beta: &AForm,
        s: &Sampling,
    ) -> Result<Vec<Report>> {
        if alpha.degree() != 1 || beta.degree() != 1 {
            return Err(Error::Degree("dual gauging compares brackets of 1-forms".into()));
        }
        let jhat = hat_tri.jacobi();
        let pt = hat_tri.p();
        let plain = tri.jacobi().dual_bracket(tri.p(), alpha, beta)?;

        let lhs = jhat.dual_bracket(pt, &self.gauge_form(alpha), &self.gauge_form(beta))?;
        let rhs = self.gauge_form(&plain);

        let direct = jhat.dual_bracket(pt, alpha, beta)?;
        let ax = pairing(alpha, tri.x0())?;
        let bx = pairing(beta, tri.x0())?;
        let inner = plain.sub(&beta.scale(&ax))?.add(&alpha.scale(&bx))?;
        let expected = inner.scale(&(-&self.t).exp());

        let pts = s.points_for(self.hat.vars());
        Ok(vec![
            Report::new(
                "dual gauging",
                "[a^, b^]_P~ = ([a,b]_P)^",
                Residual::between(lhs.coeffs(), rhs.coeffs(), &pts),
                s,
            ),
            Report::new(
                "time-independent dual bracket",
                "[a,b]_P~ = e^{-t}([a,b]_P - <a,X0> b + <b,X0> a)",
                Residual::between(direct.coeffs(), expected.coeffs(), &pts),
                s,
            ),
        ])
    }

    /// For multisections of any degree, `e^{-(p+q-1)t} [a^, b^]_P~` must not
    /// depend on `t`: the bracket of gauged sections is itself gauged.
    pub fn check_dual_gauging_multi(
        &self,
        hat_tri: &Triangular,
        alpha: &AForm,
        beta: &AForm,
        s: &Sampling,
    ) -> Result<Report> {
        let dual = hat_tri.dual();
        let a = self.gauge_form(alpha).dualize();
        let b = self.gauge_form(beta).dualize();
        let br = dual.schouten(&a, &b)?;
        let deg = alpha.degree() + beta.degree();
        let back = weighted(&br, &self.t, 1.0 - deg as f64);
        let tix = self.hat.base_dim() - 1;
        let dt: Vec<Expr> = back.coeffs().iter().map(|c| simplify_basic(&c.diff(tix))).collect();
        let pts = s.points_for(self.hat.vars());
        Ok(Report::new(
            format!("dual gauging, degrees ({}, {})", alpha.degree(), beta.degree()),
            "[a^, b^]_P~ is the gauge of a time-independent multisection",
            Residual::of(&dt, &pts),
            s,
        ))
    }
}
