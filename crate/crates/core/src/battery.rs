//! Identity batteries on seeded random data: the properties of the
//! Schouten-Jacobi bracket and the correspondences through `A^`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebroid::sign;
use crate::error::Result;
use crate::expr::Expr;
use crate::graded::{contract_form, AForm, Multivector};
use crate::jacobi::JacobiAlgebroid;
use crate::poisson::extend;
use crate::random;
use crate::sampling::{Report, Residual, Sampling};

const DENSITY: f64 = 0.7;

struct Gen {
    rng: ChaCha8Rng,
    rank: usize,
    coords: usize,
    vars: crate::expr::VarSpace,
}

impl Gen {
    fn new(j: &JacobiAlgebroid, seed: u64) -> Gen {
        let a = j.algebroid();
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), rank: a.rank(), coords: a.base_dim(), vars: a.vars().clone() }
    }

    fn mv(&mut self, degree: usize) -> Multivector {
        random::antisym(self.rank, degree, &self.vars, self.coords, DENSITY, &mut self.rng)
    }

    fn form(&mut self, degree: usize) -> AForm {
        random::antisym(self.rank, degree, &self.vars, self.coords, DENSITY, &mut self.rng)
    }

    fn function(&mut self) -> Expr {
        random::function(&self.vars, self.coords, &mut self.rng)
    }
}

// [,]^phi0 of two functions has degree -1 and vanishes
fn bracket(j: &JacobiAlgebroid, x: &Multivector, y: &Multivector) -> Result<Option<Multivector>> {
    if x.degree() + y.degree() == 0 {
        return Ok(None);
    }
    j.sj_bracket(x, y).map(Some)
}

// (-1)^((a-1)(b-1)), degrees may be zero
fn shifted(a: usize, b: usize) -> f64 {
    if (a as i64 - 1) * (b as i64 - 1) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn degrees(rank: usize, max_degree: usize) -> Vec<usize> {
    (0..=max_degree.min(rank)).collect()
}

/// The defining properties of `[,]^phi0` on random multivectors of degree at
/// most `max_degree`.
pub fn gerstenhaber_battery(j: &JacobiAlgebroid, max_degree: usize, s: &Sampling) -> Result<Vec<Report>> {
    let a = j.algebroid();
    let n = a.rank();
    let pts = s.points_for(a.vars());
    let mut g = Gen::new(j, s.seed);
    let degs = degrees(n, max_degree);

    let mut anchor = Residual::zero();
    let mut sections = Residual::zero();
    for _ in 0..3 {
        let (x, y, f) = (g.mv(1), g.mv(1), g.function());
        let lhs = j.sj_bracket(&x, &Multivector::scalar(n, f.clone()))?;
        anchor = anchor.merge(Residual::of([&(&lhs.coeffs()[0] - &j.rho_phi(&x, &f)?)], &pts));
        let d = j.sj_bracket(&x, &y)?.sub(&a.schouten(&x, &y)?)?;
        sections = sections.merge(Residual::of(d.coeffs(), &pts));
    }

    let mut antisym = Residual::zero();
    for &p in &degs {
        for &q in &degs {
            if p + q == 0 {
                continue;
            }
            let (x, y) = (g.mv(p), g.mv(q));
            let lhs = j.sj_bracket(&x, &y)?;
            let rhs = j.sj_bracket(&y, &x)?.scale(&Expr::num(-shifted(p, q)));
            antisym = antisym.merge(Residual::between(lhs.coeffs(), rhs.coeffs(), &pts));
        }
    }

    let mut leibniz = Residual::zero();
    for &p in &degs {
        for &q in &degs {
            for &r in &degs {
                if q + r > n || p + q + r == 0 {
                    continue;
                }
                let (x, y, z) = (g.mv(p), g.mv(q), g.mv(r));
                let lhs = j.sj_bracket(&x, &y.wedge(&z)?)?;
                let mut parts = Vec::new();
                if let Some(b) = bracket(j, &x, &y)? {
                    parts.push(b.wedge(&z)?);
                }
                if let Some(b) = bracket(j, &x, &z)? {
                    parts.push(y.wedge(&b)?.scale(&Expr::num(shifted(p, q + 1))));
                }
                if p > 0 {
                    let t = contract_form(j.phi0(), &x)?.wedge(&y)?.wedge(&z)?;
                    parts.push(t.scale(&Expr::num(-sign(p - 1))));
                }
                let rhs = Multivector::sum_of(n, lhs.degree(), &parts)?;
                leibniz = leibniz.merge(Residual::between(lhs.coeffs(), rhs.coeffs(), &pts));
            }
        }
    }

    let mut jacobi = Residual::zero();
    for &p in &degs {
        for &q in &degs {
            for &r in &degs {
                if p + q + r < 2 || p + q + r > n + 2 {
                    continue;
                }
                let (x, y, z) = (g.mv(p), g.mv(q), g.mv(r));
                let mut parts = Vec::new();
                for (u, v, w, c) in [(&x, &y, &z, shifted(p, r)), (&y, &z, &x, shifted(q, p)), (&z, &x, &y, shifted(r, q))] {
                    if let Some(inner) = bracket(j, v, w)? {
                        if let Some(outer) = bracket(j, u, &inner)? {
                            parts.push(outer.scale(&Expr::num(c)));
                        }
                    }
                }
                let sum = Multivector::sum_of(n, p + q + r - 2, &parts)?;
                jacobi = jacobi.merge(Residual::of(sum.coeffs(), &pts));
            }
        }
    }

    let mut dd = Residual::zero();
    for p in 0..n {
        let w = g.form(p);
        let d2 = a.differential(&a.differential(&w)?)?;
        let dp2 = j.phi_diff(&j.phi_diff(&w)?)?;
        dd = dd.merge(Residual::of(d2.coeffs(), &pts)).merge(Residual::of(dp2.coeffs(), &pts));
    }

    Ok(vec![
        Report::new("anchor action", "[X,f]^phi0 = rho^phi0(X) f", anchor, s),
        Report::new("bracket of sections", "[X,Y]^phi0 = [X,Y]", sections, s),
        Report::new("graded antisymmetry", "[P,Q]^phi0 = -(-1)^((p-1)(q-1)) [Q,P]^phi0", antisym, s),
        Report::new(
            "graded Leibniz rule",
            "[P,Q^R]^phi0 = [P,Q]^phi0 ^ R + (-1)^((p-1)q) Q ^ [P,R]^phi0 - (-1)^(p-1) i_phi0 P ^ Q ^ R",
            leibniz,
            s,
        ),
        Report::new("graded Jacobi identity", "cyclic sum of (-1)^((p-1)(r-1)) [P,[Q,R]^phi0]^phi0 = 0", jacobi, s),
        Report::new("differentials square to zero", "d d = 0, d^phi0 d^phi0 = 0", dd, s),
    ])
}

fn of(r: &Report) -> Residual {
    Residual { value: r.residual, witness: r.witness.clone() }
}

/// The correspondences through `A^` on random data and on `p` when given:
/// the extension itself, gauged brackets, the Poisson property of `P~`, and
/// the gauge relations of the bracket on `A*`.
pub fn poissonization_battery(
    j: &JacobiAlgebroid,
    p: Option<&Multivector>,
    max_degree: usize,
    s: &Sampling,
) -> Result<Vec<Report>> {
    let a = j.algebroid();
    let n = a.rank();
    let ext = extend(j)?;
    let mut g = Gen::new(j, s.seed.wrapping_add(1));
    let degs = degrees(n, max_degree);
    let mut out = ext.hat().validate(s);
    for r in &mut out {
        r.check = format!("extension: {}", r.check);
    }
    if !j.phi0().is_structurally_zero() {
        out.push(ext.check_exact_phi(s)?);
    }

    let mut gauged = Residual::zero();
    for &dp in &degs {
        for &dq in &degs {
            if dp + dq == 0 {
                continue;
            }
            let (x, y) = (g.mv(dp), g.mv(dq));
            gauged = gauged.merge(of(&ext.check_gauging_bracket(&x, &y, s)?));
        }
    }
    out.push(Report::new("gauged brackets", "[X~,Y~]_A^ = ([X,Y]^phi0)~", gauged, s));

    if let Some(p) = p {
        let jac = j.is_jacobi_bivector(p, s)?;
        let poi = ext.check_poisson(p, s)?;
        out.push(Report::exact(
            "Poisson property transfers",
            "[P,P]^phi0 = 0 implies [P~,P~]_A^ = 0",
            !jac.pass || poi.pass,
            s,
        ));
        out.push(poi);
        let tri = j.dual_of(p)?;
        let hat_tri = ext.hat_dual(p)?;
        let (mut dual1, mut indep) = (Residual::zero(), Residual::zero());
        for _ in 0..2 {
            let (al, be) = (g.form(1), g.form(1));
            let rs = ext.check_dual_gauging(&tri, &hat_tri, &al, &be, s)?;
            dual1 = dual1.merge(of(&rs[0]));
            indep = indep.merge(of(&rs[1]));
        }
        for i in 0..n {
            for k in i + 1..n {
                let rs = ext.check_dual_gauging(&tri, &hat_tri, &a.coframe(i), &a.coframe(k), s)?;
                dual1 = dual1.merge(of(&rs[0]));
                indep = indep.merge(of(&rs[1]));
            }
        }
        out.push(Report::new("dual gauging", "[a^, b^]_P~ = ([a,b]_P)^", dual1, s));
        out.push(Report::new(
            "time-independent dual bracket",
            "[a,b]_P~ = e^{-t}([a,b]_P - <a,X0> b + <b,X0> a)",
            indep,
            s,
        ));
        let mut multi = Residual::zero();
        for &dp in &degs {
            for &dq in &degs {
                if dp + dq == 0 {
                    continue;
                }
                let (al, be) = (g.form(dp), g.form(dq));
                multi = multi.merge(of(&ext.check_dual_gauging_multi(&hat_tri, &al, &be, s)?));
            }
        }
        out.push(Report::new(
            "dual gauging of multisections",
            "[a^, b^]_P~ is the gauge of a time-independent multisection",
            multi,
            s,
        ));
    }
    Ok(out)
}
