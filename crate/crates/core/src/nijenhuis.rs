//! Nijenhuis operators on algebroids: torsion, deformation, the concomitant
//! with a Jacobi bivector and the hierarchies carried by a compatible pair.

use crate::algebroid::Algebroid;
use crate::error::{Error, Result};
use crate::expr::{simplify_basic, Expr};
use crate::graded::{sharp, AForm, Multivector};
use crate::jacobi::{check_base_compatibility, check_cocycle, BaseJacobiPair, JacobiAlgebroid, Triangular};
use crate::poisson::extend;
use crate::sampling::{Report, Residual, Sampling};

/// A bundle endomorphism in the frame: `N(e_j) = sum_i N_ij e_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Endo {
    rank: usize,
    m: Vec<Expr>,
}

impl Endo {
    pub fn new(rows: Vec<Vec<Expr>>) -> Result<Endo> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("endomorphism must be a square {n}x{n} matrix")));
        }
        Ok(Endo { rank: n, m: rows.into_iter().flatten().map(|e| simplify_basic(&e)).collect() })
    }

    pub fn identity(n: usize) -> Endo {
        Endo::scalar(n, Expr::one())
    }

    /// `f Id`.
    pub fn scalar(n: usize, f: Expr) -> Endo {
        let m = (0..n * n).map(|k| if k / n == k % n { f.clone() } else { Expr::zero() }).collect();
        Endo { rank: n, m }
    }

    pub fn diagonal(d: Vec<Expr>) -> Endo {
        let n = d.len();
        let mut m = vec![Expr::zero(); n * n];
        for (i, f) in d.into_iter().enumerate() {
            m[i * n + i] = f;
        }
        Endo { rank: n, m }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.m[i * self.rank + j]
    }

    pub fn rows(&self) -> Vec<Vec<Expr>> {
        self.m.chunks(self.rank.max(1)).map(|r| r.to_vec()).collect()
    }

    fn check(&self, r: usize) -> Result<()> {
        if r != self.rank {
            return Err(Error::ParentMismatch { left: self.rank, right: r });
        }
        Ok(())
    }

    /// `N X` for a section.
    pub fn apply(&self, x: &Multivector) -> Result<Multivector> {
        self.check(x.rank())?;
        if x.degree() != 1 {
            return Err(Error::Degree(format!("N acts on sections, got degree {}", x.degree())));
        }
        let n = self.rank;
        let c = (0..n)
            .map(|i| simplify_basic(&Expr::sum((0..n).map(|j| self.get(i, j) * &x.coeffs()[j]).collect())))
            .collect();
        Multivector::from_coeffs(n, 1, c)
    }

    /// `N* a` for a 1-form.
    pub fn apply_dual(&self, a: &AForm) -> Result<AForm> {
        Ok(self.transpose().apply(&a.clone().dualize())?.dualize())
    }

    /// The matrix of `N*` on the coframe, as an endomorphism of `A*`.
    pub fn transpose(&self) -> Endo {
        let n = self.rank;
        let m = (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect();
        Endo { rank: n, m }
    }

    /// `self o other`.
    pub fn compose(&self, other: &Endo) -> Result<Endo> {
        self.check(other.rank)?;
        let n = self.rank;
        let m = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                simplify_basic(&Expr::sum((0..n).map(|l| self.get(i, l) * other.get(l, j)).collect()))
            })
            .collect();
        Ok(Endo { rank: n, m })
    }

    pub fn pow(&self, k: usize) -> Endo {
        let mut out = Endo::identity(self.rank);
        for _ in 0..k {
            out = out.compose(self).expect("same rank");
        }
        out
    }

    pub fn trace(&self) -> Expr {
        simplify_basic(&Expr::sum((0..self.rank).map(|i| self.get(i, i).clone()).collect()))
    }

    pub fn det(&self) -> Expr {
        let idx: Vec<usize> = (0..self.rank).collect();
        simplify_basic(&self.minor(&idx, &idx))
    }

    // Laplace expansion along the first listed row
    fn minor(&self, rows: &[usize], cols: &[usize]) -> Expr {
        match rows.len() {
            0 => Expr::one(),
            1 => self.get(rows[0], cols[0]).clone(),
            _ => {
                let mut terms = Vec::new();
                for (c, &col) in cols.iter().enumerate() {
                    let e = self.get(rows[0], col);
                    if e.is_zero() {
                        continue;
                    }
                    let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != col).collect();
                    let t = e * &self.minor(&rows[1..], &sub);
                    terms.push(if c % 2 == 0 { t } else { -t });
                }
                Expr::sum(terms)
            }
        }
    }

    /// Symbolic inverse through the adjugate, for rank at most 3.
    pub fn inverse(&self) -> Result<Endo> {
        let n = self.rank;
        if n > 3 {
            return Err(Error::Unsupported(format!("symbolic inverse is limited to rank 3, got {n}")));
        }
        let det = self.det();
        let m = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                // adj_ij = (-1)^(i+j) M_ji
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let cof = self.minor(&rows, &cols);
                let cof = if (i + j) % 2 == 0 { cof } else { -cof };
                simplify_basic(&(cof / &det))
            })
            .collect();
        Ok(Endo { rank: n, m })
    }

    /// `N^k` for any integer `k`, inverting when `k < 0`.
    pub fn ipow(&self, k: i64) -> Result<Endo> {
        if k >= 0 {
            Ok(self.pow(k as usize))
        } else {
            Ok(self.inverse()?.pow(k.unsigned_abs() as usize))
        }
    }

    /// The components `Q^ij = sum_k N_jk P^ik`, so that `Q# = N o P#`.
    pub fn on_bivector_raw(&self, p: &Multivector) -> Result<Vec<Expr>> {
        self.check(p.rank())?;
        if p.degree() != 2 {
            return Err(Error::Degree(format!("expected a bivector, got degree {}", p.degree())));
        }
        let n = self.rank;
        Ok((0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                simplify_basic(&Expr::sum((0..n).map(|l| self.get(j, l) * &p.component(&[i, l])).collect()))
            })
            .collect())
    }

    /// `NP` read off its upper triangle, without the symmetry check.
    pub fn on_bivector(&self, p: &Multivector) -> Result<Multivector> {
        let n = self.rank;
        let q = self.on_bivector_raw(p)?;
        let mut c = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                c.push(q[i * n + j].clone());
            }
        }
        Multivector::from_coeffs(n, 2, c)
    }
}

/// `T_N(X,Y) = [NX,NY] - N([NX,Y] + [X,NY] - N[X,Y])`.
pub fn torsion(a: &Algebroid, n: &Endo, x: &Multivector, y: &Multivector) -> Result<Multivector> {
    a.check_rank(n.rank())?;
    let (nx, ny) = (n.apply(x)?, n.apply(y)?);
    let first = a.schouten(&nx, &ny)?;
    first.sub(&n.apply(&deformed_bracket(a, n, x, y)?)?)
}

/// `[X,Y]_N = [NX,Y] + [X,NY] - N[X,Y]`.
pub fn deformed_bracket(a: &Algebroid, n: &Endo, x: &Multivector, y: &Multivector) -> Result<Multivector> {
    let (nx, ny) = (n.apply(x)?, n.apply(y)?);
    a.schouten(&nx, y)?.add(&a.schouten(x, &ny)?)?.sub(&n.apply(&a.schouten(x, y)?)?)
}

/// Torsion over all frame pairs.
pub fn torsion_report(a: &Algebroid, n: &Endo, s: &Sampling) -> Result<Report> {
    let pts = s.points_for(a.vars());
    let mut worst = Residual::zero();
    for i in 0..a.rank() {
        for j in i + 1..a.rank() {
            let t = torsion(a, n, &a.frame(i), &a.frame(j))?;
            worst = worst.merge(Residual::of(t.coeffs(), &pts));
        }
    }
    Ok(Report::new("Nijenhuis torsion", "T_N(e_i,e_j) = 0", worst, s))
}

/// `A_N` with bracket `[,]_N` and anchor `rho o N`, without the torsion check.
pub fn deform_unchecked(a: &Algebroid, n: &Endo) -> Result<Algebroid> {
    a.check_rank(n.rank())?;
    let r = a.rank();
    let anchor = (0..r)
        .map(|col| {
            let ne = n.apply(&a.frame(col))?;
            a.rho(&ne)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut upper = vec![Expr::zero(); r * r * r];
    for i in 0..r {
        for j in i + 1..r {
            let b = deformed_bracket(a, n, &a.frame(i), &a.frame(j))?;
            for k in 0..r {
                upper[k * r * r + i * r + j] = b.coeffs()[k].clone();
            }
        }
    }
    Algebroid::antisymmetric(a.vars().clone(), r, anchor, |k, i, j| upper[k * r * r + i * r + j].clone())
}

/// `A_N`, failing when the torsion of `N` does not vanish.
pub fn deform(a: &Algebroid, n: &Endo, s: &Sampling) -> Result<Algebroid> {
    let pts = s.points_for(a.vars());
    for i in 0..a.rank() {
        for j in i + 1..a.rank() {
            let t = torsion(a, n, &a.frame(i), &a.frame(j))?;
            let r = Residual::of(t.coeffs(), &pts);
            if !r.passes(s.tol) {
                return Err(Error::Torsion { residual: r.value, i: i + 1, j: j + 1 });
            }
        }
    }
    deform_unchecked(a, n)
}

/// `phi1 = N* phi0`.
pub fn pull_cocycle(n: &Endo, j: &JacobiAlgebroid) -> Result<AForm> {
    n.apply_dual(j.phi0())
}

/// `(A_N, N* phi0)`.
pub fn deformed_jacobi(j: &JacobiAlgebroid, n: &Endo) -> Result<JacobiAlgebroid> {
    let a = deform_unchecked(j.algebroid(), n)?;
    JacobiAlgebroid::new(a, pull_cocycle(n, j)?)
}

fn skew_residual(n: &Endo, p: &Multivector, pts: &[Vec<f64>]) -> Result<Residual> {
    let r = n.rank();
    let q = n.on_bivector_raw(p)?;
    let mut sym = Vec::new();
    for i in 0..r {
        for j in i..r {
            sym.push(&q[i * r + j] + &q[j * r + i]);
        }
    }
    Ok(Residual::of(&sym, pts))
}

/// The bivector `NP`, after checking `NP = P N*` at the sample points of `vars`.
pub fn np_bivector(a: &Algebroid, n: &Endo, p: &Multivector, s: &Sampling) -> Result<Multivector> {
    let pts = s.points_for(a.vars());
    let r = skew_residual(n, p, &pts)?;
    if !r.passes(s.tol) {
        return Err(Error::NotSkew { residual: r.value });
    }
    n.on_bivector(p)
}

/// `C(P,N)(a,b) = [a,b]_NP - [a,b]^N_P`: the first bracket comes from `(A, phi0)`
/// and `NP`, the second from `(A_N, N* phi0)` and `P`.
pub fn concomitant(tri: &Triangular, n: &Endo, alpha: &AForm, beta: &AForm) -> Result<AForm> {
    let j = tri.jacobi();
    let np = n.on_bivector(tri.p())?;
    let first = j.dual_bracket(&np, alpha, beta)?;
    let second = deformed_jacobi(j, n)?.dual_bracket(tri.p(), alpha, beta)?;
    first.sub(&second)
}

/// `[a,b]_NP - [N*a,b]_P - [a,N*b]_P + N*[a,b]_P`, the concomitant written
/// through the `N*`-deformation of the dual bracket.
pub fn strong_concomitant(tri: &Triangular, n: &Endo, alpha: &AForm, beta: &AForm) -> Result<AForm> {
    let j = tri.jacobi();
    let p = tri.p();
    let np = n.on_bivector(p)?;
    let na = n.apply_dual(alpha)?;
    let nb = n.apply_dual(beta)?;
    let t = j.dual_bracket(&np, alpha, beta)?;
    let t = t.sub(&j.dual_bracket(p, &na, beta)?)?;
    let t = t.sub(&j.dual_bracket(p, alpha, &nb)?)?;
    t.add(&n.apply_dual(&j.dual_bracket(p, alpha, beta)?)?)
}

fn generating_pairs(j: &JacobiAlgebroid) -> Vec<(AForm, AForm)> {
    let a = j.algebroid();
    let r = a.rank();
    let mut out = Vec::new();
    for i in 0..r {
        for k in i + 1..r {
            out.push((a.coframe(i), a.coframe(k)));
        }
    }
    if !j.phi0().is_structurally_zero() {
        for i in 0..r {
            out.push((j.phi0().clone(), a.coframe(i)));
        }
    }
    out
}

/// Jacobi-compatibility of `P` and `N`: `NP = P N*`, the concomitant on
/// frame pairs and on `(phi0, eps^i)`, and the consequence `[NP,P]^phi0 = 0`.
pub fn is_compatible(tri: &Triangular, n: &Endo, s: &Sampling) -> Result<Vec<Report>> {
    let j = tri.jacobi();
    let a = j.algebroid();
    let pts = s.points_for(a.vars());
    let skew = skew_residual(n, tri.p(), &pts)?;
    let mut out = vec![Report::new("NP skew-symmetric", "NP = P N*", skew.clone(), s)];
    if !skew.passes(s.tol) {
        return Ok(out);
    }
    let r = a.rank();
    let mut frame = Residual::zero();
    let mut slot = Residual::zero();
    for i in 0..r {
        for k in i + 1..r {
            let c = concomitant(tri, n, &a.coframe(i), &a.coframe(k))?;
            frame = frame.merge(Residual::of(c.coeffs(), &pts));
        }
        if !j.phi0().is_structurally_zero() {
            let c = concomitant(tri, n, j.phi0(), &a.coframe(i))?;
            slot = slot.merge(Residual::of(c.coeffs(), &pts));
        }
    }
    out.push(Report::new("concomitant on frame pairs", "C(P,N)(eps^i,eps^j) = 0", frame, s));
    out.push(Report::new("concomitant on the phi0 slot", "C(P,N)(phi0,eps^i) = 0", slot, s));
    let np = n.on_bivector(tri.p())?;
    let b = j.sj_bracket(&np, tri.p())?;
    out.push(Report::new("NP compatible with P", "[NP,P]^phi0 = 0", Residual::of(b.coeffs(), &pts), s));
    Ok(out)
}

/// Spot check of the frame-pair reduction: the concomitant vanishes on the
/// given forms as well.
pub fn concomitant_on(tri: &Triangular, n: &Endo, pairs: &[(AForm, AForm)], s: &Sampling) -> Result<Report> {
    let pts = s.points_for(tri.jacobi().algebroid().vars());
    let mut worst = Residual::zero();
    for (a, b) in pairs {
        worst = worst.merge(Residual::of(concomitant(tri, n, a, b)?.coeffs(), &pts));
    }
    Ok(Report::new("concomitant on sample forms", "C(P,N)(a,b) = 0", worst, s))
}

/// The concomitant against its strong form on the generating pairs. Both
/// must vanish together on a compatible pair.
pub fn strong_concomitant_report(tri: &Triangular, n: &Endo, s: &Sampling) -> Result<Report> {
    let pts = s.points_for(tri.jacobi().algebroid().vars());
    let mut worst = Residual::zero();
    for (a, b) in generating_pairs(tri.jacobi()) {
        worst = worst.merge(Residual::of(strong_concomitant(tri, n, &a, &b)?.coeffs(), &pts));
    }
    Ok(Report::new(
        "strong concomitant",
        "[a,b]_NP - [N*a,b]_P - [a,N*b]_P + N*[a,b]_P = 0",
        worst,
        s,
    ))
}

/// The same compatibility read on the extension: `C(P,N) = e^t C^(P~,N)` on
/// frame pairs and with `phi0` in the `d^t` slot, and the Poisson-side
/// concomitant vanishing.
pub fn poisson_transfer(tri: &Triangular, n: &Endo, s: &Sampling) -> Result<Vec<Report>> {
    let j = tri.jacobi();
    let ext = extend(j)?;
    let hat_tri = ext.hat_jacobi().dual_of(&ext.gauge_mv(tri.p()))?;
    let pts = s.points_for(ext.hat().vars());
    let et = ext.t().exp();
    let mut agree = Residual::zero();
    let mut hat_zero = Residual::zero();
    for (a, b) in generating_pairs(j) {
        let c = concomitant(tri, n, &a, &b)?;
        let ch = concomitant(&hat_tri, n, &a, &b)?;
        let lifted: Vec<Expr> = ch.coeffs().iter().map(|e| &et * e).collect();
        agree = agree.merge(Residual::between(c.coeffs(), &lifted, &pts));
        hat_zero = hat_zero.merge(Residual::of(ch.coeffs(), &pts));
    }
    let skew = skew_residual(n, hat_tri.p(), &pts)?;
    Ok(vec![
        Report::new("concomitant through the extension", "C(P,N) = e^t C^(P~,N)", agree, s),
        Report::new("Poisson-side compatibility", "N P~ = P~ N*, C^(P~,N) = 0", hat_zero.merge(skew), s),
    ])
}

/// `A^_N` against the extension of `(A_N, N* phi0)`.
pub fn check_extended_deformation(j: &JacobiAlgebroid, n: &Endo, s: &Sampling) -> Result<Report> {
    let ext = extend(j)?;
    let lhs = deform_unchecked(ext.hat(), n)?;
    let rhs = extend(&deformed_jacobi(j, n)?)?;
    let pts = s.points_for(lhs.vars());
    Ok(Report::new(
        "deformed extension",
        "A^_N = (A_N)^ with phi1 = N* phi0",
        lhs.residual_to(rhs.hat(), &pts)?,
        s,
    ))
}

/// `(A, phi0, P, N)` after the compatibility checks.
#[derive(Debug, Clone)]
pub struct JnAlgebroid {
    tri: Triangular,
    n: Endo,
}

impl JnAlgebroid {
    /// Fails with the first failing check among torsion and compatibility.
    pub fn new(tri: Triangular, n: Endo, s: &Sampling) -> Result<JnAlgebroid> {
        let a = tri.jacobi().algebroid();
        a.check_rank(n.rank())?;
        let mut reports = vec![torsion_report(a, &n, s)?];
        reports.extend(is_compatible(&tri, &n, s)?);
        if let Some(r) = reports.iter().find(|r| !r.pass) {
            return Err(Error::Identity { what: r.anchor.clone(), residual: r.residual });
        }
        Ok(JnAlgebroid { tri, n })
    }

    pub fn unchecked(tri: Triangular, n: Endo) -> JnAlgebroid {
        JnAlgebroid { tri, n }
    }

    pub fn triangular(&self) -> &Triangular {
        &self.tri
    }

    pub fn n(&self) -> &Endo {
        &self.n
    }

    pub fn jacobi(&self) -> &JacobiAlgebroid {
        self.tri.jacobi()
    }

    pub fn p(&self) -> &Multivector {
        self.tri.p()
    }

    /// `N^k P`.
    pub fn power_bivector(&self, k: usize) -> Result<Multivector> {
        self.n.pow(k).on_bivector(self.p())
    }

    /// `N^k P` for `k` in `0..=kmax`, with `[N^iP, N^jP]^phi0` for `i <= j`.
    pub fn bivector_hierarchy(&self, kmax: usize, s: &Sampling) -> Result<(Vec<Multivector>, Vec<Report>)> {
        let j = self.jacobi();
        let a = j.algebroid();
        let pts = s.points_for(a.vars());
        let mut ps = Vec::with_capacity(kmax + 1);
        let mut nk = Endo::identity(self.n.rank());
        for _ in 0..=kmax {
            ps.push(np_bivector(a, &nk, self.p(), s)?);
            nk = nk.compose(&self.n)?;
        }
        let mut reports = Vec::new();
        for i in 0..=kmax {
            for k in i..=kmax {
                let b = j.sj_bracket(&ps[i], &ps[k])?;
                reports.push(Report::new(
                    format!("hierarchy bracket ({i}, {k})"),
                    "[N^i P, N^j P]^phi0 = 0",
                    Residual::of(b.coeffs(), &pts),
                    s,
                ));
            }
        }
        Ok((ps, reports))
    }

    /// The Jacobi structures `((N^kP)_M, E_M^k)` induced on the base, with
    /// pairwise compatibility.
    pub fn base_hierarchy(&self, kmax: usize, s: &Sampling) -> Result<(Vec<BaseJacobiPair>, Vec<Report>)> {
        let j = self.jacobi();
        let mut pairs = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            pairs.push(j.dual_of(&self.power_bivector(k)?)?.induced_base()?);
        }
        let mut reports = Vec::new();
        for i in 0..=kmax {
            for k in i..=kmax {
                let mut rs = if i == k { pairs[i].check(s)? } else { check_base_compatibility(&pairs[i], &pairs[k], s)? };
                for r in &mut rs {
                    r.check = format!("{} ({i}, {k})", r.check);
                }
                reports.extend(rs);
            }
        }
        Ok((pairs, reports))
    }

    /// The dual algebroids `A*_{N^kP}` with `X_k = N^k X0`, checked against
    /// the `N*`-deformations of `A*_P` and the duals of `(A_{N^(k-i)}, phi_(k-i))`
    /// by `N^i P`.
    pub fn dual_hierarchy(&self, kmax: usize, s: &Sampling) -> Result<(Vec<Triangular>, Vec<Report>)> {
        let j = self.jacobi();
        let a = j.algebroid();
        let pts = s.points_for(a.vars());
        let base_dual = self.tri.dual();
        let nt = self.n.transpose();
        let mut reports = vec![{
            let mut r = torsion_report(base_dual, &nt, s)?;
            r.check = "N* torsion on the dual".into();
            r.anchor = "T_N*(eps^i,eps^j) = 0 on A*_P".into();
            r
        }];
        let mut levels = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            let nk = self.n.pow(k);
            let tri_k = j.dual_of(&nk.on_bivector(self.p())?)?;
            let xk = nk.apply(self.tri.x0())?;
            reports.push(Report::new(
                format!("X_{k} = N^{k} X0"),
                "X_k = -N^k P#(phi0) = N^k X0",
                Residual::between(tri_k.x0().coeffs(), xk.coeffs(), &pts),
                s,
            ));
            let mut c = check_cocycle(tri_k.dual(), &xk.clone().dualize(), s)?;
            c.check = format!("X_{k} cocycle of A*_(N^{k}P)");
            c.anchor = "d_*(X_k) = 0".into();
            reports.push(c);
            let deformed = deform_unchecked(base_dual, &nt.pow(k))?;
            reports.push(Report::new(
                format!("A*_(N^{k}P) as a deformation"),
                "A*_(N^k P) = (A*_P)_(N*^k)",
                tri_k.dual().residual_to(&deformed, &pts)?,
                s,
            ));
            for i in 1..=k {
                let ji = deformed_jacobi(j, &self.n.pow(k - i))?;
                let alt = ji.dual_of(&self.power_bivector(i)?)?;
                reports.push(Report::new(
                    format!("A*_(N^{k}P) from level {i}"),
                    "A*_(N^k P) = dual of (A_(N^(k-i)), phi_(k-i)) by N^i P",
                    tri_k.dual().residual_to(alt.dual(), &pts)?,
                    s,
                ));
            }
            levels.push(tri_k);
        }
        Ok((levels, reports))
    }
}

/// `N o P#` applied to a covector, the sharp map of `NP`.
pub fn np_sharp(n: &Endo, p: &Multivector, alpha: &AForm) -> Result<Multivector> {
    n.apply(&sharp(p, alpha)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::VarSpace;

    #[test]
    fn inverse_times_matrix_is_identity() {
        let vars = VarSpace::new(&["x", "y"]).unwrap();
        let x = vars.coord(0);
        let y = vars.coord(1);
        let n = Endo::new(vec![
            vec![Expr::num(2.0) + &x, y.clone(), Expr::zero()],
            vec![Expr::zero(), Expr::num(3.0), x.clone()],
            vec![Expr::one(), Expr::zero(), Expr::num(1.5)],
        ])
        .unwrap();
        let prod = n.compose(&n.inverse().unwrap()).unwrap();
        let pt = [0.3, -0.4];
        for i in 0..3 {
            for j in 0..3 {
                let v = prod.get(i, j).eval_slice(&pt).unwrap();
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn determinant_of_diagonal() {
        let n = Endo::diagonal(vec![Expr::num(2.0), Expr::num(3.0), Expr::num(-1.0)]);
        assert_eq!(n.det().as_num(), Some(-6.0));
        assert_eq!(n.trace().as_num(), Some(4.0));
    }
}
