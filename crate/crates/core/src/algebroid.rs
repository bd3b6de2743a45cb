//! Lie algebroids in a local frame: anchor matrix, structure functions, the
//! algebroid differential, the Schouten bracket and Lie derivatives.

use crate::error::{Error, Result};
use crate::expr::{simplify_basic, Expr, VarSpace};
use crate::graded::{binom, lex_rank, sort_sign, subsets, AForm, Accum, Multivector};
use crate::sampling::{Report, Residual, Sampling};

/// `(A, rho, [,])` over a chart with coordinates `vars`, in a frame `e_1..e_n`:
/// `rho(e_a) = sum_mu anchor[a][mu] d/dx^mu` and `[e_i, e_j] = sum_k C^k_ij e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Algebroid {
    vars: VarSpace,
    rank: usize,
    anchor: Vec<Vec<Expr>>,
    // C^k_ij stored at k*n*n + i*n + j
    structure: Vec<Expr>,
}

impl Algebroid {
    /// `structure(k, i, j)` supplies `C^k_ij` for every ordered pair.
    pub fn new(
        vars: VarSpace,
        rank: usize,
        anchor: Vec<Vec<Expr>>,
        structure: impl Fn(usize, usize, usize) -> Expr,
    ) -> Result<Algebroid> {
        let m = vars.len();
        if anchor.len() != rank || anchor.iter().any(|row| row.len() != m) {
            return Err(Error::Dimension(format!(
                "anchor must be a {rank}x{m} matrix (rank x base dimension)"
            )));
        }
        let mut c = Vec::with_capacity(rank * rank * rank);
        for k in 0..rank {
            for i in 0..rank {
                for j in 0..rank {
                    c.push(simplify_basic(&structure(k, i, j)));
                }
            }
        }
        let anchor = anchor.into_iter().map(|r| r.iter().map(simplify_basic).collect()).collect();
        let a = Algebroid { vars, rank, anchor, structure: c };
        a.check_vars()?;
        Ok(a)
    }

    /// Same, from the `C^k_ij` with `i < j` only, extended antisymmetrically.
    pub fn antisymmetric(
        vars: VarSpace,
        rank: usize,
        anchor: Vec<Vec<Expr>>,
        upper: impl Fn(usize, usize, usize) -> Expr,
    ) -> Result<Algebroid> {
        Algebroid::new(vars, rank, anchor, |k, i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => upper(k, i, j),
            std::cmp::Ordering::Greater => -upper(k, j, i),
            std::cmp::Ordering::Equal => Expr::zero(),
        })
    }

    /// The tangent algebroid of the chart: coordinate frame, identity anchor.
    pub fn tangent(vars: VarSpace) -> Algebroid {
        let m = vars.len();
        let anchor = (0..m)
            .map(|a| (0..m).map(|mu| Expr::num(if a == mu { 1.0 } else { 0.0 })).collect())
            .collect();
        Algebroid { vars, rank: m, anchor, structure: vec![Expr::zero(); m * m * m] }
    }

    fn check_vars(&self) -> Result<()> {
        let m = self.vars.len();
        let bad = self
            .anchor
            .iter()
            .flatten()
            .chain(&self.structure)
            .filter_map(Expr::max_var)
            .any(|i| i >= m);
        if bad {
            return Err(Error::Dimension("coefficient refers to a coordinate outside the chart".into()));
        }
        Ok(())
    }

    pub fn vars(&self) -> &VarSpace {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base_dim(&self) -> usize {
        self.vars.len()
    }

    pub fn anchor(&self) -> &[Vec<Expr>] {
        &self.anchor
    }

    pub fn c(&self, k: usize, i: usize, j: usize) -> &Expr {
        let n = self.rank;
        &self.structure[k * n * n + i * n + j]
    }

    /// `rho(e_a) f`.
    pub fn rho_frame(&self, a: usize, f: &Expr) -> Expr {
        if f.as_num().is_some() {
            return Expr::zero();
        }
        let terms = self.anchor[a]
            .iter()
            .enumerate()
            .filter(|(mu, r)| !r.is_zero() && f.depends_on(*mu))
            .map(|(mu, r)| r * f.diff(mu))
            .collect();
        simplify_basic(&Expr::sum(terms))
    }

    /// `rho(X)` as a vector field on the base (coordinate components).
    pub fn rho(&self, x: &Multivector) -> Result<Vec<Expr>> {
        self.check_rank(x.rank())?;
        if x.degree() != 1 {
            return Err(Error::Degree(format!("anchor applies to sections, got degree {}", x.degree())));
        }
        Ok((0..self.base_dim())
            .map(|mu| {
                let terms = (0..self.rank).map(|a| &x.coeffs()[a] * &self.anchor[a][mu]).collect();
                simplify_basic(&Expr::sum(terms))
            })
            .collect())
    }

    /// `rho(X) f`.
    pub fn act(&self, x: &Multivector, f: &Expr) -> Result<Expr> {
        self.check_rank(x.rank())?;
        let terms = (0..self.rank)
            .filter(|a| !x.coeffs()[*a].is_zero())
            .map(|a| &x.coeffs()[a] * &self.rho_frame(a, f))
            .collect();
        Ok(simplify_basic(&Expr::sum(terms)))
    }

    pub fn check_rank(&self, r: usize) -> Result<()> {
        if r != self.rank {
            return Err(Error::ParentMismatch { left: self.rank, right: r });
        }
        Ok(())
    }

    pub fn frame(&self, i: usize) -> Multivector {
        Multivector::basis(self.rank, &[i], Expr::one()).expect("index in range")
    }

    pub fn coframe(&self, i: usize) -> AForm {
        AForm::basis(self.rank, &[i], Expr::one()).expect("index in range")
    }

    /// Largest difference of anchor entries and structure functions against
    /// another algebroid on the same chart.
    pub fn residual_to(&self, other: &Algebroid, points: &[Vec<f64>]) -> Result<Residual> {
        self.check_rank(other.rank)?;
        if self.vars != other.vars {
            return Err(Error::Dimension("algebroids live on different charts".into()));
        }
        let a: Vec<Expr> = self.anchor.iter().flatten().chain(&self.structure).cloned().collect();
        let b: Vec<Expr> = other.anchor.iter().flatten().chain(&other.structure).cloned().collect();
        Ok(Residual::between(&a, &b, points))
    }

    /// Checks the algebroid axioms on the frame.
    pub fn validate(&self, s: &Sampling) -> Vec<Report> {
        let n = self.rank;
        let m = self.base_dim();
        let pts = s.points_for(&self.vars);

        let mut antisym = Vec::new();
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    antisym.push(self.c(k, i, j) + self.c(k, j, i));
                }
            }
        }

        // [[e_i,e_j],e_k] + cyclic, coefficient of e_s
        let mut jacobi = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for s_ in 0..n {
                        let mut terms = Vec::new();
                        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                            for l in 0..n {
                                terms.push(self.c(l, a, b) * self.c(s_, l, c));
                            }
                            terms.push(-self.rho_frame(c, self.c(s_, a, b)));
                        }
                        jacobi.push(simplify_basic(&Expr::sum(terms)));
                    }
                }
            }
        }

        // rho([e_i,e_j]) - [rho e_i, rho e_j]
        let mut morphism = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for mu in 0..m {
                    let mut terms: Vec<Expr> =
                        (0..n).map(|k| self.c(k, i, j) * &self.anchor[k][mu]).collect();
                    terms.push(-self.rho_frame(i, &self.anchor[j][mu]));
                    terms.push(self.rho_frame(j, &self.anchor[i][mu]));
                    morphism.push(simplify_basic(&Expr::sum(terms)));
                }
            }
        }

        vec![
            Report::new("structure antisymmetry", "C^k_ij = -C^k_ji", Residual::of(&antisym, &pts), s),
            Report::new(
                "frame Jacobi identity",
                "[[e_i,e_j],e_k] + cyclic = 0",
                Residual::of(&jacobi, &pts),
                s,
            ),
            Report::new(
                "anchor morphism",
                "rho([e_i,e_j]) = [rho(e_i), rho(e_j)]",
                Residual::of(&morphism, &pts),
                s,
            ),
        ]
    }

    /// The algebroid differential, by the Cartan formula on frame sections.
    pub fn differential(&self, w: &AForm) -> Result<AForm> {
        self.check_rank(w.rank())?;
        let n = self.rank;
        let p = w.degree();
        let mut acc = Accum::new(binom(n, p + 1));
        for (slot, k) in subsets(n, p + 1).into_iter().enumerate() {
            for a in 0..=p {
                let mut rest = k.clone();
                rest.remove(a);
                let f = w.get(&rest);
                if !f.is_zero() {
                    acc.push(slot, sign(a), self.rho_frame(k[a], f));
                }
            }
            for a in 0..=p {
                for b in a + 1..=p {
                    let mut rest = k.clone();
                    rest.remove(b);
                    rest.remove(a);
                    for l in 0..n {
                        let c = self.c(l, k[a], k[b]);
                        if c.is_zero() {
                            continue;
                        }
                        let mut idx = vec![l];
                        idx.extend_from_slice(&rest);
                        let v = w.component(&idx);
                        if !v.is_zero() {
                            acc.push(slot, sign(a + b), c * &v);
                        }
                    }
                }
            }
        }
        AForm::from_coeffs(n, p + 1, acc.finish())
    }

    /// `[e_I, h] = sum_k (-1)^(p-k) rho(e_{I_k})(h) e_{I minus I_k}`, added to `acc`
    /// after wedging with `e_tail` on the right.
    fn push_basis_fn(&self, acc: &mut Accum, i: &[usize], h: &Expr, tail: &[usize], sgn: f64, coef: &Expr) {
        let p = i.len();
        for k in 0..p {
            let r = self.rho_frame(i[k], h);
            if r.is_zero() {
                continue;
            }
            let mut idx: Vec<usize> = i.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, v)| *v).collect();
            idx.extend_from_slice(tail);
            if let Some((s, sorted)) = sort_sign(&idx) {
                acc.push(lex_rank(&sorted, self.rank), sgn * s * sign(p - 1 - k), coef * &r);
            }
        }
    }

    /// The Schouten bracket of `A`-multivectors.
    pub fn schouten(&self, x: &Multivector, y: &Multivector) -> Result<Multivector> {
        self.check_rank(x.rank())?;
        self.check_rank(y.rank())?;
        let n = self.rank;
        let (p, q) = (x.degree(), y.degree());
        if p == 0 && q == 0 {
            return Ok(Multivector::zero(n, 0));
        }
        if p == 0 {
            let r = self.schouten(y, x)?;
            return Ok(if (q - 1) % 2 == 0 { r.neg() } else { r });
        }
        let deg = p + q - 1;
        let mut acc = Accum::new(binom(n, deg));
        let xs: Vec<(Vec<usize>, &Expr)> = x.iter().filter(|(_, c)| !c.is_zero()).collect();
        let ys: Vec<(Vec<usize>, &Expr)> = y.iter().filter(|(_, c)| !c.is_zero()).collect();
        if q == 0 {
            let g = y.coeffs()[0].clone();
            for (i, f) in &xs {
                self.push_basis_fn(&mut acc, i, &g, &[], 1.0, f);
            }
            return Multivector::from_coeffs(n, deg, acc.finish());
        }
        let swap = sign((p - 1) * (q - 1));
        for (i, f) in &xs {
            for (j, g) in &ys {
                let fg = simplify_basic(&(*f * *g));
                // f g [e_I, e_J]
                for (a, &ia) in i.iter().enumerate() {
                    for (b, &jb) in j.iter().enumerate() {
                        for l in 0..n {
                            let c = self.c(l, ia, jb);
                            if c.is_zero() {
                                continue;
                            }
                            let mut idx = vec![l];
                            idx.extend(i.iter().enumerate().filter(|(k, _)| *k != a).map(|(_, v)| *v));
                            idx.extend(j.iter().enumerate().filter(|(k, _)| *k != b).map(|(_, v)| *v));
                            if let Some((s, sorted)) = sort_sign(&idx) {
                                acc.push(lex_rank(&sorted, n), s * sign(a + b), &fg * c);
                            }
                        }
                    }
                }
                // f [e_I, g] ^ e_J
                self.push_basis_fn(&mut acc, i, g, j, 1.0, f);
                // - (-1)^((p-1)(q-1)) g [e_J, f] ^ e_I
                self.push_basis_fn(&mut acc, j, f, i, -swap, g);
            }
        }
        Multivector::from_coeffs(n, deg, acc.finish())
    }

    /// `L_X w = i_X dw + (-1)^(p-1) d i_X w` for an `A`-multivector `X` of degree `p`.
    pub fn lie_derivative(&self, x: &Multivector, w: &AForm) -> Result<AForm> {
        self.check_rank(x.rank())?;
        self.check_rank(w.rank())?;
        lie_with(x, w, |f| self.differential(f))
    }
}

pub(crate) fn lie_with(x: &Multivector, w: &AForm, d: impl Fn(&AForm) -> Result<AForm>) -> Result<AForm> {
    let n = w.rank();
    let p = x.degree();
    if p > w.degree() + 1 {
        return Ok(AForm::zero(n, 0));
    }
    let first = d(w)?.contract(x)?;
    if p > w.degree() {
        return Ok(first);
    }
    let second = d(&w.contract(x)?)?;
    let second = if p % 2 == 0 { second.neg() } else { second };
    first.add(&second)
}

pub(crate) fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tangent(names: &[&str]) -> Algebroid {
        Algebroid::tangent(VarSpace::new(names).unwrap())
    }

    #[test]
    fn d_of_coordinate() {
        let a = tangent(&["x"]);
        let x = a.vars().coord(0);
        let df = a.differential(&AForm::scalar(1, x)).unwrap();
        assert!(df.coeffs()[0].is_one());
    }

    #[test]
    fn bracket_with_function_is_anchor_action() {
        let a = tangent(&["x"]);
        let x = a.vars().coord(0);
        let r = a.schouten(&a.frame(0), &Multivector::scalar(1, x)).unwrap();
        assert_eq!(r.degree(), 0);
        assert!(r.coeffs()[0].is_one());
    }

    #[test]
    fn bad_structure_is_flagged() {
        let v = VarSpace::new(&["x"]).unwrap();
        let a = Algebroid::new(v, 2, vec![vec![Expr::zero()]; 2], |k, i, j| {
            Expr::num(if k == 0 && i != j { 1.0 } else { 0.0 })
        })
        .unwrap();
        let reps = a.validate(&Sampling::default());
        assert!(!reps[0].pass);
        assert_eq!(reps[0].check, "structure antisymmetry");
    }
}
