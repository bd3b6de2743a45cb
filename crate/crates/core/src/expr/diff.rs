use super::{simplify::simplify_basic, Expr, Func, Kind};

impl Expr {
    /// Exact partial derivative with respect to coordinate `index`, simplified.
    pub fn diff(&self, index: usize) -> Expr {
        simplify_basic(&self.diff_raw(index))
    }

    /// Partial derivative without the final simplification pass.
    pub fn diff_raw(&self, index: usize) -> Expr {
        if !self.depends_on(index) {
            return Expr::zero();
        }
        match self.kind() {
            Kind::Num(_) => Expr::zero(),
            Kind::Var { index: i, .. } => {
                if *i == index {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Kind::Neg(a) => -a.diff_raw(index),
            Kind::Add(xs) => xs.iter().map(|x| x.diff_raw(index)).sum(),
            Kind::Mul(xs) => (0..xs.len())
                .map(|k| {
                    let dk = xs[k].diff_raw(index);
                    if dk.is_zero() {
                        return dk;
                    }
                    let mut fs: Vec<Expr> = xs.clone();
                    fs[k] = dk;
                    Expr::product(fs)
                })
                .sum(),
            Kind::Div(a, b) => {
                let da = a.diff_raw(index);
                let db = b.diff_raw(index);
                (da * b - a * db) / b.powi(2)
            }
            Kind::Pow(b, k) => Expr::num(*k as f64) * b.powi(k - 1) * b.diff_raw(index),
            Kind::Func(f, a) => {
                let da = a.diff_raw(index);
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Ln => Expr::div_node(Expr::one(), a.clone()),
                    Func::Sin => a.cos(),
                    Func::Cos => -a.sin(),
                };
                outer * da
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{simplify_basic, VarSpace};

    #[test]
    fn textbook_rules() {
        let v = VarSpace::new(&["x", "t"]).unwrap();
        let s = |t: &str| simplify_basic(&v.parse(t).unwrap());
        assert_eq!(v.parse("x^2").unwrap().diff(0), s("2*x"));
        assert_eq!(v.parse("exp(t)*x").unwrap().diff(1), s("exp(t)*x"));
        assert_eq!(v.parse("5").unwrap().diff(0), Expr::zero());
        assert_eq!(v.parse("sin(x)").unwrap().diff(0), s("cos(x)"));
    }
}
