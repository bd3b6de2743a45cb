use super::{Expr, Func, Kind, Point};
use crate::error::ExprError;

const TINY: f64 = 1e-300;

impl Expr {
    /// Evaluates at `p`. Partial nodes outside their domain raise an error
    /// naming the offending node.
    pub fn eval(&self, p: &Point) -> Result<f64, ExprError> {
        self.eval_slice(p.values())
    }

    /// Same as [`Expr::eval`] on a bare coordinate slice.
    pub fn eval_slice(&self, x: &[f64]) -> Result<f64, ExprError> {
        match self.kind() {
            Kind::Num(c) => Ok(*c),
            Kind::Var { index, .. } => x
                .get(*index)
                .copied()
                .ok_or(ExprError::PointArity { expected: index + 1, got: x.len() }),
            Kind::Neg(a) => Ok(-a.eval_slice(x)?),
            Kind::Add(xs) => xs.iter().try_fold(0.0, |s, e| Ok(s + e.eval_slice(x)?)),
            Kind::Mul(xs) => xs.iter().try_fold(1.0, |s, e| Ok(s * e.eval_slice(x)?)),
            Kind::Div(a, b) => {
                let den = b.eval_slice(x)?;
                if den.abs() < TINY {
                    return Err(ExprError::Domain { node: self.clone(), reason: "division by zero" });
                }
                Ok(a.eval_slice(x)? / den)
            }
            Kind::Pow(b, k) => {
                let v = b.eval_slice(x)?;
                if *k < 0 && v.abs() < TINY {
                    return Err(ExprError::Domain { node: self.clone(), reason: "negative power of zero" });
                }
                Ok(v.powi(*k as i32))
            }
            Kind::Func(f, a) => {
                let v = a.eval_slice(x)?;
                if *f == Func::Ln && v <= 0.0 {
                    return Err(ExprError::Domain { node: self.clone(), reason: "logarithm of a non-positive number" });
                }
                Ok(f.apply(v))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::VarSpace;

    #[test]
    fn basic_values() {
        let v = VarSpace::new(&["x", "t"]).unwrap();
        let p = Point::new(&v, vec![2.0, 0.0]).unwrap();
        assert_eq!(Expr::zero().eval(&p).unwrap(), 0.0);
        assert_eq!(v.parse("x*exp(t)").unwrap().eval(&p).unwrap(), 2.0);
        let q = Point::new(&v, vec![-1.0, 0.0]).unwrap();
        let err = v.parse("ln(x)").unwrap().eval(&q).unwrap_err();
        assert!(matches!(err, ExprError::Domain { .. }));
        let err = v.parse("1/t").unwrap().eval(&p).unwrap_err();
        assert!(matches!(err, ExprError::Domain { .. }));
    }
}
