//! Seeded sample points, residual accumulation and verification reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, VarSpace};

/// Where and how densely identities are probed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Sampling {
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    #[serde(rename = "box")]
    pub bounds: (f64, f64),
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { points: 25, seed: 42, tol: 1e-8, bounds: (-1.0, 1.0) }
    }
}

impl Sampling {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.bounds;
        if self.points == 0 {
            return Err(Error::Config("at least one sample point is required".into()));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Config(format!("invalid sample box [{lo}, {hi}]")));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Config(format!("invalid tolerance {}", self.tol)));
        }
        Ok(())
    }

    /// The sample points for a coordinate space. The same seed always yields
    /// the same points, whatever check asks for them.
    pub fn points_for(&self, vars: &VarSpace) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let (lo, hi) = self.bounds;
        (0..self.points)
            .map(|_| (0..vars.len()).map(|_| rng.gen_range(lo..hi)).collect())
            .collect()
    }
}

/// Largest absolute value met so far and the point where it occurred.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub witness: Vec<f64>,
}

impl Default for Residual {
    fn default() -> Self {
        Residual::zero()
    }
}

impl Residual {
    pub fn zero() -> Residual {
        Residual { value: 0.0, witness: Vec::new() }
    }

    pub fn merge(self, other: Residual) -> Residual {
        // NaN compares false, so it must win explicitly
        if other.value > self.value || (other.value.is_nan() && !self.value.is_nan()) {
            other
        } else {
            self
        }
    }

    /// Max over `exprs` and `points` of the absolute value. A point where some
    /// expression is undefined yields an infinite residual.
    pub fn of<'a, I>(exprs: I, points: &[Vec<f64>]) -> Residual
    where
        I: IntoIterator<Item = &'a Expr>,
    {
        let exprs: Vec<&Expr> = exprs.into_iter().filter(|e| !e.is_zero()).collect();
        let mut worst = Residual { value: 0.0, witness: points.first().cloned().unwrap_or_default() };
        if exprs.is_empty() {
            return worst;
        }
        for p in points {
            for e in &exprs {
                let v = match e.eval_slice(p) {
                    Ok(v) if v.is_finite() => v.abs(),
                    Ok(_) | Err(_) => f64::INFINITY,
                };
                if v > worst.value {
                    worst = Residual { value: v, witness: p.clone() };
                    if v.is_infinite() {
                        return worst;
                    }
                }
            }
        }
        worst
    }

    /// Max over `points` of |a - b| for paired expressions.
    pub fn between(a: &[Expr], b: &[Expr], points: &[Vec<f64>]) -> Residual {
        let diffs: Vec<Expr> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        Residual::of(&diffs, points)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.value < tol
    }
}

/// Outcome of one verified identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub anchor: String,
    pub residual: f64,
    pub pass: bool,
    pub witness: Vec<f64>,
    pub seed: u64,
    #[serde(skip)]
    pub points: usize,
    #[serde(skip)]
    pub bounds: (f64, f64),
}

impl Report {
    pub fn new(check: impl Into<String>, anchor: impl Into<String>, r: Residual, s: &Sampling) -> Report {
        Report {
            check: check.into(),
            anchor: anchor.into(),
            pass: r.passes(s.tol),
            residual: r.value,
            witness: r.witness,
            seed: s.seed,
            points: s.points,
            bounds: s.bounds,
        }
    }

    /// A report whose truth does not depend on sampling (a structural check).
    pub fn exact(check: impl Into<String>, anchor: impl Into<String>, ok: bool, s: &Sampling) -> Report {
        let r = Residual { value: if ok { 0.0 } else { f64::INFINITY }, witness: Vec::new() };
        Report::new(check, anchor, r, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_are_reproducible() {
        let v = VarSpace::new(&["x", "y", "t"]).unwrap();
        let s = Sampling::default();
        let a = s.points_for(&v);
        assert_eq!(a, s.points_for(&v));
        assert_eq!(a.len(), 25);
        assert!(a.iter().flatten().all(|x| (-1.0..1.0).contains(x)));
        let other = Sampling { seed: 7, ..s }.points_for(&v);
        assert_ne!(a, other);
    }

    #[test]
    fn domain_errors_are_infinite() {
        let v = VarSpace::new(&["x"]).unwrap();
        let e = v.parse("ln(x)").unwrap();
        let r = Residual::of([&e], &[vec![0.5], vec![-0.5]]);
        assert!(r.value.is_infinite());
        assert_eq!(r.witness, vec![-0.5]);
    }
}
