//! Seeded random smooth data for identity batteries.

use rand::Rng;

use crate::expr::{simplify_basic, Expr, VarSpace};
use crate::graded::{binom, Antisym, Side};

fn coef<R: Rng>(rng: &mut R) -> f64 {
    // two decimals keeps printed fixtures readable
    let c: f64 = rng.gen_range(-2.0..2.0);
    let c = (c * 100.0).round() / 100.0;
    if c == 0.0 {
        0.5
    } else {
        c
    }
}

/// A random smooth, everywhere-defined function of the first `coords`
/// coordinates of `vars` (so data can be kept independent of `t`).
pub fn function<R: Rng>(vars: &VarSpace, coords: usize, rng: &mut R) -> Expr {
    let coords = coords.min(vars.len());
    let terms = rng.gen_range(1..=2);
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let c = Expr::num(coef(rng));
        if coords == 0 {
            out.push(c);
            continue;
        }
        let i = vars.coord(rng.gen_range(0..coords));
        let j = vars.coord(rng.gen_range(0..coords));
        let t = match rng.gen_range(0..6) {
            0 => c,
            1 => c * i,
            2 => c * i * j,
            3 => c * i.sin(),
            4 => c * (Expr::num(coef(rng) / 2.0) * j).exp(),
            _ => c * (i + Expr::num(coef(rng))),
        };
        out.push(t);
    }
    simplify_basic(&Expr::sum(out))
}

/// A random element of the given degree; each coefficient is nonzero with
/// probability `density`.
pub fn antisym<K: Side, R: Rng>(
    rank: usize,
    degree: usize,
    vars: &VarSpace,
    coords: usize,
    density: f64,
    rng: &mut R,
) -> Antisym<K> {
    let coeffs = (0..binom(rank, degree))
        .map(|_| if rng.gen_bool(density) { function(vars, coords, rng) } else { Expr::zero() })
        .collect();
    Antisym::from_coeffs(rank, degree, coeffs).expect("sizes agree")
}
