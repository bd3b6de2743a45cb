use std::collections::BTreeMap;

use super::{Expr, Func, Kind};

// Products with more expanded terms than this stay factored.
const MAX_EXPANSION: usize = 64;
// Small positive powers of sums are expanded into products.
const MAX_EXPANDED_POWER: i64 = 4;

/// Light canonicalization: constant folding, 0/1 absorption, flattening,
/// like-term collection in sums, power collection in products, merging of
/// exponentials and bounded distribution of products over sums.
///
/// The result agrees with the input wherever the input is defined.
pub fn simplify_basic(e: &Expr) -> Expr {
    match e.kind() {
        Kind::Num(_) | Kind::Var { .. } => e.clone(),
        Kind::Neg(x) => scale(-1.0, &simplify_basic(x)),
        Kind::Add(xs) => add_canon(xs.iter().map(simplify_basic).collect()),
        Kind::Mul(xs) => mul_canon(xs.iter().map(simplify_basic).collect()),
        Kind::Div(a, b) => {
            let a = simplify_basic(a);
            let b = pow_canon(simplify_basic(b), -1);
            mul_canon(vec![a, b])
        }
        Kind::Pow(b, k) => pow_canon(simplify_basic(b), *k),
        Kind::Func(f, x) => func_canon(*f, simplify_basic(x)),
    }
}

fn scale(c: f64, e: &Expr) -> Expr {
    mul_canon(vec![Expr::num(c), e.clone()])
}

/// Splits a canonical term into its numeric coefficient and the remaining monomial.
fn split_coef(e: &Expr) -> (f64, Expr) {
    match e.kind() {
        Kind::Num(c) => (*c, Expr::one()),
        Kind::Neg(x) => {
            let (c, m) = split_coef(x);
            (-c, m)
        }
        Kind::Mul(xs) => match xs[0].as_num() {
            Some(c) => (c, Expr::product(xs[1..].to_vec())),
            None => (1.0, e.clone()),
        },
        _ => (1.0, e.clone()),
    }
}

fn join_coef(c: f64, m: &Expr) -> Expr {
    if c == 0.0 {
        return Expr::zero();
    }
    if m.is_one() {
        return Expr::num(c);
    }
    if c == 1.0 {
        return m.clone();
    }
    if c == -1.0 {
        return Expr::neg_node(m.clone());
    }
    let mut factors = vec![Expr::num(c)];
    match m.kind() {
        Kind::Mul(xs) => factors.extend(xs.iter().cloned()),
        _ => factors.push(m.clone()),
    }
    Expr::product(factors)
}

fn add_canon(terms: Vec<Expr>) -> Expr {
    let mut flat = Vec::with_capacity(terms.len());
    for t in terms {
        match t.kind() {
            Kind::Add(xs) => flat.extend(xs.iter().cloned()),
            _ => flat.push(t),
        }
    }
    // monomial -> (coefficient, sum of |contributions|)
    let mut acc: BTreeMap<Expr, (f64, f64)> = BTreeMap::new();
    for t in &flat {
        let (c, m) = split_coef(t);
        let slot = acc.entry(m).or_insert((0.0, 0.0));
        slot.0 += c;
        slot.1 += c.abs();
    }
    let mut out = Vec::with_capacity(acc.len());
    let mut constant = None;
    for (m, (c, mag)) in acc {
        if c == 0.0 || c.abs() <= 4.0 * f64::EPSILON * mag {
            continue;
        }
        if m.is_one() {
            constant = Some(c);
        } else {
            out.push(join_coef(c, &m));
        }
    }
    if let Some(c) = constant {
        out.push(Expr::num(c));
    }
    Expr::sum(out)
}

fn mul_canon(factors: Vec<Expr>) -> Expr {
    let mut coef = 1.0;
    let mut bases: BTreeMap<Expr, i64> = BTreeMap::new();
    let mut exp_args: Vec<Expr> = Vec::new();
    let mut sums: Vec<Expr> = Vec::new();

    let mut stack = factors;
    while let Some(f) = stack.pop() {
        match f.kind() {
            Kind::Num(c) => coef *= c,
            Kind::Neg(x) => {
                coef = -coef;
                stack.push(x.clone());
            }
            Kind::Mul(xs) => stack.extend(xs.iter().cloned()),
            Kind::Func(Func::Exp, a) => exp_args.push(a.clone()),
            Kind::Pow(b, k) => *bases.entry(b.clone()).or_insert(0) += k,
            Kind::Add(_) => sums.push(f.clone()),
            _ => *bases.entry(f.clone()).or_insert(0) += 1,
        }
    }
    if coef == 0.0 {
        return Expr::zero();
    }

    let mut rest = Vec::new();
    for (b, k) in bases {
        if k == 0 {
            continue;
        }
        if b.is_one() {
            continue;
        }
        rest.push(if k == 1 { b } else { Expr::pow_node(b, k) });
    }
    if !exp_args.is_empty() {
        let arg = add_canon(exp_args);
        match arg.as_num() {
            Some(a) if a == 0.0 => {}
            Some(a) => coef *= a.exp(),
            None => rest.push(Expr::func(Func::Exp, arg)),
        }
    }

    if !sums.is_empty() {
        let count: usize = sums.iter().map(|s| match s.kind() {
            Kind::Add(xs) => xs.len(),
            _ => 1,
        }).product();
        if count <= MAX_EXPANSION {
            return distribute(coef, rest, &sums);
        }
        rest.extend(sums);
    }

    rest.sort();
    if rest.is_empty() {
        return Expr::num(coef);
    }
    join_coef(coef, &Expr::product(rest))
}

fn distribute(coef: f64, rest: Vec<Expr>, sums: &[Expr]) -> Expr {
    let mut partial: Vec<Vec<Expr>> = vec![rest];
    for s in sums {
        let Kind::Add(terms) = s.kind() else { unreachable!() };
        let mut next = Vec::with_capacity(partial.len() * terms.len());
        for p in &partial {
            for t in terms {
                let mut q = p.clone();
                q.push(t.clone());
                next.push(q);
            }
        }
        partial = next;
    }
    let terms = partial
        .into_iter()
        .map(|mut fs| {
            fs.push(Expr::num(coef));
            mul_canon(fs)
        })
        .collect();
    add_canon(terms)
}

fn pow_canon(b: Expr, k: i64) -> Expr {
    if k == 0 {
        return Expr::one();
    }
    if k == 1 {
        return b;
    }
    match b.kind() {
        Kind::Num(c) => {
            if *c == 0.0 && k < 0 {
                Expr::pow_node(b.clone(), k)
            } else {
                Expr::num(c.powi(k as i32))
            }
        }
        Kind::Pow(inner, j) => pow_canon(inner.clone(), j * k),
        Kind::Neg(x) => {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            scale(sign, &pow_canon(x.clone(), k))
        }
        Kind::Mul(xs) => mul_canon(xs.iter().map(|x| pow_canon(x.clone(), k)).collect()),
        Kind::Func(Func::Exp, a) => func_canon(Func::Exp, scale(k as f64, a)),
        Kind::Add(_) if (2..=MAX_EXPANDED_POWER).contains(&k) => {
            mul_canon(vec![b.clone(); k as usize])
        }
        _ => Expr::pow_node(b, k),
    }
}

fn func_canon(f: Func, x: Expr) -> Expr {
    if let Some(c) = x.as_num() {
        if f != Func::Ln || c > 0.0 {
            return Expr::num(f.apply(c));
        }
    }
    match (f, x.kind()) {
        (Func::Ln, Kind::Func(Func::Exp, a)) => a.clone(),
        _ => Expr::func(f, x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::VarSpace;

    fn vs() -> VarSpace {
        VarSpace::new(&["x", "y", "t"]).unwrap()
    }

    #[test]
    fn absorption_and_collection() {
        let v = vs();
        let s = |t: &str| simplify_basic(&v.parse(t).unwrap());
        assert_eq!(s("0*x + 1*y"), v.var("y").unwrap());
        assert_eq!(s("x - x"), Expr::zero());
        assert_eq!(s("2*x + 3*x"), s("5*x"));
        assert_eq!(s("exp(t)*exp(-t)"), Expr::one());
        assert_eq!(s("(x+y)^2 - x^2 - 2*x*y - y^2"), Expr::zero());
        assert_eq!(s("x*y/x"), v.var("y").unwrap());
        assert_eq!(s("ln(exp(x))"), v.var("x").unwrap());
    }
}
