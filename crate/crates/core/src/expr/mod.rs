//! Scalar expressions over named coordinates.
//!
//! An [`Expr`] is an immutable, reference-counted tree. Every smooth function
//! entering the geometric layers (anchor entries, structure functions,
//! multivector and form coefficients) is an `Expr`; identities are then
//! checked by evaluating residual expressions at sampled points.

mod diff;
mod eval;
mod parse;
mod print;
mod simplify;
mod vars;

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::ops;
use std::sync::Arc;

pub use parse::parse_expr;
pub use simplify::simplify_basic;
pub use vars::{Point, VarSpace, TIME};

/// Elementary functions allowed by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            _ => None,
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
        }
    }
}

/// Node payload. `Add` and `Mul` are n-ary; `Div` and `Ln` are the partial
/// (domain-restricted) nodes, together with negative powers.
#[derive(Debug, Clone)]
pub enum Kind {
    Num(f64),
    Var { index: usize, name: Arc<str> },
    Neg(Expr),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Div(Expr, Expr),
    Pow(Expr, i64),
    Func(Func, Expr),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    hash: u64,
}

#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl std::fmt::Debug for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Expr({self})")
    }
}

const SEED: u64 = 0xcbf2_9ce4_8422_2325;

fn mix(h: u64, v: u64) -> u64 {
    let mut x = h ^ v.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn hash_kind(kind: &Kind) -> u64 {
    match kind {
        Kind::Num(c) => mix(mix(SEED, 1), c.to_bits()),
        Kind::Var { index, .. } => mix(mix(SEED, 2), *index as u64),
        Kind::Neg(x) => mix(mix(SEED, 3), x.0.hash),
        Kind::Add(xs) => xs.iter().fold(mix(SEED, 4), |h, x| mix(h, x.0.hash)),
        Kind::Mul(xs) => xs.iter().fold(mix(SEED, 5), |h, x| mix(h, x.0.hash)),
        Kind::Div(a, b) => mix(mix(mix(SEED, 6), a.0.hash), b.0.hash),
        Kind::Pow(b, k) => mix(mix(mix(SEED, 7), b.0.hash), *k as u64),
        Kind::Func(f, x) => mix(mix(mix(SEED, 8), *f as u64), x.0.hash),
    }
}

impl Expr {
    fn from_kind(kind: Kind) -> Expr {
        let hash = hash_kind(&kind);
        Expr(Arc::new(Node { kind, hash }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn num(c: f64) -> Expr {
        // -0.0 and 0.0 must hash and compare alike
        let c = if c == 0.0 { 0.0 } else { c };
        Expr::from_kind(Kind::Num(c))
    }

    pub fn zero() -> Expr {
        Expr::num(0.0)
    }

    pub fn one() -> Expr {
        Expr::num(1.0)
    }

    pub fn var(index: usize, name: &str) -> Expr {
        Expr::from_kind(Kind::Var { index, name: Arc::from(name) })
    }

    /// Raw negation node (no folding).
    pub fn neg_node(x: Expr) -> Expr {
        Expr::from_kind(Kind::Neg(x))
    }

    /// Raw n-ary sum. A single term is returned as is; an empty sum is `0`.
    pub fn sum(terms: Vec<Expr>) -> Expr {
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::from_kind(Kind::Add(terms)),
        }
    }

    /// Raw n-ary product. A single factor is returned as is; an empty product is `1`.
    pub fn product(factors: Vec<Expr>) -> Expr {
        match factors.len() {
            0 => Expr::one(),
            1 => factors.into_iter().next().unwrap(),
            _ => Expr::from_kind(Kind::Mul(factors)),
        }
    }

    pub fn div_node(a: Expr, b: Expr) -> Expr {
        Expr::from_kind(Kind::Div(a, b))
    }

    pub fn pow_node(base: Expr, k: i64) -> Expr {
        Expr::from_kind(Kind::Pow(base, k))
    }

    pub fn func(f: Func, x: Expr) -> Expr {
        Expr::from_kind(Kind::Func(f, x))
    }

    pub fn exp(&self) -> Expr {
        match self.as_num() {
            Some(c) if c == 0.0 => Expr::one(),
            _ => Expr::func(Func::Exp, self.clone()),
        }
    }

    pub fn ln(&self) -> Expr {
        match self.as_num() {
            Some(c) if c == 1.0 => Expr::zero(),
            _ => Expr::func(Func::Ln, self.clone()),
        }
    }

    pub fn sin(&self) -> Expr {
        Expr::func(Func::Sin, self.clone())
    }

    pub fn cos(&self) -> Expr {
        Expr::func(Func::Cos, self.clone())
    }

    pub fn powi(&self, k: i64) -> Expr {
        match (k, self.as_num()) {
            (0, _) => Expr::one(),
            (1, _) => self.clone(),
            (_, Some(c)) if c != 0.0 || k > 0 => Expr::num(c.powi(k as i32)),
            _ => Expr::pow_node(self.clone(), k),
        }
    }

    pub fn as_num(&self) -> Option<f64> {
        match self.kind() {
            Kind::Num(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_num() == Some(0.0)
    }

    pub fn is_one(&self) -> bool {
        self.as_num() == Some(1.0)
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    /// Number of nodes in the tree (shared subtrees counted each time).
    pub fn size(&self) -> usize {
        1 + match self.kind() {
            Kind::Num(_) | Kind::Var { .. } => 0,
            Kind::Neg(x) | Kind::Pow(x, _) | Kind::Func(_, x) => x.size(),
            Kind::Add(xs) | Kind::Mul(xs) => xs.iter().map(Expr::size).sum(),
            Kind::Div(a, b) => a.size() + b.size(),
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self.kind() {
            Kind::Num(_) => None,
            Kind::Var { index, .. } => Some(*index),
            Kind::Neg(x) | Kind::Pow(x, _) | Kind::Func(_, x) => x.max_var(),
            Kind::Add(xs) | Kind::Mul(xs) => xs.iter().filter_map(Expr::max_var).max(),
            Kind::Div(a, b) => a.max_var().max(b.max_var()),
        }
    }

    pub fn depends_on(&self, index: usize) -> bool {
        match self.kind() {
            Kind::Num(_) => false,
            Kind::Var { index: i, .. } => *i == index,
            Kind::Neg(x) | Kind::Pow(x, _) | Kind::Func(_, x) => x.depends_on(index),
            Kind::Add(xs) | Kind::Mul(xs) => xs.iter().any(|x| x.depends_on(index)),
            Kind::Div(a, b) => a.depends_on(index) || b.depends_on(index),
        }
    }

    fn rank(&self) -> u8 {
        match self.kind() {
            Kind::Num(_) => 0,
            Kind::Var { .. } => 1,
            Kind::Neg(_) => 2,
            Kind::Add(_) => 3,
            Kind::Mul(_) => 4,
            Kind::Div(..) => 5,
            Kind::Pow(..) => 6,
            Kind::Func(..) => 7,
        }
    }

    fn structural_cmp(&self, other: &Expr) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        match self.rank().cmp(&other.rank()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self.kind(), other.kind()) {
            (Kind::Num(a), Kind::Num(b)) => a.total_cmp(b),
            (Kind::Var { index: a, .. }, Kind::Var { index: b, .. }) => a.cmp(b),
            (Kind::Neg(a), Kind::Neg(b)) => a.cmp(b),
            (Kind::Add(a), Kind::Add(b)) | (Kind::Mul(a), Kind::Mul(b)) => a.cmp(b),
            (Kind::Div(a1, b1), Kind::Div(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
            (Kind::Pow(a, k), Kind::Pow(b, j)) => a.cmp(b).then(k.cmp(j)),
            (Kind::Func(f, a), Kind::Func(g, b)) => f.cmp(g).then_with(|| a.cmp(b)),
            _ => unreachable!("ranks already compared"),
        }
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.0.hash == other.0.hash && self.structural_cmp(other) == Ordering::Equal
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical total order: node kind first, then structure.
impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        self.structural_cmp(other)
    }
}

impl From<f64> for Expr {
    fn from(c: f64) -> Self {
        Expr::num(c)
    }
}

// Arithmetic with light local folding; full normalization is `simplify_basic`.

fn add2(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if let (Some(x), Some(y)) = (a.as_num(), b.as_num()) {
        return Expr::num(x + y);
    }
    let mut terms = Vec::new();
    for e in [a, b] {
        match e.kind() {
            Kind::Add(xs) => terms.extend(xs.iter().cloned()),
            _ => terms.push(e.clone()),
        }
    }
    Expr::sum(terms)
}

fn mul2(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    if a.is_one() {
        return b.clone();
    }
    if b.is_one() {
        return a.clone();
    }
    if let (Some(x), Some(y)) = (a.as_num(), b.as_num()) {
        return Expr::num(x * y);
    }
    let mut factors = Vec::new();
    for e in [a, b] {
        match e.kind() {
            Kind::Mul(xs) => factors.extend(xs.iter().cloned()),
            _ => factors.push(e.clone()),
        }
    }
    Expr::product(factors)
}

fn neg1(a: &Expr) -> Expr {
    match a.kind() {
        Kind::Num(c) => Expr::num(-c),
        Kind::Neg(x) => x.clone(),
        _ => Expr::neg_node(a.clone()),
    }
}

fn div2(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() {
        return Expr::zero();
    }
    if b.is_one() {
        return a.clone();
    }
    match (a.as_num(), b.as_num()) {
        (Some(x), Some(y)) if y != 0.0 => Expr::num(x / y),
        _ => Expr::div_node(a.clone(), b.clone()),
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $f:ident) => {
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $f(self, rhs)
            }
        }
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $f(&self, &rhs)
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $f(&self, rhs)
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $f(self, &rhs)
            }
        }
        impl ops::$tr<f64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                $f(self, &Expr::num(rhs))
            }
        }
        impl ops::$tr<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                $f(&self, &Expr::num(rhs))
            }
        }
    };
}

fn sub2(a: &Expr, b: &Expr) -> Expr {
    if b.is_zero() {
        return a.clone();
    }
    add2(a, &neg1(b))
}

binop!(Add, add, add2);
binop!(Sub, sub, sub2);
binop!(Mul, mul, mul2);
binop!(Div, div, div2);

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        neg1(self)
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        neg1(&self)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        let terms: Vec<Expr> = iter.filter(|e| !e.is_zero()).collect();
        let mut flat = Vec::with_capacity(terms.len());
        for t in terms {
            match t.kind() {
                Kind::Add(xs) => flat.extend(xs.iter().cloned()),
                _ => flat.push(t),
            }
        }
        Expr::sum(flat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_trees_hash_alike() {
        let x = Expr::var(0, "x");
        let a = &x * &Expr::num(2.0) + x.exp();
        let b = &x * &Expr::num(2.0) + x.exp();
        assert_eq!(a, b);
        assert_eq!(a.structural_hash(), b.structural_hash());
        assert_ne!(a, &x + &x);
    }

    #[test]
    fn local_folding() {
        let x = Expr::var(0, "x");
        assert_eq!(&x * &Expr::zero(), Expr::zero());
        assert_eq!(&x * &Expr::one(), x);
        assert_eq!(&x + &Expr::zero(), x);
        assert_eq!(-(-x.clone()), x);
        assert_eq!(Expr::num(2.0) + Expr::num(3.0), Expr::num(5.0));
    }
}
