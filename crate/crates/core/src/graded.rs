//! Antisymmetric coefficient arrays over a rank-`n` frame.
//!
//! A degree-`p` element stores one coefficient per strictly increasing index
//! tuple `I = (i_1 < ... < i_p)`, in lexicographic order. The same layout
//! serves multivectors (over the frame `e_i`) and forms (over the coframe
//! `eps^i`); the marker type only keeps the two apart. Forms on `A` are
//! multivectors on `A*`, so [`Antisym::dualize`] just swaps the marker.

use std::fmt;
use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::expr::{simplify_basic, Expr};

pub trait Side: Copy + fmt::Debug + 'static {
    type Dual: Side<Dual = Self>;
    const NAME: &'static str;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Covector;

impl Side for Vector {
    type Dual = Covector;
    const NAME: &'static str = "multivector";
}

impl Side for Covector {
    type Dual = Vector;
    const NAME: &'static str = "form";
}

pub type Multivector = Antisym<Vector>;
pub type AForm = Antisym<Covector>;

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All strictly increasing `p`-tuples from `0..n`, lexicographically.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binom(n, p));
    if p > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - p + i {
                cur[i] += 1;
                for j in i + 1..p {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Position of an increasing tuple in the order of [`subsets`].
pub fn lex_rank(tuple: &[usize], n: usize) -> usize {
    let p = tuple.len();
    let mut r = 0;
    let mut start = 0;
    for (pos, &c) in tuple.iter().enumerate() {
        for v in start..c {
            r += binom(n - v - 1, p - pos - 1);
        }
        start = c + 1;
    }
    r
}

/// Sorts a list of distinct indices, returning the permutation sign; `None`
/// if an index repeats.
pub fn sort_sign(idx: &[usize]) -> Option<(f64, Vec<usize>)> {
    let mut v = idx.to_vec();
    let mut sign = 1.0;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some((sign, v))
}

/// Sequential interior product of the basis element indexed by `inner`
/// (a basis of the dual side) into the basis element indexed by `outer`:
/// the last index of `inner` is removed first. Returns the sign and the
/// remaining tuple, or `None` when the result vanishes.
pub fn contract_basis(inner: &[usize], outer: &[usize]) -> Option<(f64, Vec<usize>)> {
    let mut rest = outer.to_vec();
    let mut sign = 1.0;
    for &i in inner.iter().rev() {
        let pos = rest.iter().position(|&k| k == i)?;
        if pos % 2 == 1 {
            sign = -sign;
        }
        rest.remove(pos);
    }
    Some((sign, rest))
}

/// Collects signed contributions per output slot, then simplifies once.
pub(crate) struct Accum {
    terms: Vec<Vec<Expr>>,
}

impl Accum {
    pub(crate) fn new(len: usize) -> Accum {
        Accum { terms: vec![Vec::new(); len] }
    }

    pub(crate) fn push(&mut self, slot: usize, sign: f64, value: Expr) {
        if value.is_zero() {
            return;
        }
        self.terms[slot].push(if sign < 0.0 { -value } else { value });
    }

    pub(crate) fn finish(self) -> Vec<Expr> {
        self.terms.into_iter().map(|t| simplify_basic(&Expr::sum(t))).collect()
    }
}

pub struct Antisym<K: Side> {
    rank: usize,
    degree: usize,
    coeffs: Vec<Expr>,
    _side: PhantomData<K>,
}

impl<K: Side> Clone for Antisym<K> {
    fn clone(&self) -> Self {
        Antisym { rank: self.rank, degree: self.degree, coeffs: self.coeffs.clone(), _side: PhantomData }
    }
}

impl<K: Side> PartialEq for Antisym<K> {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.degree == other.degree && self.coeffs == other.coeffs
    }
}

impl<K: Side> fmt::Debug for Antisym<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[rank {}, degree {}]", K::NAME, self.rank, self.degree)?;
        let mut map = f.debug_map();
        for (idx, c) in self.iter() {
            if !c.is_zero() {
                map.entry(&idx, &format_args!("{c}"));
            }
        }
        map.finish()
    }
}

impl<K: Side> Antisym<K> {
    pub fn zero(rank: usize, degree: usize) -> Self {
        Antisym { rank, degree, coeffs: vec![Expr::zero(); binom(rank, degree)], _side: PhantomData }
    }

    pub fn scalar(rank: usize, f: Expr) -> Self {
        Antisym { rank, degree: 0, coeffs: vec![f], _side: PhantomData }
    }

    /// The basis element with coefficient `f` on the (0-based, any order) tuple.
    pub fn basis(rank: usize, idx: &[usize], f: Expr) -> Result<Self> {
        if idx.iter().any(|&i| i >= rank) {
            return Err(Error::Dimension(format!("frame index out of range for rank {rank}")));
        }
        let mut out = Self::zero(rank, idx.len());
        if let Some((sign, sorted)) = sort_sign(idx) {
            out.coeffs[lex_rank(&sorted, rank)] = if sign < 0.0 { -f } else { f };
        }
        Ok(out)
    }

    /// Builds from coefficients listed in the order of [`subsets`].
    pub fn from_coeffs(rank: usize, degree: usize, coeffs: Vec<Expr>) -> Result<Self> {
        if coeffs.len() != binom(rank, degree) {
            return Err(Error::Dimension(format!(
                "{} of degree {degree} on rank {rank} needs {} coefficients, got {}",
                K::NAME,
                binom(rank, degree),
                coeffs.len()
            )));
        }
        Ok(Antisym { rank, degree, coeffs, _side: PhantomData })
    }

    /// A degree-1 element from its components.
    pub fn from_components(components: Vec<Expr>) -> Self {
        let rank = components.len();
        Antisym { rank, degree: 1, coeffs: components, _side: PhantomData }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Expr> {
        self.coeffs
    }

    /// Coefficient on an increasing tuple.
    pub fn get(&self, idx: &[usize]) -> &Expr {
        &self.coeffs[lex_rank(idx, self.rank)]
    }

    /// Coefficient on any tuple of distinct indices, with the antisymmetric sign.
    pub fn component(&self, idx: &[usize]) -> Expr {
        match sort_sign(idx) {
            Some((s, sorted)) => {
                let c = self.get(&sorted);
                if s < 0.0 {
                    -c
                } else {
                    c.clone()
                }
            }
            None => Expr::zero(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &Expr)> {
        subsets(self.rank, self.degree).into_iter().zip(self.coeffs.iter())
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.coeffs.iter().all(Expr::is_zero)
    }

    pub fn dualize(self) -> Antisym<K::Dual> {
        Antisym { rank: self.rank, degree: self.degree, coeffs: self.coeffs, _side: PhantomData }
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        Antisym { rank: self.rank, degree: self.degree, coeffs: self.coeffs.iter().map(f).collect(), _side: PhantomData }
    }

    pub fn simplified(&self) -> Self {
        self.map(simplify_basic)
    }

    pub fn scale(&self, f: &Expr) -> Self {
        self.map(|c| simplify_basic(&(f * c)))
    }

    pub fn neg(&self) -> Self {
        self.map(|c| simplify_basic(&-c))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::ParentMismatch { left: self.rank, right: other.rank });
        }
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot add {}s of degrees {} and {}",
                K::NAME,
                self.degree,
                other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| simplify_basic(&(a + b))).collect();
        Ok(Antisym { coeffs, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| simplify_basic(&(a - b))).collect();
        Ok(Antisym { coeffs, ..self.clone() })
    }

    /// Sum of several elements of equal shape.
    pub fn sum_of(rank: usize, degree: usize, parts: &[Self]) -> Result<Self> {
        let mut acc = Accum::new(binom(rank, degree));
        for p in parts {
            if p.rank != rank {
                return Err(Error::ParentMismatch { left: rank, right: p.rank });
            }
            if p.degree != degree {
                return Err(Error::Degree(format!("expected degree {degree}, got {}", p.degree)));
            }
            for (i, c) in p.coeffs.iter().enumerate() {
                acc.push(i, 1.0, c.clone());
            }
        }
        Antisym::from_coeffs(rank, degree, acc.finish())
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::ParentMismatch { left: self.rank, right: other.rank });
        }
        let n = self.rank;
        let degree = self.degree + other.degree;
        if degree > n {
            return Ok(Self::zero(n, degree));
        }
        let mut acc = Accum::new(binom(n, degree));
        let rhs: Vec<(Vec<usize>, &Expr)> = other.iter().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.iter() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in &rhs {
                let mut cat = i.clone();
                cat.extend_from_slice(j);
                if let Some((s, sorted)) = sort_sign(&cat) {
                    acc.push(lex_rank(&sorted, n), s, a * *b);
                }
            }
        }
        Antisym::from_coeffs(n, degree, acc.finish())
    }

    /// Interior product `i_x self` by an element of the dual side with
    /// `deg x <= deg self`. For decomposable `x = x_1 ^ ... ^ x_q` this is
    /// `i_{x_1} o ... o i_{x_q}`; on degree one, `(i_a w)(b...) = w(a, b...)`.
    pub fn contract(&self, x: &Antisym<K::Dual>) -> Result<Self> {
        if self.rank != x.rank {
            return Err(Error::ParentMismatch { left: x.rank, right: self.rank });
        }
        let n = self.rank;
        if x.degree > self.degree {
            return Ok(Self::zero(n, 0));
        }
        let degree = self.degree - x.degree;
        let mut acc = Accum::new(binom(n, degree));
        let outer: Vec<(Vec<usize>, &Expr)> = self.iter().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in x.iter() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in &outer {
                if let Some((s, rest)) = contract_basis(&i, k) {
                    acc.push(lex_rank(&rest, n), s, a * *b);
                }
            }
        }
        Antisym::from_coeffs(n, degree, acc.finish())
    }

    /// The function a degree-0 element stands for.
    pub fn value(&self) -> Result<Expr> {
        if self.degree != 0 {
            return Err(Error::Degree(format!("expected a function, got degree {}", self.degree)));
        }
        Ok(self.coeffs[0].clone())
    }

    /// The single coefficient of a top-degree element.
    pub fn top(&self) -> Result<Expr> {
        if self.degree != self.rank {
            return Err(Error::Degree(format!(
                "top coefficient needs degree {}, got {}",
                self.rank, self.degree
            )));
        }
        Ok(self.coeffs[0].clone())
    }
}

/// Canonical pairing `<eps^I, e_J> = delta^I_J` extended bilinearly.
pub fn pairing(form: &AForm, mv: &Multivector) -> Result<Expr> {
    if form.rank() != mv.rank() {
        return Err(Error::ParentMismatch { left: form.rank(), right: mv.rank() });
    }
    if form.degree() != mv.degree() {
        return Err(Error::Degree(format!(
            "pairing needs equal degrees, got {} and {}",
            form.degree(),
            mv.degree()
        )));
    }
    let terms = form.coeffs().iter().zip(mv.coeffs()).map(|(a, b)| a * b).collect();
    Ok(simplify_basic(&Expr::sum(terms)))
}

/// `i_phi P` for a 1-form `phi`.
pub fn contract_form(phi: &AForm, p: &Multivector) -> Result<Multivector> {
    if phi.degree() != 1 {
        return Err(Error::Degree(format!("contract_form needs a 1-form, got degree {}", phi.degree())));
    }
    p.contract(phi)
}

/// Multivector interior product `i_X w`.
pub fn contract_mv(x: &Multivector, w: &AForm) -> Result<AForm> {
    if x.degree() > w.degree() {
        return Err(Error::Degree(format!(
            "cannot contract a degree-{} multivector into a degree-{} form",
            x.degree(),
            w.degree()
        )));
    }
    w.contract(x)
}

/// `P#alpha = i_alpha P`, so that `<beta, P#alpha> = P(alpha, beta)`.
pub fn sharp(p: &Multivector, alpha: &AForm) -> Result<Multivector> {
    if p.degree() != 2 {
        return Err(Error::Degree(format!("sharp needs a bivector, got degree {}", p.degree())));
    }
    contract_form(alpha, p)
}

/// `P(alpha_1, ..., alpha_p) = <alpha_1 ^ ... ^ alpha_p, P>`.
pub fn evaluate(p: &Multivector, alphas: &[AForm]) -> Result<Expr> {
    let n = p.rank();
    let mut w = AForm::scalar(n, Expr::one());
    for a in alphas {
        w = w.wedge(a)?;
    }
    pairing(&w, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, idx: &[usize]) -> Multivector {
        Multivector::basis(n, idx, Expr::one()).unwrap()
    }

    fn eps(n: usize, idx: &[usize]) -> AForm {
        AForm::basis(n, idx, Expr::one()).unwrap()
    }

    #[test]
    fn ranking_matches_enumeration() {
        for n in 0..7 {
            for p in 0..=n {
                for (r, s) in subsets(n, p).iter().enumerate() {
                    assert_eq!(lex_rank(s, n), r);
                }
            }
        }
    }

    #[test]
    fn wedge_basics() {
        assert!(e(2, &[0]).wedge(&e(2, &[0])).unwrap().is_structurally_zero());
        let w = e(2, &[0]).wedge(&e(2, &[1])).unwrap();
        assert!(w.get(&[0, 1]).is_one());
        let w = e(2, &[1]).wedge(&e(2, &[0])).unwrap();
        assert_eq!(w.get(&[0, 1]).as_num(), Some(-1.0));
    }

    #[test]
    fn contraction_conventions() {
        let c = contract_form(&eps(2, &[0]), &e(2, &[0, 1])).unwrap();
        assert_eq!(c, e(2, &[1]));
        let c = contract_form(&eps(3, &[2]), &e(3, &[0, 1])).unwrap();
        assert!(c.is_structurally_zero());
        let c = contract_mv(&e(2, &[0]), &eps(2, &[0, 1])).unwrap();
        assert_eq!(c, eps(2, &[1]));
        let c = contract_mv(&e(2, &[0, 1]), &eps(2, &[0, 1])).unwrap();
        assert_eq!(c.coeffs()[0].as_num(), Some(-1.0));
    }

    #[test]
    fn sharp_pairs_back() {
        let p = e(2, &[0, 1]);
        let s = sharp(&p, &eps(2, &[0])).unwrap();
        assert_eq!(s, e(2, &[1]));
        let v = evaluate(&p, &[eps(2, &[0]), eps(2, &[1])]).unwrap();
        assert!(v.is_one());
    }
}
