use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Expr, Func};
use crate::error::ExprError;

/// Reserved name of the extra coordinate of `M x R`.
pub const TIME: &str = "t";

/// Ordered coordinate names of a chart. `t`, if present, is the last one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct VarSpace {
    names: Arc<[String]>,
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarSpace {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<VarSpace, ExprError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if !valid_ident(n) {
                return Err(ExprError::InvalidVarSpace(format!("`{n}` is not an identifier")));
            }
            if Func::from_name(n).is_some() {
                return Err(ExprError::InvalidVarSpace(format!("`{n}` is a function name")));
            }
            if names[..i].contains(n) {
                return Err(ExprError::InvalidVarSpace(format!("duplicate coordinate `{n}`")));
            }
            if n == TIME && i + 1 != names.len() {
                return Err(ExprError::InvalidVarSpace("`t` must be the last coordinate".into()));
            }
        }
        Ok(VarSpace { names: names.into() })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn has_time(&self) -> bool {
        self.names.last().map(|n| n == TIME).unwrap_or(false)
    }

    /// The coordinate `name` as an expression.
    pub fn var(&self, name: &str) -> Result<Expr, ExprError> {
        self.index_of(name)
            .map(|i| Expr::var(i, &self.names[i]))
            .ok_or_else(|| ExprError::UnknownIdent(name.to_string()))
    }

    pub fn coord(&self, index: usize) -> Expr {
        Expr::var(index, &self.names[index])
    }

    /// Appends the time coordinate; base coordinates keep their indices.
    pub fn with_time(&self) -> Result<VarSpace, ExprError> {
        if self.index_of(TIME).is_some() {
            return Err(ExprError::InvalidVarSpace("coordinate space already contains `t`".into()));
        }
        let mut names = self.names.to_vec();
        names.push(TIME.to_string());
        VarSpace::new(&names)
    }

    pub fn parse(&self, text: &str) -> Result<Expr, ExprError> {
        super::parse_expr(text, self)
    }
}

impl TryFrom<Vec<String>> for VarSpace {
    type Error = ExprError;
    fn try_from(v: Vec<String>) -> Result<Self, Self::Error> {
        VarSpace::new(&v)
    }
}

impl From<VarSpace> for Vec<String> {
    fn from(v: VarSpace) -> Self {
        v.names.to_vec()
    }
}

/// A complete assignment of finite reals to the coordinates of a `VarSpace`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    values: Vec<f64>,
}

impl Point {
    pub fn new(vars: &VarSpace, values: Vec<f64>) -> Result<Point, ExprError> {
        if values.len() != vars.len() {
            return Err(ExprError::PointArity { expected: vars.len(), got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(ExprError::NonFinite(i));
        }
        Ok(Point { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_must_be_last() {
        assert!(VarSpace::new(&["x", "t"]).is_ok());
        assert!(VarSpace::new(&["t", "x"]).is_err());
        assert!(VarSpace::new(&["x", "x"]).is_err());
        assert!(VarSpace::new(&["exp"]).is_err());
        let v = VarSpace::new(&["x", "y"]).unwrap();
        let w = v.with_time().unwrap();
        assert_eq!(w.names(), &["x", "y", "t"]);
        assert!(w.with_time().is_err());
    }

    #[test]
    fn points_are_complete_and_finite() {
        let v = VarSpace::new(&["x", "y"]).unwrap();
        assert!(Point::new(&v, vec![1.0]).is_err());
        assert!(Point::new(&v, vec![1.0, f64::NAN]).is_err());
        assert!(Point::new(&v, vec![1.0, 2.0]).is_ok());
    }
}
