use std::fmt;

use super::{Expr, Kind};

// Where a subexpression sits; decides whether it needs parentheses so that
// the printed text parses back to the same tree.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Top,
    SumLead,
    MulLead,
    MulRest,
    DivLeft,
    DivRight,
    NegInner,
    PowBase,
}

fn needs_parens(e: &Expr, slot: Slot) -> bool {
    match (slot, e.kind()) {
        (Slot::Top, _) => false,
        (_, Kind::Add(_)) => true,
        (Slot::SumLead | Slot::DivLeft, _) => false,
        (Slot::MulLead, Kind::Mul(_)) => true,
        (Slot::MulLead, _) => false,
        (Slot::MulRest | Slot::DivRight, Kind::Mul(_) | Kind::Div(..)) => true,
        (Slot::MulRest | Slot::DivRight, _) => false,
        (Slot::NegInner, Kind::Mul(_) | Kind::Div(..) | Kind::Num(_)) => true,
        (Slot::NegInner, _) => false,
        (Slot::PowBase, Kind::Var { .. } | Kind::Func(..)) => false,
        (Slot::PowBase, Kind::Num(c)) => c.is_sign_negative(),
        (Slot::PowBase, _) => true,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, slot: Slot) -> fmt::Result {
    if needs_parens(e, slot) {
        f.write_str("(")?;
        write_bare(f, e)?;
        f.write_str(")")
    } else {
        write_bare(f, e)
    }
}

fn write_bare(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e.kind() {
        Kind::Num(c) => write!(f, "{c}"),
        Kind::Var { name, .. } => f.write_str(name),
        Kind::Neg(x) => {
            f.write_str("-")?;
            write_at(f, x, Slot::NegInner)
        }
        Kind::Add(xs) => {
            write_at(f, &xs[0], Slot::SumLead)?;
            for x in &xs[1..] {
                match x.kind() {
                    Kind::Neg(inner) => {
                        f.write_str(" - ")?;
                        write_at(f, inner, Slot::SumLead)?;
                    }
                    _ => {
                        f.write_str(" + ")?;
                        write_at(f, x, Slot::SumLead)?;
                    }
                }
            }
            Ok(())
        }
        Kind::Mul(xs) => {
            write_at(f, &xs[0], Slot::MulLead)?;
            for x in &xs[1..] {
                f.write_str("*")?;
                write_at(f, x, Slot::MulRest)?;
            }
            Ok(())
        }
        Kind::Div(a, b) => {
            write_at(f, a, Slot::DivLeft)?;
            f.write_str("/")?;
            write_at(f, b, Slot::DivRight)
        }
        Kind::Pow(b, k) => {
            write_at(f, b, Slot::PowBase)?;
            write!(f, "^{k}")
        }
        Kind::Func(func, x) => {
            write!(f, "{}(", func.name())?;
            write_at(f, x, Slot::Top)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, Slot::Top)
    }
}
