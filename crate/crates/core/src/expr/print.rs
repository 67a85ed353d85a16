//! Canonical printer, the inverse of the parser up to constant normalization.

use std::fmt;

use num_complex::Complex64;

use super::Expr;

// binding strength of each printed form
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const FACTOR: u8 = 3;
const UNARY: u8 = 4;
const ATOM: u8 = 5;

pub(super) fn write_canonical(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if contains_compose(e) {
        write_at(&e.expand_compose(), 0, f)
    } else {
        write_at(e, 0, f)
    }
}

fn contains_compose(e: &Expr) -> bool {
    match e {
        Expr::Const(_) | Expr::Var => false,
        Expr::Compose(..) => true,
        Expr::Neg(a) | Expr::Pow(a, _) => contains_compose(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            contains_compose(a) || contains_compose(b)
        }
    }
}

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) | Expr::Div(..) => PRODUCT,
        Expr::Pow(..) => FACTOR,
        Expr::Neg(..) => UNARY,
        Expr::Const(_) | Expr::Var | Expr::Compose(..) => ATOM,
    }
}

fn write_at(e: &Expr, min_level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(e) < min_level {
        f.write_str("(")?;
        write_at(e, 0, f)?;
        return f.write_str(")");
    }
    match e {
        Expr::Const(c) => write_const(*c, f),
        Expr::Var => f.write_str("z"),
        Expr::Neg(a) => {
            f.write_str("-")?;
            write_at(a, UNARY, f)
        }
        Expr::Add(a, b) => {
            write_at(a, SUM, f)?;
            f.write_str("+")?;
            write_at(b, PRODUCT, f)
        }
        Expr::Sub(a, b) => {
            write_at(a, SUM, f)?;
            f.write_str("-")?;
            write_at(b, PRODUCT, f)
        }
        Expr::Mul(a, b) => {
            write_at(a, PRODUCT, f)?;
            f.write_str("*")?;
            write_at(b, FACTOR, f)
        }
        Expr::Div(a, b) => {
            write_at(a, PRODUCT, f)?;
            f.write_str("/")?;
            write_at(b, FACTOR, f)
        }
        Expr::Pow(a, n) => {
            write_at(a, UNARY, f)?;
            write!(f, "^{n}")
        }
        // unreachable after expansion; print the substituted tree
        Expr::Compose(..) => write_at(&e.expand_compose(), min_level, f),
    }
}

fn write_const(c: Complex64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // `{:?}` is the shortest representation that reads back to the same f64
    let (re, im) = (c.re, c.im);
    if im == 0.0 {
        if re.is_sign_negative() {
            write!(f, "(-{:?})", -re)
        } else {
            write!(f, "{re:?}")
        }
    } else if re == 0.0 {
        if im.is_sign_negative() {
            write!(f, "(-{:?}*i)", -im)
        } else {
            write!(f, "({im:?}*i)")
        }
    } else {
        f.write_str("(")?;
        if re.is_sign_negative() {
            write!(f, "-{:?}", -re)?;
        } else {
            write!(f, "{re:?}")?;
        }
        if im.is_sign_negative() {
            write!(f, "-{:?}*i)", -im)
        } else {
            write!(f, "+{im:?}*i)")
        }
    }
}
