//! Holomorphic functions of one complex variable as expression trees.
//!
//! An [`Expr`] is built from complex constants, the variable `z`, the
//! field operations, non-negative integer powers and composition. Trees are
//! immutable once built; every operation here is a pure function of its
//! inputs.

mod jet;
mod parse;
mod print;

use std::fmt;
use std::ops;

use num_complex::Complex64;

pub use jet::{taylor, TaylorJet};
pub use parse::{parse, ParseError, MAX_DEPTH};

/// Complex scalar used throughout the crate.
pub type ComplexValue = Complex64;

/// Denominators below this modulus are treated as poles.
pub const POLE_THRESHOLD: f64 = 1e-300;

/// Failure while evaluating an expression at a point.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("pole: denominator vanishes at z = {at}")]
    Pole { at: Complex64 },
    #[error("non-finite value at z = {at}")]
    NonFinite { at: Complex64 },
}

/// Expression tree over `z`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// `base ^ exponent`
    Pow(Box<Expr>, u32),
    /// `outer(inner(z))`
    Compose(Box<Expr>, Box<Expr>),
}

#[inline]
pub(crate) fn is_finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

/// Complex division that stays accurate for tiny or huge denominators
/// (Smith's algorithm). The naive formula squares `|b|` and underflows long
/// before the pole threshold is reached.
pub fn cdiv(a: Complex64, b: Complex64) -> Complex64 {
    if b.re.abs() >= b.im.abs() {
        let r = b.im / b.re;
        let d = b.re + b.im * r;
        Complex64::new((a.re + a.im * r) / d, (a.im - a.re * r) / d)
    } else {
        let r = b.re / b.im;
        let d = b.re * r + b.im;
        Complex64::new((a.re * r + a.im) / d, (a.im * r - a.re) / d)
    }
}

impl Expr {
    pub fn constant(c: Complex64) -> Self {
        Expr::Const(c)
    }

    pub fn real(x: f64) -> Self {
        Expr::Const(Complex64::new(x, 0.0))
    }

    pub fn var() -> Self {
        Expr::Var
    }

    pub fn zero() -> Self {
        Expr::real(0.0)
    }

    pub fn one() -> Self {
        Expr::real(1.0)
    }

    pub fn pow(self, n: u32) -> Self {
        Expr::Pow(Box::new(self), n)
    }

    /// `self(inner(z))`
    pub fn compose(self, inner: Expr) -> Self {
        Expr::Compose(Box::new(self), Box::new(inner))
    }

    /// `(z - a)` as a tree.
    pub fn shifted_var(a: Complex64) -> Self {
        Expr::Var - Expr::Const(a)
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Exact recursive evaluation in double precision.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => z,
            Expr::Neg(a) => -a.eval(z)?,
            Expr::Add(a, b) => a.eval(z)? + b.eval(z)?,
            Expr::Sub(a, b) => a.eval(z)? - b.eval(z)?,
            Expr::Mul(a, b) => a.eval(z)? * b.eval(z)?,
            Expr::Div(a, b) => {
                let num = a.eval(z)?;
                let den = b.eval(z)?;
                if !(den.norm() >= POLE_THRESHOLD) {
                    return Err(EvalError::Pole { at: z });
                }
                cdiv(num, den)
            }
            Expr::Pow(a, n) => a.eval(z)?.powu(*n),
            Expr::Compose(outer, inner) => outer.eval(inner.eval(z)?)?,
        };
        if is_finite(v) {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { at: z })
        }
    }

    /// Symbolic derivative with respect to `z`.
    ///
    /// Constant subtrees are folded and the neutral elements of `+` and `*`
    /// are dropped so that repeated differentiation does not blow up.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var => Expr::one(),
            Expr::Neg(a) => s_neg(a.derivative()),
            Expr::Add(a, b) => s_add(a.derivative(), b.derivative()),
            Expr::Sub(a, b) => s_sub(a.derivative(), b.derivative()),
            Expr::Mul(a, b) => s_add(
                s_mul(a.derivative(), (**b).clone()),
                s_mul((**a).clone(), b.derivative()),
            ),
            Expr::Div(a, b) => s_div(
                s_sub(
                    s_mul(a.derivative(), (**b).clone()),
                    s_mul((**a).clone(), b.derivative()),
                ),
                s_pow((**b).clone(), 2),
            ),
            Expr::Pow(a, n) => match *n {
                0 => Expr::zero(),
                n => s_mul(
                    s_mul(Expr::real(f64::from(n)), s_pow((**a).clone(), n - 1)),
                    a.derivative(),
                ),
            },
            Expr::Compose(outer, inner) => s_mul(
                s_compose(outer.derivative(), (**inner).clone()),
                inner.derivative(),
            ),
        }
    }

    /// Replace every occurrence of `z` by `replacement`.
    pub fn substitute(&self, replacement: &Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => replacement.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(replacement))),
            Expr::Add(a, b) => Expr::Add(
                Box::new(a.substitute(replacement)),
                Box::new(b.substitute(replacement)),
            ),
            Expr::Sub(a, b) => Expr::Sub(
                Box::new(a.substitute(replacement)),
                Box::new(b.substitute(replacement)),
            ),
            Expr::Mul(a, b) => Expr::Mul(
                Box::new(a.substitute(replacement)),
                Box::new(b.substitute(replacement)),
            ),
            Expr::Div(a, b) => Expr::Div(
                Box::new(a.substitute(replacement)),
                Box::new(b.substitute(replacement)),
            ),
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.substitute(replacement)), *n),
            Expr::Compose(outer, inner) => {
                let inner = inner.substitute(replacement);
                Expr::Compose(outer.clone(), Box::new(inner))
            }
        }
    }

    /// Inline every `Compose` node.
    pub fn expand_compose(&self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => Expr::Var,
            Expr::Neg(a) => Expr::Neg(Box::new(a.expand_compose())),
            Expr::Add(a, b) => Expr::Add(Box::new(a.expand_compose()), Box::new(b.expand_compose())),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.expand_compose()), Box::new(b.expand_compose())),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.expand_compose()), Box::new(b.expand_compose())),
            Expr::Div(a, b) => Expr::Div(Box::new(a.expand_compose()), Box::new(b.expand_compose())),
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.expand_compose()), *n),
            Expr::Compose(outer, inner) => outer.expand_compose().substitute(&inner.expand_compose()),
        }
    }

    /// Bottom-up folding of constant subtrees. A constant subtree whose
    /// value would be a pole or non-finite is left as is.
    pub fn fold_constants(&self) -> Expr {
        let node = match self {
            Expr::Const(_) | Expr::Var => return self.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.fold_constants())),
            Expr::Add(a, b) => Expr::Add(Box::new(a.fold_constants()), Box::new(b.fold_constants())),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.fold_constants()), Box::new(b.fold_constants())),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.fold_constants()), Box::new(b.fold_constants())),
            Expr::Div(a, b) => Expr::Div(Box::new(a.fold_constants()), Box::new(b.fold_constants())),
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.fold_constants()), *n),
            Expr::Compose(o, i) => Expr::Compose(Box::new(o.fold_constants()), Box::new(i.fold_constants())),
        };
        fold_node(node)
    }

    /// Constant normalization: composition expanded, constants folded.
    /// `parse(&e.to_string())` is structurally equal to `e.normalize()`.
    pub fn normalize(&self) -> Expr {
        self.expand_compose().fold_constants()
    }

    /// Height of the tree (a leaf has depth 1).
    pub fn depth(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Neg(a) | Expr::Pow(a, _) => 1 + a.depth(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Expr::Compose(o, i) => 1 + o.depth().max(i.depth()),
        }
    }

    /// Smallest modulus of any `Div` denominator evaluated at `z`; `None`
    /// when the tree has no division or a subtree fails to evaluate.
    pub fn min_denominator_modulus(&self, z: Complex64) -> Option<f64> {
        fn walk(e: &Expr, z: Complex64, acc: &mut Option<f64>) -> Result<(), EvalError> {
            match e {
                Expr::Const(_) | Expr::Var => {}
                Expr::Neg(a) | Expr::Pow(a, _) => walk(a, z, acc)?,
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                    walk(a, z, acc)?;
                    walk(b, z, acc)?;
                }
                Expr::Div(a, b) => {
                    walk(a, z, acc)?;
                    walk(b, z, acc)?;
                    let m = b.eval(z)?.norm();
                    *acc = Some(acc.map_or(m, |x| x.min(m)));
                }
                Expr::Compose(o, i) => {
                    walk(i, z, acc)?;
                    walk(o, i.eval(z)?, acc)?;
                }
            }
            Ok(())
        }
        let mut acc = None;
        walk(self, z, &mut acc).ok()?;
        acc
    }
}

/// Collapse a node whose children are all constants into a constant.
pub(crate) fn fold_node(node: Expr) -> Expr {
    let all_const = match &node {
        Expr::Const(_) | Expr::Var => return node,
        Expr::Neg(a) | Expr::Pow(a, _) => a.as_const().is_some(),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            a.as_const().is_some() && b.as_const().is_some()
        }
        Expr::Compose(o, _) => o.as_const().is_some(),
    };
    if !all_const {
        return node;
    }
    match node.eval(Complex64::new(0.0, 0.0)) {
        Ok(v) => Expr::Const(v),
        Err(_) => node,
    }
}

fn is_const(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Const(c) if c.re == v && c.im == 0.0)
}

pub(crate) fn s_neg(a: Expr) -> Expr {
    match a {
        Expr::Neg(inner) => *inner,
        a => fold_node(Expr::Neg(Box::new(a))),
    }
}

pub(crate) fn s_add(a: Expr, b: Expr) -> Expr {
    if is_const(&a, 0.0) {
        return b;
    }
    if is_const(&b, 0.0) {
        return a;
    }
    fold_node(Expr::Add(Box::new(a), Box::new(b)))
}

pub(crate) fn s_sub(a: Expr, b: Expr) -> Expr {
    if is_const(&b, 0.0) {
        return a;
    }
    if is_const(&a, 0.0) {
        return s_neg(b);
    }
    fold_node(Expr::Sub(Box::new(a), Box::new(b)))
}

pub(crate) fn s_mul(a: Expr, b: Expr) -> Expr {
    if is_const(&a, 0.0) || is_const(&b, 0.0) {
        return Expr::zero();
    }
    if is_const(&a, 1.0) {
        return b;
    }
    if is_const(&b, 1.0) {
        return a;
    }
    fold_node(Expr::Mul(Box::new(a), Box::new(b)))
}

pub(crate) fn s_div(a: Expr, b: Expr) -> Expr {
    if is_const(&b, 1.0) {
        return a;
    }
    if is_const(&a, 0.0) {
        return Expr::zero();
    }
    fold_node(Expr::Div(Box::new(a), Box::new(b)))
}

pub(crate) fn s_pow(a: Expr, n: u32) -> Expr {
    match n {
        0 => Expr::one(),
        1 => a,
        n => fold_node(Expr::Pow(Box::new(a), n)),
    }
}

pub(crate) fn s_compose(outer: Expr, inner: Expr) -> Expr {
    match outer {
        Expr::Const(c) => Expr::Const(c),
        Expr::Var => inner,
        outer => Expr::Compose(Box::new(outer), Box::new(inner)),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_canonical(self, f)
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl From<Complex64> for Expr {
    fn from(c: Complex64) -> Self {
        Expr::Const(c)
    }
}

impl From<f64> for Expr {
    fn from(x: f64) -> Self {
        Expr::real(x)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl ops::$tr for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
        impl ops::$tr<Complex64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Complex64) -> Expr {
                Expr::$variant(Box::new(self), Box::new(Expr::Const(rhs)))
            }
        }
        impl ops::$tr<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::$variant(Box::new(self), Box::new(Expr::real(rhs)))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = p("z^2 - 1");
        assert_eq!(f.eval(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        let v = f.eval(c(0.0, 0.5)).unwrap();
        assert!((v - c(-1.25, 0.0)).norm() < 1e-15);
        assert_eq!(p("1/(1-z)").eval(c(0.5, 0.0)).unwrap(), c(2.0, 0.0));
        assert_eq!(p("(z-1)*(1-z)").eval(c(0.0, 0.0)).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn eval_pole_and_overflow() {
        assert!(matches!(p("1/(1-z)").eval(c(1.0, 0.0)), Err(EvalError::Pole { .. })));
        assert!(matches!(p("z^400").eval(c(10.0, 0.0)), Err(EvalError::NonFinite { .. })));
        // tiny but admissible denominators divide without underflow
        let v = p("1/z").eval(c(1e-200, 0.0)).unwrap();
        assert!((v.re - 1e200).abs() / 1e200 < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let d = p("z^2-1").derivative();
        assert_eq!(d.eval(c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        assert_eq!(p("3+2*i").derivative(), Expr::zero());
        let d = p("1/(1-z)").derivative();
        assert!((d.eval(c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_of_composition_uses_chain_rule() {
        // (z^2)∘(1-z) = (1-z)^2, derivative -2(1-z)
        let e = p("z^2").compose(p("1-z"));
        let d = e.derivative();
        let z = c(0.3, -0.2);
        let want = -2.0 * (c(1.0, 0.0) - z);
        assert!((d.eval(z).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn substitution_and_expansion() {
        let e = p("z^2+1").compose(p("2*z"));
        let z = c(0.1, 0.4);
        assert!((e.expand_compose().eval(z).unwrap() - e.eval(z).unwrap()).norm() < 1e-15);
        assert!(!format!("{:?}", e.expand_compose()).contains("Compose"));
    }

    #[test]
    fn folding_keeps_poles_unfolded() {
        let e = Expr::one() / Expr::zero();
        assert_eq!(e.fold_constants(), e);
        assert_eq!((Expr::real(2.0) * Expr::real(3.0)).fold_constants(), Expr::real(6.0));
    }

    #[test]
    fn depth_counts_levels() {
        assert_eq!(Expr::Var.depth(), 1);
        assert_eq!(p("(z+1)*z").depth(), 3);
    }
}
