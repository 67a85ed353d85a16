//! Truncated power series ("jets") and Taylor expansion of expressions by
//! jet arithmetic.

use num_complex::Complex64;

use super::{cdiv, is_finite, EvalError, Expr, POLE_THRESHOLD};

/// Taylor coefficients `a_k = f^{(k)}(center) / k!` for `k = 0..=degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorJet {
    center: Complex64,
    coeffs: Vec<Complex64>,
}

impl TaylorJet {
    /// `coeffs` must be non-empty.
    pub fn new(center: Complex64, coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet has at least the constant coefficient");
        TaylorJet { center, coeffs }
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Value of the truncated series at `z` (Horner).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let d = z - self.center;
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * d + a)
    }

    /// Derivative of the truncated series at `z`.
    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let d = z - self.center;
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &a)| acc * d + a * k as f64)
    }

    /// Jet of the derivative; its degree is one less (at least 0).
    pub fn derivative(&self) -> TaylorJet {
        let coeffs: Vec<_> = if self.coeffs.len() == 1 {
            vec![Complex64::new(0.0, 0.0)]
        } else {
            self.coeffs.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect()
        };
        TaylorJet { center: self.center, coeffs }
    }

    /// Quotient `self / den` when both series vanish to the given `order` at
    /// the center: the leading `order` coefficients are dropped from both
    /// before dividing. The result has degree `degree - order`.
    pub fn divide_removable(&self, den: &TaylorJet, order: usize) -> Result<TaylorJet, EvalError> {
        let n = self.degree().min(den.degree());
        if order > n {
            return Err(EvalError::Pole { at: self.center });
        }
        let num = &self.coeffs[order..=n];
        let den_c = &den.coeffs[order..=n];
        let coeffs = series_div(num, den_c, self.center)?;
        Ok(TaylorJet { center: self.center, coeffs })
    }
}

fn zeros(n: usize) -> Vec<Complex64> {
    vec![Complex64::new(0.0, 0.0); n]
}

fn check(v: Vec<Complex64>, at: Complex64) -> Result<Vec<Complex64>, EvalError> {
    if v.iter().all(|&c| is_finite(c)) {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { at })
    }
}

fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut out = zeros(n);
    for (i, &ai) in a.iter().enumerate() {
        if ai == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn series_div(a: &[Complex64], b: &[Complex64], at: Complex64) -> Result<Vec<Complex64>, EvalError> {
    let b0 = b[0];
    if !(b0.norm() >= POLE_THRESHOLD) {
        return Err(EvalError::Pole { at });
    }
    let n = a.len();
    let mut q = zeros(n);
    for k in 0..n {
        let mut acc = a[k];
        for j in 1..=k {
            acc -= b[j] * q[k - j];
        }
        q[k] = cdiv(acc, b0);
    }
    check(q, at)
}

fn series_powu(a: &[Complex64], mut n: u32) -> Vec<Complex64> {
    let mut result = zeros(a.len());
    result[0] = Complex64::new(1.0, 0.0);
    let mut base = a.to_vec();
    while n > 0 {
        if n & 1 == 1 {
            result = series_mul(&result, &base);
        }
        n >>= 1;
        if n > 0 {
            base = series_mul(&base, &base);
        }
    }
    result
}

/// `outer(w0 + delta)` where `outer` is the jet at `w0` and `delta` has no
/// constant term.
fn series_compose(outer: &[Complex64], delta: &[Complex64]) -> Vec<Complex64> {
    let n = delta.len();
    let mut acc = zeros(n);
    for &o in outer.iter().rev() {
        acc = series_mul(&acc, delta);
        acc[0] += o;
    }
    acc
}

fn jet_of(e: &Expr, center: Complex64, len: usize) -> Result<Vec<Complex64>, EvalError> {
    let v = match e {
        Expr::Const(c) => {
            let mut v = zeros(len);
            v[0] = *c;
            v
        }
        Expr::Var => {
            let mut v = zeros(len);
            v[0] = center;
            if len > 1 {
                v[1] = Complex64::new(1.0, 0.0);
            }
            v
        }
        Expr::Neg(a) => jet_of(a, center, len)?.into_iter().map(|c| -c).collect(),
        Expr::Add(a, b) => {
            let (x, y) = (jet_of(a, center, len)?, jet_of(b, center, len)?);
            x.iter().zip(&y).map(|(p, q)| p + q).collect()
        }
        Expr::Sub(a, b) => {
            let (x, y) = (jet_of(a, center, len)?, jet_of(b, center, len)?);
            x.iter().zip(&y).map(|(p, q)| p - q).collect()
        }
        Expr::Mul(a, b) => series_mul(&jet_of(a, center, len)?, &jet_of(b, center, len)?),
        Expr::Div(a, b) => series_div(&jet_of(a, center, len)?, &jet_of(b, center, len)?, center)?,
        Expr::Pow(a, n) => series_powu(&jet_of(a, center, len)?, *n),
        Expr::Compose(outer, inner) => {
            let mut s = jet_of(inner, center, len)?;
            let w0 = s[0];
            let o = jet_of(outer, w0, len)?;
            s[0] = Complex64::new(0.0, 0.0);
            series_compose(&o, &s)
        }
    };
    check(v, center)
}

/// Taylor expansion of `e` around `center` to the given degree, computed by
/// jet arithmetic.
pub fn taylor(e: &Expr, center: Complex64, degree: usize) -> Result<TaylorJet, EvalError> {
    let coeffs = jet_of(e, center, degree + 1)?;
    Ok(TaylorJet { center, coeffs })
}
