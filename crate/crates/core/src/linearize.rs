//! Linearizing coordinates: the Koenigs function `h` with `μh = h'f`
//! around an interior Denjoy–Wolff point, and the Abel function
//! `p(z) = -∫₀ᶻ dζ / f(ζ)` for zero-free generators.

use num_complex::Complex64;

use crate::contour;
use crate::error::{Error, Result};
use crate::expr::{cdiv, taylor, EvalError, Expr, TaylorJet, POLE_THRESHOLD};
use crate::flow::{self, FlowParams};
use crate::quadrature;

/// Koenigs jets are evaluated only within this distance of τ.
pub const TRUST_RADIUS: f64 = 0.3;
pub const DEFAULT_DEGREE: usize = 20;
/// `|f'(τ)|` at or below this is treated as zero.
pub const PARABOLIC_INTERIOR_TOL: f64 = 1e-8;
pub const ABEL_WINDING_RADIUS: f64 = 0.999;
pub const ABEL_WINDING_NODES: usize = 4096;
pub const ABEL_ABS_TOL: f64 = 1e-11;

/// Truncated Koenigs function normalised by `h(τ) = 0`, `h'(τ) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchroederSolution {
    pub mu: Complex64,
    pub tau: Complex64,
    pub h_jet: TaylorJet,
}

impl SchroederSolution {
    fn trusted(&self, z: Complex64) -> Result<()> {
        let distance = (z - self.tau).norm();
        if distance > TRUST_RADIUS {
            return Err(Error::OutOfJetRange { distance, radius: TRUST_RADIUS });
        }
        Ok(())
    }

    pub fn h(&self, z: Complex64) -> Complex64 {
        self.h_jet.eval(z)
    }

    pub fn h_prime(&self, z: Complex64) -> Complex64 {
        self.h_jet.eval_derivative(z)
    }

    /// `|μ h(z) - h'(z) f(z)|`
    pub fn de_residual(&self, f: &Expr, z: Complex64) -> Result<f64> {
        self.trusted(z)?;
        Ok((self.mu * self.h(z) - self.h_prime(z) * f.eval(z)?).norm())
    }
}

/// Koenigs jet of degree `degree` at the interior point `tau`.
pub fn koenigs(f: &Expr, tau: Complex64, degree: usize) -> Result<SchroederSolution> {
    koenigs_seeded(f, tau, degree, Complex64::new(1.0, 0.0))
}

/// The recursion started from `h_1 = seed`; the result is `seed` times the
/// normalised solution.
pub fn koenigs_seeded(f: &Expr, tau: Complex64, degree: usize, seed: Complex64) -> Result<SchroederSolution> {
    if !(tau.norm() < 1.0) {
        return Err(Error::InvalidInput(format!("tau = {tau} is not an interior point")));
    }
    let degree = degree.max(1);
    let fj = taylor(f, tau, degree)?;
    if fj.coeff(0).norm() > crate::RESIDUAL_TOL {
        return Err(Error::InvalidInput(format!("f(tau) = {} is not zero", fj.coeff(0))));
    }
    let mu = fj.coeff(1);
    if mu.norm() <= PARABOLIC_INTERIOR_TOL {
        return Err(Error::ParabolicInterior { modulus: mu.norm() });
    }
    let mut h = vec![Complex64::new(0.0, 0.0); degree + 1];
    h[1] = seed;
    for n in 2..=degree {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..n {
            acc += h[k] * fj.coeff(n + 1 - k) * k as f64;
        }
        h[n] = acc / (mu * (1.0 - n as f64));
    }
    Ok(SchroederSolution { mu, tau, h_jet: TaylorJet::new(tau, h) })
}

/// `|h(F_t(z)) - e^{-μt} h(z)|`, both points inside the trusted radius.
pub fn schroeder_residual(
    sol: &SchroederSolution,
    f: &Expr,
    z: Complex64,
    t: f64,
    params: &FlowParams,
) -> Result<f64> {
    sol.trusted(z)?;
    let zt = flow::advance(f, z, t, params)?;
    sol.trusted(zt)?;
    Ok((sol.h(zt) - (-sol.mu * t).exp() * sol.h(z)).norm())
}

/// Abel function of a zero-free generator.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelSolution {
    pub f: Expr,
}

fn reciprocal(f: &Expr, z: Complex64) -> Result<Complex64, EvalError> {
    let v = f.eval(z)?;
    if v.norm() < POLE_THRESHOLD {
        return Err(EvalError::Pole { at: z });
    }
    Ok(cdiv(Complex64::new(1.0, 0.0), v))
}

impl AbelSolution {
    /// `p(z)` by quadrature along the segment `[0, z]`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Ok(z);
        }
        let r = quadrature::segment_integral(|w| reciprocal(&self.f, w), Complex64::new(0.0, 0.0), z, ABEL_ABS_TOL)?;
        Ok(-r.value)
    }

    /// `p(z)` by quadrature along the polyline `0 → vertices… → z`.
    pub fn eval_along(&self, vertices: &[Complex64], z: Complex64) -> Result<Complex64> {
        let mut from = Complex64::new(0.0, 0.0);
        let mut total = Complex64::new(0.0, 0.0);
        for &to in vertices.iter().chain(std::iter::once(&z)) {
            total += quadrature::segment_integral(|w| reciprocal(&self.f, w), from, to, ABEL_ABS_TOL)?.value;
            from = to;
        }
        Ok(-total)
    }
}

/// Abel solution after certifying that `f` has no zeros in `|z| < 0.999`.
pub fn abel(f: &Expr) -> Result<AbelSolution> {
    let winding = contour::count_zeros(f, ABEL_WINDING_RADIUS, ABEL_WINDING_NODES)?;
    if winding != 0 {
        return Err(Error::InteriorZero { winding });
    }
    Ok(AbelSolution { f: f.clone() })
}

/// `|p(F_t(z)) - p(z) - t|`
pub fn abel_residual(sol: &AbelSolution, z: Complex64, t: f64, params: &FlowParams) -> Result<f64> {
    let zt = flow::advance(&sol.f, z, t, params)?;
    Ok((sol.eval(zt)? - sol.eval(z)? - t).norm())
}
