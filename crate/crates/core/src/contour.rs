//! Argument-principle zero counting on circles.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{EvalError, Expr};

/// Largest argument increment accepted between neighbouring samples before
/// the arc is bisected.
const MAX_ARG_STEP: f64 = PI / 4.0;
const MAX_BISECTIONS: u32 = 48;
const MAX_MODULUS_RATIO: f64 = 2.0;

/// Winding number of `f` around 0 along the circle `|z - center| = radius`,
/// i.e. zeros minus poles inside the circle.
///
/// The circle is sampled at `nodes` equispaced points; any arc over which the
/// argument turns by more than π/4, or the modulus by more than a factor 2,
/// is bisected until the increment is resolved, so steep zeros just outside
/// the contour are not aliased.
pub fn winding_number<F>(f: F, center: Complex64, radius: f64, nodes: usize) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    let point = |theta: f64| center + Complex64::from_polar(radius, theta);
    let value = |theta: f64| -> Result<Complex64> {
        let z = point(theta);
        let v = f(z)?;
        if v.norm() < 1e-300 {
            return Err(Error::ZeroOnContour { at: z });
        }
        Ok(v)
    };
    let step = 2.0 * PI / nodes as f64;
    let mut total = 0.0;
    let mut prev = value(0.0)?;
    for k in 0..nodes {
        let (a, b) = (step * k as f64, step * (k + 1) as f64);
        let vb = if k + 1 == nodes { value(0.0)? } else { value(b)? };
        total += arc_increment(&value, a, b, prev, vb, 0)?;
        prev = vb;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

fn arc_increment<V>(value: &V, a: f64, b: f64, va: Complex64, vb: Complex64, depth: u32) -> Result<f64>
where
    V: Fn(f64) -> Result<Complex64>,
{
    let inc = (vb / va).arg();
    if depth >= MAX_BISECTIONS {
        return Ok(inc);
    }
    let m = 0.5 * (a + b);
    let vm = value(m)?;
    let (i1, i2) = ((vm / va).arg(), (vb / vm).arg());
    // a whole turn hidden between two samples shows up as a mismatch of the
    // halves, or, near a multiple zero, as a steep change of modulus
    let (lo, hi) = (va.norm().min(vb.norm()).min(vm.norm()), va.norm().max(vb.norm()).max(vm.norm()));
    if hi <= MAX_MODULUS_RATIO * lo
        && inc.abs() <= MAX_ARG_STEP
        && i1.abs() <= MAX_ARG_STEP
        && i2.abs() <= MAX_ARG_STEP
        && (i1 + i2 - inc).abs() < 1e-9
    {
        return Ok(inc);
    }
    Ok(arc_increment(value, a, m, va, vm, depth + 1)? + arc_increment(value, m, b, vm, vb, depth + 1)?)
}

/// Winding number of an expression around `|z| = radius`.
pub fn count_zeros(f: &Expr, radius: f64, nodes: usize) -> Result<i64> {
    winding_number(|z| f.eval(z), Complex64::new(0.0, 0.0), radius, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn counts_zeros_inside() {
        assert_eq!(count_zeros(&parse("z").unwrap(), 0.95, 4096).unwrap(), 1);
        assert_eq!(count_zeros(&parse("(z-0.5)*(z+0.5*i)").unwrap(), 0.95, 4096).unwrap(), 2);
        assert_eq!(count_zeros(&parse("z^2-1").unwrap(), 0.95, 4096).unwrap(), 0);
        assert_eq!(count_zeros(&parse("1/z").unwrap(), 0.5, 64).unwrap(), -1);
    }

    #[test]
    fn steep_boundary_zero_is_not_aliased() {
        // triple zero at 1, just outside the contour
        let f = parse("0.25*(z-1)^3").unwrap();
        assert_eq!(count_zeros(&f, 0.999, 4096).unwrap(), 0);
        let f = parse("(z-1)^5").unwrap();
        assert_eq!(count_zeros(&f, 0.9999, 512).unwrap(), 0);
    }

    #[test]
    fn zero_on_contour_is_reported() {
        assert!(matches!(
            count_zeros(&parse("z-0.5").unwrap(), 0.5, 8),
            Err(Error::ZeroOnContour { .. })
        ));
    }
}
