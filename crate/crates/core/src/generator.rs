//! Infinitesimal generators: the sampled generator inequality, the
//! Denjoy–Wolff point, and the two structural representations
//!
//! * `f(z) = (z - τ)(1 - τ̄z) g(z)` with `Re g >= 0` (Berkson–Porta), and
//! * `f(z) = a - ā z² + z p(z)` with `Re p >= 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::boundary::{self, Verdict};
use crate::contour;
use crate::error::{Error, Result};
use crate::expr::{taylor, Expr, TaylorJet};
use crate::grid::PolarGrid;
use crate::{PARABOLIC_TOL, RESIDUAL_TOL};

/// Radius of the circle on which interior zeros are counted.
pub const WINDING_RADIUS: f64 = 0.95;
pub const WINDING_NODES: usize = 4096;
/// Number of boundary directions in the coarse scan for a boundary τ.
pub const BOUNDARY_DIRECTIONS: usize = 720;
const SCAN_RADIUS: f64 = 0.999;
const GOLDEN_WIDTH: f64 = 1e-10;
/// Within this distance of the removable singularity the quotient is
/// evaluated from Taylor jets.
pub const REMOVABLE_RADIUS: f64 = 1e-4;
const REMOVABLE_DEGREE: usize = 12;
const HERGLOTZ_CHECK_TOL: f64 = 1e-6;

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Location class of the Denjoy–Wolff point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DwKind {
    Interior,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DwPoint {
    pub tau: Complex64,
    pub kind: DwKind,
}

/// Result of a sampled inequality check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckReport {
    pub passed: bool,
    pub min_margin: f64,
    pub worst_point: Complex64,
    pub samples: usize,
}

impl CheckReport {
    pub(crate) fn from_margins<I>(margins: I, tol: f64) -> CheckReport
    where
        I: IntoIterator<Item = (Complex64, f64)>,
    {
        let mut min_margin = f64::INFINITY;
        let mut worst_point = c0();
        let mut samples = 0;
        for (z, m) in margins {
            samples += 1;
            if m < min_margin {
                min_margin = m;
                worst_point = z;
            }
        }
        CheckReport { passed: min_margin >= -tol, min_margin, worst_point, samples }
    }
}

/// Samples `Re(f(z) z̄) - Re(f(0) z̄)(1 - |z|²)` over the grid. A failing
/// report (margin below `-tol`) certifies that `f` is not a generator; a
/// passing one is evidence only.
pub fn check_condition_ii(f: &Expr, grid: &PolarGrid, tol: f64) -> Result<CheckReport> {
    let a = f.eval(c0())?;
    let mut margins = Vec::with_capacity(grid.len());
    for z in grid.points() {
        let fz = f.eval(z)?;
        let m = (fz * z.conj()).re - (a * z.conj()).re * (1.0 - z.norm_sqr());
        margins.push((z, m));
    }
    Ok(CheckReport::from_margins(margins, tol))
}

/// A quotient `numerator / denominator` with a removable singularity at
/// `point`, where both vanish to first order.
#[derive(Clone, Debug, PartialEq)]
pub struct RemovableQuotient {
    expr: Expr,
    point: Option<Complex64>,
    jet: Option<TaylorJet>,
}

impl RemovableQuotient {
    fn new(numerator: Expr, denominator: Expr, point: Option<Complex64>) -> Result<Self> {
        let jet = match point {
            Some(p) => {
                let nj = taylor(&numerator, p, REMOVABLE_DEGREE)?;
                let dj = taylor(&denominator, p, REMOVABLE_DEGREE)?;
                Some(nj.divide_removable(&dj, 1)?)
            }
            None => None,
        };
        let expr = numerator / denominator;
        Ok(RemovableQuotient { expr, point, jet })
    }

    /// Symbolic quotient; evaluating it exactly at the removable point is a
    /// pole, use [`RemovableQuotient::eval`] instead.
    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Taylor jet of the quotient at the removable point, if there is one.
    pub fn jet(&self) -> Option<&TaylorJet> {
        self.jet.as_ref()
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if let (Some(p), Some(jet)) = (self.point, &self.jet) {
            if (z - p).norm() < REMOVABLE_RADIUS {
                return Ok(jet.eval(z));
            }
        }
        Ok(self.expr.eval(z)?)
    }
}

/// `(z - τ)(1 - τ̄ z)`
pub fn bp_denominator(tau: Complex64) -> Expr {
    Expr::shifted_var(tau) * (Expr::one() - Expr::Const(tau.conj()) * Expr::Var)
}

/// The factor `g = f / ((z - τ)(1 - τ̄ z))`.
pub fn berkson_porta_factor(f: &Expr, tau: Complex64) -> Result<RemovableQuotient> {
    let interior = tau.norm() < 1.0 - 1e-9;
    if interior {
        let v = f.eval(tau)?;
        if v.norm() > RESIDUAL_TOL {
            return Err(crate::expr::EvalError::Pole { at: tau }.into());
        }
    }
    RemovableQuotient::new(f.clone(), bp_denominator(tau), interior.then_some(tau))
}

/// Representation `f(z) = a - ā z² + z p(z)`: returns `a = f(0)` and `p`.
pub fn rep_iv(f: &Expr) -> Result<(Complex64, RemovableQuotient)> {
    let a = f.eval(c0())?;
    let numerator = f.clone() - Expr::Const(a) + Expr::Const(a.conj()) * Expr::Var.pow(2);
    let p = RemovableQuotient::new(numerator, Expr::Var, Some(c0()))?;
    Ok((a, p))
}

/// True when `f = a + i b z - ā z²` with real `b`, the generators of groups
/// of disk automorphisms: `p` from [`rep_iv`] is a purely imaginary
/// constant.
pub fn is_automorphism_group_generator(f: &Expr) -> Result<bool> {
    let (_, p) = rep_iv(f)?;
    let jet = match p.jet() {
        Some(j) => j,
        None => return Ok(false),
    };
    let constant = jet.coeff(0).re.abs() <= RESIDUAL_TOL;
    let flat = (1..=6).all(|k| jet.coeff(k).norm() <= RESIDUAL_TOL);
    Ok(constant && flat)
}

/// Newton iterations from the standard seeds; returns every converged root
/// with `|f| < 1e-12`.
pub fn newton_roots(f: &Expr) -> Vec<Complex64> {
    let df = f.derivative();
    let mut seeds = vec![c0()];
    seeds.extend((0..8).map(|k| Complex64::from_polar(0.5, 2.0 * PI * k as f64 / 8.0)));
    seeds.into_iter().filter_map(|z0| newton(f, &df, z0)).collect()
}

fn newton(f: &Expr, df: &Expr, mut z: Complex64) -> Option<Complex64> {
    for _ in 0..100 {
        let fz = f.eval(z).ok()?;
        if fz.norm() < 1e-15 {
            break;
        }
        let d = df.eval(z).ok()?;
        if d.norm() < 1e-300 {
            return None;
        }
        let step = fz / d;
        z -= step;
        if z.norm() > 10.0 {
            return None;
        }
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    match f.eval(z) {
        Ok(v) if v.norm() < 1e-12 => Some(z),
        _ => None,
    }
}

/// `|f(e^{iθ})|`, with failed evaluations counting as +∞.
fn circle_modulus(f: &Expr, r: f64, theta: f64) -> f64 {
    f.eval(Complex64::from_polar(r, theta)).map(|v| v.norm()).unwrap_or(f64::INFINITY)
}

fn golden_section<F: Fn(f64) -> f64>(phi: F, mut a: f64, mut b: f64, width: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (phi(x1), phi(x2));
    while b - a > width {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = phi(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = phi(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// A boundary point at which `f` vanishes, with `|f|` there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryNull {
    pub point: Complex64,
    pub modulus: f64,
}

/// Boundary null points of `f`, most pronounced first.
///
/// Directions are scanned on `|z| = 0.999`; every local minimum of
/// `|f(0.999ζ)|` is refined by golden-section search on the unit circle and
/// polished with Newton steps. Directions within `exclude.1` radians of
/// `exclude.0` are skipped.
pub fn boundary_null_points(f: &Expr, exclude: Option<(Complex64, f64)>) -> Vec<BoundaryNull> {
    let n = BOUNDARY_DIRECTIONS;
    let step = 2.0 * PI / n as f64;
    let scan: Vec<f64> = (0..n).map(|k| circle_modulus(f, SCAN_RADIUS, step * k as f64)).collect();
    let excluded = |theta: f64| match exclude {
        Some((p, arc)) => (Complex64::from_polar(1.0, theta) * p.conj()).arg().abs() < arc,
        None => false,
    };
    let mut minima: Vec<(usize, f64)> = (0..n)
        .filter(|&k| {
            let (l, r) = (scan[(k + n - 1) % n], scan[(k + 1) % n]);
            scan[k].is_finite() && scan[k] <= l && scan[k] <= r && !excluded(step * k as f64)
        })
        .map(|k| (k, scan[k]))
        .collect();
    minima.sort_by(|a, b| a.1.total_cmp(&b.1));
    minima.dedup_by(|a, b| (a.0 as i64 - b.0 as i64).abs() <= 1);
    let df = f.derivative();
    let mut out: Vec<BoundaryNull> = Vec::new();
    for (k, _) in minima.into_iter().take(8) {
        let center = step * k as f64;
        let (theta, modulus) =
            golden_section(|t| circle_modulus(f, 1.0, t), center - 2.0 * step, center + 2.0 * step, GOLDEN_WIDTH);
        let mut point = Complex64::from_polar(1.0, theta);
        let mut best = modulus;
        // Newton polish, kept only when it improves and stays on the circle
        let mut z = point;
        for _ in 0..12 {
            let (fz, d) = match (f.eval(z), df.eval(z)) {
                (Ok(a), Ok(b)) if b.norm() > 1e-300 => (a, b),
                _ => break,
            };
            z -= fz / d;
            if (z - point).norm() > 1e-6 {
                break;
            }
            let snapped = z / z.norm();
            let m = f.eval(snapped).map(|v| v.norm()).unwrap_or(f64::INFINITY);
            if m <= best {
                best = m;
                point = snapped;
            }
        }
        if excluded(point.arg()) || out.iter().any(|b| (b.point - point).norm() < 1e-6) {
            continue;
        }
        out.push(BoundaryNull { point, modulus: best });
    }
    out
}

/// Locates the Denjoy–Wolff point.
///
/// Interior points are Newton roots certified by a winding count of 1 on
/// `|z| = 0.95`. With winding count 0 the boundary is scanned; a boundary
/// candidate is accepted only if `Re g >= -1e-6` on a grid for the
/// corresponding Berkson–Porta factor.
pub fn find_dw_point(f: &Expr) -> Result<DwPoint> {
    if PolarGrid::residual().points().iter().all(|&z| matches!(f.eval(z), Ok(v) if v.norm() == 0.0)) {
        return Err(Error::NoDwFound("function vanishes identically".into()));
    }
    let roots: Vec<Complex64> = newton_roots(f).into_iter().filter(|z| z.norm() < 1.0 - 1e-9).collect();
    let winding = match contour::count_zeros(f, WINDING_RADIUS, WINDING_NODES) {
        Ok(w) => Some(w),
        Err(Error::ZeroOnContour { .. }) => None,
        Err(e) => return Err(e),
    };
    match winding {
        Some(1) => {
            let root = roots
                .iter()
                .copied()
                .filter(|z| z.norm() < WINDING_RADIUS)
                .min_by(|a, b| a.norm().total_cmp(&b.norm()))
                .ok_or_else(|| Error::NoDwFound("winding count 1 but Newton did not converge".into()))?;
            Ok(DwPoint { tau: root, kind: DwKind::Interior })
        }
        Some(0) | None => {
            // a zero in the annulus outside the counting circle, certified on a
            // circle just beyond it; Newton also "converges" to points within
            // 1e-6 of a multiple boundary zero, which this rejects
            for &root in roots.iter().filter(|z| z.norm() >= WINDING_RADIUS - 1e-12 && z.norm() < 1.0 - 1e-6) {
                let r = 0.5 * (1.0 + root.norm());
                if matches!(contour::count_zeros(f, r, WINDING_NODES), Ok(1)) {
                    return Ok(DwPoint { tau: root, kind: DwKind::Interior });
                }
            }
            locate_boundary_dw(f)
        }
        Some(w) => Err(Error::NoDwFound(format!("winding count {w} on |z| = {WINDING_RADIUS}"))),
    }
}

fn locate_boundary_dw(f: &Expr) -> Result<DwPoint> {
    let check_grid = PolarGrid::residual();
    for cand in boundary_null_points(f, None) {
        if cand.modulus > 1e-6 {
            continue;
        }
        let g = match berkson_porta_factor(f, cand.point) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let herglotz = check_grid
            .points()
            .into_iter()
            .all(|z| matches!(g.eval(z), Ok(v) if v.re >= -HERGLOTZ_CHECK_TOL));
        if herglotz {
            return Ok(DwPoint { tau: cand.point, kind: DwKind::Boundary });
        }
    }
    Err(Error::NoDwFound("no boundary null point with a nonnegative-real-part factor".into()))
}

/// Classification of a generator by its Denjoy–Wolff point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorType {
    InteriorDW,
    BoundaryHyperbolic,
    BoundaryParabolic,
}

impl GeneratorType {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorType::InteriorDW => "InteriorDW",
            GeneratorType::BoundaryHyperbolic => "BoundaryHyperbolic",
            GeneratorType::BoundaryParabolic => "BoundaryParabolic",
        }
    }
}

/// `f'(τ)`: the ordinary derivative at an interior point, the angular
/// derivative at a boundary point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivativeAtTau {
    Interior(Complex64),
    Angular(f64),
    Infinite,
}

#[derive(Clone, Debug)]
pub struct GeneratorRecord {
    pub f: Expr,
    pub a: Complex64,
    pub dw: DwPoint,
    pub g: RemovableQuotient,
    pub p: RemovableQuotient,
    pub derivative_at_tau: DerivativeAtTau,
    pub kind: GeneratorType,
}

impl GeneratorRecord {
    /// Max over the grid of `|f - (z-τ)(1-τ̄z)g| / (1 + |f|)`.
    pub fn factorization_residual(&self, grid: &PolarGrid) -> Result<f64> {
        let den = bp_denominator(self.dw.tau);
        let mut worst: f64 = 0.0;
        for z in grid.points() {
            let fz = self.f.eval(z)?;
            let r = (fz - den.eval(z)? * self.g.eval(z)?).norm() / (1.0 + fz.norm());
            worst = worst.max(r);
        }
        Ok(worst)
    }

    /// Max over the grid of `|f - a + ā z² - z p(z)|`.
    pub fn rep_iv_residual(&self, grid: &PolarGrid) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for z in grid.points() {
            let r = (self.f.eval(z)? - self.a + self.a.conj() * z * z - z * self.p.eval(z)?).norm();
            worst = worst.max(r);
        }
        Ok(worst)
    }

    /// Smallest `Re g` over the grid.
    pub fn min_re_g(&self, grid: &PolarGrid) -> Result<f64> {
        let mut m = f64::INFINITY;
        for z in grid.points() {
            m = m.min(self.g.eval(z)?.re);
        }
        Ok(m)
    }
}

/// Builds the full generator record: Denjoy–Wolff point, both
/// representations and the type.
pub fn analyze(f: &Expr) -> Result<GeneratorRecord> {
    let dw = find_dw_point(f)?;
    let g = berkson_porta_factor(f, dw.tau)?;
    let (a, p) = rep_iv(f)?;
    let (derivative_at_tau, kind) = match dw.kind {
        DwKind::Interior => {
            let d = f.derivative().eval(dw.tau)?;
            (DerivativeAtTau::Interior(d), GeneratorType::InteriorDW)
        }
        DwKind::Boundary => {
            let est = boundary::angular_derivative(f, dw.tau)?;
            match est.verdict {
                Verdict::Finite => {
                    let v = est.value.re;
                    let kind = if v.abs() <= PARABOLIC_TOL {
                        GeneratorType::BoundaryParabolic
                    } else {
                        GeneratorType::BoundaryHyperbolic
                    };
                    (DerivativeAtTau::Angular(v), kind)
                }
                Verdict::Infinite => (DerivativeAtTau::Infinite, GeneratorType::BoundaryHyperbolic),
                Verdict::Divergent => return Err(Error::DivergentCoefficient { order: 1 }),
            }
        }
    };
    Ok(GeneratorRecord { f: f.clone(), a, dw, g, p, derivative_at_tau, kind })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn condition_ii_examples() {
        let grid = PolarGrid::condition_ii();
        let r = check_condition_ii(&p("z"), &grid, 1e-9).unwrap();
        assert!(r.passed);
        assert_eq!(r.min_margin, 0.0);

        let r = check_condition_ii(&p("(z-1)*(1-z)"), &grid, 1e-9).unwrap();
        assert!(r.passed);

        let r = check_condition_ii(&p("-z"), &grid, 1e-9).unwrap();
        assert!(!r.passed);
        assert!((r.min_margin + 0.995f64.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn condition_ii_margin_on_real_axis_matches_hand_algebra() {
        // f = -(1-z)^2, independent expansion: at real r the margin is 2r^2(1-r)
        let f = p("(z-1)*(1-z)");
        for &r in &[0.1, 0.37, 0.8, 0.99] {
            let z = c(r, 0.0);
            let fz = f.eval(z).unwrap();
            let a = f.eval(c(0.0, 0.0)).unwrap();
            let margin = (fz * z.conj()).re - (a * z.conj()).re * (1.0 - r * r);
            let hand = 2.0 * r * r * (1.0 - r);
            assert!((margin - hand).abs() < 1e-14, "r={r}");
        }
    }

    #[test]
    fn dw_points() {
        let d = find_dw_point(&p("z")).unwrap();
        assert_eq!(d.kind, DwKind::Interior);
        assert!(d.tau.norm() < 1e-12);

        let d = find_dw_point(&p("z^2-1")).unwrap();
        assert_eq!(d.kind, DwKind::Boundary);
        assert!((d.tau - c(1.0, 0.0)).norm() < 1e-10, "{}", d.tau);

        let d = find_dw_point(&p("(z-1)*(1-z)")).unwrap();
        assert_eq!(d.kind, DwKind::Boundary);
        assert!((d.tau - c(1.0, 0.0)).norm() < 1e-8, "{}", d.tau);

        let d = find_dw_point(&p("1-z^2")).unwrap();
        assert!((d.tau - c(-1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn dw_point_off_axis() {
        let tau = Complex64::from_polar(1.0, 2.0);
        let f = bp_denominator(tau) * 0.5;
        let d = find_dw_point(&f).unwrap();
        assert_eq!(d.kind, DwKind::Boundary);
        assert!((d.tau - tau).norm() < 1e-8);

        let tau = c(0.3, -0.4);
        let f = bp_denominator(tau) * (Expr::real(2.0) + Expr::Var);
        let d = find_dw_point(&f).unwrap();
        assert_eq!(d.kind, DwKind::Interior);
        assert!((d.tau - tau).norm() < 1e-12);
    }

    #[test]
    fn dw_rejects_multiple_interior_zeros_and_zero_function() {
        assert!(matches!(find_dw_point(&p("z^2")), Err(Error::NoDwFound(_))));
        assert!(matches!(find_dw_point(&p("0")), Err(Error::NoDwFound(_))));
    }

    #[test]
    fn newton_seeds_agree() {
        let tau = c(-0.2, 0.6);
        let f = bp_denominator(tau) * (Expr::real(1.5) - Expr::Var * 0.5);
        let inside: Vec<_> = newton_roots(&f).into_iter().filter(|z| z.norm() < 1.0).collect();
        assert!(!inside.is_empty());
        for r in inside {
            assert!((r - tau).norm() < 1e-8);
        }
    }

    #[test]
    fn bp_factor_examples() {
        let g = berkson_porta_factor(&p("z^2-1"), c(1.0, 0.0)).unwrap();
        for z in [c(0.3, 0.1), c(-0.5, 0.5), c(0.0, 0.0)] {
            let want = (c(1.0, 0.0) + z) / (c(1.0, 0.0) - z);
            assert!((g.eval(z).unwrap() - want).norm() < 1e-14);
        }
        let g = berkson_porta_factor(&p("z"), c(0.0, 0.0)).unwrap();
        assert!((g.eval(c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        assert!((g.eval(c(5e-5, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        assert!((g.eval(c(0.4, 0.2)).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        let g = berkson_porta_factor(&p("(z-1)*(1-z)"), c(1.0, 0.0)).unwrap();
        assert!((g.eval(c(0.7, -0.1)).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn bp_factor_rejects_non_divisible() {
        assert!(berkson_porta_factor(&p("z+0.1"), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn rep_iv_examples() {
        let (a, pp) = rep_iv(&p("z^2-1")).unwrap();
        assert_eq!(a, c(-1.0, 0.0));
        assert!(pp.eval(c(0.3, 0.2)).unwrap().norm() < 1e-15);

        let (a, pp) = rep_iv(&p("z")).unwrap();
        assert_eq!(a, c(0.0, 0.0));
        assert!((pp.eval(c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);

        // polynomial division oracle: (2z - 2z^2)/z = 2 - 2z
        let (a, pp) = rep_iv(&p("(z-1)*(1-z)")).unwrap();
        assert_eq!(a, c(-1.0, 0.0));
        for z in [c(0.0, 0.0), c(0.5, 0.0), c(-0.3, 0.6), c(2e-5, 0.0)] {
            assert!((pp.eval(z).unwrap() - (c(2.0, 0.0) - 2.0 * z)).norm() < 1e-14);
        }
        // p(0) = f'(0)
        let f = p("(z+0.3)*(2-z)/(3-z)");
        let (_, pp) = rep_iv(&f).unwrap();
        let d0 = f.derivative().eval(c(0.0, 0.0)).unwrap();
        assert!((pp.eval(c(0.0, 0.0)).unwrap() - d0).norm() < 1e-14);
    }

    #[test]
    fn automorphism_detection() {
        assert!(is_automorphism_group_generator(&p("z^2-1")).unwrap());
        assert!(!is_automorphism_group_generator(&p("(z-1)*(1-z)")).unwrap());
        assert!(is_automorphism_group_generator(&p("i*z")).unwrap());
        assert!(!is_automorphism_group_generator(&p("z")).unwrap());
        // a + ibz - āz²
        assert!(is_automorphism_group_generator(&p("(0.3+0.2*i) + 0.7*i*z - (0.3-0.2*i)*z^2")).unwrap());
    }

    #[test]
    fn records_classify() {
        let r = analyze(&p("z")).unwrap();
        assert_eq!(r.kind, GeneratorType::InteriorDW);
        let r = analyze(&p("z^2-1")).unwrap();
        assert_eq!(r.kind, GeneratorType::BoundaryHyperbolic);
        match r.derivative_at_tau {
            DerivativeAtTau::Angular(v) => assert!((v - 2.0).abs() < 1e-8),
            other => panic!("{other:?}"),
        }
        let r = analyze(&p("(z-1)*(1-z)")).unwrap();
        assert_eq!(r.kind, GeneratorType::BoundaryParabolic);
        let grid = PolarGrid::residual();
        assert!(r.factorization_residual(&grid).unwrap() <= RESIDUAL_TOL);
        assert!(r.rep_iv_residual(&grid).unwrap() <= RESIDUAL_TOL);
        assert!(r.min_re_g(&grid).unwrap() >= -crate::SIGN_TOL);
    }
}
