//! Angular limits at boundary points and the boundary rigidity tests.
//!
//! Limits are estimated along a fan of rays `z = τ(1 - d e^{iθ})` with
//! geometrically shrinking `d`, using two levels of Richardson elimination
//! per ray.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{cdiv, EvalError, Expr};
use crate::generator::{self, CheckReport, DwKind};
use crate::grid::PolarGrid;

/// Rays must stay this far (radians) inside the half-plane of approach.
pub const STOLZ_MARGIN: f64 = 0.2;
/// Moduli beyond this, growing monotonically, indicate an infinite limit.
pub const INFINITE_THRESHOLD: f64 = 1e6;
const GROWTH_WINDOW: usize = 8;
const MIN_RADII: usize = 8;
/// Relative tolerance for a Finite verdict.
pub const LIMIT_TOL: f64 = 1e-4;
/// Limits at or below this modulus count as zero.
pub const ZERO_LIMIT_TOL: f64 = 1e-6;
/// Maximum modulus on the sweep grid for "identically zero".
pub const SWEEP_TOL: f64 = 1e-9;
/// Tolerance for the reality and sign of boundary quantities.
pub const BOUNDARY_SIGN_TOL: f64 = 1e-5;
const BRANCH_CUT_GAP: f64 = 1e-6;
const WEDGE_TOL: f64 = 1e-9;
pub const WEDGE_SAMPLES: usize = 1024;

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Fan of rays into the boundary point `tau`.
#[derive(Clone, Debug, PartialEq)]
pub struct StolzPath {
    pub tau: Complex64,
    pub angles: Vec<f64>,
    pub d0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl StolzPath {
    /// Default fan: angles `{-1, -0.5, 0, 0.5, 1}`, `d_k = 0.3 * 0.5^k`, 24 levels.
    pub fn new(tau: Complex64) -> Self {
        StolzPath { tau, angles: vec![-1.0, -0.5, 0.0, 0.5, 1.0], d0: 0.3, ratio: 0.5, count: 24 }
    }

    pub fn validate(&self) -> Result<()> {
        if ((self.tau.norm() - 1.0).abs()) > 1e-9 {
            return Err(Error::InvalidInput(format!("tau = {} is not on the unit circle", self.tau)));
        }
        let bound = PI / 2.0 - STOLZ_MARGIN;
        if self.angles.is_empty() || self.angles.iter().any(|a| !(a.abs() < bound)) {
            return Err(Error::InvalidInput(format!("ray angles must lie in (-{bound}, {bound})")));
        }
        if !(self.d0 > 0.0 && self.d0 < 1.0 && self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::InvalidInput("radii must shrink geometrically inside the disk".into()));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.d0 * self.ratio.powi(k as i32)).collect()
    }

    pub fn point(&self, d: f64, theta: f64) -> Complex64 {
        self.tau * (Complex64::new(1.0, 0.0) - Complex64::from_polar(d, theta))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Finite,
    Infinite,
    Divergent,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Finite => "Finite",
            Verdict::Infinite => "Infinite",
            Verdict::Divergent => "Divergent",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngularLimitEstimate {
    pub value: Complex64,
    pub verdict: Verdict,
    pub per_angle_values: Vec<Complex64>,
    pub extrapolation_error: f64,
    pub spread_across_angles: f64,
}

impl AngularLimitEstimate {
    pub fn is_finite(&self) -> bool {
        self.verdict == Verdict::Finite
    }

    fn divergent(per_angle_values: Vec<Complex64>) -> Self {
        AngularLimitEstimate {
            value: Complex64::new(f64::NAN, f64::NAN),
            verdict: Verdict::Divergent,
            per_angle_values,
            extrapolation_error: f64::INFINITY,
            spread_across_angles: f64::INFINITY,
        }
    }

    fn infinite(per_angle_values: Vec<Complex64>) -> Self {
        AngularLimitEstimate {
            value: Complex64::new(f64::INFINITY, 0.0),
            verdict: Verdict::Infinite,
            per_angle_values,
            extrapolation_error: f64::INFINITY,
            spread_across_angles: f64::INFINITY,
        }
    }
}

/// Extrapolated value and its error estimate along one ray; `None` when
/// too few radii survive.
struct RayEstimate {
    value: Complex64,
    error: f64,
    growing: bool,
}

fn ray_estimate(values: &[Option<Complex64>]) -> Option<RayEstimate> {
    // longest run of consecutive finite samples
    let mut best: &[Option<Complex64>] = &[];
    for run in values.split(|v| v.is_none()) {
        if run.len() >= best.len() {
            best = run;
        }
    }
    if best.len() < MIN_RADII {
        return None;
    }
    let v: Vec<Complex64> = best.iter().flatten().copied().collect();
    let tail = &v[v.len() - GROWTH_WINDOW..];
    let growing = tail.windows(2).all(|w| w[1].norm() > w[0].norm())
        && tail[GROWTH_WINDOW - 1].norm() > INFINITE_THRESHOLD;
    let r1: Vec<Complex64> = v.windows(2).map(|w| w[1] * 2.0 - w[0]).collect();
    let r2: Vec<Complex64> = r1.windows(2).map(|w| (w[1] * 4.0 - w[0]) / 3.0).collect();
    let (mut value, mut error) = (r2[r2.len() - 1], f64::INFINITY);
    for w in r2.windows(2) {
        let e = (w[1] - w[0]).norm();
        if e < error {
            error = e;
            value = w[1];
        }
    }
    Some(RayEstimate { value, error, growing })
}

/// Angular limit at `path.tau` of a function given as a closure. Samples
/// whose evaluation fails are skipped.
pub fn angular_limit_with<Q>(q: Q, path: &StolzPath) -> Result<AngularLimitEstimate>
where
    Q: Fn(Complex64) -> Result<Complex64>,
{
    path.validate()?;
    let radii = path.radii();
    let mut rays = Vec::with_capacity(path.angles.len());
    for &theta in &path.angles {
        let samples: Vec<Option<Complex64>> = radii
            .iter()
            .map(|&d| match q(path.point(d, theta)) {
                Ok(v) if v.re.is_finite() && v.im.is_finite() => Some(v),
                _ => None,
            })
            .collect();
        rays.push(ray_estimate(&samples));
    }
    let per_angle: Vec<Complex64> =
        rays.iter().map(|r| r.as_ref().map_or(Complex64::new(f64::NAN, f64::NAN), |r| r.value)).collect();
    if rays.iter().any(|r| r.is_none()) {
        return Ok(AngularLimitEstimate::divergent(per_angle));
    }
    let rays: Vec<RayEstimate> = rays.into_iter().flatten().collect();
    if rays.iter().all(|r| r.growing) {
        return Ok(AngularLimitEstimate::infinite(per_angle));
    }
    let value = per_angle.iter().sum::<Complex64>() / per_angle.len() as f64;
    let spread = per_angle.iter().map(|v| (v - value).norm()).fold(0.0, f64::max);
    let error = rays.iter().map(|r| r.error).fold(0.0, f64::max);
    let tol = LIMIT_TOL * (1.0 + value.norm());
    let verdict = if value.re.is_finite() && value.im.is_finite() && error <= tol && spread <= tol {
        Verdict::Finite
    } else {
        Verdict::Divergent
    };
    Ok(AngularLimitEstimate {
        value,
        verdict,
        per_angle_values: per_angle,
        extrapolation_error: error,
        spread_across_angles: spread,
    })
}

/// Angular limit of `q` at `tau` along the default fan.
pub fn angular_limit(q: &Expr, tau: Complex64) -> Result<AngularLimitEstimate> {
    angular_limit_with(|z| Ok(q.eval(z)?), &StolzPath::new(tau))
}

fn quotient(num: Complex64, den: Complex64, at: Complex64) -> Result<Complex64> {
    if den.norm() < crate::expr::POLE_THRESHOLD {
        return Err(EvalError::Pole { at }.into());
    }
    Ok(cdiv(num, den))
}

/// `|f(τ(1 - d))|` at the deepest radial sample.
fn radial_tail(f: &Expr, tau: Complex64) -> Result<f64> {
    let path = StolzPath::new(tau);
    let d = path.radii()[path.count - 1];
    Ok(f.eval(path.point(d, 0.0))?.norm())
}

/// `∠lim f(z) / (z - τ)`.
pub fn angular_derivative(f: &Expr, tau: Complex64) -> Result<AngularLimitEstimate> {
    let tail = radial_tail(f, tau)?;
    if tail > BOUNDARY_SIGN_TOL {
        return Err(Error::HypothesisViolation(format!("f does not vanish along the radius to {tau} (|f| = {tail:e})")));
    }
    angular_limit_with(|z| quotient(f.eval(z)?, z - tau, z), &StolzPath::new(tau))
}

/// Maximum of `|f|` on the 0.95-radius residual grid.
pub fn max_modulus_sweep(f: &Expr) -> Result<f64> {
    let mut m: f64 = 0.0;
    for z in PolarGrid::residual().points() {
        m = m.max(f.eval(z)?.norm());
    }
    Ok(m)
}

/// Boundary limit `k = ∠lim g(z) / (1 - τ̄z)`, with the Cayley-route
/// estimate `β_h = ∠lim (τ - h(z)) / (τ - z)` for `h = τ(1 - g)/(1 + g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Estimate {
    pub k: AngularLimitEstimate,
    pub beta_h: AngularLimitEstimate,
    /// `Re g >= -1e-7` on the residual grid; without it the estimates carry
    /// no guarantee.
    pub herglotz: bool,
    /// `|k - β_h / 2|` when both are finite.
    pub cayley_gap: Option<f64>,
}

pub fn lemma1_k(g: &Expr, tau: Complex64) -> Result<Lemma1Estimate> {
    let path = StolzPath::new(tau);
    let herglotz = PolarGrid::residual()
        .points()
        .into_iter()
        .all(|z| matches!(g.eval(z), Ok(v) if v.re >= -crate::SIGN_TOL));
    let k = angular_limit_with(|z| quotient(g.eval(z)?, Complex64::new(1.0, 0.0) - tau.conj() * z, z), &path)?;
    let one = Expr::one();
    let h = Expr::Const(tau) * (one.clone() - g.clone()) / (one + g.clone());
    let beta_h = angular_limit_with(|z| quotient(tau - h.eval(z)?, tau - z, z), &path)?;
    let cayley_gap = (k.is_finite() && beta_h.is_finite()).then(|| (k.value - beta_h.value * 0.5).norm());
    Ok(Lemma1Estimate { k, beta_h, herglotz, cayley_gap })
}

/// Boundary expansion `f(z) ≈ Σ c_j (z - τ)^j`, `j = 1..=m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionEstimate {
    pub tau: Complex64,
    pub coefficients: Vec<Complex64>,
    pub errors: Vec<f64>,
}

impl ExpansionEstimate {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }
}

pub const MAX_EXPANSION_ORDER: usize = 5;

/// Coefficients by sequential stripping: `c_j` is the angular limit of
/// `(f - Σ_{i<j} c_i (z-τ)^i) / (z-τ)^j`.
pub fn expansion_at_tau(f: &Expr, tau: Complex64, m: usize) -> Result<ExpansionEstimate> {
    if m == 0 || m > MAX_EXPANSION_ORDER {
        return Err(Error::InvalidInput(format!("expansion order must be 1..={MAX_EXPANSION_ORDER}")));
    }
    let path = StolzPath::new(tau);
    let mut coefficients: Vec<Complex64> = Vec::with_capacity(m);
    let mut errors = Vec::with_capacity(m);
    for j in 1..=m {
        let est = angular_limit_with(
            |z| {
                let w = z - tau;
                let mut r = f.eval(z)?;
                let mut wp = Complex64::new(1.0, 0.0);
                for c in &coefficients {
                    wp *= w;
                    r -= c * wp;
                }
                quotient(r, wp * w, z)
            },
            &path,
        )?;
        if !est.is_finite() {
            return Err(Error::DivergentCoefficient { order: j });
        }
        let err = est.extrapolation_error.max(est.spread_across_angles);
        // indistinguishable from zero: strip nothing, so deeper orders are not polluted
        let c = if est.value.norm() <= 10.0 * err { c0() } else { est.value };
        coefficients.push(c);
        errors.push(err);
    }
    Ok(ExpansionEstimate { tau, coefficients, errors })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RigidityKind {
    IdenticallyZero,
    NontrivialCubic(Complex64),
    NotApplicable,
    Inconclusive,
}

impl RigidityKind {
    pub fn name(&self) -> &'static str {
        match self {
            RigidityKind::IdenticallyZero => "IdenticallyZero",
            RigidityKind::NontrivialCubic(_) => "NontrivialCubic",
            RigidityKind::NotApplicable => "NotApplicable",
            RigidityKind::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidityVerdict {
    pub kind: RigidityKind,
    pub tau: Option<Complex64>,
    /// The boundary limit that decides the test.
    pub coefficient: Option<Complex64>,
    /// `a τ²` for the cubic test.
    pub sign_check: Option<Complex64>,
    pub sweep_max: f64,
    pub details: String,
}

impl RigidityVerdict {
    fn new(kind: RigidityKind, sweep_max: f64, details: impl Into<String>) -> Self {
        RigidityVerdict { kind, tau: None, coefficient: None, sign_check: None, sweep_max, details: details.into() }
    }
}

/// Cubic boundary rigidity: a generator with boundary Denjoy–Wolff point
/// `τ` and `f(z) = a(z-τ)³ + o(|z-τ|³)` has `aτ² >= 0`, and `a = 0` only for
/// `f ≡ 0`.
pub fn rigidity_theorem1(f: &Expr) -> Result<RigidityVerdict> {
    let sweep = max_modulus_sweep(f)?;
    if sweep <= SWEEP_TOL {
        let mut v = RigidityVerdict::new(RigidityKind::IdenticallyZero, sweep, "f vanishes on the sweep grid");
        v.coefficient = Some(c0());
        return Ok(v);
    }
    let check = generator::check_condition_ii(f, &PolarGrid::condition_ii(), crate::RESIDUAL_TOL)?;
    if !check.passed {
        return Ok(RigidityVerdict::new(
            RigidityKind::NotApplicable,
            sweep,
            format!("not a generator: margin {:e} at {}", check.min_margin, check.worst_point),
        ));
    }
    let dw = match generator::find_dw_point(f) {
        Ok(dw) => dw,
        Err(Error::NoDwFound(msg)) => {
            return Ok(RigidityVerdict::new(RigidityKind::NotApplicable, sweep, format!("no Denjoy-Wolff point: {msg}")))
        }
        Err(e) => return Err(e),
    };
    let tau = dw.tau;
    let with_tau = |mut v: RigidityVerdict| {
        v.tau = Some(tau);
        v
    };
    if dw.kind == DwKind::Interior {
        return Ok(with_tau(RigidityVerdict::new(RigidityKind::NotApplicable, sweep, "Denjoy-Wolff point is interior")));
    }
    let d1 = angular_derivative(f, tau)?;
    if !d1.is_finite() || d1.value.norm() > crate::PARABOLIC_TOL {
        return Ok(with_tau(RigidityVerdict::new(
            RigidityKind::NotApplicable,
            sweep,
            format!("angular derivative is {} ({}), not 0", d1.value, d1.verdict.name()),
        )));
    }
    let a = angular_limit_with(|z| quotient(f.eval(z)?, (z - tau).powu(3), z), &StolzPath::new(tau))?;
    if !a.is_finite() {
        return Ok(with_tau(RigidityVerdict::new(
            RigidityKind::NotApplicable,
            sweep,
            format!("limit of f/(z-tau)^3 is {}", a.verdict.name()),
        )));
    }
    let s = a.value * tau * tau;
    let mut v = if a.value.norm() <= ZERO_LIMIT_TOL {
        RigidityVerdict::new(RigidityKind::Inconclusive, sweep, "cubic limit vanishes but f does not")
    } else if s.im.abs() <= LIMIT_TOL && s.re >= -LIMIT_TOL {
        RigidityVerdict::new(RigidityKind::NontrivialCubic(a.value), sweep, "a tau^2 is a nonnegative real number")
    } else {
        RigidityVerdict::new(RigidityKind::Inconclusive, sweep, format!("a tau^2 = {s} is not a nonnegative real"))
    };
    v.coefficient = Some(a.value);
    v.sign_check = Some(s);
    Ok(with_tau(v))
}

/// Samples `Re(f(z) z̄) - |f(z)| cos(απ/2)` at `n` equispaced points of
/// the unit circle.
pub fn wedge_check(f: &Expr, alpha: f64, n: usize) -> Result<CheckReport> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::InvalidInput(format!("alpha = {alpha} is outside (0, 2]")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("wedge check needs at least one sample".into()));
    }
    let cos = (alpha * PI / 2.0).cos();
    let mut margins = Vec::with_capacity(n);
    for z in crate::grid::circle(c0(), 1.0, n) {
        let fz = match f.eval(z) {
            Ok(v) => v,
            Err(_) => return Err(Error::PoleOnBoundary { at: z }),
        };
        margins.push((z, (fz * z.conj()).re - fz.norm() * cos));
    }
    Ok(CheckReport::from_margins(margins, WEDGE_TOL))
}

/// `w^β` continuous on the disk side of `τ`: the cut runs along the
/// outward normal `τ·ℝ₊`, away from every approach direction.
pub fn boundary_power(w: Complex64, beta: f64, tau: Complex64) -> Result<Complex64> {
    let v = w / (-tau);
    if v.arg().abs() > PI - BRANCH_CUT_GAP {
        return Err(Error::BranchCut { at: tau + w });
    }
    Ok((-tau).powf(beta) * v.powf(beta))
}

/// Sample points on tangential arcs `τ(1 - d) e^{±i√d}`.
pub fn tangential_points(tau: Complex64, radii: &[f64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(2 * radii.len());
    for &d in radii {
        for sign in [1.0, -1.0] {
            out.push(tau * Complex64::from_polar(1.0 - d, sign * d.sqrt()));
        }
    }
    out
}

/// Flatness rigidity under the wedge condition: a generator with
/// `f(z) / (z-τ)^{2+α} → 0` vanishes identically.
pub fn rigidity_theorem2(f: &Expr, alpha: f64, tau: Complex64) -> Result<RigidityVerdict> {
    let wedge = wedge_check(f, alpha, WEDGE_SAMPLES)?;
    let sweep = max_modulus_sweep(f)?;
    let mut base = RigidityVerdict::new(RigidityKind::Inconclusive, sweep, "");
    base.tau = Some(tau);
    if sweep <= SWEEP_TOL {
        base.kind = RigidityKind::IdenticallyZero;
        base.coefficient = Some(c0());
        base.details = "f vanishes on the sweep grid".into();
        return Ok(base);
    }
    if !wedge.passed {
        base.kind = RigidityKind::NotApplicable;
        base.details = format!("wedge condition fails: margin {:e} at {}", wedge.min_margin, wedge.worst_point);
        return Ok(base);
    }
    let beta = 2.0 + alpha;
    let q = |z: Complex64| -> Result<Complex64> { quotient(f.eval(z)?, boundary_power(z - tau, beta, tau)?, z) };
    let path = StolzPath::new(tau);
    // the cut is checked on every sample before any limit is formed
    let radii = path.radii();
    for &d in &radii {
        for &theta in &path.angles {
            boundary_power(path.point(d, theta) - tau, beta, tau)?;
        }
    }
    let tangential = tangential_points(tau, &radii[radii.len() - 4..]);
    let mut tangential_max: f64 = 0.0;
    for &z in &tangential {
        tangential_max = tangential_max.max(q(z)?.norm());
    }
    let est = angular_limit_with(q, &path)?;
    if !est.is_finite() {
        base.details = format!("limit of f/(z-tau)^{beta} is {}", est.verdict.name());
        return Ok(base);
    }
    base.coefficient = Some(est.value);
    base.details = if est.value.norm() <= ZERO_LIMIT_TOL && tangential_max <= ZERO_LIMIT_TOL {
        "boundary limit vanishes but f does not".into()
    } else {
        format!("boundary limit has modulus {:e}; rigidity not forced", est.value.norm())
    };
    Ok(base)
}

/// Angular derivative at a boundary null point against the bound
/// `f'(τ) <= -2 Re(conj(f(0)) τ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Corollary2Record {
    pub fprime: f64,
    pub bound: f64,
    /// `bound - fprime`
    pub slack: f64,
    pub holds: bool,
    pub equality: bool,
    pub automorphism_confirmed: bool,
}

pub const EQUALITY_TOL: f64 = 1e-6;

fn real_angular_derivative(f: &Expr, tau: Complex64) -> Result<f64> {
    let est = angular_derivative(f, tau)?;
    match est.verdict {
        Verdict::Finite => {}
        Verdict::Infinite => return Err(Error::NotApplicable("angular derivative is infinite".into())),
        Verdict::Divergent => return Err(Error::DivergentCoefficient { order: 1 }),
    }
    if est.value.im.abs() > BOUNDARY_SIGN_TOL {
        return Err(Error::HypothesisViolation(format!("angular derivative {} is not real", est.value)));
    }
    Ok(est.value.re)
}

pub fn corollary2_check(f: &Expr, tau: Complex64) -> Result<Corollary2Record> {
    let fprime = real_angular_derivative(f, tau)?;
    let a = f.eval(c0())?;
    let bound = -2.0 * (a.conj() * tau).re;
    let slack = bound - fprime;
    Ok(Corollary2Record {
        fprime,
        bound,
        slack,
        holds: slack >= -BOUNDARY_SIGN_TOL,
        equality: slack.abs() <= EQUALITY_TOL,
        automorphism_confirmed: generator::is_automorphism_group_generator(f)?,
    })
}

/// Angular derivative of a self-map at a boundary fixed point against the
/// bound `F'(τ) >= 1 - 2 Re(conj(F(0)) τ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Corollary3Record {
    pub fprime: f64,
    pub bound: f64,
    /// `fprime - bound`
    pub slack: f64,
    pub generator: Corollary2Record,
}

pub fn corollary3_check(map: &Expr, tau: Complex64) -> Result<Corollary3Record> {
    let path = StolzPath::new(tau);
    let d = path.radii()[path.count - 1];
    let gap = (map.eval(path.point(d, 0.0))? - tau).norm();
    if gap > BOUNDARY_SIGN_TOL {
        return Err(Error::HypothesisViolation(format!("F does not fix {tau} (gap {gap:e})")));
    }
    let f = Expr::Var - map.clone();
    let generator = corollary2_check(&f, tau)?;
    if !generator.holds {
        return Err(Error::HypothesisViolation(format!(
            "z - F violates the generator bound at {tau}: f'(tau) = {}, bound {}",
            generator.fprime, generator.bound
        )));
    }
    let fprime = 1.0 - generator.fprime;
    let bound = 1.0 - 2.0 * (map.eval(c0())?.conj() * tau).re;
    Ok(Corollary3Record { fprime, bound, slack: fprime - bound, generator })
}
