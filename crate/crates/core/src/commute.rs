//! Commuting semigroups: the Lie commutator `[f, g] = f'g - g'f`,
//! proportionality of generators, flow commutation, and the coincidence and
//! centralizer criteria built on them.

use num_complex::Complex64;
use rand::Rng;

use crate::boundary::{self, RigidityKind, Verdict};
use crate::corpus;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::flow::{self, FlowParams};
use crate::generator::{self, DwKind, DwPoint};
use crate::grid::PolarGrid;

/// Grid sup-norm below which the commutator counts as zero.
pub const COMMUTATOR_TOL: f64 = 1e-9;
/// Normalised residual below which `f = αg` is accepted.
pub const PROPORTIONALITY_TOL: f64 = 1e-8;
/// Flow commutation below this counts as commuting.
pub const FLOW_COMMUTE_TOL: f64 = 1e-6;
const MASK: f64 = 1e-12;
const DEGENERATE_FRACTION: f64 = 0.9;
/// Largest `t` and `s` in flow commutation samples.
pub const MAX_FLOW_TIME: f64 = 3.0;
const SAMPLE_RADIUS: f64 = 0.9;
/// Half-width (radians) of the arc around τ excluded when looking for a
/// second boundary null point.
pub const OPPOSITE_EXCLUSION: f64 = 0.1;

/// `f'g - g'f`
pub fn lie_commutator(f: &Expr, g: &Expr) -> Expr {
    f.derivative() * g.clone() - g.derivative() * f.clone()
}

/// `Γ_f(h) = h'f`
pub fn gamma_apply(f: &Expr, h: &Expr) -> Expr {
    h.derivative() * f.clone()
}

/// Maximum of `|e|` over the grid.
pub fn grid_sup(e: &Expr, grid: &PolarGrid) -> Result<f64> {
    let mut m: f64 = 0.0;
    for z in grid.points() {
        m = m.max(e.eval(z)?.norm());
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Proportionality {
    /// Least-squares estimate of `α` in `f ≈ αg`.
    pub estimate: Complex64,
    /// `max |f - αg| / (1 + max |g|)` over the grid.
    pub residual: f64,
    /// The estimate, when the residual is within tolerance.
    pub alpha: Option<Complex64>,
}

pub fn proportionality(f: &Expr, g: &Expr, grid: &PolarGrid) -> Result<Proportionality> {
    let mut samples = Vec::with_capacity(grid.len());
    for z in grid.points() {
        samples.push((f.eval(z)?, g.eval(z)?));
    }
    let kept: Vec<_> = samples.iter().filter(|(_, gz)| gz.norm() > MASK).collect();
    let masked = 1.0 - kept.len() as f64 / samples.len().max(1) as f64;
    if masked > DEGENERATE_FRACTION {
        return Err(Error::DegenerateG { fraction: masked });
    }
    let num: Complex64 = kept.iter().map(|(fz, gz)| fz * gz.conj()).sum();
    let den: f64 = kept.iter().map(|(_, gz)| gz.norm_sqr()).sum();
    let estimate = num / den;
    let g_max = samples.iter().map(|(_, gz)| gz.norm()).fold(0.0, f64::max);
    let worst = samples.iter().map(|(fz, gz)| (fz - estimate * gz).norm()).fold(0.0, f64::max);
    let residual = worst / (1.0 + g_max);
    let alpha = (residual <= PROPORTIONALITY_TOL).then_some(estimate);
    Ok(Proportionality { estimate, residual, alpha })
}

/// Max over `n_samples` seeded random `(z, t, s)` of
/// `|F_t(G_s(z)) - G_s(F_t(z))|`.
pub fn semigroups_commute(f: &Expr, g: &Expr, n_samples: usize, params: &FlowParams, seed: u64) -> Result<f64> {
    let mut rng = corpus::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..n_samples {
        let z = corpus::random_disk_point(&mut rng, SAMPLE_RADIUS);
        let t = rng.gen_range(0.0..=MAX_FLOW_TIME);
        let s = rng.gen_range(0.0..=MAX_FLOW_TIME);
        let fg = flow::advance(f, flow::advance(g, z, s, params)?, t, params)?;
        let gf = flow::advance(g, flow::advance(f, z, t, params)?, s, params)?;
        worst = worst.max((fg - gf).norm());
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorReport {
    pub commutator: Expr,
    pub sup_norm_grid: f64,
    pub alpha: Option<Complex64>,
    pub alpha_estimate: Complex64,
    pub proportionality_residual: f64,
    /// `None` when the flow test was not run.
    pub flow_commutation_max: Option<f64>,
}

impl CommutatorReport {
    pub fn commutator_vanishes(&self) -> bool {
        self.sup_norm_grid <= COMMUTATOR_TOL
    }

    pub fn flows_commute(&self) -> Option<bool> {
        self.flow_commutation_max.map(|m| m <= FLOW_COMMUTE_TOL)
    }

    /// True when the tests that were run disagree.
    pub fn disagreement(&self) -> bool {
        let a = self.commutator_vanishes();
        let b = self.alpha.is_some();
        a != b || self.flows_commute().is_some_and(|c| c != a)
    }
}

/// Flow test settings for [`commutator_report`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowTest {
    pub samples: usize,
    pub params: FlowParams,
    pub seed: u64,
}

pub fn commutator_report(f: &Expr, g: &Expr, flow_test: Option<&FlowTest>) -> Result<CommutatorReport> {
    let grid = PolarGrid::interior();
    let commutator = lie_commutator(f, g);
    let sup_norm_grid = grid_sup(&commutator, &grid)?;
    let prop = proportionality(f, g, &grid)?;
    let flow_commutation_max = match flow_test {
        Some(ft) => Some(semigroups_commute(f, g, ft.samples, &ft.params, ft.seed)?),
        None => None,
    };
    Ok(CommutatorReport {
        commutator,
        sup_norm_grid,
        alpha: prop.alpha,
        alpha_estimate: prop.estimate,
        proportionality_residual: prop.residual,
        flow_commutation_max,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoincidenceVerdict {
    Identical,
    IdenticallyZeroBoth,
    Distinct,
    Inconclusive,
}

impl CoincidenceVerdict {
    pub fn name(self) -> &'static str {
        match self {
            CoincidenceVerdict::Identical => "Identical",
            CoincidenceVerdict::IdenticallyZeroBoth => "IdenticallyZeroBoth",
            CoincidenceVerdict::Distinct => "Distinct",
            CoincidenceVerdict::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoincidenceReport {
    pub verdict: CoincidenceVerdict,
    pub alpha: Option<Complex64>,
    /// Order of the first coefficient at τ that is nonzero for either
    /// function.
    pub order: Option<usize>,
    pub coefficients_f: Vec<Complex64>,
    pub coefficients_g: Vec<Complex64>,
    pub details: String,
}

const COEFF_ZERO_TOL: f64 = 1e-6;
const ALPHA_ONE_TOL: f64 = 1e-6;

/// Whether two commuting generators vanishing at `tau` coincide, comparing
/// derivatives (interior `tau`) or boundary expansion coefficients through
/// order `m`.
pub fn theorem3_decision(f: &Expr, g: &Expr, tau: Complex64, m: usize) -> Result<CoincidenceReport> {
    let interior = tau.norm() < 1.0 - 1e-9;
    let alpha = match proportionality(f, g, &PolarGrid::interior()) {
        Ok(p) => p.alpha,
        Err(Error::DegenerateG { .. }) => None,
        Err(e) => return Err(e),
    };
    let (cf, cg, errs) = if interior {
        let m = m.max(1);
        let jf = crate::expr::taylor(f, tau, m)?;
        let jg = crate::expr::taylor(g, tau, m)?;
        let cf: Vec<_> = (1..=m).map(|k| jf.coeff(k)).collect();
        let cg: Vec<_> = (1..=m).map(|k| jg.coeff(k)).collect();
        (cf, cg, vec![0.0; m])
    } else {
        let ef = boundary::expansion_at_tau(f, tau, m);
        let eg = boundary::expansion_at_tau(g, tau, m);
        match (ef, eg) {
            (Ok(a), Ok(b)) => {
                let errs = a.errors.iter().zip(&b.errors).map(|(x, y)| x.max(*y)).collect();
                (a.coefficients, b.coefficients, errs)
            }
            (Err(Error::DivergentCoefficient { order }), _) | (_, Err(Error::DivergentCoefficient { order })) => {
                return Ok(CoincidenceReport {
                    verdict: CoincidenceVerdict::Inconclusive,
                    alpha,
                    order: None,
                    coefficients_f: vec![],
                    coefficients_g: vec![],
                    details: format!("boundary expansion diverges at order {order}"),
                })
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    };
    let report = |verdict, order, details: String| CoincidenceReport {
        verdict,
        alpha,
        order,
        coefficients_f: cf.clone(),
        coefficients_g: cg.clone(),
        details,
    };
    let first = (0..cf.len()).find(|&k| {
        let tol = COEFF_ZERO_TOL.max(10.0 * errs[k]);
        cf[k].norm() > tol || cg[k].norm() > tol
    });
    let Some(k) = first else {
        let zero = boundary::max_modulus_sweep(f)? <= boundary::SWEEP_TOL
            && boundary::max_modulus_sweep(g)? <= boundary::SWEEP_TOL;
        return Ok(if zero {
            report(CoincidenceVerdict::IdenticallyZeroBoth, None, "both vanish on the sweep grid".into())
        } else {
            report(
                CoincidenceVerdict::Inconclusive,
                None,
                format!("coefficients vanish through order {} but the functions do not", cf.len()),
            )
        });
    };
    let tol = COEFF_ZERO_TOL.max(10.0 * errs[k]);
    if (cf[k] - cg[k]).norm() > tol {
        return Ok(report(
            CoincidenceVerdict::Distinct,
            Some(k + 1),
            format!("order-{} coefficients differ: {} vs {}", k + 1, cf[k], cg[k]),
        ));
    }
    Ok(match alpha {
        Some(a) if (a - 1.0).norm() <= ALPHA_ONE_TOL => {
            report(CoincidenceVerdict::Identical, Some(k + 1), format!("order-{} coefficients agree and alpha = 1", k + 1))
        }
        _ => report(
            CoincidenceVerdict::Inconclusive,
            Some(k + 1),
            "coefficients agree but f and g are not proportional with alpha = 1".into(),
        ),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentralizerReason {
    HyperbolicNonGroup,
    NonzeroCubicCoefficient,
    Unknown,
}

impl CentralizerReason {
    pub fn name(self) -> &'static str {
        match self {
            CentralizerReason::HyperbolicNonGroup => "HyperbolicNonGroup",
            CentralizerReason::NonzeroCubicCoefficient => "NonzeroCubicCoefficient",
            CentralizerReason::Unknown => "Unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CentralizerVerdict {
    pub trivial: bool,
    pub reason: CentralizerReason,
    pub dw: DwPoint,
    pub angular_derivative: Option<f64>,
}

/// Sufficient conditions for the only semigroups commuting with the one
/// generated by `f` to be its own reparametrisations.
pub fn centralizer_trivial(f: &Expr) -> Result<CentralizerVerdict> {
    let dw = generator::find_dw_point(f)?;
    let unknown = |d| CentralizerVerdict { trivial: false, reason: CentralizerReason::Unknown, dw, angular_derivative: d };
    if dw.kind == DwKind::Interior {
        return Ok(unknown(None));
    }
    let est = boundary::angular_derivative(f, dw.tau)?;
    let d = (est.verdict == Verdict::Finite).then_some(est.value.re);
    if let Some(v) = d {
        if v > crate::PARABOLIC_TOL {
            if !generator::is_automorphism_group_generator(f)? {
                return Ok(CentralizerVerdict {
                    trivial: true,
                    reason: CentralizerReason::HyperbolicNonGroup,
                    dw,
                    angular_derivative: d,
                });
            }
            return Ok(unknown(d));
        }
    }
    let rig = boundary::rigidity_theorem1(f)?;
    if let RigidityKind::NontrivialCubic(a) = rig.kind {
        if a.norm() > boundary::ZERO_LIMIT_TOL {
            return Ok(CentralizerVerdict {
                trivial: true,
                reason: CentralizerReason::NonzeroCubicCoefficient,
                dw,
                angular_derivative: d,
            });
        }
    }
    Ok(unknown(d))
}

/// Denjoy–Wolff points of commuting generators with a negative
/// proportionality constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OppositeReport {
    pub alpha_real: bool,
    pub alpha: f64,
    pub groups: bool,
    pub dw_f: DwPoint,
    pub dw_g: DwPoint,
    /// Each attracting point is the other's repelling boundary null point.
    pub opposite: bool,
    /// The repelling boundary null point of `f`, when searched for.
    pub sigma_f: Option<Complex64>,
    /// `-f'(σ) - f'(τ)`, only for `α < 0`.
    pub repr_inequality_slack: Option<f64>,
}

const ALPHA_REAL_TOL: f64 = 1e-6;
const SAME_POINT_TOL: f64 = 1e-6;

fn second_null_point(f: &Expr, tau: Complex64) -> Option<Complex64> {
    generator::boundary_null_points(f, Some((tau, OPPOSITE_EXCLUSION)))
        .into_iter()
        .find(|b| b.modulus <= 1e-6)
        .map(|b| b.point)
}

pub fn lemma2_opposite(f: &Expr, g: &Expr) -> Result<OppositeReport> {
    let prop = proportionality(f, g, &PolarGrid::interior())?;
    let alpha = prop
        .alpha
        .ok_or_else(|| Error::NotApplicable(format!("f and g are not proportional (residual {:e})", prop.residual)))?;
    let dw_f = generator::find_dw_point(f)?;
    let dw_g = generator::find_dw_point(g)?;
    let groups = generator::is_automorphism_group_generator(f)? && generator::is_automorphism_group_generator(g)?;
    let mut report = OppositeReport {
        alpha_real: alpha.im.abs() <= ALPHA_REAL_TOL,
        alpha: alpha.re,
        groups,
        dw_f,
        dw_g,
        opposite: false,
        sigma_f: None,
        repr_inequality_slack: None,
    };
    if !(report.alpha_real && alpha.re < 0.0) {
        return Ok(report);
    }
    let sigma_f = second_null_point(f, dw_f.tau);
    let sigma_g = second_null_point(g, dw_g.tau);
    report.sigma_f = sigma_f;
    let distinct = (dw_f.tau - dw_g.tau).norm() > SAME_POINT_TOL;
    let matches = |s: Option<Complex64>, t: Complex64| s.is_some_and(|s| (s - t).norm() <= SAME_POINT_TOL);
    report.opposite = distinct && matches(sigma_f, dw_g.tau) && matches(sigma_g, dw_f.tau);
    if let Some(sigma) = sigma_f {
        let at_tau = boundary::angular_derivative(f, dw_f.tau)?;
        let at_sigma = boundary::angular_derivative(f, sigma)?;
        if at_tau.is_finite() && at_sigma.is_finite() {
            report.repr_inequality_slack = Some(-at_sigma.value.re - at_tau.value.re);
        }
    }
    Ok(report)
}
