//! Integration of the semigroup Cauchy problem `∂u/∂t + f(u) = 0`,
//! `u(0) = z`, with the Dormand–Prince 5(4) pair, PI step control and
//! Hairer's continuous extension for dense output.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::Expr;

/// Integrator settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowParams {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Largest admissible end time.
    pub max_time: f64,
    /// `|u| > 1 + disk_guard` at an accepted step is an error.
    pub disk_guard: f64,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams { rel_tol: 1e-10, abs_tol: 1e-12, max_step: 0.1, max_time: 100.0, disk_guard: 1e-8 }
    }
}

impl FlowParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.rel_tol, self.abs_tol, self.max_step, self.max_time, self.disk_guard]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !positive {
            return Err(Error::InvalidInput("flow parameters must be positive and finite".into()));
        }
        if self.rel_tol < 1e-14 {
            return Err(Error::InvalidInput("rel_tol must be at least 1e-14".into()));
        }
        Ok(())
    }
}

pub const MIN_STEP: f64 = 1e-14;
const MAX_STEPS: usize = 2_000_000;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Interpolation data for one accepted step.
struct DenseStep {
    t0: f64,
    h: f64,
    r: [Complex64; 5],
}

impl DenseStep {
    fn eval(&self, t: f64) -> Complex64 {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let [r1, r2, r3, r4, r5] = self.r;
        r1 + (r2 + (r3 + (r4 + r5 * s1) * s) * s1) * s
    }
}

/// Integrates `u' = -f(u)` from `t = 0` and calls `on_step` after every
/// accepted step until `t_end` is reached.
fn integrate<F, S>(rhs: F, z0: Complex64, t_end: f64, params: &FlowParams, mut on_step: S) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
    S: FnMut(&DenseStep),
{
    params.validate()?;
    if !(t_end >= 0.0) || t_end > params.max_time {
        return Err(Error::InvalidInput(format!("end time {t_end} outside [0, {}]", params.max_time)));
    }
    if !(z0.norm() <= 1.0 + params.disk_guard) {
        return Err(Error::InvalidInput(format!("initial point {z0} is outside the disk")));
    }
    if t_end == 0.0 {
        return Ok(z0);
    }
    let deriv = |u: Complex64| -> Result<Complex64> { Ok(-rhs(u)?) };
    let scale = |a: Complex64, b: Complex64| params.abs_tol + params.rel_tol * a.norm().max(b.norm());

    let mut t = 0.0;
    let mut u = z0;
    let mut k1 = deriv(u)?;
    let mut h = initial_step(&deriv, u, k1, params)?.min(t_end);
    let mut fac_old: f64 = 1e-4;
    let mut rejected_last = false;
    for _ in 0..MAX_STEPS {
        let last = t + h >= t_end * (1.0 - 1e-15);
        if last {
            h = t_end - t;
        }
        if h < MIN_STEP {
            return Err(Error::StepUnderflow { t, min_step: MIN_STEP });
        }
        let k2 = deriv(u + k1 * (h * A21))?;
        let k3 = deriv(u + (k1 * A31 + k2 * A32) * h)?;
        let k4 = deriv(u + (k1 * A41 + k2 * A42 + k3 * A43) * h)?;
        let k5 = deriv(u + (k1 * A51 + k2 * A52 + k3 * A53 + k4 * A54) * h)?;
        let k6 = deriv(u + (k1 * A61 + k2 * A62 + k3 * A63 + k4 * A64 + k5 * A65) * h)?;
        let u_new = u + (k1 * A71 + k3 * A73 + k4 * A74 + k5 * A75 + k6 * A76) * h;
        let k7 = deriv(u_new)?;
        let err_vec = (k1 * E1 + k3 * E3 + k4 * E4 + k5 * E5 + k6 * E6 + k7 * E7) * h;
        let err = err_vec.norm() / scale(u, u_new);
        if !err.is_finite() {
            // blow-up inside the step; retry with a much smaller one
            h *= FAC_MIN;
            rejected_last = true;
            continue;
        }
        let fac11 = err.powf(0.2 - BETA * 0.75);
        if err <= 1.0 {
            if u_new.norm() > 1.0 + params.disk_guard {
                return Err(Error::DiskExit { t: t + h, modulus: u_new.norm() });
            }
            let diff = u_new - u;
            let bspl = k1 * h - diff;
            let dense = DenseStep {
                t0: t,
                h,
                r: [
                    u,
                    diff,
                    bspl,
                    diff - k7 * h - bspl,
                    (k1 * D1 + k3 * D3 + k4 * D4 + k5 * D5 + k6 * D6 + k7 * D7) * h,
                ],
            };
            on_step(&dense);
            t = if last { t_end } else { t + h };
            u = u_new;
            k1 = k7;
            if last {
                return Ok(u);
            }
            let fac = (fac11 / fac_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = (h / fac).min(params.max_step);
            if rejected_last {
                h_new = h_new.min(h);
            }
            fac_old = err.max(1e-4);
            rejected_last = false;
            h = h_new;
        } else {
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
            rejected_last = true;
        }
    }
    Err(Error::StepUnderflow { t, min_step: MIN_STEP })
}

fn initial_step<F>(deriv: &F, u: Complex64, k1: Complex64, params: &FlowParams) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let sk = params.abs_tol + params.rel_tol * u.norm();
    let d0 = u.norm() / sk;
    let d1 = k1.norm() / sk;
    let h0 = if d0 < 1e-10 || d1 < 1e-10 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(params.max_step);
    let k2 = deriv(u + k1 * h0)?;
    let d2 = (k2 - k1).norm() / sk / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok((100.0 * h0).min(h1).min(params.max_step))
}

/// `u(t, z)` for the generator `f`.
pub fn advance(f: &Expr, z: Complex64, t: f64, params: &FlowParams) -> Result<Complex64> {
    integrate(|u| Ok(f.eval(u)?), z, t, params, |_| {})
}

/// Like [`advance`] for a generator given as a closure.
pub fn advance_with<F>(f: F, z: Complex64, t: f64, params: &FlowParams) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    integrate(f, z, t, params, |_| {})
}

/// Sampled solution of the Cauchy problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub f: Expr,
    pub z0: Complex64,
    pub points: Vec<(f64, Complex64)>,
}

impl Trajectory {
    /// `t,re,im` rows with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re,im\n");
        for (t, z) in &self.points {
            let _ = writeln!(out, "{t:.16e},{:.16e},{:.16e}", z.re, z.im);
        }
        out
    }

    pub fn endpoint(&self) -> Complex64 {
        self.points.last().map(|p| p.1).unwrap_or(self.z0)
    }
}

/// Samples one continuous integration at the requested times, which must be
/// strictly increasing and start at 0.
pub fn trajectory(f: &Expr, z: Complex64, times: &[f64], params: &FlowParams) -> Result<Trajectory> {
    if times.first() != Some(&0.0) {
        return Err(Error::InvalidInput("sample times must start at 0".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("sample times must be strictly increasing".into()));
    }
    let t_end = *times.last().unwrap_or(&0.0);
    let mut points = vec![(0.0, z)];
    let mut next = 1;
    let end = integrate(
        |u| Ok(f.eval(u)?),
        z,
        t_end,
        params,
        |step| {
            let t1 = step.t0 + step.h;
            while next < times.len() && times[next] <= t1 && times[next] < t_end {
                points.push((times[next], step.eval(times[next])));
                next += 1;
            }
        },
    )?;
    if times.len() > 1 {
        points.push((t_end, end));
    }
    Ok(Trajectory { f: f.clone(), z0: z, points })
}

/// `|u(t+s, z) - u(t, u(s, z))|`
pub fn semigroup_residual(f: &Expr, z: Complex64, t: f64, s: f64, params: &FlowParams) -> Result<f64> {
    let direct = advance(f, z, t + s, params)?;
    let chained = advance(f, advance(f, z, s, params)?, t, params)?;
    Ok((direct - chained).norm())
}

/// `|u(t_k, z) - τ|` at each checkpoint.
pub fn dw_convergence(
    f: &Expr,
    z: Complex64,
    tau: Complex64,
    checkpoints: &[f64],
    params: &FlowParams,
) -> Result<Vec<f64>> {
    let mut times = vec![0.0];
    times.extend(checkpoints.iter().copied().filter(|&t| t > 0.0));
    let traj = trajectory(f, z, &times, params)?;
    let mut out = Vec::with_capacity(checkpoints.len());
    for &t in checkpoints {
        let zt = if t == 0.0 {
            z
        } else {
            traj.points.iter().find(|p| p.0 == t).map(|p| p.1).unwrap_or(z)
        };
        out.push((zt - tau).norm());
    }
    Ok(out)
}
