//! Seeded random families of generators, Herglotz functions and self-maps
//! with known boundary data, for randomized checks.
//!
//! Every family is built from Herglotz kernels `(ζ + z)/(ζ - z)` with
//! `|ζ| > 1`, so members are pole-free on the closed disk unless stated
//! otherwise.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::Expr;

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the disk of radius `max_r`.
pub fn random_disk_point<R: Rng>(rng: &mut R, max_r: f64) -> Complex64 {
    let r = max_r * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

/// `(ζ + z)/(ζ - z)`
pub fn herglotz_kernel(zeta: Complex64) -> Expr {
    (Expr::Const(zeta) + Expr::Var) / (Expr::Const(zeta) - Expr::Var)
}

/// `Σ m_j (ζ_j + z)/(ζ_j - z) + c + ib` with `m_j, c >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HerglotzSum {
    pub kernels: Vec<(Complex64, f64)>,
    pub constant: f64,
    pub imaginary: f64,
}

impl HerglotzSum {
    pub fn expr(&self) -> Expr {
        let mut e = Expr::Const(Complex64::new(self.constant, self.imaginary));
        for &(zeta, m) in &self.kernels {
            e = e + herglotz_kernel(zeta) * m;
        }
        e
    }

    /// `Re` of the value at 0: the total mass plus the constant.
    pub fn real_part_at_zero(&self) -> f64 {
        self.kernels.iter().map(|k| k.1).sum::<f64>() + self.constant
    }

    /// Kernels at random points with `|ζ|` in `[1.05, 1.6]`, at least
    /// `min_arc` radians away from `avoid`.
    pub fn random<R: Rng>(rng: &mut R, avoid: Option<Complex64>, min_arc: f64) -> Self {
        let n = rng.gen_range(1..=3);
        let mut kernels = Vec::with_capacity(n);
        while kernels.len() < n {
            let zeta = random_unit(rng);
            if let Some(a) = avoid {
                if (zeta * a.conj()).arg().abs() < min_arc {
                    continue;
                }
            }
            kernels.push((zeta * rng.gen_range(1.05..1.6), rng.gen_range(0.05..1.0)));
        }
        HerglotzSum { kernels, constant: rng.gen_range(0.0..0.5), imaginary: rng.gen_range(-1.0..1.0) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemberKind {
    Interior,
    Hyperbolic,
    Parabolic,
    /// `a + ibz - āz²`
    Automorphism,
}

/// `f = (z - τ)(1 - τ̄z) g` with `g = m_τ (τ + z)/(τ - z) + h`, `h` a
/// Herglotz sum.
#[derive(Clone, Debug, PartialEq)]
pub struct BpMember {
    pub f: Expr,
    pub g: Expr,
    pub tau: Complex64,
    pub kind: MemberKind,
    /// Mass of the kernel at τ (boundary τ only).
    pub tau_mass: f64,
    pub rest: HerglotzSum,
}

impl BpMember {
    fn build(tau: Complex64, tau_mass: f64, rest: HerglotzSum, kind: MemberKind) -> Self {
        let den = Expr::shifted_var(tau) * (Expr::one() - Expr::Const(tau.conj()) * Expr::Var);
        let mut f = den * rest.expr();
        let mut g = rest.expr();
        if tau_mass > 0.0 {
            // (z-τ)(1-τ̄z) m (τ+z)/(τ-z) = m τ̄ (z² - τ²), written without the removable pole
            f = f + (Expr::Var.pow(2) - Expr::Const(tau * tau)) * Expr::Const(tau.conj() * tau_mass);
            g = g + herglotz_kernel(tau) * tau_mass;
        }
        BpMember { f, g, tau, kind, tau_mass, rest }
    }

    /// Angular derivative at τ: `2 m_τ`.
    pub fn expected_fprime(&self) -> f64 {
        2.0 * self.tau_mass
    }

    /// `-2 Re(conj(f(0)) τ) = 2 Re g(0)`.
    pub fn expected_bound(&self) -> f64 {
        2.0 * (self.tau_mass + self.rest.real_part_at_zero())
    }
}

/// Generators with a boundary Denjoy–Wolff point: about half hyperbolic,
/// a quarter parabolic and a quarter of automorphism form.
pub fn boundary_corpus(seed: u64, n: usize) -> Vec<BpMember> {
    let mut rng = rng(seed);
    (0..n)
        .map(|i| {
            let tau = random_unit(&mut rng);
            match i % 4 {
                0 | 1 => {
                    let rest = HerglotzSum::random(&mut rng, Some(tau), 0.3);
                    let m = rng.gen_range(0.1..1.5);
                    BpMember::build(tau, m, rest, MemberKind::Hyperbolic)
                }
                2 => {
                    let mut rest = HerglotzSum::random(&mut rng, Some(tau), 0.3);
                    rest.constant += 0.05;
                    BpMember::build(tau, 0.0, rest, MemberKind::Parabolic)
                }
                _ => {
                    let rest = HerglotzSum { kernels: vec![], constant: 0.0, imaginary: rng.gen_range(-1.0..1.0) };
                    let m = rng.gen_range(0.1..1.5);
                    BpMember::build(tau, m, rest, MemberKind::Automorphism)
                }
            }
        })
        .collect()
}

/// Generators with an interior Denjoy–Wolff point `|τ| <= 0.7`.
pub fn interior_corpus(seed: u64, n: usize) -> Vec<BpMember> {
    let mut rng = rng(seed);
    (0..n)
        .map(|_| {
            let tau = random_disk_point(&mut rng, 0.7);
            let mut rest = HerglotzSum::random(&mut rng, None, 0.0);
            rest.constant += 0.1;
            BpMember::build(tau, 0.0, rest, MemberKind::Interior)
        })
        .collect()
}

/// Herglotz `g` together with the boundary limit of `g/(1 - τ̄z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HerglotzSample {
    pub g: Expr,
    pub tau: Complex64,
    /// `None` for an infinite limit.
    pub k: Option<f64>,
}

/// Half the members are `1/p` with `p` carrying a kernel of mass `m` at τ,
/// so `k = 1/(2m)`; the rest are plain Herglotz sums, with `k = ∞`.
pub fn herglotz_corpus(seed: u64, n: usize) -> Vec<HerglotzSample> {
    let mut rng = rng(seed);
    (0..n)
        .map(|i| {
            let tau = random_unit(&mut rng);
            let mut rest = HerglotzSum::random(&mut rng, Some(tau), 0.3);
            rest.constant += 0.05;
            if i % 2 == 0 {
                let m = rng.gen_range(0.2..2.0);
                // p = m(τ+z)/(τ-z) + rest, so g = (τ-z) / (m(τ+z) + (τ-z) rest)
                let tz = Expr::Const(tau) - Expr::Var;
                let g = tz.clone() / ((Expr::Const(tau) + Expr::Var) * m + tz * rest.expr());
                HerglotzSample { g, tau, k: Some(1.0 / (2.0 * m)) }
            } else {
                HerglotzSample { g: rest.expr(), tau, k: None }
            }
        })
        .collect()
}

/// Self-map `F(z) = τψ(τ̄z)` with `ψ` a convex combination of powers `z^k`
/// and automorphisms `(z + c)/(1 + cz)`, all fixing 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfMap {
    pub map: Expr,
    pub tau: Complex64,
    /// `ψ'(1)`
    pub fprime: f64,
    /// `ψ(0)`
    pub value_at_zero: f64,
}

pub fn self_map_corpus(seed: u64, n: usize) -> Vec<SelfMap> {
    let mut rng = rng(seed);
    (0..n)
        .map(|_| {
            let tau = random_unit(&mut rng);
            let w = Expr::Const(tau.conj()) * Expr::Var;
            let parts = rng.gen_range(1..=3);
            let weights: Vec<f64> = (0..parts).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = weights.iter().sum();
            let mut psi = Expr::zero();
            let (mut fprime, mut at_zero) = (0.0, 0.0);
            for wgt in weights {
                let lambda = wgt / total;
                if rng.gen_bool(0.5) {
                    let k = rng.gen_range(1..=3u32);
                    psi = psi + w.clone().pow(k) * lambda;
                    fprime += lambda * k as f64;
                } else {
                    let c = rng.gen_range(-0.8..0.8);
                    psi = psi + (w.clone() + c) / (Expr::one() + w.clone() * c) * lambda;
                    fprime += lambda * (1.0 - c) / (1.0 + c);
                    at_zero += lambda * c;
                }
            }
            SelfMap { map: Expr::Const(tau) * psi, tau, fprime, value_at_zero: at_zero }
        })
        .collect()
}

/// The three generators with closed-form flows, then `n` random boundary
/// and interior members.
pub fn mixed_corpus(seed: u64, n: usize) -> Vec<Expr> {
    let mut out = vec![
        Expr::Var,
        Expr::Var.pow(2) - Expr::one(),
        Expr::shifted_var(Complex64::new(1.0, 0.0)) * (Expr::one() - Expr::Var),
    ];
    let b = boundary_corpus(seed, n.div_ceil(2));
    let i = interior_corpus(seed.wrapping_add(1), n / 2);
    out.extend(b.into_iter().map(|m| m.f));
    out.extend(i.into_iter().map(|m| m.f));
    out
}
