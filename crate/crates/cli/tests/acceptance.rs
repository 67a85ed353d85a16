//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

mod common;

use std::time::Instant;

use holosemi::boundary::{self, RigidityKind, Verdict};
use holosemi::commute::{self, FlowTest};
use holosemi::corpus::{self, MemberKind};
use holosemi::flow::{self, FlowParams};
use holosemi::generator::{self, DwKind};
use holosemi::{linearize, parse, Expr, PolarGrid};
use num_complex::Complex64;
use rand::Rng;

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: impl Into<String>) -> Outcome {
    Outcome { passed, summary: summary.into() }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn closed_form_flows() -> Outcome {
    let params = FlowParams::default();
    let cases: [(&str, fn(Complex64, f64) -> Complex64); 3] = [
        ("z", |z, t| z * (-t).exp()),
        ("z^2-1", |z, t| (z.atanh() + t).tanh()),
        ("(z-1)*(1-z)", |z, t| (z + (1.0 - z) * t) / (1.0 + (1.0 - z) * t)),
    ];
    let mut worst: f64 = 0.0;
    for (text, exact) in cases {
        let f = parse(text).unwrap();
        for seed in 0..20 {
            let mut rng = corpus::rng(seed);
            let z = corpus::random_disk_point(&mut rng, 0.95);
            for t in [0.5, 1.0, 2.5, 5.0, rng.gen_range(0.0..10.0), 10.0] {
                let got = flow::advance(&f, z, t, &params).unwrap();
                worst = worst.max((got - exact(z, t)).norm());
            }
        }
    }
    outcome(worst <= 1e-8, format!("max |F_t(z) - closed form| = {worst:.2e} (tol 1e-8)"))
}

fn semigroup_law() -> Outcome {
    let params = FlowParams::default();
    let gens = corpus::mixed_corpus(7, 7);
    let mut rng = corpus::rng(2);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let f = &gens[i % gens.len()];
        let z = corpus::random_disk_point(&mut rng, 0.95);
        let total = rng.gen_range(0.0..10.0);
        let t = rng.gen_range(0.0..total);
        worst = worst.max(flow::semigroup_residual(f, z, t, total - t, &params).unwrap());
    }
    outcome(worst <= 1e-7, format!("{} generators, 100 samples, max residual {worst:.2e} (tol 1e-7)", gens.len()))
}

fn proposition1() -> Outcome {
    let members: Vec<_> = corpus::boundary_corpus(31, 35).into_iter().chain(corpus::interior_corpus(31, 15)).collect();
    let grid = PolarGrid::residual();
    let (mut fact, mut rep, mut min_g): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    let mut failed_checks = 0;
    let mut wrong_tau = 0;
    for m in &members {
        if !generator::check_condition_ii(&m.f, &PolarGrid::condition_ii(), holosemi::RESIDUAL_TOL).unwrap().passed {
            failed_checks += 1;
            continue;
        }
        let rec = generator::analyze(&m.f).unwrap();
        if (rec.dw.tau - m.tau).norm() > 1e-6 {
            wrong_tau += 1;
        }
        fact = fact.max(rec.factorization_residual(&grid).unwrap());
        rep = rep.max(rec.rep_iv_residual(&grid).unwrap());
        min_g = min_g.min(rec.min_re_g(&grid).unwrap());
    }
    let passed = failed_checks == 0 && wrong_tau == 0 && fact <= 1e-9 && rep <= 1e-9 && min_g >= -1e-7;
    outcome(
        passed,
        format!(
            "{} generators: condition (ii) failures {failed_checks}, misplaced tau {wrong_tau}, factorization {fact:.2e}, rep (iv) {rep:.2e}, min Re g {min_g:.3e}",
            members.len()
        ),
    )
}

fn schroeder() -> Outcome {
    let f = parse("z-z^2/2").unwrap();
    let sol = linearize::koenigs(&f, c(0.0, 0.0), 20).unwrap();
    // μh = h'f with μ = 1 gives (n-1) h_n = (n-1) h_{n-1} / 2
    let mut oracle = vec![c(0.0, 0.0), c(1.0, 0.0)];
    for n in 2..=20 {
        oracle.push(oracle[n - 1] / 2.0);
    }
    let coeff_err = (0..=20).map(|n| (sol.h_jet.coeff(n) - oracle[n]).norm()).fold(0.0, f64::max);
    let h2 = sol.h_jet.coeff(2);
    let h3 = sol.h_jet.coeff(3);
    let mut de: f64 = 0.0;
    for z in holosemi::grid::circle(c(0.0, 0.0), 0.2, 256) {
        de = de.max(sol.de_residual(&f, z).unwrap());
    }
    let params = FlowParams::default();
    let mut rng = corpus::rng(4);
    let mut fe: f64 = 0.0;
    for _ in 0..20 {
        let z = corpus::random_disk_point(&mut rng, 0.2);
        for t in [0.1, 0.5, 1.0] {
            fe = fe.max(linearize::schroeder_residual(&sol, &f, z, t, &params).unwrap());
        }
    }
    let passed = (h2 - 0.5).norm() <= 1e-12 && (h3 - 0.25).norm() <= 1e-12 && coeff_err <= 1e-12 && de <= 1e-8 && fe <= 1e-6;
    outcome(
        passed,
        format!(
            "h2 = {:.15}, h3 = {:.15}, recursion gap {coeff_err:.1e}, DE residual {de:.2e} (tol 1e-8), FE residual {fe:.2e} (tol 1e-6)",
            h2.re, h3.re
        ),
    )
}

fn abel() -> Outcome {
    let f = parse("(z-1)*(1-z)").unwrap();
    let sol = linearize::abel(&f).unwrap();
    let mut rng = corpus::rng(5);
    let mut quad: f64 = 0.0;
    for _ in 0..50 {
        let z = corpus::random_disk_point(&mut rng, 0.9);
        let exact = 1.0 / (1.0 - z) - 1.0;
        quad = quad.max((sol.eval(z).unwrap() - exact).norm());
    }
    let params = FlowParams::default();
    let mut trans: f64 = 0.0;
    for _ in 0..50 {
        let z = corpus::random_disk_point(&mut rng, 0.9);
        let t = rng.gen_range(0.0..5.0);
        trans = trans.max(linearize::abel_residual(&sol, z, t, &params).unwrap());
    }
    outcome(
        quad <= 1e-10 && trans <= 1e-7,
        format!("quadrature vs 1/(1-z) - 1: {quad:.2e} (tol 1e-10), translation residual {trans:.2e} (tol 1e-7)"),
    )
}

fn cubic_sign_law() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for k in [0.1, 0.25, 1.0] {
        let f = Expr::shifted_var(c(1.0, 0.0)).pow(3) * k;
        let v = boundary::rigidity_theorem1(&f).unwrap();
        let ok = match (v.kind, v.sign_check) {
            (RigidityKind::NontrivialCubic(a), Some(s)) => {
                parts.push(format!("c = {k}: a = {:.9}", a.re));
                (a - k).norm() <= 1e-3 * k && s.im.abs() <= 1e-4 && s.re > 0.0
            }
            _ => {
                parts.push(format!("c = {k}: {}", v.kind.name()));
                false
            }
        };
        passed &= ok;
    }
    let zero = boundary::rigidity_theorem1(&Expr::zero()).unwrap();
    passed &= zero.kind == RigidityKind::IdenticallyZero;
    parts.push(format!("f = 0: {}", zero.kind.name()));
    outcome(passed, parts.join(", "))
}

fn angular_bounds() -> Outcome {
    let members = corpus::boundary_corpus(17, 50);
    let (mut worst_excess, mut min_cor3): (f64, f64) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut oracle_gap: f64 = 0.0;
    let mut equality_mismatch = 0;
    for m in &members {
        let rec = boundary::corollary2_check(&m.f, m.tau).unwrap();
        worst_excess = worst_excess.max(rec.fprime - rec.bound);
        oracle_gap = oracle_gap.max((rec.fprime - m.expected_fprime()).abs()).max((rec.bound - m.expected_bound()).abs());
        let equal = (rec.bound - rec.fprime).abs() <= 1e-6;
        if equal != (m.kind == MemberKind::Automorphism) {
            equality_mismatch += 1;
        }
        let map = Expr::Var - m.f.clone();
        let r3 = boundary::corollary3_check(&map, m.tau).unwrap();
        min_cor3 = min_cor3.min(r3.slack);
    }
    let passed = worst_excess <= 1e-5 && equality_mismatch == 0 && min_cor3 >= -1e-5 && oracle_gap <= 1e-6;
    outcome(
        passed,
        format!(
            "{} generators: max f'(tau) - bound {worst_excess:.2e} (tol 1e-5), equality mismatches {equality_mismatch}, min slack for z - f {min_cor3:.2e}, gap to closed form {oracle_gap:.1e}",
            members.len()
        ),
    )
}

fn commutation_chain() -> Outcome {
    let mut rng = corpus::rng(8);
    let gens: Vec<Expr> = corpus::boundary_corpus(8, 6)
        .into_iter()
        .chain(corpus::interior_corpus(8, 4))
        .map(|m| m.f)
        .collect();
    let mut pairs = Vec::new();
    for f in &gens {
        pairs.push((f.clone(), f.clone() * rng.gen_range(0.2..3.0), true));
    }
    for i in 0..10 {
        pairs.push((gens[i].clone(), gens[(i + 3) % gens.len()].clone(), false));
    }
    let ft = FlowTest { samples: 20, params: FlowParams::default(), seed: 0 };
    let (mut disagreements, mut wrong) = (0, 0);
    let mut commuting_max: f64 = 0.0;
    for (f, g, expect) in &pairs {
        let r = commute::commutator_report(f, g, Some(&ft)).unwrap();
        if r.disagreement() {
            disagreements += 1;
        }
        if r.commutator_vanishes() != *expect {
            wrong += 1;
        }
        if *expect {
            commuting_max = commuting_max.max(r.flow_commutation_max.unwrap());
        }
    }
    outcome(
        disagreements == 0 && wrong == 0,
        format!("20 pairs: {disagreements} disagreements, {wrong} misclassified, max flow gap on commuting pairs {commuting_max:.2e}"),
    )
}

fn opposite_points() -> Outcome {
    let r = commute::lemma2_opposite(&parse("z^2-1").unwrap(), &parse("1-z^2").unwrap()).unwrap();
    let slack = r.repr_inequality_slack.unwrap_or(f64::NAN);
    let passed = r.alpha_real
        && (r.alpha + 1.0).abs() <= 1e-9
        && r.groups
        && r.dw_f.kind == DwKind::Boundary
        && (r.dw_f.tau - 1.0).norm() <= 1e-9
        && (r.dw_g.tau + 1.0).norm() <= 1e-9
        && r.opposite
        && slack.abs() <= 1e-6;
    outcome(
        passed,
        format!(
            "alpha = {}, groups = {}, dw = {} and {}, opposite = {}, slack = {slack:.1e}",
            r.alpha, r.groups, r.dw_f.tau, r.dw_g.tau, r.opposite
        ),
    )
}

fn lemma1() -> Outcome {
    let samples = corpus::herglotz_corpus(12, 20);
    let (mut gap, mut min_k, mut oracle): (f64, f64, f64) = (0.0, f64::INFINITY, 0.0);
    let mut both_finite = 0;
    let mut verdict_mismatch = 0;
    for s in &samples {
        let r = boundary::lemma1_k(&s.g, s.tau).unwrap();
        if let Some(g) = r.cayley_gap {
            gap = gap.max(g);
            both_finite += 1;
        }
        if r.k.is_finite() {
            min_k = min_k.min(r.k.value.re);
        }
        match s.k {
            Some(k) if r.k.is_finite() => oracle = oracle.max((r.k.value.re - k).abs()),
            None if r.k.verdict == Verdict::Infinite => {}
            _ => verdict_mismatch += 1,
        }
    }
    let passed = gap <= 1e-3 && min_k >= -1e-4 && verdict_mismatch == 0;
    outcome(
        passed,
        format!(
            "20 Herglotz functions, {both_finite} with both limits finite: max |k - beta_h/2| {gap:.2e} (tol 1e-3), min k {min_k:.3e}, verdict mismatches {verdict_mismatch}, gap to 1/(2m) {oracle:.1e}"
        ),
    )
}

fn cli_determinism() -> Outcome {
    let checks = common::determinism();
    let bad: Vec<String> = checks.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}"))).collect();
    outcome(bad.is_empty(), format!("{} fixtures, {} mismatches {:?}", checks.len(), bad.len(), bad))
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check, Option<f64>); 11] = [
        ("closed-form flow agreement", closed_form_flows, Some(5.0)),
        ("semigroup law", semigroup_law, Some(30.0)),
        ("generator representations", proposition1, Some(60.0)),
        ("Schroeder linearization", schroeder, None),
        ("Abel linearization", abel, None),
        ("cubic sign law", cubic_sign_law, None),
        ("angular derivative bounds", angular_bounds, None),
        ("commutation equivalence", commutation_chain, Some(120.0)),
        ("opposite Denjoy-Wolff points", opposite_points, None),
        ("Herglotz boundary limit", lemma1, None),
        ("CLI determinism", cli_determinism, None),
    ];
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let secs = start.elapsed().as_secs_f64();
        let in_time = limit.is_none_or(|l| secs < l);
        let passed = o.passed && in_time;
        if !passed {
            failures += 1;
        }
        let timing = match limit {
            Some(l) => format!("{secs:.2} s, limit {l} s"),
            None => format!("{secs:.2} s"),
        };
        println!("{} {:>2} {name}: {} [{timing}]", if passed { "PASS" } else { "FAIL" }, i + 1, o.summary);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
