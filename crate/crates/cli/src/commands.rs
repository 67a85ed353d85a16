use holosemi::boundary::{self, Corollary2Record, RigidityKind, RigidityVerdict};
use holosemi::commute::{self, FlowTest};
use holosemi::flow::{self, FlowParams};
use holosemi::generator::{self, DerivativeAtTau, DwKind, DwPoint};
use holosemi::linearize;
use holosemi::{corpus, grid, taylor, Error, Expr, PolarGrid};
use num_complex::Complex64;
use rand::Rng;
use serde_json::Value;

use crate::args::*;
use crate::report::{complex, complexes, num, opt, reals, Fields, Report};
use crate::{svg, CliError, Outcome, EXIT_NEGATIVE, EXIT_OK};

/// Checkpoints for the distance to the Denjoy-Wolff point.
const DW_CHECKPOINTS: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];
const SAMPLE_RADIUS: f64 = 0.9;
const SCHROEDER_TIMES: [f64; 3] = [0.1, 0.5, 1.0];
const ABEL_MAX_TIME: f64 = 5.0;
const ABEL_SAMPLE_RADIUS: f64 = 0.8;

struct Ctx {
    seed: u64,
    has_out: bool,
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let ctx = Ctx { seed: cli.seed, has_out: cli.out.is_some() };
    let name = cli.command.name();
    let mut o = match &cli.command {
        Command::Eval(a) => eval(a),
        Command::CheckGenerator(a) => check_generator(a),
        Command::Dw(a) => dw(a, &ctx),
        Command::Flow(a) => flow_cmd(a),
        Command::Koenigs(a) => koenigs(a, &ctx),
        Command::Abel(a) => abel(a, &ctx),
        Command::Rigidity(a) => rigidity(a),
        Command::Bounds(a) => bounds(a),
        Command::Commute(a) => commute_cmd(a, &ctx),
        Command::Centralizer(a) => centralizer(a),
        Command::Plot(a) => plot(a, &ctx),
    }?;
    o.report.subcommand = name;
    o.report.inputs.set("seed", cli.seed);
    Ok(o)
}

fn outcome(inputs: Fields, verdict: &str, results: Fields, exit: i32) -> Outcome {
    Outcome {
        report: Report { subcommand: "", inputs, verdict: verdict.into(), results, warnings: vec![] },
        exit,
        payload: None,
    }
}

fn func_inputs(text: &str) -> Result<(Expr, Fields), CliError> {
    let f = parse_function(text)?;
    let mut inputs = Fields::new();
    inputs.set("func", text);
    Ok((f, inputs))
}

fn dw_fields(r: &mut Fields, key: &str, dw: &DwPoint) {
    r.complex(key, dw.tau);
    r.set(&format!("{key}_kind"), dw_kind(dw.kind));
}

fn dw_kind(k: DwKind) -> &'static str {
    match k {
        DwKind::Interior => "Interior",
        DwKind::Boundary => "Boundary",
    }
}

fn derivative_value(d: DerivativeAtTau) -> Value {
    match d {
        DerivativeAtTau::Interior(c) => complex(c),
        DerivativeAtTau::Angular(x) => num(x),
        DerivativeAtTau::Infinite => num(f64::INFINITY),
    }
}

fn require_generator(f: &Expr) -> Result<(), CliError> {
    let check = generator::check_condition_ii(f, &PolarGrid::condition_ii(), holosemi::RESIDUAL_TOL)?;
    if !check.passed {
        return Err(CliError::Negative(format!(
            "not a generator: margin {:e} at {}",
            check.min_margin, check.worst_point
        )));
    }
    Ok(())
}

fn random_points(seed: u64, n: usize, center: Complex64, radius: f64) -> Vec<Complex64> {
    let mut rng = corpus::rng(seed);
    (0..n).map(|_| center + corpus::random_disk_point(&mut rng, radius)).collect()
}

fn eval(a: &EvalArgs) -> Result<Outcome, CliError> {
    let (f, mut inputs) = func_inputs(&a.func.func)?;
    inputs.set("at", a.at.clone());
    inputs.set("degree", opt(a.degree, Value::from));
    let d = f.derivative();
    let mut points = Vec::new();
    for text in &a.at {
        let z = parse_complex(text)?;
        let mut p = Fields::new();
        p.complex("z", z);
        p.complex("value", f.eval(z).map_err(Error::from)?);
        p.complex("derivative", d.eval(z).map_err(Error::from)?);
        if let Some(n) = a.degree {
            p.set("taylor", complexes(taylor(&f, z, n).map_err(Error::from)?.coeffs()));
        }
        points.push(p.into_value());
    }
    let mut r = Fields::new();
    r.set("normalized", f.normalize().to_string());
    r.set("points", points);
    Ok(outcome(inputs, "evaluated", r, EXIT_OK))
}

fn check_generator(a: &CheckArgs) -> Result<Outcome, CliError> {
    let (f, mut inputs) = func_inputs(&a.func.func)?;
    if a.angles == 0 || a.radii == 0 || !(a.max_r > 0.0 && a.max_r <= 0.999) || !(a.tol > 0.0) {
        return Err(CliError::Usage("grid needs angles, radii >= 1, max_r in (0, 0.999] and tol > 0".into()));
    }
    inputs.set("angles", a.angles).set("radii", a.radii).real("max_r", a.max_r).real("tol", a.tol);
    let check = generator::check_condition_ii(&f, &PolarGrid::new(a.angles, a.radii, a.max_r), a.tol)?;
    let mut r = Fields::new();
    r.set("passed", check.passed);
    r.real("min_margin", check.min_margin);
    r.complex("worst_point", check.worst_point);
    r.set("samples", check.samples);
    if !check.passed {
        return Ok(outcome(inputs, "not_generator", r, EXIT_NEGATIVE));
    }
    let rec = match generator::analyze(&f) {
        Ok(rec) => rec,
        Err(Error::NoDwFound(msg)) => {
            let mut o = outcome(inputs, "not_generator", r, EXIT_NEGATIVE);
            o.report.warnings.push(format!("condition (ii) holds on the grid but no Denjoy-Wolff point: {msg}"));
            return Ok(o);
        }
        Err(e) => return Err(e.into()),
    };
    let grid = PolarGrid::residual();
    let fact = rec.factorization_residual(&grid)?;
    let rep = rec.rep_iv_residual(&grid)?;
    let min_re_g = rec.min_re_g(&grid)?;
    r.complex("dw", rec.dw.tau);
    r.set("dw_kind", dw_kind(rec.dw.kind));
    r.set("type", rec.kind.name());
    r.complex("a", rec.a);
    r.set("angular_derivative", derivative_value(rec.derivative_at_tau));
    r.real("factorization_residual", fact);
    r.real("rep_iv_residual", rep);
    r.real("min_re_g", min_re_g);
    r.set("herglotz", min_re_g >= -holosemi::SIGN_TOL);
    r.set("automorphism_group", generator::is_automorphism_group_generator(&f)?);
    let mut o = outcome(inputs, "generator", r, EXIT_OK);
    if fact > holosemi::RESIDUAL_TOL {
        o.report.warnings.push(format!("factorization residual {fact:e} exceeds tolerance"));
    }
    if rep > holosemi::RESIDUAL_TOL {
        o.report.warnings.push(format!("representation (iv) residual {rep:e} exceeds tolerance"));
    }
    Ok(o)
}

fn dw(a: &DwArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let (f, mut inputs) = func_inputs(&a.func.func)?;
    inputs.set("samples", a.samples);
    require_generator(&f)?;
    let rec = generator::analyze(&f)?;
    let mut r = Fields::new();
    dw_fields(&mut r, "dw", &rec.dw);
    r.set("type", rec.kind.name());
    r.set("angular_derivative", derivative_value(rec.derivative_at_tau));
    r.set("checkpoints", reals(&DW_CHECKPOINTS));
    let params = FlowParams::default();
    let mut runs = Vec::new();
    let mut monotone = true;
    for z in random_points(ctx.seed, a.samples, Complex64::new(0.0, 0.0), SAMPLE_RADIUS) {
        let d = flow::dw_convergence(&f, z, rec.dw.tau, &DW_CHECKPOINTS, &params)?;
        monotone &= d.windows(2).all(|w| w[1] <= w[0] + 1e-9);
        let mut run = Fields::new();
        run.complex("z", z).set("distances", reals(&d));
        runs.push(run.into_value());
    }
    r.set("convergence", runs);
    r.set("monotone", monotone);
    let verdict = dw_kind(rec.dw.kind).to_lowercase();
    let mut o = outcome(inputs, &verdict, r, EXIT_OK);
    if !monotone {
        o.report.warnings.push("distance to the Denjoy-Wolff point increased along a sample trajectory".into());
    }
    Ok(o)
}

fn flow_params(p: &FlowParamsArgs) -> Result<FlowParams, CliError> {
    let params = FlowParams { rel_tol: p.rel_tol, abs_tol: p.abs_tol, max_step: p.max_step, ..FlowParams::default() };
    params.validate()?;
    Ok(params)
}

fn flow_cmd(a: &FlowArgs) -> Result<Outcome, CliError> {
    let (f, mut inputs) = func_inputs(&a.func.func)?;
    let z0 = parse_complex(&a.z0)?;
    if z0.norm() >= 1.0 {
        return Err(CliError::Usage(format!("starting point {z0} is not in the open disk")));
    }
    if a.steps == 0 || !(a.t_end > 0.0 && a.t_end.is_finite()) {
        return Err(CliError::Usage("need steps >= 1 and a positive finite t-end".into()));
    }
    let params = flow_params(&a.params)?;
    inputs.complex("z0", z0).real("t_end", a.t_end).set("steps", a.steps);
    inputs.real("rel_tol", params.rel_tol).real("abs_tol", params.abs_tol).real("max_step", params.max_step);
    let times: Vec<f64> = (0..=a.steps).map(|k| a.t_end * k as f64 / a.steps as f64).collect();
    let tr = flow::trajectory(&f, z0, &times, &params)?;
    let mut r = Fields::new();
    r.complex("endpoint", tr.endpoint());
    r.set("samples", tr.points.len());
    r.set(
        "trajectory",
        tr.points.iter().map(|&(t, z)| Value::Array(vec![num(t), num(z.re), num(z.im)])).collect::<Vec<_>>(),
    );
    let mut o = outcome(inputs, "integrated", r, EXIT_OK);
    o.payload = Some(tr.to_csv());
    Ok(o)
}

fn koenigs(a: &KoenigsArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let (f, mut inputs) = func_inputs(&a.func.func)?;
    inputs.set("tau", opt(a.tau.clone(), Value::from)).set("degree", a.degree).set("samples", a.samples);
    let tau = match &a.tau {
        Some(t) => parse_complex(t)?,
        None => {
            let dw = generator::find_dw_point(&f)?;
            if dw.kind == DwKind::Boundary {
                return Err(CliError::Negative(format!("Denjoy-Wolff point {} is on the boundary", dw.tau)));
            }
            dw.tau
        }
    };
    if tau.norm() >= 1.0 {
        return Err(CliError::Usage(format!("tau = {tau} is not in the open disk")));
    }
    let sol = linearize::koenigs(&f, tau, a.degree)?;
    let radius = (0.2f64).min(0.5 * (1.0 - tau.norm()));
    let mut de: f64 = 0.0;
    for z in grid::circle(tau, radius, 64) {
        de = de.max(sol.de_residual(&f, z)?);
    }
    let params = FlowParams::default();
    let mut fe: f64 = 0.0;
    for z in random_points(ctx.seed, a.samples, tau, 0.5 * radius) {
        for t in SCHROEDER_TIMES {
            fe = fe.max(linearize::schroeder_residual(&sol, &f, z, t, &params)?);
        }
    }
    let mut r = Fields::new();
    r.complex("tau", tau);
    r.complex("mu", sol.mu);
    r.set("coefficients", complexes(sol.h_jet.coeffs()));
    r.real("de_radius", radius);
    r.real("de_residual", de);
    r.set("fe_times", reals(&SCHROEDER_TIMES));
    r.real("fe_residual", fe);
    Ok(outcome(inputs, "linearized", r, EXIT_OK))
}

fn abel(a: &AbelArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let (f, mut inputs) = func_inputs(&a.func.func)?;
    inputs.set("at", a.at.clone()).set("samples", a.samples);
    let sol = linearize::abel(&f)?;
    let mut values = Vec::new();
    for text in &a.at {
        let z = parse_complex(text)?;
        if z.norm() >= 1.0 {
            return Err(CliError::Usage(format!("{z} is not in the open disk")));
        }
        let mut p = Fields::new();
        p.complex("z", z).complex("p", sol.eval(z)?);
        values.push(p.into_value());
    }
    let params = FlowParams::default();
    let mut rng = corpus::rng(ctx.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..a.samples {
        let z = corpus::random_disk_point(&mut rng, ABEL_SAMPLE_RADIUS);
        let t = rng.gen_range(0.0..ABEL_MAX_TIME);
        worst = worst.max(linearize::abel_residual(&sol, z, t, &params)?);
    }
    let mut r = Fields::new();
    r.set("values", values);
    r.real("translation_residual", worst);
    Ok(outcome(inputs, "solved", r, EXIT_OK))
}

fn rigidity_fields(v: &RigidityVerdict) -> Fields {
    let mut r = Fields::new();
    r.set("kind", v.kind.name());
    r.set("tau", opt(v.tau, complex));
    r.set("coefficient", opt(v.coefficient, complex));
    r.set("sign_check", opt(v.sign_check, complex));
    r.real("sweep_max", v.sweep_max);
    r.set("details", v.details.clone());
    r
}

fn rigidity(a: &RigidityArgs) -> Result<Outcome, CliError> {
    let (f, mut inputs) = func_inputs(&a.func.func)?;
    inputs.set("wedge", opt(a.wedge, num)).set("tau", opt(a.tau.clone(), Value::from));
    let v = match a.wedge {
        None => boundary::rigidity_theorem1(&f)?,
        Some(alpha) => {
            let tau = match &a.tau {
                Some(t) => parse_complex(t)?,
                None => {
                    let dw = generator::find_dw_point(&f)?;
                    if dw.kind == DwKind::Interior {
                        return Err(CliError::Negative(format!("Denjoy-Wolff point {} is interior", dw.tau)));
                    }
                    dw.tau
                }
            };
            if (tau.norm() - 1.0).abs() > 1e-9 {
                return Err(CliError::Usage(format!("tau = {tau} is not on the unit circle")));
            }
            boundary::rigidity_theorem2(&f, alpha, tau)?
        }
    };
    let exit = if v.kind == RigidityKind::NotApplicable { EXIT_NEGATIVE } else { EXIT_OK };
    let r = rigidity_fields(&v);
    Ok(outcome(inputs, &v.kind.name().to_lowercase(), r, exit))
}

fn corollary2_fields(c: &Corollary2Record) -> Fields {
    let mut r = Fields::new();
    r.real("fprime", c.fprime).real("bound", c.bound).real("slack", c.slack);
    r.set("holds", c.holds).set("equality", c.equality).set("automorphism_confirmed", c.automorphism_confirmed);
    r
}

fn boundary_tau(f: &Expr, given: Option<&String>) -> Result<Complex64, CliError> {
    let tau = match given {
        Some(t) => parse_complex(t)?,
        None => {
            let dw = generator::find_dw_point(f)?;
            if dw.kind == DwKind::Interior {
                return Err(CliError::Negative(format!("Denjoy-Wolff point {} is interior", dw.tau)));
            }
            dw.tau
        }
    };
    if (tau.norm() - 1.0).abs() > 1e-9 {
        return Err(CliError::Usage(format!("tau = {tau} is not on the unit circle")));
    }
    Ok(tau)
}

fn bounds(a: &BoundsArgs) -> Result<Outcome, CliError> {
    let (f, mut inputs) = func_inputs(&a.func.func)?;
    inputs.set("tau", opt(a.tau.clone(), Value::from)).set("self_map", a.self_map);
    if a.self_map {
        let Some(t) = &a.tau else {
            return Err(CliError::Usage("--self-map needs --tau".into()));
        };
        let tau = boundary_tau(&f, Some(t))?;
        let c = boundary::corollary3_check(&f, tau)?;
        let mut r = Fields::new();
        r.complex("tau", tau);
        let holds = c.slack >= -boundary::BOUNDARY_SIGN_TOL;
        r.real("fprime", c.fprime).real("bound", c.bound).real("slack", c.slack);
        r.set("holds", holds);
        r.set("generator", corollary2_fields(&c.generator).into_value());
        return Ok(outcome(
            inputs,
            if holds { "holds" } else { "violated" },
            r,
            if holds { EXIT_OK } else { EXIT_NEGATIVE },
        ));
    }
    let tau = boundary_tau(&f, a.tau.as_ref())?;
    let c = boundary::corollary2_check(&f, tau)?;
    let mut r = Fields::new();
    r.complex("tau", tau);
    for (k, v) in corollary2_fields(&c).iter() {
        r.set(k, v.clone());
    }
    Ok(outcome(inputs, if c.holds { "holds" } else { "violated" }, r, if c.holds { EXIT_OK } else { EXIT_NEGATIVE }))
}

fn commute_cmd(a: &CommuteArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let f = parse_function(&a.f)?;
    let g = parse_function(&a.g)?;
    let mut inputs = Fields::new();
    inputs.set("f", a.f.clone()).set("g", a.g.clone()).set("tau", opt(a.tau.clone(), Value::from));
    inputs.set("order", a.order).set("samples", a.samples);
    let ft = FlowTest { samples: a.samples, params: FlowParams::default(), seed: ctx.seed };
    let rep = commute::commutator_report(&f, &g, Some(&ft))?;
    let mut warnings = Vec::new();
    let mut r = Fields::new();
    r.set("commutator", rep.commutator.to_string());
    r.real("commutator_sup_norm", rep.sup_norm_grid);
    r.set("commutator_vanishes", rep.commutator_vanishes());
    r.set("alpha", opt(rep.alpha, complex));
    r.complex("alpha_estimate", rep.alpha_estimate);
    r.real("proportionality_residual", rep.proportionality_residual);
    r.set("flow_commutation_max", opt(rep.flow_commutation_max, num));
    r.set("flows_commute", opt(rep.flows_commute(), Value::from));
    r.set("disagreement", rep.disagreement());
    if rep.disagreement() {
        warnings.push("commutator, proportionality and flow tests disagree".into());
    }
    let mut opposite = Value::Null;
    if rep.alpha.is_some() {
        match commute::lemma2_opposite(&f, &g) {
            Ok(o) => {
                let mut l = Fields::new();
                l.set("alpha_real", o.alpha_real).real("alpha", o.alpha).set("groups", o.groups);
                dw_fields(&mut l, "dw_f", &o.dw_f);
                dw_fields(&mut l, "dw_g", &o.dw_g);
                l.set("opposite", o.opposite);
                l.set("sigma_f", opt(o.sigma_f, complex));
                l.set("repr_inequality_slack", opt(o.repr_inequality_slack, num));
                opposite = Value::from(o.opposite);
                r.set("lemma2", l.into_value());
            }
            Err(Error::NotApplicable(_)) => {}
            Err(e) => warnings.push(format!("opposite fixed point test: {e}")),
        }
    }
    r.set("opposite_fixed_points", opposite);
    if let Some(t) = &a.tau {
        let tau = parse_complex(t)?;
        let c = commute::theorem3_decision(&f, &g, tau, a.order)?;
        let mut d = Fields::new();
        d.set("verdict", c.verdict.name());
        d.set("alpha", opt(c.alpha, complex));
        d.set("order", opt(c.order, Value::from));
        d.set("coefficients_f", complexes(&c.coefficients_f));
        d.set("coefficients_g", complexes(&c.coefficients_g));
        d.set("details", c.details);
        r.set("coincidence", d.into_value());
    }
    let commuting = rep.commutator_vanishes();
    let mut o = outcome(
        inputs,
        if commuting { "commuting" } else { "not_commuting" },
        r,
        if commuting { EXIT_OK } else { EXIT_NEGATIVE },
    );
    o.report.warnings = warnings;
    Ok(o)
}

fn centralizer(a: &FuncArgs) -> Result<Outcome, CliError> {
    let (f, inputs) = func_inputs(&a.func)?;
    require_generator(&f)?;
    let v = commute::centralizer_trivial(&f)?;
    let mut r = Fields::new();
    r.set("trivial", v.trivial);
    r.set("reason", v.reason.name());
    dw_fields(&mut r, "dw", &v.dw);
    r.set("angular_derivative", opt(v.angular_derivative, num));
    Ok(outcome(inputs, if v.trivial { "trivial" } else { "unknown" }, r, EXIT_OK))
}

fn plot(a: &PlotArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let (f, mut inputs) = func_inputs(&a.func.func)?;
    if !(a.t_end > 0.0 && a.t_end.is_finite()) || a.arrow_angles == 0 || a.arrow_radii == 0 {
        return Err(CliError::Usage("need a positive t-end and a nonempty arrow grid".into()));
    }
    inputs.set("trajectories", a.trajectories).real("t_end", a.t_end);
    inputs.set("arrow_angles", a.arrow_angles).set("arrow_radii", a.arrow_radii);
    let starts = random_points(ctx.seed, a.trajectories, Complex64::new(0.0, 0.0), SAMPLE_RADIUS);
    let opts = svg::PlotOptions {
        arrow_grid: PolarGrid { include_origin: false, ..PolarGrid::new(a.arrow_angles, a.arrow_radii, SAMPLE_RADIUS) },
        t_end: a.t_end,
        steps: 200,
    };
    let plot = svg::render(&f, &starts, &opts)?;
    let mut r = Fields::new();
    r.set("arrows", plot.arrows);
    r.set("trajectories", plot.trajectories);
    r.set("skipped", plot.skipped);
    if !ctx.has_out {
        r.set("svg", plot.svg.clone());
    }
    let mut o = outcome(inputs, "plotted", r, EXIT_OK);
    if plot.skipped > 0 {
        o.report.warnings.push(format!("{} trajectories failed to integrate and were left out", plot.skipped));
    }
    o.payload = Some(plot.svg);
    Ok(o)
}
