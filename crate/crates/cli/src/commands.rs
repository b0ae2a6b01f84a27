use std::fs::File;
use std::io::{BufWriter, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use semiflow_core::conditions::{
    analyze, condition_c, BoundaryMethod, ConditionA, ConditionB, ConditionC, DiscGrid, Generation,
};
use semiflow_core::error::Error;
use semiflow_core::factor::{berkson_porta_factor, root_obstruction, RootObstruction};
use semiflow_core::flow::{classify_closed_form, denjoy_wolff, integrate_flow, trajectory, SemiflowModel, Trajectory};
use semiflow_core::ode::StepControl;
use semiflow_core::probes::{dirichlet_shift_witness, fn_probe, kernel_probe};
use semiflow_core::section::{flow_section, growth_bound_fit, norm_bound, operator_norm, FiniteSection, GrowthFit};
use semiflow_core::series::{TruncatedSeries, DEFAULT_CAP};
use semiflow_core::space::WeightSequence;
use semiflow_core::toeplitz::{caratheodory_toeplitz_with_tol, Definiteness};

use crate::output::{complex_matrix_csv, csv_row, write_json};
use crate::parse::{format_complex, SpaceArg};
use crate::{
    exit, CheckArgs, CliError, Command, DemoArgs, DwArgs, FactorArgs, FlowArgs, NormArgs, NrangeArgs, ToeplitzArgs,
};

type Outcome = Result<u8, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Errors from calls whose only failure modes are bad arguments.
fn input(e: Error) -> CliError {
    usage(e.to_string())
}

/// Series cap, overridable through `SEMIFLOW_MAX_TRUNC`.
fn max_trunc() -> Result<usize, CliError> {
    match std::env::var("SEMIFLOW_MAX_TRUNC") {
        Err(_) => Ok(DEFAULT_CAP),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 2 => Ok(n),
            _ => Err(usage(format!("SEMIFLOW_MAX_TRUNC must be an integer >= 2, got {v:?}"))),
        },
    }
}

fn check_len(what: &str, s: &TruncatedSeries, cap: usize) -> Result<(), CliError> {
    if s.coeffs().len() > cap {
        return Err(usage(format!("{what} has {} coefficients, above the series cap {cap}", s.coeffs().len())));
    }
    Ok(())
}

fn check_positive(what: &str, x: f64) -> Result<(), CliError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(usage(format!("{what} must be positive and finite, got {x}")));
    }
    Ok(())
}

fn model_for(g: &TruncatedSeries, numeric: bool) -> SemiflowModel {
    if numeric {
        SemiflowModel::numeric(g.clone())
    } else {
        classify_closed_form(g)
    }
}

pub fn run(command: Command, out: &mut impl Write) -> Outcome {
    match command {
        Command::Check(a) => check(a, out),
        Command::Factor(a) => factor(a, out),
        Command::Flow(a) => flow(a, out),
        Command::Dw(a) => dw(a, out),
        Command::Norm(a) => norm(a, out),
        Command::Nrange(a) => nrange(a, out),
        Command::Toeplitz(a) => toeplitz(a, out),
        Command::Demo(a) => demo(a, out),
    }
}

#[derive(Serialize)]
struct CheckReport<'a> {
    generator: &'a TruncatedSeries,
    verdict: Generation,
    condition_a: &'a ConditionA,
    condition_b: &'a ConditionB,
    condition_c: &'a ConditionC,
    root_obstruction: Option<RootObstruction>,
    notes: &'a [String],
}

fn verdict_code(v: Generation) -> u8 {
    match v {
        Generation::Generates => exit::GENERATES,
        Generation::DoesNotGenerate => exit::DOES_NOT_GENERATE,
        Generation::Marginal => exit::MARGINAL,
    }
}

fn check(a: CheckArgs, out: &mut impl Write) -> Outcome {
    let g = &a.generator.g;
    check_len("G", g, max_trunc()?)?;
    check_positive("--tol", a.tol)?;
    let grid = DiscGrid { radial: a.radial, angular: a.angular, r_max: a.r_max, ..DiscGrid::default() };
    let mut report = analyze(g, &grid, a.tol).map_err(input)?;
    if a.method == "sampled" {
        let c = condition_c(g, BoundaryMethod::Sampled, a.tol);
        report.verdict = if c.boundary_max.abs() <= a.tol {
            Generation::Marginal
        } else if c.pass {
            Generation::Generates
        } else {
            Generation::DoesNotGenerate
        };
        report.condition_c = c;
    }
    let roots = match root_obstruction(g, a.tol) {
        Ok(r) => Some(r),
        Err(Error::ZeroPolynomial) => None,
        Err(e) => return Err(e.into()),
    };
    write_json(
        out,
        &CheckReport {
            generator: g,
            verdict: report.verdict,
            condition_a: &report.condition_a,
            condition_b: &report.condition_b,
            condition_c: &report.condition_c,
            root_obstruction: roots,
            notes: &report.notes,
        },
    )?;
    Ok(verdict_code(report.verdict))
}

fn factor(a: FactorArgs, out: &mut impl Write) -> Outcome {
    let g = &a.generator.g;
    let cap = max_trunc()?;
    check_len("G", g, cap)?;
    check_positive("--tol", a.tol)?;
    let alpha = match a.alpha {
        Some(alpha) => alpha,
        None => root_obstruction(g, a.tol)?
            .roots
            .into_iter()
            .filter(|r| r.norm() <= 1.0 + a.tol)
            .min_by(|x, y| x.norm().total_cmp(&y.norm()))
            .ok_or_else(|| usage("G has no zero in the closed disc; pass --alpha"))?,
    };
    if alpha.norm() > 1.0 + a.tol {
        return Err(usage(format!("--alpha must lie in the closed disc, got modulus {}", alpha.norm())));
    }
    let bp = berkson_porta_factor(g, alpha, cap, a.tol).map_err(|e| match e {
        Error::NotAZero { .. } => input(e),
        other => other.into(),
    })?;
    write_json(out, &bp)?;
    Ok(exit::GENERATES)
}

fn write_trajectory(out: &mut impl Write, traj: &Trajectory) -> std::io::Result<()> {
    writeln!(out, "t,re,im,speed")?;
    for ((t, w), s) in traj.times.iter().zip(&traj.points).zip(&traj.speeds) {
        csv_row(out, &[*t, w.re, w.im, *s])?;
    }
    Ok(())
}

fn flow(a: FlowArgs, out: &mut impl Write) -> Outcome {
    let g = &a.generator.g;
    check_len("G", g, max_trunc()?)?;
    check_positive("-t", a.t)?;
    if !(a.z0.norm() < 1.0) {
        return Err(usage(format!("z0 must lie in the open unit disc, got modulus {}", a.z0.norm())));
    }
    check_positive("--rtol", a.rtol)?;
    check_positive("--atol", a.atol)?;
    let model = model_for(g, a.numeric);
    let traj = if model.variant.is_closed_form() {
        trajectory(&model, a.t, a.z0, a.samples)?
    } else {
        let ctrl = StepControl { rtol: a.rtol, atol: a.atol, ..StepControl::default() };
        integrate_flow(g, a.t, a.z0, &ctrl)?
    };
    write_trajectory(out, &traj)?;
    if traj.exited {
        let (t, w) = traj.end();
        eprintln!("semiflow: trajectory reached the boundary at t = {t} (|w| = {})", w.norm());
        return Ok(exit::BOUNDARY_EXIT);
    }
    Ok(exit::GENERATES)
}

#[derive(Serialize)]
struct DwReport {
    variant: &'static str,
    point: Complex64,
    boundary: bool,
    numeric: bool,
}

fn dw(a: DwArgs, out: &mut impl Write) -> Outcome {
    let g = &a.generator.g;
    check_len("G", g, max_trunc()?)?;
    let model = model_for(g, a.numeric);
    let dw = denjoy_wolff(&model)?;
    write_json(
        out,
        &DwReport { variant: model.variant.name(), point: dw.point, boundary: dw.boundary, numeric: dw.numeric },
    )?;
    Ok(exit::GENERATES)
}

#[derive(Serialize)]
struct SectionSummary {
    t: f64,
    phi0: Complex64,
    section_norm: f64,
    bound: Option<f64>,
    within_bound: Option<bool>,
    reliable: bool,
    tail_mass: f64,
}

#[derive(Serialize)]
struct NormReport<'a> {
    space: &'a WeightSequence,
    n: usize,
    variant: &'static str,
    section: Option<SectionSummary>,
    growth: Option<GrowthFit>,
}

fn export_section(path: &std::path::Path, format: &str, section: &FiniteSection) -> Result<(), CliError> {
    let mut file = BufWriter::new(File::create(path)?);
    if format == "json" {
        write_json(&mut file, section)?;
    } else {
        complex_matrix_csv(&mut file, section.dim, section.dim, |i, j| section.entries.get(i, j))?;
    }
    file.flush()?;
    Ok(())
}

fn norm(a: NormArgs, out: &mut impl Write) -> Outcome {
    let g = &a.generator.g;
    let cap = max_trunc()?;
    check_len("G", g, cap)?;
    if a.t.is_none() && a.grid.is_none() {
        return Err(usage("norm needs -t or --grid"));
    }
    if 2 * a.n + 2 > cap {
        return Err(usage(format!("-N {} needs {} series coefficients, above the series cap {cap}", a.n, 2 * a.n + 2)));
    }
    if a.section_out.is_some() && a.t.is_none() {
        return Err(usage("--section-out needs -t"));
    }
    let weights = a.space.weights(2 * a.n + 2).map_err(usage)?;
    let model = model_for(g, a.numeric);
    let section = match a.t {
        None => None,
        Some(t) => {
            check_positive("-t", t)?;
            let section = flow_section(&model, t, a.n, &weights)?;
            let section_norm = operator_norm(&section)?;
            let phi0 = section.symbol.coeff(0);
            let bound = norm_bound(&weights, phi0)?;
            if let Some(path) = &a.section_out {
                export_section(path, &a.section_format, &section)?;
            }
            Some(SectionSummary {
                t,
                phi0,
                section_norm,
                bound,
                within_bound: bound.map(|b| section_norm <= b + 1e-9),
                reliable: section.reliable,
                tail_mass: section.tail_mass,
            })
        }
    };
    let growth = match &a.grid {
        None => None,
        Some(grid) => Some(growth_bound_fit(g, &weights, a.n, grid).map_err(|e| match e {
            Error::InvalidArgument(_) => input(e),
            other => other.into(),
        })?),
    };
    write_json(out, &NormReport { space: &weights, n: a.n, variant: model.variant.name(), section, growth })?;
    Ok(exit::GENERATES)
}

fn nrange(a: NrangeArgs, out: &mut impl Write) -> Outcome {
    let g = &a.generator.g;
    check_len("G", g, max_trunc()?)?;
    let mut rows: Vec<(f64, f64)> = Vec::new();
    match a.probe.as_str() {
        "kernel" => {
            let weights = match &a.space {
                Some(s) => s.weights(a.n + 1).map_err(usage)?,
                None => WeightSequence::Hardy,
            };
            let theta = a.theta.unwrap_or_else(|| condition_c(g, BoundaryMethod::Certified, 1e-9).arg_max);
            for &r in &a.radii {
                let p = kernel_probe(g, Complex64::from_polar(r, theta), &weights, a.n).map_err(input)?;
                rows.push((r, p.re_part));
            }
        }
        "fn" => {
            let space = a.space.clone().unwrap_or(SpaceArg::Power(a.alpha_exp));
            let theta = a.theta.unwrap_or(0.0);
            for &n in &a.n_values {
                let weights = space.weights(n + 1).map_err(usage)?;
                let p = fn_probe(g, theta, n, a.alpha_exp, &weights).map_err(input)?;
                rows.push((n as f64, p.re_part));
            }
        }
        _ => {
            if matches!(&a.space, Some(s) if *s != SpaceArg::Named(WeightSequence::Dirichlet)) {
                return Err(usage("the shift witness lives in the Dirichlet space"));
            }
            let f = a.f.as_ref().ok_or_else(|| usage("the shift probe needs -f"))?;
            for &k in &a.k_values {
                let w = dirichlet_shift_witness(f, k, g).map_err(input)?;
                rows.push((k as f64, w.probe.re_part));
            }
        }
    }
    writeln!(out, "parameter,re_part")?;
    for (p, v) in rows {
        csv_row(out, &[p, v])?;
    }
    Ok(exit::GENERATES)
}

#[derive(Serialize)]
struct ToeplitzOrder {
    order: usize,
    min_eigenvalue: f64,
    leading_minors: Vec<f64>,
    verdict: Definiteness,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<Complex64>>>,
}

#[derive(Serialize)]
struct ToeplitzOutput {
    f: TruncatedSeries,
    right_half_plane: bool,
    results: Vec<ToeplitzOrder>,
}

fn toeplitz(a: ToeplitzArgs, out: &mut impl Write) -> Outcome {
    check_len("f", &a.f, max_trunc()?)?;
    if a.k == 0 {
        return Err(usage("-k must be at least 1"));
    }
    check_positive("--tol", a.tol)?;
    let report = caratheodory_toeplitz_with_tol(&a.f, a.k, a.tol)?;
    let results = report
        .results
        .into_iter()
        .map(|r| ToeplitzOrder {
            order: r.order,
            min_eigenvalue: r.min_eigenvalue,
            matrix: a
                .matrices
                .then(|| (0..r.order).map(|i| (0..r.order).map(|j| r.matrix.get(i, j)).collect()).collect()),
            leading_minors: r.leading_minors,
            verdict: r.verdict,
        })
        .collect();
    write_json(out, &ToeplitzOutput { f: a.f, right_half_plane: report.right_half_plane, results })?;
    Ok(exit::GENERATES)
}

#[derive(Serialize)]
struct DemoSample {
    index: usize,
    kind: &'static str,
    /// Ready to pass as `-G`.
    generator: String,
    verdict: Generation,
    boundary_max: f64,
}

fn disc_point(rng: &mut impl Rng, r: f64) -> Complex64 {
    Complex64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// `F(z)(ᾱz − 1)(z − α)` with `Re F > 0` on the disc.
fn sample_generator(rng: &mut impl Rng, degree: usize) -> TruncatedSeries {
    let alpha = disc_point(rng, 0.9);
    let f_degree = degree.saturating_sub(2);
    let mut f = vec![Complex64::new(1.0, rng.gen_range(-1.0..1.0))];
    let mut budget = 0.9;
    for _ in 0..f_degree {
        let c = disc_point(rng, budget);
        budget -= c.norm();
        f.push(c);
    }
    let f = TruncatedSeries::new(f).expect("finite");
    let bp = TruncatedSeries::new(vec![alpha, Complex64::new(-(1.0 + alpha.norm_sqr()), 0.0), alpha.conj()]).expect("finite");
    f.mul(&bp)
}

fn demo(a: DemoArgs, out: &mut impl Write) -> Outcome {
    if a.degree == 0 || a.degree + 1 > max_trunc()? {
        return Err(usage("--degree must be between 1 and the series cap"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut samples = Vec::with_capacity(a.count);
    for index in 0..a.count {
        let (kind, g) = if index % 2 == 0 {
            ("berkson_porta", sample_generator(&mut rng, a.degree.max(2)))
        } else {
            let coeffs = (0..=a.degree).map(|_| disc_point(&mut rng, 1.0)).collect();
            ("random", TruncatedSeries::new(coeffs).expect("finite"))
        };
        let c = condition_c(&g, BoundaryMethod::Certified, semiflow_core::conditions::DEFAULT_TOL);
        let verdict = if c.boundary_max.abs() <= semiflow_core::conditions::DEFAULT_TOL {
            Generation::Marginal
        } else if c.pass {
            Generation::Generates
        } else {
            Generation::DoesNotGenerate
        };
        let generator = g.coeffs().iter().map(|z| format_complex(*z)).collect::<Vec<_>>().join(",");
        samples.push(DemoSample { index, kind, generator, verdict, boundary_max: c.boundary_max });
    }
    write_json(out, &samples)?;
    Ok(exit::GENERATES)
}
