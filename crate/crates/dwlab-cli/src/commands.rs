use std::f64::consts::PI;
use std::fs;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use dwlab_core::corpus::multiplier_corpus;
use dwlab_core::io::{fmt17, parse_bidegree, parse_instance, parse_trig};
use dwlab_core::numeric::{beta, csum, gamma, rel_diff};
use dwlab_core::quadrature::{
    build_disk_rule, integrate_disk, refine_until, DiskRule, RuleFamily,
};
use dwlab_core::rotation::{
    certify_sweep, schur_witness_check, summarize, write_sweep_csv, BlForm, CertifyRow, Family, ModeSeries,
    OperatorForms, SchurClaim, SchurReport, SweepSummary, TlForm,
};
use dwlab_core::space::{
    besov_boundary_norm, carleson_check, gap_series, integral_norm, pick_coeffs, schwarz_pick_check, series_norm,
    PowerSeries, TrigPoly,
};
use dwlab_core::transforms::{
    a_alpha_norm, beurling_transform, beurling_transform_on_rule, cauchy_transform, dbar_residual, dbar_study,
    dbar_test_points, operator_t, operator_t_on_rule, poisson_extension, DbarResidual,
};
use dwlab_core::wolff::{solve_uh, SolutionReport};
use dwlab_core::{DwError, Result, WeightParam};

use crate::config::{BForm, CertifyArgs, QuadArgs, RunConfig, SolveArgs, SpaceArgs, TForm, TransformArgs, TransformOp};
use crate::output::{CheckRow, Outcome, Status, CHECK_COLUMNS};

fn alphas(values: &[f64]) -> Result<Vec<WeightParam>> {
    if values.is_empty() {
        return Err(DwError::InvalidArgument("--alpha needs at least one value".into()));
    }
    values.iter().map(|&a| WeightParam::new(a)).collect()
}

impl From<BForm> for BlForm {
    fn from(f: BForm) -> Self {
        match f {
            BForm::Kernel => BlForm::KernelConsistent,
            BForm::Printed => BlForm::Printed,
        }
    }
}

impl From<TForm> for TlForm {
    fn from(f: TForm) -> Self {
        match f {
            TForm::Kernel => TlForm::KernelConsistent,
            TForm::PrintedMeasure => TlForm::PrintedMeasure,
            TForm::PrintedZeroMode => TlForm::PrintedZeroMode,
        }
    }
}

// ---- certify

#[derive(Serialize)]
struct CertifyReport<'a> {
    schema: &'static str,
    config: RunConfig<'a, CertifyArgs>,
    pass: bool,
    summary: Vec<SweepSummary>,
    rows: Vec<CertifyRow>,
    schur: Vec<SchurReport>,
}

pub fn certify(args: &CertifyArgs) -> Result<Outcome> {
    let als = alphas(&args.alpha)?;
    let families: Vec<Family> = args.family.iter().map(|s| s.parse()).collect::<Result<_>>()?;
    if args.lmax < 0 {
        return Err(DwError::InvalidArgument(format!("--lmax must be >= 0, got {}", args.lmax)));
    }
    let forms = OperatorForms { t: args.t_form.into(), b: args.b_form.into() };
    let rows = certify_sweep(&families, &als, args.lmax, args.n_r, forms)?;
    let schur: Vec<SchurReport> = if args.schur {
        als.iter().flat_map(|&a| SchurClaim::ALL.iter().map(move |&c| schur_witness_check(c, a))).collect()
    } else {
        Vec::new()
    };
    let pass = rows.iter().all(CertifyRow::pass) && schur.iter().all(|s| s.pass);
    let mut csv = Vec::new();
    write_sweep_csv(&rows, &mut csv)?;
    let report = CertifyReport {
        schema: "dwlab.certify.v1",
        config: RunConfig { command: "certify", settings: args },
        pass,
        summary: summarize(&rows),
        rows,
        schur,
    };
    Ok(Outcome {
        pass,
        json: dwlab_core::io::to_json17(&report)?,
        csv: String::from_utf8(csv).map_err(|e| DwError::Io(e.to_string()))?,
    })
}

// ---- solve

#[derive(Serialize)]
struct SolveOutput<'a> {
    schema: &'static str,
    config: RunConfig<'a, SolveArgs>,
    pass: bool,
    /// non_analytic_ratio must not exceed fit_tol^2
    analyticity_bound: f64,
    analyticity_pass: bool,
    solution: &'a SolutionReport,
}

pub const TERM_COLUMNS: [&str; 7] = ["term", "value", "bound", "asserted", "tau", "pass", "note"];

pub fn solve(args: &SolveArgs) -> Result<Outcome> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| DwError::Io(format!("{}: {e}", args.input.display())))?;
    let (inst, mut opts) = parse_instance(&text)?;
    if let Some(n) = args.n_r {
        opts.n_r = n;
    }
    if let Some(m) = args.angular {
        opts.m = m;
    }
    if let Some(t) = args.trunc {
        opts.trunc = t;
    }
    if let Some(t) = args.tol {
        opts.fit_tol = t;
    }
    opts.mobius |= args.mobius;
    let sol = solve_uh(&inst, &opts)?;
    let rep = &sol.report;
    let analyticity_bound = opts.fit_tol * opts.fit_tol;
    let analyticity_pass = rep.analyticity.non_analytic_ratio <= analyticity_bound;
    let pass = rep.pass && analyticity_pass;

    let b = |x: bool| x.to_string();
    let mut rows: Vec<Vec<String>> = rep
        .table
        .terms
        .iter()
        .map(|t| {
            vec![
                t.term.to_string(),
                fmt17(t.value),
                t.bound.map(fmt17).unwrap_or_default(),
                b(t.asserted),
                fmt17(t.tau),
                t.pass.map(b).unwrap_or_default(),
                t.note.to_string(),
            ]
        })
        .collect();
    rows.push(vec![
        "ideal_residual".into(),
        fmt17(rep.ideal_residual),
        fmt17(rep.ideal_bound),
        b(true),
        String::new(),
        b(rep.ideal_pass),
        "max |F u - H^3 h| on the grid".into(),
    ]);
    rows.push(vec![
        "non_analytic_ratio".into(),
        fmt17(rep.analyticity.non_analytic_ratio),
        fmt17(analyticity_bound),
        b(true),
        String::new(),
        b(analyticity_pass),
        "energy of u outside span{r^l e^{il theta}, l >= 0}".into(),
    ]);
    let out = SolveOutput {
        schema: "dwlab.solve.v1",
        config: RunConfig { command: "solve", settings: args },
        pass,
        analyticity_bound,
        analyticity_pass,
        solution: rep,
    };
    Outcome::new(pass, &out, &TERM_COLUMNS, rows)
}

// ---- space

#[derive(Serialize)]
struct CheckReport<'a, T: Serialize> {
    schema: &'static str,
    config: RunConfig<'a, T>,
    pass: bool,
    rows: Vec<CheckRow>,
}

fn check_outcome<T: Serialize>(schema: &'static str, command: &'static str, args: &T, rows: Vec<CheckRow>) -> Result<Outcome> {
    let pass = rows.iter().all(|r| r.status != Status::Fail);
    let records = rows.iter().map(CheckRow::record).collect();
    let report = CheckReport { schema, config: RunConfig { command, settings: args }, pass, rows };
    Outcome::new(pass, &report, &CHECK_COLUMNS, records)
}

const SPACE_CHECKS: [&str; 5] = ["pick", "gap", "carleson", "schwarz-pick", "equivalence"];

/// zeta(q) for q > 1 by a partial sum plus an Euler-Maclaurin tail.
fn zeta(q: f64) -> f64 {
    let k = 1000usize;
    let kf = k as f64;
    csum((1..=k).map(|n| (n as f64).powf(-q))) + kf.powf(1.0 - q) / (q - 1.0) - 0.5 * kf.powf(-q)
        + q * kf.powf(-q - 1.0) / 12.0
}

fn row(check: &'static str, alpha: f64, item: impl Into<String>) -> CheckRow {
    CheckRow { check, alpha: Some(alpha), item: item.into(), value: None, bound: None, status: Status::Skipped, note: String::new() }
}

fn pick_rows(als: &[WeightParam], n: usize) -> Vec<CheckRow> {
    als.iter()
        .map(|&a| {
            let c = pick_coeffs(a, n);
            let (k, min) = c.iter().enumerate().fold((0, f64::INFINITY), |acc, (k, &v)| if v < acc.1 { (k, v) } else { acc });
            CheckRow {
                value: Some(min),
                bound: Some(0.0),
                status: Status::from_pass(c.iter().all(|&x| x > 0.0)),
                note: format!("min over n = 1..{n} at n = {}; must be > 0", k + 1),
                ..row("pick", a.value(), "min c_n")
            }
        })
        .collect()
}

fn gap_rows(als: &[WeightParam], n: usize) -> Vec<CheckRow> {
    let mut out = Vec::new();
    for &a in als {
        let g = gap_series(0, a, n);
        let half = gap_series(0, a, (n / 2).max(1));
        let q = 2.0 * g.m as f64 * a.value();
        let z = zeta(q);
        out.push(CheckRow {
            value: Some(g.sup_bound),
            bound: Some(z + 1e-3),
            status: Status::from_pass(g.sup_bound <= z + 1e-3),
            note: format!("m = {}; partial sum of n^(-{q}) against zeta({q}) + 1e-3", g.m),
            ..row("gap", a.value(), "sup_bound")
        });
        out.push(CheckRow {
            value: Some(g.series_norm),
            status: Status::from_pass(g.series_norm > half.series_norm),
            note: format!("D_alpha norm of the N-term truncation; N/2 gives {}", fmt17(half.series_norm)),
            ..row("gap", a.value(), "series_norm")
        });
    }
    out
}

fn multiplier_rows(check: &'static str, als: &[WeightParam], args: &SpaceArgs) -> Result<Vec<CheckRow>> {
    if args.corpus != "default" {
        return Err(DwError::InvalidArgument(format!("unknown corpus {:?} (only \"default\")", args.corpus)));
    }
    let corpus = multiplier_corpus(args.seed, 12);
    let mut out = Vec::new();
    for &a in als {
        let rule = build_disk_rule(a, args.n_r, args.angular)?;
        for (i, phi) in corpus.iter().enumerate() {
            let item = format!("multiplier {i}");
            if check == "carleson" {
                let g = &corpus[(i + 1) % corpus.len()];
                let r = carleson_check(phi, g, a, &rule, args.trunc, args.tol)?;
                out.push(CheckRow {
                    value: Some(r.lhs),
                    bound: Some(r.rhs * (1.0 + r.tau)),
                    status: Status::from_pass(r.pass),
                    note: format!("g = multiplier {}", (i + 1) % corpus.len()),
                    ..row(check, a.value(), item)
                });
            } else {
                let r = schwarz_pick_check(phi, a, args.trunc, &rule, args.tol);
                out.push(CheckRow {
                    value: Some(r.lhs_max),
                    bound: Some(r.sigma_max * (1.0 + r.tau)),
                    status: Status::from_pass(r.pass),
                    note: "max (1-|z|^2)|phi'(z)| against the compression norm".into(),
                    ..row(check, a.value(), item)
                });
            }
        }
    }
    Ok(out)
}

fn equivalence_rows(als: &[WeightParam], args: &SpaceArgs) -> Result<Vec<CheckRow>> {
    let mut out = Vec::new();
    for &a in als {
        let rule = build_disk_rule(a, args.n_r.max(40), args.angular)?;
        let limit = PI * gamma(2.0 - a.value());
        let mut worst = 0.0f64;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for n in 1..=64 {
            let f = PowerSeries::monomial(n, Complex64::new(1.0, 0.0));
            let ratio = integral_norm(&f, a, &rule)?.powi(2) / series_norm(&f, a).powi(2);
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            if n >= 32 {
                worst = worst.max((ratio / limit - 1.0).abs());
            }
        }
        out.push(CheckRow {
            value: Some(worst),
            bound: Some(0.1),
            status: Status::from_pass(worst <= 0.1),
            note: format!(
                "max |ratio/limit - 1| for n = 32..64, limit pi Gamma(2-alpha) = {}; band over n = 1..64 is [{}, {}]",
                fmt17(limit),
                fmt17(lo),
                fmt17(hi)
            ),
            ..row("equivalence", a.value(), "monomial ratio")
        });
        let mut besov = row("equivalence", a.value(), "besov(z) vs series(z)");
        if a.value() == 1.0 {
            let z = TrigPoly::from_power_series(&PowerSeries::from_real(&[0.0, 1.0]));
            let bz = besov_boundary_norm(&z, a, 64)?;
            let sz = series_norm(&PowerSeries::from_real(&[0.0, 1.0]), a);
            besov.value = Some((bz - sz).abs());
            besov.bound = Some(1e-10);
            besov.status = Status::from_pass((bz - sz).abs() <= 1e-10);
            besov.note = format!("besov = {}, series = {}", fmt17(bz), fmt17(sz));
        } else {
            besov.note = "the two norms coincide on z only at alpha = 1".into();
        }
        out.push(besov);
    }
    Ok(out)
}

pub fn space(args: &SpaceArgs) -> Result<Outcome> {
    let als = alphas(&args.alpha)?;
    let mut rows = Vec::new();
    for c in &args.check {
        match c.as_str() {
            "pick" => rows.extend(pick_rows(&als, args.n)),
            "gap" => rows.extend(gap_rows(&als, args.n)),
            "carleson" => rows.extend(multiplier_rows("carleson", &als, args)?),
            "schwarz-pick" => rows.extend(multiplier_rows("schwarz-pick", &als, args)?),
            "equivalence" => rows.extend(equivalence_rows(&als, args)?),
            other => {
                return Err(DwError::InvalidArgument(format!(
                    "unknown check {other:?} (expected one of {})",
                    SPACE_CHECKS.join(", ")
                )))
            }
        }
    }
    check_outcome("dwlab.space.v1", "space", args, rows)
}

// ---- transform

#[derive(Serialize)]
struct TransformReport<'a> {
    schema: &'static str,
    config: RunConfig<'a, TransformArgs>,
    pass: bool,
    points: Vec<Complex64>,
    values: Vec<Complex64>,
    dbar_study: Vec<DbarResidual>,
    dbar_orders: Vec<f64>,
    checks: Vec<CheckRow>,
}

/// ||A f||_{A_alpha} / ||f||_{A_alpha} on the rule.
fn norm_ratio(f_modes: &ModeSeries, image: &dwlab_core::transforms::TransformResult, rule: &DiskRule) -> f64 {
    let fb = f_modes.sample(&Arc::new(rule.radial.clone()));
    let nf = a_alpha_norm(&fb);
    let ni = image.modes.as_ref().map_or(0.0, a_alpha_norm);
    if nf > 0.0 {
        ni / nf
    } else {
        0.0
    }
}

pub fn transform(args: &TransformArgs) -> Result<Outcome> {
    let alpha = WeightParam::new(args.alpha)?;
    let text = fs::read_to_string(&args.input)
        .map_err(|e| DwError::Io(format!("{}: {e}", args.input.display())))?;
    let pts = dbar_test_points();
    let a = alpha.value();
    let mut study = (Vec::new(), Vec::new());
    let mut checks = Vec::new();
    let check = |item: &str| CheckRow { alpha: Some(a), ..row("transform", a, item) };
    let values = match args.op {
        TransformOp::Cauchy => {
            let k = parse_bidegree(&text)?;
            let v = cauchy_transform(&k, &pts)?.values;
            let r = dbar_residual(&k, 1e-4)?;
            study = dbar_study(&k, 1e-2, 4)?;
            checks.push(CheckRow {
                value: Some(r.max_residual),
                bound: Some(args.tol),
                status: Status::from_pass(r.max_residual <= args.tol),
                note: "max |dbar_h khat - k| on the test set, h = 1e-4".into(),
                ..check("dbar residual")
            });
            v
        }
        TransformOp::Beurling => {
            let k = parse_bidegree(&text)?;
            let form = args.b_form.into();
            let v = beurling_transform(&k, &pts, form)?.values;
            let rule = build_disk_rule(alpha, args.n_r, args.angular)?;
            let ratio = norm_ratio(&ModeSeries::from_bidegree(&k), &beurling_transform_on_rule(&k, &rule, form), &rule);
            checks.push(CheckRow {
                value: Some(ratio),
                bound: Some(23.0 / a),
                status: Status::from_pass(ratio <= 23.0 / a),
                note: "||B f|| / ||f|| in A_alpha".into(),
                ..check("norm ratio")
            });
            v
        }
        TransformOp::T => {
            let k = parse_bidegree(&text)?;
            let form = args.t_form.into();
            let v = operator_t(&k, &pts, form)?.values;
            let rule = build_disk_rule(alpha, args.n_r, args.angular)?;
            let ratio = norm_ratio(&ModeSeries::from_bidegree(&k), &operator_t_on_rule(&k, &rule, form), &rule);
            let bound = 2.0 * PI * 8.0 / (a * a);
            checks.push(CheckRow {
                value: Some(ratio),
                bound: Some(bound),
                status: Status::from_pass(ratio <= bound),
                note: "||T f|| / ||f|| in A_alpha".into(),
                ..check("norm ratio")
            });
            v
        }
        TransformOp::Poisson => {
            let g = parse_trig(&text)?;
            checks.push(CheckRow { note: "evaluation only".into(), ..check("poisson") });
            poisson_extension(&g, &pts).values
        }
    };
    let pass = checks.iter().all(|c| c.status != Status::Fail);
    let rows = pts
        .iter()
        .zip(&values)
        .map(|(z, v)| vec![fmt17(z.re), fmt17(z.im), fmt17(v.re), fmt17(v.im)])
        .collect();
    let report = TransformReport {
        schema: "dwlab.transform.v1",
        config: RunConfig { command: "transform", settings: args },
        pass,
        points: pts,
        values,
        dbar_study: study.0,
        dbar_orders: study.1,
        checks,
    };
    Outcome::new(pass, &report, &["z_re", "z_im", "value_re", "value_im"], rows)
}

// ---- quadcheck

pub fn quadcheck(args: &QuadArgs) -> Result<Outcome> {
    let als = alphas(&args.alpha)?;
    let mut rows = Vec::new();
    for (i, &a) in als.iter().enumerate() {
        let av = a.value();
        let rule = build_disk_rule(a, args.n_r, args.angular)?;
        if i == 0 {
            if let Some(p) = &args.rule_csv {
                rule.radial.write_csv(fs::File::create(p)?)?;
            }
        }
        let mass = csum(rule.radial.weights.iter().copied());
        let exact = 0.5 / (2.0 - av);
        let e = rel_diff(mass, exact);
        rows.push(CheckRow {
            value: Some(e),
            bound: Some(1e-12),
            status: Status::from_pass(e <= 1e-12),
            note: format!("sum w_i = {} against 1/(2(2-alpha))", fmt17(mass)),
            ..row("quadcheck", av, "radial mass")
        });
        let disk = integrate_disk(|_| Complex64::new(1.0, 0.0), &rule, true).re;
        let e = rel_diff(disk, PI / (2.0 - av));
        rows.push(CheckRow {
            value: Some(e),
            bound: Some(1e-12),
            status: Status::from_pass(e <= 1e-12),
            note: format!("int dA_alpha = {} against pi/(2-alpha)", fmt17(disk)),
            ..row("quadcheck", av, "disk mass")
        });
        let kmax = rule.radial.exactness().min(200);
        let worst = (0..=kmax)
            .map(|k| {
                let q = integrate_disk(|z| Complex64::new(z.norm_sqr().powi(k as i32), 0.0), &rule, true).re;
                rel_diff(q, PI * beta(k as f64 + 1.0, 2.0 - av))
            })
            .fold(0.0, f64::max);
        rows.push(CheckRow {
            value: Some(worst),
            bound: Some(1e-12),
            status: Status::from_pass(worst <= 1e-12),
            note: format!("|z|^(2k), k = 0..{kmax}, against pi B(k+1, 2-alpha)"),
            ..row("quadcheck", av, "radial exactness")
        });
        let worst = (0..4i32)
            .flat_map(|p| (1..rule.m.min(8) as i32).map(move |d| (p, p + d)))
            .map(|(p, q)| integrate_disk(|z| z.powi(p) * z.conj().powi(q), &rule, true).norm())
            .fold(0.0, f64::max);
        rows.push(CheckRow {
            value: Some(worst),
            bound: Some(1e-13),
            status: Status::from_pass(worst <= 1e-13),
            note: "|int z^a zbar^b dA_alpha| for 0 < b - a < min(M, 8)".into(),
            ..row("quadcheck", av, "angular cancellation")
        });
        let mut fam = RuleFamily::new(a);
        fam.max_n_r = 4096;
        let mut r = row("quadcheck", av, "refine |z|^(1/2)");
        r.bound = Some(args.tol);
        match refine_until(|z| Complex64::new(z.norm().sqrt(), 0.0), fam, args.tol) {
            Ok(v) => {
                r.value = Some(v.gap);
                r.status = Status::Pass;
                r.note = format!("value {} at n_r = {}", fmt17(v.value.re), v.n_r);
            }
            Err(DwError::NonConvergence { iterates, .. }) => {
                r.status = Status::Fail;
                r.note = format!("no convergence after {} levels", iterates.len());
            }
            Err(e) => return Err(e),
        }
        rows.push(r);
    }
    check_outcome("dwlab.quadcheck.v1", "quadcheck", args, rows)
}
