//! Subcommand implementations.

use std::fmt;
use std::fs;
use std::path::Path;

use lk_sharp::bvp::ProblemSpec;
use lk_sharp::poly_core::{markov_constant, Side};
use lk_sharp::problems::{
    self, check_conjecture_with, conjecture_figure, gamma_curve, omega, stechkin, uniform_omega,
    uniform_stechkin, StechkinResult,
};
use lk_sharp::selftest;
use lk_sharp::spectral::decompose;
use rayon::prelude::*;

use crate::output::{real, Field, Record, Report};
use crate::{
    Command, ConjectureArgs, EigenArgs, GammaArgs, MarkovArgs, OmegaArgs, OrderArgs, OutputArgs,
    PointArgs, SelftestArgs, StechkinArgs,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
    SelftestFailed(usize),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
            CliError::SelftestFailed(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid arguments: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o failure: {m}"),
            CliError::SelftestFailed(n) => write!(f, "{n} selftest criteria failed"),
        }
    }
}

impl From<lk_sharp::Error> for CliError {
    fn from(e: lk_sharp::Error) -> Self {
        match e {
            lk_sharp::Error::InvalidArgument(m) => CliError::Usage(m),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// `a:b:n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected a:b:n, got {s:?}"));
    }
    let lo: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("bad start {:?}", parts[0]))?;
    let hi: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("bad end {:?}", parts[1]))?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| format!("bad count {:?}", parts[2]))?;
    if !(lo.is_finite() && hi.is_finite()) || hi < lo || n == 0 || (n == 1 && lo != hi) {
        return Err(format!(
            "need finite a ≤ b and n ≥ 1 (n = 1 only if a = b), got {s:?}"
        ));
    }
    Ok(Grid { lo, hi, n })
}

impl Grid {
    fn linear(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|i| {
                if i + 1 == self.n {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
                }
            })
            .collect()
    }

    fn logarithmic(&self) -> CliResult<Vec<f64>> {
        if self.lo <= 0.0 {
            return Err(usage("a logarithmic grid needs a > 0"));
        }
        if self.n == 1 {
            return Ok(vec![self.lo]);
        }
        let (a, b) = (self.lo.ln(), self.hi.ln());
        Ok((0..self.n)
            .map(|i| {
                if i == 0 {
                    self.lo
                } else if i + 1 == self.n {
                    self.hi
                } else {
                    (a + (b - a) * i as f64 / (self.n - 1) as f64).exp()
                }
            })
            .collect())
    }
}

fn check_orders(o: &OrderArgs) -> CliResult<()> {
    if o.r == 0 {
        return Err(usage("r must be at least 1"));
    }
    if o.k >= o.r {
        return Err(usage(format!("k = {} must be below r = {}", o.k, o.r)));
    }
    Ok(())
}

fn points(p: &PointArgs) -> CliResult<Vec<f64>> {
    let ts = match (p.t, p.t_grid) {
        (Some(t), _) => vec![t],
        (None, Some(g)) => g.linear(),
        (None, None) => vec![-1.0],
    };
    if let Some(t) = ts.iter().find(|t| !(-1.0..=1.0).contains(*t)) {
        return Err(usage(format!("t = {t} lies outside [-1, 1]")));
    }
    Ok(ts)
}

fn check_tol(out: &OutputArgs) -> CliResult<()> {
    if !(out.tol.is_finite() && out.tol > 0.0) {
        return Err(usage("tol must be positive"));
    }
    Ok(())
}

/// `r, k, t` followed by command fields, then `tol` and versions.
fn base(r: usize, k: Option<usize>, t: Option<f64>) -> Record {
    Record::new()
        .with("r", r)
        .with("k", k.map_or(Field::Empty, Field::from))
        .with("t", t.map_or(Field::Empty, Field::from))
}

fn finish(mut rec: Record, tol: f64) -> Record {
    rec.push("tol", tol);
    rec.push("lib_version", lk_sharp::VERSION);
    rec.push("cli_version", env!("CARGO_PKG_VERSION"));
    rec
}

fn emit(report: &Report, out: &OutputArgs) -> CliResult<()> {
    write_text(out.out.as_deref(), &report.render(out.format))
}

fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::Omega(a) => cmd_omega(&a),
        Command::Gamma(a) => cmd_gamma(&a),
        Command::Stechkin(a) => cmd_stechkin(&a),
        Command::Markov(a) => cmd_markov(&a),
        Command::Eigen(a) => cmd_eigen(&a),
        Command::Conjecture(a) => cmd_conjecture(&a),
        Command::Selftest(a) => cmd_selftest(&a),
    }
    .map(|()| 0)
}

fn deltas(a: &OmegaArgs) -> CliResult<Vec<f64>> {
    let ds = match (a.delta, a.delta_grid) {
        (Some(d), _) => vec![d],
        (None, Some(g)) => g.logarithmic()?,
        (None, None) => return Err(usage("give --delta or --delta-grid")),
    };
    if ds.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
        return Err(usage("δ must be finite and non-negative"));
    }
    Ok(ds)
}

fn cmd_omega(a: &OmegaArgs) -> CliResult<()> {
    check_orders(&a.orders)?;
    check_tol(&a.output)?;
    let (r, k, tol) = (a.orders.r, a.orders.k, a.output.tol);
    let ds = deltas(a)?;
    let mut report = Report {
        command: "omega".into(),
        ..Report::default()
    };
    if a.uniform {
        if !(r == 1 || r == 2) {
            return Err(usage("--uniform needs r ∈ {1, 2}"));
        }
        if a.points.t.is_some() || a.points.t_grid.is_some() {
            return Err(usage("--uniform maximizes over t; drop --t/--t-grid"));
        }
        if a.grid_size < 2 {
            return Err(usage("--grid-size must be at least 2"));
        }
        for &delta in &ds {
            let res = uniform_omega(r, k, delta, a.grid_size)?;
            let rec = base(r, Some(k), None)
                .with("delta", delta)
                .with("omega", res.omega)
                .with("argmax_t", res.argmax_t)
                .with("endpoint_omega", res.endpoint_omega)
                .with("argmax_at_endpoint", res.argmax_at_endpoint())
                .with("grid_size", a.grid_size);
            report.records.push(finish(rec, tol));
        }
        report
            .notes
            .push("the maximum over t is taken on a Chebyshev grid including t = ±1; ties go to the endpoint".into());
        return emit(&report, &a.output);
    }
    let ts = points(&a.points)?;
    let cases: Vec<(f64, f64)> = ts
        .iter()
        .flat_map(|&t| ds.iter().map(move |&d| (t, d)))
        .collect();
    let results = cases
        .par_iter()
        .map(|&(t, d)| omega(&ProblemSpec::new(r, k, t)?, d))
        .collect::<Result<Vec<_>, _>>()?;
    for ((t, delta), res) in cases.iter().zip(&results) {
        let mut rec = base(r, Some(k), Some(*t))
            .with("delta", *delta)
            .with("lambda_star", res.lambda_star)
            .with("omega", res.omega)
            .with("A", res.a)
            .with("B", res.b)
            .with("residual", res.residual())
            .with("residual_ok", res.residual() <= tol);
        if let Some(c) = res.certificate() {
            let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
            let worst = rel(c.norm_f, *delta)
                .max(rel(c.norm_fr, 1.0))
                .max(rel(c.value, res.omega));
            rec.push("extremal_norm_f", c.norm_f);
            rec.push("extremal_norm_fr", c.norm_fr);
            rec.push("extremal_value", c.value);
            rec.push("certificate_ok", worst <= tol);
        }
        rec.push("best_recovery", res.best_recovery());
        rec.push("best_recovery_equal", true);
        report.records.push(finish(rec, tol));
    }
    emit(&report, &a.output)
}

fn cmd_gamma(a: &GammaArgs) -> CliResult<()> {
    check_orders(&a.orders)?;
    check_tol(&a.output)?;
    let lambdas = a
        .lambdas
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| usage(format!("bad λ value {s:?}")))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    if lambdas.is_empty() {
        return Err(usage("the λ list is empty"));
    }
    let (r, k, tol) = (a.orders.r, a.orders.k, a.output.tol);
    let mut report = Report {
        command: "gamma".into(),
        ..Report::default()
    };
    for t in points(&a.points)? {
        let spec = ProblemSpec::new(r, k, t)?;
        for p in gamma_curve(&spec, &lambdas)? {
            let rec = base(r, Some(k), Some(t))
                .with("lambda", p.lambda)
                .with("A", p.a)
                .with("B", p.b)
                .with("markov_constant", spec.markov_constant());
            report.records.push(finish(rec, tol));
        }
    }
    emit(&report, &a.output)
}

fn stechkin_fields(rec: &mut Record, res: &StechkinResult) {
    match res.lambda_n() {
        None => {
            rec.push("lambda_N", Field::Empty);
            rec.push("E_N", "infinite");
            rec.push("A_at_lambda_N", Field::Empty);
        }
        Some(l) => {
            rec.push("lambda_N", l);
            rec.push("E_N", res.e_n());
            rec.push(
                "A_at_lambda_N",
                res.solution().map_or(f64::NAN, |s| s.norm_ur()),
            );
        }
    }
}

fn kernel_csv(res: &StechkinResult) -> CliResult<String> {
    let Some(sol) = res.solution() else {
        return Err(CliError::Numerical(
            "E_N is infinite; there is no kernel to export".into(),
        ));
    };
    let r = sol.spec().r;
    let n = lk_sharp::spectral::DEFAULT_PROFILE_SAMPLES;
    let mut out = String::from("x,kernel\n");
    for i in 0..n {
        let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        let side = if x == 1.0 { Side::Left } else { Side::Right };
        out.push_str(&format!("{},{}\n", real(x), real(sol.evaluate(r, x, side))));
    }
    Ok(out)
}

fn cmd_stechkin(a: &StechkinArgs) -> CliResult<()> {
    check_orders(&a.orders)?;
    check_tol(&a.output)?;
    if !a.n.is_finite() {
        return Err(usage("N must be finite"));
    }
    let (r, k, tol) = (a.orders.r, a.orders.k, a.output.tol);
    let mut report = Report {
        command: "stechkin".into(),
        ..Report::default()
    };
    let mut kernels = Vec::new();
    if a.uniform {
        if !(r == 1 || r == 2) {
            return Err(usage("--uniform needs r ∈ {1, 2}"));
        }
        if a.grid_size < 2 {
            return Err(usage("--grid-size must be at least 2"));
        }
        let res = uniform_stechkin(r, k, a.n, a.grid_size)?;
        let mut rec = base(r, Some(k), None).with("N", a.n);
        stechkin_fields(&mut rec, &res.endpoint);
        rec.push("interior_sup", res.interior_sup);
        rec.push("interior_sup_t", res.interior_sup_t);
        rec.push("markov_sup", res.markov_sup);
        rec.push("markov_sup_t", res.markov_sup_t);
        let consistent =
            res.endpoint.is_infinite() || (res.interior_sup - res.endpoint.e_n()).abs() <= 1e-6;
        rec.push("interior_sup_matches", consistent);
        report.records.push(finish(rec, tol));
        report.notes.push(
            "the uniform value is the endpoint value E_N = ‖u_{λ_N}‖₂; it is used for r ∈ {1, 2} and, \
             for r = 2, cross-checked numerically through interior_sup"
                .into(),
        );
        report.notes.push(
            "N is compared with sup_t M_t measured on the grid (markov_sup, attained at markov_sup_t)".into(),
        );
        kernels.push(res.endpoint);
    } else {
        let ts = points(&a.points)?;
        let results = ts
            .par_iter()
            .map(|&t| stechkin(&ProblemSpec::new(r, k, t)?, a.n))
            .collect::<Result<Vec<_>, _>>()?;
        for (t, res) in ts.iter().zip(results) {
            let mut rec = base(r, Some(k), Some(*t)).with("N", a.n);
            rec.push("markov_constant", markov_constant(r, k, *t)?);
            stechkin_fields(&mut rec, &res);
            report.records.push(finish(rec, tol));
            kernels.push(res);
        }
    }
    if let Some(path) = &a.export_kernel {
        if kernels.len() != 1 {
            return Err(usage("--export-kernel needs a single point t"));
        }
        write_text(Some(path), &kernel_csv(&kernels[0])?)?;
    }
    emit(&report, &a.output)
}

fn cmd_markov(a: &MarkovArgs) -> CliResult<()> {
    check_orders(&a.orders)?;
    check_tol(&a.output)?;
    let (r, k, tol) = (a.orders.r, a.orders.k, a.output.tol);
    let mut report = Report {
        command: "markov".into(),
        ..Report::default()
    };
    for t in points(&a.points)? {
        let rec = base(r, Some(k), Some(t)).with("M_t", markov_constant(r, k, t)?);
        report.records.push(finish(rec, tol));
    }
    emit(&report, &a.output)
}

fn galerkin_dim(requested: Option<usize>, modes: usize) -> CliResult<usize> {
    if modes == 0 {
        return Err(usage("--modes must be at least 1"));
    }
    let dim = requested.unwrap_or_else(|| problems::conjecture_galerkin_dim(modes));
    if dim < 2 * modes {
        return Err(usage(format!(
            "--galerkin-dim {dim} is below 2·modes = {}",
            2 * modes
        )));
    }
    Ok(dim)
}

fn cmd_eigen(a: &EigenArgs) -> CliResult<()> {
    check_tol(&a.output)?;
    if a.r == 0 {
        return Err(usage("r must be at least 1"));
    }
    let dim = galerkin_dim(a.galerkin_dim, a.modes)?;
    let dec = decompose(a.r, a.modes, dim)?;
    let mut report = Report {
        command: "eigen".into(),
        ..Report::default()
    };
    for (i, &l) in dec.eigenvalues().iter().enumerate() {
        let rec = base(a.r, None, None)
            .with("mode", i + 1)
            .with("eigenvalue", l)
            .with("galerkin_dim", dim);
        report.records.push(finish(rec, a.output.tol));
    }
    emit(&report, &a.output)
}

fn cmd_conjecture(a: &ConjectureArgs) -> CliResult<()> {
    check_orders(&a.orders)?;
    check_tol(&a.output)?;
    if a.samples < 3 {
        return Err(usage("--samples must be at least 3"));
    }
    let (r, k) = (a.orders.r, a.orders.k);
    let dim = galerkin_dim(a.galerkin_dim, a.modes)?;
    let dec = decompose(r, a.modes, dim)?;
    let reports = check_conjecture_with(&dec, k, a.samples)?;
    let mut report = Report {
        command: "conjecture".into(),
        ..Report::default()
    };
    for rep in &reports {
        let rec = base(r, Some(k), None)
            .with("mode", rep.mode)
            .with("eigenvalue", rep.eigenvalue)
            .with("endpoint", rep.endpoint)
            .with("interior_max", rep.interior_max)
            .with("interior_argmax", rep.interior_argmax)
            .with("margin", rep.margin)
            .with("grid_tolerance", rep.tolerance)
            .with("verdict", rep.verdict.as_str())
            .with("samples", rep.samples)
            .with("galerkin_dim", dim);
        report.records.push(finish(rec, a.output.tol));
    }
    if let Some(path) = &a.export_figure {
        let rows = conjecture_figure(&dec, k, a.samples)?;
        let mut text = String::from("x");
        for n in 1..=dec.n_modes() {
            text.push_str(&format!(",phi_{n}"));
        }
        text.push('\n');
        for (x, values) in rows {
            text.push_str(&real(x));
            for v in values {
                text.push(',');
                text.push_str(&real(v));
            }
            text.push('\n');
        }
        write_text(Some(path), &text)?;
    }
    emit(&report, &a.output)
}

fn cmd_selftest(a: &SelftestArgs) -> CliResult<()> {
    let outcomes = selftest::run_all();
    let mut text = String::new();
    for o in &outcomes {
        text.push_str(&o.line());
        text.push('\n');
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    text.push_str(&format!(
        "{} of {} criteria passed\n",
        outcomes.len() - failed,
        outcomes.len()
    ));
    if let Some(path) = &a.out {
        write_text(Some(path), &text)?;
    }
    print!("{text}");
    if failed > 0 {
        return Err(CliError::SelftestFailed(failed));
    }
    Ok(())
}
