//! The subcommands. Each one fills the config echo first, then computes, so
//! that a report written after an aborted computation still shows the
//! resolved knobs.

use std::path::Path;

use heatsym_core::bvp::BvpSpec;
use heatsym_core::groups::GroupFamily;
use heatsym_core::invariance::{
    check_bvp_invariance, classify, expected_groups, CheckConfig, ChecksRun, InvarianceReport, Verdict,
    DEFAULT_EPS_GRID, DEFAULT_N, DEFAULT_SEED, DEFAULT_TOL,
};
use heatsym_core::pdecheck::{evolve_exact, exact_errors};
use heatsym_core::similarity::{
    ansatz_exponents, eval_general_parametric, eval_parametric, eval_parametric_derivs, eval_solution,
    reduced_residual, shoot, ShootInfo, SimilarityProfile, EXACT_K,
};
use heatsym_core::symfun::FuncForm;
use heatsym_core::Error;
use serde::Serialize;

use crate::report::{render, to_value, Failure, RunConfig, Table};
use crate::spec::load_spec;
use crate::{CliError, Command, ExactArgs, FigureArgs, Knobs, Outcome, ShootArgs, ValidateArgs};

/// Defaults of the numeric commands.
pub const SHOOT_TOL: f64 = 1e-6;
/// Agreement of the shot `k = -3/2` profile with the exact one on `[1, 10]`.
pub const SHOOT_MATCH_TOL: f64 = 1e-3;
pub const EXACT_N: usize = 200;
pub const EXACT_TOL: f64 = 1e-6;
/// Agreement of the general parametric solution with the flux branch.
pub const GENERAL_TOL: f64 = 1e-12;
pub const FIGURE_N: usize = 1000;
pub const FIGURE_TOL: f64 = 1e-8;
pub const VALIDATE_N: usize = 800;
pub const VALIDATE_TOL: f64 = 1e-2;
/// Accepted band for observed convergence orders.
pub const ORDER_BAND: (f64, f64) = (1.8, 2.2);

enum Stop {
    Cli(CliError),
    Core(Error),
}

impl From<CliError> for Stop {
    fn from(e: CliError) -> Self {
        Stop::Cli(e)
    }
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Core(e)
    }
}

struct Step {
    result: toml::Value,
    failure: Option<Failure>,
    tables: Vec<(String, Table)>,
}

impl Step {
    fn new<T: Serialize>(result: &T, failure: Option<Failure>) -> Result<Self, Stop> {
        Ok(Step {
            result: to_value(result)?,
            failure,
            tables: Vec::new(),
        })
    }
}

fn usage(msg: impl Into<String>) -> Stop {
    Stop::Cli(CliError::Usage(msg.into()))
}

pub(crate) fn dispatch(cmd: &Command, knobs: &Knobs) -> Result<Outcome, CliError> {
    let mut cfg = RunConfig {
        subcommand: match cmd {
            Command::Classify => "classify",
            Command::Check => "check",
            Command::Reduce => "reduce",
            Command::Shoot(_) => "shoot",
            Command::Exact(_) => "exact",
            Command::Figure1(_) => "figure1",
            Command::Validate(_) => "validate",
        }
        .into(),
        spec: knobs.spec.as_ref().map(|p| p.display().to_string()),
        out: knobs.out.as_ref().map(|p| p.display().to_string()),
        ..Default::default()
    };
    let step = match cmd {
        Command::Classify => cmd_classify(knobs, &mut cfg),
        Command::Check => cmd_check(knobs, &mut cfg),
        Command::Reduce => cmd_reduce(knobs, &mut cfg),
        Command::Shoot(a) => cmd_shoot(a, knobs, &mut cfg),
        Command::Exact(a) => cmd_exact(a, knobs, &mut cfg),
        Command::Figure1(a) => cmd_figure1(a, knobs, &mut cfg),
        Command::Validate(a) => cmd_validate(a, knobs, &mut cfg),
    };
    let (result, failure, tables) = match step {
        Ok(s) => (Some(s.result), s.failure, s.tables),
        Err(Stop::Cli(e)) => return Err(e),
        Err(Stop::Core(e)) => (None, Some(Failure::error(e.to_string())), Vec::new()),
    };
    let report = render(&cfg, result.as_ref(), failure.as_ref())?;
    if let Some(dir) = &knobs.out {
        let io = |source| CliError::Io {
            path: dir.display().to_string(),
            source,
        };
        std::fs::create_dir_all(dir).map_err(io)?;
        std::fs::write(dir.join("report.toml"), &report).map_err(io)?;
        for (name, t) in &tables {
            t.write(&dir.join(name))?;
        }
    }
    Ok(Outcome {
        report,
        pass: failure.is_none(),
    })
}

fn require_spec(knobs: &Knobs, cmd: &str) -> Result<BvpSpec, Stop> {
    let path = knobs
        .spec
        .as_deref()
        .ok_or_else(|| usage(format!("{cmd} needs --spec")))?;
    Ok(load_spec(path)?)
}

fn pair(v: &[f64], flag: &str) -> Result<(f64, f64), Stop> {
    match v {
        [a, b] => Ok((*a, *b)),
        _ => Err(usage(format!("{flag} takes two values, e.g. {flag} 0.1,10"))),
    }
}

fn check_config(knobs: &Knobs, cfg: &mut RunConfig) -> Result<CheckConfig, Stop> {
    let c = CheckConfig {
        eps_grid: knobs.eps_grid.clone().unwrap_or_else(|| DEFAULT_EPS_GRID.to_vec()),
        n: knobs.n.unwrap_or(DEFAULT_N),
        seed: knobs.seed.unwrap_or(DEFAULT_SEED),
        tol: knobs.tol.unwrap_or(DEFAULT_TOL),
    };
    if c.eps_grid.is_empty() || c.n == 0 || !(c.tol > 0.0) {
        return Err(usage("need a non-empty --eps-grid, --n > 0 and --tol > 0"));
    }
    cfg.n = Some(c.n);
    cfg.seed = Some(c.seed);
    cfg.tol = Some(c.tol);
    cfg.eps_grid = Some(c.eps_grid.clone());
    Ok(c)
}

#[derive(Serialize)]
struct GroupLine {
    group: String,
    verdict: String,
    criterion: String,
    max_residual: f64,
    checks_run: ChecksRun,
}

impl From<&InvarianceReport> for GroupLine {
    fn from(r: &InvarianceReport) -> Self {
        GroupLine {
            group: r.group.clone(),
            verdict: r.verdict.to_string(),
            criterion: r.criterion.clone(),
            max_residual: r.max_residual,
            checks_run: r.checks_run,
        }
    }
}

#[derive(Serialize)]
struct ClassifyResult {
    d: String,
    q: String,
    u_inf: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    admitted: Vec<String>,
    rejected: Vec<String>,
    expected: Vec<String>,
    notes: Vec<String>,
    groups: Vec<GroupLine>,
}

fn cmd_classify(knobs: &Knobs, cfg: &mut RunConfig) -> Result<Step, Stop> {
    let spec = require_spec(knobs, "classify")?;
    let cc = check_config(knobs, cfg)?;
    let c = classify(&spec, &cc)?;
    let expected = c.row.map(|r| expected_groups(r, &spec)).unwrap_or_default();
    let mut notes = c.notes.clone();
    if c.row.is_none() {
        notes.push("no classification case matches these arbitrary elements".into());
    }
    let pass = c.row.is_none() || c.row_matches;
    let failure = (!pass).then(|| {
        Failure::check(format!(
            "admitted [{}] differs from case {} [{}]",
            c.admitted.join(", "),
            c.row.unwrap_or(0),
            expected.join(", ")
        ))
    });
    let result = ClassifyResult {
        d: spec.d.to_string(),
        q: spec.q.to_string(),
        u_inf: spec.u_inf,
        pass,
        case: c.row,
        label: c.row.map(|r| format!("case {r}: {}", c.admitted.join(", "))),
        admitted: c.admitted.clone(),
        rejected: c.rejected.clone(),
        expected,
        notes,
        groups: c.reports.iter().map(GroupLine::from).collect(),
    };
    Step::new(&result, failure)
}

fn cmd_check(knobs: &Knobs, cfg: &mut RunConfig) -> Result<Step, Stop> {
    let text = knobs.group.as_deref().ok_or_else(|| usage("check needs --group"))?;
    let g: GroupFamily = text.parse().map_err(|e: Error| usage(format!("--group {text}: {e}")))?;
    cfg.group = Some(g.name.clone());
    let spec = require_spec(knobs, "check")?;
    let cc = check_config(knobs, cfg)?;
    let rep = check_bvp_invariance(&spec, &g, &cc)?;
    let failure = match rep.verdict {
        Verdict::Invariant => None,
        Verdict::NotInvariant => Some(Failure {
            criterion: Some(rep.criterion.clone()),
            witness: rep.witness.clone(),
            ..Failure::check(format!(
                "the BVP is not invariant under {}: {} check failed",
                g.name, rep.criterion
            ))
        }),
        Verdict::Undecided => Some(Failure::check(format!(
            "undecided under {}: {}",
            g.name,
            rep.diagnostics.join("; ")
        ))),
    };
    Step::new(&rep, failure)
}

/// `(k, q0)` of a spec `d = u^k`, `q = q0`, `u_inf = 0`.
fn power_const(spec: &BvpSpec) -> Result<(f64, f64), Error> {
    let k = match spec.d {
        FuncForm::Power { c: 1.0, a } => a,
        _ => {
            return Err(Error::Unsupported(format!(
                "the reduction needs d = power(1,k), got {}",
                spec.d
            )))
        }
    };
    let q0 = match spec.q {
        FuncForm::Const(c) | FuncForm::Power { c, a: 0.0 } => c,
        _ => {
            return Err(Error::Unsupported(format!(
                "the reduction needs a constant flux, got q = {}",
                spec.q
            )))
        }
    };
    if spec.u_inf != 0.0 {
        return Err(Error::Unsupported(format!(
            "the reduction needs u_inf = 0, got {}",
            spec.u_inf
        )));
    }
    Ok((k, q0))
}

/// `+ v` or `- |v|`.
fn signed(v: f64) -> String {
    if v < 0.0 {
        format!("- {}", -v)
    } else {
        format!("+ {v}")
    }
}

#[derive(Serialize)]
struct ReduceResult {
    k: f64,
    q0: f64,
    alpha: f64,
    beta: f64,
    ansatz: String,
    equation: String,
    flux_condition: String,
    infinity_condition: String,
    group: String,
    group_verdict: String,
    max_residual: f64,
    exact_branch: bool,
    pass: bool,
}

fn cmd_reduce(knobs: &Knobs, cfg: &mut RunConfig) -> Result<Step, Stop> {
    let spec = require_spec(knobs, "reduce")?;
    let cc = check_config(knobs, cfg)?;
    let (k, q0) = power_const(&spec)?;
    let (alpha, beta) = ansatz_exponents(k)?;
    let g = GroupFamily::tkp(k, 0.0);
    let rep = check_bvp_invariance(&spec, &g, &cc)?;
    let pass = rep.is_invariant();
    let failure = (!pass).then(|| Failure {
        criterion: Some(rep.criterion.clone()),
        witness: rep.witness.clone(),
        ..Failure::check(format!("the BVP is not invariant under {}", g.name))
    });
    let result = ReduceResult {
        k,
        q0,
        alpha,
        beta,
        ansatz: format!("u = t^({alpha}) F(omega), omega = x t^({})", -beta),
        equation: format!("(F^({k}) F')' {} omega F' {} F = 0", signed(beta), signed(-alpha)),
        flux_condition: format!("F^({k}) F' = {q0} at omega = 0"),
        infinity_condition: "F -> 0 as omega -> inf".into(),
        group: g.name,
        group_verdict: rep.verdict.to_string(),
        max_residual: rep.max_residual,
        exact_branch: k == EXACT_K && q0 < 0.0,
        pass,
    };
    Step::new(&result, failure)
}

#[derive(Serialize)]
struct ShootResult {
    k: f64,
    q0: f64,
    omega_max: f64,
    #[serde(flatten)]
    info: ShootInfo,
    nodes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_max_rel: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_tol: Option<f64>,
    pass: bool,
}

fn cmd_shoot(args: &ShootArgs, knobs: &Knobs, cfg: &mut RunConfig) -> Result<Step, Stop> {
    let spec = require_spec(knobs, "shoot")?;
    let tol = knobs.tol.unwrap_or(SHOOT_TOL);
    cfg.tol = Some(tol);
    cfg.omega_max = Some(args.omega_max);
    let (k, q0) = power_const(&spec)?;
    let profile = shoot(k, q0, args.omega_max, tol)?;
    let table = profile.table().expect("shooting returns a table");
    let info = profile.info.expect("shooting records diagnostics");

    // the k = -3/2 profile is checked against the exact one
    let mut exact_max_rel = None;
    if k == EXACT_K {
        let exact = SimilarityProfile::exact(q0)?;
        let mut worst = 0.0f64;
        for i in 0..=200 {
            let w = 10f64.powf(i as f64 / 200.0);
            let (a, b) = (profile.eval(w)?, exact.eval(w)?);
            worst = worst.max((a / b - 1.0).abs());
        }
        exact_max_rel = Some(worst);
    }
    let pass = exact_max_rel.is_none_or(|e| e <= SHOOT_MATCH_TOL);
    let failure = (!pass).then(|| {
        Failure::check(format!(
            "shot profile deviates from the exact one by {:e} on [1, 10]",
            exact_max_rel.unwrap_or(f64::NAN)
        ))
    });
    let mut csv = Table::new(&["omega", "F", "P"]);
    csv.meta = vec![format!("k = {k}"), format!("q0 = {q0}"), format!("tol = {tol}")];
    csv.rows = (0..table.omega.len())
        .map(|i| vec![table.omega[i], table.f[i], table.p[i]])
        .collect();
    let result = ShootResult {
        k,
        q0,
        omega_max: args.omega_max,
        info,
        nodes: table.omega.len(),
        exact_max_rel,
        exact_tol: exact_max_rel.map(|_| SHOOT_MATCH_TOL),
        pass,
    };
    let mut step = Step::new(&result, failure)?;
    step.tables.push(("profile.csv".into(), csv));
    Ok(step)
}

#[derive(Serialize)]
struct ExactResult {
    q0: f64,
    k: f64,
    points: usize,
    max_residual: f64,
    tol: f64,
    general_max_rel: f64,
    general_tol: f64,
    /// `P` at `omega = min` of the table, tending to `q0` at the surface.
    p_first: f64,
    pass: bool,
}

fn cmd_exact(args: &ExactArgs, knobs: &Knobs, cfg: &mut RunConfig) -> Result<Step, Stop> {
    let from_spec = match &knobs.spec {
        Some(p) => {
            let spec = load_spec(p)?;
            let (k, q0) = power_const(&spec)?;
            if k != EXACT_K {
                return Err(Error::Unsupported(format!("the exact branch needs k = -3/2, got k = {k}")).into());
            }
            Some(q0)
        }
        None => None,
    };
    let q0 = args.q0.or(from_spec).unwrap_or(-1.0);
    let n = knobs.n.unwrap_or(EXACT_N);
    let tol = knobs.tol.unwrap_or(EXACT_TOL);
    let (ta, tb) = pair(&args.tau_range, "--tau-range")?;
    if n < 2 || !(ta > 0.0 && tb > ta) {
        return Err(usage("exact needs --n >= 2 and 0 < tau_min < tau_max"));
    }
    cfg.q0 = Some(q0);
    cfg.n = Some(n);
    cfg.tol = Some(tol);
    cfg.tau_range = Some((ta, tb));

    let mut csv = Table::new(&["tau", "omega", "F", "P"]);
    csv.meta = vec![format!("k = {EXACT_K}"), format!("q0 = {q0}")];
    let (mut worst, mut general) = (0.0f64, 0.0f64);
    for i in 0..n {
        let tau = ta * (tb / ta).powf(i as f64 / (n - 1) as f64);
        let (w, f, fw, fww) = eval_parametric_derivs(tau.ln(), q0)?;
        worst = worst.max(reduced_residual(EXACT_K, w, f, fw, fww)?.abs());
        let (wp, fp) = eval_parametric(tau, q0)?;
        let (wg, fg) = eval_general_parametric(tau, 2.0 / q0, 0.0)?;
        general = general.max((wg / wp - 1.0).abs()).max((fg / fp - 1.0).abs());
        csv.rows.push(vec![tau, w, f, f.powf(EXACT_K) * fw]);
    }
    // increasing omega
    csv.rows.reverse();
    let pass = worst <= tol && general <= GENERAL_TOL;
    let failure = (!pass).then(|| {
        Failure::check(format!(
            "reduced residual {worst:e} (tol {tol:e}), general-solution mismatch {general:e} (tol {GENERAL_TOL:e})"
        ))
    });
    let result = ExactResult {
        q0,
        k: EXACT_K,
        points: n,
        max_residual: worst,
        tol,
        general_max_rel: general,
        general_tol: GENERAL_TOL,
        p_first: csv.rows[0][3],
        pass,
    };
    let mut step = Step::new(&result, failure)?;
    step.tables.push(("exact.csv".into(), csv));
    Ok(step)
}

#[derive(Serialize)]
struct Curve {
    t: f64,
    file: String,
    u_min: f64,
    u_max: f64,
    positive: bool,
    decreasing: bool,
}

#[derive(Serialize)]
struct FigureResult {
    q0: f64,
    curves: Vec<Curve>,
    /// Points where `u(t, x) = (t / t_ref)^2 u(t_ref, x t / t_ref)` was
    /// compared on the tabulated grids.
    ansatz_points: usize,
    ansatz_max_rel: f64,
    tol: f64,
    pass: bool,
}

pub fn figure_file(t: f64) -> String {
    format!("figure1_t{t}.csv")
}

fn cmd_figure1(args: &FigureArgs, knobs: &Knobs, cfg: &mut RunConfig) -> Result<Step, Stop> {
    let n = knobs.n.unwrap_or(FIGURE_N);
    let tol = knobs.tol.unwrap_or(FIGURE_TOL);
    let (a, b) = pair(&args.x_range, "--x-range")?;
    cfg.q0 = Some(args.q0);
    cfg.n = Some(n);
    cfg.tol = Some(tol);
    cfg.times = Some(args.times.clone());
    cfg.x_range = Some((a, b));
    if n < 2 || !(a > 0.0 && b > a) || args.times.is_empty() || args.times.iter().any(|t| !(*t > 0.0)) {
        return Err(usage("figure1 needs --n >= 2, 0 < x_min < x_max and positive times"));
    }
    let h = (b - a) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| a + i as f64 * h).collect();
    let mut curves = Vec::new();
    let mut step_tables = Vec::new();
    let mut values: Vec<Vec<f64>> = Vec::new();
    for &t in &args.times {
        let us = xs
            .iter()
            .map(|&x| eval_solution(t, x, args.q0))
            .collect::<Result<Vec<f64>, Error>>()?;
        let mut csv = Table::new(&["x", "u"]);
        csv.meta = vec![format!("q0 = {}", args.q0), format!("t = {t}")];
        csv.rows = xs.iter().zip(&us).map(|(x, u)| vec![*x, *u]).collect();
        curves.push(Curve {
            t,
            file: figure_file(t),
            u_min: us.iter().copied().fold(f64::INFINITY, f64::min),
            u_max: us.iter().copied().fold(0.0, f64::max),
            positive: us.iter().all(|u| *u > 0.0),
            decreasing: us.windows(2).all(|w| w[1] < w[0]),
        });
        step_tables.push((figure_file(t), csv));
        values.push(us);
    }

    // the ansatz identity, on grid points that map onto the reference grid
    let t_ref = args.times[0];
    let (mut points, mut worst) = (0usize, 0.0f64);
    for (j, &t) in args.times.iter().enumerate().skip(1) {
        let s = t / t_ref;
        for (i, &x) in xs.iter().enumerate() {
            let target = x * s;
            let pos = (target - a) / h;
            let m = pos.round();
            if m < 0.0 || m > (n - 1) as f64 || (pos - m).abs() > 1e-9 * pos.max(1.0) {
                continue;
            }
            let want = s * s * values[0][m as usize];
            worst = worst.max((values[j][i] / want - 1.0).abs());
            points += 1;
        }
    }
    let shapes_ok = curves.iter().all(|c| c.positive && c.decreasing);
    let pass = shapes_ok && worst <= tol && (points > 0 || args.times.len() == 1);
    let failure = (!pass).then(|| {
        Failure::check(if !shapes_ok {
            "a profile is not strictly positive and decreasing".to_string()
        } else if points == 0 {
            "no grid points line up for the ansatz check; choose x_range and n so that the grids align".to_string()
        } else {
            format!("ansatz identity violated by {worst:e} (tol {tol:e})")
        })
    });
    let result = FigureResult {
        q0: args.q0,
        curves,
        ansatz_points: points,
        ansatz_max_rel: worst,
        tol,
        pass,
    };
    let mut step = Step::new(&result, failure)?;
    step.tables = step_tables;
    Ok(step)
}

#[derive(Serialize)]
struct Level {
    nx: usize,
    l2_rel: f64,
    l2_rel_region: f64,
}

#[derive(Serialize)]
struct ValidateResult {
    q0: f64,
    nx: usize,
    l2_rel: f64,
    linf_rel: f64,
    tol: f64,
    steps: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    levels: Vec<Level>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    orders: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    orders_region: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order_band: Option<(f64, f64)>,
    pass: bool,
}

fn cmd_validate(args: &ValidateArgs, knobs: &Knobs, cfg: &mut RunConfig) -> Result<Step, Stop> {
    let nx = knobs.n.unwrap_or(VALIDATE_N);
    let tol = knobs.tol.unwrap_or(VALIDATE_TOL);
    let domain = pair(&args.x_range, "--x-range")?;
    let from = args.order_from.unwrap_or(domain.0);
    cfg.q0 = Some(args.q0);
    cfg.n = Some(nx);
    cfg.tol = Some(tol);
    cfg.t0 = Some(args.t0);
    cfg.t1 = Some(args.t1);
    cfg.x_range = Some(domain);
    cfg.convergence = Some(args.convergence);
    if args.convergence {
        cfg.order_from = Some(from);
        if !nx.is_multiple_of(4) || nx < 8 {
            return Err(usage("--convergence needs --n divisible by 4 and at least 8"));
        }
        if !(from >= domain.0 && from < domain.1) {
            return Err(usage("--order-from must lie inside the x range"));
        }
    }
    let grids: Vec<usize> = if args.convergence {
        vec![nx / 4, nx / 2, nx]
    } else {
        vec![nx]
    };
    let mut levels = Vec::new();
    let mut finest = None;
    for &m in &grids {
        let sol = evolve_exact(args.q0, args.t0, args.t1, domain, m)?;
        let (l2, linf) = exact_errors(&sol.x, sol.last(), args.t1, args.q0)?;
        let i0 = sol.x.iter().position(|x| *x >= from).unwrap_or(0);
        let (l2r, _) = exact_errors(&sol.x[i0..], &sol.last()[i0..], args.t1, args.q0)?;
        levels.push(Level {
            nx: m,
            l2_rel: l2,
            l2_rel_region: l2r,
        });
        finest = Some((l2, linf, sol.steps));
    }
    let (l2, linf, steps) = finest.expect("at least one grid");
    let order =
        |f: fn(&Level) -> f64| -> Vec<f64> { levels.windows(2).map(|w| (f(&w[0]) / f(&w[1])).log2()).collect() };
    let orders = order(|l| l.l2_rel);
    let orders_region = order(|l| l.l2_rel_region);
    let in_band = |p: &f64| *p >= ORDER_BAND.0 && *p <= ORDER_BAND.1;
    let order_ok = orders_region.iter().all(in_band);
    let pass = l2 <= tol && order_ok;
    let failure = (!pass).then(|| {
        if l2 > tol {
            Failure::check(format!("relative L2 error {l2:e} exceeds {tol:e}"))
        } else {
            Failure::check(format!(
                "observed orders {orders_region:?} on x >= {from} outside [{}, {}]",
                ORDER_BAND.0, ORDER_BAND.1
            ))
        }
    });
    let result = ValidateResult {
        q0: args.q0,
        nx,
        l2_rel: l2,
        linf_rel: linf,
        tol,
        steps,
        order_band: args.convergence.then_some(ORDER_BAND),
        levels: if args.convergence { levels } else { Vec::new() },
        orders,
        orders_region,
        pass,
    };
    Step::new(&result, failure)
}

/// Read a figure CSV written by `figure1`: `(x, u)` rows.
pub fn read_xy(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let bad = |msg: String| CliError::Io {
        path: path.display().to_string(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, msg),
    };
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    r.deserialize::<(f64, f64)>()
        .map(|row| row.map_err(|e| bad(e.to_string())))
        .collect()
}
