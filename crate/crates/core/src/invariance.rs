//! Sampled invariance checks of a BVP under a one-parameter group and the
//! classification harness built on them.
//!
//! A BVP is invariant when the group maps (1) the equation manifold, (2) the
//! flux manifold `{x = 0, d(u) u_x = q(t)}` together with the boundary curve
//! `x = 0`, and (3) the condition at infinity into themselves. The first two
//! are checked on sampled jets, the third symbolically.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bvp::{BvpSpec, EquivalenceTransform};
use crate::error::{Error, Result};
use crate::groups::{GroupFamily, GroupKind, Jet};
use crate::symfun::{ExtendedReal, FuncForm};

pub const DEFAULT_EPS_GRID: [f64; 6] = [-1.0, -0.5, -0.1, 0.1, 0.5, 1.0];
pub const DEFAULT_N: usize = 200;
pub const DEFAULT_SEED: u64 = 20240601;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Sampling knobs shared by the sampled checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckConfig {
    pub eps_grid: Vec<f64>,
    pub n: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            eps_grid: DEFAULT_EPS_GRID.to_vec(),
            n: DEFAULT_N,
            seed: DEFAULT_SEED,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Invariant,
    NotInvariant,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Invariant => "invariant",
            Verdict::NotInvariant => "not_invariant",
            Verdict::Undecided => "undecided",
        })
    }
}

/// Where a check failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub criterion: String,
    pub eps: f64,
    pub residual: f64,
    pub jet: Option<Jet>,
    /// Symbolic limits `(x*, u*)` for the condition at infinity.
    pub x_limit: Option<String>,
    pub u_limit: Option<String>,
    pub note: String,
}

/// Number of evaluated samples per criterion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ChecksRun {
    pub equation: usize,
    pub flux: usize,
    pub infinity: usize,
    pub boundary_curve: usize,
    /// Samples outside the domain of the transformed forms.
    pub skipped: usize,
}

impl ChecksRun {
    fn merge(&mut self, o: &ChecksRun) {
        self.equation += o.equation;
        self.flux += o.flux;
        self.infinity += o.infinity;
        self.boundary_curve += o.boundary_curve;
        self.skipped += o.skipped;
    }

    fn total(&self) -> usize {
        self.equation + self.flux + self.infinity + self.boundary_curve
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub group: String,
    pub criterion: String,
    pub verdict: Verdict,
    pub max_residual: f64,
    pub tol: f64,
    pub witness: Option<Witness>,
    pub checks_run: ChecksRun,
    pub diagnostics: Vec<String>,
    pub parts: Vec<InvarianceReport>,
}

impl InvarianceReport {
    pub fn is_invariant(&self) -> bool {
        self.verdict == Verdict::Invariant
    }
}

/// Running maximum with its witness.
struct Tracker {
    criterion: &'static str,
    tol: f64,
    max: f64,
    witness: Option<Witness>,
    runs: ChecksRun,
    diagnostics: Vec<String>,
    singular: bool,
}

impl Tracker {
    fn new(criterion: &'static str, tol: f64) -> Self {
        Self {
            criterion,
            tol,
            max: 0.0,
            witness: None,
            runs: ChecksRun::default(),
            diagnostics: Vec::new(),
            singular: false,
        }
    }

    fn record(&mut self, residual: f64, make: impl FnOnce() -> Witness) {
        let r = if residual.is_nan() { f64::INFINITY } else { residual };
        if r > self.max || (self.witness.is_none() && r > self.tol) {
            self.max = r.max(self.max);
            if r > self.tol {
                self.witness = Some(make());
            }
        }
    }

    /// Domain errors skip the sample; singular transforms make the check undecided.
    fn skip(&mut self, e: &Error) {
        match e {
            Error::Singular(_) => {
                if !self.singular {
                    self.diagnostics.push(format!("{}: {e}", self.criterion));
                }
                self.singular = true;
            }
            _ => self.runs.skipped += 1,
        }
    }

    fn finish(self, group: &GroupFamily) -> InvarianceReport {
        let evaluated = self.runs.total();
        let verdict = if self.max > self.tol {
            Verdict::NotInvariant
        } else if self.singular || evaluated == 0 {
            Verdict::Undecided
        } else {
            Verdict::Invariant
        };
        let mut diagnostics = self.diagnostics;
        if evaluated == 0 {
            diagnostics.push(format!("{}: no sample could be evaluated", self.criterion));
        }
        if self.runs.skipped > 0 {
            diagnostics.push(format!(
                "{}: {} sample(s) outside the domain were skipped",
                self.criterion, self.runs.skipped
            ));
        }
        InvarianceReport {
            group: group.name.clone(),
            criterion: self.criterion.to_string(),
            verdict,
            max_residual: self.max,
            tol: self.tol,
            witness: self.witness,
            checks_run: self.runs,
            diagnostics,
            parts: Vec::new(),
        }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `u_t - d'(u) u_x^2 - d(u) u_xx`, normalized by `max(1, sum of |terms|)`.
pub fn equation_residual(d: &FuncForm, jet: &Jet) -> Result<f64> {
    let dv = d.eval(jet.u)?;
    let dp = d.eval_derivative(jet.u, 1)?;
    let a = dp * jet.ux * jet.ux;
    let b = dv * jet.uxx;
    let scale = 1f64.max(jet.ut.abs() + a.abs() + b.abs());
    Ok((jet.ut - a - b).abs() / scale)
}

/// Jets on the equation manifold with `t in [0.1, 10]`, `x in [0, 10]`,
/// `u in [0.2, 10]`, `u_x, u_xx in [-5, 5]`.
pub fn sample_manifold_jets(spec: &BvpSpec, n: usize, seed: u64) -> Result<Vec<Jet>> {
    if n == 0 {
        return Err(Error::InvalidSpec("need at least one jet".into()));
    }
    let mut r = rng(seed, 1);
    (0..n)
        .map(|_| {
            let t = r.gen_range(0.1..=10.0);
            let x = r.gen_range(0.0..=10.0);
            let u = r.gen_range(0.2..=10.0);
            let ux = r.gen_range(-5.0..=5.0);
            let uxx = r.gen_range(-5.0..=5.0);
            on_manifold(&spec.d, t, x, u, ux, uxx)
        })
        .collect()
}

fn on_manifold(d: &FuncForm, t: f64, x: f64, u: f64, ux: f64, uxx: f64) -> Result<Jet> {
    let ut = d.eval_derivative(u, 1)? * ux * ux + d.eval(u)? * uxx;
    Ok(Jet { t, x, u, ut, ux, uxx })
}

pub fn check_equation_invariance(spec: &BvpSpec, g: &GroupFamily, cfg: &CheckConfig) -> Result<InvarianceReport> {
    let jets = sample_manifold_jets(spec, cfg.n, cfg.seed)?;
    let mut tr = Tracker::new("equation", cfg.tol);
    for jet in &jets {
        for &eps in &cfg.eps_grid {
            let res = g
                .prolong2(eps, jet)
                .and_then(|s| equation_residual(&spec.d, &s).map(|r| (r, s)));
            match res {
                Ok((r, _)) => {
                    tr.runs.equation += 1;
                    tr.record(r, || Witness {
                        criterion: "equation".into(),
                        eps,
                        residual: r,
                        jet: Some(*jet),
                        x_limit: None,
                        u_limit: None,
                        note: "transformed jet leaves the equation manifold".into(),
                    });
                }
                Err(e) => tr.skip(&e),
            }
        }
    }
    Ok(tr.finish(g))
}

/// Boundary curve `x = 0` and flux manifold `d(u) u_x = q(t)` at `x = 0`.
pub fn check_flux_invariance(spec: &BvpSpec, g: &GroupFamily, cfg: &CheckConfig) -> Result<InvarianceReport> {
    let mut tr = Tracker::new("flux", cfg.tol);
    let mut r = rng(cfg.seed, 2);

    // boundary curve
    for _ in 0..cfg.n {
        let t = r.gen_range(0.1..=10.0);
        let u = r.gen_range(0.2..=10.0);
        for &eps in &cfg.eps_grid {
            match g.apply(eps, (t, 0.0, u)) {
                Ok((_, xs, _)) => {
                    tr.runs.boundary_curve += 1;
                    let res = xs.abs();
                    tr.record(res, || Witness {
                        criterion: "boundary_curve".into(),
                        eps,
                        residual: res,
                        jet: None,
                        x_limit: None,
                        u_limit: None,
                        note: format!("(t, x, u) = ({t}, 0, {u}) is mapped to x* = {xs}"),
                    });
                }
                Err(e) => tr.skip(&e),
            }
        }
    }

    // flux manifold
    const MAX_RESAMPLE: usize = 100;
    for _ in 0..cfg.n {
        let mut jet = None;
        for _ in 0..MAX_RESAMPLE {
            let t = r.gen_range(0.1..=10.0);
            let u = r.gen_range(0.2..=10.0);
            let uxx = r.gen_range(-5.0..=5.0);
            let sample = spec.q.eval(t).and_then(|qv| {
                let ux = qv / spec.d.eval(u)?;
                on_manifold(&spec.d, t, 0.0, u, ux, uxx)
            });
            if let Ok(j) = sample {
                jet = Some(j);
                break;
            }
        }
        let Some(jet) = jet else {
            tr.diagnostics
                .push("flux: q could not be sampled on t in [0.1, 10]".into());
            break;
        };
        for &eps in &cfg.eps_grid {
            let res = g.prolong2(eps, &jet).and_then(|s| {
                let lhs = spec.d.eval(s.u)? * s.ux;
                let rhs = spec.q.eval(s.t)?;
                Ok((lhs - rhs).abs() / 1f64.max(lhs.abs() + rhs.abs()))
            });
            match res {
                Ok(res) => {
                    tr.runs.flux += 1;
                    tr.record(res, || Witness {
                        criterion: "flux".into(),
                        eps,
                        residual: res,
                        jet: Some(jet),
                        x_limit: None,
                        u_limit: None,
                        note: "d(u*) u*_x* != q(t*) on the transformed flux manifold".into(),
                    });
                }
                Err(e) => tr.skip(&e),
            }
        }
    }
    let mut rep = tr.finish(g);
    // name the failing sub-check
    if let Some(w) = &rep.witness {
        rep.criterion = if w.criterion == "boundary_curve" {
            "flux (boundary curve)".into()
        } else {
            "flux".into()
        };
    }
    Ok(rep)
}

/// `x* -> +inf` and `U(+inf, u_inf) = u_inf` for every `eps` of the grid.
pub fn check_infinity_invariance(spec: &BvpSpec, g: &GroupFamily, eps_grid: &[f64]) -> InvarianceReport {
    let mut tr = Tracker::new("infinity", 1e-12 * spec.u_inf.abs().max(1.0));
    for &eps in eps_grid {
        let (_, xm, um) = g.maps(eps);
        let xl = match xm.limit_at_pos_infinity() {
            Ok(l) => l,
            Err(e) => {
                tr.diagnostics.push(format!("infinity: {e}"));
                continue;
            }
        };
        let ul = um.limit_at_pos_infinity(spec.u_inf);
        tr.runs.infinity += 1;
        let (res, note) = match (xl, ul) {
            (ExtendedReal::PosInf, ExtendedReal::Finite(v)) => (
                (v - spec.u_inf).abs(),
                format!("u* -> {v} instead of u_inf = {}", spec.u_inf),
            ),
            (ExtendedReal::PosInf, _) => (f64::INFINITY, format!("u* -> {ul}")),
            _ => (f64::INFINITY, format!("x* -> {xl} as x -> +inf")),
        };
        tr.record(res, || Witness {
            criterion: "infinity".into(),
            eps,
            residual: res,
            jet: None,
            x_limit: Some(xl.to_string()),
            u_limit: Some(ul.to_string()),
            note,
        });
    }
    tr.finish(g)
}

/// Conjunction of the flux, infinity and equation checks.
pub fn check_bvp_invariance(spec: &BvpSpec, g: &GroupFamily, cfg: &CheckConfig) -> Result<InvarianceReport> {
    let parts = vec![
        check_flux_invariance(spec, g, cfg)?,
        check_infinity_invariance(spec, g, &cfg.eps_grid),
        check_equation_invariance(spec, g, cfg)?,
    ];
    let failed = parts.iter().find(|p| p.verdict == Verdict::NotInvariant);
    let verdict = if failed.is_some() {
        Verdict::NotInvariant
    } else if parts.iter().any(|p| p.verdict == Verdict::Undecided) {
        Verdict::Undecided
    } else {
        Verdict::Invariant
    };
    let mut runs = ChecksRun::default();
    for p in &parts {
        runs.merge(&p.checks_run);
    }
    Ok(InvarianceReport {
        group: g.name.clone(),
        criterion: failed.map_or("bvp".into(), |p| p.criterion.clone()),
        verdict,
        max_residual: parts.iter().map(|p| p.max_residual).fold(0.0, f64::max),
        tol: cfg.tol,
        witness: failed.and_then(|p| p.witness.clone()),
        checks_run: runs,
        diagnostics: parts.iter().flat_map(|p| p.diagnostics.clone()).collect(),
        parts,
    })
}

/// Groups tried by [`classify`], with parameters matched to the spec.
pub fn catalogue(spec: &BvpSpec) -> Vec<GroupFamily> {
    let mut out = vec![
        GroupFamily::tt(),
        GroupFamily::td(),
        GroupFamily::tx(),
        GroupFamily::te(),
        GroupFamily::tc(),
    ];
    if let Some(k) = spec.power_k() {
        out.push(GroupFamily::tk(k));
        let minus_two = k == -2.0;
        match &spec.q {
            FuncForm::Const(_) if !minus_two => out.push(GroupFamily::tkp(k, 0.0)),
            FuncForm::Power { a, .. } if !minus_two && *a != -0.5 => out.push(GroupFamily::tkp(k, *a)),
            FuncForm::Exp { lambda, .. } if !minus_two && *lambda != 0.0 => out.push(GroupFamily::tke_rate(k, *lambda)),
            _ => {}
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub admitted: Vec<String>,
    pub rejected: Vec<String>,
    pub row: Option<u8>,
    /// Row recognized and admitted set equal to the row's group list.
    pub row_matches: bool,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub reports: Vec<InvarianceReport>,
}

/// Run the full check over [`catalogue`].
pub fn classify(spec: &BvpSpec, cfg: &CheckConfig) -> Result<Classification> {
    let mut admitted = Vec::new();
    let mut rejected = Vec::new();
    let mut reports = Vec::new();
    let mut notes = Vec::new();
    for g in catalogue(spec) {
        let rep = check_bvp_invariance(spec, &g, cfg)?;
        match rep.verdict {
            Verdict::Invariant => admitted.push(g.name.clone()),
            Verdict::NotInvariant => {
                rejected.push(g.name.clone());
                if g.name == "Tc" && spec.power_k() == Some(-4.0 / 3.0) {
                    let failed: Vec<&str> = rep
                        .parts
                        .iter()
                        .filter(|p| p.verdict == Verdict::NotInvariant)
                        .map(|p| p.criterion.as_str())
                        .collect();
                    notes.push(format!(
                        "Tc is admitted by the equation but rejected by the BVP (failed: {})",
                        failed.join(", ")
                    ));
                }
            }
            Verdict::Undecided => notes.push(format!("{}: undecided ({})", g.name, rep.diagnostics.join("; "))),
        }
        reports.push(rep);
    }
    let row = table2_row(spec);
    let row_matches = row.is_some_and(|r| {
        let expect: BTreeSet<String> = expected_groups(r, spec).into_iter().collect();
        let got: BTreeSet<String> = admitted.iter().cloned().collect();
        expect == got
    });
    if row.is_some() && !row_matches {
        notes.push("admitted set differs from the recognized classification row".into());
    }
    Ok(Classification {
        admitted,
        rejected,
        row,
        row_matches,
        notes,
        reports,
    })
}

/// Classification row whose arbitrary elements match the spec.
pub fn table2_row(spec: &BvpSpec) -> Option<u8> {
    let k = spec.power_k();
    let zero_inf = spec.u_inf == 0.0;
    let pw = |want: fn(f64) -> bool| k.is_some_and(want) && zero_inf;
    let not_m2 = |k: f64| k != -2.0;
    let m2 = |k: f64| k == -2.0;
    match &spec.q {
        q if q.is_zero() => Some(if pw(|_| true) { 7 } else { 3 }),
        FuncForm::Const(_) | FuncForm::Power { a: 0.0, .. } => {
            if pw(not_m2) {
                Some(6)
            } else if pw(m2) {
                None
            } else {
                Some(2)
            }
        }
        FuncForm::Power { a, .. } if *a == -0.5 => Some(if pw(m2) { 9 } else { 1 }),
        FuncForm::Power { .. } | FuncForm::Exp { .. } => {
            if pw(m2) {
                Some(8)
            } else if pw(not_m2) {
                Some(if matches!(spec.q, FuncForm::Exp { .. }) { 5 } else { 4 })
            } else {
                None
            }
        }
        _ if pw(m2) => Some(8),
        _ => None,
    }
}

/// Group list of a classification row, with the spec's parameters.
pub fn expected_groups(row: u8, spec: &BvpSpec) -> Vec<String> {
    let k = spec.power_k().unwrap_or(f64::NAN);
    let p = spec.q.power_exponent().unwrap_or(0.0);
    let names: Vec<GroupFamily> = match row {
        1 => vec![GroupFamily::td()],
        2 => vec![GroupFamily::tt()],
        3 => vec![GroupFamily::tt(), GroupFamily::td()],
        4 => vec![GroupFamily::tkp(k, p)],
        5 => vec![GroupFamily::tke(k)],
        6 => vec![GroupFamily::tt(), GroupFamily::tkp(k, 0.0)],
        7 => vec![GroupFamily::tt(), GroupFamily::td(), GroupFamily::tk(k)],
        8 => vec![GroupFamily::tk(-2.0)],
        9 => vec![GroupFamily::td(), GroupFamily::tk(-2.0)],
        _ => vec![],
    };
    names.into_iter().map(|g| g.name).collect()
}

/// Seeds standing in for "arbitrary" arbitrary elements.
pub const ARBITRARY_SEEDS: [u64; 3] = [11, 42, 2024];

/// Representative specs for every classification row, `(row, spec)`.
///
/// Arbitrary `d` or `q` is realized by [`FuncForm::random_smooth`] over
/// [`ARBITRARY_SEEDS`]; arbitrary `u_inf` cycles through a few values.
pub fn table2_representatives() -> Vec<(u8, BvpSpec)> {
    let q0 = -1.0;
    let pw = |k: f64| FuncForm::power(1.0, k);
    let any_inf = [0.0, 2.0, -0.5];
    let mut out = Vec::new();
    let mut push = |row: u8, d: FuncForm, q: FuncForm, u_inf: f64| {
        out.push((row, BvpSpec::new(d, q, u_inf).expect("representative specs are valid")));
    };
    for (i, &seed) in ARBITRARY_SEEDS.iter().enumerate() {
        let d = FuncForm::random_smooth(seed);
        push(1, d.clone(), FuncForm::power(q0, -0.5), any_inf[i]);
        push(2, d.clone(), FuncForm::Const(q0), any_inf[i]);
        push(3, d, FuncForm::Zero, any_inf[i]);
    }
    for k in [1.0, -0.5, -1.5] {
        for p in [1.0, -1.0 / 3.0] {
            push(4, pw(k), FuncForm::power(q0, p), 0.0);
        }
        push(5, pw(k), FuncForm::exp(q0, 1.0), 0.0);
        push(6, pw(k), FuncForm::Const(q0), 0.0);
    }
    for k in [1.0, -0.5, -4.0 / 3.0, -1.5] {
        push(7, pw(k), FuncForm::Zero, 0.0);
    }
    for seed in ARBITRARY_SEEDS {
        push(8, pw(-2.0), FuncForm::random_smooth(seed), 0.0);
    }
    push(9, pw(-2.0), FuncForm::power(q0, -0.5), 0.0);
    out
}

/// The group `e o g o e^-1` acting on the transformed variables.
pub fn conjugate(g: &GroupFamily, e: &EquivalenceTransform) -> Result<GroupFamily> {
    let kind = match g.kind {
        GroupKind::Flow { l1, l2, l3, l4, k, u_c } => GroupKind::Flow {
            l1: e.e1 * l1 - 2.0 * l3 * e.t0,
            l2: e.e2 * l2,
            l3,
            l4,
            k,
            u_c: e.e3 * u_c + e.u0,
        },
        GroupKind::ExpShift { rate } => GroupKind::ExpShift { rate: e.e3 * rate },
        GroupKind::Conformal { l1, l3, l4, curv, u_c } => GroupKind::Conformal {
            l1: e.e1 * l1 - 2.0 * l3 * e.t0,
            l3,
            l4,
            curv: curv / e.e2,
            u_c: e.e3 * u_c + e.u0,
        },
    };
    Ok(GroupFamily::from_kind(kind))
}
