//! Parameter sweeps and CSV generation behind the command-line tool.
//!
//! Every command takes a resolved [`SweepConfig`]. Grid points are evaluated
//! on a bounded rayon pool and written back in grid order, so identical
//! configurations produce byte-identical output.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Deserialize;

use crate::ed::{dense_spectrum, ground_membership_in, DEFAULT_DEGENERACY_TOL};
use crate::entanglement::{
    concurrence_closed, partial_trace_pair, scaled_concurrence_curve, scaling_limit,
    wootters_concurrence, PairDensityMatrix,
};
use crate::error::{Error, Result};
use crate::linalg::{sigma_x, sigma_y, sigma_z};
use crate::model::{mps_matrices, ModelParams, Sign};
use crate::mps::{build_state, explicit_ground_state};
use crate::observables::{
    correlations_at, inverted_limit_expression, magnetization_x, thermodynamic_magnetization,
    u_param, zero_crossing_report,
};
use crate::parent::{assemble_chain_h, HamiltonianForm, MAX_DENSE_SITES};

/// Ring sizes of the scaled-concurrence figure.
pub const FIGURE1_SIZES: [usize; 9] = [6, 7, 8, 9, 10, 20, 30, 40, 50];

/// Largest ring for which `--check` runs brute-force comparisons.
pub const CHECK_MAX_SITES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    Sweep,
    Figure1,
    Figure2,
    EdCompare,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// `None` means both signs where the command iterates over classes.
    pub epsilon: Option<Sign>,
    pub eta: Option<Sign>,
    pub j: f64,
    pub n_list: Vec<usize>,
    pub g_min: f64,
    pub g_max: f64,
    pub g_steps: usize,
    pub output: Option<PathBuf>,
    pub tolerance: f64,
    pub check: bool,
    pub workers: usize,
}

impl SweepConfig {
    pub fn defaults_for(cmd: Command) -> Self {
        let base = SweepConfig {
            epsilon: None,
            eta: None,
            j: 1.0,
            n_list: vec![8],
            g_min: 0.0,
            g_max: 2.0,
            g_steps: 20,
            output: None,
            tolerance: 1e-9,
            check: false,
            workers: 4,
        };
        match cmd {
            Command::Verify => SweepConfig {
                n_list: vec![4, 6, 8],
                g_min: -2.0,
                g_max: 2.0,
                g_steps: 8,
                ..base
            },
            Command::Sweep => base,
            Command::Figure1 => SweepConfig {
                n_list: FIGURE1_SIZES.to_vec(),
                g_min: 0.0,
                g_max: 3.0,
                g_steps: 60,
                ..base
            },
            Command::Figure2 => SweepConfig {
                n_list: vec![4, 8, 16, 32, 64],
                g_min: -3.0,
                g_max: 3.0,
                g_steps: 120,
                ..base
            },
            Command::EdCompare => SweepConfig {
                n_list: vec![4, 6],
                g_min: -2.0,
                g_max: 2.0,
                g_steps: 8,
                ..base
            },
        }
    }

    /// Evenly spaced `g_steps + 1` points from `g_min` to `g_max`; a single
    /// point when the range is empty.
    pub fn g_grid(&self) -> Vec<f64> {
        if self.g_min == self.g_max {
            return vec![self.g_min];
        }
        let span = self.g_max - self.g_min;
        (0..=self.g_steps)
            .map(|k| {
                if k == self.g_steps {
                    self.g_max
                } else {
                    self.g_min + span * k as f64 / self.g_steps as f64
                }
            })
            .collect()
    }

    pub fn epsilon_or_plus(&self) -> Sign {
        self.epsilon.unwrap_or(Sign::Plus)
    }

    pub fn eta_or_plus(&self) -> Sign {
        self.eta.unwrap_or(Sign::Plus)
    }

    /// `(epsilon, eta)` classes selected by the config.
    pub fn classes(&self) -> Vec<(Sign, Sign)> {
        let eps: Vec<Sign> = self.epsilon.map(|s| vec![s]).unwrap_or_else(|| Sign::BOTH.to_vec());
        let eta: Vec<Sign> = self.eta.map(|s| vec![s]).unwrap_or_else(|| Sign::BOTH.to_vec());
        eps.iter().flat_map(|&e| eta.iter().map(move |&h| (e, h))).collect()
    }

    pub fn validate(&self, cmd: Command) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.g_steps < 1 {
            return bad("g-steps must be >= 1".into());
        }
        if !(self.g_min <= self.g_max) || !self.g_min.is_finite() || !self.g_max.is_finite() {
            return bad(format!("need finite g-min <= g-max, got {} > {}", self.g_min, self.g_max));
        }
        if !(self.j >= 0.0) || !self.j.is_finite() {
            return bad(format!("J must be finite and >= 0, got {}", self.j));
        }
        if self.n_list.is_empty() {
            return bad("no ring sizes given".into());
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n < 3) {
            return bad(format!("ring size must be >= 3, got {n}"));
        }
        if !(self.tolerance > 0.0) {
            return bad(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.workers == 0 {
            return bad("workers must be >= 1".into());
        }
        let needs_states = matches!(cmd, Command::Verify | Command::EdCompare);
        if needs_states && self.eta == Some(Sign::Minus) {
            if let Some(&n) = self.n_list.iter().find(|&&n| n % 2 == 1) {
                return Err(Error::OddRing(n));
            }
        }
        if needs_states {
            if let Some(&n) = self.n_list.iter().find(|&&n| n > MAX_DENSE_SITES) {
                return Err(Error::SizeCap { n, cap: MAX_DENSE_SITES });
            }
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))
    }
}

/// Optional JSON config file; every field may be omitted.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub epsilon: Option<i64>,
    pub eta: Option<i64>,
    pub j: Option<f64>,
    pub n: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub g_min: Option<f64>,
    pub g_max: Option<f64>,
    pub g_steps: Option<usize>,
    pub output: Option<PathBuf>,
    pub tolerance: Option<f64>,
    pub check: Option<bool>,
    pub workers: Option<usize>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("config file: {e}")))
    }

    /// Applies this layer on top of `cfg`; later layers win.
    pub fn apply(&self, cfg: &mut SweepConfig) -> Result<()> {
        if let Some(v) = self.epsilon {
            cfg.epsilon = Some(Sign::from_value(v)?);
        }
        if let Some(v) = self.eta {
            cfg.eta = Some(Sign::from_value(v)?);
        }
        if let Some(v) = self.j {
            cfg.j = v;
        }
        if let Some(v) = self.n {
            cfg.n_list = vec![v];
        }
        if let Some(v) = &self.n_list {
            cfg.n_list = v.clone();
        }
        if let Some(v) = self.g_min {
            cfg.g_min = v;
        }
        if let Some(v) = self.g_max {
            cfg.g_max = v;
        }
        if let Some(v) = self.g_steps {
            cfg.g_steps = v;
        }
        if let Some(v) = &self.output {
            cfg.output = Some(v.clone());
        }
        if let Some(v) = self.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = self.check {
            cfg.check = v;
        }
        if let Some(v) = self.workers {
            cfg.workers = v;
        }
        Ok(())
    }
}

/// `%.15g`-style formatting: 15 significant digits, trailing zeros trimmed,
/// `.` as decimal separator, scientific notation outside `[1e-5, 1e15)`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..15).contains(&exp) {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (14 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn fmt_or_nan(v: Result<f64>) -> String {
    v.map(format_float).unwrap_or_else(|_| "nan".into())
}

#[derive(Clone, Debug, Default)]
pub struct CommandOutput {
    pub text: String,
    /// Failed cross-checks or tolerance violations; empty means success.
    pub failures: Vec<String>,
}

impl CommandOutput {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

struct SweepRow {
    line: String,
    failures: Vec<String>,
}

fn sweep_row(cfg: &SweepConfig, g: f64, n: usize) -> SweepRow {
    let eps = cfg.epsilon_or_plus();
    let eta = cfg.eta_or_plus();
    let mut failures = Vec::new();
    // eta = -1 closed forms hold on even rings only.
    let odd_minus = || -> Result<()> {
        if eta == Sign::Minus && n % 2 == 1 {
            return Err(Error::OddRing(n));
        }
        Ok(())
    };
    let corr = correlations_at(eta, g, n, 2);
    let cells = [
        format_float(g),
        n.to_string(),
        fmt_or_nan(u_param(g)),
        fmt_or_nan(odd_minus().and_then(|_| magnetization_x(eps, g, n))),
        fmt_or_nan(corr.as_ref().map(|k| k.gx).map_err(Clone::clone)),
        fmt_or_nan(corr.as_ref().map(|k| k.gy).map_err(Clone::clone)),
        fmt_or_nan(corr.as_ref().map(|k| k.gz).map_err(Clone::clone)),
        fmt_or_nan(odd_minus().and_then(|_| concurrence_closed(g, n))),
    ];
    if cfg.check && n <= CHECK_MAX_SITES && odd_minus().is_ok() {
        if let Err(e) = cross_check_point(cfg, eps, eta, g, n, &mut failures) {
            failures.push(format!("g={g} N={n}: {e}"));
        }
    }
    SweepRow { line: cells.join(","), failures }
}

fn cross_check_point(
    cfg: &SweepConfig,
    eps: Sign,
    eta: Sign,
    g: f64,
    n: usize,
    failures: &mut Vec<String>,
) -> Result<()> {
    let p = ModelParams::new(eps, eta, g, cfg.j, n)?;
    let state = build_state(&mps_matrices(&p), n)?.state;
    let tol = cfg.tolerance;
    let mut compare = |what: &str, closed: f64, direct: f64| {
        if (closed - direct).abs() > tol {
            failures.push(format!("g={g} N={n}: {what} closed {closed} vs direct {direct}"));
        }
    };
    if let (Ok(mx), Ok(k)) = (magnetization_x(eps, g, n), correlations_at(eta, g, n, 2)) {
        compare("mx", mx, state.expectation(&[(1, sigma_x())]).re);
        compare("Gx", k.gx, state.expectation(&[(1, sigma_x()), (2, sigma_x())]).re);
        compare("Gy", k.gy, state.expectation(&[(1, sigma_y()), (2, sigma_y())]).re);
        compare("Gz", k.gz, state.expectation(&[(1, sigma_z()), (2, sigma_z())]).re);
    }
    let rho = PairDensityMatrix::new(partial_trace_pair(&state, 1, 2)?)?;
    compare("C", concurrence_closed(g, n)?, wootters_concurrence(&rho)?.c);
    Ok(())
}

/// `g,N,u,mx,Gx,Gy,Gz,C`, one row per `(N, g)`; `N` outer, `g` inner.
///
/// For `eta = -1` the correlators are separation dependent; the row holds the
/// nearest-neighbour values `G_a(1, 2)`.
pub fn cmd_sweep(cfg: &SweepConfig) -> Result<CommandOutput> {
    cfg.validate(Command::Sweep)?;
    let grid = cfg.g_grid();
    let points: Vec<(usize, f64)> =
        cfg.n_list.iter().flat_map(|&n| grid.iter().map(move |&g| (n, g))).collect();
    let rows: Vec<SweepRow> =
        cfg.pool()?.install(|| points.par_iter().map(|&(n, g)| sweep_row(cfg, g, n)).collect());
    let mut out = CommandOutput { text: "g,N,u,mx,Gx,Gy,Gz,C\n".into(), failures: vec![] };
    for row in rows {
        out.text.push_str(&row.line);
        out.text.push('\n');
        out.failures.extend(row.failures);
    }
    Ok(out)
}

/// `g, N6, ..., N50, limit`: scaled concurrence `N C(g/N, N)` per ring size
/// and the `N -> infinity` scaling function.
pub fn cmd_figure1(cfg: &SweepConfig) -> Result<CommandOutput> {
    cfg.validate(Command::Figure1)?;
    let grid = cfg.g_grid();
    let columns: Vec<Vec<(f64, f64)>> = cfg.pool()?.install(|| {
        cfg.n_list
            .par_iter()
            .map(|&n| scaled_concurrence_curve(n, &grid))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut text = String::from("g");
    for n in &cfg.n_list {
        write!(text, ",N{n}").unwrap();
    }
    text.push_str(",limit\n");
    for (row, &g) in grid.iter().enumerate() {
        text.push_str(&format_float(g));
        for col in &columns {
            text.push(',');
            text.push_str(&format_float(col[row].1));
        }
        text.push(',');
        text.push_str(&format_float(scaling_limit(g)));
        text.push('\n');
    }
    Ok(CommandOutput { text, failures: vec![] })
}

/// `g, mx_N..., mx_limit, mx_inverted_limit`: finite-ring magnetization, its
/// `N -> infinity` limit (at `g = 0` the common value of both one-sided
/// limits), and the reciprocal expression for comparison.
pub fn cmd_figure2(cfg: &SweepConfig) -> Result<CommandOutput> {
    cfg.validate(Command::Figure2)?;
    let eps = cfg.epsilon_or_plus();
    let grid = cfg.g_grid();
    let mut text = String::from("g");
    for n in &cfg.n_list {
        write!(text, ",mx_N{n}").unwrap();
    }
    text.push_str(",mx_limit,mx_inverted_limit\n");
    let rows: Vec<String> = cfg.pool()?.install(|| {
        grid.par_iter()
            .map(|&g| {
                let mut line = format_float(g);
                for &n in &cfg.n_list {
                    line.push(',');
                    line.push_str(&fmt_or_nan(magnetization_x(eps, g, n)));
                }
                let limit = if g == 0.0 {
                    let z = zero_crossing_report(eps);
                    Ok(0.5 * (z.mx_left + z.mx_right))
                } else {
                    thermodynamic_magnetization(eps, g)
                };
                line.push(',');
                line.push_str(&fmt_or_nan(limit));
                line.push(',');
                line.push_str(&format_float(inverted_limit_expression(eps, g)));
                line
            })
            .collect()
    });
    for line in rows {
        text.push_str(&line);
        text.push('\n');
    }
    Ok(CommandOutput { text, failures: vec![] })
}

struct EdRow {
    line: String,
    failure: Option<String>,
}

fn ed_row(cfg: &SweepConfig, eps: Sign, eta: Sign, n: usize, g: f64) -> Result<EdRow> {
    let p = ModelParams::new(eps, eta, g, cfg.j, n)?;
    let h = assemble_chain_h(&p, HamiltonianForm::Couplings)?;
    let spectrum = dense_spectrum(&h, DEFAULT_DEGENERACY_TOL)?;
    let psi = explicit_ground_state(&p)?;
    let m = ground_membership_in(&h, &spectrum, &psi)?;
    let energy = spectrum.ground_energy();
    let expected = p.ground_energy();
    let tol = cfg.tolerance;
    let pass = (energy - expected).abs() <= tol && m.residual <= tol && 1.0 - m.overlap <= tol;
    let line = [
        eps.to_string(),
        eta.to_string(),
        format_float(cfg.j),
        n.to_string(),
        format_float(g),
        format_float(energy),
        format_float(expected),
        format_float(m.residual),
        format_float(m.overlap),
        spectrum.ground_space_dim.to_string(),
        pass.to_string(),
    ]
    .join(",");
    let failure = (!pass).then(|| {
        format!(
            "eps={eps} eta={eta} N={n} g={g}: E={energy} expected {expected}, residual {:.3e}, overlap {}",
            m.residual, m.overlap
        )
    });
    Ok(EdRow { line, failure })
}

/// Exact diagonalization against the closed-form energy and ground state for
/// every selected class, ring size and `g`. Odd rings are skipped for
/// `eta = -1` when the class was not requested explicitly.
pub fn cmd_ed_compare(cfg: &SweepConfig) -> Result<CommandOutput> {
    cfg.validate(Command::EdCompare)?;
    let grid = cfg.g_grid();
    let mut jobs = Vec::new();
    for (eps, eta) in cfg.classes() {
        for &n in &cfg.n_list {
            if eta == Sign::Minus && n % 2 == 1 {
                continue;
            }
            for &g in &grid {
                jobs.push((eps, eta, n, g));
            }
        }
    }
    let rows: Vec<Result<EdRow>> = cfg.pool()?.install(|| {
        jobs.par_iter().map(|&(eps, eta, n, g)| ed_row(cfg, eps, eta, n, g)).collect()
    });
    let mut out = CommandOutput {
        text: "epsilon,eta,J,N,g,ed_energy,expected_energy,residual,overlap,degeneracy,pass\n".into(),
        failures: vec![],
    };
    for row in rows {
        let row = row?;
        out.text.push_str(&row.line);
        out.text.push('\n');
        out.failures.extend(row.failure);
    }
    Ok(out)
}
