//! The `verify` command: runs the invariant checks of every module over a
//! parameter grid and reports one record per check.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::ed::{dense_spectrum, ground_degeneracy_scan, ground_membership_in, DEFAULT_DEGENERACY_TOL};
use crate::entanglement::{
    concurrence_closed, pair_density, partial_trace_pair, scaled_concurrence_curve, scaling_limit,
    wootters_concurrence, PairDensityMatrix,
};
use crate::error::Result;
use crate::linalg::{c, index_to_bits, max_abs, rx, sigma_x, sigma_z, span_projector, Pauli, C64};
use crate::model::{check_symmetries, couplings_from_params, mps_matrices, Check, GeneralForm, ModelParams, MpsTensors, Sign};
use crate::mps::{
    amplitude, bell_pair_matrices, build_state, expectation_one_point, expectation_two_point,
    explicit_ground_state, transfer_matrix, PureState,
};
use crate::observables::{
    correlations, correlations_at, inverted_limit_expression, magnetization_x,
    thermodynamic_correlations, thermodynamic_magnetization, u_param, zero_crossing_report,
};
use crate::parent::{
    assemble_chain_h, conjugate_sitewise, det_closed_form, e_vectors, local_h, null_space_k2,
    pauli_decompose, HamiltonianForm,
};
use crate::sweep::{cmd_ed_compare, cmd_figure1, cmd_figure2, cmd_sweep, Command, CommandOutput, SweepConfig};

const ROUNDOFF_FLOOR: f64 = 1e-15;
const ANCHOR_G: f64 = 0.5;
const ANCHOR_N: usize = 4;

/// Every library operation the verification run must exercise.
pub const ALL_OPS: [&str; 35] = [
    "couplings_from_params",
    "mps_matrices",
    "check_symmetries",
    "amplitude",
    "build_state",
    "transfer_matrix",
    "transfer_with_operator",
    "expectation_one_point",
    "expectation_two_point",
    "explicit_ground_state",
    "bell_pair_matrices",
    "null_space_k2",
    "e_vectors",
    "local_h",
    "pauli_decompose",
    "assemble_chain_h",
    "u_param",
    "magnetization_x",
    "correlations",
    "thermodynamic_magnetization",
    "thermodynamic_correlations",
    "pair_density",
    "wootters_concurrence",
    "concurrence_closed",
    "scaled_concurrence_curve",
    "scaling_limit",
    "dense_spectrum",
    "ground_membership",
    "ground_degeneracy_scan",
    "cmd_verify",
    "cmd_sweep",
    "cmd_figure1",
    "cmd_figure2",
    "cmd_ed_compare",
    "zero_crossing_report",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub module: &'static str,
    pub check: &'static str,
    pub params: String,
    pub value: f64,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub ops: Vec<&'static str>,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub records: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        for r in self.records.iter().filter(|r| r.status == Status::Fail) {
            out.push_str(&format!(
                "FAIL {}::{} [{}] value {:.3e} > tol {:.1e}{}\n",
                r.module,
                r.check,
                r.params,
                r.value,
                r.tolerance,
                r.reason.as_deref().map(|s| format!(" ({s})")).unwrap_or_default()
            ));
        }
        out.push_str(&format!(
            "verify: {} checks, {} pass, {} fail, {} skipped, {} info -> {}\n",
            self.records.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip),
            self.count(Status::Info),
            if self.passed() { "OK" } else { "FAILED" }
        ));
        out
    }
}

struct Recorder {
    tol: f64,
    records: Vec<CheckRecord>,
}

impl Recorder {
    fn new(tol: f64) -> Self {
        Self { tol, records: Vec::new() }
    }

    /// `value` is a deviation; passes when it is at most `tol` (NaN fails).
    fn check_with(
        &mut self,
        module: &'static str,
        check: &'static str,
        params: String,
        value: f64,
        tol: f64,
        ops: &[&'static str],
    ) {
        let status = if value <= tol { Status::Pass } else { Status::Fail };
        self.records.push(CheckRecord {
            module,
            check,
            params,
            value,
            tolerance: tol,
            status,
            reason: None,
            ops: ops.to_vec(),
        });
    }

    fn check(&mut self, module: &'static str, check: &'static str, params: String, value: f64, ops: &[&'static str]) {
        let tol = self.tol;
        self.check_with(module, check, params, value, tol, ops);
    }

    fn other(
        &mut self,
        status: Status,
        module: &'static str,
        check: &'static str,
        params: String,
        value: f64,
        reason: String,
        ops: &[&'static str],
    ) {
        self.records.push(CheckRecord {
            module,
            check,
            params,
            value,
            tolerance: self.tol,
            status,
            reason: Some(reason),
            ops: ops.to_vec(),
        });
    }

    fn error(&mut self, module: &'static str, check: &'static str, params: String, err: crate::Error) {
        self.other(Status::Fail, module, check, params, f64::NAN, err.to_string(), &[]);
    }
}

fn params_label(p: &ModelParams) -> String {
    format!("eps={} eta={} g={} J={} N={}", p.epsilon, p.eta, p.g, p.j, p.n)
}

fn flip_bits(bits: &[u8]) -> Vec<u8> {
    bits.iter().map(|b| 1 - b).collect()
}

/// Runs the checks tied to one `(class, N, g)` point.
fn point_checks(p: &ModelParams, rec: &mut Recorder) {
    let label = params_label(p);
    if let Err(e) = point_checks_inner(p, &label, rec) {
        rec.error("verify", "point", label, e);
    }
}

fn point_checks_inner(p: &ModelParams, label: &str, rec: &mut Recorder) -> Result<()> {
    let (eps, eta, g, n) = (p.epsilon, p.eta, p.g, p.n);
    let l = || label.to_string();

    // model_core
    let k = couplings_from_params(p);
    let dev = (k.jy + k.jz + 2.0 * eta.value() * p.j).abs().max((k.jy - k.jz - 2.0 * g).abs());
    rec.check("model_core", "coupling-sums", l(), dev, &["couplings_from_params"]);

    let t = mps_matrices(p);
    let sym = check_symmetries(&t, eps);
    let sym_ok = sym.spin_flip == Check::Pass
        && sym.parity.passed_or_na()
        && sym.time_reversal == Check::Pass
        && (g == 0.0) == (sym.parity == Check::NotApplicable);
    rec.check(
        "model_core",
        "tensor-symmetries",
        format!("{label} parity={:?}", sym.parity),
        if sym_ok { 0.0 } else { 1.0 },
        &["mps_matrices", "check_symmetries"],
    );

    // mps_engine
    let built = build_state(&t, n)?;
    rec.check(
        "mps_engine",
        "normalization-consistency",
        l(),
        (built.z_transfer - built.z_direct).abs() / built.z_direct,
        &["build_state"],
    );
    let state = built.state;

    let mut ev = transfer_matrix(&t).sorted_real_eigenvalues();
    let e = eta.value();
    let mut want = vec![2.0 * (e + g), 2.0 * (e - g), 2.0 * (1.0 + g), 2.0 * (1.0 - g)];
    want.sort_by(|a, b| b.total_cmp(a));
    ev.truncate(4);
    let spec_dev = ev.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    rec.check("mps_engine", "transfer-spectrum", l(), spec_dev, &["transfer_matrix"]);

    let sx = sigma_x();
    let m1 = expectation_one_point(&t, &sx, 1, n)?;
    let mut trans_dev = 0.0_f64;
    for site in 2..=n {
        trans_dev = trans_dev.max((expectation_one_point(&t, &sx, site, n)? - m1).norm());
    }
    for r in 2..=n {
        for a in [Pauli::X, Pauli::Y, Pauli::Z] {
            let op = a.matrix();
            let transfer = expectation_two_point(&t, &op, &op, r, n)?;
            // same separation, shifted start, on the dense state
            let shifted = state.expectation(&[(2, op), ((r % n) + 1, op)]);
            trans_dev = trans_dev.max((transfer - shifted).norm());
        }
    }
    rec.check(
        "mps_engine",
        "translation-invariance",
        l(),
        trans_dev,
        &["expectation_one_point", "expectation_two_point", "transfer_with_operator"],
    );

    if n <= 10 {
        let mut refl = 0.0_f64;
        let mut flip = 0.0_f64;
        let mut scale = 0.0_f64;
        let eps_n = eps.value().powi(n as i32);
        for idx in 0..(1usize << n) {
            let bits = index_to_bits(idx, n);
            let a = amplitude(&t, &bits);
            scale = scale.max(a.norm());
            let mut rev = bits.clone();
            rev.reverse();
            refl = refl.max((a - amplitude(&t, &rev)).norm());
            flip = flip.max((amplitude(&t, &flip_bits(&bits)) - a * eps_n).norm());
        }
        if sym.parity == Check::Pass {
            rec.check("mps_engine", "reflection-invariance", l(), refl / scale, &["amplitude"]);
        }
        rec.check("mps_engine", "spin-flip-amplitudes", l(), flip / scale, &["amplitude"]);
    }

    let explicit = if eta == Sign::Minus && n % 2 == 1 {
        rec.other(Status::Skip, "mps_engine", "explicit-state-equivalence", l(), f64::NAN,
            "odd ring has no eta=-1 closed form".into(), &[]);
        None
    } else {
        let s = explicit_ground_state(p)?;
        rec.check("mps_engine", "explicit-state-equivalence", l(), 1.0 - s.overlap(&state).norm(), &["explicit_ground_state"]);
        Some(s)
    };

    if eta == Sign::Minus {
        let phi: Vec<_> = bell_pair_matrices(&t).iter().flatten().copied().collect();
        let worst = phi
            .iter()
            .flat_map(|a| phi.iter().map(move |b| max_abs(&(a * b - b * a))))
            .fold(0.0, f64::max);
        rec.check("mps_engine", "bell-pair-commutation", l(), worst, &["bell_pair_matrices"]);
    }

    // parent_hamiltonian
    let ns = null_space_k2(&t.a0, &t.a1);
    let (e1, e2) = e_vectors(p);
    let proj_dev = max_abs(&(ns.kernel_projector() - span_projector(&[e1, e2], 1e-12)));
    rec.check(
        "parent_hamiltonian",
        "kernel-projector",
        format!("{label} kernel_dim={} tol={:.1e}", ns.kernel_dim(), ns.tolerance),
        proj_dev,
        &["null_space_k2", "e_vectors"],
    );

    let pc = pauli_decompose(&local_h(p).h)?;
    let mut coupling_dev = 0.0_f64;
    for (a, b, w) in pc.iter() {
        let expect = match (a, b) {
            (Pauli::X, Pauli::X) => k.jx,
            (Pauli::Y, Pauli::Y) => k.jy,
            (Pauli::Z, Pauli::Z) => k.jz,
            (Pauli::X, Pauli::I) | (Pauli::I, Pauli::X) => k.b / 2.0,
            (Pauli::I, Pauli::I) => p.bond_offset(),
            _ => 0.0,
        };
        coupling_dev = coupling_dev.max((w - expect).abs());
    }
    rec.check("parent_hamiltonian", "coupling-recovery", l(), coupling_dev, &["local_h", "pauli_decompose"]);

    let h_proj = assemble_chain_h(p, HamiltonianForm::Projector)?;
    let h_coup = assemble_chain_h(p, HamiltonianForm::Couplings)?;
    let gs = explicit.as_ref().unwrap_or(&state);
    rec.check(
        "parent_hamiltonian",
        "projector-annihilates-state",
        l(),
        (&h_proj * &gs.amplitudes).norm(),
        &["assemble_chain_h"],
    );
    let dim = 1usize << n;
    let shift = DMatrix::<C64>::identity(dim, dim) * c(n as f64 * p.bond_offset());
    rec.check("parent_hamiltonian", "forms-differ-by-constant", l(), max_abs(&(&h_coup - &h_proj + shift)), &["assemble_chain_h"]);

    if eps == Sign::Plus {
        let other = assemble_chain_h(&ModelParams { epsilon: Sign::Minus, ..*p }, HamiltonianForm::Couplings)?;
        let mapped = conjugate_sitewise(&h_coup, n, |_| sigma_z());
        rec.check("model_core", "epsilon-map", l(), max_abs(&(mapped - other)), &["assemble_chain_h"]);
    }
    if eta == Sign::Plus && n % 2 == 0 {
        let other = assemble_chain_h(&ModelParams { eta: Sign::Minus, ..*p }, HamiltonianForm::Couplings)?;
        let half = std::f64::consts::FRAC_PI_2;
        let mapped = conjugate_sitewise(&h_coup, n, |k| if k % 2 == 0 { rx(half) } else { rx(-half) });
        rec.check("model_core", "eta-map", l(), max_abs(&(mapped - other)), &["assemble_chain_h"]);
    }

    // ed_oracle
    let spectrum = dense_spectrum(&h_coup, DEFAULT_DEGENERACY_TOL)?;
    rec.check("ed_oracle", "ed-ground-energy", l(), (spectrum.ground_energy() - p.ground_energy()).abs(), &["dense_spectrum"]);
    let m = ground_membership_in(&h_coup, &spectrum, gs)?;
    rec.check(
        "ed_oracle",
        "ground-membership",
        format!("{label} ground_dim={}", spectrum.ground_space_dim),
        m.residual.max(1.0 - m.overlap),
        &["ground_membership"],
    );
    if eta == Sign::Plus {
        let flipped = (1..=n).fold(gs.clone(), |s, site| s.apply_site(&sx, site));
        let eig = eps.value().powi(n as i32);
        let dev = (&flipped.amplitudes - &gs.amplitudes * c(eig)).norm();
        rec.check("ed_oracle", "spin-flip-sector", format!("{label} eigenvalue={eig}"), dev, &[]);
    }

    // closed_form_observables
    if u_param(g).is_err() {
        rec.other(Status::Skip, "closed_form_observables", "closed-form-vs-direct", l(), f64::NAN,
            "singular parameter".into(), &[]);
    } else if eta == Sign::Minus && n % 2 == 1 {
        rec.other(Status::Skip, "closed_form_observables", "closed-form-vs-direct", l(), f64::NAN,
            "odd ring has no eta=-1 closed form".into(), &[]);
    } else {
        let mx = magnetization_x(eps, g, n)?;
        let mut dev = (mx - m1.re).abs();
        for r in 2..=n {
            let kk = correlations_at(eta, g, n, r)?;
            for (a, closed) in [(Pauli::X, kk.gx), (Pauli::Y, kk.gy), (Pauli::Z, kk.gz)] {
                let op = a.matrix();
                dev = dev.max((expectation_two_point(&t, &op, &op, r, n)? - c(closed)).norm());
            }
        }
        rec.check("closed_form_observables", "closed-form-vs-direct", l(), dev, &["u_param", "magnetization_x", "correlations"]);
        let kk = correlations(g, n)?;
        let ident = (kk.sum() - 1.0).abs().max(((1.0 - kk.gz) * (1.0 - kk.gy) - mx * mx).abs());
        rec.check_with("closed_form_observables", "correlator-identities", l(), ident, 1e-12, &["correlations"]);
    }

    // entanglement
    if n >= 4 && explicit.is_some() {
        let mut rho_dev = 0.0_f64;
        let mut conc = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                let brute = partial_trace_pair(&state, i, j)?;
                if i == 1 {
                    rho_dev = rho_dev.max(max_abs(&(pair_density(p, i, j)?.rho - brute)));
                }
                conc.push(wootters_concurrence(&PairDensityMatrix::new(brute)?)?.c);
            }
        }
        rec.check("entanglement", "pair-density-vs-partial-trace", l(), rho_dev, &["pair_density"]);
        let closed = concurrence_closed(g, n)?;
        let from_closed_rho = wootters_concurrence(&pair_density(p, 1, 2)?)?.c;
        rec.check(
            "entanglement",
            "concurrence-closed-vs-wootters",
            l(),
            (closed - from_closed_rho).abs().max((closed - conc[0]).abs()),
            &["wootters_concurrence", "concurrence_closed"],
        );
        let (lo, hi) = conc.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        rec.check("entanglement", "distance-independence", l(), hi - lo, &["wootters_concurrence"]);
    }
    Ok(())
}

fn thermodynamic_checks(eps: Sign, g: f64, rec: &mut Recorder) -> Result<()> {
    let label = format!("eps={eps} g={g}");
    let limit = thermodynamic_magnetization(eps, g)?;
    let errs: Vec<f64> = [8usize, 16, 32, 64]
        .iter()
        .map(|&n| magnetization_x(eps, g, n).map(|m| (m - limit).abs()))
        .collect::<Result<_>>()?;
    let monotone = errs.windows(2).all(|w| w[1] < w[0] || w[1] < ROUNDOFF_FLOOR);
    rec.check_with(
        "closed_form_observables",
        "thermodynamic-convergence",
        format!("{label} errors=[{}]", errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>().join(" ")),
        if monotone { errs[3] } else { f64::INFINITY },
        // |u|^64 decays slowly near g = 0; only monotone decrease is gated
        f64::MAX,
        &["thermodynamic_magnetization"],
    );
    // ring large enough that |u|^N (or |u|^-N) is below 1e-14
    let w = u_param(g)?.abs();
    let w = w.min(1.0 / w);
    let n = ((-14.0 * 10f64.ln() / w.ln()).ceil() as usize).clamp(64, 1 << 40);
    let lim = thermodynamic_correlations(g)?;
    let far = correlations(g, n)?;
    let dev = (far.gx - lim.gx).abs().max((far.gy - lim.gy).abs()).max((far.gz - lim.gz).abs());
    rec.check("closed_form_observables", "thermodynamic-correlations", format!("{label} N={n}"), dev, &["thermodynamic_correlations"]);
    Ok(())
}

fn global_checks(cfg: &SweepConfig, rec: &mut Recorder) -> Result<()> {
    let grid = cfg.g_grid();

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let mut draw = || c(rng.random_range(-2.0..2.0));
        let form = GeneralForm { a: draw(), b: draw(), c: draw(), d: draw() };
        let t = MpsTensors::from_general(form, Sign::Plus);
        let closed = det_closed_form(&form);
        let numeric = null_space_k2(&t.a0, &t.a1).determinant();
        worst = worst.max((numeric - closed).norm() / closed.norm().max(1e-300));
    }
    rec.check("parent_hamiltonian", "determinant-formula", "100 seeded random (a,b,c,d)".into(), worst, &["null_space_k2"]);

    for eps in Sign::BOTH {
        for &g in &grid {
            if g != 0.0 && u_param(g).is_ok() {
                thermodynamic_checks(eps, g, rec)?;
            }
        }
        let at = 0.5;
        rec.other(
            Status::Info,
            "closed_form_observables",
            "inverted-limit-discrepancy",
            format!("eps={eps} g={at}"),
            inverted_limit_expression(eps, at) - thermodynamic_magnetization(eps, at)?,
            format!(
                "implemented limit {} vs reciprocal expression {}",
                thermodynamic_magnetization(eps, at)?,
                inverted_limit_expression(eps, at)
            ),
            &["thermodynamic_magnetization"],
        );
        let z = zero_crossing_report(eps);
        rec.other(
            Status::Info,
            "closed_form_observables",
            "zero-crossing",
            format!("eps={eps}"),
            z.slope_right - z.slope_left,
            format!("mx(0-)={} mx(0+)={} slopes {} / {}", z.mx_left, z.mx_right, z.slope_left, z.slope_right),
            &["zero_crossing_report"],
        );
    }

    // Leading transfer eigenvalues 2(1+g) and 2(1-g) swap order across g = 0.
    for eta in Sign::BOTH {
        let gap = |g: f64| -> f64 {
            let p = ModelParams { epsilon: Sign::Plus, eta, g, j: cfg.j, n: 4 };
            let ev = transfer_matrix(&mps_matrices(&p)).sorted_real_eigenvalues();
            let near = |target: f64| {
                ev.iter().copied().min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs())).unwrap()
            };
            near(2.0 * (1.0 + g)) - near(2.0 * (1.0 - g))
        };
        let (left, right) = (gap(-1e-3), gap(1e-3));
        rec.check(
            "mps_engine",
            "transfer-level-crossing",
            format!("eta={eta} gap(-1e-3)={left:.3e} gap(+1e-3)={right:.3e}"),
            if left < 0.0 && right > 0.0 { 0.0 } else { 1.0 },
            &["transfer_matrix"],
        );
    }

    for g in [0.5, 1.0, 2.0] {
        let n = 10_000;
        let v = scaled_concurrence_curve(n, &[g])?[0].1;
        let lim = scaling_limit(g);
        rec.check_with(
            "entanglement",
            "scaling-limit",
            format!("g={g} N={n}"),
            (v - lim).abs() / lim,
            1e-3,
            &["scaled_concurrence_curve", "scaling_limit"],
        );
    }

    type Runner = fn(&SweepConfig) -> Result<CommandOutput>;
    let commands: [(Command, &'static str, Runner, Vec<usize>); 4] = [
        (Command::Sweep, "cmd_sweep", cmd_sweep, vec![4, 6]),
        (Command::Figure1, "cmd_figure1", cmd_figure1, vec![6, 7]),
        (Command::Figure2, "cmd_figure2", cmd_figure2, vec![4, 8]),
        (Command::EdCompare, "cmd_ed_compare", cmd_ed_compare, vec![4]),
    ];
    for (cmd, name, run, n_list) in commands {
        let mut small = SweepConfig::defaults_for(cmd);
        small.n_list = n_list;
        small.g_steps = 4;
        small.check = true;
        small.j = cfg.j;
        small.workers = cfg.workers;
        let (a, b) = (run(&small)?, run(&small)?);
        let ok = a.ok() && a.text == b.text && a.text.lines().count() > 1;
        rec.check(
            "sweep_cli",
            "command-smoke",
            format!("{name} N={:?} rows={}", small.n_list, a.text.lines().count().saturating_sub(1)),
            if ok { 0.0 } else { 1.0 },
            &[name],
        );
    }

    if let Some(&n) = cfg.n_list.iter().filter(|&&n| (4..=8).contains(&n)).max() {
        let p = ModelParams::new(cfg.epsilon_or_plus(), Sign::Plus, 0.5, cfg.j, n)?;
        for (g, dim) in ground_degeneracy_scan(&p, &grid)? {
            rec.other(
                Status::Info,
                "ed_oracle",
                "ground-degeneracy",
                format!("eps={} eta=+1 N={n} g={g}", p.epsilon),
                dim as f64,
                format!("measured ground-space dimension {dim}"),
                &["ground_degeneracy_scan"],
            );
        }
    }
    Ok(())
}

/// Runs every check over the selected classes, ring sizes and `g` grid.
pub fn cmd_verify(cfg: &SweepConfig) -> Result<VerifyReport> {
    cfg.validate(Command::Verify)?;
    let grid = cfg.g_grid();
    let mut points = Vec::new();
    for (eps, eta) in cfg.classes() {
        for &n in &cfg.n_list {
            for &g in &grid {
                points.push(ModelParams::new(eps, eta, g, cfg.j, n)?);
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| crate::Error::InvalidParameter(format!("worker pool: {e}")))?;
    let per_point: Vec<Vec<CheckRecord>> = pool.install(|| {
        points
            .par_iter()
            .map(|p| {
                let mut rec = Recorder::new(cfg.tolerance);
                point_checks(p, &mut rec);
                rec.records
            })
            .collect()
    });
    let mut rec = Recorder::new(cfg.tolerance);
    rec.records = per_point.into_iter().flatten().collect();
    if let Err(e) = global_checks(cfg, &mut rec) {
        rec.error("verify", "global", String::new(), e);
    }

    let covered = |rec: &Recorder| -> BTreeSet<&'static str> {
        rec.records.iter().flat_map(|r| r.ops.iter().copied()).chain(["cmd_verify"]).collect()
    };
    if ALL_OPS.iter().any(|op| !covered(&rec).contains(op)) {
        // Narrow grids miss some operations; fill in with a fixed regular point.
        for eta in Sign::BOTH {
            let p = ModelParams::new(cfg.epsilon_or_plus(), eta, ANCHOR_G, cfg.j, ANCHOR_N)?;
            point_checks(&p, &mut rec);
        }
        if let Err(e) = thermodynamic_checks(cfg.epsilon_or_plus(), ANCHOR_G, &mut rec) {
            rec.error("verify", "anchor", String::new(), e);
        }
    }
    let covered = covered(&rec);
    let missing: Vec<&str> = ALL_OPS.iter().copied().filter(|op| !covered.contains(op)).collect();
    rec.records.push(CheckRecord {
        module: "sweep_cli",
        check: "operation-coverage",
        params: format!("{} of {} operations exercised", ALL_OPS.len() - missing.len(), ALL_OPS.len()),
        value: missing.len() as f64,
        tolerance: 0.0,
        status: if missing.is_empty() { Status::Pass } else { Status::Fail },
        reason: (!missing.is_empty()).then(|| format!("not exercised: {}", missing.join(", "))),
        ops: vec!["cmd_verify"],
    });
    Ok(VerifyReport { records: rec.records })
}

/// Dense state for ad-hoc comparisons in reports.
pub fn trace_state(p: &ModelParams) -> Result<PureState> {
    Ok(build_state(&mps_matrices(p), p.n)?.state)
}
