//! Command orchestration shared by the `bsq` binary: run, Cauchy study,
//! probes, report, and the deterministic selftest battery.

use std::fmt::Write as _;
use std::path::Path;

use crate::analysis::calibration::{GRONWALL_C_EMP, PROBE_SEEDS};
use crate::analysis::diagnostics::{fmt_f64, DiagnosticsRecord, TIMESERIES_HEADER};
use crate::analysis::{
    blowup_monitor, inequality_probe, truncation_convergence_study, EnsembleSpec, ProbeKind,
    StudySetup,
};
use crate::config::{DtKind, RunConfig};
use crate::dynamics::{
    initial_condition_raw, run, DtPolicy, Forcing, InitialCondition, RunOptions, Scheme, State,
    StepperConfig, SystemSpec,
};
use crate::error::{Error, Result};
use crate::fft::field_from_fn;
use crate::field::{SpectralField, VectorField};
use crate::grid::GridSpec;
use crate::norms::{
    l2_norm_vector, lebesgue_norm, sobolev_norm,
};
use crate::output::{emit_run_outputs, timeseries_csv, OutputDir, Summary};
use crate::spectral::{
    apply_multiplier, gradient, leray_project, truncate, truncate_vector, Multiplier,
    TruncationRadius,
};
use crate::util::pairwise_sum_by;

/// Process exit codes of the CLI contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok,
    ConfigError,
    BlowupSignal,
    InvariantFailure,
}

impl ExitStatus {
    pub fn code(&self) -> i32 {
        match self {
            ExitStatus::Ok => 0,
            ExitStatus::ConfigError => 2,
            ExitStatus::BlowupSignal => 3,
            ExitStatus::InvariantFailure => 4,
        }
    }
}

/// What a command did, for the CLI to print and exit on.
#[derive(Debug)]
pub struct CommandOutcome {
    pub status: ExitStatus,
    pub message: String,
}

pub fn exit_status_for(err: &Error) -> ExitStatus {
    match err {
        Error::Config(_) | Error::Dimension(_) | Error::Parameter(_) => ExitStatus::ConfigError,
        Error::Blowup { .. } => ExitStatus::BlowupSignal,
        _ => ExitStatus::InvariantFailure,
    }
}

/// `bsq run`: simulate per the config and emit the artifact set.
pub fn cmd_run(cfg: &RunConfig) -> Result<CommandOutcome> {
    let spec = cfg.system_spec()?;
    let stepper = cfg.stepper()?;
    let opts = cfg.run_options();
    let initial = cfg.initial_state()?;

    let out = OutputDir::create(&cfg.output_dir)?;
    let traj = run(initial, &spec, &stepper, &opts, &mut [])?;
    let summary = emit_run_outputs(&out, cfg, &spec, &traj, Summary::default())?;

    let status = if traj.flagged() {
        ExitStatus::BlowupSignal
    } else if !summary.all_pass() {
        ExitStatus::InvariantFailure
    } else {
        ExitStatus::Ok
    };
    let mut message = format!(
        "run finished: t={} steps={} records={} -> {}\n",
        traj.final_state.t,
        traj.steps,
        traj.records.len(),
        cfg.output_dir
    );
    message.push_str(&summary.render());
    Ok(CommandOutcome { status, message })
}

/// `bsq study cauchy`: truncation-convergence study against a reference R.
pub fn cmd_study_cauchy(cfg: &RunConfig, r_list: &[f64], r_ref: f64) -> Result<CommandOutcome> {
    let DtKind::Fixed(dt) = cfg.dt else {
        return Err(Error::Config(
            "the Cauchy study requires a fixed dt (dt = <value>), not dt = auto".into(),
        ));
    };
    let grid = cfg.grid()?;
    let scheme = cfg.stepper()?.scheme;
    let setup = StudySetup {
        grid,
        nu: cfg.nu,
        kappa: cfg.kappa,
        forcing: cfg.forcing(),
        s: cfg.s,
        ic: cfg.initial_condition(),
        dt,
        t_end: cfg.t_end,
        record_every: cfg.diagnostics_every,
        bmo_depth: cfg.resolved_bmo_depth(),
        scheme,
        s_primes: vec![1.0],
    };
    let result = truncation_convergence_study(&setup, r_list, r_ref)?;

    let out = OutputDir::create(&cfg.output_dir)?;
    let mut csv = String::from("R,R_ref,Y,lifted_h1\n");
    let lifted_h1 = &result.lifted[0].1;
    for ((r, y), lift) in r_list.iter().zip(&result.y_vs_ref).zip(lifted_h1) {
        let _ = writeln!(csv, "{r},{r_ref},{},{}", fmt_f64(*y), fmt_f64(*lift));
    }
    out.write_atomic("cauchy.csv", csv.as_bytes())?;

    let mut summary = Summary::default();
    let sorted_strictly_decreasing = {
        let mut pairs: Vec<(f64, f64)> = r_list.iter().cloned().zip(result.y_vs_ref.clone()).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pairs.dedup_by(|a, b| a.0 == b.0);
        pairs.windows(2).all(|w| w[1].1 < w[0].1)
    };
    summary.check(sorted_strictly_decreasing, "cauchy_y_strictly_decreasing_in_R");
    summary.check(
        result.eps_hat.is_finite() && result.eps_hat > 0.0,
        format!("cauchy_rate_positive eps_hat={:.4}", result.eps_hat),
    );
    summary.check(result.interpolation_ok, "interpolation_lift_constant_one");
    out.write_atomic("summary.txt", summary.render().as_bytes())?;

    let status = if summary.all_pass() {
        ExitStatus::Ok
    } else {
        ExitStatus::InvariantFailure
    };
    let mut message = format!(
        "cauchy study: eps_hat={:.4} M={:.4} -> {}\n",
        result.eps_hat, result.m_ref, cfg.output_dir
    );
    message.push_str(&summary.render());
    Ok(CommandOutcome { status, message })
}

/// `bsq probe kp|feff|lip`.
pub fn cmd_probe(kind: ProbeKind, cfg: &RunConfig) -> Result<CommandOutcome> {
    let grid = cfg.grid()?;
    let ensemble = EnsembleSpec::new(grid, cfg.s, PROBE_SEEDS.to_vec());
    let report = inequality_probe(kind, &ensemble)?;

    let out = OutputDir::create(&cfg.output_dir)?;
    out.write_atomic(&format!("probe_{}.csv", kind.label()), report.to_csv().as_bytes())?;
    let mut summary = Summary::default();
    summary.check(
        report.ratios.iter().all(|r| r.is_finite()),
        format!(
            "probe_{}_ratios_finite max={:.6} median={:.6}",
            kind.label(),
            report.max_ratio,
            report.median_ratio
        ),
    );
    out.write_atomic("summary.txt", summary.render().as_bytes())?;

    Ok(CommandOutcome {
        status: if summary.all_pass() { ExitStatus::Ok } else { ExitStatus::InvariantFailure },
        message: format!(
            "probe {}: {} draws, max ratio {:.6}, median {:.6} -> {}\n",
            kind.label(),
            report.ratios.len(),
            report.max_ratio,
            report.median_ratio,
            cfg.output_dir
        ),
    })
}

fn parse_timeseries(text: &str) -> Result<Vec<DiagnosticsRecord>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Report("timeseries.csv is empty".into()))?;
    if header != TIMESERIES_HEADER {
        return Err(Error::Report(format!("unexpected timeseries header '{header}'")));
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|v| v.parse::<f64>().map_err(|_| Error::Report(format!("bad float on row {}", i + 2))))
            .collect::<Result<_>>()?;
        if vals.len() != 12 {
            return Err(Error::Report(format!("row {} has {} columns, expected 12", i + 2, vals.len())));
        }
        // Only CSV-backed fields are meaningful here; the rest stay zero and
        // the monitor does not consume them.
        records.push(DiagnosticsRecord {
            t: vals[0],
            dt: vals[1],
            u_l2: vals[2],
            theta_l2: 0.0,
            u_hs: vals[3],
            theta_hs: vals[4],
            grad_u_hs: 0.0,
            grad_theta_hs: 0.0,
            grad_u_sup: 0.0,
            grad_theta_sup: vals[7],
            curl_u_sup: vals[5],
            curl_u_bmo: vals[6],
            grad_theta_bmo: vals[8],
            grad_u_l2: 0.0,
            grad_theta_l2: 0.0,
            buoyancy_flux: 0.0,
            i_bkm: vals[9],
            i_curl: vals[10],
            i_linf: vals[11],
            flagged: false,
        });
    }
    Ok(records)
}

/// `bsq report <run-dir>`: monitor summary from emitted artifacts.
pub fn cmd_report(run_dir: &Path) -> Result<CommandOutcome> {
    let csv_path = run_dir.join("timeseries.csv");
    let text = std::fs::read_to_string(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    let records = parse_timeseries(&text)?;
    if records.is_empty() {
        return Err(Error::Report("timeseries.csv has no data rows".into()));
    }
    let monitor = blowup_monitor(&records, GRONWALL_C_EMP)?;
    let summary_path = run_dir.join("summary.txt");
    let blowup_line = std::fs::read_to_string(&summary_path)
        .ok()
        .and_then(|s| s.lines().find(|l| l.starts_with("BLOWUP_SIGNAL")).map(String::from));

    let mut message = String::new();
    let _ = writeln!(message, "report for {}", run_dir.display());
    let last = records.last().unwrap();
    let _ = writeln!(
        message,
        "t_final={} I_BKM={:.6} I_curl={:.6} I_linf={:.6} X_final={:.6}",
        last.t,
        monitor.i_bkm.last().unwrap(),
        monitor.i_curl.last().unwrap(),
        monitor.i_linf.last().unwrap(),
        monitor.x.last().unwrap()
    );
    let mut summary = Summary::default();
    summary.check(monitor.monotone_ok, "integrals_monotone");
    summary.check(monitor.bmo_linf_ok, "bmo_le_twice_linf");
    summary.check(
        monitor.gronwall_ok,
        format!(
            "gronwall_envelope c_required={:.4} <= 2*c_emp={:.4}",
            monitor.gronwall_c_required,
            2.0 * GRONWALL_C_EMP
        ),
    );
    if let Some(line) = blowup_line {
        message.push_str(&line);
        message.push('\n');
    }
    message.push_str(&summary.render());
    Ok(CommandOutcome {
        status: if summary.all_pass() { ExitStatus::Ok } else { ExitStatus::InvariantFailure },
        message,
    })
}

/// One named numeric check of the selftest battery.
#[derive(Debug, Clone)]
pub struct CheckRow {
    pub case: String,
    pub check: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckRow {
    fn new(case: &str, check: &str, value: f64, tol: f64) -> CheckRow {
        CheckRow {
            case: case.into(),
            check: check.into(),
            value,
            tol,
            pass: value <= tol,
        }
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(1e-300);
    (a - b).abs() / scale
}

fn random_scalar(grid: GridSpec, seed: u64) -> SpectralField {
    let (_, theta) = initial_condition_raw(
        &InitialCondition::RandomSpectrum {
            decay_p: 3.0,
            amplitude: 1.0,
            seed,
        },
        grid,
    )
    .expect("valid parameters");
    theta
}

fn random_velocity(grid: GridSpec, seed: u64) -> VectorField {
    let (u, _) = initial_condition_raw(
        &InitialCondition::RandomSpectrum {
            decay_p: 3.0,
            amplitude: 1.0,
            seed,
        },
        grid,
    )
    .expect("valid parameters");
    u
}

/// The randomized operator-identity suite (Plancherel, the gradient norm
/// identity, sharp truncation properties, Leray projector algebra,
/// commutation of the diagonal operators).
pub fn operator_checks(grid: GridSpec, seed: u64, s: f64, k_extra: f64) -> Vec<CheckRow> {
    let case = format!("dim{}_n{}_seed{}", grid.dim(), grid.n(), seed);
    let mut rows = Vec::new();
    let f = random_scalar(grid, seed);
    let u = random_velocity(grid, seed ^ 0xabcdef);

    // Plancherel: grid quadrature L² equals the weighted coefficient sum.
    let plancherel = rel_diff(lebesgue_norm(&f, 2.0).unwrap(), sobolev_norm(&f, 0.0, false));
    rows.push(CheckRow::new(&case, "plancherel_rel", plancherel, 1e-12));

    // ‖∇f‖_{Ḣ^{s−1}} = ‖f‖_{Ḣ^s} (mean-zero draws).
    let grad = gradient(&f);
    let lhs = {
        let sq: Vec<f64> = grad
            .components()
            .iter()
            .map(|c| sobolev_norm(c, s - 1.0, true).powi(2))
            .collect();
        crate::util::pairwise_sum(&sq).sqrt()
    };
    rows.push(CheckRow::new(
        &case,
        "grad_homogeneous_identity_rel",
        rel_diff(lhs, sobolev_norm(&f, s, true)),
        1e-12,
    ));
    let inhom = {
        let sq: Vec<f64> = grad
            .components()
            .iter()
            .map(|c| sobolev_norm(c, s - 1.0, false).powi(2))
            .collect();
        crate::util::pairwise_sum(&sq).sqrt()
    };
    let dominance = (inhom - sobolev_norm(&f, s, false)).max(0.0);
    rows.push(CheckRow::new(&case, "grad_inhomogeneous_dominated", dominance, 0.0));

    // Truncation properties in sharp mode-by-mode form.
    let r_small = TruncationRadius::new((grid.n() / 4) as f64, &grid).unwrap();
    let r_big = TruncationRadius::new((grid.n() / 3) as f64, &grid).unwrap();
    let sf = truncate(&f, r_small);
    rows.push(CheckRow::new(
        &case,
        "truncation_nonexpansive",
        (sobolev_norm(&sf, s, false) - sobolev_norm(&f, s, false)).max(0.0),
        0.0,
    ));
    let tail = sobolev_norm(&sf.sub(&f), s, false);
    let bound = sobolev_norm(&f, s + k_extra, false);
    rows.push(CheckRow::new(
        &case,
        "truncation_decay_sharp",
        (tail * r_small.value().powf(k_extra) - bound).max(0.0) / bound.max(1e-300),
        1e-13,
    ));
    let diff = truncate(&f, r_small).sub(&truncate(&f, r_big));
    let pair_tail = sobolev_norm(&diff, s, false);
    rows.push(CheckRow::new(
        &case,
        "truncation_pair_sharp",
        (pair_tail * r_small.value().powf(k_extra) - bound).max(0.0) / bound.max(1e-300),
        1e-13,
    ));

    // Leray algebra on a non-solenoidal perturbation.
    let mut v = u.clone();
    v.axpy(0.7, &gradient(&f));
    let pv = leray_project(&v);
    let ppv = leray_project(&pv);
    let scale = pv.max_coeff_norm().max(1e-300);
    let idem = (0..grid.dim())
        .map(|a| {
            pv.component(a)
                .coeffs()
                .iter()
                .zip(ppv.component(a).coeffs())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    rows.push(CheckRow::new(&case, "leray_idempotent", idem / scale, 1e-14));
    let mut residual = v.clone();
    residual.axpy(-1.0, &pv);
    let inner: f64 = (0..grid.dim())
        .map(|a| crate::analysis::diagnostics::l2_inner(pv.component(a), residual.component(a)))
        .sum();
    let l2v = l2_norm_vector(&v);
    rows.push(CheckRow::new(
        &case,
        "leray_orthogonal",
        inner.abs() / (l2v * l2v).max(1e-300),
        1e-12,
    ));
    rows.push(CheckRow::new(
        &case,
        "leray_divergence_free",
        pv.divergence_residual() / scale,
        1e-12,
    ));
    rows.push(CheckRow::new(
        &case,
        "leray_nonexpansive",
        (l2_norm_vector(&pv) - l2v).max(0.0),
        0.0,
    ));

    // S_R commutes with the diagonal operators and with the projector.
    let j = Multiplier::Bessel(s);
    let a = truncate(&apply_multiplier(&f, j), r_small);
    let b = apply_multiplier(&truncate(&f, r_small), j);
    let comm = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    rows.push(CheckRow::new(
        &case,
        "truncation_commutes_bessel",
        comm / f.max_coeff_norm().max(1e-300),
        1e-14,
    ));
    let pa = truncate_vector(&leray_project(&v), r_small);
    let pb = leray_project(&truncate_vector(&v, r_small));
    let comm2 = (0..grid.dim())
        .map(|axis| {
            pa.component(axis)
                .coeffs()
                .iter()
                .zip(pb.component(axis).coeffs())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    rows.push(CheckRow::new(
        &case,
        "truncation_commutes_leray",
        comm2 / v.max_coeff_norm().max(1e-300),
        1e-14,
    ));

    rows
}

fn checks_csv(rows: &[CheckRow]) -> String {
    let mut out = String::from("case,check,value,tol,pass\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.case,
            r.check,
            fmt_f64(r.value),
            fmt_f64(r.tol),
            r.pass
        );
    }
    out
}

/// `bsq selftest`: deterministic desk-scale property battery; identical
/// invocations produce byte-identical artifacts.
pub fn cmd_selftest(out_dir: &Path) -> Result<CommandOutcome> {
    let out = OutputDir::create(out_dir)?;
    let mut summary = Summary::default();

    // 1. operator identities on seeded random fields, 2-D and 3-D
    let mut rows = Vec::new();
    for seed in [1u64, 2, 3, 4] {
        rows.extend(operator_checks(GridSpec::new(2, 16).unwrap(), seed, 2.0, 2.0));
    }
    for seed in [5u64, 6] {
        rows.extend(operator_checks(GridSpec::new(3, 8).unwrap(), seed, 2.0, 1.0));
    }
    out.write_atomic("selftest_operators.csv", checks_csv(&rows).as_bytes())?;
    summary.check(
        rows.iter().all(|r| r.pass),
        format!("operator_identities {}/{} checks", rows.iter().filter(|r| r.pass).count(), rows.len()),
    );

    // 2. ideal-system conservation micro-run
    {
        let grid = GridSpec::new(2, 32).unwrap();
        let radius = TruncationRadius::new(10.0, &grid).unwrap();
        let spec = SystemSpec::new(grid, 0.0, 0.0, Forcing::Zero, radius, 2.5)?;
        let state = crate::dynamics::make_initial(
            &InitialCondition::RandomSpectrum {
                decay_p: 4.0,
                amplitude: 1.0,
                seed: 12,
            },
            grid,
            radius,
        )?;
        let stepper = StepperConfig::new(Scheme::Rk4, DtPolicy::Fixed(5e-3), 0.5, 0.1)?;
        let opts = RunOptions::new(0.2, 10, 5);
        let traj = run(state, &spec, &stepper, &opts, &mut [])?;
        let first = traj.records.first().unwrap();
        let last = traj.records.last().unwrap();
        let u_drift = (last.u_l2 - first.u_l2).abs() / first.u_l2;
        let theta_drift = (last.theta_l2 - first.theta_l2).abs() / first.theta_l2;
        out.write_atomic("selftest_conservation.csv", timeseries_csv(&traj).as_bytes())?;
        summary.check(u_drift <= 1e-8, format!("ideal_u_l2_conserved drift={u_drift:.3e}"));
        summary.check(
            theta_drift <= 1e-8,
            format!("ideal_theta_l2_conserved drift={theta_drift:.3e}"),
        );
    }

    // 3. integrating-factor exactness on pure diffusion
    {
        let grid = GridSpec::new(2, 16).unwrap();
        let radius = TruncationRadius::new(5.0, &grid).unwrap();
        let kappa = 0.8;
        let spec = SystemSpec::new(grid, 0.0, kappa, Forcing::Zero, radius, 2.5)?;
        let theta = truncate(&field_from_fn(grid, |x| (2.0 * x[0]).cos()), radius);
        let state = State::new(VectorField::zeros(grid), theta, 0.0)?;
        let stepper = StepperConfig::new(Scheme::Rk4IntegratingFactor, DtPolicy::Fixed(0.05), 0.5, 0.1)?;
        let next = crate::dynamics::step(&state, &spec, &stepper, 0.05)?;
        let exact = 0.5 * (-kappa * 4.0 * 0.05f64).exp();
        let err = (next.theta.coeff([2, 0, 0]).re - exact).abs() / exact;
        summary.check(err <= 1e-14, format!("integrating_factor_exact rel_err={err:.3e}"));
    }

    // 4. probe determinism at desk scale
    {
        let ensemble = EnsembleSpec::new(GridSpec::new(2, 16).unwrap(), 2.0, PROBE_SEEDS[..8].to_vec());
        let a = inequality_probe(ProbeKind::KatoPonce, &ensemble)?;
        let b = inequality_probe(ProbeKind::KatoPonce, &ensemble)?;
        out.write_atomic("selftest_probe_kp.csv", a.to_csv().as_bytes())?;
        summary.check(a.to_csv() == b.to_csv(), "probe_rerun_bit_identical");
    }

    // 5. linear-diffusion Cauchy control: with u₀ = 0 and f = 0 the flow
    // stays at rest and θ obeys the heat equation, so the sup-in-time L²
    // difference between two radii is the t = 0 tail of θ₀ between the
    // truncation balls, computable per mode.
    {
        let grid = GridSpec::new(2, 32).unwrap();
        let ic = InitialCondition::RandomTheta {
            decay_p: 3.0,
            amplitude: 1.0,
            seed: 77,
        };
        let setup = StudySetup {
            grid,
            nu: 0.0,
            kappa: 0.05,
            forcing: Forcing::Zero,
            s: 2.5,
            ic: ic.clone(),
            dt: 0.01,
            t_end: 0.1,
            record_every: 2,
            bmo_depth: 4,
            scheme: Scheme::Rk4IntegratingFactor,
            s_primes: vec![1.0],
        };
        let (r_lo, r_hi) = (5.0, 8.0);
        let result = truncation_convergence_study(&setup, &[r_lo], r_hi)?;
        let raw = initial_condition_raw(&ic, grid)?;
        let tail = {
            let lo = TruncationRadius::new(r_lo, &grid).unwrap();
            let hi = TruncationRadius::new(r_hi, &grid).unwrap();
            let coeffs = raw.1.coeffs();
            let sum = pairwise_sum_by(coeffs.len(), |flat| {
                let ksq = grid.k_squared(flat);
                if hi.contains(ksq) && !lo.contains(ksq) {
                    coeffs[flat].norm_sqr()
                } else {
                    0.0
                }
            });
            (grid.volume() * sum).sqrt()
        };
        let gap = (result.y_vs_ref[0] - tail).abs();
        summary.check(
            gap <= 1e-10 * tail.max(1.0),
            format!("cauchy_linear_control_closed_form gap={gap:.3e}"),
        );
    }

    out.write_atomic("summary.txt", summary.render().as_bytes())?;
    Ok(CommandOutcome {
        status: if summary.all_pass() { ExitStatus::Ok } else { ExitStatus::InvariantFailure },
        message: format!("selftest -> {}\n{}", out_dir.display(), summary.render()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use tempfile::tempdir;

    #[test]
    fn selftest_is_deterministic() {
        let dir = tempdir().unwrap();
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        let ra = cmd_selftest(&a).unwrap();
        let rb = cmd_selftest(&b).unwrap();
        assert_eq!(ra.status.code(), rb.status.code());
        for name in [
            "selftest_operators.csv",
            "selftest_conservation.csv",
            "selftest_probe_kp.csv",
            "summary.txt",
        ] {
            let ba = std::fs::read(a.join(name)).unwrap();
            let bb = std::fs::read(b.join(name)).unwrap();
            assert_eq!(ba, bb, "{name} differs between reruns");
        }
    }

    #[test]
    fn run_command_emits_artifacts() {
        let dir = tempdir().unwrap();
        let out = dir.path().join("run");
        let text = format!(
            "grid.n = 32\nR = 10\ndt = 0.02\nt_end = 0.1\noutput.dir = {}\n",
            out.display()
        );
        let cfg = parse_config(&text).unwrap();
        let outcome = cmd_run(&cfg).unwrap();
        assert_eq!(outcome.status.code(), 0, "{}", outcome.message);
        for name in ["resolved_config.txt", "timeseries.csv", "u0.bsq", "u1.bsq", "theta.bsq", "summary.txt"] {
            assert!(out.join(name).exists(), "{name} missing");
        }
        let report = cmd_report(&out).unwrap();
        assert!(report.message.contains("I_BKM"), "{}", report.message);
    }

    #[test]
    fn zero_step_run_has_single_csv_row() {
        let dir = tempdir().unwrap();
        let out = dir.path().join("zero");
        let text = format!("grid.n = 32\nR = 10\nt_end = 0\noutput.dir = {}\n", out.display());
        let cfg = parse_config(&text).unwrap();
        let outcome = cmd_run(&cfg).unwrap();
        assert_eq!(outcome.status.code(), 0);
        let csv = std::fs::read_to_string(out.join("timeseries.csv")).unwrap();
        assert_eq!(csv.lines().count(), 2); // header + t=0 row
    }
}
