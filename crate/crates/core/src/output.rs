//! Deterministic output layout: lock-guarded run directories, atomic file
//! writes, timeseries CSV emission, and the pass/fail summary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::analysis::diagnostics::TIMESERIES_HEADER;
use crate::config::RunConfig;
use crate::dynamics::{State, SystemSpec, Trajectory};
use crate::error::{Error, Result};
use crate::snapshot::Snapshot;

const LOCK_NAME: &str = "bsq.lock";

/// A locked output directory; files land under their final names only via
/// atomic rename, so partially written artifacts never appear.
pub struct OutputDir {
    path: PathBuf,
    locked: bool,
}

impl OutputDir {
    /// Create (or reuse) the directory and take the single-writer lock.
    pub fn create(path: impl Into<PathBuf>) -> Result<OutputDir> {
        let path = path.into();
        fs::create_dir_all(&path).map_err(|e| Error::io(&path, e))?;
        let lock = path.join(LOCK_NAME);
        match fs::OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(_) => Ok(OutputDir { path, locked: true }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(Error::Config(format!(
                "output directory {} is locked by another run (remove {LOCK_NAME} if stale)",
                path.display()
            ))),
            Err(e) => Err(Error::io(&lock, e)),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Write bytes to `name` atomically (tmp file + rename).
    pub fn write_atomic(&self, name: &str, bytes: &[u8]) -> Result<()> {
        let tmp = self.path.join(format!(".{name}.tmp"));
        let fin = self.path.join(name);
        {
            let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
            f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
            f.sync_all().map_err(|e| Error::io(&tmp, e))?;
        }
        fs::rename(&tmp, &fin).map_err(|e| Error::io(&fin, e))
    }
}

impl Drop for OutputDir {
    fn drop(&mut self) {
        if self.locked {
            let _ = fs::remove_file(self.path.join(LOCK_NAME));
        }
    }
}

/// One pass/fail line of `summary.txt`.
#[derive(Debug, Clone)]
pub struct SummaryLine {
    pub pass: bool,
    pub text: String,
}

#[derive(Debug, Clone, Default)]
pub struct Summary {
    pub lines: Vec<SummaryLine>,
    pub blowup_t: Option<f64>,
}

impl Summary {
    pub fn check(&mut self, pass: bool, text: impl Into<String>) {
        self.lines.push(SummaryLine { pass, text: text.into() });
    }

    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(if line.pass { "PASS " } else { "FAIL " });
            out.push_str(&line.text);
            out.push('\n');
        }
        if let Some(t) = self.blowup_t {
            out.push_str(&format!("BLOWUP_SIGNAL t={t}\n"));
        }
        out
    }
}

pub fn timeseries_csv(traj: &Trajectory) -> String {
    let mut csv = String::with_capacity(128 * (traj.records.len() + 1));
    csv.push_str(TIMESERIES_HEADER);
    csv.push('\n');
    for rec in &traj.records {
        csv.push_str(&rec.to_csv_row());
        csv.push('\n');
    }
    csv
}

fn state_snapshot_files(state: &State) -> Vec<(String, Snapshot)> {
    let mut files = Vec::new();
    for (a, comp) in state.u.components().iter().enumerate() {
        files.push((format!("u{a}.bsq"), Snapshot::from_field(comp, state.t)));
    }
    files.push(("theta.bsq".into(), Snapshot::from_field(&state.theta, state.t)));
    files
}

/// Reload a state previously written by [`emit_run_outputs`].
pub fn load_state_snapshots(dir: &Path, dim: usize) -> Result<State> {
    let mut comps = Vec::with_capacity(dim);
    let mut time = 0.0;
    for a in 0..dim {
        let snap = Snapshot::read(&dir.join(format!("u{a}.bsq")))?;
        time = snap.time;
        comps.push(snap.to_field()?);
    }
    let theta_snap = Snapshot::read(&dir.join("theta.bsq"))?;
    let theta = theta_snap.to_field()?;
    let u = crate::field::VectorField::from_components(comps)?;
    State::new(u, theta, time)
}

/// Post-run invariant checks over the trajectory and final state.
pub fn run_invariant_summary(traj: &Trajectory, spec: &SystemSpec) -> Summary {
    let mut summary = Summary::default();
    let state = &traj.final_state;

    let div = if state.u.max_coeff_norm() == 0.0 {
        0.0
    } else {
        state.u.divergence_residual() / state.u.max_coeff_norm()
    };
    summary.check(div <= 1e-12, format!("divergence_free rel_residual={div:.3e}"));

    let band = state.band_limit_residual(spec.radius);
    summary.check(band == 0.0, format!("band_limit residual={band:.3e}"));

    if let (Some(first), Some(last)) = (traj.records.first(), traj.records.last()) {
        let monotone = traj.records.windows(2).all(|p| {
            p[1].i_bkm >= p[0].i_bkm && p[1].i_curl >= p[0].i_curl && p[1].i_linf >= p[0].i_linf
        });
        summary.check(monotone, "integrals_monotone");
        let finite = traj.records.iter().all(|r| r.flagged || r.is_finite());
        summary.check(finite, "records_finite");
        summary.check(
            first.i_bkm == 0.0 && first.i_curl == 0.0 && first.i_linf == 0.0,
            "integrals_vanish_at_t0",
        );
        let bmo_ok = traj.records.iter().all(|r| {
            r.curl_u_bmo <= 2.0 * r.curl_u_sup * (1.0 + 1e-12) + f64::MIN_POSITIVE
                && r.grad_theta_bmo <= 2.0 * r.grad_theta_sup * (1.0 + 1e-12) + f64::MIN_POSITIVE
        });
        summary.check(bmo_ok, "bmo_le_twice_linf");
        let _ = last;
    }

    if let Some(info) = &traj.blowup {
        summary.blowup_t = Some(info.t);
    }
    summary
}

/// Write the full artifact set for one completed (or flagged) run.
pub fn emit_run_outputs(
    out: &OutputDir,
    cfg: &RunConfig,
    spec: &SystemSpec,
    traj: &Trajectory,
    extra_summary: Summary,
) -> Result<Summary> {
    out.write_atomic("resolved_config.txt", cfg.serialize().as_bytes())?;
    out.write_atomic("timeseries.csv", timeseries_csv(traj).as_bytes())?;
    for (name, snap) in state_snapshot_files(&traj.final_state) {
        out.write_atomic(&name, &snap.to_bytes())?;
    }
    let mut summary = run_invariant_summary(traj, spec);
    summary.lines.extend(extra_summary.lines);
    if summary.blowup_t.is_none() {
        summary.blowup_t = extra_summary.blowup_t;
    }
    out.write_atomic("summary.txt", summary.render().as_bytes())?;
    Ok(summary)
}
