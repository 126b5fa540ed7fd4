//! Cauchy-in-R study: run the same initial data under different truncation
//! radii with a fixed time step and measure sup-in-time L² differences, then
//! fit the decay rate and lift it to H^{s'} via lattice interpolation.

use std::collections::BTreeMap;

use crate::dynamics::{
    initial_condition_raw, run, DtPolicy, Forcing, InitialCondition, RunOptions, Scheme, State,
    StateHistory, StepperConfig, SystemSpec,
};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::norms::{l2_norm, l2_norm_vector, sobolev_norm, sobolev_norm_vector};
use crate::spectral::{leray_project, truncate, truncate_vector, TruncationRadius};
use crate::util::ls_slope;

/// Everything a convergence study needs besides the radii.
#[derive(Debug, Clone)]
pub struct StudySetup {
    pub grid: GridSpec,
    pub nu: f64,
    pub kappa: f64,
    pub forcing: Forcing,
    pub s: f64,
    pub ic: InitialCondition,
    /// Fixed step; CFL-adaptive stepping would confound the R comparison.
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub bmo_depth: usize,
    pub scheme: Scheme,
    /// Interpolation exponents 0 < s' < s for the lifted differences.
    pub s_primes: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ConvergenceStudyResult {
    pub r_list: Vec<f64>,
    pub r_ref: f64,
    /// Y(R, R_ref) per entry of `r_list`.
    pub y_vs_ref: Vec<f64>,
    /// Pairwise Y over r_list ∪ {r_ref} (last row/column is the reference).
    pub y_pairwise: Vec<Vec<f64>>,
    /// Fitted decay exponent: log Y ≈ −ε̂ log R + c.
    pub eps_hat: f64,
    /// Max of ‖u‖_{H^s}, ‖θ‖_{H^s} over the reference run.
    pub m_ref: f64,
    /// Per s': lifted H^{s'} bounds Y^{1−s'/s}(2M)^{s'/s} per r_list entry.
    pub lifted: Vec<(f64, Vec<f64>)>,
    /// Lattice interpolation inequality held on every record of every pair.
    pub interpolation_ok: bool,
    pub record_times: Vec<f64>,
}

fn run_one(setup: &StudySetup, raw: &(crate::VectorField, crate::SpectralField), r: f64) -> Result<StateHistory> {
    let radius = TruncationRadius::new(r, &setup.grid)?;
    let spec = SystemSpec::new(
        setup.grid,
        setup.nu,
        setup.kappa,
        setup.forcing.clone(),
        radius,
        setup.s,
    )?;
    let u = truncate_vector(&leray_project(&raw.0), radius);
    let theta = truncate(&raw.1, radius);
    let state = State::new(u, theta, 0.0)?;
    let stepper = StepperConfig::new(
        setup.scheme,
        DtPolicy::Fixed(setup.dt),
        0.5,
        setup.dt.max(0.1),
    )?;
    let opts = RunOptions::new(setup.t_end, setup.record_every, setup.bmo_depth);
    let mut hist = StateHistory::default();
    let traj = run(state, &spec, &stepper, &opts, &mut [&mut hist])?;
    if traj.flagged() {
        return Err(Error::Report(format!(
            "study run at R = {r} hit the blow-up signal"
        )));
    }
    Ok(hist)
}

/// sup over shared record times of ‖u−u'‖_{L²} + ‖θ−θ'‖_{L²}.
fn sup_l2_difference(a: &StateHistory, b: &StateHistory) -> f64 {
    a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| l2_norm_vector(&x.u.sub(&y.u)) + l2_norm(&x.theta.sub(&y.theta)))
        .fold(0.0, f64::max)
}

pub fn truncation_convergence_study(
    setup: &StudySetup,
    r_list: &[f64],
    r_ref: f64,
) -> Result<ConvergenceStudyResult> {
    if r_list.is_empty() {
        return Err(Error::Config("empty radius list".into()));
    }
    if !(setup.dt > 0.0) {
        return Err(Error::Config("study requires a fixed dt > 0".into()));
    }
    for &r in r_list.iter().chain([&r_ref]) {
        if 3.0 * r > setup.grid.n() as f64 {
            return Err(Error::Config(format!(
                "radius {r} exceeds the dealias band of n = {}",
                setup.grid.n()
            )));
        }
        if r > r_ref {
            return Err(Error::Config(format!(
                "radius {r} exceeds the reference {r_ref}"
            )));
        }
    }
    for &sp in &setup.s_primes {
        if !(sp > 0.0 && sp < setup.s) {
            return Err(Error::Config(format!(
                "interpolation exponent {sp} must lie in (0, {})",
                setup.s
            )));
        }
    }

    // Identical pre-truncation data for every run.
    let raw = initial_condition_raw(&setup.ic, setup.grid)?;

    // One run per distinct radius.
    let mut all_r: Vec<f64> = r_list.to_vec();
    all_r.push(r_ref);
    let mut runs: BTreeMap<u64, StateHistory> = BTreeMap::new();
    for &r in &all_r {
        runs.entry(r.to_bits()).or_insert(run_one(setup, &raw, r)?);
    }

    let times: Vec<f64> = runs[&r_ref.to_bits()].states.iter().map(|s| s.t).collect();
    for hist in runs.values() {
        if hist.states.len() != times.len() {
            return Err(Error::Report("record times differ between study runs".into()));
        }
    }

    let m_ref = runs[&r_ref.to_bits()]
        .states
        .iter()
        .map(|st| {
            sobolev_norm_vector(&st.u, setup.s, false).max(sobolev_norm(&st.theta, setup.s, false))
        })
        .fold(0.0, f64::max);

    let y_pairwise: Vec<Vec<f64>> = all_r
        .iter()
        .map(|ra| {
            all_r
                .iter()
                .map(|rb| {
                    if ra == rb {
                        0.0
                    } else {
                        sup_l2_difference(&runs[&ra.to_bits()], &runs[&rb.to_bits()])
                    }
                })
                .collect()
        })
        .collect();
    let y_vs_ref: Vec<f64> = r_list
        .iter()
        .map(|r| {
            if *r == r_ref {
                0.0
            } else {
                sup_l2_difference(&runs[&r.to_bits()], &runs[&r_ref.to_bits()])
            }
        })
        .collect();

    // Fit −ε̂ on the entries strictly below the reference with nonzero Y.
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (r, y) in r_list.iter().zip(&y_vs_ref) {
        if *r < r_ref && *y > 0.0 {
            xs.push(r.ln());
            ys.push(y.ln());
        }
    }
    let eps_hat = if xs.len() >= 2 { -ls_slope(&xs, &ys) } else { f64::NAN };

    // Interpolation lift: bound in H^{s'} and verify the lattice inequality
    // per record on every (R, ref) pair.
    let mut interpolation_ok = true;
    for (&r, y) in r_list.iter().zip(&y_vs_ref) {
        if r == r_ref || *y == 0.0 {
            continue;
        }
        let ha = &runs[&r.to_bits()];
        let hb = &runs[&r_ref.to_bits()];
        for (xa, xb) in ha.states.iter().zip(&hb.states) {
            let du = xa.u.sub(&xb.u);
            let dth = xa.theta.sub(&xb.theta);
            for &sp in &setup.s_primes {
                let frac = sp / setup.s;
                let lhs = sobolev_norm_vector(&du, sp, false) + sobolev_norm(&dth, sp, false);
                let l2 = l2_norm_vector(&du) + l2_norm(&dth);
                let hs = sobolev_norm_vector(&du, setup.s, false) + sobolev_norm(&dth, setup.s, false);
                let rhs = l2.powf(1.0 - frac) * hs.powf(frac);
                // the summed norms inherit the constant-1 bound by discrete
                // Hölder; allow round-off slack only
                if lhs > rhs * (1.0 + 1e-10) && l2 > 0.0 {
                    interpolation_ok = false;
                }
            }
        }
    }
    let lifted: Vec<(f64, Vec<f64>)> = setup
        .s_primes
        .iter()
        .map(|&sp| {
            let frac = sp / setup.s;
            let bounds = y_vs_ref
                .iter()
                .map(|y| y.powf(1.0 - frac) * (2.0 * m_ref).powf(frac))
                .collect();
            (sp, bounds)
        })
        .collect();

    Ok(ConvergenceStudyResult {
        r_list: r_list.to_vec(),
        r_ref,
        y_vs_ref,
        y_pairwise,
        eps_hat,
        m_ref,
        lifted,
        interpolation_ok,
        record_times: times,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_setup() -> StudySetup {
        StudySetup {
            grid: GridSpec::new(2, 32).unwrap(),
            nu: 0.02,
            kappa: 0.0,
            forcing: Forcing::UnitLastAxis,
            s: 2.0,
            ic: InitialCondition::RandomSpectrum {
                decay_p: 4.0,
                amplitude: 1.0,
                seed: 42,
            },
            dt: 0.01,
            t_end: 0.1,
            record_every: 2,
            bmo_depth: 3,
            scheme: Scheme::Rk4IntegratingFactor,
            s_primes: vec![1.0],
        }
    }

    #[test]
    fn duplicates_give_zero_and_symmetry_holds() {
        let setup = small_setup();
        let result = truncation_convergence_study(&setup, &[4.0, 4.0, 6.0], 8.0).unwrap();
        assert_eq!(result.y_pairwise[0][1], 0.0);
        assert_eq!(result.y_vs_ref.len(), 3);
        assert_eq!(result.y_vs_ref[0], result.y_vs_ref[1]);
        let m = &result.y_pairwise;
        for i in 0..m.len() {
            assert_eq!(m[i][i], 0.0);
            for j in 0..m.len() {
                assert_eq!(m[i][j], m[j][i]);
            }
        }
        assert!(result.interpolation_ok);
    }

    #[test]
    fn rejects_radius_beyond_reference_or_band() {
        let setup = small_setup();
        assert!(truncation_convergence_study(&setup, &[9.0], 8.0).is_err());
        assert!(truncation_convergence_study(&setup, &[4.0], 100.0).is_err());
    }

    #[test]
    fn y_decreases_with_radius_on_smooth_data() {
        let setup = small_setup();
        let result = truncation_convergence_study(&setup, &[4.0, 6.0, 8.0], 10.0).unwrap();
        assert!(result.y_vs_ref[0] > result.y_vs_ref[1]);
        assert!(result.y_vs_ref[1] > result.y_vs_ref[2]);
        assert!(result.eps_hat > 0.0);
    }
}
