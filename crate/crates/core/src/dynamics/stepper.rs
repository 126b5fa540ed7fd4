//! Time integration: classic RK4 and RK4 with an exact integrating factor
//! for the stiff diffusion part, plus the CFL time-step rule.

use crate::error::{Error, Result};
use crate::field::{SpectralField, VectorField};
use crate::norms::vector_sup_norm;
use crate::spectral::truncate_vector;

use super::{nonlinear_rhs, rhs, State, SystemSpec, Tendency};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Rk4,
    /// RK4 on the advective part with e^{−ν|k|²dt}, e^{−κ|k|²dt} applied
    /// exactly; reduces to plain RK4 when ν = κ = 0.
    Rk4IntegratingFactor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtPolicy {
    Fixed(f64),
    /// CFL-controlled, capped at `dt_max`.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub scheme: Scheme,
    pub dt: DtPolicy,
    pub cfl_safety: f64,
    pub dt_max: f64,
}

impl StepperConfig {
    pub fn new(scheme: Scheme, dt: DtPolicy, cfl_safety: f64, dt_max: f64) -> Result<Self> {
        if let DtPolicy::Fixed(v) = dt {
            if !(v > 0.0) {
                return Err(Error::Parameter(format!("dt must be positive, got {v}")));
            }
        }
        if !(cfl_safety > 0.0 && cfl_safety <= 1.0) {
            return Err(Error::Parameter(format!(
                "cfl safety must lie in (0, 1], got {cfl_safety}"
            )));
        }
        if !(dt_max > 0.0) {
            return Err(Error::Parameter(format!("dt_max must be positive, got {dt_max}")));
        }
        Ok(StepperConfig {
            scheme,
            dt,
            cfl_safety,
            dt_max,
        })
    }

    /// Integrating factor when any dissipation is present, else plain RK4.
    pub fn auto_scheme(spec: &SystemSpec) -> Scheme {
        if spec.nu > 0.0 || spec.kappa > 0.0 {
            Scheme::Rk4IntegratingFactor
        } else {
            Scheme::Rk4
        }
    }
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            scheme: Scheme::Rk4IntegratingFactor,
            dt: DtPolicy::Auto,
            cfl_safety: 0.5,
            dt_max: 0.1,
        }
    }
}

/// CFL step: safety × min(Δx/‖u‖_∞, explicit-diffusion bound), capped at
/// `dt_max`; monotone nonincreasing in ‖u‖_∞ and equal to the cap at u = 0.
pub fn cfl_dt(state: &State, spec: &SystemSpec, stepper: &StepperConfig) -> Result<f64> {
    if !state.is_finite() {
        return Err(Error::Blowup {
            t: state.t,
            reason: "non-finite state in CFL evaluation".into(),
        });
    }
    let u_sup = vector_sup_norm(&state.u);
    let dx = state.grid().spacing();
    let mut dt = stepper.dt_max;
    if u_sup > 0.0 {
        dt = dt.min(stepper.cfl_safety * dx / u_sup);
    }
    // Explicit diffusion is only a constraint for the plain scheme; the
    // integrating factor treats it exactly. RK4's real-axis stability
    // interval is ≈ 2.79; use 2.5 for margin.
    if stepper.scheme == Scheme::Rk4 {
        let diff = spec.nu.max(spec.kappa);
        if diff > 0.0 {
            let ksq_max = spec.radius.value().powi(2);
            dt = dt.min(stepper.cfl_safety * 2.5 / (diff * ksq_max));
        }
    }
    Ok(dt)
}

/// Apply e^{−c|k|²·scale} mode-wise.
fn diffusion_factor(f: &SpectralField, c: f64, scale: f64) -> SpectralField {
    if c == 0.0 {
        return f.clone();
    }
    f.map_modes(|k, v| {
        let ksq = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        (-c * ksq * scale).exp() * v
    })
}

fn exp_state(state_u: &VectorField, theta: &SpectralField, spec: &SystemSpec, scale: f64) -> (VectorField, SpectralField) {
    let u = VectorField::from_components(
        state_u
            .components()
            .iter()
            .map(|comp| diffusion_factor(comp, spec.nu, scale))
            .collect(),
    )
    .expect("components conformant");
    let t = diffusion_factor(theta, spec.kappa, scale);
    (u, t)
}

fn exp_tendency(t: &Tendency, spec: &SystemSpec, scale: f64) -> Tendency {
    let (du, dtheta) = exp_state(&t.du, &t.dtheta, spec, scale);
    Tendency { du, dtheta }
}

fn state_plus(state: &State, tend: &Tendency, a: f64, t_new: f64) -> State {
    let mut u = state.u.clone();
    u.axpy(a, &tend.du);
    let mut theta = state.theta.clone();
    theta.axpy(a, &tend.dtheta);
    State { u, theta, t: t_new }
}

fn finalize(mut state: State, spec: &SystemSpec) -> Result<State> {
    // Hard band limit; a no-op in exact arithmetic but keeps the invariant
    // bit-exact.
    state.u = truncate_vector(&state.u, spec.radius);
    state.theta = crate::spectral::truncate(&state.theta, spec.radius);
    if !state.is_finite() {
        return Err(Error::Blowup {
            t: state.t,
            reason: "non-finite field values after step".into(),
        });
    }
    Ok(state)
}

/// Advance one step of size `dt`.
pub fn step(state: &State, spec: &SystemSpec, stepper: &StepperConfig, dt: f64) -> Result<State> {
    if !(dt > 0.0) {
        return Err(Error::Parameter(format!("step size must be positive, got {dt}")));
    }
    match stepper.scheme {
        Scheme::Rk4 => step_rk4(state, spec, dt),
        Scheme::Rk4IntegratingFactor => step_rk4_if(state, spec, dt),
    }
}

fn step_rk4(state: &State, spec: &SystemSpec, dt: f64) -> Result<State> {
    let t = state.t;
    let k1 = rhs(state, spec)?;
    let k2 = rhs(&state_plus(state, &k1, dt / 2.0, t + dt / 2.0), spec)?;
    let k3 = rhs(&state_plus(state, &k2, dt / 2.0, t + dt / 2.0), spec)?;
    let k4 = rhs(&state_plus(state, &k3, dt, t + dt), spec)?;

    let mut acc = k1;
    acc.axpy(2.0, &k2);
    acc.axpy(2.0, &k3);
    acc.axpy(1.0, &k4);
    finalize(state_plus(state, &acc, dt / 6.0, t + dt), spec)
}

/// Lawson integrating-factor RK4: classic RK4 applied to the exponentially
/// transformed variable, so the linear diffusion flow is exact.
fn step_rk4_if(state: &State, spec: &SystemSpec, dt: f64) -> Result<State> {
    let t = state.t;
    let half = dt / 2.0;

    let k1 = nonlinear_rhs(state, spec)?;

    // stage 2: E·(y + dt/2 k1)
    let s2 = {
        let y = state_plus(state, &k1, half, t + half);
        let (u, theta) = exp_state(&y.u, &y.theta, spec, half);
        State { u, theta, t: t + half }
    };
    let k2 = nonlinear_rhs(&s2, spec)?;

    // stage 3: E·y + dt/2 k2
    let s3 = {
        let (u, theta) = exp_state(&state.u, &state.theta, spec, half);
        let mut st = State { u, theta, t: t + half };
        st.u.axpy(half, &k2.du);
        st.theta.axpy(half, &k2.dtheta);
        st
    };
    let k3 = nonlinear_rhs(&s3, spec)?;

    // stage 4: E²·y + dt·E·k3
    let s4 = {
        let (u, theta) = exp_state(&state.u, &state.theta, spec, dt);
        let mut st = State { u, theta, t: t + dt };
        let ek3 = exp_tendency(&k3, spec, half);
        st.u.axpy(dt, &ek3.du);
        st.theta.axpy(dt, &ek3.dtheta);
        st
    };
    let k4 = nonlinear_rhs(&s4, spec)?;

    // y⁺ = E²y + dt/6 (E²k1 + 2E k2 + 2E k3 + k4)
    let (u, theta) = exp_state(&state.u, &state.theta, spec, dt);
    let mut out = State { u, theta, t: t + dt };
    let mut acc = exp_tendency(&k1, spec, dt);
    let ek2 = exp_tendency(&k2, spec, half);
    let ek3 = exp_tendency(&k3, spec, half);
    acc.axpy(2.0, &ek2);
    acc.axpy(2.0, &ek3);
    acc.axpy(1.0, &k4);
    out.u.axpy(dt / 6.0, &acc.du);
    out.theta.axpy(dt / 6.0, &acc.dtheta);
    finalize(out, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{make_initial, Forcing, InitialCondition};
    use crate::fft::field_from_fn;
    use crate::grid::GridSpec;
    use crate::norms::{l2_norm, l2_norm_vector};
    use crate::spectral::{truncate, TruncationRadius};

    fn viscous_spec(grid: GridSpec, nu: f64, kappa: f64) -> SystemSpec {
        let r = TruncationRadius::new((grid.n() / 3) as f64, &grid).unwrap();
        SystemSpec::new(grid, nu, kappa, Forcing::Zero, r, 2.5).unwrap()
    }

    #[test]
    fn zero_state_is_fixed_point() {
        let grid = GridSpec::new(2, 16).unwrap();
        let sp = viscous_spec(grid, 0.1, 0.2);
        let state = State::new(VectorField::zeros(grid), SpectralField::zeros(grid), 0.0).unwrap();
        let cfg = StepperConfig::default();
        let next = step(&state, &sp, &cfg, 0.01).unwrap();
        assert!(next.u.max_coeff_norm() == 0.0);
        assert!(next.theta.max_coeff_norm() == 0.0);
        assert!((next.t - 0.01).abs() < 1e-15);
    }

    #[test]
    fn pure_diffusion_integrating_factor_is_exact() {
        let grid = GridSpec::new(2, 16).unwrap();
        let kappa = 0.7;
        let sp = viscous_spec(grid, 0.0, kappa);
        let theta = truncate(&field_from_fn(grid, |x| (3.0 * x[0]).cos()), sp.radius);
        let state = State::new(VectorField::zeros(grid), theta, 0.0).unwrap();
        let dt = 0.05;
        let cfg = StepperConfig {
            scheme: Scheme::Rk4IntegratingFactor,
            ..StepperConfig::default()
        };
        let next = step(&state, &sp, &cfg, dt).unwrap();
        let exact = (-kappa * 9.0 * dt).exp() * 0.5;
        let got = next.theta.coeff([3, 0, 0]).re;
        assert!(
            (got - exact).abs() <= 1e-14 * exact.abs().max(1.0),
            "IF step {got} vs exact {exact}"
        );

        // plain RK4 has only O(dt⁵) local accuracy on the same problem
        let cfg_plain = StepperConfig {
            scheme: Scheme::Rk4,
            ..cfg
        };
        let plain = step(&state, &sp, &cfg_plain, dt).unwrap();
        let err = (plain.theta.coeff([3, 0, 0]).re - exact).abs();
        let lam = kappa * 9.0 * dt;
        assert!(err > 1e-14, "plain RK4 unexpectedly exact");
        assert!(err < lam.powi(5) / 120.0 * 0.5 * 1.1, "plain RK4 error too large: {err}");
    }

    #[test]
    fn cfl_rules() {
        let grid = GridSpec::new(2, 64).unwrap();
        let sp = viscous_spec(grid, 0.0, 0.0);
        let cfg = StepperConfig::default();

        let zero = State::new(VectorField::zeros(grid), SpectralField::zeros(grid), 0.0).unwrap();
        assert_eq!(cfl_dt(&zero, &sp, &cfg).unwrap(), cfg.dt_max);

        let tg = make_initial(&InitialCondition::TaylorGreen, grid, sp.radius).unwrap();
        let dt1 = cfl_dt(&tg, &sp, &cfg).unwrap();
        let sup = vector_sup_norm(&tg.u);
        let hand = 0.5 * grid.spacing() / sup;
        assert!((dt1 - hand).abs() <= 1e-12 * hand);

        let mut double = tg.clone();
        double.u = double.u.scaled(2.0);
        let dt2 = cfl_dt(&double, &sp, &cfg).unwrap();
        assert!((dt2 - dt1 / 2.0).abs() <= 1e-12 * dt1);
    }

    #[test]
    fn step_preserves_invariants() {
        let grid = GridSpec::new(2, 32).unwrap();
        let sp = SystemSpec::new(
            grid,
            0.01,
            0.0,
            Forcing::UnitLastAxis,
            TruncationRadius::new(10.0, &grid).unwrap(),
            2.0,
        )
        .unwrap();
        let kind = InitialCondition::RandomSpectrum {
            decay_p: 3.0,
            amplitude: 1.0,
            seed: 3,
        };
        let mut state = make_initial(&kind, grid, sp.radius).unwrap();
        let cfg = StepperConfig::default();
        let theta_mean = state.theta.mean();
        for _ in 0..5 {
            state = step(&state, &sp, &cfg, 0.01).unwrap();
        }
        assert!(state.u.is_divergence_free(1e-12));
        assert_eq!(state.band_limit_residual(sp.radius), 0.0);
        assert!((state.theta.mean() - theta_mean).norm() <= 1e-12);
        assert!(l2_norm_vector(&state.u).is_finite());
        assert!(l2_norm(&state.theta).is_finite());
    }
}
