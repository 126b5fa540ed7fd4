//! Initial-condition constructors; the state handed to the integrator is
//! always S_R ∘ Leray of the raw data, mirroring the truncated initial data
//! of the model.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fft::field_from_fn;
use crate::field::{SpectralField, VectorField};
use crate::grid::{GridSpec, MAX_DIM};
use crate::spectral::{leray_project, truncate, truncate_vector, TruncationRadius};

use super::State;

#[derive(Debug, Clone)]
pub enum InitialCondition {
    /// 2-D: u = (−cos x sin y, sin x cos y); 3-D Taylor–Green vortex. θ = cos x.
    TaylorGreen,
    /// One velocity mode (tangential polarization) and one θ mode at `k`.
    SingleMode { k: [i64; MAX_DIM], amplitude: f64 },
    /// |û(k)| ∝ amplitude·|k|^{−decay_p} with seeded random phases, filled on
    /// the whole dealias band.
    RandomSpectrum { decay_p: f64, amplitude: f64, seed: u64 },
    /// Zero velocity with a random-spectrum temperature; with zero forcing
    /// the flow stays at rest and θ obeys the pure heat equation.
    RandomTheta { decay_p: f64, amplitude: f64, seed: u64 },
}

/// Raw (pre-truncation) initial data.
pub fn initial_condition_raw(
    kind: &InitialCondition,
    grid: GridSpec,
) -> Result<(VectorField, SpectralField)> {
    match kind {
        InitialCondition::TaylorGreen => Ok(taylor_green(grid)),
        InitialCondition::SingleMode { k, amplitude } => single_mode(grid, *k, *amplitude),
        InitialCondition::RandomSpectrum {
            decay_p,
            amplitude,
            seed,
        } => random_spectrum(grid, *decay_p, *amplitude, *seed),
        InitialCondition::RandomTheta {
            decay_p,
            amplitude,
            seed,
        } => {
            let (_, theta) = random_spectrum(grid, *decay_p, *amplitude, *seed)?;
            Ok((VectorField::zeros(grid), theta))
        }
    }
}

/// Truncated, projected initial state at t = 0.
pub fn make_initial(kind: &InitialCondition, grid: GridSpec, radius: TruncationRadius) -> Result<State> {
    let (u_raw, theta_raw) = initial_condition_raw(kind, grid)?;
    let u = truncate_vector(&leray_project(&u_raw), radius);
    let theta = truncate(&theta_raw, radius);
    State::new(u, theta, 0.0)
}

fn taylor_green(grid: GridSpec) -> (VectorField, SpectralField) {
    let u = match grid.dim() {
        2 => VectorField::from_components(vec![
            field_from_fn(grid, |x| -x[0].cos() * x[1].sin()),
            field_from_fn(grid, |x| x[0].sin() * x[1].cos()),
        ]),
        _ => VectorField::from_components(vec![
            field_from_fn(grid, |x| x[0].cos() * x[1].sin() * x[2].sin()),
            field_from_fn(grid, |x| -x[0].sin() * x[1].cos() * x[2].sin()),
            field_from_fn(grid, |_| 0.0),
        ]),
    }
    .expect("component count matches dim");
    let theta = field_from_fn(grid, |x| x[0].cos());
    (u, theta)
}

/// Deterministic unit tangent to k (2-D: rotate; 3-D: cross with the axis
/// least aligned with k).
fn tangent(dim: usize, k: [i64; MAX_DIM]) -> [f64; MAX_DIM] {
    let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
    if dim == 2 {
        let norm = (kf[0] * kf[0] + kf[1] * kf[1]).sqrt();
        return [-kf[1] / norm, kf[0] / norm, 0.0];
    }
    let axis = (0..3).min_by_key(|&a| k[a].abs()).unwrap();
    let mut e = [0.0; MAX_DIM];
    e[axis] = 1.0;
    let cross = [
        kf[1] * e[2] - kf[2] * e[1],
        kf[2] * e[0] - kf[0] * e[2],
        kf[0] * e[1] - kf[1] * e[0],
    ];
    let norm = cross.iter().map(|c| c * c).sum::<f64>().sqrt();
    [cross[0] / norm, cross[1] / norm, cross[2] / norm]
}

fn single_mode(grid: GridSpec, k: [i64; MAX_DIM], amplitude: f64) -> Result<(VectorField, SpectralField)> {
    let dim = grid.dim();
    if k[dim..].iter().any(|&ki| ki != 0) {
        return Err(Error::Config("mode has components beyond the grid dimension".into()));
    }
    let ksq: i64 = k.iter().map(|ki| ki * ki).sum();
    if ksq == 0 {
        return Err(Error::Config("single-mode initial data needs k != 0".into()));
    }
    let half = grid.n() as i64 / 2;
    if k.iter().any(|ki| *ki < -half || *ki >= half) {
        return Err(Error::Config(format!("mode {k:?} is outside the resolved lattice")));
    }
    let t = tangent(dim, k);
    let mut u = VectorField::zeros(grid);
    for a in 0..dim {
        let c = Complex64::new(0.5 * amplitude * t[a], 0.0);
        u.component_mut(a).set_coeff(k, c);
        u.component_mut(a).set_coeff([-k[0], -k[1], -k[2]], c.conj());
    }
    let mut theta = SpectralField::zeros(grid);
    theta.set_coeff(k, Complex64::new(0.5 * amplitude, 0.0));
    theta.set_coeff([-k[0], -k[1], -k[2]], Complex64::new(0.5 * amplitude, 0.0));
    Ok((u, theta))
}

fn random_spectrum(
    grid: GridSpec,
    decay_p: f64,
    amplitude: f64,
    seed: u64,
) -> Result<(VectorField, SpectralField)> {
    if decay_p <= 0.0 {
        return Err(Error::Config(format!("decay_p must be positive, got {decay_p}")));
    }
    let dim = grid.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = VectorField::zeros(grid);
    let mut theta = SpectralField::zeros(grid);

    // Fill canonical representatives (flat < conjugate index) inside the
    // dealias band; the conjugate mode mirrors them so fields stay real.
    for flat in 0..grid.num_points() {
        let k = grid.wavevector(flat);
        let ksq = grid.k_squared(flat);
        if ksq == 0 || !grid.in_dealias_band(&k) {
            continue;
        }
        let conj_at = grid.conjugate_index(flat);
        if conj_at <= flat {
            continue;
        }
        let target = amplitude * (ksq as f64).powf(-decay_p / 2.0);

        // Velocity: random complex vector, projected tangentially to k.
        let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
        let mut v = [Complex64::ZERO; MAX_DIM];
        for va in v.iter_mut().take(dim) {
            *va = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        }
        let dot: Complex64 = (0..dim).map(|a| kf[a] * v[a]).sum();
        for a in 0..dim {
            v[a] -= kf[a] * dot / ksq as f64;
        }
        let norm = (0..dim).map(|a| v[a].norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for (a, va) in v.iter().enumerate().take(dim) {
                let c = va * (target / norm);
                u.component_mut(a).coeffs_mut()[flat] = c;
                u.component_mut(a).coeffs_mut()[conj_at] = c.conj();
            }
        }

        let phase = rng.random::<f64>() * std::f64::consts::TAU;
        let c = Complex64::from_polar(target, phase);
        theta.coeffs_mut()[flat] = c;
        theta.coeffs_mut()[conj_at] = c.conj();
    }
    Ok((u, theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::l2_norm_vector;
    use crate::util::ls_slope;

    #[test]
    fn taylor_green_is_divergence_free() {
        for grid in [GridSpec::new(2, 32).unwrap(), GridSpec::new(3, 16).unwrap()] {
            let r = TruncationRadius::new((grid.n() / 3) as f64, &grid).unwrap();
            let state = make_initial(&InitialCondition::TaylorGreen, grid, r).unwrap();
            assert!(state.u.is_divergence_free(1e-13));
            assert!(l2_norm_vector(&state.u) > 0.0);
            assert_eq!(state.t, 0.0);
        }
    }

    #[test]
    fn taylor_green_matches_closed_form() {
        let grid = GridSpec::new(2, 32).unwrap();
        let r = TruncationRadius::new(8.0, &grid).unwrap();
        let state = make_initial(&InitialCondition::TaylorGreen, grid, r).unwrap();
        let u0 = crate::fft::inverse(state.u.component(0));
        for flat in (0..grid.num_points()).step_by(17) {
            let x = grid.coords(flat);
            assert!((u0[flat] - (-x[0].cos() * x[1].sin())).abs() < 1e-12);
        }
    }

    #[test]
    fn single_mode_is_truncation_invariant() {
        let grid = GridSpec::new(2, 32).unwrap();
        let r = TruncationRadius::new(8.0, &grid).unwrap();
        let kind = InitialCondition::SingleMode {
            k: [2, 1, 0],
            amplitude: 0.7,
        };
        let state = make_initial(&kind, grid, r).unwrap();
        let again_u = truncate_vector(&state.u, r);
        let again_t = truncate(&state.theta, r);
        for a in 0..2 {
            for (x, y) in state.u.component(a).coeffs().iter().zip(again_u.component(a).coeffs()) {
                assert!((x - y).norm() == 0.0);
            }
        }
        for (x, y) in state.theta.coeffs().iter().zip(again_t.coeffs()) {
            assert!((x - y).norm() == 0.0);
        }
        assert!(state.u.is_divergence_free(1e-13));
    }

    #[test]
    fn random_spectrum_is_deterministic_and_decays() {
        let grid = GridSpec::new(2, 64).unwrap();
        let kind = InitialCondition::RandomSpectrum {
            decay_p: 4.0,
            amplitude: 1.0,
            seed: 7,
        };
        let (u1, t1) = initial_condition_raw(&kind, grid).unwrap();
        let (u2, _) = initial_condition_raw(&kind, grid).unwrap();
        for a in 0..2 {
            for (x, y) in u1.component(a).coeffs().iter().zip(u2.component(a).coeffs()) {
                assert!(x == y);
            }
        }
        assert!(u1.is_divergence_free(1e-12));
        assert!(t1.hermitian_residual() == 0.0);

        // shell-averaged |û| against |k|: slope ≈ −decay_p
        let mut shells: Vec<(f64, f64, usize)> = vec![(0.0, 0.0, 0); 22];
        for flat in 0..grid.num_points() {
            let ksq = grid.k_squared(flat);
            let kn = (ksq as f64).sqrt();
            let m = kn.round() as usize;
            if m >= 2 && m < shells.len() {
                let mag = (0..2)
                    .map(|a| u1.component(a).coeffs()[flat].norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                shells[m].0 += mag;
                shells[m].2 += 1;
            }
        }
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (m, (sum, _, count)) in shells.iter().enumerate() {
            if *count > 0 {
                xs.push((m as f64).ln());
                ys.push((sum / *count as f64).ln());
            }
        }
        let slope = ls_slope(&xs, &ys);
        assert!(
            (slope + 4.0).abs() < 0.2,
            "shell decay slope {slope} not within 0.2 of -4"
        );
    }

    #[test]
    fn single_mode_rejects_bad_modes() {
        let grid = GridSpec::new(2, 16).unwrap();
        assert!(single_mode(grid, [0, 0, 0], 1.0).is_err());
        assert!(single_mode(grid, [0, 0, 3], 1.0).is_err());
        assert!(single_mode(grid, [9, 0, 0], 1.0).is_err());
    }
}
