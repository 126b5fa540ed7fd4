//! Tendencies of the truncated systems:
//!   du/dt = −S_R P[(u·∇)u] + νΔu + P[S_R(θf)],
//!   dθ/dt = −S_R[(u·∇)θ] + κΔθ,
//! with the pressure gradient eliminated by the Leray projection P and all
//! quadratic products evaluated pseudo-spectrally with 2/3 dealiasing. For
//! states band-limited to |k| ≤ R ≤ n/3 the retained coefficients equal the
//! exact Galerkin convolution.

use crate::error::{Error, Result};
use crate::fft;
use crate::field::{SpectralField, VectorField};
use crate::norms::advect;
use crate::spectral::{dealiased_product, leray_project, truncate, truncate_vector};

use super::{Forcing, State, SystemSpec};

/// Time derivative of a state.
#[derive(Debug, Clone)]
pub struct Tendency {
    pub du: VectorField,
    pub dtheta: SpectralField,
}

impl Tendency {
    pub fn scaled(&self, a: f64) -> Tendency {
        Tendency {
            du: self.du.scaled(a),
            dtheta: self.dtheta.scaled(a),
        }
    }

    pub fn axpy(&mut self, a: f64, other: &Tendency) {
        self.du.axpy(a, &other.du);
        self.dtheta.axpy(a, &other.dtheta);
    }
}

/// Buoyancy term θf as a vector field (dealiased when f varies in space).
fn buoyancy(theta: &SpectralField, forcing: &Forcing) -> Result<Option<VectorField>> {
    let grid = theta.grid();
    match forcing {
        Forcing::Zero => Ok(None),
        Forcing::UnitLastAxis => {
            let mut comps = vec![SpectralField::zeros(grid); grid.dim() - 1];
            comps.push(theta.clone());
            Ok(Some(VectorField::from_components(comps)?))
        }
        Forcing::Field(f) => {
            let comps = f
                .components()
                .iter()
                .map(|fj| dealiased_product(theta, fj))
                .collect::<Result<Vec<_>>>()?;
            Ok(Some(VectorField::from_components(comps)?))
        }
    }
}

/// Everything except the νΔu and κΔθ terms (what the integrating-factor
/// scheme treats explicitly).
pub fn nonlinear_rhs(state: &State, spec: &SystemSpec) -> Result<Tendency> {
    let grid = state.grid();
    if grid != spec.grid() {
        return Err(Error::Dimension("state grid does not match system spec".into()));
    }
    let dim = grid.dim();
    let radius = spec.radius;

    let u_phys: Vec<Vec<f64>> = state.u.components().iter().map(fft::inverse).collect();

    // −(u·∇)u + θf, projected and truncated.
    let mut du_comps = Vec::with_capacity(dim);
    for j in 0..dim {
        let adv = advect(grid, &u_phys, state.u.component(j))?;
        du_comps.push(adv.scaled(-1.0));
    }
    let mut du = VectorField::from_components(du_comps)?;
    if let Some(buoy) = buoyancy(&state.theta, &spec.forcing)? {
        du.axpy(1.0, &buoy);
    }
    let du = truncate_vector(&leray_project(&du), radius);

    let dtheta = truncate(&advect(grid, &u_phys, &state.theta)?, radius).scaled(-1.0);

    Ok(Tendency { du, dtheta })
}

/// Full tendency including the dissipative terms.
pub fn rhs(state: &State, spec: &SystemSpec) -> Result<Tendency> {
    let mut tend = nonlinear_rhs(state, spec)?;
    if spec.nu > 0.0 {
        let nu = spec.nu;
        for a in 0..state.u.dim() {
            let lap = state.u.component(a).map_modes(|k, c| {
                let ksq = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
                -nu * ksq * c
            });
            tend.du.component_mut(a).axpy(1.0, &lap);
        }
    }
    if spec.kappa > 0.0 {
        let kappa = spec.kappa;
        let lap = state.theta.map_modes(|k, c| {
            let ksq = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
            -kappa * ksq * c
        });
        tend.dtheta.axpy(1.0, &lap);
    }
    Ok(tend)
}
