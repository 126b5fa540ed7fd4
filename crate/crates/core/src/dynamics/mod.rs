//! The three truncated Boussinesq systems on the periodic box: right-hand
//! sides, time integration, CFL control, and initial-condition constructors.

mod initial;
mod rhs;
mod run;
mod stepper;

pub use initial::{initial_condition_raw, make_initial, InitialCondition};
pub use rhs::{nonlinear_rhs, rhs, Tendency};
pub use run::{run, BlowupInfo, Observer, RunOptions, StateHistory, Trajectory};
pub use stepper::{cfl_dt, step, DtPolicy, Scheme, StepperConfig};

use crate::error::{Error, Result};
use crate::field::{SpectralField, VectorField};
use crate::grid::GridSpec;
use crate::spectral::{curl, Curl, TruncationRadius};

/// Which Boussinesq system the (ν, κ) pair selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemClass {
    /// B_{ν,0}: viscous, zero thermal diffusion.
    Viscous,
    /// B_{0,κ}: inviscid, thermally diffusive.
    Inviscid,
    /// B_{0,0}: ideal.
    Ideal,
    /// B_{ν,κ}: both positive; supported as a convenience, not a core case.
    Full,
}

impl SystemClass {
    pub fn classify(nu: f64, kappa: f64) -> SystemClass {
        match (nu > 0.0, kappa > 0.0) {
            (true, false) => SystemClass::Viscous,
            (false, true) => SystemClass::Inviscid,
            (false, false) => SystemClass::Ideal,
            (true, true) => SystemClass::Full,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SystemClass::Viscous => "B_{nu,0}",
            SystemClass::Inviscid => "B_{0,kappa}",
            SystemClass::Ideal => "B_{0,0}",
            SystemClass::Full => "B_{nu,kappa}",
        }
    }

    /// Sobolev index threshold for the diagnostics norm: dim/2 for the
    /// viscous system, dim/2 + 1 for the systems without velocity dissipation.
    pub fn min_s(&self, dim: usize) -> f64 {
        match self {
            SystemClass::Viscous | SystemClass::Full => dim as f64 / 2.0,
            SystemClass::Inviscid | SystemClass::Ideal => dim as f64 / 2.0 + 1.0,
        }
    }
}

/// Buoyancy force f entering through θf.
#[derive(Debug, Clone)]
pub enum Forcing {
    Zero,
    /// The unit vector e_n = (0, ..., 0, 1).
    UnitLastAxis,
    /// A fixed (time-independent) vector field.
    Field(VectorField),
}

impl Forcing {
    /// ∇×f = 0 is the standing assumption on the force.
    pub fn is_potential(&self, rel_tol: f64) -> bool {
        match self {
            Forcing::Zero | Forcing::UnitLastAxis => true,
            Forcing::Field(f) => {
                let scale = f.max_coeff_norm();
                if scale == 0.0 {
                    return true;
                }
                let residual = match curl(f) {
                    Curl::Scalar(w) => w.max_coeff_norm(),
                    Curl::Vector(v) => v.max_coeff_norm(),
                };
                residual <= rel_tol * scale
            }
        }
    }
}

/// Physical and truncation parameters of one simulated system.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub nu: f64,
    pub kappa: f64,
    pub forcing: Forcing,
    pub radius: TruncationRadius,
    /// Sobolev index used by the diagnostics norms.
    pub s: f64,
    grid: GridSpec,
}

impl SystemSpec {
    pub fn new(
        grid: GridSpec,
        nu: f64,
        kappa: f64,
        forcing: Forcing,
        radius: TruncationRadius,
        s: f64,
    ) -> Result<Self> {
        if nu < 0.0 || kappa < 0.0 {
            return Err(Error::Config(format!(
                "viscosity and diffusivity must be >= 0, got nu={nu}, kappa={kappa}"
            )));
        }
        // Truncation ball must sit inside the dealiased band.
        if 3.0 * radius.value() > grid.n() as f64 {
            return Err(Error::Config(format!(
                "truncation radius {} exceeds the dealias band n/3 = {}",
                radius.value(),
                grid.n() as f64 / 3.0
            )));
        }
        let class = SystemClass::classify(nu, kappa);
        if s <= class.min_s(grid.dim()) {
            return Err(Error::Config(format!(
                "diagnostics index s = {s} must exceed {} for {} in {} dimensions",
                class.min_s(grid.dim()),
                class.label(),
                grid.dim()
            )));
        }
        if let Forcing::Field(f) = &forcing {
            if f.grid() != grid {
                return Err(Error::Dimension("forcing field on a different grid".into()));
            }
        }
        Ok(SystemSpec {
            nu,
            kappa,
            forcing,
            radius,
            s,
            grid,
        })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn class(&self) -> SystemClass {
        SystemClass::classify(self.nu, self.kappa)
    }
}

/// Simulation state: divergence-free velocity, temperature, current time.
#[derive(Debug, Clone)]
pub struct State {
    pub u: VectorField,
    pub theta: SpectralField,
    pub t: f64,
}

impl State {
    pub fn new(u: VectorField, theta: SpectralField, t: f64) -> Result<Self> {
        if u.grid() != theta.grid() {
            return Err(Error::Dimension("velocity and temperature grids differ".into()));
        }
        Ok(State { u, theta, t })
    }

    pub fn grid(&self) -> GridSpec {
        self.theta.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.theta.is_finite()
    }

    /// Largest coefficient magnitude outside the closed ball |k| ≤ R.
    pub fn band_limit_residual(&self, radius: TruncationRadius) -> f64 {
        let grid = self.grid();
        let mut worst: f64 = 0.0;
        for flat in 0..grid.num_points() {
            if radius.contains(grid.k_squared(flat)) {
                continue;
            }
            for comp in self.u.components() {
                worst = worst.max(comp.coeffs()[flat].norm());
            }
            worst = worst.max(self.theta.coeffs()[flat].norm());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::field_from_fn;

    #[test]
    fn classification_table() {
        assert_eq!(SystemClass::classify(0.1, 0.0), SystemClass::Viscous);
        assert_eq!(SystemClass::classify(0.0, 0.1), SystemClass::Inviscid);
        assert_eq!(SystemClass::classify(0.0, 0.0), SystemClass::Ideal);
        assert_eq!(SystemClass::classify(0.1, 0.1), SystemClass::Full);
    }

    #[test]
    fn spec_rejects_radius_outside_dealias_band() {
        let grid = GridSpec::new(2, 16).unwrap();
        let r = TruncationRadius::new(6.0, &grid).unwrap(); // 18 > 16
        assert!(SystemSpec::new(grid, 0.01, 0.0, Forcing::Zero, r, 2.0).is_err());
        let r = TruncationRadius::new(5.0, &grid).unwrap(); // 15 ≤ 16
        assert!(SystemSpec::new(grid, 0.01, 0.0, Forcing::Zero, r, 2.0).is_ok());
    }

    #[test]
    fn spec_enforces_critical_s() {
        let grid = GridSpec::new(2, 16).unwrap();
        let r = TruncationRadius::new(5.0, &grid).unwrap();
        // ideal needs s > 2 in 2-D
        assert!(SystemSpec::new(grid, 0.0, 0.0, Forcing::Zero, r, 2.0).is_err());
        assert!(SystemSpec::new(grid, 0.0, 0.0, Forcing::Zero, r, 2.5).is_ok());
        // viscous only needs s > 1
        assert!(SystemSpec::new(grid, 0.01, 0.0, Forcing::Zero, r, 1.5).is_ok());
    }

    #[test]
    fn unit_forcing_is_potential() {
        assert!(Forcing::UnitLastAxis.is_potential(1e-12));
        let grid = GridSpec::new(2, 16).unwrap();
        let rotational = VectorField::from_components(vec![
            field_from_fn(grid, |x| -x[1].sin()),
            field_from_fn(grid, |x| x[0].sin()),
        ])
        .unwrap();
        assert!(!Forcing::Field(rotational).is_potential(1e-12));
        let gradient_like = VectorField::from_components(vec![
            field_from_fn(grid, |x| x[0].cos()),
            field_from_fn(grid, |_| 0.0),
        ])
        .unwrap();
        assert!(Forcing::Field(gradient_like).is_potential(1e-12));
    }
}
