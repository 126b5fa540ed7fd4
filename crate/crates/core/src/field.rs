//! Spectral representation of scalar and vector fields.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, MAX_DIM};

/// Fourier coefficients of a scalar field on a [`GridSpec`].
///
/// Coefficients follow the convention `f(x) = Σ_k coeff(k) e^{i k·x}`, i.e.
/// the forward transform carries the 1/N^dim factor, so coefficients of a
/// fixed smooth field are resolution independent.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
    /// Hermitian symmetry holds, so the inverse transform is real to round-off.
    real_symmetric: bool,
    /// Set when a Riesz multiplier with s < 0 had to zero a nonzero mean mode.
    mean_mode_dropped: bool,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        SpectralField {
            grid,
            coeffs: vec![Complex64::ZERO; grid.num_points()],
            real_symmetric: true,
            mean_mode_dropped: false,
        }
    }

    pub fn from_coeffs(grid: GridSpec, coeffs: Vec<Complex64>, real_symmetric: bool) -> Result<Self> {
        if coeffs.len() != grid.num_points() {
            return Err(Error::Dimension(format!(
                "coefficient count {} does not match grid ({} points)",
                coeffs.len(),
                grid.num_points()
            )));
        }
        Ok(SpectralField {
            grid,
            coeffs,
            real_symmetric,
            mean_mode_dropped: false,
        })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, k: [i64; MAX_DIM]) -> Complex64 {
        self.coeffs[self.grid.index_of(k)]
    }

    pub fn set_coeff(&mut self, k: [i64; MAX_DIM], value: Complex64) {
        let idx = self.grid.index_of(k);
        self.coeffs[idx] = value;
    }

    pub fn is_real_symmetric(&self) -> bool {
        self.real_symmetric
    }

    pub fn set_real_symmetric(&mut self, yes: bool) {
        self.real_symmetric = yes;
    }

    pub fn mean_mode_dropped(&self) -> bool {
        self.mean_mode_dropped
    }

    pub(crate) fn flag_mean_mode_dropped(&mut self) {
        self.mean_mode_dropped = true;
    }

    /// Mean of the field = coefficient of the zero mode.
    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Largest |coeff(−k) − conj(coeff(k))|; zero for exactly Hermitian data.
    pub fn hermitian_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for flat in 0..self.coeffs.len() {
            let conj_at = self.grid.conjugate_index(flat);
            let r = (self.coeffs[conj_at] - self.coeffs[flat].conj()).norm();
            worst = worst.max(r);
        }
        worst
    }

    /// Force exact Hermitian symmetry by averaging paired modes.
    pub fn hermitianize(&mut self) {
        for flat in 0..self.coeffs.len() {
            let conj_at = self.grid.conjugate_index(flat);
            if conj_at < flat {
                continue;
            }
            if conj_at == flat {
                self.coeffs[flat] = Complex64::new(self.coeffs[flat].re, 0.0);
            } else {
                let avg = 0.5 * (self.coeffs[flat] + self.coeffs[conj_at].conj());
                self.coeffs[flat] = avg;
                self.coeffs[conj_at] = avg.conj();
            }
        }
        self.real_symmetric = true;
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// New field with coefficients `f(k, coeff)`; carries flags over.
    pub fn map_modes<F: FnMut([i64; MAX_DIM], Complex64) -> Complex64>(&self, mut f: F) -> Self {
        let grid = self.grid;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(flat, &c)| f(grid.wavevector(flat), c))
            .collect();
        SpectralField {
            grid,
            coeffs,
            real_symmetric: self.real_symmetric,
            mean_mode_dropped: self.mean_mode_dropped,
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= a;
        }
        out
    }

    /// self += a·other
    pub fn axpy(&mut self, a: f64, other: &SpectralField) {
        assert_eq!(self.grid, other.grid, "grid mismatch in axpy");
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += a * o;
        }
        self.real_symmetric &= other.real_symmetric;
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }
}

/// A `dim`-component vector field with all components on one grid.
#[derive(Debug, Clone)]
pub struct VectorField {
    components: Vec<SpectralField>,
}

impl VectorField {
    pub fn zeros(grid: GridSpec) -> Self {
        VectorField {
            components: (0..grid.dim()).map(|_| SpectralField::zeros(grid)).collect(),
        }
    }

    pub fn from_components(components: Vec<SpectralField>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Dimension("vector field needs components".into()));
        }
        let grid = components[0].grid();
        if components.len() != grid.dim() {
            return Err(Error::Dimension(format!(
                "expected {} components, got {}",
                grid.dim(),
                components.len()
            )));
        }
        if components.iter().any(|c| c.grid() != grid) {
            return Err(Error::Dimension("components on different grids".into()));
        }
        Ok(VectorField { components })
    }

    pub fn grid(&self) -> GridSpec {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &SpectralField {
        &self.components[i]
    }

    pub fn component_mut(&mut self, i: usize) -> &mut SpectralField {
        &mut self.components[i]
    }

    pub fn components(&self) -> &[SpectralField] {
        &self.components
    }

    /// max_k |k·û(k)| — the divergence residual in coefficient space.
    pub fn divergence_residual(&self) -> f64 {
        let grid = self.grid();
        let mut worst: f64 = 0.0;
        for flat in 0..grid.num_points() {
            let k = grid.wavevector(flat);
            let mut dot = Complex64::ZERO;
            for (a, comp) in self.components.iter().enumerate() {
                dot += k[a] as f64 * comp.coeffs()[flat];
            }
            worst = worst.max(dot.norm());
        }
        worst
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.components.iter().map(|c| c.max_coeff_norm()).fold(0.0, f64::max)
    }

    /// Divergence-free to the stated relative tolerance.
    pub fn is_divergence_free(&self, rel_tol: f64) -> bool {
        let scale = self.max_coeff_norm();
        scale == 0.0 || self.divergence_residual() <= rel_tol * scale
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }

    pub fn scaled(&self, a: f64) -> Self {
        VectorField {
            components: self.components.iter().map(|c| c.scaled(a)).collect(),
        }
    }

    pub fn axpy(&mut self, a: f64, other: &VectorField) {
        assert_eq!(self.dim(), other.dim(), "component mismatch in axpy");
        for (c, o) in self.components.iter_mut().zip(&other.components) {
            c.axpy(a, o);
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitianize_fixes_residual() {
        let grid = GridSpec::new(2, 8).unwrap();
        let mut f = SpectralField::zeros(grid);
        f.set_coeff([1, 2, 0], Complex64::new(1.0, 0.5));
        assert!(f.hermitian_residual() > 0.1);
        f.hermitianize();
        assert!(f.hermitian_residual() == 0.0);
    }

    #[test]
    fn vector_field_shape_checks() {
        let grid = GridSpec::new(2, 8).unwrap();
        let comps = vec![SpectralField::zeros(grid); 3];
        assert!(VectorField::from_components(comps).is_err());
        let comps = vec![SpectralField::zeros(grid); 2];
        assert!(VectorField::from_components(comps).is_ok());
    }
}
