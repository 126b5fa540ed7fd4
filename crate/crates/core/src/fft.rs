//! Forward/inverse transforms between physical grid values and coefficients.
//!
//! Normalization: forward = (1/N^dim)·Σ_x f(x) e^{−ik·x}, inverse = plain
//! Σ_k f̂(k) e^{ik·x}, so a pure mode cos(k·x) has coefficient 1/2 at ±k.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::GridSpec;

thread_local! {
    static PLANS: RefCell<HashMap<(usize, bool), Arc<dyn Fft<f64>>>> = RefCell::new(HashMap::new());
}

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cache| {
        cache
            .borrow_mut()
            .entry((len, forward))
            .or_insert_with(|| {
                let dir = if forward {
                    FftDirection::Forward
                } else {
                    FftDirection::Inverse
                };
                FftPlanner::new().plan_fft(len, dir)
            })
            .clone()
    })
}

/// Run 1-D FFTs along every axis of the row-major buffer, in place.
fn transform_axes(data: &mut [Complex64], grid: GridSpec, forward: bool) {
    let n = grid.n();
    let dim = grid.dim();
    let total = grid.num_points();
    let fft = plan(n, forward);
    let mut line = vec![Complex64::ZERO; n];
    let mut scratch = vec![Complex64::ZERO; fft.get_inplace_scratch_len()];

    for axis in 0..dim {
        // Stride between consecutive entries of a line along `axis`.
        let stride = n.pow((dim - 1 - axis) as u32);
        let lines = total / n;
        for li in 0..lines {
            // Decompose the line id into the base offset of that line.
            let block = li / stride; // index over slower axes
            let within = li % stride; // index over faster axes
            let base = block * stride * n + within;
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = data[base + j * stride];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (j, slot) in line.iter().enumerate() {
                data[base + j * stride] = *slot;
            }
        }
    }
}

/// Physical real values (row-major) → coefficients.
pub fn forward(grid: GridSpec, physical: &[f64]) -> Result<SpectralField> {
    if physical.len() != grid.num_points() {
        return Err(Error::Dimension(format!(
            "physical array has {} values, grid needs {}",
            physical.len(),
            grid.num_points()
        )));
    }
    let mut data: Vec<Complex64> = physical.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_axes(&mut data, grid, true);
    let scale = 1.0 / grid.num_points() as f64;
    for c in &mut data {
        *c *= scale;
    }
    SpectralField::from_coeffs(grid, data, true)
}

/// Coefficients → physical values; returns the real part.
///
/// For fields flagged real-symmetric the imaginary residue is round-off only.
pub fn inverse(field: &SpectralField) -> Vec<f64> {
    let mut data = field.coeffs().to_vec();
    transform_axes(&mut data, field.grid(), false);
    data.iter().map(|c| c.re).collect()
}

/// Coefficients → complex physical values (no symmetry assumption).
pub fn inverse_complex(field: &SpectralField) -> Vec<Complex64> {
    let mut data = field.coeffs().to_vec();
    transform_axes(&mut data, field.grid(), false);
    data
}

/// Sample a closed-form function on the grid and transform it.
pub fn field_from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> f64) -> SpectralField {
    let phys: Vec<f64> = (0..grid.num_points())
        .map(|flat| f(&grid.coords(flat)[..grid.dim()]))
        .collect();
    forward(grid, &phys).expect("sizes match by construction")
}
