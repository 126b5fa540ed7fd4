//! Periodic box discretization.
//!
//! The domain is the isotropic torus `[0, 2π)^dim` with the same number of
//! points on every axis, so wavenumbers are integer vectors in
//! `{-n/2, ..., n/2 - 1}^dim`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Maximum supported spatial dimension; wavevectors are padded to this length.
pub const MAX_DIM: usize = 3;

/// Discretization of the periodic box `[0, 2π)^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    dim: usize,
    n: usize,
}

impl GridSpec {
    /// `dim` must be 2 or 3, `n` a power of two ≥ 8.
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::Config(format!("grid dim must be 2 or 3, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid n_points must be a power of two >= 8, got {n}"
            )));
        }
        Ok(GridSpec { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        TAU
    }

    /// Total number of grid points / Fourier modes.
    pub fn num_points(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Grid spacing Δx.
    pub fn spacing(&self) -> f64 {
        TAU / self.n as f64
    }

    /// Quadrature weight Δx^dim of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Volume (2π)^dim of the box.
    pub fn volume(&self) -> f64 {
        TAU.powi(self.dim as i32)
    }

    /// Signed wavenumber for storage index `i` along one axis.
    #[inline]
    pub fn wave_component(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Storage index along one axis for signed wavenumber `k`.
    #[inline]
    pub fn axis_index(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Wavevector of the flat (row-major) index; unused trailing entries are 0.
    #[inline]
    pub fn wavevector(&self, flat: usize) -> [i64; MAX_DIM] {
        let n = self.n;
        let mut k = [0i64; MAX_DIM];
        match self.dim {
            2 => {
                k[0] = self.wave_component(flat / n);
                k[1] = self.wave_component(flat % n);
            }
            _ => {
                k[0] = self.wave_component(flat / (n * n));
                k[1] = self.wave_component((flat / n) % n);
                k[2] = self.wave_component(flat % n);
            }
        }
        k
    }

    /// Flat index of a wavevector (components taken mod n).
    #[inline]
    pub fn index_of(&self, k: [i64; MAX_DIM]) -> usize {
        let n = self.n;
        match self.dim {
            2 => self.axis_index(k[0]) * n + self.axis_index(k[1]),
            _ => (self.axis_index(k[0]) * n + self.axis_index(k[1])) * n + self.axis_index(k[2]),
        }
    }

    /// Flat index of −k (mod n on each axis).
    #[inline]
    pub fn conjugate_index(&self, flat: usize) -> usize {
        let k = self.wavevector(flat);
        self.index_of([-k[0], -k[1], -k[2]])
    }

    /// |k|² as an exact integer.
    #[inline]
    pub fn k_squared(&self, flat: usize) -> i64 {
        let k = self.wavevector(flat);
        k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
    }

    /// Largest truncation radius representable on this lattice (n/2 − 1).
    pub fn max_radius(&self) -> f64 {
        (self.n / 2 - 1) as f64
    }

    /// 2/3-rule test: true when every |k_i| stays within the alias-free band.
    #[inline]
    pub fn in_dealias_band(&self, k: &[i64; MAX_DIM]) -> bool {
        k.iter().all(|ki| 3 * ki.unsigned_abs() as usize <= self.n)
    }

    /// Physical coordinates of the flat grid index.
    pub fn coords(&self, flat: usize) -> [f64; MAX_DIM] {
        let n = self.n;
        let h = self.spacing();
        let mut x = [0.0; MAX_DIM];
        match self.dim {
            2 => {
                x[0] = (flat / n) as f64 * h;
                x[1] = (flat % n) as f64 * h;
            }
            _ => {
                x[0] = (flat / (n * n)) as f64 * h;
                x[1] = ((flat / n) % n) as f64 * h;
                x[2] = (flat % n) as f64 * h;
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(1, 16).is_err());
        assert!(GridSpec::new(4, 16).is_err());
        assert!(GridSpec::new(2, 12).is_err());
        assert!(GridSpec::new(2, 4).is_err());
        assert!(GridSpec::new(2, 16).is_ok());
        assert!(GridSpec::new(3, 8).is_ok());
    }

    #[test]
    fn wavevector_roundtrip() {
        for grid in [GridSpec::new(2, 16).unwrap(), GridSpec::new(3, 8).unwrap()] {
            for flat in 0..grid.num_points() {
                let k = grid.wavevector(flat);
                assert_eq!(grid.index_of(k), flat);
                for (a, ki) in k.iter().enumerate().take(grid.dim()) {
                    assert!((-(grid.n() as i64) / 2..grid.n() as i64 / 2).contains(ki), "axis {a}");
                }
            }
        }
    }

    #[test]
    fn conjugate_index_is_involution_off_nyquist() {
        let grid = GridSpec::new(2, 16).unwrap();
        for flat in 0..grid.num_points() {
            let conj = grid.conjugate_index(flat);
            assert_eq!(grid.conjugate_index(conj), flat);
        }
    }
}
