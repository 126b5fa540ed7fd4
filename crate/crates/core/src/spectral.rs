//! Operator calculus on spectral fields: Fourier truncation, fractional
//! multipliers, exact derivatives, Leray projection, and 2/3-rule dealiasing.
//!
//! Everything here is diagonal (or block-diagonal) in k, so these operators
//! all commute with each other; tests pin that down.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{SpectralField, VectorField};
use crate::grid::GridSpec;

/// Radius of the truncation ball, in integer-wavenumber units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationRadius(f64);

impl TruncationRadius {
    /// Requires 0 < R ≤ n/2 − 1 so the closed ball sits inside the lattice.
    pub fn new(r: f64, grid: &GridSpec) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Config(format!("truncation radius must be positive, got {r}")));
        }
        if r > grid.max_radius() {
            return Err(Error::Config(format!(
                "truncation radius {} exceeds lattice bound n/2-1 = {}",
                r,
                grid.max_radius()
            )));
        }
        Ok(TruncationRadius(r))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// Closed-ball membership |k| ≤ R, exact for integer radii.
    #[inline]
    pub fn contains(&self, k_squared: i64) -> bool {
        (k_squared as f64) <= self.0 * self.0
    }
}

/// Fourier truncation: zero every mode outside the closed ball |k| ≤ R.
pub fn truncate(f: &SpectralField, r: TruncationRadius) -> SpectralField {
    let grid = f.grid();
    let mut out = f.clone();
    for (flat, c) in out.coeffs_mut().iter_mut().enumerate() {
        if !r.contains(grid.k_squared(flat)) {
            *c = Complex64::ZERO;
        }
    }
    out
}

pub fn truncate_vector(v: &VectorField, r: TruncationRadius) -> VectorField {
    VectorField::from_components(v.components().iter().map(|c| truncate(c, r)).collect())
        .expect("components stay conformant")
}

/// Fractional multiplier kind: Riesz |k|^s or Bessel (1+|k|²)^{s/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    Riesz(f64),
    Bessel(f64),
}

impl Multiplier {
    /// Symbol value at |k|²; Riesz at k = 0 is 0 (mean mode lives outside Ḣ^s).
    #[inline]
    pub fn symbol(&self, k_squared: i64) -> f64 {
        match *self {
            Multiplier::Riesz(s) => {
                if k_squared == 0 {
                    0.0
                } else {
                    (k_squared as f64).powf(s / 2.0)
                }
            }
            Multiplier::Bessel(s) => (1.0 + k_squared as f64).powf(s / 2.0),
        }
    }
}

/// Apply Λ^s or J^s.
///
/// `Riesz(s)` always zeroes the mean mode; when s < 0 and the mean was
/// nonzero (beyond round-off relative to the field) this is flagged on the
/// result (`mean_mode_dropped`).
pub fn apply_multiplier(f: &SpectralField, kind: Multiplier) -> SpectralField {
    let grid = f.grid();
    let mut dropped = false;
    if let Multiplier::Riesz(s) = kind {
        if s < 0.0 && f.mean().norm() > 1e-13 * f.max_coeff_norm() {
            dropped = true;
        }
    }
    let mut out = f.clone();
    for (flat, c) in out.coeffs_mut().iter_mut().enumerate() {
        *c *= kind.symbol(grid.k_squared(flat));
    }
    if dropped {
        out.flag_mean_mode_dropped();
    }
    out
}

/// ∂_axis in spectral space: multiply by i·k_axis.
pub fn derivative_axis(f: &SpectralField, axis: usize) -> SpectralField {
    assert!(axis < f.grid().dim(), "axis out of range");
    f.map_modes(|k, c| Complex64::new(0.0, k[axis] as f64) * c)
}

/// ∇f as a vector field.
pub fn gradient(f: &SpectralField) -> VectorField {
    let comps = (0..f.grid().dim()).map(|a| derivative_axis(f, a)).collect();
    VectorField::from_components(comps).expect("gradient components conformant")
}

/// ∇·v.
pub fn divergence(v: &VectorField) -> SpectralField {
    let grid = v.grid();
    let mut out = SpectralField::zeros(grid);
    for (a, comp) in v.components().iter().enumerate() {
        out.axpy(1.0, &derivative_axis(comp, a));
    }
    out
}

/// Curl: scalar ∂₁u₂ − ∂₂u₁ in 2-D, the usual vector in 3-D.
#[derive(Debug, Clone)]
pub enum Curl {
    Scalar(SpectralField),
    Vector(VectorField),
}

impl Curl {
    /// Component fields, 1 for 2-D and 3 for 3-D.
    pub fn fields(&self) -> Vec<&SpectralField> {
        match self {
            Curl::Scalar(f) => vec![f],
            Curl::Vector(v) => v.components().iter().collect(),
        }
    }
}

pub fn curl(v: &VectorField) -> Curl {
    match v.dim() {
        2 => {
            let mut w = derivative_axis(v.component(1), 0);
            w.axpy(-1.0, &derivative_axis(v.component(0), 1));
            Curl::Scalar(w)
        }
        _ => {
            let mut c0 = derivative_axis(v.component(2), 1);
            c0.axpy(-1.0, &derivative_axis(v.component(1), 2));
            let mut c1 = derivative_axis(v.component(0), 2);
            c1.axpy(-1.0, &derivative_axis(v.component(2), 0));
            let mut c2 = derivative_axis(v.component(1), 0);
            c2.axpy(-1.0, &derivative_axis(v.component(0), 1));
            Curl::Vector(VectorField::from_components(vec![c0, c1, c2]).expect("conformant"))
        }
    }
}

/// Leray projection onto divergence-free fields:
/// û(k) ← û(k) − k (k·û(k)) / |k|² for k ≠ 0; the k = 0 mode is untouched.
pub fn leray_project(v: &VectorField) -> VectorField {
    let grid = v.grid();
    let dim = grid.dim();
    let mut out = v.clone();
    for flat in 0..grid.num_points() {
        let k = grid.wavevector(flat);
        let ksq = grid.k_squared(flat);
        if ksq == 0 {
            continue;
        }
        let mut dot = Complex64::ZERO;
        for a in 0..dim {
            dot += k[a] as f64 * v.component(a).coeffs()[flat];
        }
        let scale = dot / ksq as f64;
        for a in 0..dim {
            out.component_mut(a).coeffs_mut()[flat] -= k[a] as f64 * scale;
        }
    }
    out
}

/// 2/3-rule dealiasing: zero every mode with any |k_i| > n/3.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let grid = f.grid();
    f.map_modes(|k, c| if grid.in_dealias_band(&k) { c } else { Complex64::ZERO })
}

/// Pointwise product of two fields, computed pseudo-spectrally and dealiased.
///
/// For inputs band-limited to the 2/3 band the retained coefficients equal
/// the exact convolution sum.
pub fn dealiased_product(a: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
    if a.grid() != b.grid() {
        return Err(Error::Dimension("product of fields on different grids".into()));
    }
    let grid = a.grid();
    let pa = crate::fft::inverse(a);
    let pb = crate::fft::inverse(b);
    let prod: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
    Ok(dealias(&crate::fft::forward(grid, &prod)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::field_from_fn;
    use approx::assert_abs_diff_eq;

    fn grid2() -> GridSpec {
        GridSpec::new(2, 16).unwrap()
    }

    #[test]
    fn truncation_radius_bounds() {
        let g = grid2();
        assert!(TruncationRadius::new(7.0, &g).is_ok());
        assert!(TruncationRadius::new(7.5, &g).is_err());
        assert!(TruncationRadius::new(8.0, &g).is_err());
        assert!(TruncationRadius::new(0.0, &g).is_err());
    }

    #[test]
    fn truncate_keeps_band_limited_field() {
        let g = grid2();
        let mut f = SpectralField::zeros(g);
        f.set_coeff([2, 0, 0], Complex64::new(0.5, 0.0));
        f.set_coeff([-2, 0, 0], Complex64::new(0.5, 0.0));
        f.set_coeff([0, 1, 0], Complex64::new(0.0, -0.5));
        f.set_coeff([0, -1, 0], Complex64::new(0.0, 0.5));
        let r = TruncationRadius::new(5.0, &g).unwrap();
        let t = truncate(&f, r);
        for (a, b) in f.coeffs().iter().zip(t.coeffs()) {
            assert!((a - b).norm() == 0.0);
        }
    }

    #[test]
    fn truncate_kills_outside_mode_and_keeps_shell() {
        let g = grid2();
        let f = field_from_fn(g, |x| (3.0 * x[0]).cos());
        let t = truncate(&f, TruncationRadius::new(2.0, &g).unwrap());
        // only transform round-off survives inside the ball
        assert!(t.max_coeff_norm() <= 1e-15);
        // closed-ball convention: |k| = R exactly is kept
        let t3 = truncate(&f, TruncationRadius::new(3.0, &g).unwrap());
        assert_abs_diff_eq!(t3.coeff([3, 0, 0]).re, 0.5, epsilon = 1e-13);
    }

    #[test]
    fn truncate_is_idempotent() {
        let g = grid2();
        let f = field_from_fn(g, |x| (3.0 * x[0]).cos() * (2.0 * x[1]).sin() + x[0].cos());
        let r = TruncationRadius::new(3.0, &g).unwrap();
        let once = truncate(&f, r);
        let twice = truncate(&once, r);
        for (a, b) in once.coeffs().iter().zip(twice.coeffs()) {
            assert!((a - b).norm() == 0.0);
        }
    }

    #[test]
    fn riesz_two_is_minus_laplacian() {
        let g = grid2();
        let f = field_from_fn(g, |x| (3.0 * x[0]).cos());
        let lf = apply_multiplier(&f, Multiplier::Riesz(2.0));
        assert_abs_diff_eq!(lf.coeff([3, 0, 0]).re, 4.5, epsilon = 1e-12); // 9 · 0.5
        let phys = crate::fft::inverse(&lf);
        let expect = crate::fft::inverse(&f.scaled(9.0));
        for (a, b) in phys.iter().zip(&expect) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-11);
        }
    }

    #[test]
    fn bessel_zero_is_identity_and_inverse_composes() {
        let g = grid2();
        let f = field_from_fn(g, |x| (2.0 * x[0]).cos() * x[1].sin());
        let id = apply_multiplier(&f, Multiplier::Bessel(0.0));
        for (a, b) in f.coeffs().iter().zip(id.coeffs()) {
            assert!((a - b).norm() == 0.0);
        }
        let fwd = apply_multiplier(&f, Multiplier::Bessel(1.5));
        let back = apply_multiplier(&fwd, Multiplier::Bessel(-1.5));
        for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
            assert!((a - b).norm() <= 1e-14);
        }
    }

    #[test]
    fn riesz_negative_flags_nonzero_mean() {
        let g = grid2();
        let f = field_from_fn(g, |x| 1.0 + x[0].cos());
        let out = apply_multiplier(&f, Multiplier::Riesz(-1.0));
        assert!(out.mean_mode_dropped());
        assert!(out.mean().norm() == 0.0);
        let mean_zero = field_from_fn(g, |x| x[0].cos());
        assert!(!apply_multiplier(&mean_zero, Multiplier::Riesz(-1.0)).mean_mode_dropped());
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let g = grid2();
        let f = field_from_fn(g, |_| 4.2);
        let grad = gradient(&f);
        assert!(grad.max_coeff_norm() <= 1e-15);
    }

    #[test]
    fn curl_2d_example() {
        // u = (−sin y, sin x) → curl = cos x + cos y
        let g = grid2();
        let u = VectorField::from_components(vec![
            field_from_fn(g, |x| -x[1].sin()),
            field_from_fn(g, |x| x[0].sin()),
        ])
        .unwrap();
        match curl(&u) {
            Curl::Scalar(w) => {
                let expect = field_from_fn(g, |x| x[0].cos() + x[1].cos());
                for (a, b) in w.coeffs().iter().zip(expect.coeffs()) {
                    assert!((a - b).norm() <= 1e-13);
                }
            }
            Curl::Vector(_) => panic!("2-D curl must be scalar"),
        }
    }

    #[test]
    fn divergence_of_gradient_is_minus_riesz2() {
        let g = grid2();
        let f = field_from_fn(g, |x| (2.0 * x[0]).cos() * (3.0 * x[1]).sin());
        let lap = divergence(&gradient(&f));
        let neg = apply_multiplier(&f, Multiplier::Riesz(2.0)).scaled(-1.0);
        for (a, b) in lap.coeffs().iter().zip(neg.coeffs()) {
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn leray_annihilates_gradients_and_fixes_divfree() {
        let g = grid2();
        let scalar = field_from_fn(g, |x| (2.0 * x[0]).cos() * x[1].sin());
        let grad = gradient(&scalar);
        let projected = leray_project(&grad);
        assert!(projected.max_coeff_norm() <= 1e-14);

        // u = (−∂y ψ, ∂x ψ) is divergence-free: the projector is the identity.
        let psi = field_from_fn(g, |x| (x[0]).sin() * (2.0 * x[1]).cos());
        let u = VectorField::from_components(vec![
            derivative_axis(&psi, 1).scaled(-1.0),
            derivative_axis(&psi, 0),
        ])
        .unwrap();
        let pu = leray_project(&u);
        for a in 0..2 {
            for (x, y) in u.component(a).coeffs().iter().zip(pu.component(a).coeffs()) {
                assert!((x - y).norm() <= 1e-14);
            }
        }
        assert!(pu.is_divergence_free(1e-12));
    }

    #[test]
    fn dealias_band_behavior() {
        let g = grid2(); // n = 16 → keep |k_i| ≤ 5
        let mut inside = SpectralField::zeros(g);
        inside.set_coeff([5, -5, 0], Complex64::new(0.25, 0.1));
        inside.set_coeff([-5, 5, 0], Complex64::new(0.25, -0.1));
        let d = dealias(&inside);
        for (a, b) in inside.coeffs().iter().zip(d.coeffs()) {
            assert!((a - b).norm() == 0.0);
        }
        let mut nyquist = SpectralField::zeros(g);
        nyquist.set_coeff([-8, 0, 0], Complex64::new(1.0, 0.0));
        assert!(dealias(&nyquist).max_coeff_norm() == 0.0);
    }
}
