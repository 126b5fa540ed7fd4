//! Norm and seminorm evaluations: L^p on the grid, Ḣ^s/H^s as exact lattice
//! sums, dyadic-cube BMO, and the commutator [Op^s, u]∇θ with its probe
//! quantities.
//!
//! Conventions, fixed once for the whole crate:
//! - L^p uses the grid quadrature Σ |f(x)|^p Δx^dim; L^∞ is the grid max
//!   (adequate for band-limited fields, under-resolution caveat applies).
//! - Spectral norms carry the quadrature weight: ‖f‖_{H^s}² =
//!   (2π)^dim Σ_k (1+|k|²)^s |f̂(k)|², so H⁰ equals L² to round-off
//!   (Plancherel on the lattice).
//! - Norms of vector/matrix quantities are ℓ² across components for L² type
//!   norms, and grid maxima of the pointwise Euclidean/Frobenius magnitude
//!   for sup-type norms and BMO.


use crate::error::{Error, Result};
use crate::fft;
use crate::field::{SpectralField, VectorField};
use crate::grid::GridSpec;
use crate::spectral::{apply_multiplier, dealias, derivative_axis, Multiplier};
use crate::util::{pairwise_sum, pairwise_sum_by};

/// L^p norm from physical values; `p` must be ≥ 1, `f64::INFINITY` for sup.
pub fn lebesgue_norm_physical(grid: GridSpec, physical: &[f64], p: f64) -> Result<f64> {
    if physical.len() != grid.num_points() {
        return Err(Error::Dimension(format!(
            "physical array has {} values, grid needs {}",
            physical.len(),
            grid.num_points()
        )));
    }
    if p.is_infinite() && p > 0.0 {
        return Ok(physical.iter().map(|v| v.abs()).fold(0.0, f64::max));
    }
    if !(p >= 1.0) {
        return Err(Error::Parameter(format!("L^p norm needs p >= 1, got {p}")));
    }
    let sum = pairwise_sum_by(physical.len(), |i| physical[i].abs().powf(p));
    Ok((sum * grid.cell_volume()).powf(1.0 / p))
}

/// L^p norm of a spectral field (inverse transform + grid quadrature).
pub fn lebesgue_norm(f: &SpectralField, p: f64) -> Result<f64> {
    lebesgue_norm_physical(f.grid(), &fft::inverse(f), p)
}

/// Grid sup norm of a spectral field.
pub fn linf_norm(f: &SpectralField) -> f64 {
    fft::inverse(f).iter().map(|v| v.abs()).fold(0.0, f64::max)
}

fn spectral_sum(f: &SpectralField, weight: impl Fn(i64) -> f64) -> f64 {
    let grid = f.grid();
    let coeffs = f.coeffs();
    pairwise_sum_by(coeffs.len(), |flat| {
        let w = weight(grid.k_squared(flat));
        w * coeffs[flat].norm_sqr()
    })
}

/// Sobolev norm ‖f‖_{H^s} (inhomogeneous) or ‖f‖_{Ḣ^s} (homogeneous).
///
/// The homogeneous form always sums over k ≠ 0; fields with nonzero mean are
/// measured by their mean-zero representative.
pub fn sobolev_norm(f: &SpectralField, s: f64, homogeneous: bool) -> f64 {
    let grid = f.grid();
    let sum = if homogeneous {
        spectral_sum(f, |ksq| if ksq == 0 { 0.0 } else { (ksq as f64).powf(s) })
    } else {
        spectral_sum(f, |ksq| (1.0 + ksq as f64).powf(s))
    };
    (grid.volume() * sum).sqrt()
}

/// ℓ² over components of per-component Sobolev norms.
pub fn sobolev_norm_vector(v: &VectorField, s: f64, homogeneous: bool) -> f64 {
    let sq: Vec<f64> = v
        .components()
        .iter()
        .map(|c| sobolev_norm(c, s, homogeneous).powi(2))
        .collect();
    pairwise_sum(&sq).sqrt()
}

/// L² norm via the spectral sum (equals `lebesgue_norm(f, 2)` to round-off).
pub fn l2_norm(f: &SpectralField) -> f64 {
    sobolev_norm(f, 0.0, false)
}

pub fn l2_norm_vector(v: &VectorField) -> f64 {
    sobolev_norm_vector(v, 0.0, false)
}

/// ‖∇f‖_{H^s} = sqrt(Σ_i ‖∂_i f‖²_{H^s}).
pub fn gradient_sobolev_norm(f: &SpectralField, s: f64, homogeneous: bool) -> f64 {
    let grid = f.grid();
    let sq: Vec<f64> = (0..grid.dim())
        .map(|a| sobolev_norm(&derivative_axis(f, a), s, homogeneous).powi(2))
        .collect();
    pairwise_sum(&sq).sqrt()
}

/// ‖∇u‖_{H^s} over all d² Jacobian entries.
pub fn jacobian_sobolev_norm(u: &VectorField, s: f64, homogeneous: bool) -> f64 {
    let sq: Vec<f64> = u
        .components()
        .iter()
        .map(|c| gradient_sobolev_norm(c, s, homogeneous).powi(2))
        .collect();
    pairwise_sum(&sq).sqrt()
}

/// Physical-space component arrays of ∇f.
pub fn gradient_physical(f: &SpectralField) -> Vec<Vec<f64>> {
    (0..f.grid().dim())
        .map(|a| fft::inverse(&derivative_axis(f, a)))
        .collect()
}

/// Pointwise Euclidean magnitude of a tuple of component arrays.
pub fn magnitude_field(comps: &[Vec<f64>]) -> Vec<f64> {
    let len = comps[0].len();
    (0..len)
        .map(|i| comps.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt())
        .collect()
}

/// Grid max of |∇f| (Euclidean).
pub fn gradient_sup_norm(f: &SpectralField) -> f64 {
    let comps = gradient_physical(f);
    magnitude_field(&comps).into_iter().fold(0.0, f64::max)
}

/// Grid max of the Frobenius norm of ∇u.
pub fn jacobian_sup_norm(u: &VectorField) -> f64 {
    let mut comps = Vec::new();
    for c in u.components() {
        comps.extend(gradient_physical(c));
    }
    magnitude_field(&comps).into_iter().fold(0.0, f64::max)
}

/// Grid max of the Euclidean magnitude of a vector field.
pub fn vector_sup_norm(u: &VectorField) -> f64 {
    let comps: Vec<Vec<f64>> = u.components().iter().map(fft::inverse).collect();
    magnitude_field(&comps).into_iter().fold(0.0, f64::max)
}

fn check_bmo_depth(grid: GridSpec, max_depth: usize) -> Result<()> {
    if max_depth < 1 {
        return Err(Error::Config("bmo max_depth must be >= 1".into()));
    }
    if max_depth >= usize::BITS as usize || grid.n() % (1usize << max_depth) != 0 {
        return Err(Error::Config(format!(
            "grid n = {} is not divisible by 2^{max_depth}",
            grid.n()
        )));
    }
    Ok(())
}

/// BMO norm over dyadic cubes of side 2π/2^d for d = 0..=max_depth.
///
/// For several components the oscillation is measured with the pointwise
/// Euclidean magnitude |v(x) − v_Q|. The dyadic restriction underestimates
/// the all-cubes supremum by at most a fixed geometric factor.
pub fn bmo_norm_components(grid: GridSpec, comps: &[&[f64]], max_depth: usize) -> Result<f64> {
    check_bmo_depth(grid, max_depth)?;
    for c in comps {
        if c.len() != grid.num_points() {
            return Err(Error::Dimension("component size does not match grid".into()));
        }
    }
    let n = grid.n();
    let dim = grid.dim();
    let nc = comps.len();
    let mut worst: f64 = 0.0;
    let mut means = vec![0.0f64; nc];
    let mut idx: Vec<usize> = Vec::with_capacity(grid.num_points());

    for depth in 0..=max_depth {
        let cubes_per_axis = 1usize << depth;
        let side = n / cubes_per_axis;
        let cube_points = side.pow(dim as u32);
        let cube_count = cubes_per_axis.pow(dim as u32);
        for cube in 0..cube_count {
            // Origin of the cube in grid indices.
            let mut rem = cube;
            let mut origin = [0usize; 3];
            for a in (0..dim).rev() {
                origin[a] = (rem % cubes_per_axis) * side;
                rem /= cubes_per_axis;
            }
            idx.clear();
            collect_cube_indices(grid, origin, side, &mut idx);
            for (m, c) in means.iter_mut().zip(comps) {
                *m = pairwise_sum_by(idx.len(), |i| c[idx[i]]) / cube_points as f64;
            }
            let dev = pairwise_sum_by(idx.len(), |i| {
                let mut sq = 0.0;
                for (m, c) in means.iter().zip(comps) {
                    let d = c[idx[i]] - m;
                    sq += d * d;
                }
                sq.sqrt()
            });
            worst = worst.max(dev / cube_points as f64);
        }
    }
    Ok(worst)
}

fn collect_cube_indices(grid: GridSpec, origin: [usize; 3], side: usize, out: &mut Vec<usize>) {
    let n = grid.n();
    match grid.dim() {
        2 => {
            for i in origin[0]..origin[0] + side {
                let row = i * n;
                for j in origin[1]..origin[1] + side {
                    out.push(row + j);
                }
            }
        }
        _ => {
            for i in origin[0]..origin[0] + side {
                for j in origin[1]..origin[1] + side {
                    let row = (i * n + j) * n;
                    for l in origin[2]..origin[2] + side {
                        out.push(row + l);
                    }
                }
            }
        }
    }
}

/// BMO norm of a scalar spectral field.
pub fn bmo_norm(f: &SpectralField, max_depth: usize) -> Result<f64> {
    let phys = fft::inverse(f);
    bmo_norm_components(f.grid(), &[&phys], max_depth)
}

/// (u·∇)g computed pseudo-spectrally from physical velocity components,
/// with the product dealiased.
pub fn advect(grid: GridSpec, u_physical: &[Vec<f64>], g: &SpectralField) -> Result<SpectralField> {
    if g.grid() != grid {
        return Err(Error::Dimension("advected field on a different grid".into()));
    }
    let mut acc = vec![0.0f64; grid.num_points()];
    for (a, ua) in u_physical.iter().enumerate() {
        let dg = fft::inverse(&derivative_axis(g, a));
        for (s, (x, y)) in acc.iter_mut().zip(ua.iter().zip(&dg)) {
            *s += x * y;
        }
    }
    Ok(dealias(&fft::forward(grid, &acc)?))
}

/// The commutator [Op^s, u]∇θ = Op^s[(u·∇)θ] − (u·∇)(Op^s θ).
///
/// Products are pseudo-spectral and dealiased; the result is exactly
/// bilinear in (u, θ). `kind` selects J^s (Bessel) or Λ^s (Riesz).
pub fn commutator(
    u: &VectorField,
    theta: &SpectralField,
    s: f64,
    kind: CommutatorKind,
) -> Result<SpectralField> {
    let grid = theta.grid();
    if u.grid() != grid {
        return Err(Error::Dimension("velocity and scalar on different grids".into()));
    }
    let op = kind.multiplier(s);
    let u_phys: Vec<Vec<f64>> = u.components().iter().map(fft::inverse).collect();
    let first = apply_multiplier(&advect(grid, &u_phys, theta)?, op);
    let second = advect(grid, &u_phys, &apply_multiplier(theta, op))?;
    Ok(first.sub(&second))
}

/// Operator flavor for [`commutator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommutatorKind {
    Bessel,
    Riesz,
}

impl CommutatorKind {
    fn multiplier(self, s: f64) -> Multiplier {
        match self {
            CommutatorKind::Bessel => Multiplier::Bessel(s),
            CommutatorKind::Riesz => Multiplier::Riesz(s),
        }
    }
}

/// One evaluation of the commutator against both right-hand bounds, with the
/// constants set to 1 so the ratios expose the empirical constants.
#[derive(Debug, Clone)]
pub struct CommutatorProbe {
    pub s: f64,
    pub kind: CommutatorKind,
    /// ‖[Op^s, u]∇θ‖_{L²}
    pub lhs_norm: f64,
    /// ‖∇u‖_∞ ‖J^{s−1}∇θ‖_{L²} + ‖J^s u‖_{L²} ‖∇θ‖_∞
    pub kp_bound: f64,
    /// ‖∇u‖_{H^s} ‖θ‖_{H^s}
    pub feff_bound: f64,
    pub kp_ratio: f64,
    pub feff_ratio: f64,
    /// Whether the supplied velocity was divergence-free (recommended).
    pub u_divergence_free: bool,
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

/// Evaluate the commutator probe for the Bessel flavor (the Kato–Ponce side);
/// the Fefferman bound is filled from the same inputs. Requires s > dim/2.
pub fn commutator_probe(u: &VectorField, theta: &SpectralField, s: f64) -> Result<CommutatorProbe> {
    commutator_probe_kind(u, theta, s, CommutatorKind::Bessel)
}

pub fn commutator_probe_kind(
    u: &VectorField,
    theta: &SpectralField,
    s: f64,
    kind: CommutatorKind,
) -> Result<CommutatorProbe> {
    let grid = theta.grid();
    if s <= grid.dim() as f64 / 2.0 {
        return Err(Error::Parameter(format!(
            "commutator probe needs s > dim/2, got s = {s} in {} dimensions",
            grid.dim()
        )));
    }
    let lhs_field = commutator(u, theta, s, kind)?;
    let lhs_norm = l2_norm(&lhs_field);

    let grad_theta = crate::spectral::gradient(theta);
    let grad_theta_sup = gradient_sup_norm(theta);
    let grad_u_sup = jacobian_sup_norm(u);
    let js1_grad_theta = sobolev_norm_vector(&grad_theta, s - 1.0, false);
    let kp_bound = grad_u_sup * js1_grad_theta + sobolev_norm_vector(u, s, false) * grad_theta_sup;
    let feff_bound = jacobian_sobolev_norm(u, s, false) * sobolev_norm(theta, s, false);

    Ok(CommutatorProbe {
        s,
        kind,
        lhs_norm,
        kp_bound,
        feff_bound,
        kp_ratio: ratio(lhs_norm, kp_bound),
        feff_ratio: ratio(lhs_norm, feff_bound),
        u_divergence_free: u.is_divergence_free(1e-12),
    })
}
