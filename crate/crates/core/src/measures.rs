//! Quantum consonance and uncertainty-induced nonlocality (UIN).
//!
//! UIN is evaluated two ways: the closed form built from the Bloch vector and
//! the 3×3 matrix `N_ij = Tr(√ρ σ_i √ρ σ_j)` ([`uin`]), and a direct search
//! over local observables `n̂·σ ⊗ I` maximizing the skew information
//! ([`uin_bruteforce`]). The two share nothing beyond the matrix square root.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QcorrError, Result};
use crate::matrix::{
    hermitian_eig, matrix_sqrt_psd, partial_trace, pauli, tensor_product, ComplexMatrix,
};
use crate::state::DensityMatrix;

/// Below this Bloch-vector length the marginal counts as maximally mixed.
pub const BLOCH_ZERO: f64 = 1e-9;

/// Marginal coherences below this are treated as zero by [`consonance`].
pub const DIAGONAL_TOL: f64 = 1e-10;

const SKEW_NEGATIVE_TOL: f64 = 1e-12;
const REFINE_ITERATIONS: usize = 20;
const MAX_MOVES_PER_STEP: usize = 8;

/// How to evaluate UIN when the first marginal is maximally mixed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UinConvention {
    /// `1 − n_min(N)` whenever |v| < 1e-9.
    #[default]
    #[serde(rename = "strict")]
    Strict,
    /// Always use the v ≠ 0 formula; for |v| < 1e-9 take v̂ = ẑ, i.e. `1 − N_zz`.
    #[serde(rename = "radial-limit")]
    RadialLimit,
}

impl UinConvention {
    pub fn label(self) -> &'static str {
        match self {
            UinConvention::Strict => "strict",
            UinConvention::RadialLimit => "radial-limit",
        }
    }
}

impl fmt::Display for UinConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for UinConvention {
    type Err = QcorrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(UinConvention::Strict),
            "radial-limit" => Ok(UinConvention::RadialLimit),
            _ => Err(QcorrError::Usage(format!("unknown convention '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn direction(&self) -> Option<[f64; 3]> {
        let n = self.norm();
        (n >= BLOCH_ZERO).then(|| self.0.map(|x| x / n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkewMatrixN(pub [[f64; 3]; 3]);

impl SkewMatrixN {
    /// `d · N · dᵀ`.
    pub fn quadratic_form(&self, d: [f64; 3]) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += d[i] * self.0[i][j] * d[j];
            }
        }
        s
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let flat: Vec<f64> = self.0.iter().flatten().copied().collect();
        let m = ComplexMatrix::from_real_rows(3, &flat)?;
        Ok(hermitian_eig(&m)?.min_eigenvalue())
    }
}

fn first_qubit_dim(rho: &DensityMatrix) -> Result<usize> {
    if rho.dims().first() != Some(&2) {
        return Err(QcorrError::Dimension(format!(
            "first subsystem must be a qubit, dims are {:?}",
            rho.dims()
        )));
    }
    Ok(rho.dim() / 2)
}

/// `σ_i ⊗ I_rest` for i = x, y, z.
fn local_paulis(rest: usize) -> Result<[ComplexMatrix; 3]> {
    let id = ComplexMatrix::identity(rest);
    let [x, y, z] = pauli();
    Ok([
        tensor_product(&x, &id)?,
        tensor_product(&y, &id)?,
        tensor_product(&z, &id)?,
    ])
}

/// `(n̂·σ) ⊗ I_rest`.
fn local_observable(dir: [f64; 3], rest: usize) -> Result<ComplexMatrix> {
    let [x, y, z] = pauli();
    let ndotsigma = &(&x.scale_real(dir[0]) + &y.scale_real(dir[1])) + &z.scale_real(dir[2]);
    tensor_product(&ndotsigma, &ComplexMatrix::identity(rest))
}

/// Wigner–Yanase skew information `−½ Tr([√ρ, K]²)`.
pub fn skew_information(rho: &DensityMatrix, obs: &ComplexMatrix) -> Result<f64> {
    if obs.dim() != rho.dim() {
        return Err(QcorrError::Dimension(format!(
            "observable is {0}x{0}, state is {1}x{1}",
            obs.dim(),
            rho.dim()
        )));
    }
    let defect = obs.hermiticity_defect();
    if defect > 1e-10 {
        return Err(QcorrError::domain(
            "observable",
            defect,
            "observable must be Hermitian",
        ));
    }
    skew_with_root(&matrix_sqrt_psd(rho.matrix())?, obs)
}

fn skew_with_root(root: &ComplexMatrix, obs: &ComplexMatrix) -> Result<f64> {
    let c = root.commutator(obs)?;
    let value = -0.5 * c.mat_mul(&c)?.trace().re;
    if value < -SKEW_NEGATIVE_TOL {
        return Err(QcorrError::Numeric(format!(
            "negative skew information {value:e}"
        )));
    }
    Ok(value.max(0.0))
}

/// Bloch vector of the first (qubit) subsystem.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<BlochVector> {
    let rest = first_qubit_dim(rho)?;
    let sigmas = local_paulis(rest)?;
    let mut v = [0.0; 3];
    for (vi, s) in v.iter_mut().zip(&sigmas) {
        let t = rho.matrix().mat_mul(s)?.trace();
        if t.im.abs() > 1e-12 {
            return Err(QcorrError::Numeric(format!(
                "Bloch component has imaginary part {:e}",
                t.im
            )));
        }
        *vi = t.re;
    }
    Ok(BlochVector(v))
}

/// `N_ij = Tr(√ρ (σ_i⊗I) √ρ (σ_j⊗I))`, one square root for all nine entries.
pub fn n_matrix(rho: &DensityMatrix) -> Result<SkewMatrixN> {
    let rest = first_qubit_dim(rho)?;
    let root = matrix_sqrt_psd(rho.matrix())?;
    let sigmas = local_paulis(rest)?;
    let half: Vec<ComplexMatrix> = sigmas
        .iter()
        .map(|s| root.mat_mul(s))
        .collect::<Result<_>>()?;
    let mut n = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let value = half[i].mat_mul(&half[j])?.trace().re;
            n[i][j] = value;
            n[j][i] = value;
        }
    }
    Ok(SkewMatrixN(n))
}

/// Closed-form UIN with respect to the first subsystem.
pub fn uin(rho: &DensityMatrix, conv: UinConvention) -> Result<f64> {
    let v = bloch_vector(rho)?;
    let n = n_matrix(rho)?;
    let value = match (v.direction(), conv) {
        (Some(d), _) => 1.0 - n.quadratic_form(d),
        (None, UinConvention::Strict) => 1.0 - n.min_eigenvalue()?,
        (None, UinConvention::RadialLimit) => 1.0 - n.0[2][2],
    };
    Ok(value.max(0.0))
}

/// UIN by direct maximization of the skew information over local observables.
///
/// With a non-degenerate marginal only the axis ±v̂ commutes with it, so only
/// those two directions are tried. Otherwise every direction is admissible and
/// the search runs over a `grid_size`-point Fibonacci sphere followed by a
/// local pattern search.
pub fn uin_bruteforce(rho: &DensityMatrix, grid_size: usize) -> Result<f64> {
    let v = bloch_vector(rho)?;
    match v.direction() {
        Some(d) => {
            let rest = rho.dim() / 2;
            let root = matrix_sqrt_psd(rho.matrix())?;
            let plus = skew_with_root(&root, &local_observable(d, rest)?)?;
            let minus = skew_with_root(&root, &local_observable(d.map(|x| -x), rest)?)?;
            Ok(plus.max(minus))
        }
        None => max_skew_over_sphere(rho, grid_size),
    }
}

/// Maximum over all unit directions n̂ of `I(ρ, (n̂·σ) ⊗ I)`.
pub fn max_skew_over_sphere(rho: &DensityMatrix, grid_size: usize) -> Result<f64> {
    let rest = first_qubit_dim(rho)?;
    let grid_size = grid_size.max(1);
    let root = matrix_sqrt_psd(rho.matrix())?;
    // [√ρ, (n̂·σ)⊗I] is linear in n̂: build the three basis commutators once.
    let basis: Vec<ComplexMatrix> = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        .into_iter()
        .map(|e| root.commutator(&local_observable(e, rest)?))
        .collect::<Result<_>>()?;
    let dim = rho.dim();
    let eval = |d: [f64; 3]| -> Result<f64> {
        let c: Vec<Complex64> = (0..dim * dim)
            .map(|k| {
                basis[0].as_slice()[k] * d[0]
                    + basis[1].as_slice()[k] * d[1]
                    + basis[2].as_slice()[k] * d[2]
            })
            .collect();
        let mut tr = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                tr += c[i * dim + j] * c[j * dim + i];
            }
        }
        let value = -0.5 * tr.re;
        if value < -SKEW_NEGATIVE_TOL {
            return Err(QcorrError::Numeric(format!(
                "negative skew information {value:e}"
            )));
        }
        Ok(value.max(0.0))
    };

    // Scheduling-independent argmax: ties go to the lower grid index.
    let scored: Vec<(f64, usize)> = (0..grid_size)
        .into_par_iter()
        .map(|i| eval(fibonacci_point(i, grid_size)).map(|v| (v, i)))
        .collect::<Result<_>>()?;
    let (mut best, best_idx) = scored
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .expect("grid is non-empty");
    let mut best_dir = fibonacci_point(best_idx, grid_size);

    // Pattern search: climb at the current step size, then halve it.
    let mut step = (4.0 * std::f64::consts::PI / grid_size as f64).sqrt();
    for _ in 0..REFINE_ITERATIONS {
        for _ in 0..MAX_MOVES_PER_STEP {
            let (t1, t2) = tangent_basis(best_dir);
            let mut moved = None;
            for (t, sign) in [(t1, 1.0), (t1, -1.0), (t2, 1.0), (t2, -1.0)] {
                let d = normalize([
                    best_dir[0] + sign * step * t[0],
                    best_dir[1] + sign * step * t[1],
                    best_dir[2] + sign * step * t[2],
                ]);
                let value = eval(d)?;
                if value > best {
                    best = value;
                    moved = Some(d);
                }
            }
            match moved {
                Some(d) => best_dir = d,
                None => break,
            }
        }
        step *= 0.5;
    }
    Ok(best)
}

/// Point `i` of an `n`-point golden-angle spiral on the unit sphere.
pub fn fibonacci_point(i: usize, n: usize) -> [f64; 3] {
    let golden_angle = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
    let r = (1.0 - z * z).max(0.0).sqrt();
    let phi = golden_angle * i as f64;
    [r * phi.cos(), r * phi.sin(), z]
}

fn normalize(d: [f64; 3]) -> [f64; 3] {
    let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    d.map(|x| x / n)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn tangent_basis(d: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if d[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let t1 = normalize(cross(d, helper));
    let t2 = cross(d, t1);
    (t1, t2)
}

/// Quantum consonance of a two-qubit state: the summed magnitude of the
/// entries `ρ_{ij,mn}` with i ≠ m and j ≠ n, taken in the local eigenbases of
/// the marginals.
pub fn consonance(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(QcorrError::Dimension(format!(
            "consonance needs a two-qubit state, dims are {:?}",
            rho.dims()
        )));
    }
    let m = rho.matrix();
    let marginal_a = partial_trace(m, &[2, 2], &[0])?;
    let marginal_b = partial_trace(m, &[2, 2], &[1])?;
    let diagonal = |x: &ComplexMatrix| x[(0, 1)].norm() < DIAGONAL_TOL;
    if diagonal(&marginal_a) && diagonal(&marginal_b) {
        return Ok(crossed_sum(m));
    }
    let w_a = hermitian_eig(&marginal_a)?.eigenvectors.adjoint();
    let w_b = hermitian_eig(&marginal_b)?.eigenvectors.adjoint();
    let w = tensor_product(&w_a, &w_b)?;
    let rotated = w.mat_mul(m)?.mat_mul(&w.adjoint())?;
    Ok(crossed_sum(&rotated))
}

fn crossed_sum(m: &ComplexMatrix) -> f64 {
    let mut total = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    if i != k && j != l {
                        total += m[(2 * i + j, 2 * k + l)].norm();
                    }
                }
            }
        }
    }
    total
}

/// Conjugates a state by a local unitary `u ⊗ I` (or any compatible unitary).
pub fn conjugate(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    let m = u.mat_mul(rho.matrix())?.mat_mul(&u.adjoint())?;
    DensityMatrix::new(m, rho.dims().to_vec())
}
