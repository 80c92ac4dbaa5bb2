//! The Gisin state, its image under the Hawking channel, and the three
//! two-mode reductions. Every state is available in closed form and, for
//! cross-validation, by construction through the channel and partial trace.
//!
//! Tripartite basis: `|o p q⟩ = |o⟩_A |p⟩_{B_I} |q⟩_{B_II}` at index `4o + 2p + q`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QcorrError, Result};
use crate::hawking::{dilate_second_qubit, BogoliubovCoefficients};
use crate::matrix::{hermitian_eig, partial_trace, ComplexMatrix};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// A validated density matrix together with its subsystem layout.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Checks hermiticity, unit trace and positivity before accepting.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let product: usize = dims.iter().product();
        if dims.is_empty() || product != matrix.dim() {
            return Err(QcorrError::State(format!(
                "subsystem dims {dims:?} do not match a {0}x{0} matrix",
                matrix.dim()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(QcorrError::State(format!(
                "not Hermitian (defect {defect:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(QcorrError::State(format!("trace {tr} differs from 1")));
        }
        let w_min = hermitian_eig(&matrix)?.min_eigenvalue();
        if w_min < -PSD_TOL {
            return Err(QcorrError::State(format!("negative eigenvalue {w_min:e}")));
        }
        Ok(DensityMatrix { matrix, dims })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Reduced state on the subsystems in `keep`.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = partial_trace(&self.matrix, &self.dims, keep)?;
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        DensityMatrix::new(m, dims)
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// Knobs of the Gisin family: mixing λ ∈ [0, 1] and angle ψ ∈ [0, π/2].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GisinParams {
    lambda: f64,
    psi: f64,
}

impl GisinParams {
    pub fn new(lambda: f64, psi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(QcorrError::domain("lambda", lambda, "must lie in [0, 1]"));
        }
        if !(0.0..=FRAC_PI_2).contains(&psi) {
            return Err(QcorrError::domain("psi", psi, "must lie in [0, pi/2]"));
        }
        Ok(GisinParams { lambda, psi })
    }

    pub fn lambda(self) -> f64 {
        self.lambda
    }

    pub fn psi(self) -> f64 {
        self.psi
    }
}

/// Which pair of modes a two-qubit state describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bipartition {
    /// A·B before the channel acts.
    Initial,
    /// A·B_I, physically accessible.
    Accessible,
    /// A·B_II, physically inaccessible.
    Inaccessible,
    /// B_I·B_II.
    Spacetime,
}

impl Bipartition {
    pub const ALL: [Bipartition; 4] = [
        Bipartition::Initial,
        Bipartition::Accessible,
        Bipartition::Inaccessible,
        Bipartition::Spacetime,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Bipartition::Initial => "initial",
            Bipartition::Accessible => "accessible",
            Bipartition::Inaccessible => "inaccessible",
            Bipartition::Spacetime => "spacetime",
        }
    }

    /// Subsystems of the A·B_I·B_II state kept by this reduction, first
    /// subsystem first.
    pub fn kept_modes(self) -> Option<[usize; 2]> {
        match self {
            Bipartition::Initial => None,
            Bipartition::Accessible => Some([0, 1]),
            Bipartition::Inaccessible => Some([0, 2]),
            Bipartition::Spacetime => Some([1, 2]),
        }
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Bipartition {
    type Err = QcorrError;

    fn from_str(s: &str) -> Result<Self> {
        Bipartition::ALL
            .into_iter()
            .find(|b| b.label() == s)
            .ok_or_else(|| QcorrError::Usage(format!("unknown region '{s}'")))
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Adds `value` to `|row⟩⟨col|` and to its Hermitian conjugate.
fn add_pair(m: &mut ComplexMatrix, row: usize, col: usize, value: f64) {
    m[(row, col)] += real(value);
    m[(col, row)] += real(value);
}

/// ρ = λ|φ_ψ⟩⟨φ_ψ| + (1−λ)/2 (|00⟩⟨00| + |11⟩⟨11|), |φ_ψ⟩ = sinψ|01⟩ + cosψ|10⟩.
pub fn gisin_state(p: GisinParams) -> Result<DensityMatrix> {
    let (l, s, c) = (p.lambda, p.psi.sin(), p.psi.cos());
    let noise = (1.0 - l) / 2.0;
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = real(noise);
    m[(3, 3)] = real(noise);
    m[(1, 1)] = real(l * s * s);
    m[(2, 2)] = real(l * c * c);
    add_pair(&mut m, 1, 2, l * s * c);
    DensityMatrix::new(m, vec![2, 2])
}

/// Closed form of the Gisin state after Bob's mode passes through the Hawking
/// channel, term by term.
pub fn evolved_tripartite(p: GisinParams, k: BogoliubovCoefficients) -> Result<DensityMatrix> {
    let (l, s, c) = (p.lambda, p.psi.sin(), p.psi.cos());
    let (w, e) = (k.varpi, k.epsilon);
    let noise = (1.0 - l) / 2.0;
    let mut m = ComplexMatrix::zeros(8);
    const K000: usize = 0b000;
    const K010: usize = 0b010;
    const K011: usize = 0b011;
    const K100: usize = 0b100;
    const K110: usize = 0b110;
    const K111: usize = 0b111;

    // (1−λ)/2 ( ϖ²|000⟩⟨000| + ϖε(|000⟩⟨011| + h.c.) + ε²|011⟩⟨011| + |110⟩⟨110| )
    m[(K000, K000)] += real(noise * w * w);
    add_pair(&mut m, K000, K011, noise * w * e);
    m[(K011, K011)] += real(noise * e * e);
    m[(K110, K110)] += real(noise);

    // λcos²ψ ( ϖ²|100⟩⟨100| + ϖε(|100⟩⟨111| + h.c.) + ε²|111⟩⟨111| )
    m[(K100, K100)] += real(l * c * c * w * w);
    add_pair(&mut m, K100, K111, l * c * c * w * e);
    m[(K111, K111)] += real(l * c * c * e * e);

    // λsin²ψ |010⟩⟨010|
    m[(K010, K010)] += real(l * s * s);

    // λ sinψ cosψ ( ϖ(|010⟩⟨100| + h.c.) + ε(|010⟩⟨111| + h.c.) )
    add_pair(&mut m, K010, K100, l * s * c * w);
    add_pair(&mut m, K010, K111, l * s * c * e);

    DensityMatrix::new(m, vec![2, 2, 2])
}

/// The same tripartite state built by pushing the Gisin state through the
/// dilation isometry.
pub fn evolved_via_channel(p: GisinParams, k: BogoliubovCoefficients) -> Result<DensityMatrix> {
    dilate_second_qubit(&gisin_state(p)?, k)
}

/// Closed-form two-mode reduction. `Initial` returns the Gisin state.
pub fn reduced_state(
    p: GisinParams,
    k: BogoliubovCoefficients,
    which: Bipartition,
) -> Result<DensityMatrix> {
    let (l, s, c) = (p.lambda, p.psi.sin(), p.psi.cos());
    let (w, e) = (k.varpi, k.epsilon);
    let noise = (1.0 - l) / 2.0;
    let mut m = ComplexMatrix::zeros(4);
    match which {
        Bipartition::Initial => return gisin_state(p),
        Bipartition::Accessible => {
            m[(0, 0)] = real(noise * w * w);
            m[(1, 1)] = real(noise * e * e + l * s * s);
            m[(2, 2)] = real(l * c * c * w * w);
            add_pair(&mut m, 1, 2, l * s * c * w);
            m[(3, 3)] = real(noise + l * c * c * e * e);
        }
        Bipartition::Inaccessible => {
            m[(0, 0)] = real(noise * w * w + l * s * s);
            m[(1, 1)] = real(noise * e * e);
            m[(2, 2)] = real(noise + l * c * c * w * w);
            m[(3, 3)] = real(l * c * c * e * e);
            add_pair(&mut m, 0, 3, l * s * c * e);
        }
        Bipartition::Spacetime => {
            let weight = noise + l * c * c;
            m[(0, 0)] = real(weight * w * w);
            add_pair(&mut m, 0, 3, weight * w * e);
            m[(2, 2)] = real(noise + l * s * s);
            m[(3, 3)] = real(weight * e * e);
        }
    }
    DensityMatrix::new(m, vec![2, 2])
}

/// Reduction computed as a partial trace of the channel output.
pub fn reduced_state_via_trace(
    p: GisinParams,
    k: BogoliubovCoefficients,
    which: Bipartition,
) -> Result<DensityMatrix> {
    match which.kept_modes() {
        None => gisin_state(p),
        Some(keep) => evolved_via_channel(p, k)?.reduce(&keep),
    }
}
