//! Hawking temperature, the Bogoliubov amplitudes of a single Dirac mode, and
//! the isometry that splits Bob's Kruskal qubit into the exterior/interior
//! mode pair (B_I, B_II).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QcorrError, Result};
use crate::matrix::ComplexMatrix;
use crate::state::DensityMatrix;

/// A monochromatic Dirac mode, natural units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldMode {
    omega: f64,
}

impl FieldMode {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(QcorrError::domain(
                "omega",
                omega,
                "mode frequency must be positive",
            ));
        }
        Ok(FieldMode { omega })
    }

    pub fn omega(self) -> f64 {
        self.omega
    }
}

/// Hawking temperature. Zero is the no-evaporation limit.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Temperature {
    t_hawking: f64,
}

impl Temperature {
    pub const ZERO: Temperature = Temperature { t_hawking: 0.0 };

    pub fn new(t_hawking: f64) -> Result<Self> {
        if t_hawking.is_nan() || t_hawking < 0.0 {
            return Err(QcorrError::domain(
                "t_hawking",
                t_hawking,
                "Hawking temperature must be non-negative",
            ));
        }
        Ok(Temperature { t_hawking })
    }

    pub fn value(self) -> f64 {
        self.t_hawking
    }
}

/// `T_H = 1/(8πM)`.
pub fn hawking_temperature(mass: f64) -> Result<Temperature> {
    if mass.is_nan() || mass <= 0.0 {
        return Err(QcorrError::domain(
            "mass",
            mass,
            "black-hole mass must be positive",
        ));
    }
    Temperature::new(1.0 / (8.0 * PI * mass))
}

/// The amplitudes ϖ (vacuum stays vacuum) and ε (pair excitation) of the
/// Kruskal vacuum written in the Schwarzschild modes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BogoliubovCoefficients {
    pub varpi: f64,
    pub epsilon: f64,
}

impl BogoliubovCoefficients {
    /// The frozen channel, T_H = 0.
    pub const IDENTITY: BogoliubovCoefficients = BogoliubovCoefficients {
        varpi: 1.0,
        epsilon: 0.0,
    };

    /// Accepts any non-negative pair on the unit circle.
    pub fn new(varpi: f64, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&varpi) {
            return Err(QcorrError::domain("varpi", varpi, "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(QcorrError::domain("epsilon", epsilon, "must lie in [0, 1]"));
        }
        if (varpi * varpi + epsilon * epsilon - 1.0).abs() > 1e-12 {
            return Err(QcorrError::domain(
                "epsilon",
                epsilon,
                "varpi^2 + epsilon^2 must equal 1",
            ));
        }
        Ok(BogoliubovCoefficients { varpi, epsilon })
    }

    pub fn normalization_defect(&self) -> f64 {
        (self.varpi * self.varpi + self.epsilon * self.epsilon - 1.0).abs()
    }
}

/// ϖ = (e^{−ω/T}+1)^{−1/2}, ε = (e^{ω/T}+1)^{−1/2}.
///
/// ε is evaluated as e^{−x/2}(1+e^{−x})^{−1/2} so that large ω/T never
/// overflows.
pub fn bogoliubov(mode: FieldMode, temp: Temperature) -> BogoliubovCoefficients {
    let t = temp.value();
    if t == 0.0 {
        return BogoliubovCoefficients::IDENTITY;
    }
    let x = mode.omega() / t;
    let e = (-x).exp();
    let inv = (1.0 + e).sqrt().recip();
    BogoliubovCoefficients {
        varpi: inv,
        epsilon: (-0.5 * x).exp() * inv,
    }
}

/// Images of the Kruskal basis states in the (B_I, B_II) two-mode space,
/// indexed `2p + q`:
/// |0⟩ ↦ ϖ|00⟩ + ε|11⟩ and |1⟩ ↦ |10⟩.
pub fn kruskal_basis_images(c: BogoliubovCoefficients) -> [[Complex64; 4]; 2] {
    let z = Complex64::new(0.0, 0.0);
    let r = |x: f64| Complex64::new(x, 0.0);
    [[r(c.varpi), z, z, r(c.epsilon)], [z, z, r(1.0), z]]
}

/// Applies `V = I_A ⊗ (|img0⟩⟨0| + |img1⟩⟨1|)` to a two-qubit state, giving the
/// A ⊗ B_I ⊗ B_II state `VρV†`.
pub fn dilate_second_qubit(
    rho_ab: &DensityMatrix,
    coeffs: BogoliubovCoefficients,
) -> Result<DensityMatrix> {
    if rho_ab.dims() != [2, 2] {
        return Err(QcorrError::State(format!(
            "expected a 2x2 bipartite state, got dims {:?}",
            rho_ab.dims()
        )));
    }
    let images = kruskal_basis_images(coeffs);
    // Column k = 2a + b of the 8x4 isometry is |a⟩ ⊗ image(b).
    let columns: Vec<[Complex64; 8]> = (0..4)
        .map(|k| {
            let (a, b) = (k / 2, k % 2);
            let mut col = [Complex64::new(0.0, 0.0); 8];
            col[4 * a..4 * a + 4].copy_from_slice(&images[b]);
            col
        })
        .collect();

    let rho = rho_ab.matrix();
    let mut out = ComplexMatrix::zeros(8);
    for k in 0..4 {
        for l in 0..4 {
            let r = rho[(k, l)];
            if r == Complex64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..8 {
                let left = r * columns[k][i];
                if left == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..8 {
                    out[(i, j)] += left * columns[l][j].conj();
                }
            }
        }
    }
    DensityMatrix::new(out, vec![2, 2, 2])
}
