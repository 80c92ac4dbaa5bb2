//! Quantum consonance and uncertainty-induced nonlocality of a Gisin state
//! shared between an inertial observer and one hovering near a Schwarzschild
//! horizon, where Hawking decoherence splits the second mode into an exterior
//! (B_I) and interior (B_II) part.

pub mod error;
pub mod experiment;
pub mod hawking;
pub mod matrix;
pub mod measures;
pub mod state;

pub use error::{QcorrError, Result};
pub use hawking::{
    bogoliubov, hawking_temperature, BogoliubovCoefficients, FieldMode, Temperature,
};
pub use matrix::{ComplexMatrix, HermitianEigen};
pub use measures::{consonance, uin, uin_bruteforce, UinConvention};
pub use state::{Bipartition, DensityMatrix, GisinParams};
