#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qcorr::matrix::{pauli, tensor_product};
use qcorr::{ComplexMatrix, DensityMatrix};

/// `G G† / Tr(G G†)` with G having i.i.d. uniform complex entries.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..dim * dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let g = ComplexMatrix::from_rows(dim, data).unwrap();
    let m = g.mat_mul(&g.adjoint()).unwrap();
    let tr = m.trace().re;
    let m = m.scale_real(1.0 / tr);
    // exact Hermitian symmetrisation so validation tolerances are not at stake
    (&m + &m.adjoint()).scale_real(0.5)
}

pub fn random_two_qubit(rng: &mut ChaCha8Rng) -> DensityMatrix {
    DensityMatrix::new(random_density(rng, 4), vec![2, 2]).unwrap()
}

/// Random element of SU(2) from a uniformly drawn unit quaternion.
pub fn random_su2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let q: [f64; 4] = loop {
        let q = [0; 4].map(|_| rng.gen_range(-1.0..1.0));
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            break q.map(|x| x / n);
        }
    };
    let a = Complex64::new(q[0], q[1]);
    let b = Complex64::new(q[2], q[3]);
    ComplexMatrix::from_rows(2, vec![a, -b.conj(), b, a.conj()]).unwrap()
}

pub fn local_unitary(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    tensor_product(&random_su2(rng), &random_su2(rng)).unwrap()
}

pub fn conjugated(m: &ComplexMatrix, u: &ComplexMatrix) -> ComplexMatrix {
    u.mat_mul(m).unwrap().mat_mul(&u.adjoint()).unwrap()
}

/// Averages over Z⊗I and then X⊗I conjugation, which zeroes the first
/// qubit's Bloch vector while keeping the state generic otherwise.
pub fn twirl_first_qubit(m: &ComplexMatrix) -> ComplexMatrix {
    let [x, _, z] = pauli();
    let id = ComplexMatrix::identity(m.dim() / 2);
    let zi = tensor_product(&z, &id).unwrap();
    let xi = tensor_product(&x, &id).unwrap();
    let once = (m + &conjugated(m, &zi)).scale_real(0.5);
    (&once + &conjugated(&once, &xi)).scale_real(0.5)
}

pub fn random_unbiased_two_qubit(rng: &mut ChaCha8Rng) -> DensityMatrix {
    DensityMatrix::new(twirl_first_qubit(&random_density(rng, 4)), vec![2, 2]).unwrap()
}
