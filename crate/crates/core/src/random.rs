//! Random states and local operators for property tests and sampling sweeps.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, CMatrix};
use crate::tensor::{DensityOperator, StateVector};

/// Deterministic generator for a (seed, stream) pair.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> StateVector {
    let total = dims.iter().product();
    let amps = (0..total).map(|_| complex_gaussian(rng)).collect();
    StateVector::normalized(dims.to_vec(), amps).expect("gaussian vector is nonzero")
}

/// Product of independent Haar-random factors.
pub fn random_product_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> StateVector {
    let factors: Vec<StateVector> = dims.iter().map(|&d| random_state(&[d], rng)).collect();
    StateVector::product(&factors).expect("valid factors")
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase correction.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(d, d, rng).qr();
    let (q, r) = qr.unpack();
    let phases = DVector::from_iterator(
        d,
        (0..d).map(|i| {
            let x = r[(i, i)];
            if x.norm() > 0.0 {
                x / x.norm()
            } else {
                linalg::ONE
            }
        }),
    );
    q * CMatrix::from_diagonal(&phases)
}

/// Unit-determinant operator `exp(scale · X)` with `X` a traceless Gaussian matrix.
pub fn random_sl<R: Rng + ?Sized>(d: usize, scale: f64, rng: &mut R) -> CMatrix {
    let mut x = ginibre(d, d, rng);
    let shift = linalg::trace(&x) / d as f64;
    for i in 0..d {
        x[(i, i)] -= shift;
    }
    x.scale(scale / (2.0 * d as f64).sqrt()).exp()
}

/// Mixed state from tracing out an ancilla of dimension `rank`.
pub fn random_density<R: Rng + ?Sized>(dims: &[usize], rank: usize, rng: &mut R) -> DensityOperator {
    let total: usize = dims.iter().product();
    let g = ginibre(total, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m).re;
    DensityOperator::from_parts_unchecked(dims.to_vec(), linalg::hermitian_part(&m.unscale(tr)))
}

/// Probability vector drawn uniformly from the simplex.
pub fn random_probabilities<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = rng_for(1, 0);
        let u = random_unitary(4, &mut rng);
        assert!((&u * u.adjoint() - CMatrix::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn sl_has_unit_determinant() {
        let mut rng = rng_for(2, 0);
        for _ in 0..10 {
            let a = random_sl(2, 1.0, &mut rng);
            assert!((a.determinant() - linalg::ONE).norm() < 1e-10);
        }
    }

    #[test]
    fn density_is_valid() {
        let mut rng = rng_for(3, 0);
        let rho = random_density(&[2, 2, 2], 3, &mut rng);
        DensityOperator::new(rho.dims().to_vec(), rho.matrix().clone()).unwrap();
    }
}
