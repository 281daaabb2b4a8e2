#![allow(dead_code)]

use ebm_core::{Complex64, OneParticleOperator, SingleParticleVector, SpaceSpec, TwoParticleState};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

pub fn random_vector(rng: &mut impl Rng, space: SpaceSpec) -> SingleParticleVector {
    let v = DVector::from_fn(space.total_dim(), |_, _| gaussian(rng));
    SingleParticleVector::new(space, v).unwrap()
}

pub fn random_state(rng: &mut impl Rng, space: SpaceSpec) -> TwoParticleState {
    let v = DVector::from_fn(space.pair_dim(), |_, _| gaussian(rng));
    TwoParticleState::new(space, v).unwrap().normalized().unwrap()
}

/// Haar-ish unitary from the QR factor of a Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> DMatrix<Complex64> {
    random_matrix(rng, n).qr().q()
}

/// Orthogonal projector onto `rank` random orthonormal directions.
pub fn random_projector(rng: &mut impl Rng, space: SpaceSpec, rank: usize) -> OneParticleOperator {
    let n = space.total_dim();
    let q = random_unitary(rng, n);
    let cols = q.columns(0, rank);
    OneParticleOperator::new(space, cols * cols.adjoint()).unwrap()
}

/// Applies `U` to slot 1 and `V` to slot 2 through the coefficient matrix.
pub fn local_unitary(psi: &TwoParticleState, u: &DMatrix<Complex64>, v: &DMatrix<Complex64>) -> TwoParticleState {
    TwoParticleState::from_matrix(psi.space(), &(u * psi.to_matrix() * v.transpose())).unwrap()
}

/// Dense `A ⊗ B` on the flat slot-1-major layout.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    DMatrix::from_fn(n * n, n * n, |r, c| a[(r / n, c / n)] * b[(r % n, c % n)])
}

/// Dense exchange matrix on the flat layout.
pub fn swap_matrix(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n * n, n * n, |r, c| {
        let (i, j) = (r / n, r % n);
        if c == j * n + i {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn max_diff(a: &TwoParticleState, b: &TwoParticleState) -> f64 {
    a.max_abs_diff(b).unwrap()
}
