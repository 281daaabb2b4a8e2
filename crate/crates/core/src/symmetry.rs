//! Exchange of the two tensor slots and the fermion/boson sectors built from it.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::TwoParticleState;

/// Exchange statistics of the identical particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Fermion,
    Boson,
}

impl Statistics {
    /// Eigenvalue of the permutation operator on this sector: -1 for fermions, +1 for bosons.
    pub fn exchange_sign(self) -> f64 {
        match self {
            Statistics::Fermion => -1.0,
            Statistics::Boson => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Statistics::Fermion => "fermion",
            Statistics::Boson => "boson",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fermion" | "fermions" => Ok(Statistics::Fermion),
            "boson" | "bosons" => Ok(Statistics::Boson),
            other => Err(Error::Precondition(format!("unknown statistics '{other}'"))),
        }
    }
}

/// `P|ψ⟩`: the amplitude at `(i, j)` becomes the input amplitude at `(j, i)`.
pub fn permute(psi: &TwoParticleState) -> TwoParticleState {
    psi.map_matrix(|m| m.transpose())
}

/// `(1/√2)(1 ∓ P)|ψ⟩`, minus for fermions and plus for bosons.
///
/// The prefactor is fixed at `1/√2` and the result is never renormalized, so it has
/// unit norm only when `‖ψ‖ = 1` and `⟨ψ|P|ψ⟩ = 0`. A zero result (for example,
/// antisymmetrizing a doubly occupied mode) is returned as is.
pub fn sector(psi: &TwoParticleState, stat: Statistics) -> TwoParticleState {
    let sign = stat.exchange_sign();
    psi.map_matrix(|m| (&m + m.transpose() * Complex64::new(sign, 0.0)) * Complex64::new(FRAC_1_SQRT_2, 0.0))
}

/// `⟨ψ|P|ψ⟩`.
pub fn permutation_overlap(psi: &TwoParticleState) -> Complex64 {
    // same space by construction
    psi.inner(&permute(psi)).expect("permuted state shares the space")
}

/// Residual `‖ψ − (1/√2)[ψ_fermion + ψ_boson]‖` of the orthogonal-sum decomposition.
pub fn orthogonal_sum_check(psi: &TwoParticleState) -> f64 {
    let fermion = sector(psi, Statistics::Fermion);
    let boson = sector(psi, Statistics::Boson);
    let rebuilt = fermion
        .plus(&boson)
        .expect("sectors share the space")
        .scaled(Complex64::new(FRAC_1_SQRT_2, 0.0));
    psi.minus(&rebuilt).expect("sectors share the space").norm()
}

/// `‖ψ − sign·Pψ‖ / ‖ψ‖`; zero for eigenvectors of `P` with eigenvalue `sign`.
pub(crate) fn exchange_defect(psi: &TwoParticleState, stat: Statistics) -> f64 {
    let norm = psi.norm();
    if norm == 0.0 {
        return 0.0;
    }
    let swapped = permute(psi).scaled(Complex64::new(stat.exchange_sign(), 0.0));
    psi.minus(&swapped).expect("same space").norm() / norm
}

/// True when `Pψ = -ψ` within `tol` relative to `‖ψ‖`.
pub fn is_antisymmetric(psi: &TwoParticleState, tol: f64) -> bool {
    exchange_defect(psi, Statistics::Fermion) < tol
}

/// True when `Pψ = ψ` within `tol` relative to `‖ψ‖`.
pub fn is_symmetric(psi: &TwoParticleState, tol: f64) -> bool {
    exchange_defect(psi, Statistics::Boson) < tol
}
