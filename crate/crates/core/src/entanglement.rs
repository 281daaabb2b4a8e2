//! Entanglement diagnostics on the slot bipartition: Schmidt spectrum and entropy,
//! reduced density matrices, and the Slater rank of antisymmetric states.
//!
//! These quantities are one operationalization of "entangled" for two identical
//! particles: Schmidt rank and entropy across the two tensor slots, plus the Slater rank
//! for fermionic states. Symmetric states get the plain Schmidt data with a caution flag,
//! since no bosonic measure is singled out here.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::TwoParticleState;
use crate::measurement::{apply_measure, collapse_with_tol, SelectiveMeasure};
use crate::symmetry::{is_antisymmetric, is_symmetric, Statistics};
use crate::hilbert::DEFAULT_TOL;

/// Relative singular-value cutoff for rank counting.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    /// Schmidt coefficients of the normalized state, descending.
    pub singular_values: Vec<f64>,
    pub schmidt_rank: usize,
    /// Entropy of the squared Schmidt spectrum, in nats.
    pub entropy: f64,
    /// Present when the state is antisymmetric.
    pub slater_rank: Option<usize>,
    /// Set for exchange-symmetric states, whose Schmidt data is not a committed
    /// bosonic entanglement measure.
    pub symmetric_caution: bool,
}

/// Which tensor slot to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
}

fn nonzero(psi: &TwoParticleState) -> Result<()> {
    if psi.norm() == 0.0 {
        return Err(Error::DegenerateInput("zero two-particle state".into()));
    }
    Ok(())
}

/// `C[i][j] = ψ(i, j)`.
pub fn coefficient_matrix(psi: &TwoParticleState) -> Result<DMatrix<Complex64>> {
    nonzero(psi)?;
    Ok(psi.to_matrix())
}

fn sorted_singular_values(m: DMatrix<Complex64>) -> Vec<f64> {
    let mut values: Vec<f64> = m.singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

fn count_above(values: &[f64], tol: f64) -> usize {
    let max = values.first().copied().unwrap_or(0.0);
    values.iter().filter(|&&s| s > tol * max).count()
}

/// Shannon entropy (nats) of a weight vector, with `0 ln 0 = 0`.
fn shannon(weights: impl IntoIterator<Item = f64>) -> f64 {
    weights
        .into_iter()
        .filter(|&w| w > 0.0)
        .map(|w| -w * w.ln())
        .sum::<f64>()
        .max(0.0)
}

pub fn schmidt(psi: &TwoParticleState, tol: f64) -> Result<EntanglementReport> {
    nonzero(psi)?;
    let normalized = psi.normalized()?;
    let singular_values = sorted_singular_values(normalized.to_matrix());
    let total: f64 = singular_values.iter().map(|s| s * s).sum();
    let entropy = shannon(singular_values.iter().map(|s| s * s / total));
    let schmidt_rank = count_above(&singular_values, tol);
    let slater_rank = if is_antisymmetric(psi, tol) {
        slater_rank(psi, tol).ok()
    } else {
        None
    };
    Ok(EntanglementReport {
        schmidt_rank,
        entropy,
        slater_rank,
        symmetric_caution: is_symmetric(psi, tol),
        singular_values,
    })
}

/// Number of elementary Slater determinants in an antisymmetric two-particle state.
///
/// The singular values of an antisymmetric coefficient matrix come in equal pairs, so
/// the Slater rank is half the Schmidt rank.
pub fn slater_rank(psi: &TwoParticleState, tol: f64) -> Result<usize> {
    nonzero(psi)?;
    if !is_antisymmetric(psi, tol) {
        return Err(Error::Precondition(
            "Slater rank needs an antisymmetric state".into(),
        ));
    }
    let values = sorted_singular_values(psi.to_matrix());
    let count = count_above(&values, tol);
    if count % 2 == 1 {
        return Err(Error::NumericalDegeneracy(format!(
            "odd number ({count}) of nonzero singular values in an antisymmetric state"
        )));
    }
    Ok(count / 2)
}

/// Partial trace of `|ψ⟩⟨ψ|/⟨ψ|ψ⟩` over the other slot.
pub fn reduced_density(psi: &TwoParticleState, keep: Slot) -> Result<DMatrix<Complex64>> {
    nonzero(psi)?;
    let c = psi.normalized()?.to_matrix();
    Ok(match keep {
        // ρ₁[i][i'] = Σ_j C[i][j] C*[i'][j]
        Slot::First => &c * c.adjoint(),
        // ρ₂[j][j'] = Σ_i C[i][j] C*[i][j']
        Slot::Second => c.transpose() * c.map(|z| z.conj()),
    })
}

/// `-Tr ρ ln ρ` for a Hermitian density matrix, in nats.
pub fn von_neumann_entropy(rho: &DMatrix<Complex64>) -> f64 {
    let eigen = SymmetricEigen::new(rho.clone());
    shannon(eigen.eigenvalues.iter().copied())
}

/// Schmidt ranks before and after (anti)symmetrization of a measured reference state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EbmEvidence {
    /// Rank of the normalized distinguishable event `Mψ`.
    pub rank_before: usize,
    /// Rank of the normalized collapsed identical-particle state.
    pub rank_after: usize,
    pub entangled_by_measure: bool,
}

pub fn ebm_evidence(
    m: &SelectiveMeasure,
    psi_ref: &TwoParticleState,
    stat: Statistics,
    tol: f64,
) -> Result<EbmEvidence> {
    let direct = apply_measure(m, psi_ref)?;
    let scale = m.scale() * psi_ref.norm();
    if direct.norm() == 0.0 || direct.norm() < DEFAULT_TOL * scale {
        return Err(Error::DegenerateInput(
            "the direct event vanishes; no distinguishable outcome to compare".into(),
        ));
    }
    let collapsed = collapse_with_tol(m, psi_ref, stat, DEFAULT_TOL)?;
    let rank_before = schmidt(&direct, tol)?.schmidt_rank;
    let rank_after = schmidt(&collapsed.normalized, tol)?.schmidt_rank;
    Ok(EbmEvidence {
        rank_before,
        rank_after,
        entangled_by_measure: rank_after > rank_before,
    })
}
