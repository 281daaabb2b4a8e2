//! Selective measurements on systems of two identical particles.
//!
//! A measurement `M = A ⊗ B` that is not symmetrized under exchange can label identical
//! particles by an extrinsic property (momentum, position). Depending on the two events
//! `Mψ` and `MPψ` it either acts as a local operation or entangles the particles' other
//! degrees of freedom. This crate provides the two-particle state space, the
//! (anti)symmetrization maps, the classifier, collapse, entanglement diagnostics, and
//! runnable lattice versions of a momentum-projection and a position-window example.

pub mod entanglement;
pub mod error;
pub mod hilbert;
pub mod measurement;
pub mod scenarios;
pub mod symmetry;

pub use entanglement::{
    coefficient_matrix, ebm_evidence, reduced_density, schmidt, slater_rank, von_neumann_entropy,
    EbmEvidence, EntanglementReport, Slot, DEFAULT_RANK_TOL,
};
pub use error::{Error, Result};
pub use hilbert::{
    inner_product, plane_wave, tensor_state, OneParticleOperator, SingleParticleVector, SpaceSpec,
    TwoParticleState, DEFAULT_TOL,
};
pub use measurement::{
    apply_measure, classify, collapse, events, momentum_projector, position_windows,
    window_projector, Collapse, EventPair, SelectiveMeasure, Verdict, VerdictKind,
};
pub use scenarios::{
    build_pair_state, relabel_distinguishable, scenario_momentum_projection,
    scenario_position_windows, Label, PhaseCheck, ScenarioResult,
};
pub use symmetry::{orthogonal_sum_check, permutation_overlap, permute, sector, Statistics};

pub use num_complex::Complex64;
