//! Selective measurements `M = A ⊗ B` on the distinguishable two-particle space and the
//! local-operation / entanglement-by-measurement classification.
//!
//! For a reference state `ψ` (the distinguishable state the identical-particle state is
//! built from) the measurement produces two events, `Mψ` and `MPψ`. The classification is
//!
//! * exactly one event vanishes: [`VerdictKind::LocalOperation`];
//! * both vanish: [`VerdictKind::BothZero`];
//! * both survive and are orthogonal: [`VerdictKind::EntanglingMeasurement`];
//! * both survive and overlap: [`VerdictKind::NonOrthogonalEvents`].
//!
//! Zero tests are relative to `scale = ‖A‖·‖B‖·‖ψ‖`, with `‖·‖` the largest column norm,
//! so verdicts do not change under rescaling of the state or of either factor.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{plane_wave_extrinsic, OneParticleOperator, SpaceSpec, TwoParticleState, DEFAULT_TOL};
use crate::symmetry::{permute, sector, Statistics};

/// Tolerance for deciding that both factors are orthogonal projectors.
pub const PROJECTOR_TOL: f64 = 1e-10;

/// `M = A ⊗ B`, kept as its two unsymmetrized factors.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectiveMeasure {
    slot1: OneParticleOperator,
    slot2: OneParticleOperator,
}

impl SelectiveMeasure {
    pub fn new(slot1: OneParticleOperator, slot2: OneParticleOperator) -> Result<Self> {
        if slot1.space() != slot2.space() {
            return Err(Error::Dimension(
                "measurement factors act on different single-particle spaces".into(),
            ));
        }
        Ok(Self { slot1, slot2 })
    }

    pub fn identity(space: SpaceSpec) -> Self {
        Self {
            slot1: OneParticleOperator::identity(space),
            slot2: OneParticleOperator::identity(space),
        }
    }

    pub fn zeros(space: SpaceSpec) -> Self {
        Self {
            slot1: OneParticleOperator::zeros(space),
            slot2: OneParticleOperator::zeros(space),
        }
    }

    pub fn space(&self) -> SpaceSpec {
        self.slot1.space()
    }

    /// Factor acting on slot 1 (Alice's particle in reports).
    pub fn slot1(&self) -> &OneParticleOperator {
        &self.slot1
    }

    /// Factor acting on slot 2 (Bob's particle in reports).
    pub fn slot2(&self) -> &OneParticleOperator {
        &self.slot2
    }

    /// `B ⊗ A`.
    pub fn swapped(&self) -> Self {
        Self {
            slot1: self.slot2.clone(),
            slot2: self.slot1.clone(),
        }
    }

    /// Largest column norm of `A ⊗ B`, which factorizes as the product over the factors.
    pub fn scale(&self) -> f64 {
        self.slot1.max_column_norm() * self.slot2.max_column_norm()
    }

    /// Both factors Hermitian and idempotent within `tol`.
    pub fn is_projective(&self, tol: f64) -> bool {
        self.slot1.is_orthogonal_projector(tol) && self.slot2.is_orthogonal_projector(tol)
    }

    fn check_space(&self, psi: &TwoParticleState) -> Result<()> {
        if psi.space() != self.space() {
            return Err(Error::Dimension(
                "state and measurement live on different spaces".into(),
            ));
        }
        Ok(())
    }
}

/// `(A ⊗ B)|ψ⟩`, computed as `A C Bᵀ` on the coefficient matrix `C`.
pub fn apply_measure(m: &SelectiveMeasure, psi: &TwoParticleState) -> Result<TwoParticleState> {
    m.check_space(psi)?;
    let a = m.slot1.entries();
    let b = m.slot2.entries();
    Ok(psi.map_matrix(|c| a * c * b.transpose()))
}

/// The two events `Mψ` and `MPψ` for a reference state `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventPair {
    pub event_direct: TwoParticleState,
    pub event_permuted: TwoParticleState,
    pub norm_direct: f64,
    pub norm_permuted: f64,
    /// `⟨Mψ|MPψ⟩`.
    pub event_overlap: Complex64,
    /// `⟨ψ|MPψ⟩`, which equals `event_overlap` when `M†M = M`.
    pub state_overlap: Complex64,
}

impl EventPair {
    /// Whether the two overlap conventions agree within `tol`.
    pub fn overlaps_agree(&self, tol: f64) -> bool {
        (self.event_overlap - self.state_overlap).norm() < tol
    }
}

pub fn events(m: &SelectiveMeasure, psi_ref: &TwoParticleState) -> Result<EventPair> {
    let event_direct = apply_measure(m, psi_ref)?;
    let event_permuted = apply_measure(m, &permute(psi_ref))?;
    let event_overlap = event_direct.inner(&event_permuted)?;
    let state_overlap = psi_ref.inner(&event_permuted)?;
    Ok(EventPair {
        norm_direct: event_direct.norm(),
        norm_permuted: event_permuted.norm(),
        event_direct,
        event_permuted,
        event_overlap,
        state_overlap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    BothZero,
    /// Exactly one event vanishes: the measurement labels the particles without
    /// creating entanglement.
    LocalOperation,
    /// Both events survive and are orthogonal: entanglement by measurement.
    EntanglingMeasurement,
    /// Both events survive but overlap.
    NonOrthogonalEvents,
}

impl VerdictKind {
    pub fn name(self) -> &'static str {
        match self {
            VerdictKind::BothZero => "BothZero",
            VerdictKind::LocalOperation => "LocalOperation",
            VerdictKind::EntanglingMeasurement => "EntanglingMeasurement",
            VerdictKind::NonOrthogonalEvents => "NonOrthogonalEvents",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub tolerance_used: f64,
    /// `‖A‖·‖B‖·‖ψ‖` against which the event norms were compared.
    pub scale: f64,
}

/// Applies the classification rule to precomputed events.
pub fn classify_events(pair: &EventPair, scale: f64, tol: f64) -> Verdict {
    let threshold = tol * scale;
    let vanishes = |norm: f64| norm == 0.0 || norm < threshold;
    let kind = match (vanishes(pair.norm_direct), vanishes(pair.norm_permuted)) {
        (true, true) => VerdictKind::BothZero,
        (true, false) | (false, true) => VerdictKind::LocalOperation,
        (false, false) => {
            if pair.event_overlap.norm() < tol * scale * scale {
                VerdictKind::EntanglingMeasurement
            } else {
                VerdictKind::NonOrthogonalEvents
            }
        }
    };
    Verdict {
        kind,
        tolerance_used: tol,
        scale,
    }
}

pub fn classify(m: &SelectiveMeasure, psi_ref: &TwoParticleState, tol: f64) -> Result<Verdict> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Precondition(format!("tolerance must be positive, got {tol}")));
    }
    let pair = events(m, psi_ref)?;
    Ok(classify_events(&pair, m.scale() * psi_ref.norm(), tol))
}

/// Outcome of measuring `M` on the (anti)symmetrized state built from a reference state.
#[derive(Debug, Clone, PartialEq)]
pub struct Collapse {
    /// `M (1/√2)(1 ∓ P)ψ`, keeping the `1/√2` convention.
    pub raw: TwoParticleState,
    pub normalized: TwoParticleState,
    /// `‖raw‖²`; a Born probability only when [`Collapse::projective`] holds.
    pub probability: f64,
    pub projective: bool,
}

impl Collapse {
    pub fn probability_label(&self) -> &'static str {
        if self.projective {
            "probability"
        } else {
            "squared event norm"
        }
    }
}

pub fn collapse(m: &SelectiveMeasure, psi_ref: &TwoParticleState, stat: Statistics) -> Result<Collapse> {
    collapse_with_tol(m, psi_ref, stat, DEFAULT_TOL)
}

pub fn collapse_with_tol(
    m: &SelectiveMeasure,
    psi_ref: &TwoParticleState,
    stat: Statistics,
    tol: f64,
) -> Result<Collapse> {
    m.check_space(psi_ref)?;
    let prepared = sector(psi_ref, stat);
    let prepared_norm = prepared.norm();
    if prepared_norm == 0.0 || prepared_norm < tol * psi_ref.norm() {
        return Err(Error::DegenerateInput(format!(
            "the {stat} sector of the reference state is empty"
        )));
    }
    let raw = apply_measure(m, &prepared)?;
    let raw_norm = raw.norm();
    if raw_norm == 0.0 || raw_norm < tol * m.scale() * prepared_norm {
        return Err(Error::ImpossibleOutcome(
            "the selected outcome has zero weight".into(),
        ));
    }
    let normalized = raw.normalized()?;
    Ok(Collapse {
        probability: raw_norm * raw_norm,
        projective: m.is_projective(PROJECTOR_TOL),
        raw,
        normalized,
    })
}

/// Lattice sites covered by a window of `width` sites centred on `center`, wrapping
/// periodically. Widths beyond the lattice cover every site once.
pub fn window_sites(center: usize, width: usize, sites: usize) -> Result<Vec<usize>> {
    if center >= sites {
        return Err(Error::Range(format!("window centre {center} out of range 0..{sites}")));
    }
    if width == 0 {
        return Err(Error::Range("window width must be at least one site".into()));
    }
    if width >= sites {
        return Ok((0..sites).collect());
    }
    if width.is_multiple_of(2) {
        return Err(Error::Range(format!(
            "window width must be an odd number of sites, got {width}"
        )));
    }
    let half = width / 2;
    let mut out: Vec<usize> = (0..width)
        .map(|k| (center + sites - half + k) % sites)
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// `(Σ_{x in window} |x⟩⟨x|) ⊗ 1_spin`.
pub fn window_projector(center: usize, width: usize, space: SpaceSpec) -> Result<OneParticleOperator> {
    let sites = space.extrinsic_dim();
    let mut diag = DMatrix::zeros(sites, sites);
    for x in window_sites(center, width, sites)? {
        diag[(x, x)] = Complex64::new(1.0, 0.0);
    }
    OneParticleOperator::from_extrinsic(space, &diag)
}

/// `|k⟩⟨k| ⊗ 1_spin` for lattice momentum mode `mode`.
pub fn momentum_factor(mode: usize, space: SpaceSpec) -> Result<OneParticleOperator> {
    let wave = plane_wave_extrinsic(mode, space.extrinsic_dim())?;
    OneParticleOperator::from_extrinsic(space, &(&wave * wave.adjoint()))
}

/// `|k_{m1} k_{m2}⟩⟨k_{m1} k_{m2}|`, identity on both spins.
pub fn momentum_projector(m1: usize, m2: usize, space: SpaceSpec) -> Result<SelectiveMeasure> {
    SelectiveMeasure::new(momentum_factor(m1, space)?, momentum_factor(m2, space)?)
}

/// Position windows around `x_a` (slot 1) and `x_b` (slot 2).
pub fn position_windows(
    x_a: usize,
    x_b: usize,
    width: usize,
    space: SpaceSpec,
) -> Result<SelectiveMeasure> {
    SelectiveMeasure::new(
        window_projector(x_a, width, space)?,
        window_projector(x_b, width, space)?,
    )
}
