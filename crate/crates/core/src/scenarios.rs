//! End-to-end runs of the two worked examples on a periodic lattice.
//!
//! Both start from a pair of spin-1/2 particles in plane waves `|k_a ↑⟩` and `|k_b ↓⟩`.
//! The momentum scenario measures with `|k_a k_b⟩⟨k_a k_b|` (a local operation); the
//! position scenario measures with two disjoint site windows, which entangles position
//! with spin. Spin index 0 is ↑ and 1 is ↓.

use std::f64::consts::{PI, TAU};

use nalgebra::DVector;
use num_complex::Complex64;

use crate::entanglement::{ebm_evidence, schmidt, EbmEvidence, EntanglementReport, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::hilbert::{
    plane_wave, plane_wave_extrinsic, tensor_state, SpaceSpec, TwoParticleState, DEFAULT_TOL,
};
use crate::measurement::{
    classify_events, collapse, events, momentum_projector, position_windows, window_sites, EventPair,
    Verdict,
};
use crate::symmetry::{sector, Statistics};

pub const SPIN_UP: usize = 0;
pub const SPIN_DOWN: usize = 1;

/// Comparison of the measured relative amplitude against `∓e^{-iΔkΔx}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCheck {
    /// Coefficient of `|x_A↓, x_B↑⟩` over that of `|x_A↑, x_B↓⟩`.
    pub measured: Complex64,
    pub predicted: Complex64,
    pub deviation: f64,
    /// `k_b − k_a`.
    pub delta_k: f64,
    /// Minimal signed displacement `x_B − x_A` on the ring.
    pub delta_x: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub events: EventPair,
    pub verdict: Verdict,
    pub probability: f64,
    /// Raw post-measurement state, keeping the `1/√2` prefactor.
    pub post_state: TwoParticleState,
    pub normalized_post_state: TwoParticleState,
    /// Diagnostics of the normalized post-measurement state.
    pub report: EntanglementReport,
    pub evidence: EbmEvidence,
    pub phase_check: Option<PhaseCheck>,
    /// Spin state after using the measured extrinsic labels to tell the particles apart.
    pub relabeled: Option<TwoParticleState>,
    pub windows_overlap: bool,
}

/// An extrinsic value used as a particle label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Site(usize),
    Momentum(usize),
}

impl Label {
    fn extrinsic(self, sites: usize) -> Result<DVector<Complex64>> {
        match self {
            Label::Site(x) => {
                if x >= sites {
                    return Err(Error::Range(format!("site {x} out of range 0..{sites}")));
                }
                let mut v = DVector::zeros(sites);
                v[x] = Complex64::new(1.0, 0.0);
                Ok(v)
            }
            Label::Momentum(m) => plane_wave_extrinsic(m, sites),
        }
    }
}

/// `−k` on the ring: mode `L − m`.
pub fn opposite_mode(mode: usize, sites: usize) -> usize {
    (sites - mode % sites) % sites
}

/// `(1/√2)[|k_a s_a⟩|k_b s_b⟩ ∓ |k_b s_b⟩|k_a s_a⟩]`, minus for fermions.
pub fn build_pair_state(
    m_a: usize,
    m_b: usize,
    spin_a: usize,
    spin_b: usize,
    stat: Statistics,
    space: SpaceSpec,
) -> Result<TwoParticleState> {
    if (m_a, spin_a) == (m_b, spin_b) {
        return Err(match stat {
            Statistics::Fermion => Error::DegenerateInput(
                "two fermions cannot share a momentum and spin".into(),
            ),
            Statistics::Boson => Error::Precondition(
                "pair state needs two distinct single-particle modes".into(),
            ),
        });
    }
    let reference = momentum_reference(m_a, m_b, spin_a, spin_b, space)?;
    Ok(sector(&reference, stat))
}

fn momentum_reference(
    m_a: usize,
    m_b: usize,
    spin_a: usize,
    spin_b: usize,
    space: SpaceSpec,
) -> Result<TwoParticleState> {
    tensor_state(&plane_wave(m_a, spin_a, space)?, &plane_wave(m_b, spin_b, space)?)
}

/// Projects `post_state` onto the given slot labels and returns the remaining spin state,
/// normalized, on a space with a single extrinsic value.
pub fn relabel_distinguishable(
    post_state: &TwoParticleState,
    labels: (Label, Label),
) -> Result<TwoParticleState> {
    let space = post_state.space();
    let norm = post_state.norm();
    if norm == 0.0 {
        return Err(Error::DegenerateInput("cannot relabel the zero state".into()));
    }
    let sites = space.extrinsic_dim();
    let spins = space.spin_dim();
    let first = labels.0.extrinsic(sites)?;
    let second = labels.1.extrinsic(sites)?;

    let mut block: DVector<Complex64> = DVector::zeros(spins * spins);
    for ((i, j), amp) in post_state.iter() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let (x1, s1) = space.mode(i)?;
        let (x2, s2) = space.mode(j)?;
        block[s1 * spins + s2] += first[x1].conj() * second[x2].conj() * amp;
    }
    let captured = block.norm();
    let outside = (norm * norm - captured * captured).max(0.0).sqrt();
    if outside > DEFAULT_TOL.sqrt() * norm {
        return Err(Error::Precondition(format!(
            "state has weight {:.3e} outside the labelled extrinsic values",
            (outside / norm).powi(2)
        )));
    }
    TwoParticleState::new(SpaceSpec::new(1, spins)?, block)?.normalized()
}

struct Measured {
    events: EventPair,
    verdict: Verdict,
    probability: f64,
    post_state: TwoParticleState,
    normalized_post_state: TwoParticleState,
    report: EntanglementReport,
    evidence: EbmEvidence,
}

fn measure(
    m: &crate::measurement::SelectiveMeasure,
    reference: &TwoParticleState,
    stat: Statistics,
) -> Result<Measured> {
    let pair = events(m, reference)?;
    let verdict = classify_events(&pair, m.scale() * reference.norm(), DEFAULT_TOL);
    let outcome = collapse(m, reference, stat)?;
    let report = schmidt(&outcome.normalized, DEFAULT_RANK_TOL)?;
    let evidence = ebm_evidence(m, reference, stat, DEFAULT_RANK_TOL)?;
    Ok(Measured {
        events: pair,
        verdict,
        probability: outcome.probability,
        post_state: outcome.raw,
        normalized_post_state: outcome.normalized,
        report,
        evidence,
    })
}

/// Pair in momenta `k_a↑`, `k_b↓`, measured with `|k_a k_b⟩⟨k_a k_b|`.
pub fn scenario_momentum_projection(
    space: SpaceSpec,
    m_a: usize,
    m_b: usize,
    stat: Statistics,
) -> Result<ScenarioResult> {
    if m_a == m_b {
        return Err(Error::DegenerateInput(
            "momentum labels must differ to tell the particles apart".into(),
        ));
    }
    let reference = momentum_reference(m_a, m_b, SPIN_UP, SPIN_DOWN, space)?;
    let m = momentum_projector(m_a, m_b, space)?;
    let run = measure(&m, &reference, stat)?;
    let relabeled = relabel_distinguishable(&run.post_state, (Label::Momentum(m_a), Label::Momentum(m_b)))?;
    Ok(ScenarioResult {
        events: run.events,
        verdict: run.verdict,
        probability: run.probability,
        post_state: run.post_state,
        normalized_post_state: run.normalized_post_state,
        report: run.report,
        evidence: run.evidence,
        phase_check: None,
        relabeled: Some(relabeled),
        windows_overlap: false,
    })
}

/// Minimal signed displacement `to − from` on a ring of `sites` points.
pub fn ring_displacement(from: usize, to: usize, sites: usize) -> i64 {
    let l = sites as i64;
    let d = (to as i64 - from as i64).rem_euclid(l);
    if d > l / 2 {
        d - l
    } else {
        d
    }
}

/// Pair in momenta `k_a↑`, `k_b↓`, measured with position windows at `x_a` (slot 1) and
/// `x_b` (slot 2).
///
/// Single-site, non-overlapping windows also produce a [`PhaseCheck`] and the relabeled
/// spin state.
#[allow(clippy::too_many_arguments)]
pub fn scenario_position_windows(
    space: SpaceSpec,
    m_a: usize,
    m_b: usize,
    x_a: usize,
    x_b: usize,
    width: usize,
    stat: Statistics,
) -> Result<ScenarioResult> {
    let sites = space.extrinsic_dim();
    let window_a = window_sites(x_a, width, sites)?;
    let window_b = window_sites(x_b, width, sites)?;
    let windows_overlap = window_a.iter().any(|x| window_b.contains(x));

    let reference = momentum_reference(m_a, m_b, SPIN_UP, SPIN_DOWN, space)?;
    let m = position_windows(x_a, x_b, width, space)?;
    let run = measure(&m, &reference, stat)?;

    let single_site = window_a.len() == 1 && !windows_overlap;
    let (phase_check, relabeled) = if single_site {
        let phase = phase_check(&run.post_state, m_a, m_b, x_a, x_b, stat)?;
        let relabeled = relabel_distinguishable(&run.post_state, (Label::Site(x_a), Label::Site(x_b)))?;
        (Some(phase), Some(relabeled))
    } else {
        (None, None)
    };

    Ok(ScenarioResult {
        events: run.events,
        verdict: run.verdict,
        probability: run.probability,
        post_state: run.post_state,
        normalized_post_state: run.normalized_post_state,
        report: run.report,
        evidence: run.evidence,
        phase_check,
        relabeled,
        windows_overlap,
    })
}

fn phase_check(
    post: &TwoParticleState,
    m_a: usize,
    m_b: usize,
    x_a: usize,
    x_b: usize,
    stat: Statistics,
) -> Result<PhaseCheck> {
    let space = post.space();
    let sites = space.extrinsic_dim();
    let up_down = post.amplitude(
        space.mode_index(x_a, SPIN_UP)?,
        space.mode_index(x_b, SPIN_DOWN)?,
    )?;
    let down_up = post.amplitude(
        space.mode_index(x_a, SPIN_DOWN)?,
        space.mode_index(x_b, SPIN_UP)?,
    )?;
    if up_down.norm() == 0.0 {
        return Err(Error::DegenerateInput(
            "reference amplitude vanishes; no relative phase".into(),
        ));
    }
    let measured = down_up / up_down;
    let delta_k = TAU * (m_b as f64 - m_a as f64) / sites as f64;
    let delta_x = ring_displacement(x_a, x_b, sites);
    let predicted = Complex64::from_polar(stat.exchange_sign(), -wrap(delta_k * delta_x as f64));
    Ok(PhaseCheck {
        measured,
        predicted,
        deviation: (measured - predicted).norm(),
        delta_k,
        delta_x,
    })
}

fn wrap(angle: f64) -> f64 {
    (angle + PI).rem_euclid(TAU) - PI
}
