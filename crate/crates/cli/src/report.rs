//! Human-readable and JSON renderings of a run.

use std::fmt::Write as _;

use ebm_core::scenarios::{PhaseCheck, SPIN_DOWN, SPIN_UP};
use ebm_core::{Complex64, EbmEvidence, EntanglementReport, EventPair, Statistics, TwoParticleState, VerdictKind};

use crate::format::fmt_float;

#[derive(Debug, Clone, PartialEq)]
pub struct EventSummary {
    pub norm_direct: f64,
    pub norm_permuted: f64,
    pub event_overlap: Complex64,
    pub state_overlap: Complex64,
}

impl From<&EventPair> for EventSummary {
    fn from(e: &EventPair) -> Self {
        Self {
            norm_direct: e.norm_direct,
            norm_permuted: e.norm_permuted,
            event_overlap: e.event_overlap,
            state_overlap: e.state_overlap,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub statistics: Statistics,
    pub lattice_size: Option<usize>,
    pub verdict: VerdictKind,
    pub tolerance: f64,
    pub events: EventSummary,
    /// Squared norm of the collapsed state; 0 when the outcome is impossible.
    pub probability: f64,
    pub probability_label: &'static str,
    pub entanglement: Option<EntanglementReport>,
    pub evidence: Option<EbmEvidence>,
    pub phase: Option<PhaseCheck>,
    /// Spin state once the extrinsic labels have been read off, if available.
    pub spin_state: Option<TwoParticleState>,
    pub notes: Vec<String>,
}

impl Report {
    /// Leading Schmidt coefficients (those counted in the Schmidt rank).
    pub fn schmidt_coefficients(&self) -> &[f64] {
        match &self.entanglement {
            Some(e) => &e.singular_values[..e.schmidt_rank],
            None => &[],
        }
    }

    /// One JSON object with a fixed key order and 17-digit floats.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        let _ = write!(out, "\"verdict\":\"{}\"", self.verdict.name());
        let _ = write!(out, ",\"probability\":{}", json_float(self.probability));
        let values: Vec<String> = self.schmidt_coefficients().iter().map(|&s| json_float(s)).collect();
        let _ = write!(out, ",\"singular_values\":[{}]", values.join(","));
        let entropy = self.entanglement.as_ref().map(|e| json_float(e.entropy));
        let _ = write!(out, ",\"entropy\":{}", entropy.unwrap_or_else(|| "null".into()));
        let slater = self
            .entanglement
            .as_ref()
            .and_then(|e| e.slater_rank)
            .map(|r| r.to_string());
        let _ = write!(out, ",\"slater_rank\":{}", slater.unwrap_or_else(|| "null".into()));
        match &self.phase {
            Some(p) => {
                let _ = write!(
                    out,
                    ",\"phase\":{{\"measured_re\":{},\"measured_im\":{},\"predicted_re\":{},\"predicted_im\":{},\"deviation\":{}}}",
                    json_float(p.measured.re),
                    json_float(p.measured.im),
                    json_float(p.predicted.re),
                    json_float(p.predicted.im),
                    json_float(p.deviation)
                );
            }
            None => out.push_str(",\"phase\":null"),
        }
        out.push('}');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let lattice = self
            .lattice_size
            .map(|l| format!(", L = {l}"))
            .unwrap_or_default();
        let _ = writeln!(out, "{} ({}{lattice})", self.command, self.statistics);
        let _ = writeln!(out, "slots: Alice holds particle 1, Bob holds particle 2");
        let _ = writeln!(out, "verdict: {} (tol {:e})", self.verdict, self.tolerance);
        let e = &self.events;
        let _ = writeln!(out, "  |M psi|            = {}", fmt_float(e.norm_direct));
        let _ = writeln!(out, "  |M P psi|          = {}", fmt_float(e.norm_permuted));
        let _ = writeln!(out, "  <M psi|M P psi>    = {}", fmt_complex(e.event_overlap));
        let _ = writeln!(out, "  <psi|M P psi>      = {}", fmt_complex(e.state_overlap));
        let _ = writeln!(out, "{}: {}", self.probability_label, fmt_float(self.probability));
        match &self.entanglement {
            Some(ent) => {
                let coeffs: Vec<String> = self.schmidt_coefficients().iter().map(|&s| fmt_float(s)).collect();
                let _ = writeln!(out, "schmidt coefficients: [{}]", coeffs.join(", "));
                let _ = writeln!(out, "schmidt rank: {}", ent.schmidt_rank);
                let _ = writeln!(out, "entropy (nats): {}", fmt_float(ent.entropy));
                if let Some(r) = ent.slater_rank {
                    let _ = writeln!(out, "slater rank: {r}");
                }
                if ent.symmetric_caution {
                    let _ = writeln!(
                        out,
                        "caution: exchange-symmetric state; Schmidt data is not a bosonic entanglement measure"
                    );
                }
            }
            None => {
                let _ = writeln!(out, "post-measurement state: none (outcome impossible)");
            }
        }
        if let Some(ev) = &self.evidence {
            let _ = writeln!(
                out,
                "schmidt rank of Alice/Bob outcome: {} as distinguishable particles, {} as identical particles ({})",
                ev.rank_before,
                ev.rank_after,
                if ev.entangled_by_measure {
                    "entangled by measurement"
                } else {
                    "no entanglement added"
                }
            );
        }
        if let Some(p) = &self.phase {
            let _ = writeln!(
                out,
                "relative amplitude <A down, B up> / <A up, B down>: {} (|.| = {})",
                fmt_complex(p.measured),
                fmt_float(p.measured.norm())
            );
            let _ = writeln!(
                out,
                "  predicted {}exp(-i dk dx) with dk = {}, dx = {}: {}",
                if self.statistics == Statistics::Fermion { "-" } else { "+" },
                fmt_float(p.delta_k),
                p.delta_x,
                fmt_complex(p.predicted)
            );
            let _ = writeln!(out, "  deviation: {}", fmt_float(p.deviation));
        }
        if let Some(spins) = &self.spin_state {
            if spins.space().spin_dim() == 2 {
                let amp = |a: usize, b: usize| spins.amplitude(a, b).unwrap_or_default();
                let _ = writeln!(out, "spin state (Alice, Bob):");
                for (name, a, b) in [
                    ("up, up    ", SPIN_UP, SPIN_UP),
                    ("up, down  ", SPIN_UP, SPIN_DOWN),
                    ("down, up  ", SPIN_DOWN, SPIN_UP),
                    ("down, down", SPIN_DOWN, SPIN_DOWN),
                ] {
                    let _ = writeln!(out, "  {name} {}", fmt_complex(amp(a, b)));
                }
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}

fn json_float(x: f64) -> String {
    if x.is_finite() {
        fmt_float(x)
    } else {
        "null".into()
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("{} {} {}i", fmt_float(z.re), if z.im < 0.0 { "-" } else { "+" }, fmt_float(z.im.abs()))
}
