//! Complete complementarity relations.
//!
//! Three forms are supported:
//!
//! - pure entropic: `C_re(ρ_k) + P_vn(ρ_k) + S(ρ_k) = log₂ d_k` for a globally pure state;
//! - mixed: `S_{k|B} + P_vn(ρ_k) + C_re(ρ_k) + I_{k:B} = log₂ d_k`;
//! - qubit: `P² + V² + C² = 1` for one qubit of a pure two-qubit state.
//!
//! Reports always carry the signed residual `Σ components − budget`; callers
//! decide what to do with it.

use std::fmt;

use crate::error::{Error, Result};
use crate::measures::{self, Bits};
use crate::tensor::{DensityMatrix, LabeledState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CcrKind {
    PureEntropic,
    Mixed,
    QubitPure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Coherence,
    Predictability,
    Entropy,
    MutualInformation,
    ConditionalEntropy,
    P,
    V,
    C,
}

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::Coherence => "coherence",
            Component::Predictability => "predictability",
            Component::Entropy => "entropy",
            Component::MutualInformation => "mutual_information",
            Component::ConditionalEntropy => "conditional_entropy",
            Component::P => "P",
            Component::V => "V",
            Component::C => "C",
        }
    }

    /// Only the conditional entropy may legitimately be negative.
    pub fn is_signed(self) -> bool {
        matches!(self, Component::ConditionalEntropy)
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcrReport {
    pub kind: CcrKind,
    pub components: Vec<(Component, f64)>,
    pub budget: f64,
    pub residual: f64,
}

impl CcrReport {
    fn assemble(kind: CcrKind, components: Vec<(Component, f64)>, budget: f64) -> Self {
        let sum: f64 = match kind {
            CcrKind::QubitPure => components.iter().map(|(_, v)| v * v).sum(),
            _ => components.iter().map(|(_, v)| v).sum(),
        };
        Self { kind, components, budget, residual: sum - budget }
    }

    pub fn get(&self, c: Component) -> Option<f64> {
        self.components.iter().find(|(k, _)| *k == c).map(|(_, v)| *v)
    }

    /// Most negative unsigned component, or 0.
    pub fn min_unsigned(&self) -> f64 {
        self.components.iter().filter(|(k, _)| !k.is_signed()).map(|(_, v)| *v).fold(0.0, f64::min)
    }
}

fn check_split(labels: &[String], k: &[&str]) -> Result<()> {
    if k.is_empty() {
        return Err(Error::BadPartition("subsystem k is empty".into()));
    }
    if k.len() >= labels.len() && labels.iter().all(|l| k.contains(&l.as_str())) {
        return Err(Error::BadPartition("subsystem k covers every label".into()));
    }
    Ok(())
}

/// Entropic CCR for subsystem `k` of a pure global state.
pub fn ccr_pure(state: &LabeledState, k: &[&str]) -> Result<CcrReport> {
    check_split(state.labels(), k)?;
    let rho_k = state.reduced(k)?;
    pure_from_reduced(&rho_k)
}

fn pure_from_reduced(rho_k: &DensityMatrix) -> Result<CcrReport> {
    let d = rho_k.dim();
    let entropy = measures::von_neumann_entropy(rho_k)?;
    let coherence = measures::relative_entropy_coherence(rho_k)?;
    let pred = measures::predictability(rho_k, d)?;
    Ok(CcrReport::assemble(
        CcrKind::PureEntropic,
        vec![(Component::Coherence, coherence), (Component::Predictability, pred), (Component::Entropy, entropy)],
        (d as f64).log2(),
    ))
}

/// Entropic CCR for subsystem `k` of a (possibly mixed) state.
pub fn ccr_mixed(rho: &DensityMatrix, k: &[&str]) -> Result<CcrReport> {
    let (_, rest) = measures::bipartition(rho, k)?;
    let rest: Vec<&str> = rest.iter().map(String::as_str).collect();
    let rho_k = rho.partial_trace(k)?;
    let rho_b = rho.partial_trace(&rest)?;
    let s_k = measures::von_neumann_entropy(&rho_k)?;
    let s_b = measures::von_neumann_entropy(&rho_b)?;
    let s = measures::von_neumann_entropy(rho)?;
    let d = rho_k.dim();
    let mutual: Bits = s_k + s_b - s;
    Ok(CcrReport::assemble(
        CcrKind::Mixed,
        vec![
            (Component::ConditionalEntropy, s - s_b),
            (Component::Predictability, measures::predictability(&rho_k, d)?),
            (Component::Coherence, measures::relative_entropy_coherence(&rho_k)?),
            (Component::MutualInformation, mutual),
        ],
        (d as f64).log2(),
    ))
}

/// `P² + V² + C² = 1` for qubit `k` of a pure two-qubit state.
pub fn ccr_qubit(rho: &DensityMatrix, k: &str) -> Result<CcrReport> {
    let pv = measures::qubit_pv(rho, k)?;
    Ok(CcrReport::assemble(
        CcrKind::QubitPure,
        vec![(Component::P, pv.predictability), (Component::V, pv.visibility), (Component::C, pv.concurrence)],
        1.0,
    ))
}
