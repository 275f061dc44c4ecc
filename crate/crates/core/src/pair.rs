//! Lepton–antineutrino pair from a spin-0 decay.
//!
//! The pair starts spin-entangled, each particle projected on the chirality
//! the weak vertex selects (right for the antineutrino, left for the lepton),
//! and the antineutrino carries a two-flavor qubit pair. Six qubits in all:
//!
//! `nubar_chirality, nubar_spin, nubar_flavor_e, nubar_flavor_mu, lepton_chirality, lepton_spin`
//!
//! Chirality qubits use `R ↦ 0, L ↦ 1`; spin qubits `↑ ↦ 0, ↓ ↦ 1`.
//!
//! The evolved state is built two ways: from products of evolved bispinors,
//! and from the closed-form branch coefficients `γ_k(c, c')`. The spin-spin
//! reduction is likewise available in closed form and by brute-force trace.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dirac::{
    basis_spinor, chirality_projector, evolve_mass_bispinor, kinematic_factors, Handedness, MassIndex, PhysParams,
    Species, Spin, SpinorKind,
};
use crate::error::{Error, Result};
use crate::tensor::{DensityMatrix, LabeledState};

pub const NUBAR_CHIRALITY: &str = "nubar_chirality";
pub const NUBAR_SPIN: &str = "nubar_spin";
pub const NUBAR_FLAVOR_E: &str = "nubar_flavor_e";
pub const NUBAR_FLAVOR_MU: &str = "nubar_flavor_mu";
pub const LEPTON_CHIRALITY: &str = "lepton_chirality";
pub const LEPTON_SPIN: &str = "lepton_spin";

pub const LABELS: [&str; 6] =
    [NUBAR_CHIRALITY, NUBAR_SPIN, NUBAR_FLAVOR_E, NUBAR_FLAVOR_MU, LEPTON_CHIRALITY, LEPTON_SPIN];
pub const SPINS: [&str; 2] = [NUBAR_SPIN, LEPTON_SPIN];
pub const NUBAR_FLAVOR: [&str; 2] = [NUBAR_FLAVOR_E, NUBAR_FLAVOR_MU];

/// Labels of the flavorless four-qubit pair.
pub const SINGLE_MASS_LABELS: [&str; 4] = [NUBAR_CHIRALITY, NUBAR_SPIN, LEPTON_CHIRALITY, LEPTON_SPIN];

const NU_E: usize = 0b10;
const NU_MU: usize = 0b01;
/// `|↑_ν̄ ↓_l⟩` and `|↓_ν̄ ↑_l⟩` in the spin-pair basis.
const UP_DOWN: usize = 0b01;
const DOWN_UP: usize = 0b10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn index(nubar: usize, flavor: usize, lepton: usize) -> usize {
    nubar * 16 + flavor * 4 + lepton
}

fn mixing(params: &PhysParams) -> (f64, f64, f64) {
    let (s, c) = params.theta().sin_cos();
    (c * c, s * s, s * c)
}

/// Weights of the two spin branches, `A|↑↓⟩ - B|↓↑⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCoefficients {
    pub a: f64,
    pub b: f64,
}

/// Branch weights for the antineutrino in mass eigenstate 1.
///
/// Proportional to `f₊^ν̄ f₋^l` and `f₋^ν̄ f₊^l`, normalized directly.
pub fn pair_ab(params: &PhysParams) -> Result<PairCoefficients> {
    let nu = kinematic_factors(params.p(), params.m1())?;
    let l = kinematic_factors(params.p(), params.m_l())?;
    let a = nu.f_plus * l.f_minus;
    let b = nu.f_minus * l.f_plus;
    let n = a.hypot(b);
    Ok(PairCoefficients { a: a / n, b: b / n })
}

/// The same weights through `N_l N_ν̄ f f [1/2 - p²/(2 E_l E_ν̄)]^{-1/2}`, with
/// the bracket evaluated without cancellation.
pub fn pair_ab_normalized_form(params: &PhysParams) -> Result<PairCoefficients> {
    let (p, m, ml) = (params.p(), params.m1(), params.m_l());
    let nu = kinematic_factors(p, m)?;
    let l = kinematic_factors(p, ml)?;
    let (e, el) = (params.e1(), params.e_l());
    let gap = (p * p * (ml * ml + m * m) + ml * ml * m * m) / (el * e + p * p);
    let scale = l.norm * nu.norm / (gap / (2.0 * el * e)).sqrt();
    Ok(PairCoefficients { a: scale * nu.f_plus * l.f_minus, b: scale * nu.f_minus * l.f_plus })
}

/// `2|AB|`, the spin-spin concurrence at `t = 0`.
pub fn entanglement_amplitude(params: &PhysParams) -> Result<f64> {
    let ab = pair_ab(params)?;
    Ok(2.0 * (ab.a * ab.b).abs())
}

/// Large-momentum limit of [`entanglement_amplitude`]: `2 m_l m₁/(m_l² + m₁²)`.
pub fn amplitude_asymptote(params: &PhysParams) -> f64 {
    let (m, ml) = (params.m1(), params.m_l());
    2.0 * m * ml / (m * m + ml * ml)
}

/// The limit in its alternative form, `2 m₁² m_l²/(m₁² + m_l²)`. Carries units of mass².
pub fn alt_asymptote(params: &PhysParams) -> f64 {
    let (m, ml) = (params.m1(), params.m_l());
    2.0 * m * m * ml * ml / (m * m + ml * ml)
}

/// Chirality-projected spin singlet at `t = 0`.
pub fn initial_pair_state(params: &PhysParams) -> Result<LabeledState> {
    let (p, m, ml) = (params.p(), params.m1(), params.m_l());
    let right = chirality_projector(Handedness::Right);
    let left = chirality_projector(Handedness::Left);
    let nubar =
        |s| -> Result<[Complex64; 4]> { Ok(basis_spinor(SpinorKind::V, s, p, m)?.apply(&right).chiral_amplitudes()) };
    let lepton =
        |s| -> Result<[Complex64; 4]> { Ok(basis_spinor(SpinorKind::U, s, -p, ml)?.apply(&left).chiral_amplitudes()) };
    let (nu_up, nu_dn) = (nubar(Spin::Up)?, nubar(Spin::Down)?);
    let (l_up, l_dn) = (lepton(Spin::Up)?, lepton(Spin::Down)?);
    let mut amp = vec![ZERO; 64];
    for kn in 0..4 {
        for kl in 0..4 {
            amp[index(kn, NU_E, kl)] = (nu_up[kn] * l_dn[kl] - nu_dn[kn] * l_up[kl]) * FRAC_1_SQRT_2;
        }
    }
    LabeledState::new(LABELS, amp)?.normalized()
}

fn chiral(species: Species, spin: Spin, params: &PhysParams, t: f64) -> Result<[Complex64; 4]> {
    Ok(evolve_mass_bispinor(species, spin, params, t)?.chiral_amplitudes())
}

/// Evolved pair state from products of evolved bispinors.
pub fn evolve_pair_state(t: f64, params: &PhysParams) -> Result<LabeledState> {
    let ab = pair_ab(params)?;
    let (c2, s2, sc) = mixing(params);
    let nubar = |spin| -> Result<([Complex64; 4], [Complex64; 4])> {
        let x1 = chiral(Species::Antineutrino(MassIndex::One), spin, params, t)?;
        let x2 = chiral(Species::Antineutrino(MassIndex::Two), spin, params, t)?;
        let mut e = [ZERO; 4];
        let mut mu = [ZERO; 4];
        for k in 0..4 {
            e[k] = x1[k] * c2 + x2[k] * s2;
            mu[k] = (x1[k] - x2[k]) * sc;
        }
        Ok((e, mu))
    };
    let (up_e, up_mu) = nubar(Spin::Up)?;
    let (dn_e, dn_mu) = nubar(Spin::Down)?;
    let l_up = chiral(Species::Lepton, Spin::Up, params, t)?;
    let l_dn = chiral(Species::Lepton, Spin::Down, params, t)?;
    let mut amp = vec![ZERO; 64];
    for kn in 0..4 {
        for kl in 0..4 {
            amp[index(kn, NU_E, kl)] = up_e[kn] * l_dn[kl] * ab.a - dn_e[kn] * l_up[kl] * ab.b;
            amp[index(kn, NU_MU, kl)] = up_mu[kn] * l_dn[kl] * ab.a - dn_mu[kn] * l_up[kl] * ab.b;
        }
    }
    LabeledState::new(LABELS, amp)
}

fn sign_check(c: i32) -> Result<()> {
    if c == 1 || c == -1 {
        Ok(())
    } else {
        Err(Error::Domain(format!("chirality sign must be ±1, got {c}")))
    }
}

/// Chirality sign `+1 ↦ R`, `-1 ↦ L` as a qubit value.
fn chirality_bit(c: i32) -> usize {
    if c == 1 {
        Handedness::Right.bit()
    } else {
        Handedness::Left.bit()
    }
}

fn pick(f_plus: f64, f_minus: f64, sign: i32) -> f64 {
    if sign > 0 {
        f_plus
    } else {
        f_minus
    }
}

/// Amplitude of chirality `c` in an antineutrino of mass `i` prepared right-handed with spin ↑.
fn nubar_factor(i: MassIndex, c: i32, t: f64, params: &PhysParams) -> Result<Complex64> {
    let k = kinematic_factors(params.p(), params.mass(i))?;
    let e = params.energy_of(i);
    let mut sum = ZERO;
    for d in [1, -1] {
        let weight = if d == 1 { 1.0 } else { c as f64 };
        let f = pick(k.f_plus, k.f_minus, d) * pick(k.f_plus, k.f_minus, d * c);
        sum += Complex64::from_polar(k.norm * k.norm * weight * f, -(d as f64) * e * t);
    }
    Ok(sum)
}

/// Amplitude of chirality `c'` in the lepton prepared left-handed with spin ↓.
fn lepton_factor(c: i32, t: f64, params: &PhysParams) -> Result<Complex64> {
    let k = kinematic_factors(params.p(), params.m_l())?;
    let e = params.e_l();
    let mut sum = ZERO;
    for d in [1, -1] {
        let weight = if d == 1 { 1.0 } else { c as f64 };
        let f = pick(k.f_plus, k.f_minus, -d) * pick(k.f_plus, k.f_minus, d * c);
        sum += Complex64::from_polar(d as f64 * k.norm * k.norm * weight * f, -(d as f64) * e * t);
    }
    Ok(sum)
}

/// Deliberate corruption of the expansion path, used to show the cross-checks bite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Flip the sign of `γ₃`.
    Gamma3Sign,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Fault::None),
            "gamma3-sign" => Ok(Fault::Gamma3Sign),
            other => Err(Error::Unknown { kind: "fault", value: other.to_string() }),
        }
    }
}

/// Branch coefficients `[γ₁, γ₂, γ₃, γ₄]` for antineutrino chirality `c` and
/// lepton chirality `c'` (`+1` right, `-1` left).
pub fn gamma_coefficients(c: i32, c_l: i32, t: f64, params: &PhysParams) -> Result<[Complex64; 4]> {
    gamma_coefficients_with(c, c_l, t, params, Fault::None)
}

pub fn gamma_coefficients_with(c: i32, c_l: i32, t: f64, params: &PhysParams, fault: Fault) -> Result<[Complex64; 4]> {
    sign_check(c)?;
    sign_check(c_l)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
    }
    let ab = pair_ab(params)?;
    let (c2, s2, sc) = mixing(params);
    let lep = lepton_factor(c_l, t, params)?;
    let f1 = nubar_factor(MassIndex::One, c, t, params)?;
    let f2 = nubar_factor(MassIndex::Two, c, t, params)?;
    let w1 = f1 * lep;
    let w2 = f2 * lep;
    let w_mix = (f1 - f2) * lep;
    let mirror = -((c * c_l) as f64);
    let g3_sign = if fault == Fault::Gamma3Sign { -1.0 } else { 1.0 };
    Ok([
        (w1 * c2 + w2 * s2) * ab.a,
        w_mix * (ab.a * sc),
        (w1.conj() * c2 + w2.conj() * s2) * (ab.b * mirror * g3_sign),
        w_mix.conj() * (ab.b * sc * mirror),
    ])
}

/// Evolved pair state assembled from the branch coefficients.
pub fn evolve_pair_state_expansion(t: f64, params: &PhysParams) -> Result<LabeledState> {
    evolve_pair_state_expansion_with(t, params, Fault::None)
}

pub fn evolve_pair_state_expansion_with(t: f64, params: &PhysParams, fault: Fault) -> Result<LabeledState> {
    let mut amp = vec![ZERO; 64];
    let (up, down) = (Spin::Up.bit(), Spin::Down.bit());
    for c in [1, -1] {
        for c_l in [1, -1] {
            let g = gamma_coefficients_with(c, c_l, t, params, fault)?;
            let (hn, hl) = (chirality_bit(c), chirality_bit(c_l));
            amp[index(2 * hn + up, NU_E, 2 * hl + down)] = g[0];
            amp[index(2 * hn + up, NU_MU, 2 * hl + down)] = g[1];
            amp[index(2 * hn + down, NU_E, 2 * hl + up)] = -g[2];
            amp[index(2 * hn + down, NU_MU, 2 * hl + up)] = -g[3];
        }
    }
    LabeledState::new(LABELS, amp)
}

/// The pair without flavor: antineutrino fixed to mass eigenstate 1.
pub fn single_mass_pair_state(t: f64, params: &PhysParams) -> Result<LabeledState> {
    let ab = pair_ab(params)?;
    let species = Species::Antineutrino(MassIndex::One);
    let (nu_up, nu_dn) = (chiral(species, Spin::Up, params, t)?, chiral(species, Spin::Down, params, t)?);
    let l_up = chiral(Species::Lepton, Spin::Up, params, t)?;
    let l_dn = chiral(Species::Lepton, Spin::Down, params, t)?;
    let mut amp = vec![ZERO; 16];
    for kn in 0..4 {
        for kl in 0..4 {
            amp[4 * kn + kl] = nu_up[kn] * l_dn[kl] * ab.a - nu_dn[kn] * l_up[kl] * ab.b;
        }
    }
    LabeledState::new(SINGLE_MASS_LABELS, amp)
}

/// Which particle an `(h, g)` pair refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairParticle {
    Lepton,
    Nubar1,
    Nubar2,
}

impl FromStr for PairParticle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l" | "lepton" => Ok(PairParticle::Lepton),
            "nubar1" => Ok(PairParticle::Nubar1),
            "nubar2" => Ok(PairParticle::Nubar2),
            other => Err(Error::Unknown { kind: "pair particle", value: other.to_string() }),
        }
    }
}

/// `h = 1 - (2p²/E²) sin²(Et)`, `g = (p/E) sin(2Et)`.
pub fn hg_factors(which: PairParticle, t: f64, params: &PhysParams) -> (f64, f64) {
    let e = match which {
        PairParticle::Lepton => params.e_l(),
        PairParticle::Nubar1 => params.e1(),
        PairParticle::Nubar2 => params.e2(),
    };
    let p = params.p();
    let s = (e * t).sin();
    (1.0 - 2.0 * p * p / (e * e) * s * s, p / e * (2.0 * e * t).sin())
}

/// The populated block of the spin-spin state, on the ordered basis
/// `{|↑_ν̄ ↓_l⟩, -|↓_ν̄ ↑_l⟩}`.
///
/// The minus sign absorbs the singlet's relative phase so that the
/// off-diagonal element starts at `+AB`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinDensity {
    pub a2: f64,
    pub b2: f64,
    pub rho12: Complex64,
}

impl SpinDensity {
    pub fn from_reduced(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: rho.dim() });
        }
        Ok(Self {
            a2: rho.get(UP_DOWN, UP_DOWN).re,
            b2: rho.get(DOWN_UP, DOWN_UP).re,
            rho12: -rho.get(UP_DOWN, DOWN_UP),
        })
    }

    /// Embeds the block as a density over `nubar_spin ⊗ lepton_spin`.
    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        let mut m = DMatrix::zeros(4, 4);
        m[(UP_DOWN, UP_DOWN)] = Complex64::from(self.a2);
        m[(DOWN_UP, DOWN_UP)] = Complex64::from(self.b2);
        m[(UP_DOWN, DOWN_UP)] = -self.rho12;
        m[(DOWN_UP, UP_DOWN)] = -self.rho12.conj();
        DensityMatrix::new(SPINS, m)
    }

    pub fn purity(&self) -> f64 {
        self.a2 * self.a2 + self.b2 * self.b2 + 2.0 * self.rho12.norm_sqr()
    }

    pub fn max_abs_diff(&self, other: &SpinDensity) -> f64 {
        (self.a2 - other.a2).abs().max((self.b2 - other.b2).abs()).max((self.rho12 - other.rho12).norm())
    }
}

pub fn spin_density_closed(t: f64, params: &PhysParams) -> Result<SpinDensity> {
    let ab = pair_ab(params)?;
    let (c2, s2, _) = mixing(params);
    let (hl, gl) = hg_factors(PairParticle::Lepton, t, params);
    let (h1, g1) = hg_factors(PairParticle::Nubar1, t, params);
    let (h2, g2) = hg_factors(PairParticle::Nubar2, t, params);
    let lepton = Complex64::new(hl, gl);
    let nubar = Complex64::new(h1, -g1) * c2 + Complex64::new(h2, -g2) * s2;
    Ok(SpinDensity { a2: ab.a * ab.a, b2: ab.b * ab.b, rho12: lepton * nubar * (ab.a * ab.b) })
}

pub fn spin_density_brute(t: f64, params: &PhysParams) -> Result<SpinDensity> {
    SpinDensity::from_reduced(&evolve_pair_state(t, params)?.reduced(&SPINS)?)
}

/// Purity of the spin-spin state, `A⁴ + B⁴ + 2|ρ₁₂|²`.
pub fn spin_purity(t: f64, params: &PhysParams) -> Result<f64> {
    Ok(spin_density_closed(t, params)?.purity())
}

/// Expanded purity `1 - 2A²B²(1 - Γ_l{c⁴Γ₁ + s⁴Γ₂ + 2s²c²(h₁h₂ + g₁g₂)})`.
pub fn spin_purity_expanded(t: f64, params: &PhysParams) -> Result<f64> {
    let ab = pair_ab(params)?;
    let (c2, s2, _) = mixing(params);
    let (hl, gl) = hg_factors(PairParticle::Lepton, t, params);
    let (h1, g1) = hg_factors(PairParticle::Nubar1, t, params);
    let (h2, g2) = hg_factors(PairParticle::Nubar2, t, params);
    let gamma = |h: f64, g: f64| h * h + g * g;
    let braces = c2 * c2 * gamma(h1, g1) + s2 * s2 * gamma(h2, g2) + 2.0 * s2 * c2 * (h1 * h2 + g1 * g2);
    let ab2 = ab.a * ab.a * ab.b * ab.b;
    Ok(1.0 - 2.0 * ab2 * (1.0 - gamma(hl, gl) * braces))
}

/// Spin purity in its alternative form, with `𝒩 = 2|AB|` and squared `Γ`s. Not unit at `t = 0`.
pub fn alt_spin_purity(t: f64, params: &PhysParams) -> Result<f64> {
    let n = entanglement_amplitude(params)?;
    let (c2, s2, _) = mixing(params);
    let (c4, s4) = (c2 * c2, s2 * s2);
    let (hl, gl) = hg_factors(PairParticle::Lepton, t, params);
    let (h1, g1) = hg_factors(PairParticle::Nubar1, t, params);
    let (h2, g2) = hg_factors(PairParticle::Nubar2, t, params);
    let gl2 = (hl * hl + gl * gl).powi(2);
    let g12 = (h1 * h1 + g1 * g1).powi(2);
    let g22 = (h2 * h2 + g2 * g2).powi(2);
    let inner = 2.0 * c4 * g12 + 2.0 * s4 * g12 + s2 * c2 * (g12 + g22) + 2.0 * (h1 * h2 + g1 * g2);
    let braces = c4 * c4 * g12 + s4 * s4 * g22 + 2.0 * s2 * c2 * inner;
    Ok(1.0 - n / 2.0 * (1.0 - gl2 * braces))
}

/// Unmixed spin purity in its alternative form, `1 - (𝒩/2)(1 - Γ_l²Γ₁²)`.
pub fn alt_spin_purity_unmixed(t: f64, params: &PhysParams) -> Result<f64> {
    let n = entanglement_amplitude(params)?;
    let (hl, gl) = hg_factors(PairParticle::Lepton, t, params);
    let (h1, g1) = hg_factors(PairParticle::Nubar1, t, params);
    let gl2 = (hl * hl + gl * gl).powi(2);
    let g12 = (h1 * h1 + g1 * g1).powi(2);
    Ok(1.0 - n / 2.0 * (1.0 - gl2 * g12))
}

/// One alternative closed form set against an independent evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconEntry {
    pub quantity: &'static str,
    pub alt: f64,
    pub derived: f64,
    pub brute: f64,
    pub tolerance: f64,
    pub note: &'static str,
}

impl ReconEntry {
    /// Largest discrepancy of the alt value from brute force.
    pub fn alt_deviation(&self) -> f64 {
        (self.alt - self.brute).abs()
    }

    pub fn derived_deviation(&self) -> f64 {
        (self.derived - self.brute).abs()
    }

    pub fn alt_agrees(&self) -> bool {
        self.alt_deviation() <= self.tolerance
    }

    pub fn derived_agrees(&self) -> bool {
        self.derived_deviation() <= self.tolerance
    }
}

impl fmt::Display for ReconEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: alt={:.9} derived={:.9} brute={:.9} [{}; {}] {}",
            self.quantity,
            self.alt,
            self.derived,
            self.brute,
            if self.alt_agrees() { "alt ok" } else { "alt DEVIATES" },
            if self.derived_agrees() { "derived ok" } else { "derived DEVIATES" },
            self.note,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconciliation {
    pub entries: Vec<ReconEntry>,
}

impl Reconciliation {
    pub fn get(&self, quantity: &str) -> Option<&ReconEntry> {
        self.entries.iter().find(|e| e.quantity == quantity)
    }
}

/// Momentum, in units of `m₁`, used to probe the large-`p` amplitude.
pub const ASYMPTOTIC_P_OVER_M1: f64 = 1e6;

/// Sets the alternative closed forms against brute-force evaluation.
///
/// `times` selects where the purity forms are compared; the worst point is kept.
pub fn reconcile(params: &PhysParams, times: &[f64]) -> Result<Reconciliation> {
    let far = params.with_momentum(ASYMPTOTIC_P_OVER_M1 * params.m1())?;
    let far_amp = entanglement_amplitude(&far)?;
    let mut entries = vec![ReconEntry {
        quantity: "amplitude_asymptote",
        alt: alt_asymptote(params),
        derived: amplitude_asymptote(params),
        brute: far_amp,
        tolerance: 1e-3 * far_amp,
        note: "large-p limit of 2|AB|; alternative form has units of mass squared",
    }];

    let at_zero = |f: fn(f64, &PhysParams) -> Result<f64>| f(0.0, params);
    entries.push(ReconEntry {
        quantity: "spin_purity_t0",
        alt: at_zero(alt_spin_purity)?,
        derived: at_zero(spin_purity_expanded)?,
        brute: spin_density_brute(0.0, params)?.to_density_matrix()?.purity(),
        tolerance: 1e-12,
        note: "the initial spin state is pure",
    });

    let unmixed = params.with_theta(0.0)?;
    let mut worst_mixed: Option<(f64, f64, f64)> = None;
    let mut worst_unmixed: Option<(f64, f64, f64)> = None;
    for &t in times {
        let brute = spin_density_brute(t, params)?.purity();
        let cand = (alt_spin_purity(t, params)?, spin_purity_expanded(t, params)?, brute);
        if worst_mixed.is_none_or(|w| (cand.0 - cand.2).abs() > (w.0 - w.2).abs()) {
            worst_mixed = Some(cand);
        }
        let brute = single_mass_pair_state(t, &unmixed)?.reduced(&SPINS)?.purity();
        let cand = (alt_spin_purity_unmixed(t, &unmixed)?, spin_purity_expanded(t, &unmixed)?, brute);
        if worst_unmixed.is_none_or(|w| (cand.0 - cand.2).abs() > (w.0 - w.2).abs()) {
            worst_unmixed = Some(cand);
        }
    }
    if let Some((alt, derived, brute)) = worst_mixed {
        entries.push(ReconEntry {
            quantity: "spin_purity_worst",
            alt,
            derived,
            brute,
            tolerance: 1e-12,
            note: "worst sampled time; correct form carries Γ, not Γ², and weight 2A²B²",
        });
    }
    if let Some((alt, derived, brute)) = worst_unmixed {
        entries.push(ReconEntry {
            quantity: "spin_purity_unmixed_worst",
            alt,
            derived,
            brute,
            tolerance: 1e-12,
            note: "worst sampled time without mixing; same Γ² and weight issue",
        });
    }
    Ok(Reconciliation { entries })
}
