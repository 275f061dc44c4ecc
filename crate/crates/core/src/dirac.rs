//! Gamma-matrix algebra, free-particle bispinors and their plane-wave
//! evolution.
//!
//! Everything lives in the Dirac (standard) representation:
//!
//! ```text
//! γ⁰ = diag(I, -I),   γᵏ = [[0, σᵏ], [-σᵏ, 0]],   γ⁵ = iγ⁰γ¹γ²γ³ = [[0, I], [I, 0]]
//! ```
//!
//! Amplitudes are stored as `[upper↑, upper↓, lower↑, lower↓]`. The chirality
//! qubit used downstream is read off in the eigenbasis of γ⁵:
//! `R = (upper + lower)/√2`, `L = (upper - lower)/√2`. In that basis a plane
//! wave of momentum `k ẑ` has the block form `N (f₊ χ, f₋ χ)` with the
//! kinematic factors of [`kinematic_factors`].
//!
//! All momenta point along ±ẑ, so the spin label doubles as the helicity up to
//! the sign of the momentum.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type Mat4 = Matrix4<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Index of one of the two neutrino mass eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MassIndex {
    One,
    Two,
}

impl MassIndex {
    /// `1 ↦ One`, `2 ↦ Two`.
    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(MassIndex::One),
            2 => Ok(MassIndex::Two),
            other => Err(Error::Unknown { kind: "mass index", value: other.to_string() }),
        }
    }
}

/// Model inputs in natural units. Energies are derived on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    p: f64,
    m1: f64,
    m2: f64,
    m_l: f64,
    theta: f64,
    e1: f64,
    e2: f64,
    e_l: f64,
}

impl PhysParams {
    pub const DEFAULT_SIN2_THETA: f64 = 0.306;
    pub const DEFAULT_DM2_OVER_M1SQ: f64 = 0.001;
    pub const DEFAULT_ML_OVER_M1: f64 = 10.0;

    pub fn new(p: f64, m1: f64, m2: f64, m_l: f64, theta: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::Domain(format!("momentum must be finite and >= 0, got {p}")));
        }
        for (name, m) in [("m1", m1), ("m2", m2), ("m_l", m_l)] {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::Domain(format!("{name} must be finite and > 0, got {m}")));
            }
        }
        if !(theta.is_finite() && (0.0..std::f64::consts::FRAC_PI_2).contains(&theta)) {
            return Err(Error::Domain(format!("mixing angle must lie in [0, pi/2), got {theta}")));
        }
        Ok(Self { p, m1, m2, m_l, theta, e1: energy(p, m1)?, e2: energy(p, m2)?, e_l: energy(p, m_l)? })
    }

    /// Builds parameters from dimensionless ratios with `m1 = 1`.
    pub fn from_ratios(p_over_m1: f64, sin2_theta: f64, dm2_over_m1sq: f64, ml_over_m1: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&sin2_theta) {
            return Err(Error::Domain(format!("sin^2(theta) must lie in [0, 1), got {sin2_theta}")));
        }
        if !(dm2_over_m1sq.is_finite() && dm2_over_m1sq > -1.0) {
            return Err(Error::Domain(format!("dm^2/m1^2 must exceed -1 so that m2 > 0, got {dm2_over_m1sq}")));
        }
        let theta = sin2_theta.sqrt().asin();
        Self::new(p_over_m1, 1.0, (1.0 + dm2_over_m1sq).sqrt(), ml_over_m1, theta)
    }

    /// sin²θ = 0.306, Δm²/m1² = 0.001, m_l/m1 = 10.
    pub fn defaults(p_over_m1: f64) -> Result<Self> {
        Self::from_ratios(p_over_m1, Self::DEFAULT_SIN2_THETA, Self::DEFAULT_DM2_OVER_M1SQ, Self::DEFAULT_ML_OVER_M1)
    }

    pub fn with_momentum(&self, p: f64) -> Result<Self> {
        Self::new(p, self.m1, self.m2, self.m_l, self.theta)
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.p, self.m1, self.m2, self.m_l, theta)
    }

    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn m1(&self) -> f64 {
        self.m1
    }
    pub fn m2(&self) -> f64 {
        self.m2
    }
    pub fn m_l(&self) -> f64 {
        self.m_l
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn e1(&self) -> f64 {
        self.e1
    }
    pub fn e2(&self) -> f64 {
        self.e2
    }
    pub fn e_l(&self) -> f64 {
        self.e_l
    }

    pub fn mass(&self, i: MassIndex) -> f64 {
        match i {
            MassIndex::One => self.m1,
            MassIndex::Two => self.m2,
        }
    }

    pub fn energy_of(&self, i: MassIndex) -> f64 {
        match i {
            MassIndex::One => self.e1,
            MassIndex::Two => self.e2,
        }
    }

    /// `E2 - E1`, evaluated as `(m2² - m1²)/(E1 + E2)` to avoid cancellation
    /// at large momentum.
    pub fn delta_e(&self) -> f64 {
        (self.m2 - self.m1) * (self.m2 + self.m1) / (self.e1 + self.e2)
    }

    /// Two full flavor periods, `4π/ΔE`. Infinite for degenerate masses.
    pub fn flavor_window(&self) -> f64 {
        4.0 * std::f64::consts::PI / self.delta_e()
    }

    /// Ten periods of the heavier mass eigenstate's chiral oscillation, `20π/E2`.
    pub fn chiral_window(&self) -> f64 {
        20.0 * std::f64::consts::PI / self.e2
    }
}

/// `sqrt(p² + m²)`.
pub fn energy(p: f64, m: f64) -> Result<f64> {
    if !(p.is_finite() && m.is_finite()) || p < 0.0 || m < 0.0 {
        return Err(Error::Domain(format!("energy needs p >= 0 and m >= 0, got p={p}, m={m}")));
    }
    if p == 0.0 && m == 0.0 {
        return Err(Error::Domain("energy of a massless particle at rest".into()));
    }
    Ok(p.hypot(m))
}

/// The plane-wave factors `f± = 1 ± p/(E+m)` and `N = sqrt((E+m)/(4E))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicFactors {
    pub f_plus: f64,
    pub f_minus: f64,
    pub norm: f64,
}

pub fn kinematic_factors(p: f64, m: f64) -> Result<KinematicFactors> {
    if m.is_nan() || m <= 0.0 {
        return Err(Error::Domain(format!("kinematic factors need m > 0, got {m}")));
    }
    let e = energy(p, m)?;
    // 1 - p/(E+m) rewritten with E - p = m²/(E + p)
    let f_minus = m * (e + p + m) / ((e + p) * (e + m));
    Ok(KinematicFactors { f_plus: 1.0 + p / (e + m), f_minus, norm: ((e + m) / (4.0 * e)).sqrt() })
}

/// Spin projection on ẑ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    /// Qubit value: ↑ ↦ 0, ↓ ↦ 1.
    pub fn bit(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

/// Chirality with `Π_R/L = (I ± γ⁵)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    /// Eigenvalue of γ⁵.
    pub fn gamma5_eigenvalue(self) -> f64 {
        match self {
            Handedness::Right => 1.0,
            Handedness::Left => -1.0,
        }
    }

    /// Qubit value: R ↦ 0, L ↦ 1.
    pub fn bit(self) -> usize {
        match self {
            Handedness::Right => 0,
            Handedness::Left => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Handedness::Right => Handedness::Left,
            Handedness::Left => Handedness::Right,
        }
    }
}

/// Positive-energy (`u`) or negative-energy (`v`) plane wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinorKind {
    U,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bispinor {
    amp: Vector4<Complex64>,
}

impl Bispinor {
    pub fn new(amp: [Complex64; 4]) -> Self {
        Self { amp: Vector4::from(amp) }
    }

    pub fn from_vector(amp: Vector4<Complex64>) -> Self {
        Self { amp }
    }

    /// Dirac-representation amplitudes.
    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.amp[0], self.amp[1], self.amp[2], self.amp[3]]
    }

    pub fn as_vector(&self) -> &Vector4<Complex64> {
        &self.amp
    }

    /// Normalized γ⁵ eigenstate with definite spin.
    pub fn chiral_eigenstate(h: Handedness, s: Spin) -> Self {
        let mut chiral = [ZERO; 4];
        chiral[2 * h.bit() + s.bit()] = ONE;
        Self::from_chiral_amplitudes(chiral)
    }

    /// Amplitudes in the γ⁵ eigenbasis, ordered `[R↑, R↓, L↑, L↓]`
    /// (index = 2·chirality bit + spin bit).
    pub fn chiral_amplitudes(&self) -> [Complex64; 4] {
        let a = &self.amp;
        [
            (a[0] + a[2]) * FRAC_1_SQRT_2,
            (a[1] + a[3]) * FRAC_1_SQRT_2,
            (a[0] - a[2]) * FRAC_1_SQRT_2,
            (a[1] - a[3]) * FRAC_1_SQRT_2,
        ]
    }

    pub fn from_chiral_amplitudes(c: [Complex64; 4]) -> Self {
        Self::new([
            (c[0] + c[2]) * FRAC_1_SQRT_2,
            (c[1] + c[3]) * FRAC_1_SQRT_2,
            (c[0] - c[2]) * FRAC_1_SQRT_2,
            (c[1] - c[3]) * FRAC_1_SQRT_2,
        ])
    }

    pub fn norm(&self) -> f64 {
        self.amp.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Bispinor) -> Complex64 {
        self.amp.dotc(&other.amp)
    }

    pub fn apply(&self, op: &Mat4) -> Bispinor {
        Bispinor { amp: op * self.amp }
    }

    /// `⟨self|op|self⟩`.
    pub fn expectation(&self, op: &Mat4) -> Complex64 {
        self.amp.dotc(&(op * self.amp))
    }

    pub fn scale(&self, z: Complex64) -> Bispinor {
        Bispinor { amp: self.amp * z }
    }

    pub fn add(&self, other: &Bispinor) -> Bispinor {
        Bispinor { amp: self.amp + other.amp }
    }

    pub fn sub(&self, other: &Bispinor) -> Bispinor {
        Bispinor { amp: self.amp - other.amp }
    }

    pub fn normalized(&self) -> Result<Bispinor> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Bispinor { amp: self.amp / Complex64::from(n) })
    }
}

impl fmt::Display for Bispinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.amp[0], self.amp[1], self.amp[2], self.amp[3])
    }
}

fn pauli(k: usize) -> [[Complex64; 2]; 2] {
    match k {
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => [[ONE, ZERO], [ZERO, ONE]],
    }
}

fn block(tl: [[Complex64; 2]; 2], tr: [[Complex64; 2]; 2], bl: [[Complex64; 2]; 2], br: [[Complex64; 2]; 2]) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = tl[i][j];
            m[(i, j + 2)] = tr[i][j];
            m[(i + 2, j)] = bl[i][j];
            m[(i + 2, j + 2)] = br[i][j];
        }
    }
    m
}

fn neg2(m: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]]
}

const Z2: [[Complex64; 2]; 2] = [[ZERO, ZERO], [ZERO, ZERO]];

/// `γ^μ` for `μ ∈ 0..4`, upper index, Dirac representation.
///
/// # Panics
/// If `mu > 3`.
pub fn gamma(mu: usize) -> Mat4 {
    match mu {
        0 => block(pauli(0), Z2, Z2, neg2(pauli(0))),
        1..=3 => block(Z2, pauli(mu), neg2(pauli(mu)), Z2),
        _ => panic!("gamma index {mu} out of range"),
    }
}

/// `γ⁵ = iγ⁰γ¹γ²γ³`.
pub fn gamma5() -> Mat4 {
    gamma(0) * gamma(1) * gamma(2) * gamma(3) * I
}

/// Spin operator `Σ_z = diag(σ_z, σ_z)`.
pub fn sigma_z() -> Mat4 {
    block(pauli(3), Z2, Z2, pauli(3))
}

/// Minkowski metric `diag(1, -1, -1, -1)`.
pub fn metric(mu: usize, nu: usize) -> f64 {
    match (mu, nu) {
        (0, 0) => 1.0,
        (a, b) if a == b => -1.0,
        _ => 0.0,
    }
}

/// Free Dirac Hamiltonian `α_z k + β m` for momentum `k ẑ` (signed).
pub fn free_hamiltonian(k: f64, m: f64) -> Mat4 {
    let alpha_z = gamma(0) * gamma(3);
    alpha_z * Complex64::from(k) + gamma(0) * Complex64::from(m)
}

pub fn chirality_projector(h: Handedness) -> Mat4 {
    let sign = Complex64::from(h.gamma5_eigenvalue());
    (Mat4::identity() + gamma5() * sign) * Complex64::from(0.5)
}

/// Normalized plane-wave bispinor for momentum `k ẑ` (signed) and mass `m`.
///
/// `u` solves `H(k) u = E u`; `v` solves `H(-k) v = -E v`, so `v(-k)` is the
/// negative-energy partner of `u(k)` under the same Hamiltonian. In the
/// chirality basis `u_s(k) = N (f_s, f_-s)` and `v_s(k) = N (f_s, -f_-s)`,
/// with `f_± = 1 ± s k/(E+m)`. Massless spinors are allowed for `k ≠ 0`.
pub fn basis_spinor(kind: SpinorKind, spin: Spin, k: f64, m: f64) -> Result<Bispinor> {
    if !k.is_finite() {
        return Err(Error::Domain(format!("momentum must be finite, got {k}")));
    }
    let e = energy(k.abs(), m)?;
    let n = ((e + m) / (2.0 * e)).sqrt();
    let small = n * spin.sign() * k / (e + m);
    let (upper, lower) = match kind {
        SpinorKind::U => (n, small),
        SpinorKind::V => (small, n),
    };
    let mut amp = [ZERO; 4];
    amp[spin.bit()] = Complex64::from(upper);
    amp[2 + spin.bit()] = Complex64::from(lower);
    Ok(Bispinor::new(amp))
}

/// `⟨b|γ⁵|b⟩`, i.e. P(right) − P(left).
pub fn chirality_expectation(b: &Bispinor) -> Result<f64> {
    let n = b.norm();
    if (n - 1.0).abs() > tol::NORMALIZATION {
        return Err(Error::NotNormalized { norm: n });
    }
    let c = b.chiral_amplitudes();
    Ok(c[0].norm_sqr() + c[1].norm_sqr() - c[2].norm_sqr() - c[3].norm_sqr())
}

/// `⟨b|Σ_z|b⟩`.
pub fn spin_z_expectation(b: &Bispinor) -> f64 {
    let a = b.amplitudes();
    a[0].norm_sqr() - a[1].norm_sqr() + a[2].norm_sqr() - a[3].norm_sqr()
}

/// Which particle a bispinor describes. Fixes the momentum direction and the
/// chirality selected by the production vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Species {
    /// Momentum `+p ẑ`, produced left-handed.
    Neutrino(MassIndex),
    /// Momentum `+p ẑ`, produced right-handed.
    Antineutrino(MassIndex),
    /// Momentum `-p ẑ`, produced left-handed, mass `m_l`.
    Lepton,
}

impl Species {
    pub fn momentum(self, params: &PhysParams) -> f64 {
        match self {
            Species::Neutrino(_) | Species::Antineutrino(_) => params.p(),
            Species::Lepton => -params.p(),
        }
    }

    pub fn mass(self, params: &PhysParams) -> f64 {
        match self {
            Species::Neutrino(i) | Species::Antineutrino(i) => params.mass(i),
            Species::Lepton => params.m_l(),
        }
    }

    pub fn energy(self, params: &PhysParams) -> f64 {
        match self {
            Species::Neutrino(i) | Species::Antineutrino(i) => params.energy_of(i),
            Species::Lepton => params.e_l(),
        }
    }

    pub fn initial_handedness(self) -> Handedness {
        match self {
            Species::Antineutrino(_) => Handedness::Right,
            Species::Neutrino(_) | Species::Lepton => Handedness::Left,
        }
    }
}

impl FromStr for Species {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "neutrino1" => Ok(Species::Neutrino(MassIndex::One)),
            "neutrino2" => Ok(Species::Neutrino(MassIndex::Two)),
            "antineutrino1" => Ok(Species::Antineutrino(MassIndex::One)),
            "antineutrino2" => Ok(Species::Antineutrino(MassIndex::Two)),
            "lepton" => Ok(Species::Lepton),
            other => Err(Error::Unknown { kind: "species", value: other.to_string() }),
        }
    }
}

/// Free evolution of a bispinor prepared at `t = 0` in the chirality state
/// selected by `species`, with spin `spin`.
///
/// The initial chiral state is expanded on the positive- and negative-energy
/// plane waves of the same momentum, `u_s(k)` and `v_s(-k)`, whose phases then
/// evolve as `e^{∓iEt}`. For the left-handed spin-↓ neutrino the expansion
/// coefficients are `N f₊` and `-N f₋`.
pub fn evolve_mass_bispinor(species: Species, spin: Spin, params: &PhysParams, t: f64) -> Result<Bispinor> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
    }
    let k = species.momentum(params);
    let m = species.mass(params);
    let e = species.energy(params);
    let initial = Bispinor::chiral_eigenstate(species.initial_handedness(), spin);
    let u = basis_spinor(SpinorKind::U, spin, k, m)?;
    let v = basis_spinor(SpinorKind::V, spin, -k, m)?;
    let phase = Complex64::from_polar(1.0, -e * t);
    let cu = u.inner(&initial) * phase;
    let cv = v.inner(&initial) * phase.conj();
    Ok(u.scale(cu).add(&v.scale(cv)))
}
