//! A single electron neutrino with chirality, spin and two flavor qubits.
//!
//! The chirality sign `c` follows the oscillation literature: `c = +1` is the
//! left-handed component the neutrino is produced in, `c = -1` the
//! right-handed one it leaks into through the mass term.

use num_complex::Complex64;

use crate::dirac::{evolve_mass_bispinor, Handedness, MassIndex, PhysParams, Species, Spin};
use crate::error::{Error, Result};
use crate::measures::{self, Bits};
use crate::tensor::{DensityMatrix, LabeledState};

pub const CHIRALITY: &str = "chirality";
pub const SPIN: &str = "spin";
pub const FLAVOR_E: &str = "flavor_e";
pub const FLAVOR_MU: &str = "flavor_mu";

pub const LABELS: [&str; 4] = [CHIRALITY, SPIN, FLAVOR_E, FLAVOR_MU];
pub const FLAVOR: [&str; 2] = [FLAVOR_E, FLAVOR_MU];

/// Index of `|1_e 0_μ⟩` in the flavor-pair basis.
const NU_E: usize = 0b10;
/// Index of `|0_e 1_μ⟩`.
const NU_MU: usize = 0b01;

fn handedness(c: i32) -> Result<Handedness> {
    match c {
        1 => Ok(Handedness::Left),
        -1 => Ok(Handedness::Right),
        other => Err(Error::Domain(format!("chirality sign must be ±1, got {other}"))),
    }
}

fn mixing(params: &PhysParams) -> (f64, f64) {
    let (s, c) = params.theta().sin_cos();
    (c * c, s * s)
}

/// Amplitude for chirality `c` of mass eigenstate `i` at time `t`.
pub fn omega(i: MassIndex, c: i32, t: f64, params: &PhysParams) -> Result<Complex64> {
    let h = handedness(c)?;
    let e = params.energy_of(i);
    let (sin, cos) = (e * t).sin_cos();
    Ok(match h {
        Handedness::Left => Complex64::new(cos, -params.p() / e * sin),
        Handedness::Right => Complex64::new(0.0, -params.mass(i) / e * sin),
    })
}

/// Same as [`omega`] with a numeric mass index; fails on anything but 1 or 2.
pub fn omega_indexed(i: usize, c: i32, t: f64, params: &PhysParams) -> Result<Complex64> {
    omega(MassIndex::from_index(i)?, c, t, params)
}

/// Flavor amplitudes `(δ_e(c), δ_μ(c))` of the chirality-`c` branch.
pub fn delta_coeffs(c: i32, t: f64, params: &PhysParams) -> Result<(Complex64, Complex64)> {
    let w1 = omega(MassIndex::One, c, t, params)?;
    let w2 = omega(MassIndex::Two, c, t, params)?;
    let (c2, s2) = mixing(params);
    let half_sin2 = (2.0 * params.theta()).sin() / 2.0;
    Ok((w1 * c2 + w2 * s2, (w1 - w2) * half_sin2))
}

pub fn g_function(t: f64, params: &PhysParams) -> f64 {
    let (e1, e2, p) = (params.e1(), params.e2(), params.p());
    let (s1, c1) = (e1 * t).sin_cos();
    let (s2, c2) = (e2 * t).sin_cos();
    1.0 - (p * p + params.m1() * params.m2()) / (e1 * e2) * s1 * s2 - c1 * c2
}

pub fn h_function(t: f64, params: &PhysParams) -> f64 {
    let (e1, e2, p) = (params.e1(), params.e2(), params.p());
    let (s1, c1) = (e1 * t).sin_cos();
    let (s2, c2) = (e2 * t).sin_cos();
    p / e1 * s1 * c2 - p / e2 * c1 * s2
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("time must be finite and >= 0, got {t}")))
    }
}

/// Full four-qubit state from the mass-eigenstate bispinors.
pub fn build_state(t: f64, params: &PhysParams) -> Result<LabeledState> {
    let chi1 = evolve_mass_bispinor(Species::Neutrino(MassIndex::One), Spin::Down, params, t)?.chiral_amplitudes();
    let chi2 = evolve_mass_bispinor(Species::Neutrino(MassIndex::Two), Spin::Down, params, t)?.chiral_amplitudes();
    let (c2, s2) = mixing(params);
    let sc = (2.0 * params.theta()).sin() / 2.0;
    let mut amp = vec![Complex64::new(0.0, 0.0); 16];
    for (k, (a1, a2)) in chi1.iter().zip(&chi2).enumerate() {
        amp[4 * k + NU_E] = a1 * c2 + a2 * s2;
        amp[4 * k + NU_MU] = (a1 - a2) * sc;
    }
    LabeledState::new(LABELS, amp)
}

/// The same state assembled from the flavor amplitudes `δ_α(c)`.
pub fn build_state_from_deltas(t: f64, params: &PhysParams) -> Result<LabeledState> {
    check_time(t)?;
    let mut amp = vec![Complex64::new(0.0, 0.0); 16];
    for c in [1, -1] {
        let (de, dmu) = delta_coeffs(c, t, params)?;
        let k = 2 * handedness(c)?.bit() + Spin::Down.bit();
        amp[4 * k + NU_E] = de;
        amp[4 * k + NU_MU] = dmu;
    }
    LabeledState::new(LABELS, amp)
}

/// The `{|1_e0_μ⟩, |0_e1_μ⟩}` block of the reduced flavor state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlavorDensity {
    pub rho11: f64,
    pub rho22: f64,
    pub rho12: Complex64,
}

impl FlavorDensity {
    /// Reads the block out of a reduced density over the two flavor qubits.
    pub fn from_reduced(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: rho.dim() });
        }
        Ok(Self { rho11: rho.get(NU_E, NU_E).re, rho22: rho.get(NU_MU, NU_MU).re, rho12: rho.get(NU_E, NU_MU) })
    }

    /// Embeds the block as a density over `flavor_e ⊗ flavor_μ`.
    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        let mut m = nalgebra::DMatrix::zeros(4, 4);
        m[(NU_E, NU_E)] = Complex64::from(self.rho11);
        m[(NU_MU, NU_MU)] = Complex64::from(self.rho22);
        m[(NU_E, NU_MU)] = self.rho12;
        m[(NU_MU, NU_E)] = self.rho12.conj();
        DensityMatrix::new(FLAVOR, m)
    }

    pub fn purity(&self) -> f64 {
        self.rho11 * self.rho11 + self.rho22 * self.rho22 + 2.0 * self.rho12.norm_sqr()
    }

    pub fn max_abs_diff(&self, other: &FlavorDensity) -> f64 {
        (self.rho11 - other.rho11).abs().max((self.rho22 - other.rho22).abs()).max((self.rho12 - other.rho12).norm())
    }
}

pub fn flavor_density_closed(t: f64, params: &PhysParams) -> FlavorDensity {
    let sin2 = (2.0 * params.theta()).sin();
    let cos2 = (2.0 * params.theta()).cos();
    let g = g_function(t, params);
    let h = h_function(t, params);
    let transfer = sin2 * sin2 / 2.0 * g;
    FlavorDensity {
        rho11: 1.0 - transfer,
        rho22: transfer,
        rho12: Complex64::new(sin2 * cos2 / 2.0 * g, sin2 / 2.0 * h),
    }
}

/// Reduced flavor block obtained by tracing the full state.
pub fn flavor_density_brute(t: f64, params: &PhysParams) -> Result<FlavorDensity> {
    FlavorDensity::from_reduced(&build_state(t, params)?.reduced(&FLAVOR)?)
}

/// Electron survival probability including the chiral leakage.
pub fn survival_probability(t: f64, params: &PhysParams) -> f64 {
    flavor_density_closed(t, params).rho11
}

/// Textbook two-flavor formula `1 - sin²2θ sin²(ΔE t/2)`.
pub fn survival_probability_standard(t: f64, params: &PhysParams) -> f64 {
    let sin2 = (2.0 * params.theta()).sin();
    let s = (params.delta_e() * t / 2.0).sin();
    1.0 - sin2 * sin2 * s * s
}

pub fn flavor_purity_closed(t: f64, params: &PhysParams) -> f64 {
    let sin2 = (2.0 * params.theta()).sin();
    let g = g_function(t, params);
    let h = h_function(t, params);
    1.0 + sin2 * sin2 / 2.0 * (g * g + h * h - 2.0 * g)
}

/// Entropy of the flavor pair from its purity; the block has rank ≤ 2.
pub fn flavor_entropy(t: f64, params: &PhysParams) -> Result<Bits> {
    entropy_from_purity(flavor_purity_closed(t, params))
}

/// Binary entropy of `β₊ = (1 + √(2γ - 1))/2` for a rank-two state of purity `γ`.
pub fn entropy_from_purity(purity: f64) -> Result<Bits> {
    let arg = 2.0 * purity - 1.0;
    if arg < -1e-12 {
        return Err(Error::Domain(format!("purity {purity} below 1/2 is impossible for a rank-two state")));
    }
    let beta = (1.0 + arg.max(0.0).sqrt()) / 2.0;
    Ok(measures::binary_entropy(beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccr::{ccr_pure, Component};

    fn defaults(p: f64) -> PhysParams {
        PhysParams::defaults(p).unwrap()
    }

    fn grid(params: &PhysParams, n: usize) -> Vec<f64> {
        let tmax = params.flavor_window();
        (0..n).map(|k| tmax * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn omega_examples() {
        let pp = defaults(0.7);
        for i in [MassIndex::One, MassIndex::Two] {
            assert_eq!(omega(i, 1, 0.0, &pp).unwrap(), Complex64::new(1.0, 0.0));
            assert_eq!(omega(i, -1, 0.0, &pp).unwrap().norm(), 0.0);
            let t = std::f64::consts::FRAC_PI_2 / pp.energy_of(i);
            let w = omega(i, -1, t, &pp).unwrap();
            assert!((w - Complex64::new(0.0, -pp.mass(i) / pp.energy_of(i))).norm() < 1e-15);
            for t in [0.3, 2.0, 17.5] {
                let l = omega(i, 1, t, &pp).unwrap().norm_sqr();
                let r = omega(i, -1, t, &pp).unwrap().norm_sqr();
                assert!((l + r - 1.0).abs() < 1e-14);
            }
        }
        let rest = PhysParams::new(0.0, 1.0, 2.0, 10.0, 0.4).unwrap();
        let t = 0.8;
        let w = omega(MassIndex::Two, 1, t, &rest).unwrap();
        assert!((w - Complex64::new((2.0 * t).cos(), 0.0)).norm() < 1e-15);
        let w = omega(MassIndex::Two, -1, t, &rest).unwrap();
        assert!((w - Complex64::new(0.0, -(2.0 * t).sin())).norm() < 1e-15);
        assert!(omega(MassIndex::One, 0, t, &rest).is_err());
        assert!(omega_indexed(3, 1, t, &rest).is_err());
        assert!(omega_indexed(2, 1, t, &rest).is_ok());
    }

    #[test]
    fn deltas_sum_to_one() {
        let pp = defaults(1.0);
        for t in grid(&pp, 57) {
            let total: f64 = [1, -1]
                .iter()
                .map(|&c| {
                    let (e, m) = delta_coeffs(c, t, &pp).unwrap();
                    e.norm_sqr() + m.norm_sqr()
                })
                .sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        let (e, m) = delta_coeffs(1, 0.0, &pp).unwrap();
        assert_eq!((e, m.norm()), (Complex64::new(1.0, 0.0), 0.0));
        let (e, _) = delta_coeffs(-1, 0.0, &pp).unwrap();
        assert_eq!(e.norm(), 0.0);
    }

    #[test]
    fn no_mixing_or_degenerate_masses_stay_electron() {
        let unmixed = defaults(0.5).with_theta(0.0).unwrap();
        let degenerate = PhysParams::new(0.5, 1.0, 1.0, 10.0, 0.6).unwrap();
        for t in [0.0, 1.3, 250.0, 4000.0] {
            for c in [1, -1] {
                assert_eq!(delta_coeffs(c, t, &unmixed).unwrap().1.norm(), 0.0);
                assert!(delta_coeffs(c, t, &degenerate).unwrap().1.norm() < 1e-15);
            }
            assert!(g_function(t, &degenerate).abs() < 1e-14);
            assert!(h_function(t, &degenerate).abs() < 1e-14);
            let f = flavor_density_closed(t, &unmixed);
            assert_eq!((f.rho11, f.rho22, f.rho12.norm()), (1.0, 0.0, 0.0));
            assert_eq!(survival_probability(t, &unmixed), 1.0);
            assert_eq!(survival_probability_standard(t, &unmixed), 1.0);
        }
    }

    #[test]
    fn initial_state() {
        let pp = defaults(0.1);
        let s = build_state(0.0, &pp).unwrap();
        let want = LabeledState::basis(LABELS, &[1, 1, 1, 0]).unwrap();
        assert!((s.inner(&want).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(g_function(0.0, &pp), 0.0);
        assert_eq!(h_function(0.0, &pp), 0.0);
        assert_eq!(flavor_purity_closed(0.0, &pp), 1.0);
        assert!(build_state(-1.0, &pp).is_err());
    }

    #[test]
    fn both_assemblies_agree_and_stay_normalized() {
        for p in [0.1, 1.0, 10.0] {
            let pp = defaults(p);
            for t in grid(&pp, 41) {
                let a = build_state(t, &pp).unwrap();
                let b = build_state_from_deltas(t, &pp).unwrap();
                assert!((a.norm() - 1.0).abs() < 1e-12);
                let diff = a.amplitudes() - b.amplitudes();
                assert!(diff.norm() < 1e-12, "p={p} t={t}: {}", diff.norm());
            }
        }
    }

    #[test]
    fn spin_factorizes() {
        let pp = defaults(1.0);
        for t in grid(&pp, 23) {
            let rho = build_state(t, &pp).unwrap().reduced(&[SPIN]).unwrap();
            let want = DensityMatrix::diagonal([SPIN], &[0.0, 1.0]).unwrap();
            assert!(rho.max_abs_diff(&want).unwrap() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_partial_trace() {
        for p in [0.1, 1.0, 10.0] {
            let pp = defaults(p);
            for t in grid(&pp, 101) {
                let closed = flavor_density_closed(t, &pp);
                let brute = flavor_density_brute(t, &pp).unwrap();
                assert!(closed.max_abs_diff(&brute) < 1e-12, "p={p} t={t}");
                assert!((closed.rho11 + closed.rho22 - 1.0).abs() < 1e-12);
                assert!(closed.rho12.norm_sqr() <= closed.rho11 * closed.rho22 + 1e-12);
                assert!((closed.purity() - flavor_purity_closed(t, &pp)).abs() < 1e-12);
                let sum: f64 = [1, -1].iter().map(|&c| delta_coeffs(c, t, &pp).unwrap().0.norm_sqr()).sum();
                assert!((sum - closed.rho11).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn survival_bounds() {
        let pp = defaults(0.3);
        let sin2 = (2.0 * pp.theta()).sin();
        let floor = 1.0 - sin2 * sin2;
        let mut lowest = f64::INFINITY;
        for t in grid(&pp, 4001) {
            let g = g_function(t, &pp);
            assert!((-1e-14..=2.0 + 1e-14).contains(&g));
            let pee = survival_probability(t, &pp);
            assert!(pee >= floor - 1e-12);
            let leading = delta_coeffs(1, t, &pp).unwrap().0.norm_sqr();
            assert!(pee >= leading - 1e-12);
            lowest = lowest.min(pee);
        }
        // G reaches ≈ 2 near ΔE t = π when the chiral phases line up
        assert!(lowest - floor < 0.05, "{lowest} vs {floor}");
    }

    #[test]
    fn standard_formula() {
        let pp = defaults(1.0);
        let sin2 = (2.0 * pp.theta()).sin();
        let t = std::f64::consts::PI / pp.delta_e();
        let want = 1.0 - 4.0 * 0.306 * 0.694;
        assert!((survival_probability_standard(t, &pp) - want).abs() < 1e-12);

        // G - 2sin²(ΔEt/2) = κ sin(E1 t) sin(E2 t) exactly, with κ → 0 as p → ∞
        let kappa = |pp: &PhysParams| {
            let (e1, e2, p) = (pp.e1(), pp.e2(), pp.p());
            let dm = pp.m2() - pp.m1();
            p * p * dm * dm / (e1 * e2 * (e1 * e2 + p * p + pp.m1() * pp.m2()))
        };
        let mut prev = f64::INFINITY;
        for p in [10.0, 100.0, 1000.0] {
            let pp = defaults(p);
            let k = kappa(&pp);
            assert!(k < prev);
            prev = k;
            let noise = 1e-15 * pp.e2() * pp.flavor_window();
            for t in grid(&pp, 2001) {
                let gap = survival_probability(t, &pp) - survival_probability_standard(t, &pp);
                let exact = -sin2 * sin2 / 2.0 * k * (pp.e1() * t).sin() * (pp.e2() * t).sin();
                assert!((gap - exact).abs() < noise, "p={p} t={t}: {gap} vs {exact}");
            }
        }
    }

    #[test]
    fn purity_limits() {
        let slow = defaults(0.01);
        let sin2 = (2.0 * slow.theta()).sin();
        for t in grid(&slow, 301) {
            let approx = 1.0 - sin2 * sin2 / 2.0 * (slow.delta_e() * t).sin().powi(2);
            let purity = flavor_purity_closed(t, &slow);
            assert!((purity - approx).abs() < 2e-3);
            assert!(purity >= 1.0 - sin2 * sin2 / 2.0 - 1e-12 && purity <= 1.0 + 1e-12);
        }
        let fast = defaults(100.0);
        for t in grid(&fast, 301) {
            assert!((1.0 - flavor_purity_closed(t, &fast)).abs() < 1e-3);
        }
    }

    #[test]
    fn entropy_from_beta_matches_eigenvalues() {
        assert_eq!(entropy_from_purity(1.0).unwrap(), 0.0);
        assert!((entropy_from_purity(0.5).unwrap() - 1.0).abs() < 1e-12);
        assert!(entropy_from_purity(0.3).is_err());
        let pp = defaults(0.1);
        for t in grid(&pp, 37) {
            let rho = flavor_density_closed(t, &pp).to_density_matrix().unwrap();
            let direct = measures::von_neumann_entropy(&rho).unwrap();
            assert!((direct - flavor_entropy(t, &pp).unwrap()).abs() < 1e-9);
        }
        let fast = defaults(10.0);
        let peak = grid(&fast, 4000).into_iter().map(|t| flavor_entropy(t, &fast).unwrap()).fold(0.0, f64::max);
        assert!(peak < 0.05, "{peak}");
    }

    #[test]
    fn flavor_ccr() {
        let pp = defaults(1.0);
        let r = ccr_pure(&build_state(0.0, &pp).unwrap(), &FLAVOR).unwrap();
        assert!(r.get(Component::Coherence).unwrap().abs() < 1e-12);
        assert!((r.get(Component::Predictability).unwrap() - 2.0).abs() < 1e-12);
        assert!(r.get(Component::Entropy).unwrap().abs() < 1e-12);
        assert_eq!(r.budget, 2.0);
        for t in grid(&pp, 31) {
            let r = ccr_pure(&build_state(t, &pp).unwrap(), &FLAVOR).unwrap();
            assert!(r.residual.abs() < 1e-10);
        }
    }
}
