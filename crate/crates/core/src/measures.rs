//! Entropic and two-qubit quantum-information measures. All logarithms are
//! base 2.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::DensityMatrix;
use crate::tol;

/// Information in bits. Conditional entropies may be negative; every other
/// quantity is non-negative.
pub type Bits = f64;

fn check_hermitian(rho: &DensityMatrix) -> Result<()> {
    let dev = rho.hermiticity_deviation();
    if dev > tol::IDENTITY {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

fn cleanup(values: impl IntoIterator<Item = f64>) -> Result<Vec<f64>> {
    let mut out = values
        .into_iter()
        .map(|l| if l < -tol::EIGEN_FLOOR { Err(Error::NegativeEigenvalue { value: l }) } else { Ok(l.max(0.0)) })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Spectrum of `rho` in decreasing order, with values in `[-1e-10, 0)`
/// clamped to zero.
pub fn eigenvalues(rho: &DensityMatrix) -> Result<Vec<f64>> {
    check_hermitian(rho)?;
    cleanup(rho.matrix().symmetric_eigenvalues().iter().copied())
}

/// `-Σ p log₂ p`, skipping `p < 1e-12`.
pub fn shannon_entropy(probs: &[f64]) -> Bits {
    probs.iter().filter(|&&p| p >= tol::EIGEN_DROP).map(|&p| -p * p.log2()).sum::<f64>().max(0.0)
}

/// `h₂(x) = -x log₂ x - (1-x) log₂(1-x)`.
pub fn binary_entropy(x: f64) -> Bits {
    shannon_entropy(&[x, 1.0 - x])
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<Bits> {
    Ok(shannon_entropy(&eigenvalues(rho)?))
}

/// Entropy of the populations, `S(ρ_diag)`.
pub fn diagonal_entropy(rho: &DensityMatrix) -> Bits {
    let pops: Vec<f64> = rho.populations().into_iter().map(|p| p.max(0.0)).collect();
    shannon_entropy(&pops)
}

/// `C_re(ρ) = S(ρ_diag) − S(ρ)`.
pub fn relative_entropy_coherence(rho: &DensityMatrix) -> Result<Bits> {
    let c = diagonal_entropy(rho) - von_neumann_entropy(rho)?;
    Ok(if c < 0.0 && c > -tol::IDENTITY { 0.0 } else { c })
}

/// `P_vn(ρ) = log₂ d − S(ρ_diag)`.
///
/// The dephased entropy is what makes the pure and mixed entropic CCRs close
/// exactly: `C_re + P_vn = log₂ d − S(ρ)`.
pub fn predictability(rho: &DensityMatrix, d: usize) -> Result<Bits> {
    if d < rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: d });
    }
    Ok(((d as f64).log2() - diagonal_entropy(rho)).max(0.0))
}

/// Validated bipartition `(k, B)` of the labels of `rho`.
pub fn bipartition(rho: &DensityMatrix, k: &[&str]) -> Result<(Vec<String>, Vec<String>)> {
    if k.is_empty() {
        return Err(Error::BadPartition("subsystem k is empty".into()));
    }
    let rest = rho.complement(k)?;
    if rest.is_empty() {
        return Err(Error::BadPartition("subsystem k covers every label".into()));
    }
    Ok((k.iter().map(|s| s.to_string()).collect(), rest))
}

fn marginal_entropies(rho: &DensityMatrix, k: &[&str]) -> Result<(Bits, Bits, Bits)> {
    let (_, rest) = bipartition(rho, k)?;
    let rest: Vec<&str> = rest.iter().map(String::as_str).collect();
    let s_k = von_neumann_entropy(&rho.partial_trace(k)?)?;
    let s_b = von_neumann_entropy(&rho.partial_trace(&rest)?)?;
    let s = von_neumann_entropy(rho)?;
    Ok((s_k, s_b, s))
}

/// `I_{k:B} = S(ρ_k) + S(ρ_B) − S(ρ)`.
pub fn mutual_information(rho: &DensityMatrix, k: &[&str]) -> Result<Bits> {
    let (s_k, s_b, s) = marginal_entropies(rho, k)?;
    let i = s_k + s_b - s;
    Ok(if i < 0.0 && i > -tol::CCR_RESIDUAL { 0.0 } else { i })
}

/// `S_{k|B} = S(ρ) − S(ρ_B)`; negative values witness entanglement.
pub fn conditional_entropy(rho: &DensityMatrix, k: &[&str]) -> Result<Bits> {
    let (_, s_b, s) = marginal_entropies(rho, k)?;
    Ok(s - s_b)
}

fn two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch { expected: 4, found: rho.dim() });
    }
    Ok(())
}

/// `σ_y ⊗ σ_y`, real in the computational basis.
fn sigma_yy() -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 3)] = Complex64::from(-1.0);
    m[(1, 2)] = Complex64::from(1.0);
    m[(2, 1)] = Complex64::from(1.0);
    m[(3, 0)] = Complex64::from(-1.0);
    m
}

/// The spin-flipped matrix `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn spin_flipped(rho: &DensityMatrix) -> Result<DMatrix<Complex64>> {
    two_qubit(rho)?;
    let yy = sigma_yy();
    Ok(&yy * rho.matrix().map(|z| z.conj()) * &yy)
}

/// Square roots of the eigenvalues of `ρρ̃`, decreasing.
///
/// Computed as the singular values of `τ_ij = ⟨v_i|σ_y⊗σ_y|v_j*⟩` over the
/// subnormalized eigenvectors `v_i = √p_i e_i` of `ρ`, which sidesteps the
/// square root of round-off in the null space of rank-deficient states.
/// Eigenvalues of `ρ` below `1e-12` are treated as zero.
pub fn wootters_lambdas(rho: &DensityMatrix) -> Result<[f64; 4]> {
    two_qubit(rho)?;
    check_hermitian(rho)?;
    let eig = SymmetricEigen::new(rho.matrix().clone());
    let mut vecs = Vec::new();
    for (idx, &p) in eig.eigenvalues.iter().enumerate() {
        if p < -tol::EIGEN_FLOOR {
            return Err(Error::NegativeEigenvalue { value: p });
        }
        if p >= tol::EIGEN_DROP {
            vecs.push(eig.eigenvectors.column(idx) * Complex64::from(p.sqrt()));
        }
    }
    let mut out = [0.0; 4];
    if vecs.is_empty() {
        return Ok(out);
    }
    let yy = sigma_yy();
    let n = vecs.len();
    let tau = DMatrix::from_fn(n, n, |i, j| {
        let flipped = &yy * vecs[j].map(|z| z.conj());
        vecs[i].dotc(&flipped)
    });
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    for (o, s) in out.iter_mut().zip(sv) {
        *o = s;
    }
    Ok(out)
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let l = wootters_lambdas(rho)?;
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// Binary entropy of `(1 + √(1 − C²))/2`.
pub fn entanglement_of_formation(c: f64) -> Result<Bits> {
    if !(-tol::IDENTITY..=1.0 + tol::IDENTITY).contains(&c) {
        return Err(Error::Domain(format!("concurrence must lie in [0, 1], got {c}")));
    }
    let c = c.clamp(0.0, 1.0);
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

/// Predictability, visibility and concurrence of one qubit of a pure
/// two-qubit state, with `residual = P² + V² + C² − 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitPv {
    pub predictability: f64,
    pub visibility: f64,
    pub concurrence: f64,
    pub residual: f64,
}

pub fn qubit_pv(rho: &DensityMatrix, k: &str) -> Result<QubitPv> {
    two_qubit(rho)?;
    let purity = rho.purity();
    if purity < 1.0 - tol::NORMALIZATION {
        return Err(Error::NotPure { purity });
    }
    let r = rho.partial_trace(&[k])?;
    let p = (r.get(0, 0).re - r.get(1, 1).re).abs();
    let v = 2.0 * r.get(0, 1).norm();
    let c = concurrence(rho)?;
    Ok(QubitPv { predictability: p, visibility: v, concurrence: c, residual: p * p + v * v + c * c - 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{density, kron, LabeledState};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pure(amps: Vec<Complex64>) -> DensityMatrix {
        let n = (amps.len() as f64).log2() as usize;
        let labels: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
        density(&LabeledState::new(labels, amps).unwrap().normalized().unwrap()).unwrap()
    }

    fn bell() -> DensityMatrix {
        pure(vec![c(0.0), c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(0.0)])
    }

    fn random_mixed(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
        let d = 1 << n;
        let a = DMatrix::from_fn(d, d, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let m = &a * a.adjoint();
        let tr = m.trace().re;
        let labels: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
        DensityMatrix::new(labels, m / Complex64::from(tr)).unwrap()
    }

    fn random_unitary2(rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
        let (a, b, g, d): (f64, f64, f64, f64) = (rng.random(), rng.random(), rng.random(), rng.random());
        let (a, b, g, d) = (a * 6.3, b * 6.3, g * 1.6, d * 6.3);
        let e = |x: f64| Complex64::from_polar(1.0, x);
        DMatrix::from_row_slice(
            2,
            2,
            &[e(a + b) * g.cos(), e(a + d) * g.sin(), -e(a - d) * g.sin(), e(a - b) * g.cos()],
        )
    }

    /// `|⟨ψ|σ_y⊗σ_y|ψ*⟩|`, the pure-state concurrence.
    fn pure_concurrence(psi: &[Complex64; 4]) -> f64 {
        (psi[0] * psi[3] - psi[1] * psi[2]).norm() * 2.0
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&bell()).unwrap().abs() < 1e-12);
        let half = DensityMatrix::diagonal(["a"], &[0.5, 0.5]).unwrap();
        assert!((von_neumann_entropy(&half).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn entropy_rejects_non_hermitian_and_negative() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5), Complex64::new(0.0, 0.3), Complex64::new(0.0, 0.3), c(0.5)]);
        assert!(matches!(DensityMatrix::new(["a"], m), Err(Error::NotHermitian { .. })));
        let neg = DensityMatrix::new(["a"], DMatrix::from_row_slice(2, 2, &[c(1.2), c(0.0), c(0.0), c(-0.2)])).unwrap();
        assert!(matches!(von_neumann_entropy(&neg), Err(Error::NegativeEigenvalue { .. })));
    }

    #[test]
    fn coherence_examples() {
        let diag = DensityMatrix::diagonal(["a"], &[0.3, 0.7]).unwrap();
        assert_eq!(relative_entropy_coherence(&diag).unwrap(), 0.0);
        let plus = pure(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]);
        assert!((relative_entropy_coherence(&plus).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn predictability_examples() {
        let zero = pure(vec![c(1.0), c(0.0)]);
        assert_eq!(predictability(&zero, 2).unwrap(), 1.0);
        let half = DensityMatrix::diagonal(["a"], &[0.5, 0.5]).unwrap();
        assert_eq!(predictability(&half, 2).unwrap(), 0.0);
        let e = pure(vec![c(0.0), c(0.0), c(1.0), c(0.0)]);
        assert_eq!(predictability(&e, 4).unwrap(), 2.0);
        assert!(predictability(&e, 2).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let a = LabeledState::qubit("a", c(0.6), c(0.8)).unwrap();
        let b = LabeledState::qubit("b", c(FRAC_1_SQRT_2), Complex64::new(0.0, FRAC_1_SQRT_2)).unwrap();
        let prod = density(&kron(&[a, b]).unwrap()).unwrap();
        assert!(mutual_information(&prod, &["a"]).unwrap().abs() < 1e-12);
        assert!((mutual_information(&bell(), &["q0"]).unwrap() - 2.0).abs() < 1e-12);
        let classical = DensityMatrix::diagonal(["a", "b"], &[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((mutual_information(&classical, &["a"]).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(mutual_information(&classical, &["a", "b"]), Err(Error::BadPartition(_))));
        assert!(matches!(mutual_information(&classical, &[]), Err(Error::BadPartition(_))));
        assert!(matches!(mutual_information(&classical, &["z"]), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn conditional_entropy_examples() {
        assert!((conditional_entropy(&bell(), &["q0"]).unwrap() + 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::diagonal(["a", "b"], &[0.25; 4]).unwrap();
        assert!((conditional_entropy(&mixed, &["a"]).unwrap() - 1.0).abs() < 1e-12);
        let psi = pure(vec![c(0.1), c(0.7), c(0.3), c(-0.5), c(0.2), c(0.0), c(0.4), c(0.1)]);
        let s_b = von_neumann_entropy(&psi.partial_trace(&["q1", "q2"]).unwrap()).unwrap();
        assert!((conditional_entropy(&psi, &["q0"]).unwrap() + s_b).abs() < 1e-12);
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&bell()).unwrap() - 1.0).abs() < 1e-12);
        let prod = pure(vec![c(0.6), c(0.0), c(0.8), c(0.0)]);
        assert!(concurrence(&prod).unwrap().abs() < 1e-12);
        let (a, b) = (0.3f64.sqrt(), 0.7f64.sqrt());
        let s = pure(vec![c(0.0), c(a), c(b), c(0.0)]);
        assert!((concurrence(&s).unwrap() - 2.0 * a * b).abs() < 1e-12);
        let three = DensityMatrix::diagonal(["a", "b", "c"], &[0.125; 8]).unwrap();
        assert!(concurrence(&three).is_err());
    }

    #[test]
    fn concurrence_of_werner_state() {
        // p|Ψ⁻⟩⟨Ψ⁻| + (1-p) I/4 has C = max(0, (3p-1)/2)
        let singlet = pure(vec![c(0.0), c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2), c(0.0)]);
        for &p in &[0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let m = singlet.matrix() * Complex64::from(p) + DMatrix::identity(4, 4) * Complex64::from((1.0 - p) / 4.0);
            let rho = DensityMatrix::new(["a", "b"], m).unwrap();
            let expect = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((concurrence(&rho).unwrap() - expect).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn lambdas_match_sqrt_route() {
        // λ_i² are the eigenvalues of √ρ ρ̃ √ρ
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let rho = random_mixed(&mut rng, 2);
            let eig = SymmetricEigen::new(rho.matrix().clone());
            let sqrt_d = eig.eigenvalues.map(|l| Complex64::from(l.max(0.0).sqrt()));
            let sqrt_rho = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_d) * eig.eigenvectors.adjoint();
            let r = &sqrt_rho * spin_flipped(&rho).unwrap() * &sqrt_rho;
            let r = (&r + r.adjoint()) * Complex64::from(0.5);
            let mut l2: Vec<f64> = r.symmetric_eigenvalues().iter().map(|x| x.max(0.0).sqrt()).collect();
            l2.sort_by(|a, b| b.total_cmp(a));
            let l = wootters_lambdas(&rho).unwrap();
            for i in 0..4 {
                assert!((l[i] - l2[i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn concurrence_local_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let rho = random_mixed(&mut rng, 2);
            // bias towards entangled states
            let b = bell();
            let m = rho.matrix() * Complex64::from(0.3) + b.matrix() * Complex64::from(0.7);
            let rho = DensityMatrix::new(["q0", "q1"], m).unwrap();
            let u = random_unitary2(&mut rng).kronecker(&random_unitary2(&mut rng));
            let rotated = &u * rho.matrix() * u.adjoint();
            let rotated =
                DensityMatrix::new(["q0", "q1"], (&rotated + rotated.adjoint()) * Complex64::from(0.5)).unwrap();
            let (c0, c1) = (concurrence(&rho).unwrap(), concurrence(&rotated).unwrap());
            assert!((c0 - c1).abs() < 1e-9);
            assert!((0.0..=1.0).contains(&c0));
        }
    }

    #[test]
    fn eof_examples() {
        assert_eq!(entanglement_of_formation(0.0).unwrap(), 0.0);
        assert!((entanglement_of_formation(1.0).unwrap() - 1.0).abs() < 1e-15);
        let (a, b) = (0.9f64.sqrt(), 0.1f64.sqrt());
        let conc = 2.0 * a * b;
        let x = (1.0 + (1.0 - 0.36f64).sqrt()) / 2.0;
        let expect = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
        assert!((entanglement_of_formation(conc).unwrap() - expect).abs() < 1e-12);
        assert!(entanglement_of_formation(1.5).is_err());
        assert!(entanglement_of_formation(-0.1).is_err());
    }

    #[test]
    fn qubit_pv_examples() {
        let prod = pure(vec![c(FRAC_1_SQRT_2), c(0.0), c(FRAC_1_SQRT_2), c(0.0)]);
        let r = qubit_pv(&prod, "q0").unwrap();
        assert!(r.predictability.abs() < 1e-12 && (r.visibility - 1.0).abs() < 1e-12 && r.concurrence.abs() < 1e-12);
        assert!(r.residual.abs() < 1e-12);
        for k in ["q0", "q1"] {
            let r = qubit_pv(&bell(), k).unwrap();
            assert!(r.predictability.abs() < 1e-12 && r.visibility.abs() < 1e-12);
            assert!((r.concurrence - 1.0).abs() < 1e-12 && r.residual.abs() < 1e-12);
        }
        let (a, b) = (0.2f64.sqrt(), 0.8f64.sqrt());
        let s = pure(vec![c(0.0), c(a), c(b), c(0.0)]);
        let r = qubit_pv(&s, "q1").unwrap();
        assert!((r.predictability - (a * a - b * b).abs()).abs() < 1e-12);
        assert!(r.visibility.abs() < 1e-12);
        assert!((r.concurrence - 2.0 * a * b).abs() < 1e-12);
        assert!(r.residual.abs() < 1e-12);
        let mixed = DensityMatrix::diagonal(["a", "b"], &[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(matches!(qubit_pv(&mixed, "a"), Err(Error::NotPure { .. })));
    }

    fn amps_strategy(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
            .prop_filter("non-zero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
            .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
    }

    proptest! {
        #[test]
        fn pure_two_qubit_ccr_closes(amps in amps_strategy(4)) {
            let rho = pure(amps.clone());
            let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let psi = [amps[0] / norm, amps[1] / norm, amps[2] / norm, amps[3] / norm];
            let conc = concurrence(&rho).unwrap();
            prop_assert!((conc - pure_concurrence(&psi)).abs() < 1e-10);
            for k in ["q0", "q1"] {
                prop_assert!(qubit_pv(&rho, k).unwrap().residual.abs() < 1e-10);
            }
        }

        #[test]
        fn coherence_plus_predictability_is_budget_minus_entropy(amps in amps_strategy(8)) {
            let rho = pure(amps);
            for keep in [vec!["q0"], vec!["q1", "q2"], vec!["q0", "q2"]] {
                let r = rho.partial_trace(&keep).unwrap();
                let d = r.dim();
                let lhs = relative_entropy_coherence(&r).unwrap() + predictability(&r, d).unwrap();
                let rhs = (d as f64).log2() - von_neumann_entropy(&r).unwrap();
                prop_assert!((lhs - rhs).abs() < 1e-10);
            }
        }

        #[test]
        fn mutual_information_and_conditional_entropy_bounds(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_mixed(&mut rng, 3);
            for keep in [vec!["q0"], vec!["q1", "q2"]] {
                let i = mutual_information(&rho, &keep).unwrap();
                let s = conditional_entropy(&rho, &keep).unwrap();
                prop_assert!(i >= 0.0);
                prop_assert!(s.abs() <= keep.len() as f64 + 1e-10);
            }
        }
    }
}
