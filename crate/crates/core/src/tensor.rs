//! Labelled qubit registers and density matrices.
//!
//! Basis ordering: the first label is the most significant bit of the
//! computational-basis index, the last label the least significant.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Upper bound on register size; matrices never exceed 256 × 256.
pub const MAX_QUBITS: usize = 8;

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::BadPartition("a register needs at least one label".into()));
    }
    if labels.len() > MAX_QUBITS {
        return Err(Error::Domain(format!("at most {MAX_QUBITS} qubits supported, got {}", labels.len())));
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn positions(labels: &[String], keep: &[&str]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::BadPartition("kept subsystem must be non-empty".into()));
    }
    let mut seen = HashSet::new();
    keep.iter()
        .map(|k| {
            if !seen.insert(*k) {
                return Err(Error::BadPartition(format!("label `{k}` listed twice")));
            }
            labels.iter().position(|l| l == k).ok_or_else(|| Error::UnknownLabel(k.to_string()))
        })
        .collect()
}

/// Scatter tables mapping sub-register indices onto full-register indices.
struct Split {
    keep: Vec<usize>,
    rest: Vec<usize>,
}

impl Split {
    fn new(n: usize, kept: &[usize]) -> Self {
        let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
        Self { keep: scatter(n, kept), rest: scatter(n, &traced) }
    }
}

fn scatter(n: usize, qubits: &[usize]) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|a| {
            qubits.iter().enumerate().fold(0, |acc, (j, &q)| {
                let bit = (a >> (k - 1 - j)) & 1;
                acc | (bit << (n - 1 - q))
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledState {
    labels: Vec<String>,
    amp: DVector<Complex64>,
}

impl LabeledState {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>, amp: Vec<Complex64>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        check_labels(&labels)?;
        let dim = 1usize << labels.len();
        if amp.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: amp.len() });
        }
        Ok(Self { labels, amp: DVector::from_vec(amp) })
    }

    /// Computational basis state; `bits[i]` is the value of `labels[i]`.
    pub fn basis<S: Into<String>>(labels: impl IntoIterator<Item = S>, bits: &[usize]) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        check_labels(&labels)?;
        if bits.len() != labels.len() || bits.iter().any(|&b| b > 1) {
            return Err(Error::Domain(format!("basis bits {bits:?} do not fit {} qubits", labels.len())));
        }
        let mut amp = vec![Complex64::new(0.0, 0.0); 1 << labels.len()];
        let idx = bits.iter().fold(0, |acc, &b| (acc << 1) | b);
        amp[idx] = Complex64::new(1.0, 0.0);
        Ok(Self { labels, amp: DVector::from_vec(amp) })
    }

    pub fn qubit(label: impl Into<String>, a0: Complex64, a1: Complex64) -> Result<Self> {
        Self::new([label.into()], vec![a0, a1])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amp
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn norm(&self) -> f64 {
        self.amp.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self { labels: self.labels.clone(), amp: &self.amp / Complex64::from(n) })
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > tol::NORMALIZATION {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(())
    }

    /// Amplitude of the basis state whose bits are listed in label order.
    pub fn amplitude(&self, bits: &[usize]) -> Complex64 {
        let idx = bits.iter().fold(0, |acc, &b| (acc << 1) | b);
        self.amp[idx]
    }

    /// `⟨self|other⟩`; labels must agree.
    pub fn inner(&self, other: &LabeledState) -> Result<Complex64> {
        if self.labels != other.labels {
            return Err(Error::BadPartition("inner product of differently labelled registers".into()));
        }
        Ok(self.amp.dotc(&other.amp))
    }

    /// `self ⊗ other` with `self` in the high bits.
    pub fn tensor(&self, other: &LabeledState) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        check_labels(&labels)?;
        let amp = self.amp.kronecker(&other.amp);
        Ok(Self { labels, amp })
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self { labels: self.labels.clone(), amp: &self.amp * z }
    }

    pub fn add(&self, other: &LabeledState) -> Result<Self> {
        if self.labels != other.labels {
            return Err(Error::BadPartition("sum of differently labelled registers".into()));
        }
        Ok(Self { labels: self.labels.clone(), amp: &self.amp + &other.amp })
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        density(self)
    }

    /// Reduced density matrix over `keep`, computed directly from the
    /// amplitudes without forming the global projector.
    pub fn reduced(&self, keep: &[&str]) -> Result<DensityMatrix> {
        self.ensure_normalized()?;
        let kept = positions(&self.labels, keep)?;
        let split = Split::new(self.num_qubits(), &kept);
        let d = split.keep.len();
        let mut mat = DMatrix::<Complex64>::zeros(d, d);
        for (a, &ia) in split.keep.iter().enumerate() {
            for (b, &ib) in split.keep.iter().enumerate().skip(a) {
                let z: Complex64 = split.rest.iter().map(|&r| self.amp[ia | r] * self.amp[ib | r].conj()).sum();
                mat[(a, b)] = z;
                mat[(b, a)] = z.conj();
            }
            mat[(a, a)].im = 0.0;
        }
        Ok(DensityMatrix { labels: keep.iter().map(|s| s.to_string()).collect(), mat })
    }
}

/// Kronecker product in list order.
pub fn kron(states: &[LabeledState]) -> Result<LabeledState> {
    let (first, rest) = states.split_first().ok_or_else(|| Error::BadPartition("kron of an empty list".into()))?;
    rest.iter().try_fold(first.clone(), |acc, s| acc.tensor(s))
}

/// `|s⟩⟨s|`.
pub fn density(s: &LabeledState) -> Result<DensityMatrix> {
    s.ensure_normalized()?;
    let mat = &s.amp * s.amp.adjoint();
    Ok(DensityMatrix { labels: s.labels.clone(), mat })
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    rho.dephase()
}

/// Hermitian, unit-trace matrix over labelled qubits. Positivity is checked
/// lazily by the spectral routines in [`crate::measures`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<String>,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>, mat: DMatrix<Complex64>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        check_labels(&labels)?;
        let dim = 1usize << labels.len();
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: mat.nrows().max(mat.ncols()) });
        }
        let rho = Self { labels, mat };
        let dev = rho.hermiticity_deviation();
        if dev > tol::IDENTITY {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > tol::IDENTITY {
            return Err(Error::NotUnitTrace { trace: tr });
        }
        Ok(rho)
    }

    /// Diagonal matrix with the given populations.
    pub fn diagonal<S: Into<String>>(labels: impl IntoIterator<Item = S>, probs: &[f64]) -> Result<Self> {
        let d = probs.len();
        let mat =
            DMatrix::from_fn(d, d, |i, j| if i == j { Complex64::from(probs[i]) } else { Complex64::new(0.0, 0.0) });
        Self::new(labels, mat)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.mat.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `Tr ρ² = Σ |ρ_ij|²`.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn dephase(&self) -> DensityMatrix {
        let d = self.dim();
        let mat = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::from(self.mat[(i, i)].re)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        DensityMatrix { labels: self.labels.clone(), mat }
    }

    pub fn populations(&self) -> Vec<f64> {
        self.mat.diagonal().iter().map(|z| z.re).collect()
    }

    /// Largest off-diagonal modulus.
    pub fn max_coherence(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    worst = worst.max(self.mat[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Reduction onto `keep`, ordered as given.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityMatrix> {
        let kept = positions(&self.labels, keep)?;
        let split = Split::new(self.num_qubits(), &kept);
        let d = split.keep.len();
        let mat = DMatrix::from_fn(d, d, |a, b| {
            let (ia, ib) = (split.keep[a], split.keep[b]);
            split.rest.iter().map(|&r| self.mat[(ia | r, ib | r)]).sum()
        });
        Ok(DensityMatrix { labels: keep.iter().map(|s| s.to_string()).collect(), mat })
    }

    /// Labels not in `keep`, in register order.
    pub fn complement(&self, keep: &[&str]) -> Result<Vec<String>> {
        positions(&self.labels, keep)?;
        Ok(self.labels.iter().filter(|l| !keep.contains(&l.as_str())).cloned().collect())
    }

    /// Max elementwise modulus of `self - other`; labels must agree.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        if self.labels != other.labels {
            return Err(Error::BadPartition("comparing differently labelled matrices".into()));
        }
        Ok((&self.mat - &other.mat).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }
}
