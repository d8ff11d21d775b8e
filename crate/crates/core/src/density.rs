//! Density matrices, partial traces of a [`JointState`], and the spectral
//! functionals built on [`hermitian_eigenvalues`].

use num_complex::Complex;

use crate::engine::JointState;
use crate::error::{Error, Result};
use crate::scalar::{czero, entropy_term, Real};
use crate::spectral::hermitian_eigenvalues;

/// Hermitian, PSD and trace tolerances.
pub const DENSITY_TOL: f64 = 1e-10;

/// Eigenvalues below this carry no entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-14;

/// A unit-trace Hermitian matrix, optionally tagged with the total number
/// of each basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    dim: usize,
    entries: Vec<Complex<T>>,
    number_labels: Option<Vec<i64>>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates hermiticity and unit trace. Positivity is checked lazily by
    /// the spectral routines.
    pub fn new(dim: usize, entries: Vec<Complex<T>>, number_labels: Option<Vec<i64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDensity("dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if let Some(labels) = &number_labels {
            if labels.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: labels.len(),
                });
            }
        }
        let tol = T::tol(DENSITY_TOL);
        let mut trace = T::zero();
        for i in 0..dim {
            for j in 0..=i {
                let a = entries[i * dim + j];
                let b = entries[j * dim + i];
                if !a.re.is_finite() || !a.im.is_finite() {
                    return Err(Error::InvalidDensity("non-finite entry".into()));
                }
                if (a - b.conj()).norm() > tol {
                    return Err(Error::InvalidDensity(format!("not Hermitian at ({i}, {j})")));
                }
            }
            trace = trace + entries[i * dim + i].re;
        }
        if (trace - T::one()).abs() > tol {
            return Err(Error::InvalidDensity(format!("trace is {trace}")));
        }
        Ok(DensityMatrix {
            dim,
            entries,
            number_labels,
        })
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(amps: &[Complex<T>], number_labels: Option<Vec<i64>>) -> Result<Self> {
        let n = amps.len();
        let mut entries = vec![czero(); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = amps[i] * amps[j].conj();
            }
        }
        Self::new(n, entries, number_labels)
    }

    pub fn maximally_mixed(dim: usize, number_labels: Option<Vec<i64>>) -> Result<Self> {
        let mut entries = vec![czero(); dim * dim];
        let p = T::from_count(dim).recip();
        for i in 0..dim {
            entries[i * dim + i] = Complex::new(p, T::zero());
        }
        Self::new(dim, entries, number_labels)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.dim + j]
    }

    pub fn number_labels(&self) -> Option<&[i64]> {
        self.number_labels.as_deref()
    }

    pub fn with_number_labels(mut self, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: labels.len(),
            });
        }
        self.number_labels = Some(labels);
        Ok(self)
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.entries[i * self.dim + i].re).sum()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        // Hermitian: Tr ρ² = Σ |ρ_ij|².
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `ρ ⊗ σ`; number labels add when both are present.
    pub fn tensor(&self, other: &Self) -> Self {
        let n = self.dim * other.dim;
        let mut entries = vec![czero(); n * n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.entry(i, j);
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        entries[(i * other.dim + k) * n + j * other.dim + l] = a * other.entry(k, l);
                    }
                }
            }
        }
        let number_labels = match (&self.number_labels, &other.number_labels) {
            (Some(x), Some(y)) => Some(x.iter().flat_map(|a| y.iter().map(move |b| a + b)).collect()),
            _ => None,
        };
        DensityMatrix {
            dim: n,
            entries,
            number_labels,
        }
    }

    /// Spectrum with the PSD check applied: eigenvalues in `[-1e-10, 0)` are
    /// clamped to zero, anything more negative is an error.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        let mut ev = hermitian_eigenvalues(self.dim, &self.entries);
        let tol = T::tol(DENSITY_TOL);
        for x in &mut ev {
            if *x < -tol {
                return Err(Error::InvalidDensity(format!("negative eigenvalue {x}")));
            }
            if *x < T::zero() {
                *x = T::zero();
            }
        }
        Ok(ev)
    }
}

/// `Tr_E |joint⟩⟨joint|`, a `2^k × 2^k` matrix labeled by `popcount(b)`.
pub fn reduce_systems<T: Real>(joint: &JointState<T>) -> Result<DensityMatrix<T>> {
    let rows = 1usize << joint.systems();
    let dim = joint.dim();
    let amps = joint.amplitudes();
    let mut entries = vec![czero(); rows * rows];
    for b in 0..rows {
        let rb = &amps[b * dim..(b + 1) * dim];
        for c in 0..=b {
            let rc = &amps[c * dim..(c + 1) * dim];
            let mut acc = czero();
            for (x, y) in rb.iter().zip(rc) {
                acc = acc + *x * y.conj();
            }
            entries[b * rows + c] = acc;
            entries[c * rows + b] = acc.conj();
        }
        entries[b * rows + b].im = T::zero();
    }
    let labels = (0..rows).map(|b| b.count_ones() as i64).collect();
    DensityMatrix::new(rows, entries, Some(labels))
}

/// `Tr_S |joint⟩⟨joint|` over the ladder window, labeled by level.
pub fn reduce_reservoir<T: Real>(joint: &JointState<T>) -> Result<DensityMatrix<T>> {
    let rows = 1usize << joint.systems();
    let dim = joint.dim();
    let amps = joint.amplitudes();
    let mut entries = vec![czero(); dim * dim];
    for b in 0..rows {
        let row = &amps[b * dim..(b + 1) * dim];
        for (j, x) in row.iter().enumerate() {
            if x.re == T::zero() && x.im == T::zero() {
                continue;
            }
            for (l, y) in row.iter().enumerate().take(j + 1) {
                entries[j * dim + l] = entries[j * dim + l] + *x * y.conj();
            }
        }
    }
    for j in 0..dim {
        entries[j * dim + j].im = T::zero();
        for l in 0..j {
            entries[l * dim + j] = entries[j * dim + l].conj();
        }
    }
    let labels = (0..dim).map(|j| joint.base() + j as i64).collect();
    DensityMatrix::new(dim, entries, Some(labels))
}

/// `S(ρ) = -Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let cutoff = T::lit(ENTROPY_CUTOFF);
    let s: T = rho
        .eigenvalues()?
        .into_iter()
        .filter(|&x| x >= cutoff)
        .map(entropy_term)
        .sum();
    // An eigenvalue a few ulps above one gives a tiny negative term.
    Ok(s.max(T::zero()))
}

/// `⟨t|ρ|t⟩`.
pub fn fidelity_with_pure<T: Real>(rho: &DensityMatrix<T>, target: &[Complex<T>]) -> Result<T> {
    if target.len() != rho.dim {
        return Err(Error::DimensionMismatch {
            expected: rho.dim,
            found: target.len(),
        });
    }
    let n = rho.dim;
    let mut acc = czero();
    for (i, ti) in target.iter().enumerate() {
        let row = rho.entries[i * n..(i + 1) * n]
            .iter()
            .zip(target)
            .fold(czero(), |row, (r, t)| row + *r * *t);
        acc = acc + ti.conj() * row;
    }
    Ok(acc.re)
}

/// `½ Σ |λ_i(a - b)|`.
pub fn trace_distance<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    let diff: Vec<_> = a.entries.iter().zip(&b.entries).map(|(x, y)| *x - *y).collect();
    let ev = hermitian_eigenvalues(a.dim, &diff);
    Ok(ev.into_iter().map(|x| x.abs()).sum::<T>() * T::lit(0.5))
}

/// The twirl `Σ_N Π_N ρ Π_N`: zeroes every coherence between basis states
/// with different number labels.
pub fn dephase_total_number<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    let labels = rho.number_labels.as_ref().ok_or(Error::MissingLabels)?;
    let n = rho.dim;
    let mut out = rho.clone();
    for i in 0..n {
        for j in 0..n {
            if labels[i] != labels[j] {
                out.entries[i * n + j] = czero();
            }
        }
    }
    Ok(out)
}
