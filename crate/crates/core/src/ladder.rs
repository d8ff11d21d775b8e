//! Reservoir states on the doubly-infinite energy ladder.
//!
//! A [`LadderState`] stores amplitudes on a contiguous window of ladder
//! levels `[base, base + dim)`; every level outside the window has amplitude
//! zero. The shift operator `Δ|n⟩ = |n+1⟩` acts by relabeling the window, so
//! no truncation error is ever introduced.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, czero, Real};

/// Sign of the ladder shift in `(1 + Δ^{±1}) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftDirection {
    /// `Δ^{+1}`
    Raise,
    /// `Δ^{-1}`
    Lower,
}

impl ShiftDirection {
    pub fn sign(self) -> i64 {
        match self {
            ShiftDirection::Raise => 1,
            ShiftDirection::Lower => -1,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            ShiftDirection::Raise => ShiftDirection::Lower,
            ShiftDirection::Lower => ShiftDirection::Raise,
        }
    }
}

/// Amplitudes over the ladder levels `base, base + 1, …, base + dim - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderState<T: Real> {
    base: i64,
    amps: Vec<Complex<T>>,
    normalized: bool,
}

impl<T: Real> LadderState<T> {
    /// The uniform-modulus reservoir `Σ_{l<L} e^{ilθ} |l0 + l⟩ / √L`.
    pub fn reservoir(levels: usize, l0: i64, theta: T) -> Result<Self> {
        if levels == 0 {
            return Err(Error::InvalidParameter(
                "reservoir needs at least one level (L >= 1)".into(),
            ));
        }
        let scale = T::from_count(levels).sqrt().recip();
        let amps = (0..levels).map(|l| cis(T::from_count(l) * theta) * scale).collect();
        Ok(LadderState {
            base: l0,
            amps,
            normalized: true,
        })
    }

    /// Wraps raw amplitudes without normalizing them.
    pub fn from_amplitudes(base: i64, amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidParameter("ladder window must be non-empty".into()));
        }
        Ok(LadderState {
            base,
            amps,
            normalized: false,
        })
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalize(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidParameter("cannot normalize a zero state".into()));
        }
        let inv = norm.recip();
        for a in &mut self.amps {
            *a = *a * inv;
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// One past the highest level of the window.
    pub fn end(&self) -> i64 {
        self.base + self.amps.len() as i64
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Amplitude at an absolute ladder level; zero outside the window.
    pub fn amplitude(&self, level: i64) -> Complex<T> {
        if level < self.base || level >= self.end() {
            czero()
        } else {
            self.amps[(level - self.base) as usize]
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `Δ^m`: relabels the window, amplitudes untouched.
    pub fn shift(&self, m: i64) -> Self {
        LadderState {
            base: self.base + m,
            amps: self.amps.clone(),
            normalized: self.normalized,
        }
    }

    /// `⟨self|other⟩`, summed over the intersection of the two windows.
    pub fn overlap(&self, other: &Self) -> Complex<T> {
        let lo = self.base.max(other.base);
        let hi = self.end().min(other.end());
        let mut acc = czero();
        for level in lo..hi {
            let a = self.amps[(level - self.base) as usize];
            let b = other.amps[(level - other.base) as usize];
            acc = acc + a.conj() * b;
        }
        acc
    }

    /// `((1 + Δ^{±1}) / 2)^k |self⟩`, expanded as
    /// `Σ_a C(k, a) Δ^{±a} |self⟩ / 2^k` on a window widened by `k`.
    ///
    /// The result is not normalized.
    pub fn half_shift_binomial(&self, k: usize, direction: ShiftDirection) -> Self {
        if k == 0 {
            return self.clone();
        }
        let weights = halved_binomial_row::<T>(k);
        let dim = self.dim();
        let mut out = vec![czero(); dim + k];
        // With Δ^{-1} the support moves down by up to k levels.
        let base = match direction {
            ShiftDirection::Raise => self.base,
            ShiftDirection::Lower => self.base - k as i64,
        };
        for (a, &w) in weights.iter().enumerate() {
            let offset = match direction {
                ShiftDirection::Raise => a,
                ShiftDirection::Lower => k - a,
            };
            for (j, amp) in self.amps.iter().enumerate() {
                out[j + offset] = out[j + offset] + *amp * w;
            }
        }
        LadderState {
            base,
            amps: out,
            normalized: false,
        }
    }
}

/// `C(k, a) / 2^k` for `a = 0..=k`, built by repeated halving of Pascal's
/// rule so no intermediate value exceeds one.
fn halved_binomial_row<T: Real>(k: usize) -> Vec<T> {
    let half = T::lit(0.5);
    let mut row = vec![T::one()];
    for _ in 0..k {
        let mut next = vec![T::zero(); row.len() + 1];
        for (i, &w) in row.iter().enumerate() {
            next[i] = next[i] + w * half;
            next[i + 1] = next[i + 1] + w * half;
        }
        row = next;
    }
    row
}

/// Closed-form overlap of two `L`-level reservoirs whose phases differ by
/// `delta`: `e^{i(L-1)δ/2} sin(Lδ/2) / (L sin(δ/2))`.
pub fn dirichlet_overlap<T: Real>(levels: usize, delta: T) -> Result<Complex<T>> {
    if levels == 0 {
        return Err(Error::InvalidParameter("L must be at least 1".into()));
    }
    let half = delta * T::lit(0.5);
    let denom = half.sin();
    if denom.abs() < T::lit(1e-15) {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let l = T::from_count(levels);
    let magnitude = (l * half).sin() / (l * denom);
    Ok(cis((l - T::one()) * half) * magnitude)
}
