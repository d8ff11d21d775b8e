//! Two-level systems with energy eigenbasis `{|ψ_0⟩, |ψ_1⟩}` and the target
//! superposition `|ψ(θ)⟩ = (|ψ_0⟩ + e^{iθ}|ψ_1⟩) / √2`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::ladder::dirichlet_overlap;
use crate::scalar::{cis, cone, czero, Real};

/// Largest `k` examined by [`crossover_k`].
pub const CROSSOVER_CAP: usize = 1_000_000;

/// Overlap magnitudes at or below this are treated as exact zeros when
/// searching for a crossover.
pub const OVERLAP_ZERO: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState<T: Real> {
    pub amp0: Complex<T>,
    pub amp1: Complex<T>,
}

impl<T: Real> QubitState<T> {
    pub fn new(amp0: Complex<T>, amp1: Complex<T>) -> Result<Self> {
        let norm = amp0.norm_sqr() + amp1.norm_sqr();
        if (norm - T::one()).abs() > T::tol(1e-12) {
            return Err(Error::InvalidParameter(format!("qubit state has squared norm {norm}")));
        }
        Ok(QubitState { amp0, amp1 })
    }

    /// `|ψ_0⟩`, zero excitations.
    pub fn ground() -> Self {
        QubitState {
            amp0: cone(),
            amp1: czero(),
        }
    }

    /// `|ψ_1⟩`, one excitation.
    pub fn excited() -> Self {
        QubitState {
            amp0: czero(),
            amp1: cone(),
        }
    }

    /// `|ψ(θ)⟩ = (|ψ_0⟩ + e^{iθ}|ψ_1⟩) / √2`.
    pub fn target(theta: T) -> Self {
        let h = T::lit(0.5).sqrt();
        QubitState {
            amp0: Complex::new(h, T::zero()),
            amp1: cis(theta) * h,
        }
    }

    pub fn amplitude(&self, n: usize) -> Complex<T> {
        match n {
            0 => self.amp0,
            1 => self.amp1,
            _ => panic!("two-level system has no level {n}"),
        }
    }

    pub fn overlap(&self, other: &Self) -> Complex<T> {
        self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1
    }

    /// Amplitudes of `|self⟩^{⊗k}`; bit `i` of the index is system `i`.
    pub fn tensor_power(&self, k: usize) -> Vec<Complex<T>> {
        let mut out = vec![cone()];
        for i in 0..k {
            let mut next = vec![czero(); out.len() * 2];
            for (b, a) in out.iter().enumerate() {
                next[b] = *a * self.amp0;
                next[b | 1 << i] = *a * self.amp1;
            }
            out = next;
        }
        out
    }
}

/// Total-number label `popcount(b)` of each basis state of `k` systems.
pub fn popcount_labels(k: usize) -> Vec<i64> {
    (0..1usize << k).map(|b| b.count_ones() as i64).collect()
}

/// `⟨ψ(θ)|ψ(φ)⟩ = (1 + e^{i(φ-θ)}) / 2`.
pub fn psi_overlap<T: Real>(theta: T, phi: T) -> Complex<T> {
    (cone::<T>() + cis(phi - theta)) * T::lit(0.5)
}

/// `|⟨ψ(θ)|ψ(φ)⟩|^k = |cos((φ-θ)/2)|^k`.
pub fn collective_overlap_magnitude<T: Real>(theta: T, phi: T, k: u32) -> T {
    ((phi - theta) * T::lit(0.5)).cos().abs().powi(k as i32)
}

/// Smallest `k` at which `k` ideal copies of `|ψ(θ)⟩` become more
/// distinguishable than the `L`-level reservoir itself, i.e.
/// `|cos(δ/2)|^k < |⟨η(θ)|η(θ+δ)⟩|`.
///
/// Returns `None` when the reservoir overlap vanishes (no power of a
/// non-negative number falls strictly below zero) or no crossover occurs
/// below [`CROSSOVER_CAP`].
pub fn crossover_k<T: Real>(levels: usize, delta: T) -> Result<Option<usize>> {
    if levels == 0 {
        return Err(Error::InvalidParameter("L must be at least 1".into()));
    }
    if (delta * T::lit(0.5)).sin().abs() < T::lit(1e-15) {
        return Err(Error::InvalidParameter(
            "phase difference is a multiple of 2π; both overlaps are 1".into(),
        ));
    }
    let reservoir = dirichlet_overlap(levels, delta)?.norm();
    if reservoir <= T::lit(OVERLAP_ZERO) {
        return Ok(None);
    }
    let mut c = (delta * T::lit(0.5)).cos().abs();
    if c <= T::lit(OVERLAP_ZERO) {
        c = T::zero();
    }
    let mut power = T::one();
    for k in 1..=CROSSOVER_CAP {
        power = power * c;
        if power < reservoir {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
