//! Joint state of `k` two-level systems and the ladder reservoir, the
//! energy-conserving dilation `V(U)`, the repeated-use protocol, and the
//! U(1) action `T_φ = exp(iNφ)`.
//!
//! Amplitudes are stored densely as a `2^k × dim` array. Row `b` is a
//! bitstring whose bit `i` is the excitation of the `i`-th attached system;
//! column `j` is the ladder level `base + j`.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::ladder::LadderState;
use crate::scalar::{cis, czero, Real};
use crate::systems::QubitState;

/// Which way the reservoir moves when a system is excited.
///
/// `Standard` is `V(U) = Σ U_{nn'} |ψ_n⟩⟨ψ_{n'}| ⊗ Δ^{n'-n}`: an excitation
/// borrows one quantum from the reservoir. `Mirrored` uses `Δ^{n-n'}`
/// instead, so the conserved charge is `popcount(b) - level`. Both give the
/// same fidelities, entropies and asymmetries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ShiftConvention {
    #[default]
    Standard,
    Mirrored,
}

impl ShiftConvention {
    /// Ladder displacement caused by exciting one system.
    fn step(self) -> i64 {
        match self {
            ShiftConvention::Standard => -1,
            ShiftConvention::Mirrored => 1,
        }
    }

    /// Contribution of a reservoir level to the conserved total number.
    pub fn reservoir_charge(self, level: i64) -> i64 {
        match self {
            ShiftConvention::Standard => level,
            ShiftConvention::Mirrored => -level,
        }
    }
}

/// A validated 2×2 unitary acting on one two-level system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelUnitary<T: Real> {
    entries: [[Complex<T>; 2]; 2],
}

impl<T: Real> TwoLevelUnitary<T> {
    /// Checks all four Gram conditions of `U†U = 1` to within `1e-10`.
    pub fn new(u00: Complex<T>, u01: Complex<T>, u10: Complex<T>, u11: Complex<T>) -> Result<Self> {
        let u = TwoLevelUnitary {
            entries: [[u00, u01], [u10, u11]],
        };
        let deviation = u.gram_deviation();
        if !(deviation <= T::tol(1e-10)) {
            return Err(Error::NotUnitary {
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(u)
    }

    pub fn identity() -> Self {
        let one = Complex::new(T::one(), T::zero());
        TwoLevelUnitary {
            entries: [[one, czero()], [czero(), one]],
        }
    }

    /// `(1/√2) [[1, 1], [1, -1]]`; its first column is `(1/√2, 1/√2)`, which
    /// sends `|ψ_0⟩` to `|ψ(0)⟩`.
    pub fn hadamard() -> Self {
        let h = Complex::new(T::lit(0.5).sqrt(), T::zero());
        TwoLevelUnitary {
            entries: [[h, h], [h, -h]],
        }
    }

    /// `⟨ψ_n|U|ψ_{n'}⟩`.
    pub fn entry(&self, n: usize, n_prime: usize) -> Complex<T> {
        self.entries[n][n_prime]
    }

    fn gram_deviation(&self) -> T {
        let mut worst = T::zero();
        for a in 0..2 {
            for b in 0..2 {
                let g = self.entries[0][a].conj() * self.entries[0][b] + self.entries[1][a].conj() * self.entries[1][b];
                let want = if a == b { T::one() } else { T::zero() };
                let dev = (g - Complex::new(want, T::zero())).norm();
                if !(dev <= worst) {
                    worst = dev;
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointState<T: Real> {
    k: usize,
    capacity: usize,
    base: i64,
    dim: usize,
    amps: Vec<Complex<T>>,
    convention: ShiftConvention,
    /// Inclusive range of total numbers carried by the initial reservoir.
    number_support: (i64, i64),
}

impl<T: Real> JointState<T> {
    /// Embeds `reservoir` in a window wide enough for `capacity` later
    /// attachments, with no systems attached.
    pub fn new(reservoir: &LadderState<T>, capacity: usize, convention: ShiftConvention) -> Self {
        let dim = reservoir.dim() + capacity;
        let (base, offset) = match convention {
            ShiftConvention::Standard => (reservoir.base() - capacity as i64, capacity),
            ShiftConvention::Mirrored => (reservoir.base(), 0),
        };
        let mut amps = vec![czero(); dim];
        amps[offset..offset + reservoir.dim()].copy_from_slice(reservoir.amplitudes());
        let lo = convention.reservoir_charge(reservoir.base());
        let hi = convention.reservoir_charge(reservoir.end() - 1);
        JointState {
            k: 0,
            capacity,
            base,
            dim,
            amps,
            convention,
            number_support: (lo.min(hi), lo.max(hi)),
        }
    }

    pub fn systems(&self) -> usize {
        self.k
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn convention(&self) -> ShiftConvention {
        self.convention
    }

    pub fn number_support(&self) -> (i64, i64) {
        self.number_support
    }

    /// Row-major `2^k × dim` amplitude array.
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    /// Amplitude of `|b⟩_S ⊗ |level⟩_E`; zero outside the window.
    pub fn amplitude(&self, bits: usize, level: i64) -> Complex<T> {
        let j = level - self.base;
        if bits >= 1 << self.k || j < 0 || j >= self.dim as i64 {
            return czero();
        }
        self.amps[bits * self.dim + j as usize]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Total number `popcount(b) + charge(level)` of a basis state.
    pub fn total_number(&self, bits: usize, j: usize) -> i64 {
        bits.count_ones() as i64 + self.convention.reservoir_charge(self.base + j as i64)
    }

    /// Probability of each total number.
    pub fn number_histogram(&self) -> BTreeMap<i64, T> {
        let mut hist = BTreeMap::new();
        for (idx, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > T::zero() {
                let n = self.total_number(idx / self.dim, idx % self.dim);
                let e = hist.entry(n).or_insert(T::zero());
                *e = *e + p;
            }
        }
        hist
    }

    /// True iff every nonzero amplitude has its total number inside the
    /// initial reservoir's support. Exact: no tolerance.
    pub fn conserves_number(&self) -> bool {
        let (lo, hi) = self.number_support;
        self.amps.iter().enumerate().all(|(idx, a)| {
            if a.re == T::zero() && a.im == T::zero() {
                return true;
            }
            let n = self.total_number(idx / self.dim, idx % self.dim);
            lo <= n && n <= hi
        })
    }

    /// Appends a fresh system in `|ψ_0⟩` and applies `V(U)` between it and
    /// the reservoir.
    ///
    /// The new system occupies bit `k`. Since it enters with `n' = 0`, the
    /// update `amps'(n b, j) = Σ_{n'} U_{nn'} amps(n' b, j + n - n')` keeps
    /// only the `n' = 0` term.
    pub fn attach_and_interact(&self, u: &TwoLevelUnitary<T>) -> Result<Self> {
        if self.k >= self.capacity {
            return Err(Error::CapacityExhausted {
                attached: self.k,
                capacity: self.capacity,
            });
        }
        let rows = 1usize << self.k;
        let dim = self.dim;
        // Reservoir index the excited branch reads from.
        let src_offset = -self.convention.step();
        let mut amps = vec![czero(); 2 * rows * dim];
        let (ground, excited) = amps.split_at_mut(rows * dim);
        let u0 = u.entry(0, 0);
        let u1 = u.entry(1, 0);
        for b in 0..rows {
            let old = &self.amps[b * dim..(b + 1) * dim];
            for (dst, src) in ground[b * dim..(b + 1) * dim].iter_mut().zip(old) {
                *dst = u0 * *src;
            }
            let out = &mut excited[b * dim..(b + 1) * dim];
            for (j, src) in old.iter().enumerate() {
                let target = j as i64 - src_offset;
                if target < 0 || target >= dim as i64 {
                    if src.norm_sqr() > T::zero() && u1.norm_sqr() > T::zero() {
                        return Err(Error::CapacityExhausted {
                            attached: self.k,
                            capacity: self.capacity,
                        });
                    }
                    continue;
                }
                out[target as usize] = u1 * *src;
            }
        }
        Ok(JointState {
            k: self.k + 1,
            amps,
            ..self.clone_header()
        })
    }

    /// `T_φ`: multiplies each basis amplitude by `e^{iφN}` with `N` the total
    /// number.
    pub fn apply_group_phase(&self, phi: T) -> Self {
        let mut out = self.clone();
        for (idx, a) in out.amps.iter_mut().enumerate() {
            let n = self.total_number(idx / self.dim, idx % self.dim);
            *a = *a * cis(phi * T::from_int(n));
        }
        out
    }

    /// `(⟨t|^{⊗k} ⊗ 1_E)|self⟩`, the unnormalized reservoir vector left after
    /// projecting every system onto `target`.
    pub fn project(&self, target: &QubitState<T>) -> LadderState<T> {
        let rows = 1usize << self.k;
        let c0 = target.amp0.conj();
        let c1 = target.amp1.conj();
        let mut out = vec![czero(); self.dim];
        for b in 0..rows {
            let mut w = Complex::new(T::one(), T::zero());
            for i in 0..self.k {
                w = w * if b >> i & 1 == 1 { c1 } else { c0 };
            }
            let row = &self.amps[b * self.dim..(b + 1) * self.dim];
            for (o, a) in out.iter_mut().zip(row) {
                *o = *o + w * *a;
            }
        }
        LadderState::from_amplitudes(self.base, out).expect("window is non-empty")
    }

    /// Projection onto `|ψ(θ)⟩^{⊗k}`; its squared norm is the collective
    /// fidelity.
    pub fn project_targets(&self, theta: T) -> LadderState<T> {
        self.project(&QubitState::target(theta))
    }

    fn clone_header(&self) -> Self {
        JointState {
            k: self.k,
            capacity: self.capacity,
            base: self.base,
            dim: self.dim,
            amps: Vec::new(),
            convention: self.convention,
            number_support: self.number_support,
        }
    }
}

/// Prepares `|η_{L,l0}(θ)⟩` and uses it `k` times, each time on a fresh
/// system in `|ψ_0⟩`.
pub fn run_protocol<T: Real>(
    levels: usize,
    l0: i64,
    theta: T,
    u: &TwoLevelUnitary<T>,
    k: usize,
    convention: ShiftConvention,
) -> Result<JointState<T>> {
    let reservoir = LadderState::reservoir(levels, l0, theta)?;
    let mut joint = JointState::new(&reservoir, k, convention);
    for _ in 0..k {
        joint = joint.attach_and_interact(u)?;
    }
    Ok(joint)
}
