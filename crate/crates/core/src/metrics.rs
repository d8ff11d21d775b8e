//! Headline quantities of repeated reservoir use: the collective fidelity in
//! two readings, the asymmetry `A_G`, discrimination error and erasure cost.
//!
//! Two inequivalent values of `F_k` are reported side by side:
//!
//! * the Hermitian fidelity `⟨Ψ(0)|ρ'|Ψ(0)⟩`, which the simulation computes
//!   and which equals `1 - k C(2k,k) / (4^k L)` for `k <= L`;
//! * the trace expression `Tr_E[(1+Δ^{-1})^k σ (1+Δ^{-1})^k] / 4^k` taken
//!   literally (no adjoint on the left factor), which equals `1 - k/L` for
//!   `2k <= L`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::density::{dephase_total_number, fidelity_with_pure, reduce_systems, von_neumann_entropy, DensityMatrix};
use crate::engine::{run_protocol, JointState, ShiftConvention, TwoLevelUnitary};
use crate::error::{Error, Result};
use crate::exact::{mean_abs_difference_by_convolution, mean_abs_difference_closed};
use crate::ladder::{LadderState, ShiftDirection};
use crate::scalar::Real;
use crate::systems::QubitState;

/// Squared norm of the reservoir vector left after projecting every system
/// onto `|ψ(θ)⟩`.
pub fn collective_fidelity<T: Real>(joint: &JointState<T>, theta: T) -> T {
    joint.project_targets(theta).norm_sqr()
}

/// `⟨ψ(θ)|^{⊗k} ρ' |ψ(θ)⟩^{⊗k}` through the reduced density matrix. Same
/// quantity as [`collective_fidelity`], computed independently.
pub fn collective_fidelity_from_density<T: Real>(joint: &JointState<T>, theta: T) -> Result<T> {
    let rho = reduce_systems(joint)?;
    let target = QubitState::target(theta).tensor_power(joint.systems());
    fidelity_with_pure(&rho, &target)
}

/// `⟨η|((1 + Δ^{-1}) / 2)^{2k}|η⟩` for `η = η_{L,l0}(0)`.
pub fn paper_fidelity_expression<T: Real>(levels: usize, l0: i64, k: usize) -> Result<T> {
    let eta = LadderState::<T>::reservoir(levels, l0, T::zero())?;
    let value = eta.overlap(&eta.half_shift_binomial(2 * k, ShiftDirection::Lower));
    if value.im.abs() > T::tol(1e-12) {
        return Err(Error::InvariantViolated(format!(
            "trace expression has imaginary part {}",
            value.im
        )));
    }
    Ok(value.re)
}

/// `1 - k/L`, valid while `2k <= L`.
pub fn closed_form_paper<T: Real>(k: usize, levels: usize) -> Result<T> {
    if levels == 0 {
        return Err(Error::InvalidParameter("L must be at least 1".into()));
    }
    if 2 * k > levels {
        return Err(Error::Domain(format!("1 - k/L needs 2k <= L (k = {k}, L = {levels})")));
    }
    Ok(T::one() - T::from_count(k) / T::from_count(levels))
}

/// `1 - E|a - b| / L` with `a, b ~ Binomial(k, 1/2)` independent, valid
/// while `k <= L`. The mean is evaluated exactly both by convolution and as
/// `k C(2k, k) / 4^k`; the two must coincide.
pub fn closed_form_hermitian<T: Real>(k: usize, levels: usize) -> Result<T> {
    if levels == 0 {
        return Err(Error::InvalidParameter("L must be at least 1".into()));
    }
    if k > levels {
        return Err(Error::Domain(format!(
            "Hermitian closed form needs k <= L (k = {k}, L = {levels})"
        )));
    }
    let convolved = mean_abs_difference_by_convolution(k as u64);
    if convolved != mean_abs_difference_closed(k as u64) {
        return Err(Error::InvariantViolated(format!(
            "binomial convolution disagrees with k C(2k,k)/4^k at k = {k}"
        )));
    }
    let value = BigRational::from_integer(BigInt::from(1)) - convolved / BigInt::from(levels);
    let value = value
        .to_f64()
        .ok_or_else(|| Error::InvalidParameter("closed form not representable".into()))?;
    Ok(T::lit(value))
}

/// `A_G(ρ) = S(𝒢[ρ]) - S(ρ)` in nats.
pub fn asymmetry<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let twirled = dephase_total_number(rho)?;
    Ok(von_neumann_entropy(&twirled)? - von_neumann_entropy(rho)?)
}

/// Minimum error probability `(1 - √(1 - c²)) / 2` for two equiprobable
/// pure states with overlap magnitude `c`.
pub fn helstrom_error<T: Real>(overlap_magnitude: T) -> Result<T> {
    let c = overlap_magnitude;
    if !(c >= T::zero()) || c > T::one() + T::tol(1e-12) {
        return Err(Error::Domain(format!("overlap magnitude {c} outside [0, 1]")));
    }
    let c = c.min(T::one());
    Ok((T::one() - (T::one() - c * c).sqrt()) * T::lit(0.5))
}

/// Minimum work `T·S` (with `k_B = 1`) to erase entropy `S` in nats at
/// temperature `T`.
pub fn landauer_cost<T: Real>(entropy_nats: T, temperature: T) -> Result<T> {
    if !(entropy_nats >= T::zero()) || !(temperature >= T::zero()) {
        return Err(Error::Domain(format!(
            "Landauer cost needs S >= 0 and T >= 0 (S = {entropy_nats}, T = {temperature})"
        )));
    }
    Ok(temperature * entropy_nats)
}

/// All four readings of `F_k` at one parameter point. The closed forms are
/// `None` outside their validity domains.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport<T: Real> {
    pub k: usize,
    pub levels: usize,
    pub hermitian_fk: T,
    pub paper_expression_fk: T,
    pub closed_form_paper: Option<T>,
    pub closed_form_hermitian: Option<T>,
}

impl<T: Real> FidelityReport<T> {
    /// `hermitian - (1 - k/L)`, how far the simulated fidelity sits above the
    /// linear law.
    pub fn deviation_from_linear_law(&self) -> T {
        self.hermitian_fk - (T::one() - T::from_count(self.k) / T::from_count(self.levels))
    }
}

/// Runs the protocol and gathers every fidelity reading.
///
/// When `u` prepares `|ψ(0)⟩` from `|ψ_0⟩` the Hermitian fidelity must not
/// fall below the trace expression; a violation is reported as an error.
pub fn fidelity_report<T: Real>(
    levels: usize,
    l0: i64,
    theta: T,
    u: &TwoLevelUnitary<T>,
    k: usize,
    convention: ShiftConvention,
) -> Result<FidelityReport<T>> {
    let joint = run_protocol(levels, l0, theta, u, k, convention)?;
    fidelity_report_for(&joint, levels, l0, theta, u)
}

/// [`fidelity_report`] for an already simulated joint state.
pub fn fidelity_report_for<T: Real>(
    joint: &JointState<T>,
    levels: usize,
    l0: i64,
    theta: T,
    u: &TwoLevelUnitary<T>,
) -> Result<FidelityReport<T>> {
    let k = joint.systems();
    let report = FidelityReport {
        k,
        levels,
        hermitian_fk: collective_fidelity(joint, theta),
        paper_expression_fk: paper_fidelity_expression(levels, l0, k)?,
        closed_form_paper: domain_ok(closed_form_paper(k, levels))?,
        closed_form_hermitian: domain_ok(closed_form_hermitian(k, levels))?,
    };
    let h = T::lit(0.5).sqrt();
    let tol = T::tol(1e-10);
    let prepares_target = (u.entry(0, 0).re - h).abs() < tol
        && (u.entry(1, 0).re - h).abs() < tol
        && u.entry(0, 0).im.abs() < tol
        && u.entry(1, 0).im.abs() < tol;
    if prepares_target && report.hermitian_fk < report.paper_expression_fk - tol {
        return Err(Error::InvariantViolated(format!(
            "Hermitian fidelity {} below trace expression {} (k = {k}, L = {levels})",
            report.hermitian_fk, report.paper_expression_fk
        )));
    }
    Ok(report)
}

fn domain_ok<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Domain(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
