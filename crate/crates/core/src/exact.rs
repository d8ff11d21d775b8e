//! Exact integer and rational arithmetic for the binomial oracles.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Row `k` of Pascal's triangle.
pub fn binomial_row(k: u64) -> Vec<BigUint> {
    (0..=k).map(|a| binomial(k, a)).collect()
}

/// For independent `a, b ~ Binomial(k, 1/2)`, `counts[m]` is
/// `4^k · P(|a - b| = m)`, found by convolving the binomial row with itself.
pub fn abs_difference_counts(k: u64) -> Vec<BigUint> {
    let row = binomial_row(k);
    let mut counts = vec![BigUint::zero(); k as usize + 1];
    for (a, ca) in row.iter().enumerate() {
        for (b, cb) in row.iter().enumerate() {
            counts[a.abs_diff(b)] += ca * cb;
        }
    }
    counts
}

/// `E|a - b|` by exhaustive convolution.
pub fn mean_abs_difference_by_convolution(k: u64) -> BigRational {
    let weighted: BigUint = abs_difference_counts(k)
        .iter()
        .enumerate()
        .map(|(m, c)| c * BigUint::from(m))
        .sum();
    BigRational::new(BigInt::from(weighted), BigInt::from(BigUint::from(4u8).pow(k as u32)))
}

/// `E|a - b| = k C(2k, k) / 4^k`.
pub fn mean_abs_difference_closed(k: u64) -> BigRational {
    BigRational::new(
        BigInt::from(binomial(2 * k, k) * k),
        BigInt::from(BigUint::from(4u8).pow(k as u32)),
    )
}
