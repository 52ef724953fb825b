//! Exact injective aggregation over bounded temporal multisets.
//!
//! [`injective_multiset_sum`] maps a multiset of `(x, e, t)` triples to
//! `sum base^(-k * psi(x, e)) * base^(-beta * t)`. Each `(x, e)` pair owns a
//! block of `k` base-digits and each timestamp a sub-block of `beta` digits, so
//! as long as no multiplicity reaches `base^beta` the digits never carry and
//! the sum can be decoded back into the multiset.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Result, TgxError};
use crate::graph::Timestamp;

/// Arbitrary-precision rational. Never rounded.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactScalar(pub BigRational);

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar(BigRational::one())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        ExactScalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parameters of the slot construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AggParams {
    /// Strict upper bound on multiset size.
    pub n: u64,
    pub t_max: Timestamp,
    pub base: u32,
    /// Smallest integer with `base^beta >= n`, at least 1.
    pub beta: u64,
    /// `beta * (t_max + 1)`.
    pub k: u64,
}

impl AggParams {
    pub fn new(n: u64, t_max: Timestamp, base: u32) -> Result<Self> {
        if base < 2 {
            return Err(TgxError::Precondition(format!("base must be >= 2, got {base}")));
        }
        if n == 0 {
            return Err(TgxError::Precondition("multiset bound N must be positive".into()));
        }
        let mut beta = 0u64;
        let mut reach = BigUint::one();
        while reach < BigUint::from(n) {
            reach *= base;
            beta += 1;
        }
        let beta = beta.max(1);
        let k = beta
            .checked_mul(t_max.checked_add(1).ok_or(TgxError::Overflow)?)
            .ok_or(TgxError::Overflow)?;
        Ok(AggParams { n, t_max, base, beta, k })
    }

    pub fn decimal(n: u64, t_max: Timestamp) -> Result<Self> {
        Self::new(n, t_max, 10)
    }
}

/// Cantor pairing `(a+b)(a+b+1)/2 + b`.
pub fn enumerate_pair(a: u64, b: u64) -> u128 {
    let s = a as u128 + b as u128;
    s * (s + 1) / 2 + b as u128
}

/// Inverse of [`enumerate_pair`].
pub fn unpair(z: u128) -> (u64, u64) {
    // Largest w with w(w+1)/2 <= z.
    let mut w = ((8.0 * z as f64 + 1.0).sqrt() as u128).saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let b = z - w * (w + 1) / 2;
    let a = w - b;
    (a as u64, b as u64)
}

/// Exact value of `sum_i base^(-k*psi(x_i,e_i) - beta*t_i)`.
pub fn injective_multiset_sum(m: &[(u64, u64, Timestamp)], p: &AggParams) -> Result<ExactScalar> {
    if m.len() as u64 >= p.n {
        return Err(TgxError::BoundViolation(format!(
            "multiset has {} elements, bound is < {}",
            m.len(),
            p.n
        )));
    }
    if m.is_empty() {
        return Ok(ExactScalar::zero());
    }
    let mut exps = Vec::with_capacity(m.len());
    for &(x, e, t) in m {
        if t > p.t_max {
            return Err(TgxError::BoundViolation(format!(
                "timestamp {t} exceeds t_max {}",
                p.t_max
            )));
        }
        let slot = enumerate_pair(x, e)
            .checked_mul(p.k as u128)
            .and_then(|s| s.checked_add(p.beta as u128 * t as u128))
            .ok_or(TgxError::Overflow)?;
        exps.push(u64::try_from(slot).map_err(|_| TgxError::Overflow)?);
    }
    let top = *exps.iter().max().expect("non-empty");
    let base = BigUint::from(p.base);
    let mut num = BigUint::zero();
    for x in exps {
        num += Pow::pow(&base, top - x);
    }
    let den = Pow::pow(&base, top);
    Ok(ExactScalar(BigRational::new(num.into(), den.into())))
}

/// `alpha^(-beta*dt)` computed exactly, or `NonRepresentable` when the
/// result is irrational.
pub fn time_decay_term(
    dt: Timestamp,
    alpha: &BigRational,
    beta: &BigRational,
) -> Result<ExactScalar> {
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(TgxError::Precondition("alpha and beta must be positive".into()));
    }
    if dt == 0 {
        return Ok(ExactScalar::one());
    }
    let expo = beta * BigRational::from_integer(BigInt::from(dt));
    let p = expo.numer().to_u32().ok_or_else(|| {
        TgxError::NonRepresentable(format!("exponent numerator of {expo} too large"))
    })?;
    let q = expo.denom().to_u32().ok_or_else(|| {
        TgxError::NonRepresentable(format!("exponent denominator of {expo} too large"))
    })?;
    let root = if q == 1 {
        alpha.clone()
    } else {
        let exact_root = |x: &BigInt| -> Option<BigInt> {
            let r = x.nth_root(q);
            (Pow::pow(&r, q) == *x).then_some(r)
        };
        match (exact_root(alpha.numer()), exact_root(alpha.denom())) {
            (Some(n), Some(d)) => BigRational::new(n, d),
            _ => {
                return Err(TgxError::NonRepresentable(format!(
                    "{alpha}^(-{expo}) is irrational"
                )))
            }
        }
    };
    Ok(ExactScalar(Pow::pow(&root, p).recip()))
}

/// Outcome of [`exhaustive_injectivity`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub features: u64,
    pub edge_features: u64,
    pub t_max: Timestamp,
    pub n: u64,
    pub multisets: usize,
    /// Distinct unordered pairs covered by the check.
    pub comparisons: u64,
    pub collisions: usize,
}

/// Evaluates [`injective_multiset_sum`] on every multiset of size `< n` over
/// `features x edge_features x {1..=t_max}` and counts colliding values.
pub fn exhaustive_injectivity(
    features: u64,
    edge_features: u64,
    t_max: Timestamp,
    n: u64,
) -> Result<InjectivityReport> {
    let params = AggParams::decimal(n, t_max)?;
    let mut domain = Vec::new();
    for x in 0..features {
        for e in 0..edge_features {
            for t in 1..=t_max {
                domain.push((x, e, t));
            }
        }
    }
    let mut seen: HashSet<ExactScalar> = HashSet::new();
    let mut multisets = 0usize;
    let mut collisions = 0usize;
    // Non-decreasing index sequences enumerate each multiset once.
    let mut stack: Vec<(Vec<(u64, u64, Timestamp)>, usize)> = vec![(Vec::new(), 0)];
    while let Some((m, start)) = stack.pop() {
        multisets += 1;
        if !seen.insert(injective_multiset_sum(&m, &params)?) {
            collisions += 1;
        }
        if (m.len() as u64) + 1 < n {
            for (j, x) in domain.iter().enumerate().skip(start) {
                let mut grown = m.clone();
                grown.push(*x);
                stack.push((grown, j));
            }
        }
    }
    let k = multisets as u64;
    Ok(InjectivityReport {
        features,
        edge_features,
        t_max,
        n,
        multisets,
        comparisons: k * k.saturating_sub(1) / 2,
        collisions,
    })
}
