//! Prime tables and the classical prime products built on them.

use serde::{Deserialize, Serialize};

use crate::accumulate::ProductAccumulator;
use crate::constants::EXP_EULER_GAMMA;
use crate::error::{Error, Result};

/// Default ceiling on the sieve limit.
pub const DEFAULT_SIEVE_BUDGET: u64 = 100_000_000;

/// Default segment length (in integers) for the segmented sieve.
pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub max_limit: u64,
    pub segment_size: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            max_limit: DEFAULT_SIEVE_BUDGET,
            segment_size: DEFAULT_SEGMENT_SIZE,
        }
    }
}

/// Every prime up to `limit`, ascending. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }

    /// Primes `p <= x` (a prefix of the table).
    pub fn up_to(&self, x: f64) -> &[u64] {
        if x < 2.0 {
            return &[];
        }
        let end = self.primes.partition_point(|&p| (p as f64) <= x);
        &self.primes[..end]
    }

    /// Fails unless the table covers every prime up to `x`.
    pub fn ensure_covers(&self, x: f64) -> Result<()> {
        if x.is_finite() && (self.limit as f64) >= x.floor() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "prime table limit {} does not cover {x}",
                self.limit
            )))
        }
    }

    /// Checks the table invariants: ascending, prime, complete.
    pub fn validate(&self) -> Result<()> {
        if self.limit < 1 {
            return Err(Error::InvariantViolation("prime table limit must be >= 1".into()));
        }
        let reference = sieve_primes(self.limit)?;
        if reference.primes != self.primes {
            return Err(Error::InvariantViolation(
                "prime table is not the complete ascending list of primes up to its limit".into(),
            ));
        }
        Ok(())
    }
}

/// Sieve every prime up to `limit` with the default budget.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    sieve_primes_with(limit, SieveConfig::default())
}

/// Segmented sieve of Eratosthenes.
pub fn sieve_primes_with(limit: u64, cfg: SieveConfig) -> Result<PrimeTable> {
    if limit < 1 {
        return Err(Error::domain("sieve limit must be >= 1"));
    }
    if limit > cfg.max_limit {
        return Err(Error::Capacity {
            limit,
            budget: cfg.max_limit,
        });
    }
    let segment_size = cfg.segment_size.max(64);
    let root = isqrt(limit);
    let base = simple_sieve(root);

    let mut primes = Vec::with_capacity(prime_count_estimate(limit));
    let mut seg = vec![true; segment_size];
    let mut low = 2u64;
    while low <= limit {
        let high = (low + segment_size as u64 - 1).min(limit);
        let len = (high - low + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p > high {
                break;
            }
            let start = (p * p).max(low.div_ceil(p) * p);
            let mut m = start;
            while m <= high {
                seg[(m - low) as usize] = false;
                m += p;
            }
        }
        primes.extend(
            seg[..len]
                .iter()
                .enumerate()
                .filter(|(_, &is_prime)| is_prime)
                .map(|(i, _)| low + i as u64),
        );
        low = high + 1;
    }
    Ok(PrimeTable { limit, primes })
}

fn simple_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut i = 2;
    while i * i <= n {
        if is_prime[i] {
            (i * i..=n).step_by(i).for_each(|m| is_prime[m] = false);
        }
        i += 1;
    }
    (2..=n).filter(|&k| is_prime[k]).map(|k| k as u64).collect()
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn prime_count_estimate(limit: u64) -> usize {
    if limit < 17 {
        return 8;
    }
    let x = limit as f64;
    (1.26 * x / x.ln()) as usize
}

/// Result of [`mertens_ratio`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MertensRatio {
    /// ∏_{p ≤ X} p/(p-1)
    pub product: f64,
    /// product / (e^γ log X)
    pub ratio: f64,
}

/// ∏_{p ≤ X} p/(p-1) and its ratio to e^γ log X.
pub fn mertens_ratio(x: f64, primes: &PrimeTable) -> Result<MertensRatio> {
    if !(x >= 2.0) {
        return Err(Error::domain(format!("Mertens product needs X >= 2, got {x}")));
    }
    primes.ensure_covers(x)?;
    let product = mertens_product(x, primes);
    Ok(MertensRatio {
        product,
        ratio: product / (EXP_EULER_GAMMA * x.ln()),
    })
}

/// ∏_{p ≤ X} p/(p-1) in ascending-prime order; 1 for X < 2.
pub(crate) fn mertens_product(x: f64, primes: &PrimeTable) -> f64 {
    let mut acc = ProductAccumulator::new();
    for &p in primes.up_to(x) {
        let p = p as f64;
        acc.mul(p / (p - 1.0));
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_primes(limit: u64) -> Vec<u64> {
        (2..=limit)
            .filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn small_tables() {
        assert_eq!(sieve_primes(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert!(sieve_primes(1).unwrap().is_empty());
        assert_eq!(sieve_primes(2).unwrap().primes(), &[2]);
        assert_eq!(sieve_primes(100).unwrap().len(), 25);
    }

    #[test]
    fn segmented_matches_trial_division_across_segment_boundaries() {
        let cfg = SieveConfig {
            max_limit: DEFAULT_SIEVE_BUDGET,
            segment_size: 64,
        };
        for limit in [63, 64, 65, 127, 128, 1000, 5003] {
            let table = sieve_primes_with(limit, cfg).unwrap();
            assert_eq!(table.primes(), trial_division_primes(limit).as_slice(), "limit {limit}");
        }
    }

    #[test]
    fn capacity_error_names_budget() {
        let cfg = SieveConfig {
            max_limit: 1000,
            segment_size: 64,
        };
        let err = sieve_primes_with(1001, cfg).unwrap_err();
        assert_eq!(
            err,
            Error::Capacity {
                limit: 1001,
                budget: 1000
            }
        );
        assert!(err.to_string().contains("1000"));
        assert!(sieve_primes(0).is_err());
    }

    #[test]
    fn up_to_handles_fractional_bounds() {
        let table = sieve_primes(30).unwrap();
        assert_eq!(table.up_to(10.5), &[2, 3, 5, 7]);
        assert_eq!(table.up_to(11.0), &[2, 3, 5, 7, 11]);
        assert!(table.up_to(1.9).is_empty());
    }

    #[test]
    fn mertens_small_cases() {
        let table = sieve_primes(100).unwrap();
        let m10 = mertens_ratio(10.0, &table).unwrap();
        assert!((m10.product - 4.375).abs() < 1e-15);
        // 4.375 / (e^γ ln 10)
        assert!((m10.ratio - 1.066_794_555).abs() < 1e-8, "{}", m10.ratio);
        let m2 = mertens_ratio(2.0, &table).unwrap();
        assert_eq!(m2.product, 2.0);
        assert!((m2.ratio - 1.620_0).abs() < 1e-4, "{}", m2.ratio);
        assert!(mertens_ratio(1.5, &table).is_err());
        assert!(mertens_ratio(200.0, &table).is_err());
    }

    #[test]
    fn mertens_product_is_nondecreasing() {
        let table = sieve_primes(2000).unwrap();
        let mut last = 0.0;
        for x in (2..=2000).step_by(7) {
            let m = mertens_ratio(x as f64, &table).unwrap();
            assert!(m.product >= last);
            last = m.product;
        }
    }

    #[test]
    fn validate_accepts_sieved_table() {
        sieve_primes(500).unwrap().validate().unwrap();
        let bogus = PrimeTable {
            limit: 10,
            primes: vec![2, 3, 5],
        };
        assert!(bogus.validate().is_err());
    }
}
