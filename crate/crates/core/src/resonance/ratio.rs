//! Euler-product lower bounds for the moment ratio I₂/I₁.

use serde::{Deserialize, Serialize};

use super::resonator::{ResonatorMode, ResonatorSpec};
use crate::accumulate::{CompensatedSum, ProductAccumulator};
use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// ∏_{j ≤ ℓ} ∏_{p ≤ X} (1 − r(p)^j/p)^{−1} split as 𝒫₁ · 𝒫₂, with
/// 𝒫₁ = ∏_j ∏_p p/(p−1) and 𝒫₂ = ∏_j ∏_p (p−1)/(p − r(p)^j).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioBreakdown {
    pub p1: f64,
    pub p2: f64,
    pub product: f64,
    /// Entry j−1 holds ∏_{p ≤ X} (1 − r(p)^j/p)^{−1}.
    pub per_j_factors: Vec<f64>,
}

impl RatioBreakdown {
    pub fn validate(&self) -> Result<()> {
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        if rel(self.p1 * self.p2, self.product) > 1e-12 {
            return Err(Error::InvariantViolation("product != p1 * p2".into()));
        }
        let from_j: f64 = self.per_j_factors.iter().product();
        if rel(from_j, self.product) > 1e-12 {
            return Err(Error::InvariantViolation("per-j factors do not multiply to product".into()));
        }
        if self.p2 > 1.0 + 1e-15 {
            return Err(Error::InvariantViolation(format!("p2 = {} exceeds 1", self.p2)));
        }
        Ok(())
    }
}

/// Lower bound for I₂/I₁ with the line-one resonator r(p) = 1 − p/X.
pub fn ratio_lower_bound_line(x: f64, ell: usize, primes: &PrimeTable) -> Result<RatioBreakdown> {
    if ell == 0 {
        return Err(Error::domain("ell must be a positive integer"));
    }
    if x >= 2.0 {
        primes.ensure_covers(x)?;
    }
    let ps = primes.up_to(x);
    let mut p1 = ProductAccumulator::new();
    let mut p2 = ProductAccumulator::new();
    let mut per_j_factors = Vec::with_capacity(ell);
    for j in 1..=ell {
        let mut per_j = ProductAccumulator::new();
        for &p in ps {
            let pf = p as f64;
            let rj = (1.0 - pf / x).powi(j as i32);
            per_j.mul(1.0 / (1.0 - rj / pf));
            p1.mul(pf / (pf - 1.0));
            p2.mul((pf - 1.0) / (pf - rj));
        }
        per_j_factors.push(per_j.value());
    }
    let product = per_j_factors.iter().product();
    Ok(RatioBreakdown {
        p1: p1.value(),
        p2: p2.value(),
        product,
        per_j_factors,
    })
}

/// Σ_{j ≤ ℓ} Σ_{p ≤ X} r(p)^j p^{−σ} with the strip resonator r(p) = 1 − (p/X)^σ.
pub fn ratio_lower_bound_strip(spec: &ResonatorSpec, ell: usize, primes: &PrimeTable) -> Result<f64> {
    if spec.mode != ResonatorMode::Strip {
        return Err(Error::domain("strip ratio bound needs a strip resonator"));
    }
    spec.validate()?;
    if spec.x >= 2.0 {
        primes.ensure_covers(spec.x)?;
    }
    let mut acc = CompensatedSum::new();
    for j in 1..=ell {
        for &p in primes.up_to(spec.x) {
            let pf = p as f64;
            let r = 1.0 - (pf / spec.x).powf(spec.sigma);
            acc.add(r.powi(j as i32) * pf.powf(-spec.sigma));
        }
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::{mertens_ratio, sieve_primes};

    #[test]
    fn line_bound_at_ten() {
        let ps = sieve_primes(100).unwrap();
        let b = ratio_lower_bound_line(10.0, 1, &ps).unwrap();
        let direct = (1.0 / 0.6) * (1.0 / (1.0 - 0.7 / 3.0)) * (1.0 / 0.9) * (1.0 / (1.0 - 0.3 / 7.0));
        assert!((b.product - direct).abs() < 1e-14);
        assert!((b.product - 2.523_62).abs() < 1e-5, "{}", b.product);
        assert!((b.p1 - 4.375).abs() < 1e-14);
        assert!((b.p2 - 0.576_827).abs() < 1e-6, "{}", b.p2);
        b.validate().unwrap();
    }

    #[test]
    fn line_bound_degenerate() {
        let ps = sieve_primes(100).unwrap();
        let b = ratio_lower_bound_line(1.5, 2, &ps).unwrap();
        assert_eq!((b.product, b.p1, b.p2), (1.0, 1.0, 1.0));
        assert!(ratio_lower_bound_line(10.0, 0, &ps).is_err());
    }

    #[test]
    fn line_bound_factorizes() {
        let ps = sieve_primes(100).unwrap();
        for ell in 1..=3 {
            let b = ratio_lower_bound_line(10.0, ell, &ps).unwrap();
            b.validate().unwrap();
            let mertens = mertens_ratio(10.0, &ps).unwrap().product;
            assert!((b.p1 - mertens.powi(ell as i32)).abs() < 1e-12 * b.p1);
        }
        let b2 = ratio_lower_bound_line(10.0, 2, &ps).unwrap();
        assert!((b2.product - b2.per_j_factors[0] * b2.per_j_factors[1]).abs() < 1e-12 * b2.product);
    }

    #[test]
    fn strip_bound_small_cases() {
        let ps = sieve_primes(100).unwrap();
        let spec = ResonatorSpec::strip(16.0, 0.75);
        assert_eq!(ratio_lower_bound_strip(&spec, 0, &ps).unwrap(), 0.0);
        assert_eq!(ratio_lower_bound_strip(&ResonatorSpec::strip(1.5, 0.75), 3, &ps).unwrap(), 0.0);
        let direct: f64 = [2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0]
            .iter()
            .map(|&p| (1.0 - (p / 16.0f64).powf(0.75)) / p.powf(0.75))
            .sum();
        let v = ratio_lower_bound_strip(&spec, 1, &ps).unwrap();
        assert!((v - direct).abs() < 1e-14);
        assert!((v - 1.1264).abs() < 1e-4, "{v}");
        assert!(ratio_lower_bound_strip(&ResonatorSpec::line_one(16.0), 1, &ps).is_err());
    }
}
