//! Evaluation of ζ(s) for σ > 0, truncated Euler products, and the joint
//! product ∏_{j ≤ ℓ} |ζ(σ + ijt)| along harmonic points.
//!
//! Two unrelated evaluators are provided. [`zeta`] uses Euler–Maclaurin
//! summation and is the one the rest of the crate calls. [`zeta_alternating_oracle`]
//! sums the alternating Dirichlet eta series with Borwein's fixed-coefficient
//! acceleration and is only used to cross-check the first.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::BERNOULLI_EVEN;
use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// A point s = σ + it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Self {
        Self { sigma, t }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    pub fn conj(self) -> Self {
        Self::new(self.sigma, -self.t)
    }

    fn is_pole(self) -> bool {
        self.sigma == 1.0 && self.t == 0.0
    }
}

/// Tuning for [`zeta`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub target_abs_error: f64,
    /// Lower bound on the Euler–Maclaurin cutoff N.
    pub em_terms: usize,
    /// Number of Bernoulli correction terms (at most 12).
    pub em_bernoulli_order: usize,
    /// Largest |t| accepted.
    pub max_abs_t: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            target_abs_error: 1e-14,
            em_terms: 20,
            em_bernoulli_order: 8,
            max_abs_t: 1e7,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_error >= 1e-14) {
            return Err(Error::domain(format!(
                "target_abs_error must be >= 1e-14, got {}",
                self.target_abs_error
            )));
        }
        if self.em_terms == 0 {
            return Err(Error::domain("em_terms must be positive"));
        }
        if self.em_bernoulli_order == 0 || self.em_bernoulli_order > BERNOULLI_EVEN.len() {
            return Err(Error::domain(format!(
                "em_bernoulli_order must be in [1, {}], got {}",
                BERNOULLI_EVEN.len(),
                self.em_bernoulli_order
            )));
        }
        Ok(())
    }
}

/// n^{-s} for a positive integer n.
#[inline]
pub(crate) fn pow_neg(n: f64, s: Complex64) -> Complex64 {
    let ln = n.ln();
    let (sin, cos) = (s.im * ln).sin_cos();
    let mag = (-s.re * ln).exp();
    Complex64::new(mag * cos, -mag * sin)
}

fn check_region(s: ComplexPoint, max_abs_t: f64) -> Result<()> {
    if !s.sigma.is_finite() || !s.t.is_finite() {
        return Err(Error::domain(format!("non-finite argument {s:?}")));
    }
    if s.is_pole() {
        return Err(Error::domain("zeta has a pole at s = 1"));
    }
    if s.sigma <= 0.0 {
        return Err(Error::UnsupportedRegion(format!(
            "sigma must be > 0, got {}",
            s.sigma
        )));
    }
    if s.t.abs() > max_abs_t {
        return Err(Error::UnsupportedRegion(format!(
            "|t| = {} exceeds the configured limit {max_abs_t}",
            s.t.abs()
        )));
    }
    Ok(())
}

/// Magnitude of the first omitted Euler–Maclaurin term.
fn em_remainder(s: Complex64, n: f64, order: usize) -> f64 {
    // |B_{2m+2}/(2m+2)! * s(s+1)...(s+2m) * N^{-s-2m-1}|, m = order
    let m = order;
    let b = if m < BERNOULLI_EVEN.len() {
        BERNOULLI_EVEN[m].abs()
    } else {
        // |B_{2k}| ~ 2 (2k)! / (2π)^{2k}
        2.0 * factorial(2 * m + 2) / (2.0 * std::f64::consts::PI).powi(2 * m as i32 + 2)
    };
    let mut poch = 1.0;
    for k in 0..=(2 * m) {
        poch *= (s + k as f64).norm();
    }
    b / factorial(2 * m + 2) * poch * n.powf(-s.re - 2.0 * m as f64 - 1.0)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Euler–Maclaurin cutoff used by [`zeta`] for this point.
pub fn em_cutoff(s: ComplexPoint, cfg: &EvalConfig) -> usize {
    let sc = s.to_complex();
    let mut n = cfg.em_terms.max((2.0 * s.t.abs()).ceil() as usize).max(2);
    while em_remainder(sc, n as f64, cfg.em_bernoulli_order) > cfg.target_abs_error
        && n < 1 << 40
    {
        n = n * 5 / 4 + 1;
    }
    n
}

/// ζ(s) for σ > 0 by Euler–Maclaurin summation.
///
/// Σ_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2 + Σ_k B_{2k}/(2k)! · s(s+1)…(s+2k-2) · N^{-s-2k+1}
pub fn zeta(s: ComplexPoint, cfg: &EvalConfig) -> Result<Complex64> {
    cfg.validate()?;
    check_region(s, cfg.max_abs_t)?;
    let n = em_cutoff(s, cfg);
    let sc = s.to_complex();

    // Head sum, largest index first so small terms accumulate before large ones.
    let mut head = Complex64::new(0.0, 0.0);
    for k in (1..n).rev() {
        head += pow_neg(k as f64, sc);
    }

    let nf = n as f64;
    let n_pow = pow_neg(nf, sc);
    let mut total = head + n_pow * nf / (sc - 1.0) + n_pow * 0.5;

    // poch = s(s+1)...(s+2k-2), npow_k = N^{-s-2k+1}
    let mut poch = sc;
    let mut npow_k = n_pow / nf;
    let mut fact = 2.0;
    for k in 1..=cfg.em_bernoulli_order {
        let term = poch * npow_k * (BERNOULLI_EVEN[k - 1] / fact);
        total += term;
        let a = sc + (2 * k - 1) as f64;
        let b = sc + (2 * k) as f64;
        poch = poch * a * b;
        npow_k /= nf * nf;
        fact *= ((2 * k + 1) * (2 * k + 2)) as f64;
    }
    Ok(total)
}

/// Number of eta-series terms used by [`zeta_alternating_oracle`].
fn eta_terms(t: f64) -> usize {
    // The acceleration error is ~ (3+√8)^{-n} e^{π|t|}; ln(3+√8) ≈ 1.7627.
    (1.79 * t.abs()).ceil() as usize + 50
}

/// ζ(s) = η(s) / (1 − 2^{1−s}) with η summed by Borwein's acceleration.
///
/// Independent of [`zeta`]; used as a cross-check only.
pub fn zeta_alternating_oracle(s: ComplexPoint) -> Result<Complex64> {
    if !s.sigma.is_finite() || !s.t.is_finite() {
        return Err(Error::domain(format!("non-finite argument {s:?}")));
    }
    if s.sigma <= 0.0 {
        return Err(Error::UnsupportedRegion(format!(
            "sigma must be > 0, got {}",
            s.sigma
        )));
    }
    let sc = s.to_complex();
    let two_pow = (Complex64::new(1.0, 0.0) - sc).scale(std::f64::consts::LN_2).exp();
    let denom = Complex64::new(1.0, 0.0) - two_pow;
    if denom.norm() < 1e-10 {
        return Err(Error::domain(format!(
            "1 - 2^(1-s) vanishes at s = {} + {}i",
            s.sigma, s.t
        )));
    }

    let n = eta_terms(s.t);
    // d_k = n Σ_{i≤k} (n+i-1)! 4^i / ((n-i)! (2i)!); weights are (d_n - d_k)/d_n.
    let mut log_terms = Vec::with_capacity(n + 1);
    let mut lt = 0.0f64;
    log_terms.push(lt);
    for i in 0..n {
        let (nf, i_f) = (n as f64, i as f64);
        lt += (4.0 * (nf + i_f) * (nf - i_f)).ln() - ((2.0 * i_f + 1.0) * (2.0 * i_f + 2.0)).ln();
        log_terms.push(lt);
    }
    let max_log = log_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let terms: Vec<f64> = log_terms.iter().map(|l| (l - max_log).exp()).collect();
    let d_n: f64 = terms.iter().sum();
    // suffix[k] = Σ_{i>k} terms[i]
    let mut weights = vec![0.0; n];
    let mut suffix = 0.0;
    for k in (0..n).rev() {
        suffix += terms[k + 1];
        weights[k] = suffix / d_n;
    }

    let mut eta = Complex64::new(0.0, 0.0);
    for k in (0..n).rev() {
        let term = pow_neg((k + 1) as f64, sc) * weights[k];
        if k % 2 == 0 {
            eta += term;
        } else {
            eta -= term;
        }
    }
    Ok(eta / denom)
}

/// ζ(s; Y) = ∏_{p ≤ Y} (1 − p^{−s})^{−1}, evaluated as exp(−Σ Log(1 − p^{−s})).
pub fn zeta_truncated(s: ComplexPoint, y: f64, primes: &PrimeTable) -> Result<Complex64> {
    if !(y >= 1.0) {
        return Err(Error::domain(format!("truncation point Y must be >= 1, got {y}")));
    }
    if !(s.sigma > 0.0) {
        return Err(Error::UnsupportedRegion(format!(
            "sigma must be > 0, got {}",
            s.sigma
        )));
    }
    primes.ensure_covers(y)?;
    let sc = s.to_complex();
    let mut log_sum = Complex64::new(0.0, 0.0);
    for &p in primes.up_to(y) {
        let factor = Complex64::new(1.0, 0.0) - pow_neg(p as f64, sc);
        if factor.norm() == 0.0 {
            return Err(Error::SingularFactor { prime: p });
        }
        log_sum += factor.ln();
    }
    Ok((-log_sum).exp())
}

/// Σ over prime powers p^k ≤ y of 1/(k p^{ks}), i.e. Σ_{2 ≤ n ≤ y} Λ(n)/(n^s log n).
pub fn log_zeta_prime_sum(s: ComplexPoint, y: f64, primes: &PrimeTable) -> Result<Complex64> {
    if !(s.sigma > 0.5) {
        return Err(Error::domain(format!(
            "prime-power sum needs sigma > 1/2, got {}",
            s.sigma
        )));
    }
    if y < 2.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    primes.ensure_covers(y)?;
    let sc = s.to_complex();
    let mut sum = Complex64::new(0.0, 0.0);
    for &p in primes.up_to(y) {
        let mut pk = p as f64;
        let mut k = 1u32;
        while pk <= y {
            sum += pow_neg(pk, sc) / k as f64;
            k += 1;
            pk *= p as f64;
        }
    }
    Ok(sum)
}

/// Σ_j log|ζ(σ + ijt)| for j = 1..=ℓ.
pub fn log_joint_harmonic_product(
    sigma: f64,
    t: f64,
    ell: usize,
    cfg: &EvalConfig,
) -> Result<f64> {
    if ell == 0 {
        return Err(Error::domain("ell must be a positive integer"));
    }
    let mut log_sum = 0.0;
    for j in 1..=ell {
        let z = zeta(ComplexPoint::new(sigma, j as f64 * t), cfg)?;
        log_sum += z.norm().ln();
    }
    Ok(log_sum)
}

/// ∏_{j=1}^{ℓ} |ζ(σ + ijt)|, accumulated as a sum of log-moduli.
pub fn joint_harmonic_product(sigma: f64, t: f64, ell: usize, cfg: &EvalConfig) -> Result<f64> {
    log_joint_harmonic_product(sigma, t, ell, cfg).map(f64::exp)
}
