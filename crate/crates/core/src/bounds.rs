//! Closed-form constants and the lower-bound formulas for joint extreme
//! values at harmonic points.
//!
//! Every evaluator drops the O/o error terms and marks its output with
//! `asymptotic_only = true`; nothing here estimates those terms.

use serde::{Deserialize, Serialize};

use crate::accumulate::DoubleDouble;
use crate::constants::EULER_GAMMA;
use crate::error::{Error, Result};
use crate::quad;

/// Largest ℓ for which [`s_constant`] will evaluate the binomial sums.
pub const MAX_BINOMIAL_ELL: usize = 60;

/// Both evaluations of c(σ) = ∫_0^1 dt / (2 t^{−σ} − 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CSigma {
    pub series: f64,
    pub quadrature: f64,
}

impl CSigma {
    pub fn discrepancy(&self) -> f64 {
        (self.series - self.quadrature).abs()
    }
}

fn c_sigma_series(sigma: f64) -> f64 {
    // 1/(2t^{−σ} − 1) = Σ_{k ≥ 1} t^{kσ}/2^k, integrated termwise.
    let mut sum = 0.0;
    let mut weight = 0.5;
    let mut k = 1.0;
    loop {
        let term = weight / (1.0 + k * sigma);
        sum += term;
        if term < 1e-15 {
            break;
        }
        weight *= 0.5;
        k += 1.0;
    }
    sum
}

fn c_sigma_quadrature(sigma: f64) -> f64 {
    if sigma >= 0.2 {
        // u = t^σ: c = (1/σ) ∫_0^1 u^{1/σ} / (2 − u) du
        let p = 1.0 / sigma;
        quad::integrate(|u| u.powf(p) / (2.0 - u), 0.0, 1.0, 1e-14).0 * p
    } else {
        quad::integrate(
            |t| if t == 0.0 { 0.0 } else { 1.0 / (2.0 * t.powf(-sigma) - 1.0) },
            0.0,
            1.0,
            1e-14,
        )
        .0
    }
}

/// c(σ) by series and by adaptive quadrature, without the agreement check.
pub fn c_sigma_detail(sigma: f64) -> Result<CSigma> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::domain(format!("c(sigma) needs sigma in (0, 1], got {sigma}")));
    }
    Ok(CSigma {
        series: c_sigma_series(sigma),
        quadrature: c_sigma_quadrature(sigma),
    })
}

/// c(σ) = ∫_0^1 dt / (2 t^{−σ} − 1); returns the series value once the
/// quadrature agrees to 1e-8.
pub fn c_sigma(sigma: f64) -> Result<f64> {
    let c = c_sigma_detail(sigma)?;
    if c.discrepancy() > 1e-8 {
        return Err(Error::Consistency(format!(
            "c({sigma}): series {} and quadrature {} disagree by {:e}",
            c.series,
            c.quadrature,
            c.discrepancy()
        )));
    }
    Ok(c.series)
}

/// C(n, k) in exact integer arithmetic; `None` on overflow.
pub fn binomial(n: u32, k: u32) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n − i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Σ_{j=m}^{ℓ} C(j, m) == C(ℓ+1, m+1), checked exactly.
pub fn hockey_stick_holds(m: u32, ell: u32) -> bool {
    let lhs = (m..=ell).try_fold(0u128, |acc, j| acc.checked_add(binomial(j, m)?));
    match (lhs, binomial(ell + 1, m + 1)) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    }
}

/// Both printed forms of S(σ, ℓ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SConstant {
    /// ℓ/(1−σ) + Σ_{m=1}^{ℓ} (−1)^m C(ℓ+1, m+1) / (1 + σ(m−1))
    pub alternating: f64,
    /// ℓ/(1−σ) − (ℓ+1)ℓ/2 + Σ_{m=2}^{ℓ} (−1)^m C(ℓ+1, m+1) / (1 + σ(m−1))
    pub split: f64,
}

fn binomial_term(sigma: f64, ell: usize, m: usize) -> DoubleDouble {
    let c = binomial(ell as u32 + 1, m as u32 + 1).expect("ell bounded by MAX_BINOMIAL_ELL");
    let denom = DoubleDouble::from_f64(1.0).add(DoubleDouble::from_f64(sigma).mul_f64((m - 1) as f64));
    let q = DoubleDouble::from_u128(c).div(denom);
    if m % 2 == 0 {
        q
    } else {
        q.neg()
    }
}

fn leading(sigma: f64, ell: usize) -> DoubleDouble {
    let one_minus = DoubleDouble::from_f64(1.0).add(DoubleDouble::from_f64(-sigma));
    DoubleDouble::from_f64(ell as f64).div(one_minus)
}

fn check_s_domain(sigma: f64, ell: usize) -> Result<()> {
    if !(sigma > 0.5 && sigma < 1.0) {
        return Err(Error::domain(format!("S(sigma, ell) needs sigma in (1/2, 1), got {sigma}")));
    }
    if ell == 0 || ell > MAX_BINOMIAL_ELL {
        return Err(Error::domain(format!(
            "S(sigma, ell) needs ell in [1, {MAX_BINOMIAL_ELL}], got {ell}"
        )));
    }
    Ok(())
}

/// Both forms of S(σ, ℓ), accumulated in double-double arithmetic.
pub fn s_constant_forms(sigma: f64, ell: usize) -> Result<SConstant> {
    check_s_domain(sigma, ell)?;
    let mut alternating = leading(sigma, ell);
    for m in 1..=ell {
        alternating = alternating.add(binomial_term(sigma, ell, m));
    }

    let triangle = DoubleDouble::from_u128(((ell + 1) * ell / 2) as u128);
    let mut tail = DoubleDouble::default();
    for m in (2..=ell).rev() {
        tail = tail.add(binomial_term(sigma, ell, m));
    }
    let split = leading(sigma, ell).add(triangle.neg()).add(tail);

    Ok(SConstant {
        alternating: alternating.to_f64(),
        split: split.to_f64(),
    })
}

/// S(σ, ℓ); both printed forms must agree to 1e-12 relative and be positive.
pub fn s_constant(sigma: f64, ell: usize) -> Result<f64> {
    let s = s_constant_forms(sigma, ell)?;
    let rel = (s.alternating - s.split).abs() / s.alternating.abs().max(f64::MIN_POSITIVE);
    if rel > 1e-12 {
        return Err(Error::Consistency(format!(
            "S({sigma}, {ell}): forms {} and {} differ by {rel:e} (relative)",
            s.alternating, s.split
        )));
    }
    if !(s.alternating > 0.0) {
        return Err(Error::InvariantViolation(format!(
            "S({sigma}, {ell}) = {} is not positive",
            s.alternating
        )));
    }
    Ok(s.alternating)
}

/// Which argument of the unconditional min(·, ·) limits κ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaBinding {
    /// 1 − β (window length)
    Window,
    /// (σ − 1/2)/(7/4 − σ/2) (zero-free region / exceptional set)
    ZeroFreeRegion,
}

impl std::fmt::Display for KappaBinding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KappaBinding::Window => write!(f, "window term 1 - beta binds"),
            KappaBinding::ZeroFreeRegion => {
                write!(f, "zero-free-region term (sigma - 1/2)/(7/4 - sigma/2) binds")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaBound {
    /// Exclusive upper bound on κ.
    pub value: f64,
    pub binding: KappaBinding,
    pub c_sigma: f64,
}

pub fn kappa_bound(sigma: f64, beta: f64, assume_rh: bool) -> Result<KappaBound> {
    if !(sigma > 0.5 && sigma < 1.0) {
        return Err(Error::domain(format!("kappa bound needs sigma in (1/2, 1), got {sigma}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("kappa bound needs beta in (0, 1), got {beta}")));
    }
    let c = c_sigma(sigma)?;
    let window = 1.0 - beta;
    let zero_free = (sigma - 0.5) / (1.75 - sigma / 2.0);
    let (limit, binding) = if assume_rh || window <= zero_free {
        (window, KappaBinding::Window)
    } else {
        (zero_free, KappaBinding::ZeroFreeRegion)
    };
    Ok(KappaBound {
        value: limit / (sigma * (1.0 + c)),
        binding,
        c_sigma: c,
    })
}

/// Supremum of admissible κ (exclusive).
pub fn kappa_max(sigma: f64, beta: f64, assume_rh: bool) -> Result<f64> {
    kappa_bound(sigma, beta, assume_rh).map(|k| k.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    /// Joint values on σ = 1.
    Thm1,
    /// Joint values in 1/2 < σ < 1, unconditional.
    Thm2,
    /// Joint values in 1/2 < σ < 1, assuming RH.
    Thm3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    #[serde(rename = "T")]
    pub t_height: f64,
    pub ell: usize,
    pub sigma: Option<f64>,
    pub beta: Option<f64>,
    pub kappa: Option<f64>,
}

/// A theorem's lower bound evaluated without its error terms.
///
/// Thm1: `value = main_term + secondary_term`, `exponent = None`.
/// Thm2/Thm3: `value = exp(exponent)`, `main_term = exponent`, `secondary_term = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremBound {
    pub which: Theorem,
    pub params: BoundParams,
    pub main_term: f64,
    pub secondary_term: f64,
    pub exponent: Option<f64>,
    pub value: f64,
    pub asymptotic_only: bool,
}

impl TheoremBound {
    pub fn validate(&self) -> Result<()> {
        if !self.asymptotic_only {
            return Err(Error::InvariantViolation(
                "theorem bounds drop error terms and must be flagged asymptotic_only".into(),
            ));
        }
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        match (self.which, self.exponent) {
            (Theorem::Thm1, None) => {
                if rel(self.main_term + self.secondary_term, self.value) > 1e-14 {
                    return Err(Error::InvariantViolation("value != main + secondary".into()));
                }
            }
            (Theorem::Thm2 | Theorem::Thm3, Some(e)) => {
                if self.secondary_term != 0.0 || rel(e.exp(), self.value) > 1e-14 {
                    return Err(Error::InvariantViolation("value != exp(exponent)".into()));
                }
            }
            _ => {
                return Err(Error::InvariantViolation(
                    "exponent must be present exactly for Thm2/Thm3".into(),
                ))
            }
        }
        Ok(())
    }
}

/// (log₂ T, log₃ T), requiring T > e^e so that log₃ T > 0.
fn iterated_logs(t_height: f64) -> Result<(f64, f64)> {
    if !(t_height > std::f64::consts::E.exp()) || !t_height.is_finite() {
        return Err(Error::domain(format!(
            "T must exceed e^e ≈ 15.154 so that log log log T > 0, got {t_height}"
        )));
    }
    let log2 = t_height.ln().ln();
    Ok((log2, log2.ln()))
}

/// e^{ℓγ} {(log₂T)^ℓ + ℓ (log₂T)^{ℓ−1} log₃T}
pub fn thm1_bound(t_height: f64, ell: usize) -> Result<TheoremBound> {
    if ell == 0 {
        return Err(Error::domain("ell must be a positive integer"));
    }
    let (log2, log3) = iterated_logs(t_height)?;
    let scale = (ell as f64 * EULER_GAMMA).exp();
    let main_term = scale * log2.powi(ell as i32);
    let secondary_term = scale * ell as f64 * log2.powi(ell as i32 - 1) * log3;
    Ok(TheoremBound {
        which: Theorem::Thm1,
        params: BoundParams {
            t_height,
            ell,
            sigma: Some(1.0),
            beta: Some(0.5),
            kappa: None,
        },
        main_term,
        secondary_term,
        exponent: None,
        value: main_term + secondary_term,
        asymptotic_only: true,
    })
}

/// exp{κ^{1−σ} S(σ, ℓ) (log T)^{1−σ} / (log₂ T)^σ}
pub fn thm2_exponent(
    t_height: f64,
    sigma: f64,
    ell: usize,
    beta: f64,
    kappa: f64,
    assume_rh: bool,
) -> Result<TheoremBound> {
    let (log2, _) = iterated_logs(t_height)?;
    let bound = kappa_bound(sigma, beta, assume_rh)?;
    if !(kappa > 0.0) {
        return Err(Error::domain(format!("kappa must be positive, got {kappa}")));
    }
    if kappa >= bound.value {
        return Err(Error::Constraint {
            kappa,
            bound: bound.value,
            binding: bound.binding.to_string(),
        });
    }
    let s = s_constant(sigma, ell)?;
    let exponent = kappa.powf(1.0 - sigma) * s * t_height.ln().powf(1.0 - sigma) / log2.powf(sigma);
    Ok(TheoremBound {
        which: if assume_rh { Theorem::Thm3 } else { Theorem::Thm2 },
        params: BoundParams {
            t_height,
            ell,
            sigma: Some(sigma),
            beta: Some(beta),
            kappa: Some(kappa),
        },
        main_term: exponent,
        secondary_term: 0.0,
        exponent: Some(exponent),
        value: exponent.exp(),
        asymptotic_only: true,
    })
}
