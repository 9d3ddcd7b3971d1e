use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// Which prime-value formula the resonator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonatorMode {
    /// r(p) = 1 - p/X, for large values on the line σ = 1.
    LineOne,
    /// r(p) = 1 - (p/X)^σ, for large values inside the critical strip.
    Strip,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonatorSpec {
    pub mode: ResonatorMode,
    /// Prime cutoff X.
    pub x: f64,
    /// Only read in strip mode; must lie in (1/2, 1) there.
    pub sigma: f64,
    /// Carried for bookkeeping (X = κ log T log₂ T).
    pub kappa: f64,
    /// Carried for bookkeeping (window [T^β, T]).
    pub beta: f64,
}

impl ResonatorSpec {
    pub fn line_one(x: f64) -> Self {
        Self {
            mode: ResonatorMode::LineOne,
            x,
            sigma: 1.0,
            kappa: 1.0 / 6.0,
            beta: 0.5,
        }
    }

    pub fn strip(x: f64, sigma: f64) -> Self {
        Self {
            mode: ResonatorMode::Strip,
            x,
            sigma,
            kappa: 1.0,
            beta: 0.5,
        }
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.x.is_finite() {
            return Err(Error::domain(format!("resonator cutoff X must be finite, got {}", self.x)));
        }
        if self.mode == ResonatorMode::Strip && !(self.sigma > 0.5 && self.sigma < 1.0) {
            return Err(Error::domain(format!(
                "strip resonator needs sigma in (1/2, 1), got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    fn coefficient(&self, p: f64) -> f64 {
        match self.mode {
            ResonatorMode::LineOne => 1.0 - p / self.x,
            ResonatorMode::Strip => 1.0 - (p / self.x).powf(self.sigma),
        }
    }
}

/// X = (log T · log₂ T)/6, the cutoff coupled to height T on the 1-line.
pub fn line_one_cutoff(t_height: f64) -> f64 {
    let l = t_height.ln();
    l * l.ln() / 6.0
}

/// X = κ log T · log₂ T, the cutoff coupled to height T in the strip.
pub fn strip_cutoff(t_height: f64, kappa: f64) -> f64 {
    let l = t_height.ln();
    kappa * l * l.ln()
}

/// Prime values r(p) of a completely multiplicative resonator; r(p) = 0 for
/// every prime not stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonatorTable {
    spec: ResonatorSpec,
    primes: Vec<u64>,
    coefficients: Vec<f64>,
    #[serde(skip)]
    log_primes: Vec<f64>,
}

impl ResonatorTable {
    pub fn spec(&self) -> &ResonatorSpec {
        &self.spec
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// (p, r(p)) pairs in ascending-prime order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.primes.iter().copied().zip(self.coefficients.iter().copied())
    }

    /// True when R ≡ 1 (X < 2).
    pub fn is_degenerate(&self) -> bool {
        self.primes.is_empty()
    }

    /// r(p) at a prime; 0 for primes above the cutoff.
    pub fn at_prime(&self, p: u64) -> f64 {
        match self.primes.binary_search(&p) {
            Ok(i) => self.coefficients[i],
            Err(_) => 0.0,
        }
    }

    /// r(n) by complete multiplicativity.
    pub fn at(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let mut rest = n;
        let mut value = 1.0;
        for (p, r) in self.iter() {
            while rest % p == 0 {
                rest /= p;
                value *= r;
            }
            if rest == 1 {
                break;
            }
        }
        if rest == 1 {
            value
        } else {
            0.0
        }
    }

    pub(crate) fn log_primes(&self) -> &[f64] {
        &self.log_primes
    }

    /// Re-derives the coefficients from the spec and checks r(p) ∈ [0, 1).
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.primes.len() != self.coefficients.len() {
            return Err(Error::InvariantViolation("prime/coefficient length mismatch".into()));
        }
        for (p, r) in self.iter() {
            if (p as f64) > self.spec.x {
                return Err(Error::InvariantViolation(format!("stored prime {p} exceeds X")));
            }
            if !(0.0..1.0).contains(&r) {
                return Err(Error::InvariantViolation(format!("r({p}) = {r} outside [0, 1)")));
            }
            let expected = self.spec.coefficient(p as f64);
            if (expected - r).abs() > 1e-15 {
                return Err(Error::InvariantViolation(format!(
                    "r({p}) = {r} does not match the {:?} formula ({expected})",
                    self.spec.mode
                )));
            }
        }
        Ok(())
    }

    fn with_logs(mut self) -> Self {
        self.log_primes = self.primes.iter().map(|&p| (p as f64).ln()).collect();
        self
    }
}

/// r(p) for every prime p ≤ X.
pub fn build_resonator(spec: ResonatorSpec, primes: &PrimeTable) -> Result<ResonatorTable> {
    spec.validate()?;
    let selected = primes.up_to(spec.x);
    if spec.x >= 2.0 {
        primes.ensure_covers(spec.x)?;
    }
    let coefficients = selected
        .iter()
        .map(|&p| spec.coefficient(p as f64).max(0.0))
        .collect();
    Ok(ResonatorTable {
        spec,
        primes: selected.to_vec(),
        coefficients,
        log_primes: Vec::new(),
    }
    .with_logs())
}

/// Rebuilds the derived state of a deserialized table.
pub fn restore_table(table: ResonatorTable) -> Result<ResonatorTable> {
    let table = table.with_logs();
    table.validate()?;
    Ok(table)
}

/// log|R(t)| = −Σ_{p ≤ X} log|1 − r(p) p^{it}|.
pub fn log_resonator_abs(table: &ResonatorTable, t: f64) -> f64 {
    let mut sum = 0.0;
    for (&r, &lp) in table.coefficients.iter().zip(table.log_primes()) {
        let modulus_sq = 1.0 - 2.0 * r * (t * lp).cos() + r * r;
        sum -= 0.5 * modulus_sq.ln();
    }
    sum
}

/// sup_t log|R(t)| = Σ_{p ≤ X} log(1/(1 − r(p))), attained at t = 0.
pub fn resonator_sup(table: &ResonatorTable) -> f64 {
    table.coefficients.iter().map(|&r| -(1.0 - r).ln()).sum()
}

/// Every n ≤ n_max with r(n) > 0, as (n, r(n)) sorted by n.
///
/// Enumerates products of the table's primes depth-first instead of
/// factoring each integer.
pub fn smooth_support(table: &ResonatorTable, n_max: u64) -> Vec<(u64, f64)> {
    let active: Vec<(u64, f64)> = table.iter().filter(|&(_, r)| r > 0.0).collect();
    let mut out = Vec::new();
    fn walk(active: &[(u64, f64)], n: u64, rn: f64, n_max: u64, out: &mut Vec<(u64, f64)>) {
        out.push((n, rn));
        for (i, &(p, r)) in active.iter().enumerate() {
            match n.checked_mul(p) {
                Some(m) if m <= n_max => walk(&active[i..], m, rn * r, n_max, out),
                _ => break,
            }
        }
    }
    if n_max >= 1 {
        walk(&active, 1, 1.0, n_max, &mut out);
    }
    out.sort_unstable_by_key(|&(n, _)| n);
    out
}
