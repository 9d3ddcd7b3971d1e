//! Weighted moments ∫ objective(t) |R(t)|² Φ(a t) dt of the resonator against
//! the Gaussian kernel Φ(y) = e^{−y²/2}, by quadrature and by the exact
//! Fourier-side double sum.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::resonator::{log_resonator_abs, resonator_sup, smooth_support, ResonatorMode, ResonatorTable};
use crate::accumulate::CompensatedSum;
use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// Φ(a t) with a = log T / T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub scale: f64,
}

impl KernelSpec {
    pub fn for_height(t_height: f64) -> Self {
        Self {
            scale: t_height.ln() / t_height,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scale > 0.0 && self.scale.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!("kernel scale must be > 0, got {}", self.scale)))
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let y = self.scale * t;
        (-0.5 * y * y).exp()
    }

    /// ∫_ℝ Φ(a t) dt = √(2π)/a.
    pub fn total_mass(&self) -> f64 {
        (2.0 * PI).sqrt() / self.scale
    }
}

/// What multiplies |R(t)|² Φ(a t) inside the integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Objective {
    /// The weight 1; gives I₁ (or M₁ on a window).
    One,
    /// With a line-one resonator: ∏_{j ≤ ℓ} ζ(σ + ijt; Y) (complex).
    /// With a strip resonator: Re Σ_{j ≤ ℓ} Σ_{p ≤ Y} p^{−σ−ijt} (real).
    JointZetaTrunc { ell: usize, sigma: f64, y: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    Quadrature,
    DoubleSum,
    DiagonalClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Trapezoid step; `None` uses the largest admissible step.
    pub step: Option<f64>,
    /// Full-line integrals are cut at ±cutoff_sigmas / a.
    pub cutoff_sigmas: f64,
    /// Points per parallel chunk.
    pub chunk_points: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            step: None,
            cutoff_sigmas: 8.0,
            chunk_points: 1 << 13,
        }
    }
}

/// Largest admissible trapezoid step for a resonator with cutoff X.
pub fn max_quadrature_step(x: f64) -> f64 {
    if x > std::f64::consts::E {
        0.05f64.min(PI / (4.0 * x.ln()))
    } else {
        0.05
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub re: f64,
    pub im: f64,
    pub method: MomentMethod,
    /// Requested window; `None` means the full line.
    pub window: Option<[f64; 2]>,
    /// Integration range actually used (quadrature only).
    pub range: Option<[f64; 2]>,
    pub step: Option<f64>,
    pub grid_points: u64,
    /// Bound on the discarded Gaussian tails (full-line quadrature only).
    pub tail_bound: f64,
    pub truncation_n_max: Option<u64>,
    pub kernel_scale: f64,
}

impl MomentEstimate {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.re.is_finite() || !self.im.is_finite() {
            return Err(Error::InvariantViolation("moment value is not finite".into()));
        }
        if self.method == MomentMethod::Quadrature {
            let Some([lo, hi]) = self.range else {
                return Err(Error::InvariantViolation("quadrature estimate without a range".into()));
            };
            if !(lo < hi) {
                return Err(Error::InvariantViolation("empty quadrature range".into()));
            }
            if self.window.is_none() && (lo + hi).abs() > 1e-9 * hi {
                return Err(Error::InvariantViolation(
                    "full-line quadrature range must be symmetric".into(),
                ));
            }
        }
        if self.method == MomentMethod::DoubleSum && self.truncation_n_max.is_none() {
            return Err(Error::InvariantViolation("double sum without n_max".into()));
        }
        Ok(())
    }
}

struct ObjectiveEval {
    kind: Option<(ResonatorMode, usize)>,
    log_p: Vec<f64>,
    p_pow: Vec<f64>,
    sup: f64,
}

impl ObjectiveEval {
    fn new(objective: &Objective, mode: ResonatorMode, primes: &PrimeTable) -> Result<Self> {
        match *objective {
            Objective::One => Ok(Self {
                kind: None,
                log_p: Vec::new(),
                p_pow: Vec::new(),
                sup: 1.0,
            }),
            Objective::JointZetaTrunc { ell, sigma, y } => {
                if ell == 0 {
                    return Err(Error::domain("ell must be a positive integer"));
                }
                if !(sigma > 0.0) {
                    return Err(Error::domain(format!("objective sigma must be > 0, got {sigma}")));
                }
                if y >= 2.0 {
                    primes.ensure_covers(y)?;
                }
                let ps = primes.up_to(y);
                let log_p: Vec<f64> = ps.iter().map(|&p| (p as f64).ln()).collect();
                let p_pow: Vec<f64> = log_p.iter().map(|&l| (-sigma * l).exp()).collect();
                let sup = match mode {
                    ResonatorMode::LineOne => {
                        let per_j: f64 = p_pow.iter().map(|&q| 1.0 / (1.0 - q)).product();
                        per_j.powi(ell as i32)
                    }
                    ResonatorMode::Strip => ell as f64 * p_pow.iter().sum::<f64>(),
                };
                Ok(Self {
                    kind: Some((mode, ell)),
                    log_p,
                    p_pow,
                    sup,
                })
            }
        }
    }

    #[inline]
    fn eval(&self, t: f64) -> Complex64 {
        match self.kind {
            None => Complex64::new(1.0, 0.0),
            Some((ResonatorMode::LineOne, ell)) => {
                // exp(−Σ_j Σ_p Log(1 − p^{−σ} e^{−ijt log p}))
                let mut log_sum = Complex64::new(0.0, 0.0);
                for j in 1..=ell {
                    let jt = j as f64 * t;
                    for (&lp, &q) in self.log_p.iter().zip(&self.p_pow) {
                        let (sin, cos) = (jt * lp).sin_cos();
                        log_sum += Complex64::new(1.0 - q * cos, q * sin).ln();
                    }
                }
                (-log_sum).exp()
            }
            Some((ResonatorMode::Strip, ell)) => {
                let mut sum = 0.0;
                for j in 1..=ell {
                    let jt = j as f64 * t;
                    for (&lp, &q) in self.log_p.iter().zip(&self.p_pow) {
                        sum += q * (jt * lp).cos();
                    }
                }
                Complex64::new(sum, 0.0)
            }
        }
    }
}

/// Trapezoidal quadrature of objective(t) |R(t)|² Φ(a t) over a window or
/// over the symmetric truncated line [−c/a, c/a].
pub fn moment_quadrature(
    table: &ResonatorTable,
    t_height: f64,
    kernel: KernelSpec,
    window: Option<(f64, f64)>,
    objective: &Objective,
    grid: &QuadratureConfig,
    primes: &PrimeTable,
) -> Result<MomentEstimate> {
    if !(t_height >= 10.0) {
        return Err(Error::domain(format!("moment height T must be >= 10, got {t_height}")));
    }
    kernel.validate()?;
    let bound = max_quadrature_step(table.spec().x);
    let step = grid.step.unwrap_or(bound);
    if !(step > 0.0) {
        return Err(Error::domain(format!("quadrature step must be > 0, got {step}")));
    }
    if step > bound {
        return Err(Error::Resolution { step, bound });
    }
    if !(grid.cutoff_sigmas > 0.0) {
        return Err(Error::domain("cutoff_sigmas must be > 0"));
    }

    // Beyond this range Φ underflows, so nothing there is sampled.
    let sampled = 38.0 / kernel.scale;
    let (lo, hi) = match window {
        Some((lo, hi)) => {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::domain(format!("invalid window [{lo}, {hi}]")));
            }
            if lo < -sampled || hi > sampled {
                return Err(Error::domain(format!(
                    "window [{lo}, {hi}] lies outside the sampled range [-{sampled}, {sampled}]"
                )));
            }
            (lo, hi)
        }
        None => {
            let t_max = grid.cutoff_sigmas / kernel.scale;
            (-t_max, t_max)
        }
    };

    let eval = ObjectiveEval::new(objective, table.spec().mode, primes)?;
    let intervals = ((hi - lo) / step).ceil().max(1.0) as u64;
    let h = (hi - lo) / intervals as f64;
    let n_points = intervals + 1;
    let chunk = grid.chunk_points.max(1) as u64;
    let n_chunks = n_points.div_ceil(chunk);

    let integrand = |i: u64| -> Complex64 {
        let t = if i == intervals { hi } else { lo + i as f64 * h };
        let w = if i == 0 || i == intervals { 0.5 } else { 1.0 };
        let r2 = (2.0 * log_resonator_abs(table, t)).exp();
        eval.eval(t) * (w * r2 * kernel.eval(t))
    };

    let partials: Vec<Complex64> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let end = (start + chunk).min(n_points);
            (start..end).map(integrand).sum::<Complex64>()
        })
        .collect();
    // Fixed ascending-t reduction order.
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for p in &partials {
        re.add(p.re);
        im.add(p.im);
    }
    let value = Complex64::new(re.value(), im.value()) * h;

    let tail_bound = if window.is_none() {
        let z = grid.cutoff_sigmas;
        let sup = eval.sup * (2.0 * resonator_sup(table)).exp();
        // ∫_{z/a}^∞ Φ(a t) dt ≤ e^{−z²/2} / (a z)
        2.0 * sup * (-0.5 * z * z).exp() / (kernel.scale * z)
    } else {
        0.0
    };

    Ok(MomentEstimate {
        re: value.re,
        im: value.im,
        method: MomentMethod::Quadrature,
        window: window.map(|(a, b)| [a, b]),
        range: Some([lo, hi]),
        step: Some(h),
        grid_points: n_points,
        tail_bound,
        truncation_n_max: None,
        kernel_scale: kernel.scale,
    })
}

/// Σ_n r(n)² over all n, as ∏_{p ≤ X} 1/(1 − r(p)²).
pub fn square_sum_closed_form(table: &ResonatorTable) -> f64 {
    table.coefficients().iter().map(|&r| 1.0 / (1.0 - r * r)).product()
}

/// Ratio of Σ_{n > n_max} r(n)² to Σ_{n ≤ n_max} r(n)².
pub fn square_sum_tail_ratio(table: &ResonatorTable, n_max: u64) -> f64 {
    let head: CompensatedSum = smooth_support(table, n_max).iter().map(|&(_, r)| r * r).collect();
    let head = head.value();
    ((square_sum_closed_form(table) - head) / head).max(0.0)
}

/// Neglected-tail tolerance for [`moment_double_sum_oracle`].
pub const DOUBLE_SUM_TAIL_TOLERANCE: f64 = 1e-6;

/// Smallest power of two n_max meeting [`DOUBLE_SUM_TAIL_TOLERANCE`].
pub fn double_sum_n_max(table: &ResonatorTable) -> u64 {
    let mut n_max = 16u64;
    while square_sum_tail_ratio(table, n_max) > DOUBLE_SUM_TAIL_TOLERANCE && n_max < 1 << 60 {
        n_max *= 2;
    }
    n_max
}

/// I₁ = (√(2π)/a) Σ_{m,n ≤ n_max} r(m) r(n) exp(−(log(m/n))²/(2a²)).
pub fn moment_double_sum_oracle(
    table: &ResonatorTable,
    kernel: KernelSpec,
    n_max: u64,
) -> Result<MomentEstimate> {
    kernel.validate()?;
    if n_max == 0 {
        return Err(Error::domain("n_max must be a positive integer"));
    }
    let support = smooth_support(table, n_max);
    let head: CompensatedSum = support.iter().map(|&(_, r)| r * r).collect();
    let head = head.value();
    let tail = ((square_sum_closed_form(table) - head) / head).max(0.0);
    if tail > DOUBLE_SUM_TAIL_TOLERANCE {
        return Err(Error::Truncation {
            achieved: tail,
            allowed: DOUBLE_SUM_TAIL_TOLERANCE,
        });
    }

    let mut by_log: Vec<(f64, f64)> = support.iter().map(|&(n, r)| ((n as f64).ln(), r)).collect();
    by_log.sort_by(|a, b| a.0.total_cmp(&b.0));
    let a = kernel.scale;
    // exp(−z²/2) < 1e-19 beyond z = 9.4
    let reach = 9.4 * a;
    let inv = 1.0 / (2.0 * a * a);
    let mut acc = CompensatedSum::new();
    for (i, &(li, ri)) in by_log.iter().enumerate() {
        acc.add(ri * ri);
        for &(lj, rj) in &by_log[i + 1..] {
            let d = lj - li;
            if d > reach {
                break;
            }
            acc.add(2.0 * ri * rj * (-d * d * inv).exp());
        }
    }
    let value = kernel.total_mass() * acc.value();
    Ok(MomentEstimate {
        re: value,
        im: 0.0,
        method: MomentMethod::DoubleSum,
        window: None,
        range: None,
        step: None,
        grid_points: support.len() as u64,
        tail_bound: tail * value,
        truncation_n_max: Some(n_max),
        kernel_scale: a,
    })
}

/// Diagonal m = n part of I₁ over all n: (√(2π)/a) ∏_{p ≤ X} 1/(1 − r(p)²).
pub fn moment_diagonal_closed_form(table: &ResonatorTable, kernel: KernelSpec) -> Result<MomentEstimate> {
    kernel.validate()?;
    Ok(MomentEstimate {
        re: kernel.total_mass() * square_sum_closed_form(table),
        im: 0.0,
        method: MomentMethod::DiagonalClosedForm,
        window: None,
        range: None,
        step: None,
        grid_points: 0,
        tail_bound: 0.0,
        truncation_n_max: None,
        kernel_scale: kernel.scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve_primes;
    use crate::resonance::resonator::{build_resonator, ResonatorSpec};

    fn primes() -> PrimeTable {
        sieve_primes(1000).unwrap()
    }

    #[test]
    fn degenerate_resonator_gives_gaussian_mass() {
        let ps = primes();
        let table = build_resonator(ResonatorSpec::line_one(1.0), &ps).unwrap();
        let t = 1e4;
        let k = KernelSpec::for_height(t);
        let exact = (2.0 * PI).sqrt() * t / t.ln();
        let q = moment_quadrature(&table, t, k, None, &Objective::One, &QuadratureConfig::default(), &ps)
            .unwrap();
        assert!((q.re - exact).abs() < 1e-9 * exact, "{} vs {exact}", q.re);
        assert_eq!(q.im, 0.0);
        q.validate().unwrap();
        for n_max in [1, 7, 1000] {
            let d = moment_double_sum_oracle(&table, k, n_max).unwrap();
            assert!((d.re - exact).abs() < 1e-12 * exact);
        }
    }

    #[test]
    fn off_diagonal_weight_is_negligible_at_small_height() {
        let t: f64 = 100.0;
        let a = t.ln() / t;
        let z = 2f64.ln() / a;
        assert!((z - 15.051_499_8).abs() < 1e-6);
        assert!(((-0.5 * z * z) + 113.273).abs() < 1e-2);
    }

    #[test]
    fn square_sum_closed_form_matches_direct_sum() {
        let ps = primes();
        let table = build_resonator(ResonatorSpec::line_one(6.0), &ps).unwrap();
        let n_max = double_sum_n_max(&table);
        let direct: f64 = smooth_support(&table, n_max).iter().map(|&(_, r)| r * r).sum();
        let closed = square_sum_closed_form(&table);
        assert!((closed - direct) / direct <= DOUBLE_SUM_TAIL_TOLERANCE);
        assert!(closed >= direct);
    }

    #[test]
    fn diagonal_only_double_sum() {
        // At a tiny kernel scale the Gaussian weight kills every m != n pair.
        let ps = primes();
        let table = build_resonator(ResonatorSpec::line_one(6.0), &ps).unwrap();
        let k = KernelSpec { scale: 1e-9 };
        let n_max = double_sum_n_max(&table);
        let d = moment_double_sum_oracle(&table, k, n_max).unwrap();
        let diag: f64 = smooth_support(&table, n_max).iter().map(|&(_, r)| r * r).sum();
        assert!((d.re - k.total_mass() * diag).abs() < 1e-12 * d.re);
        let closed = moment_diagonal_closed_form(&table, k).unwrap();
        assert_eq!(closed.method, MomentMethod::DiagonalClosedForm);
        assert!((closed.re - d.re) / d.re <= DOUBLE_SUM_TAIL_TOLERANCE);
    }

    #[test]
    fn truncation_error_names_ratio() {
        let ps = primes();
        let table = build_resonator(ResonatorSpec::line_one(10.0), &ps).unwrap();
        match moment_double_sum_oracle(&table, KernelSpec::for_height(1e3), 64) {
            Err(Error::Truncation { achieved, allowed }) => {
                assert!(achieved > allowed);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn quadrature_matches_double_sum_small() {
        let ps = primes();
        let table = build_resonator(ResonatorSpec::line_one(6.0), &ps).unwrap();
        let t = 1e3;
        let k = KernelSpec::for_height(t);
        let q = moment_quadrature(&table, t, k, None, &Objective::One, &QuadratureConfig::default(), &ps)
            .unwrap();
        let d = moment_double_sum_oracle(&table, k, double_sum_n_max(&table)).unwrap();
        assert!(((q.re - d.re) / d.re).abs() < 0.01);
    }

    #[test]
    fn window_is_bounded_by_full_line() {
        let ps = primes();
        let table = build_resonator(ResonatorSpec::line_one(10.0), &ps).unwrap();
        let t: f64 = 1e4;
        let k = KernelSpec::for_height(t);
        let cfg = QuadratureConfig::default();
        let full = moment_quadrature(&table, t, k, None, &Objective::One, &cfg, &ps).unwrap();
        let win = moment_quadrature(&table, t, k, Some((t.sqrt(), t)), &Objective::One, &cfg, &ps).unwrap();
        assert!(win.re > 0.0 && full.re > 0.0);
        assert!(win.re <= full.re);
        win.validate().unwrap();
    }

    #[test]
    fn resolution_and_window_errors() {
        let ps = primes();
        let table = build_resonator(ResonatorSpec::line_one(10.0), &ps).unwrap();
        let k = KernelSpec::for_height(1e4);
        let coarse = QuadratureConfig {
            step: Some(0.2),
            ..Default::default()
        };
        match moment_quadrature(&table, 1e4, k, None, &Objective::One, &coarse, &ps) {
            Err(Error::Resolution { bound, .. }) => assert_eq!(bound, 0.05),
            other => panic!("{other:?}"),
        }
        let cfg = QuadratureConfig::default();
        assert!(moment_quadrature(&table, 1e4, k, Some((5.0, 1.0)), &Objective::One, &cfg, &ps).is_err());
        assert!(moment_quadrature(&table, 1e4, k, Some((0.0, 1e9)), &Objective::One, &cfg, &ps).is_err());
        assert!(moment_quadrature(&table, 5.0, k, None, &Objective::One, &cfg, &ps).is_err());
    }

    #[test]
    fn strip_objective_is_real() {
        let ps = primes();
        let table = build_resonator(ResonatorSpec::strip(16.0, 0.75), &ps).unwrap();
        let t = 1e3;
        let obj = Objective::JointZetaTrunc {
            ell: 2,
            sigma: 0.75,
            y: 16.0,
        };
        let q = moment_quadrature(&table, t, KernelSpec::for_height(t), None, &obj, &QuadratureConfig::default(), &ps)
            .unwrap();
        assert_eq!(q.im, 0.0);
        assert!(q.re > 0.0);
    }

    #[test]
    fn step_bound() {
        assert_eq!(max_quadrature_step(10.0), 0.05);
        let big = 1e30;
        assert!((max_quadrature_step(big) - PI / (4.0 * big.ln())).abs() < 1e-15);
    }
}
