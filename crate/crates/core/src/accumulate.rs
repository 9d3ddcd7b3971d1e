//! Compensated summation and overflow-safe products.

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Number of factors after which [`ProductAccumulator`] moves to log space.
pub const LOG_SPACE_THRESHOLD: usize = 10_000;

/// Product of positive factors.
///
/// Multiplies directly for the first [`LOG_SPACE_THRESHOLD`] factors and then
/// continues as a compensated sum of logarithms.
#[derive(Debug, Clone)]
pub struct ProductAccumulator {
    direct: f64,
    log: Option<CompensatedSum>,
    count: usize,
}

impl Default for ProductAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl ProductAccumulator {
    pub fn new() -> Self {
        Self {
            direct: 1.0,
            log: None,
            count: 0,
        }
    }

    pub fn mul(&mut self, factor: f64) {
        debug_assert!(factor > 0.0);
        self.count += 1;
        match &mut self.log {
            Some(acc) => acc.add(factor.ln()),
            None => {
                self.direct *= factor;
                if self.count > LOG_SPACE_THRESHOLD {
                    let mut acc = CompensatedSum::new();
                    acc.add(self.direct.ln());
                    self.log = Some(acc);
                }
            }
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn ln(&self) -> f64 {
        match &self.log {
            Some(acc) => acc.value(),
            None => self.direct.ln(),
        }
    }

    pub fn value(&self) -> f64 {
        match &self.log {
            Some(acc) => acc.value().exp(),
            None => self.direct,
        }
    }
}

/// Unevaluated sum hi + lo of two doubles (about 106 bits of mantissa).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact for every integer below 2^106.
    pub fn from_u128(n: u128) -> Self {
        let hi = n as f64;
        let rest = n as i128 - hi as i128;
        let (hi, lo) = two_sum(hi, rest as f64);
        Self { hi, lo }
    }

    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        Self { hi, lo }
    }

    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = two_sum(p, e);
        Self { hi, lo }
    }

    pub fn div(self, d: Self) -> Self {
        let q1 = self.hi / d.hi;
        let r = self.add(d.mul_f64(q1).neg());
        let q2 = r.hi / d.hi;
        let r = r.add(d.mul_f64(q2).neg());
        let q3 = r.hi / d.hi;
        let (hi, lo) = two_sum(q1, q2);
        Self { hi, lo }.add(Self::from_f64(q3))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let acc: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn product_switches_to_log_space_without_losing_accuracy() {
        let mut acc = ProductAccumulator::new();
        let n = 3 * LOG_SPACE_THRESHOLD;
        for _ in 0..n {
            acc.mul(1.001);
        }
        let expected = (n as f64 * 1.001f64.ln()).exp();
        assert!((acc.value() / expected - 1.0).abs() < 1e-12);
        assert_eq!(acc.count(), n);
    }

    #[test]
    fn double_double_division_is_accurate() {
        let third = DoubleDouble::from_f64(1.0).div(DoubleDouble::from_f64(3.0));
        let back = third.mul_f64(3.0);
        assert!((back.hi - 1.0).abs() + back.lo.abs() < 1e-30);
        let big = DoubleDouble::from_u128((1u128 << 80) + 1);
        let diff = big.add(DoubleDouble::from_u128(1u128 << 80).neg());
        assert_eq!(diff.to_f64(), 1.0);
    }
}
