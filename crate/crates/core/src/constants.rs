//! Numerical constants.

/// Euler–Mascheroni constant γ.
///
/// 0.577215664901532860606512090082402431... (OEIS A001620).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// e^γ, the Mertens constant for ∏ p/(p-1).
///
/// 1.781072417990197985236504103107179549... (OEIS A073004).
pub const EXP_EULER_GAMMA: f64 = 1.781_072_417_990_197_985_236_504_103_11;

/// Bernoulli numbers B_2, B_4, ..., B_24.
pub(crate) const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_gamma_matches_exp_of_gamma() {
        assert!((EULER_GAMMA.exp() - EXP_EULER_GAMMA).abs() < 4e-16);
    }
}
