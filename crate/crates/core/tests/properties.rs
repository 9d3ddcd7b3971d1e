use proptest::prelude::*;
use zeta_resonance::bounds::{kappa_max, s_constant_forms};
use zeta_resonance::primes::sieve_primes;
use zeta_resonance::resonance::{build_resonator, log_resonator_abs, resonator_sup, ResonatorSpec};
use zeta_resonance::zeta::{zeta, ComplexPoint, EvalConfig};

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugate_symmetry(sigma in 0.55f64..3.0, t in 0.5f64..2000.0) {
        let cfg = EvalConfig::default();
        let s = ComplexPoint::new(sigma, t);
        let a = zeta(s.conj(), &cfg).unwrap();
        let b = zeta(s, &cfg).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn euler_product_bounds_at_sigma_two(t in 0.0f64..5000.0) {
        let cfg = EvalConfig::default();
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        let z4 = std::f64::consts::PI.powi(4) / 90.0;
        let v = zeta(ComplexPoint::new(2.0, t), &cfg).unwrap().norm();
        prop_assert!(v <= z2 + 1e-12 && v >= z4 / z2 - 1e-12);
    }

    #[test]
    fn sieve_is_complete(limit in 1u64..5000) {
        let table = sieve_primes(limit).unwrap();
        let want: Vec<u64> = (2..=limit).filter(|&n| is_prime(n)).collect();
        prop_assert_eq!(table.primes(), want.as_slice());
    }

    #[test]
    fn resonator_is_completely_multiplicative(x in 2.0f64..200.0, m in 1u64..2000, n in 1u64..2000) {
        let primes = sieve_primes(200).unwrap();
        let table = build_resonator(ResonatorSpec::line_one(x), &primes).unwrap();
        let lhs = table.at(m * n);
        let rhs = table.at(m) * table.at(n);
        prop_assert!((lhs - rhs).abs() <= 1e-14 * rhs.abs().max(1e-300) || (lhs == 0.0 && rhs == 0.0));
    }

    #[test]
    fn resonator_never_exceeds_sup(x in 2.0f64..500.0, sigma in 0.55f64..0.95, t in 0.0f64..1e6) {
        let primes = sieve_primes(500).unwrap();
        for spec in [ResonatorSpec::line_one(x), ResonatorSpec::strip(x, sigma)] {
            let table = build_resonator(spec, &primes).unwrap();
            prop_assert!(log_resonator_abs(&table, t) <= resonator_sup(&table) + 1e-9);
        }
    }

    #[test]
    fn s_forms_agree_and_are_positive(sigma in 0.51f64..0.99, ell in 1usize..=20) {
        let f = s_constant_forms(sigma, ell).unwrap();
        prop_assert!((f.alternating - f.split).abs() <= 1e-12 * f.alternating.abs());
        prop_assert!(f.alternating > 0.0);
    }

    #[test]
    fn conditional_kappa_range_is_wider(sigma in 0.51f64..0.99, beta in 0.01f64..0.99) {
        prop_assert!(kappa_max(sigma, beta, true).unwrap() >= kappa_max(sigma, beta, false).unwrap());
    }
}
