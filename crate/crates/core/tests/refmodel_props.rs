use std::f64::consts::PI;

use pdem::oracles::count_nodes;
use pdem::refmodels::{Parity, ReferenceModel};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn tangent_states_have_parity(k in 0usize..10, mu in 1.0f64..5.0, y in 0.01f64..1.55) {
        let m = ReferenceModel::stp(mu).unwrap();
        let (a, b) = (m.wavefunction_raw(k, y).unwrap(), m.wavefunction_raw(k, -y).unwrap());
        let sign = if m.parity(k) == Parity::Even { 1.0 } else { -1.0 };
        prop_assert!((b - sign * a).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn cotangent_states_reflect_about_half_pi(k in 0usize..10, mu in 1.0f64..5.0, y in 0.01f64..1.55) {
        let m = ReferenceModel::scp(mu).unwrap();
        let (a, b) = (m.wavefunction_raw(k, y).unwrap(), m.wavefunction_raw(k, PI - y).unwrap());
        let sign = if m.parity(k) == Parity::Even { 1.0 } else { -1.0 };
        prop_assert!((b - sign * a).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn kth_state_has_k_nodes(k in 0usize..10, mu in 1.0f64..5.0, which in 0usize..3) {
        let m = match which {
            0 => ReferenceModel::stp(mu).unwrap(),
            1 => ReferenceModel::scp(mu).unwrap(),
            _ => ReferenceModel::ptp(mu, 1.0 + mu / 2.0).unwrap(),
        };
        let d = m.domain();
        let samples: Vec<f64> = (1..4000)
            .map(|j| m.wavefunction_raw(k, d.lo + d.length() * j as f64 / 4000.0).unwrap())
            .collect();
        prop_assert_eq!(count_nodes(&samples), k);
    }
}
