use mmwave_lab::propagation::{
    absorption_attenuation, los_gain, los_received_power, reradiated_gain, reradiated_power, spreading_attenuation,
    total_attenuation, total_gain, PathConditions,
};
use proptest::prelude::*;

fn conditions() -> impl Strategy<Value = PathConditions<f64>> {
    (9.0f64..12.0, -1.0f64..4.0, prop_oneof![Just(0.0), -8.0f64..1.0]).prop_map(|(lf, ld, lk)| {
        let k = if lk == 0.0 { 0.0 } else { 10f64.powf(lk) };
        PathConditions::new(10f64.powf(lf), 10f64.powf(ld), k).unwrap()
    })
}

/// Strictly absorbing paths with optical depth at most 100.
fn absorbing() -> impl Strategy<Value = PathConditions<f64>> {
    (9.0f64..12.0, -1.0f64..3.0, -8.0f64..-1.0)
        .prop_map(|(lf, ld, lk)| PathConditions::new(10f64.powf(lf), 10f64.powf(ld), 10f64.powf(lk)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn power_partition(c in conditions(), beta in 0.0f64..1.0) {
        let g = c.spread_gain();
        let sum = los_gain(&c).norm_sqr() + reradiated_gain(&c, beta).norm_sqr();
        prop_assert!(((sum - g * g) / (g * g)).abs() <= 1e-12);
    }

    #[test]
    fn received_powers_partition(c in conditions(), p in 1e-3f64..1e3) {
        let total = p / spreading_attenuation(c.frequency, c.distance);
        let sum = los_received_power(p, &c) + reradiated_power(p, &c);
        prop_assert!(((sum - total) / total).abs() <= 1e-12);
    }

    #[test]
    fn total_gain_within_triangle_bounds(c in conditions(), beta in 0.0f64..1.0) {
        let a = los_gain(&c).norm();
        let b = reradiated_gain(&c, beta).norm();
        let t = total_gain(&c, beta).norm();
        let slack = 1e-12 * (a + b);
        prop_assert!(t <= a + b + slack);
        prop_assert!(t >= (a - b).abs() - slack);
    }

    #[test]
    fn more_absorption_moves_power_to_reradiation(c in absorbing(), factor in 1.01f64..10.0) {
        let thicker = PathConditions::new(c.frequency, c.distance, c.absorption * factor).unwrap();
        prop_assert!(los_received_power(1.0, &thicker) <= los_received_power(1.0, &c));
        prop_assert!(reradiated_power(1.0, &thicker) >= reradiated_power(1.0, &c));
        prop_assert!(absorption_attenuation(&thicker) >= absorption_attenuation(&c));
    }

    #[test]
    fn attenuation_factorises(c in absorbing()) {
        let product = spreading_attenuation(c.frequency, c.distance) * absorption_attenuation(&c);
        let total = total_attenuation(&c);
        prop_assert!(((product - total) / total).abs() <= 1e-12);
    }
}
