use mmwave_lab::geometry::{distance_matrix, LinkGeometry, UlaConfig};
use mmwave_lab::scalar::wavelength;
use proptest::prelude::*;

fn link() -> impl Strategy<Value = (LinkGeometry<f64>, f64)> {
    (
        1usize..=8,
        1usize..=8,
        0.1f64..2.0,
        0.0f64..std::f64::consts::TAU,
        0.0f64..std::f64::consts::TAU,
        1.0f64..500.0,
        10e9f64..300e9,
    )
        .prop_map(|(nt, nr, s, phi, theta, d, f)| {
            let tx = UlaConfig::new(nt, s, phi).unwrap();
            let rx = UlaConfig::new(nr, s, theta).unwrap();
            (LinkGeometry::new(tx, rx, d).unwrap(), f)
        })
}

proptest! {
    #[test]
    fn distances_stay_within_half_apertures((g, f) in link()) {
        let lambda = wavelength(f);
        let reach = (g.transmitter.aperture(lambda) + g.receiver.aperture(lambda)) / 2.0;
        let dm = distance_matrix(&g, f);
        prop_assert_eq!(dm.shape(), (g.rx_count(), g.tx_count()));
        for &d in dm.as_matrix().iter() {
            prop_assert!(d > 0.0);
            prop_assert!(d >= g.separation - reach - 1e-12 && d <= g.separation + reach + 1e-12);
        }
    }

    #[test]
    fn reversing_the_link_transposes((g, f) in link()) {
        let a = distance_matrix(&g, f);
        let b = distance_matrix(&g.reversed(), f);
        for i in 0..g.rx_count() {
            for j in 0..g.tx_count() {
                prop_assert!((a.get(i, j) - b.get(j, i)).abs() <= 1e-12 * g.separation);
            }
        }
    }

    #[test]
    fn broadside_is_symmetric_toeplitz(n in 1usize..=8, d in 1.0f64..500.0, f in 10e9f64..300e9) {
        let dm = distance_matrix(&LinkGeometry::parallel(n, d).unwrap(), f);
        for i in 0..n {
            for j in 0..n {
                prop_assert!((dm.get(i, j) - dm.get(j, i)).abs() <= 1e-12 * d);
                if i > 0 && j > 0 {
                    prop_assert!((dm.get(i, j) - dm.get(i - 1, j - 1)).abs() <= 1e-12 * d);
                }
            }
        }
    }
}
