use mmwave_lab::linalg::{singular_values, CMatrix};
use mmwave_lab::mimo::{capacity_det, capacity_eig, ChannelMatrix, Normalization, PowerBudget};
use num_complex::Complex;
use proptest::prelude::*;

fn channel_strategy() -> impl Strategy<Value = (CMatrix<f64>, f64)> {
    (1usize..=8, 1usize..=8, -2.0f64..4.0)
        .prop_flat_map(|(r, c, log_snr)| {
            (
                prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), r * c),
                Just((r, c, 10f64.powf(log_snr))),
            )
        })
        .prop_map(|(values, (r, c, snr))| {
            let data = values.into_iter().map(|(re, im)| Complex::new(re, im)).collect();
            (CMatrix::from_vec(r, c, data).unwrap(), snr)
        })
}

/// Product of complex Givens rotations, so unitary by construction.
fn unitary(n: usize, angles: &[(f64, f64)]) -> CMatrix<f64> {
    let mut u = CMatrix::<f64>::identity(n);
    if n < 2 {
        let phase = angles.first().map_or(0.0, |a| a.1);
        return u.scale(1.0).map(|z| z * Complex::from_polar(1.0, phase));
    }
    for (step, &(theta, phase)) in angles.iter().enumerate() {
        let p = step % n;
        let q = (step + 1 + step / n) % n;
        if p == q {
            continue;
        }
        let (s, c) = theta.sin_cos();
        let e = Complex::from_polar(1.0, phase);
        let mut g = CMatrix::<f64>::identity(n);
        g[(p, p)] = Complex::new(c, 0.0);
        g[(q, q)] = Complex::new(c, 0.0);
        g[(p, q)] = -e.conj() * s;
        g[(q, p)] = e * s;
        u = g.matmul(&u).unwrap();
    }
    u
}

fn wrap(entries: CMatrix<f64>) -> ChannelMatrix<f64> {
    ChannelMatrix::from_entries(entries, Normalization::ConstantSnr)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn det_and_eig_routes_agree((h, snr) in channel_strategy()) {
        let budget = PowerBudget::constant_snr(snr).unwrap();
        let ch = wrap(h);
        let det = capacity_det(&ch, &budget).unwrap();
        let eig = capacity_eig(&ch, &budget).unwrap();
        prop_assert!((det - eig.capacity).abs() <= 1e-9, "det {det} eig {}", eig.capacity);
    }

    #[test]
    fn rank_never_exceeds_min_dimension((h, snr) in channel_strategy()) {
        let budget = PowerBudget::constant_snr(snr).unwrap();
        let (r, c) = h.shape();
        let res = capacity_eig(&wrap(h), &budget).unwrap();
        prop_assert!(res.rank <= r.min(c));
        prop_assert_eq!(res.singular_values.len(), r.min(c));
        prop_assert!(res.singular_values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((0.0..=1.0).contains(&res.inverse_condition));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn unitary_invariance(
        (h, snr) in channel_strategy(),
        left in prop::collection::vec((0.0f64..6.3, 0.0f64..6.3), 1..24),
        right in prop::collection::vec((0.0f64..6.3, 0.0f64..6.3), 1..24),
    ) {
        let budget = PowerBudget::constant_snr(snr).unwrap();
        let (r, c) = h.shape();
        let u = unitary(r, &left);
        let v = unitary(c, &right);
        let rotated = u.matmul(&h).unwrap().matmul(&v).unwrap();
        let a = capacity_eig(&wrap(h), &budget).unwrap();
        let b = capacity_eig(&wrap(rotated), &budget).unwrap();
        prop_assert!((a.capacity - b.capacity).abs() <= 1e-9);
        for (x, y) in a.singular_values.iter().zip(&b.singular_values) {
            prop_assert!((x - y).abs() <= 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn jacobi_matches_nalgebra((h, _snr) in channel_strategy()) {
        let (r, c) = h.shape();
        let ours = singular_values(&h).unwrap();
        let reference = nalgebra::DMatrix::from_fn(r, c, |i, j| h[(i, j)]);
        let mut theirs: Vec<f64> = reference.singular_values().iter().copied().collect();
        theirs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        prop_assert_eq!(ours.len(), theirs.len());
        for (x, y) in ours.iter().zip(&theirs) {
            prop_assert!((x - y).abs() <= 1e-12 * theirs[0].max(1.0), "{x} vs {y}");
        }
    }
}

#[test]
fn generated_rotations_are_unitary() {
    let angles: Vec<(f64, f64)> = (0..17).map(|i| (0.37 * i as f64, 1.3 * i as f64)).collect();
    for n in 1..=8 {
        let u = unitary(n, &angles);
        let eye = u.matmul(&u.adjoint()).unwrap();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((eye[(i, j)] - Complex::new(want, 0.0)).norm() < 1e-13);
            }
        }
    }
}

#[test]
fn constant_power_routes_agree_on_tiny_gains() {
    let budget = PowerBudget::default_constant_power();
    let h = CMatrix::from_fn(3, 3, |i, j| Complex::from_polar(4e-6, 0.7 * (i * 3 + j) as f64));
    let ch = ChannelMatrix::from_entries(h, Normalization::RawGain);
    let det = capacity_det(&ch, &budget).unwrap();
    let eig = capacity_eig(&ch, &budget).unwrap();
    assert!((det - eig.capacity).abs() <= 1e-9);
}
