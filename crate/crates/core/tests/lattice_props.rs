use ddmc_core::lattice::{
    ceil_half, directed_midpoint, directed_midpoint_pair, floor_half, level_directions, midpoint_decompose,
    rounded_midpoint_pair, DirectionMultiset,
};
use ddmc_core::LatticePoint;
use proptest::prelude::*;

fn vec_pair(max_n: usize, r: i64) -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (1..=max_n).prop_flat_map(move |n| (prop::collection::vec(-r..=r, n), prop::collection::vec(-r..=r, n)))
}

/// Conditions (a)–(c) characterizing the directed midpoint pair.
fn characterizes(x: &[i64], y: &[i64], p: &[i64], q: &[i64]) -> bool {
    (0..x.len()).all(|i| {
        p[i] + q[i] == x[i] + y[i]
            && (p[i] - q[i]).abs() <= 1
            && if x[i] >= y[i] { p[i] >= q[i] } else { p[i] <= q[i] }
    })
}

proptest! {
    #[test]
    fn halves_match_float_rounding(s in -1_000_000i64..=1_000_000) {
        prop_assert_eq!(floor_half(s), (s as f64 / 2.0).floor() as i64);
        prop_assert_eq!(ceil_half(s), (s as f64 / 2.0).ceil() as i64);
    }

    #[test]
    fn midpoint_pair_characterization((x, y) in vec_pair(4, 50)) {
        let (p, q) = directed_midpoint_pair(&x, &y).unwrap();
        prop_assert!(characterizes(&x, &y, &p, &q));
        let sum: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        prop_assert_eq!(&p + &q, LatticePoint::from(sum.clone()));
        prop_assert!((&p - &q).norm_inf() <= 1);
        // Uniqueness: any candidate near the midpoint meeting (a)–(c) is μ.
        let n = x.len();
        let mut cand = vec![0i64; n];
        let total = 4usize.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            for i in 0..n {
                cand[i] = floor_half(sum[i]) - 1 + (c % 4) as i64;
                c /= 4;
            }
            let other: Vec<i64> = (0..n).map(|i| sum[i] - cand[i]).collect();
            if characterizes(&x, &y, &cand, &other) {
                prop_assert_eq!(&cand[..], p.coords());
            }
        }
    }

    #[test]
    fn midpoint_translation_equivariant((x, y) in vec_pair(4, 30), seed in prop::collection::vec(-30i64..=30, 4)) {
        let d = LatticePoint::from(&seed[..x.len()]);
        let (xp, yp) = (&LatticePoint::from(&x[..]) + &d, &LatticePoint::from(&y[..]) + &d);
        let lhs = directed_midpoint(&xp, &yp).unwrap();
        let rhs = &directed_midpoint(&x, &y).unwrap() + &d;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn midpoint_permutation_and_sign_equivariant(
        (x, y) in vec_pair(4, 30),
        keys in prop::collection::vec(any::<u32>(), 4),
        signs in prop::collection::vec(prop::bool::ANY, 4),
    ) {
        let n = x.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&i| keys[i]);
        let permute = |v: &[i64]| -> Vec<i64> { perm.iter().map(|&i| v[i]).collect() };
        let m = directed_midpoint(&x, &y).unwrap();
        prop_assert_eq!(directed_midpoint(&permute(&x), &permute(&y)).unwrap(), LatticePoint::from(permute(&m)));

        let tau: Vec<i64> = signs[..n].iter().map(|&s| if s { -1 } else { 1 }).collect();
        let (xt, yt) = (LatticePoint::from(&x[..]).hadamard(&tau), LatticePoint::from(&y[..]).hadamard(&tau));
        prop_assert_eq!(directed_midpoint(&xt, &yt).unwrap(), m.hadamard(&tau));
    }

    #[test]
    fn ordered_pairs_use_plain_rounding((x, y) in vec_pair(4, 50)) {
        let hi = LatticePoint::from(&x[..]).join(&LatticePoint::from(&y[..]));
        let lo = LatticePoint::from(&x[..]).meet(&LatticePoint::from(&y[..]));
        prop_assert_eq!(directed_midpoint_pair(&hi, &lo).unwrap(), rounded_midpoint_pair(&hi, &lo).unwrap());
    }

    #[test]
    fn decomposition_matches_level_sets(x in (1usize..=4).prop_flat_map(|n| prop::collection::vec(-6i64..=6, n))) {
        let d = midpoint_decompose(&x);
        let n = x.len();
        prop_assert_eq!(d.sum(n), LatticePoint::from(x.clone()));
        for e in d.elements() {
            prop_assert!(!e.is_zero() && e.norm_inf() == 1);
        }
        let zero = vec![0; n];
        let levels = DirectionMultiset::from_unsorted(level_directions(&zero, &x).unwrap());
        prop_assert_eq!(d, levels);
    }

    #[test]
    fn monotone_families_round_trip(
        (signs, depths) in (1usize..=4).prop_flat_map(|n| (
            prop::collection::vec(prop::bool::ANY, n),
            prop::collection::vec(0usize..=6, n),
        )),
    ) {
        let n = signs.len();
        let m = depths.iter().copied().max().unwrap();
        prop_assume!(m >= 1);
        // Coordinate i is ±1 on the first depths[i] members and 0 after.
        let family: Vec<LatticePoint> = (0..m)
            .map(|k| {
                let v: Vec<i64> = (0..n)
                    .map(|i| if k < depths[i] { if signs[i] { 1 } else { -1 } } else { 0 })
                    .collect();
                LatticePoint::from(v)
            })
            .collect();
        let expected = DirectionMultiset::from_unsorted(family);
        let total = expected.sum(n);
        prop_assert_eq!(midpoint_decompose(&total), expected);
    }
}

#[test]
fn decomposition_of_small_vectors() {
    assert!(midpoint_decompose(&[0, 0]).is_empty());
    assert_eq!(midpoint_decompose(&[1, -1]).elements(), &[LatticePoint::from([1, -1])]);
    let d = midpoint_decompose(&[3, -1, 0]);
    assert_eq!(
        d.elements(),
        &[LatticePoint::from([1, -1, 0]), LatticePoint::from([1, 0, 0]), LatticePoint::from([1, 0, 0])]
    );
}
