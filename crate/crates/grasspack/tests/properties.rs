//! Property suites: metric axioms, invariance under the choices that should
//! not matter, representation round trips, and bound soundness, all over
//! randomly drawn planes and packings.

use std::f64::consts::FRAC_PI_2;

use grasspack::io::{parse_packing, serialize_packing};
use grasspack::{
    audit, chordal_distance, complement, geodesic_distance, embed_points, lr_distances,
    lr_to_plane, max_angle_distance, pattern_search_epoch, plane_to_lr, potential,
    principal_angles, random_packing, random_plane, Metric, OptimConfig, Plane,
};
use grasspack::plane::orthonormalize;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const METRICS: [Metric; 3] = [Metric::Chordal, Metric::Geodesic, Metric::MaxAngle];

fn rng_of(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// (m, n) with 1 <= n <= m - 1, covering lines and proper planes.
fn dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=6).prop_flat_map(|m| (Just(m), 1usize..=(m - 1).min(3)))
}

fn distance(metric: Metric, p: &Plane, q: &Plane) -> f64 {
    match metric {
        Metric::Chordal => chordal_distance(p, q).unwrap(),
        Metric::Geodesic => geodesic_distance(p, q).unwrap(),
        Metric::MaxAngle => max_angle_distance(p, q).unwrap(),
    }
}

/// Haar-ish random rotation: orthonormalized square Gaussian matrix.
fn random_rotation(k: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    random_plane(k, k, rng).into_gen()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn principal_angles_are_sorted_and_bounded(seed in any::<u64>(), (m, n) in dims()) {
        let mut rng = rng_of(seed);
        let p = random_plane(m, n, &mut rng);
        let q = random_plane(m, n, &mut rng);
        let angles = principal_angles(&p, &q).unwrap();
        prop_assert_eq!(angles.angles().len(), n);
        for pair in angles.angles().windows(2) {
            prop_assert!(pair[0] <= pair[1] + 1e-12);
        }
        for &theta in angles.angles() {
            prop_assert!((-1e-12..=FRAC_PI_2 + 1e-12).contains(&theta));
        }
    }

    #[test]
    fn distances_are_symmetric_and_vanish_on_equal_planes(seed in any::<u64>(), (m, n) in dims()) {
        let mut rng = rng_of(seed);
        let p = random_plane(m, n, &mut rng);
        let q = random_plane(m, n, &mut rng);
        for metric in METRICS {
            prop_assert!((distance(metric, &p, &q) - distance(metric, &q, &p)).abs() <= 1e-12);
            prop_assert!(distance(metric, &p, &p) <= 1e-7);
        }
    }

    #[test]
    fn chordal_and_geodesic_obey_the_triangle_inequality(seed in any::<u64>(), (m, n) in dims()) {
        let mut rng = rng_of(seed);
        let p = random_plane(m, n, &mut rng);
        let q = random_plane(m, n, &mut rng);
        let r = random_plane(m, n, &mut rng);
        for metric in [Metric::Chordal, Metric::Geodesic] {
            let direct = distance(metric, &p, &r);
            let detour = distance(metric, &p, &q) + distance(metric, &q, &r);
            prop_assert!(direct <= detour + 1e-9, "{metric}: {direct} > {detour}");
        }
    }

    #[test]
    fn ambient_rotation_preserves_every_distance(seed in any::<u64>(), (m, n) in dims()) {
        let mut rng = rng_of(seed);
        let p = random_plane(m, n, &mut rng);
        let q = random_plane(m, n, &mut rng);
        let rot = random_rotation(m, &mut rng);
        let p_rot = orthonormalize(&(p.gen() * rot.transpose())).unwrap();
        let q_rot = orthonormalize(&(q.gen() * rot.transpose())).unwrap();
        for metric in METRICS {
            let before = distance(metric, &p, &q);
            let after = distance(metric, &p_rot, &q_rot);
            prop_assert!((before - after).abs() <= 1e-9, "{metric}: {before} vs {after}");
        }
    }

    #[test]
    fn generator_basis_does_not_change_the_angles(seed in any::<u64>(), (m, n) in dims()) {
        let mut rng = rng_of(seed);
        let p = random_plane(m, n, &mut rng);
        let q = random_plane(m, n, &mut rng);
        let basis_change = random_rotation(n, &mut rng);
        let p_again = orthonormalize(&(basis_change * p.gen())).unwrap();
        let before = principal_angles(&p, &q).unwrap();
        let after = principal_angles(&p_again, &q).unwrap();
        for (a, b) in before.angles().iter().zip(after.angles()) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn complement_preserves_chordal_distance(seed in any::<u64>(), (m, n) in dims()) {
        let mut rng = rng_of(seed);
        let p = random_plane(m, n, &mut rng);
        let q = random_plane(m, n, &mut rng);
        let before = chordal_distance(&p, &q).unwrap();
        let after = chordal_distance(&complement(&p).unwrap(), &complement(&q).unwrap()).unwrap();
        prop_assert!((before - after).abs() <= 1e-9, "{before} vs {after}");
    }

    #[test]
    fn serialize_parse_round_trip_preserves_distances(
        seed in any::<u64>(),
        (m, n) in dims(),
        count in 2usize..=6,
    ) {
        let mut rng = rng_of(seed);
        let packing = random_packing(m, n, count, Metric::Chordal, &mut rng);
        let back = parse_packing(&serialize_packing(&packing)).unwrap();
        prop_assert_eq!(back.len(), count);
        for i in 0..count {
            for j in (i + 1)..count {
                let before = chordal_distance(&packing.planes()[i], &packing.planes()[j]).unwrap();
                let after = chordal_distance(&back.planes()[i], &back.planes()[j]).unwrap();
                prop_assert!((before - after).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn embedded_points_realize_the_chordal_distances(
        seed in any::<u64>(),
        (m, n) in dims(),
        count in 2usize..=6,
    ) {
        let mut rng = rng_of(seed);
        let packing = random_packing(m, n, count, Metric::Chordal, &mut rng);
        let points = embed_points(&packing);
        for i in 0..count {
            for j in (i + 1)..count {
                let euclid: f64 = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                let chordal = chordal_distance(&packing.planes()[i], &packing.planes()[j]).unwrap();
                prop_assert!((euclid - chordal).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn binocular_pairs_round_trip_and_agree_with_the_svd(seed in any::<u64>()) {
        let mut rng = rng_of(seed);
        let p = random_plane(4, 2, &mut rng);
        let q = random_plane(4, 2, &mut rng);
        let lr_p = plane_to_lr(&p).unwrap();
        let lr_q = plane_to_lr(&q).unwrap();
        prop_assert!(chordal_distance(&p, &lr_to_plane(&lr_p)).unwrap() <= 1e-9);
        let closed_form = lr_distances(&lr_p, &lr_q);
        let angles = principal_angles(&p, &q).unwrap();
        prop_assert!((closed_form.theta1 - angles.angles()[0]).abs() <= 1e-9);
        prop_assert!((closed_form.theta2 - angles.angles()[1]).abs() <= 1e-9);
        prop_assert!((closed_form.chordal_sq - angles.chordal_sq()).abs() <= 1e-9);
        prop_assert!((closed_form.geodesic_sq - angles.geodesic_sq()).abs() <= 1e-9);
    }

    #[test]
    fn audit_ratio_never_exceeds_one(
        seed in any::<u64>(),
        (m, n) in dims(),
        count in 2usize..=12,
    ) {
        let mut rng = rng_of(seed);
        let packing = random_packing(m, n, count, Metric::Chordal, &mut rng);
        let report = audit(&packing).unwrap();
        prop_assert!(report.ratio <= 1.0 + 1e-9, "ratio {}", report.ratio);
    }
}

proptest! {
    // Each case runs a full coordinate sweep; keep the count small.
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pattern_search_epoch_never_increases_the_potential(seed in any::<u64>()) {
        let mut rng = rng_of(seed);
        let packing = random_packing(3, 1, 4, Metric::Chordal, &mut rng);
        let config = OptimConfig::new(Metric::Chordal);
        let before = potential(&packing, 0.0, Metric::Chordal).unwrap();
        let stepped = pattern_search_epoch(&packing, 0.0, &config).unwrap();
        let after = potential(&stepped, 0.0, Metric::Chordal).unwrap();
        prop_assert!(after <= before + 1e-9, "potential rose from {before} to {after}");
    }
}
