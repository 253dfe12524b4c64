mod common;

use common::*;
use hyperbloch::group::SurfaceGroup;
use hyperbloch::hyperbolic::{
    construct_group, dirichlet_cell, distance_raw, from_hyperboloid, to_hyperboloid, Curvature, DiskPoint, Mobius,
};
use hyperbloch::packet::{laplacian, PacketTerm, WavePacket};
use num_complex::{Complex, Complex64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn disk_point() -> impl Strategy<Value = Complex64> {
    (0.0..0.95f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn mobius() -> impl Strategy<Value = Mobius<f64>> {
    (0.0..6.3f64, 0.0..2.0f64, 0.0..6.3f64)
        .prop_map(|(a, t, b)| Mobius::rotation(a).compose(&Mobius::translation(t)).compose(&Mobius::rotation(b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mobius_composition_matches_application(m1 in mobius(), m2 in mobius(), z in disk_point()) {
        let lhs = m1.compose(&m2).apply_raw(z);
        let rhs = m1.apply_raw(m2.apply_raw(z));
        prop_assert!((lhs - rhs).norm() < 1e-10);
        prop_assert!((m1.inverse().apply_raw(m1.apply_raw(z)) - z).norm() < 1e-10);
    }

    #[test]
    fn distance_is_invariant(m in mobius(), z1 in disk_point(), z2 in disk_point()) {
        for k in [Curvature::MinusOne, Curvature::MinusFour] {
            let d = distance_raw(z1, z2, k);
            let dm = distance_raw(m.apply_raw(z1), m.apply_raw(z2), k);
            prop_assert!((d - dm).abs() <= 1e-9 * (1.0 + d));
        }
    }

    #[test]
    fn distance_matches_hyperboloid(z1 in disk_point(), z2 in disk_point()) {
        let d = distance_raw(z1, z2, Curvature::MinusOne);
        let oracle = hyperboloid_distance(z1, z2);
        prop_assert!((d - oracle).abs() <= 1e-8 * (1.0 + d));
        // curvature −4 halves lengths
        prop_assert!((distance_raw(z1, z2, Curvature::MinusFour) - d / 2.0).abs() <= 1e-12 * (1.0 + d));
    }

    #[test]
    fn hyperboloid_round_trip(z in disk_point()) {
        prop_assert!((from_hyperboloid(to_hyperboloid(z)) - z).norm() < 1e-12);
    }

    #[test]
    fn f32_tracks_f64(z1 in (0.0..0.8f64, 0.0..6.3f64), z2 in (0.0..0.8f64, 0.0..6.3f64), t in 0.0..1.0f64) {
        let (a, b) = (Complex64::from_polar(z1.0, z1.1), Complex64::from_polar(z2.0, z2.1));
        let d64 = distance_raw(a, b, Curvature::MinusOne);
        let a32 = Complex::new(a.re as f32, a.im as f32);
        let b32 = Complex::new(b.re as f32, b.im as f32);
        let d32 = distance_raw(a32, b32, Curvature::MinusOne);
        prop_assert!((d32 as f64 - d64).abs() <= 1e-3 * (1.0 + d64));
        let m: Mobius<f32> = Mobius::<f64>::translation(t).cast();
        let w = m.apply_raw(a32);
        let w64 = Mobius::<f64>::translation(t).apply_raw(a);
        prop_assert!(((w.re as f64 - w64.re).powi(2) + (w.im as f64 - w64.im).powi(2)).sqrt() < 1e-4);
    }
}

#[test]
fn disk_point_rejects_boundary() {
    assert!(DiskPoint::new(Complex64::new(1.0, 0.0)).is_err());
    assert!(DiskPoint::new(Complex64::new(0.6, 0.8)).is_err());
    assert!(DiskPoint::new(Complex64::new(f64::NAN, 0.0)).is_err());
    assert!(DiskPoint::new(Complex64::new(0.3, 0.4)).is_ok());
}

#[test]
fn group_matrices_satisfy_relator_both_curvatures() {
    for (g, k) in [(2, Curvature::MinusOne), (2, Curvature::MinusFour), (3, Curvature::MinusOne)] {
        let grp = construct_group(g, k).unwrap();
        assert!(grp.relator_residual() < 1e-10);
        let m = word_matrix(&grp, &relator(g));
        let off = (m[0][1].norm() + m[1][0].norm()).max((m[0][0] - m[1][1]).norm());
        assert!(off < 1e-10, "genus {g}: {m:?}");
        assert!((m[0][0].norm() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn group_images_agree_with_matrix_products() {
    let grp = construct_group(2, Curvature::MinusOne).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let len = r.random_range(0..8);
        let w: Vec<i32> = (0..len).map(|_| [1, -1, 2, -2, 3, -3, 4, -4][r.random_range(0..8)]).collect();
        let z = Complex64::from_polar(0.7 * r.random::<f64>(), 6.3 * r.random::<f64>());
        let got = grp.element(&elem(2, &w)).apply_raw(z);
        let want = m2_apply(&word_matrix(&grp, &w), z);
        assert!((got - want).norm() < 1e-9, "{w:?}");
    }
}

#[test]
fn unfolding_partitions_the_disk() {
    let grp = construct_group(2, Curvature::MinusOne).unwrap();
    let cell = dirichlet_cell(&grp, 3).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(11);
    let mut in_interior_multiple = 0;
    for _ in 0..10_000 {
        let z = Complex64::from_polar(0.97 * r.random::<f64>().sqrt(), 6.3 * r.random::<f64>());
        let (g, y) = cell.unfold(z, 8).unwrap();
        assert!(cell.contains_closed(y, 1e-9 * to_hyperboloid(y)[0]));
        assert!((grp.element(&g).apply_raw(y) - z).norm() < 1e-8 * (1.0 - z.norm_sqr()).recip());
        // an interior point of a tile lies in no neighbouring tile
        if cell.contains(y) && cell.violation(y) < -1e-6 {
            for f in &cell.faces {
                if cell.contains(f.map.apply_raw(y)) {
                    in_interior_multiple += 1;
                }
            }
        }
    }
    assert_eq!(in_interior_multiple, 0);
}

#[test]
fn orbit_points_are_distinct_and_dirichlet() {
    let grp = construct_group(2, Curvature::MinusOne).unwrap();
    let cell = dirichlet_cell(&grp, 3).unwrap();
    let ball = SurfaceGroup::new(2).unwrap().ball(3).unwrap();
    let pts: Vec<Complex64> = ball.iter().map(|g| grp.orbit_point(g)).collect();
    for i in 0..pts.len() {
        for j in 0..i {
            assert!((pts[i] - pts[j]).norm() > 1e-6);
        }
    }
    // cell points are closer to x0 than to any other orbit point
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let x0 = grp.base_point;
    let mut tested = 0;
    while tested < 500 {
        let z = Complex64::from_polar(0.9 * r.random::<f64>(), 6.3 * r.random::<f64>());
        if !cell.contains(z) {
            continue;
        }
        tested += 1;
        let d0 = hyperboloid_distance(z, x0);
        for p in &pts[1..] {
            assert!(hyperboloid_distance(z, *p) >= d0 - 1e-9);
        }
    }
}

#[test]
fn quadrature_mass_converges_to_area() {
    for k in [Curvature::MinusOne, Curvature::MinusFour] {
        let grp = construct_group(2, k).unwrap();
        let cell = dirichlet_cell(&grp, 3).unwrap();
        let area = k.surface_area(2);
        let errs: Vec<f64> = [0.04, 0.02, 0.01]
            .iter()
            .map(|s| ((cell.quadrature(s * cell.chart_radius()).unwrap().total_weight() - area) / area).abs())
            .collect();
        assert!(errs[2] < 0.01, "{k:?}: {errs:?}");
        assert!(errs[2] < errs[0], "{k:?}: {errs:?}");
    }
}

#[test]
fn packet_jet_matches_finite_differences() {
    let psi = WavePacket::new(
        vec![
            PacketTerm { center: c(0.1, -0.2), coefficient: c(1.0, 0.5), radius: 1.3 },
            PacketTerm { center: c(-0.3, 0.25), coefficient: c(-0.4, 0.2), radius: 0.9 },
        ],
        Curvature::MinusOne,
    )
    .unwrap();
    let h = 1e-4;
    let mut r = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let z = Complex64::from_polar(0.5 * r.random::<f64>(), 6.3 * r.random::<f64>());
        // the bump is only C² at its edge, so keep stencils off it
        if psi.terms.iter().any(|t| (psi.tau(t, z) - 1.0).abs() < 1e-2) {
            continue;
        }
        let j = psi.jet(z);
        let v = |p: Complex64| psi.value(p);
        let dx = (v(z + h) - v(z - h)) / (2.0 * h);
        let dy = (v(z + c(0.0, h)) - v(z - c(0.0, h))) / (2.0 * h);
        assert!((j.grad[0] - dx).norm() < 1e-6 && (j.grad[1] - dy).norm() < 1e-6);
        let lap = (v(z + h) + v(z - h) + v(z + c(0.0, h)) + v(z - c(0.0, h)) - v(z) * 4.0) / (h * h);
        // positive Laplacian of ds = 2|dz|/(1−|z|²)
        let want = lap * (-0.25 * (1.0 - z.norm_sqr()).powi(2));
        assert!((laplacian(&psi, z) - want).norm() < 1e-4 * (1.0 + want.norm()), "{z}: {} vs {want}", laplacian(&psi, z));
    }
}

#[test]
fn packet_round_trips_and_transforms() {
    let psi = WavePacket::single(c(0.2, 0.1), c(0.3, -0.7), 0.8, Curvature::MinusFour).unwrap();
    assert_eq!(WavePacket::from_json(&psi.to_json().unwrap()).unwrap(), psi);
    let m = Mobius::translation(0.4).compose(&Mobius::rotation(1.1));
    let moved = psi.translated(&m);
    for z in [c(0.0, 0.0), c(0.3, 0.2), c(-0.1, 0.5)] {
        assert!((moved.value(m.apply_raw(z)) - psi.value(z)).norm() < 1e-10);
    }
    assert!(WavePacket::single(c(0.0, 0.0), c(1.0, 0.0), -1.0, Curvature::MinusOne).is_err());
}
