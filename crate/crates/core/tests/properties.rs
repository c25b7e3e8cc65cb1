use aflab::geometry::{HarmonicTerm, Shape, SphereGrid};
use aflab::measures::{
    l2_distance_support, mean_width, mean_width_samples, quermass, steiner_point, steiner_point_samples, BodyConstants,
};
use nalgebra::Vector3;
use proptest::prelude::*;

fn grid(n: usize) -> SphereGrid {
    if n == 1 {
        SphereGrid::s1(64).unwrap()
    } else {
        SphereGrid::s2(16, 32).unwrap()
    }
}

/// Up to three harmonics of degree 2..=4 with amplitude at most 0.03, which
/// keeps `1 + Σ a Y` uniformly convex in both dimensions.
fn terms(n: usize) -> impl Strategy<Value = Vec<HarmonicTerm>> {
    prop::collection::vec((2usize..=4, any::<bool>(), -4i64..=4, -0.03f64..0.03), 1..=3).prop_map(move |ts| {
        ts.into_iter()
            .map(|(l, sign, m, a)| {
                let order = if n == 1 {
                    if sign {
                        l as i64
                    } else {
                        -(l as i64)
                    }
                } else {
                    m.clamp(-(l as i64), l as i64)
                };
                HarmonicTerm::new(l, order, a)
            })
            .collect()
    })
}

fn dim_and_terms() -> impl Strategy<Value = (usize, Vec<HarmonicTerm>)> {
    (1usize..=2).prop_flat_map(|n| (Just(n), terms(n)))
}

fn body(n: usize, radius: f64, ts: &[HarmonicTerm], center: &[f64]) -> Shape {
    Shape::support_harmonic(n, radius, ts.to_vec(), &center[..=n]).unwrap()
}

fn scaled(ts: &[HarmonicTerm], s: f64) -> Vec<HarmonicTerm> {
    ts.iter().map(|t| HarmonicTerm::new(t.degree, t.order, t.amplitude * s)).collect()
}

fn close(a: &Vector3<f64>, b: &Vector3<f64>, tol: f64) -> bool {
    (a - b).amax() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn steiner_point_is_equivariant(
        (n, ts) in dim_and_terms(),
        c in prop::array::uniform3(-0.4f64..0.4),
        v in prop::array::uniform3(-0.5f64..0.5),
        lambda in 0.3f64..3.0,
    ) {
        let g = grid(n);
        let k = body(n, 1.0, &ts, &c);
        let mut shift = Vector3::from(v);
        if n == 1 {
            shift[2] = 0.0;
        }
        let h = k.support_field(&g).unwrap();
        let z = steiner_point(&h, &g);
        let moved = k.translate(&shift).unwrap();
        let zt = steiner_point(&moved.support_field(&g).unwrap(), &g);
        prop_assert!(close(&zt, &(z + shift), 1e-12));
        let cs: Vec<f64> = c.iter().map(|x| x * lambda).collect();
        let big = body(n, lambda, &scaled(&ts, lambda), &cs);
        let zs = steiner_point(&big.support_field(&g).unwrap(), &g);
        prop_assert!(close(&zs, &(z * lambda), 1e-12 * lambda));
        // The Gauss-map push-forward gives the same point.
        let set = k.sample(&g).unwrap();
        prop_assert!(close(&steiner_point_samples(&set), &z, 1e-12));
    }

    #[test]
    fn steiner_ball_minimizes_l2_distance(
        (n, ts) in dim_and_terms(),
        c in prop::array::uniform3(-0.4f64..0.4),
        b in prop::array::uniform3(-0.5f64..0.5),
        r in 0.3f64..2.0,
    ) {
        let g = grid(n);
        let h = body(n, 1.0, &ts, &c).support_field(&g).unwrap();
        let z = steiner_point(&h, &g);
        let ball = |center: &Vector3<f64>, radius: f64| -> Vec<f64> {
            g.nodes().iter().map(|x| radius + center.dot(x)).collect()
        };
        let hs = ball(&z, mean_width(&h, &g) / 2.0);
        let mut bc = Vector3::from(b);
        if n == 1 {
            bc[2] = 0.0;
        }
        let hb = ball(&bc, r);
        let lhs = l2_distance_support(&h, &hb, &g).unwrap().powi(2);
        let to_steiner = l2_distance_support(&h, &hs, &g).unwrap().powi(2);
        let rhs = to_steiner + l2_distance_support(&hs, &hb, &g).unwrap().powi(2);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.max(1e-300));
        prop_assert!(to_steiner <= lhs * (1.0 + 1e-12));
    }

    #[test]
    fn mean_width_routes_agree(
        (n, ts) in dim_and_terms(),
        c in prop::array::uniform3(-0.4f64..0.4),
    ) {
        let g = grid(n);
        let k = body(n, 1.0, &ts, &c);
        let h = k.support_field(&g).unwrap();
        let set = k.sample(&g).unwrap();
        let w = mean_width(&h, &g);
        let quer = 2.0 * quermass(&set, n as i32 - 1).unwrap() / BodyConstants::new(n).omega_n;
        prop_assert!((w - mean_width_samples(&set)).abs() < 1e-12);
        prop_assert!((w - quer).abs() < 1e-12);
        // Degree ≥ 2 perturbations average out over the sphere.
        prop_assert!((w - 2.0).abs() < 1e-12);
    }

    #[test]
    fn quermassintegrals_translate_and_scale(
        (n, ts) in dim_and_terms(),
        c in prop::array::uniform3(-0.3f64..0.3),
        lambda in 0.3f64..3.0,
    ) {
        let g = grid(n);
        let k = body(n, 1.0, &ts, &[0.0; 3]).sample(&g).unwrap();
        let moved = body(n, 1.0, &ts, &c).sample(&g).unwrap();
        let cs: Vec<f64> = c.iter().map(|x| x * lambda).collect();
        let big = body(n, lambda, &scaled(&ts, lambda), &cs).sample(&g).unwrap();
        for j in -1..=n as i32 {
            let base = quermass(&k, j).unwrap();
            let scale_ok = (quermass(&big, j).unwrap() - lambda.powi(n as i32 - j) * base).abs()
                <= 1e-11 * lambda.powi(n as i32 - j) * base.abs();
            prop_assert!(scale_ok, "I_{} does not scale", j);
            if j >= 0 {
                prop_assert!((quermass(&moved, j).unwrap() - base).abs() <= 1e-11 * base.abs(), "I_{} moved", j);
            }
        }
    }
}
