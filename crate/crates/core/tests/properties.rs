use lensarr::bounds::{bound_eval, recurrence_certify, BoundKind, BoundParams};
use lensarr::dual::{dual_plane, lens_line_of, lift_circle};
use lensarr::exact::{intersection_points, point_on_circle, rat, ratio};
use lensarr::family::{lenses_overlap, select_family, SelectMode};
use lensarr::generators::{random_scene, GeneratorSpec, Model};
use lensarr::incidence::{lens_circle_incidences, szekely_stats};
use lensarr::pencil::{brute_force_lenses, enumerate_lenses};
use lensarr::slope::gamma_point;
use lensarr::{Circle, Point, QuadPoint, Scene};
use proptest::prelude::*;

fn model() -> impl Strategy<Value = Model> {
    prop_oneof![
        Just(Model::UniformRandom),
        Just(Model::RandomPencils),
        Just(Model::UnitCirclesOnGrid),
        Just(Model::ChordFan),
    ]
}

fn generated() -> impl Strategy<Value = Scene> {
    (model(), 2usize..11, 2usize..5, any::<u64>())
        .prop_map(|(m, n, k, seed)| random_scene(&GeneratorSpec::new(m, n, k, seed)).unwrap())
}

/// Two integer circles, the pencil they span at offsets `ts`, and loose
/// extra circles.
fn pencil_scene() -> impl Strategy<Value = (Scene, Vec<usize>)> {
    (
        (-4i64..4, -4i64..4, 1i64..20),
        (-4i64..4, -4i64..4, 1i64..20),
        prop::collection::btree_set(-6i64..7, 1..4),
        prop::collection::vec((-6i64..6, -6i64..6, 1i64..30), 0..4),
    )
        .prop_filter_map("spanning pair must meet twice", |(a, b, ts, extra)| {
            let c1 = Circle::int(a.0, a.1, a.2);
            let c2 = Circle::int(b.0, b.1, b.2);
            if c1 == c2 || intersection_points(&c1, &c2).ok()?.len() != 2 {
                return None;
            }
            let power = |c: &Circle| c.cx() * c.cx() + c.cy() * c.cy() - c.r2();
            let mut circles = vec![c1.clone(), c2.clone()];
            for t in ts.into_iter().filter(|t| *t != 0 && *t != 1) {
                let (t, u) = (rat(t), rat(1 - t));
                let cx = &u * c1.cx() + &t * c2.cx();
                let cy = &u * c1.cy() + &t * c2.cy();
                let r2 = &cx * &cx + &cy * &cy - (&u * power(&c1) + &t * power(&c2));
                circles.push(Circle::new(cx, cy, r2).ok()?);
            }
            let members: Vec<usize> = (0..circles.len()).collect();
            for (x, y, r2) in extra {
                let c = Circle::int(x, y, r2);
                if !circles.contains(&c) {
                    circles.push(c);
                }
            }
            Some((Scene::from_circles(circles).ok()?, members))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pencils_are_found_whole((scene, members) in pencil_scene()) {
        let lenses = enumerate_lenses(&scene);
        prop_assert_eq!(&lenses, &brute_force_lenses(&scene).unwrap());
        prop_assert!(lenses.iter().any(|l| members.iter().all(|&c| l.contains_circle(c))));
    }

    #[test]
    fn degrees_count_coincidences(scene in generated()) {
        // every circle through both points of some two-point intersection
        let mut pairs: Vec<(QuadPoint, QuadPoint, usize)> = Vec::new();
        for i in 0..scene.len() {
            for j in i + 1..scene.len() {
                let pts = intersection_points(scene.circle(i), scene.circle(j)).unwrap();
                if pts.len() == 2 {
                    let through = scene
                        .circles()
                        .iter()
                        .filter(|c| point_on_circle(&pts[0], c) && point_on_circle(&pts[1], c))
                        .count();
                    let known = pairs.iter().any(|(p, q, _)| {
                        (p == &pts[0] && q == &pts[1]) || (p == &pts[1] && q == &pts[0])
                    });
                    if !known {
                        pairs.push((pts[0].clone(), pts[1].clone(), through));
                    }
                }
            }
        }
        let lenses = enumerate_lenses(&scene);
        prop_assert_eq!(lenses.len(), pairs.len());
        let total: usize = lenses.iter().map(|l| l.degree()).sum();
        prop_assert_eq!(total, pairs.iter().map(|t| t.2).sum::<usize>());
        for l in &lenses {
            prop_assert!(l.degree() >= 2 && l.p() != l.q());
        }
    }

    #[test]
    fn families_are_sound_and_ordered(scene in generated()) {
        let lenses = enumerate_lenses(&scene);
        let greedy = select_family(&scene, &lenses, SelectMode::Greedy).unwrap();
        for (i, a) in greedy.members().iter().enumerate() {
            for b in &greedy.members()[i + 1..] {
                prop_assert!(!lenses_overlap(&scene, a, b));
            }
        }
        prop_assert_eq!(lens_circle_incidences(&greedy), greedy.total_degree());
        prop_assert_eq!(
            greedy.total_degree(),
            greedy.members().iter().map(|l| l.degree()).sum::<usize>()
        );
        if lenses.len() <= 30 {
            let exact = select_family(&scene, &lenses, SelectMode::Exact).unwrap();
            prop_assert!(exact.is_certified());
            prop_assert!(greedy.len() <= exact.len() && exact.len() <= lenses.len());
        }
    }

    #[test]
    fn lifts_follow_their_formulas(x in -40i64..40, y in -40i64..40, r2 in 1i64..200, d in 1i64..7) {
        let c = Circle::new(ratio(x, d), ratio(y, d), ratio(r2, d)).unwrap();
        let l = lift_circle(&c);
        prop_assert_eq!(&l.z, &(ratio(r2, d) - ratio(x * x, d * d) - ratio(y * y, d * d)));
        let p = Point::new(ratio(y, d), ratio(x, d));
        let h = dual_plane(&p);
        prop_assert_eq!(&h.a, &ratio(-2 * y, d));
        prop_assert_eq!(&h.b, &ratio(-2 * x, d));
        prop_assert_eq!(&h.d, &ratio(x * x + y * y, d * d));
    }

    #[test]
    fn lens_lines_are_injective(scene in generated()) {
        let lenses = enumerate_lenses(&scene);
        let lines: Vec<_> = lenses.iter().map(|l| lens_line_of(l).unwrap()).collect();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                prop_assert!(lines[i] != lines[j]);
            }
        }
    }

    #[test]
    fn gamma_points_solve_the_system(cx in -9i64..9, cy in -9i64..9, r in 1i64..6, t in -30i64..30, s in 1i64..8) {
        // rational point (cx, cy) + r((1−u²), 2u)/(1+u²) with u = t/s
        let u = ratio(t, s);
        let den = rat(1) + &u * &u;
        let px = rat(cx) + rat(r) * (rat(1) - &u * &u) / &den;
        let py = rat(cy) + rat(r) * (&u + &u) / &den;
        let c = Circle::int(cx, cy, r * r);
        let p = QuadPoint::from(&Point::new(px, py));
        match gamma_point(&c, &p) {
            Ok(g) => {
                let (a, b) = g.residuals(&c);
                prop_assert!(a.is_zero() && b.is_zero());
            }
            Err(e) => prop_assert_eq!(e, lensarr::Error::VerticalTangent),
        }
    }

    #[test]
    fn szekely_is_label_free(scene in generated(), rot in 0usize..10) {
        let mut pts: Vec<Point> = enumerate_lenses(&scene)
            .iter()
            .flat_map(|l| [l.p().to_rational(), l.q().to_rational()])
            .flatten()
            .collect();
        pts.extend(scene.circles().iter().map(|c| c.center()));
        let a = szekely_stats(&pts, &scene, 2).unwrap();
        let mut circles = scene.circles().to_vec();
        let r = rot % circles.len().max(1);
        circles.rotate_left(r);
        circles.reverse();
        let relabeled = Scene::from_circles(circles).unwrap();
        let b = szekely_stats(&pts, &relabeled, 2).unwrap();
        prop_assert_eq!(a.incidences, b.incidences);
        prop_assert_eq!(a.edges, b.edges);
        prop_assert_eq!(a.crossings, b.crossings);
        prop_assert_eq!(a.max_multiplicity, b.max_multiplicity);
        prop_assert_eq!(a.incidences, a.neighborhood_sizes.iter().sum::<usize>());
        let rich_degree: usize = enumerate_lenses(&scene).iter().map(|l| l.degree()).sum();
        prop_assert!(a.g1 <= rich_degree);
    }
}

proptest! {
    #[test]
    fn thm_bounds_are_monotone(e in 3.0f64..24.0, k in 2.0f64..60.0, dk in 0.5f64..20.0, dn in 1.0f64..8.0) {
        let n = 10f64.powf(e);
        for kind in [BoundKind::Thm1Count, BoundKind::Thm1Degree] {
            let at = |n: f64, k: f64| bound_eval(kind, &BoundParams::new(n, 0.0, k)).unwrap();
            let base = at(n, k);
            prop_assert!(base > 0.0);
            prop_assert!(at(n, k + dk) <= base * (1.0 + 1e-12));
            prop_assert!(at(n * dn, k) >= base * (1.0 - 1e-12));
        }
    }

    #[test]
    fn recurrence_invariants(k in 2.0f64..40.0, log_z in 0.51f64..60.0) {
        let n = k.powi(3) * 2f64.powf(log_z);
        let cert = recurrence_certify(n, k, 1.0, 1.0).unwrap();
        prop_assert!(cert.z > std::f64::consts::SQRT_2 && cert.z <= 2.0);
        let end = k.powi(3) * cert.z.powf(2f64.powi(cert.s as i32));
        prop_assert!((end - n).abs() / n < 1e-10);
        prop_assert!(cert.max_identity_rel_err < 1e-12);
        for w in cert.trace.windows(2) {
            let rel = (w[0].d_j * w[0].d_j * w[0].n_j - w[1].n_j).abs() / w[1].n_j;
            prop_assert!(rel < 1e-12);
        }
        prop_assert!(cert.passed(), "{:?}", cert.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    }
}
