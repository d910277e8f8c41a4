mod common;

use std::collections::HashSet;

use lensarr::cutting::{lens_cutting_with, verify_cut};
use lensarr::dual::{audit_lenses, coplanarity_audit, lens_line_of, lift_circle};
use lensarr::exact::{point_on_circle, Point};
use lensarr::family::{select_family, select_family_with, SelectOptions};
use lensarr::generators::pencil_bundle_construction;
use lensarr::incidence::{count_incidences, lens_circle_incidences, szekely_stats};
use lensarr::io::{parse_scene, serialize_scene};
use lensarr::pencil::{brute_force_lenses, enumerate_lenses, enumerate_lenses_with};
use lensarr::slope::{gamma_point, order_reversal_check};
use lensarr::{Error, Exec, SelectMode};

#[test]
fn enumeration_matches_oracle_on_corpus() {
    for (name, scene) in common::corpus() {
        let fast = enumerate_lenses(&scene);
        assert_eq!(fast, brute_force_lenses(&scene).unwrap(), "{name}");
        for lens in &fast {
            for c in 0..scene.len() {
                let on = point_on_circle(lens.p(), scene.circle(c))
                    && point_on_circle(lens.q(), scene.circle(c));
                assert_eq!(on, lens.contains_circle(c), "{name}");
            }
        }
    }
}

#[test]
fn strategies_agree_on_corpus() {
    for (name, scene) in common::corpus() {
        let a = enumerate_lenses_with(&scene, Exec::Sequential);
        assert_eq!(a, enumerate_lenses_with(&scene, Exec::Parallel), "{name}");
        let seq = SelectOptions {
            exec: Exec::Sequential,
            ..SelectOptions::default()
        };
        let par = SelectOptions {
            exec: Exec::Parallel,
            ..SelectOptions::default()
        };
        let fs = select_family_with(&scene, &a, SelectMode::Greedy, seq).unwrap();
        let fp = select_family_with(&scene, &a, SelectMode::Greedy, par).unwrap();
        assert_eq!(fs.members(), fp.members(), "{name}");
        let cs = lens_cutting_with(&scene, 2, Exec::Sequential).unwrap();
        let cp = lens_cutting_with(&scene, 2, Exec::Parallel).unwrap();
        assert_eq!(cs.cut_count, cp.cut_count, "{name}");
    }
}

#[test]
fn lens_lines_carry_exactly_their_circles() {
    for (name, scene) in common::corpus() {
        let lenses = enumerate_lenses(&scene);
        let mut seen = HashSet::new();
        for lens in &lenses {
            let line = lens_line_of(lens).unwrap();
            assert!(line.is_rational(), "{name}");
            for (c, circle) in scene.circles().iter().enumerate() {
                assert_eq!(
                    line.contains(&lift_circle(circle)),
                    lens.contains_circle(c),
                    "{name}"
                );
            }
            assert!(seen.insert(line.to_string()), "{name}: repeated line");
        }
    }
}

#[test]
fn families_are_certified_and_audit_clean() {
    for (name, scene) in common::corpus() {
        let lenses = enumerate_lenses(&scene);
        let fam = select_family(&scene, &lenses, SelectMode::Greedy).unwrap();
        assert!(fam.is_certified(), "{name}");
        assert_eq!(lens_circle_incidences(&fam), fam.total_degree());
        let report = coplanarity_audit(&scene, &fam);
        assert!(report.is_clean(), "{name}\n{report}");
        assert_eq!(report.skipped_lines, 0);
    }
}

#[test]
fn exact_family_never_smaller_than_greedy() {
    for (name, scene) in common::corpus() {
        let lenses = enumerate_lenses(&scene);
        if lenses.len() > 30 {
            continue;
        }
        let g = select_family(&scene, &lenses, SelectMode::Greedy).unwrap();
        let e = select_family(&scene, &lenses, SelectMode::Exact).unwrap();
        assert!(e.is_certified());
        assert!(e.len() >= g.len(), "{name}");
    }
}

#[test]
fn engineered_concurrent_chords_are_flagged() {
    let w = Point::new(lensarr::exact::ratio(1, 5), lensarr::exact::ratio(1, 7));
    let (scene, _) = lensarr::generators::concurrent_chords(4, &w).unwrap();
    let hub: Vec<_> = enumerate_lenses(&scene)
        .into_iter()
        .filter(|l| l.contains_circle(0))
        .collect();
    assert_eq!(hub.len(), 4);
    let report = audit_lenses(&scene, &hub, Exec::default());
    assert_eq!(report.triples_tested, 4);
    assert_eq!(report.coplanar_triples.len(), 4);
    assert!(!report.is_clean());
    let fam = select_family(&scene, &hub, SelectMode::Exact).unwrap();
    assert_eq!(
        fam.len(),
        1,
        "chords through one interior point pairwise overlap"
    );
}

#[test]
fn order_reversal_is_explained_by_the_pole() {
    let mut literal = 0;
    let mut total = 0;
    for (name, scene) in common::corpus() {
        for lens in enumerate_lenses(&scene) {
            match order_reversal_check(&scene, &lens) {
                Ok(r) => {
                    total += 1;
                    literal += r.reversed as usize;
                    assert!(r.cyclically_reversed, "{name}");
                    assert_eq!(r.reversed, !r.straddles_pole, "{name}");
                }
                Err(e) => assert!(matches!(e, Error::Inconclusive(_)), "{name}: {e}"),
            }
        }
        if name.starts_with("bundle") || name == "canonical-pencil" {
            for lens in enumerate_lenses(&scene) {
                assert!(
                    order_reversal_check(&scene, &lens).unwrap().reversed,
                    "{name}"
                );
            }
        }
    }
    assert!(total > 100 && literal > 0);
}

#[test]
fn gamma_points_satisfy_both_equations() {
    for (_, scene) in common::corpus() {
        for lens in enumerate_lenses(&scene) {
            for &c in lens.circles() {
                for p in [lens.p(), lens.q()] {
                    if let Ok(g) = gamma_point(scene.circle(c), p) {
                        let (a, b) = g.residuals(scene.circle(c));
                        assert!(a.is_zero() && b.is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn bundle_pipeline() {
    for (n, k) in [(6, 2), (12, 3), (20, 4), (25, 5), (18, 6)] {
        let (scene, exp) = pencil_bundle_construction(n, k).unwrap();
        let lenses = enumerate_lenses(&scene);
        assert_eq!(lenses.len(), n / k);
        let fam = select_family(&scene, &lenses, SelectMode::Exact).unwrap();
        assert_eq!(fam.len(), exp.size);
        assert!(fam.members().iter().all(|l| l.degree() == exp.degree));
        assert_eq!(fam.total_degree(), exp.total_degree);
    }
}

#[test]
fn szekely_invariants_on_corpus() {
    for (name, scene) in common::corpus() {
        let mut pts: Vec<Point> = enumerate_lenses(&scene)
            .iter()
            .flat_map(|l| [l.p().to_rational(), l.q().to_rational()])
            .flatten()
            .collect();
        pts.extend(scene.circles().iter().map(|c| c.center()));
        let s = szekely_stats(&pts, &scene, 2).unwrap();
        assert_eq!(
            s.incidences,
            s.neighborhood_sizes.iter().sum::<usize>(),
            "{name}"
        );
        let mut dedup = pts.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(s.incidences, count_incidences(&dedup, &scene), "{name}");
        let expected_edges: usize = s.neighborhood_sizes.iter().filter(|&&d| d >= 2).sum();
        assert_eq!(s.edges, expected_edges, "{name}");
        assert_eq!(s.g0 + s.g1, s.edges);
        assert!(s.crossings <= s.n * s.n.saturating_sub(1), "{name}");
    }
}

#[test]
fn cutting_leaves_no_rich_pair() {
    for (name, scene) in common::corpus().into_iter().step_by(3) {
        for k in 2..=4 {
            let res = lens_cutting_with(&scene, k, Exec::default()).unwrap();
            assert!(
                verify_cut(&scene, &res, Exec::default()).is_empty(),
                "{name} k={k}"
            );
            assert!(res.envelope_ratio(scene.len()).is_finite());
        }
    }
}

#[test]
fn corpus_round_trips_through_text() {
    for (name, scene) in common::corpus() {
        let text = serialize_scene(&scene);
        let back = parse_scene(&text).unwrap();
        assert_eq!(back, scene, "{name}");
        assert_eq!(serialize_scene(&back), text);
    }
}
