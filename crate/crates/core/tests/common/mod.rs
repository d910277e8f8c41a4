#![allow(dead_code)]

use lensarr::generators::{pencil_bundle_construction, random_scene, GeneratorSpec, Model};
use lensarr::{Circle, Scene};

/// Largest dyadic-sum to closed-form ratio seen over the full sweep
/// n = 2^10..2^30, 2 <= k <= n^(1/3) is 11.4976 (first reached at
/// n = 2^29, k = 406).
pub const DYADIC_RATIO_CAP: f64 = 12.0;

pub fn canonical_pencil() -> Scene {
    Scene::from_circles(vec![
        Circle::int(0, 0, 1),
        Circle::int(1, 0, 2),
        Circle::int(2, 0, 5),
    ])
    .unwrap()
}

fn spec(model: Model, n: usize, k: usize, seed: u64) -> Scene {
    random_scene(&GeneratorSpec::new(model, n, k, seed)).unwrap()
}

/// The shared test corpus: 54 named scenes, most of them pencil-rich.
pub fn corpus() -> Vec<(String, Scene)> {
    let mut out = vec![("canonical-pencil".to_string(), canonical_pencil())];
    for k in 2..=5 {
        for m in 1..=4 {
            let (s, _) = pencil_bundle_construction(k * m, k).unwrap();
            out.push((format!("bundle-{}-{k}", k * m), s));
        }
    }
    for seed in 0..20 {
        let k = 3 + (seed as usize % 2);
        out.push((
            format!("random-pencils-{seed}"),
            spec(Model::RandomPencils, 12, k, seed),
        ));
    }
    for n in [4, 9, 16, 25] {
        out.push((format!("grid-{n}"), spec(Model::UnitCirclesOnGrid, n, 2, 0)));
    }
    for seed in 0..10 {
        out.push((
            format!("uniform-{seed}"),
            spec(Model::UniformRandom, 15, 2, seed),
        ));
    }
    for n in [4, 8, 12] {
        out.push((
            format!("chord-fan-{n}"),
            spec(Model::ChordFan, n, 2, n as u64),
        ));
    }
    out
}

/// Small scenes (at most 10 circles) for oracle comparisons.
pub fn small_scene(seed: u64) -> Scene {
    let n = 2 + (seed as usize % 9);
    let model = match seed % 4 {
        0 => Model::UniformRandom,
        1 => Model::RandomPencils,
        2 => Model::UnitCirclesOnGrid,
        _ => Model::ChordFan,
    };
    spec(model, n, 3 + (seed as usize % 3), seed)
}
