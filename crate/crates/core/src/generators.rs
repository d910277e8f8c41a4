//! Deterministic scene construction.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{intersection_points, rat, ratio, Circle, Point, Rational};
use crate::scene::Scene;

/// Denominator of the seeded perturbations.
const PERTURB_DEN: i64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Disjoint pencils of `k` circles each.
    Bundle,
    UniformRandom,
    UnitCirclesOnGrid,
    /// Random pencils of `k` circles with (usually irrational) base points.
    RandomPencils,
    /// A unit hub circle with `n − 1` short chords and one small circle per chord.
    ChordFan,
}

impl Model {
    pub const ALL: [Model; 5] = [
        Model::Bundle,
        Model::UniformRandom,
        Model::UnitCirclesOnGrid,
        Model::RandomPencils,
        Model::ChordFan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::Bundle => "bundle",
            Model::UniformRandom => "uniform-random",
            Model::UnitCirclesOnGrid => "unit-circles-on-grid",
            Model::RandomPencils => "random-pencils",
            Model::ChordFan => "chord-fan",
        }
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown model {s:?}")))
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub model: Model,
    pub n: usize,
    /// Pencil size for `bundle` and `random-pencils`.
    pub k: usize,
    pub seed: u64,
    pub spread: Rational,
}

impl GeneratorSpec {
    pub fn new(model: Model, n: usize, k: usize, seed: u64) -> Self {
        GeneratorSpec {
            model,
            n,
            k,
            seed,
            spread: Rational::one(),
        }
    }
}

/// What the full pipeline should find on a bundle scene.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpectedFamily {
    pub size: usize,
    pub degree: usize,
    pub total_degree: usize,
}

/// `n/k` pencils; pencil `i` passes through `(4i, ±1)`, its circles are
/// centered at `(4i + a, 0)` with `r2 = a² + 1` for `k` offsets
/// `a = (2j − k + 1)/(2k)` strictly inside `(−1/2, 1/2)`.
pub fn pencil_bundle_construction(n: usize, k: usize) -> Result<(Scene, ExpectedFamily)> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("bundle needs k >= 2, got {k}")));
    }
    if n == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidInput(format!("k={k} does not divide n={n}")));
    }
    let k_i = k as i64;
    let mut circles = Vec::with_capacity(n);
    for i in 0..(n / k) as i64 {
        for j in 0..k_i {
            let a = ratio(2 * j - (k_i - 1), 2 * k_i);
            let cx = rat(4 * i) + &a;
            circles.push(Circle::new(cx, rat(0), &a * &a + rat(1))?);
        }
    }
    let expected = ExpectedFamily {
        size: n / k,
        degree: k,
        total_degree: n,
    };
    Ok((Scene::from_circles(circles)?, expected))
}

fn perturb(rng: &mut ChaCha8Rng) -> Rational {
    ratio(
        rng.random_range(-PERTURB_DEN / 2..=PERTURB_DEN / 2),
        PERTURB_DEN,
    )
}

/// Rational point on the unit circle for parameter `t` (`t = tan(θ/2)`).
pub fn unit_circle_point(t: &Rational) -> Point {
    let t2 = t * t;
    let den = &t2 + rat(1);
    Point::new((rat(1) - &t2) / &den, (rat(2) * t) / &den)
}

pub fn random_scene(spec: &GeneratorSpec) -> Result<Scene> {
    if spec.n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if !spec.spread.is_positive() {
        return Err(Error::InvalidInput("spread must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.model {
        Model::Bundle => pencil_bundle_construction(spec.n, spec.k).map(|(s, _)| s),
        Model::UniformRandom => uniform_random(spec, &mut rng),
        Model::UnitCirclesOnGrid => Ok(unit_grid(spec)),
        Model::RandomPencils => random_pencils(spec, &mut rng),
        Model::ChordFan => chord_fan(spec, &mut rng),
    }
}

fn uniform_random(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Scene> {
    let side = ((spec.n as f64).sqrt().ceil() as i64).max(1);
    let s = &spec.spread;
    let mut circles: Vec<Circle> = Vec::with_capacity(spec.n);
    while circles.len() < spec.n {
        let cx = (rat(rng.random_range(0..=side)) + perturb(rng)) * s;
        let cy = (rat(rng.random_range(0..=side)) + perturb(rng)) * s;
        let r = rat(rng.random_range(1..=2)) + perturb(rng).abs();
        let c = Circle::new(cx, cy, &r * &r * s * s)?;
        if !circles.contains(&c) {
            circles.push(c);
        }
    }
    Scene::from_circles(circles)
}

fn unit_grid(spec: &GeneratorSpec) -> Scene {
    let w = ((spec.n as f64).sqrt().ceil() as usize).max(1);
    let circles = (0..spec.n)
        .map(|i| {
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            Circle::new(rat(x) * &spec.spread, rat(y) * &spec.spread, rat(1)).expect("unit radius")
        })
        .collect();
    Scene::from_circles(circles).expect("distinct grid points")
}

/// Pencils spanned by two random intersecting circles; members are the
/// affine combinations `(1−t)·f₁ + t·f₂` of their implicit equations.
fn random_pencils(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Scene> {
    let k = spec.k.max(2);
    let s = &spec.spread;
    let mut circles: Vec<Circle> = Vec::with_capacity(spec.n);
    let mut slot = 0i64;
    while circles.len() < spec.n {
        let ox = rat(6 * (slot % 8));
        let oy = rat(6 * (slot / 8));
        slot += 1;
        let c1 = Circle::new(
            (&ox + perturb(rng)) * s,
            (&oy + perturb(rng)) * s,
            (rat(1) + perturb(rng).abs()) * s * s,
        )?;
        let c2 = Circle::new(
            (&ox + rat(1) + perturb(rng)) * s,
            (&oy + perturb(rng)) * s,
            (rat(1) + perturb(rng).abs()) * s * s,
        )?;
        if intersection_points(&c1, &c2)?.len() != 2 {
            continue;
        }
        let mut ts: Vec<Rational> = vec![rat(0), rat(1)];
        while ts.len() < k {
            let t = ratio(
                rng.random_range(-3 * PERTURB_DEN..=4 * PERTURB_DEN),
                PERTURB_DEN,
            );
            if !ts.contains(&t) {
                ts.push(t);
            }
        }
        for t in ts {
            if circles.len() == spec.n {
                break;
            }
            let u = rat(1) - &t;
            let cx = &u * c1.cx() + &t * c2.cx();
            let cy = &u * c1.cy() + &t * c2.cy();
            // constant term of x² + y² − 2cx·x − 2cy·y + (|c|² − r2)
            let f = |c: &Circle| c.cx() * c.cx() + c.cy() * c.cy() - c.r2();
            let konst = &u * f(&c1) + &t * f(&c2);
            let r2 = &cx * &cx + &cy * &cy - konst;
            circles.push(Circle::new(cx, cy, r2)?);
        }
    }
    Scene::from_circles(circles)
}

/// Hub circle 0 is the unit circle. Chord `i` joins two rational points in
/// its own slot of the first quadrant; circle `i + 1` has that chord as a
/// diameter, so the only lenses are the `n − 1` hub lenses, pairwise
/// non-overlapping.
fn chord_fan(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Scene> {
    let m = spec.n.saturating_sub(1) as i64;
    let den = 4 * (m + 1) * PERTURB_DEN;
    let mut circles = vec![Circle::int(0, 0, 1)];
    for i in 0..m {
        let jitter = rng.random_range(0..PERTURB_DEN / 2);
        let base = (4 * i + 1) * PERTURB_DEN + jitter;
        let p = unit_circle_point(&ratio(base, den));
        let q = unit_circle_point(&ratio(base + PERTURB_DEN, den));
        circles.push(diameter_circle(&p, &q)?);
    }
    Scene::from_circles(circles)
}

fn diameter_circle(p: &Point, q: &Point) -> Result<Circle> {
    let two = rat(2);
    let cx = (&p.x + &q.x) / &two;
    let cy = (&p.y + &q.y) / &two;
    let dx = &p.x - &q.x;
    let dy = &p.y - &q.y;
    Circle::new(cx, cy, (&dx * &dx + &dy * &dy) / rat(4))
}

/// Unit circle plus `m` circles on chords that all pass through the interior
/// point `w`; the hub lenses of this scene overlap pairwise and their lifted
/// lines share a plane. Returns the scene and the rational chord endpoints.
pub fn concurrent_chords(m: usize, w: &Point) -> Result<(Scene, Vec<(Point, Point)>)> {
    if &w.x * &w.x + &w.y * &w.y >= rat(1) {
        return Err(Error::InvalidInput(
            "w must lie inside the unit circle".into(),
        ));
    }
    let mut circles = vec![Circle::int(0, 0, 1)];
    let mut chords = Vec::new();
    let mut step = 1i64;
    while chords.len() < m {
        let p = unit_circle_point(&ratio(step, 2 * m as i64 + 3));
        step += 1;
        // second intersection of the line p + s(w − p) with the unit circle
        let vx = &w.x - &p.x;
        let vy = &w.y - &p.y;
        let s = -rat(2) * (&p.x * &vx + &p.y * &vy) / (&vx * &vx + &vy * &vy);
        let q = Point::new(&p.x + &s * &vx, &p.y + &s * &vy);
        let c = diameter_circle(&p, &q)?;
        if (c.cx().is_zero() && c.cy().is_zero()) || circles.contains(&c) {
            continue;
        }
        circles.push(c);
        chords.push((p, q));
    }
    Ok((Scene::from_circles(circles)?, chords))
}
