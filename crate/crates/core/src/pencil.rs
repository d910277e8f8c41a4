//! Lens enumeration.
//!
//! Circles through a common pair of points form a pencil, and every pair of
//! circles in a pencil has the same radical axis. Enumeration buckets circle
//! pairs by their canonical (integer) radical axis, which needs no radicals,
//! and then joins pairs that actually meet in two points. Within one bucket
//! two-point pairs sharing a circle meet the axis in the same two points, so
//! connected components of that pair graph are exactly the lenses.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::{intersection_points, point_on_circle, radical_axis, Line, QuadPoint};
use crate::par::Exec;
use crate::scene::Scene;

/// Default circle limit for [`brute_force_lenses`].
pub const ORACLE_CAP: usize = 64;

/// Two distinct base points and every circle through both of them.
#[derive(Clone, Debug)]
pub struct Lens {
    base: (QuadPoint, QuadPoint),
    circles: Vec<usize>,
}

impl Lens {
    /// Orders the base pair and sorts the circle ids.
    pub fn new(p: QuadPoint, q: QuadPoint, mut circles: Vec<usize>) -> Self {
        circles.sort_unstable();
        circles.dedup();
        let base = if p <= q { (p, q) } else { (q, p) };
        Lens { base, circles }
    }

    pub fn p(&self) -> &QuadPoint {
        &self.base.0
    }

    pub fn q(&self) -> &QuadPoint {
        &self.base.1
    }

    pub fn base(&self) -> (&QuadPoint, &QuadPoint) {
        (&self.base.0, &self.base.1)
    }

    pub fn circles(&self) -> &[usize] {
        &self.circles
    }

    pub fn degree(&self) -> usize {
        self.circles.len()
    }

    pub fn contains_circle(&self, id: usize) -> bool {
        self.circles.binary_search(&id).is_ok()
    }

    /// Canonical order: lexicographic on the ordered base pair.
    pub fn cmp_base(&self, other: &Lens) -> Ordering {
        self.base
            .0
            .cmp(&other.base.0)
            .then_with(|| self.base.1.cmp(&other.base.1))
    }
}

impl PartialEq for Lens {
    fn eq(&self, other: &Self) -> bool {
        self.circles == other.circles && self.cmp_base(other) == Ordering::Equal
    }
}

impl Eq for Lens {}

struct PairHit {
    axis: Line,
    i: usize,
    j: usize,
    points: (QuadPoint, QuadPoint),
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// All lenses of the arrangement, one per base pair, in canonical order.
pub fn enumerate_lenses(scene: &Scene) -> Vec<Lens> {
    enumerate_lenses_with(scene, Exec::default())
}

pub fn enumerate_lenses_with(scene: &Scene, exec: Exec) -> Vec<Lens> {
    let circles = scene.circles();
    let hits: Vec<PairHit> = exec
        .map_pairs(circles.len(), |i, j| {
            let axis = radical_axis(&circles[i], &circles[j]).ok()?;
            let mut pts = intersection_points(&circles[i], &circles[j]).ok()?;
            if pts.len() != 2 {
                return None;
            }
            let q = pts.pop()?;
            let p = pts.pop()?;
            Some(PairHit {
                axis,
                i,
                j,
                points: (p, q),
            })
        })
        .into_iter()
        .flatten()
        .collect();

    let mut buckets: HashMap<&Line, Vec<usize>> = HashMap::new();
    for (h, hit) in hits.iter().enumerate() {
        buckets.entry(&hit.axis).or_default().push(h);
    }

    let mut parent: Vec<usize> = (0..circles.len()).collect();
    let mut lenses = Vec::new();
    for members in buckets.values() {
        for &h in members {
            let (a, b) = (find(&mut parent, hits[h].i), find(&mut parent, hits[h].j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: HashMap<usize, (usize, Vec<usize>)> = HashMap::new();
        for &h in members {
            let root = find(&mut parent, hits[h].i);
            let entry = groups.entry(root).or_insert_with(|| (h, Vec::new()));
            entry.1.push(hits[h].i);
            entry.1.push(hits[h].j);
        }
        for (first, ids) in groups.into_values() {
            let (p, q) = hits[first].points.clone();
            lenses.push(Lens::new(p, q, ids));
        }
        // reset the touched entries for the next bucket
        for &h in members {
            parent[hits[h].i] = hits[h].i;
            parent[hits[h].j] = hits[h].j;
        }
    }
    lenses.sort_by(Lens::cmp_base);
    lenses
}

/// Keeps lenses of degree at least `k`, preserving order.
pub fn rich_lenses(lenses: &[Lens], k: usize) -> Result<Vec<Lens>> {
    if k < 2 {
        return Err(Error::InvalidRichness(k));
    }
    Ok(lenses.iter().filter(|l| l.degree() >= k).cloned().collect())
}

/// Definition-level enumeration, used as an oracle for [`enumerate_lenses`].
pub fn brute_force_lenses(scene: &Scene) -> Result<Vec<Lens>> {
    brute_force_lenses_capped(scene, ORACLE_CAP)
}

/// Collects every intersection point, deduplicates them by exact equality
/// across fields, tests every point against every circle, and groups point
/// pairs by the circles containing both.
pub fn brute_force_lenses_capped(scene: &Scene, cap: usize) -> Result<Vec<Lens>> {
    let circles = scene.circles();
    if circles.len() > cap {
        return Err(Error::OracleCapExceeded {
            cap,
            len: circles.len(),
        });
    }
    let mut points = Vec::new();
    for i in 0..circles.len() {
        for j in (i + 1)..circles.len() {
            points.extend(intersection_points(&circles[i], &circles[j])?);
        }
    }
    points.sort();
    points.dedup();

    let mut by_pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (c, circle) in circles.iter().enumerate() {
        let on: Vec<usize> = (0..points.len())
            .filter(|&i| point_on_circle(&points[i], circle))
            .collect();
        for (a, &pi) in on.iter().enumerate() {
            for &qi in &on[a + 1..] {
                by_pair.entry((pi, qi)).or_default().push(c);
            }
        }
    }
    let mut lenses: Vec<Lens> = by_pair
        .into_iter()
        .filter(|(_, cs)| cs.len() >= 2)
        .map(|((pi, qi), cs)| Lens::new(points[pi].clone(), points[qi].clone(), cs))
        .collect();
    lenses.sort_by(Lens::cmp_base);
    Ok(lenses)
}
