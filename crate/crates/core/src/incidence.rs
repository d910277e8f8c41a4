//! Point-circle incidences and the consecutive-point multigraph drawn on the
//! circles.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::exact::{intersection_points, Circle, Dir, Point, QuadPoint};
use crate::family::{select_family_with, LensFamily, SelectMode, SelectOptions};
use crate::par::Exec;
use crate::pencil::{enumerate_lenses_with, Lens};
use crate::scene::Scene;

fn on_circle(p: &Point, c: &Circle) -> bool {
    let dx = &p.x - c.cx();
    let dy = &p.y - c.cy();
    &dx * &dx + &dy * &dy == *c.r2()
}

/// Number of pairs `(p, c)` with `p` on `c`.
pub fn count_incidences(points: &[Point], scene: &Scene) -> usize {
    scene
        .circles()
        .iter()
        .map(|c| points.iter().filter(|p| on_circle(p, c)).count())
        .sum()
}

/// One edge of the drawing: the counter-clockwise arc of `circle` from point
/// `from` to point `to` (indices into the deduplicated point list).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub circle: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SzekelyStats {
    /// Distinct points.
    pub m: usize,
    pub n: usize,
    pub incidences: usize,
    /// `|N_c|` per circle.
    pub neighborhood_sizes: Vec<usize>,
    pub edges: usize,
    pub g0: usize,
    pub g1: usize,
    /// Edge count per unordered point pair.
    pub multiplicity: BTreeMap<(usize, usize), usize>,
    pub max_multiplicity: usize,
    pub crossings: usize,
    /// Size of the family whose lens arcs make up `G1`.
    pub family_size: usize,
}

impl SzekelyStats {
    pub fn multiplicity_of(&self, a: usize, b: usize) -> usize {
        self.multiplicity
            .get(&(a.min(b), a.max(b)))
            .copied()
            .unwrap_or(0)
    }
}

/// Points of `pts` on `c`, sorted counter-clockwise from the positive x-axis.
fn sorted_on_circle(pts: &[Point], c: &Circle) -> Vec<(usize, Dir)> {
    let mut on: Vec<(usize, Dir)> = pts
        .iter()
        .enumerate()
        .filter(|(_, p)| on_circle(p, c))
        .map(|(i, p)| (i, c.offset(&QuadPoint::from(p))))
        .collect();
    on.sort_by(|a, b| a.1.cmp_angle(&b.1));
    on
}

pub fn szekely_stats(points: &[Point], scene: &Scene, k: usize) -> Result<SzekelyStats> {
    szekely_stats_with(points, scene, k, Exec::default())
}

/// Builds the cyclic consecutive-point edges on each circle (for two points
/// both arcs are kept), splits them into `G1`, the lens arcs of a greedy
/// non-overlapping family of `k`-rich lenses spanned by the points, and
/// `G0`, and counts crossings between edges of different circles away from
/// the points.
pub fn szekely_stats_with(
    points: &[Point],
    scene: &Scene,
    k: usize,
    exec: Exec,
) -> Result<SzekelyStats> {
    if k < 2 {
        return Err(Error::InvalidRichness(k));
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let index: HashMap<&Point, usize> = pts.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let per_circle: Vec<Vec<(usize, Dir)>> =
        exec.map_slice(scene.circles(), |c| sorted_on_circle(&pts, c));
    let neighborhood_sizes: Vec<usize> = per_circle.iter().map(Vec::len).collect();
    let incidences = neighborhood_sizes.iter().sum();

    let mut edges = Vec::new();
    for (c, on) in per_circle.iter().enumerate() {
        if on.len() < 2 {
            continue;
        }
        for i in 0..on.len() {
            let (a, b) = (i, (i + 1) % on.len());
            edges.push((
                Edge {
                    circle: c,
                    from: on[a].0,
                    to: on[b].0,
                },
                on[a].1.clone(),
                on[b].1.clone(),
            ));
        }
    }

    let mut multiplicity: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (e, _, _) in &edges {
        *multiplicity
            .entry((e.from.min(e.to), e.from.max(e.to)))
            .or_default() += 1;
    }
    let max_multiplicity = multiplicity.values().copied().max().unwrap_or(0);

    // k-rich lenses whose base points both belong to the point set
    let spanned: Vec<(Lens, (usize, usize))> = enumerate_lenses_with(scene, exec)
        .into_iter()
        .filter(|l| l.degree() >= k)
        .filter_map(|l| {
            let p = index.get(&l.p().to_rational()?)?;
            let q = index.get(&l.q().to_rational()?)?;
            let key = (*p.min(q), *p.max(q));
            Some((l, key))
        })
        .collect();
    let lenses: Vec<Lens> = spanned.iter().map(|(l, _)| l.clone()).collect();
    let family: LensFamily = select_family_with(
        scene,
        &lenses,
        SelectMode::Greedy,
        SelectOptions {
            exec,
            ..SelectOptions::default()
        },
    )?;
    let mut lens_arcs: HashSet<(usize, (usize, usize))> = HashSet::new();
    for l in family.members() {
        let key = spanned
            .iter()
            .find(|(s, _)| s == l)
            .map(|(_, key)| *key)
            .expect("family drawn from spanned lenses");
        for &c in l.circles() {
            lens_arcs.insert((c, key));
        }
    }
    // an edge is a lens arc when it joins the base pair along the shorter
    // arc; for antipodal pairs the arc leaving the smaller index is used
    let g1 = edges
        .iter()
        .filter(|(e, da, db)| {
            let key = (e.from.min(e.to), e.from.max(e.to));
            if !lens_arcs.contains(&(e.circle, key)) {
                return false;
            }
            match da.cross_sign(db) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => e.from < e.to,
            }
        })
        .count();

    let crossings = exec
        .map_pairs(scene.len(), |i, j| {
            if per_circle[i].len() < 2 || per_circle[j].len() < 2 {
                return 0;
            }
            let xs = intersection_points(scene.circle(i), scene.circle(j)).unwrap_or_default();
            if xs.len() != 2 {
                return 0;
            }
            xs.iter()
                .filter(|x| x.to_rational().is_none_or(|p| !index.contains_key(&p)))
                .count()
        })
        .into_iter()
        .sum();

    Ok(SzekelyStats {
        m: pts.len(),
        n: scene.len(),
        incidences,
        neighborhood_sizes,
        edges: edges.len(),
        g0: edges.len() - g1,
        g1,
        multiplicity,
        max_multiplicity,
        crossings,
        family_size: family.len(),
    })
}

/// Lens-circle incidences of a family: every participation counts once.
pub fn lens_circle_incidences(family: &LensFamily) -> usize {
    family.members().iter().map(Lens::degree).sum()
}
