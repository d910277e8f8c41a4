//! Cutting circles into arcs so that no pair of points lies on `k` arcs.
//!
//! Only base points of `k`-rich lenses matter, so each circle keeps the
//! angularly sorted list of those points ("vertices"). A cut sits in the open
//! gap between two consecutive vertices, at the midpoint of that gap; it is
//! recorded by the index of the vertex it follows and never coincides with a
//! vertex. Two vertices stay on a common arc unless both open arcs between
//! them carry a cut.

use std::collections::BTreeSet;

use crate::bounds::{bound_eval, BoundKind, BoundParams};
use crate::error::{Error, Result};
use crate::exact::{ccw_contains, Dir, QuadPoint};
use crate::par::Exec;
use crate::pencil::{enumerate_lenses_with, rich_lenses, Lens};
use crate::scene::Scene;

/// One arc of a cut circle.
#[derive(Clone, Debug)]
pub struct CutArc {
    pub circle: usize,
    /// First and last vertex on the arc in counter-clockwise order; `None`
    /// when the circle has at most one cut and therefore stays connected
    /// through all of its vertices.
    pub span: Option<(QuadPoint, QuadPoint)>,
}

#[derive(Clone, Debug)]
pub struct CutResult {
    pub arcs: Vec<CutArc>,
    pub cut_count: usize,
    pub k: usize,
    /// The `k`-rich lenses of the uncut arrangement.
    pub rich: Vec<Lens>,
}

impl CutResult {
    /// Cut count divided by the degree bound at unit constants.
    pub fn envelope_ratio(&self, n: usize) -> f64 {
        let bound = bound_eval(
            BoundKind::Thm1Degree,
            &BoundParams::new(n as f64, 0.0, self.k as f64),
        )
        .unwrap_or(f64::NAN);
        self.cut_count as f64 / bound
    }
}

struct CircleCuts {
    verts: Vec<(QuadPoint, Dir)>,
    cuts: BTreeSet<usize>,
}

impl CircleCuts {
    fn index_of(&self, d: &Dir) -> usize {
        self.verts
            .binary_search_by(|(_, v)| v.cmp_angle(d))
            .expect("vertex registered on circle")
    }

    /// Any cut in gaps `from, from+1, …, to−1` (cyclically)?
    fn cut_between(&self, from: usize, to: usize) -> bool {
        if from < to {
            self.cuts.range(from..to).next().is_some()
        } else {
            self.cuts.range(from..).next().is_some() || self.cuts.range(..to).next().is_some()
        }
    }

    fn connected(&self, a: usize, b: usize) -> bool {
        !(self.cut_between(a, b) && self.cut_between(b, a))
    }
}

pub fn lens_cutting(scene: &Scene, k: usize) -> Result<CutResult> {
    lens_cutting_with(scene, k, Exec::default())
}

pub fn lens_cutting_with(scene: &Scene, k: usize, exec: Exec) -> Result<CutResult> {
    if k < 2 {
        return Err(Error::InvalidRichness(k));
    }
    let rich = rich_lenses(&enumerate_lenses_with(scene, exec), k)?;

    let mut per_circle: Vec<Vec<QuadPoint>> = vec![Vec::new(); scene.len()];
    for lens in &rich {
        for &c in lens.circles() {
            per_circle[c].push(lens.p().clone());
            per_circle[c].push(lens.q().clone());
        }
    }
    let mut state: Vec<CircleCuts> = exec.map_range(scene.len(), |c| {
        let circle = scene.circle(c);
        let mut verts: Vec<(QuadPoint, Dir)> = per_circle[c]
            .iter()
            .map(|p| (p.clone(), circle.offset(p)))
            .collect();
        verts.sort_by(|a, b| a.1.cmp_angle(&b.1));
        verts.dedup_by(|a, b| a.1.same_direction(&b.1));
        CircleCuts {
            verts,
            cuts: BTreeSet::new(),
        }
    });

    // Vertex indices of each rich lens's base points on each of its circles.
    let positions: Vec<Vec<(usize, usize, usize)>> = exec.map_slice(&rich, |lens| {
        lens.circles()
            .iter()
            .map(|&c| {
                let circle = scene.circle(c);
                let st = &state[c];
                (
                    c,
                    st.index_of(&circle.offset(lens.p())),
                    st.index_of(&circle.offset(lens.q())),
                )
            })
            .collect()
    });

    let mut cut_count = 0;
    loop {
        let mut changed = false;
        for slots in &positions {
            let holding: Vec<&(usize, usize, usize)> = slots
                .iter()
                .filter(|(c, a, b)| state[*c].connected(*a, *b))
                .collect();
            if holding.len() < k {
                continue;
            }
            // keep the first k−1 circles, cut the rest on both sides
            for &&(c, a, b) in &holding[k - 1..] {
                let st = &mut state[c];
                if !st.cut_between(a, b) {
                    st.cuts.insert(a);
                    cut_count += 1;
                }
                if !st.cut_between(b, a) {
                    st.cuts.insert(b);
                    cut_count += 1;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut arcs = Vec::new();
    for (c, st) in state.iter().enumerate() {
        if st.cuts.len() <= 1 {
            arcs.push(CutArc {
                circle: c,
                span: None,
            });
            continue;
        }
        let cuts: Vec<usize> = st.cuts.iter().copied().collect();
        let len = st.verts.len();
        for (i, &g) in cuts.iter().enumerate() {
            let next = cuts[(i + 1) % cuts.len()];
            let first = st.verts[(g + 1) % len].0.clone();
            let last = st.verts[next].0.clone();
            arcs.push(CutArc {
                circle: c,
                span: Some((first, last)),
            });
        }
    }
    Ok(CutResult {
        arcs,
        cut_count,
        k,
        rich,
    })
}

/// A base pair still covered by `k` arcs after cutting.
#[derive(Clone, Debug)]
pub struct CutViolation {
    pub base: (QuadPoint, QuadPoint),
    pub covering_arcs: usize,
}

/// Re-derives, from the arc list alone, how many arcs contain each rich base
/// pair and reports every pair still covered by `k` or more arcs.
pub fn verify_cut(scene: &Scene, result: &CutResult, exec: Exec) -> Vec<CutViolation> {
    let mut by_circle: Vec<Vec<&CutArc>> = vec![Vec::new(); scene.len()];
    for arc in &result.arcs {
        by_circle[arc.circle].push(arc);
    }
    exec.map_slice(&result.rich, |lens| {
        let covering = lens
            .circles()
            .iter()
            .filter(|&&c| {
                let circle = scene.circle(c);
                let (dp, dq) = (circle.offset(lens.p()), circle.offset(lens.q()));
                by_circle[c].iter().any(|arc| match &arc.span {
                    None => true,
                    Some((first, last)) => {
                        let (s, e) = (circle.offset(first), circle.offset(last));
                        ccw_contains(&s, &e, &dp) && ccw_contains(&s, &e, &dq)
                    }
                })
            })
            .count();
        (covering >= result.k).then(|| CutViolation {
            base: (lens.p().clone(), lens.q().clone()),
            covering_arcs: covering,
        })
    })
    .into_iter()
    .flatten()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Circle;

    fn pencil3() -> Scene {
        Scene::from_circles(vec![
            Circle::int(0, 0, 1),
            Circle::int(1, 0, 2),
            Circle::int(2, 0, 5),
        ])
        .unwrap()
    }

    #[test]
    fn nothing_to_cut() {
        let scene = Scene::from_circles(vec![Circle::int(0, 0, 1), Circle::int(1, 0, 1)]).unwrap();
        let res = lens_cutting(&scene, 3).unwrap();
        assert_eq!(res.cut_count, 0);
        assert_eq!(res.arcs.len(), 2);
        assert!(verify_cut(&scene, &res, Exec::Sequential).is_empty());
    }

    #[test]
    fn single_pencil() {
        let scene = pencil3();
        let res = lens_cutting(&scene, 3).unwrap();
        assert!(res.cut_count >= 1);
        assert!(verify_cut(&scene, &res, Exec::Sequential).is_empty());
        // k = 2 forces two of the three circles apart
        let res = lens_cutting(&scene, 2).unwrap();
        assert_eq!(res.cut_count, 4);
        assert!(verify_cut(&scene, &res, Exec::Sequential).is_empty());
    }

    #[test]
    fn verifier_flags_uncut_arrangement() {
        let scene = pencil3();
        let mut res = lens_cutting(&scene, 3).unwrap();
        res.arcs = (0..3)
            .map(|c| CutArc {
                circle: c,
                span: None,
            })
            .collect();
        let v = verify_cut(&scene, &res, Exec::Sequential);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].covering_arcs, 3);
    }

    #[test]
    fn invalid_richness() {
        assert_eq!(
            lens_cutting(&pencil3(), 1).unwrap_err(),
            Error::InvalidRichness(1)
        );
    }
}
