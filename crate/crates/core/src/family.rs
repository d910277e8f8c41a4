//! Overlap testing and selection of pairwise non-overlapping lens families.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::overlap_on_circle;
use crate::par::Exec;
use crate::pencil::Lens;
use crate::scene::Scene;

/// Default lens limit for exact selection.
pub const EXACT_CAP: usize = 30;
/// Hard limit imposed by the bitset representation.
pub const EXACT_HARD_CAP: usize = 128;

/// True iff some circle shared by both lenses carries overlapping lens arcs.
pub fn lenses_overlap(scene: &Scene, a: &Lens, b: &Lens) -> bool {
    let (ca, cb) = (a.circles(), b.circles());
    let (mut i, mut j) = (0, 0);
    while i < ca.len() && j < cb.len() {
        match ca[i].cmp(&cb[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if overlap_on_circle(scene.circle(ca[i]), a.base(), b.base()) {
                    return true;
                }
                i += 1;
                j += 1;
            }
        }
    }
    false
}

/// Adjacency rows of the overlap graph, one bitset per lens.
pub fn overlap_graph(scene: &Scene, lenses: &[Lens], exec: Exec) -> Vec<Vec<bool>> {
    let n = lenses.len();
    let flags = exec.map_pairs(n, |i, j| lenses_overlap(scene, &lenses[i], &lenses[j]));
    let mut rows = vec![vec![false; n]; n];
    let pairs = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
    for ((i, j), f) in pairs.zip(flags) {
        rows[i][j] = f;
        rows[j][i] = f;
    }
    rows
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectMode {
    Greedy,
    Exact,
}

impl FromStr for SelectMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(SelectMode::Greedy),
            "exact" => Ok(SelectMode::Exact),
            other => Err(Error::InvalidInput(format!("unknown mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for SelectMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SelectMode::Greedy => "greedy",
            SelectMode::Exact => "exact",
        })
    }
}

/// A set of lenses with a pairwise non-overlap certificate.
#[derive(Clone, Debug)]
pub struct LensFamily {
    members: Vec<Lens>,
    certified: bool,
    total_degree: usize,
}

impl LensFamily {
    /// Checks every member pair and records the outcome.
    pub fn certify(scene: &Scene, members: Vec<Lens>, exec: Exec) -> Self {
        let clashes = exec.map_pairs(members.len(), |i, j| {
            lenses_overlap(scene, &members[i], &members[j])
        });
        let certified = !clashes.into_iter().any(|c| c);
        let total_degree = members.iter().map(Lens::degree).sum();
        LensFamily {
            members,
            certified,
            total_degree,
        }
    }

    pub fn members(&self) -> &[Lens] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Sum of member degrees, i.e. the number of (circle, lens) participations.
    pub fn total_degree(&self) -> usize {
        self.total_degree
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SelectOptions {
    pub exact_cap: usize,
    pub exec: Exec,
}

impl Default for SelectOptions {
    fn default() -> Self {
        SelectOptions {
            exact_cap: EXACT_CAP,
            exec: Exec::default(),
        }
    }
}

pub fn select_family(scene: &Scene, lenses: &[Lens], mode: SelectMode) -> Result<LensFamily> {
    select_family_with(scene, lenses, mode, SelectOptions::default())
}

pub fn select_family_with(
    scene: &Scene,
    lenses: &[Lens],
    mode: SelectMode,
    opts: SelectOptions,
) -> Result<LensFamily> {
    let picked = match mode {
        SelectMode::Greedy => greedy_indices(scene, lenses),
        SelectMode::Exact => {
            let cap = opts.exact_cap.min(EXACT_HARD_CAP);
            if lenses.len() > cap {
                return Err(Error::CapExceeded {
                    cap,
                    len: lenses.len(),
                });
            }
            let rows = overlap_graph(scene, lenses, opts.exec);
            let adj: Vec<u128> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(_, &f)| f)
                        .fold(0u128, |m, (j, _)| m | (1 << j))
                })
                .collect();
            let set = max_independent_set(&adj);
            (0..lenses.len()).filter(|&i| set >> i & 1 == 1).collect()
        }
    };
    let members = picked.into_iter().map(|i| lenses[i].clone()).collect();
    Ok(LensFamily::certify(scene, members, opts.exec))
}

/// Degree-descending scan with canonical-order tie-break; returns indices in
/// input order.
fn greedy_indices(scene: &Scene, lenses: &[Lens]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..lenses.len()).collect();
    order.sort_by(|&a, &b| {
        lenses[b]
            .degree()
            .cmp(&lenses[a].degree())
            .then_with(|| lenses[a].cmp_base(&lenses[b]))
    });
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if kept
            .iter()
            .all(|&j| !lenses_overlap(scene, &lenses[i], &lenses[j]))
        {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept
}

/// Maximum independent set by branch and bound over bitset adjacency rows
/// (at most 128 vertices).
pub fn max_independent_set(adj: &[u128]) -> u128 {
    assert!(adj.len() <= EXACT_HARD_CAP);
    let all = if adj.len() == 128 {
        u128::MAX
    } else {
        (1u128 << adj.len()) - 1
    };
    let mut best = 0u128;
    branch(adj, all, 0, &mut best);
    best
}

fn branch(adj: &[u128], cand: u128, cur: u128, best: &mut u128) {
    if cand == 0 {
        if cur.count_ones() > best.count_ones() {
            *best = cur;
        }
        return;
    }
    if cur.count_ones() + cand.count_ones() <= best.count_ones() {
        return;
    }
    let v = cand.trailing_zeros() as usize;
    let bit = 1u128 << v;
    branch(adj, cand & !adj[v] & !bit, cur | bit, best);
    // Excluding an isolated candidate can never help.
    if adj[v] & cand != 0 {
        branch(adj, cand & !bit, cur, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Circle;
    use crate::pencil::enumerate_lenses;

    fn brute_mis(adj: &[u128]) -> u32 {
        let n = adj.len();
        (0u32..(1 << n))
            .filter(|&s| (0..n).all(|i| s >> i & 1 == 0 || (adj[i] as u32) & s == 0))
            .map(u32::count_ones)
            .max()
            .unwrap_or(0)
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<u128> {
        let mut adj = vec![0u128; n];
        for &(a, b) in edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    #[test]
    fn path_graph() {
        let adj = graph(3, &[(0, 1), (1, 2)]);
        let set = max_independent_set(&adj);
        assert_eq!(set, 0b101);
        assert_eq!(set.count_ones(), brute_mis(&adj));
    }

    #[test]
    fn mis_matches_brute_force_on_small_graphs() {
        // deterministic pseudo-random graphs
        let mut state = 0x9e3779b97f4a7c15u64;
        for n in 1..=12 {
            for _ in 0..20 {
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        state ^= state << 13;
                        state ^= state >> 7;
                        state ^= state << 17;
                        if state.is_multiple_of(3) {
                            edges.push((i, j));
                        }
                    }
                }
                let adj = graph(n, &edges);
                assert_eq!(max_independent_set(&adj).count_ones(), brute_mis(&adj));
            }
        }
    }

    #[test]
    fn single_lens_family() {
        let scene = Scene::from_circles(vec![Circle::int(0, 0, 1), Circle::int(1, 0, 1)]).unwrap();
        let lenses = enumerate_lenses(&scene);
        for mode in [SelectMode::Greedy, SelectMode::Exact] {
            let fam = select_family(&scene, &lenses, mode).unwrap();
            assert_eq!(fam.len(), 1);
            assert!(fam.is_certified());
            assert_eq!(fam.total_degree(), 2);
        }
    }

    #[test]
    fn disjoint_circle_sets_never_overlap() {
        let scene = Scene::from_circles(vec![
            Circle::int(0, 0, 1),
            Circle::int(1, 0, 1),
            Circle::int(10, 0, 1),
            Circle::int(11, 0, 1),
        ])
        .unwrap();
        let lenses = enumerate_lenses(&scene);
        assert_eq!(lenses.len(), 2);
        assert!(!lenses_overlap(&scene, &lenses[0], &lenses[1]));
        assert!(lenses_overlap(&scene, &lenses[0], &lenses[0]));
    }

    #[test]
    fn exact_cap() {
        let scene = Scene::default();
        let lenses: Vec<Lens> = Vec::new();
        let opts = SelectOptions {
            exact_cap: 0,
            exec: Exec::Sequential,
        };
        assert!(select_family_with(&scene, &lenses, SelectMode::Exact, opts).is_ok());
        let circles = (0..10).map(|i| Circle::int(i, 0, 1)).collect();
        let scene = Scene::from_circles(circles).unwrap();
        let lenses = enumerate_lenses(&scene);
        let opts = SelectOptions {
            exact_cap: 3,
            exec: Exec::Sequential,
        };
        assert!(matches!(
            select_family_with(&scene, &lenses, SelectMode::Exact, opts),
            Err(Error::CapExceeded { cap: 3, .. })
        ));
    }
}
