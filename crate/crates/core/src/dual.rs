//! Lifting circles and points to three dimensions.
//!
//! A circle with center `(x, y)` and squared radius `r2` becomes the point
//! `(x, y, r2 − x² − y²)`; a point `p` becomes the non-vertical plane
//! `z = −2p_x·x − 2p_y·y + |p|²`. A circle contains `p` exactly when its lift
//! lies on the plane of `p`, so the circles of a lens with base `p, q` lift
//! onto the line where the two planes meet.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{Circle, Point, QuadNum, QuadPoint, Rational};
use crate::family::LensFamily;
use crate::par::Exec;
use crate::pencil::Lens;
use crate::scene::Scene;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualPoint {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl DualPoint {
    fn coords(&self) -> [Rational; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }
}

/// `z = a·x + b·y + d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPlane {
    pub a: Rational,
    pub b: Rational,
    pub d: Rational,
}

impl DualPlane {
    pub fn contains(&self, c: &DualPoint) -> bool {
        c.z == &self.a * &c.x + &self.b * &c.y + &self.d
    }
}

pub fn lift_circle(c: &Circle) -> DualPoint {
    DualPoint {
        x: c.cx().clone(),
        y: c.cy().clone(),
        z: c.r2() - c.cx() * c.cx() - c.cy() * c.cy(),
    }
}

pub fn dual_plane(p: &Point) -> DualPlane {
    DualPlane {
        a: -Rational::from_integer(2.into()) * &p.x,
        b: -Rational::from_integer(2.into()) * &p.y,
        d: &p.x * &p.x + &p.y * &p.y,
    }
}

type Q3 = [QuadNum; 3];

/// A line in space. The direction is scaled so its first nonzero coordinate
/// is one and the anchor is the point of the line closest to the origin, so
/// equal lines have equal representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualLine {
    pub anchor: Q3,
    pub direction: Q3,
}

fn q_dot(u: &Q3, v: &Q3) -> QuadNum {
    &(&(&u[0] * &v[0]) + &(&u[1] * &v[1])) + &(&u[2] * &v[2])
}

fn q_cross(u: &Q3, v: &Q3) -> Q3 {
    [
        &(&u[1] * &v[2]) - &(&u[2] * &v[1]),
        &(&u[2] * &v[0]) - &(&u[0] * &v[2]),
        &(&u[0] * &v[1]) - &(&u[1] * &v[0]),
    ]
}

impl DualLine {
    /// Canonical line through `anchor` with direction `dir` (nonzero).
    fn canonical(anchor: Q3, dir: Q3) -> Self {
        let lead = dir
            .iter()
            .find(|c| !c.is_zero())
            .expect("nonzero direction")
            .clone();
        let direction = dir.map(|c| c.div(&lead).expect("nonzero lead"));
        let t = q_dot(&anchor, &direction)
            .div(&q_dot(&direction, &direction))
            .expect("nonzero direction");
        let anchor = [0, 1, 2].map(|i| &anchor[i] - &(&t * &direction[i]));
        DualLine { anchor, direction }
    }

    pub fn contains(&self, c: &DualPoint) -> bool {
        let v = [0, 1, 2].map(|i| &QuadNum::from(c.coords()[i].clone()) - &self.anchor[i]);
        q_cross(&v, &self.direction).iter().all(QuadNum::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.anchor
            .iter()
            .chain(&self.direction)
            .all(QuadNum::is_rational)
    }

    fn to_rational(&self) -> Option<RatLine> {
        let conv = |v: &Q3| -> Option<[Rational; 3]> {
            Some([
                v[0].as_rational()?.clone(),
                v[1].as_rational()?.clone(),
                v[2].as_rational()?.clone(),
            ])
        };
        Some(RatLine {
            anchor: conv(&self.anchor)?,
            dir: conv(&self.direction)?,
        })
    }
}

impl fmt::Display for DualLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.anchor;
        let [x, y, z] = &self.direction;
        write!(f, "({a}, {b}, {c}) + t({x}, {y}, {z})")
    }
}

/// Intersection line of the planes of `p` and `q`. Both points must share a
/// quadratic field (base points of a lens always do).
pub fn lens_line(p: &QuadPoint, q: &QuadPoint) -> Result<DualLine> {
    if p == q {
        return Err(Error::DegenerateInput(
            "lens line of a repeated point".into(),
        ));
    }
    if !p.compatible(q) {
        return Err(Error::DegenerateInput(format!(
            "points {p} and {q} lie in different quadratic fields"
        )));
    }
    let two = QuadNum::int(2);
    let half = QuadNum::from(Rational::new(1.into(), 2.into()));
    // normals (−2p_x, −2p_y, −1) and (−2q_x, −2q_y, −1)
    let dir = [
        &two * &(&p.y - &q.y),
        &two * &(&q.x - &p.x),
        &(&two * &two) * &(&(&p.x * &q.y) - &(&p.y * &q.x)),
    ];
    // the midpoint satisfies both plane equations at height −p·q
    let anchor = [
        &half * &(&p.x + &q.x),
        &half * &(&p.y + &q.y),
        -&(&(&p.x * &q.x) + &(&p.y * &q.y)),
    ];
    Ok(DualLine::canonical(anchor, dir))
}

pub fn lens_line_of(lens: &Lens) -> Result<DualLine> {
    lens_line(lens.p(), lens.q())
}

type R3 = [Rational; 3];

fn r_sub(u: &R3, v: &R3) -> R3 {
    [&u[0] - &v[0], &u[1] - &v[1], &u[2] - &v[2]]
}

fn r_dot(u: &R3, v: &R3) -> Rational {
    &u[0] * &v[0] + &u[1] * &v[1] + &u[2] * &v[2]
}

fn r_cross(u: &R3, v: &R3) -> R3 {
    [
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn r_is_zero(u: &R3) -> bool {
    u.iter().all(Zero::is_zero)
}

#[derive(Clone, Debug)]
struct RatLine {
    anchor: R3,
    dir: R3,
}

/// `n·x = c`, scaled so the first nonzero normal coordinate is one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct RatPlane {
    normal: R3,
    offset: Rational,
}

impl RatPlane {
    fn new(normal: R3, point: &R3) -> Self {
        let lead = normal
            .iter()
            .find(|c| !c.is_zero())
            .expect("nonzero normal")
            .clone();
        let normal = normal.map(|c| c / &lead);
        let offset = r_dot(&normal, point);
        RatPlane { normal, offset }
    }

    fn contains_point(&self, x: &R3) -> bool {
        r_dot(&self.normal, x) == self.offset
    }

    fn contains_line(&self, l: &RatLine) -> bool {
        r_dot(&self.normal, &l.dir).is_zero() && self.contains_point(&l.anchor)
    }
}

impl RatLine {
    fn same(&self, other: &RatLine) -> bool {
        r_is_zero(&r_cross(&self.dir, &other.dir))
            && r_is_zero(&r_cross(&r_sub(&other.anchor, &self.anchor), &self.dir))
    }

    /// Mixed-product test.
    fn coplanar_with(&self, other: &RatLine) -> bool {
        r_dot(
            &r_sub(&other.anchor, &self.anchor),
            &r_cross(&self.dir, &other.dir),
        )
        .is_zero()
    }

    /// Plane through two distinct coplanar lines.
    fn span(&self, other: &RatLine) -> Option<RatPlane> {
        if self.same(other) || !self.coplanar_with(other) {
            return None;
        }
        let n = r_cross(&self.dir, &other.dir);
        let n = if r_is_zero(&n) {
            r_cross(&self.dir, &r_sub(&other.anchor, &self.anchor))
        } else {
            n
        };
        Some(RatPlane::new(n, &self.anchor))
    }
}

fn lines_coplanar(a: &RatLine, b: &RatLine, c: &RatLine) -> bool {
    if !(a.coplanar_with(b) && b.coplanar_with(c) && a.coplanar_with(c)) {
        return false;
    }
    // span from any pair of distinct lines; identical lines are coplanar with anything
    let plane = a.span(b).or_else(|| a.span(c)).or_else(|| b.span(c));
    match plane {
        Some(h) => h.contains_line(a) && h.contains_line(b) && h.contains_line(c),
        None => true,
    }
}

/// Three lenses sharing a circle whose lifted lines lie in one plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoplanarTriple {
    pub circle: usize,
    pub lenses: [usize; 3],
}

/// A plane spanned by two family lines carrying too many incidences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneViolation {
    pub spanned_by: (usize, usize),
    pub lines_in_plane: usize,
    pub incidences: usize,
    pub circles_in_plane: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub lenses: usize,
    pub certified: bool,
    pub circles_with_triples: usize,
    pub triples_tested: usize,
    pub planes_tested: usize,
    /// Lenses whose lifted line is not rational and so was left out.
    pub skipped_lines: usize,
    pub coplanar_triples: Vec<CoplanarTriple>,
    pub plane_violations: Vec<PlaneViolation>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.coplanar_triples.is_empty() && self.plane_violations.is_empty()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "audit coplanarity")?;
        writeln!(f, "lenses {}", self.lenses)?;
        writeln!(f, "certified {}", self.certified)?;
        writeln!(f, "circles_with_triples {}", self.circles_with_triples)?;
        writeln!(f, "triples_tested {}", self.triples_tested)?;
        writeln!(f, "coplanar_triples {}", self.coplanar_triples.len())?;
        writeln!(f, "planes_tested {}", self.planes_tested)?;
        writeln!(f, "plane_violations {}", self.plane_violations.len())?;
        writeln!(f, "skipped_lines {}", self.skipped_lines)?;
        for t in &self.coplanar_triples {
            writeln!(
                f,
                "coplanar circle={} lenses={},{},{}",
                t.circle, t.lenses[0], t.lenses[1], t.lenses[2]
            )?;
        }
        for v in &self.plane_violations {
            writeln!(
                f,
                "plane spanned_by={},{} lines={} incidences={} circles={}",
                v.spanned_by.0, v.spanned_by.1, v.lines_in_plane, v.incidences, v.circles_in_plane
            )?;
        }
        writeln!(
            f,
            "status {}",
            if self.is_clean() {
                "clean"
            } else {
                "violations"
            }
        )
    }
}

/// Audits a certified family; see [`audit_lenses`].
pub fn coplanarity_audit(scene: &Scene, family: &LensFamily) -> AuditReport {
    coplanarity_audit_with(scene, family, Exec::default())
}

pub fn coplanarity_audit_with(scene: &Scene, family: &LensFamily, exec: Exec) -> AuditReport {
    let mut report = audit_lenses(scene, family.members(), exec);
    report.certified = family.is_certified();
    report
}

/// Runs both checks on an arbitrary lens list: no three lines of lenses
/// sharing a circle are coplanar, and every plane spanned by two coplanar
/// lines carries at most twice as many incidences as lifted circles.
pub fn audit_lenses(scene: &Scene, lenses: &[Lens], exec: Exec) -> AuditReport {
    let lines: Vec<Option<RatLine>> = exec.map_slice(lenses, |l| {
        lens_line_of(l).ok().and_then(|d| d.to_rational())
    });
    let mut report = AuditReport {
        lenses: lenses.len(),
        skipped_lines: lines.iter().filter(|l| l.is_none()).count(),
        ..AuditReport::default()
    };

    let mut by_circle: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, l) in lenses.iter().enumerate() {
        if lines[i].is_some() {
            for &c in l.circles() {
                by_circle.entry(c).or_default().push(i);
            }
        }
    }
    let mut triples = Vec::new();
    for (&c, ids) in &by_circle {
        if ids.len() < 3 {
            continue;
        }
        report.circles_with_triples += 1;
        for a in 0..ids.len() {
            for b in a + 1..ids.len() {
                for d in b + 1..ids.len() {
                    triples.push((c, [ids[a], ids[b], ids[d]]));
                }
            }
        }
    }
    report.triples_tested = triples.len();
    let line = |i: usize| lines[i].as_ref().expect("filtered above");
    report.coplanar_triples = exec
        .map_slice(&triples, |&(c, [a, b, d])| {
            lines_coplanar(line(a), line(b), line(d)).then_some(CoplanarTriple {
                circle: c,
                lenses: [a, b, d],
            })
        })
        .into_iter()
        .flatten()
        .collect();

    // distinct planes spanned by coplanar pairs, keyed to the first pair found
    let usable: Vec<usize> = (0..lenses.len()).filter(|&i| lines[i].is_some()).collect();
    let spans = exec.map_pairs(usable.len(), |i, j| line(usable[i]).span(line(usable[j])));
    let mut planes: BTreeMap<RatPlane, (usize, usize)> = BTreeMap::new();
    let mut it = spans.into_iter();
    for i in 0..usable.len() {
        for j in i + 1..usable.len() {
            if let Some(h) = it.next().expect("pair count") {
                planes.entry(h).or_insert((usable[i], usable[j]));
            }
        }
    }
    report.planes_tested = planes.len();
    let lifts: Vec<R3> = scene
        .circles()
        .iter()
        .map(|c| lift_circle(c).coords())
        .collect();
    let planes: Vec<(RatPlane, (usize, usize))> = planes.into_iter().collect();
    report.plane_violations = exec
        .map_slice(&planes, |(h, pair)| {
            let in_plane: Vec<bool> = lifts.iter().map(|p| h.contains_point(p)).collect();
            let inside: Vec<usize> = usable
                .iter()
                .copied()
                .filter(|&i| h.contains_line(line(i)))
                .collect();
            let incidences = inside
                .iter()
                .map(|&i| lenses[i].circles().iter().filter(|&&c| in_plane[c]).count())
                .sum();
            let circles_in_plane = in_plane.iter().filter(|&&b| b).count();
            (incidences > 2 * circles_in_plane).then_some(PlaneViolation {
                spanned_by: *pair,
                lines_in_plane: inside.len(),
                incidences,
                circles_in_plane,
            })
        })
        .into_iter()
        .flatten()
        .collect();
    report
}
