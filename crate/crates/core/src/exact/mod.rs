//! Exact predicates and constructions on circles, points and arcs.

mod quad;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub use quad::{rat, ratio, sign_ext, Approx, QuadNum, Rational};

use crate::error::{Error, Result};

/// A point with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }
}

/// A circle given by its center and squared radius.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Circle {
    cx: Rational,
    cy: Rational,
    r2: Rational,
}

impl Circle {
    pub fn new(cx: Rational, cy: Rational, r2: Rational) -> Result<Self> {
        if !r2.is_positive() {
            return Err(Error::InvalidInput(format!(
                "squared radius must be positive, got {r2}"
            )));
        }
        Ok(Circle { cx, cy, r2 })
    }

    /// Integer-data convenience constructor. Panics if `r2 <= 0`.
    pub fn int(cx: i64, cy: i64, r2: i64) -> Self {
        Circle::new(rat(cx), rat(cy), rat(r2)).expect("positive squared radius")
    }

    pub fn cx(&self) -> &Rational {
        &self.cx
    }

    pub fn cy(&self) -> &Rational {
        &self.cy
    }

    pub fn r2(&self) -> &Rational {
        &self.r2
    }

    pub fn center(&self) -> Point {
        Point::new(self.cx.clone(), self.cy.clone())
    }

    /// Vector from the center to `p`.
    pub fn offset(&self, p: &QuadPoint) -> Dir {
        Dir {
            x: &p.x - &QuadNum::from(self.cx.clone()),
            y: &p.y - &QuadNum::from(self.cy.clone()),
        }
    }
}

/// A point whose coordinates live in one quadratic field `Q(√d)`.
#[derive(Clone, Debug)]
pub struct QuadPoint {
    pub x: QuadNum,
    pub y: QuadNum,
}

impl QuadPoint {
    /// Panics if the coordinates come from different fields.
    pub fn new(x: QuadNum, y: QuadNum) -> Self {
        assert!(x.compatible(&y), "coordinates from different fields");
        QuadPoint { x, y }
    }

    pub fn radicand(&self) -> &BigInt {
        if self.x.is_rational() {
            self.y.radicand()
        } else {
            self.x.radicand()
        }
    }

    pub fn is_rational(&self) -> bool {
        self.x.is_rational() && self.y.is_rational()
    }

    pub fn to_rational(&self) -> Option<Point> {
        Some(Point::new(
            self.x.as_rational()?.clone(),
            self.y.as_rational()?.clone(),
        ))
    }

    /// True if both points share a field (or one is rational).
    pub fn compatible(&self, other: &QuadPoint) -> bool {
        let (a, b) = (self.radicand(), other.radicand());
        a.is_zero() || b.is_zero() || a == b
    }

    /// Lexicographic exact comparison, x first.
    pub fn cmp_lex(&self, other: &QuadPoint) -> Ordering {
        self.x
            .cmp_exact(&other.x)
            .then_with(|| self.y.cmp_exact(&other.y))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl From<&Point> for QuadPoint {
    fn from(p: &Point) -> Self {
        QuadPoint {
            x: QuadNum::from(p.x.clone()),
            y: QuadNum::from(p.y.clone()),
        }
    }
}

impl PartialEq for QuadPoint {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_lex(other) == Ordering::Equal
    }
}

impl Eq for QuadPoint {}

impl PartialOrd for QuadPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_lex(other)
    }
}

impl fmt::Display for QuadPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A direction vector with coordinates in one quadratic field.
#[derive(Clone, Debug)]
pub struct Dir {
    pub x: QuadNum,
    pub y: QuadNum,
}

impl Dir {
    fn radicand(&self) -> &BigInt {
        if self.x.is_rational() {
            self.y.radicand()
        } else {
            self.x.radicand()
        }
    }

    /// 0 for angles in `[0, π)`, 1 for `[π, 2π)`.
    fn half(&self) -> u8 {
        match self.y.signum() {
            Ordering::Greater => 0,
            Ordering::Less => 1,
            Ordering::Equal => {
                if self.x.signum() == Ordering::Greater {
                    0
                } else {
                    1
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn neg(&self) -> Dir {
        Dir {
            x: -&self.x,
            y: -&self.y,
        }
    }

    /// Sign of the 2-D cross product `self × other`, exact across fields.
    pub fn cross_sign(&self, other: &Dir) -> Ordering {
        let filtered = (|| {
            let (x1, y1) = (self.x.approx()?, self.y.approx()?);
            let (x2, y2) = (other.x.approx()?, other.y.approx()?);
            (x1 * y2 - y1 * x2).sign()
        })();
        if let Some(sign) = filtered {
            return sign;
        }
        let (d1, d2) = (self.radicand(), other.radicand());
        if d1.is_zero() || d2.is_zero() || d1 == d2 {
            return (&(&self.x * &other.y) - &(&self.y * &other.x)).signum();
        }
        let (u1, v1) = self.x.mul_split(&other.y);
        let (u2, v2) = self.y.mul_split(&other.x);
        sign_ext(&(&u1 - &u2), &(&v1 - &v2), d2)
    }

    /// Compares polar angles in `[0, 2π)`. Zero vectors are not allowed.
    pub fn cmp_angle(&self, other: &Dir) -> Ordering {
        self.half()
            .cmp(&other.half())
            .then_with(|| other.cross_sign(self))
    }

    pub fn same_direction(&self, other: &Dir) -> bool {
        self.cmp_angle(other) == Ordering::Equal
    }
}

/// True if `x` lies on the closed counter-clockwise arc from `start` to
/// `end`. All three are directions from one center.
pub fn ccw_contains(start: &Dir, end: &Dir, x: &Dir) -> bool {
    let se = start.cmp_angle(end);
    let sx = start.cmp_angle(x);
    let xe = x.cmp_angle(end);
    if se != Ordering::Greater {
        sx != Ordering::Greater && xe != Ordering::Greater
    } else {
        sx != Ordering::Greater || xe != Ordering::Greater
    }
}

/// Implicit line `a·x + b·y + c = 0` with integer coefficients, content 1 and
/// first nonzero coefficient positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Line {
    /// Canonicalizes rational coefficients; `None` if `a = b = 0`.
    pub fn from_rational(a: &Rational, b: &Rational, c: &Rational) -> Option<Line> {
        if a.is_zero() && b.is_zero() {
            return None;
        }
        let den = a.denom().lcm(b.denom()).lcm(c.denom());
        let den = Rational::from_integer(den);
        let mut coeffs = [a, b, c].map(|r| (r * &den).to_integer());
        let g = coeffs[0].gcd(&coeffs[1]).gcd(&coeffs[2]);
        for k in &mut coeffs {
            *k /= &g;
        }
        let lead = coeffs.iter().find(|k| !k.is_zero()).expect("nonzero");
        if lead.is_negative() {
            for k in &mut coeffs {
                *k = -k.clone();
            }
        }
        let [a, b, c] = coeffs;
        Some(Line { a, b, c })
    }

    pub fn eval(&self, p: &Point) -> Rational {
        Rational::from_integer(self.a.clone()) * &p.x
            + Rational::from_integer(self.b.clone()) * &p.y
            + Rational::from_integer(self.c.clone())
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y + {} = 0", self.a, self.b, self.c)
    }
}

/// `|wξ|² − r²`: zero on the circle, negative strictly inside.
pub fn power_of_point(w: &Point, c: &Circle) -> Rational {
    let dx = &w.x - &c.cx;
    let dy = &w.y - &c.cy;
    &dx * &dx + &dy * &dy - &c.r2
}

/// Locus of equal power with respect to both circles.
pub fn radical_axis(c1: &Circle, c2: &Circle) -> Result<Line> {
    // (x²+y²−2a₁x−2b₁y+e₁) − (x²+y²−2a₂x−2b₂y+e₂), e = a²+b²−r²
    let e = |c: &Circle| &c.cx * &c.cx + &c.cy * &c.cy - &c.r2;
    let two = rat(2);
    let a = (&c2.cx - &c1.cx) * &two;
    let b = (&c2.cy - &c1.cy) * &two;
    let k = e(c1) - e(c2);
    Line::from_rational(&a, &b, &k).ok_or(Error::NoRadicalAxis)
}

/// Float filter for `4·r1·|d|² − (r1 − r2 + |d|²)² < 0`, the sign of `s²`
/// in [`intersection_points`]. False means "unknown".
fn surely_disjoint(c1: &Circle, c2: &Circle) -> bool {
    let f = |r: &Rational| Approx::of_rational(r);
    let run = || {
        let dx = f(&c2.cx)? - f(&c1.cx)?;
        let dy = f(&c2.cy)? - f(&c1.cy)?;
        let d2 = dx * dx + dy * dy;
        let r1 = f(&c1.r2)?;
        let u = r1 - f(&c2.r2)? + d2;
        let four_r1 = (r1 + r1) + (r1 + r1);
        (four_r1 * d2 - u * u).sign()
    };
    run() == Some(Ordering::Less)
}

/// Exact intersection of two distinct circles: zero, one (tangency) or two
/// points sharing one radicand.
pub fn intersection_points(c1: &Circle, c2: &Circle) -> Result<Vec<QuadPoint>> {
    if c1 == c2 {
        return Err(Error::DegenerateInput("identical circles".into()));
    }
    if surely_disjoint(c1, c2) {
        return Ok(Vec::new());
    }
    let dx = &c2.cx - &c1.cx;
    let dy = &c2.cy - &c1.cy;
    let d2 = &dx * &dx + &dy * &dy;
    if d2.is_zero() {
        return Ok(Vec::new());
    }
    // X = c1 + t·d ± s·d⊥ with t = (r1 − r2 + |d|²)/(2|d|²), s² = r1/|d|² − t²
    let t = (&c1.r2 - &c2.r2 + &d2) / (&d2 * rat(2));
    let s2 = &c1.r2 / &d2 - &t * &t;
    let bx = &c1.cx + &t * &dx;
    let by = &c1.cy + &t * &dy;
    match s2.cmp(&Rational::zero()) {
        Ordering::Less => Ok(Vec::new()),
        Ordering::Equal => Ok(vec![QuadPoint::new(bx.into(), by.into())]),
        Ordering::Greater => {
            let root = QuadNum::new(Rational::zero(), rat(1), s2);
            let p = QuadPoint::new(
                &QuadNum::from(bx.clone()) - &root.scale(&dy),
                &QuadNum::from(by.clone()) + &root.scale(&dx),
            );
            let q = QuadPoint::new(
                &QuadNum::from(bx) + &root.scale(&dy),
                &QuadNum::from(by) - &root.scale(&dx),
            );
            Ok(vec![p, q])
        }
    }
}

/// Exact membership test `(x−cx)² + (y−cy)² = r2`.
pub fn point_on_circle(p: &QuadPoint, c: &Circle) -> bool {
    let v = c.offset(p);
    let lhs = &(&v.x * &v.x) + &(&v.y * &v.y);
    (&lhs - &QuadNum::from(c.r2.clone())).is_zero()
}

/// How an arc is chosen between its two endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcSelector {
    /// The shorter of the two arcs; endpoints must not be antipodal.
    Shorter,
    /// For antipodal endpoints: the half-circle swept counter-clockwise from
    /// the first endpoint (`true`) or from the second (`false`).
    Half { ccw_from_first: bool },
}

/// A closed arc of a circle.
#[derive(Clone, Debug)]
pub struct Arc {
    circle: Circle,
    endpoints: (QuadPoint, QuadPoint),
    selector: ArcSelector,
    start: Dir,
    end: Dir,
}

impl Arc {
    pub fn new(
        circle: &Circle,
        p: &QuadPoint,
        q: &QuadPoint,
        selector: ArcSelector,
    ) -> Result<Self> {
        if p == q {
            return Err(Error::DegenerateInput("arc endpoints coincide".into()));
        }
        if !point_on_circle(p, circle) || !point_on_circle(q, circle) {
            return Err(Error::DegenerateInput("arc endpoint not on circle".into()));
        }
        Self::unchecked(circle, p, q, selector)
    }

    fn unchecked(
        circle: &Circle,
        p: &QuadPoint,
        q: &QuadPoint,
        selector: ArcSelector,
    ) -> Result<Self> {
        let vp = circle.offset(p);
        let vq = circle.offset(q);
        let cross = vp.cross_sign(&vq);
        let (start, end) = match (selector, cross) {
            (ArcSelector::Shorter, Ordering::Greater) => (vp, vq),
            (ArcSelector::Shorter, Ordering::Less) => (vq, vp),
            (ArcSelector::Shorter, Ordering::Equal) => {
                return Err(Error::DegenerateInput(
                    "shorter arc is undefined for antipodal endpoints".into(),
                ))
            }
            (ArcSelector::Half { .. }, Ordering::Greater | Ordering::Less) => {
                return Err(Error::DegenerateInput(
                    "half-circle selector requires antipodal endpoints".into(),
                ))
            }
            (
                ArcSelector::Half {
                    ccw_from_first: true,
                },
                Ordering::Equal,
            ) => (vp, vq),
            (
                ArcSelector::Half {
                    ccw_from_first: false,
                },
                Ordering::Equal,
            ) => (vq, vp),
        };
        Ok(Arc {
            circle: circle.clone(),
            endpoints: (p.clone(), q.clone()),
            selector,
            start,
            end,
        })
    }

    pub fn circle(&self) -> &Circle {
        &self.circle
    }

    pub fn endpoints(&self) -> (&QuadPoint, &QuadPoint) {
        (&self.endpoints.0, &self.endpoints.1)
    }

    pub fn selector(&self) -> ArcSelector {
        self.selector
    }

    /// Closed containment of a point already known to lie on the circle.
    pub fn contains_dir(&self, x: &Dir) -> bool {
        ccw_contains(&self.start, &self.end, x)
    }

    pub fn contains(&self, p: &QuadPoint) -> bool {
        point_on_circle(p, &self.circle) && self.contains_dir(&self.circle.offset(p))
    }

    /// Closed arcs on one circle meet iff one contains the other's start.
    pub fn intersects(&self, other: &Arc) -> bool {
        self.contains_dir(&other.start) || other.contains_dir(&self.start)
    }
}

fn antipodal(vp: &Dir, vq: &Dir) -> bool {
    vp.x.cmp_exact(&-&vq.x) == Ordering::Equal && vp.y.cmp_exact(&-&vq.y) == Ordering::Equal
}

/// Overlap of the lens arcs spanned by two point pairs on one circle.
///
/// Arcs are closed, so arcs sharing only an endpoint overlap. If exactly one
/// pair is antipodal, the pairs overlap unless the other pair lies strictly
/// inside one open half-circle. Two antipodal pairs always overlap.
pub fn arcs_overlap(
    c: &Circle,
    pair1: (&QuadPoint, &QuadPoint),
    pair2: (&QuadPoint, &QuadPoint),
) -> Result<bool> {
    for (p, q) in [pair1, pair2] {
        if p == q {
            return Err(Error::DegenerateInput("pair with coincident points".into()));
        }
        if !point_on_circle(p, c) || !point_on_circle(q, c) {
            return Err(Error::DegenerateInput("point not on circle".into()));
        }
    }
    Ok(overlap_on_circle(c, pair1, pair2))
}

/// [`arcs_overlap`] without the on-circle and distinctness checks.
pub(crate) fn overlap_on_circle(
    c: &Circle,
    (p, q): (&QuadPoint, &QuadPoint),
    (s, t): (&QuadPoint, &QuadPoint),
) -> bool {
    let (vp, vq, vs, vt) = (c.offset(p), c.offset(q), c.offset(s), c.offset(t));
    let anti1 = antipodal(&vp, &vq);
    let anti2 = antipodal(&vs, &vt);
    match (anti1, anti2) {
        (true, true) => true,
        (true, false) => split_by_halves(&vp, &vq, &vs, &vt),
        (false, true) => split_by_halves(&vs, &vt, &vp, &vq),
        (false, false) => {
            let (a0, a1) = shorter(vp, vq);
            let (b0, b1) = shorter(vs, vt);
            ccw_contains(&a0, &a1, &b0) || ccw_contains(&b0, &b1, &a0)
        }
    }
}

fn shorter(vp: Dir, vq: Dir) -> (Dir, Dir) {
    if vp.cross_sign(&vq) == Ordering::Greater {
        (vp, vq)
    } else {
        (vq, vp)
    }
}

/// `p, q` antipodal: true iff `s` and `t` fall in opposite closed halves.
fn split_by_halves(vp: &Dir, vq: &Dir, vs: &Dir, vt: &Dir) -> bool {
    let s1 = ccw_contains(vp, vq, vs);
    let s2 = ccw_contains(vq, vp, vs);
    let t1 = ccw_contains(vp, vq, vt);
    let t2 = ccw_contains(vq, vp, vt);
    (s1 && t2) || (s2 && t1)
}
