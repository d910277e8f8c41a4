//! Scene files and CSV output.
//!
//! A scene file is line oriented:
//!
//! ```text
//! # comment
//! circle 0 0 1
//! circle 1/2 0 5/4
//! point 0 1
//! ```
//!
//! Numbers are integers or fractions `p/q`. The canonical
//! form written by [`serialize_scene`] lists circles then points, one per
//! line, with reduced fractions and no comments.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{Circle, Point, Rational};
use crate::scene::Scene;

pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let parse_int = |t: &str| {
        t.parse::<BigInt>()
            .map_err(|_| format!("not a number: {s:?}"))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_scene(text: &str) -> Result<Scene> {
    let mut circles = Vec::new();
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| Error::Parse { line, msg };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut fields = body.split_whitespace();
        let kind = fields.next().expect("nonempty line");
        let nums = fields
            .map(parse_rational)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(err)?;
        match (kind, nums.len()) {
            ("circle", 3) => {
                let [cx, cy, r2]: [Rational; 3] = nums.try_into().expect("length checked");
                let c = Circle::new(cx, cy, r2).map_err(|e| err(e.to_string()))?;
                if circles.contains(&c) {
                    return Err(err("duplicate circle".into()));
                }
                circles.push(c);
            }
            ("point", 2) => {
                let [x, y]: [Rational; 2] = nums.try_into().expect("length checked");
                points.push(Point::new(x, y));
            }
            ("circle", k) => return Err(err(format!("circle takes 3 values, got {k}"))),
            ("point", k) => return Err(err(format!("point takes 2 values, got {k}"))),
            (other, _) => return Err(err(format!("unknown record {other:?}"))),
        }
    }
    Scene::new(circles, points)
}

pub fn serialize_scene(scene: &Scene) -> String {
    let mut out = String::new();
    for c in scene.circles() {
        writeln!(
            out,
            "circle {} {} {}",
            format_rational(c.cx()),
            format_rational(c.cy()),
            format_rational(c.r2())
        )
        .expect("write to string");
    }
    for p in scene.points() {
        writeln!(
            out,
            "point {} {}",
            format_rational(&p.x),
            format_rational(&p.y)
        )
        .expect("write to string");
    }
    out
}

/// Renders a header and rows as CSV.
pub fn csv_string<R, I, S>(header: &[&str], rows: R) -> String
where
    R: IntoIterator<Item = I>,
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}
