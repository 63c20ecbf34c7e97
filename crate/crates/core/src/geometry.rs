//! Exact planar predicates.
//!
//! Coordinates are rationals. Before any predicate runs, a point set is moved
//! onto an integer lattice by multiplying through by the least common
//! denominator, which preserves every orientation and betweenness relation.
//! All arithmetic after that is checked `i128`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::{Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_integers(x: i64, y: i64) -> Self {
        Point { x: Rational::from_integer(x), y: Rational::from_integer(y) }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

/// A point on the integer lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    pub x: i128,
    pub y: i128,
}

/// Scales all points by the common denominator of their coordinates.
pub fn to_lattice(points: &[Point]) -> Result<Vec<LatticePoint>> {
    let mut lcm: i128 = 1;
    for p in points {
        for d in [*p.x.denom(), *p.y.denom()] {
            let d = d as i128;
            let g = lcm.gcd(&d);
            lcm = (lcm / g).checked_mul(d).ok_or(Error::CoordinateOverflow)?;
        }
    }
    let scale = |r: &Rational| -> Result<i128> {
        let factor = lcm / (*r.denom() as i128);
        (*r.numer() as i128).checked_mul(factor).ok_or(Error::CoordinateOverflow)
    };
    points
        .iter()
        .map(|p| Ok(LatticePoint { x: scale(&p.x)?, y: scale(&p.y)? }))
        .collect()
}

fn sub(a: LatticePoint, b: LatticePoint) -> Result<(i128, i128)> {
    Ok((
        a.x.checked_sub(b.x).ok_or(Error::CoordinateOverflow)?,
        a.y.checked_sub(b.y).ok_or(Error::CoordinateOverflow)?,
    ))
}

fn cross(u: (i128, i128), v: (i128, i128)) -> Result<i128> {
    let l = u.0.checked_mul(v.1).ok_or(Error::CoordinateOverflow)?;
    let r = u.1.checked_mul(v.0).ok_or(Error::CoordinateOverflow)?;
    l.checked_sub(r).ok_or(Error::CoordinateOverflow)
}

fn dot(u: (i128, i128), v: (i128, i128)) -> Result<i128> {
    let l = u.0.checked_mul(v.0).ok_or(Error::CoordinateOverflow)?;
    let r = u.1.checked_mul(v.1).ok_or(Error::CoordinateOverflow)?;
    l.checked_add(r).ok_or(Error::CoordinateOverflow)
}

/// Sign of the turn `a -> b -> c`: `Greater` is counter-clockwise.
pub fn orientation(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Result<Ordering> {
    Ok(cross(sub(b, a)?, sub(c, a)?)?.cmp(&0))
}

/// True when `p` lies strictly inside the segment `ab`.
pub fn in_open_segment(p: LatticePoint, a: LatticePoint, b: LatticePoint) -> Result<bool> {
    if orientation(a, b, p)? != Ordering::Equal {
        return Ok(false);
    }
    let ab = sub(b, a)?;
    Ok(dot(sub(p, a)?, ab)? > 0 && dot(sub(p, b)?, (-ab.0, -ab.1))? > 0)
}

/// True when the open segments `ab` and `cd` cross at a single interior point
/// (neither endpoint of one lies on the other's line).
pub fn properly_cross(
    a: LatticePoint,
    b: LatticePoint,
    c: LatticePoint,
    d: LatticePoint,
) -> Result<bool> {
    let o1 = orientation(a, b, c)?;
    let o2 = orientation(a, b, d)?;
    let o3 = orientation(c, d, a)?;
    let o4 = orientation(c, d, b)?;
    let opposite = |x: Ordering, y: Ordering| x != Ordering::Equal && y != Ordering::Equal && x != y;
    Ok(opposite(o1, o2) && opposite(o3, o4))
}

/// True when `ab` and `cd` are collinear and share more than one point.
pub fn collinear_overlap(
    a: LatticePoint,
    b: LatticePoint,
    c: LatticePoint,
    d: LatticePoint,
) -> Result<bool> {
    if orientation(a, b, c)? != Ordering::Equal || orientation(a, b, d)? != Ordering::Equal {
        return Ok(false);
    }
    // Project onto the dominant axis of ab.
    let ab = sub(b, a)?;
    let key = |p: LatticePoint| if ab.0 != 0 { p.x } else { p.y };
    let (lo1, hi1) = minmax(key(a), key(b));
    let (lo2, hi2) = minmax(key(c), key(d));
    Ok(lo1.max(lo2) < hi1.min(hi2))
}

fn minmax(a: i128, b: i128) -> (i128, i128) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Exact intersection point of two properly crossing segments, as
/// `(x_num, y_num, den)` in lowest terms with `den > 0`.
pub fn crossing_point(
    a: LatticePoint,
    b: LatticePoint,
    c: LatticePoint,
    d: LatticePoint,
) -> Result<(i128, i128, i128)> {
    let r = sub(b, a)?;
    let s = sub(d, c)?;
    let mut den = cross(r, s)?;
    let mut t = cross(sub(c, a)?, s)?;
    if den < 0 {
        den = -den;
        t = -t;
    }
    let coord = |origin: i128, dir: i128| -> Result<i128> {
        origin
            .checked_mul(den)
            .and_then(|o| dir.checked_mul(t).and_then(|dt| o.checked_add(dt)))
            .ok_or(Error::CoordinateOverflow)
    };
    let xn = coord(a.x, r.0)?;
    let yn = coord(a.y, r.1)?;
    let g = xn.gcd(&yn).gcd(&den);
    Ok((xn / g, yn / g, den / g))
}

/// Angle comparison of two nonzero direction vectors, clockwise from the
/// positive x-axis.
pub fn clockwise_cmp(u: (i128, i128), v: (i128, i128)) -> Result<Ordering> {
    // Half 0: angle in [0, pi) measured clockwise, i.e. y < 0 or (y == 0, x > 0).
    let half = |w: (i128, i128)| if w.1 < 0 || (w.1 == 0 && w.0 > 0) { 0 } else { 1 };
    match half(u).cmp(&half(v)) {
        Ordering::Equal => Ok(cross(u, v)?.cmp(&0)),
        other => Ok(other),
    }
}

/// Difference vector `b - a`.
pub fn direction(a: LatticePoint, b: LatticePoint) -> Result<(i128, i128)> {
    sub(b, a)
}
