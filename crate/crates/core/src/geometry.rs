//! Exact 2-D primitives: points, segments, crossing predicates and rectangles.
//!
//! Orientation tests go through Shewchuk's adaptive-precision `orient2d`, so
//! the crossing predicates are exact for every pair of finite `f64` inputs.

use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("zero-length segment")]
    ZeroLengthSegment,
    #[error("non-finite coordinate")]
    NonFinite,
}

/// A position in layout units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

/// A displacement in layout units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn to_vec(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at `angle` radians from the +x axis.
    pub fn from_angle(angle: f64) -> Self {
        Vec2::new(libm::cos(angle), libm::sin(angle))
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    #[inline]
    pub fn norm(self) -> f64 {
        libm::sqrt(self.norm_squared())
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rescales to length `max_len` if longer.
    pub fn clamp_length(self, max_len: f64) -> Vec2 {
        let len = self.norm();
        if len > max_len && len > 0.0 {
            self * (max_len / len)
        } else {
            self
        }
    }
}

impl Sub for Point2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Point2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<Vec2> for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, rhs: Vec2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign<Vec2> for Point2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub<Vec2> for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, rhs: Vec2) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// A straight segment with distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment2 {
    a: Point2,
    b: Point2,
}

impl Segment2 {
    pub fn new(a: Point2, b: Point2) -> Result<Self, GeometryError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if a == b {
            return Err(GeometryError::ZeroLengthSegment);
        }
        Ok(Segment2 { a, b })
    }

    pub fn a(&self) -> Point2 {
        self.a
    }

    pub fn b(&self) -> Point2 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }
}

/// Axis-aligned rectangle, `min <= max` component-wise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect2 {
    pub min: Point2,
    pub max: Point2,
}

impl Rect2 {
    /// Builds a rectangle from two opposite corners in any order.
    pub fn from_corners(p: Point2, q: Point2) -> Self {
        Rect2 {
            min: Point2::new(p.x.min(q.x), p.y.min(q.y)),
            max: Point2::new(p.x.max(q.x), p.y.max(q.y)),
        }
    }

    /// Rectangle of size `width` x `height` centred on `c`.
    pub fn centered(c: Point2, width: f64, height: f64) -> Self {
        let (hw, hh) = (width / 2.0, height / 2.0);
        Rect2 {
            min: Point2::new(c.x - hw, c.y - hh),
            max: Point2::new(c.x + hw, c.y + hh),
        }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point2 {
        Point2::new(
            (self.min.x + self.max.x) / 2.0,
            (self.min.y + self.max.y) / 2.0,
        )
    }

    /// Closed containment.
    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn union(&self, other: &Rect2) -> Rect2 {
        Rect2 {
            min: Point2::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point2::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }

    /// Grows every side by `margin`.
    pub fn inflate(&self, margin: f64) -> Rect2 {
        Rect2 {
            min: Point2::new(self.min.x - margin, self.min.y - margin),
            max: Point2::new(self.max.x + margin, self.max.y + margin),
        }
    }
}

/// Tightest axis-aligned rectangle containing every point.
pub fn bounding_rect(points: &[Point2]) -> Result<Rect2, GeometryError> {
    let (first, rest) = points.split_first().ok_or(GeometryError::EmptyPointSet)?;
    let mut rect = Rect2 {
        min: *first,
        max: *first,
    };
    for p in rest {
        rect.min.x = rect.min.x.min(p.x);
        rect.min.y = rect.min.y.min(p.y);
        rect.max.x = rect.max.x.max(p.x);
        rect.max.y = rect.max.y.max(p.y);
    }
    Ok(rect)
}

/// True iff the interiors intersect; shared edges or corners do not count.
pub fn rects_overlap(a: &Rect2, b: &Rect2) -> bool {
    a.min.x < b.max.x && b.min.x < a.max.x && a.min.y < b.max.y && b.min.y < a.max.y
}

/// Sign of the turn `a -> b -> c`: positive for counter-clockwise, exact.
#[inline]
pub fn orientation(a: Point2, b: Point2, c: Point2) -> f64 {
    robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    )
}

/// `p` lies in the bounding box of `a`,`b`; only meaningful when collinear.
#[inline]
fn within_box(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segments `ab` and `cd` share at least one point.
///
/// Zero-length inputs degrade to point/segment tests.
pub fn closed_segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    // cheap rejection before the exact predicates
    if a.x.max(b.x) < c.x.min(d.x)
        || c.x.max(d.x) < a.x.min(b.x)
        || a.y.max(b.y) < c.y.min(d.y)
        || c.y.max(d.y) < a.y.min(b.y)
    {
        return false;
    }
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    let straddles = |p: f64, q: f64| (p > 0.0 && q < 0.0) || (p < 0.0 && q > 0.0);
    if straddles(o1, o2) && straddles(o3, o4) {
        return true;
    }
    (o1 == 0.0 && within_box(a, b, c))
        || (o2 == 0.0 && within_box(a, b, d))
        || (o3 == 0.0 && within_box(c, d, a))
        || (o4 == 0.0 && within_box(c, d, b))
}

/// Proper crossing between two segments.
///
/// True iff the segments share a point and no endpoint of one coincides with
/// an endpoint of the other. An endpoint touching the interior of the other
/// segment, and collinear overlap, both count.
pub fn properly_intersect(s: &Segment2, t: &Segment2) -> bool {
    if s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b {
        return false;
    }
    closed_segments_intersect(s.a, s.b, t.a, t.b)
}

/// Euclidean distance from `p` to the closed segment `ab`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment2 {
        Segment2::new(Point2::new(ax, ay), Point2::new(bx, by)).unwrap()
    }

    #[test]
    fn x_crossing() {
        assert!(properly_intersect(&seg(0., 0., 2., 2.), &seg(0., 2., 2., 0.)));
    }

    #[test]
    fn shared_endpoint_is_not_a_crossing() {
        assert!(!properly_intersect(&seg(0., 0., 1., 0.), &seg(1., 0., 2., 1.)));
    }

    #[test]
    fn collinear_overlap_crosses() {
        assert!(properly_intersect(&seg(0., 0., 2., 0.), &seg(1., 0., 3., 0.)));
    }

    #[test]
    fn t_junction_crosses() {
        // endpoint of one segment in the interior of the other
        assert!(properly_intersect(&seg(0., 0., 2., 0.), &seg(1., 0., 1., 5.)));
    }

    #[test]
    fn collinear_disjoint() {
        assert!(!properly_intersect(&seg(0., 0., 1., 0.), &seg(2., 0., 3., 0.)));
    }

    #[test]
    fn zero_length_rejected() {
        let p = Point2::new(1.0, 1.0);
        assert_eq!(Segment2::new(p, p), Err(GeometryError::ZeroLengthSegment));
        assert_eq!(
            Segment2::new(p, Point2::new(f64::NAN, 0.0)),
            Err(GeometryError::NonFinite)
        );
    }

    #[test]
    fn bounding_rect_cases() {
        assert_eq!(
            bounding_rect(&[Point2::ORIGIN]).unwrap(),
            Rect2 {
                min: Point2::ORIGIN,
                max: Point2::ORIGIN
            }
        );
        let r = bounding_rect(&[
            Point2::new(0., 1.),
            Point2::new(2., -1.),
            Point2::new(1., 0.),
        ])
        .unwrap();
        assert_eq!(r.min, Point2::new(0., -1.));
        assert_eq!(r.max, Point2::new(2., 1.));
        assert_eq!(bounding_rect(&[]), Err(GeometryError::EmptyPointSet));
    }

    #[test]
    fn rect_overlap_cases() {
        let r = |a: f64, b: f64, c: f64, d: f64| Rect2::from_corners(Point2::new(a, b), Point2::new(c, d));
        assert!(!rects_overlap(&r(0., 0., 1., 1.), &r(1., 0., 2., 1.)));
        assert!(rects_overlap(&r(0., 0., 2., 2.), &r(1., 1., 3., 3.)));
        assert!(!rects_overlap(&r(0., 0., 1., 1.), &r(5., 5., 6., 6.)));
    }

    #[test]
    fn point_segment_distance_clamps() {
        let a = Point2::new(0., 0.);
        let b = Point2::new(10., 0.);
        assert_eq!(point_segment_distance(Point2::new(5., 3.), a, b), 3.0);
        assert_eq!(point_segment_distance(Point2::new(-3., 4.), a, b), 5.0);
    }
}
