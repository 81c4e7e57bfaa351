//! Planar primitives and the predicates used to certify found shapes.
//!
//! Everything here is plain coordinate geometry: no twist maps, no set
//! machinery. The certificate verifier is restricted to this module so that
//! it cross-checks constructions through an independent route.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by geometric predicates and conversions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// The origin has no polar angle.
    #[error("the origin (0, 0) has no polar representation")]
    OriginNotRepresentable,
    /// A quadrilateral's boundary crosses itself.
    #[error("quadrilateral boundary is self-intersecting")]
    SelfIntersecting,
    /// A triangle is too flat for the requested predicate.
    #[error("degenerate triangle: area {area:e} is below {min:e}")]
    Degenerate { area: f64, min: f64 },
    /// Coordinates must be finite.
    #[error("coordinates must be finite, got ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
}

/// A point in the plane. Coordinates are lengths in abstract units.
///
/// Serializes as a two-element array `[x, y]`; non-finite coordinates are
/// rejected on deserialization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Euclidean norm.
    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Euclidean distance to `other`.
    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        (self - other).norm_sq()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> [f64; 2] {
        [p.x, p.y]
    }
}

impl TryFrom<[f64; 2]> for Point {
    type Error = GeometryError;

    fn try_from(v: [f64; 2]) -> Result<Self, GeometryError> {
        if v[0].is_finite() && v[1].is_finite() {
            Ok(Point { x: v[0], y: v[1] })
        } else {
            Err(GeometryError::NonFinite { x: v[0], y: v[1] })
        }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, s: f64) -> Point {
        Point::new(self.x / s, self.y / s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Polar form: radius `r > 0`, angle `theta` normalized to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

/// Normalizes an angle into `[0, 2π)`; values that round to exactly 2π map to 0.
pub fn normalize_angle(theta: f64) -> f64 {
    const TAU: f64 = std::f64::consts::TAU;
    let mut t = theta % TAU;
    if t < 0.0 {
        t += TAU;
    }
    if t >= TAU {
        t = 0.0;
    }
    t
}

/// Converts Cartesian coordinates to polar form.
pub fn to_polar(p: Point) -> Result<PolarPoint, GeometryError> {
    if p.x == 0.0 && p.y == 0.0 {
        return Err(GeometryError::OriginNotRepresentable);
    }
    Ok(PolarPoint {
        r: p.norm(),
        theta: normalize_angle(p.y.atan2(p.x)),
    })
}

/// Converts polar form back to Cartesian coordinates.
pub fn from_polar(q: PolarPoint) -> Point {
    Point::new(q.r * q.theta.cos(), q.r * q.theta.sin())
}

/// Absolute plus relative tolerance pair recorded in certificates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Tolerance { abs_tol, rel_tol }
    }

    /// Equality of two nonnegative lengths under this tolerance.
    pub fn len_eq(self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs_tol + self.rel_tol * a.abs().max(b.abs())
    }
}

/// Triangle given by three vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub a: Point,
    pub b: Point,
    pub c: Point,
}

impl Triangle {
    pub fn new(a: Point, b: Point, c: Point) -> Self {
        Triangle { a, b, c }
    }

    pub fn vertex(&self, i: usize) -> Point {
        match i {
            0 => self.a,
            1 => self.b,
            2 => self.c,
            _ => panic!("triangle vertex index {i} out of range"),
        }
    }
}

/// Quadrilateral with vertices in boundary order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrilateral {
    pub v0: Point,
    pub v1: Point,
    pub v2: Point,
    pub v3: Point,
}

impl Quadrilateral {
    pub fn new(v0: Point, v1: Point, v2: Point, v3: Point) -> Self {
        Quadrilateral { v0, v1, v2, v3 }
    }

    pub fn vertices(&self) -> [Point; 4] {
        [self.v0, self.v1, self.v2, self.v3]
    }
}

/// Kahan's FMA-compensated 2x2 determinant `a*b - c*d`, accurate to ~1.5 ulp
/// of the true result even when the products nearly cancel.
fn det2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let w = c * d;
    let e = c.mul_add(d, -w);
    let f = a.mul_add(b, -w);
    f - e
}

/// Cross product of vectors `u` and `v` (compensated).
pub fn cross(u: Point, v: Point) -> f64 {
    det2(u.x, v.y, u.y, v.x)
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    cross(b - a, c - a)
}

/// Unsigned triangle area by the shoelace rule over edge vectors from `a`.
pub fn triangle_area(t: &Triangle) -> f64 {
    0.5 * cross(t.b - t.a, t.c - t.a).abs()
}

/// Strict crossing of open segments (shared endpoints do not count).
fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Unsigned quadrilateral area by the shoelace rule (fan from `v0`).
///
/// Rejects boundary orders whose opposite sides properly cross.
pub fn quad_area(q: &Quadrilateral) -> Result<f64, GeometryError> {
    if segments_cross(q.v0, q.v1, q.v2, q.v3) || segments_cross(q.v1, q.v2, q.v3, q.v0) {
        return Err(GeometryError::SelfIntersecting);
    }
    let t1 = cross(q.v1 - q.v0, q.v2 - q.v0);
    let t2 = cross(q.v2 - q.v0, q.v3 - q.v0);
    Ok(0.5 * (t1 + t2).abs())
}

/// True when the two sides meeting at `apex` (index 0..3) have equal length
/// under `tol`.
pub fn is_isosceles(t: &Triangle, apex: usize, tol: Tolerance) -> bool {
    let v = t.vertex(apex);
    let p = t.vertex((apex + 1) % 3);
    let q = t.vertex((apex + 2) % 3);
    tol.len_eq(v.dist(p), v.dist(q))
}

/// Position noise floor for points of magnitude `m`: a coordinate stored in
/// an f64 is only determined to about `eps * m`, so derived products cannot
/// be resolved tighter than this allows.
fn coord_noise(m: f64) -> f64 {
    8.0 * f64::EPSILON * m
}

fn max_coord_mag(pts: &[Point]) -> f64 {
    pts.iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(0.0, f64::max)
}

/// True when the angle at `corner` (index 0..3) is right under `tol`.
///
/// The dot product of the two edge vectors at the corner is compared against
/// `abs_tol + rel_tol * |u||v|` plus the coordinate noise floor; the floor
/// keeps large-coordinate configurations from being rejected for deviations
/// below what f64 vertices can represent.
pub fn is_right_angled(
    t: &Triangle,
    corner: usize,
    tol: Tolerance,
) -> Result<bool, GeometryError> {
    let area = triangle_area(t);
    if area <= tol.abs_tol {
        return Err(GeometryError::Degenerate {
            area,
            min: tol.abs_tol,
        });
    }
    let v = t.vertex(corner);
    let u = t.vertex((corner + 1) % 3) - v;
    let w = t.vertex((corner + 2) % 3) - v;
    let dot = det2(u.x, w.x, -u.y, w.y); // u.x*w.x + u.y*w.y, compensated
    let scale = u.norm() * w.norm();
    let floor = coord_noise(max_coord_mag(&[t.a, t.b, t.c])) * (u.norm() + w.norm());
    Ok(dot.abs() <= tol.abs_tol + tol.rel_tol * scale + floor)
}

/// Angle-like parallelism test: cross product normalized by the product of
/// the side lengths, so long sides are not unfairly rejected.
fn parallel(u: Point, w: Point, noise: f64, tol: Tolerance) -> bool {
    let c = cross(u, w).abs();
    c <= tol.rel_tol * u.norm() * w.norm() + noise * (u.norm() + w.norm())
}

/// True when `q` is an isosceles trapezoid under `tol`: exactly one pair of
/// opposite sides parallel, that pair of distinct lengths (parallelograms
/// excluded), and legs of equal length.
///
/// Near-degenerate quadrilaterals return `false`; crossing boundary orders
/// are an error.
pub fn is_isosceles_trapezoid(
    q: &Quadrilateral,
    tol: Tolerance,
) -> Result<bool, GeometryError> {
    let area = quad_area(q)?;
    if area <= tol.abs_tol {
        return Ok(false);
    }
    let s = [
        q.v1 - q.v0,
        q.v2 - q.v1,
        q.v3 - q.v2,
        q.v0 - q.v3,
    ];
    let len: Vec<f64> = s.iter().map(|v| v.norm()).collect();
    if len.iter().any(|&l| l == 0.0) {
        return Ok(false);
    }
    let noise = coord_noise(max_coord_mag(&q.vertices()));
    let par02 = parallel(s[0], s[2], noise, tol);
    let par13 = parallel(s[1], s[3], noise, tol);
    if par02 == par13 {
        // Neither a trapezoid (no parallel pair) nor one (parallelogram).
        return Ok(false);
    }
    let (b0, b1, l0, l1) = if par02 {
        (len[0], len[2], len[1], len[3])
    } else {
        (len[1], len[3], len[0], len[2])
    };
    Ok(!tol.len_eq(b0, b1) && tol.len_eq(l0, l1))
}
