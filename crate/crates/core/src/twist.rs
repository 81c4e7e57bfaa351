//! Radius-dependent rotation maps and the shape constructors built on them.
//!
//! `twist_f` fixes every circle about the origin and rotates it by an angle
//! chosen so that the origin, a point, and its image span a triangle of the
//! target area. `midpoint_g` averages a point with its image, producing the
//! right-angle vertex, and `trapezoid_vertices` cuts the apex of the
//! isosceles triangle with a similarity of ratio `1/R`.

use thiserror::Error;

use crate::geometry::{Point, Quadrilateral, Triangle};

/// Relative guard applied to domain lower bounds so arcsin never sees an
/// argument that rounds to 1 or above.
const DOMAIN_GUARD: f64 = 1e-12;

/// Errors raised by the twist maps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwistError {
    /// The radius is at or below the angle function's domain bound.
    #[error("radius {r} outside twist domain (requires r > {r_min})")]
    Domain { r: f64, r_min: f64 },
    /// Trapezoid scale ratios must exceed 1.
    #[error("scale ratio must exceed 1, got {ratio}")]
    InvalidRatio { ratio: f64 },
    /// Target areas must be positive.
    #[error("target area must be positive, got {area}")]
    InvalidArea { area: f64 },
}

/// Target area plus the optional trapezoid scale ratio `R > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistParams {
    area: f64,
    ratio: Option<f64>,
}

impl TwistParams {
    /// Parameters for the triangle maps (no scale ratio).
    pub fn triangle(area: f64) -> Result<Self, TwistError> {
        if !(area > 0.0) || !area.is_finite() {
            return Err(TwistError::InvalidArea { area });
        }
        Ok(TwistParams { area, ratio: None })
    }

    /// Parameters for the trapezoid map with scale ratio `ratio > 1`.
    pub fn trapezoid(area: f64, ratio: f64) -> Result<Self, TwistError> {
        if !(area > 0.0) || !area.is_finite() {
            return Err(TwistError::InvalidArea { area });
        }
        if !(ratio > 1.0) || !ratio.is_finite() {
            return Err(TwistError::InvalidRatio { ratio });
        }
        Ok(TwistParams {
            area,
            ratio: Some(ratio),
        })
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn ratio(&self) -> Option<f64> {
        self.ratio
    }
}

/// The two rotation-angle profiles: `Phi` for triangles, `Psi` for
/// trapezoids (which approaches `Phi` as the ratio grows).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleFunction {
    /// `arcsin(2·area / r²)` on `r > sqrt(2·area)`.
    Phi { area: f64 },
    /// `arcsin((R²/(R²−1)) · 2·area / r²)` on its natural domain.
    Psi { area: f64, ratio: f64 },
}

impl AngleFunction {
    pub fn phi(area: f64) -> Result<Self, TwistError> {
        TwistParams::triangle(area)?;
        Ok(AngleFunction::Phi { area })
    }

    pub fn psi(area: f64, ratio: f64) -> Result<Self, TwistError> {
        TwistParams::trapezoid(area, ratio)?;
        Ok(AngleFunction::Psi { area, ratio })
    }

    /// Domain lower bound including the guard factor.
    pub fn r_min(&self) -> f64 {
        let bound = match *self {
            AngleFunction::Phi { area } => (2.0 * area).sqrt(),
            AngleFunction::Psi { area, ratio } => {
                let factor = ratio * ratio / (ratio * ratio - 1.0);
                (2.0 * area * factor).sqrt()
            }
        };
        bound * (1.0 + DOMAIN_GUARD)
    }

    /// Rotation angle at radius `r`, in `(0, π/2)`.
    pub fn eval(&self, r: f64) -> Result<f64, TwistError> {
        let r_min = self.r_min();
        if !(r > r_min) {
            return Err(TwistError::Domain { r, r_min });
        }
        let arg = match *self {
            AngleFunction::Phi { area } => 2.0 * area / (r * r),
            AngleFunction::Psi { area, ratio } => {
                (ratio * ratio / (ratio * ratio - 1.0)) * 2.0 * area / (r * r)
            }
        };
        Ok(arg.asin())
    }
}

/// Apex angle `arcsin(2·area / r²)` of the isosceles triangle with equal
/// sides `r` and the given area. Strictly decreasing in `r`.
pub fn phi(r: f64, area: f64) -> Result<f64, TwistError> {
    AngleFunction::phi(area)?.eval(r)
}

/// Trapezoid apex angle; exceeds `phi` pointwise and converges to it as the
/// ratio grows.
pub fn psi(r: f64, params: &TwistParams) -> Result<f64, TwistError> {
    let ratio = params.ratio().ok_or(TwistError::InvalidRatio { ratio: f64::NAN })?;
    AngleFunction::psi(params.area(), ratio)?.eval(r)
}

/// FMA-compensated rotation of `p` about the origin. Preserves the radius to
/// a couple of ulps.
fn rotate(p: Point, angle: f64) -> Point {
    let (s, c) = angle.sin_cos();
    let w1 = p.y * s;
    let e1 = p.y.mul_add(s, -w1);
    let x = p.x.mul_add(c, -w1) - e1;
    let w2 = p.y * c;
    let e2 = p.y.mul_add(c, -w2);
    let y = p.x.mul_add(s, w2) + e2;
    Point::new(x, y)
}

/// The twist map: rotates `p` about the origin by `angle_fn(|p|)`.
///
/// Radius-preserving, hence area-preserving (unit Jacobian).
pub fn twist_f(p: Point, angle_fn: &AngleFunction) -> Result<Point, TwistError> {
    let r = p.norm();
    let angle = angle_fn.eval(r)?;
    Ok(rotate(p, angle))
}

/// Inverse of [`twist_f`]: rotates back by the same radius-dependent angle.
pub fn twist_f_inverse(p: Point, angle_fn: &AngleFunction) -> Result<Point, TwistError> {
    let r = p.norm();
    let angle = angle_fn.eval(r)?;
    Ok(rotate(p, -angle))
}

/// Midpoint of `p` and its twist image: `(p + f(p)) / 2`. In polar form this
/// has radius `r·cos(phi(r)/2)` and angle advanced by `phi(r)/2`.
pub fn midpoint_g(p: Point, area: f64) -> Result<Point, TwistError> {
    let f = twist_f(p, &AngleFunction::phi(area)?)?;
    Ok((p + f) * 0.5)
}

/// Jacobian determinant of [`midpoint_g`] at radius `r`:
/// `cos²(phi/2) + area·sin(phi) / sqrt(r⁴ − 4·area²)`.
///
/// Exceeds `cos²(π/8) > 4/5` whenever `phi(r) < π/4`.
pub fn jacobian_g(r: f64, area: f64) -> Result<f64, TwistError> {
    let angle = phi(r, area)?;
    let half = 0.5 * angle;
    let denom = (r * r * r * r - 4.0 * area * area).sqrt();
    Ok(half.cos().powi(2) + area * angle.sin() / denom)
}

/// Distance from a point at radius `r` to its twist image:
/// `2·r·sin(phi(r)/2)`, strictly below `π·area / r`.
pub fn chord_length(r: f64, area: f64) -> Result<f64, TwistError> {
    let angle = phi(r, area)?;
    Ok(2.0 * r * (0.5 * angle).sin())
}

/// Triangle `(origin, p, f(p))`: isosceles at the origin with the target
/// area.
pub fn isosceles_vertices(p: Point, area: f64) -> Result<Triangle, TwistError> {
    let f = twist_f(p, &AngleFunction::phi(area)?)?;
    Ok(Triangle::new(Point::ORIGIN, p, f))
}

/// Triangle `(origin, p, g(p))` with a right angle at the `g` vertex and the
/// target area.
///
/// The midpoint construction halves the area, so `g` is evaluated at twice
/// the requested area; callers never do this bookkeeping themselves.
pub fn right_vertices(p: Point, area: f64) -> Result<Triangle, TwistError> {
    if !(area > 0.0) || !area.is_finite() {
        return Err(TwistError::InvalidArea { area });
    }
    let g = midpoint_g(p, 2.0 * area)?;
    Ok(Triangle::new(Point::ORIGIN, p, g))
}

/// Quadrilateral `(p, f(p), f(p)/R, p/R)` in boundary order: an isosceles
/// trapezoid of the target area with parallel sides in ratio `R`.
pub fn trapezoid_vertices(
    p: Point,
    params: &TwistParams,
) -> Result<Quadrilateral, TwistError> {
    let ratio = params.ratio().ok_or(TwistError::InvalidRatio { ratio: f64::NAN })?;
    let f = twist_f(p, &AngleFunction::psi(params.area(), ratio)?)?;
    Ok(Quadrilateral::new(p, f, f / ratio, p / ratio))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{is_isosceles, is_isosceles_trapezoid, quad_area, triangle_area, Tolerance};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};

    #[test]
    fn phi_known_values() {
        assert_relative_eq!(phi(2.0, 1.0).unwrap(), FRAC_PI_6, epsilon = 1e-15);
        assert!(matches!(
            phi(2f64.sqrt(), 1.0),
            Err(TwistError::Domain { .. })
        ));
        // arcsin(0.02) by its series x + x^3/6 + 3x^5/40 + 15x^7/336.
        let series = 0.02 + 8e-6 / 6.0 + 3.0 * 3.2e-9 / 40.0 + 15.0 * 1.28e-12 / 336.0;
        assert_relative_eq!(phi(10.0, 1.0).unwrap(), series, epsilon = 1e-12);
    }

    #[test]
    fn phi_range_and_monotonicity() {
        let mut last = FRAC_PI_2;
        for i in 0..200 {
            let r = 1.5 + i as f64 * 0.5;
            let v = phi(r, 1.0).unwrap();
            assert!(v > 0.0 && v < FRAC_PI_2);
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn psi_known_values() {
        let params = TwistParams::trapezoid(1.0, 2.0).unwrap();
        let v = psi(2.0, &params).unwrap();
        assert_relative_eq!(v.sin(), 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(v, 0.7297276562, epsilon = 1e-9);

        let far = TwistParams::trapezoid(1.0, 1e6).unwrap();
        let diff = (psi(2.0, &far).unwrap() - phi(2.0, 1.0).unwrap()).abs();
        assert!(diff < 1e-9);

        assert!(matches!(
            psi(1.4, &params),
            Err(TwistError::Domain { .. })
        ));
        assert!(matches!(
            TwistParams::trapezoid(1.0, 1.0),
            Err(TwistError::InvalidRatio { .. })
        ));
    }

    #[test]
    fn psi_exceeds_phi_and_converges() {
        let r = 3.7;
        let base = phi(r, 1.0).unwrap();
        let mut last_gap = f64::INFINITY;
        for ratio in [1e2, 1e4, 1e6] {
            let params = TwistParams::trapezoid(1.0, ratio).unwrap();
            let v = psi(r, &params).unwrap();
            assert!(v > base);
            let gap = v - base;
            assert!(gap < last_gap);
            last_gap = gap;
        }
        assert!(last_gap < 1e-9);
    }

    #[test]
    fn twist_known_rotations() {
        let f = twist_f(Point::new(2.0, 0.0), &AngleFunction::phi(1.0).unwrap()).unwrap();
        assert_relative_eq!(f.x, 3f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(f.y, 1.0, epsilon = 1e-12);

        let f = twist_f(Point::new(0.0, 2.0), &AngleFunction::phi(1.0).unwrap()).unwrap();
        assert_relative_eq!(f.x, -1.0, epsilon = 1e-12);
        assert_relative_eq!(f.y, 3f64.sqrt(), epsilon = 1e-12);

        let f = twist_f(Point::new(2.0, 0.0), &AngleFunction::psi(1.0, 2.0).unwrap()).unwrap();
        assert_relative_eq!(f.x, 2.0 * 5f64.sqrt() / 3.0, epsilon = 1e-12);
        assert_relative_eq!(f.y, 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn twist_inverse_round_trips() {
        let phi1 = AngleFunction::phi(1.0).unwrap();
        let p = Point::new(2.0, 0.0);
        let back = twist_f_inverse(twist_f(p, &phi1).unwrap(), &phi1).unwrap();
        assert_relative_eq!(back.x, p.x, epsilon = 1e-12);
        assert_relative_eq!(back.y, p.y, epsilon = 1e-12);

        let q = Point::new(3.0, -4.0); // |q| = 5
        let back = twist_f_inverse(twist_f(q, &phi1).unwrap(), &phi1).unwrap();
        assert!(back.dist(q) < 1e-12);

        assert!(twist_f(Point::new(1.0, 1.0), &phi1).is_err()); // r = sqrt(2)
    }

    #[test]
    fn midpoint_examples() {
        let g = midpoint_g(Point::new(2.0, 0.0), 1.0).unwrap();
        assert_relative_eq!(g.x, (2.0 + 3f64.sqrt()) / 2.0, epsilon = 1e-12);
        assert_relative_eq!(g.y, 0.5, epsilon = 1e-12);
        assert_relative_eq!(g.norm(), 2.0 * (PI / 12.0).cos(), epsilon = 1e-12);
        assert!(matches!(
            midpoint_g(Point::new(1.0, 0.0), 1.0),
            Err(TwistError::Domain { .. })
        ));
    }

    #[test]
    fn jacobian_known_values() {
        let j = jacobian_g(2.0, 1.0).unwrap();
        let expected = (PI / 12.0).cos().powi(2) + 0.5 / 12f64.sqrt();
        assert_relative_eq!(j, expected, epsilon = 1e-14);
        assert_relative_eq!(jacobian_g(100.0, 1.0).unwrap(), 1.0, epsilon = 1e-3);
        assert!(matches!(
            jacobian_g(1.41, 1.0),
            Err(TwistError::Domain { .. })
        ));
    }

    #[test]
    fn chord_values_and_bound() {
        let c = chord_length(2.0, 1.0).unwrap();
        assert_relative_eq!(c, 4.0 * (PI / 12.0).sin(), epsilon = 1e-14);
        assert!(c < PI / 2.0);
        let c = chord_length(100.0, 1.0).unwrap();
        assert!((c - 0.02).abs() < 1e-5);
        assert!(c < PI / 100.0);
        let c = chord_length(1.5, 1.0).unwrap();
        assert!(c < PI / 1.5);
    }

    #[test]
    fn isosceles_vertices_examples() {
        let tol = Tolerance::default();
        let t = isosceles_vertices(Point::new(2.0, 0.0), 1.0).unwrap();
        assert_relative_eq!(triangle_area(&t), 1.0, epsilon = 1e-12);
        assert!(is_isosceles(&t, 0, tol));

        let t = isosceles_vertices(Point::new(0.0, 3.0), 1.0).unwrap();
        assert_relative_eq!(triangle_area(&t), 1.0, epsilon = 1e-12);
        assert_relative_eq!(t.b.norm(), 3.0, epsilon = 1e-12);
        assert_relative_eq!(t.c.norm(), 3.0, epsilon = 1e-12);

        assert!(matches!(
            isosceles_vertices(Point::new(2.0, 0.0), 2.0),
            Err(TwistError::Domain { .. })
        ));
    }

    #[test]
    fn right_vertices_examples() {
        let tol = Tolerance::default();
        let t = right_vertices(Point::new(2.0, 0.0), 0.5).unwrap();
        assert_relative_eq!(t.c.x, (2.0 + 3f64.sqrt()) / 2.0, epsilon = 1e-12);
        assert_relative_eq!(t.c.y, 0.5, epsilon = 1e-12);
        assert!(crate::geometry::is_right_angled(&t, 2, tol).unwrap());
        assert_relative_eq!(triangle_area(&t), 0.5, epsilon = 1e-12);

        assert!(matches!(
            right_vertices(Point::new(2.0, 0.0), 1.0),
            Err(TwistError::Domain { .. })
        ));

        let t = right_vertices(Point::new(4.0, 0.0), 1.0).unwrap();
        assert_relative_eq!(triangle_area(&t), 1.0, epsilon = 1e-12);
        assert!(crate::geometry::is_right_angled(&t, 2, tol).unwrap());
    }

    #[test]
    fn trapezoid_vertices_examples() {
        let tol = Tolerance::default();
        let params = TwistParams::trapezoid(1.0, 2.0).unwrap();
        let q = trapezoid_vertices(Point::new(2.0, 0.0), &params).unwrap();
        assert_relative_eq!(quad_area(&q).unwrap(), 1.0, epsilon = 1e-12);
        assert!(is_isosceles_trapezoid(&q, tol).unwrap());
        // Parallel chords scale linearly with the radius.
        let top = q.v0.dist(q.v1);
        let bottom = q.v3.dist(q.v2);
        assert_relative_eq!(top / bottom, 2.0, epsilon = 1e-12);

        assert!(matches!(
            trapezoid_vertices(Point::new(1.0, 0.0), &params),
            Err(TwistError::Domain { .. })
        ));
    }
}
