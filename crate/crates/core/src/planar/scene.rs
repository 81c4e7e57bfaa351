//! Scene algebra: a union of primitives minus a union of subtraction terms,
//! with exact membership tests. All primitives are closed (boundary points
//! are members).

use serde::{Deserialize, Serialize};

use crate::geometry::Point;

use super::{Rect, SetError};

/// One closed region primitive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Primitive {
    /// Closed disk.
    Disk { center: Point, radius: f64 },
    /// Axis-aligned closed rectangle.
    Rect { min: Point, max: Point },
    /// Closed half-plane `{ p : normal · p <= offset }`.
    HalfPlane { normal: Point, offset: f64 },
    /// Row of `count` closed disks of radius `dot_radius` at
    /// `start + k·step` for `k = 0..count`.
    PointRow {
        start: Point,
        step: Point,
        count: u32,
        dot_radius: f64,
    },
}

impl Primitive {
    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Primitive::Disk { center, radius } => p.dist_sq(center) <= radius * radius,
            Primitive::Rect { min, max } => {
                p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y
            }
            Primitive::HalfPlane { normal, offset } => normal.dot(p) <= offset,
            Primitive::PointRow {
                start,
                step,
                count,
                dot_radius,
            } => {
                if count == 0 {
                    return false;
                }
                let step_sq = step.norm_sq();
                let t = (p - start).dot(step) / step_sq;
                let k = t.round().clamp(0.0, (count - 1) as f64) as i64;
                let rr = dot_radius * dot_radius;
                // Check the nearest dot and its neighbors; covers dots that
                // overlap when dot_radius exceeds half the step.
                for dk in -1..=1 {
                    let kk = k + dk;
                    if kk < 0 || kk >= count as i64 {
                        continue;
                    }
                    let c = start + step * kk as f64;
                    if p.dist_sq(c) <= rr {
                        return true;
                    }
                }
                false
            }
        }
    }

    fn validate(&self, what: &str, idx: usize) -> Result<(), SetError> {
        let fail = |field: &str, msg: String| {
            Err(SetError::InvalidScene(format!(
                "{what}[{idx}].{field}: {msg}"
            )))
        };
        match *self {
            Primitive::Disk { radius, .. } => {
                if !(radius > 0.0) || !radius.is_finite() {
                    return fail("radius", format!("must be positive, got {radius}"));
                }
            }
            Primitive::Rect { min, max } => {
                if !(max.x > min.x && max.y > min.y) {
                    return fail("max", "rectangle must have positive extent".into());
                }
            }
            Primitive::HalfPlane { normal, offset } => {
                if normal.norm_sq() == 0.0 {
                    return fail("normal", "must be nonzero".into());
                }
                if !offset.is_finite() {
                    return fail("offset", "must be finite".into());
                }
            }
            Primitive::PointRow {
                step,
                count,
                dot_radius,
                ..
            } => {
                if count == 0 {
                    return fail("count", "must be at least 1".into());
                }
                if step.norm_sq() == 0.0 && count > 1 {
                    return fail("step", "must be nonzero for count > 1".into());
                }
                if !(dot_radius > 0.0) || !dot_radius.is_finite() {
                    return fail("dot_radius", format!("must be positive, got {dot_radius}"));
                }
            }
        }
        Ok(())
    }
}

/// A membership-testable region: union of `primitives` minus the union of
/// `subtract`, optionally clipped to `window`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub primitives: Vec<Primitive>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subtract: Vec<Primitive>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Rect>,
}

impl Scene {
    pub fn new(primitives: Vec<Primitive>) -> Self {
        Scene {
            primitives,
            subtract: Vec::new(),
            window: None,
        }
    }

    pub fn with_subtract(mut self, subtract: Vec<Primitive>) -> Self {
        self.subtract = subtract;
        self
    }

    pub fn with_window(mut self, window: Rect) -> Self {
        self.window = Some(window);
        self
    }

    /// Membership, including the clip window when present.
    pub fn contains(&self, p: Point) -> bool {
        if let Some(w) = &self.window {
            if !w.contains(p) {
                return false;
            }
        }
        self.primitives.iter().any(|pr| pr.contains(p))
            && !self.subtract.iter().any(|pr| pr.contains(p))
    }

    pub fn validate(&self) -> Result<(), SetError> {
        for (i, pr) in self.primitives.iter().enumerate() {
            pr.validate("primitives", i)?;
        }
        for (i, pr) in self.subtract.iter().enumerate() {
            pr.validate("subtract", i)?;
        }
        if let Some(w) = &self.window {
            if !(w.max.x > w.min.x && w.max.y > w.min.y) {
                return Err(SetError::InvalidScene(
                    "window: must have positive area".into(),
                ));
            }
        }
        Ok(())
    }

    /// Parses and validates a scene from its JSON document form.
    pub fn from_json(text: &str) -> Result<Scene, SetError> {
        let scene: Scene = serde_json::from_str(text)?;
        scene.validate()?;
        Ok(scene)
    }

    /// Canonical JSON form (field order fixed by the type).
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scene serialization cannot fail")
    }
}
