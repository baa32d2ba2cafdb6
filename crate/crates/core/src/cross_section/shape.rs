use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Planar region `ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Disc { center: [f64; 2], radius: f64 },
    /// Simple polygon, vertices in order (either orientation).
    Polygon { vertices: Vec<[f64; 2]> },
    /// Hard-wall stand-in for a segment of the given length along `t₂`: a
    /// rectangle of aspect ratio [`SEGMENT_ASPECT`]`:1` centered at `center`.
    Segment { center: [f64; 2], length: f64 },
}

pub const SEGMENT_ASPECT: f64 = 100.0;

/// Cross section with its scaling center `t⁰` and grid spacing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub shape: Shape,
    pub scaling_center: [f64; 2],
    pub grid_spacing: f64,
}

/// The radial scaling `l_α(t) = α(t − t⁰) + t⁰`.
#[inline]
pub fn scale_point(t: [f64; 2], t0: [f64; 2], alpha: f64) -> [f64; 2] {
    [alpha * (t[0] - t0[0]) + t0[0], alpha * (t[1] - t0[1]) + t0[1]]
}

impl Shape {
    pub fn contains(&self, p: [f64; 2]) -> bool {
        match self {
            Shape::Disc { center, radius } => {
                let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
                dx * dx + dy * dy < radius * radius
            }
            Shape::Polygon { vertices } => {
                // crossing number; points on edges count as outside
                let n = vertices.len();
                let mut inside = false;
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    if on_segment(p, a, b) {
                        return false;
                    }
                    if (a[1] > p[1]) != (b[1] > p[1]) {
                        let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                        if p[0] < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
            Shape::Segment { center, length } => {
                let (hx, hy) = (0.5 * length, 0.5 * length / SEGMENT_ASPECT);
                (p[0] - center[0]).abs() < hx && (p[1] - center[1]).abs() < hy
            }
        }
    }

    pub fn closure_contains(&self, p: [f64; 2]) -> bool {
        match self {
            Shape::Disc { center, radius } => (p[0] - center[0]).hypot(p[1] - center[1]) <= radius * (1.0 + 1e-12),
            Shape::Polygon { vertices } => {
                self.contains(p) || (0..vertices.len()).any(|i| on_segment(p, vertices[i], vertices[(i + 1) % vertices.len()]))
            }
            Shape::Segment { center, length } => {
                let (hx, hy) = (0.5 * length, 0.5 * length / SEGMENT_ASPECT);
                (p[0] - center[0]).abs() <= hx && (p[1] - center[1]).abs() <= hy
            }
        }
    }

    /// Axis-aligned bounding box `[xmin, xmax, ymin, ymax]`.
    pub fn bounding_box(&self) -> [f64; 4] {
        match self {
            Shape::Disc { center, radius } => [
                center[0] - radius,
                center[0] + radius,
                center[1] - radius,
                center[1] + radius,
            ],
            Shape::Polygon { vertices } => vertices.iter().fold(
                [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY],
                |b, v| [b[0].min(v[0]), b[1].max(v[0]), b[2].min(v[1]), b[3].max(v[1])],
            ),
            Shape::Segment { center, length } => {
                let (hx, hy) = (0.5 * length, 0.5 * length / SEGMENT_ASPECT);
                [center[0] - hx, center[0] + hx, center[1] - hy, center[1] + hy]
            }
        }
    }

    pub fn scaled(&self, t0: [f64; 2], alpha: f64) -> Shape {
        match self {
            Shape::Disc { center, radius } => Shape::Disc {
                center: scale_point(*center, t0, alpha),
                radius: alpha * radius,
            },
            Shape::Polygon { vertices } => Shape::Polygon {
                vertices: vertices.iter().map(|&v| scale_point(v, t0, alpha)).collect(),
            },
            Shape::Segment { center, length } => Shape::Segment {
                center: scale_point(*center, t0, alpha),
                length: alpha * length,
            },
        }
    }

    /// Points on the boundary, `n` per edge (or around the circle).
    pub fn boundary_samples(&self, n: usize) -> Vec<[f64; 2]> {
        let polygon_samples = |v: &[[f64; 2]]| -> Vec<[f64; 2]> {
            let mut out = Vec::with_capacity(v.len() * n);
            for i in 0..v.len() {
                let (a, b) = (v[i], v[(i + 1) % v.len()]);
                for k in 0..n {
                    let s = k as f64 / n as f64;
                    out.push([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]);
                }
            }
            out
        };
        match self {
            Shape::Disc { center, radius } => (0..n)
                .map(|k| {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                    [center[0] + radius * th.cos(), center[1] + radius * th.sin()]
                })
                .collect(),
            Shape::Polygon { vertices } => polygon_samples(vertices),
            Shape::Segment { .. } => {
                let [x0, x1, y0, y1] = self.bounding_box();
                polygon_samples(&[[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |p: &[f64; 2]| p[0].is_finite() && p[1].is_finite();
        match self {
            Shape::Disc { center, radius } => {
                if !(finite(center) && *radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidInput("disc needs a finite center and radius > 0".into()));
                }
            }
            Shape::Polygon { vertices } => {
                if vertices.len() < 3 || !vertices.iter().all(finite) {
                    return Err(Error::InvalidInput("polygon needs at least 3 finite vertices".into()));
                }
                let area: f64 = (0..vertices.len())
                    .map(|i| {
                        let (a, b) = (vertices[i], vertices[(i + 1) % vertices.len()]);
                        a[0] * b[1] - b[0] * a[1]
                    })
                    .sum();
                if area.abs() < 1e-14 {
                    return Err(Error::InvalidInput("polygon has zero area".into()));
                }
            }
            Shape::Segment { center, length } => {
                if !(finite(center) && *length > 0.0 && length.is_finite()) {
                    return Err(Error::InvalidInput("segment needs a finite center and length > 0".into()));
                }
            }
        }
        Ok(())
    }
}

fn on_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    let scale = (b[0] - a[0]).abs() + (b[1] - a[1]).abs();
    if cross.abs() > 1e-12 * scale.max(1.0) {
        return false;
    }
    p[0] >= a[0].min(b[0]) - 1e-14
        && p[0] <= a[0].max(b[0]) + 1e-14
        && p[1] >= a[1].min(b[1]) - 1e-14
        && p[1] <= a[1].max(b[1]) + 1e-14
}

impl CrossSection {
    pub fn new(shape: Shape, scaling_center: [f64; 2], grid_spacing: f64) -> Result<Self> {
        let cs = Self {
            shape,
            scaling_center,
            grid_spacing,
        };
        cs.validate()?;
        Ok(cs)
    }

    pub fn disc(center: [f64; 2], radius: f64, scaling_center: [f64; 2], h: f64) -> Result<Self> {
        Self::new(Shape::Disc { center, radius }, scaling_center, h)
    }

    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        if !(self.grid_spacing > 0.0 && self.grid_spacing.is_finite()) {
            return Err(Error::InvalidInput("grid_spacing must be positive".into()));
        }
        if !(self.scaling_center[0].is_finite() && self.scaling_center[1].is_finite()) {
            return Err(Error::InvalidInput("scaling_center must be finite".into()));
        }
        Ok(())
    }

    pub fn with_spacing(&self, h: f64) -> Self {
        Self {
            grid_spacing: h,
            ..self.clone()
        }
    }

    /// Whether `t⁰` lies in the closure of `ω`.
    pub fn center_in_closure(&self) -> bool {
        self.shape.closure_contains(self.scaling_center)
    }

    /// Sampled star-shapedness about `t⁰`: every segment from `t⁰` to a boundary
    /// sample stays in the closure of `ω`. This implies the nesting
    /// `ω(α) ⊂ ω(α′)` for `α ≤ α′`.
    pub fn is_star_shaped(&self, boundary_samples: usize, radial_samples: usize) -> bool {
        let t0 = self.scaling_center;
        self.shape.boundary_samples(boundary_samples).iter().all(|b| {
            (1..radial_samples).all(|k| {
                let l = k as f64 / radial_samples as f64;
                self.shape.closure_contains([t0[0] + l * (b[0] - t0[0]), t0[1] + l * (b[1] - t0[1])])
            })
        })
    }

    /// Warnings about the nesting hypothesis; empty when it holds.
    pub fn nesting_warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.center_in_closure() {
            w.push(format!("scaling center {:?} lies outside the closure of the cross section", self.scaling_center));
        }
        if !self.is_star_shaped(256, 64) {
            w.push("cross section is not star-shaped about its scaling center".into());
        }
        w
    }
}

/// Maps every vertex / radius by `l_α`; the scaling center is preserved.
pub fn scale_cross_section(cs: &CrossSection, alpha: f64) -> Result<CrossSection> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!("scaling factor must be > 0, got {alpha}")));
    }
    Ok(CrossSection {
        shape: cs.shape.scaled(cs.scaling_center, alpha),
        ..cs.clone()
    })
}
