//! Closed-set intersection models for disks, axis segments, rectangles, circle
//! arcs and the 3D box / parallelepiped families.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::graph::Graph;
use crate::num::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("cannot intersect a {0} with a {1}")]
    IncompatibleKinds(&'static str, &'static str),
    #[error("invalid {kind}: {reason}")]
    InvalidShape { kind: &'static str, reason: String },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("a {shape} does not belong in a {dim} model")]
    WrongDimension { shape: &'static str, dim: Dimension },
    #[error("unknown paper model {0:?}")]
    UnknownModel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Two,
    Three,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Two => "2d",
            Dimension::Three => "3d",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape<T> {
    Disk { x: T, y: T, r: T },
    HSeg { y: T, x1: T, x2: T },
    VSeg { x: T, y1: T, y2: T },
    /// Counterclockwise from `start` to `end`, in degrees; equal endpoints
    /// mean the whole circle.
    Arc { start: T, end: T },
    Rect { x1: T, y1: T, x2: T, y2: T },
    Box { x1: T, y1: T, z1: T, x2: T, y2: T, z2: T },
    /// Prism of height `z` over the parallelogram with corners `(a,1)`,
    /// `(b,0)`, `(c,0)`, `(d,1)`, where `d - a = c - b`.
    Spp { a: T, b: T, c: T, d: T, z: T },
    /// Segment from `(a,1,z)` to `(b,0,z)`.
    SppSeg { a: T, b: T, z: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Planar,
    Arc,
    Solid,
}

fn int<T: Scalar>(n: u32) -> T {
    let mut out = T::zero();
    for bit in (0..32).rev() {
        out = out.clone() + out;
        if n >> bit & 1 == 1 {
            out = out + T::one();
        }
    }
    out
}

fn min<T: Scalar>(a: &T, b: &T) -> T {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

fn max<T: Scalar>(a: &T, b: &T) -> T {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

fn clamp<T: Scalar>(v: &T, lo: &T, hi: &T) -> T {
    min(&max(v, lo), hi)
}

fn ranges_meet<T: Scalar>(a1: &T, a2: &T, b1: &T, b2: &T) -> bool {
    a1 <= b2 && b1 <= a2
}

fn angle_mod<T: Scalar>(v: T) -> T {
    let full = int::<T>(360);
    let r = v % full.clone();
    if r.is_negative() {
        r + full
    } else {
        r
    }
}

/// Axis-aligned rectangle view of a planar non-disk shape.
struct Bounds<T> {
    x1: T,
    y1: T,
    x2: T,
    y2: T,
}

/// A convex polygon (possibly a segment) in the xy-plane times a z-interval.
struct Prism<T> {
    poly: Vec<(T, T)>,
    z1: T,
    z2: T,
}

impl<T: Scalar> Shape<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Shape::Disk { .. } => "disk",
            Shape::HSeg { .. } => "hseg",
            Shape::VSeg { .. } => "vseg",
            Shape::Arc { .. } => "arc",
            Shape::Rect { .. } => "rect",
            Shape::Box { .. } => "box",
            Shape::Spp { .. } => "spp",
            Shape::SppSeg { .. } => "sppseg",
        }
    }

    pub fn dimension(&self) -> Dimension {
        match self.family() {
            Family::Solid => Dimension::Three,
            _ => Dimension::Two,
        }
    }

    fn family(&self) -> Family {
        match self {
            Shape::Arc { .. } => Family::Arc,
            Shape::Box { .. } | Shape::Spp { .. } | Shape::SppSeg { .. } => Family::Solid,
            _ => Family::Planar,
        }
    }

    /// Checks the ordering constraints of the shape's parameters.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let bad = |reason: &str| {
            Err(GeometryError::InvalidShape {
                kind: self.kind(),
                reason: reason.to_string(),
            })
        };
        match self {
            Shape::Disk { r, .. } if r.is_negative() => bad("negative radius"),
            Shape::HSeg { x1, x2, .. } if x1 > x2 => bad("x1 > x2"),
            Shape::VSeg { y1, y2, .. } if y1 > y2 => bad("y1 > y2"),
            Shape::Rect { x1, y1, x2, y2 } if x1 > x2 || y1 > y2 => bad("corners out of order"),
            Shape::Box { x1, y1, z1, x2, y2, z2 } if x1 > x2 || y1 > y2 || z1 > z2 => bad("corners out of order"),
            Shape::Spp { a, b, c, d, .. } if d.clone() - a.clone() != c.clone() - b.clone() => {
                bad("not a parallelogram (d - a != c - b)")
            }
            Shape::Spp { z, .. } | Shape::SppSeg { z, .. } if z.is_negative() => bad("negative height"),
            _ => Ok(()),
        }
    }

    fn bounds(&self) -> Bounds<T> {
        match self.clone() {
            Shape::HSeg { y, x1, x2 } => Bounds { x1, y1: y.clone(), x2, y2: y },
            Shape::VSeg { x, y1, y2 } => Bounds { x1: x.clone(), y1, x2: x, y2 },
            Shape::Rect { x1, y1, x2, y2 } => Bounds { x1, y1, x2, y2 },
            _ => unreachable!("bounds of a planar non-disk shape"),
        }
    }

    fn prism(&self) -> Prism<T> {
        let zero = T::zero();
        let one = T::one();
        match self.clone() {
            Shape::Box { x1, y1, z1, x2, y2, z2 } => Prism {
                poly: vec![
                    (x1.clone(), y1.clone()),
                    (x2.clone(), y1.clone()),
                    (x2, y2.clone()),
                    (x1, y2),
                ],
                z1,
                z2,
            },
            Shape::Spp { a, b, c, d, z } => Prism {
                poly: vec![(b, zero.clone()), (c, zero.clone()), (d, one.clone()), (a, one)],
                z1: zero,
                z2: z,
            },
            Shape::SppSeg { a, b, z } => Prism {
                poly: vec![(b, zero), (a, one)],
                z1: z.clone(),
                z2: z,
            },
            _ => unreachable!("prism of a solid shape"),
        }
    }
}

fn disk_meets_bounds<T: Scalar>(x: &T, y: &T, r: &T, b: &Bounds<T>) -> bool {
    let dx = clamp(x, &b.x1, &b.x2) - x.clone();
    let dy = clamp(y, &b.y1, &b.y2) - y.clone();
    dx.clone() * dx + dy.clone() * dy <= r.clone() * r.clone()
}

fn on_arc<T: Scalar>(p: &T, start: &T, span: &T) -> bool {
    angle_mod(p.clone() - start.clone()) <= *span
}

fn arc_span<T: Scalar>(start: &T, end: &T) -> T {
    let s = angle_mod(end.clone() - start.clone());
    if s.is_zero() {
        int(360)
    } else {
        s
    }
}

fn projection<T: Scalar>(poly: &[(T, T)], axis: &(T, T)) -> (T, T) {
    let dots = poly.iter().map(|(x, y)| x.clone() * axis.0.clone() + y.clone() * axis.1.clone());
    let mut lo: Option<T> = None;
    let mut hi: Option<T> = None;
    for d in dots {
        lo = Some(lo.map_or(d.clone(), |l| min(&l, &d)));
        hi = Some(hi.map_or(d.clone(), |h| max(&h, &d)));
    }
    (lo.expect("nonempty polygon"), hi.expect("nonempty polygon"))
}

/// Separating-axis test for convex polygons given in cyclic order; segments
/// and points are allowed.
fn polygons_meet<T: Scalar>(p: &[(T, T)], q: &[(T, T)]) -> bool {
    let mut axes = Vec::new();
    for poly in [p, q] {
        for i in 0..poly.len() {
            let (a, b) = (&poly[i], &poly[(i + 1) % poly.len()]);
            let dx = b.0.clone() - a.0.clone();
            let dy = b.1.clone() - a.1.clone();
            if dx.is_zero() && dy.is_zero() {
                continue;
            }
            axes.push((-dy.clone(), dx.clone()));
            axes.push((dx, dy));
        }
    }
    axes.push((q[0].0.clone() - p[0].0.clone(), q[0].1.clone() - p[0].1.clone()));
    axes.iter().all(|axis| {
        let (p1, p2) = projection(p, axis);
        let (q1, q2) = projection(q, axis);
        ranges_meet(&p1, &p2, &q1, &q2)
    })
}

/// Whether two shapes share a point. Planar shapes (disks, segments,
/// rectangles) mix freely, as do the solid shapes; arcs only meet arcs.
pub fn intersects<T: Scalar>(s1: &Shape<T>, s2: &Shape<T>) -> Result<bool, GeometryError> {
    if s1.family() != s2.family() {
        return Err(GeometryError::IncompatibleKinds(s1.kind(), s2.kind()));
    }
    Ok(match (s1, s2) {
        (Shape::Arc { start: a1, end: e1 }, Shape::Arc { start: a2, end: e2 }) => {
            on_arc(a2, a1, &arc_span(a1, e1)) || on_arc(a1, a2, &arc_span(a2, e2))
        }
        (Shape::Disk { x: x1, y: y1, r: r1 }, Shape::Disk { x: x2, y: y2, r: r2 }) => {
            let dx = x1.clone() - x2.clone();
            let dy = y1.clone() - y2.clone();
            let r = r1.clone() + r2.clone();
            dx.clone() * dx + dy.clone() * dy <= r.clone() * r
        }
        (Shape::Disk { x, y, r }, other) | (other, Shape::Disk { x, y, r }) => disk_meets_bounds(x, y, r, &other.bounds()),
        _ if s1.family() == Family::Planar => {
            let (a, b) = (s1.bounds(), s2.bounds());
            ranges_meet(&a.x1, &a.x2, &b.x1, &b.x2) && ranges_meet(&a.y1, &a.y2, &b.y1, &b.y2)
        }
        _ => {
            let (a, b) = (s1.prism(), s2.prism());
            ranges_meet(&a.z1, &a.z2, &b.z1, &b.z2) && polygons_meet(&a.poly, &b.poly)
        }
    })
}

/// Labeled shapes of one dimension; arcs may not share a model with other
/// planar shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricModel<T> {
    dimension: Dimension,
    labels: Vec<String>,
    shapes: Vec<Shape<T>>,
}

impl<T: Scalar> GeometricModel<T> {
    pub fn new(dimension: Dimension) -> Self {
        GeometricModel {
            dimension,
            labels: Vec::new(),
            shapes: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, shape: Shape<T>) -> Result<(), GeometryError> {
        let label = label.into();
        shape.validate()?;
        if shape.dimension() != self.dimension {
            return Err(GeometryError::WrongDimension {
                shape: shape.kind(),
                dim: self.dimension,
            });
        }
        if let Some(first) = self.shapes.first() {
            if first.family() != shape.family() {
                return Err(GeometryError::IncompatibleKinds(first.kind(), shape.kind()));
            }
        }
        if self.labels.contains(&label) {
            return Err(GeometryError::DuplicateLabel(label));
        }
        self.labels.push(label);
        self.shapes.push(shape);
        Ok(())
    }

    pub fn with(mut self, label: &str, shape: Shape<T>) -> Result<Self, GeometryError> {
        self.push(label, shape)?;
        Ok(self)
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn shapes(&self) -> &[Shape<T>] {
        &self.shapes
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Shape<T>)> {
        self.labels.iter().map(String::as_str).zip(&self.shapes)
    }

    pub fn get(&self, label: &str) -> Option<&Shape<T>> {
        self.labels.iter().position(|l| l == label).map(|i| &self.shapes[i])
    }

    pub fn get_mut(&mut self, label: &str) -> Option<&mut Shape<T>> {
        self.labels.iter().position(|l| l == label).map(|i| &mut self.shapes[i])
    }
}

/// The intersection graph of the model.
pub fn model_graph<T: Scalar>(m: &GeometricModel<T>) -> Graph {
    let mut g = Graph::empty(&m.labels).expect("labels are distinct");
    for i in 0..m.len() {
        for j in (i + 1)..m.len() {
            if intersects(&m.shapes[i], &m.shapes[j]).expect("model shapes are compatible") {
                g.set_edge(i, j, true);
            }
        }
    }
    g
}

pub const PAPER_MODELS: [&str; 5] = ["disks_h", "segments_h", "arcs_h", "squares_h", "cubes_h"];

fn num<T: Scalar>(v: i32) -> T {
    let m = int::<T>(v.unsigned_abs());
    if v < 0 {
        -m
    } else {
        m
    }
}

/// Squares as `(label, x, y, side)`.
const SQUARES: [(&str, i32, i32, i32); 8] = [
    ("4", 10, 30, 30),
    ("3", 0, 25, 40),
    ("7", 30, 10, 30),
    ("8", 25, 0, 40),
    ("2", 30, 50, 30),
    ("1", 25, 50, 40),
    ("5", 50, 30, 30),
    ("6", 50, 25, 40),
];

/// The bundled models of the graph H: disks, axis segments, arcs, squares and cubes.
pub fn paper_model<T: Scalar>(name: &str) -> Result<GeometricModel<T>, GeometryError> {
    let mut m;
    match name {
        "disks_h" => {
            m = GeometricModel::new(Dimension::Two);
            for (l, x, y, r) in [
                ("1", 45, 60, 20),
                ("2", 45, 55, 15),
                ("3", 20, 35, 20),
                ("4", 25, 35, 15),
                ("5", 65, 35, 15),
                ("6", 70, 35, 20),
                ("7", 45, 15, 15),
                ("8", 45, 10, 20),
            ] {
                m.push(l, Shape::Disk { x: num(x), y: num(y), r: num(r) })?;
            }
        }
        "segments_h" => {
            m = GeometricModel::new(Dimension::Two);
            for (l, vertical, at, lo, hi) in [
                ("1", false, 55, 0, 80),
                ("2", false, 55, 10, 70),
                ("3", true, 25, 0, 80),
                ("4", true, 25, 10, 70),
                ("5", true, 55, 10, 70),
                ("6", true, 55, 0, 80),
                ("7", false, 25, 10, 70),
                ("8", false, 25, 0, 80),
            ] {
                let shape = if vertical {
                    Shape::VSeg { x: num(at), y1: num(lo), y2: num(hi) }
                } else {
                    Shape::HSeg { y: num(at), x1: num(lo), x2: num(hi) }
                };
                m.push(l, shape)?;
            }
        }
        "arcs_h" => {
            m = GeometricModel::new(Dimension::Two);
            for (l, s, e) in [
                ("1", 80, 100),
                ("2", 75, 105),
                ("3", 95, 265),
                ("4", 97, 263),
                ("5", 275, 85),
                ("6", 278, 82),
                ("7", 260, 280),
                ("8", 255, 285),
            ] {
                m.push(l, Shape::Arc { start: num(s), end: num(e) })?;
            }
        }
        "squares_h" => {
            m = GeometricModel::new(Dimension::Two);
            for (l, x, y, s) in SQUARES {
                m.push(l, Shape::Rect { x1: num(x), y1: num(y), x2: num(x + s), y2: num(y + s) })?;
            }
        }
        "cubes_h" => {
            m = GeometricModel::new(Dimension::Three);
            for (l, x, y, s) in SQUARES {
                m.push(
                    l,
                    Shape::Box {
                        x1: num(x),
                        y1: num(y),
                        z1: T::zero(),
                        x2: num(x + s),
                        y2: num(y + s),
                        z2: num(s),
                    },
                )?;
            }
        }
        other => return Err(GeometryError::UnknownModel(other.to_string())),
    }
    Ok(m)
}

/// Draws the model (the xy footprint for solids; arcs on a circle of radius
/// 40) with y pointing up.
pub fn render_svg<T: Scalar + Into<f64>>(m: &GeometricModel<T>) -> String {
    render_svg_with(m, |v| v.clone().into())
}

/// [`render_svg`] with an explicit conversion to floating point for drawing.
pub fn render_svg_with<T: Scalar>(m: &GeometricModel<T>, to_f64: impl Fn(&T) -> f64) -> String {
    let f = |v: &T| to_f64(v);
    let radius = 40.0;
    let mut items = Vec::new();
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    let mut extend = |x: f64, y: f64| {
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    };
    for (i, (label, shape)) in m.iter().enumerate() {
        let (body, tx, ty) = match shape {
            Shape::Disk { x, y, r } => {
                let (x, y, r) = (f(x), f(y), f(r));
                extend(x - r, y - r);
                extend(x + r, y + r);
                (format!(r#"<circle cx="{x}" cy="{}" r="{r}"/>"#, -y), x, y)
            }
            Shape::Arc { start, end } => {
                let s = f(start);
                let span = f(&arc_span(start, end));
                let r = radius + 3.0 * i as f64;
                let pt = |deg: f64| (r * deg.to_radians().cos(), r * deg.to_radians().sin());
                let (x1, y1) = pt(s);
                let (x2, y2) = pt(s + span);
                let (mx, my) = pt(s + span / 2.0);
                extend(-r, -r);
                extend(r, r);
                let large = u8::from(span > 180.0);
                (
                    format!(
                        r#"<path d="M {x1} {} A {r} {r} 0 {large} 0 {x2} {}" fill="none"/>"#,
                        -y1, -y2
                    ),
                    mx,
                    my,
                )
            }
            Shape::Box { .. } | Shape::Spp { .. } | Shape::SppSeg { .. } => {
                let p = shape.prism();
                let pts: Vec<(f64, f64)> = p.poly.iter().map(|(x, y)| (f(x), f(y))).collect();
                for &(x, y) in &pts {
                    extend(x, y);
                }
                let list: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{}", -y)).collect();
                let (cx, cy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
                let n = pts.len() as f64;
                (format!(r#"<polygon points="{}" fill="none"/>"#, list.join(" ")), cx / n, cy / n)
            }
            planar => {
                let b = planar.bounds();
                let (x1, y1, x2, y2) = (f(&b.x1), f(&b.y1), f(&b.x2), f(&b.y2));
                extend(x1, y1);
                extend(x2, y2);
                let body = if x1 == x2 || y1 == y2 {
                    format!(r#"<line x1="{x1}" y1="{}" x2="{x2}" y2="{}"/>"#, -y1, -y2)
                } else {
                    format!(
                        r#"<rect x="{x1}" y="{}" width="{}" height="{}" fill="none"/>"#,
                        -y2,
                        x2 - x1,
                        y2 - y1
                    )
                };
                (body, (x1 + x2) / 2.0, (y1 + y2) / 2.0)
            }
        };
        items.push(format!(
            "  <g id=\"{label}\">{body}<text x=\"{tx}\" y=\"{}\" font-size=\"4\">{label}</text></g>",
            -ty
        ));
    }
    if items.is_empty() {
        (lo_x, lo_y, hi_x, hi_y) = (0.0, 0.0, 1.0, 1.0);
    }
    let pad = 5.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" fill="none" stroke="black" stroke-width="0.5">"#,
        lo_x - pad,
        -hi_y - pad,
        hi_x - lo_x + 2.0 * pad,
        hi_y - lo_y + 2.0 * pad
    );
    for item in items {
        let _ = writeln!(out, "{item}");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_h;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(v: i64) -> Q {
        Q::from_integer(v)
    }

    fn disk(x: i64, y: i64, r: i64) -> Shape<Q> {
        Shape::Disk { x: q(x), y: q(y), r: q(r) }
    }

    #[test]
    fn disk_examples() {
        assert!(intersects(&disk(20, 35, 20), &disk(45, 15, 15)).unwrap());
        assert!(!intersects(&disk(20, 35, 20), &disk(65, 35, 15)).unwrap());
        // tangent
        assert!(intersects(&disk(0, 0, 3), &disk(5, 0, 2)).unwrap());
        assert!(!intersects(&disk(0, 0, 3), &disk(5, 0, 1)).unwrap());
    }

    #[test]
    fn segment_examples() {
        let v = Shape::VSeg { x: q(25), y1: q(0), y2: q(80) };
        let h = Shape::HSeg { y: q(25), x1: q(0), x2: q(80) };
        let v_short = Shape::VSeg { x: q(25), y1: q(10), y2: q(70) };
        let v_far = Shape::VSeg { x: q(26), y1: q(10), y2: q(70) };
        assert!(intersects(&v, &h).unwrap());
        assert!(intersects(&v, &v_short).unwrap());
        assert!(!intersects(&v, &v_far).unwrap());
        let h_short = Shape::HSeg { y: q(25), x1: q(30), x2: q(80) };
        assert!(!intersects(&v, &h_short).unwrap());
        let touching = Shape::HSeg { y: q(25), x1: q(25), x2: q(80) };
        assert!(intersects(&v, &touching).unwrap());
    }

    #[test]
    fn arc_examples() {
        let a = Shape::Arc { start: q(95), end: q(265) };
        let b = Shape::Arc { start: q(275), end: q(85) };
        assert!(!intersects(&a, &b).unwrap());
        let c = Shape::Arc { start: q(260), end: q(280) };
        assert!(intersects(&a, &c).unwrap());
        assert!(intersects(&b, &c).unwrap());
        let full = Shape::Arc { start: q(10), end: q(10) };
        assert!(intersects(&full, &a).unwrap());
    }

    #[test]
    fn identical_shapes_meet() {
        let shapes = [
            disk(1, 2, 0),
            Shape::HSeg { y: q(1), x1: q(0), x2: q(0) },
            Shape::Arc { start: q(1), end: q(2) },
            Shape::Rect { x1: q(0), y1: q(0), x2: q(1), y2: q(1) },
            Shape::Box { x1: q(0), y1: q(0), z1: q(0), x2: q(1), y2: q(1), z2: q(1) },
            Shape::Spp { a: q(1), b: q(0), c: q(2), d: q(3), z: q(1) },
            Shape::SppSeg { a: q(1), b: q(0), z: q(1) },
        ];
        for s in &shapes {
            assert!(intersects(s, s).unwrap(), "{s:?}");
        }
    }

    #[test]
    fn incompatible_kinds() {
        let arc = Shape::Arc { start: q(1), end: q(2) };
        let cube = Shape::Box { x1: q(0), y1: q(0), z1: q(0), x2: q(1), y2: q(1), z2: q(1) };
        assert_eq!(
            intersects(&disk(0, 0, 1), &cube),
            Err(GeometryError::IncompatibleKinds("disk", "box"))
        );
        assert!(intersects(&disk(0, 0, 1), &arc).is_err());
        let mut m = GeometricModel::new(Dimension::Two);
        m.push("a", disk(0, 0, 1)).unwrap();
        assert!(m.push("b", arc).is_err());
        assert!(matches!(m.push("c", cube), Err(GeometryError::WrongDimension { .. })));
        assert_eq!(m.push("a", disk(1, 1, 1)), Err(GeometryError::DuplicateLabel("a".into())));
    }

    #[test]
    fn validation() {
        let bad = Shape::Spp { a: q(0), b: q(0), c: q(2), d: q(3), z: q(1) };
        assert!(bad.validate().is_err());
        assert!(disk(0, 0, -1).validate().is_err());
        assert!(Shape::HSeg { y: q(0), x1: q(2), x2: q(1) }.validate().is_err());
    }

    #[test]
    fn parallelepipeds() {
        let tall = Shape::Spp { a: q(0), b: q(0), c: q(2), d: q(2), z: q(5) };
        let slanted = Shape::Spp { a: q(4), b: q(1), c: q(2), d: q(5), z: q(1) };
        // slanted base spans x from 1..2 at y=0, so it touches the other base
        assert!(intersects(&tall, &slanted).unwrap());
        let right = Shape::Spp { a: q(6), b: q(3), c: q(4), d: q(7), z: q(1) };
        assert!(!intersects(&tall, &right).unwrap());
        let high = Shape::SppSeg { a: q(1), b: q(1), z: q(6) };
        assert!(!intersects(&tall, &high).unwrap());
        let inside = Shape::SppSeg { a: q(1), b: q(1), z: q(5) };
        assert!(intersects(&tall, &inside).unwrap());
        let crossing = Shape::SppSeg { a: q(10), b: q(-10), z: q(0) };
        assert!(intersects(&tall, &crossing).unwrap());
        let s1 = Shape::SppSeg { a: q(0), b: q(0), z: q(1) };
        let s2 = Shape::SppSeg { a: q(1), b: q(1), z: q(1) };
        assert!(!intersects(&s1, &s2).unwrap());
        let box_ = Shape::Box { x1: q(3), y1: q(0), z1: q(0), x2: q(4), y2: q(1), z2: q(1) };
        assert!(!intersects(&tall, &box_).unwrap());
        assert!(intersects(&right, &box_).unwrap());
    }

    #[test]
    fn paper_models_realize_h() {
        let h = graph_h();
        for name in PAPER_MODELS {
            let m: GeometricModel<Q> = paper_model(name).unwrap();
            assert_eq!(model_graph(&m), h, "{name}");
            let f: GeometricModel<f64> = paper_model(name).unwrap();
            assert_eq!(model_graph(&f), h, "{name} in floating point");
        }
        assert!(matches!(paper_model::<Q>("circles"), Err(GeometryError::UnknownModel(_))));
    }

    #[test]
    fn shrunken_disks_break_h() {
        let mut m: GeometricModel<Q> = paper_model("disks_h").unwrap();
        for s in m.shapes.iter_mut() {
            if let Shape::Disk { r, .. } = s {
                if *r == q(15) {
                    *r = q(14);
                }
            }
        }
        assert_ne!(model_graph(&m), graph_h());
    }

    #[test]
    fn svg_mentions_every_label() {
        for name in PAPER_MODELS {
            let m: GeometricModel<f64> = paper_model(name).unwrap();
            let svg = render_svg(&m);
            assert!(svg.starts_with("<svg"));
            for l in m.labels() {
                assert!(svg.contains(&format!("id=\"{l}\"")));
            }
        }
    }
}
