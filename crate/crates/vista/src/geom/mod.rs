//! Deterministic computational-geometry kernel and scene constraint engine.
//!
//! This module does the numeric work behind the calculator and geometry
//! validator stages: distances, angles, areas, perimeters, intersections,
//! and the constraint checks that turn a declared scene into a pass/fail
//! report. Angles are degrees everywhere; radians never cross a public
//! boundary.

mod constraint;
mod scene;

pub use constraint::{validate_scene, Constraint, ConstraintError, ConstraintKind, EntityRef};
pub use scene::{parse_scene_block, BlockParseError, GeometricScene, SceneError};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default relative tolerance for equality constraints.
pub const REL_TOL: f64 = 1e-6;
/// Absolute floor applied near zero so tiny magnitudes still compare.
pub const ABS_FLOOR: f64 = 1e-9;
/// Rays shorter than this are considered degenerate.
pub const DEGENERACY_EPS: f64 = 1e-9;

/// A point in abstract plane units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

pub(crate) fn sub(a: Point, b: Point) -> Point {
    Point::new(a.x - b.x, a.y - b.y)
}

pub(crate) fn dot(a: Point, b: Point) -> f64 {
    a.x * b.x + a.y * b.y
}

pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

pub(crate) fn norm(a: Point) -> f64 {
    a.x.hypot(a.y)
}

/// Relative equality with an absolute floor near zero.
pub fn approx_eq(a: f64, b: f64, rel_tol: f64) -> bool {
    (a - b).abs() <= ABS_FLOOR.max(rel_tol * a.abs().max(b.abs()))
}

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("degenerate angle: a ray from the vertex is shorter than the degeneracy threshold")]
    DegenerateAngle,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("segments overlap along a collinear span")]
    CollinearOverlap,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
}

/// One checked condition with the value that was measured for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    /// The condition in block-grammar form, e.g. `AreaEquals poly:A-B-C-D 1`.
    pub subject: String,
    pub verdict: Verdict,
    pub measured: Option<f64>,
    pub expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckEntry {
    pub fn pass(subject: impl Into<String>, measured: Option<f64>, expected: Option<f64>) -> Self {
        CheckEntry {
            subject: subject.into(),
            verdict: Verdict::Pass,
            measured,
            expected,
            detail: None,
        }
    }

    pub fn fail(
        subject: impl Into<String>,
        measured: Option<f64>,
        expected: Option<f64>,
        detail: impl Into<String>,
    ) -> Self {
        CheckEntry {
            subject: subject.into(),
            verdict: Verdict::Fail,
            measured,
            expected,
            detail: Some(detail.into()),
        }
    }
}

/// Per-condition verdicts; the overall verdict is a pure conjunction.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub entries: Vec<CheckEntry>,
}

impl ValidationReport {
    pub fn push(&mut self, entry: CheckEntry) {
        self.entries.push(entry);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.verdict == Verdict::Pass)
    }

    pub fn overall(&self) -> Verdict {
        if self.passed() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Human-readable rendering, used verbatim as agent feedback.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let mark = match e.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            };
            out.push_str(&format!("[{mark}] {}", e.subject));
            if let Some(m) = e.measured {
                out.push_str(&format!(" measured={m}"));
            }
            if let Some(x) = e.expected {
                out.push_str(&format!(" expected={x}"));
            }
            if let Some(d) = &e.detail {
                out.push_str(&format!(" ({d})"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "overall: {}",
            match self.overall() {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            }
        ));
        out
    }
}

/// Euclidean distance between two points.
pub fn distance(p: Point, q: Point) -> f64 {
    norm(sub(p, q))
}

/// Interior angle at `vertex` between the rays toward `a` and `b`, in
/// degrees within `[0, 180]`.
pub fn angle_at(vertex: Point, a: Point, b: Point) -> Result<f64, GeomError> {
    let u = sub(a, vertex);
    let v = sub(b, vertex);
    if norm(u) < DEGENERACY_EPS || norm(v) < DEGENERACY_EPS {
        return Err(GeomError::DegenerateAngle);
    }
    Ok(cross(u, v).abs().atan2(dot(u, v)).to_degrees())
}

/// Unsigned shoelace area; orientation-independent.
pub fn polygon_area(vertices: &[Point]) -> Result<f64, GeomError> {
    if vertices.len() < 3 {
        return Err(GeomError::TooFewVertices(vertices.len()));
    }
    let mut twice = 0.0;
    for i in 0..vertices.len() {
        let p = vertices[i];
        let q = vertices[(i + 1) % vertices.len()];
        twice += cross(p, q);
    }
    Ok(twice.abs() / 2.0)
}

/// Sum of closing edge lengths.
pub fn perimeter(vertices: &[Point]) -> Result<f64, GeomError> {
    if vertices.len() < 3 {
        return Err(GeomError::TooFewVertices(vertices.len()));
    }
    let mut total = 0.0;
    for i in 0..vertices.len() {
        total += distance(vertices[i], vertices[(i + 1) % vertices.len()]);
    }
    Ok(total)
}

/// The unique proper intersection of two segments, if they cross within
/// both closed spans. Segments that overlap along a collinear span have an
/// infinite intersection set and surface as [`GeomError::CollinearOverlap`];
/// the caller decides policy.
pub fn segment_intersection(
    s1: (Point, Point),
    s2: (Point, Point),
) -> Result<Option<Point>, GeomError> {
    let r = sub(s1.1, s1.0);
    let s = sub(s2.1, s2.0);
    let qp = sub(s2.0, s1.0);
    let denom = cross(r, s);
    let scale = norm(r) * norm(s);

    if denom.abs() <= ABS_FLOOR * scale.max(1.0) {
        // Parallel. Distinguish collinear from offset lines.
        if cross(qp, r).abs() > ABS_FLOOR * norm(r).max(1.0) * norm(qp).max(1.0) {
            return Ok(None);
        }
        // Collinear: project s2's endpoints onto s1's parameter axis.
        let rr = dot(r, r);
        if rr <= DEGENERACY_EPS * DEGENERACY_EPS {
            return Ok(None);
        }
        let t0 = dot(qp, r) / rr;
        let t1 = t0 + dot(s, r) / rr;
        let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
        if hi < lo {
            return Ok(None);
        }
        if hi - lo > ABS_FLOOR {
            return Err(GeomError::CollinearOverlap);
        }
        let t = 0.5 * (lo + hi);
        return Ok(Some(Point::new(s1.0.x + t * r.x, s1.0.y + t * r.y)));
    }

    let t = cross(qp, s) / denom;
    let u = cross(qp, r) / denom;
    let eps = 1e-12;
    if (-eps..=1.0 + eps).contains(&t) && (-eps..=1.0 + eps).contains(&u) {
        Ok(Some(Point::new(s1.0.x + t * r.x, s1.0.y + t * r.y)))
    } else {
        Ok(None)
    }
}

/// A line-like entity for circle intersection: either the infinite line
/// through two points or the closed segment between them.
#[derive(Debug, Clone, Copy)]
pub enum LineLike {
    Line(Point, Point),
    Segment(Point, Point),
}

/// Intersections of a circle with a line or segment: 0, 1 (tangency within
/// tolerance), or 2 points, ordered along the line's direction.
pub fn circle_line_intersection(center: Point, radius: f64, entity: LineLike) -> Vec<Point> {
    let (a, b, clamp) = match entity {
        LineLike::Line(a, b) => (a, b, false),
        LineLike::Segment(a, b) => (a, b, true),
    };
    let d = sub(b, a);
    let f = sub(a, center);
    let qa = dot(d, d);
    if qa <= DEGENERACY_EPS * DEGENERACY_EPS {
        return Vec::new();
    }
    let qb = 2.0 * dot(f, d);
    let qc = dot(f, f) - radius * radius;
    let disc = qb * qb - 4.0 * qa * qc;
    let disc_scale = (qb * qb).max((4.0 * qa * qc).abs()).max(1e-12);

    let ts: Vec<f64> = if disc.abs() <= ABS_FLOOR * disc_scale {
        vec![-qb / (2.0 * qa)]
    } else if disc < 0.0 {
        Vec::new()
    } else {
        let sq = disc.sqrt();
        let q = -0.5 * (qb + qb.signum().max(0.0).mul_add(2.0, -1.0) * sq);
        // Stable pair: q/a and c/q, falling back when q vanishes.
        let (t1, t2) = if q.abs() > 0.0 {
            (q / qa, qc / q)
        } else {
            ((-qb + sq) / (2.0 * qa), (-qb - sq) / (2.0 * qa))
        };
        let mut v = vec![t1, t2];
        v.sort_by(|x, y| x.partial_cmp(y).unwrap());
        v
    };

    let eps = 1e-9;
    ts.into_iter()
        .filter(|t| !clamp || (-eps..=1.0 + eps).contains(t))
        .map(|t| Point::new(a.x + t * d.x, a.y + t * d.y))
        .collect()
}
