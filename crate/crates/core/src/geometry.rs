//! Planar primitives: determinants, ray relations, circular angular order
//! and classification of triangles against the origin.
//!
//! Directions are nonzero points, never angles, so every predicate stays
//! exact in rational mode. In float mode a determinant is treated as zero
//! when `|det(a, b)| <= EPS_GEO * |a| * |b|`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, EPS_GEO};

/// A point of the plane. Also used as a direction representative.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanePoint<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> PlanePoint<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(S::from_i64(x), S::from_i64(y))
    }

    pub fn origin() -> Self {
        Self::new(S::zero(), S::zero())
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.x.to_f64().is_finite() && self.y.to_f64().is_finite()
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.x.clone() * s.clone(), self.y.clone() * s.clone())
    }

    /// Image under the linear map with rows `(a, b)` and `(c, d)`.
    pub fn transform(&self, a: &S, b: &S, c: &S, d: &S) -> Self {
        Self::new(
            a.clone() * self.x.clone() + b.clone() * self.y.clone(),
            c.clone() * self.x.clone() + d.clone() * self.y.clone(),
        )
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PlanePoint<T> {
        PlanePoint::new(f(&self.x), f(&self.y))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    fn norm_f64(&self) -> f64 {
        let (x, y) = self.to_f64();
        x.hypot(y)
    }

    /// Signed coordinate of `self` along `dir`, assuming the two are collinear.
    /// Uses the larger coordinate of `dir` as divisor.
    pub fn scale_along(&self, dir: &PlanePoint<S>) -> S {
        if dir.x.abs() >= dir.y.abs() {
            self.x.clone() / dir.x.clone()
        } else {
            self.y.clone() / dir.y.clone()
        }
    }

    /// Lexicographic order on `(x, y)`.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.x
            .partial_cmp(&other.x)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.y.partial_cmp(&other.y).unwrap_or(Ordering::Equal))
    }
}

impl<S: Scalar> Add for PlanePoint<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<S: Scalar> Sub for PlanePoint<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<S: Scalar> Neg for PlanePoint<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<S: Scalar> fmt::Display for PlanePoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x.to_text(), self.y.to_text())
    }
}

/// `a.x * b.y - a.y * b.x`
pub fn det2<S: Scalar>(a: &PlanePoint<S>, b: &PlanePoint<S>) -> S {
    a.x.clone() * b.y.clone() - a.y.clone() * b.x.clone()
}

pub fn dot<S: Scalar>(a: &PlanePoint<S>, b: &PlanePoint<S>) -> S {
    a.x.clone() * b.x.clone() + a.y.clone() * b.y.clone()
}

/// Sign of `det2(a, b)`; near-zero values count as zero in float mode.
pub fn det_sign<S: Scalar>(a: &PlanePoint<S>, b: &PlanePoint<S>) -> Ordering {
    let tol = if S::is_exact() {
        0.0
    } else {
        EPS_GEO * a.norm_f64() * b.norm_f64()
    };
    det2(a, b).sign_within(tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayRelation {
    SameRay,
    Antipodal,
    Independent,
}

pub fn ray_relation<S: Scalar>(a: &PlanePoint<S>, b: &PlanePoint<S>) -> Result<RayRelation> {
    if a.is_origin() || b.is_origin() {
        return Err(Error::ZeroPoint);
    }
    Ok(ray_relation_nonzero(a, b))
}

pub(crate) fn ray_relation_nonzero<S: Scalar>(a: &PlanePoint<S>, b: &PlanePoint<S>) -> RayRelation {
    if det_sign(a, b) != Ordering::Equal {
        return RayRelation::Independent;
    }
    if dot(a, b) > S::zero() {
        RayRelation::SameRay
    } else {
        RayRelation::Antipodal
    }
}

/// 0 for arguments in `[0, π)`, 1 for `[π, 2π)`.
fn half_index<S: Scalar>(p: &PlanePoint<S>) -> u8 {
    let zero = S::zero();
    if p.y > zero || (p.y == zero && p.x > zero) {
        0
    } else {
        1
    }
}

/// Compares the arguments of two nonzero points in `[0, 2π)`.
pub fn angular_compare<S: Scalar>(a: &PlanePoint<S>, b: &PlanePoint<S>) -> Result<Ordering> {
    if a.is_origin() || b.is_origin() {
        return Err(Error::ZeroPoint);
    }
    Ok(angular_cmp_nonzero(a, b))
}

pub(crate) fn angular_cmp_nonzero<S: Scalar>(a: &PlanePoint<S>, b: &PlanePoint<S>) -> Ordering {
    if ray_relation_nonzero(a, b) == RayRelation::SameRay {
        return Ordering::Equal;
    }
    half_index(a)
        .cmp(&half_index(b))
        .then_with(|| det_sign(b, a))
}

/// Position of the origin relative to a triangle.
#[derive(Clone, Debug, PartialEq)]
pub enum TripleClass<S> {
    /// Origin strictly inside. `ccw` holds the vertices counterclockwise and
    /// `dets[i] = det2(ccw[i], ccw[i + 1])`, all positive.
    InteriorContaining {
        ccw: [PlanePoint<S>; 3],
        dets: [S; 3],
    },
    /// Origin on the edge `ccw[edge] -> ccw[edge + 1]`, whose endpoints are
    /// antipodal.
    BoundaryContaining {
        ccw: [PlanePoint<S>; 3],
        dets: [S; 3],
        edge: usize,
    },
    NotContaining,
}

impl<S> TripleClass<S> {
    pub fn tag(&self) -> &'static str {
        match self {
            TripleClass::InteriorContaining { .. } => "interior",
            TripleClass::BoundaryContaining { .. } => "boundary",
            TripleClass::NotContaining => "outside",
        }
    }
}

/// Classifies the triangle `(z1, z2, z3)` against the origin. The returned
/// counterclockwise order starts at the lexicographically smallest vertex so
/// that every permutation of the input yields the same value.
pub fn classify_triple<S: Scalar>(
    z1: &PlanePoint<S>,
    z2: &PlanePoint<S>,
    z3: &PlanePoint<S>,
) -> Result<TripleClass<S>> {
    if z1.is_origin() || z2.is_origin() || z3.is_origin() {
        return Err(Error::ZeroPoint);
    }
    let mut pts = [z1.clone(), z2.clone(), z3.clone()];
    let first = (0..3).min_by(|&i, &j| pts[i].lex_cmp(&pts[j])).unwrap_or(0);
    pts.rotate_left(first);

    // Orientation of the triangle itself decides the ccw relabelling.
    let tol = if S::is_exact() {
        0.0
    } else {
        let (a, b, c) = (pts[0].norm_f64(), pts[1].norm_f64(), pts[2].norm_f64());
        EPS_GEO * (a * b + b * c + c * a)
    };
    let area = det2(&pts[0], &pts[1]) + det2(&pts[1], &pts[2]) + det2(&pts[2], &pts[0]);
    match area.sign_within(tol) {
        Ordering::Equal => return Ok(TripleClass::NotContaining),
        Ordering::Less => pts.swap(1, 2),
        Ordering::Greater => {}
    }

    let dets = [
        det2(&pts[0], &pts[1]),
        det2(&pts[1], &pts[2]),
        det2(&pts[2], &pts[0]),
    ];
    let signs = [
        det_sign(&pts[0], &pts[1]),
        det_sign(&pts[1], &pts[2]),
        det_sign(&pts[2], &pts[0]),
    ];
    if signs.iter().all(|s| *s == Ordering::Greater) {
        return Ok(TripleClass::InteriorContaining { ccw: pts, dets });
    }
    let zeros: Vec<usize> = (0..3).filter(|&i| signs[i] == Ordering::Equal).collect();
    let positives = signs.iter().filter(|s| **s == Ordering::Greater).count();
    if zeros.len() == 1 && positives == 2 {
        let edge = zeros[0];
        if ray_relation_nonzero(&pts[edge], &pts[(edge + 1) % 3]) == RayRelation::Antipodal {
            return Ok(TripleClass::BoundaryContaining {
                ccw: pts,
                dets,
                edge,
            });
        }
    }
    Ok(TripleClass::NotContaining)
}
