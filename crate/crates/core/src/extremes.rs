//! Extreme points of the set of mean-zero planar distributions: the Dirac
//! mass at the origin, two-point distributions on antipodal rays, and
//! three-point distributions whose triangle contains the origin.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{classify_triple, det2, ray_relation, PlanePoint, RayRelation, TripleClass};
use crate::measures::FiniteDistribution;
use crate::scalar::{Scalar, EPS_MASS, EPS_MEAN};

/// A mean-zero distribution with one, two or three support points.
///
/// Values are canonical: two-point supports are stored in lexicographic
/// order, three-point supports counterclockwise starting from the
/// lexicographically smallest vertex. Equal components compare equal.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtremeComponent<S> {
    OriginDirac,
    TwoPoint {
        points: [PlanePoint<S>; 2],
        masses: [S; 2],
    },
    ThreePoint {
        points: [PlanePoint<S>; 3],
        masses: [S; 3],
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    OriginDirac,
    TwoPoint,
    ThreePoint,
}

impl ComponentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::OriginDirac => "origin",
            ComponentKind::TwoPoint => "two_point",
            ComponentKind::ThreePoint => "three_point",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "origin" => Some(ComponentKind::OriginDirac),
            "two_point" => Some(ComponentKind::TwoPoint),
            "three_point" => Some(ComponentKind::ThreePoint),
            _ => None,
        }
    }
}

pub fn dirac_origin<S: Scalar>() -> ExtremeComponent<S> {
    ExtremeComponent::OriginDirac
}

/// Mean-zero distribution on two antipodal points. With `z2 = -t·z1` the
/// masses are `t/(1+t)` on `z1` and `1/(1+t)` on `z2`, i.e. inversely
/// proportional to the distances from the origin.
pub fn two_point<S: Scalar>(z1: &PlanePoint<S>, z2: &PlanePoint<S>) -> Result<ExtremeComponent<S>> {
    if ray_relation(z1, z2)? != RayRelation::Antipodal {
        return Err(Error::NotAntipodal);
    }
    let t = -z2.scale_along(z1);
    let total = S::one() + t.clone();
    let m1 = t / total.clone();
    let m2 = S::one() / total;
    Ok(if z1.lex_cmp(z2) == Ordering::Less {
        ExtremeComponent::TwoPoint {
            points: [z1.clone(), z2.clone()],
            masses: [m1, m2],
        }
    } else {
        ExtremeComponent::TwoPoint {
            points: [z2.clone(), z1.clone()],
            masses: [m2, m1],
        }
    })
}

/// Mean-zero distribution on a triangle containing the origin. Vertex `i`
/// (counterclockwise) gets `det(z_{i+1}, z_{i+2}) / Σ_j det(z_j, z_{j+1})`.
/// When the origin lies on an edge the result is the two-point distribution
/// on that edge.
pub fn three_point<S: Scalar>(
    z1: &PlanePoint<S>,
    z2: &PlanePoint<S>,
    z3: &PlanePoint<S>,
) -> Result<ExtremeComponent<S>> {
    match classify_triple(z1, z2, z3)? {
        TripleClass::InteriorContaining { ccw, dets } => Ok(three_point_from_ccw(ccw, &dets)),
        TripleClass::BoundaryContaining { ccw, edge, .. } => {
            two_point(&ccw[edge], &ccw[(edge + 1) % 3])
        }
        TripleClass::NotContaining => Err(Error::NotContaining),
    }
}

pub(crate) fn three_point_from_ccw<S: Scalar>(
    ccw: [PlanePoint<S>; 3],
    dets: &[S; 3],
) -> ExtremeComponent<S> {
    let total = dets[0].clone() + dets[1].clone() + dets[2].clone();
    let masses = [
        dets[1].clone() / total.clone(),
        dets[2].clone() / total.clone(),
        dets[0].clone() / total,
    ];
    ExtremeComponent::ThreePoint {
        points: ccw,
        masses,
    }
}

/// Closed-form invariant of a three-point component:
/// `Π det(z_j, z_{j+1}) / (Σ det(z_j, z_{j+1}))²`.
pub fn phi_of_three_point<S: Scalar>(c: &ExtremeComponent<S>) -> Result<S> {
    match c {
        ExtremeComponent::ThreePoint { points, .. } => Ok(triangle_phi(points)),
        _ => Err(Error::WrongComponentKind {
            expected: "three_point",
        }),
    }
}

/// Same closed form for an arbitrary containing triple (zero on boundary
/// triples).
pub fn phi_of_triple<S: Scalar>(
    z1: &PlanePoint<S>,
    z2: &PlanePoint<S>,
    z3: &PlanePoint<S>,
) -> Result<S> {
    match classify_triple(z1, z2, z3)? {
        TripleClass::InteriorContaining { ccw, .. }
        | TripleClass::BoundaryContaining { ccw, .. } => Ok(triangle_phi(&ccw)),
        TripleClass::NotContaining => Err(Error::NotContaining),
    }
}

fn triangle_phi<S: Scalar>(ccw: &[PlanePoint<S>; 3]) -> S {
    let d = [
        det2(&ccw[0], &ccw[1]),
        det2(&ccw[1], &ccw[2]),
        det2(&ccw[2], &ccw[0]),
    ];
    let sum = d[0].clone() + d[1].clone() + d[2].clone();
    d[0].clone() * d[1].clone() * d[2].clone() / (sum.clone() * sum)
}

impl<S: Scalar> ExtremeComponent<S> {
    pub fn kind(&self) -> ComponentKind {
        match self {
            ExtremeComponent::OriginDirac => ComponentKind::OriginDirac,
            ExtremeComponent::TwoPoint { .. } => ComponentKind::TwoPoint,
            ExtremeComponent::ThreePoint { .. } => ComponentKind::ThreePoint,
        }
    }

    pub fn points(&self) -> Vec<PlanePoint<S>> {
        match self {
            ExtremeComponent::OriginDirac => vec![PlanePoint::origin()],
            ExtremeComponent::TwoPoint { points, .. } => points.to_vec(),
            ExtremeComponent::ThreePoint { points, .. } => points.to_vec(),
        }
    }

    pub fn masses(&self) -> Vec<S> {
        match self {
            ExtremeComponent::OriginDirac => vec![S::one()],
            ExtremeComponent::TwoPoint { masses, .. } => masses.to_vec(),
            ExtremeComponent::ThreePoint { masses, .. } => masses.to_vec(),
        }
    }

    pub fn support(&self) -> Vec<(PlanePoint<S>, S)> {
        self.points().into_iter().zip(self.masses()).collect()
    }

    pub fn mass_at(&self, point: &PlanePoint<S>) -> Option<S> {
        self.support()
            .into_iter()
            .find(|(p, _)| p == point)
            .map(|(_, m)| m)
    }

    pub fn mean(&self) -> PlanePoint<S> {
        self.support()
            .iter()
            .fold(PlanePoint::origin(), |acc, (p, m)| acc + p.scale(m))
    }

    /// Exact mean check in exact mode; relative tolerance in float mode.
    pub fn has_zero_mean(&self) -> bool {
        let mean = self.mean();
        if S::is_exact() {
            return mean.is_origin();
        }
        let scale: f64 = self
            .support()
            .iter()
            .map(|(p, m)| {
                let (x, y) = p.to_f64();
                m.to_f64() * (x.abs() + y.abs())
            })
            .sum();
        let (mx, my) = mean.to_f64();
        mx.abs().max(my.abs()) <= EPS_MEAN * scale.max(f64::MIN_POSITIVE)
    }

    pub fn to_distribution(&self) -> FiniteDistribution<S> {
        FiniteDistribution::build(self.support()).expect("component masses form a distribution")
    }

    /// Image of the component under an injective linear map that preserves
    /// orientation (rotations, positive scalings).
    pub fn map_linear(&self, f: impl Fn(&PlanePoint<S>) -> PlanePoint<S>) -> Result<Self> {
        match self {
            ExtremeComponent::OriginDirac => Ok(ExtremeComponent::OriginDirac),
            ExtremeComponent::TwoPoint { points, .. } => two_point(&f(&points[0]), &f(&points[1])),
            ExtremeComponent::ThreePoint { points, .. } => {
                three_point(&f(&points[0]), &f(&points[1]), &f(&points[2]))
            }
        }
    }

    /// Rebuilds a component from serialized parts. The points must form the
    /// declared shape and the declared masses must be a mean-zero
    /// probability vector on them.
    pub fn from_parts(
        kind: ComponentKind,
        points: Vec<PlanePoint<S>>,
        masses: Vec<S>,
    ) -> Result<Self> {
        let expected = match kind {
            ComponentKind::OriginDirac => 1,
            ComponentKind::TwoPoint => 2,
            ComponentKind::ThreePoint => 3,
        };
        if points.len() != expected || masses.len() != expected {
            return Err(Error::InvalidComponent(format!(
                "{} needs {expected} points and masses, got {} and {}",
                kind.as_str(),
                points.len(),
                masses.len()
            )));
        }
        if masses.iter().any(|m| *m <= S::zero()) {
            return Err(Error::InvalidComponent("masses must be positive".into()));
        }
        let total = masses.iter().fold(S::zero(), |acc, m| acc + m.clone());
        if !total.approx_eq(&S::one(), EPS_MASS) {
            return Err(Error::InvalidComponent(format!(
                "masses sum to {}",
                total.to_text()
            )));
        }
        let shape = match kind {
            ComponentKind::OriginDirac => {
                if !points[0].is_origin() {
                    return Err(Error::InvalidComponent(
                        "origin component must sit at (0, 0)".into(),
                    ));
                }
                ExtremeComponent::OriginDirac
            }
            ComponentKind::TwoPoint => two_point(&points[0], &points[1])
                .map_err(|e| Error::InvalidComponent(e.to_string()))?,
            ComponentKind::ThreePoint => {
                let c = three_point(&points[0], &points[1], &points[2])
                    .map_err(|e| Error::InvalidComponent(e.to_string()))?;
                if c.kind() != ComponentKind::ThreePoint {
                    return Err(Error::InvalidComponent(
                        "origin lies on an edge of the triangle".into(),
                    ));
                }
                c
            }
        };
        // Keep the declared masses, attached to their points, in canonical order.
        let declared: Vec<(PlanePoint<S>, S)> = points.into_iter().zip(masses).collect();
        let mass_of = |p: &PlanePoint<S>| {
            declared
                .iter()
                .find(|(q, _)| q == p)
                .map(|(_, m)| m.clone())
                .ok_or_else(|| Error::InvalidComponent("repeated point".into()))
        };
        let rebuilt = match shape {
            ExtremeComponent::OriginDirac => ExtremeComponent::OriginDirac,
            ExtremeComponent::TwoPoint { points, .. } => {
                let masses = [mass_of(&points[0])?, mass_of(&points[1])?];
                ExtremeComponent::TwoPoint { points, masses }
            }
            ExtremeComponent::ThreePoint { points, .. } => {
                let masses = [
                    mass_of(&points[0])?,
                    mass_of(&points[1])?,
                    mass_of(&points[2])?,
                ];
                ExtremeComponent::ThreePoint { points, masses }
            }
        };
        if !rebuilt.has_zero_mean() {
            return Err(Error::InvalidComponent(
                "declared masses do not have mean zero".into(),
            ));
        }
        Ok(rebuilt)
    }
}
