//! The pair-determinant invariant of a mean-zero distribution.
//!
//! For a direction `d`, `phi_at` sums `det(z1, z2)·m1·m2` over ordered atom
//! pairs such that the triangle `(z1, z2, z)` contains the origin in its
//! interior for every `z` on the ray of `d`, plus half of the same sum over
//! pairs where the origin lands on an edge instead. For mean-zero inputs the
//! result does not depend on `d`; `phi_invariant` checks this on a probe set
//! that visits every angular cell of the support.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{
    angular_cmp_nonzero, det2, det_sign, ray_relation_nonzero, PlanePoint, RayRelation,
};
use crate::measures::{FiniteDistribution, Shape};
use crate::scalar::{Scalar, EPS_PHI};

/// One evaluation of the invariant along a probe direction.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeEvaluation<S> {
    pub direction: PlanePoint<S>,
    pub interior: S,
    pub boundary: S,
    pub total: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport<S> {
    pub phi: S,
    pub probes: Vec<ProbeEvaluation<S>>,
    /// All probe totals agree (exactly, or within `EPS_PHI` in float mode).
    pub consistent: bool,
}

fn check_direction<S: Scalar>(d: &PlanePoint<S>) -> Result<()> {
    if d.is_origin() {
        Err(Error::ZeroDirection)
    } else {
        Ok(())
    }
}

fn on_opposite_ray<S: Scalar>(z: &PlanePoint<S>, d: &PlanePoint<S>) -> bool {
    ray_relation_nonzero(z, d) == RayRelation::Antipodal
}

/// Returns `(interior, boundary, interior + boundary)` along `d`.
pub fn phi_at<S: Scalar>(p: &FiniteDistribution<S>, d: &PlanePoint<S>) -> Result<(S, S, S)> {
    p.ensure_centered()?;
    check_direction(d)?;
    let (interior, boundary) = phi_split(p, d);
    let total = interior.clone() + boundary.clone();
    Ok((interior, boundary, total))
}

fn phi_split<S: Scalar>(p: &FiniteDistribution<S>, d: &PlanePoint<S>) -> (S, S) {
    let atoms: Vec<_> = p.atoms().iter().filter(|a| !a.point.is_origin()).collect();
    let neg_d = -d.clone();
    let mut interior = S::zero();
    let mut upper_to_ray = S::zero();
    let mut ray_to_lower = S::zero();

    for a in &atoms {
        let z1 = &a.point;
        let z1_upper = det_sign(d, z1) == Ordering::Greater;
        let z1_on_neg = !z1_upper && on_opposite_ray(z1, d);
        if !z1_upper && !z1_on_neg {
            continue;
        }
        let neg_z1 = -z1.clone();
        for b in &atoms {
            let z2 = &b.point;
            let weight = || det2(z1, z2) * a.mass.clone() * b.mass.clone();
            if z1_upper {
                // z2 strictly inside the cone from -d counterclockwise to -z1.
                if det_sign(&neg_d, z2) == Ordering::Greater
                    && det_sign(z2, &neg_z1) == Ordering::Greater
                {
                    interior = interior + weight();
                } else if on_opposite_ray(z2, d) {
                    upper_to_ray = upper_to_ray + weight();
                }
            } else if det_sign(&neg_d, z2) == Ordering::Greater {
                ray_to_lower = ray_to_lower + weight();
            }
        }
    }
    let boundary = (upper_to_ray + ray_to_lower) / S::from_i64(2);
    (interior, boundary)
}

/// Boundary part of the invariant along `d`, computed through both of its
/// product forms
///
/// `(Σ_{z = -λd} λ·m) · (Σ_{det(d,z) > 0} det(d, z)·m)` and
/// `(Σ_{z = -λd} λ·m) · (Σ_{det(z,d) > 0} det(z, d)·m)`,
///
/// which agree whenever the mean is zero.
pub fn boundary_phi<S: Scalar>(p: &FiniteDistribution<S>, d: &PlanePoint<S>) -> Result<S> {
    p.ensure_centered()?;
    check_direction(d)?;
    let (radial, left, right) = boundary_factors(p, d);
    let lhs = radial.clone() * left;
    let rhs = radial * right;
    let tol = if S::is_exact() {
        0.0
    } else {
        // Both products are quadratic in the coordinates; |d| cancels.
        EPS_PHI * first_moment(p).powi(2)
    };
    if !lhs.approx_eq(&rhs, tol) {
        return Err(Error::FactorizationMismatch {
            direction: d.to_string(),
            left: lhs.to_text(),
            right: rhs.to_text(),
        });
    }
    Ok(lhs)
}

/// `(radial mass on -d, half-plane moment left of d, half-plane moment right of d)`
pub(crate) fn boundary_factors<S: Scalar>(
    p: &FiniteDistribution<S>,
    d: &PlanePoint<S>,
) -> (S, S, S) {
    let mut radial = S::zero();
    let mut left = S::zero();
    let mut right = S::zero();
    for a in p.atoms().iter().filter(|a| !a.point.is_origin()) {
        let z = &a.point;
        match det_sign(d, z) {
            Ordering::Greater => left = left + det2(d, z) * a.mass.clone(),
            Ordering::Less => right = right + det2(z, d) * a.mass.clone(),
            Ordering::Equal => {
                if on_opposite_ray(z, d) {
                    radial = radial - z.scale_along(d) * a.mass.clone();
                }
            }
        }
    }
    (radial, left, right)
}

fn first_moment<S: Scalar>(p: &FiniteDistribution<S>) -> f64 {
    p.atoms()
        .iter()
        .map(|a| {
            let (x, y) = a.point.to_f64();
            a.mass.to_f64() * x.hypot(y)
        })
        .sum()
}

fn second_moment<S: Scalar>(p: &FiniteDistribution<S>) -> f64 {
    p.atoms()
        .iter()
        .map(|a| {
            let (x, y) = a.point.to_f64();
            a.mass.to_f64() * (x * x + y * y)
        })
        .sum()
}

/// Directions at which `phi_invariant` evaluates the invariant: every support
/// ray, every opposite ray, and (for planar supports) one direction strictly
/// inside each angular gap between consecutive ones. Sorted by argument.
pub fn probe_directions<S: Scalar>(p: &FiniteDistribution<S>) -> Vec<PlanePoint<S>> {
    let profile = p.profile();
    let mut dirs: Vec<PlanePoint<S>> = Vec::new();
    for ray in &profile.rays {
        dirs.push(ray.direction.clone());
        dirs.push(-ray.direction.clone());
    }
    dirs.sort_by(angular_cmp_nonzero);
    dirs.dedup_by(|a, b| angular_cmp_nonzero(a, b) == Ordering::Equal);

    if profile.shape == Shape::Planar {
        // Gaps are all below π, so the vector sum lies strictly inside each.
        let n = dirs.len();
        let mids: Vec<PlanePoint<S>> = (0..n)
            .map(|i| dirs[i].clone() + dirs[(i + 1) % n].clone())
            .collect();
        dirs.extend(mids);
        dirs.sort_by(angular_cmp_nonzero);
    }
    dirs
}

/// Evaluates the invariant at every probe direction and checks that all
/// evaluations coincide, and that the boundary part matches both of its
/// product forms at each probe.
pub fn phi_invariant<S: Scalar>(p: &FiniteDistribution<S>) -> Result<InvariantReport<S>> {
    p.ensure_centered()?;
    let tol = EPS_PHI * second_moment(p).max(f64::MIN_POSITIVE);
    let mut probes = Vec::new();
    for direction in probe_directions(p) {
        let (interior, boundary) = phi_split(p, &direction);
        let factored = boundary_phi(p, &direction)?;
        if !factored.approx_eq(&boundary, tol) {
            return Err(Error::InternalInconsistency(format!(
                "boundary term along {direction} is {} but its product form gives {}",
                boundary.to_text(),
                factored.to_text()
            )));
        }
        let total = interior.clone() + boundary.clone();
        probes.push(ProbeEvaluation {
            direction,
            interior,
            boundary,
            total,
        });
    }
    let phi = probes
        .first()
        .map(|e| e.total.clone())
        .unwrap_or_else(S::zero);
    let consistent = probes.iter().all(|e| e.total.approx_eq(&phi, tol));
    if phi.sign_within(tol) == Ordering::Less {
        return Err(Error::InternalInconsistency(format!(
            "negative invariant {}",
            phi.to_text()
        )));
    }
    Ok(InvariantReport {
        phi,
        probes,
        consistent,
    })
}
