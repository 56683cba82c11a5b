//! Symmetric decomposition of a finite mean-zero distribution into one-,
//! two- and three-point mean-zero components.
//!
//! With `Φ` the invariant of `p`, the weights are
//!
//! - origin Dirac: `p(0)`;
//! - triangle `{z1, z2, z3}` containing the origin strictly inside:
//!   `(Σ det(z_j, z_{j+1}))·m1·m2·m3 / Φ`, once per unordered triple;
//! - antipodal pair `z1 = λ1·d`, `z2 = -λ2·d`:
//!   `(λ1 + λ2)·m1·m2·S(d) / Φ` where `S(d) = Σ_{det(d,z) > 0} det(d, z)·m(z)`.
//!
//! Supports on a single line use the one-dimensional weights
//! `(λ1 + λ2)·m1·m2 / N` with `N = Σ_{λ > 0} λ·m`, and `Φ = 0`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::extremes::{three_point_from_ccw, two_point, ExtremeComponent};
use crate::geometry::{
    classify_triple, ray_relation_nonzero, PlanePoint, RayRelation, TripleClass,
};
use crate::invariants::{boundary_factors, phi_invariant};
use crate::measures::{FiniteDistribution, Shape};
use crate::scalar::{Scalar, EPS_PHI, EPS_REC};

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedComponent<S> {
    pub component: ExtremeComponent<S>,
    pub weight: S,
}

/// Convex combination of extreme components. `offset` is the mean that was
/// removed before decomposing (zero for mean-zero inputs).
///
/// Values produced by [`decompose`] have positive weights summing to one and
/// list components as: origin Dirac, two-point components by ray pair then by
/// radii, three-point components by their sorted vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<S> {
    pub phi: S,
    pub components: Vec<WeightedComponent<S>>,
    pub offset: PlanePoint<S>,
}

impl<S: Scalar> Decomposition<S> {
    pub fn weight_sum(&self) -> S {
        self.components
            .iter()
            .fold(S::zero(), |acc, c| acc + c.weight.clone())
    }

    pub fn weights(&self) -> Vec<S> {
        self.components.iter().map(|c| c.weight.clone()).collect()
    }

    pub fn weight_of(&self, component: &ExtremeComponent<S>) -> Option<S> {
        self.components
            .iter()
            .find(|c| &c.component == component)
            .map(|c| c.weight.clone())
    }

    /// Per-point masses of the mixture, merged and sorted, without checking
    /// that they form a probability distribution.
    pub fn mixture(&self) -> Vec<(PlanePoint<S>, S)> {
        let mut entries: Vec<(PlanePoint<S>, S)> = self
            .components
            .iter()
            .flat_map(|wc| {
                wc.component
                    .support()
                    .into_iter()
                    .map(move |(p, m)| (p, m * wc.weight.clone()))
            })
            .collect();
        entries.sort_by(|a, b| a.0.lex_cmp(&b.0));
        let mut merged: Vec<(PlanePoint<S>, S)> = Vec::with_capacity(entries.len());
        for (p, m) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 = last.1.clone() + m,
                _ => merged.push((p, m)),
            }
        }
        merged
    }
}

fn weight_sum_ok<S: Scalar>(sum: &S) -> bool {
    sum.approx_eq(&S::one(), EPS_REC)
}

/// Decomposes a mean-zero distribution.
pub fn decompose<S: Scalar>(p: &FiniteDistribution<S>) -> Result<Decomposition<S>> {
    p.ensure_centered()?;
    let profile = p.profile();
    match profile.shape {
        Shape::OriginOnly => {
            return Ok(Decomposition {
                phi: S::zero(),
                components: vec![WeightedComponent {
                    component: ExtremeComponent::OriginDirac,
                    weight: S::one(),
                }],
                offset: PlanePoint::origin(),
            })
        }
        Shape::OnLine(_) => return decompose_collinear(p),
        Shape::Planar => {}
    }

    let report = phi_invariant(p)?;
    if !report.consistent {
        return Err(Error::InternalInconsistency(
            "invariant differs between probe directions".into(),
        ));
    }
    let phi = report.phi;
    if phi.sign_within(EPS_PHI) != Ordering::Greater {
        return Err(Error::InternalInconsistency(format!(
            "planar support with non-positive invariant {}",
            phi.to_text()
        )));
    }

    let mut components = Vec::new();
    if !profile.origin_mass.is_zero() {
        components.push(WeightedComponent {
            component: ExtremeComponent::OriginDirac,
            weight: profile.origin_mass.clone(),
        });
    }

    for &(first, second) in &profile.antipodal_pairs {
        let d = &profile.rays[first].direction;
        let (_, half_plane_moment, _) = boundary_factors(p, d);
        let factor = half_plane_moment / phi.clone();
        for a in &profile.rays[first].atoms {
            for b in &profile.rays[second].atoms {
                let radial = a.scale.clone() - b.point.scale_along(d);
                components.push(WeightedComponent {
                    component: two_point(&a.point, &b.point)?,
                    weight: radial * a.mass.clone() * b.mass.clone() * factor.clone(),
                });
            }
        }
    }

    let atoms: Vec<_> = p.atoms().iter().filter(|a| !a.point.is_origin()).collect();
    for (i, a) in atoms.iter().enumerate() {
        for (j, b) in atoms.iter().enumerate().skip(i + 1) {
            // Two vertices on one line through the origin never bound a
            // triangle with the origin strictly inside.
            if ray_relation_nonzero(&a.point, &b.point) != RayRelation::Independent {
                continue;
            }
            for c in atoms.iter().skip(j + 1) {
                if let TripleClass::InteriorContaining { ccw, dets } =
                    classify_triple(&a.point, &b.point, &c.point)?
                {
                    let det_sum = dets[0].clone() + dets[1].clone() + dets[2].clone();
                    let weight =
                        det_sum * a.mass.clone() * b.mass.clone() * c.mass.clone() / phi.clone();
                    components.push(WeightedComponent {
                        component: three_point_from_ccw(ccw, &dets),
                        weight,
                    });
                }
            }
        }
    }

    let decomposition = Decomposition {
        phi,
        components,
        offset: PlanePoint::origin(),
    };
    let sum = decomposition.weight_sum();
    if !weight_sum_ok(&sum) {
        return Err(Error::InternalInconsistency(format!(
            "weights sum to {}",
            sum.to_text()
        )));
    }
    Ok(decomposition)
}

/// One-dimensional decomposition for supports on a single line through the
/// origin.
pub fn decompose_collinear<S: Scalar>(p: &FiniteDistribution<S>) -> Result<Decomposition<S>> {
    p.ensure_centered()?;
    let profile = p.profile();
    let direction = match &profile.shape {
        Shape::OnLine(d) => d.clone(),
        Shape::OriginOnly => return decompose(p),
        Shape::Planar => return Err(Error::NotOnLine),
    };

    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for a in p.atoms().iter().filter(|a| !a.point.is_origin()) {
        let t = a.point.scale_along(&direction);
        if t > S::zero() {
            positive.push((t, a));
        } else {
            negative.push((-t, a));
        }
    }
    let by_scale = |x: &(S, _), y: &(S, _)| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal);
    positive.sort_by(by_scale);
    negative.sort_by(by_scale);
    let norm = positive
        .iter()
        .fold(S::zero(), |acc, (t, a)| acc + t.clone() * a.mass.clone());

    let mut components = Vec::new();
    if !profile.origin_mass.is_zero() {
        components.push(WeightedComponent {
            component: ExtremeComponent::OriginDirac,
            weight: profile.origin_mass.clone(),
        });
    }
    for (t1, a) in &positive {
        for (t2, b) in &negative {
            let weight = (t1.clone() + t2.clone()) * a.mass.clone() * b.mass.clone() / norm.clone();
            components.push(WeightedComponent {
                component: two_point(&a.point, &b.point)?,
                weight,
            });
        }
    }
    let decomposition = Decomposition {
        phi: S::zero(),
        components,
        offset: PlanePoint::origin(),
    };
    let sum = decomposition.weight_sum();
    if !weight_sum_ok(&sum) {
        return Err(Error::InternalInconsistency(format!(
            "weights sum to {}",
            sum.to_text()
        )));
    }
    Ok(decomposition)
}

/// Removes the mean, decomposes, and records the removed mean as `offset`.
pub fn decompose_general<S: Scalar>(p: &FiniteDistribution<S>) -> Result<Decomposition<S>> {
    let (centred, offset) = p.recenter();
    let mut d = decompose(&centred)?;
    d.offset = offset;
    Ok(d)
}

/// The mean-zero mixture `Σ weight·component`.
pub fn reconstruct<S: Scalar>(d: &Decomposition<S>) -> Result<FiniteDistribution<S>> {
    FiniteDistribution::build(d.mixture())
}

/// The mixture shifted back by the recorded offset.
pub fn reconstruct_original<S: Scalar>(d: &Decomposition<S>) -> Result<FiniteDistribution<S>> {
    Ok(reconstruct(d)?.translate(&d.offset))
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport<S> {
    pub weight_sum: S,
    /// Largest `|mixture(z) - p(z)|` over all points of either support.
    pub max_atom_discrepancy: S,
    pub per_component_mean_ok: bool,
    /// Exact mode only: identical atoms and masses, weights summing to one.
    pub exact_match: bool,
    /// Discrepancy and weight-sum error within `EPS_REC`.
    pub within_tolerance: bool,
}

impl<S: Scalar> VerificationReport<S> {
    /// Pass criterion for the active mode.
    pub fn passed(&self) -> bool {
        if S::is_exact() {
            self.exact_match
        } else {
            self.within_tolerance
        }
    }
}

/// Compares the mixture described by `d` with `p` atom by atom.
pub fn verify<S: Scalar>(p: &FiniteDistribution<S>, d: &Decomposition<S>) -> VerificationReport<S> {
    let target = if d.offset.is_origin() {
        p.clone()
    } else {
        p.map_points(|z| z.clone() - d.offset.clone())
    };
    let mixture = d.mixture();

    let mut discrepancy = S::zero();
    let mut bump = |diff: S| {
        let diff = diff.abs();
        if diff > discrepancy {
            discrepancy = diff;
        }
    };
    for (point, mass) in &mixture {
        bump(mass.clone() - target.mass_at(point));
    }
    for atom in target.atoms() {
        if !mixture.iter().any(|(q, _)| q == &atom.point) {
            bump(atom.mass.clone());
        }
    }

    let weight_sum = d.weight_sum();
    let per_component_mean_ok = d
        .components
        .iter()
        .all(|c| c.weight > S::zero() && c.component.has_zero_mean());
    let exact_match =
        S::is_exact() && per_component_mean_ok && discrepancy.is_zero() && weight_sum == S::one();
    let within_tolerance = per_component_mean_ok
        && discrepancy.to_f64() <= EPS_REC
        && (weight_sum.to_f64() - 1.0).abs() <= EPS_REC;
    VerificationReport {
        weight_sum,
        max_atom_discrepancy: discrepancy,
        per_component_mean_ok,
        exact_match,
        within_tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremes::three_point;
    use crate::scalar::Rational;

    type P = PlanePoint<Rational>;

    fn p(x: i64, y: i64) -> P {
        P::from_ints(x, y)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    /// `((x, y), (numerator, denominator))` per atom.
    type Entry = ((i64, i64), (i64, i64));

    fn dist(entries: &[Entry]) -> FiniteDistribution<Rational> {
        FiniteDistribution::build(entries.iter().map(|&((x, y), (n, d))| (p(x, y), q(n, d))))
            .unwrap()
    }

    #[test]
    fn origin_only() {
        let d = decompose(&dist(&[((0, 0), (1, 1))])).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].component, ExtremeComponent::OriginDirac);
        assert_eq!(reconstruct(&d).unwrap(), dist(&[((0, 0), (1, 1))]));
    }

    #[test]
    fn pure_triangle_has_unit_weight() {
        let tri = three_point(&p(1, 0), &p(0, 1), &p(-1, -1)).unwrap();
        let d = decompose(&tri.to_distribution()).unwrap();
        assert_eq!(d.phi, q(1, 9));
        assert_eq!(
            d.components,
            vec![WeightedComponent {
                component: tri,
                weight: q(1, 1)
            }]
        );
    }

    #[test]
    fn cross_splits_into_two_axes() {
        let cross = dist(&[
            ((1, 0), (1, 4)),
            ((-1, 0), (1, 4)),
            ((0, 1), (1, 4)),
            ((0, -1), (1, 4)),
        ]);
        let d = decompose(&cross).unwrap();
        assert_eq!(d.phi, q(1, 16));
        assert_eq!(d.components.len(), 2);
        assert_eq!(
            d.weight_of(&two_point(&p(1, 0), &p(-1, 0)).unwrap()),
            Some(q(1, 2))
        );
        assert_eq!(
            d.weight_of(&two_point(&p(0, 1), &p(0, -1)).unwrap()),
            Some(q(1, 2))
        );
        assert_eq!(reconstruct(&d).unwrap(), cross);
    }

    #[test]
    fn collinear_examples() {
        let d = decompose(&dist(&[((1, 0), (1, 2)), ((-1, 0), (1, 2))])).unwrap();
        assert_eq!(d.weights(), vec![q(1, 1)]);

        let d = decompose_collinear(&dist(&[((2, 0), (1, 3)), ((-1, 0), (2, 3))])).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(
            d.weight_of(&two_point(&p(2, 0), &p(-1, 0)).unwrap()),
            Some(q(1, 1))
        );

        let line = dist(&[
            ((-1, 0), (1, 2)),
            ((0, 0), (1, 8)),
            ((1, 0), (1, 4)),
            ((2, 0), (1, 8)),
        ]);
        let d = decompose_collinear(&line).unwrap();
        assert_eq!(d.phi, q(0, 1));
        assert_eq!(
            d.components[0],
            WeightedComponent {
                component: ExtremeComponent::OriginDirac,
                weight: q(1, 8)
            }
        );
        assert_eq!(
            d.weight_of(&two_point(&p(1, 0), &p(-1, 0)).unwrap()),
            Some(q(1, 2))
        );
        assert_eq!(
            d.weight_of(&two_point(&p(2, 0), &p(-1, 0)).unwrap()),
            Some(q(3, 8))
        );
        assert_eq!(reconstruct(&d).unwrap(), line);

        let planar = dist(&[((1, 0), (1, 3)), ((0, 1), (1, 3)), ((-1, -1), (1, 3))]);
        assert_eq!(decompose_collinear(&planar), Err(Error::NotOnLine));
    }

    #[test]
    fn general_inputs_are_recentred() {
        let d = decompose_general(&dist(&[((3, 0), (1, 2)), ((1, 0), (1, 2))])).unwrap();
        assert_eq!(d.offset, p(2, 0));
        assert_eq!(
            d.weight_of(&two_point(&p(1, 0), &p(-1, 0)).unwrap()),
            Some(q(1, 1))
        );
        assert_eq!(
            reconstruct_original(&d).unwrap(),
            dist(&[((3, 0), (1, 2)), ((1, 0), (1, 2))])
        );

        let d = decompose_general(&dist(&[((5, 7), (1, 1))])).unwrap();
        assert_eq!(d.offset, p(5, 7));
        assert_eq!(d.components[0].component, ExtremeComponent::OriginDirac);

        let centred = dist(&[((2, 0), (1, 3)), ((-1, 0), (2, 3))]);
        assert_eq!(
            decompose_general(&centred).unwrap(),
            decompose(&centred).unwrap()
        );
    }

    #[test]
    fn verify_detects_mismatch() {
        let cross = dist(&[
            ((1, 0), (1, 4)),
            ((-1, 0), (1, 4)),
            ((0, 1), (1, 4)),
            ((0, -1), (1, 4)),
        ]);
        let other = dist(&[((2, 0), (1, 3)), ((-1, 0), (2, 3))]);
        let good = verify(&cross, &decompose(&cross).unwrap());
        assert!(good.exact_match && good.passed());
        assert_eq!(good.weight_sum, q(1, 1));
        let bad = verify(&cross, &decompose(&other).unwrap());
        assert!(!bad.exact_match);
        assert!(bad.max_atom_discrepancy > q(0, 1));
        assert_eq!(bad.weight_sum, q(1, 1));
    }

    #[test]
    fn rejects_nonzero_mean() {
        let off = dist(&[((1, 0), (1, 1))]);
        assert!(matches!(decompose(&off), Err(Error::NonZeroMean { .. })));
    }

    mod properties {
        use super::*;
        use crate::testing::{collinear, rotate, zero_mean};
        use proptest::prelude::*;

        type LinearMap = Box<dyn Fn(&P) -> P>;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn decomposition_reproduces_the_input(dist in zero_mean(8, 5)) {
                let d = decompose(&dist).unwrap();
                prop_assert_eq!(d.weight_sum(), q(1, 1));
                for c in &d.components {
                    prop_assert!(c.weight > q(0, 1));
                    prop_assert!(c.component.mean().is_origin());
                }
                prop_assert_eq!(&reconstruct(&d).unwrap(), &dist);
                prop_assert!(verify(&dist, &d).exact_match);
            }

            #[test]
            fn components_follow_rotation_and_scaling(dist in zero_mean(6, 4), n in 1i64..5, m in 1i64..5) {
                let base = decompose(&dist).unwrap();
                let s = q(n, m);
                let maps: [(&str, LinearMap); 2] =
                    [("rotation", Box::new(rotate)), ("scaling", Box::new(move |z: &P| z.scale(&s)))];
                for (name, f) in &maps {
                    let image = decompose(&dist.map_points(f)).unwrap();
                    prop_assert_eq!(image.components.len(), base.components.len(), "{}", name);
                    for wc in &base.components {
                        let moved = wc.component.map_linear(f).unwrap();
                        prop_assert_eq!(image.weight_of(&moved), Some(wc.weight.clone()), "{}", name);
                    }
                }
            }

            #[test]
            fn collinear_weights_follow_the_line_formula((dir, dist) in collinear(8)) {
                let d = decompose(&dist).unwrap();
                let along = |z: &P| if dir.x.is_zero() { z.y.clone() / dir.y.clone() } else { z.x.clone() / dir.x.clone() };
                let atoms: Vec<(Rational, Rational)> = dist.atoms().iter().map(|a| (along(&a.point), a.mass.clone())).collect();
                let norm = atoms.iter().filter(|(t, _)| *t > q(0, 1)).fold(q(0, 1), |acc, (t, m)| acc + t.clone() * m.clone());
                let mut expected = 0;
                for (t, mt) in atoms.iter().filter(|(t, _)| *t > q(0, 1)) {
                    for (u, mu) in atoms.iter().filter(|(u, _)| *u < q(0, 1)) {
                        let c = two_point(&dir.scale(t), &dir.scale(u)).unwrap();
                        let w = (t.clone() - u.clone()) * mt.clone() * mu.clone() / norm.clone();
                        prop_assert_eq!(d.weight_of(&c), Some(w));
                        expected += 1;
                    }
                }
                if !dist.origin_mass().is_zero() {
                    prop_assert_eq!(d.weight_of(&ExtremeComponent::OriginDirac), Some(dist.origin_mass()));
                    expected += 1;
                }
                prop_assert_eq!(d.components.len(), expected);
            }
        }
    }
}
