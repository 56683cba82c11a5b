//! Finite-support distributions on the plane.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{angular_cmp_nonzero, ray_relation_nonzero, PlanePoint, RayRelation};
use crate::scalar::{Scalar, EPS_MASS, EPS_MEAN};

#[derive(Clone, Debug, PartialEq)]
pub struct Atom<S> {
    pub point: PlanePoint<S>,
    pub mass: S,
}

/// Probability distribution with finitely many atoms. Atoms are distinct,
/// carry positive mass, and are sorted lexicographically by point.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution<S> {
    atoms: Vec<Atom<S>>,
    mean: PlanePoint<S>,
}

impl<S: Scalar> FiniteDistribution<S> {
    /// Validates raw `(point, mass)` entries. Duplicate points are merged and
    /// zero masses dropped.
    pub fn build<I>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PlanePoint<S>, S)>,
    {
        let mut entries = Vec::new();
        for (index, (point, mass)) in raw.into_iter().enumerate() {
            if !point.is_finite() || !mass.to_f64().is_finite() {
                return Err(Error::NonFinite);
            }
            if mass < S::zero() {
                return Err(Error::NegativeMass {
                    index,
                    mass: mass.to_text(),
                });
            }
            entries.push(Atom { point, mass });
        }
        entries.sort_by(|a, b| a.point.lex_cmp(&b.point));

        let mut atoms: Vec<Atom<S>> = Vec::with_capacity(entries.len());
        for atom in entries {
            match atoms.last_mut() {
                Some(last) if last.point == atom.point => {
                    last.mass = last.mass.clone() + atom.mass;
                }
                _ => atoms.push(atom),
            }
        }
        atoms.retain(|a| !a.mass.is_zero());

        let total = atoms.iter().fold(S::zero(), |acc, a| acc + a.mass.clone());
        if !total.approx_eq(&S::one(), EPS_MASS) {
            return Err(Error::TotalMassNotOne {
                deficit: (S::one() - total.clone()).to_text(),
                total: total.to_text(),
            });
        }
        Ok(Self::from_sorted(atoms))
    }

    fn from_sorted(atoms: Vec<Atom<S>>) -> Self {
        let mean = atoms
            .iter()
            .fold(PlanePoint::origin(), |acc, a| acc + a.point.scale(&a.mass));
        Self { atoms, mean }
    }

    pub fn atoms(&self) -> &[Atom<S>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `(Σ m·x, Σ m·y)`
    pub fn mean(&self) -> &PlanePoint<S> {
        &self.mean
    }

    pub fn mass_at(&self, point: &PlanePoint<S>) -> S {
        self.atoms
            .binary_search_by(|a| a.point.lex_cmp(point))
            .map(|i| self.atoms[i].mass.clone())
            .unwrap_or_else(|_| S::zero())
    }

    pub fn origin_mass(&self) -> S {
        self.mass_at(&PlanePoint::origin())
    }

    /// True when the mean is the origin: exactly in exact mode, and within
    /// `EPS_MEAN` times the mean absolute coordinate in float mode.
    pub fn is_centered(&self) -> bool {
        if S::is_exact() {
            return self.mean.is_origin();
        }
        let scale: f64 = self
            .atoms
            .iter()
            .map(|a| {
                let (x, y) = a.point.to_f64();
                a.mass.to_f64() * (x.abs() + y.abs()) / 2.0
            })
            .sum();
        let (mx, my) = self.mean.to_f64();
        mx.abs().max(my.abs()) <= EPS_MEAN * scale
    }

    pub fn ensure_centered(&self) -> Result<()> {
        if self.is_centered() {
            Ok(())
        } else {
            Err(Error::NonZeroMean {
                x: self.mean.x.to_text(),
                y: self.mean.y.to_text(),
            })
        }
    }

    /// Applies `f` to every support point. `f` must be injective.
    pub fn map_points(&self, f: impl Fn(&PlanePoint<S>) -> PlanePoint<S>) -> Self {
        let mut atoms: Vec<Atom<S>> = self
            .atoms
            .iter()
            .map(|a| Atom {
                point: f(&a.point),
                mass: a.mass.clone(),
            })
            .collect();
        atoms.sort_by(|a, b| a.point.lex_cmp(&b.point));
        Self::from_sorted(atoms)
    }

    pub fn translate(&self, offset: &PlanePoint<S>) -> Self {
        self.map_points(|p| p.clone() + offset.clone())
    }

    /// Translates by `-mean`. Returns the centred distribution and the
    /// original mean.
    pub fn recenter(&self) -> (Self, PlanePoint<S>) {
        let offset = self.mean.clone();
        if offset.is_origin() {
            return (self.clone(), offset);
        }
        let centred = self.map_points(|p| p.clone() - offset.clone());
        (centred, offset)
    }

    pub fn profile(&self) -> SupportProfile<S> {
        SupportProfile::of(self)
    }
}

/// A support point described by its position along its ray.
#[derive(Clone, Debug, PartialEq)]
pub struct RayAtom<S> {
    pub point: PlanePoint<S>,
    /// `point = scale · direction`, always positive.
    pub scale: S,
    pub mass: S,
}

/// Atoms sharing one ray from the origin. `direction` is the
/// lexicographically smallest support point on the ray.
#[derive(Clone, Debug, PartialEq)]
pub struct Ray<S> {
    pub direction: PlanePoint<S>,
    pub atoms: Vec<RayAtom<S>>,
}

impl<S: Scalar> Ray<S> {
    pub fn mass(&self) -> S {
        self.atoms
            .iter()
            .fold(S::zero(), |acc, a| acc + a.mass.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape<S> {
    OriginOnly,
    /// Every atom lies on the line through the origin spanned by `direction`.
    OnLine(PlanePoint<S>),
    Planar,
}

/// Support grouped by rays. Rays are listed in counterclockwise order of
/// their argument starting from the positive x axis.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportProfile<S> {
    pub origin_mass: S,
    pub rays: Vec<Ray<S>>,
    pub shape: Shape<S>,
    /// Pairs of opposite rays, both carrying mass. The first index is the ray
    /// whose direction is lexicographically smaller.
    pub antipodal_pairs: Vec<(usize, usize)>,
}

impl<S: Scalar> SupportProfile<S> {
    fn of(p: &FiniteDistribution<S>) -> Self {
        let mut origin_mass = S::zero();
        let mut rays: Vec<Ray<S>> = Vec::new();
        // Atoms arrive in lexicographic order, so the first atom seen on a ray
        // is its representative.
        for atom in p.atoms() {
            if atom.point.is_origin() {
                origin_mass = atom.mass.clone();
                continue;
            }
            let slot = rays.iter().position(|r| {
                ray_relation_nonzero(&r.direction, &atom.point) == RayRelation::SameRay
            });
            let ray = match slot {
                Some(i) => &mut rays[i],
                None => {
                    rays.push(Ray {
                        direction: atom.point.clone(),
                        atoms: Vec::new(),
                    });
                    rays.last_mut().expect("just pushed")
                }
            };
            let scale = atom.point.scale_along(&ray.direction);
            ray.atoms.push(RayAtom {
                point: atom.point.clone(),
                scale,
                mass: atom.mass.clone(),
            });
        }
        rays.sort_by(|a, b| angular_cmp_nonzero(&a.direction, &b.direction));
        for ray in &mut rays {
            ray.atoms
                .sort_by(|a, b| a.scale.partial_cmp(&b.scale).unwrap_or(Ordering::Equal));
        }

        let mut antipodal_pairs = Vec::new();
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if ray_relation_nonzero(&rays[i].direction, &rays[j].direction)
                    == RayRelation::Antipodal
                {
                    if rays[i].direction.lex_cmp(&rays[j].direction) == Ordering::Less {
                        antipodal_pairs.push((i, j));
                    } else {
                        antipodal_pairs.push((j, i));
                    }
                }
            }
        }
        antipodal_pairs.sort();

        let shape = if rays.is_empty() {
            Shape::OriginOnly
        } else if rays.iter().all(|r| {
            ray_relation_nonzero(&rays[0].direction, &r.direction) != RayRelation::Independent
        }) {
            let direction = rays
                .iter()
                .map(|r| &r.direction)
                .min_by(|a, b| a.lex_cmp(b))
                .expect("nonempty")
                .clone();
            Shape::OnLine(direction)
        } else {
            Shape::Planar
        };

        Self {
            origin_mass,
            rays,
            shape,
            antipodal_pairs,
        }
    }

    pub fn total_mass(&self) -> S {
        self.rays
            .iter()
            .fold(self.origin_mass.clone(), |acc, r| acc + r.mass())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

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
    fn build_merges_and_sorts() {
        let d = dist(&[((1, 0), (1, 2)), ((1, 0), (1, 4)), ((-1, 0), (1, 4))]);
        assert_eq!(d.len(), 2);
        assert_eq!(
            d.atoms()[0],
            Atom {
                point: p(-1, 0),
                mass: q(1, 4)
            }
        );
        assert_eq!(
            d.atoms()[1],
            Atom {
                point: p(1, 0),
                mass: q(3, 4)
            }
        );
        let single = dist(&[((0, 0), (1, 1))]);
        assert_eq!(single.origin_mass(), q(1, 1));
    }

    #[test]
    fn build_rejects_bad_masses() {
        let short = FiniteDistribution::build([(p(1, 0), q(1, 2))]);
        assert!(
            matches!(short, Err(Error::TotalMassNotOne { ref deficit, .. }) if deficit == "1/2")
        );
        let negative = FiniteDistribution::build([(p(1, 0), q(3, 2)), (p(2, 0), q(-1, 2))]);
        assert!(matches!(
            negative,
            Err(Error::NegativeMass { index: 1, .. })
        ));
        let zero_dropped = dist(&[((1, 0), (1, 1)), ((2, 0), (0, 1))]);
        assert_eq!(zero_dropped.len(), 1);
    }

    #[test]
    fn mean_examples() {
        assert!(dist(&[((1, 0), (1, 2)), ((-1, 0), (1, 2))])
            .mean()
            .is_origin());
        assert!(dist(&[((2, 0), (1, 3)), ((-1, 0), (2, 3))])
            .mean()
            .is_origin());
        assert_eq!(dist(&[((1, 1), (1, 1))]).mean(), &p(1, 1));
    }

    #[test]
    fn recenter_examples() {
        let (c, off) = dist(&[((2, 3), (1, 1))]).recenter();
        assert_eq!(off, p(2, 3));
        assert_eq!(c, dist(&[((0, 0), (1, 1))]));

        let (c, off) = dist(&[((3, 0), (1, 2)), ((1, 0), (1, 2))]).recenter();
        assert_eq!(off, p(2, 0));
        assert_eq!(c, dist(&[((1, 0), (1, 2)), ((-1, 0), (1, 2))]));

        let centred = dist(&[((2, 0), (1, 3)), ((-1, 0), (2, 3))]);
        let (again, off) = centred.recenter();
        assert!(off.is_origin());
        assert_eq!(again, centred);
    }

    #[test]
    fn profile_examples() {
        let cross = dist(&[
            ((1, 0), (1, 4)),
            ((-1, 0), (1, 4)),
            ((0, 1), (1, 4)),
            ((0, -1), (1, 4)),
        ]);
        let prof = cross.profile();
        assert_eq!(prof.rays.len(), 4);
        assert_eq!(prof.antipodal_pairs.len(), 2);
        assert_eq!(prof.shape, Shape::Planar);
        // Rays counterclockwise from angle 0.
        let dirs: Vec<P> = prof.rays.iter().map(|r| r.direction.clone()).collect();
        assert_eq!(dirs, vec![p(1, 0), p(0, 1), p(-1, 0), p(0, -1)]);
        // (-1,0) < (1,0) and (0,-1) < (0,1) lexicographically.
        assert_eq!(prof.antipodal_pairs, vec![(2, 0), (3, 1)]);

        let tri = dist(&[((1, 0), (1, 3)), ((0, 1), (1, 3)), ((-1, -1), (1, 3))]);
        let prof = tri.profile();
        assert_eq!((prof.rays.len(), prof.antipodal_pairs.len()), (3, 0));
        assert_eq!(prof.shape, Shape::Planar);

        let line = dist(&[((2, 0), (1, 3)), ((-1, 0), (2, 3))]);
        let prof = line.profile();
        assert_eq!((prof.rays.len(), prof.antipodal_pairs.len()), (2, 1));
        assert_eq!(prof.shape, Shape::OnLine(p(-1, 0)));
    }

    #[test]
    fn profile_scales_are_relative_to_smallest_point() {
        let d = dist(&[((2, 2), (1, 4)), ((3, 3), (1, 4)), ((-1, -1), (1, 2))]);
        let prof = d.profile();
        let ray = prof.rays.iter().find(|r| r.direction == p(2, 2)).unwrap();
        let scales: Vec<Rational> = ray.atoms.iter().map(|a| a.scale.clone()).collect();
        assert_eq!(scales, vec![q(1, 1), q(3, 2)]);
        assert_eq!(dist(&[((0, 0), (1, 1))]).profile().shape, Shape::OriginOnly);
    }

    fn arb_raw() -> impl Strategy<Value = Vec<((i64, i64), i64)>> {
        prop::collection::vec(((-5i64..=5, -5i64..=5), 1i64..10), 1..8)
    }

    fn normalise(raw: &[((i64, i64), i64)]) -> FiniteDistribution<Rational> {
        let total: i64 = raw.iter().map(|r| r.1).sum();
        FiniteDistribution::build(raw.iter().map(|&((x, y), m)| (p(x, y), q(m, total)))).unwrap()
    }

    proptest! {
        #[test]
        fn recenter_gives_zero_mean(raw in arb_raw()) {
            let (c, off) = normalise(&raw).recenter();
            prop_assert!(c.mean().is_origin());
            prop_assert_eq!(c.translate(&off), normalise(&raw));
        }

        #[test]
        fn profile_partitions_mass(raw in arb_raw()) {
            let d = normalise(&raw);
            let prof = d.profile();
            prop_assert_eq!(prof.total_mass(), q(1, 1));
            for ray in &prof.rays {
                for a in &ray.atoms {
                    prop_assert!(a.scale > q(0, 1));
                    prop_assert_eq!(&ray.direction.scale(&a.scale), &a.point);
                }
            }
        }

        #[test]
        fn line_balance_for_centred_collinear(raw in prop::collection::vec((-5i64..=5, 1i64..10), 1..8)) {
            let total: i64 = raw.iter().map(|r| r.1).sum();
            let d = FiniteDistribution::build(raw.iter().map(|&(x, m)| (p(x, 2 * x), q(m, total)))).unwrap();
            let (c, _) = d.recenter();
            let prof = c.profile();
            if let Shape::OnLine(dir) = &prof.shape {
                let (mut pos, mut neg) = (q(0, 1), q(0, 1));
                for a in prof.rays.iter().flat_map(|r| &r.atoms) {
                    let t = a.point.scale_along(dir);
                    if t > q(0, 1) { pos += t * a.mass.clone(); } else { neg -= t * a.mass.clone(); }
                }
                prop_assert_eq!(pos, neg);
            } else {
                prop_assert_eq!(prof.shape, Shape::OriginOnly);
            }
        }

        #[test]
        fn build_of_atoms_is_identity(raw in arb_raw()) {
            let d = normalise(&raw);
            let again = FiniteDistribution::build(d.atoms().iter().map(|a| (a.point.clone(), a.mass.clone()))).unwrap();
            prop_assert_eq!(again, d);
        }
    }

    #[test]
    fn float_centering_uses_relative_tolerance() {
        let d = FiniteDistribution::build([
            (PlanePoint::new(1.0 + 1e-12, 0.0), 0.5),
            (PlanePoint::new(-1.0, 0.0), 0.5),
        ])
        .unwrap();
        assert!(d.is_centered());
        let off = FiniteDistribution::build([(PlanePoint::new(1e-3, 0.0), 1.0)]).unwrap();
        assert!(off.ensure_centered().is_err());
    }
}
