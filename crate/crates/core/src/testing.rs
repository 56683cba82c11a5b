//! Shared fixtures and proptest strategies for the unit tests.

use proptest::prelude::*;

use crate::geometry::PlanePoint;
use crate::measures::FiniteDistribution;
use crate::scalar::{Rational, Scalar};

pub type P = PlanePoint<Rational>;
pub type Dist = FiniteDistribution<Rational>;

pub fn p(x: i64, y: i64) -> P {
    P::from_ints(x, y)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

fn dist(atoms: Vec<(P, Rational)>) -> Dist {
    FiniteDistribution::build(atoms).unwrap()
}

/// The worked examples: a triangle, its symmetrisations and the collinear
/// and cross supports.
pub fn fixtures() -> Vec<(&'static str, Dist)> {
    let z = [p(1, 0), p(0, 1), p(-1, -1)];
    let sym = |m: [Rational; 3], n: [Rational; 3]| {
        let mut atoms = Vec::new();
        for i in 0..3 {
            atoms.push((z[i].clone(), m[i].clone()));
            atoms.push((-z[i].clone(), n[i].clone()));
        }
        dist(atoms)
    };
    vec![
        (
            "triangle",
            dist(z.iter().map(|v| (v.clone(), q(1, 3))).collect()),
        ),
        (
            "antipodal pairs",
            sym([q(1, 4), q(1, 8), q(1, 8)], [q(1, 4), q(1, 8), q(1, 8)]),
        ),
        (
            "reflected triangles, beta 1/2",
            sym([q(1, 6), q(1, 6), q(1, 6)], [q(1, 6), q(1, 6), q(1, 6)]),
        ),
        (
            "reflected triangles, beta 1/3",
            sym([q(1, 9), q(1, 9), q(1, 9)], [q(2, 9), q(2, 9), q(2, 9)]),
        ),
        (
            "collinear",
            dist(vec![
                (p(-1, 0), q(1, 2)),
                (p(0, 0), q(1, 8)),
                (p(1, 0), q(1, 4)),
                (p(2, 0), q(1, 8)),
            ]),
        ),
        (
            "cross",
            dist(vec![
                (p(1, 0), q(1, 4)),
                (p(-1, 0), q(1, 4)),
                (p(0, 1), q(1, 4)),
                (p(0, -1), q(1, 4)),
            ]),
        ),
    ]
}

/// Builds a mean-zero distribution from weighted points by appending the
/// balancing atom `-c/t` with weight `t`, then normalising.
pub fn balance(raw: Vec<(P, Rational)>, t: Rational) -> Dist {
    let c = raw.iter().fold(P::origin(), |acc, (z, m)| acc + z.scale(m));
    let mut atoms = raw;
    atoms.push((-c.scale(&(q(1, 1) / t.clone())), t));
    let total = atoms.iter().fold(q(0, 1), |acc, (_, m)| acc + m.clone());
    dist(
        atoms
            .into_iter()
            .map(|(z, m)| (z, m / total.clone()))
            .collect(),
    )
}

fn coordinate(bound: i64) -> impl Strategy<Value = Rational> {
    (1i64..=3)
        .prop_flat_map(move |den| (-bound * den..=bound * den).prop_map(move |num| q(num, den)))
}

fn mass() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

/// Mean-zero distributions with at most `max_atoms` atoms and coordinates
/// bounded by `bound` before balancing. About a third of the points are
/// negative multiples of the previous point, so antipodal pairs are common.
pub fn zero_mean(max_atoms: usize, bound: i64) -> impl Strategy<Value = Dist> {
    let atom = (
        coordinate(bound),
        coordinate(bound),
        mass(),
        0u8..3,
        1i64..=3,
    );
    (prop::collection::vec(atom, 1..max_atoms), mass()).prop_map(|(raw, t)| {
        let mut points: Vec<(P, Rational)> = Vec::new();
        for (x, y, m, kind, s) in raw {
            let point = match points.last() {
                Some((prev, _)) if kind == 0 => -prev.scale(&q(s, 2)),
                _ => P::new(x, y),
            };
            points.push((point, m));
        }
        balance(points, t)
    })
}

/// Mean-zero distributions on the line through the origin spanned by `dir`.
pub fn collinear(max_atoms: usize) -> impl Strategy<Value = (P, Dist)> {
    let dir = (-4i64..=4, -4i64..=4).prop_filter("nonzero", |&(x, y)| (x, y) != (0, 0));
    (
        dir,
        prop::collection::vec((coordinate(5), mass()), 1..max_atoms),
        mass(),
    )
        .prop_map(|((dx, dy), raw, t)| {
            let d = p(dx, dy);
            let atoms = raw.into_iter().map(|(s, m)| (d.scale(&s), m)).collect();
            (d, balance(atoms, t))
        })
}

/// The 3-4-5 rotation.
pub fn rotate(z: &P) -> P {
    let (c, s) = (q(3, 5), q(4, 5));
    z.transform(&c, &-s.clone(), &s, &c)
}
