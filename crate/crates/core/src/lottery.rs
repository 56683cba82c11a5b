//! Two-stage sampling from a decomposition: draw a component with
//! probability equal to its weight, then draw one of its support points with
//! probability equal to its mass. The law of the result is the decomposed
//! distribution.
//!
//! # Generator
//!
//! Draws come from SplitMix64 so runs can be replayed bit for bit by any
//! implementation. The state is a `u64` initialised to the seed; each call
//!
//! ```text
//! state = state + 0x9E3779B97F4A7C15            (wrapping)
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9      (wrapping)
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB      (wrapping)
//! return z ^ (z >> 31)
//! ```
//!
//! A uniform `u` in `[0, 1)` is `(next >> 11) · 2⁻⁵³`. A categorical draw
//! over weights `w` returns the first index `i` with `u·Σw < w_0 + … + w_i`,
//! scanning in the decomposition's component order (resp. the component's
//! point order). One draw of the lottery consumes exactly two uniforms.
//!
//! Parallel workers use independent streams: worker `k` is seeded with
//! [`worker_seed`]`(seed, k)`, the `(k + 1)`-th output of a generator seeded
//! with `seed`.

use rand_core::{RngCore, SeedableRng};
pub use rand_xoshiro::SplitMix64;

use crate::decomposer::Decomposition;
use crate::error::{Error, Result};
use crate::extremes::ExtremeComponent;
use crate::geometry::PlanePoint;
use crate::scalar::Scalar;

pub fn seeded(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

pub fn worker_seed(seed: u64, worker: u64) -> u64 {
    let mut rng = seeded(seed);
    let mut out = 0;
    for _ in 0..=worker {
        out = rng.next_u64();
    }
    out
}

pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn categorical(weights: &[f64], u: f64) -> usize {
    let total: f64 = weights.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    // Rounding can leave `target` at the very top; fall back to the last
    // index with positive weight.
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

pub fn sample_component<'a, S: Scalar>(
    d: &'a Decomposition<S>,
    rng: &mut impl RngCore,
) -> &'a ExtremeComponent<S> {
    let weights: Vec<f64> = d.components.iter().map(|c| c.weight.to_f64()).collect();
    &d.components[categorical(&weights, uniform(rng))].component
}

pub fn sample_point<S: Scalar>(c: &ExtremeComponent<S>, rng: &mut impl RngCore) -> PlanePoint<S> {
    let support = c.support();
    let masses: Vec<f64> = support.iter().map(|(_, m)| m.to_f64()).collect();
    support[categorical(&masses, uniform(rng))].0.clone()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointFrequency<S> {
    pub point: PlanePoint<S>,
    /// Mass of the point in the mixture described by the decomposition.
    pub expected: f64,
    pub count: u64,
    pub frequency: f64,
}

impl<S> PointFrequency<S> {
    /// Three binomial standard deviations of the frequency after `draws`.
    pub fn band(&self, draws: u64) -> f64 {
        3.0 * (self.expected * (1.0 - self.expected) / draws as f64).sqrt()
    }

    pub fn within_band(&self, draws: u64) -> bool {
        (self.frequency - self.expected).abs() <= self.band(draws)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalSummary<S> {
    pub draws: u64,
    pub seed: u64,
    pub empirical_mean: (f64, f64),
    /// One entry per support point of the mixture, in lexicographic order,
    /// expressed in the original (offset) frame.
    pub frequencies: Vec<PointFrequency<S>>,
}

impl<S: Scalar> EmpiricalSummary<S> {
    /// Mean of the mixture the draws come from.
    pub fn expected_mean(&self) -> (f64, f64) {
        self.frequencies.iter().fold((0.0, 0.0), |acc, f| {
            let (x, y) = f.point.to_f64();
            (acc.0 + f.expected * x, acc.1 + f.expected * y)
        })
    }

    /// Three standard errors of the empirical mean, per axis.
    pub fn mean_band(&self) -> (f64, f64) {
        let (mx, my) = self.expected_mean();
        let (vx, vy) = self.frequencies.iter().fold((0.0, 0.0), |acc, f| {
            let (x, y) = f.point.to_f64();
            (
                acc.0 + f.expected * (x - mx).powi(2),
                acc.1 + f.expected * (y - my).powi(2),
            )
        });
        let root_n = (self.draws as f64).sqrt();
        (3.0 * vx.sqrt() / root_n, 3.0 * vy.sqrt() / root_n)
    }

    pub fn mean_within_band(&self) -> bool {
        let (ex, ey) = self.expected_mean();
        let (bx, by) = self.mean_band();
        (self.empirical_mean.0 - ex).abs() <= bx && (self.empirical_mean.1 - ey).abs() <= by
    }
}

/// Runs `n` independent two-stage draws from a generator seeded with `seed`.
pub fn run<S: Scalar>(d: &Decomposition<S>, n: u64, seed: u64) -> Result<EmpiricalSummary<S>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "number of draws must be at least 1".into(),
        ));
    }
    let table = d.mixture();
    let index_of = |p: &PlanePoint<S>| {
        table
            .binary_search_by(|(q, _)| q.lex_cmp(p))
            .expect("component point is in the mixture")
    };
    let component_weights: Vec<f64> = d.components.iter().map(|c| c.weight.to_f64()).collect();
    let components: Vec<(Vec<usize>, Vec<f64>)> = d
        .components
        .iter()
        .map(|c| {
            let support = c.component.support();
            (
                support.iter().map(|(p, _)| index_of(p)).collect(),
                support.iter().map(|(_, m)| m.to_f64()).collect(),
            )
        })
        .collect();

    let mut rng = seeded(seed);
    let mut counts = vec![0u64; table.len()];
    for _ in 0..n {
        let (points, masses) = &components[categorical(&component_weights, uniform(&mut rng))];
        counts[points[categorical(masses, uniform(&mut rng))]] += 1;
    }

    let offset = d.offset.to_f64();
    let mut mean = (0.0, 0.0);
    let frequencies = table
        .iter()
        .zip(&counts)
        .map(|((p, m), &count)| {
            let (x, y) = p.to_f64();
            mean.0 += count as f64 * x;
            mean.1 += count as f64 * y;
            PointFrequency {
                point: p.clone() + d.offset.clone(),
                expected: m.to_f64(),
                count,
                frequency: count as f64 / n as f64,
            }
        })
        .collect();
    Ok(EmpiricalSummary {
        draws: n,
        seed,
        empirical_mean: (mean.0 / n as f64 + offset.0, mean.1 / n as f64 + offset.1),
        frequencies,
    })
}
