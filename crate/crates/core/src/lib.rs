//! Symmetric decomposition of finitely supported planar probability
//! distributions into mean-preserving distributions with one, two or three
//! support points.
//!
//! Any distribution with mean zero is written as a convex combination of
//! the Dirac mass at the origin, two-point distributions on antipodal rays
//! and three-point distributions whose triangle contains the origin. The
//! weights have a product form driven by a pair-determinant invariant `Φ`
//! of the distribution, which does not depend on the probe direction used
//! to compute it.
//!
//! ```
//! use planar_choquet::{decompose, reconstruct, FiniteDistribution, PlanePoint, Rational, Scalar};
//!
//! let q = |n, d| Rational::ratio(n, d);
//! let p = FiniteDistribution::build([
//!     (PlanePoint::from_ints(1, 0), q(1, 4)),
//!     (PlanePoint::from_ints(-1, 0), q(1, 4)),
//!     (PlanePoint::from_ints(0, 1), q(1, 4)),
//!     (PlanePoint::from_ints(0, -1), q(1, 4)),
//! ])
//! .unwrap();
//! let d = decompose(&p).unwrap();
//! assert_eq!(d.phi, q(1, 16));
//! assert_eq!(d.weights(), vec![q(1, 2), q(1, 2)]);
//! assert_eq!(reconstruct(&d).unwrap(), p);
//! ```

pub mod decomposer;
pub mod error;
pub mod extremes;
pub mod geometry;
pub mod invariants;
pub mod io;
pub mod lottery;
pub mod measures;
pub mod scalar;
#[cfg(test)]
mod testing;

pub use decomposer::{
    decompose, decompose_collinear, decompose_general, reconstruct, reconstruct_original, verify,
    Decomposition, VerificationReport, WeightedComponent,
};
pub use error::{Error, ParseScalarError, Result};
pub use extremes::{
    dirac_origin, phi_of_three_point, phi_of_triple, three_point, two_point, ComponentKind,
    ExtremeComponent,
};
pub use geometry::{
    angular_compare, classify_triple, det2, ray_relation, PlanePoint, RayRelation, TripleClass,
};
pub use invariants::{
    boundary_phi, phi_at, phi_invariant, probe_directions, InvariantReport, ProbeEvaluation,
};
pub use measures::{Atom, FiniteDistribution, Ray, RayAtom, Shape, SupportProfile};
pub use scalar::{Mode, Rational, Scalar};
