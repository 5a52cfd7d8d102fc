//! Primitive square-tiled surfaces in the stratum H(2).
//!
//! The crate covers the whole pipeline from a single surface to a
//! noncongruence certificate for its Veech group:
//!
//! - [`origami`]: permutation-pair surfaces, cylinder coordinates,
//!   canonical keys, primitivity and the integer Weierstrass invariant.
//! - [`sl2`]: the `SL(2,Z)` action, orbits, cusps and Wohlfahrt levels.
//! - [`enumeration`]: exhaustive enumeration and the closed counting formulas.
//! - [`congruence`]: index arithmetic and the Kühnlein criterion.
//! - [`cli`] and [`cache`]: the command-line front end and its orbit cache.

pub mod cache;
pub mod cli;
pub mod congruence;
pub mod enumeration;
pub mod error;
pub mod origami;
pub mod sl2;

pub use error::{Error, Result};
pub use origami::{CanonicalKey, CylinderDiagram, HolonomyLattice, Origami};
pub use sl2::{MatrixZ, Orbit};
