//! Rigorous numerics and combinatorial topology for Denjoy-type circle and
//! sphere homeomorphisms.
//!
//! The crate has four layers:
//!
//! * [`cf`] - exact continued-fraction arithmetic for rotation numbers and
//!   the GL(2,Z)-equivalence decision procedure with a brute-force matrix
//!   search as an independent oracle;
//! * [`circle`] - the blown-up circle: building the Denjoy map from a
//!   blow-up schedule, evaluating and iterating it, the invariant Cantor
//!   approximation, and the semi-conjugacy / wandering-interval checks;
//! * [`sphere`] - the suspension to the sphere, the mapping-torus flow, and
//!   end-count estimation from the induced arc dynamics;
//! * [`topology`] - spine and mapping-torus cell complexes, genus formulas,
//!   handle-attachment boundary calculus, and the gluing-expression
//!   evaluator.
//!
//! All approximate quantities are certified enclosures ([`CertifiedValue`]);
//! order comparisons that matter are exact, through quadratic-surd
//! arithmetic. Everything is immutable after construction and safe to use
//! concurrently.

pub mod certified;
pub mod cf;
pub mod circle;
pub mod error;
pub mod rng;
pub mod sphere;
pub mod surd;
pub mod topology;

pub use certified::CertifiedValue;
pub use cf::{
    gl2z_equivalent, gl2z_matrix_search, mobius_apply, mobius_apply_with_effective,
    ContinuedFraction, Gl2zVerdict, IntegerMatrix2,
};
pub use error::{Error, Result};
pub use rng::Lcg64;
pub use surd::QuadraticSurd;
