//! Polygonal-number representation counts and the analytic machinery used to
//! study them: exact q-series, Gauss sums, Farey dissections, theta and false
//! theta transformations, principal-value integrals, a Farey-arc contour
//! evaluator and the Eisenstein/eta identities behind the hexagonal and
//! pentagonal formulas.

pub mod analytic;
pub mod arith;
pub mod circle;
pub mod error;
pub mod farey;
pub mod modforms;
pub mod polygonal;
pub mod quad;
pub mod series;

pub use error::{Error, Result};
