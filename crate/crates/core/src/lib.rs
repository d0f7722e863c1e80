//! Position-dependent-mass (PDEM) Schrödinger problems built from exactly
//! solvable trigonometric potentials by a point canonical transformation, and
//! checked against independent finite-difference eigensolvers.
//!
//! Units: `ħ²/(2m₀) = 1`. Constant mass `H = −d²/dy² + U(y)`; position
//! dependent mass `H = −(d/dz)((1/m(z)) d/dz) + U(z)`.

pub mod cli;
pub mod error;
pub mod interval;
pub mod massprofiles;
pub mod oracles;
pub mod pct;
pub mod refmodels;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use interval::Interval;
