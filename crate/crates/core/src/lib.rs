//! Generalized Kepler problems labeled by a dimension `D ≥ 3`, a curvature κ
//! and a half-integer magnetic charge μ.
//!
//! The crate computes the closed-form bound-state spectrum and checks it two
//! ways: numerically, by solving the reduced radial eigenproblem of every
//! angular sector with a Sturm-bisection finite-difference solver and an
//! independent shooting integrator; and exactly, through Weyl dimensions and
//! quadratic Casimirs of the orthogonal groups acting on each level.
//!
//! ```
//! use genkepler::{model::ProblemSpec, spectrum::spectrum_table};
//!
//! let hydrogen = ProblemSpec::new(3, 0.0, 0).unwrap();
//! let table = spectrum_table(&hydrogen, 2);
//! let degeneracies: Vec<String> =
//!     table.entries.iter().map(|e| e.degeneracy.to_string()).collect();
//! assert_eq!(degeneracies, ["1", "4", "9"]);
//! ```

pub mod cli;
pub mod error;
pub mod format;
pub mod gauge;
pub mod model;
pub mod radial;
pub mod reptheory;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use model::{make_spec, CutoffIndex, ProblemSpec};

/// Exact rational used for half-integer quantum numbers and Casimir values.
pub type Rational = num_rational::Ratio<i64>;
