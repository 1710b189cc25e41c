//! Ladders of closely spaced resonances and eigenvalues for one-dimensional
//! Schrödinger operators whose potential consists of two compactly supported
//! complex components separated by a large distance `2ℓ`.
//!
//! The wavenumbers `k` solving `e^{4ikℓ} = F(k)` near the real axis form an
//! approximately equidistant sequence around the points `a_n = πn / (2ℓ)`,
//! much like the transmission resonances of a Fabry–Pérot cavity. This crate
//!
//! - builds the characteristic function `F` from exact transfer matrices of
//!   piecewise-constant and delta potentials ([`jost`], [`characteristic`]),
//! - certifies a disk `|k| ≤ r` on which the fixed-point map
//!   `z ↦ -(i/4ℓ) ln F(z + a_n)` contracts, and solves each ladder entry
//!   ([`ladder`]),
//! - evaluates the two asymptotic series in `1/ℓ` with remainder bounds
//!   ([`series`]),
//! - cross-checks every entry by the argument principle and Newton's method
//!   ([`oracle`]).
//!
//! ```
//! use fpladder::{characteristic, ladder, BipartiteProblem, Complex, HalfPotential};
//!
//! let problem = BipartiteProblem::new(
//!     HalfPotential::step(Complex::new(0.0, 2.0), 1.0),
//!     HalfPotential::step(Complex::new(1.0, 0.0), 1.0),
//!     100.0,
//! )
//! .unwrap();
//! let geometry = characteristic::disk_geometry(&problem, &Default::default()).unwrap();
//! let entry = ladder::solve_entry(&problem, &geometry, 3, &Default::default()).unwrap();
//! assert!(entry.k.im < 0.0);
//! ```

pub mod characteristic;
mod error;
pub mod jost;
pub mod ladder;
pub mod oracle;
pub mod potentials;
pub mod series;

pub use error::{Error, Result};
pub use potentials::{BipartiteProblem, HalfPotential, Side};

/// Double-precision complex scalar used for wavenumbers, potential values
/// and boundary data.
pub type Complex = num_complex::Complex64;

pub(crate) const I: Complex = Complex::new(0.0, 1.0);
