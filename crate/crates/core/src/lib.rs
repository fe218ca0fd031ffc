//! Building blocks for ergodic-theory experiments with matrix cocycles over
//! irrational rotations and Bernoulli shifts.
//!
//! The crate is organized around one hard requirement: every quantity that a
//! theorem pins down exactly is computed exactly. Circle points and interval
//! endpoints live in the module [`numtheory`] as elements `p + q·θ` with
//! rational `p, q`, ordered by certified integer comparisons rather than
//! floating point. Floating point appears only where statistics are expected
//! (Birkhoff averages, Monte-Carlo estimates) or where unitary matrices are
//! involved.
//!
//! Module map:
//!
//! * [`numtheory`]: continued fractions, the exact `p + q·θ` scalar type,
//!   rotation counting.
//! * [`stepfn`]: circle step functions with exact breakpoints, generic in
//!   the value type.
//! * [`clockshift`]: the clock/shift unitary pair, its conjugation maps, and
//!   small dense complex linear algebra (Jacobi eigensolver, k-th roots).
//! * [`dynsys`]: Bernoulli shifts and circle rotations plus their matrix
//!   observables and cylinder/arc set algebra.
//! * [`cocycle`]: the two-letter matrix cocycle, its iterates, the twisted
//!   shift `β`, Birkhoff ergodicity runs, and trivialization recursions.
//! * [`singular`]: the Cantor-type chart, signed-digit decoding, and the
//!   shift-quasi-invariant singular measure with exact series arithmetic.
//! * [`equiv`]: exact deciders for phase/cocycle equivalence questions over
//!   `ℚ ⊕ ℚθ`.
//! * [`l1gap`]: the ℓ¹ lower-bound obstruction, as norm chains and the
//!   atomic harmonic-number bound.

pub mod clockshift;
pub mod cocycle;
pub mod dynsys;
pub mod equiv;
pub mod l1gap;
pub mod numtheory;
pub mod singular;
pub mod stepfn;

pub use clockshift::{CMat, ClockPair};
pub use numtheory::{Convergent, QTheta, Theta};
