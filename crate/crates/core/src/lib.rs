//! Symbolic intersection theory for the Q7 weak coupling limit.
//!
//! Computes both sides of the Chern class identity
//! `c_SM(phi_* 1_Y) = c_SM(phi0_* sigma_F 1)` on the base of the Q7 elliptic
//! fibration, exactly, over projective spaces and over formal bases of
//! arbitrary (small) dimension. Its degree-zero part is the tadpole relation
//! `chi(Y) = 2chi(O) + 2chi(D1) - chi(S1) + chi(D2) - chi(S2)`.
//!
//! Modules, bottom up:
//!
//! * [`gring`]: truncated graded polynomial rings with exact rational
//!   coefficients,
//! * [`chow`]: projective spaces, formal bases, `P(O + O + L)` and blowups,
//! * [`cclass`]: CSM and Chern-Fulton classes of hypersurfaces and complete
//!   intersections,
//! * [`cfun`]: constructible functions, stratified pushforward and
//!   specialization functions,
//! * [`q7`]: the fibration model and the verification report.

pub mod cclass;
pub mod cfun;
pub mod chow;
pub mod gring;
pub mod q7;

pub use cfun::{ConstructibleFunction, DeltaRule, FibrationTable};
pub use chow::{Integral, Space};
pub use gring::{Polynomial, Ring};
pub use q7::{build_model, verify, BaseSpec, FiberTables, Q7Model, VariantFlags, Verdict, VerificationReport};
