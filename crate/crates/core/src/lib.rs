//! Exact and numerical tooling for the generalized Chazy equation
//! `x''' = -|x|^q x'' - k |x|^q/x x'^2` with `k = q + 1`.
//!
//! * [`exact`]: rationals and dense polynomials, integer remainder sequences.
//! * [`algebraic`]: the radical field `Q(γ)`, `γ^(2(q+1)) = 2(q+1)^2`.
//! * [`sturm`]: Sturm chains and root counts at rational, algebraic or
//!   infinite endpoints.
//! * [`conditions`]: the root-count conditions C1–C3 and the endpoint lemma.
//! * [`flow`]: the reduced planar fields, shooting for symmetric periodic
//!   orbits, the 3D system and trapping-region checks.

pub mod algebraic;
pub mod conditions;
pub mod exact;
pub mod flow;
pub mod sturm;

pub use algebraic::{AlgebraicNumber, RadicalField};
pub use conditions::{check_conditions, scan, ChazyParams, ConditionReport, Endpoints};
pub use exact::{BigInt, BigRational, Poly, PolyError, RatPoly, Sign};
pub use flow::{Branch, FieldSpec, OrbitResult, PlanarPoint, Trajectory};
pub use sturm::{Point, RootCount, SturmChain};
