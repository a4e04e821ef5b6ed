//! Quantitative coarse geometry on finite graphs.
//!
//! Everything here is exact: chains and cochains carry arbitrary-precision
//! rational coefficients, filling norms are computed by a certified rational
//! simplex solver, and every inequality asserted by the library holds with
//! zero tolerance on the finite instance at hand.
//!
//! The main pieces:
//!
//! * [`graph`]: finite graphs, BFS metrics, deterministic geodesics, Cayley
//!   balls of desk-scale groups and coset families inside them.
//! * [`chain`]: sparse chains on ordered vertex tuples, boundary operator,
//!   ℓ¹-norms, diameter grading and cones.
//! * [`lp`]: exact simplex over the rationals with strong-duality and Farkas
//!   certificates.
//! * [`filling`]: graded filling norms, homological areas, isoperimetric
//!   profiles and the R+1 → R subdivision step.
//! * [`decomposition`]: path/cycle decompositions of graded 1-chains and the
//!   reduction of C_1^R chains to C_1^1.
//! * [`hyperbolicity`]: slim-triangle and four-point δ estimators and the
//!   filling-vs-hyperbolicity comparison report.
//! * [`cusped`]: combinatorial horoballs, cusped spaces and the truncated
//!   pair.
//! * [`projections`]: set-valued nearest-point projections, the projection
//!   axioms, Rel-set orders and the inductive cocycle extension.
//! * [`cochain`]: graded cochains, coboundary, norm-controlled primitives,
//!   relative cochains, pullbacks, homotopy operators and the excision
//!   quasi-inverse.

pub mod chain;
pub mod cochain;
pub mod cusped;
pub mod decomposition;
pub mod error;
pub mod filling;
pub mod graph;
pub mod hyperbolicity;
pub mod lp;
pub mod projections;
pub mod ratio;

pub use chain::Chain;
pub use cochain::{Cochain, PairMap, RelativeCochain};
pub use cusped::{CuspedSpace, Horoball};
pub use error::Error;
pub use filling::{FillingResult, FillingValue, IsoperimetricProfile};
pub use graph::{CayleyBall, GeodesicTable, Graph, SubgraphFamily};
pub use hyperbolicity::DeltaReport;
pub use lp::{LpOutcome, LpProblem, LpStatus};
pub use projections::{ProjectionSystem, RelOrder};
pub use ratio::Ratio;

/// Convenience alias used throughout.
pub type Result<T> = std::result::Result<T, Error>;
