//! Weighted vertex cover on hypergraphs by synchronous primal-dual rounds.
//!
//! The engine grows a fractional edge packing: every round it raises each
//! live edge by the smallest `residual / live-degree` quotient among its
//! vertices, charges the raises to the vertices, and deletes vertices whose
//! residual falls to at most an `eps` fraction of their weight. The deleted
//! vertices are a cover within `rank / (1 - eps)` of optimal, and the
//! packing is a dual certificate of that factor that is checked from raw
//! inputs, not trusted from the engine.
//!
//! Three interchangeable arithmetic modes implement [`numeric::Numeric`]:
//! binary64 ([`f64`]), exact rationals ([`num_rational::BigRational`]), and
//! scaled 128-bit integers ([`i128`], weights pre-scaled through
//! [`engine::scale_weights_integer`] so floor division cannot stall).
//! A run commits to one mode at the type level, so integer runs cannot
//! silently mix in floating point.
//!
//! Weighted set cover is handled by [`setcover`], which maps instances to
//! hypergraph form and maps the answers back. [`oracle`] holds small
//! reference solvers (exhaustive minimum cover, sequential greedy packing)
//! used to pin down expected results in tests and benchmarks.

pub mod certificate;
pub mod engine;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod setcover;

pub use certificate::{verify_cover, verify_eps_maximal, verify_packing, CertificateReport};
pub use engine::{run_cover, scale_weights_integer, CoverResult, EngineError, RunOptions};
pub use model::{EdgeId, GraphStats, Hypergraph, ModelError, VertexId};
pub use numeric::{Epsilon, EpsilonError, Numeric, NumericMode};
pub use oracle::{brute_force_min_cover, greedy_maximal_packing, GreedyBaseline, OracleResult};
pub use setcover::{SetCoverInstance, SetCoverReduction};
