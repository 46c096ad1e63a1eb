//! Exact symbolic calculus on the omni-Lie algebroid `DL ⊕ J¹L` of a
//! trivialized line bundle over a coordinate chart.
//!
//! The crate models scalars as exact expression trees (differentiation is
//! symbolic, never numeric), and settles every algebraic identity with a
//! seeded point-sampling oracle: two expressions are "equal" when they agree
//! at all sampled chart points within stated tolerances. On top of that sit
//! derivations and first jets of the line bundle, the der-complex with its
//! Cartan calculus, Dirac-Jacobi structure frames with isotropy/involutivity
//! verdicts, the structure zoo (2-cocycle graphs, Jacobi brackets, flat
//! connections, lcps pairs, homogeneous Poisson pairs, lifted Dirac
//! structures), pointwise leaf analysis, backward/forward images, Jacobi
//! thickening, Dirac-ization onto the slit dual bundle, and Spencer
//! operators.
//!
//! All values are immutable and all operations are pure; per-point sweeps
//! run in parallel under the default `parallel` feature (rayon) and fall
//! back to sequential loops without it.

pub mod analysis;
pub mod bundle;
pub mod chart;
pub mod dirac;
pub mod error;
pub mod exec;
pub mod forms;
pub mod linalg;
pub mod morphism;
pub mod omni;
pub mod oracle;
pub mod parse;
pub mod scalar;
pub mod spencer;
pub mod suites;
pub mod symmat;
pub mod zoo;

pub use chart::{Chart, Point};
pub use error::{Error, Result};
pub use oracle::{EqVerdict, Oracle, PointWitness};
pub use scalar::Scalar;
