//! Finite 2-dimensional simplicial complexes and the combinatorial invariants
//! built on them: exact integer homology, group presentations, a catalog of
//! economical complexes for cyclic and abelian groups, a colored-graph census
//! of small minimal complexes, edge-metric systoles, and certified bound
//! intervals for simplicial complexity and systolic area.
//!
//! All homological computation is exact (arbitrary-precision integers); all
//! real-valued bounds are certified with rational interval arithmetic.

pub mod bounds;
pub mod census;
pub mod colored;
pub mod compile;
pub mod complex;
pub mod constructions;
pub mod group;
pub mod homology;
pub mod interval;
pub mod marked;
pub mod matrix;
pub mod metric;
pub mod presentation;

pub use complex::{ComplexError, ComplexStats, MinimalityReport, Simplex2Complex};
pub use group::GroupSpec;
pub use homology::HomologySummary;
pub use marked::MarkedComplex;
pub use matrix::{IntMatrix, SmithNormalForm};
pub use presentation::Presentation;
