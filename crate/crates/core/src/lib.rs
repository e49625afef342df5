//! Spectra of partially transposed Wishart matrices.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense Hermitian matrices over a bipartite space `C^d1 ⊗ C^d2`,
//!   partial transposition, partial trace and a full-spectrum eigensolver.
//! * [`ensembles`]: seeded Ginibre / Wishart / induced-state / mixture /
//!   pure-state samplers keyed by a `(master_seed, stream_index)` pair.
//! * [`laws`]: semicircle, Marčenko–Pastur and product-of-semicircles limit laws.
//! * [`combinatorics`]: set and non-crossing partitions, Kreweras complement and
//!   the matching conditions behind the moment method, with exhaustive counters.
//! * [`spectral`]: empirical spectral statistics and the PPT gauge.

pub mod combinatorics;
pub mod ensembles;
mod error;
pub mod laws;
pub mod linalg;
mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use combinatorics::{MultiIndex, Partition};
pub use ensembles::{SampleStream, WishartParams};
pub use laws::LimitLaw;
pub use linalg::{BipartiteShape, Factor, Field, HermitianMatrix};
pub use spectral::{EnsembleKind, Histogram, SampleMeta, SpectralSample};
