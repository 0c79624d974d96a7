//! Cartan subalgebras in apposition, Coxeter spectra, and affine Toda mass
//! operators for the simple complex Lie algebras.
//!
//! The crate builds, for every simple type `A_r .. G_2`:
//!
//! * the root system with its combinatorial invariants ([`rootsys`]),
//! * the bicolored Coxeter element and its exact matrix identities
//!   ([`coxeter`]),
//! * a Weyl-normalized Chevalley basis with Killing form, compact-form
//!   involution `*` and positive Hermitian form `H` ([`chevalley`]),
//! * the principal gradation, the cyclic element `e`, its centralizer — a
//!   Cartan subalgebra in apposition to the original one — and the commuting
//!   Hermitian mass operators whose eigenvalue vectors are eigenvectors of
//!   the Cartan matrix ([`apposition`]),
//! * the factorization patterns of Cartan-matrix eigenvectors: zero
//!   clusters, Perron–Frobenius subsystem matches and PF-type permutations
//!   ([`patterns`]),
//! * the affine Toda Lagrangian, its linearized Klein–Gordon normal modes
//!   and the dispersion checks ([`toda`]).
//!
//! Two independent pipelines compute the same spectra: a pure Cartan-matrix
//! eigensolve in [`patterns`] and the Lie-algebra mass-operator route in
//! [`apposition`]. The [`cli`] module cross-checks them and renders reports.
//!
//! ```
//! use apposition::rootsys::{RootSystem, SimpleType};
//!
//! let rs = RootSystem::build(SimpleType::parse("A2").unwrap()).unwrap();
//! assert_eq!(rs.roots.len(), 6);
//! assert_eq!(rs.coxeter_number, 3);
//! ```

pub mod apposition;
pub mod chevalley;
pub mod cli;
pub mod coxeter;
pub mod exact;
pub mod linalg;
pub mod patterns;
pub mod rootsys;
pub mod toda;

pub use crate::apposition::{AppositionData, MassSpectrum, PrincipalGrading, VerificationReport};
pub use crate::chevalley::{LieAlgebra, StarStructure};
pub use crate::cli::ReportDocument;
pub use crate::coxeter::{CoxeterData, CoxeterEigenpair};
pub use crate::patterns::{ClusterReport, EigenTable};
pub use crate::rootsys::{Bicoloring, Family, RootSystem, SimpleType};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: char, rank: usize },
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("{0} is not a root")]
    NotARoot(String),
    #[error("numerical check failed: {0}")]
    Numerical(String),
    #[error("degenerate joint eigenspace of dimension {0}")]
    DegenerateEigenspace(usize),
    #[error("kernel dimension {found}, expected {expected}")]
    KernelDimension { found: usize, expected: usize },
    #[error("wave numbers ({k}, {omega}) incommensurate with the periodic grid")]
    IncommensurateWaveNumbers { k: f64, omega: f64 },
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
