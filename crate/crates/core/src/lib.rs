//! Morse data of even unimodular lattices for Gaussian potential energy.
//!
//! The crate decides whether an even unimodular lattice in dimension 8–32 is
//! a critical point of `L -> sum_{x in L \ 0} exp(-alpha |x|^2)` on the
//! manifold of unit-covolume lattices and computes the full Hessian spectrum
//! with certified truncation error.
//!
//! Modules, bottom up:
//!
//! * [`rootsys`]: ADE root systems and orthogonal sums.
//! * [`symspace`]: the quadratic form `Q[H] = sum_{x in R} H[x]^2` on traceless matrices.
//! * [`modforms`]: exact q-expansions with coefficient and tail bounds.
//! * [`latcat`]: catalog of the lattices in dimensions 8, 16, 24 and 32.
//! * [`enumlat`]: brute-force shell enumeration used as an oracle.
//! * [`morse`]: Hessian spectra with sign certificates.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod enumlat;
pub mod error;
pub mod latcat;
pub mod linalg;
pub mod modforms;
pub mod morse;
pub mod rootsys;
pub mod symspace;

pub use error::{Error, Result};
pub use latcat::LatticeEntry;
pub use linalg::SymMatrix;
pub use modforms::QSeries;
pub use morse::{Certificate, Classification, SpectrumReport};
pub use rootsys::{IrreducibleRootSystem, RootKind, RootSystem};
pub use symspace::QSpectrum;
