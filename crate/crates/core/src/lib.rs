//! Exact modelling of unextendible product bases (UPBs) of multiqubit systems.
//!
//! A UPB is described by its unextendible orthogonal matrix (UOM): one row
//! per product vector, one column per qubit, entries drawn from the labels
//! `0`, `1`, `x` and `x'` (the ray orthogonal to `x`). This crate
//!
//! - carries the catalog of 4-qubit, 8-row UOM families and the 3-qubit shifts
//!   matrix ([`uom`]),
//! - instantiates them with exact Gaussian-rational states,
//! - decides unextendibility under any grouping of qubits into parties and
//!   enumerates orthogonal product vectors ([`unextend`]),
//! - builds the complement states and checks PPT and range criteria
//!   ([`ppt`]),
//! - checks bipartite unextendibility across every cut and tensors UPBs
//!   together ([`geupb`]),
//! - evaluates the combinatorial necessary conditions on UOM columns
//!   ([`structure`]).
//!
//! Everything is exact: there is no floating point in any decision.

pub mod error;
pub mod exact;
pub mod geupb;
pub mod ppt;
pub mod product;
pub mod structure;
pub mod unextend;
pub mod uom;

pub use error::{Error, Result};
pub use exact::{CMatrix, GaussRat, ProjQubit, Rat};
pub use product::ProductVectorSet;
pub use unextend::PartySplit;
