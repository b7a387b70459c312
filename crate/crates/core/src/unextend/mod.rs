//! Unextendibility under a grouping of qubits into parties, extension
//! witnesses, and enumeration of the product vectors orthogonal to a set.
//!
//! A product vector `v_1 (x) ... (x) v_k` is orthogonal to a row exactly
//! when some party vector `v_p` is orthogonal to the row's party-`p`
//! component. The search assigns each row to one such killing party and
//! prunes as soon as a party's assigned components span its whole space.

mod search;
mod split;

pub use search::{
    check_orthogonality, enumerate_orthogonal, enumerate_orthogonal_with, find_extension, find_extension_with,
    group, is_upb, is_upb_with, solution_span_rank, ExtensionWitness, GroupedSet, Orthogonality,
    OrthogonalSolutionSet, SearchOptions, SearchStats, SolutionFamily, DEFAULT_BUDGET,
};
pub use split::PartySplit;

use crate::error::Result;
use crate::product::ProductVectorSet;

/// Removes row `i` (1-based); the remaining rows keep their order.
pub fn drop_row(set: &ProductVectorSet, i: usize) -> Result<ProductVectorSet> {
    set.drop_row(i)
}
