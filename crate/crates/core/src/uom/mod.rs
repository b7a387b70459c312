//! Symbolic UOMs: label grids with inequality constraints, the embedded
//! catalog, instantiation into concrete product vectors, and the features
//! used to tell families apart.

mod catalog;
mod instantiate;
mod invariants;
mod label;
mod spec;

pub use catalog::{catalog, catalog_json, catalog_names, families, lookup, parse_catalog};
pub use instantiate::{instantiate, instantiate_with, rank_profile, Genericity, Instantiation, MAX_ROUNDS};
pub use invariants::{
    allowed_column_symmetries, coincidence_profile, coincidence_table, distinguishing_features,
    independent_variable_counts, inequivalence_report, pattern_isomorphic, ColumnPerm, Feature, Verdict,
};
pub use label::Label;
pub use spec::{Constraint, LintFinding, UomSpec};
