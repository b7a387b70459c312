//! Command-line surface of `upb-core`: subcommands that emit JSON
//! certificates, and the driver that re-checks every claim and writes one
//! report.

pub mod cert;
pub mod commands;
pub mod context;
pub mod reproduce;
pub mod wire;

pub use cert::{Certificate, CliError, Exit, Outcome};
pub use context::{Catalog, Context};
