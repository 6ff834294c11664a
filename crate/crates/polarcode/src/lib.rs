//! File formats, parallel drivers and verification reports for
//! `polar-grassmann`, plus the `polarcode` command line.

pub mod cli;
pub mod error;
pub mod io;
pub mod parallel;
pub mod report;
pub mod verify;

pub use error::{CliError, Exit};

use polar_grassmann::FieldCtx;

/// `--q` alone is the field order; with `--e` it is the characteristic.
pub fn field_from_args(q: u32, e: Option<u32>) -> polar_grassmann::Result<FieldCtx> {
    match e {
        Some(e) => FieldCtx::new(q, e),
        None => FieldCtx::with_order(q),
    }
}
