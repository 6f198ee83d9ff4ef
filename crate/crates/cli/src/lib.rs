//! Library backing the `parabolica` command-line workbench: configuration
//! and file formats, the verification suites, and the build/decide commands.

pub mod build;
pub mod decide;
pub mod io;
pub mod report;
pub mod suites;

use parabolica_core::error::Error as CoreError;

/// Process exit codes: 0 all-pass, 1 check failure, 2 usage or configuration
/// error, 3 resource cap exceeded, 4 inconclusive-only.
pub fn exit_code_for_error(err: &anyhow::Error) -> i32 {
    if let Some(core) = err.downcast_ref::<CoreError>() {
        match core {
            CoreError::CapExceeded { .. } => 3,
            CoreError::Inconclusive { .. } => 4,
            _ => 2,
        }
    } else {
        2
    }
}
