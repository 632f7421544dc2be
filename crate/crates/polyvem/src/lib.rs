//! File formats, a direct sparse solver and the `polyvem` command-line
//! driver built on [`polyvem_core`].

pub mod cli;
pub mod config;
pub mod direct;
mod error;
pub mod io;

pub use direct::DirectSolver;
pub use error::AppError;
