pub mod cli;
pub mod error;
pub mod files;
pub mod gibbs;
pub mod linalg;
pub mod mixing;
pub mod perm;
pub mod potential;
pub mod quasi_inv;
pub mod sft;

pub use error::{Error, Result};
