pub mod boolfn;
pub mod cli;
pub mod encode;
pub mod error;
pub mod ingest;
pub mod mvl;
pub mod oracle;
pub mod pi;

pub use error::{Error, Result};
