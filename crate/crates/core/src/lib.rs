pub mod acceptance;
pub mod cone;
pub mod error;
pub mod exec;
pub mod gen;
pub mod lp;
pub mod oracle;
pub mod rainbow;
pub mod ratlin;
pub mod reay;
pub mod verify;

pub use error::{Error, Result};
