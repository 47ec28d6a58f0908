pub mod blocks;
pub mod cmod;
pub mod error;
pub mod gallery;
pub mod io;
pub mod ip;
pub mod linalg;
pub mod local;
pub mod multiflag;
pub mod poset;
pub mod report;
pub mod simplicial;

pub use error::{Error, Result};
