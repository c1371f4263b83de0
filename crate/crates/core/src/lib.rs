pub mod characters;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod lax;
pub mod matrix;
pub mod ode;
pub mod poly;
pub mod quad;
pub mod quantum;
pub mod roots;
pub mod spectral;
pub mod suites;

pub use error::{Result, TodaError};
