pub mod basis;
pub mod cli;
pub mod conditionality;
pub mod directsum;
pub mod dual;
pub mod error;
pub mod greedy;
pub mod indexing;
pub mod quotient;
pub mod random;
pub mod sparse;
pub mod synthesis;

pub use error::{Error, Result};
