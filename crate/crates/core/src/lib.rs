pub mod associator;
pub mod depth;
pub mod error;
pub mod fmodel;
pub mod mzvsym;
pub mod numerics;
pub mod polylog;
pub mod ring;
pub mod series;
pub mod words;

pub use error::{Error, Result};
pub use mzvsym::MzvExpr;
pub use ring::{Ball, Coeff};
pub use series::NCSeries;
pub use words::{Composition, Letter, Word};
