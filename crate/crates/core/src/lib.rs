//! Codes for recovering a set of binary strings from the pooled compositions
//! of all their prefixes and suffixes.

pub mod bhcode;
pub mod bounds;
pub mod bits;
pub mod channel;
pub mod codec;
pub mod composition;
pub mod ecc;
pub mod error;
pub mod gf2;
pub mod oracle;
pub mod pipeline;
pub mod sums;
pub mod tables;

pub use bits::BitString;
pub use composition::{Composition, CompositionMultiset};
pub use error::{Error, Result};
