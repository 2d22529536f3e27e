//! Separable and list-decoding codes for symmetric multiple-access channels.
//!
//! The crate covers channel models, exact verification of code properties
//! with counterexamples, rate and capacity bound calculators, code
//! constructions, maximal-code search and random-coding error exponents.
//! All rates are in nats.

pub mod bounds;
pub mod channel;
pub mod cli;
pub mod construct;
pub mod error;
pub mod exponent;
pub mod io;
pub mod simplex;
pub mod types;
pub mod verify;

pub use channel::{ChannelKind, ChannelSpec, OutputSymbol};
pub use error::{Error, Result};
pub use types::{AlphabetSubset, Code, Composition, Message};
