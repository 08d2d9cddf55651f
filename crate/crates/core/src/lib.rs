//! Exact simulation of three-party quantum secret sharing on reusable
//! GHZ-type carriers, and of a dishonest participant who splits the shared
//! carrier into two EPR pairs to read every data bit undetected.

pub mod attack;
pub mod cli;
pub mod detection;
pub mod error;
pub mod protocol;
pub mod seeds;
pub mod statevec;

pub use error::{Error, Result};
