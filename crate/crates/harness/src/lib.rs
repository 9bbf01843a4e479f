//! Command-line tools and an HTTP session service built on `seqpred`.
//!
//! * [`config`]: experiment files and outcome streams.
//! * [`verify`]: the oracle suite run by `seqpred verify`.
//! * [`session`] and [`server`]: commit-reveal play over HTTP.
//! * [`graphs`]: node classification and Rademacher estimates on graphs.
//! * [`game`]: matching pennies in the terminal.

pub mod cli;
pub mod config;
pub mod error;
pub mod game;
pub mod graphs;
pub mod server;
pub mod session;
pub mod verify;

pub use error::{HarnessError, HarnessResult};
