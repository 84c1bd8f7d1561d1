//! Experiment configs, the linear XEB baseline and the runners behind the CLI.
//!
//! Every runner is deterministic in `(config, seed)`: grid points draw their
//! own seeds from a label, run in parallel, and are emitted in grid order.

mod config;
mod experiments;
mod xeb;

pub use config::*;
pub use experiments::*;
pub use xeb::*;
