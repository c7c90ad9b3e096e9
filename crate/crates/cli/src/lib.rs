//! Experiment-runner library behind the `holder-pg` binary: run
//! specifications, CSV trace serialization, sweep overlays and the
//! validation/prediction commands.

pub mod commands;
pub mod csvio;
pub mod experiment;
pub mod svg;
