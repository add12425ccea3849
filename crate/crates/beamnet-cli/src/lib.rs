//! Command-line front end for the beamnet solver.
//!
//! The binary builds (or loads) a network model, runs the displacement
//! ramp under the selected tangent scheme and writes deterministic
//! artifacts — reaction history CSV, run summary JSON, hinge-state dump
//! and optional SVG plots — into one output directory per run.

pub mod cli;
pub mod compare;
pub mod output;
pub mod plot;
pub mod scenarios;
pub mod settings;
