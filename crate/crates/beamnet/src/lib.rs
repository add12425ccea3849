//! Quasi-static fracture analysis of planar fiber networks.
//!
//! The library models fibers as two-node 3D Timoshenko beams whose axial
//! failure is captured by an embedded displacement discontinuity with linear
//! softening. The solver advances a prescribed-displacement ramp with Newton
//! iterations and supports three tangent schemes: the monolithic (condensed)
//! tangent, a staggered tangent that keeps the bulk stiffness, and a hybrid
//! mix that floors the condensed axial stiffness at a small positive value.
//!
//! Module layout:
//! - [`beam`]: local beam kinematics, section data, stress resultants
//! - [`hinge`]: softening-hinge state and return mapping
//! - [`element`]: element tangents per scheme, rotation to global axes
//! - [`netgen`]: random planar network generation and the model container
//! - [`linsolve`]: sparse symmetric-indefinite direct solver
//! - [`solver`]: incremental Newton driver and run reports

pub mod beam;
pub mod element;
pub mod hinge;
pub mod linsolve;
pub mod netgen;
pub mod report;
pub mod solver;

pub use beam::{FiberSection, GeneralizedStrain, StressResultants};
pub use element::{ElementGeometry, Scheme};
pub use hinge::HingeState;
pub use netgen::{NetworkModel, NetworkSpec};
pub use solver::{SolveConfig, SolveReport, StepRecord, Termination};
