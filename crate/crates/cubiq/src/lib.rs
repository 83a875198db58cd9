//! Numerical study of the one-parameter family of vector critical
//! measures attached to the cubic external field.
//!
//! The family is indexed by `tau` in `[0, 1/4)`. Everything derives
//! from an explicit degree-three plane curve in `(z, xi)`; its three
//! root branches are glued along cuts into a three-sheeted surface,
//! quadratic-differential trajectories on that surface fix the cut
//! geometry, and the branch jumps across the cuts are the densities
//! of the measures.
//!
//! Module layout mirrors the dependency order:
//! `numerics` (root solving, matching, quadrature) ->
//! `curve` (coefficients, branch points, labeled roots) ->
//! `sheets` (cut system, per-sheet evaluation, boundary values) ->
//! `widths` (period integrals in `tau`, critical parameter values) ->
//! `tracer` (trajectory ODE, critical graph) ->
//! `measures` (supports, densities, masses, transforms) ->
//! `variational` (energy, equilibrium conditions, residual checks).

pub mod curve;
pub mod measures;
pub mod numerics;
pub mod sheets;
pub mod tracer;
pub mod variational;
pub mod widths;

pub use curve::{BranchPointSet, CurveParam};
pub use measures::{MeasureComponent, SupportGeom, VectorMeasure};
pub use numerics::C64;
pub use sheets::{CutSystem, Regime, Sheet, SheetPoint, Side};
pub use tracer::{CriticalGraph, TraceConfig, Trajectory};
pub use widths::{CriticalTaus, WidthReport};

/// Errors surfaced by the library. `ParamDomain` marks bad input
/// (CLI exit code 2); everything else is a computation failure.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParamDomain(String),
    #[error("continuation failed: {0}")]
    Continuation(String),
    #[error("geometry inconsistency: {0}")]
    Geometry(String),
    #[error("trajectory failure: {0}")]
    Trace(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("root finding failed: {0}")]
    RootFind(String),
}

pub type Result<T> = std::result::Result<T, Error>;
