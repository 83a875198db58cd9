//! Trajectory tracing on the three-sheeted surface. Placeholder
//! types; the integrator lands in the next pass.

use crate::numerics::C64;
use crate::sheets::SheetPoint;
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceConfig {
    pub step: f64,
    pub snap: f64,
    pub r_max: f64,
    pub budget: usize,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            step: 1e-3,
            snap: 5e-3,
            r_max: 10.0,
            budget: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub points: Vec<SheetPoint>,
    pub conservation_drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalGraph {
    pub vertices: Vec<C64>,
}
