//! Measure components on the cuts. Placeholder types; construction
//! lands in the next pass.

use crate::numerics::C64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub enum SupportGeom {
    Empty,
    Point(f64),
    Interval(f64, f64),
    Arc(Vec<C64>),
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureComponent {
    pub support: SupportGeom,
    pub mass: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VectorMeasure {
    pub components: [MeasureComponent; 3],
}
