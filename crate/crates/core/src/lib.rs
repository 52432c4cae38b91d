//! Four-level coherent heat engine driven by two squeezed thermal reservoirs
//! and coupled to a squeezed single-mode cavity.
//!
//! The model is a closed system of five real rate equations for the level
//! populations and the ground-doublet coherence. On top of its steady state the
//! crate computes the work flux, affinity, useful work and efficiency, closed
//! forms valid in the strong-squeezing and strong-bias limits, efficiency at
//! maximum power, and least-squares fits of EMP curves.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the usual `f64` instantiation.
//!
//! ```
//! use squeezed_engine::{solve, Params, Squeeze};
//!
//! let params = Params::reference();
//! let op = solve(&params, &Squeeze::new(10.0, 0.0, 0.0, 0.5, 0.5)).unwrap();
//! // strong cavity squeezing equipopulates the two upper levels
//! assert!((op.state.rhobb / op.state.rhoaa - 1.0).abs() < 1e-3);
//! ```

// `!(a > b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod emp;
mod error;
pub mod fitting;
pub mod limits;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod optimize;
mod scalar;

pub use dynamics::{
    build_rate_operator, evolve, steady_state, EngineState, RateOperator, Trajectory,
};
pub use emp::{maximize_power, EmpResult, LogEmpForm, OptimizationSpec, Variable};
pub use error::{Error, Result};
pub use fitting::{fit_linear, fit_quadratic, fit_sech_form, FitModel, FitResult};
pub use model::{occupations, EngineParameters, OccupationSet, SqueezeSet};
pub use observables::{
    affinity, flux_report, solve, useful_work, FluxReport, OperatingPoint, WorkReport,
};
pub use scalar::Scalar;

pub type Params = EngineParameters<f64>;
pub type Squeeze = SqueezeSet<f64>;
pub type Occupations = OccupationSet<f64>;
pub type State = EngineState<f64>;
pub type Operator = RateOperator<f64>;
pub type Emp = EmpResult<f64>;
pub type Fit = FitResult<f64>;
