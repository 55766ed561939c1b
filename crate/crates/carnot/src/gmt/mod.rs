//! Measures and limits: the intrinsic measure, Riemannian surface
//! measures, the metric factor, blow-up traces, box-counting dimension
//! estimation, characteristic-set dimension bounds and the associated
//! covering experiments.

mod blowup;
mod charset;
mod dimension;
mod factor;
mod measure;

pub use blowup::{blowup_trace, BlowupParams, BlowupTrace};
pub use charset::{
    charset_covering_experiment, charset_dim_bound, CharsetBound, CharsetExperiment, ClassAudit,
    ExperimentOptions,
};
pub use dimension::{box_dimension, log_log_slope, spherical_premeasure, DimEstimate};
pub use factor::{metric_factor, metric_factor_of_span, McParams};
pub use measure::{intrinsic_measure, riemannian_measure, Estimator, EstimatorSpec, MeasureResult};
