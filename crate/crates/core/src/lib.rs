//! Volume estimation from analyte amounts with a positively homogeneous
//! degree-1 model.
//!
//! Amounts of blood constituents scale linearly with the sampled volume, so
//! the volume estimator `f` must satisfy `f(k y) = k f(y)` for `k > 0`. The
//! model family is
//!
//! ```text
//! f(y) = sum_i a_i y_i + sum_{i <= j} a_ij y_i y_j / |y|
//! ```
//!
//! fitted by least squares against known volumes. This crate is `no_std`
//! (it needs `alloc`) and holds the numerics: the feature map, normal
//! equations, minimum-norm solving, evaluation metrics, cross-validation,
//! analyte-subset search and a seeded synthetic cohort generator.
//!
//! ```
//! use dbsvol_core::{fit, AnalytePanel, Cohort, FitConfig, Sample};
//!
//! let panel = AnalytePanel::new(&["Na"]).unwrap();
//! let samples = vec![Sample::new(vec![1.0]).unwrap(), Sample::new(vec![2.0]).unwrap()];
//! let cohort = Cohort::new(panel, samples, Some(vec![2.0, 4.0])).unwrap();
//! let model = fit(&cohort, &FitConfig::default()).unwrap();
//! let v = model.predict(&Sample::new(vec![1.5]).unwrap()).unwrap();
//! assert!((v - 3.0).abs() < 1e-12);
//! ```

#![no_std]

extern crate alloc;

pub mod cv;
mod error;
pub mod features;
pub mod fitting;
pub mod linalg;
pub mod metrics;
mod model;
mod panel;
pub mod subset;
pub mod synth;

pub use cv::{
    cross_validate, cross_validate_predictions, cross_validate_with_threshold, fold_assignment,
};
pub use error::{Error, Result};
pub use features::{feature_dim, feature_map, FeatureVector};
pub use fitting::{
    assemble_normal_system, fit, objective_value, FitConfig, NormalSystem, SolverMode,
};
pub use metrics::{exceedance_fraction, pearson_correlation, EvalReport, DEFAULT_THRESHOLD};
pub use model::{predict, FitMeta, SolverPath, VolumeModel, FORMAT_VERSION};
pub use panel::{AnalytePanel, Cohort, Sample};
pub use subset::{select_subset, SearchMode, SubsetScore, SubsetSearchResult};
pub use synth::{generate_cohort, scale_cohort, SynthConfig};
