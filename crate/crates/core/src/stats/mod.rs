//! Serial-dependence diagnostics, rank correlations and the blockwise
//! interaction regression.

mod acf;
mod ljung_box;
mod ols;
mod regression;
mod spearman;

pub use acf::{autocorrelation, symbol_values, AcfResult};
pub use ljung_box::{ljung_box_test, LjungBoxResult};
pub use ols::{least_squares, OlsFit, PIVOT_TOLERANCE};
pub use regression::{
    bootstrap_model_coefficients, fit_interaction_model, CoefficientSummary, Coefficients,
    MdObservation, RegressionFit, ReplicateDistribution, SourceBlocks, COEFFICIENT_NAMES,
};
pub use spearman::{
    mid_ranks, partial_spearman, pearson, spearman_test, SpearmanResult, EXACT_MAX_N,
};
