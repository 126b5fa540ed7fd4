//! Verification harness: energy balances, truncation-convergence studies,
//! inequality probes, blow-up monitors, and the local-existence-time
//! predictor.

pub mod blowup;
pub mod calibration;
pub mod convergence;
pub mod diagnostics;
pub mod energy;
pub mod probes;

pub use blowup::{
    blowup_monitor, blowup_time_predictor, grad_theta_bound_check, gradient_advection_residual,
    MonitorReport, PredictedTime, PredictorInput, TransportBoundReport,
};
pub use convergence::{truncation_convergence_study, ConvergenceStudyResult, StudySetup};
pub use diagnostics::{compute_record, DiagnosticsRecord, TIMESERIES_HEADER};
pub use energy::{energy_balance_check, EnergyBalanceReport};
pub use probes::{inequality_probe, EnsembleSpec, ProbeKind, ProbeReport};
