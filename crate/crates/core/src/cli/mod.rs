//! Command-line pipeline: configuration, stage execution, certificates,
//! resumable state and independent verification.

pub mod certificate;
pub mod config;
pub mod pipeline;
pub mod state;
pub mod verify;

pub use certificate::{Certificate, CheckRecord, Status};
pub use config::{Budgets, RunConfig, Stage};
pub use pipeline::{resume, run};
pub use state::{load_state, save_state, State};
