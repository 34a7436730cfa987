//! Command-line front end and HTTP policy decision point for PTaCL.

pub mod report;
pub mod service;
pub mod store;

pub use report::{EvalReport, HidingReport, PolicyReport, Search, TargetReport};
pub use store::{PolicyStore, StoredPolicy};
