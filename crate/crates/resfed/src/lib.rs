//! Reservation-based federated scheduling of sporadic DAG task sets.
//!
//! The pipeline: represent or generate arbitrary-deadline DAG tasks
//! ([`dag_model`]), transform each into a set of sequential reservation
//! servers ([`reservation`]), test and partition the servers onto processors
//! with uniprocessor schedulability analysis ([`schedulability`],
//! [`partitioner`]), and validate end-to-end deadlines with discrete-event
//! simulation of list scheduling inside the reservations ([`simulator`]).
//! All feasibility arithmetic is exact rational ([`time`]).

pub mod dag_model;
pub mod experiments;
pub mod partitioner;
pub mod reservation;
pub mod schedulability;
pub mod simulator;
pub mod time;

/// Denominator bound used when an irrational inflation factor must be
/// reported as a rational; see `RESFED_PRECISION`.
pub fn precision_denominator_bound() -> u64 {
    std::env::var("RESFED_PRECISION")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&v| v > 0)
        .unwrap_or(1_000_000)
}
