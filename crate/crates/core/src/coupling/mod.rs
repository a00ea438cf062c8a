//! Peeling exploration, the couplings of parking with the frozen process, and
//! the nearly parked tree construction.

pub mod exhaustive;
mod nearly;
mod peel;
mod run;
mod verify;

pub use nearly::{
    car_passes_edge, car_passes_edge_by_parking, orient_by_labels, redirect_labeled_tree, sample_nearly_parked,
    NearlyParked,
};
pub use peel::{InstructionSet, Target};
pub use run::{couple_mapping, couple_tree, CoupleOptions, CoupledRun, CouplingKind, Fault, StepTrace};
pub use verify::{verify_coupling, CouplingReport, FULL_CHECK_LIMIT};
