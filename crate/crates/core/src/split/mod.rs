//! Transition matrices of the jet bundle on a coordinate line and their
//! splitting types.

mod splitting;
mod transition;

pub use splitting::{
    expected_splitting, h0_twisted, random_gauge, splitting_type, verify_corollary, SplittingType,
};
pub use transition::{
    chart0_jet, chart1_jet, default_sample_points, describe, jet_transition_inverse,
    jet_transition_matrix, transition_consistency, transition_consistency_at, TransitionData,
    CONVENTION,
};
