//! Coherent control of Penning (PI) and associative (AI) ionization cross
//! sections from per-channel data.
//!
//! The pipeline is: prepare a state ([`states`]), rotate or couple it into the
//! channel basis, keep only cross terms allowed by beam-axis rotational
//! symmetry ([`symmetry`]), and combine with per-channel cross sections
//! ([`compose`]). [`landscape`] scans and optimizes the result over the
//! control parameters.

pub mod angmom;
pub mod compose;
pub mod emit;
pub mod error;
pub mod landscape;
pub mod scenario;
pub mod states;
pub mod symmetry;

pub use angmom::{clebsch_gordan, d_matrix, wigner_d, DMatrix, TwiceInt};
pub use compose::{
    compose, map_to_omega, split_width, Channel, ChannelKey, ChannelTable, Composer, CompositionResult, PreparedState,
    Process, SyntheticCrossTerm, WidthProfile,
};
pub use error::{Error, Result};
pub use landscape::{
    phase_only_factor, ratio_surface, refine_extremum, scan, scan_with_threads, Extremum, GridSpec, LandscapeResult,
    Objective,
};
pub use scenario::{ScenarioConfig, StateSpec};
pub use states::{
    couple, hopf_state, rotate_axis, to_center_of_mass, AngLabel, Axis, ControlParams, CoupledLabel, CoupledState,
    Kinematics, ProductState, Superposition,
};
pub use symmetry::{interference_allowed, verify_rotation_invariance, BeamRotation, ChannelPairKey};
