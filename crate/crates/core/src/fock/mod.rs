//! Truncated Fock-space representation: mode layouts, pure states, and the
//! Gaussian / non-Gaussian operators acting on them.

pub mod layout;
pub mod operator;
pub mod state;
pub mod states;

pub use layout::{ModeId, ModeLayout};
pub use operator::{
    beam_splitter, displacement, expm, identity, single_mode_squeezer, two_mode_squeezer,
    DisplacementMode, OperatorMatrix, BALANCED_BS,
};
pub use state::FockVector;
pub use states::{
    cat_normalization, coherent, coherent_cat, number_state, squeezed_cat, squeezed_vacuum,
    two_mode_squeezed_vacuum, vacuum, Sign, SqueezeParams,
};
