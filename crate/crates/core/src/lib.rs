//! Truncated-Fock-space simulator for superpositions of oppositely squeezed
//! states ("squeezed cat states").
//!
//! The crate covers three layers:
//!
//! - [`fock`]: numerically exact (up to truncation) multimode pure states
//!   and the Gaussian operators acting on them — displacements, squeezers,
//!   and photon-number-resolved beam splitters. Exact operators are matrix
//!   exponentials of truncated generators and are unitary on the retained
//!   subspace.
//! - [`protocols`]: heralded generation of the squeezed-cat states
//!   `|r;+->` — ideal cross-Kerr heralding, the four-detector linear-optical
//!   scheme with weak displacements, and the ancilla-assisted conversion of
//!   the plus cat into the minus cat.
//! - [`analysis`]: phase-space characterization through the Wigner function
//!   (displaced-parity evaluation, grid sweeps) and entanglement entropies
//!   of beam-splitter outputs.
//!
//! All values are immutable after construction and all operations are pure
//! functions of their inputs, so everything can be evaluated concurrently;
//! grid sweeps are parallelized internally with rayon and are
//! order-independent.

pub mod analysis;
pub mod error;
pub mod fock;
pub mod protocols;

pub use analysis::{
    coherent_cat_wigner_closed_form, entanglement_entropy, entropy_curves, find_entropy_crossover,
    make_bs_output_state, wigner_grid, wigner_value, DisplacedParity, EntropyCurve, GridRange,
    WignerGrid,
};
pub use error::{Error, Result};
pub use fock::{
    beam_splitter, coherent, coherent_cat, displacement, number_state, single_mode_squeezer,
    squeezed_cat, squeezed_vacuum, two_mode_squeezed_vacuum, two_mode_squeezer, vacuum,
    DisplacementMode, FockVector, ModeId, ModeLayout, OperatorMatrix, Sign, SqueezeParams,
};
pub use protocols::{
    convert_to_minus, cross_kerr_evolve, cross_kerr_herald, fidelity, perturbative_plus_state,
    plus_target_fidelity, ratio_matching_transmittance, run_plus_scheme,
    scan_conversion_transmittance, solve_displacements, HeraldDiagnostics, HeraldResult,
    SchemeConfig, SchemeParams,
};
