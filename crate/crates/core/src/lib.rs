//! Trajectory-ensemble simulation of a harmonic oscillator whose frequency
//! switches at random between two values.
//!
//! Between switches every trajectory is a pure Gaussian packet evolved
//! exactly through its first and second moments. Switches are drawn either
//! at a constant rate or at a rate weighted by the overlap of the packet with
//! the destination level's ground state.

pub mod ensemble;
pub mod error;
pub mod gaussian;
pub mod hermite;
pub mod jump;
pub mod phase_space;

pub use ensemble::{
    ensemble_observables, jump_fraction_within, jump_histogram, run_ensemble, run_ensemble_with, simulate_trajectory,
    BinSpec, EnsembleAccumulator, EnsembleOptions, Histogram, ObservableRow, SimulationConfig, Snapshot, Trajectory,
};
pub use error::{Error, Result};
pub use gaussian::{energy, propagate, uncertainty_invariant, wavefunction, GaussianState, OscillatorParams};
pub use hermite::{hermite_function, hermite_table};
pub use jump::{ground_overlap, ground_state, jump_rate, sample_jump, JumpEvent, JumpKind, JumpModel, Level};
pub use phase_space::{
    coherence_x, coherence_x_state, ensemble_wigner, fock_density_matrix, position_density_matrix, wigner_of_state,
    Axis, FockMatrix, WignerGrid,
};
