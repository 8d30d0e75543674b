//! Exact dynamics of a three-level Lambda atom coupled to two quantized
//! cavity modes in the rotating-wave approximation.
//!
//! The two excitation numbers `M1`, `M2` commute with the Hamiltonian, so
//! the state space splits into blocks of dimension 3 (or 1 for the dark
//! states). Each block is diagonalised in closed form ([`dressed`]) and
//! evolved exactly ([`propagator`]); [`oracle`] redoes the same work
//! numerically as an independent check.
//!
//! ```
//! use lambda_cqed::prelude::*;
//!
//! let config = preset("state1").unwrap();
//! let sim = Simulation::new(&config, false).unwrap();
//! let obs = sim.observe(25.0).unwrap();
//! assert!((obs.populations.iter().sum::<f64>() - 1.0).abs() < 1e-12);
//! ```

pub mod atoms;
pub mod dressed;
pub mod eigen;
pub mod entanglement;
pub mod error;
pub mod initial_state;
pub mod observables;
pub mod oracle;
pub mod propagator;
pub mod run;
pub mod scenario;
pub mod special;
pub mod state_space;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::atoms::{builtin_atom, rabi_from_intensity, AtomSpec, CouplingConfig, Model};
    pub use crate::dressed::{dressed_block, DressedBlock};
    pub use crate::eigen::CMatrix;
    pub use crate::entanglement::{linear_entropy, von_neumann_entropy};
    pub use crate::error::{Error, Result};
    pub use crate::initial_state::{
        build_packet, normalize_gamma, AtomAmplitudes, FieldAmplitudes, PacketState,
    };
    pub use crate::observables::{atomic_rdm, field_rdm, Mode};
    pub use crate::propagator::{Dynamics, Propagator};
    pub use crate::run::{run_scenario, RunOptions, Simulation};
    pub use crate::scenario::{load_scenario, preset, ScenarioConfig};
    pub use crate::state_space::{BlockIndex, Lattice, Level};
}
