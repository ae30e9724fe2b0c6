//! Momentum-space simulator for the trembling motion (Zitterbewegung) of
//! free relativistic particles.
//!
//! At a fixed momentum eigenvalue every free-particle operator becomes a
//! small complex matrix. The crate builds those matrices for the Dirac,
//! Feshbach-Villars, generalized Feshbach-Villars, Dirac-like photon and
//! Foldy-Wouthuysen representations, evolves velocity and position
//! operators in the Heisenberg picture both in closed form and by brute
//! force, and averages them over Gaussian wave packets.

pub mod dynamics;
pub mod error;
pub mod momentum;
pub mod operator;
pub mod representation;
pub mod signal;
pub mod spin;
pub mod transform;
pub mod wavepacket;

pub use error::{Error, Result};
pub use momentum::{energy, Axis, Branch, EnergyBranch, Momentum};
pub use operator::{ComplexMatrix, Metric};
pub use representation::{RepKind, RepSpec};
pub use spin::SpinRep;
