//! Planar Coulomb gas with a point charge insertion: closed-form geometry and
//! free energy, exact finite-N determinant oracles, Laguerre large deviations,
//! Tracy-Widom via Painleve II and Riemann-Hilbert polynomial asymptotics.

pub mod error;
pub mod exact;
pub mod freeenergy;
pub mod geometry;
pub mod ldp;
pub mod opasymp;
pub mod painleve;
pub mod quad;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{ModelParams, PreGeometry, Regime};
