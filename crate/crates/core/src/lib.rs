//! Exact computations with finite symplectic abelian groups: Heisenberg
//! groups, Schrodinger models attached to lagrangian subgroups, and the
//! intertwining operators between them.

pub mod corpus;
pub mod cyclo;
pub mod descent;
pub mod error;
pub mod finabel;
pub mod forms;
pub mod heisenberg;
pub mod intertwine;
pub mod quasisplit;
pub mod schrodinger;

pub use error::{Error, Result};
