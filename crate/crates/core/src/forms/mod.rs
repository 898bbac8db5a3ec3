//! Q/Z-valued pairings, quadratic refinements and symplectic spaces.

mod bilinear;
mod quadratic;
mod qz;
mod symplectic;

pub use bilinear::{BilinearForm, GramRepr};
pub use quadratic::QuadraticFunction;
pub use qz::QZ;
pub use symplectic::{enumerate_lagrangians, find_transverse_lagrangian, SubgroupClass, SymplecticSpace};
