//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`, where all matrix
//! coefficients of the finite Heisenberg representations live.

mod field;
mod matrix;

pub use field::{field, Cyclo, CycloField};
pub use matrix::{to_sparse, CycloMatrix, Echelon, SparseRow};
