//! Prime and extension fields, univariate polynomials and rational
//! functions over them.

mod field;
mod linalg;
mod poly;
mod ratfunc;

pub use field::{field_of_order, is_prime, make_field, make_field_capped, Extension, Fe, FiniteField, SubfieldMap};
pub use poly::{factor, is_irreducible, mobius, monic_irreducibles, necklace_count, Poly, SquarefreeDecomposition};
pub use ratfunc::RationalFunction;
pub use linalg::{nullspace, rank, rref};
