//! Zeta functions, L-series and the symmetric-power calculus, with exact
//! coefficients in `Z[zeta_N][v, v^-1]`.

mod data;
mod local;
mod ring;
mod series;

pub use data::{sym_power_point_count, ZetaData};
pub use local::{
    character_l_polynomial, constant_sheaf_eigenvalue, frobenius_datum, l_series_cohomological, l_series_product,
    leading_term_dimension, sym_power_trace, FrobeniusDatum, GradedLocalSystem, Piece, QRendering, Summand,
};
pub use ring::RingElem;
pub use series::{binomial_factor, series_div, series_from_ints, series_inv, series_mul, series_to_json, truncate, Series};
