mod cover;
mod divisor;
mod function;
mod model;
mod place;
mod points;
mod riemann_roch;

pub use divisor::{effective_divisor_count, effective_divisors, Divisor};
pub use model::{Curve, Model, Weierstrass};
pub use place::{
    base_place, compact_poly, infinite_places, place_of_point, places_of_degree, Place, PlaceRep,
};
pub use points::{
    affine_points, artin_schreier_table, embed_poly, point_count, points_at_infinity, EPoint,
    EllipticOver,
};
pub use function::{divisor_of_function, places_over, CurveFunction, PlaneModel};
pub use riemann_roch::riemann_roch;
pub use cover::{two_torsion_points, EtaleDoubleCover};
