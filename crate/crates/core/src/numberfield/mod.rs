//! Generic number-field engine for small degree.

pub mod algebra;
pub mod classgroup;
pub mod embedding;
pub mod families;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod units;

pub use field::{Elt, NumberField};
pub mod ideal;
pub mod prime;
pub mod principal;

pub use ideal::Ideal;
pub use prime::PrimeIdeal;
