//! Exact cochain filling, spanning trees and degree schedules on simplicial
//! and cubical complexes.

pub mod complex;
pub mod filling;
pub mod homalg;
pub mod io;
pub mod lp;
pub mod sampling;
pub mod scalar;
pub mod scheduler;
pub mod subdivision;
pub mod trees;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Exact integers.
pub type Int = BigInt;
/// Exact rationals.
pub type Rat = BigRational;

pub type IntCochain = homalg::Cochain<Int>;
pub type RatCochain = homalg::Cochain<Rat>;
pub type IntChain = homalg::Chain<Int>;
pub type RatChain = homalg::Chain<Rat>;
