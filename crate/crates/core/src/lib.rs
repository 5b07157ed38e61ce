//! Exact finite-field reconstruction of a genus-16 K3 Mukai model: the ten
//! quadrics of the threefold `X ⊂ P^9`, their linear syzygies, the double
//! cover they define, the two trivectors `t1`, `t2`, and the rank loci built
//! from them.

pub mod chow;
pub mod cli;
pub mod cover;
pub mod discrim;
pub mod error;
pub mod ffla;
pub mod kummer;
pub mod mpoly;
pub mod mukai;
pub mod multilinear;
pub mod proj;
pub mod rng;
pub mod syzygy;
pub mod t1;
pub mod trivector;
pub mod xquad;
