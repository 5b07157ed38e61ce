//! Homogeneous polynomials over `F_p`, interpolation, binary forms and the
//! Macaulay-matrix Hilbert function engine.

pub mod binary;
pub mod interp;
pub mod macaulay;
pub mod monomial;
pub mod poly;

pub use binary::{BinaryForm, ProjRoot, RootReport, UPoly};
pub use interp::{interpolate, interpolate_many, vanishing_forms, vanishing_space};
pub use macaulay::{Macaulay, Plateau, RankMethod};
pub use monomial::{binomial, count_monomials, MonomialBasis};
pub use poly::MPoly;
