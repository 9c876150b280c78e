//! Edwards and Legendre curves over small finite fields of odd characteristic:
//! explicit isogenies and isomorphisms between the two families, torsion
//! classification, and exhaustive trace censuses that check the counting
//! results against brute force.

pub mod census;
pub mod curves;
pub mod ff;
pub mod maps;
pub mod nt;
pub mod torsion;
