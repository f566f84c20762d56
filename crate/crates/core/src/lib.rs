//! Analytic invariants, normal forms and equivalence of plane curve germs
//! with two branches, in exact rational arithmetic.

pub mod series;
pub mod bigerm;
pub mod valuesets;
pub mod normalform;
pub mod equivalence;
pub mod random;
pub mod selftest;
pub mod table;
