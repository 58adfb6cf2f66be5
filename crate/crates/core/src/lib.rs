//! Independence-friendly logic over finite structures: formulas, team
//! semantics, semantic games, cylindric set algebras and a small lab for
//! finite De Morgan and monadic algebras.

pub mod algebra;
pub mod finlat;
pub mod games;
pub mod par;
pub mod selftest;
pub mod model;
pub mod syntax;
pub mod trump;
