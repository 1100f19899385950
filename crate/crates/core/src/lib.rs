pub mod arith;
pub mod brst;
pub mod fields;
pub mod fock;
pub mod genus;
pub mod orbifold;
