//! Exact computations of RO(Z/2)-graded Bredon cohomology and the
//! spectral sequences converging to KR-theory of a point, a free orbit and
//! representation spheres.

pub mod bredon;
pub mod coeffring;
pub mod exactalg;
pub mod exec;
pub mod krtower;
pub mod equivcw;
pub mod mackey;
pub mod render;
pub mod ssengine;
pub mod verify;
