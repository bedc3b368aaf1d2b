//! Untwisted affine Weyl groups built from finite Cartan data.

mod affine;
mod ball;
mod coset;
mod finite;
mod involution;
mod parabolic;
mod roots;

pub use affine::{AffineElement, AffineSystem, ElementRepr, SystemId};
pub use ball::Ball;
pub use coset::{finite_weyl_group, DoubleCoset};
pub use finite::FiniteWeylElement;
pub use involution::{
    automorphism_on_ball, diagram_automorphisms, lattice_map, special_automorphisms, star_permutation, Involution,
    InvolutionId,
};
pub use parabolic::{factor_degrees, q_integer, Parabolic, ENUMERATION_LIMIT};
pub use roots::{Family, FiniteType, RootData};
