//! Exact Kazhdan-Lusztig and twisted-involution polynomials for untwisted
//! affine Weyl groups, together with the checks relating them to weight
//! multiplicities and signatures of the dual group.
//!
//! ```
//! use std::sync::Arc;
//! use affkl::coxeter::{AffineSystem, Ball};
//!
//! let sys = Arc::new(AffineSystem::from_name("A2").unwrap());
//! let ball = Ball::new(sys.clone(), 4);
//! let d = sys.d_lambda(&[1, 1]).unwrap();
//! assert_eq!(sys.length(&d), 7);
//! assert!(ball.index_of(&sys.w_j()).is_some());
//! ```

pub mod coxeter;
pub mod error;
pub mod hecke;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod rep;
pub mod satake;
pub mod twisted;

pub use error::{Error, Result};
pub use poly::{LaurentPoly, RationalFn, Substitution};
