//! Compiles the guide's Rust listings as doc-tests so the book and the
//! library cannot drift apart.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}

#[doc = include_str!("../../../book/src/affine-weyl-groups.md")]
pub mod affine_weyl_groups {}

#[doc = include_str!("../../../book/src/kazhdan-lusztig.md")]
pub mod kazhdan_lusztig {}

#[doc = include_str!("../../../book/src/twisted-involutions.md")]
pub mod twisted_involutions {}

#[doc = include_str!("../../../book/src/checks.md")]
pub mod checks {}

#[doc = include_str!("../../../book/src/weights.md")]
pub mod weights {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
