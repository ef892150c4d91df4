//! Guide chapters, compiled so that `cargo test` runs every listing.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/hierarchy.md")]
pub mod hierarchy {}
#[doc = include_str!("../../../book/src/dressing.md")]
pub mod dressing {}
#[doc = include_str!("../../../book/src/unsystem.md")]
pub mod unsystem {}
#[doc = include_str!("../../../book/src/monopole.md")]
pub mod monopole {}
#[doc = include_str!("../../../book/src/verify.md")]
pub mod verify {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
