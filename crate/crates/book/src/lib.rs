//! Compiles and runs every Rust listing in the guide under `book/src` as a
//! doctest, so the guide cannot drift from the library API.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/states.md")]
pub mod states {}

#[doc = include_str!("../../../book/src/channels.md")]
pub mod channels {}

#[doc = include_str!("../../../book/src/correlation.md")]
pub mod correlation {}

#[doc = include_str!("../../../book/src/decay-curves.md")]
pub mod decay_curves {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
