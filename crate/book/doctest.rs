// mdbook can't run listings against a workspace crate, so every chapter is
// pulled in as module docs and `cargo test --doc` runs the code blocks. One
// module per chapter keeps failures traceable to a file.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/special-functions.md")]
pub mod special_functions {}
#[doc = include_str!("src/distribution.md")]
pub mod distribution {}
#[doc = include_str!("src/lattice-sets.md")]
pub mod lattice_sets {}
#[doc = include_str!("src/histograms.md")]
pub mod histograms {}
#[doc = include_str!("src/monte-carlo.md")]
pub mod monte_carlo {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
