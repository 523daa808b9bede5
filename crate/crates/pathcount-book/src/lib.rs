//! Keeps the book honest: every chapter under `book/src/` is included
//! here as a doc comment, so `cargo test -p pathcount-book` compiles and
//! runs each of its code snippets against the current library. One module
//! per chapter, so a failing snippet names the chapter it came from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}

#[doc = include_str!("../../../book/src/path-decompositions.md")]
pub mod path_decompositions {}

#[doc = include_str!("../../../book/src/labeling-problems.md")]
pub mod labeling_problems {}

#[doc = include_str!("../../../book/src/counting.md")]
pub mod counting {}

#[doc = include_str!("../../../book/src/sampling.md")]
pub mod sampling {}

#[doc = include_str!("../../../book/src/cliques.md")]
pub mod cliques {}

#[doc = include_str!("../../../book/src/stable-matchings.md")]
pub mod stable_matchings {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
