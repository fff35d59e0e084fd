//! The book, mounted as rustdoc so its code blocks run under
//! `cargo test --doc`. Each chapter of `book/src/` is one module here;
//! if a snippet drifts from the library, the doc-tests fail.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/posets.md")]
pub mod posets {}

#[doc = include_str!("../../../book/src/completion.md")]
pub mod completion {}

#[doc = include_str!("../../../book/src/names.md")]
pub mod names {}

#[doc = include_str!("../../../book/src/formulas.md")]
pub mod formulas {}

#[doc = include_str!("../../../book/src/semantics.md")]
pub mod semantics {}

#[doc = include_str!("../../../book/src/extensions.md")]
pub mod extensions {}

#[doc = include_str!("../../../book/src/sheaves.md")]
pub mod sheaves {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
