//! Groups `G_ω` acting on the binary rooted tree, their Schreier graphs, weighted
//! graphs with Laplace-type operators, graph coverings, and numerical checks of
//! the spectral statements built on top of them.
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`omega`] | ω sequences, tree automorphisms, generator words, relators, growth |
//! | [`schreier`] | level Schreier graphs `Γ_n`, model graphs `Υ`, Cayley balls |
//! | [`graph`] | multigraphs, edge weights, `H_α`, Markov and Laplace operators |
//! | [`covering`] | covering maps, lifting, Følner data, spectral-inclusion residuals |
//! | [`spectra`] | eigensolvers, interval unions, sweeps, dihedral operators, moments |
//! | [`formats`] | JSON graph documents, DOT and CSV export |
//!
//! Conventions used throughout: a loop contributes one edge to `E_v` and one
//! to the degree of `v`; the vertices of level `k` are ordered
//! lexicographically with `0 < 1`; a word `s₁s₂` acts by applying `s₂` first.

pub mod covering;
pub mod error;
pub mod formats;
pub mod graph;
pub mod limits;
pub mod omega;
pub mod schreier;
pub mod spectra;

pub use error::{Error, Result};
pub use limits::Limits;
