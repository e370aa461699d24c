//! Workbench for finitely presented groups.
//!
//! The crate provides:
//! * words and presentations ([`word`], [`presentation`], [`text`]),
//! * integer matrix normal forms and abelianization ([`intmat`], [`abelian`]),
//! * small-cancellation analysis and Dehn reduction ([`smallcanc`]),
//! * coset enumeration, low-index subgroup search, finite-quotient spectra,
//!   and density checks ([`coset`], [`lowindex`], [`spectrum`], [`density`]),
//! * constructions: Rips extensions, fibre products, wreath products, and the
//!   assembled pipeline ([`rips`], [`fibre`], [`wreath`], [`pipeline`]).

pub mod abelian;
pub mod coset;
pub mod density;
pub mod fibre;
pub mod fingroup;
pub mod hom;
pub mod intmat;
pub mod lowindex;
pub mod par;
mod perm;
pub mod pipeline;
pub mod presentation;
pub mod rips;
pub mod smallcanc;
pub mod spectrum;
pub mod text;
pub mod word;
pub mod wreath;

pub use presentation::Presentation;
pub use word::{Syllable, Word};
