//! Algebraic entropy of endomorphisms of concretely represented locally
//! finite groups.

pub mod abelian;
pub mod cli;
pub mod element;
pub mod entropy;
pub mod endo;
pub mod error;
pub mod family;
pub mod fingen;
pub mod harness;
pub mod literal;
pub mod quotient;
pub mod scenario;
pub mod series;
pub mod table;

pub use element::{GroupElement, SupportMap, UtMatrix};
pub use error::{Error, Result};
pub use family::GroupFamily;
pub use fingen::{ElementSet, FiniteSubgroup};
pub use table::BaseGroupTable;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/groups.md")]
    pub struct Groups;
    #[doc = include_str!("../../../book/src/trajectories.md")]
    pub struct Trajectories;
    #[doc = include_str!("../../../book/src/ladders.md")]
    pub struct Ladders;
    #[doc = include_str!("../../../book/src/series.md")]
    pub struct Series;
    #[doc = include_str!("../../../book/src/addition.md")]
    pub struct Addition;
    #[doc = include_str!("../../../book/src/certificates.md")]
    pub struct Certificates;
    #[doc = include_str!("../../../book/src/scenarios.md")]
    pub struct Scenarios;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
}
