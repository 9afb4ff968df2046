//! Invariants of analytic germs computed from diagrams of initial exponents.

pub mod corpus;
pub mod diagram;
mod error;
pub mod experiments;
pub mod germ;
pub mod oracle;
pub mod poly;
pub mod standard_basis;

pub use diagram::{Diagram, HilbertSamuelTable};
pub use error::{Error, Result};
pub use poly::{
    Exponent, JetContext, LocalOrder, Poly, PositiveLinearForm, RatMatrix, TieBreak, Vars,
};
pub use standard_basis::{IdealPresentation, Limits, StandardBasis};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/diagrams.md")]
    mod diagrams {}
    #[doc = include_str!("../../../book/src/standard-bases.md")]
    mod standard_bases {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/germs.md")]
    mod germs {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
