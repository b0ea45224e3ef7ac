//! Causal asymmetry of two-qubit states computed three ways: from the
//! density matrix, from tomograms in the subsystem eigenbases, and from
//! tomograms in the bases that maximise classical mutual information.
//!
//! The guide under `book/` walks through the API; its code blocks run as
//! doctests.

pub mod correlations;
pub mod ensemble;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod states;
pub mod stats;
pub mod tomography;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/quantum.md")]
    mod quantum {}
    #[doc = include_str!("../../../book/src/tomograms.md")]
    mod tomograms {}
    #[doc = include_str!("../../../book/src/optimal.md")]
    mod optimal {}
    #[doc = include_str!("../../../book/src/x-states.md")]
    mod x_states {}
    #[doc = include_str!("../../../book/src/ensembles.md")]
    mod ensembles {}
}
