//! Affine self-maps of tori, finite group actions built from them, the
//! freeness criterion, and the lift group with its first homology.

mod action;
mod crystal;
mod map;
pub mod snf;

use thiserror::Error;

use crate::groups::GroupError;

pub use action::{act_cyclic, act_extend_trivial, act_product, act_trivial, act_wreath, FreenessReport, TorusAction};
pub use crystal::{pi1_presentation, CrystalElement, CrystalGroup, Homology};
pub use map::{frac, AffineTorusMap, TorusPoint};
pub use snf::{smith_decomposition, smith_normal_form, IntMatrix, SmithDecomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("element {element} fixes {witness}")]
    NotFree { element: String, witness: String },
    #[error("no map recorded for {0}")]
    UnknownElement(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}
