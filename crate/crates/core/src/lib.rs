//! Planar harmonic maps `f = h + conj(g)` on the unit disk: truncated series,
//! pointwise geometry, coefficient criteria, circle scans and radius solvers.

pub mod cli;
pub mod closed_form;
pub mod criteria;
pub mod error;
pub mod gallery;
pub mod harmonic;
pub mod plot;
pub mod radius;
pub mod series;
pub mod verifier;

pub use error::{Error, Result};
pub use gallery::{gallery, GalleryId};
pub use harmonic::HarmonicMap;
pub use series::TruncatedSeries;
