//! Primitive themes: detection, fundamental data, canonical forms and
//! endomorphisms.

mod canonical;
mod data;
mod detect;
mod hom;

pub use canonical::{canonical_form, CanonicalResult};
pub use data::{build_vw, theme_from_canonical, CanonicalForm, FundamentalData, VwSpace};
pub use detect::{fundamental_data, is_theme, ThemeCheck};
pub use hom::{hom_dimension, is_invariant, HomReport, InvarianceReport};
