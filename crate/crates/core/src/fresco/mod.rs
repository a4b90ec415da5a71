//! Frescos: geometric (a,b)-modules generated by one element.

mod module;
mod presentation;

pub use module::{
    bernstein_element, exact_sequence_check, fresco_bernstein_polynomial, fresco_generator,
    homogeneous_product, is_fresco, jh_sequence, module_from_element, module_from_presentation,
    presentation_from_module, principal_jh, principal_lambdas, strictly_decreasing_jh_exists,
    ExactSequenceReport, FrescoData, JhSequence, JhStage,
};
pub use presentation::FrescoPresentation;
