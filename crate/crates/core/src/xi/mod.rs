//! Formal asymptotic expansions `Σ s^{λ+m-1} (Log s)^j / j!` and the themes
//! they generate.

mod element;
mod linear;
mod realization;
mod space;

pub use element::{normalize_lambda, XiElement};
pub use realization::{
    co_semisimple_filtration, generate_theme, is_semisimple, log_filtration, minimal_log_level,
    primitive_filtration, realization_is_invariant, realize_fresco, solve_in_xi, FiltrationPiece,
    Realization,
};
pub use space::XiSpace;
