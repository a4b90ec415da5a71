//! (a,b)-modules given by the matrix of `a` over truncated power series.

mod abmodule;
mod change_var;
mod invariants;
mod primitive;
mod rank_one;
mod saturation;
mod submodule;

pub use abmodule::{AbModule, ModuleElement};
pub use change_var::{apply_a_series, change_of_variable};
pub use invariants::{
    bernstein_char_poly, bernstein_polynomial, is_geometric, polynomial_is_geometric,
    residue_matrix,
};
pub use primitive::{primitive_part, PrimitivePart};
pub use rank_one::{rank1_normal_submodules, RankOneReport, RankOneSubmodule};
pub use saturation::{saturate, Lattice, NotStabilizedReason, Saturation, SaturationStatus};
pub use submodule::{split_normal, NormalSplit};

pub(crate) use abmodule::columns_to_matrix;
