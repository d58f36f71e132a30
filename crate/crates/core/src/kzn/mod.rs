//! K-theory with ℤ_n coefficients on the circle model: Moore-space data, the
//! difference construction, the mod-n index and its direct image, the
//! fractional part of d, and normal forms of operators in Ell(M, ℤ_n).

mod classes;
mod modn;
mod normal;

pub use classes::{
    bockstein, gamma_trivialization, moore_k, reduction_mod_n, subspace_class, GammaPath, KClassZn, MooreSpaceData,
    SubspaceClass,
};
pub use modn::{
    antipodal_action_check, calibration_sign, difference_construction_zn, direct_image_s1, face_frames,
    fractional_eta_analytic, fractional_eta_topological, interleave_permutation, mod_n_analytic_index,
    permutation_operator, shift_generator, winding_datum, FractionalEta, ModNOperator,
};
pub use normal::{inverse_row_decomposition, normal_form, EllZnElement, NormalForm, RowDecomposition};

use serde::{Deserialize, Serialize};

/// One verification line for a theorem check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremRow {
    pub theorem: String,
    pub n: u64,
    pub example_id: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl TheoremRow {
    pub fn new(theorem: &str, n: u64, example_id: impl Into<String>, lhs: impl ToString, rhs: impl ToString) -> Self {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        let pass = lhs == rhs;
        TheoremRow { theorem: theorem.into(), n, example_id: example_id.into(), lhs, rhs, pass }
    }
}
