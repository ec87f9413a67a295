//! The lattice-set engine: exact sumsets `A + B` and `A + TA` in `ℤ^d`, the
//! projection counts `φ_x`, `φ_y`, and checkers for the inequalities used
//! around them.

mod engine;
mod lattice;
mod number_field;
mod report;

pub use engine::{
    apply_operator, dilate_sumset, dilate_sumset_with, sumset, sumset_with, IntegralForm, SumsetStrategy,
};
pub use lattice::LatticeSet;
pub use number_field::{nf_dilate_sumset, nf_tuple_dilate_sumset};
pub use report::{
    analyze, cd_projection_bound, main_lemma_bound, phi_x, phi_y, pluennecke_report, sqrt2_operator, LogBase,
    PluenneckeReport, ProjectionBound, SumsetReport, SILVER_SQUARED,
};
