//! Exact edge-isoperimetry on the discrete cube.

mod bits;
pub mod dyadic;
pub mod error;
pub mod family;
pub mod fraclex;
pub mod lex;
mod literal;
pub mod search;
pub mod shifting;
pub mod subset;
pub mod symmetry;

pub use fraclex::{
    check_order1_bound, check_order2_bound, frac_influence, sweep_order1, sweep_order2,
    BoundReport, FracLexFamily, Regime, SweepSummary,
};
pub use dyadic::{rational_string, Dyadic, Rational};
pub use error::{Error, Result};
pub use family::{PairSliceStats, SetFamily, SliceStats, MAX_DIM};
pub use lex::{
    decompose_measure, decompose_measure_extended, lex_boundary, lex_greater, lex_influence,
    lex_segment, lex_slice_profile, stability_gap, MeasureDecomposition,
};
pub use search::{
    enumerate_families, make_remark_family, make_tightness_family, stability_table,
    verify_conjecture, verify_iso_and_uniqueness, VerifierConfig,
};
pub use subset::Subset;
pub use symmetry::{
    all_automorphisms, are_weakly_isomorphic, canonical_form, dist_to_lex_class, group_order,
    CubeAutomorphism, LexImageTable, MAX_GROUP_DIM,
};
pub use shifting::{
    cascade_to_dictatorship, is_n_stable, monotonize_all, n_stabilize, pivotal_exchange, shift,
    shift_ij, shift_monotonicity_hypothesis,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/lex.md")]
    mod lex {}
    #[doc = include_str!("../../../book/src/symmetry.md")]
    mod symmetry {}
    #[doc = include_str!("../../../book/src/shifting.md")]
    mod shifting {}
    #[doc = include_str!("../../../book/src/fraclex.md")]
    mod fraclex {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
