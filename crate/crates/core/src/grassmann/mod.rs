//! Exterior-algebra machinery: wedge products, multivector norms,
//! projective distances, rational subspaces and their heights, intermediate
//! exponents and the reciprocal transfer between complementary grades.

mod equivalence;
mod inter_exp;
mod multivector;
mod subspace;

pub use equivalence::{
    def_equivalence_check, join_lifted, random_int_multivector, split_lifted,
    transpose_identity_holds, EquivalenceReport,
};
pub use inter_exp::{
    bv_transfer_check, intermediate_exponent, wedge_map, BvSample, BvValidation, Mode,
    MAX_AMBIENT, MAX_GRADE,
};
pub use multivector::{binomial, gram_norm_sq, merge_sign, subset_rank, subsets, Multivector};
pub use subspace::{point_subspace_distance, projective_distance, LiftedPoint, RationalSubspace};
