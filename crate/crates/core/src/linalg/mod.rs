//! Linear algebra over exact fields and Z2-graded tensor calculus.

mod graded;
mod matrix;

pub use graded::{
    embed_aux1, embed_aux2, embed_leg, embed_pair, graded_embed_leg, graded_permutation,
    inverse_supertranspose, partial_inverse_supertranspose, partial_supertranspose, random_even_pair, random_homogeneous,
    rll_component_sides, rll_theta_sides, sign, supertranspose, theta_matrix, BlockOperator, Grading,
};
pub use matrix::Matrix;
