//! Numerical checks of the Hardy-type inequalities, the polynomial lemma and the
//! main theorems, plus a best-approximation refinement on hyperbolic crosses.
//! Every check returns a [`VerificationReport`](crate::report::VerificationReport).

mod approx;
mod corpus;
mod hardy;
mod lemma7;
mod theorems;

pub use approx::{best_approx_refine, Refinement};
pub use corpus::{class_ball_corpus, lacunary_corpus, random_corpus, truncate_depth, BlockSeries, Corpus};
pub use hardy::{
    hardy1_check, hardy1_constant, hardy1_sides, hardy6_check, hardy6_constant, hardy6_sides, hardy_random_check, premise_constant,
    BoxArray, HardyVariant, SumOrder, PREMISE_LIMIT,
};
pub use lemma7::{lemma7_check, lemma7_random_cases, lemma7_sides, Lemma7Case};
pub use theorems::{
    lambda_space, theorem1_check, theorem2_check, theorem2_depth_check, theorem3_check, theorem4_check, theorem4_corpus_check,
    theorem4_sides, theorem5_check,
};
