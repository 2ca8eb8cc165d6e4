//! Graded differential operators on forms.

mod calculus;
mod decompose;
mod tree;
mod verify;

pub use calculus::{
    filippov_bracket, fi_expansion, fi_residual, function_bracket, koszul_binary_expansion_check,
    last_pair_skew_defect, nested_commutator, phi, FiExpansion,
};
pub use decompose::{decompose_tensorial, extract_top_multivector, Decomposition};
pub use tree::{GradedOperator, OpKind};
pub use verify::{is_tensorial, order_at_most, symb_top_vanishes, OrderVerdict, TestStrategy, VerdictStatus, Witness};

/// Applies `F` to `a`.
pub fn apply(f: &GradedOperator, a: &crate::exterior::GradedElement) -> crate::Result<crate::exterior::GradedElement> {
    f.apply(a)
}

/// `[F, G]`.
pub fn graded_commutator(f: &GradedOperator, g: &GradedOperator) -> crate::Result<GradedOperator> {
    GradedOperator::commutator(f, g)
}

#[cfg(test)]
mod tests;
