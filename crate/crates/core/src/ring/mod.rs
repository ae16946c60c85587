//! Multigraded polynomial rings: degrees, monomials, polynomials, degree
//! systems and presentations with normal forms.

mod enumerate;
mod grading;
mod monomial;
mod presentation;

pub use enumerate::DegreeEnumerator;
pub use grading::{in_monoid, solve_degree_system, solve_degree_system_excluding, Grading, MultiDegree, SolutionSet};
pub use monomial::{rational, Monomial, Polynomial};
pub use presentation::{
    graded_piece_basis, graded_piece_basis_excluding, homogeneous_degree, normal_form, RingPresentation,
    TruncationWeights,
};
