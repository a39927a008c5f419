//! Exact computations on affine and numerical semigroups: factorizations,
//! Graver bases, circuits, Betti elements, minimal presentations, and the
//! factorization invariants of semigroups with a single Betti element.
//!
//! Everything is generic over an integer [`Scalar`]. The aliases below fix it
//! to [`BigInt`] (the default) or to `i64`, which is faster and panics on
//! overflow in every build profile.
//!
//! Generator and coordinate indices are 0-based throughout.

pub mod betti_one;
pub mod domain;
pub mod enumeration;
pub mod error;
pub mod invariants;
pub mod lattice;
pub mod presentation;
pub mod scalar;

pub use num_bigint::BigInt;
pub use num_rational::Ratio;

pub use betti_one::{
    c_exponents, construct_numerical, detect_numerical, detect_single_betti, petal_decomposition,
    three_way_verdict, NumericalWitness, SingleBettiCertificate, ThreeWayVerdict,
};
pub use domain::{distance, evaluate, length, support, wedge, CongruencePair, Element, Factorization, GeneratorMatrix};
pub use enumeration::{
    decompose, decompose_with, elements_below, factorizations, factorizations_below, is_member, Bound, FactorizationSet,
};
pub use error::{Error, Result};
pub use invariants::{invariant_report, InvariantOptions, InvariantReport, Invariants, LengthSet, Sweep};
pub use lattice::{circuits, gluing_element, integer_kernel, is_gluing, rank, Bipartition, CircuitSet, IntegerLattice};
pub use presentation::{
    betti_elements, graver_basis, is_complete_intersection, minimal_presentation, BettiSet, GraverBasis,
    Presentation, SpanningTree,
};
pub use scalar::Scalar;

pub type Matrix = GeneratorMatrix<BigInt>;
pub type Elem = Element<BigInt>;
pub type Fact = Factorization<BigInt>;
pub type Pair = CongruencePair<BigInt>;

pub type Matrix64 = GeneratorMatrix<i64>;
pub type Elem64 = Element<i64>;
pub type Fact64 = Factorization<i64>;
pub type Pair64 = CongruencePair<i64>;
