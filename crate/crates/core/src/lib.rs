//! Exact solvability of `f(X) = A` for entire functions of complex matrices.
//!
//! All decisions are made in exact Gaussian-rational arithmetic. A function
//! is either a polynomial over Q(i) or one of two transcendental families
//! with known ramification data; the engine classifies the range of `f` on
//! `M_n(C)` by its omitted and totally ramified values, decides whether a
//! given `A` lies in it, and for polynomial `f` constructs an exact `X`.
//!
//! ```
//! use matrange_core::{decide_range, EntireFunction, MatrixQi, Poly, GaussianRational};
//!
//! let square = EntireFunction::polynomial(Poly::from_ints(&[0, 0, 1])).unwrap();
//! let zero = GaussianRational::from_int(0);
//! let verdict = decide_range(&square, &MatrixQi::jordan_block(2, &zero)).unwrap();
//! assert!(!verdict.solvable);
//! ```

pub mod error;
pub mod function;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod range;
pub mod roots;
pub mod scalar;
pub mod selftest;

pub use error::{Error, Result};
pub use function::{
    preimage_roots, ramification_profile, validate, EntireFunction, PreimageRoots,
    RamificationProfile, TheoremCase, TrvEntry,
};
pub use matrix::{
    apply_poly, char_poly, f_of_jordan_block, is_in_e, is_in_s, jordan_decomposition, kernel_basis,
    rank, segre_at, JordanDecomposition, MatrixQi, SegrePartition,
};
pub use poly::{
    critical_value_polynomial, gcd_monic, multiplicity_multiset, resultant,
    squarefree_decomposition, squarefree_part, Poly,
};
pub use range::{
    build_witness, coverable, decide_range, describe_range, partitions, split_pattern,
    split_pattern_oracle, split_pattern_oracle_shifted, Blocking, BlockingReason, CoverEntry,
    CoverStep, PreimageDescriptor, RangeDescription, RangeVerdict, SplitPattern, UncoverableAt,
};
pub use roots::{gaussian_rational_roots, RootWithMultiplicity};
pub use scalar::GaussianRational;
