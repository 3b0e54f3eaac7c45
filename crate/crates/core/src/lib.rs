//! Symbolic engine for continual Lie algebras whose root spaces are tensor
//! powers of a free noncommutative algebra with a formal derivative.
//!
//! Layers, bottom up: exact coefficients ([`coeff`]), words of the free
//! algebra ([`word`]), tensor monomials and polynomials with the structural
//! operators ([`tensor`]), the mapping families ([`catalog`]), identity
//! residuals ([`identity`]), commutative limits ([`limits`]) and text I/O
//! ([`textio`]).

pub mod catalog;
pub mod coeff;
pub mod error;
pub mod identity;
pub mod limits;
pub mod tensor;
pub mod textio;
pub mod word;

pub use catalog::{apply_mapping, mapping_table, FamilyId, MappingId, MappingSystem};
pub use coeff::Coefficient;
pub use error::{Error, Result};
pub use identity::{
    check_suite, generic_monomial, residual, trace_identity, IdentityId, Mode, ProofTrace, Report,
};
pub use limits::{
    commutativize, leibniz_expand, limit_mapping_set, ClassicalMappingSet, LimitMode,
};
pub use tensor::{TensorMonomial, TensorPolynomial};
pub use textio::{parse_poly, print_poly, Format, ParseError};
pub use word::{EAtom, EWord, Generator};
