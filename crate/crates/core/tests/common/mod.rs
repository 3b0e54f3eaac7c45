//! Conversion from the oracle's plain term lists into engine polynomials.

#![allow(dead_code)]

use ncrs_core::{Coefficient, EAtom, EWord, Generator, TensorMonomial, TensorPolynomial};
use ncrs_oracle as oracle;

fn atom(a: &oracle::Atom) -> EAtom {
    match a {
        oracle::Atom::Sym { name, index, d } => {
            EAtom::generator(Generator::new(name.clone(), *index), *d)
        }
        oracle::Atom::Paren { body, d } => EAtom::raw_group(body.iter().map(atom).collect(), *d),
    }
}

pub fn coefficient(c: &oracle::C) -> Coefficient {
    let re = Coefficient::rational(*c.0.numer(), *c.0.denom());
    let im = Coefficient::rational(*c.1.numer(), *c.1.denom());
    re + im * Coefficient::i()
}

pub fn monomial(m: &oracle::Mono) -> TensorMonomial {
    TensorMonomial::new(
        m.iter()
            .map(|w| EWord::new(w.iter().map(atom).collect()).expect("oracle words are nonempty"))
            .collect(),
    )
}

pub fn from_merged(m: &oracle::Merged) -> TensorPolynomial {
    TensorPolynomial::from_terms(m.iter().map(|(mono, c)| (coefficient(c), monomial(mono))))
}

pub fn oracle_slot(m: ncrs_core::MappingId) -> &'static str {
    use ncrs_core::MappingId as M;
    match m {
        M::K => "K",
        M::K0 => "K0",
        M::Kplus => "K+",
        M::Kminus => "K-",
        M::K00 => "K00",
        M::Knm(..) => panic!("graded slots go through apply_knm"),
    }
}

pub fn oracle_ident(id: ncrs_core::IdentityId) -> oracle::Ident {
    use ncrs_core::IdentityId as I;
    match id {
        I::GradedGk(k, m, n) => oracle::Ident::Gk(k, m, n),
        I::GradedSk(n, m) => oracle::Ident::Sk(n, m),
        other => oracle::Ident::Named(other.to_string()),
    }
}
