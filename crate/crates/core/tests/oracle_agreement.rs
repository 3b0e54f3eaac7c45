//! The engine against the independent direct-substitution expander.

mod common;

use common::{from_merged, oracle_ident, oracle_slot};
use ncrs_core::identity::suite_cases;
use ncrs_core::limits::limit_mapping_set;
use ncrs_core::{residual, FamilyId, LimitMode, Mode};
use ncrs_oracle as oracle;

fn agree(family: FamilyId, max_order: usize, mode: Mode) {
    for (id, orders) in suite_cases(&family, max_order, mode) {
        let engine = residual(family, id, &orders, mode);
        let expected = oracle::residual(
            family.name(),
            &oracle_ident(id),
            &orders,
            mode.commutative(),
            mode.leibniz(),
        );
        match (engine, expected) {
            (Ok(r), Ok(o)) => assert_eq!(
                r.residual,
                from_merged(&o),
                "{family} {id} {orders:?} {mode}"
            ),
            (Err(_), Err(_)) => {}
            (e, o) => panic!("{family} {id} {orders:?} {mode}: engine {e:?}, oracle {o:?}"),
        }
    }
}

#[test]
fn noncommutative_suites_match_oracle() {
    for f in FamilyId::NCRS {
        agree(f, 3, Mode::NONCOMMUTATIVE);
    }
}

#[test]
fn ncrs_suites_match_oracle_commutatively() {
    for f in FamilyId::NCRS {
        agree(f, 2, Mode::COMMUTATIVE);
    }
}

#[test]
fn classical_suites_match_oracle_in_every_mode() {
    for f in FamilyId::ALL.into_iter().filter(|f| f.is_classical()) {
        for mode in [Mode::NONCOMMUTATIVE, Mode::COMMUTATIVE, Mode::LEIBNIZ] {
            agree(f, 1, mode);
        }
    }
}

#[test]
fn order_one_limits_match_oracle() {
    for f in FamilyId::NCRS {
        let set = limit_mapping_set(f, LimitMode::OrderOne).unwrap();
        for (m, form) in &set.forms {
            let o = oracle::order_one_limit(f.name(), oracle_slot(*m));
            assert_eq!(form, &from_merged(&o), "{f} {m}");
        }
    }
}

#[test]
fn mappings_match_oracle_on_generic_arguments() {
    use ncrs_core::{apply_mapping, generic_monomial, TensorPolynomial};
    for f in FamilyId::ALL {
        let top = if f.is_classical() { 1 } else { 3 };
        for p in 1..=top {
            for q in 1..=top {
                let phi = TensorPolynomial::monomial(generic_monomial("phi", p));
                let psi = TensorPolynomial::monomial(generic_monomial("psi", q));
                for m in f.slots() {
                    let engine = apply_mapping(f, m, &phi, &psi).unwrap();
                    let o = oracle::merge(&oracle::apply(
                        f.name(),
                        oracle_slot(m),
                        &oracle::generic("phi", p),
                        &oracle::generic("psi", q),
                    ));
                    assert_eq!(engine, from_merged(&o), "{f} {m} ({p},{q})");
                }
            }
        }
    }
}
