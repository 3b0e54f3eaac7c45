//! Commutative limits and the transforms they need.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::catalog::{
    apply_mapping, apply_mapping_with, FamilyId, MappingId, MappingSystem, TensorReading,
};
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::identity::generic_monomial;
use crate::tensor::{d_all, glue, TensorMonomial, TensorPolynomial};
use crate::word::{AtomBase, EAtom, EWord, Generator};

/// Sorts the atoms of every word (recursively inside groups) and re-merges.
pub fn commutativize(p: &TensorPolynomial) -> TensorPolynomial {
    p.map_linear(|m| m.map_words(EWord::sorted))
}

/// Replaces every `∂ⁿ(a₁·…·a_k)` by its multinomial expansion.
///
/// The product rule used keeps atom order, so the result is meaningful on
/// commutativized input; callers commutativize again afterwards.
pub fn leibniz_expand(p: &TensorPolynomial) -> Result<TensorPolynomial> {
    p.flat_map_linear(|m| {
        let mut acc: Vec<(Coefficient, Vec<EWord>)> = vec![(Coefficient::one(), Vec::new())];
        for w in m.factors() {
            let expanded = expand_word(w)?;
            let mut next = Vec::with_capacity(acc.len() * expanded.len());
            for (c, ws) in &acc {
                for (k, atoms) in &expanded {
                    let mut ws = ws.clone();
                    ws.push(EWord::new(atoms.clone()).expect("expansion keeps words nonempty"));
                    next.push((c * &Coefficient::from(*k), ws));
                }
            }
            acc = next;
        }
        Ok(TensorPolynomial::from_terms(
            acc.into_iter().map(|(c, ws)| (c, TensorMonomial::new(ws))),
        ))
    })
}

/// Expansion of one word into integer-weighted words of generator atoms.
fn expand_word(w: &EWord) -> Result<Vec<(i64, Vec<EAtom>)>> {
    let mut acc: Vec<(i64, Vec<EAtom>)> = vec![(1, Vec::new())];
    for atom in w.atoms() {
        let pieces = match atom.base() {
            AtomBase::Generator(_) => vec![(1, vec![atom.clone()])],
            AtomBase::Grouped(inner) => {
                let n = atom.power();
                if n < 0 {
                    return Err(Error::NegativePowerGroup);
                }
                let mut out = Vec::new();
                for (c, atoms) in expand_word(inner)? {
                    for (k, shares) in distributions(n as u32, atoms.len()) {
                        let derived = atoms
                            .iter()
                            .zip(&shares)
                            .map(|(a, &s)| {
                                let g = a
                                    .as_generator()
                                    .expect("expanded words hold generators only");
                                EAtom::generator(g.clone(), a.power() + s as i32)
                            })
                            .collect();
                        out.push((c * k, derived));
                    }
                }
                out
            }
        };
        let mut next = Vec::with_capacity(acc.len() * pieces.len());
        for (c1, a1) in &acc {
            for (c2, a2) in &pieces {
                let mut atoms = a1.clone();
                atoms.extend(a2.iter().cloned());
                next.push((c1 * c2, atoms));
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// All ways to split `n` derivatives over `k` slots, with multinomial weights.
fn distributions(n: u32, k: usize) -> Vec<(i64, Vec<u32>)> {
    fn go(n: u32, k: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for j in 0..=n {
            prefix.push(j);
            go(n - j, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let fact = |m: u32| (1..=m as i64).product::<i64>();
    let mut shares = Vec::new();
    go(n, k, &mut Vec::new(), &mut shares);
    shares
        .into_iter()
        .map(|s| {
            let weight = fact(n) / s.iter().map(|&j| fact(j)).product::<i64>();
            (weight, s)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitMode {
    /// Order-one arguments, every tensor product in the definitions read as
    /// the E-product, then a commutative product.
    OrderOne,
    /// Apply the mappings at the given orders, fold the factors of every
    /// output monomial into one word, then a commutative product.
    TensorCollapse { orders: (usize, usize) },
}

impl fmt::Display for LimitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitMode::OrderOne => f.write_str("order-one"),
            LimitMode::TensorCollapse { orders: (1, 1) } => f.write_str("tensor-collapse"),
            LimitMode::TensorCollapse { orders: (p, q) } => write!(f, "tensor-collapse({p},{q})"),
        }
    }
}

impl FromStr for LimitMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "order-one" => Ok(LimitMode::OrderOne),
            "tensor-collapse" => Ok(LimitMode::TensorCollapse { orders: (1, 1) }),
            _ => Err(format!(
                "unknown limit mode `{s}` (expected order-one or tensor-collapse)"
            )),
        }
    }
}

/// Closed forms of a limit, in the generic order-one arguments `phi1`, `psi1`
/// (or `phi1..phi_p`, `psi1..psi_q` for a tensor collapse at higher orders).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalMappingSet {
    pub origin: FamilyId,
    pub mode: LimitMode,
    pub forms: BTreeMap<MappingId, TensorPolynomial>,
}

pub fn limit_mapping_set(family: FamilyId, mode: LimitMode) -> Result<ClassicalMappingSet> {
    if family.is_classical() {
        return Err(Error::UnsupportedFamily(family.to_string()));
    }
    let (p, q) = match mode {
        LimitMode::OrderOne => (1, 1),
        LimitMode::TensorCollapse { orders } => orders,
    };
    let phi = TensorPolynomial::monomial(generic_monomial("phi", p));
    let psi = TensorPolynomial::monomial(generic_monomial("psi", q));
    let mut forms = BTreeMap::new();
    for slot in family.slots() {
        let raw = match mode {
            LimitMode::OrderOne => {
                apply_mapping_with(TensorReading::Collapsed, family, slot, &phi, &psi)?
            }
            LimitMode::TensorCollapse { .. } => {
                apply_mapping(family, slot, &phi, &psi)?.map_linear(TensorMonomial::collapsed)
            }
        };
        forms.insert(slot, commutativize(&raw));
    }
    Ok(ClassicalMappingSet {
        origin: family,
        mode,
        forms,
    })
}

impl ClassicalMappingSet {
    fn substitutable(&self) -> bool {
        !matches!(self.mode, LimitMode::TensorCollapse { orders } if orders != (1, 1))
    }

    pub fn form(&self, m: MappingId) -> Option<&TensorPolynomial> {
        self.forms.get(&m)
    }
}

/// Replaces `phi1`/`psi1` in an order-one template by order-one polynomials.
fn substitute(
    template: &TensorPolynomial,
    phi: &TensorPolynomial,
    psi: &TensorPolynomial,
) -> TensorPolynomial {
    let phi_gen = Generator::new("phi", 1);
    let psi_gen = Generator::new("psi", 1);
    let subst_word = |w: &EWord| -> TensorPolynomial {
        fn go(w: &EWord, pairs: &[(&Generator, &TensorPolynomial)]) -> TensorPolynomial {
            let mut acc: Option<TensorPolynomial> = None;
            for atom in w.atoms() {
                let piece = match atom.base() {
                    AtomBase::Generator(g) => match pairs.iter().find(|(k, _)| *k == g) {
                        Some((_, value)) => d_all(value, atom.power()),
                        None => TensorPolynomial::word(
                            EWord::new(vec![atom.clone()]).expect("nonempty"),
                        ),
                    },
                    AtomBase::Grouped(inner) => d_all(&go(inner, pairs), atom.power()),
                };
                acc = Some(match acc {
                    None => piece,
                    Some(a) => glue(&a, &piece),
                });
            }
            acc.expect("words are nonempty")
        }
        go(w, &[(&phi_gen, phi), (&psi_gen, psi)])
    };
    template
        .flat_map_linear(|m| Ok(subst_word(&m.factors()[0])))
        .expect("substitution is infallible")
}

impl MappingSystem for ClassicalMappingSet {
    fn label(&self) -> String {
        format!("limit({}, {})", self.origin, self.mode)
    }
    fn provides(&self, m: MappingId) -> bool {
        self.forms.contains_key(&m)
    }
    fn is_single(&self) -> bool {
        self.origin.is_single()
    }
    fn max_argument_order(&self) -> Option<usize> {
        Some(1)
    }
    fn apply(
        &self,
        m: MappingId,
        phi: &TensorPolynomial,
        psi: &TensorPolynomial,
    ) -> Result<TensorPolynomial> {
        let template = self
            .forms
            .get(&m)
            .ok_or_else(|| Error::UnsupportedMapping {
                family: self.label(),
                mapping: m.to_string(),
            })?;
        if !self.substitutable() {
            return Err(Error::NotApplicable {
                identity: "argument substitution".into(),
                target: self.label(),
            });
        }
        for arg in [phi, psi] {
            if arg.orders().iter().any(|&o| o != 1) {
                return Err(Error::OrderMismatch(format!(
                    "{} acts on order-one arguments",
                    self.label()
                )));
            }
        }
        Ok(substitute(template, phi, psi))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equal,
    Negated,
    Different,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Equal => "equal",
            Relation::Negated => "opposite sign",
            Relation::Different => "different",
        })
    }
}

pub fn relation(a: &TensorPolynomial, b: &TensorPolynomial) -> Relation {
    if a == b {
        Relation::Equal
    } else if *a == b.neg() {
        Relation::Negated
    } else {
        Relation::Different
    }
}

/// Slot-by-slot comparison of a limit with a classical family, both taken in
/// the commutative reading on `phi1`, `psi1`.
pub fn compare_with_classical(
    set: &ClassicalMappingSet,
    reference: FamilyId,
) -> Result<Vec<(MappingId, Relation)>> {
    let phi = TensorPolynomial::monomial(generic_monomial("phi", 1));
    let psi = TensorPolynomial::monomial(generic_monomial("psi", 1));
    let mut out = Vec::new();
    for (m, form) in &set.forms {
        if reference.provides(*m) {
            let classical = commutativize(&apply_mapping(reference, *m, &phi, &psi)?);
            out.push((*m, relation(form, &classical)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &str) -> EWord {
        EWord::var(v, 1)
    }

    #[test]
    fn commutativize_sorts_and_cancels() {
        let gf = TensorPolynomial::word(w("g").product(&w("f")));
        assert_eq!(
            commutativize(&gf),
            TensorPolynomial::word(w("f").product(&w("g")))
        );
        let a = TensorPolynomial::word(w("f").product(&w("g").derivative(1)));
        let b = TensorPolynomial::word(w("g").derivative(1).product(&w("f")));
        assert!(commutativize(&a.sub(&b)).is_zero());
        let wrapped = TensorPolynomial::word(w("g").product(&w("f")).derivative(1));
        assert_eq!(
            commutativize(&wrapped),
            TensorPolynomial::word(w("f").product(&w("g")).derivative(1))
        );
    }

    #[test]
    fn leibniz_cases() {
        let fg = w("f").product(&w("g"));
        let d1 = leibniz_expand(&TensorPolynomial::word(fg.derivative(1))).unwrap();
        let expected = TensorPolynomial::word(w("f").derivative(1).product(&w("g"))).add(
            &TensorPolynomial::word(w("f").product(&w("g").derivative(1))),
        );
        assert_eq!(d1, expected);

        let d2 = leibniz_expand(&TensorPolynomial::word(fg.derivative(2))).unwrap();
        let expected = TensorPolynomial::word(w("f").derivative(2).product(&w("g")))
            .add(
                &TensorPolynomial::word(w("f").derivative(1).product(&w("g").derivative(1)))
                    .scale(&Coefficient::from(2)),
            )
            .add(&TensorPolynomial::word(
                w("f").product(&w("g").derivative(2)),
            ));
        assert_eq!(d2, expected);

        assert_eq!(
            leibniz_expand(&TensorPolynomial::word(fg.derivative(-1))),
            Err(Error::NegativePowerGroup)
        );
    }

    #[test]
    fn nested_leibniz() {
        // ∂(f·∂(g·h)) = ∂f·∂(gh) + f·∂²(gh) expanded fully.
        let inner = w("g").product(&w("h")).derivative(1);
        let p = TensorPolynomial::word(w("f").product(&inner).derivative(1));
        let out = leibniz_expand(&p).unwrap();
        // ∂f∂g h + ∂f g∂h + f∂²g h + 2 f∂g∂h + f g∂²h
        assert_eq!(out.len(), 5);
        assert!(out.terms().any(|(_, c)| *c == Coefficient::from(2)));
    }

    #[test]
    fn multinomial_weights() {
        let d = distributions(3, 2);
        let weights: Vec<i64> = d.iter().map(|(k, _)| *k).collect();
        assert_eq!(weights, vec![1, 3, 3, 1]);
        assert_eq!(distributions(2, 3).iter().map(|(k, _)| k).sum::<i64>(), 9);
    }

    #[test]
    fn classical_inputs_rejected() {
        assert_eq!(
            limit_mapping_set(FamilyId::ClassicalPoisson, LimitMode::OrderOne),
            Err(Error::UnsupportedFamily("classical-poisson".into()))
        );
    }

    #[test]
    fn substitution_matches_direct_application() {
        let set = limit_mapping_set(FamilyId::NcrsPoisson, LimitMode::OrderOne).unwrap();
        let a = TensorPolynomial::word(w("a").product(&w("b")));
        let b = TensorPolynomial::word(w("c"));
        let direct = commutativize(
            &apply_mapping(FamilyId::ClassicalPoisson, MappingId::Kplus, &a, &b).unwrap(),
        );
        assert_eq!(
            commutativize(&set.apply(MappingId::Kplus, &a, &b).unwrap()),
            direct
        );
    }
}
