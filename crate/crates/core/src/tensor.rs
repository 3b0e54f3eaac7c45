//! The root space: finite tensor powers of E and their linear span.

use std::collections::BTreeMap;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::word::{EWord, Generator};

/// `w₁ ⊗ … ⊗ w_N`, N ≥ 1. The number of factors is the order of the monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorMonomial {
    factors: Vec<EWord>,
}

impl TensorMonomial {
    /// Panics on an empty factor list.
    pub fn new(factors: Vec<EWord>) -> Self {
        assert!(
            !factors.is_empty(),
            "a tensor monomial has at least one factor"
        );
        TensorMonomial { factors }
    }

    pub fn single(word: EWord) -> Self {
        TensorMonomial {
            factors: vec![word],
        }
    }

    pub fn factors(&self) -> &[EWord] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn concat(&self, other: &TensorMonomial) -> TensorMonomial {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        TensorMonomial { factors }
    }

    /// Multiplies the last factor of `self` into the first factor of `other`.
    pub fn glue(&self, other: &TensorMonomial) -> TensorMonomial {
        let (last, head) = self.factors.split_last().expect("nonempty");
        let (first, tail) = other.factors.split_first().expect("nonempty");
        let mut factors = Vec::with_capacity(self.order() + other.order() - 1);
        factors.extend_from_slice(head);
        factors.push(last.product(first));
        factors.extend_from_slice(tail);
        TensorMonomial { factors }
    }

    pub fn differentiate_factor(&self, k: usize, power: i32) -> Result<TensorMonomial> {
        if k == 0 || k > self.order() {
            return Err(Error::IndexOutOfOrder {
                k,
                order: self.order(),
            });
        }
        let mut factors = self.factors.clone();
        factors[k - 1] = factors[k - 1].derivative(power);
        Ok(TensorMonomial { factors })
    }

    pub fn differentiate_all(&self, power: i32) -> TensorMonomial {
        TensorMonomial {
            factors: self.factors.iter().map(|w| w.derivative(power)).collect(),
        }
    }

    pub fn reversed(&self) -> TensorMonomial {
        TensorMonomial {
            factors: self.factors.iter().rev().cloned().collect(),
        }
    }

    pub fn pointwise(&self, other: &TensorMonomial) -> Result<TensorMonomial> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(format!(
                "pointwise product of orders {} and {}",
                self.order(),
                other.order()
            )));
        }
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| a.product(b))
            .collect();
        Ok(TensorMonomial { factors })
    }

    /// Folds all factors into one word with the E-product, left to right.
    pub fn collapsed(&self) -> TensorMonomial {
        let mut it = self.factors.iter();
        let first = it.next().expect("nonempty").clone();
        TensorMonomial::single(it.fold(first, |acc, w| acc.product(w)))
    }

    pub fn map_words(&self, f: impl Fn(&EWord) -> EWord) -> TensorMonomial {
        TensorMonomial {
            factors: self.factors.iter().map(f).collect(),
        }
    }
}

/// A finite linear combination of tensor monomials.
///
/// Terms are kept merged, zero-free and ordered, so `==` is equality of
/// normal forms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TensorPolynomial {
    terms: BTreeMap<TensorMonomial, Coefficient>,
}

impl TensorPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(coeff: Coefficient, monomial: TensorMonomial) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, monomial);
        p
    }

    pub fn monomial(monomial: TensorMonomial) -> Self {
        Self::term(Coefficient::one(), monomial)
    }

    pub fn word(word: EWord) -> Self {
        Self::monomial(TensorMonomial::single(word))
    }

    /// Builds a polynomial from possibly repeated terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Coefficient, TensorMonomial)>) -> Self {
        let mut p = Self::zero();
        for (c, m) in terms {
            p.add_term(c, m);
        }
        p
    }

    pub fn add_term(&mut self, coeff: Coefficient, monomial: TensorMonomial) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&monomial) {
            Some(c) => {
                *c += &coeff;
                if c.is_zero() {
                    self.terms.remove(&monomial);
                }
            }
            None => {
                self.terms.insert(monomial, coeff);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorMonomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coefficient(&self, m: &TensorMonomial) -> Option<&Coefficient> {
        self.terms.get(m)
    }

    pub fn add(&self, other: &TensorPolynomial) -> TensorPolynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorPolynomial) -> TensorPolynomial {
        self.add(&other.scale(&Coefficient::from(-1)))
    }

    pub fn scale(&self, c: &Coefficient) -> TensorPolynomial {
        if c.is_zero() {
            return Self::zero();
        }
        TensorPolynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn neg(&self) -> TensorPolynomial {
        self.scale(&Coefficient::from(-1))
    }

    /// Linear extension of a monomial map.
    pub fn map_linear(&self, f: impl Fn(&TensorMonomial) -> TensorMonomial) -> TensorPolynomial {
        Self::from_terms(self.terms.iter().map(|(m, c)| (c.clone(), f(m))))
    }

    pub fn try_map_linear(
        &self,
        f: impl Fn(&TensorMonomial) -> Result<TensorMonomial>,
    ) -> Result<TensorPolynomial> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(c.clone(), f(m)?);
        }
        Ok(out)
    }

    /// Linear extension of a monomial map whose values are polynomials.
    pub fn flat_map_linear(
        &self,
        f: impl Fn(&TensorMonomial) -> Result<TensorPolynomial>,
    ) -> Result<TensorPolynomial> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (m2, c2) in f(m)?.terms {
                out.add_term(c * &c2, m2);
            }
        }
        Ok(out)
    }

    /// Bilinear extension of a map on pairs of monomials.
    pub fn bilinear(
        &self,
        other: &TensorPolynomial,
        f: impl Fn(&TensorMonomial, &TensorMonomial) -> Result<TensorPolynomial>,
    ) -> Result<TensorPolynomial> {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1 * c2;
                for (m, k) in f(m1, m2)?.terms {
                    out.add_term(&c * &k, m);
                }
            }
        }
        Ok(out)
    }

    /// Orders of all monomials, ascending and deduplicated.
    pub fn orders(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(TensorMonomial::order).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn generators(&self) -> Vec<&Generator> {
        let mut v: Vec<&Generator> = self
            .terms
            .keys()
            .flat_map(|m| m.factors.iter().flat_map(|w| w.generators()))
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

impl From<TensorMonomial> for TensorPolynomial {
    fn from(m: TensorMonomial) -> Self {
        TensorPolynomial::monomial(m)
    }
}

impl From<EWord> for TensorPolynomial {
    fn from(w: EWord) -> Self {
        TensorPolynomial::word(w)
    }
}

fn bilinear_infallible(
    a: &TensorPolynomial,
    b: &TensorPolynomial,
    f: impl Fn(&TensorMonomial, &TensorMonomial) -> TensorMonomial,
) -> TensorPolynomial {
    a.bilinear(b, |x, y| Ok(TensorPolynomial::monomial(f(x, y))))
        .expect("infallible")
}

/// `φ ⊗ ψ`.
pub fn tensor_concat(phi: &TensorPolynomial, psi: &TensorPolynomial) -> TensorPolynomial {
    bilinear_infallible(phi, psi, TensorMonomial::concat)
}

/// Gluing: `φ₁⊗…⊗(φ_N·ψ₁)⊗…⊗ψ_M`, extended bilinearly.
pub fn glue(phi: &TensorPolynomial, psi: &TensorPolynomial) -> TensorPolynomial {
    bilinear_infallible(phi, psi, TensorMonomial::glue)
}

/// `D_k`: ∂ on the k-th factor (1-based) of every monomial.
pub fn d_k(phi: &TensorPolynomial, k: usize) -> Result<TensorPolynomial> {
    phi.try_map_linear(|m| m.differentiate_factor(k, 1))
}

/// `D_{ord}`: ∂ on the last factor of each monomial, whatever its order.
pub fn d_last(phi: &TensorPolynomial) -> TensorPolynomial {
    phi.map_linear(|m| {
        m.differentiate_factor(m.order(), 1)
            .expect("last factor exists")
    })
}

/// `(∂^power)^{⊗ord}`: ∂^power on every factor.
pub fn d_all(phi: &TensorPolynomial, power: i32) -> TensorPolynomial {
    phi.map_linear(|m| m.differentiate_all(power))
}

/// `P⊗`: reverses the factor sequence; words inside factors are untouched.
pub fn reverse(phi: &TensorPolynomial) -> TensorPolynomial {
    phi.map_linear(TensorMonomial::reversed)
}

/// `[φ ,^⊗ ψ] = φ⊗ψ − ψ⊗φ`.
pub fn tensor_commutator(phi: &TensorPolynomial, psi: &TensorPolynomial) -> TensorPolynomial {
    tensor_concat(phi, psi).sub(&tensor_concat(psi, phi))
}

/// Factorwise product of equal-order monomials.
pub fn pointwise_product(
    phi: &TensorPolynomial,
    psi: &TensorPolynomial,
) -> Result<TensorPolynomial> {
    phi.bilinear(psi, |a, b| a.pointwise(b).map(TensorPolynomial::monomial))
}

pub fn poly_add(a: &TensorPolynomial, b: &TensorPolynomial) -> TensorPolynomial {
    a.add(b)
}

pub fn poly_scale(c: &Coefficient, a: &TensorPolynomial) -> TensorPolynomial {
    a.scale(c)
}

pub fn is_zero(a: &TensorPolynomial) -> bool {
    a.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &str, c: u32) -> EWord {
        EWord::var(v, c)
    }
    fn mono(ws: &[EWord]) -> TensorPolynomial {
        TensorMonomial::new(ws.to_vec()).into()
    }

    #[test]
    fn concat_and_bilinearity() {
        let f = mono(&[w("f", 1)]);
        let g = mono(&[w("g", 1)]);
        let h = mono(&[w("h", 1)]);
        let fg = tensor_concat(&f, &g);
        assert_eq!(fg, mono(&[w("f", 1), w("g", 1)]));
        let lhs = tensor_concat(&f.sub(&g), &h);
        assert_eq!(lhs, tensor_concat(&f, &h).sub(&tensor_concat(&g, &h)));
    }

    #[test]
    fn glue_examples() {
        let f12 = mono(&[w("f", 1), w("f", 2)]);
        let g12 = mono(&[w("g", 1), w("g", 2)]);
        assert_eq!(
            glue(&f12, &g12),
            mono(&[w("f", 1), w("f", 2).product(&w("g", 1)), w("g", 2)])
        );
        let f = mono(&[w("f", 1)]);
        let g = mono(&[w("g", 1)]);
        assert_eq!(glue(&f, &g), mono(&[w("f", 1).product(&w("g", 1))]));
        assert_eq!(
            glue(&f, &g12),
            mono(&[w("f", 1).product(&w("g", 1)), w("g", 2)])
        );
    }

    #[test]
    fn d_k_examples() {
        let f12 = mono(&[w("f", 1), w("f", 2)]);
        assert_eq!(
            d_k(&f12, 1).unwrap(),
            mono(&[w("f", 1).derivative(1), w("f", 2)])
        );
        assert_eq!(
            d_k(&mono(&[w("f", 1)]), 1).unwrap(),
            mono(&[w("f", 1).derivative(1)])
        );
        assert_eq!(d_k(&f12, 3), Err(Error::IndexOutOfOrder { k: 3, order: 2 }));
    }

    #[test]
    fn d_all_examples() {
        let fg = mono(&[w("f", 1), w("g", 1)]);
        let dfg = mono(&[w("f", 1).derivative(1), w("g", 1).derivative(1)]);
        assert_eq!(d_all(&fg, 1), dfg);
        assert_eq!(d_all(&dfg, -1), fg);
        assert_eq!(d_all(&fg, 0), fg);
    }

    #[test]
    fn reverse_examples() {
        let f123 = mono(&[w("f", 1), w("f", 2), w("f", 3)]);
        assert_eq!(reverse(&f123), mono(&[w("f", 3), w("f", 2), w("f", 1)]));
        let f = mono(&[w("f", 1)]);
        assert_eq!(reverse(&f), f);
        let fgh = mono(&[w("f", 1).product(&w("g", 1)), w("h", 1)]);
        assert_eq!(
            reverse(&fgh),
            mono(&[w("h", 1), w("f", 1).product(&w("g", 1))])
        );
    }

    #[test]
    fn commutator_examples() {
        let f = mono(&[w("f", 1)]);
        let g = mono(&[w("g", 1)]);
        assert_eq!(
            tensor_commutator(&f, &g),
            mono(&[w("f", 1), w("g", 1)]).sub(&mono(&[w("g", 1), w("f", 1)]))
        );
        assert!(tensor_commutator(&f, &f).is_zero());
        let f12 = mono(&[w("f", 1), w("f", 2)]);
        assert_eq!(
            tensor_commutator(&f12, &g),
            mono(&[w("f", 1), w("f", 2), w("g", 1)]).sub(&mono(&[w("g", 1), w("f", 1), w("f", 2)]))
        );
    }

    #[test]
    fn pointwise_examples() {
        let f12 = mono(&[w("f", 1), w("f", 2)]);
        let g12 = mono(&[w("g", 1), w("g", 2)]);
        assert_eq!(
            pointwise_product(&f12, &g12).unwrap(),
            mono(&[w("f", 1).product(&w("g", 1)), w("f", 2).product(&w("g", 2))])
        );
        let f = mono(&[w("f", 1)]);
        let g = mono(&[w("g", 1)]);
        assert_eq!(
            pointwise_product(&f, &g).unwrap(),
            mono(&[w("f", 1).product(&w("g", 1))])
        );
        assert!(matches!(
            pointwise_product(&f12, &g),
            Err(Error::OrderMismatch(_))
        ));
    }

    #[test]
    fn linear_arithmetic() {
        let fg = mono(&[w("f", 1), w("g", 1)]);
        assert!(poly_add(&fg, &poly_scale(&Coefficient::from(-1), &fg)).is_zero());
        let f = mono(&[w("f", 1)]);
        let i = Coefficient::i();
        assert_eq!(poly_scale(&i, &poly_scale(&i, &f)), f.neg());
        let gf = mono(&[w("g", 1), w("f", 1)]);
        assert!(!is_zero(&fg.sub(&gf)));
    }
}
