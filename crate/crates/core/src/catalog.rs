//! Mapping families: the noncommutative root space constructions and their
//! classical commutative counterparts.
//!
//! Every mapping is defined on pairs of tensor monomials and extended
//! bilinearly. `ord φ` inside a definition always refers to the monomial the
//! mapping is currently evaluated on.

use std::fmt;
use std::str::FromStr;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::tensor::{
    d_all, d_k, d_last, glue, reverse, tensor_concat, TensorMonomial, TensorPolynomial,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    NcrsWitt,
    NcrsRicci,
    NcrsPoisson,
    NcrsPoissonTypeV1,
    NcrsPoissonTypeV2,
    NcrsIntegral,
    ClassicalWitt,
    ClassicalRicciA,
    ClassicalRicciB,
    ClassicalPoisson,
}

impl FamilyId {
    pub const ALL: [FamilyId; 10] = [
        FamilyId::NcrsWitt,
        FamilyId::NcrsRicci,
        FamilyId::NcrsPoisson,
        FamilyId::NcrsPoissonTypeV1,
        FamilyId::NcrsPoissonTypeV2,
        FamilyId::NcrsIntegral,
        FamilyId::ClassicalWitt,
        FamilyId::ClassicalRicciA,
        FamilyId::ClassicalRicciB,
        FamilyId::ClassicalPoisson,
    ];

    pub const NCRS: [FamilyId; 6] = [
        FamilyId::NcrsWitt,
        FamilyId::NcrsRicci,
        FamilyId::NcrsPoisson,
        FamilyId::NcrsPoissonTypeV1,
        FamilyId::NcrsPoissonTypeV2,
        FamilyId::NcrsIntegral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::NcrsWitt => "ncrs-witt",
            FamilyId::NcrsRicci => "ncrs-ricci",
            FamilyId::NcrsPoisson => "ncrs-poisson",
            FamilyId::NcrsPoissonTypeV1 => "ncrs-poisson-type-v1",
            FamilyId::NcrsPoissonTypeV2 => "ncrs-poisson-type-v2",
            FamilyId::NcrsIntegral => "ncrs-integral",
            FamilyId::ClassicalWitt => "classical-witt",
            FamilyId::ClassicalRicciA => "classical-ricci-a",
            FamilyId::ClassicalRicciB => "classical-ricci-b",
            FamilyId::ClassicalPoisson => "classical-poisson",
        }
    }

    pub fn is_classical(self) -> bool {
        matches!(
            self,
            FamilyId::ClassicalWitt
                | FamilyId::ClassicalRicciA
                | FamilyId::ClassicalRicciB
                | FamilyId::ClassicalPoisson
        )
    }

    /// Witt-shaped families carry one mapping `K` instead of the local part.
    pub fn is_single(self) -> bool {
        matches!(self, FamilyId::NcrsWitt | FamilyId::ClassicalWitt)
    }

    /// Fixed (non-graded) slots, in canonical order.
    pub fn slots(self) -> Vec<MappingId> {
        if self.is_single() {
            vec![MappingId::K]
        } else {
            vec![
                MappingId::Kplus,
                MappingId::Kminus,
                MappingId::K00,
                MappingId::K0,
            ]
        }
    }

    pub fn provides(self, m: MappingId) -> bool {
        match m {
            MappingId::Knm(..) => self == FamilyId::ClassicalPoisson,
            m => self.slots().contains(&m),
        }
    }

    /// The classical family a noncommutative family is meant to reduce to.
    pub fn classical_counterpart(self) -> Option<FamilyId> {
        match self {
            FamilyId::NcrsWitt => Some(FamilyId::ClassicalWitt),
            FamilyId::NcrsRicci => Some(FamilyId::ClassicalRicciA),
            FamilyId::NcrsPoisson => Some(FamilyId::ClassicalPoisson),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = FamilyId::ALL.iter().map(|f| f.name()).collect();
                format!(
                    "unknown family `{s}` (expected one of: {})",
                    names.join(", ")
                )
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MappingId {
    K,
    K0,
    Kplus,
    Kminus,
    K00,
    Knm(i64, i64),
}

impl fmt::Display for MappingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MappingId::K => f.write_str("K"),
            MappingId::K0 => f.write_str("K0"),
            MappingId::Kplus => f.write_str("K+"),
            MappingId::Kminus => f.write_str("K-"),
            MappingId::K00 => f.write_str("K00"),
            MappingId::Knm(n, m) => write!(f, "Knm({n},{m})"),
        }
    }
}

impl FromStr for MappingId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        Ok(match s {
            "K" => MappingId::K,
            "K0" => MappingId::K0,
            "K+" | "Kplus" => MappingId::Kplus,
            "K-" | "Kminus" => MappingId::Kminus,
            "K00" => MappingId::K00,
            _ => {
                let inner = s
                    .strip_prefix("Knm(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| {
                        format!("unknown mapping `{s}` (expected K, K0, K+, K-, K00 or Knm(n,m))")
                    })?;
                let (n, m) = inner
                    .split_once(',')
                    .ok_or_else(|| format!("malformed `{s}`"))?;
                let n = n
                    .trim()
                    .parse()
                    .map_err(|_| format!("malformed index in `{s}`"))?;
                let m = m
                    .trim()
                    .parse()
                    .map_err(|_| format!("malformed index in `{s}`"))?;
                MappingId::Knm(n, m)
            }
        })
    }
}

/// How tensor products written in a mapping definition are evaluated.
///
/// `Collapsed` reads every `⊗` as the product in E; on order-one arguments
/// this is the "tensor power one" reduction used by the commutative limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TensorReading {
    #[default]
    Tensor,
    Collapsed,
}

impl TensorReading {
    fn tensor(self, a: &TensorPolynomial, b: &TensorPolynomial) -> TensorPolynomial {
        match self {
            TensorReading::Tensor => tensor_concat(a, b),
            TensorReading::Collapsed => tensor_concat(a, b).map_linear(TensorMonomial::collapsed),
        }
    }

    fn commutator(self, a: &TensorPolynomial, b: &TensorPolynomial) -> TensorPolynomial {
        self.tensor(a, b).sub(&self.tensor(b, a))
    }
}

/// Anything that can be plugged into the identity engine.
pub trait MappingSystem {
    fn label(&self) -> String;
    fn provides(&self, m: MappingId) -> bool;
    fn is_single(&self) -> bool;
    fn is_graded(&self) -> bool {
        false
    }
    /// `Some(1)` for systems defined on E only.
    fn max_argument_order(&self) -> Option<usize>;
    fn apply(
        &self,
        m: MappingId,
        phi: &TensorPolynomial,
        psi: &TensorPolynomial,
    ) -> Result<TensorPolynomial>;
}

impl MappingSystem for FamilyId {
    fn label(&self) -> String {
        self.name().to_string()
    }
    fn provides(&self, m: MappingId) -> bool {
        FamilyId::provides(*self, m)
    }
    fn is_single(&self) -> bool {
        FamilyId::is_single(*self)
    }
    fn is_graded(&self) -> bool {
        *self == FamilyId::ClassicalPoisson
    }
    fn max_argument_order(&self) -> Option<usize> {
        self.is_classical().then_some(1)
    }
    fn apply(
        &self,
        m: MappingId,
        phi: &TensorPolynomial,
        psi: &TensorPolynomial,
    ) -> Result<TensorPolynomial> {
        apply_mapping(*self, m, phi, psi)
    }
}

/// Value of `mapping` of `family` on `(φ, ψ)`.
pub fn apply_mapping(
    family: FamilyId,
    mapping: MappingId,
    phi: &TensorPolynomial,
    psi: &TensorPolynomial,
) -> Result<TensorPolynomial> {
    apply_mapping_with(TensorReading::Tensor, family, mapping, phi, psi)
}

pub fn apply_mapping_with(
    reading: TensorReading,
    family: FamilyId,
    mapping: MappingId,
    phi: &TensorPolynomial,
    psi: &TensorPolynomial,
) -> Result<TensorPolynomial> {
    if !family.provides(mapping) {
        return Err(Error::UnsupportedMapping {
            family: family.to_string(),
            mapping: mapping.to_string(),
        });
    }
    if family.is_classical() {
        for (which, arg) in [("first", phi), ("second", psi)] {
            if arg.orders().iter().any(|&o| o != 1) {
                return Err(Error::OrderMismatch(format!(
                    "{family} is defined on order-one arguments; {which} argument has orders {:?}",
                    arg.orders()
                )));
            }
        }
    }
    phi.bilinear(psi, |a, b| on_monomials(reading, family, mapping, a, b))
}

fn c(re: i64, im: i64) -> Coefficient {
    Coefficient::from_ints(re, im)
}

fn on_monomials(
    rd: TensorReading,
    family: FamilyId,
    mapping: MappingId,
    a: &TensorMonomial,
    b: &TensorMonomial,
) -> Result<TensorPolynomial> {
    use FamilyId as F;
    use MappingId as M;

    let phi = TensorPolynomial::monomial(a.clone());
    let psi = TensorPolynomial::monomial(b.clone());
    let p = a.order();
    let q = b.order();
    let minus_i = Coefficient::minus_i();
    let i = Coefficient::i();

    let out = match (family, mapping) {
        // φ ̂ D₁ψ − ψ ̂ D₁φ
        (F::NcrsWitt, M::K) => glue(&phi, &d_k(&psi, 1)?).sub(&glue(&psi, &d_k(&phi, 1)?)),

        (F::NcrsRicci, M::Kplus) => rd.tensor(&phi, &psi),
        (F::NcrsRicci, M::Kminus) => rd.tensor(&psi, &phi).neg(),
        (F::NcrsRicci, M::K00) => rd.commutator(&phi, &psi),
        (F::NcrsRicci, M::K0) => d_k(&glue(&phi, &psi), p)?,

        (F::NcrsPoisson, M::Kplus) => rd.tensor(&d_all(&phi, 1), &psi).scale(&minus_i),
        (F::NcrsPoisson, M::Kminus) => rd.tensor(&psi, &d_all(&phi, 1)).scale(&i),
        (F::NcrsPoisson, M::K00) => rd.commutator(&phi, &psi).scale(&minus_i),
        // −i (∂⁻¹)^{⊗ord} D²_{ord φ} (φ ̂ ψ)
        (F::NcrsPoisson, M::K0) => {
            let twice = d_k(&d_k(&glue(&phi, &psi), p)?, p)?;
            d_all(&twice, -1).scale(&minus_i)
        }

        (F::NcrsPoissonTypeV1, M::K0) => d_k(&glue(&phi, &psi), p)?.scale(&minus_i),
        (F::NcrsPoissonTypeV1, M::Kplus) => glue(&phi, &d_k(&psi, 1)?).scale(&minus_i),
        (F::NcrsPoissonTypeV1, M::Kminus) => glue(&psi, &d_k(&phi, 1)?).scale(&i),
        (F::NcrsPoissonTypeV1 | F::NcrsPoissonTypeV2, M::K00) => on_monomials(
            rd,
            family,
            M::Kplus,
            a,
            b,
        )?
        .add(&on_monomials(rd, family, M::Kminus, a, b)?),

        (F::NcrsPoissonTypeV2, M::K0) => {
            let both = d_k(&glue(&phi, &psi), p)?.add(&d_k(&glue(&psi, &phi), q)?);
            both.scale(&(Coefficient::rational(-1, 2) * Coefficient::i()))
        }
        (F::NcrsPoissonTypeV2, M::Kplus) => glue(&d_k(&phi, p)?, &psi).scale(&minus_i),
        (F::NcrsPoissonTypeV2, M::Kminus) => glue(&d_k(&psi, q)?, &phi).scale(&i),

        // Both notations φ·∂^{⊗ord} and ∂^{⊗ord}·φ are ∂ on every factor of φ.
        (F::NcrsIntegral, M::Kplus) => rd
            .tensor(&d_all(&phi, 1), &psi)
            .add(&rd.tensor(&psi, &d_all(&reverse(&phi), 1)))
            .scale(&minus_i),
        (F::NcrsIntegral, M::Kminus) => rd
            .tensor(&d_all(&reverse(&phi), 1), &psi)
            .add(&rd.tensor(&psi, &d_all(&phi, 1)))
            .scale(&i),
        (F::NcrsIntegral, M::K00) => rd.commutator(&phi, &psi).scale(&minus_i),
        (F::NcrsIntegral, M::K0) => d_all(&rd.tensor(&phi, &psi), -1).scale(&minus_i),

        // Classical families live on order one, where gluing is the E-product.
        (F::ClassicalWitt, M::K) => glue(&phi, &d_all(&psi, 1)).sub(&glue(&psi, &d_all(&phi, 1))),

        (F::ClassicalRicciA, M::K00) => TensorPolynomial::zero(),
        (F::ClassicalRicciA, M::Kplus) => glue(&phi, &psi).neg(),
        (F::ClassicalRicciA, M::Kminus) => glue(&phi, &psi),
        (F::ClassicalRicciA, M::K0) => d_last(&glue(&phi, &psi)),

        (F::ClassicalRicciB, M::K00) => TensorPolynomial::zero(),
        (F::ClassicalRicciB, M::K0) => glue(&phi, &psi),
        (F::ClassicalRicciB, M::Kplus) => glue(&phi, &d_all(&psi, 1)).neg(),
        (F::ClassicalRicciB, M::Kminus) => glue(&phi, &d_all(&psi, 1)),

        (F::ClassicalPoisson, M::K00) => TensorPolynomial::zero(),
        (F::ClassicalPoisson, M::Kplus) => glue(&d_all(&phi, 1), &psi).scale(&minus_i),
        (F::ClassicalPoisson, M::Kminus) => glue(&d_all(&phi, 1), &psi).scale(&i),
        (F::ClassicalPoisson, M::K0) => d_last(&glue(&phi, &psi)).scale(&minus_i),
        // i (n ∂ψ·φ − m ∂φ·ψ)
        (F::ClassicalPoisson, M::Knm(n, m)) => glue(&d_all(&psi, 1), &phi)
            .scale(&c(0, n))
            .add(&glue(&d_all(&phi, 1), &psi).scale(&c(0, -m))),

        (family, mapping) => {
            return Err(Error::UnsupportedMapping {
                family: family.to_string(),
                mapping: mapping.to_string(),
            })
        }
    };
    Ok(out)
}

/// One row of a printable mapping table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub mapping: MappingId,
    pub definition: &'static str,
    pub orders: (usize, usize),
    pub value: TensorPolynomial,
}

fn definition(family: FamilyId, m: MappingId) -> &'static str {
    use FamilyId as F;
    use MappingId as M;
    match (family, m) {
        (F::NcrsWitt, M::K) => "phi ^ D_1 psi - psi ^ D_1 phi",
        (F::NcrsRicci, M::Kplus) => "phi # psi",
        (F::NcrsRicci, M::Kminus) => "-psi # phi",
        (F::NcrsRicci, M::K00) => "[phi ,# psi]",
        (F::NcrsRicci, M::K0) => "D_{ord phi}(phi ^ psi)",
        (F::NcrsPoisson, M::Kplus) => "-i d^{#ord} phi # psi",
        (F::NcrsPoisson, M::Kminus) => "i psi # d^{#ord} phi",
        (F::NcrsPoisson, M::K00) => "-i [phi ,# psi]",
        (F::NcrsPoisson, M::K0) => "-i (d^-1)^{#ord} D^2_{ord phi}(phi ^ psi)",
        (F::NcrsPoissonTypeV1, M::K0) => "-i D_{ord phi}(phi ^ psi)",
        (F::NcrsPoissonTypeV1, M::Kplus) => "-i phi ^ D_1 psi",
        (F::NcrsPoissonTypeV1, M::Kminus) => "i psi ^ D_1 phi",
        (F::NcrsPoissonTypeV1, M::K00) => "K+(phi, psi) + K-(phi, psi)",
        (F::NcrsPoissonTypeV2, M::K0) => "-i/2 (D_{ord phi}(phi ^ psi) + D_{ord psi}(psi ^ phi))",
        (F::NcrsPoissonTypeV2, M::Kplus) => "-i (D_{ord phi} phi) ^ psi",
        (F::NcrsPoissonTypeV2, M::Kminus) => "i (D_{ord psi} psi) ^ phi",
        (F::NcrsPoissonTypeV2, M::K00) => "K+(phi, psi) + K-(phi, psi)",
        (F::NcrsIntegral, M::Kplus) => "-i [d^{#ord} phi # psi + psi # d^{#ord} P(phi)]",
        (F::NcrsIntegral, M::Kminus) => "i [d^{#ord} P(phi) # psi + psi # d^{#ord} phi]",
        (F::NcrsIntegral, M::K00) => "-i [phi ,# psi]",
        (F::NcrsIntegral, M::K0) => "-i (d^-1)^{#ord} (phi # psi)",
        (F::ClassicalWitt, M::K) => "phi*d(psi) - psi*d(phi)",
        (F::ClassicalRicciA, M::K00) => "0",
        (F::ClassicalRicciA, M::Kplus) => "-phi*psi",
        (F::ClassicalRicciA, M::Kminus) => "phi*psi",
        (F::ClassicalRicciA, M::K0) => "d(phi*psi)",
        (F::ClassicalRicciB, M::K00) => "0",
        (F::ClassicalRicciB, M::K0) => "phi*psi",
        (F::ClassicalRicciB, M::Kplus) => "-phi*d(psi)",
        (F::ClassicalRicciB, M::Kminus) => "phi*d(psi)",
        (F::ClassicalPoisson, M::K00) => "0",
        (F::ClassicalPoisson, M::Kplus) => "-i d(phi)*psi",
        (F::ClassicalPoisson, M::Kminus) => "i d(phi)*psi",
        (F::ClassicalPoisson, M::K0) => "-i d(phi*psi)",
        (F::ClassicalPoisson, M::Knm(..)) => "i (n d(psi)*phi - m d(phi)*psi)",
        _ => "",
    }
}

/// Mapping definitions of a family together with their values on generic
/// arguments of orders `(p, q)`. Classical families ignore the orders and
/// use `(1, 1)`; classical-poisson also lists `Knm(1,-1)` as a sample of
/// its graded family.
pub fn mapping_table(family: FamilyId, orders: (usize, usize)) -> Result<Vec<TableEntry>> {
    let orders = if family.is_classical() {
        (1, 1)
    } else {
        orders
    };
    let phi = TensorPolynomial::monomial(crate::identity::generic_monomial("phi", orders.0));
    let psi = TensorPolynomial::monomial(crate::identity::generic_monomial("psi", orders.1));
    let mut slots = family.slots();
    if family == FamilyId::ClassicalPoisson {
        slots.push(MappingId::Knm(1, -1));
    }
    slots
        .into_iter()
        .map(|m| {
            Ok(TableEntry {
                mapping: m,
                definition: definition(family, m),
                orders,
                value: apply_mapping(family, m, &phi, &psi)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::EWord;

    fn w(v: &str, c: u32) -> EWord {
        EWord::var(v, c)
    }
    fn mono(ws: &[EWord]) -> TensorPolynomial {
        TensorMonomial::new(ws.to_vec()).into()
    }

    #[test]
    fn ricci_k0_glues_and_differentiates_the_seam() {
        let out = apply_mapping(
            FamilyId::NcrsRicci,
            MappingId::K0,
            &mono(&[w("f", 1), w("f", 2)]),
            &mono(&[w("g", 1)]),
        );
        assert_eq!(
            out.unwrap(),
            mono(&[w("f", 1), w("f", 2).product(&w("g", 1)).derivative(1)])
        );
    }

    #[test]
    fn witt_order_one_is_classical_form() {
        let f = mono(&[w("f", 1)]);
        let g = mono(&[w("g", 1)]);
        let expected = mono(&[w("f", 1).product(&w("g", 1).derivative(1))])
            .sub(&mono(&[w("g", 1).product(&w("f", 1).derivative(1))]));
        assert_eq!(
            apply_mapping(FamilyId::NcrsWitt, MappingId::K, &f, &g).unwrap(),
            expected
        );
    }

    #[test]
    fn witt_order_two_by_one() {
        // Frozen from the direct-substitution expander.
        let f = mono(&[w("f", 1), w("f", 2)]);
        let g = mono(&[w("g", 1)]);
        let expected =
            mono(&[w("f", 1), w("f", 2).product(&w("g", 1).derivative(1))]).sub(&mono(&[
                w("g", 1).product(&w("f", 1).derivative(1)),
                w("f", 2),
            ]));
        assert_eq!(
            apply_mapping(FamilyId::NcrsWitt, MappingId::K, &f, &g).unwrap(),
            expected
        );
    }

    #[test]
    fn poisson_k00_antisymmetric_on_equal_args() {
        let f = mono(&[w("f", 1)]);
        assert!(apply_mapping(FamilyId::NcrsPoisson, MappingId::K00, &f, &f)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn knm_sample() {
        let f = mono(&[w("f", 1)]);
        let g = mono(&[w("g", 1)]);
        let out = apply_mapping(FamilyId::ClassicalPoisson, MappingId::Knm(1, -1), &f, &g).unwrap();
        let expected = mono(&[w("g", 1).derivative(1).product(&w("f", 1))])
            .add(&mono(&[w("f", 1).derivative(1).product(&w("g", 1))]))
            .scale(&Coefficient::i());
        assert_eq!(out, expected);
    }

    #[test]
    fn unsupported_and_order_errors() {
        let f = mono(&[w("f", 1)]);
        let f2 = mono(&[w("f", 1), w("f", 2)]);
        assert!(matches!(
            apply_mapping(FamilyId::NcrsRicci, MappingId::K, &f, &f),
            Err(Error::UnsupportedMapping { .. })
        ));
        assert!(matches!(
            apply_mapping(FamilyId::NcrsPoisson, MappingId::Knm(1, 1), &f, &f),
            Err(Error::UnsupportedMapping { .. })
        ));
        assert!(matches!(
            apply_mapping(FamilyId::ClassicalRicciA, MappingId::K0, &f2, &f),
            Err(Error::OrderMismatch(_))
        ));
    }

    #[test]
    fn table_shapes() {
        assert_eq!(mapping_table(FamilyId::NcrsRicci, (2, 2)).unwrap().len(), 4);
        assert_eq!(mapping_table(FamilyId::NcrsWitt, (2, 2)).unwrap().len(), 1);
        assert_eq!(
            mapping_table(FamilyId::ClassicalWitt, (2, 2))
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn names_round_trip() {
        for f in FamilyId::ALL {
            assert_eq!(f.name().parse::<FamilyId>().unwrap(), f);
        }
        for m in [
            MappingId::K,
            MappingId::K0,
            MappingId::Kplus,
            MappingId::Kminus,
            MappingId::K00,
            MappingId::Knm(2, -1),
        ] {
            assert_eq!(m.to_string().parse::<MappingId>().unwrap(), m);
        }
        assert_eq!("Kplus".parse::<MappingId>().unwrap(), MappingId::Kplus);
    }
}
