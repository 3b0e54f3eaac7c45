//! Identity expansion on generic monomials and residual checks.
//!
//! Every mapping is bilinear, so an identity holds on the whole span as soon
//! as its residual vanishes on monomials built from fresh generators.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::catalog::{FamilyId, MappingId, MappingSystem};
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::limits::{commutativize, leibniz_expand};
use crate::tensor::{TensorMonomial, TensorPolynomial};
use crate::word::EWord;

/// `slot1 ⊗ slot2 ⊗ … ⊗ slot_order`. Panics on `order == 0`.
pub fn generic_monomial(slot: &str, order: usize) -> TensorMonomial {
    assert!(order >= 1, "generic monomials have order at least 1");
    TensorMonomial::new((1..=order).map(|c| EWord::var(slot, c as u32)).collect())
}

pub const DEFAULT_MAX_ORDER: usize = 3;
pub const DEFAULT_GRADED_RANGE: i64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    Redjac1,
    Redjac2Plus,
    Redjac2Minus,
    Redjac3,
    Redjac4,
    WittJacobi,
    GradedGk(i64, i64, i64),
    GradedSk(i64, i64),
}

impl IdentityId {
    pub const LOCAL: [IdentityId; 5] = [
        IdentityId::Redjac1,
        IdentityId::Redjac2Plus,
        IdentityId::Redjac2Minus,
        IdentityId::Redjac3,
        IdentityId::Redjac4,
    ];

    /// Number of generic arguments the identity is stated on.
    pub fn arity(self) -> usize {
        match self {
            IdentityId::Redjac1 | IdentityId::GradedSk(..) => 2,
            _ => 3,
        }
    }

    pub fn applies_to(self, sys: &dyn MappingSystem) -> bool {
        match self {
            IdentityId::Redjac1 => true,
            IdentityId::WittJacobi => sys.is_single(),
            IdentityId::GradedGk(..) | IdentityId::GradedSk(..) => sys.is_graded(),
            _ => !sys.is_single(),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityId::Redjac1 => f.write_str("redjac1"),
            IdentityId::Redjac2Plus => f.write_str("redjac2-plus"),
            IdentityId::Redjac2Minus => f.write_str("redjac2-minus"),
            IdentityId::Redjac3 => f.write_str("redjac3"),
            IdentityId::Redjac4 => f.write_str("redjac4"),
            IdentityId::WittJacobi => f.write_str("witt-jacobi"),
            IdentityId::GradedGk(k, m, n) => write!(f, "graded-gk({k},{m},{n})"),
            IdentityId::GradedSk(n, m) => write!(f, "graded-sk({n},{m})"),
        }
    }
}

impl FromStr for IdentityId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let indices = |prefix: &str, count: usize| -> Option<Vec<i64>> {
            let inner = s
                .strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')?;
            let v: Vec<i64> = inner
                .split(',')
                .map(|x| x.trim().parse().ok())
                .collect::<Option<_>>()?;
            (v.len() == count).then_some(v)
        };
        Ok(match s {
            "redjac1" => IdentityId::Redjac1,
            "redjac2-plus" => IdentityId::Redjac2Plus,
            "redjac2-minus" => IdentityId::Redjac2Minus,
            "redjac3" => IdentityId::Redjac3,
            "redjac4" => IdentityId::Redjac4,
            "witt-jacobi" => IdentityId::WittJacobi,
            _ => {
                if let Some(v) = indices("graded-gk", 3) {
                    IdentityId::GradedGk(v[0], v[1], v[2])
                } else if let Some(v) = indices("graded-sk", 2) {
                    IdentityId::GradedSk(v[0], v[1])
                } else {
                    return Err(format!(
                        "unknown identity `{s}` (expected redjac1, redjac2-plus, redjac2-minus, redjac3, \
                         redjac4, witt-jacobi, graded-gk(k,m,n) or graded-sk(n,m))"
                    ));
                }
            }
        })
    }
}

/// Which transforms are applied to a residual before the zero test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Mode {
    commutative: bool,
    leibniz: bool,
}

impl Mode {
    pub const NONCOMMUTATIVE: Mode = Mode {
        commutative: false,
        leibniz: false,
    };
    pub const COMMUTATIVE: Mode = Mode {
        commutative: true,
        leibniz: false,
    };
    pub const LEIBNIZ: Mode = Mode {
        commutative: true,
        leibniz: true,
    };

    /// Leibniz expansion forces the commutative reading.
    pub fn new(commutative: bool, leibniz: bool) -> Self {
        Mode {
            commutative: commutative || leibniz,
            leibniz,
        }
    }

    pub fn commutative(self) -> bool {
        self.commutative
    }

    pub fn leibniz(self) -> bool {
        self.leibniz
    }

    /// The transforms of this mode, as labelled steps.
    pub fn transform_steps(
        self,
        p: &TensorPolynomial,
    ) -> Result<Vec<(&'static str, TensorPolynomial)>> {
        let mut steps = Vec::new();
        if self.commutative {
            let c = commutativize(p);
            if self.leibniz {
                let expanded = commutativize(&leibniz_expand(&c)?);
                steps.push(("commutative product", c));
                steps.push(("Leibniz expansion", expanded));
            } else {
                steps.push(("commutative product", c));
            }
        }
        Ok(steps)
    }

    pub fn transform(self, p: &TensorPolynomial) -> Result<TensorPolynomial> {
        Ok(self
            .transform_steps(p)?
            .pop()
            .map_or_else(|| p.clone(), |(_, q)| q))
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match (self.commutative, self.leibniz) {
            (false, _) => "noncommutative",
            (true, false) => "commutative",
            (true, true) => "commutative+leibniz",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct TermCounts {
    /// Terms summed before any merging, over all subexpressions.
    pub raw: usize,
    /// Terms left after merging like monomials.
    pub merged: usize,
    /// Terms left after the mode transforms.
    pub residual: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub family: String,
    pub identity: IdentityId,
    pub orders: Vec<usize>,
    pub mode: Mode,
    pub residual: TensorPolynomial,
    pub pass: bool,
    pub term_counts: TermCounts,
}

/// One labelled stage of an identity expansion. Terms are kept as a list so
/// that the raw sum can be shown before like terms are merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub label: String,
    pub terms: Vec<(Coefficient, TensorMonomial)>,
}

impl TraceStep {
    fn from_poly(label: impl Into<String>, p: &TensorPolynomial) -> Self {
        TraceStep {
            label: label.into(),
            terms: p.terms().map(|(m, c)| (c.clone(), m.clone())).collect(),
        }
    }

    pub fn polynomial(&self) -> TensorPolynomial {
        TensorPolynomial::from_terms(self.terms.iter().cloned())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTrace {
    pub family: String,
    pub identity: IdentityId,
    pub orders: Vec<usize>,
    pub mode: Mode,
    pub steps: Vec<TraceStep>,
}

impl ProofTrace {
    pub fn residual(&self) -> TensorPolynomial {
        self.steps
            .last()
            .map(TraceStep::polynomial)
            .unwrap_or_default()
    }
}

/// The signed summands of an identity, each a composition of two mappings
/// (one for the two-argument identities).
fn summands(
    sys: &dyn MappingSystem,
    id: IdentityId,
    args: &[TensorPolynomial],
) -> Result<Vec<(String, TensorPolynomial)>> {
    use MappingId as M;
    let k = |m: MappingId, a: &TensorPolynomial, b: &TensorPolynomial| sys.apply(m, a, b);
    let names = ["phi", "psi", "chi"];
    let (phi, psi) = (&args[0], &args[1]);
    let out = match id {
        IdentityId::Redjac1 => {
            let m = if sys.is_single() { M::K } else { M::K00 };
            vec![
                (format!("{m}(phi, psi)"), k(m, phi, psi)?),
                (format!("{m}(psi, phi)"), k(m, psi, phi)?),
            ]
        }
        IdentityId::GradedSk(n, m) => vec![
            (format!("K[{n},{m}](phi, psi)"), k(M::Knm(n, m), phi, psi)?),
            (format!("K[{m},{n}](psi, phi)"), k(M::Knm(m, n), psi, phi)?),
        ],
        _ => {
            let chi = &args[2];
            match id {
                IdentityId::Redjac2Plus | IdentityId::Redjac2Minus => {
                    let s = if id == IdentityId::Redjac2Plus {
                        M::Kplus
                    } else {
                        M::Kminus
                    };
                    vec![
                        (
                            format!("{s}(K00(phi, psi), chi)"),
                            k(s, &k(M::K00, phi, psi)?, chi)?,
                        ),
                        (
                            format!("-{s}(phi, {s}(psi, chi))"),
                            k(s, phi, &k(s, psi, chi)?)?.neg(),
                        ),
                        (
                            format!("{s}(psi, {s}(phi, chi))"),
                            k(s, psi, &k(s, phi, chi)?)?,
                        ),
                    ]
                }
                IdentityId::Redjac3 => vec![
                    (
                        "K00(psi, K0(phi, chi))".into(),
                        k(M::K00, psi, &k(M::K0, phi, chi)?)?,
                    ),
                    (
                        "-K0(K+(psi, phi), chi)".into(),
                        k(M::K0, &k(M::Kplus, psi, phi)?, chi)?.neg(),
                    ),
                    (
                        "-K0(phi, K-(psi, chi))".into(),
                        k(M::K0, phi, &k(M::Kminus, psi, chi)?)?.neg(),
                    ),
                ],
                IdentityId::Redjac4 | IdentityId::WittJacobi => {
                    let m = if id == IdentityId::WittJacobi {
                        M::K
                    } else {
                        M::K00
                    };
                    (0..3)
                        .map(|i| {
                            let (a, b, c) = (i, (i + 1) % 3, (i + 2) % 3);
                            let label =
                                format!("{m}({}, {m}({}, {}))", names[a], names[b], names[c]);
                            Ok((label, k(m, &args[a], &k(m, &args[b], &args[c])?)?))
                        })
                        .collect::<Result<Vec<_>>>()?
                }
                IdentityId::GradedGk(kk, mm, nn) => {
                    let idx = [kk, mm, nn];
                    (0..3)
                        .map(|i| {
                            let (a, b, c) = (i, (i + 1) % 3, (i + 2) % 3);
                            let inner = M::Knm(idx[b], idx[c]);
                            let outer = M::Knm(idx[a], idx[b] + idx[c]);
                            let label = format!(
                                "K[{},{}]({}, K[{},{}]({}, {}))",
                                idx[a],
                                idx[b] + idx[c],
                                names[a],
                                idx[b],
                                idx[c],
                                names[b],
                                names[c]
                            );
                            Ok((label, k(outer, &args[a], &k(inner, &args[b], &args[c])?)?))
                        })
                        .collect::<Result<Vec<_>>>()?
                }
                IdentityId::Redjac1 | IdentityId::GradedSk(..) => unreachable!(),
            }
        }
    };
    Ok(out)
}

/// Checks applicability and orders, returning the truncated order list and
/// the generic arguments.
fn prepare(
    sys: &dyn MappingSystem,
    id: IdentityId,
    orders: &[usize],
) -> Result<(Vec<usize>, Vec<TensorPolynomial>)> {
    if !id.applies_to(sys) {
        return Err(Error::NotApplicable {
            identity: id.to_string(),
            target: sys.label(),
        });
    }
    let arity = id.arity();
    if orders.len() < arity {
        return Err(Error::OrderMismatch(format!(
            "{id} needs {arity} orders, got {}",
            orders.len()
        )));
    }
    let orders = orders[..arity].to_vec();
    if orders.contains(&0) {
        return Err(Error::OrderMismatch("orders are positive".into()));
    }
    if let Some(max) = sys.max_argument_order() {
        if orders.iter().any(|&o| o > max) {
            return Err(Error::OrderMismatch(format!(
                "{} takes arguments of order at most {max}",
                sys.label()
            )));
        }
    }
    let args = ["phi", "psi", "chi"]
        .iter()
        .zip(&orders)
        .map(|(slot, &o)| TensorPolynomial::monomial(generic_monomial(slot, o)))
        .collect();
    Ok((orders, args))
}

pub fn residual(
    family: FamilyId,
    identity: IdentityId,
    orders: &[usize],
    mode: Mode,
) -> Result<Report> {
    residual_with(&family, identity, orders, mode)
}

pub fn residual_with(
    sys: &dyn MappingSystem,
    identity: IdentityId,
    orders: &[usize],
    mode: Mode,
) -> Result<Report> {
    let trace = trace_with(sys, identity, orders, mode)?;
    let raw = trace
        .steps
        .iter()
        .find(|s| s.label == "sum")
        .map_or(0, |s| s.terms.len());
    let merged = trace
        .steps
        .iter()
        .find(|s| s.label == "normal form")
        .map_or(0, |s| s.terms.len());
    let residual = trace.residual();
    Ok(Report {
        family: trace.family,
        identity,
        orders: trace.orders,
        mode,
        pass: residual.is_zero(),
        term_counts: TermCounts {
            raw,
            merged,
            residual: residual.len(),
        },
        residual,
    })
}

pub fn trace_identity(
    family: FamilyId,
    identity: IdentityId,
    orders: &[usize],
    mode: Mode,
) -> Result<ProofTrace> {
    trace_with(&family, identity, orders, mode)
}

/// Steps: each summand, the unmerged sum, its normal form, then one step per
/// mode transform. The last step is the residual.
pub fn trace_with(
    sys: &dyn MappingSystem,
    identity: IdentityId,
    orders: &[usize],
    mode: Mode,
) -> Result<ProofTrace> {
    let (orders, args) = prepare(sys, identity, orders)?;
    let parts = summands(sys, identity, &args)?;
    let mut steps: Vec<TraceStep> = parts
        .iter()
        .map(|(l, p)| TraceStep::from_poly(l.clone(), p))
        .collect();
    let raw: Vec<_> = steps.iter().flat_map(|s| s.terms.iter().cloned()).collect();
    steps.push(TraceStep {
        label: "sum".into(),
        terms: raw,
    });
    let merged = parts
        .iter()
        .fold(TensorPolynomial::zero(), |acc, (_, p)| acc.add(p));
    let transformed = mode.transform_steps(&merged)?;
    steps.push(TraceStep::from_poly("normal form", &merged));
    steps.extend(transformed.iter().map(|(l, p)| TraceStep::from_poly(*l, p)));
    Ok(ProofTrace {
        family: sys.label(),
        identity,
        orders,
        mode,
        steps,
    })
}

/// Residual of the graded Jacobi sum of classical-poisson at `(k, m, n)`.
pub fn graded_jacobi_residual(k: i64, m: i64, n: i64, mode: Mode) -> Result<Report> {
    if !mode.commutative() {
        return Err(Error::NotApplicable {
            identity: IdentityId::GradedGk(k, m, n).to_string(),
            target: "noncommutative mode".into(),
        });
    }
    residual(
        FamilyId::ClassicalPoisson,
        IdentityId::GradedGk(k, m, n),
        &[1, 1, 1],
        mode,
    )
}

/// The identities a suite runs on `sys`, in report order.
pub fn suite_identities(sys: &dyn MappingSystem, mode: Mode) -> Vec<IdentityId> {
    let mut ids = if sys.is_single() {
        vec![IdentityId::Redjac1, IdentityId::WittJacobi]
    } else {
        IdentityId::LOCAL.to_vec()
    };
    if sys.is_graded() && mode.commutative() {
        let r = DEFAULT_GRADED_RANGE;
        for k in -r..=r {
            for m in -r..=r {
                ids.push(IdentityId::GradedSk(k, m));
            }
        }
        for k in -r..=r {
            for m in -r..=r {
                for n in -r..=r {
                    ids.push(IdentityId::GradedGk(k, m, n));
                }
            }
        }
    }
    ids
}

/// Every `(identity, orders)` case of a suite, in report order: identities
/// first, then order tuples lexicographically.
pub fn suite_cases(
    sys: &dyn MappingSystem,
    max_order: usize,
    mode: Mode,
) -> Vec<(IdentityId, Vec<usize>)> {
    let top = sys
        .max_argument_order()
        .map_or(max_order, |m| m.min(max_order))
        .max(1);
    let mut cases = Vec::new();
    for id in suite_identities(sys, mode) {
        let mut tuple = vec![1; id.arity()];
        loop {
            cases.push((id, tuple.clone()));
            let Some(pos) = tuple.iter().rposition(|&o| o < top) else {
                break;
            };
            tuple[pos] += 1;
            for o in &mut tuple[pos + 1..] {
                *o = 1;
            }
        }
    }
    cases
}

pub fn check_suite(family: FamilyId, max_order: usize, mode: Mode) -> Result<Vec<Report>> {
    check_suite_with(&family, max_order, mode)
}

pub fn check_suite_with(
    sys: &dyn MappingSystem,
    max_order: usize,
    mode: Mode,
) -> Result<Vec<Report>> {
    suite_cases(sys, max_order, mode)
        .into_iter()
        .map(|(id, orders)| residual_with(sys, id, &orders, mode))
        .collect()
}
