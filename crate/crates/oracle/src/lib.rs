//! Direct-substitution expander.
//!
//! Deliberately naive: every mapping is written out from its defining formula
//! on explicit factor lists, sums are kept as unmerged term lists until the
//! very end, and the only simplifications applied are associative flattening
//! and net derivative-power bookkeeping (plus sorting / product-rule expansion
//! when asked for a commutative or Leibniz reading). Shares no code with
//! `ncrs-core`; tests use it to cross-check residuals and closed forms.

use std::collections::BTreeMap;

use num_rational::Ratio;

pub type Q = Ratio<i64>;

/// Gaussian rational as a plain pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct C(pub Q, pub Q);

impl C {
    pub fn re(n: i64) -> C {
        C(Q::from_integer(n), Q::from_integer(0))
    }
    pub fn im(n: i64) -> C {
        C(Q::from_integer(0), Q::from_integer(n))
    }
    pub fn frac_im(n: i64, d: i64) -> C {
        C(Q::from_integer(0), Q::new(n, d))
    }
    pub fn times(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    pub fn sum(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    pub fn is_zero(self) -> bool {
        self.0 == Q::from_integer(0) && self.1 == Q::from_integer(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Sym { name: String, index: u32, d: i32 },
    Paren { body: Vec<Atom>, d: i32 },
}

pub type Word = Vec<Atom>;
pub type Mono = Vec<Word>;
/// Unmerged linear combination.
pub type Terms = Vec<(C, Mono)>;
/// Merged form used for comparisons.
pub type Merged = BTreeMap<Mono, C>;

pub fn sym(name: &str, index: u32) -> Word {
    vec![Atom::Sym {
        name: name.to_string(),
        index,
        d: 0,
    }]
}

pub fn generic(name: &str, order: usize) -> Terms {
    let mono: Mono = (1..=order as u32).map(|j| sym(name, j)).collect();
    vec![(C::re(1), mono)]
}

fn bump(atom: Atom, n: i32) -> Word {
    match atom {
        Atom::Sym { name, index, d } => vec![Atom::Sym {
            name,
            index,
            d: d + n,
        }],
        Atom::Paren { body, d } => {
            if d + n == 0 {
                body
            } else {
                vec![Atom::Paren { body, d: d + n }]
            }
        }
    }
}

pub fn deriv(word: &Word, n: i32) -> Word {
    if n == 0 {
        return word.clone();
    }
    if word.len() == 1 {
        return bump(word[0].clone(), n);
    }
    vec![Atom::Paren {
        body: word.clone(),
        d: n,
    }]
}

fn cat(a: &Word, b: &Word) -> Word {
    let mut w = a.clone();
    w.extend(b.iter().cloned());
    w
}

// --- monomial-level operators -------------------------------------------

fn m_glue(a: &Mono, b: &Mono) -> Mono {
    let mut out: Mono = a[..a.len() - 1].to_vec();
    out.push(cat(&a[a.len() - 1], &b[0]));
    out.extend(b[1..].iter().cloned());
    out
}

fn m_tensor(a: &Mono, b: &Mono) -> Mono {
    let mut out = a.clone();
    out.extend(b.iter().cloned());
    out
}

fn m_dk(a: &Mono, k: usize, times: i32) -> Mono {
    let mut out = a.clone();
    out[k - 1] = deriv(&a[k - 1], times);
    out
}

fn m_dall(a: &Mono, p: i32) -> Mono {
    a.iter().map(|w| deriv(w, p)).collect()
}

fn m_rev(a: &Mono) -> Mono {
    a.iter().rev().cloned().collect()
}

// --- term-list helpers ---------------------------------------------------

fn scale(c: C, t: Terms) -> Terms {
    t.into_iter().map(|(k, m)| (c.times(k), m)).collect()
}

fn plus(mut a: Terms, b: Terms) -> Terms {
    a.extend(b);
    a
}

fn minus(a: Terms, b: Terms) -> Terms {
    plus(a, scale(C::re(-1), b))
}

fn lift1(a: &Terms, f: impl Fn(&Mono) -> Mono) -> Terms {
    a.iter().map(|(c, m)| (*c, f(m))).collect()
}

/// Evaluates one mapping slot of a family on two single monomials.
///
/// With `collapse` set, every tensor product in the defining formula is read
/// as the product in E (the order-one commutative-limit reading).
fn slot_on_monos(family: &str, slot: &str, f: &Mono, g: &Mono, collapse: bool) -> Terms {
    let one = |m: Mono| -> Terms { vec![(C::re(1), m)] };
    let tens = |a: &Mono, b: &Mono| {
        if collapse {
            m_glue(a, b)
        } else {
            m_tensor(a, b)
        }
    };
    let p = f.len();
    let q = g.len();
    match (family, slot) {
        ("ncrs-witt", "K") => minus(
            one(m_glue(f, &m_dk(g, 1, 1))),
            one(m_glue(g, &m_dk(f, 1, 1))),
        ),

        ("ncrs-ricci", "K+") => one(tens(f, g)),
        ("ncrs-ricci", "K-") => scale(C::re(-1), one(tens(g, f))),
        ("ncrs-ricci", "K00") => minus(one(tens(f, g)), one(tens(g, f))),
        ("ncrs-ricci", "K0") => one(m_dk(&m_glue(f, g), p, 1)),

        ("ncrs-poisson", "K+") => scale(C::im(-1), one(tens(&m_dall(f, 1), g))),
        ("ncrs-poisson", "K-") => scale(C::im(1), one(tens(g, &m_dall(f, 1)))),
        ("ncrs-poisson", "K00") => scale(C::im(-1), minus(one(tens(f, g)), one(tens(g, f)))),
        ("ncrs-poisson", "K0") => {
            // D_p applied twice, then a factorwise antiderivative.
            let twice = m_dk(&m_dk(&m_glue(f, g), p, 1), p, 1);
            scale(C::im(-1), one(m_dall(&twice, -1)))
        }

        ("ncrs-poisson-type-v1", "K0") => scale(C::im(-1), one(m_dk(&m_glue(f, g), p, 1))),
        ("ncrs-poisson-type-v1", "K+") => scale(C::im(-1), one(m_glue(f, &m_dk(g, 1, 1)))),
        ("ncrs-poisson-type-v1", "K-") => scale(C::im(1), one(m_glue(g, &m_dk(f, 1, 1)))),
        ("ncrs-poisson-type-v1", "K00") => plus(
            slot_on_monos(family, "K+", f, g, collapse),
            slot_on_monos(family, "K-", f, g, collapse),
        ),

        ("ncrs-poisson-type-v2", "K0") => scale(
            C::frac_im(-1, 2),
            plus(
                one(m_dk(&m_glue(f, g), p, 1)),
                one(m_dk(&m_glue(g, f), q, 1)),
            ),
        ),
        ("ncrs-poisson-type-v2", "K+") => scale(C::im(-1), one(m_glue(&m_dk(f, p, 1), g))),
        ("ncrs-poisson-type-v2", "K-") => scale(C::im(1), one(m_glue(&m_dk(g, q, 1), f))),
        ("ncrs-poisson-type-v2", "K00") => plus(
            slot_on_monos(family, "K+", f, g, collapse),
            slot_on_monos(family, "K-", f, g, collapse),
        ),

        ("ncrs-integral", "K+") => scale(
            C::im(-1),
            plus(
                one(tens(&m_dall(f, 1), g)),
                one(tens(g, &m_dall(&m_rev(f), 1))),
            ),
        ),
        ("ncrs-integral", "K-") => scale(
            C::im(1),
            plus(
                one(tens(&m_dall(&m_rev(f), 1), g)),
                one(tens(g, &m_dall(f, 1))),
            ),
        ),
        ("ncrs-integral", "K00") => scale(C::im(-1), minus(one(tens(f, g)), one(tens(g, f)))),
        ("ncrs-integral", "K0") => scale(C::im(-1), one(m_dall(&tens(f, g), -1))),

        // Classical families: order-one arguments, E-product only.
        ("classical-witt", "K") => minus(
            one(vec![cat(&f[0], &deriv(&g[0], 1))]),
            one(vec![cat(&g[0], &deriv(&f[0], 1))]),
        ),
        ("classical-ricci-a", "K00") => vec![],
        ("classical-ricci-a", "K+") => scale(C::re(-1), one(vec![cat(&f[0], &g[0])])),
        ("classical-ricci-a", "K-") => one(vec![cat(&f[0], &g[0])]),
        ("classical-ricci-a", "K0") => one(vec![deriv(&cat(&f[0], &g[0]), 1)]),
        ("classical-ricci-b", "K00") => vec![],
        ("classical-ricci-b", "K0") => one(vec![cat(&f[0], &g[0])]),
        ("classical-ricci-b", "K+") => scale(C::re(-1), one(vec![cat(&f[0], &deriv(&g[0], 1))])),
        ("classical-ricci-b", "K-") => one(vec![cat(&f[0], &deriv(&g[0], 1))]),
        ("classical-poisson", "K00") => vec![],
        ("classical-poisson", "K+") => scale(C::im(-1), one(vec![cat(&deriv(&f[0], 1), &g[0])])),
        ("classical-poisson", "K-") => scale(C::im(1), one(vec![cat(&deriv(&f[0], 1), &g[0])])),
        ("classical-poisson", "K0") => scale(C::im(-1), one(vec![deriv(&cat(&f[0], &g[0]), 1)])),
        _ => panic!("oracle: no slot {slot} in {family}"),
    }
}

/// `K_{n,m}(f, g) = i (n ∂g·f − m ∂f·g)` on order-one monomials.
fn knm_on_monos(n: i64, m: i64, f: &Mono, g: &Mono) -> Terms {
    let a = vec![(C::im(n), vec![cat(&deriv(&g[0], 1), &f[0])])];
    let b = vec![(C::im(-m), vec![cat(&deriv(&f[0], 1), &g[0])])];
    plus(a, b)
}

/// Bilinear extension of one slot.
pub fn apply(family: &str, slot: &str, a: &Terms, b: &Terms) -> Terms {
    apply_with(family, slot, a, b, false)
}

pub fn apply_with(family: &str, slot: &str, a: &Terms, b: &Terms, collapse: bool) -> Terms {
    let mut out = Vec::new();
    for (c1, m1) in a {
        for (c2, m2) in b {
            out.extend(scale(
                c1.times(*c2),
                slot_on_monos(family, slot, m1, m2, collapse),
            ));
        }
    }
    out
}

pub fn apply_knm(n: i64, m: i64, a: &Terms, b: &Terms) -> Terms {
    let mut out = Vec::new();
    for (c1, m1) in a {
        for (c2, m2) in b {
            out.extend(scale(c1.times(*c2), knm_on_monos(n, m, m1, m2)));
        }
    }
    out
}

// --- commutative and Leibniz readings -----------------------------------

fn sort_word(w: &Word) -> Word {
    let mut v: Word = w
        .iter()
        .map(|a| match a {
            Atom::Paren { body, d } => Atom::Paren {
                body: sort_word(body),
                d: *d,
            },
            s => s.clone(),
        })
        .collect();
    v.sort();
    v
}

pub fn commutative(t: &Terms) -> Terms {
    lift1(t, |m| m.iter().map(sort_word).collect())
}

/// Product rule, one derivative at a time, on a word of plain symbols.
fn product_rule_once(w: &Word) -> Vec<Word> {
    (0..w.len())
        .map(|i| {
            let mut v = w.clone();
            if let Atom::Sym { d, .. } = &mut v[i] {
                *d += 1;
            }
            v
        })
        .collect()
}

fn leibniz_word(w: &Word) -> Result<Vec<(i64, Word)>, String> {
    let mut acc: Vec<(i64, Word)> = vec![(1, vec![])];
    for atom in w {
        let pieces: Vec<(i64, Word)> = match atom {
            Atom::Sym { .. } => vec![(1, vec![atom.clone()])],
            Atom::Paren { body, d } => {
                if *d < 0 {
                    return Err("antiderivative of a product".into());
                }
                let mut cur = leibniz_word(body)?;
                for _ in 0..*d {
                    let mut next = Vec::new();
                    for (c, v) in &cur {
                        for v2 in product_rule_once(v) {
                            next.push((*c, v2));
                        }
                    }
                    cur = next;
                }
                cur
            }
        };
        let mut next = Vec::new();
        for (c1, v1) in &acc {
            for (c2, v2) in &pieces {
                next.push((c1 * c2, cat(v1, v2)));
            }
        }
        acc = next;
    }
    Ok(acc)
}

pub fn leibniz(t: &Terms) -> Result<Terms, String> {
    let mut out = Vec::new();
    for (c, m) in t {
        let mut acc: Vec<(i64, Mono)> = vec![(1, vec![])];
        for w in m {
            let exp = leibniz_word(w)?;
            let mut next = Vec::new();
            for (c1, m1) in &acc {
                for (c2, w2) in &exp {
                    let mut mm = m1.clone();
                    mm.push(w2.clone());
                    next.push((c1 * c2, mm));
                }
            }
            acc = next;
        }
        for (k, mm) in acc {
            out.push((c.times(C::re(k)), mm));
        }
    }
    Ok(out)
}

pub fn merge(t: &Terms) -> Merged {
    let mut map: Merged = BTreeMap::new();
    for (c, m) in t {
        let e = map.entry(m.clone()).or_insert(C::re(0));
        *e = e.sum(*c);
    }
    map.retain(|_, c| !c.is_zero());
    map
}

// --- identities ----------------------------------------------------------

/// `redjac1`, `redjac2-plus`, `redjac2-minus`, `redjac3`, `redjac4`,
/// `witt-jacobi`, `graded-gk(k,m,n)` or `graded-sk(n,m)`.
#[derive(Clone, Debug)]
pub enum Ident {
    Named(String),
    Gk(i64, i64, i64),
    Sk(i64, i64),
}

/// LHS − RHS of an identity, expanded literally. Unmerged.
pub fn expand_identity(family: &str, ident: &Ident, orders: &[usize]) -> Terms {
    let f = generic("phi", orders[0]);
    let g = generic("psi", orders[1]);
    let h = if orders.len() > 2 {
        generic("chi", orders[2])
    } else {
        vec![]
    };
    let single = family.ends_with("witt");
    let k00 = if single { "K" } else { "K00" };
    let ap = |s: &str, a: &Terms, b: &Terms| apply(family, s, a, b);
    match ident {
        Ident::Named(name) => match name.as_str() {
            "redjac1" => plus(ap(k00, &f, &g), ap(k00, &g, &f)),
            "redjac2-plus" | "redjac2-minus" => {
                let s = if name == "redjac2-plus" { "K+" } else { "K-" };
                let lhs = ap(s, &ap(k00, &f, &g), &h);
                let r1 = ap(s, &f, &ap(s, &g, &h));
                let r2 = ap(s, &g, &ap(s, &f, &h));
                plus(minus(lhs, r1), r2)
            }
            "redjac3" => {
                let lhs = ap(k00, &g, &ap("K0", &f, &h));
                let r1 = ap("K0", &ap("K+", &g, &f), &h);
                let r2 = ap("K0", &f, &ap("K-", &g, &h));
                minus(minus(lhs, r1), r2)
            }
            "redjac4" | "witt-jacobi" => {
                let a = ap(k00, &f, &ap(k00, &g, &h));
                let b = ap(k00, &g, &ap(k00, &h, &f));
                let c = ap(k00, &h, &ap(k00, &f, &g));
                plus(plus(a, b), c)
            }
            other => panic!("oracle: unknown identity {other}"),
        },
        Ident::Gk(k, m, n) => {
            let (k, m, n) = (*k, *m, *n);
            let a = apply_knm(k, m + n, &f, &apply_knm(m, n, &g, &h));
            let b = apply_knm(m, n + k, &g, &apply_knm(n, k, &h, &f));
            let c = apply_knm(n, k + m, &h, &apply_knm(k, m, &f, &g));
            plus(plus(a, b), c)
        }
        Ident::Sk(n, m) => plus(apply_knm(*n, *m, &f, &g), apply_knm(*m, *n, &g, &f)),
    }
}

/// Merged residual under the requested reading.
pub fn residual(
    family: &str,
    ident: &Ident,
    orders: &[usize],
    commutative_mode: bool,
    leibniz_mode: bool,
) -> Result<Merged, String> {
    let mut t = expand_identity(family, ident, orders);
    if leibniz_mode {
        t = leibniz(&t)?;
    }
    if commutative_mode || leibniz_mode {
        t = commutative(&t);
    }
    Ok(merge(&t))
}

/// Order-one commutative limit of one slot, evaluated on `phi1`, `psi1`.
pub fn order_one_limit(family: &str, slot: &str) -> Merged {
    let t = apply_with(family, slot, &generic("phi", 1), &generic("psi", 1), true);
    merge(&commutative(&t))
}

/// Canonical merged form of an arbitrary term list (commutative reading).
pub fn commutative_merged(t: &Terms) -> Merged {
    merge(&commutative(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ricci_k0_on_order_two_by_one() {
        let f = generic("f", 2);
        let g = generic("g", 1);
        let out = merge(&apply("ncrs-ricci", "K0", &f, &g));
        let expected: Mono = vec![
            sym("f", 1),
            vec![Atom::Paren {
                body: cat(&sym("f", 2), &sym("g", 1)),
                d: 1,
            }],
        ];
        assert_eq!(out.len(), 1);
        assert_eq!(out[&expected], C::re(1));
    }

    #[test]
    fn leibniz_binomial() {
        let fg = cat(&sym("f", 1), &sym("g", 1));
        let t: Terms = vec![(C::re(1), vec![deriv(&fg, 2)])];
        let m = merge(&leibniz(&t).unwrap());
        assert_eq!(m.len(), 3);
        assert!(m.values().any(|c| *c == C::re(2)));
    }

    #[test]
    fn inverse_cancels() {
        let fg = cat(&sym("f", 1), &sym("g", 1));
        assert_eq!(deriv(&deriv(&fg, 1), -1), fg);
    }
}
