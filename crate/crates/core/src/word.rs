//! Words of the free associative algebra E with a formal derivative.
//!
//! A word is a nonempty product of atoms. An atom is either a generator or an
//! opaque parenthesized sub-word, and carries a net integer power of ∂
//! (negative powers are formal antiderivatives). No Leibniz rule is ever
//! applied here: ∂ of a product of two or more atoms is kept as a wrapper.
//!
//! Normal form:
//! * a group never holds exactly one atom (it collapses into that atom and the
//!   powers add);
//! * a group never has power 0 (its atoms splice into the parent word);
//! * atoms are never reordered.

use std::cmp::Ordering;
use std::fmt;

/// A free generator `variable_component`, e.g. `phi2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    variable: String,
    component: u32,
}

impl Generator {
    /// Panics if `component` is 0; components are 1-based.
    pub fn new(variable: impl Into<String>, component: u32) -> Self {
        assert!(component >= 1, "generator components are 1-based");
        Generator {
            variable: variable.into(),
            component,
        }
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn component(&self) -> u32 {
        self.component
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.variable, self.component)
    }
}

/// Generators sort before groups; the declaration order drives the derived
/// `Ord`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomBase {
    Generator(Generator),
    Grouped(EWord),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EAtom {
    base: AtomBase,
    power: i32,
}

impl EAtom {
    pub fn generator(g: Generator, power: i32) -> Self {
        EAtom {
            base: AtomBase::Generator(g),
            power,
        }
    }

    /// An unnormalized group; `EWord::new` cleans it up.
    pub fn raw_group(atoms: Vec<EAtom>, power: i32) -> Self {
        EAtom {
            base: AtomBase::Grouped(EWord { atoms }),
            power,
        }
    }

    pub fn base(&self) -> &AtomBase {
        &self.base
    }

    pub fn power(&self) -> i32 {
        self.power
    }

    pub fn as_generator(&self) -> Option<&Generator> {
        match &self.base {
            AtomBase::Generator(g) => Some(g),
            AtomBase::Grouped(_) => None,
        }
    }

    /// Adds `n` to the power, dissolving a group whose power reaches 0.
    fn shifted(self, n: i32) -> Vec<EAtom> {
        let power = self.power + n;
        match self.base {
            AtomBase::Grouped(inner) if power == 0 => inner.atoms,
            base => vec![EAtom { base, power }],
        }
    }
}

/// The strict total order used for canonical term ordering and for sorting
/// atoms when passing to a commutative product.
pub fn canonical_atom_order(a: &EAtom, b: &EAtom) -> Ordering {
    a.cmp(b)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EWord {
    atoms: Vec<EAtom>,
}

impl EWord {
    /// Normalizes an arbitrary atom tree. Returns `None` if nothing is left.
    pub fn new(atoms: Vec<EAtom>) -> Option<Self> {
        let atoms = normalize_atoms(atoms);
        (!atoms.is_empty()).then_some(EWord { atoms })
    }

    pub fn generator(g: Generator) -> Self {
        EWord {
            atoms: vec![EAtom::generator(g, 0)],
        }
    }

    /// Shorthand for a single underived generator word.
    pub fn var(variable: &str, component: u32) -> Self {
        Self::generator(Generator::new(variable, component))
    }

    pub fn atoms(&self) -> &[EAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_atoms(self) -> Vec<EAtom> {
        self.atoms
    }

    /// The normalized concatenation `self · other`.
    pub fn product(&self, other: &EWord) -> EWord {
        let mut atoms = Vec::with_capacity(self.atoms.len() + other.atoms.len());
        atoms.extend_from_slice(&self.atoms);
        atoms.extend_from_slice(&other.atoms);
        EWord { atoms }
    }

    /// ∂^power applied to the whole word.
    ///
    /// A single atom absorbs the power; a longer word becomes one opaque
    /// group. `power == 0` is the identity.
    pub fn derivative(&self, power: i32) -> EWord {
        if power == 0 {
            return self.clone();
        }
        if self.atoms.len() == 1 {
            return EWord {
                atoms: self.atoms[0].clone().shifted(power),
            };
        }
        EWord {
            atoms: vec![EAtom {
                base: AtomBase::Grouped(self.clone()),
                power,
            }],
        }
    }

    /// Sorts atoms by `canonical_atom_order`, recursing into groups.
    pub fn sorted(&self) -> EWord {
        let mut atoms: Vec<EAtom> = self
            .atoms
            .iter()
            .map(|a| match &a.base {
                AtomBase::Grouped(w) => EAtom {
                    base: AtomBase::Grouped(w.sorted()),
                    power: a.power,
                },
                AtomBase::Generator(_) => a.clone(),
            })
            .collect();
        atoms.sort_by(canonical_atom_order);
        EWord { atoms }
    }

    /// Every generator occurring anywhere in the word.
    pub fn generators(&self) -> Vec<&Generator> {
        let mut out = Vec::new();
        for a in &self.atoms {
            match &a.base {
                AtomBase::Generator(g) => out.push(g),
                AtomBase::Grouped(w) => out.extend(w.generators()),
            }
        }
        out
    }

    /// Applies `f` to every generator, rebuilding (and renormalizing) the word.
    pub fn map_generators(&self, f: &impl Fn(&Generator) -> Generator) -> EWord {
        let atoms = self
            .atoms
            .iter()
            .map(|a| match &a.base {
                AtomBase::Generator(g) => EAtom::generator(f(g), a.power),
                AtomBase::Grouped(w) => EAtom::raw_group(w.map_generators(f).atoms, a.power),
            })
            .collect();
        EWord::new(atoms).expect("renaming keeps the word nonempty")
    }
}

/// `a · b`.
pub fn eword_product(a: &EWord, b: &EWord) -> EWord {
    a.product(b)
}

/// `∂^power w`.
pub fn apply_derivative(w: &EWord, power: i32) -> EWord {
    w.derivative(power)
}

fn normalize_atoms(atoms: Vec<EAtom>) -> Vec<EAtom> {
    let mut out = Vec::with_capacity(atoms.len());
    for atom in atoms {
        match atom.base {
            AtomBase::Generator(_) => out.push(atom),
            AtomBase::Grouped(inner) => {
                let mut inner = normalize_atoms(inner.atoms);
                if inner.is_empty() {
                    continue;
                }
                if atom.power == 0 {
                    out.append(&mut inner);
                } else if inner.len() == 1 {
                    let single = inner.pop().expect("length checked");
                    out.extend(single.shifted(atom.power));
                } else {
                    out.push(EAtom {
                        base: AtomBase::Grouped(EWord { atoms: inner }),
                        power: atom.power,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> EWord {
        EWord::var("f", 1)
    }
    fn g() -> EWord {
        EWord::var("g", 1)
    }
    fn h() -> EWord {
        EWord::var("h", 1)
    }

    #[test]
    fn product_is_free_concatenation() {
        let fg = f().product(&g());
        assert_eq!(fg.len(), 2);
        assert_ne!(fg, g().product(&f()));
        assert_eq!(fg.product(&h()), f().product(&g().product(&h())));
    }

    #[test]
    fn derivative_of_product_is_not_expanded() {
        let w = f().derivative(1).product(&g());
        assert_eq!(w.len(), 2);
        assert_eq!(w.atoms()[0].power(), 1);
        assert_eq!(w.atoms()[1].power(), 0);
    }

    #[test]
    fn inverse_cancels_on_single_atom() {
        assert_eq!(f().derivative(1).derivative(-1), f());
        assert_eq!(f().derivative(0), f());
    }

    #[test]
    fn multi_atom_word_is_wrapped() {
        let w = f().product(&g()).derivative(2);
        assert_eq!(w.len(), 1);
        assert_eq!(w.atoms()[0].power(), 2);
        match w.atoms()[0].base() {
            AtomBase::Grouped(inner) => assert_eq!(inner, &f().product(&g())),
            AtomBase::Generator(_) => panic!("expected a group"),
        }
        assert_eq!(w.derivative(-2), f().product(&g()));
    }

    #[test]
    fn normalization_collapses_and_splices() {
        let gen = |v: &str| EAtom::generator(Generator::new(v, 1), 0);
        // ((f)' ) with a singleton group of power 1 around f, and a power-0
        // group around g·h.
        let raw = vec![
            EAtom::raw_group(vec![gen("f")], 1),
            EAtom::raw_group(vec![gen("g"), gen("h")], 0),
        ];
        let w = EWord::new(raw).unwrap();
        assert_eq!(w, f().derivative(1).product(&g()).product(&h()));
        assert!(EWord::new(vec![EAtom::raw_group(vec![], 3)]).is_none());
    }

    #[test]
    fn atom_order() {
        let a = |v: &str, c: u32, p: i32| EAtom::generator(Generator::new(v, c), p);
        assert_eq!(
            canonical_atom_order(&a("f", 1, 0), &a("f", 2, 0)),
            Ordering::Less
        );
        assert_eq!(
            canonical_atom_order(&a("f", 1, 0), &a("f", 1, 1)),
            Ordering::Less
        );
        let group = f().product(&h()).derivative(1).into_atoms().remove(0);
        assert_eq!(canonical_atom_order(&a("g", 1, 0), &group), Ordering::Less);
    }

    #[test]
    fn sorting_recurses_into_groups() {
        let w = g().product(&f()).derivative(1).product(&h()).product(&f());
        let s = w.sorted();
        assert_eq!(s.atoms()[0], f().into_atoms().remove(0));
        assert_eq!(
            s.atoms()[2],
            f().product(&g()).derivative(1).into_atoms().remove(0)
        );
    }
}
