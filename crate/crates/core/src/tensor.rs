//! Finite linear combinations of monomial tuples: elements of tensor powers
//! and of the chain/cochain spaces built on them.

use std::collections::BTreeMap;
use std::fmt;

use crate::monomial::Monomial;
use crate::ncalg::{AlgElement, Algebra};
use crate::scalar::Scalar;

/// A tuple of normal-form monomials; one term of a tensor element.
pub type TensorTuple = Vec<Monomial>;

/// Element of `A_1 (x) ... (x) A_n`: tuples of normal-form monomials with
/// exact coefficients and no zero terms.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    arity: usize,
    terms: BTreeMap<TensorTuple, Scalar>,
}

impl TensorElement {
    pub fn zero(arity: usize) -> Self {
        TensorElement {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_tuple(c: Scalar, t: TensorTuple) -> Self {
        let mut e = TensorElement::zero(t.len());
        e.add_term(c, t);
        e
    }

    /// The empty tuple with coefficient `c`: an element of the degree-zero
    /// component `k`.
    pub fn scalar(c: Scalar) -> Self {
        TensorElement::from_tuple(c, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, c: Scalar, t: TensorTuple) {
        debug_assert_eq!(t.len(), self.arity, "tuple arity mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TensorTuple, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &TensorTuple) -> Scalar {
        self.terms.get(t).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, rhs: &TensorElement) -> TensorElement {
        debug_assert_eq!(self.arity, rhs.arity);
        let mut out = self.clone();
        for (t, c) in rhs.iter() {
            out.add_term(c.clone(), t.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &TensorElement) -> TensorElement {
        debug_assert_eq!(self.arity, rhs.arity);
        let mut out = self.clone();
        for (t, c) in rhs.iter() {
            out.add_term(-c, t.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        let mut out = TensorElement::zero(self.arity);
        if c.is_zero() {
            return out;
        }
        for (t, a) in self.iter() {
            out.add_term(a * c, t.clone());
        }
        out
    }

    pub fn conj_coeffs(&self) -> TensorElement {
        let mut out = TensorElement::zero(self.arity);
        for (t, a) in self.iter() {
            out.add_term(a.conj(), t.clone());
        }
        out
    }

    /// Apply a tuple-level linear map, summing the images of every term.
    pub fn map_tuples<F>(&self, out_arity: usize, mut f: F) -> TensorElement
    where
        F: FnMut(&TensorTuple) -> TensorElement,
    {
        let mut out = TensorElement::zero(out_arity);
        for (t, c) in self.iter() {
            let img = f(t);
            debug_assert_eq!(img.arity, out_arity);
            for (it, ic) in img.iter() {
                out.add_term(ic * c, it.clone());
            }
        }
        out
    }

    /// Tensor product: concatenates tuples legwise.
    pub fn tensor(&self, rhs: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero(self.arity + rhs.arity);
        for (t1, c1) in self.iter() {
            for (t2, c2) in rhs.iter() {
                let mut t = t1.clone();
                t.extend(t2.iter().cloned());
                out.add_term(c1 * c2, t);
            }
        }
        out
    }

    /// View a one-leg element as an algebra element.
    pub fn as_algebra_element(&self) -> AlgElement {
        assert_eq!(self.arity, 1, "expected a single-leg tensor");
        let mut out = AlgElement::zero();
        for (t, c) in self.iter() {
            out.add_term(c.clone(), t[0].clone());
        }
        out
    }

    pub fn from_algebra_element(x: &AlgElement) -> TensorElement {
        let mut out = TensorElement::zero(1);
        for (m, c) in x.iter() {
            out.add_term(c.clone(), vec![m.clone()]);
        }
        out
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:?})*", c)?;
            if t.is_empty() {
                write!(f, "()")?;
            }
            for (k, m) in t.iter().enumerate() {
                if k > 0 {
                    write!(f, "(x)")?;
                }
                write!(f, "{:?}", m)?;
            }
        }
        Ok(())
    }
}

/// Render a tensor element with named generators: `c*(m1)(x)(m2)`.
pub fn render_tensor(algebra: &Algebra, x: &TensorElement) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (t, c)) in x.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        if !c.is_one() || t.is_empty() {
            let cs = c.to_string();
            if cs.contains(' ') {
                out.push_str(&format!("({})", cs));
            } else {
                out.push_str(&cs);
            }
            if !t.is_empty() {
                out.push('*');
            }
        }
        for (k, m) in t.iter().enumerate() {
            if k > 0 {
                out.push_str("(x)");
            }
            out.push('(');
            out.push_str(&algebra.render_monomial(m));
            out.push(')');
        }
    }
    out
}

/// Multiply a tuple's legs out in a single algebra (used by traces and
/// characteristic maps).
pub fn multiply_legs(algebra: &Algebra, t: &TensorTuple) -> AlgElement {
    let mut acc = AlgElement::one();
    for m in t {
        acc = algebra.mul(&acc, &AlgElement::from_term(Scalar::one(), m.clone()));
    }
    acc
}

/// Normalize every leg of a tensor element in the given per-leg algebras.
/// All legs of leg index `i` normalize in `algebras[i]`.
pub fn normalize_legs(algebras: &[&Algebra], x: &TensorElement) -> TensorElement {
    x.map_tuples(x.arity(), |t| {
        let mut acc = TensorElement::scalar(Scalar::one());
        for (i, m) in t.iter().enumerate() {
            let nf = algebras[i].normalize_word(m);
            let leg = TensorElement::from_algebra_element(&nf);
            acc = acc.tensor(&leg);
        }
        acc
    })
}
