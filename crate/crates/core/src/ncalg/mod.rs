//! Presented noncommutative *-algebras with rewriting to normal form.
//!
//! A [`Presentation`] lists named generators (optionally invertible), a set
//! of oriented rewrite rules `leading word -> replacement`, a star map on
//! generators, and per-generator weights. [`Algebra`] wraps a validated
//! presentation together with a memoized normalization engine; elements are
//! finite linear combinations of normal-form monomials with [`Scalar`]
//! coefficients.

mod parser;
mod rewrite;

pub use parser::{parse_presentation, ParsedHopfData};
pub use rewrite::{ConfluenceReport, Rule};

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use rand::Rng;

use crate::error::Error;
use crate::monomial::{GenId, Monomial};
use crate::scalar::Scalar;

/// Declared data of one generator.
#[derive(Clone, Debug)]
pub struct GeneratorInfo {
    pub name: String,
    /// Invertible generators admit arbitrary integer exponents.
    pub invertible: bool,
    /// Weight used by the rule-orientation (termination) order.
    pub term_weight: u64,
    /// Weight used by the truncation filtration.
    pub filt_weight: u64,
    /// Largest exponent occurring in a normal form, when finite.
    pub max_exp: Option<u32>,
}

/// A presented algebra: generators, oriented rules, star data, grading.
pub struct Presentation {
    pub name: String,
    pub gens: Vec<GeneratorInfo>,
    pub rules: Vec<Rule>,
    /// `star[g] = (c, m)` meaning `g* = c * m`; extended anti-multiplicatively
    /// and conjugate-linearly.
    pub star: Option<Vec<(Scalar, Monomial)>>,
    /// Integer weight vectors, when declared (`grade` sections).
    pub grading: Vec<Vec<i64>>,
    pub confluence: ConfluenceReport,
}

/// Finite linear combination of normal-form monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgElement {
    terms: std::collections::BTreeMap<Monomial, Scalar>,
}

impl AlgElement {
    pub fn zero() -> Self {
        AlgElement::default()
    }

    pub fn one() -> Self {
        AlgElement::from_term(Scalar::one(), Monomial::one())
    }

    pub fn from_term(c: Scalar, m: Monomial) -> Self {
        let mut e = AlgElement::default();
        e.add_term(c, m);
        e
    }

    pub fn from_gen(g: GenId) -> Self {
        AlgElement::from_term(Scalar::one(), Monomial::gen(g))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, c: Scalar, m: Monomial) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add(&self, rhs: &AlgElement) -> AlgElement {
        let mut out = self.clone();
        for (m, c) in rhs.iter() {
            out.add_term(c.clone(), m.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &AlgElement) -> AlgElement {
        let mut out = self.clone();
        for (m, c) in rhs.iter() {
            out.add_term(-c, m.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> AlgElement {
        if c.is_zero() {
            return AlgElement::zero();
        }
        let mut out = AlgElement::default();
        for (m, a) in self.iter() {
            out.add_term(a * c, m.clone());
        }
        out
    }

    pub fn conj_coeffs(&self) -> AlgElement {
        let mut out = AlgElement::default();
        for (m, a) in self.iter() {
            out.add_term(a.conj(), m.clone());
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The single (monomial, coefficient) pair, if the element is a monomial.
    pub fn as_single_term(&self) -> Option<(&Monomial, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:?})*{:?}", c, m)?;
        }
        Ok(())
    }
}

/// A validated presentation plus the memoized rewriting engine.
pub struct Algebra {
    pres: Presentation,
    memo: RwLock<HashMap<Monomial, AlgElement>>,
    name_index: HashMap<String, GenId>,
}

impl Algebra {
    pub fn new(pres: Presentation) -> Self {
        let name_index = pres
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.clone(), i))
            .collect();
        Algebra {
            pres,
            memo: RwLock::new(HashMap::new()),
            name_index,
        }
    }

    pub fn name(&self) -> &str {
        &self.pres.name
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn gen_count(&self) -> usize {
        self.pres.gens.len()
    }

    pub fn gen_id(&self, name: &str) -> Result<GenId, Error> {
        self.name_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn gen_name(&self, g: GenId) -> &str {
        &self.pres.gens[g].name
    }

    pub fn is_invertible(&self, g: GenId) -> bool {
        self.pres.gens[g].invertible
    }

    /// Reduce a word to its unique normal form.
    pub fn normalize_word(&self, word: &Monomial) -> AlgElement {
        if let Some(hit) = self.memo.read().unwrap().get(word) {
            return hit.clone();
        }
        let out = rewrite::normalize(&self.pres.rules, word, self);
        self.memo
            .write()
            .unwrap()
            .insert(word.clone(), out.clone());
        out
    }

    pub fn is_normal(&self, word: &Monomial) -> bool {
        rewrite::find_match(&self.pres.rules, &word.flatten()).is_none()
    }

    /// Normalize a linear combination of (possibly non-normal) words.
    pub fn normalize(&self, x: &AlgElement) -> AlgElement {
        let mut out = AlgElement::zero();
        for (m, c) in x.iter() {
            let nf = self.normalize_word(m);
            for (nm, nc) in nf.iter() {
                out.add_term(nc * c, nm.clone());
            }
        }
        out
    }

    pub fn mul(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        let mut out = AlgElement::zero();
        for (ma, ca) in a.iter() {
            for (mb, cb) in b.iter() {
                let nf = self.normalize_word(&ma.concat(mb));
                let c = ca * cb;
                for (nm, nc) in nf.iter() {
                    out.add_term(nc * &c, nm.clone());
                }
            }
        }
        out
    }

    pub fn mul_many(&self, factors: &[&AlgElement]) -> AlgElement {
        let mut acc = AlgElement::one();
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// Star of a single letter `(g, sign)` as `(coefficient, word)`.
    fn star_letter(&self, g: GenId, sign: i8) -> Result<(Scalar, Monomial), Error> {
        let star = self
            .pres
            .star
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{} has no star map", self.pres.name)))?;
        let (c, m) = &star[g];
        if sign > 0 {
            Ok((c.clone(), m.clone()))
        } else {
            // (g^{-1})* = (g*)^{-1}; requires the star image to be invertible.
            for &(h, _) in m.runs() {
                if !self.pres.gens[h].invertible {
                    return Err(Error::NotInvertible(self.pres.gens[h].name.clone()));
                }
            }
            Ok((c.inv()?, m.inverse()))
        }
    }

    /// Conjugate-linear anti-multiplicative involution extended from the
    /// generator star map.
    pub fn star(&self, x: &AlgElement) -> Result<AlgElement, Error> {
        let mut out = AlgElement::zero();
        for (m, c) in x.iter() {
            let mut coeff = c.conj();
            let mut word = Monomial::one();
            for &(g, s) in m.flatten().iter().rev() {
                let (sc, sm) = self.star_letter(g, s)?;
                coeff = &coeff * &sc;
                word = word.concat(&sm);
            }
            let nf = self.normalize_word(&word);
            for (nm, nc) in nf.iter() {
                out.add_term(nc * &coeff, nm.clone());
            }
        }
        Ok(out)
    }

    pub fn has_star(&self) -> bool {
        self.pres.star.is_some()
    }

    /// Filtration degree of a normal-form monomial.
    pub fn filtration(&self, m: &Monomial) -> u64 {
        m.runs()
            .iter()
            .map(|&(g, e)| self.pres.gens[g].filt_weight * e.unsigned_abs())
            .sum()
    }

    pub fn filtration_element(&self, x: &AlgElement) -> u64 {
        x.iter().map(|(m, _)| self.filtration(m)).max().unwrap_or(0)
    }

    /// Deterministic list of all normal-form monomials of filtration `<= n`,
    /// sorted by the monomial order.
    pub fn basis_up_to(&self, n: u64) -> Result<Vec<Monomial>, Error> {
        const CAP: usize = 200_000;
        let mut out = Vec::new();
        let mut stack: Vec<(usize, Monomial, u64)> = vec![(0, Monomial::one(), 0)];
        while let Some((g, word, used)) = stack.pop() {
            if g == self.pres.gens.len() {
                if self.is_normal(&word) {
                    out.push(word);
                    if out.len() > CAP {
                        return Err(Error::BasisCap { cap: CAP, size: out.len() });
                    }
                }
                continue;
            }
            let info = &self.pres.gens[g];
            let budget = if info.filt_weight == 0 {
                u64::from(info.max_exp.unwrap_or(0))
            } else {
                (n - used) / info.filt_weight
            };
            let hi = match info.max_exp {
                Some(m) => budget.min(u64::from(m)),
                None => budget,
            } as i64;
            let lo = if info.invertible { -hi } else { 0 };
            for e in lo..=hi {
                let wcost = info.filt_weight * e.unsigned_abs();
                stack.push((
                    g + 1,
                    word.concat(&Monomial::gen_pow(g, e)),
                    used + wcost,
                ));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Random normal-form monomial of filtration `<= bound`.
    pub fn sample_monomial<R: Rng>(&self, rng: &mut R, bound: u64) -> Monomial {
        // rejection sampling over the enumerated window keeps distribution
        // independent of rule internals
        let basis = self
            .basis_up_to(bound)
            .expect("sampling window exceeded basis cap");
        basis[rng.gen_range(0..basis.len())].clone()
    }

    /// Random element supported on `<= terms` monomials with small Gaussian
    /// integer coefficients.
    pub fn sample_element<R: Rng>(&self, rng: &mut R, bound: u64, terms: usize) -> AlgElement {
        let mut out = AlgElement::zero();
        for _ in 0..terms {
            let m = self.sample_monomial(rng, bound);
            let re = rng.gen_range(-3i64..=3);
            let im = rng.gen_range(-2i64..=2);
            out.add_term(
                &Scalar::from_int(re) + &(&Scalar::from_int(im) * &Scalar::i()),
                m,
            );
        }
        self.normalize(&out)
    }

    /// Render an element with named generators, terms in monomial order.
    pub fn render(&self, x: &AlgElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in x.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let needs_coeff = !c.is_one() || m.is_one();
            if needs_coeff {
                let cs = c.to_string();
                if cs.contains(' ') {
                    out.push_str(&format!("({})", cs));
                } else {
                    out.push_str(&cs);
                }
                if !m.is_one() {
                    out.push('*');
                }
            }
            if !m.is_one() {
                out.push_str(&self.render_monomial(m));
            }
        }
        out
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        m.runs()
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    self.gen_name(g).to_string()
                } else {
                    format!("{}^{}", self.gen_name(g), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({})", self.pres.name)
    }
}

/// Builder used by the catalog and the presentation parser.
pub struct PresentationBuilder {
    name: String,
    gens: Vec<GeneratorInfo>,
    rules: Vec<(Monomial, AlgElement)>,
    star: Option<Vec<Option<(Scalar, Monomial)>>>,
    grading: Vec<Vec<i64>>,
}

impl PresentationBuilder {
    pub fn new(name: &str) -> Self {
        PresentationBuilder {
            name: name.to_string(),
            gens: Vec::new(),
            rules: Vec::new(),
            star: None,
            grading: Vec::new(),
        }
    }

    pub fn gen(&mut self, name: &str, filt_weight: u64) -> GenId {
        self.gens.push(GeneratorInfo {
            name: name.to_string(),
            invertible: false,
            term_weight: 1,
            filt_weight,
            max_exp: None,
        });
        self.grading.push(Vec::new());
        self.gens.len() - 1
    }

    pub fn gen_invertible(&mut self, name: &str, filt_weight: u64) -> GenId {
        let g = self.gen(name, filt_weight);
        self.gens[g].invertible = true;
        g
    }

    pub fn term_weight(&mut self, g: GenId, w: u64) {
        self.gens[g].term_weight = w;
    }

    pub fn set_invertible(&mut self, g: GenId) {
        self.gens[g].invertible = true;
    }

    pub fn set_filt_weight(&mut self, g: GenId, w: u64) {
        self.gens[g].filt_weight = w;
    }

    pub fn max_exp(&mut self, g: GenId, m: u32) {
        self.gens[g].max_exp = Some(m);
    }

    pub fn grade(&mut self, g: GenId, v: Vec<i64>) {
        self.grading[g] = v;
    }

    pub fn rule(&mut self, lhs: Monomial, rhs: AlgElement) {
        self.rules.push((lhs, rhs));
    }

    pub fn star_gen(&mut self, g: GenId, c: Scalar, m: Monomial) {
        if self.star.is_none() {
            self.star = Some(vec![None; self.gens.len()]);
        }
        let star = self.star.as_mut().unwrap();
        star.resize(self.gens.len(), None);
        star[g] = Some((c, m));
    }

    /// Validate rule orientation, run the overlap check, and produce the
    /// usable algebra.
    pub fn build(self) -> Result<Algebra, Error> {
        let star = match self.star {
            None => None,
            Some(v) => {
                let mut out = Vec::with_capacity(self.gens.len());
                for (g, s) in v.into_iter().enumerate() {
                    out.push(s.ok_or_else(|| {
                        Error::Invalid(format!(
                            "star map missing for generator `{}`",
                            self.gens[g].name
                        ))
                    })?);
                }
                Some(out)
            }
        };
        let rules: Vec<Rule> = self
            .rules
            .iter()
            .map(|(l, r)| Rule {
                lhs: l.flatten(),
                rhs: r.clone(),
            })
            .collect();
        // check every rule strictly decreases the termination order before
        // trusting normalization to halt
        for rule in &rules {
            rewrite::check_rule_decreases(&self.gens, rule)?;
        }
        // normalize rule right-hand sides against the full system
        let probe = Algebra::new(Presentation {
            name: self.name.clone(),
            gens: self.gens.clone(),
            rules: rules.clone(),
            star: star.clone(),
            grading: self.grading.clone(),
            confluence: ConfluenceReport::default(),
        });
        let rules: Vec<Rule> = rules
            .iter()
            .map(|r| Rule {
                lhs: r.lhs.clone(),
                rhs: probe.normalize(&r.rhs),
            })
            .collect();
        let algebra = Algebra::new(Presentation {
            name: self.name,
            gens: self.gens,
            rules,
            star,
            grading: self.grading,
            confluence: ConfluenceReport::default(),
        });
        let report = rewrite::overlap_check(&algebra);
        let mut pres = algebra.pres;
        pres.confluence = report;
        Ok(Algebra::new(pres))
    }
}
