//! Hopf *-algebra structure on a presented algebra: coproduct, counit,
//! antipode and its inverse, characters, twisted antipodes, and modular
//! pairs in involution.
//!
//! Structure maps are stored on generators and extended (anti)multiplicatively
//! to normal forms; two-leg coproducts are memoized per monomial since
//! Sweedler expansions are reused heavily by every complex.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use rand::Rng;
use serde::Serialize;

use crate::error::Error;
use crate::monomial::{GenId, Monomial};
use crate::ncalg::{AlgElement, Algebra};
use crate::scalar::Scalar;
use crate::tensor::TensorElement;

/// Which reality conditions a modular pair is expected to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MpiMode {
    /// `sigma* = sigma` (cohomology side).
    Cohomology,
    /// `sigma* = sigma^{-1}` and `delta(h*) = delta(h)` (homology side).
    Homology,
}

/// A character `delta` (by name; `None` is the counit) together with a
/// group-like `sigma`.
#[derive(Clone, Debug)]
pub struct ModularPair {
    pub delta: Option<String>,
    pub sigma: Monomial,
}

impl ModularPair {
    pub fn counit_with(sigma: Monomial) -> Self {
        ModularPair { delta: None, sigma }
    }
}

/// A presented algebra together with its Hopf structure maps.
pub struct HopfAlgebra {
    algebra: Arc<Algebra>,
    delta_gen: Vec<TensorElement>,
    eps_gen: Vec<Scalar>,
    antipode_gen: Vec<AlgElement>,
    /// Letter-level inverse antipode, derived from `antipode_gen`.
    antipode_inv: Vec<AlgElement>,
    grouplikes: Vec<Monomial>,
    characters: BTreeMap<String, Vec<Scalar>>,
    coproduct_memo: RwLock<HashMap<Monomial, TensorElement>>,
}

pub struct HopfBuilder {
    algebra: Arc<Algebra>,
    delta_gen: Vec<Option<TensorElement>>,
    eps_gen: Vec<Option<Scalar>>,
    antipode_gen: Vec<Option<AlgElement>>,
    grouplikes: Vec<Monomial>,
    characters: BTreeMap<String, Vec<Scalar>>,
}

impl HopfBuilder {
    pub fn new(algebra: Arc<Algebra>) -> Self {
        let n = algebra.gen_count();
        HopfBuilder {
            algebra,
            delta_gen: vec![None; n],
            eps_gen: vec![None; n],
            antipode_gen: vec![None; n],
            grouplikes: Vec::new(),
            characters: BTreeMap::new(),
        }
    }

    pub fn delta(&mut self, g: GenId, t: TensorElement) -> &mut Self {
        self.delta_gen[g] = Some(t);
        self
    }

    /// Declare a group-like generator: `delta(g) = g (x) g`, `eps(g) = 1`,
    /// `S(g) = g^{-1}`.
    pub fn grouplike_gen(&mut self, g: GenId) -> &mut Self {
        let m = Monomial::gen(g);
        self.delta_gen[g] = Some(TensorElement::from_tuple(
            Scalar::one(),
            vec![m.clone(), m.clone()],
        ));
        self.eps_gen[g] = Some(Scalar::one());
        self.antipode_gen[g] = Some(AlgElement::from_term(Scalar::one(), m.inverse()));
        self.grouplikes.push(m);
        self
    }

    pub fn eps(&mut self, g: GenId, v: Scalar) -> &mut Self {
        self.eps_gen[g] = Some(v);
        self
    }

    pub fn antipode(&mut self, g: GenId, v: AlgElement) -> &mut Self {
        self.antipode_gen[g] = Some(v);
        self
    }

    pub fn grouplike_monomial(&mut self, m: Monomial) -> &mut Self {
        self.grouplikes.push(m);
        self
    }

    pub fn character(&mut self, name: &str, values: Vec<Scalar>) -> &mut Self {
        self.characters.insert(name.to_string(), values);
        self
    }

    pub fn build(self) -> Result<HopfAlgebra, Error> {
        let n = self.algebra.gen_count();
        let unwrap_all = |v: Vec<Option<TensorElement>>| -> Result<Vec<TensorElement>, Error> {
            v.into_iter()
                .enumerate()
                .map(|(g, o)| {
                    o.ok_or_else(|| {
                        Error::Invalid(format!(
                            "coproduct missing for generator `{}`",
                            self.algebra.gen_name(g)
                        ))
                    })
                })
                .collect()
        };
        let delta_gen = unwrap_all(self.delta_gen)?;
        let eps_gen: Vec<Scalar> = self
            .eps_gen
            .into_iter()
            .enumerate()
            .map(|(g, o)| {
                o.ok_or_else(|| {
                    Error::Invalid(format!(
                        "counit missing for generator `{}`",
                        self.algebra.gen_name(g)
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        let antipode_gen: Vec<AlgElement> = self
            .antipode_gen
            .into_iter()
            .enumerate()
            .map(|(g, o)| {
                o.ok_or_else(|| {
                    Error::Invalid(format!(
                        "antipode missing for generator `{}`",
                        self.algebra.gen_name(g)
                    ))
                })
            })
            .collect::<Result<_, _>>()?;

        // invertible generators must have single-term coproducts so negative
        // powers can be expanded
        for g in 0..n {
            if self.algebra.is_invertible(g) && delta_gen[g].len() != 1 {
                return Err(Error::Invalid(format!(
                    "invertible generator `{}` needs a single-term coproduct",
                    self.algebra.gen_name(g)
                )));
            }
        }

        // derive the letter-level inverse antipode: S(g) = c*m with m a
        // single letter gives S^{-1}(m) = c^{-1} g
        let mut antipode_inv: Vec<Option<AlgElement>> = vec![None; n];
        for g in 0..n {
            let img = &antipode_gen[g];
            let (m, c) = img.as_single_term().ok_or_else(|| {
                Error::Unsupported(format!(
                    "antipode of `{}` is not a single term; inverse antipode underivable",
                    self.algebra.gen_name(g)
                ))
            })?;
            match m.runs() {
                [(h, e)] if matches!(e, 1 | -1) => {
                    let target = AlgElement::from_term(
                        c.inv()?,
                        Monomial::gen_pow(g, 1),
                    );
                    // S^{-1}(h^e) = (c^{-1} g)^e
                    if *e == 1 {
                        if antipode_inv[*h].is_none() {
                            antipode_inv[*h] = Some(target);
                        }
                    } else {
                        // S(g) = c*h^{-1}: then S^{-1}(h) = (S^{-1}(h^{-1}))^{-1} = c g^{-1}...
                        // handled via S^{-1}(h) = c^{... } below; only group-likes hit this arm
                        if antipode_inv[*h].is_none() {
                            antipode_inv[*h] = Some(AlgElement::from_term(
                                c.inv()?,
                                Monomial::gen_pow(g, -1),
                            ));
                        }
                    }
                }
                _ => {
                    return Err(Error::Unsupported(format!(
                        "antipode of `{}` is not a single letter",
                        self.algebra.gen_name(g)
                    )))
                }
            }
        }
        let antipode_inv: Vec<AlgElement> = antipode_inv
            .into_iter()
            .enumerate()
            .map(|(g, o)| {
                o.ok_or_else(|| {
                    Error::Unsupported(format!(
                        "no generator maps onto `{}` under S; inverse antipode underivable",
                        self.algebra.gen_name(g)
                    ))
                })
            })
            .collect::<Result<_, _>>()?;

        Ok(HopfAlgebra {
            algebra: self.algebra,
            delta_gen,
            eps_gen,
            antipode_gen,
            antipode_inv,
            grouplikes: self.grouplikes,
            characters: self.characters,
            coproduct_memo: RwLock::new(HashMap::new()),
        })
    }
}

impl HopfAlgebra {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> Arc<Algebra> {
        Arc::clone(&self.algebra)
    }

    pub fn grouplikes(&self) -> &[Monomial] {
        &self.grouplikes
    }

    pub fn character_names(&self) -> impl Iterator<Item = &String> {
        self.characters.keys()
    }

    pub fn add_character(&mut self, name: &str, values: Vec<Scalar>) {
        self.characters.insert(name.to_string(), values);
    }

    fn delta_letter(&self, g: GenId, e: i64) -> TensorElement {
        if e == 1 {
            return self.delta_gen[g].clone();
        }
        // single-term coproduct guaranteed for invertible generators
        let (t, c) = self.delta_gen[g]
            .iter()
            .next()
            .expect("nonempty coproduct");
        let (l, r) = (&t[0], &t[1]);
        let pow = |m: &Monomial, e: i64| -> Monomial {
            let mut acc = Monomial::one();
            let step = if e > 0 { m.clone() } else { m.inverse() };
            for _ in 0..e.unsigned_abs() {
                acc = acc.concat(&step);
            }
            acc
        };
        TensorElement::from_tuple(
            c.pow(e).expect("invertible coproduct coefficient"),
            vec![pow(l, e), pow(r, e)],
        )
    }

    fn mul_two_leg(&self, a: &TensorElement, b: &TensorElement) -> TensorElement {
        let alg = &*self.algebra;
        let mut out = TensorElement::zero(2);
        for (ta, ca) in a.iter() {
            for (tb, cb) in b.iter() {
                let l = alg.normalize_word(&ta[0].concat(&tb[0]));
                let r = alg.normalize_word(&ta[1].concat(&tb[1]));
                let c = ca * cb;
                for (lm, lc) in l.iter() {
                    for (rm, rc) in r.iter() {
                        out.add_term(&(&c * lc) * rc, vec![lm.clone(), rm.clone()]);
                    }
                }
            }
        }
        out
    }

    /// Two-leg coproduct of a normal-form monomial, memoized.
    pub fn coproduct_monomial(&self, m: &Monomial) -> TensorElement {
        if let Some(hit) = self.coproduct_memo.read().unwrap().get(m) {
            return hit.clone();
        }
        let mut acc = TensorElement::from_tuple(
            Scalar::one(),
            vec![Monomial::one(), Monomial::one()],
        );
        for &(g, e) in m.runs() {
            let step = if self.algebra.is_invertible(g) {
                self.delta_letter(g, e)
            } else {
                let one = self.delta_letter(g, 1);
                let mut p = TensorElement::from_tuple(
                    Scalar::one(),
                    vec![Monomial::one(), Monomial::one()],
                );
                for _ in 0..e {
                    p = self.mul_two_leg(&p, &one);
                }
                p
            };
            acc = self.mul_two_leg(&acc, &step);
        }
        self.coproduct_memo
            .write()
            .unwrap()
            .insert(m.clone(), acc.clone());
        acc
    }

    /// Iterated coproduct with `legs >= 1` output legs.
    pub fn coproduct(&self, x: &AlgElement, legs: usize) -> TensorElement {
        assert!(legs >= 1);
        let mut out = TensorElement::zero(legs);
        for (m, c) in x.iter() {
            let t = self.coproduct_monomial_legs(m, legs);
            for (tt, tc) in t.iter() {
                out.add_term(tc * c, tt.clone());
            }
        }
        out
    }

    pub fn coproduct_monomial_legs(&self, m: &Monomial, legs: usize) -> TensorElement {
        if legs == 1 {
            let nf = self.algebra.normalize_word(m);
            return TensorElement::from_algebra_element(&nf);
        }
        let two = self.coproduct_monomial(m);
        if legs == 2 {
            return two;
        }
        // expand the first leg repeatedly
        let mut acc = two;
        for _ in 0..(legs - 2) {
            let mut next = TensorElement::zero(acc.arity() + 1);
            for (t, c) in acc.iter() {
                let head = self.coproduct_monomial(&t[0]);
                for (ht, hc) in head.iter() {
                    let mut tuple = Vec::with_capacity(t.len() + 1);
                    tuple.push(ht[0].clone());
                    tuple.push(ht[1].clone());
                    tuple.extend(t[1..].iter().cloned());
                    next.add_term(hc * c, tuple);
                }
            }
            acc = next;
        }
        acc
    }

    /// Multiplicative counit.
    pub fn counit(&self, x: &AlgElement) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in x.iter() {
            let mut v = Scalar::one();
            for &(g, e) in m.runs() {
                let base = &self.eps_gen[g];
                let p = base.pow(e).expect("counit of invertible generator is invertible");
                v = &v * &p;
            }
            out = &out + &(&v * c);
        }
        out
    }

    fn antipode_letter(&self, g: GenId, sign: i8, inverse: bool) -> AlgElement {
        let table = if inverse {
            &self.antipode_inv
        } else {
            &self.antipode_gen
        };
        let img = &table[g];
        if sign > 0 {
            img.clone()
        } else {
            let (m, c) = img.as_single_term().expect("antipode of invertible is single term");
            AlgElement::from_term(c.inv().expect("invertible"), m.inverse())
        }
    }

    fn antipode_once(&self, x: &AlgElement, inverse: bool) -> AlgElement {
        let alg = &*self.algebra;
        let mut out = AlgElement::zero();
        for (m, c) in x.iter() {
            // anti-homomorphism: reverse the word
            let mut acc = AlgElement::one();
            for &(g, s) in m.flatten().iter().rev() {
                acc = alg.mul(&acc, &self.antipode_letter(g, s, inverse));
            }
            for (am, ac) in acc.iter() {
                out.add_term(ac * c, am.clone());
            }
        }
        out
    }

    /// `S`, `S^{-1}`, `S^{2}`, or `S^{-2}` according to `power`.
    pub fn antipode(&self, x: &AlgElement, power: i8) -> AlgElement {
        match power {
            1 => self.antipode_once(x, false),
            -1 => self.antipode_once(x, true),
            2 => self.antipode_once(&self.antipode_once(x, false), false),
            -2 => self.antipode_once(&self.antipode_once(x, true), true),
            _ => panic!("antipode power must be one of 1, -1, 2, -2"),
        }
    }

    /// Character value, extended multiplicatively over normal forms.
    pub fn char_value(&self, name: Option<&str>, x: &AlgElement) -> Result<Scalar, Error> {
        match name {
            None => Ok(self.counit(x)),
            Some(n) => {
                let vals = self
                    .characters
                    .get(n)
                    .ok_or_else(|| Error::Invalid(format!("unknown character `{n}`")))?;
                let mut out = Scalar::zero();
                for (m, c) in x.iter() {
                    let mut v = Scalar::one();
                    for &(g, e) in m.runs() {
                        v = &v * &vals[g].pow(e)?;
                    }
                    out = &out + &(&v * c);
                }
                Ok(out)
            }
        }
    }

    /// Twisted antipode `S_delta(h) = delta(h_(1)) S(h_(2))`.
    pub fn twisted_antipode(&self, x: &AlgElement, delta: Option<&str>) -> Result<AlgElement, Error> {
        let two = self.coproduct(x, 2);
        let mut out = AlgElement::zero();
        for (t, c) in two.iter() {
            let dv = self.char_value(delta, &AlgElement::from_term(Scalar::one(), t[0].clone()))?;
            if dv.is_zero() {
                continue;
            }
            let s = self.antipode(&AlgElement::from_term(Scalar::one(), t[1].clone()), 1);
            for (sm, sc) in s.iter() {
                out.add_term(&(&dv * sc) * c, sm.clone());
            }
        }
        Ok(out)
    }

    /// `Ad_sigma(h) = sigma h sigma^{-1}`, normalized.
    pub fn ad(&self, sigma: &Monomial, x: &AlgElement) -> AlgElement {
        let alg = &*self.algebra;
        let s = AlgElement::from_term(Scalar::one(), sigma.clone());
        let si = AlgElement::from_term(Scalar::one(), sigma.inverse());
        alg.mul(&alg.mul(&s, x), &si)
    }

    /// Left adjoint action `h |> a = h_(1) a S(h_(2))`; a module-algebra
    /// action for any Hopf algebra.
    pub fn adjoint_action(&self, h: &AlgElement, a: &AlgElement) -> AlgElement {
        let alg = &*self.algebra;
        let two = self.coproduct(h, 2);
        let mut out = AlgElement::zero();
        for (t, c) in two.iter() {
            let left = AlgElement::from_term(Scalar::one(), t[0].clone());
            let right = self.antipode(&AlgElement::from_term(Scalar::one(), t[1].clone()), 1);
            let prod = alg.mul(&alg.mul(&left, a), &right);
            for (m, mc) in prod.iter() {
                out.add_term(mc * c, m.clone());
            }
        }
        out
    }

    /// Diagonal action of a group-like monomial on a tensor power: left
    /// multiplication on every leg.
    pub fn diagonal_grouplike_action(&self, sigma: &Monomial, x: &TensorElement) -> TensorElement {
        let alg = &*self.algebra;
        x.map_tuples(x.arity(), |t| {
            let mut acc = TensorElement::scalar(Scalar::one());
            for m in t {
                let prod = alg.normalize_word(&sigma.concat(m));
                acc = acc.tensor(&TensorElement::from_algebra_element(&prod));
            }
            acc
        })
    }

    pub fn star(&self, x: &AlgElement) -> Result<AlgElement, Error> {
        self.algebra.star(x)
    }

    pub fn gen_element(&self, name: &str) -> Result<AlgElement, Error> {
        Ok(AlgElement::from_gen(self.algebra.gen_id(name)?))
    }

    pub fn monomial(&self, word: &[(&str, i64)]) -> Result<Monomial, Error> {
        let mut runs = Vec::new();
        for (n, e) in word {
            runs.push((self.algebra.gen_id(n)?, *e));
        }
        Ok(Monomial::from_runs(runs))
    }
}

/// Outcome of one verified identity.
#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub identity: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub subject: String,
    pub pass: bool,
    pub lines: Vec<CheckLine>,
}

impl VerifyReport {
    pub fn new(subject: &str) -> Self {
        VerifyReport {
            subject: subject.to_string(),
            pass: true,
            lines: Vec::new(),
        }
    }

    pub fn record(&mut self, identity: &str, pass: bool, detail: String) {
        self.pass &= pass;
        self.lines.push(CheckLine {
            identity: identity.to_string(),
            pass,
            detail,
        });
    }

    pub fn record_zero(&mut self, identity: &str, residual: &AlgElement, algebra: &Algebra) {
        let pass = residual.is_zero();
        let detail = if pass {
            "residual 0".to_string()
        } else {
            format!("residual {}", algebra.render(residual))
        };
        self.record(identity, pass, detail);
    }

    pub fn first_failure(&self) -> Option<&CheckLine> {
        self.lines.iter().find(|l| !l.pass)
    }
}

/// Residual check `S_delta^2(h) - sigma h sigma^{-1}` on generators and
/// random monomials.
pub fn verify_mpi<R: Rng>(
    hopf: &HopfAlgebra,
    pair: &ModularPair,
    samples: usize,
    sample_bound: u64,
    rng: &mut R,
) -> Result<VerifyReport, Error> {
    let alg = hopf.algebra();
    let mut report = VerifyReport::new(&format!(
        "modular pair (sigma = {}, delta = {}) on {}",
        alg.render_monomial(&pair.sigma),
        pair.delta.as_deref().unwrap_or("eps"),
        alg.name()
    ));
    let dsig = hopf.char_value(
        pair.delta.as_deref(),
        &AlgElement::from_term(Scalar::one(), pair.sigma.clone()),
    )?;
    report.record(
        "delta(sigma) = 1",
        dsig.is_one(),
        format!("delta(sigma) = {}", dsig),
    );

    let mut probes: Vec<AlgElement> = (0..alg.gen_count()).map(AlgElement::from_gen).collect();
    for _ in 0..samples {
        probes.push(AlgElement::from_term(
            Scalar::one(),
            alg.sample_monomial(rng, sample_bound),
        ));
    }
    for (i, h) in probes.iter().enumerate() {
        let twisted = hopf.twisted_antipode(&hopf.twisted_antipode(h, pair.delta.as_deref())?, pair.delta.as_deref())?;
        let conj = hopf.ad(&pair.sigma, h);
        let residual = twisted.sub(&conj);
        let label = if i < alg.gen_count() {
            format!("S_delta^2 = Ad_sigma on {}", alg.render(h))
        } else {
            format!("S_delta^2 = Ad_sigma on sample {}", i - alg.gen_count())
        };
        report.record_zero(&label, &residual, alg);
    }
    Ok(report)
}

/// All Hopf(-*) axioms evaluated on generators, the rewrite rules, and
/// random low-degree elements.
pub fn verify_hopf_axioms<R: Rng>(
    hopf: &HopfAlgebra,
    samples: usize,
    sample_bound: u64,
    rng: &mut R,
) -> Result<VerifyReport, Error> {
    let alg = hopf.algebra();
    let mut report = VerifyReport::new(&format!("hopf axioms on {}", alg.name()));

    let term = |m: &Monomial| AlgElement::from_term(Scalar::one(), m.clone());
    let tensor_sub_zero = |r: &mut VerifyReport, id: &str, x: &TensorElement| {
        r.record(
            id,
            x.is_zero(),
            if x.is_zero() {
                "residual 0".into()
            } else {
                format!("residual with {} terms", x.len())
            },
        );
    };

    // well-definedness against the rewrite rules
    for (ri, rule) in alg.presentation().rules.iter().enumerate() {
        let lhs_word = Monomial::from_letters(&rule.lhs);
        let lhs = term(&lhs_word);
        let rhs = &rule.rhs;
        let d = hopf.coproduct(&lhs, 2).sub(&hopf.coproduct(rhs, 2));
        tensor_sub_zero(&mut report, &format!("delta respects rule {ri}"), &d);
        let e = &hopf.counit(&lhs) - &hopf.counit(rhs);
        report.record(
            &format!("eps respects rule {ri}"),
            e.is_zero(),
            format!("residual {}", e),
        );
        let s = hopf.antipode(&lhs, 1).sub(&hopf.antipode(rhs, 1));
        report.record_zero(&format!("S respects rule {ri}"), &s, alg);
        if alg.has_star() {
            let st = alg.star(&lhs)?.sub(&alg.star(rhs)?);
            report.record_zero(&format!("star respects rule {ri}"), &st, alg);
        }
    }

    let mut probes: Vec<AlgElement> = (0..alg.gen_count()).map(AlgElement::from_gen).collect();
    for _ in 0..samples {
        probes.push(alg.sample_element(rng, sample_bound, 2));
    }

    for (i, h) in probes.iter().enumerate() {
        let tag = |s: &str| {
            if i < alg.gen_count() {
                format!("{} on {}", s, alg.gen_name(i))
            } else {
                format!("{} on sample {}", s, i - alg.gen_count())
            }
        };
        // coassociativity
        let d3_left = hopf.coproduct(h, 3);
        let mut d3_right = TensorElement::zero(3);
        for (t, c) in hopf.coproduct(h, 2).iter() {
            let tail = hopf.coproduct_monomial(&t[1]);
            for (tt, tc) in tail.iter() {
                d3_right.add_term(tc * c, vec![t[0].clone(), tt[0].clone(), tt[1].clone()]);
            }
        }
        tensor_sub_zero(&mut report, &tag("coassociativity"), &d3_left.sub(&d3_right));

        // counit axiom
        let two = hopf.coproduct(h, 2);
        let mut left = AlgElement::zero();
        let mut right = AlgElement::zero();
        for (t, c) in two.iter() {
            let e0 = hopf.counit(&term(&t[0]));
            let e1 = hopf.counit(&term(&t[1]));
            left.add_term(&e0 * c, t[1].clone());
            right.add_term(&e1 * c, t[0].clone());
        }
        report.record_zero(&tag("counit left"), &left.sub(h), alg);
        report.record_zero(&tag("counit right"), &right.sub(h), alg);

        // antipode axiom: m(S (x) id) delta = eps(.) 1 = m(id (x) S) delta
        let mut conv_l = AlgElement::zero();
        let mut conv_r = AlgElement::zero();
        for (t, c) in two.iter() {
            let sl = hopf.antipode(&term(&t[0]), 1);
            let lr = alg.mul(&sl, &term(&t[1]));
            for (m, mc) in lr.iter() {
                conv_l.add_term(mc * c, m.clone());
            }
            let sr = hopf.antipode(&term(&t[1]), 1);
            let rl = alg.mul(&term(&t[0]), &sr);
            for (m, mc) in rl.iter() {
                conv_r.add_term(mc * c, m.clone());
            }
        }
        let eps1 = AlgElement::from_term(hopf.counit(h), Monomial::one());
        report.record_zero(&tag("antipode left"), &conv_l.sub(&eps1), alg);
        report.record_zero(&tag("antipode right"), &conv_r.sub(&eps1), alg);

        // S S^{-1} = id
        let ss = hopf.antipode(&hopf.antipode(h, 1), -1).sub(h);
        report.record_zero(&tag("S S^-1 = id"), &ss, alg);

        if alg.has_star() {
            // delta(h*) = h_(1)* (x) h_(2)*
            let lhs = hopf.coproduct(&alg.star(h)?, 2);
            let mut rhs = TensorElement::zero(2);
            for (t, c) in two.iter() {
                let sl = alg.star(&term(&t[0]))?;
                let sr = alg.star(&term(&t[1]))?;
                for (lm, lc) in sl.iter() {
                    for (rm, rc) in sr.iter() {
                        rhs.add_term(&(&c.conj() * lc) * rc, vec![lm.clone(), rm.clone()]);
                    }
                }
            }
            tensor_sub_zero(&mut report, &tag("delta compatible with star"), &lhs.sub(&rhs));

            // eps(h*) = conj(eps(h))
            let e = &hopf.counit(&alg.star(h)?) - &hopf.counit(h).conj();
            report.record(
                &tag("eps compatible with star"),
                e.is_zero(),
                format!("residual {}", e),
            );

            // S(h*) = S^{-1}(h)*
            let l = hopf.antipode(&alg.star(h)?, 1);
            let r = alg.star(&hopf.antipode(h, -1))?;
            report.record_zero(&tag("S(h*) = S^-1(h)*"), &l.sub(&r), alg);

            // (S o *)^2 = id
            let so = hopf.antipode(&alg.star(h)?, 1);
            let so2 = hopf.antipode(&alg.star(&so)?, 1);
            report.record_zero(&tag("(S o *)^2 = id"), &so2.sub(h), alg);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn uq_sl2_generator_structure() {
        let q = crate::scalar::QParam::from_ratio(3, 4, false).unwrap();
        let h = catalog::uq_sl2(&q).unwrap();
        let alg = h.algebra();
        let e = h.gen_element("E").unwrap();
        let k = h.gen_element("K").unwrap();

        // delta(E) = E (x) K + K^-1 (x) E
        let de = h.coproduct(&e, 2);
        let me = h.monomial(&[("E", 1)]).unwrap();
        let mk = h.monomial(&[("K", 1)]).unwrap();
        let mki = h.monomial(&[("K", -1)]).unwrap();
        let mut expect = TensorElement::zero(2);
        expect.add_term(Scalar::one(), vec![me.clone(), mk.clone()]);
        expect.add_term(Scalar::one(), vec![mki.clone(), me.clone()]);
        assert!(de.sub(&expect).is_zero());

        // S(E) = -q E
        let se = h.antipode(&e, 1);
        assert_eq!(se, e.scale(&-&q.q()));
        // S(1) = 1
        assert_eq!(h.antipode(&AlgElement::one(), 1), AlgElement::one());
        // S(EK) = -E K^-1
        let ek = alg.mul(&e, &k);
        let sek = h.antipode(&ek, 1);
        let mut expect = AlgElement::zero();
        expect.add_term(-&Scalar::one(), h.monomial(&[("E", 1), ("K", -1)]).unwrap());
        assert_eq!(sek, expect);

        // eps values
        assert!(h.counit(&e).is_zero());
        assert!(h.counit(&k).is_one());
    }

    #[test]
    fn uq_sl2_coproduct_of_product() {
        // delta(EK) = EK (x) K^2 + 1 (x) EK
        let q = crate::scalar::QParam::from_ratio(3, 4, false).unwrap();
        let h = catalog::uq_sl2(&q).unwrap();
        let ek = h.monomial(&[("E", 1), ("K", 1)]).unwrap();
        let d = h.coproduct_monomial(&ek);
        let mut expect = TensorElement::zero(2);
        expect.add_term(Scalar::one(), vec![ek.clone(), h.monomial(&[("K", 2)]).unwrap()]);
        expect.add_term(Scalar::one(), vec![Monomial::one(), ek.clone()]);
        assert!(d.sub(&expect).is_zero());
        // delta(1) = 1 (x) 1
        let one = h.coproduct(&AlgElement::one(), 2);
        assert_eq!(
            one,
            TensorElement::from_tuple(Scalar::one(), vec![Monomial::one(), Monomial::one()])
        );
    }

    #[test]
    fn twisted_antipode_trivial_twist() {
        let q = crate::scalar::QParam::from_ratio(3, 4, false).unwrap();
        let h = catalog::uq_sl2(&q).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x = h.algebra().sample_element(&mut rng, 2, 2);
            let tw = h.twisted_antipode(&x, None).unwrap();
            assert_eq!(tw, h.antipode(&x, 1));
        }
        assert_eq!(
            h.twisted_antipode(&AlgElement::one(), None).unwrap(),
            AlgElement::one()
        );
    }

    #[test]
    fn mpi_k_squared_passes_k_fails() {
        let q = crate::scalar::QParam::from_ratio(3, 4, false).unwrap();
        let h = catalog::uq_sl2(&q).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let good = ModularPair::counit_with(h.monomial(&[("K", 2)]).unwrap());
        let r = verify_mpi(&h, &good, 25, 3, &mut rng).unwrap();
        assert!(r.pass, "{:?}", r.first_failure());

        let bad = ModularPair::counit_with(h.monomial(&[("K", 1)]).unwrap());
        let r = verify_mpi(&h, &bad, 5, 3, &mut rng).unwrap();
        assert!(!r.pass);
        // the residual shows up on E
        assert!(r.lines.iter().any(|l| !l.pass && l.identity.contains("on E")));
    }

    #[test]
    fn hopf_axioms_uq_sl2() {
        let q = crate::scalar::QParam::from_ratio(3, 4, false).unwrap();
        let h = catalog::uq_sl2(&q).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let r = verify_hopf_axioms(&h, 30, 3, &mut rng).unwrap();
        assert!(r.pass, "first failure: {:?}", r.first_failure());
    }
}
