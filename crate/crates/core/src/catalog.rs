//! Built-in algebras and the solvers derived from them: group algebras,
//! quantized enveloping algebras, the quantum `SU(2)` coordinate ring with
//! its Haar state and modular character, the circle algebra, and the Podleś
//! spheres with their coactions and unitary.
//!
//! Haar values are never transcribed from the literature; they are solved
//! from the invariance equations, and the modular character `f1` is solved
//! from the modular property of the Haar state.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero as _;

use crate::error::Error;
use crate::hopf::{HopfAlgebra, HopfBuilder};
use crate::linalg::SparseMatrix;
use crate::monomial::Monomial;
use crate::ncalg::{AlgElement, Algebra, PresentationBuilder};
use crate::scalar::{rational_sqrt, QParam, Rational, Scalar};
use crate::tensor::TensorElement;

/// A finite group given by its multiplication table. Element 0 is the
/// identity; names index the non-identity elements.
pub struct FiniteGroup {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub names: Vec<String>,
}

impl FiniteGroup {
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        let names = (1..n)
            .map(|j| if j == 1 { "g".to_string() } else { format!("g{j}") })
            .collect();
        FiniteGroup {
            name: format!("Z{n}"),
            order: n,
            table,
            names,
        }
    }

    /// The symmetric group on three letters, elements as permutations.
    pub fn s3() -> Self {
        // permutations of {0,1,2} in a fixed listing
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2], // e
            [1, 2, 0], // r
            [2, 0, 1], // r2
            [1, 0, 2], // s
            [0, 2, 1], // rs  (apply s then r: composition fixed below)
            [2, 1, 0], // r2s
        ];
        let compose = |a: &[usize; 3], b: &[usize; 3]| -> [usize; 3] {
            [a[b[0]], a[b[1]], a[b[2]]]
        };
        let idx = |p: &[usize; 3]| perms.iter().position(|x| x == p).unwrap();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx(&compose(a, b))).collect())
            .collect();
        FiniteGroup {
            name: "S3".to_string(),
            order: 6,
            table,
            names: vec!["r", "r2", "s", "rs", "r2s"]
                .into_iter()
                .map(String::from)
                .collect(),
        }
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.table[a][b] == 0).unwrap()
    }
}

/// Group algebra `k[G]` as a Hopf *-algebra: every group element is
/// group-like, `S(g) = g^{-1}`, and the algebra star is `g* = g^{-1}`.
pub fn group_algebra(group: &FiniteGroup) -> Result<Arc<HopfAlgebra>, Error> {
    let mut b = PresentationBuilder::new(&format!("k[{}]", group.name));
    // one generator per non-identity element; the identity is the empty word
    let ids: Vec<_> = group
        .names
        .iter()
        .map(|n| {
            let g = b.gen(n, 0);
            b.term_weight(g, 1);
            b.max_exp(g, 1);
            g
        })
        .collect();
    let elem_word = |e: usize| -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial::gen(ids[e - 1])
        }
    };
    for a in 1..group.order {
        for c in 1..group.order {
            let prod = group.table[a][c];
            b.rule(
                elem_word(a).concat(&elem_word(c)),
                AlgElement::from_term(Scalar::one(), elem_word(prod)),
            );
        }
    }
    for a in 1..group.order {
        let inv = group.inverse(a);
        b.star_gen(ids[a - 1], Scalar::one(), elem_word(inv));
    }
    let algebra = Arc::new(b.build()?);
    if !algebra.presentation().confluence.passed() {
        return Err(Error::Confluence(format!(
            "group table for {} is not associative",
            group.name
        )));
    }
    let mut hb = HopfBuilder::new(Arc::clone(&algebra));
    for a in 1..group.order {
        let g = ids[a - 1];
        let m = Monomial::gen(g);
        hb.delta(
            g,
            TensorElement::from_tuple(Scalar::one(), vec![m.clone(), m.clone()]),
        );
        hb.eps(g, Scalar::one());
        hb.antipode(
            g,
            AlgElement::from_term(Scalar::one(), elem_word(group.inverse(a))),
        );
        hb.grouplike_monomial(m);
    }
    hb.build().map(Arc::new)
}

/// All group-element monomials (including the identity), in element order.
pub fn group_element_monomials(group: &FiniteGroup, algebra: &Algebra) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    for n in &group.names {
        out.push(Monomial::gen(algebra.gen_id(n).expect("group generator")));
    }
    out
}

/// The circle algebra `O(U(1)) = k[sigma, sigma^{-1}]`.
pub fn o_u1() -> Result<Arc<HopfAlgebra>, Error> {
    let mut b = PresentationBuilder::new("O(U(1))");
    let s = b.gen_invertible("s", 1);
    b.star_gen(s, Scalar::one(), Monomial::gen_pow(s, -1));
    let algebra = Arc::new(b.build()?);
    let mut hb = HopfBuilder::new(Arc::clone(&algebra));
    hb.grouplike_gen(s);
    hb.build().map(Arc::new)
}

/// The Hopf *-algebra generated by `E, F, K, K^{-1}` with
/// `KEK^{-1} = qE`, `KFK^{-1} = q^{-1}F`, `[E,F] = (K^2 - K^{-2})/(q - q^{-1})`,
/// `E* = F`, and `S(E) = -qE`.
pub fn uq_sl2(q: &QParam) -> Result<Arc<HopfAlgebra>, Error> {
    let mut b = PresentationBuilder::new("Uq(sl2)");
    let e = b.gen("E", 1);
    let f = b.gen("F", 1);
    let k = b.gen_invertible("K", 1);
    let qv = q.q();
    let qi = q.q_inv();

    // K^{±1} E -> q^{±1} E K^{±1}, K^{±1} F -> q^{∓1} F K^{±1}
    for (x, qpow) in [(e, qv.clone()), (f, qi.clone())] {
        b.rule(
            Monomial::gen(k).concat(&Monomial::gen(x)),
            AlgElement::from_term(qpow.clone(), Monomial::gen(x).concat(&Monomial::gen(k))),
        );
        b.rule(
            Monomial::gen_pow(k, -1).concat(&Monomial::gen(x)),
            AlgElement::from_term(
                qpow.inv()?,
                Monomial::gen(x).concat(&Monomial::gen_pow(k, -1)),
            ),
        );
    }
    // F E -> E F - (K^2 - K^{-2})/(q - q^{-1})
    let c = (&qv - &qi).inv()?;
    let mut rhs = AlgElement::from_term(
        Scalar::one(),
        Monomial::gen(e).concat(&Monomial::gen(f)),
    );
    rhs.add_term(-&c, Monomial::gen_pow(k, 2));
    rhs.add_term(c.clone(), Monomial::gen_pow(k, -2));
    b.rule(Monomial::gen(f).concat(&Monomial::gen(e)), rhs);

    b.star_gen(e, Scalar::one(), Monomial::gen(f));
    b.star_gen(f, Scalar::one(), Monomial::gen(e));
    b.star_gen(k, Scalar::one(), Monomial::gen(k));

    let algebra = Arc::new(b.build()?);
    debug_assert!(algebra.presentation().confluence.passed());

    let mut hb = HopfBuilder::new(Arc::clone(&algebra));
    let mk = Monomial::gen(k);
    let mki = Monomial::gen_pow(k, -1);
    for x in [e, f] {
        let mx = Monomial::gen(x);
        let mut d = TensorElement::zero(2);
        d.add_term(Scalar::one(), vec![mx.clone(), mk.clone()]);
        d.add_term(Scalar::one(), vec![mki.clone(), mx.clone()]);
        hb.delta(x, d);
        hb.eps(x, Scalar::zero());
    }
    hb.antipode(e, AlgElement::from_term(-&qv, Monomial::gen(e)));
    hb.antipode(f, AlgElement::from_term(-&qi, Monomial::gen(f)));
    hb.grouplike_gen(k);
    hb.build().map(Arc::new)
}

/// Named rank <= 2 Cartan matrices.
pub fn cartan_matrix(name: &str) -> Result<Vec<Vec<i64>>, Error> {
    match name {
        "A1" => Ok(vec![vec![2]]),
        "A1xA1" => Ok(vec![vec![2, 0], vec![0, 2]]),
        "A2" => Ok(vec![vec![2, -1], vec![-1, 2]]),
        "B2" => Ok(vec![vec![2, -2], vec![-1, 2]]),
        other => Err(Error::Invalid(format!("unknown Cartan matrix `{other}`"))),
    }
}

fn symmetrizers(a: &[Vec<i64>]) -> Result<Vec<i64>, Error> {
    let rank = a.len();
    for (i, row) in a.iter().enumerate() {
        if row.len() != rank || row[i] != 2 {
            return Err(Error::Invalid("invalid Cartan matrix: diagonal must be 2".into()));
        }
        for (j, &v) in row.iter().enumerate() {
            if i != j && v > 0 {
                return Err(Error::Invalid(
                    "invalid Cartan matrix: off-diagonal entries must be <= 0".into(),
                ));
            }
        }
    }
    let d = match rank {
        1 => vec![1],
        2 => {
            if a[0][1] == 0 && a[1][0] == 0 {
                vec![1, 1]
            } else if a[0][1] == a[1][0] {
                vec![1, 1]
            } else {
                // d1 a12 = d2 a21
                let (d1, d2) = (a[1][0].abs(), a[0][1].abs());
                let g = num_integer::gcd(d1, d2);
                vec![d1 / g, d2 / g]
            }
        }
        _ => {
            return Err(Error::Unsupported(
                "Cartan matrices of rank greater than 2 are not supported".into(),
            ))
        }
    };
    for i in 0..rank {
        for j in 0..rank {
            if d[i] * a[i][j] != d[j] * a[j][i] {
                return Err(Error::Invalid("Cartan matrix is not symmetrizable".into()));
            }
        }
    }
    Ok(d)
}

/// The modular group-like: the exponents `m` with
/// `Ad_{prod K_j^{m_j}} = S^2`, solved from `sum_j m_j d_j a_ji = 4 d_i`.
pub fn canonical_modular_exponents(a: &[Vec<i64>]) -> Result<Vec<i64>, Error> {
    let d = symmetrizers(a)?;
    let rank = a.len();
    let mut mat = SparseMatrix::zero(rank, rank);
    for i in 0..rank {
        for j in 0..rank {
            mat.set(i, j, Scalar::from_int(d[j] * a[j][i]));
        }
    }
    let rhs: Vec<Scalar> = (0..rank).map(|i| Scalar::from_int(4 * d[i])).collect();
    // solve exactly via augmented RREF
    let aug = mat.hstack(&SparseMatrix::from_columns(rank, &[rhs]));
    let (r, pivots) = aug.rref();
    let mut m = vec![Scalar::zero(); rank];
    for &(pr, pc) in &pivots {
        if pc == rank {
            return Err(Error::Solve("modular exponent system is inconsistent".into()));
        }
        m[pc] = r.get(pr, rank);
    }
    m.iter()
        .map(|s| {
            if s.is_rational() && s.re.denom() == &num_bigint::BigInt::from(1) {
                (&s.re.numer().clone()).try_into().map_err(|_| Error::Solve("exponent overflow".into()))
            } else {
                Err(Error::Solve(format!("modular exponent {} is not integral", s)))
            }
        })
        .collect()
}

/// Complexified quantized enveloping algebra for a rank <= 2 Cartan matrix.
/// Relations use `q_i^{a_ij/2}`; when some `d_i a_ij` is odd the parameter
/// must have a rational square root.
pub fn uq_cartan(a: &[Vec<i64>], q: &QParam) -> Result<Arc<HopfAlgebra>, Error> {
    let d = symmetrizers(a)?;
    let rank = a.len();
    let needs_half = (0..rank).any(|i| (0..rank).any(|j| (d[i] * a[i][j]) % 2 != 0));
    let qh = if needs_half {
        q.q_half().ok_or_else(|| {
            Error::QParam(format!(
                "this Cartan matrix needs q^(1/2); {} has no rational square root",
                q.q()
            ))
        })?
    } else {
        q.q()
    };
    // the base power: with halves, qh = q^(1/2) and exponents double
    let qi_pow = |i: usize, num: i64| -> Result<Scalar, Error> {
        // q_i^{num/2} = qh^{e} with e = num * d_i (halved) or num*d_i/2
        if needs_half {
            qh.pow(num * d[i])
        } else {
            qh.pow(num * d[i] / 2)
        }
    };
    let q_i = |i: usize| -> Result<Scalar, Error> { qi_pow(i, 2) };

    let mut b = PresentationBuilder::new(&format!("Uq(rank {rank})"));
    let es: Vec<_> = (0..rank).map(|i| b.gen(&format!("E{}", i + 1), 1)).collect();
    let fs: Vec<_> = (0..rank).map(|i| b.gen(&format!("F{}", i + 1), 1)).collect();
    let ks: Vec<_> = (0..rank)
        .map(|i| b.gen_invertible(&format!("K{}", i + 1), 1))
        .collect();

    // K_i^{±1} X_j commutation
    for i in 0..rank {
        for j in 0..rank {
            for (xs, sign) in [(&es, 1i64), (&fs, -1i64)] {
                for ksign in [1i64, -1] {
                    let coeff = qi_pow(i, sign * ksign * a[i][j])?;
                    b.rule(
                        Monomial::gen_pow(ks[i], ksign).concat(&Monomial::gen(xs[j])),
                        AlgElement::from_term(
                            coeff,
                            Monomial::gen(xs[j]).concat(&Monomial::gen_pow(ks[i], ksign)),
                        ),
                    );
                }
            }
        }
    }
    // K's commute among themselves: order by index
    for i in 0..rank {
        for j in 0..i {
            for si in [1i64, -1] {
                for sj in [1i64, -1] {
                    b.rule(
                        Monomial::gen_pow(ks[i], si).concat(&Monomial::gen_pow(ks[j], sj)),
                        AlgElement::from_term(
                            Scalar::one(),
                            Monomial::gen_pow(ks[j], sj).concat(&Monomial::gen_pow(ks[i], si)),
                        ),
                    );
                }
            }
        }
    }
    // F_j E_i -> E_i F_j - delta_ij (K_i^2 - K_i^{-2})/(q_i - q_i^{-1})
    for i in 0..rank {
        for j in 0..rank {
            let mut rhs = AlgElement::from_term(
                Scalar::one(),
                Monomial::gen(es[i]).concat(&Monomial::gen(fs[j])),
            );
            if i == j {
                let qi = q_i(i)?;
                let c = (&qi - &qi.inv()?).inv()?;
                rhs.add_term(-&c, Monomial::gen_pow(ks[i], 2));
                rhs.add_term(c, Monomial::gen_pow(ks[i], -2));
            }
            b.rule(Monomial::gen(fs[j]).concat(&Monomial::gen(es[i])), rhs);
        }
    }
    // quantum Serre relations, oriented at the maximal-inversion word
    let qbinom = |n: i64, r: i64, qi: &Scalar| -> Result<Scalar, Error> {
        let qnum = |m: i64| -> Result<Scalar, Error> {
            Ok(&(&qi.pow(m)? - &qi.pow(-m)?) * &(&qi.pow(1)? - &qi.pow(-1)?).inv()?)
        };
        let fact = |m: i64| -> Result<Scalar, Error> {
            let mut acc = Scalar::one();
            for t in 1..=m {
                acc = &acc * &qnum(t)?;
            }
            Ok(acc)
        };
        Ok(&fact(n)? * &(&fact(r)? * &fact(n - r)?).inv()?)
    };
    for i in 0..rank {
        for j in 0..rank {
            if i == j || a[i][j] == 0 {
                // a_ij = 0: plain commutation E_i E_j = E_j E_i (Serre n=1)
                if i > j && a.len() > 1 && a[i][j] == 0 && i != j {
                    for xs in [&es, &fs] {
                        b.rule(
                            Monomial::gen(xs[i]).concat(&Monomial::gen(xs[j])),
                            AlgElement::from_term(
                                Scalar::one(),
                                Monomial::gen(xs[j]).concat(&Monomial::gen(xs[i])),
                            ),
                        );
                    }
                }
                continue;
            }
            let n = 1 - a[i][j];
            let qi = q_i(i)?;
            for xs in [&es, &fs] {
                // sum_r (-1)^r [n r]_{q_i} X_i^{n-r} X_j X_i^r = 0
                let word = |r: i64| -> Monomial {
                    Monomial::gen_pow(xs[i], n - r)
                        .concat(&Monomial::gen(xs[j]))
                        .concat(&Monomial::gen_pow(xs[i], r))
                };
                // leading word: the one with maximal inversions
                let lead_r = if xs[i] > xs[j] { 0 } else { n };
                let lead_coeff = if lead_r % 2 == 0 {
                    qbinom(n, lead_r, &qi)?
                } else {
                    -&qbinom(n, lead_r, &qi)?
                };
                let mut rhs = AlgElement::zero();
                for r in 0..=n {
                    if r == lead_r {
                        continue;
                    }
                    let mut c = qbinom(n, r, &qi)?;
                    if r % 2 != 0 {
                        c = -&c;
                    }
                    // move to the right-hand side and divide by the leading coefficient
                    rhs.add_term(&(-&c) * &lead_coeff.inv()?, word(r));
                }
                b.rule(word(lead_r), rhs);
            }
        }
    }

    for i in 0..rank {
        b.star_gen(es[i], Scalar::one(), Monomial::gen(fs[i]));
        b.star_gen(fs[i], Scalar::one(), Monomial::gen(es[i]));
        b.star_gen(ks[i], Scalar::one(), Monomial::gen(ks[i]));
    }

    let algebra = Arc::new(b.build()?);
    let mut hb = HopfBuilder::new(Arc::clone(&algebra));
    for i in 0..rank {
        let (mk, mki) = (Monomial::gen(ks[i]), Monomial::gen_pow(ks[i], -1));
        for x in [es[i], fs[i]] {
            let mx = Monomial::gen(x);
            let mut dt = TensorElement::zero(2);
            dt.add_term(Scalar::one(), vec![mx.clone(), mk.clone()]);
            dt.add_term(Scalar::one(), vec![mki.clone(), mx.clone()]);
            hb.delta(x, dt);
            hb.eps(x, Scalar::zero());
        }
        let qi = q_i(i)?;
        hb.antipode(es[i], AlgElement::from_term(-&qi, Monomial::gen(es[i])));
        hb.antipode(fs[i], AlgElement::from_term(-&qi.inv()?, Monomial::gen(fs[i])));
        hb.grouplike_gen(ks[i]);
    }
    hb.build().map(Arc::new)
}

/// Monomial `prod K_i^{m_i}` in a `uq_cartan` algebra.
pub fn cartan_k_monomial(h: &HopfAlgebra, exps: &[i64]) -> Result<Monomial, Error> {
    let mut runs = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        runs.push((h.algebra().gen_id(&format!("K{}", i + 1))?, e));
    }
    Ok(Monomial::from_runs(runs))
}

/// Coordinate Hopf *-algebra of quantum `SU(2)`, generators `x, u, v, y`.
///
/// Normal forms are the ascending words `u^b v^c x^a` and `u^b v^c y^d`
/// (`x` and `y` never mix).
pub fn o_suq2(q: &QParam) -> Result<Arc<HopfAlgebra>, Error> {
    let mut b = PresentationBuilder::new("O(SUq(2))");
    let u = b.gen("u", 1);
    let v = b.gen("v", 1);
    let x = b.gen("x", 1);
    let y = b.gen("y", 1);
    for g in [x, y] {
        b.term_weight(g, 2);
    }
    let qv = q.q();
    let qi = q.q_inv();
    let m = Monomial::gen;
    // x moves right past u, v; y moves right past u, v
    b.rule(m(x).concat(&m(u)), AlgElement::from_term(qi.clone(), m(u).concat(&m(x))));
    b.rule(m(x).concat(&m(v)), AlgElement::from_term(qi.clone(), m(v).concat(&m(x))));
    b.rule(m(y).concat(&m(u)), AlgElement::from_term(qv.clone(), m(u).concat(&m(y))));
    b.rule(m(y).concat(&m(v)), AlgElement::from_term(qv.clone(), m(v).concat(&m(y))));
    b.rule(m(v).concat(&m(u)), AlgElement::from_term(Scalar::one(), m(u).concat(&m(v))));
    // xy = 1 + q^{-1} uv, yx = 1 + q uv
    let mut rhs = AlgElement::one();
    rhs.add_term(qi.clone(), m(u).concat(&m(v)));
    b.rule(m(x).concat(&m(y)), rhs);
    let mut rhs = AlgElement::one();
    rhs.add_term(qv.clone(), m(u).concat(&m(v)));
    b.rule(m(y).concat(&m(x)), rhs);

    b.star_gen(x, Scalar::one(), m(y));
    b.star_gen(y, Scalar::one(), m(x));
    b.star_gen(u, -&qi, m(v));
    b.star_gen(v, -&qv, m(u));

    let algebra = Arc::new(b.build()?);
    if !algebra.presentation().confluence.passed() {
        return Err(Error::Confluence(format!(
            "O(SUq(2)) rules: {:?}",
            algebra.presentation().confluence.failures
        )));
    }

    let mut hb = HopfBuilder::new(Arc::clone(&algebra));
    let t2 = |a: (usize, usize), b: (usize, usize)| -> TensorElement {
        let mut t = TensorElement::zero(2);
        t.add_term(Scalar::one(), vec![m(a.0).concat(&Monomial::one()), m(a.1)]);
        t.add_term(Scalar::one(), vec![m(b.0), m(b.1)]);
        t
    };
    hb.delta(x, t2((x, x), (u, v)));
    hb.delta(u, t2((x, u), (u, y)));
    hb.delta(v, t2((v, x), (y, v)));
    hb.delta(y, t2((v, u), (y, y)));
    hb.eps(x, Scalar::one());
    hb.eps(y, Scalar::one());
    hb.eps(u, Scalar::zero());
    hb.eps(v, Scalar::zero());
    hb.antipode(x, AlgElement::from_term(Scalar::one(), m(y)));
    hb.antipode(y, AlgElement::from_term(Scalar::one(), m(x)));
    hb.antipode(u, AlgElement::from_term(-&qv, m(u)));
    hb.antipode(v, AlgElement::from_term(-&qi, m(v)));
    hb.build().map(Arc::new)
}

/// Exact Haar values on a truncated basis, solved from the invariance
/// equations.
pub struct HaarState {
    pub values: BTreeMap<Monomial, Scalar>,
    pub bound: u64,
}

impl HaarState {
    pub fn eval(&self, x: &AlgElement) -> Result<Scalar, Error> {
        let mut out = Scalar::zero();
        for (m, c) in x.iter() {
            let v = self.values.get(m).ok_or_else(|| {
                Error::Invalid(format!(
                    "Haar value requested beyond the solved bound {}",
                    self.bound
                ))
            })?;
            out = &out + &(v * c);
        }
        Ok(out)
    }
}

/// Solve `(h (x) id) delta(a) = h(a) 1 = (id (x) h) delta(a)` together with
/// `h(1) = 1` on the filtration-`<= n` basis. The solution must be unique.
pub fn solve_haar(suq2: &HopfAlgebra, n: u64) -> Result<HaarState, Error> {
    if n < 2 {
        return Err(Error::Invalid("Haar bound must be at least 2".into()));
    }
    let alg = suq2.algebra();
    let basis = alg.basis_up_to(n)?;
    let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let ncols = basis.len();

    // rows: coefficients of unknowns h(m), last column is the constant side
    let mut rows: Vec<BTreeMap<usize, Scalar>> = Vec::new();
    let mut push_row = |r: BTreeMap<usize, Scalar>| {
        if !r.is_empty() {
            rows.push(r);
        }
    };

    for a in &basis {
        let two = suq2.coproduct_monomial(a);
        let ai = index[a];
        // left invariance: sum_t c_t h(m1_t) m2_t - h(a) 1 = 0
        let mut by_second: BTreeMap<Monomial, BTreeMap<usize, Scalar>> = BTreeMap::new();
        let mut by_first: BTreeMap<Monomial, BTreeMap<usize, Scalar>> = BTreeMap::new();
        for (t, c) in two.iter() {
            let (m1, m2) = (&t[0], &t[1]);
            if let Some(&i1) = index.get(m1) {
                let row = by_second.entry(m2.clone()).or_default();
                let cur = row.get(&i1).cloned().unwrap_or_else(Scalar::zero);
                row.insert(i1, &cur + c);
            } else {
                return Err(Error::Invalid("coproduct leg escaped the window".into()));
            }
            if let Some(&i2) = index.get(m2) {
                let row = by_first.entry(m1.clone()).or_default();
                let cur = row.get(&i2).cloned().unwrap_or_else(Scalar::zero);
                row.insert(i2, &cur + c);
            } else {
                return Err(Error::Invalid("coproduct leg escaped the window".into()));
            }
        }
        for (m2, mut row) in by_second {
            if m2.is_one() {
                let cur = row.get(&ai).cloned().unwrap_or_else(Scalar::zero);
                row.insert(ai, &cur - &Scalar::one());
            }
            row.retain(|_, v| !v.is_zero());
            push_row(row);
        }
        for (m1, mut row) in by_first {
            if m1.is_one() {
                let cur = row.get(&ai).cloned().unwrap_or_else(Scalar::zero);
                row.insert(ai, &cur - &Scalar::one());
            }
            row.retain(|_, v| !v.is_zero());
            push_row(row);
        }
    }

    // assemble [A | b] with b from h(1) = 1
    let mut mat = SparseMatrix::zero(rows.len() + 1, ncols + 1);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row {
            mat.set(r, *c, v.clone());
        }
    }
    let one_idx = index[&Monomial::one()];
    mat.set(rows.len(), one_idx, Scalar::one());
    mat.set(rows.len(), ncols, Scalar::one());

    let (rref, pivots) = mat.rref();
    let mut values: Vec<Option<Scalar>> = vec![None; ncols];
    for &(pr, pc) in &pivots {
        if pc == ncols {
            return Err(Error::Solve("Haar system is inconsistent".into()));
        }
        // unique solution requires the pivot row to touch nothing else
        let row_support: Vec<usize> = (0..ncols).filter(|&c| !rref.get(pr, c).is_zero()).collect();
        if row_support != vec![pc] {
            return Err(Error::Solve(
                "Haar system is underdetermined on the window".into(),
            ));
        }
        values[pc] = Some(rref.get(pr, ncols));
    }
    if values.iter().any(|v| v.is_none()) {
        return Err(Error::Solve(
            "Haar system is underdetermined: some basis values unconstrained".into(),
        ));
    }
    Ok(HaarState {
        values: basis
            .into_iter()
            .zip(values.into_iter().map(Option::unwrap))
            .collect(),
        bound: n,
    })
}

/// Residual of the invariance property for one element, `(h (x) id) delta(a)
/// - h(a) 1`, as an algebra element.
pub fn haar_invariance_residual(
    suq2: &HopfAlgebra,
    haar: &HaarState,
    a: &AlgElement,
) -> Result<AlgElement, Error> {
    let two = suq2.coproduct(a, 2);
    let mut out = AlgElement::zero();
    for (t, c) in two.iter() {
        let hv = haar.eval(&AlgElement::from_term(Scalar::one(), t[0].clone()))?;
        out.add_term(&hv * c, t[1].clone());
    }
    out.add_term(-&haar.eval(a)?, Monomial::one());
    Ok(out)
}

/// Solve the modular character `f1` from `h(ab) = h(b (f1 . a . f1))` on
/// low-degree monomial pairs; `f1` kills `u` and `v`, and `f1(x) f1(y) = 1`.
pub fn solve_f1(suq2: &HopfAlgebra, haar: &HaarState) -> Result<Vec<Scalar>, Error> {
    let alg = suq2.algebra();
    let (gu, gv, gx, gy) = (
        alg.gen_id("u")?,
        alg.gen_id("v")?,
        alg.gen_id("x")?,
        alg.gen_id("y")?,
    );
    // probe pair: a = x, b = y gives h(xy) = t^2 h(yx) with t = f1(x)
    let x = AlgElement::from_gen(gx);
    let y = AlgElement::from_gen(gy);
    let hxy = haar.eval(&alg.mul(&x, &y))?;
    let hyx = haar.eval(&alg.mul(&y, &x))?;
    if hyx.is_zero() {
        return Err(Error::Solve("h(yx) = 0; cannot solve f1".into()));
    }
    let t2 = &hxy / &hyx;
    if !t2.is_rational() {
        return Err(Error::Solve("f1(x)^2 is not rational".into()));
    }
    let t = rational_sqrt(&t2.re)
        .ok_or_else(|| Error::Solve(format!("f1(x)^2 = {} has no rational root", t2)))?;

    let make = |tval: Scalar| -> Result<Vec<Scalar>, Error> {
        let mut vals = vec![Scalar::zero(); alg.gen_count()];
        vals[gu] = Scalar::zero();
        vals[gv] = Scalar::zero();
        vals[gx] = tval.clone();
        vals[gy] = tval.inv()?;
        Ok(vals)
    };
    // validate the modular property on all degree <= 2 monomial pairs and
    // pick the consistent sign
    let candidates = [
        make(Scalar::from_rational(t.clone()))?,
        make(-&Scalar::from_rational(t))?,
    ];
    let basis = alg.basis_up_to(2)?;
    'cand: for vals in candidates {
        let fchar = |m: &Monomial| -> Result<Scalar, Error> {
            let mut v = Scalar::one();
            for &(g, e) in m.runs() {
                v = &v * &vals[g].pow(e)?;
            }
            Ok(v)
        };
        for a in &basis {
            for bm in &basis {
                // f1 . a . f1 = f1(a_(1)) a_(2) f1(a_(3))
                let three = suq2.coproduct_monomial_legs(a, 3);
                let mut twisted = AlgElement::zero();
                for (t3, c) in three.iter() {
                    let c1 = fchar(&t3[0])?;
                    if c1.is_zero() {
                        continue;
                    }
                    let c3 = fchar(&t3[2])?;
                    if c3.is_zero() {
                        continue;
                    }
                    twisted.add_term(&(&c1 * &c3) * c, t3[1].clone());
                }
                let lhs = haar.eval(&alg.mul(
                    &AlgElement::from_term(Scalar::one(), a.clone()),
                    &AlgElement::from_term(Scalar::one(), bm.clone()),
                ))?;
                let rhs = haar.eval(&alg.mul(
                    &AlgElement::from_term(Scalar::one(), bm.clone()),
                    &twisted,
                ))?;
                if lhs != rhs {
                    continue 'cand;
                }
            }
        }
        return Ok(vals);
    }
    Err(Error::Solve(
        "no sign of f1(x) satisfies the modular property".into(),
    ))
}

/// The Podleś sphere `O(S_q(c,d))` with its embedding into `O(SUq(2))`,
/// the two coactions, and the Haar state pulled back along the embedding.
pub struct Podles {
    pub q: QParam,
    pub c: Rational,
    pub d: Rational,
    pub algebra: Arc<Algebra>,
    pub suq2: Arc<HopfAlgebra>,
    pub ou1: Arc<HopfAlgebra>,
    gen_zm: usize,
    gen_z0: usize,
    gen_zp: usize,
}

/// `O(S_q(c, d))`; for the one-parameter family use [`podles_s`].
pub fn podles(q: &QParam, c: Rational, d: Rational) -> Result<Podles, Error> {
    if q.root().is_none() {
        return Err(Error::QParam(
            "Podleś construction needs the square root of 1 + q^2".into(),
        ));
    }
    let qv = q.q();
    let qi = q.q_inv();
    let q2 = &qv * &qv;
    let cs = Scalar::from_rational(c.clone());
    let ds = Scalar::from_rational(d.clone());

    let mut b = PresentationBuilder::new(&format!("O(Sq({},{}))", c, d));
    let zm = b.gen("zm", 1);
    let z0 = b.gen("z0", 1);
    let zp = b.gen("zp", 1);
    b.term_weight(zm, 2);
    b.term_weight(zp, 2);
    b.grade(zm, vec![2]);
    b.grade(z0, vec![0]);
    b.grade(zp, vec![-2]);
    let m = Monomial::gen;

    // z0 zm = q^{-2} zm z0 - q^{-2}(1 - q^2) c zm
    let one_minus_q2 = &Scalar::one() - &q2;
    let q2inv = (&q2).inv()?;
    let mut rhs = AlgElement::from_term(q2inv.clone(), m(zm).concat(&m(z0)));
    rhs.add_term(&(-&q2inv) * &(&one_minus_q2 * &cs), m(zm));
    b.rule(m(z0).concat(&m(zm)), rhs);
    // zp z0 = q^{-2} z0 zp - q^{-2}(1 - q^2) c zp
    let mut rhs = AlgElement::from_term(q2inv.clone(), m(z0).concat(&m(zp)));
    rhs.add_term(&(-&q2inv) * &(&one_minus_q2 * &cs), m(zp));
    b.rule(m(zp).concat(&m(z0)), rhs);
    // zm zp = (q^2 z0^2 + (1-q^2) c z0 - d) / (q + q^{-1})
    let denom = (&qv + &qi).inv()?;
    let mut zmzp = AlgElement::from_term(&q2 * &denom, Monomial::gen_pow(z0, 2));
    zmzp.add_term(&(&one_minus_q2 * &cs) * &denom, m(z0));
    zmzp.add_term(&(-&ds) * &denom, Monomial::one());
    b.rule(m(zm).concat(&m(zp)), zmzp.clone());
    // zp zm = q^{-1} z0^2 - q^{-1} d - q^{-2} (zm zp)
    let mut zpzm = AlgElement::from_term(qi.clone(), Monomial::gen_pow(z0, 2));
    zpzm.add_term(-&(&qi * &ds), Monomial::one());
    let scaled = zmzp.scale(&-&q2inv);
    let zpzm = zpzm.add(&scaled);
    b.rule(m(zp).concat(&m(zm)), zpzm);

    // z_i* = (-q)^i z_{-i}
    b.star_gen(zm, -&qi, m(zp));
    b.star_gen(z0, Scalar::one(), m(z0));
    b.star_gen(zp, -&qv, m(zm));

    let algebra = Arc::new(b.build()?);
    if !algebra.presentation().confluence.passed() {
        return Err(Error::Confluence(format!(
            "Podleś rules: {:?}",
            algebra.presentation().confluence.failures
        )));
    }
    Ok(Podles {
        q: q.clone(),
        c,
        d,
        algebra,
        suq2: o_suq2(q)?,
        ou1: o_u1()?,
        gen_zm: zm,
        gen_z0: z0,
        gen_zp: zp,
    })
}

/// `O(S^2_{qs}) = O(S_q(s, 1 + s^2))`.
pub fn podles_s(q: &QParam, s: Rational) -> Result<Podles, Error> {
    let d = Rational::from_integer(1.into()) + &s * &s;
    podles(q, s, d)
}

impl Podles {
    pub fn z(&self, i: i32) -> AlgElement {
        let g = match i {
            -1 => self.gen_zm,
            0 => self.gen_z0,
            1 => self.gen_zp,
            _ => panic!("Podleś generator index must be -1, 0, or 1"),
        };
        AlgElement::from_gen(g)
    }

    /// Images of `z_{-1}, z_0, z_1` in `O(SUq(2))` (the tilde generators).
    pub fn tilde_images(&self) -> Result<[AlgElement; 3], Error> {
        let alg = self.suq2.algebra();
        let (gu, gv, gx, gy) = (
            alg.gen_id("u")?,
            alg.gen_id("v")?,
            alg.gen_id("x")?,
            alg.gen_id("y")?,
        );
        let m = Monomial::gen;
        let qv = self.q.q();
        let r = self.q.root().expect("root present");
        let c2 = r.inv()?; // (1+q^2)^{-1/2}
        let c1 = self.q.root_inv_scaled().expect("root present"); // (1+q^-2)^{1/2}
        let s = Scalar::from_rational(self.c.clone());

        // zm ~ c2 x^2 + s c1 x v - q c2 v^2
        let mut zm = AlgElement::from_term(c2.clone(), Monomial::gen_pow(gx, 2));
        zm.add_term(&s * &c1, m(gx).concat(&m(gv)));
        zm.add_term(-&(&qv * &c2), Monomial::gen_pow(gv, 2));
        // z0 ~ u x + s (1 + (q + q^{-1}) u v) - v y
        let mut z0 = AlgElement::from_term(Scalar::one(), m(gu).concat(&m(gx)));
        z0.add_term(s.clone(), Monomial::one());
        z0.add_term(&s * &(&qv + &self.q.q_inv()), m(gu).concat(&m(gv)));
        z0.add_term(-&Scalar::one(), m(gv).concat(&m(gy)));
        // zp ~ c2 u^2 + s c1 y u - q c2 y^2
        let mut zp = AlgElement::from_term(c2.clone(), Monomial::gen_pow(gu, 2));
        zp.add_term(&s * &c1, m(gy).concat(&m(gu)));
        zp.add_term(-&(&qv * &c2), Monomial::gen_pow(gy, 2));

        let alg = self.suq2.algebra();
        Ok([alg.normalize(&zm), alg.normalize(&z0), alg.normalize(&zp)])
    }

    /// Algebra map into `O(SUq(2))` sending `z_i` to the tilde generators.
    pub fn embed(&self, x: &AlgElement) -> Result<AlgElement, Error> {
        let images = self.tilde_images()?;
        let target = self.suq2.algebra();
        let mut out = AlgElement::zero();
        for (m, c) in x.iter() {
            let mut acc = AlgElement::one();
            for &(g, e) in m.runs() {
                let img = if g == self.gen_zm {
                    &images[0]
                } else if g == self.gen_z0 {
                    &images[1]
                } else {
                    &images[2]
                };
                for _ in 0..e {
                    acc = target.mul(&acc, img);
                }
            }
            for (am, ac) in acc.iter() {
                out.add_term(ac * c, am.clone());
            }
        }
        Ok(out)
    }

    /// Residuals of the four defining relations evaluated on the tilde
    /// generators inside `O(SUq(2))`; all must vanish.
    pub fn relation_residuals(&self) -> Result<Vec<AlgElement>, Error> {
        let t = self.suq2.algebra();
        let [zm, z0, zp] = self.tilde_images()?;
        let qv = self.q.q();
        let qi = self.q.q_inv();
        let q2 = &qv * &qv;
        let cs = Scalar::from_rational(self.c.clone());
        let ds = Scalar::from_rational(self.d.clone());
        let one = AlgElement::one();

        let r1 = t
            .mul(&z0, &z0)
            .sub(&t.mul(&zp, &zm).scale(&qv))
            .sub(&t.mul(&zm, &zp).scale(&qi))
            .sub(&one.scale(&ds));
        let r2 = t
            .mul(&z0, &z0)
            .scale(&(&Scalar::one() - &q2))
            .add(&t.mul(&zm, &zp).scale(&qv))
            .sub(&t.mul(&zp, &zm).scale(&qv))
            .sub(&z0.scale(&(&(&Scalar::one() - &q2) * &cs)));
        let r3 = t
            .mul(&zm, &z0)
            .sub(&t.mul(&z0, &zm).scale(&q2))
            .sub(&zm.scale(&(&(&Scalar::one() - &q2) * &cs)));
        let r4 = t
            .mul(&z0, &zp)
            .sub(&t.mul(&zp, &z0).scale(&q2))
            .sub(&zp.scale(&(&(&Scalar::one() - &q2) * &cs)));
        Ok(vec![r1, r2, r3, r4])
    }

    /// `sigma`-weight of a normal-form monomial: `2 #zm - 2 #zp`.
    pub fn weight(&self, m: &Monomial) -> i64 {
        m.runs()
            .iter()
            .map(|&(g, e)| {
                if g == self.gen_zm {
                    2 * e
                } else if g == self.gen_zp {
                    -2 * e
                } else {
                    0
                }
            })
            .sum()
    }

    /// Weight decomposition `a = sum a_{2m}` with `rho(a_{2m}) = a_{2m} (x) sigma^{2m}`.
    pub fn grading(&self, x: &AlgElement) -> BTreeMap<i64, AlgElement> {
        let mut out: BTreeMap<i64, AlgElement> = BTreeMap::new();
        for (m, c) in x.iter() {
            out.entry(self.weight(m))
                .or_insert_with(AlgElement::zero)
                .add_term(c.clone(), m.clone());
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// The `O(U(1))`-coaction `rho`: legs in (this algebra, `O(U(1))`).
    pub fn coaction_u1(&self, x: &AlgElement) -> Result<TensorElement, Error> {
        let sig = self.ou1.algebra().gen_id("s")?;
        let mut out = TensorElement::zero(2);
        for (m, c) in x.iter() {
            out.add_term(
                c.clone(),
                vec![m.clone(), Monomial::gen_pow(sig, self.weight(m))],
            );
        }
        Ok(out)
    }

    /// The matrix of coaction coefficients `W_1` over `O(SUq(2))`; entry
    /// `[j][i]` multiplies `z_j` in `delta(z_i)`.
    pub fn w1(&self) -> Result<[[AlgElement; 3]; 3], Error> {
        let alg = self.suq2.algebra();
        let (gu, gv, gx, gy) = (
            alg.gen_id("u")?,
            alg.gen_id("v")?,
            alg.gen_id("x")?,
            alg.gen_id("y")?,
        );
        let m = Monomial::gen;
        let r = self.q.root().expect("root present");
        let qv = self.q.q();
        let qi = self.q.q_inv();
        let term = |c: Scalar, w: Monomial| AlgElement::from_term(c, w);
        let w00 = term(Scalar::one(), Monomial::gen_pow(gx, 2));
        let w01 = term(r.clone(), m(gx).concat(&m(gu)));
        let w02 = term(Scalar::one(), Monomial::gen_pow(gu, 2));
        let w10 = term(r.clone(), m(gx).concat(&m(gv)));
        let mut w11 = AlgElement::one();
        w11.add_term(&qv + &qi, m(gu).concat(&m(gv)));
        let w12 = term(r.clone(), m(gu).concat(&m(gy)));
        let w20 = term(Scalar::one(), Monomial::gen_pow(gv, 2));
        let w21 = term(r.clone(), m(gv).concat(&m(gy)));
        let w22 = term(Scalar::one(), Monomial::gen_pow(gy, 2));
        let n = |e: AlgElement| alg.normalize(&e);
        Ok([
            [n(w00), n(w01), n(w02)],
            [n(w10), n(w11), n(w12)],
            [n(w20), n(w21), n(w22)],
        ])
    }

    /// Residuals of `delta(tilde z_i) = sum_j tilde z_j (x) w_{j,i}` inside
    /// `O(SUq(2)) (x) O(SUq(2))`.
    pub fn equivariance_residuals(&self) -> Result<Vec<TensorElement>, Error> {
        let images = self.tilde_images()?;
        let w = self.w1()?;
        let mut out = Vec::new();
        for i in 0..3 {
            let lhs = self.suq2.coproduct(&images[i], 2);
            let mut rhs = TensorElement::zero(2);
            for j in 0..3 {
                let t = TensorElement::from_algebra_element(&images[j])
                    .tensor(&TensorElement::from_algebra_element(&w[j][i]));
                rhs = rhs.add(&t);
            }
            out.push(lhs.sub(&rhs));
        }
        Ok(out)
    }

    /// The coalgebra quotient `pi_I: O(SUq(2)) -> O(U(1))`: `x -> s`,
    /// `y -> s^{-1}`, `u, v -> 0`.
    pub fn pi_i(&self, x: &AlgElement) -> Result<AlgElement, Error> {
        let alg = self.suq2.algebra();
        let (gu, gv, gx, gy) = (
            alg.gen_id("u")?,
            alg.gen_id("v")?,
            alg.gen_id("x")?,
            alg.gen_id("y")?,
        );
        let sig = self.ou1.algebra().gen_id("s")?;
        let mut out = AlgElement::zero();
        'terms: for (m, c) in x.iter() {
            let mut e_total = 0i64;
            for &(g, e) in m.runs() {
                if g == gu || g == gv {
                    continue 'terms;
                }
                if g == gx {
                    e_total += e;
                } else if g == gy {
                    e_total -= e;
                }
            }
            out.add_term(c.clone(), Monomial::gen_pow(sig, e_total));
        }
        Ok(out)
    }

    /// The unitary `u` over `O(S^2_q)` (`s = 0`): entries
    /// `[[q^{-1} z0, sqrt(1+q^{-2}) z1], [sqrt(1+q^2) z_{-1}, q z0]]`.
    pub fn unitary(&self) -> [[AlgElement; 2]; 2] {
        let r = self.q.root().expect("root present");
        let riq = self.q.root_inv_scaled().expect("root present");
        [
            [
                self.z(0).scale(&self.q.q_inv()),
                self.z(1).scale(&riq),
            ],
            [self.z(-1).scale(&r), self.z(0).scale(&self.q.q())],
        ]
    }

    /// Haar state of `O(SUq(2))` pulled back along the tilde embedding.
    pub fn haar_eval(&self, haar: &HaarState, x: &AlgElement) -> Result<Scalar, Error> {
        haar.eval(&self.embed(x)?)
    }
}

/// All vectors `(u_i, v_i)` of the coextension `E_1`-cell recursion with the
/// induced `w_i`, for column `r` and boundary exponent `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct E1Cell {
    pub u: Vec<u32>,
    pub v: Vec<u32>,
    pub w: Vec<u64>,
}

/// Enumerate the `E_1` cells: non-negative `(u_i, v_i)`, `1 <= i <= r`, with
/// `w_{i+1} = w_i + (u_{i+1} + v_{i+1}) + (u_i + v_i)`, `u_0 = v_0 = w_0 = 0`,
/// `u_{r+1} = v_{r+1} = 0`, `w_{r+1} = m`. Empty unless `m` is even, in which
/// case the constraint is `sum_i (u_i + v_i) = m/2`.
pub fn e1_basis(r: u32, m: u64) -> Vec<E1Cell> {
    if m % 2 != 0 {
        return Vec::new();
    }
    let half = m / 2;
    if r == 0 {
        return if half == 0 {
            vec![E1Cell {
                u: vec![],
                v: vec![],
                w: vec![],
            }]
        } else {
            Vec::new()
        };
    }
    // all (u, v) in N^{2r} with total sum = half
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<u32>, u64)> = vec![(0, Vec::new(), 0)];
    while let Some((pos, prefix, used)) = stack.pop() {
        if pos == 2 * r as usize {
            if used == half {
                let u: Vec<u32> = prefix.iter().step_by(2).copied().collect();
                let v: Vec<u32> = prefix.iter().skip(1).step_by(2).copied().collect();
                let mut w = Vec::with_capacity(r as usize);
                let mut prev_w = 0u64;
                let mut prev_uv = 0u64;
                for i in 0..r as usize {
                    let uv = u64::from(u[i]) + u64::from(v[i]);
                    let wi = prev_w + uv + prev_uv;
                    w.push(wi);
                    prev_w = wi;
                    prev_uv = uv;
                }
                out.push(E1Cell { u, v, w });
            }
            continue;
        }
        for val in 0..=(half - used) {
            let mut p = prefix.clone();
            p.push(val as u32);
            stack.push((pos + 1, p, used + val));
        }
    }
    out.sort_by(|a, b| (&a.u, &a.v).cmp(&(&b.u, &b.v)));
    out
}

/// Exact solution space of `delta(h) = 1 (x) h + h (x) sigma` within the
/// filtration window, modulo the coboundary line `k (1 - sigma)`. Returns
/// the quotient dimension and kernel representatives.
pub fn skew_primitive_space(
    hopf: &HopfAlgebra,
    sigma: &Monomial,
    bound: u64,
) -> Result<(usize, Vec<AlgElement>), Error> {
    let alg = hopf.algebra();
    let basis = alg.basis_up_to(bound)?;
    let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();

    // rows indexed by leg pairs, columns by basis monomials
    let mut pair_index: BTreeMap<(Monomial, Monomial), usize> = BTreeMap::new();
    let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
    let mut row_of = |pair_index: &mut BTreeMap<(Monomial, Monomial), usize>,
                      p: (Monomial, Monomial)| {
        let next = pair_index.len();
        *pair_index.entry(p).or_insert(next)
    };
    for (col, mref) in basis.iter().enumerate() {
        let two = hopf.coproduct_monomial(mref);
        for (t, c) in two.iter() {
            let r = row_of(&mut pair_index, (t[0].clone(), t[1].clone()));
            triplets.push((r, col, c.clone()));
        }
        let r = row_of(&mut pair_index, (Monomial::one(), mref.clone()));
        triplets.push((r, col, -&Scalar::one()));
        let r = row_of(&mut pair_index, (mref.clone(), sigma.clone()));
        triplets.push((r, col, -&Scalar::one()));
    }
    let mut mat = SparseMatrix::zero(pair_index.len(), basis.len());
    for (r, c, v) in triplets {
        mat.add_to(r, c, &v);
    }
    let (_, kernel) = mat.rank_kernel();

    // quotient by the coboundary 1 - sigma from degree zero
    let mut cobound = vec![Scalar::zero(); basis.len()];
    let one_i = index[&Monomial::one()];
    cobound[one_i] = Scalar::one();
    let sig_nf = alg.normalize_word(sigma);
    for (m, c) in sig_nf.iter() {
        let i = *index
            .get(m)
            .ok_or_else(|| Error::Invalid("sigma outside the window".into()))?;
        cobound[i] = &cobound[i] - c;
    }
    let cobound_nonzero = cobound.iter().any(|c| !c.is_zero());

    let dim = basis.len();
    let mut acc = if cobound_nonzero {
        SparseMatrix::from_columns(dim, &[cobound])
    } else {
        SparseMatrix::zero(dim, 0)
    };
    let mut acc_rank = acc.rank();
    let mut reps = Vec::new();
    for v in kernel {
        let grown = acc.hstack(&SparseMatrix::from_columns(dim, &[v.clone()]));
        let r = grown.rank();
        if r > acc_rank {
            let mut elem = AlgElement::zero();
            for (i, c) in v.iter().enumerate() {
                elem.add_term(c.clone(), basis[i].clone());
            }
            reps.push(elem);
            acc = grown;
            acc_rank = r;
        }
    }
    Ok((reps.len(), reps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q34() -> QParam {
        QParam::from_ratio(3, 4, true).unwrap()
    }

    #[test]
    fn cyclic_group_algebra() {
        let g2 = FiniteGroup::cyclic(2);
        let h = group_algebra(&g2).unwrap();
        let alg = h.algebra();
        let g = AlgElement::from_gen(alg.gen_id("g").unwrap());
        // g * g = 1
        assert_eq!(alg.mul(&g, &g), AlgElement::one());
        // star g = g
        assert_eq!(alg.star(&g).unwrap(), g);
        // basis is {1, g}
        assert_eq!(alg.basis_up_to(0).unwrap().len(), 2);
    }

    #[test]
    fn s3_is_a_group_algebra() {
        let s3 = FiniteGroup::s3();
        let h = group_algebra(&s3).unwrap();
        let alg = h.algebra();
        assert_eq!(alg.basis_up_to(0).unwrap().len(), 6);
        // r * r2 = 1, s * s = 1
        let r = AlgElement::from_gen(alg.gen_id("r").unwrap());
        let r2 = AlgElement::from_gen(alg.gen_id("r2").unwrap());
        let s = AlgElement::from_gen(alg.gen_id("s").unwrap());
        assert_eq!(alg.mul(&r, &r2), AlgElement::one());
        assert_eq!(alg.mul(&s, &s), AlgElement::one());
        // the group is nonabelian
        assert_ne!(alg.mul(&r, &s), alg.mul(&s, &r));
    }

    #[test]
    fn uq_sl2_normal_forms() {
        let h = uq_sl2(&q34()).unwrap();
        let alg = h.algebra();
        let e = h.gen_element("E").unwrap();
        let f = h.gen_element("F").unwrap();
        let k = h.gen_element("K").unwrap();
        // K E = q E K
        let ke = alg.mul(&k, &e);
        let ek = alg.mul(&e, &k);
        assert_eq!(ke, ek.scale(&q34().q()));
        // F E = E F - (K^2 - K^{-2})/(q - q^{-1})
        let fe = alg.mul(&f, &e);
        let q = q34().q();
        let c = (&q - &q.inv().unwrap()).inv().unwrap();
        let mut expect = alg.mul(&e, &f);
        expect.add_term(-&c, h.monomial(&[("K", 2)]).unwrap());
        expect.add_term(c, h.monomial(&[("K", -2)]).unwrap());
        assert_eq!(fe, expect);
        // confluence holds on the built-in
        assert!(alg.presentation().confluence.passed());
        // basis at filtration 1: {1, E, F, K, K^-1}
        let b1 = alg.basis_up_to(1).unwrap();
        assert_eq!(b1.len(), 5);
    }

    #[test]
    fn uq_sl2_star_is_involution() {
        let h = uq_sl2(&q34()).unwrap();
        let alg = h.algebra();
        // (EK)* = K F
        let ek = AlgElement::from_term(Scalar::one(), h.monomial(&[("E", 1), ("K", 1)]).unwrap());
        let star = alg.star(&ek).unwrap();
        let kf = alg.mul(&h.gen_element("K").unwrap(), &h.gen_element("F").unwrap());
        assert_eq!(star, kf);
        assert_eq!(alg.star(&star).unwrap(), ek);
        // 1* = 1
        assert_eq!(alg.star(&AlgElement::one()).unwrap(), AlgElement::one());
    }

    #[test]
    fn filtration_degrees() {
        let h = uq_sl2(&q34()).unwrap();
        let alg = h.algebra();
        let ek2 = h.monomial(&[("E", 1), ("K", 2)]).unwrap();
        assert_eq!(alg.filtration(&ek2), 3);
        assert_eq!(alg.filtration(&Monomial::one()), 0);
        let su = o_suq2(&q34()).unwrap();
        let xuv = su.monomial(&[("u", 1), ("v", 1), ("x", 1)]).unwrap();
        assert_eq!(su.algebra().filtration(&xuv), 3);
    }

    #[test]
    fn suq2_normal_form_splits_x_y() {
        let h = o_suq2(&q34()).unwrap();
        let alg = h.algebra();
        assert!(alg.presentation().confluence.passed(), "{:?}", alg.presentation().confluence);
        let x = h.gen_element("x").unwrap();
        let y = h.gen_element("y").unwrap();
        let xy = alg.mul(&x, &y);
        // xy = 1 + q^{-1} u v
        let mut expect = AlgElement::one();
        expect.add_term(q34().q_inv(), h.monomial(&[("u", 1), ("v", 1)]).unwrap());
        assert_eq!(xy, expect);
        // no normal monomial mixes x and y
        for m in alg.basis_up_to(4).unwrap() {
            let has_x = m.runs().iter().any(|&(g, _)| g == alg.gen_id("x").unwrap());
            let has_y = m.runs().iter().any(|&(g, _)| g == alg.gen_id("y").unwrap());
            assert!(!(has_x && has_y), "mixed monomial {:?}", m);
        }
    }

    #[test]
    fn modular_exponents_by_type() {
        assert_eq!(canonical_modular_exponents(&cartan_matrix("A1").unwrap()).unwrap(), vec![2]);
        assert_eq!(
            canonical_modular_exponents(&cartan_matrix("A2").unwrap()).unwrap(),
            vec![4, 4]
        );
        assert_eq!(
            canonical_modular_exponents(&cartan_matrix("A1xA1").unwrap()).unwrap(),
            vec![2, 2]
        );
    }

    #[test]
    fn e1_cells() {
        // r = 0: only m = 0 has the empty solution
        assert_eq!(e1_basis(0, 0).len(), 1);
        assert_eq!(e1_basis(0, 2).len(), 0);
        // r = 1, m = 2: (u1, v1) in {(1,0), (0,1)}
        let cells = e1_basis(1, 2);
        assert_eq!(cells.len(), 2);
        for c in &cells {
            assert_eq!(c.w, vec![1]);
        }
        // odd m is empty
        assert_eq!(e1_basis(2, 3).len(), 0);
        assert_eq!(e1_basis(3, 1).len(), 0);
    }

    #[test]
    fn podles_relations_hold_under_embedding() {
        for s in [Rational::zero(), Rational::new(1.into(), 2.into())] {
            let p = podles_s(&q34(), s).unwrap();
            for r in p.relation_residuals().unwrap() {
                assert!(r.is_zero(), "residual {:?}", r);
            }
        }
    }

    #[test]
    fn podles_star_matches_spec() {
        let p = podles_s(&q34(), Rational::zero()).unwrap();
        let alg = &p.algebra;
        // z_{-1}* = -q^{-1} z_1
        let star = alg.star(&p.z(-1)).unwrap();
        assert_eq!(star, p.z(1).scale(&-&q34().q_inv()));
        // star is an involution on samples
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        for _ in 0..30 {
            let a = alg.sample_element(&mut rng, 3, 2);
            assert_eq!(alg.star(&alg.star(&a).unwrap()).unwrap(), a);
        }
    }

    #[test]
    fn podles_grading_weights() {
        let p = podles_s(&q34(), Rational::zero()).unwrap();
        let alg = &p.algebra;
        // z_{-1}^i z_0^j z_1^k has weight 2i - 2k; basis never mixes zm and zp
        let m = p
            .algebra
            .gen_id("zm")
            .and_then(|zm| Ok(Monomial::from_runs([(zm, 2), (alg.gen_id("z0")?, 1)])))
            .unwrap();
        assert_eq!(p.weight(&m), 4);
        assert_eq!(p.weight(&Monomial::one()), 0);
        let g = p.grading(&p.z(0).add(&p.z(1)));
        assert_eq!(g.len(), 2);
        assert!(g.contains_key(&0) && g.contains_key(&-2));
    }

    #[test]
    fn pi_i_reproduces_rho() {
        let p = podles_s(&q34(), Rational::zero()).unwrap();
        // (id (x) pi_I)(delta(tilde z_i)) = z_i (x) s^{weight}
        let images = p.tilde_images().unwrap();
        for (i, zi) in [(-1i32, &images[0]), (0, &images[1]), (1, &images[2])] {
            let two = p.suq2.coproduct(zi, 2);
            // first leg must be recognized as a tilde-image combination; we
            // check the projected second legs against the expected sigma power
            let mut projected = AlgElement::zero();
            for (t, c) in two.iter() {
                let snd = p
                    .pi_i(&AlgElement::from_term(Scalar::one(), t[1].clone()))
                    .unwrap();
                // accumulate first-leg (x) projected-second-leg evaluated at
                // the counit of the first leg to isolate the sigma exponent
                let e1 = p.suq2.counit(&AlgElement::from_term(Scalar::one(), t[0].clone()));
                for (m2, c2) in snd.iter() {
                    projected.add_term(&(&e1 * c2) * c, m2.clone());
                }
            }
            // counit of tilde z_i times sigma^{-2i}
            let eps_zi = p.suq2.counit(zi);
            let sig = p.ou1.algebra().gen_id("s").unwrap();
            let expect = AlgElement::from_term(eps_zi, Monomial::gen_pow(sig, -2 * i as i64));
            assert_eq!(projected, expect, "leg mismatch for z_{}", i);
        }
    }

    #[test]
    fn haar_small_values() {
        let q = q34();
        let su = o_suq2(&q).unwrap();
        let haar = solve_haar(&su, 4).unwrap();
        // h(1) = 1, h(u) = h(x) = 0
        assert!(haar.eval(&AlgElement::one()).unwrap().is_one());
        assert!(haar.eval(&su.gen_element("u").unwrap()).unwrap().is_zero());
        assert!(haar.eval(&su.gen_element("x").unwrap()).unwrap().is_zero());
        // invariance residuals vanish on the window
        let alg = su.algebra();
        for m in alg.basis_up_to(3).unwrap() {
            let r = haar_invariance_residual(&su, &haar, &AlgElement::from_term(Scalar::one(), m))
                .unwrap();
            assert!(r.is_zero());
        }
    }

    #[test]
    fn f1_character_solves() {
        let q = q34();
        let su = o_suq2(&q).unwrap();
        let haar = solve_haar(&su, 4).unwrap();
        let f1 = solve_f1(&su, &haar).unwrap();
        let alg = su.algebra();
        let gx = alg.gen_id("x").unwrap();
        let gy = alg.gen_id("y").unwrap();
        let gu = alg.gen_id("u").unwrap();
        // f1(u) = 0 and f1(x) f1(y) = 1
        assert!(f1[gu].is_zero());
        assert!((&f1[gx] * &f1[gy]).is_one());
    }
}
