//! Parser for presentation source files.
//!
//! The grammar (sections in any order, each terminated by `;`):
//!
//! ```text
//! file    := section+
//! section := "gen" id+                 declare generators
//!          | "rel" expr "=" expr      oriented rewrite rule (lhs -> rhs)
//!          | "star" id "=" expr       star of a generator (single signed term)
//!          | "grade" id "=" int+      integer weight vector
//!          | "delta" id "=" texpr     coproduct (tensor legs joined by "@")
//!          | "eps" id "=" expr        counit value (scalar)
//!          | "S" id "=" expr          antipode of a generator
//!          | "char" id id "=" expr    named character value on a generator
//! ```
//!
//! Tokens: identifiers, integers, rationals `p/r`, the imaginary unit `i`,
//! the deformation parameter `q` (resolved against the supplied [`QParam`]),
//! and `+ - * ^ ( ) = ; @`. The names `i` and `q` are reserved and cannot be
//! generators. A pair of generators `a`, `b` with rules `a*b = 1` and
//! `b*a = 1` is collapsed into a single invertible generator `a` with `b`
//! aliased to `a^-1`.

use std::collections::BTreeMap;

use super::{Algebra, AlgElement, PresentationBuilder};
use crate::error::Error;
use crate::monomial::{GenId, Monomial};
use crate::scalar::{parse_rational, QParam, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(Scalar),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eq,
    Semi,
    At,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Lexer, Error> {
    let chars: Vec<char> = text.chars().collect();
    let mut linecol = Vec::with_capacity(chars.len());
    {
        let (mut l, mut c) = (1usize, 1usize);
        for &ch in &chars {
            linecol.push((l, c));
            if ch == '\n' {
                l += 1;
                c = 1;
            } else {
                c += 1;
            }
        }
    }
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l, co) = linecol[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            ';' => Some(Tok::Semi),
            '@' => Some(Tok::At),
            _ => None,
        };
        if let Some(t) = simple {
            toks.push((t, l, co));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let mut number: String = chars[start..i].iter().collect();
            if i < chars.len() && chars[i] == '/' {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j > i + 1 {
                    number.push('/');
                    number.extend(&chars[i + 1..j]);
                    i = j;
                }
            }
            let r = parse_rational(&number).map_err(|_| Error::Parse {
                line: l,
                col: co,
                msg: format!("bad number `{number}`"),
            })?;
            toks.push((Tok::Number(Scalar::from_rational(r)), l, co));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            toks.push((Tok::Ident(name), l, co));
            continue;
        }
        return Err(Error::Parse {
            line: l,
            col: co,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }
    fn loc(&self) -> (usize, usize) {
        self.toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((0, 0))
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        self.pos += 1;
        t
    }
    fn expect(&mut self, t: &Tok) -> Result<(), Error> {
        let (l, c) = self.loc();
        match self.next() {
            Some(ref got) if got == t => Ok(()),
            got => Err(Error::Parse {
                line: l,
                col: c,
                msg: format!("expected {:?}, found {:?}", t, got),
            }),
        }
    }
    fn err<T>(&self, msg: &str) -> Result<T, Error> {
        let (l, c) = self.loc();
        Err(Error::Parse {
            line: l,
            col: c,
            msg: msg.to_string(),
        })
    }
}

/// A not-yet-normalized linear combination of raw words.
type FreeElement = Vec<(Scalar, Monomial)>;
/// Tensor terms: coefficient with one raw word per leg.
type FreeTensor = Vec<(Scalar, Vec<Monomial>)>;

/// Hopf data read from the optional `delta`/`eps`/`S`/`char` sections,
/// expressed over raw (unnormalized) words.
pub struct ParsedHopfData {
    pub delta: BTreeMap<String, FreeTensor>,
    pub eps: BTreeMap<String, Scalar>,
    pub antipode: BTreeMap<String, FreeElement>,
    pub chars: BTreeMap<String, BTreeMap<String, Scalar>>,
}

struct Parser<'a> {
    lx: Lexer,
    gens: Vec<String>,
    q: Option<&'a QParam>,
}

impl<'a> Parser<'a> {
    fn gen_id(&self, name: &str) -> Option<GenId> {
        self.gens.iter().position(|g| g == name)
    }

    fn atom(&mut self) -> Result<FreeElement, Error> {
        match self.lx.next() {
            Some(Tok::Number(s)) => Ok(vec![(s, Monomial::one())]),
            Some(Tok::Ident(name)) => {
                if name == "i" {
                    return Ok(vec![(Scalar::i(), Monomial::one())]);
                }
                if name == "q" {
                    let q = self
                        .q
                        .ok_or_else(|| Error::Invalid("`q` used without a parameter".into()))?;
                    return Ok(vec![(q.q(), Monomial::one())]);
                }
                match self.gen_id(&name) {
                    Some(g) => Ok(vec![(Scalar::one(), Monomial::gen(g))]),
                    None => self.lx.err(&format!("unknown generator `{name}`")),
                }
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.lx.expect(&Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Minus) => {
                let e = self.atom()?;
                Ok(e.into_iter().map(|(c, m)| (-&c, m)).collect())
            }
            other => self.lx.err(&format!("expected an atom, found {:?}", other)),
        }
    }

    fn power(&mut self) -> Result<FreeElement, Error> {
        let base = self.atom()?;
        if self.lx.peek() == Some(&Tok::Caret) {
            self.lx.next();
            let neg = if self.lx.peek() == Some(&Tok::Minus) {
                self.lx.next();
                true
            } else {
                false
            };
            let e = match self.lx.next() {
                Some(Tok::Number(s)) if s.is_rational() && s.re.denom() == &1.into() => {
                    let v: i64 = s.re.numer().try_into().map_err(|_| Error::Invalid(
                        "exponent too large".into(),
                    ))?;
                    if neg {
                        -v
                    } else {
                        v
                    }
                }
                _ => return self.lx.err("expected integer exponent"),
            };
            if e < 0 {
                // negative powers: only a single invertible word is sensible
                if base.len() != 1 {
                    return self.lx.err("negative power of a sum");
                }
                let (c, m) = &base[0];
                if !c.is_one() {
                    return self.lx.err("negative power of a scaled word");
                }
                let mut acc = Monomial::one();
                for _ in 0..(-e) {
                    acc = acc.concat(&m.inverse());
                }
                return Ok(vec![(Scalar::one(), acc)]);
            }
            let mut acc = vec![(Scalar::one(), Monomial::one())];
            for _ in 0..e {
                acc = mul_free(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn term(&mut self) -> Result<FreeElement, Error> {
        let mut acc = self.power()?;
        loop {
            match self.lx.peek() {
                Some(Tok::Star) => {
                    self.lx.next();
                    let rhs = self.power()?;
                    acc = mul_free(&acc, &rhs);
                }
                // juxtaposition: `K E` multiplies
                Some(Tok::Ident(_)) | Some(Tok::Number(_)) | Some(Tok::LParen) => {
                    let rhs = self.power()?;
                    acc = mul_free(&acc, &rhs);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<FreeElement, Error> {
        let mut acc = self.term()?;
        loop {
            match self.lx.peek() {
                Some(Tok::Plus) => {
                    self.lx.next();
                    acc.extend(self.term()?);
                }
                Some(Tok::Minus) => {
                    self.lx.next();
                    acc.extend(self.term()?.into_iter().map(|(c, m)| (-&c, m)));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// `texpr := tensor-term (("+"|"-") tensor-term)*` where a tensor term is
    /// `term ("@" term)*`.
    fn tensor_expr(&mut self) -> Result<FreeTensor, Error> {
        let mut out: FreeTensor = Vec::new();
        let mut sign = Scalar::one();
        loop {
            let mut legs: Vec<FreeElement> = vec![self.term()?];
            while self.lx.peek() == Some(&Tok::At) {
                self.lx.next();
                legs.push(self.term()?);
            }
            // distribute the legs
            let mut terms: FreeTensor = vec![(sign.clone(), Vec::new())];
            for leg in &legs {
                let mut next: FreeTensor = Vec::new();
                for (c, tuple) in &terms {
                    for (lc, lm) in leg {
                        let mut t = tuple.clone();
                        t.push(lm.clone());
                        next.push((c * lc, t));
                    }
                }
                terms = next;
            }
            out.extend(terms);
            match self.lx.peek() {
                Some(Tok::Plus) => {
                    self.lx.next();
                    sign = Scalar::one();
                }
                Some(Tok::Minus) => {
                    self.lx.next();
                    sign = -&Scalar::one();
                }
                _ => break,
            }
        }
        Ok(out)
    }
}

fn mul_free(a: &FreeElement, b: &FreeElement) -> FreeElement {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (ca, ma) in a {
        for (cb, mb) in b {
            out.push((ca * cb, ma.concat(mb)));
        }
    }
    out
}

fn free_to_element(e: &FreeElement) -> AlgElement {
    let mut out = AlgElement::zero();
    for (c, m) in e {
        out.add_term(c.clone(), m.clone());
    }
    out
}

/// Parse a presentation source. Returns the validated algebra and any Hopf
/// sections found; Hopf words are left unnormalized for the caller.
pub fn parse_presentation(
    name: &str,
    text: &str,
    q: Option<&QParam>,
) -> Result<(Algebra, Option<ParsedHopfData>), Error> {
    let lx = lex(text)?;
    let mut p = Parser {
        lx,
        gens: Vec::new(),
        q,
    };
    let mut rels: Vec<(FreeElement, FreeElement)> = Vec::new();
    let mut stars: Vec<(String, FreeElement)> = Vec::new();
    let mut grades: Vec<(String, Vec<i64>)> = Vec::new();
    let mut hopf = ParsedHopfData {
        delta: BTreeMap::new(),
        eps: BTreeMap::new(),
        antipode: BTreeMap::new(),
        chars: BTreeMap::new(),
    };
    let mut saw_hopf = false;

    loop {
        let kw = match p.lx.next() {
            None => break,
            Some(Tok::Ident(k)) => k,
            other => return p.lx.err(&format!("expected a section keyword, found {:?}", other)),
        };
        match kw.as_str() {
            "gen" => loop {
                match p.lx.next() {
                    Some(Tok::Ident(g)) => {
                        if g == "i" || g == "q" {
                            return p.lx.err("`i` and `q` are reserved names");
                        }
                        if p.gens.contains(&g) {
                            return p.lx.err(&format!("duplicate generator `{g}`"));
                        }
                        p.gens.push(g);
                    }
                    Some(Tok::Semi) => break,
                    other => return p.lx.err(&format!("expected generator name, found {:?}", other)),
                }
            },
            "rel" => {
                let lhs = p.expr()?;
                p.lx.expect(&Tok::Eq)?;
                let rhs = p.expr()?;
                p.lx.expect(&Tok::Semi)?;
                rels.push((lhs, rhs));
            }
            "star" => {
                let g = match p.lx.next() {
                    Some(Tok::Ident(g)) => g,
                    other => return p.lx.err(&format!("expected generator, found {:?}", other)),
                };
                p.lx.expect(&Tok::Eq)?;
                let e = p.expr()?;
                p.lx.expect(&Tok::Semi)?;
                stars.push((g, e));
            }
            "grade" => {
                let g = match p.lx.next() {
                    Some(Tok::Ident(g)) => g,
                    other => return p.lx.err(&format!("expected generator, found {:?}", other)),
                };
                p.lx.expect(&Tok::Eq)?;
                let mut v = Vec::new();
                loop {
                    match p.lx.next() {
                        Some(Tok::Number(s)) if s.is_rational() => {
                            v.push(s.re.numer().try_into().map_err(|_| {
                                Error::Invalid("grade entry too large".into())
                            })?)
                        }
                        Some(Tok::Minus) => match p.lx.next() {
                            Some(Tok::Number(s)) if s.is_rational() => {
                                let n: i64 = s.re.numer().try_into().map_err(|_| {
                                    Error::Invalid("grade entry too large".into())
                                })?;
                                v.push(-n)
                            }
                            other => {
                                return p.lx.err(&format!("expected integer, found {:?}", other))
                            }
                        },
                        Some(Tok::Semi) => break,
                        other => return p.lx.err(&format!("expected integer, found {:?}", other)),
                    }
                }
                grades.push((g, v));
            }
            "delta" => {
                saw_hopf = true;
                let g = match p.lx.next() {
                    Some(Tok::Ident(g)) => g,
                    other => return p.lx.err(&format!("expected generator, found {:?}", other)),
                };
                p.lx.expect(&Tok::Eq)?;
                let t = p.tensor_expr()?;
                p.lx.expect(&Tok::Semi)?;
                hopf.delta.insert(g, t);
            }
            "eps" => {
                saw_hopf = true;
                let g = match p.lx.next() {
                    Some(Tok::Ident(g)) => g,
                    other => return p.lx.err(&format!("expected generator, found {:?}", other)),
                };
                p.lx.expect(&Tok::Eq)?;
                let e = p.expr()?;
                p.lx.expect(&Tok::Semi)?;
                let mut val = Scalar::zero();
                for (c, m) in &e {
                    if !m.is_one() {
                        return p.lx.err("counit value must be a scalar");
                    }
                    val = &val + c;
                }
                hopf.eps.insert(g, val);
            }
            "S" => {
                saw_hopf = true;
                let g = match p.lx.next() {
                    Some(Tok::Ident(g)) => g,
                    other => return p.lx.err(&format!("expected generator, found {:?}", other)),
                };
                p.lx.expect(&Tok::Eq)?;
                let e = p.expr()?;
                p.lx.expect(&Tok::Semi)?;
                hopf.antipode.insert(g, e);
            }
            "char" => {
                let name = match p.lx.next() {
                    Some(Tok::Ident(n)) => n,
                    other => return p.lx.err(&format!("expected character name, found {:?}", other)),
                };
                let g = match p.lx.next() {
                    Some(Tok::Ident(g)) => g,
                    other => return p.lx.err(&format!("expected generator, found {:?}", other)),
                };
                p.lx.expect(&Tok::Eq)?;
                let e = p.expr()?;
                p.lx.expect(&Tok::Semi)?;
                let mut val = Scalar::zero();
                for (c, m) in &e {
                    if !m.is_one() {
                        return p.lx.err("character value must be a scalar");
                    }
                    val = &val + c;
                }
                hopf.chars.entry(name).or_default().insert(g, val);
            }
            other => return p.lx.err(&format!("unknown section `{other}`")),
        }
    }

    // recognize mutually-inverse pairs: a*b = 1 and b*a = 1 collapse b into a^-1
    let mut alias: Vec<Option<(GenId, i64)>> = vec![None; p.gens.len()];
    let single_prod = |e: &FreeElement| -> Option<(GenId, GenId)> {
        if e.len() != 1 {
            return None;
        }
        let (c, m) = &e[0];
        if !c.is_one() {
            return None;
        }
        match m.runs() {
            [(a, 1), (b, 1)] => Some((*a, *b)),
            _ => None,
        }
    };
    let is_unit = |e: &FreeElement| -> bool {
        e.len() == 1 && e[0].0.is_one() && e[0].1.is_one()
    };
    let mut inverse_rel_idx = Vec::new();
    for (idx1, (l1, r1)) in rels.iter().enumerate() {
        if !is_unit(r1) {
            continue;
        }
        if let Some((a, b)) = single_prod(l1) {
            if a == b {
                continue;
            }
            for (idx2, (l2, r2)) in rels.iter().enumerate() {
                if idx2 == idx1 || !is_unit(r2) {
                    continue;
                }
                if single_prod(l2) == Some((b, a)) && alias[b].is_none() && alias[a].is_none() {
                    alias[b] = Some((a, -1));
                    inverse_rel_idx.push(idx1);
                    inverse_rel_idx.push(idx2);
                }
            }
        }
    }

    let remap = |m: &Monomial| -> Monomial {
        Monomial::from_runs(m.runs().iter().map(|&(g, e)| match alias[g] {
            Some((h, s)) => (h, e * s),
            None => (g, e),
        }))
    };

    let mut b = PresentationBuilder::new(name);
    let mut new_ids: Vec<Option<GenId>> = vec![None; p.gens.len()];
    for (g, gname) in p.gens.iter().enumerate() {
        if alias[g].is_some() {
            continue;
        }
        let id = b.gen(gname, 1);
        new_ids[g] = Some(id);
    }
    let final_map = |m: &Monomial| -> Monomial {
        Monomial::from_runs(
            remap(m)
                .runs()
                .iter()
                .map(|&(g, e)| (new_ids[g].expect("aliased generator survived"), e)),
        )
    };
    for g in 0..p.gens.len() {
        if alias.iter().any(|a| matches!(a, Some((h, _)) if *h == g)) {
            if let Some(id) = new_ids[g] {
                // generator has a declared inverse
                b.set_invertible(id);
            }
        }
    }
    // infer finite exponent bounds from pure-power unit rules like g^n = 1
    for (idx, (lhs, rhs)) in rels.iter().enumerate() {
        if inverse_rel_idx.contains(&idx) {
            continue;
        }
        if lhs.len() == 1 && lhs[0].0.is_one() {
            if let [(g, e)] = lhs[0].1.runs() {
                if *e >= 2 && rhs.iter().all(|(_, m)| m.letter_count() < *e as u64) {
                    if let Some(id) = new_ids[*g] {
                        b.max_exp(id, (*e - 1) as u32);
                    }
                }
            }
        }
        let l = free_to_element(&lhs.iter().map(|(c, m)| (c.clone(), final_map(m))).collect());
        let r = free_to_element(&rhs.iter().map(|(c, m)| (c.clone(), final_map(m))).collect());
        if let Some((m, c)) = l.as_single_term() {
            b.rule(m.clone(), r.scale(&c.inv()?));
        } else {
            return Err(Error::Invalid(
                "relation left-hand side must be a single word".into(),
            ));
        }
    }
    for (gname, e) in &stars {
        let g = p
            .gens
            .iter()
            .position(|n| n == gname)
            .ok_or_else(|| Error::UnknownGenerator(gname.clone()))?;
        if let Some(id) = new_ids[g] {
            if e.len() != 1 {
                return Err(Error::Invalid(format!(
                    "star of `{gname}` must be a single signed term"
                )));
            }
            let (c, m) = &e[0];
            b.star_gen(id, c.clone(), final_map(m));
        }
    }
    for (gname, v) in grades {
        let g = p
            .gens
            .iter()
            .position(|n| *n == gname)
            .ok_or_else(|| Error::UnknownGenerator(gname.clone()))?;
        if let Some(id) = new_ids[g] {
            b.grade(id, v);
        }
    }

    let algebra = b.build()?;

    // remap hopf words into the final generator ids
    let hopf_out = if saw_hopf || !hopf.chars.is_empty() {
        let map_free = |e: &FreeElement| -> FreeElement {
            e.iter().map(|(c, m)| (c.clone(), final_map(m))).collect()
        };
        Some(ParsedHopfData {
            delta: hopf
                .delta
                .iter()
                .map(|(k, v)| {
                    (
                        k.clone(),
                        v.iter()
                            .map(|(c, legs)| (c.clone(), legs.iter().map(&final_map).collect()))
                            .collect(),
                    )
                })
                .collect(),
            eps: hopf.eps.clone(),
            antipode: hopf
                .antipode
                .iter()
                .map(|(k, v)| (k.clone(), map_free(v)))
                .collect(),
            chars: hopf.chars.clone(),
        })
    } else {
        None
    };
    Ok((algebra, hopf_out))
}
