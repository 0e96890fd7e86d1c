//! The rewriting engine: rule matching, normalization, and the empirical
//! confluence (overlap) check.
//!
//! Termination is enforced at build time: each rule must strictly decrease
//! the order (total termination weight, inversion count, letter count, flat
//! lex). Confluence is checked empirically by reducing all critical words of
//! the rule pairs; failures are reported, never repaired.

use super::{Algebra, AlgElement, GeneratorInfo};
use crate::error::Error;
use crate::monomial::{Letter, Monomial};
use crate::scalar::Scalar;

/// One oriented rewrite rule: `lhs` (a flat word) rewrites to `rhs`.
#[derive(Clone)]
pub struct Rule {
    pub lhs: Vec<Letter>,
    pub rhs: AlgElement,
}

/// Result of the pairwise overlap test.
#[derive(Clone, Debug, Default)]
pub struct ConfluenceReport {
    pub pairs_checked: usize,
    pub failures: Vec<String>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn order_key(gens: &[GeneratorInfo], m: &Monomial) -> (u64, u64, u64, Vec<Letter>) {
    let weight = m
        .runs()
        .iter()
        .map(|&(g, e)| gens[g].term_weight * e.unsigned_abs())
        .sum();
    (weight, m.inversions(), m.letter_count(), m.flatten())
}

pub(super) fn check_rule_decreases(gens: &[GeneratorInfo], rule: &Rule) -> Result<(), Error> {
    let lhs = Monomial::from_letters(&rule.lhs);
    let lkey = order_key(gens, &lhs);
    for (m, _) in rule.rhs.iter() {
        if order_key(gens, m) >= lkey {
            let names: Vec<&str> = rule.lhs.iter().map(|&(g, _)| gens[g].name.as_str()).collect();
            return Err(Error::NonTerminatingRule(format!(
                "lhs {:?} does not dominate rhs term {:?}",
                names, m
            )));
        }
    }
    Ok(())
}

/// Find the leftmost match of any rule in a flat word; ties at a position are
/// broken by rule declaration order. Returns `(position, rule index)`.
pub(super) fn find_match(rules: &[Rule], word: &[Letter]) -> Option<(usize, usize)> {
    for pos in 0..word.len() {
        for (ri, rule) in rules.iter().enumerate() {
            let l = rule.lhs.len();
            if pos + l <= word.len() && word[pos..pos + l] == rule.lhs[..] {
                return Some((pos, ri));
            }
        }
    }
    None
}

const FUEL: u64 = 4_000_000;

/// Full normalization of a single word. `algebra` is used only for error
/// rendering.
pub(super) fn normalize(rules: &[Rule], word: &Monomial, algebra: &Algebra) -> AlgElement {
    let mut out = AlgElement::zero();
    let mut work: Vec<(Vec<Letter>, Scalar)> = vec![(word.flatten(), Scalar::one())];
    let mut fuel = FUEL;
    while let Some((w, c)) = work.pop() {
        // exponent collapsing (x * x^{-1}) happens implicitly through the
        // run-length representation
        let collapsed = Monomial::from_letters(&w);
        let flat = collapsed.flatten();
        match find_match(rules, &flat) {
            None => out.add_term(c, collapsed),
            Some((pos, ri)) => {
                let rule = &rules[ri];
                let l = rule.lhs.len();
                let prefix = &flat[..pos];
                let suffix = &flat[pos + l..];
                for (m, rc) in rule.rhs.iter() {
                    let mut next = prefix.to_vec();
                    next.extend(m.flatten());
                    next.extend_from_slice(suffix);
                    work.push((next, &c * rc));
                }
            }
        }
        fuel -= 1;
        if fuel == 0 {
            panic!(
                "normalization fuel exhausted in `{}` on word {:?}; rule system is not terminating",
                algebra.name(),
                word
            );
        }
    }
    out
}

/// Critical-pair test: for every overlapping pair of rule left-hand sides,
/// reduce the critical word both ways and compare normal forms.
pub(super) fn overlap_check(algebra: &Algebra) -> ConfluenceReport {
    const MAX_CRITICAL_LEN: usize = 8;
    let rules = &algebra.presentation().rules;
    let mut report = ConfluenceReport::default();

    let reduce = |letters: &[Letter]| -> AlgElement {
        algebra.normalize_word(&Monomial::from_letters(letters))
    };

    for (i, r1) in rules.iter().enumerate() {
        for (j, r2) in rules.iter().enumerate() {
            report.pairs_checked += 1;
            let u = &r1.lhs;
            let v = &r2.lhs;
            // proper suffix-prefix overlaps: u = a s, v = s b, critical word a s b
            for k in 1..u.len().min(v.len()) {
                if u[u.len() - k..] != v[..k] {
                    continue;
                }
                let critical_len = u.len() + v.len() - k;
                if critical_len > MAX_CRITICAL_LEN {
                    continue;
                }
                // reduce via r1 then fully, and via r2 then fully
                let mut via1: Vec<(Vec<Letter>, Scalar)> = Vec::new();
                for (m, c) in r1.rhs.iter() {
                    let mut w = m.flatten();
                    w.extend_from_slice(&v[k..]);
                    via1.push((w, c.clone()));
                }
                let mut via2: Vec<(Vec<Letter>, Scalar)> = Vec::new();
                for (m, c) in r2.rhs.iter() {
                    let mut w = u[..u.len() - k].to_vec();
                    w.extend(m.flatten());
                    via2.push((w, c.clone()));
                }
                let nf = |branch: &[(Vec<Letter>, Scalar)]| {
                    let mut acc = AlgElement::zero();
                    for (w, c) in branch {
                        let r = reduce(w);
                        for (m, rc) in r.iter() {
                            acc.add_term(rc * c, m.clone());
                        }
                    }
                    acc
                };
                if nf(&via1) != nf(&via2) {
                    report.failures.push(format!(
                        "rules {i} and {j} disagree on suffix-prefix overlap of width {k}"
                    ));
                }
            }
            // containment overlaps: v strictly inside u
            if i != j && v.len() < u.len() {
                for pos in 0..=(u.len() - v.len()) {
                    if u[pos..pos + v.len()] != v[..] {
                        continue;
                    }
                    let direct = {
                        let mut acc = AlgElement::zero();
                        for (m, c) in r1.rhs.iter() {
                            let r = reduce(&m.flatten());
                            for (rm, rc) in r.iter() {
                                acc.add_term(rc * c, rm.clone());
                            }
                        }
                        acc
                    };
                    let via_inner = {
                        let mut acc = AlgElement::zero();
                        for (m, c) in r2.rhs.iter() {
                            let mut w = u[..pos].to_vec();
                            w.extend(m.flatten());
                            w.extend_from_slice(&u[pos + v.len()..]);
                            let r = reduce(&w);
                            for (rm, rc) in r.iter() {
                                acc.add_term(rc * c, rm.clone());
                            }
                        }
                        acc
                    };
                    if direct != via_inner {
                        report
                            .failures
                            .push(format!("rule {j} inside rule {i} at {pos} disagrees"));
                    }
                }
            }
        }
    }
    report
}
