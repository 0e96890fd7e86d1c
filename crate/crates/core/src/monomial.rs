//! Words in the generators of a presented algebra.
//!
//! A [`Monomial`] is a run-length encoded word: a sequence of
//! `(generator, exponent)` runs with nonzero exponents and distinct adjacent
//! generators. Negative exponents are reserved for invertible group-like
//! generators, whose positive and negative powers collapse into a single run.
//! The total order on monomials is graded by letter count and then
//! lexicographic on the flattened letter sequence; it exists to make printed
//! output and basis enumeration deterministic.

use std::cmp::Ordering;
use std::fmt;

pub type GenId = usize;

/// One letter of a flattened word: a generator with sign `+1` or `-1`.
pub type Letter = (GenId, i8);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(GenId, i64)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn gen(g: GenId) -> Self {
        Monomial(vec![(g, 1)])
    }

    pub fn gen_pow(g: GenId, e: i64) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(g, e)])
        }
    }

    /// Build from raw runs, merging adjacent runs and dropping zeros.
    pub fn from_runs<I: IntoIterator<Item = (GenId, i64)>>(runs: I) -> Self {
        let mut out: Vec<(GenId, i64)> = Vec::new();
        for (g, e) in runs {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((lg, le)) if *lg == g => {
                    *le += e;
                    if *le == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Monomial(out)
    }

    pub fn runs(&self) -> &[(GenId, i64)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Word length counting multiplicities, `sum |e_i|`.
    pub fn letter_count(&self) -> u64 {
        self.0.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    /// Concatenation product of the underlying words (no rewriting).
    pub fn concat(&self, rhs: &Monomial) -> Monomial {
        Monomial::from_runs(self.0.iter().cloned().chain(rhs.0.iter().cloned()))
    }

    pub fn flatten(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.letter_count() as usize);
        for &(g, e) in &self.0 {
            let s: i8 = if e > 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                out.push((g, s));
            }
        }
        out
    }

    pub fn from_letters(letters: &[Letter]) -> Monomial {
        Monomial::from_runs(letters.iter().map(|&(g, s)| (g, s as i64)))
    }

    /// Inverse word, when every letter is invertible (callers must ensure it).
    pub fn inverse(&self) -> Monomial {
        Monomial::from_runs(self.0.iter().rev().map(|&(g, e)| (g, -e)))
    }

    /// Number of letter pairs out of precedence order; precedence is the
    /// generator index, ignoring exponent signs.
    pub fn inversions(&self) -> u64 {
        let flat = self.flatten();
        let mut count = 0u64;
        for i in 0..flat.len() {
            for j in (i + 1)..flat.len() {
                if flat[i].0 > flat[j].0 {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn exponent_of(&self, g: GenId) -> i64 {
        self.0.iter().filter(|(h, _)| *h == g).map(|(_, e)| e).sum()
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letter_count()
            .cmp(&other.letter_count())
            .then_with(|| {
                let a = self.flatten();
                let b = other.flatten();
                for (&(ga, sa), &(gb, sb)) in a.iter().zip(b.iter()) {
                    match ga.cmp(&gb) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                    // positive power sorts before negative at equal generator
                    match sb.cmp(&sa) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                a.len().cmp(&b.len())
            })
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "g{}", g)?;
            } else {
                write!(f, "g{}^{}", g, e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_merge_and_cancel() {
        let m = Monomial::from_runs([(0, 2), (0, -2), (1, 1)]);
        assert_eq!(m, Monomial::gen(1));
        let m = Monomial::from_runs([(0, 1), (1, 1), (1, 2)]);
        assert_eq!(m.runs(), &[(0, 1), (1, 3)]);
    }

    #[test]
    fn concat_merges_boundary() {
        let a = Monomial::from_runs([(0, 1), (2, 2)]);
        let b = Monomial::from_runs([(2, -2), (1, 1)]);
        assert_eq!(a.concat(&b).runs(), &[(0, 1), (1, 1)]);
    }

    #[test]
    fn order_is_graded() {
        let one = Monomial::one();
        let g = Monomial::gen(0);
        let g2 = Monomial::gen_pow(0, 2);
        let h = Monomial::gen(1);
        assert!(one < g && g < g2 && g < h && h < g2);
    }

    #[test]
    fn inversions_count() {
        // word g1 g0: one inversion
        let m = Monomial::from_runs([(1, 1), (0, 1)]);
        assert_eq!(m.inversions(), 1);
        assert_eq!(m.inverse(), Monomial::from_runs([(0, -1), (1, -1)]));
    }
}
