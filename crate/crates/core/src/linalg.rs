//! Exact sparse linear algebra over `Q[i]`.
//!
//! Everything is plain Gaussian elimination with exact field arithmetic;
//! pivot rows are chosen sparsest-first with index tie-breaks so results are
//! deterministic. Matrices act on column vectors: an operator `X -> Y` is
//! stored with `ncols = dim X`, `nrows = dim Y`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::Error;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<BTreeMap<usize, Scalar>>,
}

pub type Vector = Vec<Scalar>;

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![BTreeMap::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.nrows && c < self.ncols);
        if v.is_zero() {
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let cur = self.rows[r].get(&c).cloned().unwrap_or_else(Scalar::zero);
        self.set(r, c, &cur + v);
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.rows[r].get(&c).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.nrows).map(|r| self.get(r, c)).collect()
    }

    pub fn from_columns(nrows: usize, cols: &[Vector]) -> Self {
        let mut m = SparseMatrix::zero(nrows, cols.len());
        for (c, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), nrows);
            for (r, s) in v.iter().enumerate() {
                if !s.is_zero() {
                    m.set(r, c, s.clone());
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(v.len(), self.ncols);
        let mut out = vec![Scalar::zero(); self.nrows];
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = Scalar::zero();
            for (c, a) in row {
                if !v[*c].is_zero() {
                    acc = &acc + &(a * &v[*c]);
                }
            }
            out[r] = acc;
        }
        out
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch");
        let mut out = SparseMatrix::zero(self.nrows, rhs.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &rhs.rows[*k] {
                    out.add_to(r, *c, &(a * b));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.ncols, self.nrows);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, a) in row {
                out.set(*c, r, a.clone());
            }
        }
        out
    }

    /// Entry-wise conjugate (no transpose).
    pub fn conj(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.nrows, self.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, a) in row {
                out.set(r, *c, a.conj());
            }
        }
        out
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let mut out = self.clone();
        for (r, row) in rhs.rows.iter().enumerate() {
            for (c, a) in row {
                out.add_to(r, *c, a);
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.nrows, self.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, a) in row {
                out.set(r, *c, a * s);
            }
        }
        out
    }

    /// Append the columns of `rhs` on the right.
    pub fn hstack(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.nrows, rhs.nrows);
        let mut out = SparseMatrix::zero(self.nrows, self.ncols + rhs.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, a) in row {
                out.set(r, *c, a.clone());
            }
        }
        for (r, row) in rhs.rows.iter().enumerate() {
            for (c, a) in row {
                out.set(r, c + self.ncols, a.clone());
            }
        }
        out
    }

    /// Triplet text `row col value` per line, for debugging dumps.
    pub fn to_triplet_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.nrows, self.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, a) in row {
                let _ = writeln!(s, "{} {} {}", r, c, a);
            }
        }
        s
    }

    /// Reduced row echelon form; returns pivot `(row, col)` pairs in
    /// elimination order. Pivot rows are chosen sparsest-first.
    pub fn rref(&self) -> (SparseMatrix, Vec<(usize, usize)>) {
        let mut m = self.clone();
        let mut pivot_of_row: Vec<bool> = vec![false; m.nrows];
        let mut pivots = Vec::new();
        for c in 0..m.ncols {
            // candidate pivot: unused row with nonzero in column c, fewest
            // nonzeros, smallest index on ties
            let mut best: Option<(usize, usize)> = None;
            for r in 0..m.nrows {
                if pivot_of_row[r] || !m.rows[r].contains_key(&c) {
                    continue;
                }
                let w = m.rows[r].len();
                match best {
                    None => best = Some((w, r)),
                    Some((bw, _)) if w < bw => best = Some((w, r)),
                    _ => {}
                }
            }
            let Some((_, pr)) = best else { continue };
            pivot_of_row[pr] = true;
            let inv = m.rows[pr][&c].inv().expect("pivot is nonzero");
            let scaled: Vec<(usize, Scalar)> =
                m.rows[pr].iter().map(|(k, v)| (*k, v * &inv)).collect();
            m.rows[pr] = scaled.into_iter().collect();
            let pivot_row = m.rows[pr].clone();
            for r in 0..m.nrows {
                if r == pr {
                    continue;
                }
                if let Some(f) = m.rows[r].get(&c).cloned() {
                    for (k, v) in &pivot_row {
                        let cur = m.rows[r].get(k).cloned().unwrap_or_else(Scalar::zero);
                        let nv = &cur - &(v * &f);
                        if nv.is_zero() {
                            m.rows[r].remove(k);
                        } else {
                            m.rows[r].insert(*k, nv);
                        }
                    }
                }
            }
            pivots.push((pr, c));
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact rank plus a kernel basis (columns of the returned matrix).
    pub fn rank_kernel(&self) -> (usize, Vec<Vector>) {
        let (m, pivots) = self.rref();
        let rank = pivots.len();
        let pivot_cols: BTreeMap<usize, usize> =
            pivots.iter().map(|&(r, c)| (c, r)).collect();
        let mut kernel = Vec::new();
        for c in 0..self.ncols {
            if pivot_cols.contains_key(&c) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.ncols];
            v[c] = Scalar::one();
            for (&pc, &pr) in &pivot_cols {
                let a = m.get(pr, c);
                if !a.is_zero() {
                    v[pc] = -&a;
                }
            }
            kernel.push(v);
        }
        (rank, kernel)
    }

    /// Is `v` in the column span?
    pub fn contains_in_column_span(&self, v: &Vector) -> bool {
        assert_eq!(v.len(), self.nrows);
        let aug = self.hstack(&SparseMatrix::from_columns(self.nrows, &[v.clone()]));
        aug.rank() == self.rank()
    }
}

impl std::fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SparseMatrix({}x{}, nnz {})", self.nrows, self.ncols, self.nnz())
    }
}

/// `dim ker(d_out) - rank(d_in)` with the exactness precondition
/// `d_out * d_in = 0` checked first.
pub fn homology_dims(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<usize, Error> {
    if d_out.ncols() != d_in.nrows() {
        return Err(Error::NonComposable(format!(
            "d_out is {}x{} but d_in is {}x{}",
            d_out.nrows(),
            d_out.ncols(),
            d_in.nrows(),
            d_in.ncols()
        )));
    }
    let comp = d_out.mul(d_in);
    if !comp.is_zero() {
        return Err(Error::NotAComplex(format!(
            "d_out * d_in has {} nonzero entries",
            comp.nnz()
        )));
    }
    let ker = d_out.ncols() - d_out.rank();
    let rk = d_in.rank();
    Ok(ker - rk)
}

/// Kernel vectors of `d_out` that extend a basis of `im(d_in)`; these are
/// homology representatives for the pair.
pub fn homology_representatives(
    d_in: &SparseMatrix,
    d_out: &SparseMatrix,
) -> Result<Vec<Vector>, Error> {
    let comp = d_out.mul(d_in);
    if !comp.is_zero() {
        return Err(Error::NotAComplex("d_out * d_in != 0".into()));
    }
    let dim = d_out.ncols();
    let (_, kernel) = d_out.rank_kernel();
    // greedy rank growth: image columns first, then kernel vectors
    let mut cols: Vec<Vector> = Vec::new();
    for c in 0..d_in.ncols() {
        cols.push(d_in.column(c));
    }
    let base = SparseMatrix::from_columns(dim, &cols);
    let base_rank = base.rank();
    let mut reps = Vec::new();
    let mut acc = base;
    let mut acc_rank = base_rank;
    for v in kernel {
        let grown = acc.hstack(&SparseMatrix::from_columns(dim, &[v.clone()]));
        let r = grown.rank();
        if r > acc_rank {
            reps.push(v);
            acc = grown;
            acc_rank = r;
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn identity_rank() {
        let m = SparseMatrix::identity(3);
        let (rank, kernel) = m.rank_kernel();
        assert_eq!(rank, 3);
        assert!(kernel.is_empty());
    }

    #[test]
    fn zero_matrix_kernel() {
        let m = SparseMatrix::zero(2, 5);
        let (rank, kernel) = m.rank_kernel();
        assert_eq!(rank, 0);
        assert_eq!(kernel.len(), 5);
    }

    #[test]
    fn gaussian_rank_one() {
        // [[1, i], [-i, 1]] has rank 1: row2 = -i * row1
        let mut m = SparseMatrix::zero(2, 2);
        m.set(0, 0, s(1));
        m.set(0, 1, Scalar::i());
        m.set(1, 0, -&Scalar::i());
        m.set(1, 1, s(1));
        assert_eq!(m.rank(), 1);
        let (_, k) = m.rank_kernel();
        assert_eq!(k.len(), 1);
        // kernel vector satisfies M v = 0
        let v = &k[0];
        let img = m.apply(v);
        assert!(img.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn rank_plus_nullity() {
        let mut m = SparseMatrix::zero(3, 4);
        m.set(0, 0, s(2));
        m.set(0, 2, s(1));
        m.set(1, 1, s(3));
        m.set(2, 0, s(4));
        m.set(2, 2, s(2));
        let (rank, kernel) = m.rank_kernel();
        assert_eq!(rank + kernel.len(), 4);
        for v in &kernel {
            assert!(m.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn homology_of_zero_maps() {
        let d_in = SparseMatrix::zero(3, 2);
        let d_out = SparseMatrix::zero(4, 3);
        assert_eq!(homology_dims(&d_in, &d_out).unwrap(), 3);
    }

    #[test]
    fn homology_of_exact_pair() {
        // 0 -> k -> k -> 0 with identity in the middle: H = 0
        let d_in = SparseMatrix::identity(1);
        let d_out = SparseMatrix::zero(1, 1);
        assert_eq!(homology_dims(&d_in, &d_out).unwrap(), 0);
    }

    #[test]
    fn membership() {
        let mut m = SparseMatrix::zero(3, 2);
        m.set(0, 0, s(1));
        m.set(1, 1, s(1));
        assert!(m.contains_in_column_span(&vec![s(2), s(-3), s(0)]));
        assert!(!m.contains_in_column_span(&vec![s(0), s(0), s(1)]));
    }
}
