//! Classical linear codes over GF(q).
//!
//! A [`LinearCode`] is identified by the reduced row-echelon form of its
//! generator, so two generators of the same row space compare equal.
//! Minimum weights are computed by exhaustive enumeration under a
//! [`WorkBudget`]; there is no heuristic fallback.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::{CodeMatrix, FieldSpec};

/// Upper bound on the number of codewords a single enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkBudget(pub u64);

impl WorkBudget {
    pub const DEFAULT: WorkBudget = WorkBudget(1 << 24);

    fn admit(self, q: u32, k: usize) -> Result<()> {
        let needed = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if needed > self.0 as u128 {
            return Err(Error::WorkLimit { needed, budget: self.0 });
        }
        Ok(())
    }
}

impl Default for WorkBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    gen: CodeMatrix,
    pivots: Vec<usize>,
}

impl LinearCode {
    /// Canonical code spanned by the rows of `m`.
    pub fn from_generator(m: &CodeMatrix) -> Self {
        let rref = m.rref();
        let gen = rref.matrix.select_rows(0..rref.rank);
        Self {
            n: m.cols(),
            gen,
            pivots: rref.pivots,
        }
    }

    pub fn zero(field: Arc<FieldSpec>, n: usize) -> Self {
        Self {
            n,
            gen: CodeMatrix::zeros(field, 0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Arc<FieldSpec>, n: usize) -> Self {
        Self {
            n,
            gen: CodeMatrix::identity(field, n),
            pivots: (0..n).collect(),
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.gen.field()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dimension(&self) -> usize {
        self.gen.rows()
    }

    /// RREF generator with exactly `dimension()` rows.
    pub fn generator(&self) -> &CodeMatrix {
        &self.gen
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Parity-check matrix, i.e. a generator of the dual code (not reduced).
    pub fn parity_check(&self) -> CodeMatrix {
        let f = self.field();
        let free: Vec<usize> = (0..self.n).filter(|c| !self.pivots.contains(c)).collect();
        let mut h = CodeMatrix::zeros(Arc::clone(f), free.len(), self.n);
        for (r, &fc) in free.iter().enumerate() {
            h.set(r, fc, 1);
            for (i, &pc) in self.pivots.iter().enumerate() {
                h.set(r, pc, f.neg(self.gen.get(i, fc)));
            }
        }
        h
    }

    /// The dual code under the standard inner product.
    pub fn dual(&self) -> LinearCode {
        let h = self.parity_check();
        if h.rows() == 0 {
            return LinearCode::zero(Arc::clone(self.field()), self.n);
        }
        LinearCode::from_generator(&h)
    }

    /// Membership test by elimination against the RREF generator.
    pub fn contains(&self, word: &[u8]) -> bool {
        if word.len() != self.n {
            return false;
        }
        let f = self.field();
        let mut residual = word.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let coef = residual[pc];
            if coef != 0 {
                let s = f.neg(coef);
                for (x, &g) in residual.iter_mut().zip(self.gen.row(i)) {
                    *x = f.add(*x, f.mul(s, g));
                }
            }
        }
        residual.iter().all(|&x| x == 0)
    }

    /// Visits every codeword, the zero word included.
    pub fn for_each_codeword(&self, budget: WorkBudget, visit: impl FnMut(&[u8])) -> Result<()> {
        budget.admit(self.field().order(), self.dimension())?;
        let rows: Vec<&[u8]> = self.gen.row_iter().collect();
        span_walk(self.field(), &rows, self.n, visit);
        Ok(())
    }

    /// Exact minimum Hamming weight over all nonzero codewords.
    pub fn min_weight(&self, budget: WorkBudget) -> Result<usize> {
        if self.dimension() == 0 {
            return Err(Error::ZeroCode);
        }
        let mut best = usize::MAX;
        self.for_each_codeword(budget, |w| {
            let wt = weight(w);
            if wt > 0 && wt < best {
                best = wt;
            }
        })?;
        Ok(best)
    }

    pub fn to_text(&self) -> String {
        self.gen.to_text()
    }
}

pub fn weight(word: &[u8]) -> usize {
    word.iter().filter(|&&x| x != 0).count()
}

/// Depth-first walk over all `q^k` linear combinations of `rows`.
pub(crate) fn span_walk(field: &FieldSpec, rows: &[&[u8]], n: usize, mut visit: impl FnMut(&[u8])) {
    let q = field.order() as u8;
    // scaled[level][c] = c * rows[level]
    let scaled: Vec<Vec<Vec<u8>>> = rows
        .iter()
        .map(|r| (0..q).map(|c| r.iter().map(|&x| field.mul(c, x)).collect()).collect())
        .collect();
    let mut bufs = vec![vec![0u8; n]; rows.len() + 1];
    walk(field, &scaled, 0, &mut bufs, &mut visit);
}

fn walk(field: &FieldSpec, scaled: &[Vec<Vec<u8>>], level: usize, bufs: &mut [Vec<u8>], visit: &mut impl FnMut(&[u8])) {
    if level == scaled.len() {
        visit(&bufs[level]);
        return;
    }
    for row in &scaled[level] {
        let (lo, hi) = bufs.split_at_mut(level + 1);
        for ((dst, &b), &s) in hi[0].iter_mut().zip(&lo[level]).zip(row) {
            *dst = field.add(b, s);
        }
        walk(field, scaled, level + 1, bufs, visit);
    }
}

fn check_compatible(a: &LinearCode, b: &LinearCode) -> Result<()> {
    if *a.field() != *b.field() {
        return Err(Error::MixedFields);
    }
    if a.n != b.n {
        return Err(Error::Shape(format!("code lengths differ: {} vs {}", a.n, b.n)));
    }
    Ok(())
}

/// True iff every generator row of `c1` lies in `c2`.
pub fn is_subcode(c1: &LinearCode, c2: &LinearCode) -> Result<bool> {
    check_compatible(c1, c2)?;
    Ok(c1.gen.row_iter().all(|r| c2.contains(r)))
}

/// Minimum weight of `C2 \ C1`; membership in `C1` is decided by its parity checks.
pub fn coset_min_weight(c2: &LinearCode, c1: &LinearCode, budget: WorkBudget) -> Result<usize> {
    if !is_subcode(c1, c2)? || c1.dimension() >= c2.dimension() {
        return Err(Error::NotStrictSubcode);
    }
    let f = c2.field();
    let h1 = c1.parity_check();
    let in_c1 = |w: &[u8]| {
        h1.row_iter()
            .all(|h| h.iter().zip(w).fold(0u8, |acc, (&a, &b)| f.add(acc, f.mul(a, b))) == 0)
    };
    let mut best = usize::MAX;
    c2.for_each_codeword(budget, |w| {
        let wt = weight(w);
        if wt < best && wt > 0 && !in_c1(w) {
            best = wt;
        }
    })?;
    Ok(best)
}
