//! CSS codes from nested pairs `C₁ ⊂ C₂` and the two auxiliary classical
//! codes such a pair implies.
//!
//! For a pair with `dim C₁ = k₁` and `dim C₂ = k₁ + k`, the generator of
//! `C₂` is brought to the block form
//!
//! ```text
//! [ I_k₁  P  ]
//! [ 0     I_k  A′ ]
//! ```
//!
//! after permuting pivot columns to the front. The bottom `k` rows vanish on
//! the first `k₁` coordinates, so dropping those coordinates gives an
//! `[n−k₁, k, ≥ d]` code `D`. The same construction on the dual pair
//! `C₂^⊥ ⊂ C₁^⊥` gives a `[k₁+k, k, ≥ d]` code `D′`.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::QuantumParams;
use crate::codes::{coset_min_weight, is_subcode, LinearCode, WorkBudget};
use crate::error::{Error, Result};
use crate::galois::{CodeMatrix, FieldSpec};

/// A nested pair together with its quantum distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssPair {
    c1: LinearCode,
    c2: LinearCode,
    x_weight: usize,
    z_weight: usize,
}

impl CssPair {
    /// Validates nesting and computes `d = min{wt(C₂∖C₁), wt(C₁^⊥∖C₂^⊥)}`.
    pub fn new(c1: LinearCode, c2: LinearCode, budget: WorkBudget) -> Result<Self> {
        if !is_subcode(&c1, &c2)? || c1.dimension() >= c2.dimension() {
            return Err(Error::NotStrictSubcode);
        }
        let x_weight = coset_min_weight(&c2, &c1, budget)?;
        let z_weight = coset_min_weight(&c1.dual(), &c2.dual(), budget)?;
        Ok(Self {
            c1,
            c2,
            x_weight,
            z_weight,
        })
    }

    pub fn inner(&self) -> &LinearCode {
        &self.c1
    }

    pub fn outer(&self) -> &LinearCode {
        &self.c2
    }

    pub fn n(&self) -> usize {
        self.c2.len()
    }

    pub fn k1(&self) -> usize {
        self.c1.dimension()
    }

    pub fn k(&self) -> usize {
        self.c2.dimension() - self.c1.dimension()
    }

    pub fn distance(&self) -> usize {
        self.x_weight.min(self.z_weight)
    }

    /// `(wt(C₂∖C₁), wt(C₁^⊥∖C₂^⊥))`
    pub fn coset_weights(&self) -> (usize, usize) {
        (self.x_weight, self.z_weight)
    }

    pub fn q(&self) -> u32 {
        self.c2.field().order()
    }
}

/// `[[n, k₂ − k₁, d]]_q` of the pair.
pub fn css_params(pair: &CssPair) -> Result<QuantumParams> {
    Ok(QuantumParams::new(pair.n() as u32, pair.k() as u32, pair.distance() as u32, pair.q())?.with_css(true))
}

/// `C₂`'s generator in block form over permuted columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockForm {
    /// Column `j` of `matrix` is column `permutation[j]` of the original coordinates.
    pub permutation: Vec<usize>,
    pub matrix: CodeMatrix,
    pub k1: usize,
    pub k: usize,
}

impl BlockForm {
    /// Undoes the column permutation, giving a generator of the outer code.
    pub fn unpermuted(&self) -> CodeMatrix {
        let mut inverse = vec![0; self.permutation.len()];
        for (j, &c) in self.permutation.iter().enumerate() {
            inverse[c] = j;
        }
        self.matrix.select_columns(&inverse)
    }

    /// Bottom `k` rows restricted to the last `n − k₁` columns.
    pub fn tail_code(&self) -> LinearCode {
        let n = self.matrix.cols();
        let bottom = self.matrix.select_rows(self.k1..self.k1 + self.k);
        let cols: Vec<usize> = (self.k1..n).collect();
        LinearCode::from_generator(&bottom.select_columns(&cols))
    }
}

/// Brings the generator of `outer ⊃ inner` to block form.
pub fn block_form(inner: &LinearCode, outer: &LinearCode) -> Result<BlockForm> {
    if !is_subcode(inner, outer)? || inner.dimension() >= outer.dimension() {
        return Err(Error::NotStrictSubcode);
    }
    let f = Arc::clone(outer.field());
    let n = outer.len();
    let top = inner.generator();
    let p1 = inner.pivots();

    // reduce each row of the outer generator against the inner RREF so that
    // it vanishes on the inner pivot columns
    let mut residual = outer.generator().clone();
    for r in 0..residual.rows() {
        for (i, &pc) in p1.iter().enumerate() {
            let coef = residual.get(r, pc);
            if coef != 0 {
                let s = f.neg(coef);
                for c in 0..n {
                    let v = f.add(residual.get(r, c), f.mul(s, top.get(i, c)));
                    residual.set(r, c, v);
                }
            }
        }
    }
    let reduced = residual.rref();
    let k = outer.dimension() - inner.dimension();
    debug_assert_eq!(reduced.rank, k);
    let bottom = reduced.matrix.select_rows(0..k);

    let mut permutation: Vec<usize> = p1.to_vec();
    permutation.extend_from_slice(&reduced.pivots);
    permutation.extend((0..n).filter(|c| !p1.contains(c) && !reduced.pivots.contains(c)));

    let matrix = top.vstack(&bottom)?.select_columns(&permutation);
    Ok(BlockForm {
        permutation,
        matrix,
        k1: inner.dimension(),
        k,
    })
}

/// The two auxiliary classical codes and the block forms that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedCodes {
    /// `[n − k₁, k]` code from the primal pair.
    pub d: LinearCode,
    /// `[k₁ + k, k]` code from the dual pair.
    pub d_prime: LinearCode,
    pub primal: BlockForm,
    pub dual: BlockForm,
}

pub fn derive_auxiliary(pair: &CssPair) -> Result<DerivedCodes> {
    let primal = block_form(&pair.c1, &pair.c2)?;
    let dual = block_form(&pair.c2.dual(), &pair.c1.dual())?;
    Ok(DerivedCodes {
        d: primal.tail_code(),
        d_prime: dual.tail_code(),
        primal,
        dual,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSummary {
    pub length: usize,
    pub dimension: usize,
    pub min_weight: usize,
}

impl CodeSummary {
    pub fn of(code: &LinearCode, budget: WorkBudget) -> Result<Self> {
        Ok(Self {
            length: code.len(),
            dimension: code.dimension(),
            min_weight: code.min_weight(budget)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationReport {
    pub n: usize,
    pub k: usize,
    pub k1: usize,
    pub d: usize,
    pub q: u32,
    pub derived: CodeSummary,
    pub derived_prime: CodeSummary,
    pub auxiliary_holds: bool,
}

impl DerivationReport {
    /// Re-evaluates the auxiliary-code conditions against a claimed distance.
    pub fn holds_for(&self, k: usize, d: usize) -> bool {
        self.derived.dimension == k
            && self.derived_prime.dimension == k
            && self.derived.min_weight >= d
            && self.derived_prime.min_weight >= d
    }
}

/// Brute-force check that both derived codes have dimension `k` and minimum weight `≥ d`.
pub fn verify_derived(pair: &CssPair, derived: &DerivedCodes, budget: WorkBudget) -> Result<DerivationReport> {
    let ds = CodeSummary::of(&derived.d, budget)?;
    let dps = CodeSummary::of(&derived.d_prime, budget)?;
    let mut report = DerivationReport {
        n: pair.n(),
        k: pair.k(),
        k1: pair.k1(),
        d: pair.distance(),
        q: pair.q(),
        derived: ds,
        derived_prime: dps,
        auxiliary_holds: false,
    };
    report.auxiliary_holds = report.holds_for(pair.k(), pair.distance());
    Ok(report)
}

/// Draws a nested pair of length `n`: `C₂` from random generator rows, `C₁`
/// as the span of a random subset of `C₂` codewords. Retries until `C₁` is a
/// strict subcode and `C₂` is nonzero.
pub fn random_nested_pair<R: Rng + ?Sized>(field: &Arc<FieldSpec>, n: usize, rng: &mut R) -> (LinearCode, LinearCode) {
    let q = field.order();
    loop {
        let rows = rng.random_range(1..=n);
        let data: Vec<u8> = (0..rows * n).map(|_| rng.random_range(0..q) as u8).collect();
        let c2 = LinearCode::from_generator(&CodeMatrix::new(Arc::clone(field), rows, n, data).unwrap());
        if c2.dimension() == 0 {
            continue;
        }
        let picks = rng.random_range(0..=c2.dimension());
        let g2 = c2.generator();
        let coeffs: Vec<u8> = (0..picks * g2.rows()).map(|_| rng.random_range(0..q) as u8).collect();
        let c1 = if picks == 0 {
            LinearCode::zero(Arc::clone(field), n)
        } else {
            let sel = CodeMatrix::new(Arc::clone(field), picks, g2.rows(), coeffs).unwrap();
            LinearCode::from_generator(&sel.mul(g2).unwrap())
        };
        if c1.dimension() < c2.dimension() {
            return (c1, c2);
        }
    }
}
