use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classify, SCHEMA_VERSION};
use crate::bounds::{qhb_check, quantum_griesmer_css, rains_css_max_t, QuantumParams};
use crate::codes::{LinearCode, WorkBudget};
use crate::css::{css_params, derive_auxiliary, random_nested_pair, verify_derived, CssPair, DerivationReport};
use crate::error::{Error, Result};
use crate::galois::{CodeMatrix, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub q: u32,
    pub n_max: u32,
    /// Pairs drawn per length beyond the exhaustive range.
    pub samples: u64,
    pub seed: u64,
    pub budget: u64,
}

impl OracleConfig {
    pub fn new(q: u32, n_max: u32) -> Self {
        Self {
            q,
            n_max,
            samples: 10_000,
            seed: 0,
            budget: WorkBudget::DEFAULT.0,
        }
    }

    /// Largest length enumerated exhaustively for this alphabet.
    pub fn exhaustive_limit(&self) -> u32 {
        match self.q {
            2 => 6,
            _ => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertionFailure {
    pub params: String,
    pub assertion: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizedCount {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub pairs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub schema_version: u32,
    pub config: OracleConfig,
    pub exhaustive_lengths: Vec<u32>,
    pub sampled_lengths: Vec<u32>,
    pub pairs_checked: u64,
    /// Pairs abandoned because an enumeration exceeded the work budget.
    pub pairs_skipped: u64,
    pub pinned: Vec<String>,
    pub realized: Vec<RealizedCount>,
    pub failures: Vec<AssertionFailure>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The checks every constructed CSS code must pass. `params` carries the
/// claimed distance, which need not be the true one.
pub fn check_realized(params: &QuantumParams, derivation: &DerivationReport) -> Vec<AssertionFailure> {
    let mut out = Vec::new();
    let label = params.to_string();
    let mut fail = |assertion: &str, detail: String| {
        out.push(AssertionFailure {
            params: label.clone(),
            assertion: assertion.into(),
            detail,
        })
    };
    let (n, d, q) = (params.n(), params.d(), params.q());
    let Some(k) = params.k() else {
        fail("integral_k", "CSS dimension is not a power of q".into());
        return out;
    };

    let hamming = qhb_check(params);
    if !hamming.satisfied {
        fail("quantum_hamming", format!("{} > {}", hamming.lhs, hamming.rhs));
    }
    let griesmer = quantum_griesmer_css(n, k, d, q);
    if griesmer.violated() {
        fail("quantum_griesmer", format!("{} > {}", griesmer.lhs, griesmer.rhs));
    }
    if q == 2 && params.t() as i64 > rains_css_max_t(n, k) {
        fail(
            "binary_css_correctable_errors",
            format!("t = {} > {}", params.t(), rains_css_max_t(n, k)),
        );
    }
    if !derivation.holds_for(k as usize, d as usize) {
        fail(
            "auxiliary_codes",
            format!(
                "D = [{}, {}, {}], D' = [{}, {}, {}], need dimension {k} and weight >= {d}",
                derivation.derived.length,
                derivation.derived.dimension,
                derivation.derived.min_weight,
                derivation.derived_prime.length,
                derivation.derived_prime.dimension,
                derivation.derived_prime.min_weight,
            ),
        );
    }
    let cls = classify(params);
    if cls.category.is_impossible() {
        fail("classifier_soundness", format!("classified {}", cls.category.name()));
    }
    out
}

/// All RREF matrices of every rank with `cols` columns.
fn all_rref(field: &Arc<FieldSpec>, cols: usize) -> Vec<CodeMatrix> {
    let q = field.order();
    let mut out = Vec::new();
    for mask in 0u32..(1 << cols) {
        let pivots: Vec<usize> = (0..cols).filter(|c| mask & (1 << c) != 0).collect();
        let rank = pivots.len();
        // free slots: (row, col) right of the row's pivot and not a pivot column
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| (pc + 1..cols).filter(|c| mask & (1 << c) == 0).map(move |c| (r, c)))
            .collect();
        let count = (q as u64).pow(free.len() as u32);
        for mut idx in 0..count {
            let mut m = CodeMatrix::zeros(Arc::clone(field), rank, cols);
            for (r, &pc) in pivots.iter().enumerate() {
                m.set(r, pc, 1);
            }
            for &(r, c) in &free {
                m.set(r, c, (idx % q as u64) as u8);
                idx /= q as u64;
            }
            out.push(m);
        }
    }
    out
}

#[derive(Default)]
struct Tally {
    checked: u64,
    skipped: u64,
    realized: BTreeMap<(u32, u32, u32), u64>,
    failures: Vec<AssertionFailure>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.skipped += other.skipped;
        for (key, v) in other.realized {
            *self.realized.entry(key).or_default() += v;
        }
        self.failures.extend(other.failures);
        self
    }

    fn run_pair(&mut self, c1: LinearCode, c2: LinearCode, budget: WorkBudget) {
        match evaluate_pair(c1, c2, budget) {
            Ok((params, failures)) => {
                self.checked += 1;
                let key = (params.n(), params.k().unwrap_or(0), params.d());
                *self.realized.entry(key).or_default() += 1;
                self.failures.extend(failures);
            }
            Err(Error::WorkLimit { .. }) => self.skipped += 1,
            Err(e) => self.failures.push(AssertionFailure {
                params: "?".into(),
                assertion: "construction".into(),
                detail: e.to_string(),
            }),
        }
    }
}

fn evaluate_pair(c1: LinearCode, c2: LinearCode, budget: WorkBudget) -> Result<(QuantumParams, Vec<AssertionFailure>)> {
    let pair = CssPair::new(c1, c2, budget)?;
    let params = css_params(&pair)?;
    let derived = derive_auxiliary(&pair)?;
    let report = verify_derived(&pair, &derived, budget)?;
    let failures = check_realized(&params, &report);
    Ok((params, failures))
}

fn exhaustive_length(field: &Arc<FieldSpec>, n: usize, budget: WorkBudget) -> Tally {
    let outers: Vec<CodeMatrix> = all_rref(field, n).into_iter().filter(|m| m.rows() > 0).collect();
    outers
        .par_iter()
        .map(|g2| {
            let mut tally = Tally::default();
            let c2 = LinearCode::from_generator(g2);
            for sel in all_rref(field, c2.dimension()) {
                if sel.rows() >= c2.dimension() {
                    continue;
                }
                let c1 = if sel.rows() == 0 {
                    LinearCode::zero(Arc::clone(field), n)
                } else {
                    LinearCode::from_generator(&sel.mul(c2.generator()).unwrap())
                };
                tally.run_pair(c1, c2.clone(), budget);
            }
            tally
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge)
}

fn sampled_length(field: &Arc<FieldSpec>, n: usize, cfg: &OracleConfig) -> Tally {
    let budget = WorkBudget(cfg.budget);
    (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((n as u64) << 48) ^ i);
            let (c1, c2) = random_nested_pair(field, n, &mut rng);
            let mut tally = Tally::default();
            tally.run_pair(c1, c2, budget);
            tally
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge)
}

/// The `[7,3] ⊂ [7,4]` Hamming pair.
pub fn steane_pair(budget: WorkBudget) -> Result<CssPair> {
    let f = FieldSpec::of_order(2)?;
    let g = CodeMatrix::from_rows(
        f,
        7,
        &[
            [1, 0, 0, 0, 1, 1, 0],
            [0, 1, 0, 0, 1, 0, 1],
            [0, 0, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ],
    )?;
    let hamming = LinearCode::from_generator(&g);
    CssPair::new(hamming.dual(), hamming, budget)
}

/// Constructs CSS codes from nested pairs and checks every realised
/// parameter set against the bounds and the classifier.
///
/// Lengths up to [`OracleConfig::exhaustive_limit`] are enumerated
/// completely (canonical RREF forms, no equivalence reduction); longer
/// lengths are sampled with per-trial seeds derived from `seed`.
pub fn oracle_exhaustive_css(cfg: &OracleConfig) -> Result<OracleReport> {
    if cfg.q != 2 && cfg.q != 3 {
        return Err(Error::InvalidParams(format!(
            "oracle supports q in {{2, 3}}, got {}",
            cfg.q
        )));
    }
    if cfg.n_max > 16 {
        return Err(Error::ResourceCeiling(format!(
            "oracle length {} exceeds 16",
            cfg.n_max
        )));
    }
    let field = FieldSpec::of_order(cfg.q)?;
    let budget = WorkBudget(cfg.budget);
    let mut exhaustive_lengths = Vec::new();
    let mut sampled_lengths = Vec::new();
    let mut tally = Tally::default();
    for n in 1..=cfg.n_max {
        if n <= cfg.exhaustive_limit() {
            exhaustive_lengths.push(n);
            tally = tally.merge(exhaustive_length(&field, n as usize, budget));
        } else if cfg.samples > 0 {
            sampled_lengths.push(n);
            tally = tally.merge(sampled_length(&field, n as usize, cfg));
        }
    }

    let mut pinned = Vec::new();
    if cfg.q == 2 && cfg.n_max >= 7 {
        let pair = steane_pair(budget)?;
        pinned.push(css_params(&pair)?.to_string());
        tally.run_pair(pair.inner().clone(), pair.outer().clone(), budget);
    }

    tally
        .failures
        .sort_by(|a, b| (&a.params, &a.assertion, &a.detail).cmp(&(&b.params, &b.assertion, &b.detail)));
    Ok(OracleReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        exhaustive_lengths,
        sampled_lengths,
        pairs_checked: tally.checked,
        pairs_skipped: tally.skipped,
        pinned,
        realized: tally
            .realized
            .into_iter()
            .map(|((n, k, d), pairs)| RealizedCount { n, k, d, pairs })
            .collect(),
        failures: tally.failures,
    })
}
