//! Parameter-space classification and the exhaustive construction oracle.

mod oracle;

pub use oracle::{
    check_realized, oracle_exhaustive_css, steane_pair, AssertionFailure, OracleConfig, OracleReport, RealizedCount,
};

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{css_feasibility, qhb_check, quantum_singleton_check, BoundKind, BoundVerdict, QuantumParams};
use crate::error::{Error, Result};
use crate::galois::prime_power;
use crate::threshold::{threshold_for, Applicability, Fixed};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Category {
    SatisfiesHamming,
    #[serde(rename = "IMPOSSIBLE_THM1")]
    ImpossibleThreshold,
    ImpossibleCssQ5,
    ImpossibleCssStructural,
    ImpossibleMdsNondegenerate,
    OpenDegenerateCandidate,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::SatisfiesHamming,
        Category::ImpossibleThreshold,
        Category::ImpossibleCssQ5,
        Category::ImpossibleCssStructural,
        Category::ImpossibleMdsNondegenerate,
        Category::OpenDegenerateCandidate,
    ];

    pub fn is_impossible(self) -> bool {
        matches!(
            self,
            Category::ImpossibleThreshold
                | Category::ImpossibleCssQ5
                | Category::ImpossibleCssStructural
                | Category::ImpossibleMdsNondegenerate
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::SatisfiesHamming => "SATISFIES_HAMMING",
            Category::ImpossibleThreshold => "IMPOSSIBLE_THM1",
            Category::ImpossibleCssQ5 => "IMPOSSIBLE_CSS_Q5",
            Category::ImpossibleCssStructural => "IMPOSSIBLE_CSS_STRUCTURAL",
            Category::ImpossibleMdsNondegenerate => "IMPOSSIBLE_MDS_NONDEGENERATE",
            Category::OpenDegenerateCandidate => "OPEN_DEGENERATE_CANDIDATE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub params: QuantumParams,
    pub category: Category,
    /// Verdicts in the order the rules consulted them.
    pub reasons: Vec<BoundVerdict>,
}

/// Classifies parameters by the first rule that decides them:
///
/// 1. quantum Hamming bound holds
/// 2. quantum Singleton equality (MDS codes are nondegenerate)
/// 3. the `2e/q²` threshold condition holds
/// 4. CSS with prime-power `q ≥ 5`
/// 5. CSS and the CSS-specific bounds exclude the parameters
/// 6. otherwise open
///
/// A Singleton violation on its own is recorded in the reasons but is not
/// a rule.
pub fn classify(p: &QuantumParams) -> Classification {
    let mut reasons = Vec::new();
    let done = |category, reasons| Classification {
        params: p.clone(),
        category,
        reasons,
    };

    let qhb = qhb_check(p);
    let holds = qhb.satisfied;
    reasons.push(qhb);
    if holds {
        return done(Category::SatisfiesHamming, reasons);
    }

    let singleton = quantum_singleton_check(p);
    let mds = singleton.meets;
    reasons.push(singleton);
    if mds {
        return done(Category::ImpossibleMdsNondegenerate, reasons);
    }

    let threshold = threshold_for::<Fixed>(p);
    let applies = threshold.applies == Applicability::Applies;
    reasons.push(threshold.verdict());
    if applies {
        return done(Category::ImpossibleThreshold, reasons);
    }

    if !p.css() {
        return done(Category::OpenDegenerateCandidate, reasons);
    }

    if p.q() >= 5 && prime_power(p.q()).is_some() {
        reasons.push(BoundVerdict::compare(
            BoundKind::CssLargeAlphabet,
            5,
            p.q(),
            "CSS codes over prime-power q >= 5 obey the quantum Hamming bound",
        ));
        return done(Category::ImpossibleCssQ5, reasons);
    }

    let Some(k) = p.k() else {
        reasons.push(BoundVerdict::not_applicable(
            BoundKind::K1Range,
            "CSS dimension must be a power of q",
        ));
        return done(Category::ImpossibleCssStructural, reasons);
    };
    let feas = css_feasibility(p.n(), k, p.d(), p.q());
    reasons.extend(feas.verdicts);
    if !feas.css_possible {
        return done(Category::ImpossibleCssStructural, reasons);
    }
    done(Category::OpenDegenerateCandidate, reasons)
}

/// Hard limit on `n_max` for a scan.
pub const MAX_SCAN_LENGTH: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub n_max: u32,
    pub q_list: Vec<u32>,
    pub css: bool,
    /// Largest distance enumerated; `None` means `d ≤ n`.
    pub d_max: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub config: ScanConfig,
    pub total: u64,
    pub counts: BTreeMap<Category, u64>,
    pub open: Vec<QuantumParams>,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<u64>,
}

pub fn scan_range(config: &ScanConfig) -> Result<ScanReport> {
    scan_range_streaming(config, |_| {})
}

/// Enumerates `2 ≤ n ≤ n_max`, `1 ≤ k < n`, `2 ≤ d ≤ min(n, d_max)` for
/// every `q`, with `K = q^k`. Open entries are passed to `on_open` in
/// canonical `(n, k, d, q)` order as each length completes.
pub fn scan_range_streaming(config: &ScanConfig, mut on_open: impl FnMut(&QuantumParams)) -> Result<ScanReport> {
    if config.n_max > MAX_SCAN_LENGTH {
        return Err(Error::ResourceCeiling(format!(
            "n_max = {} exceeds {MAX_SCAN_LENGTH}",
            config.n_max
        )));
    }
    if let Some(&q) = config.q_list.iter().find(|&&q| q < 2) {
        return Err(Error::InvalidParams(format!("alphabet size {q} must be at least 2")));
    }
    let mut q_list = config.q_list.clone();
    q_list.sort_unstable();
    q_list.dedup();

    let mut counts: BTreeMap<Category, u64> = Category::ALL.iter().map(|&c| (c, 0)).collect();
    let mut open = Vec::new();
    let mut total = 0u64;
    for n in 2..=config.n_max {
        let d_hi = config.d_max.map_or(n, |m| m.min(n));
        let tuples: Vec<(u32, u32, u32)> = (1..n)
            .flat_map(|k| (2..=d_hi).map(move |d| (k, d)))
            .flat_map(|(k, d)| q_list.iter().map(move |&q| (k, d, q)))
            .collect();
        let results: Vec<(Category, QuantumParams)> = tuples
            .par_iter()
            .map(|&(k, d, q)| {
                let p = QuantumParams::new(n, k, d, q)
                    .expect("enumerated parameters are valid")
                    .with_css(config.css);
                (classify(&p).category, p)
            })
            .collect();
        for (cat, p) in results {
            total += 1;
            *counts.get_mut(&cat).unwrap() += 1;
            if cat == Category::OpenDegenerateCandidate {
                on_open(&p);
                open.push(p);
            }
        }
    }
    Ok(ScanReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        total,
        counts,
        open,
        seed: None,
        runtime_ms: None,
    })
}

/// Same as [`scan_range`] with the wall-clock time recorded.
pub fn scan_range_timed(config: &ScanConfig, on_open: impl FnMut(&QuantumParams)) -> Result<ScanReport> {
    let start = Instant::now();
    let mut report = scan_range_streaming(config, on_open)?;
    report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}
