//! Exact evaluation of quantum and classical code bounds.
//!
//! Every comparison is carried out on big integers. A [`BoundVerdict`]
//! always records its inequality in the orientation `lhs ≤ rhs`, scaled so
//! that both sides are integers; `meets` flags equality.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantity::{biguint_string, Quantity};

/// Parameters of an `((n, K, d))_q` quantum code; `k` is set when `K = q^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct QuantumParams {
    n: u32,
    k: Option<u32>,
    #[serde(rename = "K", with = "biguint_string")]
    dimension: BigUint,
    d: u32,
    q: u32,
    t: u32,
    css: bool,
}

#[derive(Deserialize)]
struct RawParams {
    n: u32,
    #[serde(rename = "K", with = "biguint_string")]
    dimension: BigUint,
    d: u32,
    q: u32,
    css: bool,
}

impl TryFrom<RawParams> for QuantumParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Ok(QuantumParams::from_dimension(raw.n, raw.dimension, raw.d, raw.q)?.with_css(raw.css))
    }
}

impl QuantumParams {
    /// `[[n, k, d]]_q`, i.e. `K = q^k`.
    pub fn new(n: u32, k: u32, d: u32, q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams(format!(
                "alphabet size q = {q} must be at least 2"
            )));
        }
        Self::from_dimension(n, BigUint::from(q).pow(k), d, q)
    }

    /// `((n, K, d))_q` with an arbitrary dimension `K ≥ 2`.
    pub fn from_dimension(n: u32, dimension: BigUint, d: u32, q: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if d < 1 {
            return Err(Error::InvalidParams("d must be at least 1".into()));
        }
        if q < 2 {
            return Err(Error::InvalidParams(format!(
                "alphabet size q = {q} must be at least 2"
            )));
        }
        if dimension < BigUint::from(2u32) {
            return Err(Error::InvalidParams("dimension K must be at least 2".into()));
        }
        let k = exact_log(&dimension, q);
        Ok(Self {
            n,
            k,
            dimension,
            d,
            q,
            t: (d - 1) / 2,
            css: false,
        })
    }

    pub fn with_css(mut self, css: bool) -> Self {
        self.css = css;
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Integral `log_q K`, when it exists.
    pub fn k(&self) -> Option<u32> {
        self.k
    }

    pub fn dimension(&self) -> &BigUint {
        &self.dimension
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of correctable errors, `⌊(d−1)/2⌋`.
    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn css(&self) -> bool {
        self.css
    }

    /// Sort key used for canonical report order.
    pub fn sort_key(&self) -> (u32, BigUint, u32, u32, bool) {
        (self.n, self.dimension.clone(), self.d, self.q, self.css)
    }
}

impl fmt::Display for QuantumParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "[[{},{},{}]]_{}", self.n, k, self.d, self.q),
            None => write!(f, "(({},{},{}))_{}", self.n, self.dimension, self.d, self.q),
        }
    }
}

fn exact_log(value: &BigUint, base: u32) -> Option<u32> {
    let mut v = value.clone();
    let b = BigUint::from(base);
    let mut k = 0;
    while v > BigUint::one() {
        let (quo, rem) = v.div_rem(&b);
        if !rem.is_zero() {
            return None;
        }
        v = quo;
        k += 1;
    }
    Some(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    QuantumHamming,
    QuantumSingleton,
    ClassicalSingleton,
    ClassicalHamming,
    ClassicalGriesmer,
    QuantumGriesmerCss,
    TightSingletonCss,
    RainsCss,
    K1Range,
    CombinedCssHamming,
    /// CSS code over a prime-power alphabet `q ≥ 5`.
    CssLargeAlphabet,
    /// `log_q K + d ≤ (1 − 2e/q²) n`, under which the quantum Hamming bound is guaranteed.
    ThresholdCondition,
}

impl BoundKind {
    pub fn label(self) -> &'static str {
        match self {
            BoundKind::QuantumHamming => "quantum Hamming",
            BoundKind::QuantumSingleton => "quantum Singleton",
            BoundKind::ClassicalSingleton => "classical Singleton",
            BoundKind::ClassicalHamming => "classical Hamming",
            BoundKind::ClassicalGriesmer => "classical Griesmer",
            BoundKind::QuantumGriesmerCss => "quantum Griesmer (CSS)",
            BoundKind::TightSingletonCss => "tightened Singleton (CSS, d >= q)",
            BoundKind::RainsCss => "correctable errors (binary CSS)",
            BoundKind::K1Range => "k1 feasibility window",
            BoundKind::CombinedCssHamming => "combined classical Hamming (CSS)",
            BoundKind::CssLargeAlphabet => "CSS alphabet q >= 5",
            BoundKind::ThresholdCondition => "threshold condition",
        }
    }
}

/// Outcome of one inequality `lhs ≤ rhs`.
///
/// `satisfied` and `meets` are only meaningful when `applicable`; an
/// inapplicable verdict is recorded as vacuously satisfied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub bound: BoundKind,
    pub applicable: bool,
    pub satisfied: bool,
    pub meets: bool,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub note: String,
}

impl BoundVerdict {
    pub fn compare(bound: BoundKind, lhs: impl Into<BigInt>, rhs: impl Into<BigInt>, note: impl Into<String>) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        Self {
            bound,
            applicable: true,
            satisfied: lhs <= rhs,
            meets: lhs == rhs,
            lhs: Quantity::Exact(lhs),
            rhs: Quantity::Exact(rhs),
            note: note.into(),
        }
    }

    pub fn not_applicable(bound: BoundKind, note: impl Into<String>) -> Self {
        Self {
            bound,
            applicable: false,
            satisfied: true,
            meets: false,
            lhs: Quantity::Exact(BigInt::zero()),
            rhs: Quantity::Exact(BigInt::zero()),
            note: note.into(),
        }
    }

    /// Applicable and violated.
    pub fn violated(&self) -> bool {
        self.applicable && !self.satisfied
    }
}

/// `C(a, b)`, defined as zero for `b < 0`, `b > a` or `a < 0`.
pub fn binomial(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= BigUint::from((a - i) as u64);
        acc /= BigUint::from((i + 1) as u64);
    }
    acc
}

fn pow(q: u32, e: u64) -> BigUint {
    BigUint::from(q).pow(e)
}

/// `Σ_{j=0}^{t} C(n, j) w^j`.
fn weighted_ball(n: i64, t: u32, w: &BigUint) -> BigUint {
    let mut total = BigUint::zero();
    let mut wj = BigUint::one();
    for j in 0..=t as i64 {
        total += binomial(n, j) * &wj;
        wj *= w;
    }
    total
}

/// Size of a quantum error ball, `Σ_{j≤t} C(n,j)(q²−1)^j`.
pub fn quantum_ball(n: u32, t: u32, q: u32) -> BigUint {
    weighted_ball(n as i64, t, &BigUint::from(q as u64 * q as u64 - 1))
}

/// Size of a classical Hamming ball, `Σ_{j≤t} C(n,j)(q−1)^j`.
pub fn classical_ball(n: i64, t: u32, q: u32) -> BigUint {
    weighted_ball(n, t, &BigUint::from(q - 1))
}

/// `Σ_{i=0}^{k−1} ⌈d / q^i⌉`.
pub fn griesmer_sum(k: u32, d: u32, q: u32) -> u64 {
    let mut sum = 0u64;
    let mut qi = 1u64;
    for i in 0..k {
        if qi >= d as u64 {
            // every remaining term is 1
            return sum + (k - i) as u64;
        }
        sum += (d as u64).div_ceil(qi);
        qi = qi.saturating_mul(q as u64);
    }
    sum
}

/// Quantum Hamming bound: `K · Σ_{j≤t} C(n,j)(q²−1)^j ≤ q^n`.
pub fn qhb_check(p: &QuantumParams) -> BoundVerdict {
    let ball = quantum_ball(p.n, p.t, p.q);
    let lhs = p.dimension() * &ball;
    BoundVerdict::compare(
        BoundKind::QuantumHamming,
        lhs,
        pow(p.q, p.n as u64),
        format!("t = {}, ball = {ball}", p.t),
    )
}

/// Quantum Singleton bound `K ≤ q^{n−2d+2}`, checked as `K·q^{2d−2} ≤ q^n`.
/// Equality means the code is MDS.
pub fn quantum_singleton_check(p: &QuantumParams) -> BoundVerdict {
    let lhs = p.dimension() * pow(p.q, 2 * (p.d as u64 - 1));
    let mut v = BoundVerdict::compare(BoundKind::QuantumSingleton, lhs, pow(p.q, p.n as u64), "");
    if v.meets {
        v.note = "quantum MDS".into();
    }
    v
}

/// Classical Singleton, Hamming and Griesmer bounds for an `[n, k, d]_q` code.
pub fn classical_bounds(n: u32, k: u32, d: u32, q: u32) -> [BoundVerdict; 3] {
    let t = d.saturating_sub(1) / 2;
    let singleton = BoundVerdict::compare(BoundKind::ClassicalSingleton, k as i64 + d as i64, n as i64 + 1, "");
    let hamming = BoundVerdict::compare(
        BoundKind::ClassicalHamming,
        pow(q, k as u64) * classical_ball(n as i64, t, q),
        pow(q, n as u64),
        format!("t = {t}"),
    );
    let griesmer = BoundVerdict::compare(BoundKind::ClassicalGriesmer, griesmer_sum(k, d, q), n, "");
    [singleton, hamming, griesmer]
}

/// Griesmer bound for CSS codes, `(n+k)/2 ≥ Σ ⌈d/q^i⌉`, as `2Σ ≤ n + k`.
pub fn quantum_griesmer_css(n: u32, k: u32, d: u32, q: u32) -> BoundVerdict {
    if k < 1 {
        return BoundVerdict::not_applicable(BoundKind::QuantumGriesmerCss, "needs integral k >= 1");
    }
    let mut v = BoundVerdict::compare(
        BoundKind::QuantumGriesmerCss,
        2 * griesmer_sum(k, d, q),
        n as u64 + k as u64,
        "",
    );
    if v.meets {
        v.note = "meets the quantum Griesmer bound".into();
    }
    v
}

/// `(n−k)/2 ≥ d(1 + 1/q) − 2` for CSS codes with `d ≥ q`, as `2d(q+1) − 4q ≤ q(n−k)`.
pub fn tight_singleton_css(n: u32, k: u32, d: u32, q: u32) -> BoundVerdict {
    if d < q {
        return BoundVerdict::not_applicable(BoundKind::TightSingletonCss, "requires d >= q");
    }
    let (n, k, d, q) = (n as i64, k as i64, d as i64, q as i64);
    let mut v = BoundVerdict::compare(BoundKind::TightSingletonCss, 2 * d * (q + 1) - 4 * q, q * (n - k), "");
    if !v.satisfied {
        v.note = "no CSS code has these parameters".into();
    }
    v
}

/// Largest number of errors a binary `[[n,k,d]]_2` CSS code can correct, `⌊(n−k+1)/6⌋`.
pub fn rains_css_max_t(n: u32, k: u32) -> i64 {
    Integer::div_floor(&(n as i64 - k as i64 + 1), &6)
}

pub fn rains_css_check(n: u32, k: u32, d: u32, q: u32) -> BoundVerdict {
    if q != 2 {
        return BoundVerdict::not_applicable(BoundKind::RainsCss, "binary codes only");
    }
    let t = (d as i64 - 1) / 2;
    BoundVerdict::compare(BoundKind::RainsCss, t, rains_css_max_t(n, k), "t <= floor((n-k+1)/6)")
}

/// Admissible dimensions `k₁` of the inner code: `[d−1, n−k−d+1] ∩ [0, n−k]`.
pub fn k1_feasible_range(n: u32, k: u32, d: u32) -> Option<(u32, u32)> {
    let (lo, hi) = k1_bounds(n, k, d);
    (lo <= hi).then_some((lo as u32, hi as u32))
}

fn k1_bounds(n: u32, k: u32, d: u32) -> (i64, i64) {
    let (n, k, d) = (n as i64, k as i64, d as i64);
    ((d - 1).max(0), (n - k - d + 1).min(n - k))
}

/// `q^k · Σ_i C(n−k₁,i)(q−1)^i · Σ_j C(k₁+k,j)(q−1)^j ≤ q^n`.
pub fn combined_css_hamming(n: u32, k: u32, d: u32, q: u32, k1: u32) -> BoundVerdict {
    let t = d.saturating_sub(1) / 2;
    let outer = classical_ball(n as i64 - k1 as i64, t, q);
    let inner = classical_ball(k1 as i64 + k as i64, t, q);
    let lhs = pow(q, k as u64) * outer * inner;
    BoundVerdict::compare(
        BoundKind::CombinedCssHamming,
        lhs,
        pow(q, n as u64),
        format!("k1 = {k1}"),
    )
}

/// Term-by-term comparison of the quantum ball with the product of the two
/// shortened classical balls: `C(n,j)(q²−1)^j ≤ C(n−k₁,j)C(k+k₁,j)(q−1)^{2j}` for all `j ≤ t`.
pub fn term_by_term_holds(n: u32, k: u32, d: u32, q: u32, k1: u32) -> bool {
    let t = (d.saturating_sub(1) / 2) as i64;
    let (n, k, k1) = (n as i64, k as i64, k1 as i64);
    let wide = BigUint::from(q as u64 * q as u64 - 1);
    let narrow = BigUint::from((q as u64 - 1) * (q as u64 - 1));
    (0..=t).all(|j| {
        let e = j as u64;
        binomial(n, j) * Pow::pow(&wide, e) <= binomial(n - k1, j) * binomial(k + k1, j) * Pow::pow(&narrow, e)
    })
}

/// Everything the CSS-specific bounds say about `[[n,k,d]]_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssFeasibility {
    pub verdicts: Vec<BoundVerdict>,
    pub k1_range: Option<(u32, u32)>,
    pub passing_k1: Vec<u32>,
    pub css_possible: bool,
}

pub fn css_feasibility(n: u32, k: u32, d: u32, q: u32) -> CssFeasibility {
    let mut verdicts = Vec::new();
    match QuantumParams::new(n, k, d, q) {
        Ok(p) => verdicts.push(quantum_singleton_check(&p)),
        Err(e) => verdicts.push(BoundVerdict::not_applicable(BoundKind::QuantumSingleton, e.to_string())),
    }
    verdicts.push(quantum_griesmer_css(n, k, d, q));
    verdicts.push(tight_singleton_css(n, k, d, q));
    verdicts.push(rains_css_check(n, k, d, q));

    let (lo, hi) = k1_bounds(n, k, d);
    let mut range_v = BoundVerdict::compare(BoundKind::K1Range, lo, hi, format!("k1 in [{lo}, {hi}]"));
    let k1_range = k1_feasible_range(n, k, d);
    if k1_range.is_none() {
        range_v.note = format!("k1 window [{lo}, {hi}] is empty");
    }
    verdicts.push(range_v);

    let mut passing_k1 = Vec::new();
    let combined = match k1_range {
        None => BoundVerdict::not_applicable(BoundKind::CombinedCssHamming, "no admissible k1"),
        Some((lo, hi)) => {
            let all: Vec<BoundVerdict> = (lo..=hi).map(|k1| combined_css_hamming(n, k, d, q, k1)).collect();
            passing_k1 = (lo..=hi)
                .zip(&all)
                .filter(|(_, v)| v.satisfied)
                .map(|(k1, _)| k1)
                .collect();
            let mut best = all
                .into_iter()
                .min_by(|a, b| a.lhs.as_exact().cmp(&b.lhs.as_exact()))
                .expect("range is nonempty");
            best.satisfied = !passing_k1.is_empty();
            best.note = if passing_k1.is_empty() {
                format!("no k1 in [{lo}, {hi}] passes; smallest product at {}", best.note)
            } else {
                format!("passing k1: {passing_k1:?}")
            };
            best
        }
    };
    verdicts.push(combined);

    let css_possible = k1_range.is_some() && !passing_k1.is_empty() && verdicts.iter().all(|v| !v.violated());
    CssFeasibility {
        verdicts,
        k1_range,
        passing_k1,
        css_possible,
    }
}
