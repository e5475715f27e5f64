//! The `δ = 2e/q²` threshold and the entropy machinery behind it.
//!
//! A code with `log_q K + d ≤ (1 − δ) n`, `q ≥ 3` and `δ = 2e/q²` obeys the
//! quantum Hamming bound. Everything here is generic over [`Real`]; use
//! [`Fixed`] for decisions and `f64` for quick diagnostics.

mod real;

pub use real::{certain_le, Certainty, Fixed, Real};

use num_bigint::BigUint;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::bounds::{binomial, quantum_ball, BoundKind, BoundVerdict, QuantumParams};
use crate::error::{Error, Result};
use crate::quantity::Quantity;

/// `2e / q²`.
pub fn delta_threshold<R: Real>(q: u32) -> R {
    let q = R::from_u32(q).unwrap();
    R::from_i64(2).unwrap() * R::e() / (q.clone() * q)
}

/// The threshold condition needs `q ≥ 3`; for `q = 2` the threshold exceeds 1.
pub fn alphabet_supported(q: u32) -> bool {
    q >= 3
}

/// Binary entropy `h(x) = −x log₂ x − (1−x) log₂(1−x)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy<R: Real>(x: &R) -> R {
    let one = R::one();
    if x.is_zero() || *x == one {
        return R::zero();
    }
    let ln2 = R::from_i64(2).unwrap().ln();
    let y = one - x.clone();
    -(x.clone() * x.ln() + y.clone() * y.ln()) / ln2
}

/// One row of the threshold table, with values rounded up at the third decimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub q: u32,
    /// `⌈1000 δ⌉`
    pub delta_milli: u32,
    /// `1000 − ⌈1000 δ⌉`
    pub one_minus_delta_milli: u32,
    /// `δ` to 30 decimals, truncated.
    pub delta_exact: String,
}

impl Table1Row {
    pub fn delta(&self) -> String {
        format!("0.{:03}", self.delta_milli)
    }

    pub fn one_minus_delta(&self) -> String {
        format!("0.{:03}", self.one_minus_delta_milli)
    }
}

/// Rows for `q = 3..=11`, rounded by ceiling at the third decimal.
pub fn table1() -> Vec<Table1Row> {
    (3..=11)
        .map(|q| {
            let delta: Fixed = delta_threshold(q);
            let scaled = delta.clone() * Fixed::from_int(1000);
            let floor = scaled.floor_to_i64();
            let frac = scaled - Fixed::from_int(floor);
            // a fractional part within tolerance of zero counts as an exact integer
            let milli = if frac > Fixed::tolerance() { floor + 1 } else { floor };
            Table1Row {
                q,
                delta_milli: milli as u32,
                one_minus_delta_milli: 1000 - milli as u32,
                delta_exact: delta.to_decimal(30),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Applicability {
    Applies,
    DoesNotApply,
    /// `|margin|` is inside the precision band.
    Indeterminate,
    /// `q < 3`.
    NotApplicable,
}

#[derive(Debug, Clone)]
pub struct ThresholdReport<R: Real> {
    pub q: u32,
    pub delta: R,
    pub one_minus_delta: R,
    pub applies: Applicability,
    /// `(1 − δ) n − d − log_q K`; positive when the condition holds.
    pub margin: R,
    pub lhs: R,
    pub rhs: R,
    pub precision_bits: u32,
}

/// Serialisable view of a [`ThresholdReport`] with reals as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdRecord {
    pub q: u32,
    pub delta: String,
    pub one_minus_delta: String,
    pub applies: Applicability,
    pub margin: String,
    pub precision_bits: u32,
}

const DIGITS: usize = 30;

impl<R: Real> ThresholdReport<R> {
    pub fn record(&self) -> ThresholdRecord {
        ThresholdRecord {
            q: self.q,
            delta: self.delta.to_decimal(DIGITS),
            one_minus_delta: self.one_minus_delta.to_decimal(DIGITS),
            applies: self.applies,
            margin: self.margin.to_decimal(DIGITS),
            precision_bits: self.precision_bits,
        }
    }

    /// The condition as a reason-chain entry.
    pub fn verdict(&self) -> BoundVerdict {
        let note = match self.applies {
            Applicability::Applies => "threshold condition holds: quantum Hamming bound guaranteed",
            Applicability::DoesNotApply => "threshold condition fails",
            Applicability::Indeterminate => "margin within precision band; treated as not applying",
            Applicability::NotApplicable => "requires q >= 3",
        };
        BoundVerdict {
            bound: BoundKind::ThresholdCondition,
            applicable: self.applies != Applicability::NotApplicable,
            satisfied: self.applies == Applicability::Applies,
            meets: false,
            lhs: Quantity::Approx(self.lhs.to_decimal(DIGITS)),
            rhs: Quantity::Approx(self.rhs.to_decimal(DIGITS)),
            note: note.into(),
        }
    }
}

fn log_q_dimension<R: Real>(dimension: &BigUint, q: u32, exact: Option<u32>) -> R {
    match exact {
        Some(k) => R::from_u32(k).unwrap(),
        None => R::from_biguint(dimension).log_base(&R::from_u32(q).unwrap()),
    }
}

/// Checks `log_q K + d ≤ (1 − 2e/q²) n` with a conservative margin.
pub fn threshold_applies<R: Real>(n: u32, dimension: &BigUint, d: u32, q: u32) -> ThresholdReport<R> {
    let exact = {
        let qb = BigUint::from(q);
        (0..=dimension.bits() as u32).find(|&k| qb.clone().pow(k) == *dimension)
    };
    threshold_inner(n, dimension, exact, d, q)
}

pub fn threshold_for<R: Real>(p: &QuantumParams) -> ThresholdReport<R> {
    threshold_inner(p.n(), p.dimension(), p.k(), p.d(), p.q())
}

fn threshold_inner<R: Real>(n: u32, dimension: &BigUint, exact: Option<u32>, d: u32, q: u32) -> ThresholdReport<R> {
    let delta: R = delta_threshold(q);
    let one_minus_delta = R::one() - delta.clone();
    let lhs = log_q_dimension::<R>(dimension, q, exact) + R::from_u32(d).unwrap();
    let rhs = one_minus_delta.clone() * R::from_u32(n).unwrap();
    let margin = rhs.clone() - lhs.clone();
    let applies = if !alphabet_supported(q) {
        Applicability::NotApplicable
    } else {
        let tol = R::tolerance() * R::from_u32(n + 1).unwrap();
        match certain_le(&lhs, &rhs, &tol) {
            Certainty::Holds => Applicability::Applies,
            Certainty::Fails => Applicability::DoesNotApply,
            Certainty::Indeterminate => Applicability::Indeterminate,
        }
    };
    ThresholdReport {
        q,
        delta,
        one_minus_delta,
        applies,
        margin,
        lhs,
        rhs,
        precision_bits: R::PRECISION_BITS,
    }
}

/// `T = q^{δn+d} / Σ_{j≤t} C(n,j)(q²−1)^j`, evaluated through logarithms.
pub fn capacity_t<R: Real>(n: u32, d: u32, q: u32, delta: &R) -> R {
    let t = (d - 1) / 2;
    let ln_q = R::from_u32(q).unwrap().ln();
    let exponent = delta.clone() * R::from_u32(n).unwrap() + R::from_u32(d).unwrap();
    let ln_ball = R::from_biguint(&quantum_ball(n, t, q)).ln();
    (exponent * ln_q - ln_ball).exp()
}

/// `h(t/n) log_q 2 + (t/n) log_q(1 − q⁻²) − 1/n`.
pub fn hamming_log_lhs<R: Real>(n: u32, t: u32, q: u32) -> R {
    let nr = R::from_u32(n).unwrap();
    let x = R::from_u32(t).unwrap() / nr.clone();
    let qr = R::from_u32(q).unwrap();
    let ln_q = qr.ln();
    let two = R::from_i64(2).unwrap();
    let shrink = R::one() - R::one() / (qr.clone() * qr);
    binary_entropy(&x) * two.ln() / ln_q.clone() + x * shrink.ln() / ln_q - R::one() / nr
}

/// `f(x) = x + (x/2) log_q(x/2) + (1 − x/2) log_q(1 − x/2)` on `(0, 2)`.
pub fn f_function<R: Real>(x: &R, q: u32) -> Result<R> {
    let two = R::from_i64(2).unwrap();
    if *x <= R::zero() || *x >= two {
        return Err(Error::Domain(x.to_decimal(12)));
    }
    let ln_q = R::from_u32(q).unwrap().ln();
    let half = x.clone() / two;
    let rest = R::one() - half.clone();
    Ok(x.clone() + (half.clone() * half.ln() + rest.clone() * rest.ln()) / ln_q)
}

/// Closed form `f′(x) = ½ log_q(q² x / (2 − x))`.
pub fn f_derivative<R: Real>(x: &R, q: u32) -> Result<R> {
    let two = R::from_i64(2).unwrap();
    if *x <= R::zero() || *x >= two {
        return Err(Error::Domain(x.to_decimal(12)));
    }
    let qr = R::from_u32(q).unwrap();
    let arg = qr.clone() * qr.clone() * x.clone() / (two.clone() - x.clone());
    Ok(arg.ln() / qr.ln() / two)
}

/// `Σ_{j≤t} C(n,j) ≤ 2^{n h(t/n)}`, the exact left side against a 192-bit right side.
pub fn entropy_bound_check(n: u32, t: u32) -> Certainty {
    let lhs: BigUint = (0..=t as i64).map(|j| binomial(n as i64, j)).sum();
    if t == 0 {
        // both sides are exactly 1
        return if lhs == BigUint::from(1u32) {
            Certainty::Holds
        } else {
            Certainty::Fails
        };
    }
    let x = Fixed::from_ratio(t as i64, n as i64);
    let rhs_log2 = Fixed::from_int(n) * binary_entropy(&x);
    let lhs_log2 = Fixed::from_biguint(&lhs).ln() / Fixed::from_int(2).ln();
    let tol = Fixed::tolerance() * Fixed::from_int(n + 1);
    certain_le(&lhs_log2, &rhs_log2, &tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn f(x: &Fixed) -> f64 {
        x.to_f64()
    }

    #[test]
    fn delta_values() {
        let d5: Fixed = delta_threshold(5);
        assert!(d5.to_decimal(20).starts_with("0.21746254627672361882"));
        let d4: Fixed = delta_threshold(4);
        assert!(d4.to_decimal(20).starts_with("0.33978522855738065442"));
        let d10: Fixed = delta_threshold(10);
        assert!(d10.to_decimal(20).starts_with("0.05436563656918090470"));
        let d2: f64 = delta_threshold(2);
        assert!(d2 > 1.0 && !alphabet_supported(2));
    }

    #[test]
    fn table_rows() {
        let rows = table1();
        assert_eq!(rows.len(), 9);
        assert_eq!(
            (rows[0].delta(), rows[0].one_minus_delta()),
            ("0.605".into(), "0.395".into())
        );
        assert_eq!(
            (rows[4].delta(), rows[4].one_minus_delta()),
            ("0.111".into(), "0.889".into())
        );
        assert_eq!(
            (rows[8].delta(), rows[8].one_minus_delta()),
            ("0.045".into(), "0.955".into())
        );
    }

    #[test]
    fn threshold_examples() {
        let k10 = BigUint::from(5u32).pow(10u32);
        let r: ThresholdReport<Fixed> = threshold_applies(20, &k10, 5, 5);
        assert_eq!(r.applies, Applicability::Applies);
        assert!(r.margin.to_decimal(20).starts_with("0.65074907446552762342"));
        let k12 = BigUint::from(5u32).pow(12u32);
        let r: ThresholdReport<Fixed> = threshold_applies(20, &k12, 4, 5);
        assert_eq!(r.applies, Applicability::DoesNotApply);
        for n in 2..30 {
            let r: ThresholdReport<Fixed> = threshold_applies(n, &BigUint::from(2u32), n, 7);
            assert_eq!(r.applies, Applicability::DoesNotApply);
        }
        let r: ThresholdReport<f64> = threshold_applies(20, &k10, 5, 2);
        assert_eq!(r.applies, Applicability::NotApplicable);
    }

    #[test]
    fn threshold_non_integral_dimension() {
        // log_5 6 ≈ 1.113
        let r: ThresholdReport<Fixed> = threshold_applies(20, &BigUint::from(6u32), 14, 5);
        assert_eq!(r.applies, Applicability::Applies);
        let r: ThresholdReport<Fixed> = threshold_applies(20, &BigUint::from(6u32), 15, 5);
        assert_eq!(r.applies, Applicability::DoesNotApply);
    }

    #[test]
    fn capacity_values() {
        let t = capacity_t(20, 5, 5, &delta_threshold::<Fixed>(5));
        assert!((f(&t) - 31.172_044_622_537_98).abs() < 1e-10);
        let t = capacity_t(10, 3, 3, &Fixed::from_ratio(605, 1000));
        assert!((f(&t) - 256.721_555_977_537_7).abs() < 1e-9);
        // t = 0: T = q^{δn + d}
        let t0 = capacity_t(4, 2, 3, &Fixed::from_ratio(1, 2));
        assert!((f(&t0) - 81.0).abs() < 1e-12);
    }

    #[test]
    fn hamming_log_lhs_values() {
        let z: Fixed = hamming_log_lhs(8, 0, 5);
        assert_eq!(z, -Fixed::from_ratio(1, 8));
        let v: Fixed = hamming_log_lhs(10, 2, 5);
        assert!((f(&v) - 0.205_844_680_823_804).abs() < 1e-14);
        let m: Fixed = hamming_log_lhs(4, 2, 3);
        assert!((f(&m) - 0.327_324_383_928_643_6).abs() < 1e-14);
    }

    #[test]
    fn f_values() {
        let one: Fixed = f_function(&Fixed::one(), 3).unwrap();
        assert!((f(&one) - 0.369_070_246_428_542_6).abs() < 1e-15);
        let boundary: Fixed = f_function(&delta_threshold(3), 3).unwrap();
        assert!((f(&boundary) - 0.046_472_271_284_159_66).abs() < 1e-15);
        assert!(f_function(&Fixed::zero(), 3).is_err());
        assert!(f_function(&2.0f64, 3).is_err());
        assert!(f_derivative(&-1.0f64, 3).is_err());
    }

    #[test]
    fn entropy_edges() {
        let h: Fixed = binary_entropy(&Fixed::from_ratio(1, 2));
        assert!((h - Fixed::one()).abs() < Fixed::tolerance());
        assert!(binary_entropy(&Fixed::zero()).is_zero());
        assert!(binary_entropy(&Fixed::one()).is_zero());
        assert_eq!(entropy_bound_check(10, 0), Certainty::Holds);
        assert_eq!(entropy_bound_check(2, 1), Certainty::Holds);
    }

    #[test]
    fn report_record_is_stable() {
        let r: ThresholdReport<Fixed> = threshold_applies(20, &BigUint::from(5u32).pow(10u32), 5, 5);
        let rec = r.record();
        assert_eq!(rec.precision_bits, 192);
        assert!(rec.delta.starts_with("0.217462546276723618"));
        let v = r.verdict();
        assert!(v.applicable && v.satisfied);
        assert_eq!(v.lhs, Quantity::Approx(format!("15.{}", "0".repeat(30))));
    }
}
