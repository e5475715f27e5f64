use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Scalar used for the real-valued threshold quantities.
///
/// Implementations must report an absolute comparison tolerance valid for
/// values of magnitude up to about `2^20` after a few dozen operations;
/// comparisons inside that band are treated as unresolved.
pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + FromPrimitive
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Bits of working precision.
    const PRECISION_BITS: u32;

    fn from_biguint(v: &BigUint) -> Self;
    fn e() -> Self;
    /// Natural logarithm; the argument must be positive.
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn floor_to_i64(&self) -> i64;
    fn to_f64(&self) -> f64;
    fn tolerance() -> Self;
    /// Decimal rendering truncated to `digits` fractional digits.
    fn to_decimal(&self, digits: usize) -> String;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).unwrap() / Self::from_i64(den).unwrap()
    }

    fn log_base(&self, base: &Self) -> Self {
        self.ln() / base.ln()
    }
}

impl Real for f64 {
    const PRECISION_BITS: u32 = 53;

    fn from_biguint(v: &BigUint) -> Self {
        v.to_f64().unwrap_or(f64::INFINITY)
    }

    fn e() -> Self {
        std::f64::consts::E
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn floor_to_i64(&self) -> i64 {
        self.floor() as i64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn tolerance() -> Self {
        1e-9
    }

    fn to_decimal(&self, digits: usize) -> String {
        format!("{:.*}", digits, self)
    }
}

const FRAC_BITS: u32 = 192;

/// Binary fixed-point number with 192 fractional bits over an unbounded
/// integer part.
///
/// Addition is exact; each multiplication or division truncates by at most
/// one unit in the last place, and `ln`/`exp` are accurate to a few units.
/// [`Real::tolerance`] is `2^-100`, leaving ample headroom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixed(BigInt);

impl Fixed {
    fn ulp_scale() -> BigInt {
        BigInt::one() << FRAC_BITS
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Fixed(v.into() << FRAC_BITS)
    }

    /// Raw mantissa, i.e. `self · 2^192`.
    pub fn mantissa(&self) -> &BigInt {
        &self.0
    }

    pub fn abs(&self) -> Self {
        Fixed(self.0.abs())
    }

    fn shl(&self, k: i64) -> Self {
        if k >= 0 {
            Fixed(&self.0 << k as u64)
        } else {
            Fixed(&self.0 >> (-k) as u64)
        }
    }

    fn ln2() -> &'static Fixed {
        static LN2: OnceLock<Fixed> = OnceLock::new();
        LN2.get_or_init(|| {
            // ln 2 = 2 atanh(1/3)
            let third = Fixed::from_ratio(1, 3);
            atanh_series(&third).shl(1)
        })
    }
}

/// `Σ z^{2i+1}/(2i+1)` for `|z| ≤ 1/3`.
fn atanh_series(z: &Fixed) -> Fixed {
    let z2 = z.clone() * z.clone();
    let mut power = z.clone();
    let mut sum = Fixed::zero();
    let mut i = 1i64;
    while !power.0.is_zero() {
        sum = sum + Fixed(&power.0 / BigInt::from(i));
        power = power * z2.clone();
        i += 2;
    }
    sum
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 + rhs.0)
    }
}

impl Sub for Fixed {
    type Output = Fixed;
    fn sub(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 - rhs.0)
    }
}

impl Mul for Fixed {
    type Output = Fixed;
    fn mul(self, rhs: Fixed) -> Fixed {
        Fixed((self.0 * rhs.0) >> FRAC_BITS)
    }
}

impl Div for Fixed {
    type Output = Fixed;
    fn div(self, rhs: Fixed) -> Fixed {
        assert!(!rhs.0.is_zero(), "division by zero");
        Fixed((self.0 << FRAC_BITS) / rhs.0)
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-self.0)
    }
}

impl Zero for Fixed {
    fn zero() -> Self {
        Fixed(BigInt::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Fixed {
    fn one() -> Self {
        Fixed(Self::ulp_scale())
    }
}

impl FromPrimitive for Fixed {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Fixed::from_int(n))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Fixed::from_int(n))
    }
}

impl Real for Fixed {
    const PRECISION_BITS: u32 = FRAC_BITS;

    fn from_biguint(v: &BigUint) -> Self {
        Fixed::from_int(BigInt::from(v.clone()))
    }

    fn e() -> Self {
        static E: OnceLock<Fixed> = OnceLock::new();
        E.get_or_init(|| Fixed::one().exp()).clone()
    }

    fn ln(&self) -> Self {
        assert!(self.0.sign() == Sign::Plus, "ln of a non-positive value");
        // self = 2^k · y with y in [1, 2)
        let k = self.0.bits() as i64 - 1 - FRAC_BITS as i64;
        let y = self.shl(-k);
        let z = (y.clone() - Fixed::one()) / (y + Fixed::one());
        Fixed::ln2().clone() * Fixed::from_int(k) + atanh_series(&z).shl(1)
    }

    fn exp(&self) -> Self {
        let ln2 = Fixed::ln2().clone();
        // self = k ln2 + r, |r| ≤ ln2/2
        let k = (self.clone() / ln2.clone() + Fixed::from_ratio(1, 2)).floor_to_i64();
        let r = self.clone() - ln2 * Fixed::from_int(k);
        let mut term = Fixed::one();
        let mut sum = Fixed::one();
        let mut i = 1i64;
        while !term.0.is_zero() {
            term = Fixed((term * r.clone()).0 / BigInt::from(i));
            sum = sum + term.clone();
            i += 1;
        }
        sum.shl(k)
    }

    fn floor_to_i64(&self) -> i64 {
        (&self.0 >> FRAC_BITS).to_i64().expect("integer part fits in i64")
    }

    fn to_f64(&self) -> f64 {
        let bits = self.0.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (&self.0 >> shift as u64).to_f64().unwrap();
        top * 2f64.powi((shift - FRAC_BITS as i64) as i32)
    }

    fn tolerance() -> Self {
        Fixed(BigInt::one() << (FRAC_BITS - 100))
    }

    fn to_decimal(&self, digits: usize) -> String {
        let neg = self.0.sign() == Sign::Minus;
        let mag = self.0.abs();
        let int = &mag >> FRAC_BITS;
        let frac = &mag - (&int << FRAC_BITS);
        let scaled = (frac * BigInt::from(10u32).pow(digits as u32)) >> FRAC_BITS;
        let sign = if neg { "-" } else { "" };
        format!("{sign}{int}.{scaled:0>digits$}")
    }
}

/// Three-valued comparison result for values known only up to a tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Holds,
    Fails,
    Indeterminate,
}

/// Decides `a ≤ b` when `|a − b|` exceeds `tol`; otherwise indeterminate.
pub fn certain_le<R: Real>(a: &R, b: &R, tol: &R) -> Certainty {
    let gap = b.clone() - a.clone();
    if gap.partial_cmp(tol) == Some(Ordering::Greater) {
        Certainty::Holds
    } else if gap.partial_cmp(&-tol.clone()) == Some(Ordering::Less) {
        Certainty::Fails
    } else {
        Certainty::Indeterminate
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn constants() {
        assert!(close(Fixed::e().to_f64(), std::f64::consts::E, 1e-15));
        assert!(close(Fixed::ln2().to_f64(), std::f64::consts::LN_2, 1e-15));
        assert_eq!(
            Fixed::e().to_decimal(40),
            // digits of e, truncated
            "2.7182818284590452353602874713526624977572"
        );
    }

    #[test]
    fn ln_exp_consistency() {
        for v in [1i64, 2, 3, 10, 1000, 123_456_789] {
            let x = Fixed::from_int(v);
            let back = x.ln().exp();
            let err = (back - x).abs();
            assert!(err < Fixed::from_ratio(1, 1 << 40) * Fixed::from_int(v), "v = {v}");
        }
        let small = Fixed::from_ratio(1, 7);
        assert!(close(small.ln().to_f64(), (1.0f64 / 7.0).ln(), 1e-15));
        assert!(close(Fixed::from_int(-3).exp().to_f64(), (-3f64).exp(), 1e-17));
        assert!(Fixed::one().ln().is_zero() || Fixed::one().ln().abs() < Fixed::tolerance());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Fixed::from_ratio(-5, 4).to_decimal(3), "-1.250");
        assert_eq!(Fixed::from_ratio(1, 3).to_decimal(5), "0.33333");
        assert_eq!(Fixed::from_int(42).floor_to_i64(), 42);
        assert_eq!(Fixed::from_ratio(-1, 2).floor_to_i64(), -1);
    }

    #[test]
    fn certainty_bands() {
        let tol = Fixed::tolerance();
        let one = Fixed::one();
        assert_eq!(certain_le(&one, &Fixed::from_int(2), &tol), Certainty::Holds);
        assert_eq!(certain_le(&Fixed::from_int(2), &one, &tol), Certainty::Fails);
        assert_eq!(certain_le(&one, &one, &tol), Certainty::Indeterminate);
        assert_eq!(certain_le(&1.0f64, &1.0, &f64::tolerance()), Certainty::Indeterminate);
    }
}
