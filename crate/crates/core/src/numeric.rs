//! Numeric modes shared by the packing engine and the certificate checker.
//!
//! One engine runs in three arithmetics: hardware binary64, exact
//! big-rational, and machine integers with floor division (for weights that
//! have been pre-scaled so every quotient stays at least 1). The [`Numeric`]
//! trait pins down exactly the operations the round loop and the checkers
//! need, so a run is committed to a single mode by its type parameter.

use std::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Relative slack granted to certificate inequalities in `Float64` mode,
/// multiplied by the weight scale of the comparison. Exact modes use none.
pub const FLOAT_CERT_SLACK: f64 = 1e-9;

/// The arithmetic a run is committed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumericMode {
    /// Hardware binary64 with a fixed accumulation order.
    Float64,
    /// Arbitrary-precision rationals; every comparison is exact.
    Rational,
    /// Machine integers over pre-scaled weights; division rounds down.
    ScaledInteger,
}

impl NumericMode {
    /// Short token used by the command line and in result documents.
    pub fn token(self) -> &'static str {
        match self {
            NumericMode::Float64 => "float",
            NumericMode::Rational => "rational",
            NumericMode::ScaledInteger => "int",
        }
    }

    /// Factor applied to the round and work bounds: floor division can slow
    /// progress by at most half, so the scaled-integer bounds are doubled.
    pub fn bound_factor(self) -> f64 {
        match self {
            NumericMode::ScaledInteger => 2.0,
            _ => 1.0,
        }
    }
}

impl Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EpsilonError {
    #[error("epsilon must satisfy 0 < eps < 1")]
    OutOfRange,
    #[error("cannot parse {0:?} as a decimal in (0, 1)")]
    InvalidDecimal(String),
}

/// The slack parameter, kept as an exact fraction in lowest terms.
///
/// Every mode derives its own view of it: floats convert once, rationals and
/// integers compare via cross-multiplication so the threshold test
/// `residual <= eps * weight` never leaves the mode's ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    /// Builds `num/den`, reduced; requires `0 < num/den < 1`.
    pub fn new(num: u64, den: u64) -> Result<Self, EpsilonError> {
        if num == 0 || den == 0 || num >= den {
            return Err(EpsilonError::OutOfRange);
        }
        let g = gcd(num, den);
        Ok(Epsilon {
            num: num / g,
            den: den / g,
        })
    }

    /// Parses a plain decimal such as `0.1` or `.25` (at most 18 fractional
    /// digits) into an exact fraction.
    pub fn from_decimal_str(s: &str) -> Result<Self, EpsilonError> {
        let bad = || EpsilonError::InvalidDecimal(s.to_string());
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        if frac_part.len() > 18 {
            return Err(bad());
        }
        let int_val: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let den = 10u64
            .checked_pow(frac_part.len() as u32)
            .ok_or_else(bad)?;
        let frac_val: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let num = int_val
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Epsilon::new(num, den).map_err(|_| EpsilonError::OutOfRange)
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    /// Numerator of `1 - eps` over the same denominator.
    pub fn complement_numer(&self) -> u64 {
        self.den - self.num
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `ln(1/eps)`, the per-unit-of-size contribution to the initial potential.
    pub fn ln_inverse(&self) -> f64 {
        (self.den as f64 / self.num as f64).ln()
    }
}

impl Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Arithmetic required from a numeric mode.
///
/// All values handled through this trait are weights, residual weights,
/// packing values, or integer multiples thereof; they are finite, and
/// negative values only ever appear transiently in subtraction results that
/// the caller checks.
pub trait Numeric:
    Clone + PartialEq + PartialOrd + Debug + Display + Send + Sync + 'static
{
    const MODE: NumericMode;

    fn zero() -> Self;

    fn is_zero(&self) -> bool;

    fn is_positive(&self) -> bool;

    fn is_negative(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;

    fn sub(&self, rhs: &Self) -> Self;

    /// `k * self`. Panics on overflow in the fixed-width mode; the scaling
    /// bound keeps every in-contract value far inside `i128`.
    fn mul_u128(&self, k: u128) -> Self;

    /// The per-edge raise candidate `self / d`: exact division in the float
    /// and rational modes, floor division in the integer mode. `d >= 1`.
    fn div_by_degree(&self, d: usize) -> Self;

    /// The deletion threshold test `self <= eps * w`, evaluated without
    /// leaving the mode (exact cross-multiplication in the exact modes).
    fn le_eps_times(&self, eps: &Epsilon, w: &Self) -> bool;

    /// `self <= rhs`, with [`FLOAT_CERT_SLACK`] times `tol_scale` of slack in
    /// `Float64` mode and exact comparison otherwise.
    fn le_with_tolerance(&self, rhs: &Self, tol_scale: f64) -> bool;

    fn to_f64(&self) -> f64;

    /// Mode-specific progress assertion run at the top of each round; only
    /// the scaled-integer mode has one (its residuals must stay at or above
    /// the edge count so floored quotients keep at least half their value).
    fn debug_assert_round_progress(&self, _degree: usize, _edge_count: usize) {}

    fn sum<'a, I: Iterator<Item = &'a Self>>(iter: I) -> Self
    where
        Self: 'a,
    {
        iter.fold(Self::zero(), |acc, x| acc.add(x))
    }
}

impl Numeric for f64 {
    const MODE: NumericMode = NumericMode::Float64;

    fn zero() -> Self {
        0.0
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_positive(&self) -> bool {
        *self > 0.0
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_u128(&self, k: u128) -> Self {
        self * k as f64
    }

    fn div_by_degree(&self, d: usize) -> Self {
        self / d as f64
    }

    fn le_eps_times(&self, eps: &Epsilon, w: &Self) -> bool {
        *self <= eps.as_f64() * w
    }

    fn le_with_tolerance(&self, rhs: &Self, tol_scale: f64) -> bool {
        *self <= rhs + FLOAT_CERT_SLACK * tol_scale
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Numeric for BigRational {
    const MODE: NumericMode = NumericMode::Rational;

    fn zero() -> Self {
        Zero::zero()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_u128(&self, k: u128) -> Self {
        self * BigInt::from(k)
    }

    fn div_by_degree(&self, d: usize) -> Self {
        self / BigInt::from(d)
    }

    fn le_eps_times(&self, eps: &Epsilon, w: &Self) -> bool {
        self * BigInt::from(eps.denom()) <= w * BigInt::from(eps.numer())
    }

    fn le_with_tolerance(&self, rhs: &Self, _tol_scale: f64) -> bool {
        self <= rhs
    }

    fn to_f64(&self) -> f64 {
        big_rational_to_f64(self)
    }
}

impl Numeric for i128 {
    const MODE: NumericMode = NumericMode::ScaledInteger;

    fn zero() -> Self {
        0
    }

    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn is_positive(&self) -> bool {
        *self > 0
    }

    fn is_negative(&self) -> bool {
        *self < 0
    }

    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(*rhs).expect("integer-mode overflow")
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.checked_sub(*rhs).expect("integer-mode overflow")
    }

    fn mul_u128(&self, k: u128) -> Self {
        i128::try_from(k)
            .ok()
            .and_then(|k| self.checked_mul(k))
            .expect("integer-mode overflow")
    }

    fn div_by_degree(&self, d: usize) -> Self {
        debug_assert!(d >= 1);
        self.div_euclid(d as i128)
    }

    fn le_eps_times(&self, eps: &Epsilon, w: &Self) -> bool {
        let lhs = self
            .checked_mul(eps.denom() as i128)
            .expect("integer-mode overflow");
        let rhs = w
            .checked_mul(eps.numer() as i128)
            .expect("integer-mode overflow");
        lhs <= rhs
    }

    fn le_with_tolerance(&self, rhs: &Self, _tol_scale: f64) -> bool {
        self <= rhs
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn debug_assert_round_progress(&self, degree: usize, edge_count: usize) {
        // Pre-scaled weights guarantee a live residual of at least the edge
        // count, so the floored quotient is >= 1 and >= half the true value.
        debug_assert!(
            *self >= edge_count as i128,
            "live residual {self} fell below the edge count {edge_count}; weights were not pre-scaled"
        );
        let q = self.div_euclid(degree as i128);
        debug_assert!(q >= 1);
        debug_assert!(2 * q * degree as i128 >= *self);
    }
}

/// Converts a big rational to the nearest `f64`, staying accurate even when
/// numerator and denominator are astronomically large but the value itself is
/// moderate (which happens to residuals after many exact rounds).
pub fn big_rational_to_f64(r: &BigRational) -> f64 {
    if Zero::is_zero(r) {
        return 0.0;
    }
    let negative = Signed::is_negative(r);
    let numer = r.numer().magnitude();
    let denom = r.denom().magnitude();
    let bn = numer.bits() as i64;
    let bd = denom.bits() as i64;
    let magnitude = if bn <= 128 && bd <= 128 {
        let n = numer.to_f64().unwrap_or(f64::INFINITY);
        let d = denom.to_f64().unwrap_or(f64::INFINITY);
        n / d
    } else {
        // Keep the top 128 bits of each side; the dropped tail perturbs the
        // ratio by less than one part in 2^127.
        let nt = (numer >> (bn - 128).max(0) as u64).to_f64().unwrap();
        let dt = (denom >> (bd - 128).max(0) as u64).to_f64().unwrap();
        let exp = (bn - 128).max(0) - (bd - 128).max(0);
        if exp > 1500 {
            f64::INFINITY
        } else if exp < -1500 {
            0.0
        } else {
            (nt / dt) * pow2(exp as i32)
        }
    };
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

fn pow2(e: i32) -> f64 {
    // Split so intermediate powers stay finite/nonzero for |e| up to ~2000.
    let h = e / 2;
    2f64.powi(h) * 2f64.powi(e - h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn epsilon_rejects_out_of_range() {
        assert_eq!(Epsilon::new(0, 10), Err(EpsilonError::OutOfRange));
        assert_eq!(Epsilon::new(10, 10), Err(EpsilonError::OutOfRange));
        assert_eq!(Epsilon::new(11, 10), Err(EpsilonError::OutOfRange));
        assert_eq!(Epsilon::new(1, 0), Err(EpsilonError::OutOfRange));
    }

    #[test]
    fn epsilon_reduces() {
        let e = Epsilon::new(2, 8).unwrap();
        assert_eq!((e.numer(), e.denom()), (1, 4));
        assert_eq!(e.complement_numer(), 3);
        assert_eq!(e.as_f64(), 0.25);
    }

    #[test]
    fn epsilon_parses_decimals() {
        assert_eq!(
            Epsilon::from_decimal_str("0.1").unwrap(),
            Epsilon::new(1, 10).unwrap()
        );
        assert_eq!(
            Epsilon::from_decimal_str(".25").unwrap(),
            Epsilon::new(1, 4).unwrap()
        );
        assert_eq!(
            Epsilon::from_decimal_str("0.300").unwrap(),
            Epsilon::new(3, 10).unwrap()
        );
        assert!(Epsilon::from_decimal_str("0").is_err());
        assert!(Epsilon::from_decimal_str("1.0").is_err());
        assert!(Epsilon::from_decimal_str("-0.1").is_err());
        assert!(Epsilon::from_decimal_str("0.1e3").is_err());
        assert!(Epsilon::from_decimal_str("").is_err());
    }

    #[test]
    fn float_mode_threshold_test() {
        let eps = Epsilon::new(1, 4).unwrap();
        assert!(0.25f64.le_eps_times(&eps, &1.0));
        assert!(!0.2500001f64.le_eps_times(&eps, &1.0));
    }

    #[test]
    fn rational_mode_threshold_is_exact() {
        let eps = Epsilon::new(1, 3).unwrap();
        // 1/3 of weight 1: exactly at the boundary counts as below.
        assert!(rat(1, 3).le_eps_times(&eps, &rat(1, 1)));
        assert!(!rat(1_000_000_001, 3_000_000_000).le_eps_times(&eps, &rat(1, 1)));
    }

    #[test]
    fn integer_mode_floor_division() {
        assert_eq!(7i128.div_by_degree(2), 3);
        assert_eq!(6i128.div_by_degree(2), 3);
        assert_eq!(1i128.div_by_degree(3), 0);
    }

    #[test]
    fn integer_mode_threshold_uses_cross_multiplication() {
        let eps = Epsilon::new(1, 3).unwrap();
        // 4 <= (1/3) * 12 holds exactly; 5 does not.
        assert!(4i128.le_eps_times(&eps, &12));
        assert!(!5i128.le_eps_times(&eps, &12));
    }

    #[test]
    fn tolerance_only_applies_to_floats() {
        assert!(1.0f64.le_with_tolerance(&(1.0 - 1e-12), 1.0));
        assert!(!rat(1, 1).le_with_tolerance(&rat(999_999_999_999, 1_000_000_000_000), 1.0));
        assert!(!1i128.le_with_tolerance(&0, 1.0));
    }

    #[test]
    fn big_rational_to_f64_handles_huge_representations() {
        let two = BigInt::from(2);
        let huge = two.pow(2000);
        // (2^2000 + 1) / 2^2000 is essentially 1.
        let r = BigRational::new(&huge + 1, huge.clone());
        assert!((big_rational_to_f64(&r) - 1.0).abs() < 1e-12);
        // 3 / 2^2000 underflows to zero.
        let small = BigRational::new(BigInt::from(3), huge.clone());
        assert_eq!(big_rational_to_f64(&small), 0.0);
        // 2^2000 / 3 overflows to infinity.
        let big = BigRational::new(huge, BigInt::from(3));
        assert_eq!(big_rational_to_f64(&big), f64::INFINITY);
        // Moderate value with a huge representation stays precise.
        let third = BigRational::new(two.pow(1999), BigInt::from(3) * two.pow(1998));
        assert!((big_rational_to_f64(&third) - 2.0 / 3.0).abs() < 1e-15);
        let neg = BigRational::new(BigInt::from(-1), BigInt::from(2));
        assert_eq!(big_rational_to_f64(&neg), -0.5);
    }

    #[test]
    fn mode_tokens_and_factors() {
        assert_eq!(NumericMode::Float64.token(), "float");
        assert_eq!(NumericMode::Rational.token(), "rational");
        assert_eq!(NumericMode::ScaledInteger.token(), "int");
        assert_eq!(NumericMode::Float64.bound_factor(), 1.0);
        assert_eq!(NumericMode::ScaledInteger.bound_factor(), 2.0);
    }
}
