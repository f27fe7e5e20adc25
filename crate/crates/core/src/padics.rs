//! Truncated 2-adic arithmetic.
//!
//! Values are residues modulo `2^K` kept in the canonical range `[0, 2^K)`.
//! Rationals with odd denominators reduce into this ring; square roots of odd
//! units are lifted bit by bit and lose one bit of precision, which the
//! returned precision records.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type ExactRational = BigRational;

/// 2-adic valuation; zero has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// A 2-adic integer known modulo `2^precision`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoAdicTrunc {
    residue: BigUint,
    precision: u32,
}

impl TwoAdicTrunc {
    /// Reduces any integer into `[0, 2^precision)`.
    pub fn new(value: &BigInt, precision: u32) -> Self {
        let modulus = BigInt::one() << precision;
        let r = value.mod_floor(&modulus);
        TwoAdicTrunc {
            residue: r.to_biguint().expect("mod_floor of positive modulus is nonnegative"),
            precision,
        }
    }

    pub fn from_u64(value: u64, precision: u32) -> Self {
        Self::new(&BigInt::from(value), precision)
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::one() << self.precision
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.residue.clone())
    }

    /// Drops to a coarser precision. Panics if `precision` exceeds the current one.
    pub fn truncate(&self, precision: u32) -> Self {
        assert!(precision <= self.precision, "cannot refine precision");
        Self::new(&self.to_bigint(), precision)
    }

    pub fn neg(&self) -> Self {
        Self::new(&-self.to_bigint(), self.precision)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.precision.min(other.precision);
        Self::new(&(self.to_bigint() + other.to_bigint()), p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.precision.min(other.precision);
        Self::new(&(self.to_bigint() * other.to_bigint()), p)
    }

    /// Multiplies by `+1` or `-1`.
    pub fn signed(&self, sign: i32) -> Self {
        if sign < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for TwoAdicTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 2^{}", self.residue, self.precision)
    }
}

/// `v_2` of a nonzero integer.
pub fn val2_int(x: &BigInt) -> Valuation {
    match x.trailing_zeros() {
        Some(tz) => Valuation::Finite(tz as i64),
        None => Valuation::Infinite,
    }
}

pub fn val2(x: &ExactRational) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let num = x.numer().trailing_zeros().unwrap_or(0) as i64;
    let den = x.denom().trailing_zeros().unwrap_or(0) as i64;
    Valuation::Finite(num - den)
}

/// Inverse of an odd integer modulo `2^precision`, by extended Euclid.
fn odd_inverse_mod2k(odd: &BigInt, precision: u32) -> BigInt {
    let modulus = BigInt::one() << precision;
    let e = odd.mod_floor(&modulus).extended_gcd(&modulus);
    debug_assert!(e.gcd.is_one() || precision == 0);
    e.x.mod_floor(&modulus)
}

/// Image of a rational with `v_2 >= 0` in `Z / 2^precision`.
pub fn reduce_mod2k(x: &ExactRational, precision: u32) -> Result<TwoAdicTrunc> {
    if let Valuation::Finite(v) = val2(x) {
        if v < 0 {
            return Err(Error::NegativeValuation(v));
        }
    }
    let num = x.numer();
    let den = x.denom();
    // Lowest terms with v_2 >= 0 means the denominator is odd.
    let inv = odd_inverse_mod2k(den, precision);
    Ok(TwoAdicTrunc::new(&(num * inv), precision))
}

/// `floor(sqrt(x))` by Newton's iteration from above.
pub fn isqrt_floor(x: &BigUint) -> BigUint {
    if x.is_zero() {
        return BigUint::zero();
    }
    // Start at a power of two >= sqrt(x).
    let bits = x.bits();
    let mut r = BigUint::one() << bits.div_ceil(2);
    loop {
        let next = (&r + x / &r) >> 1u32;
        if next >= r {
            return r;
        }
        r = next;
    }
}

/// Exact square root, `None` when `x` is not a perfect square.
pub fn isqrt_exact(x: &BigUint) -> Option<BigUint> {
    let r = isqrt_floor(x);
    (&r * &r == *x).then_some(r)
}

/// Square root of an odd unit `a ≡ 1 (mod 8)` known modulo `2^K`.
///
/// The odd roots of `x^2 ≡ a (mod 2^K)` are `{±x, ±x + 2^(K-1)}`; fixing the
/// class of the root modulo 4 leaves exactly one class modulo `2^(K-1)`, which
/// is returned at precision `K - 1`.
pub fn hensel_sqrt(a: &TwoAdicTrunc, sign_mod4: u8) -> Result<TwoAdicTrunc> {
    assert!(
        sign_mod4 == 1 || sign_mod4 == 3,
        "sign_mod4 must be 1 or 3, got {sign_mod4}"
    );
    let k = a.precision();
    if k < 3 {
        return Err(Error::InsufficientPrecision { got: k, need: 3 });
    }
    let residue = a.residue();
    if (residue % 8u32) != BigUint::one() {
        return Err(Error::NotASquareMod8(a.to_string()));
    }
    // Invariant: x^2 ≡ a (mod 2^(i+1)) at the top of each step.
    let mut x = BigUint::one();
    for i in 3..k {
        let modulus = BigUint::one() << (i + 1);
        if (&x * &x) % &modulus != residue % &modulus {
            x += BigUint::one() << (i - 1);
        }
    }
    let root = TwoAdicTrunc::new(&BigInt::from_biguint(Sign::Plus, x), k - 1);
    if (root.residue() % 4u32) == BigUint::from(sign_mod4) {
        Ok(root)
    } else {
        Ok(root.neg())
    }
}

/// Whether `x` is congruent to `y` modulo `2^precision`.
pub fn congruent(x: &BigInt, y: &BigInt, precision: u32) -> bool {
    TwoAdicTrunc::new(x, precision) == TwoAdicTrunc::new(y, precision)
}

/// `(2^k)` as a rational.
pub fn pow2(k: i64) -> ExactRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as u64)
    }
}

/// Odd part of a nonzero integer, sign kept.
pub fn odd_part(x: &BigInt) -> BigInt {
    match x.trailing_zeros() {
        Some(tz) => x >> tz,
        None => BigInt::zero(),
    }
}

pub(crate) fn is_odd(x: &BigInt) -> bool {
    x.abs().is_odd()
}
