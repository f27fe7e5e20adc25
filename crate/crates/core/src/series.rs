//! `f(n) mod 2^K` from power sums of reciprocals.
//!
//! The chain is:
//!
//! 1. `P_n(x) = prod (x - (zeta + 1/zeta))` over all `(2n+1)`-th roots of
//!    unity, built from the integer Chebyshev recurrence;
//! 2. `U_k(n)`, the reciprocal power sums of its roots, read off as minus
//!    the Taylor coefficients of `P_n'/P_n`;
//! 3. `S_k = (U_k^2 - 2 U_{2k} + 4^-k) / 4`, the reciprocal power sums of the
//!    `alpha_{i,j}` with `1 <= i, j <= n`;
//! 4. `E_k` from Newton's identities;
//! 5. `f(n)^2 = sign(n) * sum_k 4^k E_k(n)`, truncated once `4^k E_k`
//!    vanishes modulo the target power of two;
//! 6. the odd square root with the known class of `f(n)` mod 4.
//!
//! All arithmetic is exact over `Q` until the final reduction mod `2^K`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padics::{hensel_sqrt, pow2, reduce_mod2k, ExactRational, TwoAdicTrunc};
use crate::poly::IntPolynomial;

/// Above this `n`, [`f_mod`] evaluates the fitted quasi-polynomials rather
/// than running the length-`2n+1` recurrence.
pub const DIRECT_PATH_MAX_N: i64 = 10_000;

/// Truncated power series with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<ExactRational>,
}

impl RationalSeries {
    pub fn new(coeffs: Vec<ExactRational>) -> Self {
        RationalSeries { coeffs }
    }

    /// Number of known coefficients (the truncation order).
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &ExactRational {
        &self.coeffs[k]
    }

    /// `num / den` to `order` terms. `den` must have a nonzero constant term.
    pub fn quotient(num: &[ExactRational], den: &[ExactRational], order: usize) -> Result<Self> {
        let d0 = den.first().filter(|c| !c.is_zero()).ok_or(Error::ZeroConstantTerm)?;
        let inv_d0 = d0.recip();
        let mut out: Vec<ExactRational> = Vec::with_capacity(order);
        for k in 0..order {
            let mut acc = num.get(k).cloned().unwrap_or_else(BigRational::zero);
            for (j, q) in out.iter().enumerate() {
                if let Some(d) = den.get(k - j) {
                    if !d.is_zero() {
                        acc -= q * d;
                    }
                }
            }
            out.push(acc * &inv_d0);
        }
        Ok(RationalSeries { coeffs: out })
    }
}

/// Normalized Chebyshev polynomial `C_m` with `C_m(2 cos t) = 2 cos(m t)`,
/// keeping only the coefficients of `x^0 .. x^(terms-1)`.
fn chebyshev_low(m: u64, terms: usize) -> Vec<BigInt> {
    let terms = terms.max(2);
    // prev = C_0 = 2, cur = C_1 = x
    let mut prev = vec![BigInt::zero(); terms];
    let mut cur = vec![BigInt::zero(); terms];
    prev[0] = BigInt::from(2);
    if m == 0 {
        return prev;
    }
    cur[1] = BigInt::one();
    for _ in 1..m {
        // C_{j+1} = x C_j - C_{j-1}, written into prev's storage.
        for k in (0..terms).rev() {
            let p = std::mem::take(&mut prev[k]);
            prev[k] = if k > 0 { &cur[k - 1] - p } else { -p };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    cur
}

/// `P_n(x) = C_{2n+1}(x) - 2`, degree `2n + 1`.
pub fn p_poly(n: u64) -> IntPolynomial {
    let m = 2 * n + 1;
    p_poly_low(n, m as usize + 1)
}

/// The coefficients of `x^0 .. x^(terms-1)` of `P_n`, as a polynomial.
///
/// This is all the log-derivative series needs, and it avoids building the
/// full degree-`2n+1` polynomial for large `n`.
pub fn p_poly_low(n: u64, terms: usize) -> IntPolynomial {
    let mut c = chebyshev_low(2 * n + 1, terms);
    c[0] -= 2;
    c.truncate(terms);
    IntPolynomial::new(c)
}

/// Taylor series of `P'(x) / P(x)` at 0.
///
/// Only the coefficients of `P` below `x^(order+1)` are used, so a
/// truncation of `P` to that many terms gives the same result.
pub fn log_derivative_series(p: &IntPolynomial, order: usize) -> Result<RationalSeries> {
    let den: Vec<ExactRational> = (0..=order)
        .map(|k| BigRational::from_integer(p.coeff(k)))
        .collect();
    let num: Vec<ExactRational> = (0..order)
        .map(|k| BigRational::from_integer(p.coeff(k + 1) * BigInt::from(k + 1)))
        .collect();
    RationalSeries::quotient(&num, &den, order)
}

/// `U_1(n) .. U_kmax(n)`, `U_k(n) = sum over (2n+1)-th roots zeta of (zeta + 1/zeta)^-k`.
pub fn u_values(n: u64, k_max: usize) -> Vec<ExactRational> {
    let p = p_poly_low(n, k_max + 1);
    let series = log_derivative_series(&p, k_max).expect("P_n(0) = -2 is nonzero");
    series.coeffs.into_iter().map(|c| -c).collect()
}

/// `S_1 .. S_kmax` from `U_1 .. U_{2 kmax}`.
pub fn s_values(u: &[ExactRational], k_max: usize) -> Vec<ExactRational> {
    assert!(
        u.len() >= 2 * k_max,
        "need U_1..U_{} but only {} values given",
        2 * k_max,
        u.len()
    );
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    (1..=k_max)
        .map(|k| {
            let uk = &u[k - 1];
            let u2k = &u[2 * k - 1];
            (uk * uk - u2k * BigInt::from(2) + pow2(-2 * k as i64)) * &quarter
        })
        .collect()
}

/// `E_0 .. E_len` from `S_1 .. S_len` via `k E_k = sum_i (-1)^(i-1) S_i E_{k-i}`.
pub fn newton_e(s: &[ExactRational]) -> Vec<ExactRational> {
    let mut e = Vec::with_capacity(s.len() + 1);
    e.push(BigRational::one());
    for k in 1..=s.len() {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let term = &s[i - 1] * &e[k - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / BigInt::from(k));
    }
    e
}

/// `(-1)^floor((n+1)/2)` extended periodically to all integers:
/// `+1` for `n ≡ 0, 3 (mod 4)` and `-1` for `n ≡ 1, 2`.
pub fn sign_factor(n: i64) -> i32 {
    match n.rem_euclid(4) {
        0 | 3 => 1,
        _ => -1,
    }
}

/// Class of `f(n)` modulo 4: 3 when `n ≡ 2 (mod 4)`, else 1.
pub fn f_class_mod4(n: i64) -> u8 {
    if n.rem_euclid(4) == 2 {
        3
    } else {
        1
    }
}

/// `sign(n) * sum_{k < K} 4^k E_k mod 2^K`.
pub fn f_squared_mod(n: i64, precision: u32, e: &[ExactRational]) -> Result<TwoAdicTrunc> {
    let terms = precision as usize;
    assert!(
        e.len() >= terms,
        "need E_0..E_{} but only {} values given",
        terms - 1,
        e.len()
    );
    let mut acc = TwoAdicTrunc::from_u64(0, precision);
    for (k, ek) in e.iter().take(terms).enumerate() {
        let term = ek * pow2(2 * k as i64);
        acc = acc.add(&reduce_mod2k(&term, precision)?);
    }
    Ok(acc.signed(sign_factor(n)))
}

/// Number of `U` values needed to get `f mod 2^K`, including a margin of 2.
pub fn required_u_terms(precision: u32) -> usize {
    2 * precision as usize + 2
}

/// Exact `U`, `S`, `E` values for one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumTable {
    pub n: i64,
    /// `U_1 ..`
    pub u: Vec<ExactRational>,
    /// `S_1 ..`
    pub s: Vec<ExactRational>,
    /// `E_0 ..`
    pub e: Vec<ExactRational>,
}

impl PowerSumTable {
    /// Builds `S` and `E` up to `floor(u.len() / 2)`.
    pub fn from_u(n: i64, u: Vec<ExactRational>) -> Self {
        let k_max = u.len() / 2;
        let s = s_values(&u, k_max);
        let e = newton_e(&s);
        PowerSumTable { n, u, s, e }
    }

    pub fn direct(n: u64, k_max: usize) -> Self {
        Self::from_u(n as i64, u_values(n, 2 * k_max))
    }
}

/// `f(n) mod 2^K` from a table whose `E` covers `E_0 .. E_K`.
pub fn f_mod_from_table(table: &PowerSumTable, precision: u32) -> Result<TwoAdicTrunc> {
    if precision < 2 {
        return Err(Error::InsufficientPrecision {
            got: precision,
            need: 2,
        });
    }
    let f2 = f_squared_mod(table.n, precision + 1, &table.e)?;
    hensel_sqrt(&f2, f_class_mod4(table.n))
}

/// `f(n) mod 2^K` through the direct series for `n >= 0`.
pub fn f_mod_direct(n: u64, precision: u32) -> Result<TwoAdicTrunc> {
    let u = u_values(n, required_u_terms(precision));
    f_mod_from_table(&PowerSumTable::from_u(n as i64, u), precision)
}

/// `f(n) mod 2^K` for any integer `n`: the direct series for
/// `0 <= n <= DIRECT_PATH_MAX_N`, fitted quasi-polynomials otherwise.
pub fn f_mod(n: i64, precision: u32) -> Result<TwoAdicTrunc> {
    if (0..=DIRECT_PATH_MAX_N).contains(&n) {
        f_mod_direct(n as u64, precision)
    } else {
        crate::quasipoly::f_mod_quasi(n, precision)
    }
}
