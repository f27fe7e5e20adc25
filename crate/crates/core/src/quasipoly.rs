//! Quasi-polynomials `n -> A(n) + (-1)^n B(n)` over `Q`.
//!
//! Power sums `U_k(n)` are quasi-polynomials in `n`. Fitting them exactly from
//! a window of sampled values lets [`f_mod_quasi`] evaluate `f mod 2^K` at
//! negative `n` and at `n` far too large for the direct series.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padics::{ExactRational, TwoAdicTrunc};
use crate::series::{self, required_u_terms, u_values, PowerSumTable};

/// Values checked beyond the fitting window before a fit is accepted.
pub const HELD_OUT: usize = 5;

/// Polynomial in `n` with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPolynomial {
    coeffs: Vec<ExactRational>,
}

impl RatPolynomial {
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPolynomial { coeffs }
    }

    pub fn from_ratios(c: &[(i64, i64)]) -> Self {
        Self::new(
            c.iter()
                .map(|&(a, b)| BigRational::new(a.into(), b.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, n: &BigInt) -> ExactRational {
        let x = BigRational::from_integer(n.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    fn combine(&self, other: &Self, f: impl Fn(&ExactRational, &ExactRational) -> ExactRational) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        Self::new(
            (0..len)
                .map(|i| {
                    f(
                        self.coeffs.get(i).unwrap_or(&zero),
                        other.coeffs.get(i).unwrap_or(&zero),
                    )
                })
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `p(-1 - n)` as a polynomial in `n`.
    pub fn reflect(&self) -> Self {
        // Horner in the polynomial ring with x = -1 - n.
        let x = RatPolynomial::from_ratios(&[(-1, 1), (-1, 1)]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            acc.mul(&x).add(&Self::new(vec![c.clone()]))
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
}

impl fmt::Display for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})n"),
                _ => format!("({c})n^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// `n -> A(n) + (-1)^n B(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuasiPolynomial {
    pub even_part: RatPolynomial,
    pub sign_part: RatPolynomial,
}

impl QuasiPolynomial {
    pub fn new(even_part: RatPolynomial, sign_part: RatPolynomial) -> Self {
        QuasiPolynomial {
            even_part,
            sign_part,
        }
    }

    pub fn eval(&self, n: i64) -> ExactRational {
        let x = BigInt::from(n);
        let a = self.even_part.eval(&x);
        let b = self.sign_part.eval(&x);
        if n.rem_euclid(2) == 0 {
            a + b
        } else {
            a - b
        }
    }

    /// Whether `q(-1 - n) = q(n)` identically.
    ///
    /// `(-1)^(-1-n) = -(-1)^n`, so this holds iff `A(-1-n) = A(n)` and
    /// `B(-1-n) = -B(n)` as polynomials.
    pub fn check_reflection(&self) -> bool {
        self.even_part.reflect() == self.even_part
            && self.sign_part.reflect() == self.sign_part.scale(&-BigRational::one())
    }

    pub fn degree(&self) -> Option<usize> {
        self.even_part.degree().max(self.sign_part.degree())
    }
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + (-1)^n [{}]", self.even_part, self.sign_part)
    }
}

/// Solves `m x = rhs` over `Q` by Gauss-Jordan elimination; `None` if singular.
fn solve(mut m: Vec<Vec<ExactRational>>, mut rhs: Vec<ExactRational>) -> Option<Vec<ExactRational>> {
    let size = rhs.len();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        rhs[col] *= &inv;
        for r in 0..size {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..size {
                let t = &factor * &m[col][c];
                m[r][c] -= t;
            }
            let t = &factor * &rhs[col];
            rhs[r] -= t;
        }
    }
    Some(rhs)
}

/// Polynomial of degree `<= degree` through the first `degree + 1` points,
/// checked against the remaining ones.
fn fit_polynomial(points: &[(i64, &ExactRational)], degree: usize, parity: &'static str) -> Result<RatPolynomial> {
    let need = degree + 1;
    if points.len() < need {
        return Err(Error::Underdetermined {
            parity,
            degree,
            need,
            got: points.len(),
        });
    }
    let (basis, rest) = points.split_at(need);
    let matrix = basis
        .iter()
        .map(|&(n, _)| {
            let x = BigRational::from_integer(n.into());
            let mut row = Vec::with_capacity(need);
            let mut p = BigRational::one();
            for _ in 0..need {
                row.push(p.clone());
                p *= &x;
            }
            row
        })
        .collect();
    let rhs = basis.iter().map(|&(_, v)| v.clone()).collect();
    let poly = RatPolynomial::new(solve(matrix, rhs).expect("Vandermonde on distinct points is invertible"));
    if rest.iter().any(|&(n, v)| poly.eval(&n.into()) != *v) {
        return Err(Error::InconsistentSamples(degree));
    }
    Ok(poly)
}

/// Exact quasi-polynomial with `deg A, deg B <= degree_bound` through all samples.
///
/// Each parity class needs at least `degree_bound + 1` distinct points.
pub fn fit(samples: &[(i64, ExactRational)], degree_bound: usize) -> Result<QuasiPolynomial> {
    let mut by_n: BTreeMap<i64, &ExactRational> = BTreeMap::new();
    for (n, v) in samples {
        if let Some(prev) = by_n.insert(*n, v) {
            if prev != v {
                return Err(Error::InconsistentSamples(degree_bound));
            }
        }
    }
    let (even, odd): (Vec<_>, Vec<_>) = by_n
        .into_iter()
        .partition(|&(n, _)| n.rem_euclid(2) == 0);
    // On even n the value is A + B, on odd n it is A - B.
    let plus = fit_polynomial(&even, degree_bound, "even")?;
    let minus = fit_polynomial(&odd, degree_bound, "odd")?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    Ok(QuasiPolynomial {
        even_part: plus.add(&minus).scale(&half),
        sign_part: plus.sub(&minus).scale(&half),
    })
}

/// A fitted `U_k` with the evidence that certifies it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UFit {
    pub k: usize,
    /// Degree bound at which the fit first reproduced the held-out values.
    pub degree_bound: usize,
    /// Samples used were `n = 0 ..= window_end`.
    pub window_end: i64,
    pub held_out: Vec<i64>,
    pub poly: QuasiPolynomial,
}

impl UFit {
    pub fn reflection_holds(&self) -> bool {
        self.poly.check_reflection()
    }
}

/// Fits `U_k` with increasing degree bound, starting at `k`, until the fit
/// also predicts the next [`HELD_OUT`] values exactly.
pub fn fit_u(k: usize) -> Result<UFit> {
    assert!(k >= 1, "U_k is defined for k >= 1");
    let max_degree = 2 * k + 4;
    let last_needed = 2 * max_degree as u64 + 1 + HELD_OUT as u64;
    let values: Vec<ExactRational> = (0..=last_needed)
        .map(|n| u_values(n, k).swap_remove(k - 1))
        .collect();
    for degree in k..=max_degree {
        let window_end = 2 * degree as i64 + 1;
        let samples: Vec<(i64, ExactRational)> = (0..=window_end)
            .map(|n| (n, values[n as usize].clone()))
            .collect();
        let poly = match fit(&samples, degree) {
            Ok(p) => p,
            Err(Error::InconsistentSamples(_)) => continue,
            Err(e) => return Err(e),
        };
        let held_out: Vec<i64> = (window_end + 1..=window_end + HELD_OUT as i64).collect();
        if held_out.iter().all(|&n| poly.eval(n) == values[n as usize]) {
            return Ok(UFit {
                k,
                degree_bound: degree,
                window_end,
                held_out,
                poly,
            });
        }
    }
    Err(Error::DegreeRunaway { k, max_degree })
}

type FitCache = Mutex<Vec<Arc<UFit>>>;

fn fit_cache() -> &'static FitCache {
    static CACHE: OnceLock<FitCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// Fits of `U_1 .. U_kmax`, computed once per process and shared.
pub fn u_fits(k_max: usize) -> Result<Vec<Arc<UFit>>> {
    let mut cache = fit_cache().lock().expect("fit cache poisoned");
    while cache.len() < k_max {
        let k = cache.len() + 1;
        let fit = fit_u(k)?;
        if !fit.reflection_holds() {
            return Err(Error::identity(
                "U_k(-1-n) = U_k(n)",
                format!("fitted U_{k} = {} is not reflection invariant", fit.poly),
            ));
        }
        cache.push(Arc::new(fit));
    }
    Ok(cache[..k_max].to_vec())
}

/// `U_1(n) .. U_kmax(n)` from the fitted quasi-polynomials.
pub fn u_values_quasi(n: i64, k_max: usize) -> Result<Vec<ExactRational>> {
    Ok(u_fits(k_max)?.iter().map(|f| f.poly.eval(n)).collect())
}

/// `f(n) mod 2^K` with every power sum evaluated from the fitted quasi-polynomials.
pub fn f_mod_quasi(n: i64, precision: u32) -> Result<TwoAdicTrunc> {
    let u = u_values_quasi(n, required_u_terms(precision))?;
    series::f_mod_from_table(&PowerSumTable::from_u(n, u), precision)
}

/// Outcome of comparing `f(-1-n)` with `f(n)` modulo `2^K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalReport {
    pub n: i64,
    pub precision: u32,
    /// `f(-1-n) mod 2^K`, canonical residue.
    pub lhs: TwoAdicTrunc,
    /// `f(n) mod 2^K`, canonical residue.
    pub rhs: TwoAdicTrunc,
    /// `+1` for `n ≡ 0, 3 (mod 4)`, `-1` for `n ≡ 1, 2`.
    pub sign: i32,
    pub pass: bool,
}

pub fn functional_sign(n: i64) -> i32 {
    series::sign_factor(n)
}

/// Checks `f(-1-n) ≡ sign(n) f(n) (mod 2^K)` with the left side from the
/// quasi-polynomial path and the right side from the direct series.
pub fn functional_check(n: u64, precision: u32) -> Result<FunctionalReport> {
    let reflected = -1 - n as i64;
    let lhs = f_mod_quasi(reflected, precision)?;
    let rhs = series::f_mod_direct(n, precision)?;
    Ok(functional_report(n as i64, precision, lhs, rhs))
}

pub(crate) fn functional_report(n: i64, precision: u32, lhs: TwoAdicTrunc, rhs: TwoAdicTrunc) -> FunctionalReport {
    let sign = functional_sign(n);
    let pass = lhs == rhs.signed(sign);
    FunctionalReport {
        n,
        precision,
        lhs,
        rhs,
        sign,
        pass,
    }
}

/// Empirical 2-adic modulus of continuity of `f mod 2^k` over `0..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityReport {
    pub k: u32,
    pub n_max: u64,
    /// Smallest `l` such that `n ≡ m (mod 2^l)` forces `f(n) ≡ f(m) (mod 2^k)`
    /// throughout the window.
    pub ell: u32,
    /// A pair with `n ≡ m (mod 2^(l-1))` but `f(n) ≢ f(m) (mod 2^k)`; present
    /// whenever `l > 0`.
    pub witness: Option<(u64, u64)>,
    /// True when `2^l > n_max`, i.e. the window cannot refute a smaller `l`
    /// for lack of distinct points in a residue class.
    pub window_exhausted: bool,
}

/// Scans `f(n) mod 2^k` for `0 <= n <= n_max`.
pub fn continuity_scan(n_max: u64, k: u32) -> Result<ContinuityReport> {
    let precision = k.max(2);
    let values: Vec<TwoAdicTrunc> = (0..=n_max)
        .map(|n| series::f_mod_direct(n, precision).map(|f| f.truncate(k)))
        .collect::<Result<_>>()?;
    Ok(continuity_from_values(&values, k))
}

pub(crate) fn continuity_from_values(values: &[TwoAdicTrunc], k: u32) -> ContinuityReport {
    let n_max = values.len() as u64 - 1;
    // First counterexample for modulus 2^l, if any.
    let counterexample = |ell: u32| -> Option<(u64, u64)> {
        let step = 1u64 << ell;
        for n in 0..=n_max {
            let mut m = n + step;
            while m <= n_max {
                if values[n as usize] != values[m as usize] {
                    return Some((n, m));
                }
                m += step;
            }
        }
        None
    };
    let mut ell = 0;
    let mut witness = None;
    while let Some(w) = counterexample(ell) {
        witness = Some(w);
        ell += 1;
    }
    ContinuityReport {
        k,
        n_max,
        ell,
        witness,
        window_exhausted: (1u64 << ell) > n_max,
    }
}
