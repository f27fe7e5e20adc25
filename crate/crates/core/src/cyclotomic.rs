//! Exact arithmetic in `Z[z] / Phi_m(z)` for odd `m = 2n + 1`.
//!
//! Rational integers are exactly the constant residues modulo `Phi_m`, so any
//! product that is fixed by the Galois group can be read off as the constant
//! coefficient once every other coefficient has cancelled.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padics::{is_odd, odd_part, val2_int, Valuation};
use crate::poly::IntPolynomial;
use crate::series::sign_factor;

/// Default limit on `n` for the O(n^2)-factor products.
pub const DEFAULT_MAX_N: usize = 16;

/// `Phi_m`, by dividing `z^m - 1` by `Phi_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(m: u64) -> IntPolynomial {
    assert!(m >= 1, "cyclotomic index must be positive");
    let mut p = IntPolynomial::monomial(m as usize).sub(&IntPolynomial::one());
    for d in (1..m).filter(|d| m % d == 0) {
        let (q, r) = p.div_rem_monic(&cyclotomic_polynomial(d));
        debug_assert!(r.is_zero());
        p = q;
    }
    p
}

/// Residue modulo `Phi_m`: a coefficient vector of length `deg Phi_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloElement {
    modulus_order: u64,
    coeffs: Vec<BigInt>,
}

impl CycloElement {
    pub fn modulus_order(&self) -> u64 {
        self.modulus_order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// True when every coefficient is even, i.e. the element lies in `2 Z[zeta]`.
    pub fn is_zero_mod2(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_even())
    }
}

/// The ring `Z[z] / Phi_m(z)` for a fixed odd `m >= 3`.
#[derive(Clone, Debug)]
pub struct CyclotomicRing {
    order: u64,
    phi: IntPolynomial,
    dim: usize,
}

impl CyclotomicRing {
    pub fn new(order: u64) -> Self {
        assert!(order >= 3 && order % 2 == 1, "order must be odd and at least 3");
        let phi = cyclotomic_polynomial(order);
        let dim = phi.degree().expect("cyclotomic polynomials are nonzero");
        CyclotomicRing { order, phi, dim }
    }

    /// The ring for `zeta` a primitive `(2n+1)`-th root of unity.
    pub fn for_n(n: usize) -> Self {
        Self::new(2 * n as u64 + 1)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn phi(&self) -> &IntPolynomial {
        &self.phi
    }

    pub fn reduce(&self, p: &IntPolynomial) -> CycloElement {
        let (_, r) = p.div_rem_monic(&self.phi);
        let mut coeffs = r.into_coeffs();
        coeffs.resize(self.dim, BigInt::zero());
        CycloElement {
            modulus_order: self.order,
            coeffs,
        }
    }

    pub fn constant(&self, c: impl Into<BigInt>) -> CycloElement {
        let mut coeffs = vec![BigInt::zero(); self.dim];
        coeffs[0] = c.into();
        CycloElement {
            modulus_order: self.order,
            coeffs,
        }
    }

    pub fn one(&self) -> CycloElement {
        self.constant(1)
    }

    /// `zeta^e` for any integer exponent.
    pub fn zeta_pow(&self, e: i64) -> CycloElement {
        let e = e.rem_euclid(self.order as i64) as usize;
        self.reduce(&IntPolynomial::monomial(e))
    }

    fn check(&self, a: &CycloElement) {
        debug_assert_eq!(a.modulus_order, self.order, "element from a different ring");
    }

    pub fn add(&self, a: &CycloElement, b: &CycloElement) -> CycloElement {
        self.check(a);
        self.check(b);
        CycloElement {
            modulus_order: self.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn scale(&self, a: &CycloElement, c: &BigInt) -> CycloElement {
        CycloElement {
            modulus_order: self.order,
            coeffs: a.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Schoolbook product followed by reduction modulo `Phi_m`.
    pub fn mul(&self, a: &CycloElement, b: &CycloElement) -> CycloElement {
        self.check(a);
        self.check(b);
        let pa = IntPolynomial::new(a.coeffs.clone());
        let pb = IntPolynomial::new(b.coeffs.clone());
        self.reduce(&pa.mul(&pb))
    }

    pub fn pow(&self, a: &CycloElement, mut e: u32) -> CycloElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a CycloElement>) -> CycloElement {
        items
            .into_iter()
            .fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// Image under the automorphism `zeta -> zeta^a`, `gcd(a, m) = 1`.
    pub fn galois(&self, x: &CycloElement, a: u64) -> CycloElement {
        debug_assert_eq!(a.gcd(&self.order), 1);
        let mut coeffs = vec![BigInt::zero(); self.order as usize];
        for (i, c) in x.coeffs.iter().enumerate() {
            let e = ((i as u64 * a) % self.order) as usize;
            coeffs[e] += c;
        }
        self.reduce(&IntPolynomial::new(coeffs))
    }

    /// Exponents `a` in `(Z/m)^*`, i.e. the Galois group.
    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (1..self.order).filter(|a| a.gcd(&self.order) == 1)
    }

    /// `x * conj(x)` is the field norm; returns `(conj(x), N(x))` where
    /// `conj(x)` is the product of the non-identity conjugates.
    pub fn norm_cofactor(&self, x: &CycloElement) -> Result<(CycloElement, BigInt)> {
        let cof = self
            .units()
            .skip(1)
            .fold(self.one(), |acc, a| self.mul(&acc, &self.galois(x, a)));
        let norm = self.mul(x, &cof);
        let norm = constant_of(&norm, "field norm is rational")?;
        Ok((cof, norm))
    }

    /// `alpha_{i,j} = zeta^i + zeta^-i + zeta^j + zeta^-j`.
    pub fn alpha(&self, i: i64, j: i64) -> CycloElement {
        let terms = [i, -i, j, -j].map(|e| self.zeta_pow(e));
        terms[1..]
            .iter()
            .fold(terms[0].clone(), |acc, t| self.add(&acc, t))
    }

    /// `4 + alpha_{i,j}`, one factor of the tiling product.
    pub fn kasteleyn_factor(&self, i: i64, j: i64) -> CycloElement {
        self.add(&self.constant(4), &self.alpha(i, j))
    }
}

fn constant_of(x: &CycloElement, identity: &'static str) -> Result<BigInt> {
    x.as_integer()
        .cloned()
        .ok_or_else(|| Error::identity(identity, format!("non-constant result {:?}", x.coeffs)))
}

fn check_budget(n: usize, max_n: usize) -> Result<()> {
    if n > max_n {
        return Err(Error::BudgetExceeded {
            what: "cyclotomic product size n",
            requested: n as u64,
            limit: max_n as u64,
        });
    }
    Ok(())
}

/// `alpha_{i,j}` in the ring for `n` (`zeta` of order `2n+1`).
pub fn alpha(n: usize, i: i64, j: i64) -> CycloElement {
    CyclotomicRing::for_n(n).alpha(i, j)
}

fn upper_pairs(n: usize) -> impl Iterator<Item = (i64, i64)> {
    let n = n as i64;
    (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
}

fn all_pairs(n: usize) -> impl Iterator<Item = (i64, i64)> {
    let n = n as i64;
    (1..=n).flat_map(move |i| (1..=n).map(move |j| (i, j)))
}

pub fn f_exact(n: usize) -> Result<BigInt> {
    f_exact_with_limit(n, DEFAULT_MAX_N)
}

/// `f(n) = prod_{1 <= i < j <= n} (4 + alpha_{i,j})`, an odd positive integer.
pub fn f_exact_with_limit(n: usize, max_n: usize) -> Result<BigInt> {
    check_budget(n, max_n)?;
    if n <= 1 {
        return Ok(BigInt::one());
    }
    let ring = CyclotomicRing::for_n(n);
    let prod = upper_pairs(n).fold(ring.one(), |acc, (i, j)| {
        ring.mul(&acc, &ring.kasteleyn_factor(i, j))
    });
    let f = constant_of(&prod, "f(n) is a rational integer")?;
    if !f.is_positive() || !is_odd(&f) {
        return Err(Error::identity("f(n) is odd and positive", format!("f({n}) = {f}")));
    }
    Ok(f)
}

/// `prod_{i=1..n} (2 + zeta^i + zeta^-i)`; equals 1.
pub fn unit_product(n: usize) -> Result<BigInt> {
    assert!(n >= 1, "unit_product needs n >= 1");
    let ring = CyclotomicRing::for_n(n);
    let prod = (1..=n as i64).fold(ring.one(), |acc, i| {
        let t = ring.add(
            &ring.constant(2),
            &ring.add(&ring.zeta_pow(i), &ring.zeta_pow(-i)),
        );
        ring.mul(&acc, &t)
    });
    constant_of(&prod, "unit product is rational")
}

fn plus_minus_one(x: BigInt, identity: &'static str) -> Result<i32> {
    if x.is_one() {
        Ok(1)
    } else if x == -BigInt::one() {
        Ok(-1)
    } else {
        Err(Error::identity(identity, format!("value {x} is not +-1")))
    }
}

pub fn pair_product_sign(n: usize) -> Result<i32> {
    pair_product_sign_with_limit(n, DEFAULT_MAX_N)
}

/// `prod_{1 <= i < j <= n} alpha_{i,j}`, which is `+-1`.
pub fn pair_product_sign_with_limit(n: usize, max_n: usize) -> Result<i32> {
    check_budget(n, max_n)?;
    if n <= 1 {
        return Ok(1);
    }
    let ring = CyclotomicRing::for_n(n);
    let prod = upper_pairs(n).fold(ring.one(), |acc, (i, j)| ring.mul(&acc, &ring.alpha(i, j)));
    plus_minus_one(
        constant_of(&prod, "pair product is rational")?,
        "pair product is a unit",
    )
}

/// `prod_{t=1..n} (zeta^t + zeta^-t)`, which is `(-1)^floor((n+1)/2)`.
pub fn cos_product_sign(n: usize) -> Result<i32> {
    assert!(n >= 1, "cos_product_sign needs n >= 1");
    let ring = CyclotomicRing::for_n(n);
    let prod = (1..=n as i64).fold(ring.one(), |acc, t| {
        ring.mul(&acc, &ring.add(&ring.zeta_pow(t), &ring.zeta_pow(-t)))
    });
    plus_minus_one(
        constant_of(&prod, "cosine product is rational")?,
        "cosine product is a unit",
    )
}

pub fn full_product_check(n: usize) -> Result<(u64, i32)> {
    full_product_check_with_limit(n, DEFAULT_MAX_N)
}

/// `prod_{i,j=1..n} alpha_{i,j}` as `(v_2, sign of the odd part)`; the odd
/// part itself must be `+-1`.
pub fn full_product_check_with_limit(n: usize, max_n: usize) -> Result<(u64, i32)> {
    assert!(n >= 1, "full_product_check needs n >= 1");
    check_budget(n, max_n)?;
    let ring = CyclotomicRing::for_n(n);
    let prod = all_pairs(n).fold(ring.one(), |acc, (i, j)| ring.mul(&acc, &ring.alpha(i, j)));
    let value = constant_of(&prod, "full alpha product is rational")?;
    let Valuation::Finite(v) = val2_int(&value) else {
        return Err(Error::identity("full alpha product is nonzero", "product is 0"));
    };
    let sign = plus_minus_one(odd_part(&value), "full alpha product is +-2^v")?;
    Ok((v as u64, sign))
}

/// The sign `(-1)^floor((n+1)/2)` that both the cosine product and the full
/// alpha product must carry.
pub fn expected_floor_sign(n: usize) -> i32 {
    sign_factor(n as i64)
}

/// Sign of the pair product: `-1` exactly when `n ≡ 2 (mod 4)`.
pub fn expected_pair_sign(n: usize) -> i32 {
    if n % 4 == 2 {
        -1
    } else {
        1
    }
}

/// `S_k(n) = sum_{i,j=1..n} alpha_{i,j}^{-k}`, summed exactly in `Q(zeta)`.
///
/// Each inverse is `conj(alpha) / N(alpha)` with `conj` the product of the
/// other Galois conjugates, so no power sums or series are involved.
pub fn reciprocal_power_sum(n: usize, k: u32) -> Result<BigRational> {
    if n == 0 {
        return Ok(BigRational::zero());
    }
    let ring = CyclotomicRing::for_n(n);
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); ring.dimension()];
    for (i, j) in all_pairs(n) {
        let a = ring.alpha(i, j);
        let (cof, norm) = ring.norm_cofactor(&a)?;
        let num = ring.pow(&cof, k);
        let den = num_traits::pow(norm, k as usize);
        for (slot, c) in acc.iter_mut().zip(num.coeffs()) {
            *slot += BigRational::new(c.clone(), den.clone());
        }
    }
    if acc[1..].iter().any(|c| !c.is_zero()) {
        return Err(Error::identity(
            "S_k(n) is rational",
            format!("non-constant reciprocal sum for n={n}, k={k}"),
        ));
    }
    Ok(acc.swap_remove(0))
}
