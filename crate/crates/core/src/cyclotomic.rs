//! Exact arithmetic in the ring of cyclotomic integers `Z[zeta_m]`.
//!
//! Elements are coefficient rows over the power basis `1, zeta, ...,
//! zeta^(phi(m)-1)`, reduced modulo the m-th cyclotomic polynomial after every
//! operation, so equality is structural. Only conductors dividing 8 are needed
//! by the search drivers (characters of order-8 groups take values in the 8th
//! roots of unity), but the arithmetic is generic in `m` — generality is
//! nearly free with polynomial arithmetic and lets the tests probe other
//! conductors.
//!
//! Coefficients are arbitrary precision: the voltages of length-8 walks stay
//! tiny, but norms are products of conjugates and correctness must not hinge
//! on word size.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycError {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
}

/// Euler's totient.
pub fn phi(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Coefficients of the m-th cyclotomic polynomial, low degree first, monic.
/// Computed by exact division of `x^m - 1` by the lower cyclotomic factors.
pub fn cyclotomic_poly(m: u32) -> Vec<BigInt> {
    assert!(m >= 1);
    // x^m - 1
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

/// Exact division of polynomials with integer coefficients (monic divisor).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = deg(num);
    let dd = deg(den);
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            quot[k] = c.clone();
            for i in 0..=dd {
                rem[k + i] -= &c * &den[i];
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

fn deg(p: &[BigInt]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

/// A cyclotomic integer in canonical reduced form.
///
/// Two values are equal iff their conductors and coefficient rows agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    m: u32,
    coeffs: Vec<BigInt>, // length phi(m)
}

impl CycInt {
    pub fn zero(m: u32) -> CycInt {
        CycInt {
            m,
            coeffs: vec![BigInt::zero(); phi(m) as usize],
        }
    }

    pub fn from_int(m: u32, c: impl Into<BigInt>) -> CycInt {
        let mut z = CycInt::zero(m);
        z.coeffs[0] = c.into();
        z
    }

    /// `zeta_m^k`, reduced to the power basis.
    pub fn zeta_pow(m: u32, k: i64) -> CycInt {
        let k = k.rem_euclid(m as i64) as usize;
        let mut raw = vec![BigInt::zero(); k + 1];
        raw[k] = BigInt::one();
        CycInt::reduce(m, raw)
    }

    /// Reduces an arbitrary-degree coefficient vector modulo `Phi_m`.
    pub fn reduce(m: u32, mut raw: Vec<BigInt>) -> CycInt {
        let d = phi(m) as usize;
        let modulus = cyclotomic_poly(m);
        loop {
            let k = deg(&raw);
            if k < d || raw[k].is_zero() {
                break;
            }
            let c = raw[k].clone();
            // subtract c * x^(k-d) * Phi_m
            for i in 0..=d {
                raw[k - d + i] -= &c * &modulus[i];
            }
        }
        raw.resize(d, BigInt::zero());
        CycInt { m, coeffs: raw }
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Returns the value as a rational integer if it lies in `Z`.
    pub fn as_int(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check(&self, other: &CycInt) -> Result<(), CycError> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(CycError::ConductorMismatch(self.m, other.m))
        }
    }

    pub fn add(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycInt { m: self.m, coeffs })
    }

    pub fn sub(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycInt { m: self.m, coeffs })
    }

    pub fn neg(&self) -> CycInt {
        CycInt {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.check(other)?;
        let mut raw = vec![BigInt::zero(); 2 * self.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Ok(CycInt::reduce(self.m, raw))
    }

    /// Multiplication by `zeta_m^k`; a basis shift plus reduction.
    pub fn mul_zeta_pow(&self, k: i64) -> CycInt {
        let k = k.rem_euclid(self.m as i64) as usize;
        let d = self.coeffs.len();
        let mut raw = vec![BigInt::zero(); d + k];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i + k] = c.clone();
        }
        CycInt::reduce(self.m, raw)
    }

    /// The Galois conjugate `sigma_k`, sending `zeta` to `zeta^k`;
    /// requires `gcd(k, m) == 1`.
    pub fn conjugate(&self, k: u32) -> CycInt {
        debug_assert_eq!(num_integer::gcd(k, self.m), 1);
        let mut raw = vec![BigInt::zero(); self.m.max(1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(i as u32 * k % self.m.max(1)) as usize] += c;
            }
        }
        CycInt::reduce(self.m, raw)
    }

    /// Field norm from `Q(zeta_m)` down to `Q`, as the product of all Galois
    /// conjugates. The result is always a rational integer.
    pub fn norm_by_conjugates(&self) -> BigInt {
        let mut acc = CycInt::from_int(self.m, 1);
        for k in 1..=self.m.max(1) {
            if num_integer::gcd(k, self.m) == 1 {
                acc = acc.mul(&self.conjugate(k)).expect("same conductor");
            }
        }
        acc.as_int()
            .expect("a product over the full Galois orbit is rational")
    }

    /// Field norm as the resultant `Res(Phi_m, f)` of the modulus with the
    /// coefficient polynomial — an independent route used to cross-check
    /// `norm_by_conjugates`.
    pub fn norm_by_resultant(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        resultant(&cyclotomic_poly(self.m), &self.coeffs)
    }

    /// Field norm; computes both routes and insists they agree.
    pub fn norm(&self) -> BigInt {
        let a = self.norm_by_conjugates();
        let b = self.norm_by_resultant();
        assert_eq!(a, b, "norm algorithms disagree on {self:?}");
        a
    }
}

impl std::fmt::Display for CycInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "z^{i}")?;
            } else {
                write!(f, "{c}*z^{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Resultant of a monic `p` with `q` via the Sylvester matrix and Bareiss'
/// fraction-free elimination; equals the product of `q` over the roots of `p`.
fn resultant(p: &[BigInt], q: &[BigInt]) -> BigInt {
    let dp = deg(p);
    let dq = deg(q);
    if dq == 0 {
        return num_traits::pow::pow(q[0].clone(), dp);
    }
    let n = dp + dq;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for row in 0..dq {
        for i in 0..=dp {
            m[row][row + dp - i] = p[i].clone();
        }
    }
    for row in 0..dp {
        for i in 0..=dq {
            m[dq + row][row + dq - i] = q[i].clone();
        }
    }
    bareiss_det(m)
}

/// Exact determinant by fraction-free elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// True iff `n` is nonzero and `|n|` has no prime factor exceeding 5.
///
/// Zero is rejected: a zero voltage never generates, so the smoothness
/// criterion must not certify it.
pub fn smooth5(n: &BigInt) -> bool {
    if n.is_zero() {
        return false;
    }
    let mut n = n.abs();
    for p in [2u32, 3, 5] {
        let p = BigInt::from(p);
        while (&n % &p).is_zero() {
            n /= &p;
        }
    }
    n.is_one()
}
