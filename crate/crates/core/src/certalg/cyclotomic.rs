//! Exact arithmetic in `Z[ω] = Z[x] / Φ_n(x)` for a primitive `n`-th root of
//! unity `ω`. An element is zero iff its reduced coefficient vector is zero.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

/// `Φ_n`, coefficients from the constant term up, computed by exact division
/// of `x^n - 1` by `Φ_d` for every proper divisor `d` of `n`.
pub fn cyclotomic_poly(n: usize) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        num = div_exact(&num, &cyclotomic_poly(d));
    }
    num
}

/// Quotient of monic-divisor long division; panics on a nonzero remainder.
fn div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// Reduction tables for one conductor `n`.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicRing {
    n: usize,
    phi: Vec<i64>,
    /// `reduce[e]` = coefficients of `x^e mod Φ_n`, for `e < max(n, 2·deg - 1)`.
    reduce: Vec<Vec<i128>>,
}

impl CyclotomicRing {
    pub fn new(n: usize) -> Arc<Self> {
        let phi = cyclotomic_poly(n);
        let deg = phi.len() - 1;
        let len = n.max(2 * deg - 1);
        let mut reduce: Vec<Vec<i128>> = Vec::with_capacity(len);
        let mut current = vec![0i128; deg];
        current[0] = 1;
        for _ in 0..len {
            reduce.push(current.clone());
            // multiply by x and reduce the overflow term with Φ_n
            let top = current[deg - 1];
            for i in (1..deg).rev() {
                current[i] = current[i - 1];
            }
            current[0] = 0;
            for (i, c) in current.iter_mut().enumerate() {
                *c -= top * phi[i] as i128;
            }
        }
        Arc::new(Self { n, phi, reduce })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi(&self) -> &[i64] {
        &self.phi
    }
}

/// An element of `Z[ω]` in the power basis `1, ω, ..., ω^(deg-1)`.
///
/// Coefficients are `i128` with checked arithmetic; overflow panics rather
/// than produce a wrong zero test.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    ring: Arc<CyclotomicRing>,
    coeffs: Vec<i128>,
}

impl Cyclotomic {
    pub fn zero(ring: &Arc<CyclotomicRing>) -> Self {
        Self {
            ring: ring.clone(),
            coeffs: vec![0; ring.degree()],
        }
    }

    pub fn from_int(ring: &Arc<CyclotomicRing>, value: i128) -> Self {
        let mut out = Self::zero(ring);
        out.coeffs[0] = value;
        out
    }

    pub fn one(ring: &Arc<CyclotomicRing>) -> Self {
        Self::from_int(ring, 1)
    }

    /// `ω^e`.
    pub fn root_power(ring: &Arc<CyclotomicRing>, e: usize) -> Self {
        Self {
            ring: ring.clone(),
            coeffs: ring.reduce[e % ring.n].clone(),
        }
    }

    /// Evaluate an integer polynomial (constant term first) at `ω`.
    pub fn eval_poly(ring: &Arc<CyclotomicRing>, poly: &[i64]) -> Self {
        let mut out = Self::zero(ring);
        for (e, &c) in poly.iter().enumerate() {
            out += &(&Self::root_power(ring, e) * &Self::from_int(ring, c as i128));
        }
        out
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The integer `k` if this element is one.
    pub fn as_int(&self) -> Option<i128> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Divide by an integer that divides every coefficient.
    pub fn div_exact(&self, k: i128) -> Option<Self> {
        self.coeffs.iter().all(|c| c % k == 0).then(|| Self {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c / k).collect(),
        })
    }

    fn same_ring(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "mixing cyclotomic rings of different conductor"
        );
    }
}

const OVERFLOW: &str = "cyclotomic coefficient overflow";

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        self.same_ring(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = a.checked_add(*b).expect(OVERFLOW);
        }
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        self.same_ring(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = a.checked_sub(*b).expect(OVERFLOW);
        }
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;

    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;

    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;

    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c.checked_neg().expect(OVERFLOW)).collect(),
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;

    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.same_ring(rhs);
        let deg = self.coeffs.len();
        let mut wide = vec![0i128; 2 * deg - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let p = a.checked_mul(b).expect(OVERFLOW);
                wide[i + j] = wide[i + j].checked_add(p).expect(OVERFLOW);
            }
        }
        let mut coeffs = wide[..deg].to_vec();
        for (e, &c) in wide.iter().enumerate().skip(deg) {
            if c == 0 {
                continue;
            }
            for (k, &r) in self.ring.reduce[e].iter().enumerate() {
                let p = c.checked_mul(r).expect(OVERFLOW);
                coeffs[k] = coeffs[k].checked_add(p).expect(OVERFLOW);
            }
        }
        Cyclotomic {
            ring: self.ring.clone(),
            coeffs,
        }
    }
}

impl MulAssign<&Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self * rhs;
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic(n={}, {:?})", self.ring.n, self.coeffs)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                f.write_str("-")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (e, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("w")?,
                (1, _) => write!(f, "{a}*w")?,
                (_, 1) => write!(f, "w^{e}")?,
                _ => write!(f, "{a}*w^{e}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
