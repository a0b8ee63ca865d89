//! Exact scalars in Q(ζ_p), graded by half-integer powers of q.
//!
//! A scalar is `q^(g/2) · Σ a_k ζ^k` with `g ∈ {0, 1}` and rational `a_k` in the
//! basis `ζ^0 .. ζ^(p-2)`. Even powers of `√q` are folded into the coefficients.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{LfwError, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloScalar {
    p: u32,
    q: u32,
    coeffs: Vec<BigRational>,
    grade: u8,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CycloScalar {
    pub fn zero(p: u32, q: u32) -> Self {
        CycloScalar {
            p,
            q,
            coeffs: vec![BigRational::zero(); (p - 1) as usize],
            grade: 0,
        }
    }

    pub fn one(p: u32, q: u32) -> Self {
        Self::from_rational(p, q, BigRational::one())
    }

    pub fn from_int(p: u32, q: u32, n: i64) -> Self {
        Self::from_rational(p, q, rat(n))
    }

    pub fn from_rational(p: u32, q: u32, r: BigRational) -> Self {
        let mut s = Self::zero(p, q);
        s.coeffs[0] = r;
        s
    }

    /// `ζ_p^k` for any integer `k`.
    pub fn zeta_pow(p: u32, q: u32, k: i64) -> Self {
        let mut full = vec![BigRational::zero(); p as usize];
        full[k.rem_euclid(p as i64) as usize] = BigRational::one();
        Self::from_full(p, q, full, 0)
    }

    /// `q^(e/2)`.
    pub fn qhalf(p: u32, q: u32, e: i32) -> Self {
        let mut s = Self::one(p, q);
        s.grade = e.rem_euclid(2) as u8;
        let k = e.div_euclid(2);
        s.coeffs[0] = q_pow(q, k);
        s
    }

    /// Builds a scalar from coefficients of `ζ^0 .. ζ^(p-1)` and a grade `q^(e/2)`.
    pub fn from_full(p: u32, q: u32, mut full: Vec<BigRational>, e: i32) -> Self {
        assert_eq!(full.len(), p as usize);
        let top = full.pop().unwrap();
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        let mut s = CycloScalar {
            p,
            q,
            coeffs: full,
            grade: 0,
        };
        s.apply_grade(e);
        s
    }

    fn apply_grade(&mut self, e: i32) {
        let k = e.div_euclid(2);
        if k != 0 {
            let f = q_pow(self.q, k);
            for c in self.coeffs.iter_mut() {
                *c *= &f;
            }
        }
        self.grade = e.rem_euclid(2) as u8;
        self.normalize();
    }

    fn normalize(&mut self) {
        if self.coeffs.iter().all(Zero::is_zero) {
            self.grade = 0;
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn grade(&self) -> i32 {
        self.grade as i32
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficients over `ζ^0 .. ζ^(p-1)` with a zero last entry.
    fn full(&self) -> Vec<BigRational> {
        let mut v = self.coeffs.clone();
        v.push(BigRational::zero());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.grade == 0 && self.as_rational().is_some_and(|r| r.is_one())
    }

    fn check_ctx(&self, other: &Self) {
        assert!(
            self.p == other.p && self.q == other.q,
            "cyclotomic scalars from different fields"
        );
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other);
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.grade != other.grade {
            return Err(LfwError::GradeMismatch(self.grade(), other.grade()));
        }
        let mut s = self.clone();
        for (a, b) in s.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        s.normalize();
        Ok(s)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut() {
            *c = -c.clone();
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ctx(other);
        let p = self.p as usize;
        let mut full = vec![BigRational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % p] += a * b;
            }
        }
        Self::from_full(
            self.p,
            self.q,
            full,
            self.grade as i32 + other.grade as i32,
        )
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut() {
            *c *= r;
        }
        s.normalize();
        s
    }

    /// Multiplies by `q^(e/2)`.
    pub fn mul_qhalf(&self, e: i32) -> Self {
        let mut s = self.clone();
        s.apply_grade(self.grade as i32 + e);
        s
    }

    /// Complex conjugate: `ζ ↦ ζ^(-1)`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let src = self.full();
        let mut full = vec![BigRational::zero(); p];
        for (k, c) in src.into_iter().enumerate() {
            full[(p - k) % p] = c;
        }
        Self::from_full(self.p, self.q, full, self.grade as i32)
    }

    pub fn abs_sq(&self) -> Self {
        self.mul(&self.conj())
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// The rational value, when the scalar is an ungraded rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.grade == 0 && self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Numeric value at `ζ = e^(2πi/p)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let t = 2.0 * std::f64::consts::PI * k as f64 / self.p as f64;
            re += v * t.cos();
            im += v * t.sin();
        }
        let g = (self.q as f64).sqrt().powi(self.grade as i32);
        (re * g, im * g)
    }

    /// Sign of a real scalar. Exact for rationals; otherwise decided numerically
    /// with a guard band.
    pub fn real_sign(&self) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if !self.is_real() {
            return Err(LfwError::UndecidableSign(format!("{self} is not real")));
        }
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            return Ok(if self.coeffs[0].is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            });
        }
        let (re, _) = self.to_complex();
        let scale: f64 = self
            .coeffs
            .iter()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .sum();
        if !re.is_finite() || re.abs() <= 1e-9 * scale.max(1.0) {
            return Err(LfwError::UndecidableSign(self.to_string()));
        }
        Ok(if re > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    }

    /// Compares two real scalars.
    pub fn cmp_real(&self, other: &Self) -> Result<Ordering> {
        self.try_sub(other)?.real_sign()
    }

    /// Terms `(coefficient, ζ-exponent)` of the nonzero basis coordinates.
    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, usize)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c, k))
    }

    /// Integer coordinates over `ζ^0 .. ζ^(p-1)` (last entry 0) and their common
    /// denominator. The grade is not included.
    pub fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        let mut v: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        v.push(BigInt::zero());
        (v, den)
    }
}

fn q_pow(q: u32, k: i32) -> BigRational {
    let b = BigInt::from(q).pow(k.unsigned_abs());
    if k >= 0 {
        BigRational::from_integer(b)
    } else {
        BigRational::new(BigInt::one(), b)
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (c, k) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            write!(f, "{mag}")?;
            if k > 0 {
                write!(f, "*zeta^{k}")?;
            }
            if self.grade == 1 {
                write!(f, "*qhalf^1")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloScalar({self})")
    }
}

/// Formats a scalar as its exact form followed by an approximate value.
pub fn describe(s: &CycloScalar) -> String {
    let (re, im) = s.to_complex();
    if im.abs() < 1e-12 {
        format!("{s} (~{re:.6})")
    } else {
        format!("{s} (~{re:.6}{:+.6}i)", im)
    }
}
