//! Arithmetic in the residue field GF(q), q = p^c.
//!
//! Elements are stored as a single byte holding their coordinates in the power
//! basis `1, x, ..., x^(c-1)` of a root `x` of the modulus, read as a base-`p`
//! number (coordinate `a_k` is the `k`-th base-`p` digit). With this encoding the
//! digit `b` of `u(n)` is literally the element whose code is `b`.

use std::fmt;
use std::sync::Arc;

use crate::error::{LfwError, Result};

/// Default monic irreducible moduli, coefficients listed from the constant term up.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 1, &[0, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 0, 1, 1]),
    (2, 4, &[1, 0, 0, 1, 1]),
    (3, 1, &[0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 0, 2, 1]),
    (3, 4, &[1, 0, 1, 1, 1]),
    (5, 1, &[0, 1]),
    (5, 2, &[1, 1, 1]),
    (5, 3, &[1, 0, 1, 1]),
    (7, 1, &[0, 1]),
    (7, 2, &[1, 0, 1]),
    (11, 1, &[0, 1]),
    (11, 2, &[1, 0, 1]),
    (13, 1, &[0, 1]),
    (13, 2, &[1, 3, 1]),
];

const SUPPORTED_PRIMES: &[u32] = &[2, 3, 5, 7, 11, 13];

/// An element of GF(q), identified by its coordinate code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fq(pub u8);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn code(self) -> u32 {
        self.0 as u32
    }
}

/// Parameters of the ambient field together with precomputed GF(q) tables.
pub struct FieldConfig {
    p: u32,
    c: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    trace: Vec<u8>,
}

/// Shared handle to a field; every set and function carries one.
pub type Field = Arc<FieldConfig>;

impl PartialEq for FieldConfig {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.c == other.c && self.modulus == other.modulus
    }
}

impl Eq for FieldConfig {}

impl fmt::Debug for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldConfig")
            .field("p", &self.p)
            .field("c", &self.c)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// True when two handles describe the same field.
pub fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn ensure_same(a: &Field, b: &Field) -> Result<()> {
    if same_field(a, b) {
        Ok(())
    } else {
        Err(LfwError::ConfigMismatch)
    }
}

/// Default modulus for `(p, c)`, if one is tabulated.
pub fn default_modulus(p: u32, c: u32) -> Option<Vec<u32>> {
    DEFAULT_MODULI
        .iter()
        .find(|(pp, cc, _)| *pp == p && *cc == c)
        .map(|(_, _, m)| m.to_vec())
}

impl FieldConfig {
    /// Builds GF(p^c) with the given modulus (or the default one).
    pub fn new(p: u32, c: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(LfwError::UnsupportedField(format!(
                "p = {p} (supported primes: 2, 3, 5, 7, 11, 13)"
            )));
        }
        if !(1..=4).contains(&c) {
            return Err(LfwError::UnsupportedField(format!("c = {c} (need 1 <= c <= 4)")));
        }
        let q = p.pow(c);
        if q > 256 {
            return Err(LfwError::UnsupportedField(format!("q = {q} exceeds 256")));
        }
        let modulus = match modulus {
            Some(m) => m,
            None => default_modulus(p, c).expect("every supported (p, c) has a default"),
        };
        if modulus.len() != c as usize + 1
            || modulus[c as usize] != 1
            || modulus.iter().any(|&m| m >= p)
            || !is_irreducible(&modulus, p)
        {
            return Err(LfwError::ReducibleModulus(modulus));
        }

        let qs = q as usize;
        let decode = |code: usize| -> Vec<u32> {
            let mut v = Vec::with_capacity(c as usize);
            let mut x = code as u32;
            for _ in 0..c {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let encode = |coords: &[u32]| -> u8 {
            coords.iter().rev().fold(0u32, |acc, &a| acc * p + a) as u8
        };
        let coords: Vec<Vec<u32>> = (0..qs).map(decode).collect();

        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<u32> = coords[a]
                    .iter()
                    .zip(&coords[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * qs + b] = encode(&s);
                let prod = poly_mulmod(&coords[a], &coords[b], &modulus, p);
                mul[a * qs + b] = encode(&prod);
            }
        }
        let mut neg = vec![0u8; qs];
        for a in 0..qs {
            let n: Vec<u32> = coords[a].iter().map(|x| (p - x) % p).collect();
            neg[a] = encode(&n);
        }
        let mut inv = vec![0u8; qs];
        for a in 1..qs {
            inv[a] = (1..qs)
                .find(|&b| mul[a * qs + b] == 1)
                .expect("nonzero elements of a field are invertible") as u8;
        }
        // Tr(a) = a + a^p + ... + a^(p^(c-1)); lands in the prime subfield,
        // whose codes are 0..p.
        let mut trace = vec![0u8; qs];
        for (a, slot) in trace.iter_mut().enumerate() {
            let mut acc = 0u8;
            let mut frob = a as u8;
            for _ in 0..c {
                acc = add[acc as usize * qs + frob as usize];
                let mut pw = 1u8;
                for _ in 0..p {
                    pw = mul[pw as usize * qs + frob as usize];
                }
                frob = pw;
            }
            debug_assert!((acc as u32) < p);
            *slot = acc;
        }

        Ok(Arc::new(FieldConfig {
            p,
            c,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            trace,
        }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Element with the given coordinates in the ε-basis.
    pub fn element(&self, coords: &[u32]) -> Result<Fq> {
        if coords.len() > self.c as usize || coords.iter().any(|&a| a >= self.p) {
            return Err(LfwError::ElementOutOfRange(format!("{coords:?}")));
        }
        Ok(Fq(coords.iter().rev().fold(0u32, |acc, &a| acc * self.p + a) as u8))
    }

    pub fn from_code(&self, code: u32) -> Result<Fq> {
        if code < self.q {
            Ok(Fq(code as u8))
        } else {
            Err(LfwError::ElementOutOfRange(code.to_string()))
        }
    }

    pub fn coords(&self, a: Fq) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.c as usize);
        let mut x = a.code();
        for _ in 0..self.c {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    /// Basis element ε_i (the i-th power of the modulus root).
    pub fn basis(&self, i: u32) -> Fq {
        assert!(i < self.c);
        Fq(self.p.pow(i) as u8)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(|c| Fq(c as u8))
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            Err(LfwError::ZeroInverse)
        } else {
            Ok(Fq(self.inv[a.0 as usize]))
        }
    }

    pub fn pow(&self, a: Fq, mut e: u32) -> Fq {
        let mut base = a;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace to GF(p), returned as a residue in `0..p`.
    #[inline]
    pub fn trace(&self, a: Fq) -> u32 {
        self.trace[a.0 as usize] as u32
    }
}

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - lead * mi % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

/// Exhaustive irreducibility test: no monic factor of degree 1..=deg/2.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = code;
            for _ in 0..d {
                g.push(x % p);
                x /= p;
            }
            g.push(1);
            if poly_rem(m, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<Field> {
        DEFAULT_MODULI
            .iter()
            .filter(|(p, c, _)| p.pow(*c) <= 16)
            .map(|(p, c, _)| FieldConfig::new(*p, *c, None).unwrap())
            .collect()
    }

    #[test]
    fn small_products() {
        let f2 = FieldConfig::new(2, 1, None).unwrap();
        assert_eq!(f2.mul(Fq::ONE, Fq::ONE), Fq::ONE);
        let f3 = FieldConfig::new(3, 1, None).unwrap();
        assert_eq!(f3.mul(Fq(2), Fq(2)), Fq::ONE);
        // GF(4) with x^2 + x + 1: x * x = x + 1.
        let f4 = FieldConfig::new(2, 2, Some(vec![1, 1, 1])).unwrap();
        let eps1 = f4.basis(1);
        assert_eq!(f4.mul(eps1, eps1), f4.element(&[1, 1]).unwrap());
    }

    #[test]
    fn inverses() {
        let f2 = FieldConfig::new(2, 1, None).unwrap();
        assert_eq!(f2.inv(Fq::ONE).unwrap(), Fq::ONE);
        let f5 = FieldConfig::new(5, 1, None).unwrap();
        assert_eq!(f5.inv(Fq(2)).unwrap(), Fq(3));
        assert_eq!(f5.inv(Fq::ZERO), Err(LfwError::ZeroInverse));
        let f4 = FieldConfig::new(2, 2, None).unwrap();
        let eps1 = f4.basis(1);
        // Exhaustive search over the four elements.
        let found: Vec<Fq> = f4
            .elements()
            .filter(|&b| f4.mul(eps1, b) == Fq::ONE)
            .collect();
        assert_eq!(found, vec![f4.element(&[1, 1]).unwrap()]);
        assert_eq!(f4.inv(eps1).unwrap(), found[0]);
    }

    #[test]
    fn traces() {
        let f2 = FieldConfig::new(2, 1, None).unwrap();
        assert_eq!(f2.trace(Fq::ZERO), 0);
        let f4 = FieldConfig::new(2, 2, None).unwrap();
        assert_eq!(f4.trace(f4.basis(1)), 1);
        let f7 = FieldConfig::new(7, 1, None).unwrap();
        for a in f7.elements() {
            assert_eq!(f7.trace(a), a.code());
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_fields() {
            let els: Vec<Fq> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Fq::ZERO);
                assert_eq!(f.mul(a, Fq::ONE), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_laws_exhaustive() {
        for f in all_fields() {
            let p = f.p();
            let mut hit = vec![false; p as usize];
            for a in f.elements() {
                hit[f.trace(a) as usize] = true;
                assert_eq!(f.trace(f.pow(a, p)), f.trace(a));
                for b in f.elements() {
                    assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % p);
                }
            }
            assert!(hit.iter().all(|&h| h), "trace not surjective for {f:?}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FieldConfig::new(4, 1, None).is_err());
        assert!(FieldConfig::new(2, 5, None).is_err());
        assert!(FieldConfig::new(13, 3, None).is_err());
        // x^2 + 1 = (x + 1)^2 over GF(2).
        assert!(matches!(
            FieldConfig::new(2, 2, Some(vec![1, 0, 1])),
            Err(LfwError::ReducibleModulus(_))
        ));
        assert!(FieldConfig::new(3, 2, Some(vec![2, 0, 1])).is_err());
    }

    #[test]
    fn default_moduli_are_irreducible() {
        for (p, c, _) in DEFAULT_MODULI {
            FieldConfig::new(*p, *c, None).unwrap();
        }
    }
}
