//! Finite-support elements of K = GF(q)((𝔭)).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::cyclo::CycloScalar;
use crate::error::{LfwError, Result};
use crate::gfq::{ensure_same, FieldConfig, Fq, Field};

/// A Laurent polynomial `Σ d_l 𝔭^l` with digits stored from exponent `lo` upward.
///
/// The digit vector never has a zero at either end; zero is the empty vector with
/// `lo = 0`. A `Laurent` carries no field; operations take the field explicitly.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    lo: i32,
    digits: Vec<u8>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Self::monomial(Fq::ONE, 0)
    }

    /// `d · 𝔭^e`.
    pub fn monomial(d: Fq, e: i32) -> Self {
        if d.is_zero() {
            return Self::zero();
        }
        Laurent {
            lo: e,
            digits: vec![d.0],
        }
    }

    /// Digits `d_lo, d_(lo+1), ...`; zeros at either end are trimmed.
    pub fn from_digits(lo: i32, digits: Vec<u8>) -> Self {
        let mut x = Laurent { lo, digits };
        x.trim();
        x
    }

    fn trim(&mut self) {
        while self.digits.last() == Some(&0) {
            self.digits.pop();
        }
        let lead = self.digits.iter().take_while(|&&d| d == 0).count();
        if lead > 0 {
            self.digits.drain(..lead);
            self.lo += lead as i32;
        }
        if self.digits.is_empty() {
            self.lo = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Lowest exponent with a nonzero digit; `None` stands for +∞.
    pub fn valuation(&self) -> Option<i32> {
        if self.is_zero() {
            None
        } else {
            Some(self.lo)
        }
    }

    /// `log_q |x|`, or `None` for zero.
    pub fn abs_log(&self) -> Option<i32> {
        self.valuation().map(|v| -v)
    }

    /// Highest exponent with a nonzero digit.
    pub fn top(&self) -> Option<i32> {
        if self.is_zero() {
            None
        } else {
            Some(self.lo + self.digits.len() as i32 - 1)
        }
    }

    pub fn digit(&self, e: i32) -> Fq {
        let i = e as i64 - self.lo as i64;
        if i < 0 || i >= self.digits.len() as i64 {
            Fq::ZERO
        } else {
            Fq(self.digits[i as usize])
        }
    }

    /// Nonzero digits in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Fq)> + '_ {
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(move |(i, &d)| (self.lo + i as i32, Fq(d)))
    }

    pub fn add(&self, f: &FieldConfig, other: &Laurent) -> Laurent {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.top().unwrap().max(other.top().unwrap());
        let digits = (lo..=hi)
            .map(|e| f.add(self.digit(e), other.digit(e)).0)
            .collect();
        Laurent::from_digits(lo, digits)
    }

    pub fn neg(&self, f: &FieldConfig) -> Laurent {
        Laurent {
            lo: self.lo,
            digits: self.digits.iter().map(|&d| f.neg(Fq(d)).0).collect(),
        }
    }

    pub fn sub(&self, f: &FieldConfig, other: &Laurent) -> Laurent {
        self.add(f, &other.neg(f))
    }

    pub fn mul(&self, f: &FieldConfig, other: &Laurent) -> Laurent {
        if self.is_zero() || other.is_zero() {
            return Laurent::zero();
        }
        let mut digits = vec![0u8; self.digits.len() + other.digits.len() - 1];
        for (i, &a) in self.digits.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.digits.iter().enumerate() {
                let t = f.mul(Fq(a), Fq(b));
                digits[i + j] = f.add(Fq(digits[i + j]), t).0;
            }
        }
        Laurent::from_digits(self.lo + other.lo, digits)
    }

    pub fn scalar_mul(&self, f: &FieldConfig, a: Fq) -> Laurent {
        if a.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            lo: self.lo,
            digits: self.digits.iter().map(|&d| f.mul(Fq(d), a).0).collect(),
        }
    }

    /// Multiplication by `𝔭^k`.
    pub fn shift(&self, k: i32) -> Laurent {
        if self.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            lo: self.lo + k,
            digits: self.digits.clone(),
        }
    }

    /// The digits at exponents `< k`.
    pub fn below(&self, k: i32) -> Laurent {
        if self.is_zero() || k <= self.lo {
            return Laurent::zero();
        }
        let n = ((k - self.lo) as usize).min(self.digits.len());
        Laurent::from_digits(self.lo, self.digits[..n].to_vec())
    }

    /// The digits at exponents `>= k`.
    pub fn from_exp(&self, k: i32) -> Laurent {
        if self.is_zero() || k <= self.lo {
            return self.clone();
        }
        let skip = (k - self.lo) as usize;
        if skip >= self.digits.len() {
            return Laurent::zero();
        }
        Laurent::from_digits(k, self.digits[skip..].to_vec())
    }

    /// True when no digit sits at an exponent `>= 0`.
    pub fn is_fractional(&self) -> bool {
        self.top().is_none_or(|t| t < 0)
    }

    /// True when `x ∈ 𝒪`.
    pub fn is_integral(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    /// Exponent of ζ_p in `χ(x)`: the trace of the digit at `𝔭^(-1)`.
    pub fn char_exponent(&self, f: &FieldConfig) -> u32 {
        f.trace(self.digit(-1))
    }
}

impl PartialOrd for Laurent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on digit codes from the lowest exponent up. Used only for
/// deterministic ordering of keys.
impl Ord for Laurent {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lo = self.lo.min(other.lo);
        let hi = self.top().unwrap_or(lo).max(other.top().unwrap_or(lo));
        for e in lo..=hi {
            let c = self.digit(e).cmp(&other.digit(e));
            if c.is_ne() {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, d)| format!("{}*p^{}", d.0, e))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `u(n)`: the base-q digit `b_k` of `n` placed at exponent `-(k+1)`.
pub fn u_of_index(q: u32, mut n: u64) -> Laurent {
    let mut digits = Vec::new();
    while n > 0 {
        digits.push((n % q as u64) as u8);
        n /= q as u64;
    }
    digits.reverse();
    let lo = -(digits.len() as i32);
    Laurent::from_digits(lo, digits)
}

/// Inverse of [`u_of_index`] on purely fractional elements.
pub fn index_of_u(q: u32, x: &Laurent) -> Result<u64> {
    if !x.is_fractional() {
        return Err(LfwError::NotFractional(format!("{x:?}")));
    }
    let mut n: u64 = 0;
    if let Some(v) = x.valuation() {
        for e in v..0 {
            n = n
                .checked_mul(q as u64)
                .and_then(|n| n.checked_add(x.digit(e).0 as u64))
                .ok_or_else(|| LfwError::ElementOutOfRange(format!("{x:?}")))?;
        }
    }
    Ok(n)
}

/// Splits `x = u(n) + r` with `r ∈ 𝒪`.
pub fn fractional_part(q: u32, x: &Laurent) -> (u64, Laurent) {
    let n = index_of_u(q, &x.below(0)).expect("digits below 0 are fractional");
    (n, x.from_exp(0))
}

/// `χ(y·x) = ζ_p^(Tr d_(-1)(y x))`.
pub fn character(f: &FieldConfig, y: &Laurent, x: &Laurent) -> CycloScalar {
    let e = y.mul(f, x).char_exponent(f);
    CycloScalar::zeta_pow(f.p(), f.q(), e as i64)
}

/// A digit in the textual syntax: an integer for prime-subfield digits,
/// otherwise the ε-coordinate list `[a0,a1,...]`.
pub fn format_digit(f: &FieldConfig, d: Fq) -> String {
    if d.code() < f.p() {
        d.code().to_string()
    } else {
        let cs: Vec<String> = f.coords(d).iter().map(|a| a.to_string()).collect();
        format!("[{}]", cs.join(","))
    }
}

/// Prints `x` as a sum of monomials, e.g. `p^-1 + 2*p^3`.
pub fn format_laurent(f: &FieldConfig, x: &Laurent) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = x
        .terms()
        .map(|(e, d)| match (e, d == Fq::ONE) {
            (0, _) => format_digit(f, d),
            (_, true) => format!("p^{e}"),
            (_, false) => format!("{}*p^{e}", format_digit(f, d)),
        })
        .collect();
    parts.join(" + ")
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(LfwError::Parse {
            line: 1,
            col: self.pos + 1,
            message: msg.to_string(),
        })
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let neg = self.eat(b'-');
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let v: i64 = std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| LfwError::Parse {
                line: 1,
                col: start + 1,
                message: "integer too large".into(),
            })?;
        Ok(if neg { -v } else { v })
    }
}

/// Parses the element syntax produced by [`format_laurent`], also accepting
/// `u(n)`, `-` between terms, `p` for `p^1` and parenthesised exponents.
pub fn parse_laurent(f: &FieldConfig, text: &str) -> Result<Laurent> {
    let mut cur = Cursor {
        s: text.as_bytes(),
        pos: 0,
    };
    let mut acc = Laurent::zero();
    let mut negate = cur.eat(b'-');
    loop {
        let term = parse_term(f, &mut cur)?;
        let term = if negate { term.neg(f) } else { term };
        acc = acc.add(f, &term);
        if cur.eat(b'+') {
            negate = false;
        } else if cur.eat(b'-') {
            negate = true;
        } else {
            break;
        }
    }
    if cur.peek().is_some() {
        return cur.err("unexpected trailing input");
    }
    Ok(acc)
}

fn parse_digit(f: &FieldConfig, cur: &mut Cursor) -> Result<Option<Fq>> {
    match cur.peek() {
        Some(b'[') => {
            cur.pos += 1;
            let mut coords = Vec::new();
            if !cur.eat(b']') {
                loop {
                    let a = cur.int()?;
                    if a < 0 {
                        return cur.err("negative coordinate");
                    }
                    coords.push(a as u32);
                    if cur.eat(b']') {
                        break;
                    }
                    if !cur.eat(b',') {
                        return cur.err("expected ',' or ']'");
                    }
                }
            }
            f.element(&coords).map(Some)
        }
        Some(c) if c.is_ascii_digit() => {
            let a = cur.int()?;
            if a as u64 >= f.p() as u64 {
                return Err(LfwError::ElementOutOfRange(format!(
                    "digit {a} (integer digits must be below p = {})",
                    f.p()
                )));
            }
            Ok(Some(Fq(a as u8)))
        }
        _ => Ok(None),
    }
}

fn parse_atom(f: &FieldConfig, cur: &mut Cursor) -> Result<Laurent> {
    match cur.peek() {
        Some(b'p') => {
            cur.pos += 1;
            let e = if cur.eat(b'^') {
                if cur.eat(b'(') {
                    let e = cur.int()?;
                    if !cur.eat(b')') {
                        return cur.err("expected ')'");
                    }
                    e
                } else {
                    cur.int()?
                }
            } else {
                1
            };
            let e = i32::try_from(e).map_err(|_| LfwError::ElementOutOfRange(e.to_string()))?;
            Ok(Laurent::monomial(Fq::ONE, e))
        }
        Some(b'u') => {
            cur.pos += 1;
            if !cur.eat(b'(') {
                return cur.err("expected '(' after u");
            }
            let n = cur.int()?;
            if n < 0 {
                return cur.err("u(n) needs n >= 0");
            }
            if !cur.eat(b')') {
                return cur.err("expected ')'");
            }
            Ok(u_of_index(f.q(), n as u64))
        }
        _ => cur.err("expected p^k, u(n) or a digit"),
    }
}

fn parse_term(f: &FieldConfig, cur: &mut Cursor) -> Result<Laurent> {
    if let Some(d) = parse_digit(f, cur)? {
        if cur.eat(b'*') {
            Ok(parse_atom(f, cur)?.scalar_mul(f, d))
        } else {
            Ok(Laurent::monomial(d, 0))
        }
    } else {
        parse_atom(f, cur)
    }
}

/// A Laurent element bound to its field.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    raw: Laurent,
}

impl FieldElement {
    pub fn new(field: Field, raw: Laurent) -> Self {
        FieldElement { field, raw }
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field.clone(), Laurent::zero())
    }

    pub fn one(field: &Field) -> Self {
        Self::new(field.clone(), Laurent::one())
    }

    /// `𝔭^k`.
    pub fn uniformizer_pow(field: &Field, k: i32) -> Self {
        Self::new(field.clone(), Laurent::monomial(Fq::ONE, k))
    }

    pub fn u(field: &Field, n: u64) -> Self {
        Self::new(field.clone(), u_of_index(field.q(), n))
    }

    pub fn parse(field: &Field, text: &str) -> Result<Self> {
        Ok(Self::new(field.clone(), parse_laurent(field, text)?))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn raw(&self) -> &Laurent {
        &self.raw
    }

    pub fn into_raw(self) -> Laurent {
        self.raw
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn valuation(&self) -> Option<i32> {
        self.raw.valuation()
    }

    pub fn abs_log(&self) -> Option<i32> {
        self.raw.abs_log()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.field, &other.field)?;
        Ok(Self::new(self.field.clone(), self.raw.add(&self.field, &other.raw)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.field, &other.field)?;
        Ok(Self::new(self.field.clone(), self.raw.sub(&self.field, &other.raw)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.field, &other.field)?;
        Ok(Self::new(self.field.clone(), self.raw.mul(&self.field, &other.raw)))
    }

    pub fn index_of_u(&self) -> Result<u64> {
        index_of_u(self.field.q(), &self.raw)
    }

    pub fn fractional_part(&self) -> (u64, FieldElement) {
        let (n, r) = fractional_part(self.field.q(), &self.raw);
        (n, Self::new(self.field.clone(), r))
    }

    /// `χ(self · x)`.
    pub fn character(&self, x: &Self) -> Result<CycloScalar> {
        ensure_same(&self.field, &x.field)?;
        Ok(character(&self.field, &self.raw, &x.raw))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        crate::gfq::same_field(&self.field, &other.field) && self.raw == other.raw
    }
}

impl Eq for FieldElement {}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_laurent(&self.field, &self.raw))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> FieldElement {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> FieldElement {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::new(self.field.clone(), self.raw.neg(&self.field))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(p: u32, c: u32) -> Field {
        FieldConfig::new(p, c, None).unwrap()
    }

    fn el(f: &Field, s: &str) -> FieldElement {
        FieldElement::parse(f, s).unwrap()
    }

    fn random_laurent(rng: &mut ChaCha8Rng, q: u32, lo: i32, hi: i32) -> Laurent {
        let digits = (lo..hi).map(|_| rng.gen_range(0..q) as u8).collect();
        Laurent::from_digits(lo, digits)
    }

    #[test]
    fn addition_examples() {
        let f2 = field(2, 1);
        let x = el(&f2, "p^-1");
        assert!((&x + &x).is_zero());
        assert_eq!(&x + &FieldElement::zero(&f2), x);
        let f3 = field(3, 1);
        // digitwise mod 3: (2+1)p + (1+2)p^2
        let s = &el(&f3, "2*p^1 + p^2") + &el(&f3, "p^1 + 2*p^2");
        assert!(s.is_zero());
    }

    #[test]
    fn multiplication_examples() {
        let f2 = field(2, 1);
        let one_p = el(&f2, "1 + p");
        assert_eq!(&one_p * &one_p, el(&f2, "1 + p^2"));
        assert_eq!(&one_p * &FieldElement::one(&f2), one_p);
        for a in -8..=8 {
            for b in -8..=8 {
                let x = FieldElement::uniformizer_pow(&f2, a);
                let y = FieldElement::uniformizer_pow(&f2, b);
                assert_eq!(&x * &y, FieldElement::uniformizer_pow(&f2, a + b));
            }
        }
        assert_eq!(
            FieldElement::zero(&f2).try_add(&FieldElement::zero(&field(3, 1))),
            Err(LfwError::ConfigMismatch)
        );
    }

    #[test]
    fn u_examples() {
        let f2 = field(2, 1);
        assert!(FieldElement::u(&f2, 0).is_zero());
        assert_eq!(FieldElement::u(&f2, 2), el(&f2, "p^-2"));
        assert_eq!(el(&f2, "p^-1").index_of_u().unwrap(), 1);
        assert_eq!(el(&f2, "0").index_of_u().unwrap(), 0);
        assert!(matches!(el(&f2, "p^0").index_of_u(), Err(LfwError::NotFractional(_))));
        for (p, c) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = field(p, c);
            let q = f.q() as u64;
            for n in 1..q.pow(4) {
                let k = (1..).find(|&k| n < q.pow(k)).unwrap() as i32;
                assert_eq!(FieldElement::u(&f, n).abs_log(), Some(k));
            }
        }
    }

    #[test]
    fn u_round_trip() {
        for (p, c) in [(2, 1), (3, 1), (2, 2), (7, 1), (3, 2)] {
            let f = field(p, c);
            for n in 0..10_000u64 {
                assert_eq!(FieldElement::u(&f, n).index_of_u().unwrap(), n);
            }
        }
    }

    #[test]
    fn fractional_part_examples() {
        let f2 = field(2, 1);
        let (n, r) = el(&f2, "p^-1 + p").fractional_part();
        assert_eq!((n, r), (1, el(&f2, "p")));
        let x = el(&f2, "1 + p^3");
        assert_eq!(x.fractional_part(), (0, x.clone()));
        let f3 = field(3, 1);
        let x = &FieldElement::u(&f3, 5) + &el(&f3, "1 + p");
        assert_eq!(x.fractional_part(), (5, el(&f3, "1 + p")));
    }

    #[test]
    fn character_examples() {
        let f2 = field(2, 1);
        let one = FieldElement::one(&f2);
        assert!(one.character(&FieldElement::zero(&f2)).unwrap().is_one());
        let c = one.character(&el(&f2, "p^-1")).unwrap();
        assert_eq!(c, CycloScalar::zeta_pow(2, 2, 1));
        assert!(!c.is_one());
        for (p, cc) in [(2, 1), (3, 1), (2, 2)] {
            let f = field(p, cc);
            for k in 0..256 {
                for l in 0..256 {
                    let e = u_of_index(f.q(), k).mul(&f, &u_of_index(f.q(), l)).char_exponent(&f);
                    assert_eq!(e, 0);
                }
            }
        }
    }

    #[test]
    fn character_is_additive_and_trivial_on_integers() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, c) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = field(p, c);
            let q = f.q();
            for _ in 0..200 {
                let y = random_laurent(&mut rng, q, -3, 3);
                let x1 = random_laurent(&mut rng, q, -3, 3);
                let x2 = random_laurent(&mut rng, q, -3, 3);
                let lhs = character(&f, &y, &x1.add(&f, &x2));
                let rhs = character(&f, &y, &x1).mul(&character(&f, &y, &x2));
                assert_eq!(lhs, rhs);
                let o = random_laurent(&mut rng, q, 0, 5);
                assert!(character(&f, &Laurent::one(), &o).is_one());
            }
            let nontrivial = (1..q).any(|d| {
                !character(&f, &Laurent::one(), &Laurent::monomial(Fq(d as u8), -1)).is_one()
            });
            assert!(nontrivial);
        }
    }

    #[test]
    fn ultrametric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = field(3, 1);
        for _ in 0..10_000 {
            let lo1 = rng.gen_range(-5..5);
            let lo2 = rng.gen_range(-5..5);
            let l1 = rng.gen_range(0..5);
            let x = random_laurent(&mut rng, 3, lo1, lo1 + l1);
            let l2 = rng.gen_range(0..5);
            let y = random_laurent(&mut rng, 3, lo2, lo2 + l2);
            let s = x.add(&f, &y);
            let m = match (x.abs_log(), y.abs_log()) {
                (None, b) => b,
                (a, None) => a,
                (Some(a), Some(b)) => Some(a.max(b)),
            };
            if let (Some(sa), Some(m)) = (s.abs_log(), m) {
                assert!(sa <= m);
            }
            if x.abs_log() != y.abs_log() {
                assert_eq!(s.abs_log(), m);
            }
            if let (Some(a), Some(b)) = (x.valuation(), y.valuation()) {
                assert_eq!(x.mul(&f, &y).valuation(), Some(a + b));
            }
        }
    }

    #[test]
    fn u_structure_laws() {
        for (p, c) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = field(p, c);
            let q = f.q() as u64;
            // negation permutes the representatives and is an involution
            for n in 0..10_000u64 {
                let m = index_of_u(f.q(), &u_of_index(f.q(), n).neg(&f)).unwrap();
                let back = index_of_u(f.q(), &u_of_index(f.q(), m).neg(&f)).unwrap();
                assert_eq!(back, n);
            }
            // translation by u(l) permutes each digit-length class
            let t = (1..).find(|&t| q.pow(t) >= 64).unwrap();
            for l in 0..64u64 {
                let ul = u_of_index(f.q(), l);
                let mut seen = vec![false; q.pow(t) as usize];
                for n in 0..q.pow(t) {
                    let m = index_of_u(f.q(), &ul.add(&f, &u_of_index(f.q(), n))).unwrap();
                    assert!(!seen[m as usize]);
                    seen[m as usize] = true;
                }
            }
            // u(r q^k + s) = u(r) p^-k + u(s)
            for r in 0..32u64 {
                for k in 0..4u32 {
                    for s in 0..q.pow(k) {
                        let lhs = u_of_index(f.q(), r * q.pow(k) + s);
                        let rhs = u_of_index(f.q(), r)
                            .shift(-(k as i32))
                            .add(&f, &u_of_index(f.q(), s));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, c) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
            let f = field(p, c);
            for _ in 0..500 {
                let lo = rng.gen_range(-6..6);
                let len = rng.gen_range(0..6);
                let x = random_laurent(&mut rng, f.q(), lo, lo + len);
                let s = format_laurent(&f, &x);
                assert_eq!(parse_laurent(&f, &s).unwrap(), x, "{s}");
            }
        }
        let f4 = field(2, 2);
        assert_eq!(format_laurent(&f4, &Laurent::monomial(f4.basis(1), -2)), "[0,1]*p^-2");
        assert_eq!(parse_laurent(&f4, "u(3)").unwrap(), Laurent::monomial(Fq(3), -1));
        let f3 = field(3, 1);
        assert_eq!(parse_laurent(&f3, "p^(-1) - p").unwrap(), parse_laurent(&f3, "p^-1 + 2*p").unwrap());
        assert!(parse_laurent(&f3, "3*p").is_err());
        assert!(parse_laurent(&f3, "p^").is_err());
    }
}
