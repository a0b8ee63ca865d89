//! Compact-open subsets of K as canonical finite unions of balls.
//!
//! Balls are ordered as nodes of the digit trie read from `𝔭^(-∞)` upward: an
//! ancestor precedes its descendants and every subtree is contiguous. Canonical
//! sets are sorted in this order, pairwise disjoint and have no complete sibling
//! group.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{LfwError, Result};
use crate::gfq::{ensure_same, Field, FieldConfig, Fq};
use crate::lfield::{format_laurent, index_of_u, u_of_index, Laurent};

/// The ball `center + 𝔭^scale 𝒪` with all center digits below `scale`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ball {
    center: Laurent,
    scale: i32,
}

/// `q^(-k)` as an exact rational.
pub fn q_pow_neg(q: u32, k: i32) -> BigRational {
    let b = BigInt::from(q).pow(k.unsigned_abs());
    if k >= 0 {
        BigRational::new(BigInt::one(), b)
    } else {
        BigRational::from_integer(b)
    }
}

impl Ball {
    pub fn new(center: Laurent, scale: i32) -> Self {
        Ball {
            center: center.below(scale),
            scale,
        }
    }

    /// `𝔭^k 𝒪`.
    pub fn ideal(k: i32) -> Self {
        Ball {
            center: Laurent::zero(),
            scale: k,
        }
    }

    pub fn center(&self) -> &Laurent {
        &self.center
    }

    pub fn scale(&self) -> i32 {
        self.scale
    }

    pub fn measure(&self, q: u32) -> BigRational {
        q_pow_neg(q, self.scale)
    }

    pub fn contains_point(&self, x: &Laurent) -> bool {
        x.below(self.scale) == self.center
    }

    pub fn contains(&self, other: &Ball) -> bool {
        other.scale >= self.scale && other.center.below(self.scale) == self.center
    }

    pub fn intersects(&self, other: &Ball) -> bool {
        self.contains(other) || other.contains(self)
    }

    pub fn contains_zero(&self) -> bool {
        self.center.is_zero()
    }

    /// Children in increasing digit-code order.
    pub fn children(&self, q: u32) -> impl Iterator<Item = Ball> + '_ {
        (0..q).map(move |d| self.child(d as u8))
    }

    pub fn child(&self, d: u8) -> Ball {
        let mut digits = Vec::new();
        let lo = self.center.valuation().unwrap_or(self.scale).min(self.scale);
        for e in lo..self.scale {
            digits.push(self.center.digit(e).0);
        }
        digits.push(d);
        Ball {
            center: Laurent::from_digits(lo, digits),
            scale: self.scale + 1,
        }
    }

    pub fn parent(&self) -> Ball {
        Ball::new(self.center.clone(), self.scale - 1)
    }

    /// The digit selecting this ball among its siblings.
    pub fn last_digit(&self) -> Fq {
        self.center.digit(self.scale - 1)
    }

    /// All descendants at scale `t >= scale`.
    pub fn refine_to(&self, q: u32, t: i32) -> Vec<Ball> {
        let mut out = vec![self.clone()];
        for _ in self.scale..t {
            out = out.iter().flat_map(|b| b.children(q).collect::<Vec<_>>()).collect();
        }
        out
    }

    /// Image under `x ↦ 𝔭^j x`.
    pub fn scaled(&self, j: i32) -> Ball {
        Ball {
            center: self.center.shift(j),
            scale: self.scale + j,
        }
    }

    /// Image under `x ↦ x + t`.
    pub fn translated(&self, f: &FieldConfig, t: &Laurent) -> Ball {
        Ball::new(self.center.add(f, t), self.scale)
    }

    /// Comparison of the ball with a point viewed as an infinitely deep leaf:
    /// `Equal` when the ball contains the point.
    pub(crate) fn cmp_point(&self, x: &Laurent) -> Ordering {
        let lo = self
            .center
            .valuation()
            .unwrap_or(self.scale)
            .min(x.valuation().unwrap_or(self.scale));
        for e in lo..self.scale {
            let c = self.center.digit(e).cmp(&x.digit(e));
            if c.is_ne() {
                return c;
            }
        }
        Ordering::Equal
    }

    pub fn format(&self, f: &FieldConfig) -> String {
        format!("ball({}, {})", format_laurent(f, &self.center), self.scale)
    }
}

impl Ord for Ball {
    fn cmp(&self, other: &Self) -> Ordering {
        let m = self.scale.min(other.scale);
        let lo = self
            .center
            .valuation()
            .unwrap_or(m)
            .min(other.center.valuation().unwrap_or(m));
        for e in lo..m {
            let c = self.center.digit(e).cmp(&other.center.digit(e));
            if c.is_ne() {
                return c;
            }
        }
        self.scale.cmp(&other.scale)
    }
}

impl PartialOrd for Ball {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({:?}, {})", self.center, self.scale)
    }
}

/// Sorts, removes nested balls and merges complete sibling groups.
pub fn normalize_balls(q: u32, mut raw: Vec<Ball>) -> Vec<Ball> {
    raw.sort();
    raw.dedup();
    let mut stack: Vec<Ball> = Vec::with_capacity(raw.len());
    for b in raw {
        if stack.last().is_some_and(|top| top.contains(&b)) {
            continue;
        }
        stack.push(b);
        merge_siblings(q, &mut stack);
    }
    stack
}

fn merge_siblings(q: u32, stack: &mut Vec<Ball>) {
    let q = q as usize;
    while stack.len() >= q {
        let top = &stack[stack.len() - q..];
        let s = top[0].scale;
        let parent = top[0].parent();
        if top.iter().all(|b| b.scale == s && parent.contains(b)) {
            stack.truncate(stack.len() - q);
            stack.push(parent);
            // a merged parent can never be nested in an earlier kept ball
        } else {
            break;
        }
    }
}

/// Cells of the common refinement of tagged balls. Each emitted ball is a leaf
/// of the refinement, paired with the tags of every input ball containing it.
/// Output is in ball order; cells covered by no input are omitted.
pub fn overlay<T: Clone>(q: u32, mut items: Vec<(Ball, T)>) -> Vec<(Ball, Vec<T>)> {
    items.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let root = items[i].0.clone();
        let mut j = i;
        while j < items.len() && root.contains(&items[j].0) {
            j += 1;
        }
        let covering: Vec<T> = items[i..j]
            .iter()
            .take_while(|(b, _)| *b == root)
            .map(|(_, t)| t.clone())
            .collect();
        let k = i + covering.len();
        overlay_rec(q, &root, covering, &items[k..j], &mut out);
        i = j;
    }
    out
}

fn overlay_rec<T: Clone>(
    q: u32,
    node: &Ball,
    covering: Vec<T>,
    inside: &[(Ball, T)],
    out: &mut Vec<(Ball, Vec<T>)>,
) {
    if inside.is_empty() {
        if !covering.is_empty() {
            out.push((node.clone(), covering));
        }
        return;
    }
    let mut idx = 0;
    for child in node.children(q) {
        let start = idx;
        while idx < inside.len() && child.contains(&inside[idx].0) {
            idx += 1;
        }
        let sub = &inside[start..idx];
        let eq = sub.iter().take_while(|(b, _)| *b == child).count();
        let mut cov = covering.clone();
        cov.extend(sub[..eq].iter().map(|(_, t)| t.clone()));
        if cov.is_empty() && eq == sub.len() {
            continue;
        }
        overlay_rec(q, &child, cov, &sub[eq..], out);
    }
    debug_assert_eq!(idx, inside.len());
}

/// An exact value in `[0, +∞]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtRational {
    Finite(BigRational),
    Infinite,
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{r}"),
            ExtRational::Infinite => write!(f, "inf"),
        }
    }
}

/// A compact-open set in canonical form.
#[derive(Clone)]
pub struct ClopenSet {
    field: Field,
    balls: Vec<Ball>,
}

/// Result of folding a set into 𝒪 along the translates `u(l)`.
#[derive(Clone, Debug)]
pub struct Fold {
    /// `(ball inside 𝒪, l)`: the part of `W ∩ (𝒪 + u(l))` moved by `-u(l)`.
    pub fragments: Vec<(Ball, u64)>,
    /// Points of 𝒪 hit by at least two fragments.
    pub overlap: ClopenSet,
}

/// Shell decomposition `W ∩ 𝔭^s 𝒪*` down to an absolute depth.
#[derive(Clone, Debug)]
pub struct Shells {
    pub pieces: Vec<(i32, ClopenSet)>,
    /// The ball `𝔭^depth 𝒪` (or a smaller ideal) when `W` contains a neighbourhood of 0.
    pub residual: Option<Ball>,
}

impl ClopenSet {
    pub fn empty(field: &Field) -> Self {
        ClopenSet {
            field: field.clone(),
            balls: Vec::new(),
        }
    }

    pub fn from_balls(field: &Field, raw: Vec<Ball>) -> Self {
        ClopenSet {
            field: field.clone(),
            balls: normalize_balls(field.q(), raw),
        }
    }

    pub fn ball(field: &Field, center: Laurent, scale: i32) -> Self {
        Self::from_balls(field, vec![Ball::new(center, scale)])
    }

    /// `𝔭^k 𝒪`.
    pub fn ideal(field: &Field, k: i32) -> Self {
        Self::from_balls(field, vec![Ball::ideal(k)])
    }

    /// `𝒪`.
    pub fn integers(field: &Field) -> Self {
        Self::ideal(field, 0)
    }

    /// `𝔭^s 𝒪* = 𝔭^s 𝒪 ∖ 𝔭^(s+1) 𝒪`.
    pub fn shell(field: &Field, s: i32) -> Self {
        let balls = (1..field.q())
            .map(|d| Ball::new(Laurent::monomial(Fq(d as u8), s), s + 1))
            .collect();
        Self::from_balls(field, balls)
    }

    /// `𝒪*`.
    pub fn units(field: &Field) -> Self {
        Self::shell(field, 0)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn measure(&self) -> BigRational {
        self.balls
            .iter()
            .fold(BigRational::zero(), |acc, b| acc + b.measure(self.q()))
    }

    pub fn contains(&self, x: &Laurent) -> bool {
        let i = self
            .balls
            .partition_point(|b| b.cmp_point(x) != Ordering::Greater);
        i > 0 && self.balls[i - 1].contains_point(x)
    }

    /// The ball of this set containing `b`, if any.
    pub fn container_of(&self, b: &Ball) -> Option<&Ball> {
        let i = self.balls.partition_point(|x| x <= b);
        (i > 0 && self.balls[i - 1].contains(b)).then(|| &self.balls[i - 1])
    }

    pub fn min_scale(&self) -> Option<i32> {
        self.balls.iter().map(|b| b.scale).min()
    }

    pub fn max_scale(&self) -> Option<i32> {
        self.balls.iter().map(|b| b.scale).max()
    }

    /// Smallest valuation of a point of the set (`None` when empty).
    pub fn min_valuation(&self) -> Option<i32> {
        self.balls
            .iter()
            .map(|b| b.center.valuation().unwrap_or(b.scale))
            .min()
    }

    /// Largest valuation of a point, or `None` when the set is empty or contains 0.
    pub fn max_valuation(&self) -> Option<i32> {
        if self.balls.iter().any(Ball::contains_zero) {
            return None;
        }
        self.balls.iter().filter_map(|b| b.center.valuation()).max()
    }

    pub fn contains_zero(&self) -> bool {
        self.balls.iter().any(Ball::contains_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        ensure_same(&self.field, &other.field)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut v = self.balls.clone();
        v.extend(other.balls.iter().cloned());
        Ok(Self::from_balls(&self.field, v))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (a, b) = (&self.balls, &other.balls);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            if a[i].contains(&b[j]) {
                out.push(b[j].clone());
                j += 1;
            } else if b[j].contains(&a[i]) {
                out.push(a[i].clone());
                i += 1;
            } else if a[i] < b[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(Self::from_balls(&self.field, out))
    }

    pub fn subtract(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let q = self.q();
        let mut out = Vec::new();
        for a in &self.balls {
            if other.container_of(a).is_some() {
                continue;
            }
            let start = other.balls.partition_point(|x| x < a);
            let end = start + other.balls[start..].partition_point(|x| a.contains(x));
            subtract_rec(q, a, &other.balls[start..end], &mut out);
        }
        Ok(Self::from_balls(&self.field, out))
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.balls.iter().all(|b| other.container_of(b).is_some()))
    }

    pub fn is_disjoint(&self, other: &Self) -> Result<bool> {
        Ok(self.intersect(other)?.is_empty())
    }

    /// `𝔭^j W`.
    pub fn scale(&self, j: i32) -> Self {
        ClopenSet {
            field: self.field.clone(),
            balls: self.balls.iter().map(|b| b.scaled(j)).collect(),
        }
    }

    /// `W + t`.
    pub fn translate(&self, t: &Laurent) -> Self {
        let v = self
            .balls
            .iter()
            .map(|b| b.translated(&self.field, t))
            .collect();
        Self::from_balls(&self.field, v)
    }

    /// The balls refined so that every scale is at least `t` (not canonical).
    pub fn refined(&self, t: i32) -> Vec<Ball> {
        let q = self.q();
        self.balls
            .iter()
            .flat_map(|b| {
                if b.scale >= t {
                    vec![b.clone()]
                } else {
                    b.refine_to(q, t)
                }
            })
            .collect()
    }

    /// Moves each piece `W ∩ (𝒪 + u(l))` to 𝒪 by subtracting `u(l)`.
    pub fn fold(&self) -> Fold {
        let q = self.q();
        let mut fragments: Vec<(Ball, u64)> = self
            .refined(0)
            .into_iter()
            .map(|b| {
                let l = index_of_u(q, &b.center.below(0)).expect("fractional part");
                (Ball::new(b.center.from_exp(0), b.scale), l)
            })
            .collect();
        fragments.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut overlap = Vec::new();
        let mut last: Option<&Ball> = None;
        for (b, _) in &fragments {
            match last {
                Some(m) if m.contains(b) => overlap.push(b.clone()),
                _ => last = Some(b),
            }
        }
        Fold {
            overlap: Self::from_balls(&self.field, overlap),
            fragments,
        }
    }

    /// Union of the fold fragments.
    pub fn fold_image(&self) -> Self {
        let f = self.fold();
        Self::from_balls(&self.field, f.fragments.into_iter().map(|(b, _)| b).collect())
    }

    /// Pieces `W ∩ 𝔭^s 𝒪*` for `s < depth`; a ball around 0 is peeled into
    /// shells down to `depth` and the rest reported as `residual`.
    pub fn shells(&self, depth: i32) -> Shells {
        let mut by_shell: std::collections::BTreeMap<i32, Vec<Ball>> = Default::default();
        let mut residual = None;
        for b in &self.balls {
            match b.center.valuation() {
                Some(v) => by_shell.entry(v).or_default().push(b.clone()),
                None => {
                    for s in b.scale..depth {
                        by_shell
                            .entry(s)
                            .or_default()
                            .extend(Self::shell(&self.field, s).balls);
                    }
                    residual = Some(Ball::ideal(depth.max(b.scale)));
                }
            }
        }
        Shells {
            pieces: by_shell
                .into_iter()
                .map(|(s, v)| (s, Self::from_balls(&self.field, v)))
                .collect(),
            residual,
        }
    }

    /// `∫_W dξ / |ξ|`.
    pub fn inv_norm_integral(&self) -> ExtRational {
        let q = self.q();
        let mut acc = BigRational::zero();
        for b in &self.balls {
            match b.center.valuation() {
                Some(v) => acc += q_pow_neg(q, b.scale - v),
                None => return ExtRational::Infinite,
            }
        }
        ExtRational::Finite(acc)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.balls
                .iter()
                .map(|b| {
                    json!({
                        "center": format_laurent(&self.field, &b.center),
                        "scale": b.scale,
                    })
                })
                .collect(),
        )
    }
}

fn subtract_rec(q: u32, a: &Ball, holes: &[Ball], out: &mut Vec<Ball>) {
    if holes.is_empty() {
        out.push(a.clone());
        return;
    }
    if holes[0] == *a {
        return;
    }
    let mut idx = 0;
    for child in a.children(q) {
        let start = idx;
        while idx < holes.len() && child.contains(&holes[idx]) {
            idx += 1;
        }
        subtract_rec(q, &child, &holes[start..idx], out);
    }
}

impl PartialEq for ClopenSet {
    fn eq(&self, other: &Self) -> bool {
        crate::gfq::same_field(&self.field, &other.field) && self.balls == other.balls
    }
}

impl Eq for ClopenSet {}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.balls.len() {
            0 => write!(f, "empty"),
            1 => write!(f, "{}", self.balls[0].format(&self.field)),
            _ => {
                let parts: Vec<String> =
                    self.balls.iter().map(|b| b.format(&self.field)).collect();
                write!(f, "union({})", parts.join(", "))
            }
        }
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClopenSet({self})")
    }
}

/// `𝒪 + u(k)`.
pub fn unit_translate(field: &Field, k: u64) -> ClopenSet {
    ClopenSet::integers(field).translate(&u_of_index(field.q(), k))
}

/// Rejects sets whose description would need more than `limit` balls.
pub fn ensure_ball_budget(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(LfwError::ResourceCap(format!("{n} balls exceeds the limit of {limit}")))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::FieldConfig;
    use crate::lfield::parse_laurent;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(p: u32, c: u32) -> Field {
        FieldConfig::new(p, c, None).unwrap()
    }

    fn b(f: &Field, s: &str, k: i32) -> Ball {
        Ball::new(parse_laurent(f, s).unwrap(), k)
    }

    fn rat(a: i64, d: i64) -> BigRational {
        BigRational::new(a.into(), d.into())
    }

    pub(crate) fn random_set(rng: &mut ChaCha8Rng, f: &Field, lo: i32, hi: i32, n: usize) -> ClopenSet {
        let q = f.q();
        let balls = (0..n)
            .map(|_| {
                let k = rng.gen_range(lo + 1..=hi);
                let digits = (lo..k).map(|_| rng.gen_range(0..q) as u8).collect();
                Ball::new(Laurent::from_digits(lo, digits), k)
            })
            .collect();
        ClopenSet::from_balls(f, balls)
    }

    fn random_point(rng: &mut ChaCha8Rng, q: u32, lo: i32, hi: i32) -> Laurent {
        let digits = (lo..hi).map(|_| rng.gen_range(0..q) as u8).collect();
        Laurent::from_digits(lo, digits)
    }

    #[test]
    fn normalize_examples() {
        let f = field(2, 1);
        assert!(ClopenSet::from_balls(&f, vec![]).is_empty());
        let s = ClopenSet::from_balls(&f, vec![b(&f, "0", 1), b(&f, "1", 1)]);
        assert_eq!(s, ClopenSet::integers(&f));
        let s = ClopenSet::from_balls(&f, vec![b(&f, "0", 0), b(&f, "0", 2)]);
        assert_eq!(s.balls(), &[Ball::ideal(0)]);
        // cascading merge
        let f3 = field(3, 1);
        let mut v: Vec<Ball> = Ball::ideal(0).refine_to(3, 2);
        v.reverse();
        assert_eq!(ClopenSet::from_balls(&f3, v), ClopenSet::integers(&f3));
    }

    #[test]
    fn boolean_examples() {
        let f = field(3, 1);
        let o = ClopenSet::integers(&f);
        assert!(o.subtract(&o).unwrap().is_empty());
        let units = o.subtract(&ClopenSet::ideal(&f, 1)).unwrap();
        assert_eq!(units, ClopenSet::units(&f));
        assert_eq!(units.balls().len(), 2);
        let w1 = unit_translate(&f, 1);
        let w2 = unit_translate(&f, 2);
        assert_eq!(w1.intersect(&w2).unwrap().measure(), BigRational::zero());
        assert_eq!(w1.measure(), BigRational::one());
        assert!(o.union(&ClopenSet::integers(&field(2, 1))).is_err());
    }

    #[test]
    fn translate_and_scale_examples() {
        let f = field(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in 1..3 {
            let w = unit_translate(&f, i);
            for _ in 0..100 {
                let x = random_point(&mut rng, 3, 0, 6).add(&f, &u_of_index(3, i));
                assert!(w.contains(&x));
                assert_eq!(x.abs_log(), Some(1));
            }
        }
        for m in -3..4 {
            let s = ClopenSet::units(&f).scale(m);
            assert_eq!(s, ClopenSet::shell(&f, m));
            assert_eq!(s.measure(), q_pow_neg(3, m) * rat(2, 3));
        }
        assert_eq!(ClopenSet::units(&f).scale(0), ClopenSet::units(&f));
        assert_eq!(ClopenSet::units(&f).translate(&Laurent::zero()), ClopenSet::units(&f));
    }

    #[test]
    fn measure_examples() {
        let f = field(2, 1);
        assert_eq!(ClopenSet::empty(&f).measure(), BigRational::zero());
        assert_eq!(ClopenSet::integers(&f).measure(), BigRational::one());
    }

    #[test]
    fn fold_examples() {
        let f = field(3, 1);
        let fo = unit_translate(&f, 1).fold();
        assert_eq!(fo.fragments, vec![(Ball::ideal(0), 1)]);
        assert!(fo.overlap.is_empty());
        for m in 0..3 {
            let s = ClopenSet::shell(&f, m);
            let fo = s.fold();
            assert!(fo.overlap.is_empty());
            assert!(fo.fragments.iter().all(|(_, l)| *l == 0));
            assert_eq!(s.fold_image(), s);
            assert!(s.measure() < BigRational::one());
        }
        let f2 = field(2, 1);
        let w = ClopenSet::integers(&f2).union(&unit_translate(&f2, 1)).unwrap();
        let fo = w.fold();
        assert_eq!(fo.fragments.len(), 2);
        assert!(fo.fragments.iter().all(|(b, _)| *b == Ball::ideal(0)));
        assert_eq!(fo.overlap, ClopenSet::integers(&f2));
    }

    #[test]
    fn integral_examples() {
        let f = field(3, 1);
        assert_eq!(ClopenSet::empty(&f).inv_norm_integral(), ExtRational::Finite(BigRational::zero()));
        assert_eq!(ClopenSet::units(&f).inv_norm_integral(), ExtRational::Finite(rat(2, 3)));
        for k in 0..4 {
            assert_eq!(ClopenSet::ideal(&f, k).inv_norm_integral(), ExtRational::Infinite);
            // shell sums over [k, k+N] grow like N(1 - 1/q)
            for n in 1..5 {
                let mut acc = BigRational::zero();
                for s in k..k + n {
                    if let ExtRational::Finite(v) = ClopenSet::shell(&f, s).inv_norm_integral() {
                        acc += v;
                    }
                }
                assert_eq!(acc, rat(2 * n as i64, 3));
            }
        }
    }

    #[test]
    fn shell_examples() {
        let f = field(3, 1);
        let sh = ClopenSet::units(&f).shells(5);
        assert_eq!(sh.pieces, vec![(0, ClopenSet::units(&f))]);
        assert!(sh.residual.is_none());
        let sh = ClopenSet::integers(&f).shells(3);
        let ss: Vec<i32> = sh.pieces.iter().map(|(s, _)| *s).collect();
        assert_eq!(ss, vec![0, 1, 2]);
        for (s, piece) in &sh.pieces {
            assert_eq!(*piece, ClopenSet::shell(&f, *s));
        }
        assert_eq!(sh.residual, Some(Ball::ideal(3)));
        let w = unit_translate(&f, 1).union(&unit_translate(&f, 2)).unwrap();
        let sh = w.shells(0);
        assert_eq!(sh.pieces, vec![(-1, w.clone())]);
    }

    #[test]
    fn random_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for (p, c) in [(2, 1), (3, 1), (2, 2)] {
            let f = field(p, c);
            let q = f.q();
            for _ in 0..300 {
                let a = random_set(&mut rng, &f, -2, 3, 6);
                let bb = random_set(&mut rng, &f, -2, 3, 6);
                let cc = random_set(&mut rng, &f, -2, 3, 6);
                assert_eq!(ClopenSet::from_balls(&f, a.balls().to_vec()), a);
                let u = a.union(&bb).unwrap();
                let i = a.intersect(&bb).unwrap();
                assert_eq!(u.measure() + i.measure(), a.measure() + bb.measure());
                let bound = ClopenSet::ideal(&f, -2);
                // De Morgan inside the bounding ball
                let comp = |s: &ClopenSet| bound.subtract(s).unwrap();
                assert_eq!(comp(&u), comp(&a).intersect(&comp(&bb)).unwrap());
                assert_eq!(comp(&i), comp(&a).union(&comp(&bb)).unwrap());
                assert_eq!(
                    a.intersect(&bb.union(&cc).unwrap()).unwrap(),
                    i.union(&a.intersect(&cc).unwrap()).unwrap()
                );
                assert_eq!(a.subtract(&bb).unwrap().union(&i).unwrap(), a);
                let t = random_point(&mut rng, q, -3, 2);
                assert_eq!(a.translate(&t).measure(), a.measure());
                let j = rng.gen_range(-3..4);
                assert_eq!(a.scale(j).measure(), a.measure() * q_pow_neg(q, j));
                assert_eq!(a.scale(j).scale(-j), a);
                let fo = a.fold();
                if fo.overlap.is_empty() {
                    let total: BigRational = fo
                        .fragments
                        .iter()
                        .fold(BigRational::zero(), |s, (b, _)| s + b.measure(q));
                    assert_eq!(total, a.measure());
                }
                let inside = a.intersect(&ClopenSet::integers(&f)).unwrap();
                if let ExtRational::Finite(v) = inside.inv_norm_integral() {
                    assert!(v >= inside.measure());
                }
                for _ in 0..30 {
                    let x = random_point(&mut rng, q, -3, 5);
                    let in_a = a.balls().iter().any(|b| b.contains_point(&x));
                    assert_eq!(a.contains(&x), in_a);
                    assert_eq!(u.contains(&x), in_a || bb.contains(&x));
                    assert_eq!(i.contains(&x), in_a && bb.contains(&x));
                    assert_eq!(a.translate(&t).contains(&x.add(&f, &t)), in_a);
                }
                let sh = a.shells(4);
                let mut rebuilt = ClopenSet::empty(&f);
                for (s, piece) in &sh.pieces {
                    assert!(piece.is_subset(&ClopenSet::shell(&f, *s)).unwrap());
                    rebuilt = rebuilt.union(piece).unwrap();
                }
                if let Some(r) = &sh.residual {
                    rebuilt = rebuilt.union(&ClopenSet::from_balls(&f, vec![r.clone()])).unwrap();
                }
                assert_eq!(rebuilt, a);
            }
        }
    }

    #[test]
    fn overlay_cells() {
        let f = field(2, 1);
        let cells = overlay(2, vec![(Ball::ideal(0), 'a'), (Ball::ideal(1), 'b')]);
        assert_eq!(
            cells,
            vec![(Ball::ideal(1), vec!['a', 'b']), (b(&f, "1", 1), vec!['a'])]
        );
        let cells = overlay(2, vec![(Ball::ideal(0), 'a'), (b(&f, "p^-1", 0), 'b')]);
        assert_eq!(cells.len(), 2);
    }
}
