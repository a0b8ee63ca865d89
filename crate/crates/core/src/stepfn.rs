//! Piecewise-constant functions on K with cyclotomic values.

use std::fmt;

use crate::clopen::{overlay, Ball, ClopenSet};
use crate::cyclo::CycloScalar;
use crate::error::{LfwError, Result};
use crate::gfq::{ensure_same, Field};
use crate::lfield::Laurent;

/// A step function in canonical form: cells sorted in ball order, pairwise
/// disjoint, nonzero, and no complete sibling group sharing one value.
#[derive(Clone)]
pub struct StepFunction {
    field: Field,
    cells: Vec<(Ball, CycloScalar)>,
}

impl StepFunction {
    pub fn zero(field: &Field) -> Self {
        StepFunction {
            field: field.clone(),
            cells: Vec::new(),
        }
    }

    pub fn indicator(set: &ClopenSet) -> Self {
        let f = set.field();
        let one = CycloScalar::one(f.p(), f.q());
        StepFunction {
            field: f.clone(),
            cells: set.balls().iter().map(|b| (b.clone(), one.clone())).collect(),
        }
    }

    /// Value `c` on `set`, zero elsewhere.
    pub fn constant_on(set: &ClopenSet, c: &CycloScalar) -> Self {
        Self::indicator(set).scale_values(c)
    }

    /// Builds a function from cells that must be pairwise disjoint.
    pub fn from_cells(field: &Field, cells: Vec<(Ball, CycloScalar)>) -> Result<Self> {
        let tagged: Vec<(Ball, usize)> = cells.iter().enumerate().map(|(i, (b, _))| (b.clone(), i)).collect();
        let mut leaves = Vec::new();
        for (ball, tags) in overlay(field.q(), tagged) {
            if tags.len() > 1 {
                return Err(LfwError::Precondition(format!(
                    "step cells overlap on {}",
                    ball.format(field)
                )));
            }
            leaves.push((ball, cells[tags[0]].1.clone()));
        }
        Ok(Self::from_leaves(field, leaves))
    }

    /// Canonicalises disjoint cells already sorted in ball order.
    fn from_leaves(field: &Field, leaves: Vec<(Ball, CycloScalar)>) -> Self {
        let q = field.q() as usize;
        let mut stack: Vec<(Ball, CycloScalar)> = Vec::with_capacity(leaves.len());
        for (b, v) in leaves {
            if v.is_zero() {
                continue;
            }
            stack.push((b, v));
            while stack.len() >= q {
                let top = &stack[stack.len() - q..];
                let s = top[0].0.scale();
                let parent = top[0].0.parent();
                let v0 = &top[0].1;
                if top
                    .iter()
                    .all(|(b, v)| b.scale() == s && parent.contains(b) && v == v0)
                {
                    let v0 = v0.clone();
                    stack.truncate(stack.len() - q);
                    stack.push((parent, v0));
                } else {
                    break;
                }
            }
        }
        StepFunction {
            field: field.clone(),
            cells: stack,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn cells(&self) -> &[(Ball, CycloScalar)] {
        &self.cells
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn support(&self) -> ClopenSet {
        ClopenSet::from_balls(&self.field, self.cells.iter().map(|(b, _)| b.clone()).collect())
    }

    pub fn eval(&self, x: &Laurent) -> CycloScalar {
        let i = self
            .cells
            .partition_point(|(b, _)| b.cmp_point(x) != std::cmp::Ordering::Greater);
        if i > 0 && self.cells[i - 1].0.contains_point(x) {
            return self.cells[i - 1].1.clone();
        }
        self.zero_value()
    }

    pub fn zero_value(&self) -> CycloScalar {
        CycloScalar::zero(self.field.p(), self.field.q())
    }

    /// The common grade of all values, if they share one.
    pub fn uniform_grade(&self) -> Option<i32> {
        let g = self.cells.first().map_or(0, |(_, v)| v.grade());
        self.cells.iter().all(|(_, v)| v.grade() == g).then_some(g)
    }

    /// `ξ ↦ f(𝔭^(-j) ξ)`; the support becomes `𝔭^j · supp f`.
    pub fn dilate(&self, j: i32) -> Self {
        StepFunction {
            field: self.field.clone(),
            cells: self.cells.iter().map(|(b, v)| (b.scaled(j), v.clone())).collect(),
        }
    }

    /// `ξ ↦ f(ξ + t)`.
    pub fn translate_arg(&self, t: &Laurent) -> Self {
        let neg = t.neg(&self.field);
        let mut cells: Vec<(Ball, CycloScalar)> = self
            .cells
            .iter()
            .map(|(b, v)| (b.translated(&self.field, &neg), v.clone()))
            .collect();
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        Self::from_leaves(&self.field, cells)
    }

    pub fn conj(&self) -> Self {
        self.map_values(|v| v.conj())
    }

    pub fn abs_sq(&self) -> Self {
        self.map_values(|v| v.abs_sq())
    }

    pub fn scale_values(&self, c: &CycloScalar) -> Self {
        self.map_values(|v| v.mul(c))
    }

    fn map_values(&self, g: impl Fn(&CycloScalar) -> CycloScalar) -> Self {
        let cells = self.cells.iter().map(|(b, v)| (b.clone(), g(v))).collect();
        Self::from_leaves(&self.field, cells)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.field, &other.field)?;
        let items = tag_cells(&[self, other]);
        let mut leaves = Vec::new();
        for (ball, tags) in overlay(self.field.q(), items) {
            if tags.len() == 2 {
                leaves.push((ball, tags[0].1.mul(&tags[1].1)));
            }
        }
        Ok(Self::from_leaves(&self.field, leaves))
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::sum(&self.field, &[self, other])
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.map_values(|v| v.neg()))
    }

    /// Pointwise sum of several functions.
    pub fn sum(field: &Field, fs: &[&StepFunction]) -> Result<Self> {
        for f in fs {
            ensure_same(field, &f.field)?;
        }
        let items = tag_cells(fs);
        let mut leaves = Vec::new();
        for (ball, tags) in overlay(field.q(), items) {
            leaves.push((ball, add_all(field, tags.iter().map(|(_, v)| v))?));
        }
        Ok(Self::from_leaves(field, leaves))
    }

    /// Periodisation `ξ ↦ Σ_k f(ξ + u(k))` as a function supported on 𝒪.
    pub fn fold_sum(&self) -> Result<Self> {
        let q = self.field.q();
        let mut items = Vec::new();
        for (b, v) in &self.cells {
            let pieces = if b.scale() >= 0 {
                vec![b.clone()]
            } else {
                b.refine_to(q, 0)
            };
            for piece in pieces {
                items.push((Ball::new(piece.center().from_exp(0), piece.scale()), v.clone()));
            }
        }
        let mut leaves = Vec::new();
        for (ball, vals) in overlay(q, items) {
            leaves.push((ball, add_all(&self.field, vals.iter())?));
        }
        Ok(Self::from_leaves(&self.field, leaves))
    }

    /// `w(ξ) = Σ_k |f(ξ + u(k))|²` on 𝒪.
    pub fn weight(&self) -> Result<Self> {
        self.abs_sq().fold_sum()
    }

    /// Value at `x` of the 𝒪-periodic extension of a function living on 𝒪.
    pub fn periodic_eval(&self, x: &Laurent) -> CycloScalar {
        self.eval(&x.from_exp(0))
    }

    /// Restriction to a clopen set.
    pub fn restrict(&self, set: &ClopenSet) -> Result<Self> {
        self.mul(&StepFunction::indicator(set))
    }

    /// True when every value equals 1.
    pub fn is_indicator(&self) -> bool {
        self.cells.iter().all(|(_, v)| v.is_one())
    }
}

fn tag_cells(fs: &[&StepFunction]) -> Vec<(Ball, (usize, CycloScalar))> {
    fs.iter()
        .enumerate()
        .flat_map(|(i, f)| f.cells.iter().map(move |(b, v)| (b.clone(), (i, v.clone()))))
        .collect()
}

fn add_all<'a>(field: &Field, vals: impl Iterator<Item = &'a CycloScalar>) -> Result<CycloScalar> {
    let mut acc = CycloScalar::zero(field.p(), field.q());
    for v in vals {
        acc = acc.try_add(v)?;
    }
    Ok(acc)
}

/// Cells of the common refinement of several functions and sets; each cell's
/// center is a representative point.
pub fn common_refinement(fs: &[&StepFunction], extra: &[&ClopenSet]) -> Vec<Ball> {
    let Some(q) = fs
        .iter()
        .map(|f| f.field.q())
        .chain(extra.iter().map(|s| s.q()))
        .next()
    else {
        return Vec::new();
    };
    let mut items: Vec<(Ball, ())> = Vec::new();
    for f in fs {
        items.extend(f.cells.iter().map(|(b, _)| (b.clone(), ())));
    }
    for s in extra {
        items.extend(s.balls().iter().map(|b| (b.clone(), ())));
    }
    overlay(q, items).into_iter().map(|(b, _)| b).collect()
}

impl PartialEq for StepFunction {
    fn eq(&self, other: &Self) -> bool {
        crate::gfq::same_field(&self.field, &other.field) && self.cells == other.cells
    }
}

impl Eq for StepFunction {}

impl fmt::Display for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .cells
            .iter()
            .map(|(b, v)| format!("({}, {})", b.format(&self.field), v))
            .collect();
        write!(f, "step{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clopen::unit_translate;
    use crate::gfq::FieldConfig;
    use crate::lfield::{parse_laurent, u_of_index};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(p: u32, c: u32) -> Field {
        FieldConfig::new(p, c, None).unwrap()
    }

    fn pt(f: &Field, s: &str) -> Laurent {
        parse_laurent(f, s).unwrap()
    }

    fn int(f: &Field, n: i64) -> CycloScalar {
        CycloScalar::from_int(f.p(), f.q(), n)
    }

    #[test]
    fn eval_examples() {
        let f = field(3, 1);
        let ind = StepFunction::indicator(&ClopenSet::units(&f));
        assert!(ind.eval(&pt(&f, "1")).is_one());
        assert!(ind.eval(&pt(&f, "p")).is_zero());
        assert!(ind.eval(&pt(&f, "p^-2")).is_zero());
        assert!(ind.eval(&pt(&f, "2 + p^4")).is_one());
    }

    #[test]
    fn refinement_examples() {
        let f = field(2, 1);
        let o = StepFunction::indicator(&ClopenSet::integers(&f));
        assert_eq!(common_refinement(&[&o], &[]), vec![Ball::ideal(0)]);
        let o1 = StepFunction::indicator(&unit_translate(&f, 1));
        assert_eq!(common_refinement(&[&o, &o1], &[]).len(), 2);
        let po = StepFunction::indicator(&ClopenSet::ideal(&f, 1));
        let cells = common_refinement(&[&o, &po], &[]);
        let units = ClopenSet::units(&f);
        let mut as_sets: Vec<ClopenSet> = cells
            .iter()
            .map(|b| ClopenSet::from_balls(&f, vec![b.clone()]))
            .collect();
        as_sets.sort_by_key(|s| s.to_string());
        let mut expect = vec![ClopenSet::ideal(&f, 1), units];
        expect.sort_by_key(|s| s.to_string());
        assert_eq!(as_sets, expect);
    }

    #[test]
    fn weight_examples() {
        for (p, c) in [(2, 1), (3, 1), (2, 2)] {
            let f = field(p, c);
            let w = StepFunction::indicator(&ClopenSet::ideal(&f, 1)).weight().unwrap();
            assert_eq!(w, StepFunction::indicator(&ClopenSet::ideal(&f, 1)));
            let w = StepFunction::indicator(&ClopenSet::integers(&f)).weight().unwrap();
            assert_eq!(w, StepFunction::indicator(&ClopenSet::integers(&f)));
        }
        let f = field(2, 1);
        let two = ClopenSet::integers(&f).union(&unit_translate(&f, 1)).unwrap();
        let w = StepFunction::indicator(&two).weight().unwrap();
        assert_eq!(w, StepFunction::constant_on(&ClopenSet::integers(&f), &int(&f, 2)));
    }

    #[test]
    fn overlapping_cells_rejected() {
        let f = field(2, 1);
        let one = int(&f, 1);
        let r = StepFunction::from_cells(&f, vec![(Ball::ideal(0), one.clone()), (Ball::ideal(1), one)]);
        assert!(matches!(r, Err(LfwError::Precondition(_))));
    }

    #[test]
    fn canonical_merge() {
        let f = field(2, 1);
        let one = int(&f, 1);
        let g = StepFunction::from_cells(
            &f,
            vec![
                (Ball::new(pt(&f, "1"), 1), one.clone()),
                (Ball::ideal(1), one.clone()),
            ],
        )
        .unwrap();
        assert_eq!(g, StepFunction::indicator(&ClopenSet::integers(&f)));
        let h = g.sub(&g).unwrap();
        assert!(h.is_zero());
    }

    fn random_fn(rng: &mut ChaCha8Rng, f: &Field) -> StepFunction {
        let q = f.q();
        let mut cells = Vec::new();
        for _ in 0..rng.gen_range(1..6) {
            let k = rng.gen_range(-1..3);
            let digits = (-2..k).map(|_| rng.gen_range(0..q) as u8).collect();
            let b = Ball::new(Laurent::from_digits(-2, digits), k);
            let v = CycloScalar::zeta_pow(f.p(), q, rng.gen_range(0..f.p() as i64))
                .scale(&BigRational::from_integer(rng.gen_range(1..4).into()));
            cells.push((b, v));
        }
        // keep a disjoint subfamily
        let mut kept: Vec<(Ball, CycloScalar)> = Vec::new();
        for (b, v) in cells {
            if kept.iter().all(|(c, _)| !c.intersects(&b)) {
                kept.push((b, v));
            }
        }
        StepFunction::from_cells(f, kept).unwrap()
    }

    #[test]
    fn pointwise_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (p, c) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
            let f = field(p, c);
            let q = f.q();
            for _ in 0..60 {
                let a = random_fn(&mut rng, &f);
                let b = random_fn(&mut rng, &f);
                let prod = a.mul(&b).unwrap();
                let sum = a.add(&b).unwrap();
                let w = a.weight().unwrap();
                let j = rng.gen_range(-2..3);
                let dil = a.dilate(j);
                let t = u_of_index(q, rng.gen_range(0..q as u64 * q as u64));
                let tr = a.translate_arg(&t);
                for _ in 0..40 {
                    let x = Laurent::from_digits(-4, (0..8).map(|_| rng.gen_range(0..q) as u8).collect());
                    let (va, vb) = (a.eval(&x), b.eval(&x));
                    assert_eq!(prod.eval(&x), va.mul(&vb));
                    assert_eq!(sum.eval(&x), va.try_add(&vb).unwrap());
                    assert_eq!(dil.eval(&x.shift(j)), va);
                    assert_eq!(tr.eval(&x), a.eval(&x.add(&f, &t)));
                    // direct periodisation oracle
                    let mut direct = CycloScalar::zero(p, q);
                    for k in 0..(q as u64).pow(3) {
                        let y = x.from_exp(0).add(&f, &u_of_index(q, k));
                        direct = direct.try_add(&a.eval(&y).abs_sq()).unwrap();
                    }
                    assert_eq!(w.periodic_eval(&x), direct);
                    let l = u_of_index(q, rng.gen_range(0..50));
                    assert_eq!(w.periodic_eval(&x.add(&f, &l)), w.periodic_eval(&x));
                }
            }
        }
    }
}
