use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Verdict, Witness};
use crate::clopen::{overlay, Ball, ClopenSet};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TranslationMode {
    Packing,
    Tiling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuperMode {
    Orthonormal,
    Parseval,
}

/// Outcome of normalising the shell pieces of `W` into 𝒪*.
enum Normalized {
    /// A ball of `W` around 0; `𝔭^(k+1)𝒪` lies in both `W` and `𝔭W`.
    ContainsZero(Ball),
    Pieces(Vec<Ball>),
}

fn normalize_shells(w: &ClopenSet) -> Normalized {
    let mut pieces = Vec::with_capacity(w.balls().len());
    for b in w.balls() {
        match b.center().valuation() {
            Some(s) => pieces.push(b.scaled(-s)),
            None => return Normalized::ContainsZero(Ball::ideal(b.scale() + 1)),
        }
    }
    Normalized::Pieces(pieces)
}

/// `{𝔭^j W}` partitions K: the shell pieces of `W` moved into 𝒪* must tile it.
pub fn check_dilation_tiling(w: &ClopenSet) -> Verdict {
    let f = w.field();
    let mut v = Verdict::new();
    if w.is_empty() {
        v.fail("dilation_tiling", Witness::Measure(BigRational::zero()));
        return v;
    }
    let pieces = match normalize_shells(w) {
        Normalized::ContainsZero(b) => {
            v.record_with(
                "dilation_tiling",
                Some(Witness::ball(f, &b)),
                "set contains a neighbourhood of 0".into(),
            );
            return v;
        }
        Normalized::Pieces(p) => p,
    };
    let tagged: Vec<(Ball, ())> = pieces.into_iter().map(|b| (b, ())).collect();
    let cells = overlay(f.q(), tagged);
    if let Some((b, _)) = cells.iter().find(|(_, t)| t.len() > 1) {
        v.record_with(
            "dilation_tiling",
            Some(Witness::ball(f, b)),
            "two dilates overlap over this part of O*".into(),
        );
        return v;
    }
    let covered = ClopenSet::from_balls(f, cells.into_iter().map(|(b, _)| b).collect());
    let gap = ClopenSet::units(f).subtract(&covered).expect("same field");
    match gap.balls().first() {
        Some(b) => v.record_with(
            "dilation_tiling",
            Some(Witness::ball(f, b)),
            "part of O* not reached by any dilate".into(),
        ),
        None => v.pass("dilation_tiling"),
    }
    v
}

/// Packing: the translates `W + u(k)` are disjoint. Tiling: they also cover K.
pub fn check_translation(w: &ClopenSet, mode: TranslationMode) -> Verdict {
    let f = w.field();
    let mut v = Verdict::new();
    let fold = w.fold();
    v.record(
        "translation_packing",
        fold.overlap.balls().first().map(|b| Witness::ball(f, b)),
    );
    if mode == TranslationMode::Tiling {
        let image = ClopenSet::from_balls(f, fold.fragments.iter().map(|(b, _)| b.clone()).collect());
        let gap = ClopenSet::integers(f).subtract(&image).expect("same field");
        let witness = fold
            .overlap
            .balls()
            .first()
            .or(gap.balls().first())
            .map(|b| Witness::ball(f, b));
        v.record("translation_tiling", witness);
    }
    v
}

fn check_disjoint(fam: &[ClopenSet], v: &mut Verdict) {
    let mut witness = None;
    'outer: for i in 0..fam.len() {
        for j in i + 1..fam.len() {
            if let Ok(x) = fam[i].intersect(&fam[j]) {
                if let Some(b) = x.balls().first() {
                    witness = Some(Witness::ball(fam[i].field(), b));
                    break 'outer;
                }
            }
        }
    }
    v.record("components_disjoint", witness);
}

fn union_all(fam: &[ClopenSet]) -> Result<ClopenSet> {
    let mut acc = ClopenSet::empty(fam[0].field());
    for w in fam {
        acc = acc.union(w)?;
    }
    Ok(acc)
}

fn set_family(fam: &[ClopenSet], mode: TranslationMode) -> Result<Verdict> {
    let mut v = Verdict::new();
    if fam.is_empty() {
        v.fail("components_nonempty", Witness::Measure(BigRational::zero()));
        return Ok(v);
    }
    check_disjoint(fam, &mut v);
    v.absorb("union", check_dilation_tiling(&union_all(fam)?));
    for (m, w) in fam.iter().enumerate() {
        v.absorb(&format!("W{}", m + 1), check_translation(w, mode));
    }
    v.fact("order", fam.len());
    Ok(v)
}

/// Semi-orthogonal Parseval frame multiwavelet set criterion.
pub fn verify_pf_multiwavelet_set(fam: &[ClopenSet]) -> Result<Verdict> {
    set_family(fam, TranslationMode::Packing)
}

/// Orthonormal multiwavelet set criterion.
pub fn verify_multiwavelet_set(fam: &[ClopenSet]) -> Result<Verdict> {
    set_family(fam, TranslationMode::Tiling)
}

/// Total measure of the joint fold of all components into 𝒪.
pub fn joint_fold_measure(fam: &[ClopenSet]) -> BigRational {
    fam.iter().fold(BigRational::zero(), |acc, w| acc + w.measure())
}

/// Super-wavelet set criterion: (a) dilation tiling and (b) translation packing of
/// each component, (c) the joint fold tiles (orthonormal) or packs (Parseval) 𝒪.
pub fn verify_superwavelet(fam: &[ClopenSet], mode: SuperMode) -> Result<Verdict> {
    let mut v = Verdict::new();
    if fam.is_empty() {
        v.fail("components_nonempty", Witness::Measure(BigRational::zero()));
        return Ok(v);
    }
    let f = fam[0].field().clone();
    let mut fragments = Vec::new();
    for (i, w) in fam.iter().enumerate() {
        crate::gfq::ensure_same(&f, w.field())?;
        v.absorb(&format!("a.W{}", i + 1), check_dilation_tiling(w));
        v.absorb(
            &format!("b.W{}", i + 1),
            check_translation(w, TranslationMode::Packing),
        );
        fragments.extend(w.fold().fragments.into_iter().map(|(b, _)| (b, i)));
    }
    let total = joint_fold_measure(fam);
    v.fact("joint_fold_measure", &total);
    v.fact("length", fam.len());
    let cells = overlay(f.q(), fragments);
    let overlap = cells
        .iter()
        .find(|(_, t)| t.len() > 1)
        .map(|(b, _)| Witness::ball(&f, b));
    match mode {
        SuperMode::Parseval => {
            let witness = if total > BigRational::one() {
                Some(Witness::Measure(total))
            } else {
                overlap
            };
            v.record("c.joint_fold_packing", witness);
        }
        SuperMode::Orthonormal => {
            let witness = if total != BigRational::one() {
                Some(Witness::Measure(total))
            } else if overlap.is_some() {
                overlap
            } else {
                let image = ClopenSet::from_balls(&f, cells.into_iter().map(|(b, _)| b).collect());
                ClopenSet::integers(&f)
                    .subtract(&image)?
                    .balls()
                    .first()
                    .map(|b| Witness::ball(&f, b))
            };
            v.record("c.joint_fold_tiling", witness);
        }
    }
    Ok(v)
}

/// Checks that `S` is the scaling set attached to `W` and reports how its
/// translates behave.
pub fn mra_scaling_check(w: &ClopenSet, s: &ClopenSet) -> Result<Verdict> {
    let f = w.field();
    let q = f.q();
    let mut v = Verdict::new();
    let ps = s.scale(1);
    let escape = ps.subtract(s)?;
    v.record("scaling_nested", escape.balls().first().map(|b| Witness::ball(f, b)));
    let diff = s.scale(-1).subtract(s)?;
    let sym = diff.subtract(w)?.union(&w.subtract(&diff)?)?;
    v.record(
        "scaling_wavelet_difference",
        sym.balls().first().map(|b| Witness::ball(f, b)),
    );
    let expect = w.measure() / BigRational::from_integer((q - 1).into());
    let got = s.measure();
    v.record(
        "scaling_measure",
        (got != expect).then(|| Witness::Measure(got.clone() - expect.clone())),
    );
    v.fact("scaling_set_measure", &got);
    let tr = check_translation(s, TranslationMode::Tiling);
    let packs = tr.check("translation_packing").is_some_and(|c| c.witness.is_none());
    let tiles = tr.check("translation_tiling").is_some_and(|c| c.witness.is_none());
    v.record(
        "scaling_translation_packing",
        tr.check("translation_packing").and_then(|c| c.witness.clone()),
    );
    let status = match (tiles, packs) {
        (true, _) => "tiling (MRA)",
        (false, true) => "packing (Parseval frame MRA)",
        _ => "neither",
    };
    v.fact("translation", status);
    Ok(v)
}
