use rayon::prelude::*;

use super::{Verdict, Witness};
use crate::clopen::{overlay, Ball, ClopenSet};
use crate::cyclo::CycloScalar;
use crate::error::{LfwError, Result};
use crate::gfq::{ensure_same, Field};
use crate::lfield::u_of_index;
use crate::stepfn::StepFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TranslateMode {
    Parseval,
    Orthonormal,
}

fn common_field(fs: &[StepFunction]) -> Result<Field> {
    let f = fs
        .first()
        .ok_or_else(|| LfwError::Precondition("empty function family".into()))?
        .field()
        .clone();
    for g in fs {
        ensure_same(&f, g.field())?;
    }
    Ok(f)
}

/// `Σ_m Σ_j |ψ̂_m(𝔭^(-j) ξ)|² = 1`: every shell piece of `|ψ̂_m|²` is carried
/// into 𝒪* and the resulting sum must be identically 1 there.
fn dilation_sum_witness(f: &Field, fam: &[&StepFunction]) -> Result<Option<(Witness, String)>> {
    let mut items = Vec::new();
    for g in fam {
        for (b, v) in g.cells() {
            match b.center().valuation() {
                Some(s) => items.push((b.scaled(-s), v.abs_sq())),
                None => {
                    return Ok(Some((
                        Witness::ball(f, b),
                        "nonzero on a neighbourhood of 0: the dilation sum diverges".into(),
                    )))
                }
            }
        }
    }
    let one = CycloScalar::one(f.p(), f.q());
    let cells = overlay(f.q(), items);
    let mut covered = Vec::with_capacity(cells.len());
    for (b, vals) in cells {
        let mut acc = CycloScalar::zero(f.p(), f.q());
        for x in &vals {
            acc = acc.try_add(x)?;
        }
        if acc != one {
            return Ok(Some((Witness::ball(f, &b), format!("sum = {acc}"))));
        }
        covered.push(b);
    }
    let gap = ClopenSet::units(f).subtract(&ClopenSet::from_balls(f, covered))?;
    Ok(gap
        .balls()
        .first()
        .map(|b| (Witness::ball(f, b), "sum = 0".to_string())))
}

/// Radius exponent `R` with every support inside `𝔭^(-R) 𝒪`.
fn support_radius(fam: &[&StepFunction]) -> i32 {
    fam.iter()
        .filter_map(|g| g.support().min_valuation())
        .map(|v| (-v).max(0))
        .max()
        .unwrap_or(0)
}

/// `Σ_m Σ_{j ≥ 0} ψ̂_m(𝔭^(-j) ξ) conj ψ̂_m(𝔭^(-j)(ξ + u(s))) = 0` for `q ∤ s`.
/// Only `s < q^R` and `j < R` can produce a nonzero product.
fn cross_correlation_witness(
    f: &Field,
    fam: &[&StepFunction],
) -> Result<(Option<(Witness, String)>, i32)> {
    let r = support_radius(fam);
    let q = f.q() as u64;
    let s_end = q.pow(r as u32);
    let results: Vec<Result<Option<(u64, Ball)>>> = (1..s_end)
        .into_par_iter()
        .filter(|s| s % q != 0)
        .map(|s| {
            let us = u_of_index(f.q(), s);
            let mut terms = Vec::new();
            for g in fam {
                for j in 0..r {
                    let d = g.dilate(j);
                    let t = d.translate_arg(&us).conj();
                    terms.push(d.mul(&t)?);
                }
            }
            let refs: Vec<&StepFunction> = terms.iter().collect();
            let total = StepFunction::sum(f, &refs)?;
            Ok(total.cells().first().map(|(b, _)| (s, b.clone())))
        })
        .collect();
    let mut first: Option<(u64, Ball)> = None;
    for r in results {
        if let Some((s, b)) = r? {
            if first.as_ref().is_none_or(|(s0, _)| s < *s0) {
                first = Some((s, b));
            }
        }
    }
    Ok((
        first.map(|(s, b)| (Witness::ball(f, &b), format!("s = {s}"))),
        r,
    ))
}

fn record(v: &mut Verdict, name: String, w: Option<(Witness, String)>) {
    match w {
        Some((w, d)) => v.record_with(name, Some(w), d),
        None => v.pass(name),
    }
}

/// Pointwise frame equations for a family of spectra `ψ̂_1, ..., ψ̂_M`.
pub fn verify_frame_pointwise(fam: &[StepFunction]) -> Result<Verdict> {
    let f = common_field(fam)?;
    let refs: Vec<&StepFunction> = fam.iter().collect();
    let mut v = Verdict::new();
    record(&mut v, "dilation_sum_is_one".into(), dilation_sum_witness(&f, &refs)?);
    let (w, r) = cross_correlation_witness(&f, &refs)?;
    record(&mut v, "cross_correlation_vanishes".into(), w);
    if r > 0 {
        v.bounds.s_max = Some((f.q() as u64).pow(r as u32) - 1);
        v.bounds.j_max = Some(r as i64 - 1);
    }
    Ok(v)
}

/// Orthonormality (`w ≡ 1`) or Parseval (`0 ≤ w ≤ 1`) of the integer translates
/// of `φ`, with `w(ξ) = Σ_k |φ̂(ξ + u(k))|²`.
pub fn verify_translates(phi: &StepFunction, mode: TranslateMode) -> Result<Verdict> {
    let f = phi.field().clone();
    let w = phi.weight()?;
    let mut v = Verdict::new();
    let one = CycloScalar::one(f.p(), f.q());
    match mode {
        TranslateMode::Orthonormal => {
            let ind = StepFunction::indicator(&ClopenSet::integers(&f));
            let diff = w.sub(&ind)?;
            let witness = diff.cells().first().map(|(b, _)| {
                (Witness::ball(&f, b), format!("w = {}", w.eval(b.center())))
            });
            record(&mut v, "weight_identically_one".into(), witness);
        }
        TranslateMode::Parseval => {
            let mut witness = None;
            for (b, x) in w.cells() {
                let above = x.cmp_real(&one)? == std::cmp::Ordering::Greater;
                let below = x.real_sign()? == std::cmp::Ordering::Less;
                if above || below {
                    witness = Some((Witness::ball(&f, b), format!("w = {x}")));
                    break;
                }
            }
            record(&mut v, "weight_between_zero_and_one".into(), witness);
        }
    }
    v.fact("weight_is_indicator", w.is_indicator());
    Ok(v)
}

/// `P_j(ξ) = Σ_k Σ_i η̂_i(𝔭^(-j)(ξ + u(k))) conj η̂_i(ξ + u(k))` on 𝒪.
pub fn periodized_correlation(tuple: &[StepFunction], j: i32) -> Result<StepFunction> {
    let f = common_field(tuple)?;
    let mut terms = Vec::with_capacity(tuple.len());
    for eta in tuple {
        terms.push(eta.dilate(j).mul(&eta.conj())?);
    }
    let refs: Vec<&StepFunction> = terms.iter().collect();
    StepFunction::sum(&f, &refs)?.fold_sum()
}

/// Largest `j` for which `P_j` needs checking. Without a cell at 0 every
/// summand vanishes once `j` exceeds the spread of support valuations; with one,
/// `P_j` is nonzero near 0 for every `j ≥ max(1, R)`, so that `j` is included.
fn correlation_j_max(tuple: &[StepFunction]) -> i32 {
    let mut vmin = i32::MAX;
    let mut vtop = i32::MIN;
    let mut zero_ball = false;
    for eta in tuple {
        for (b, _) in eta.cells() {
            let v = b.center().valuation().unwrap_or(b.scale());
            vmin = vmin.min(v);
            match b.center().valuation() {
                Some(v) => vtop = vtop.max(v),
                None => {
                    zero_ball = true;
                    vtop = vtop.max(b.scale());
                }
            }
        }
    }
    if vmin == i32::MAX {
        return 0;
    }
    let spread = (vtop - vmin).max(0);
    if zero_ball {
        spread.max(-vmin).max(1)
    } else {
        spread
    }
}

/// General super-wavelet conditions (i) and (ii) per component and (iii) jointly.
pub fn verify_super_general(tuple: &[StepFunction]) -> Result<Verdict> {
    let f = common_field(tuple)?;
    let mut v = Verdict::new();
    for (i, eta) in tuple.iter().enumerate() {
        let mut sub = Verdict::new();
        record(
            &mut sub,
            "dilation_sum_is_one".into(),
            dilation_sum_witness(&f, &[eta])?,
        );
        let (w, r) = cross_correlation_witness(&f, &[eta])?;
        record(&mut sub, "cross_correlation_vanishes".into(), w);
        if r > 0 {
            sub.bounds.s_max = Some((f.q() as u64).pow(r as u32) - 1);
        }
        v.absorb(&format!("eta{}", i + 1), sub);
    }
    let j_max = correlation_j_max(tuple);
    let one = StepFunction::indicator(&ClopenSet::integers(&f));
    let mut witness = None;
    for j in 0..=j_max {
        let p = periodized_correlation(tuple, j)?;
        let diff = if j == 0 { p.sub(&one)? } else { p.clone() };
        if let Some((b, _)) = diff.cells().first() {
            witness = Some((
                Witness::ball(&f, b),
                format!("j = {j}, value {}", p.eval(b.center())),
            ));
            break;
        }
    }
    record(&mut v, "joint.periodized_correlation_is_delta".into(), witness);
    v.bounds.j_max = Some(j_max as i64);
    v.fact("length", tuple.len());
    Ok(v)
}

/// Equality of the periodised correlations of two tuples for all relevant `n ≥ 0`.
pub fn equivalent_superwavelets(a: &[StepFunction], b: &[StepFunction]) -> Result<Verdict> {
    let f = common_field(a)?;
    ensure_same(&f, &common_field(b)?)?;
    let n_max = correlation_j_max(a).max(correlation_j_max(b));
    let mut v = Verdict::new();
    let mut witness = None;
    for n in 0..=n_max {
        let d = periodized_correlation(a, n)?.sub(&periodized_correlation(b, n)?)?;
        if let Some((ball, _)) = d.cells().first() {
            witness = Some((Witness::ball(&f, ball), format!("n = {n}")));
            break;
        }
    }
    record(&mut v, "periodized_correlations_agree".into(), witness);
    v.bounds.j_max = Some(n_max as i64);
    Ok(v)
}
