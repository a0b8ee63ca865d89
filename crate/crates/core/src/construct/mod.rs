//! Builders for the standard wavelet-set families, scaling sets, and an
//! exact-cover search completing a packing family to a super-wavelet.

mod dlx;
mod solver;

pub use solver::{solve_complement, SolveLimits, SolveOutcome, SolveRequest};

use num_rational::BigRational;

use crate::clopen::ClopenSet;
use crate::error::{LfwError, Result};
use crate::gfq::Field;
use crate::lfield::u_of_index;
use crate::verify::check_dilation_tiling;

/// `{𝒪 + u(i)}` for `1 ≤ i < q`.
pub fn shannon_multiwavelet(field: &Field) -> Vec<ClopenSet> {
    (1..field.q() as u64)
        .map(|i| ClopenSet::integers(field).translate(&u_of_index(field.q(), i)))
        .collect()
}

/// `𝔭^m 𝒪*`.
pub fn annulus_wavelet(field: &Field, m: i32) -> Result<ClopenSet> {
    if m < 1 {
        return Err(LfwError::Precondition(format!("annulus needs m >= 1, got {m}")));
    }
    Ok(ClopenSet::shell(field, m))
}

/// `{𝔭^m (𝒪 + u(i))}` for `1 ≤ i < q`.
pub fn scaled_shannon(field: &Field, m: i32) -> Result<Vec<ClopenSet>> {
    if m < 1 {
        return Err(LfwError::Precondition(format!("scaled Shannon needs m >= 1, got {m}")));
    }
    Ok(shannon_multiwavelet(field).iter().map(|w| w.scale(m)).collect())
}

/// `(𝔭^1 𝒪*, ..., 𝔭^n 𝒪*)`.
pub fn super_47(field: &Field, n: i32) -> Result<Vec<ClopenSet>> {
    if n < 1 {
        return Err(LfwError::Precondition(format!("length must be >= 1, got {n}")));
    }
    Ok((1..=n).map(|i| ClopenSet::shell(field, i)).collect())
}

/// The packing part `(𝔭^0 𝒪*, ..., 𝔭^(n-2) 𝒪*)` shared by both length-`n` families.
pub fn ex46_existing(field: &Field, n: i32) -> Result<Vec<ClopenSet>> {
    if n < 2 {
        return Err(LfwError::Precondition(format!("length must be >= 2, got {n}")));
    }
    Ok((1..n).map(|i| ClopenSet::shell(field, i - 1)).collect())
}

/// The fold target for the last component as printed: `𝔭^(n-2) 𝒪`.
pub fn ex46_printed_target(field: &Field, n: i32) -> ClopenSet {
    ClopenSet::ideal(field, n - 2)
}

/// The fold target that complements the packing part: `𝔭^(n-1) 𝒪`.
pub fn ex46_corrected_target(field: &Field, n: i32) -> ClopenSet {
    ClopenSet::ideal(field, n - 1)
}

/// The printed family with `𝔭^(n-2) 𝒪 + u(1)` in the last slot; this set folds
/// bijectively onto the printed target.
pub fn ex46_printed(field: &Field, n: i32) -> Result<Vec<ClopenSet>> {
    let mut fam = ex46_existing(field, n)?;
    fam.push(ex46_printed_target(field, n).translate(&u_of_index(field.q(), 1)));
    Ok(fam)
}

/// Result of [`scaling_set`].
#[derive(Clone, Debug)]
pub struct ScalingSet {
    pub set: ClopenSet,
    pub certified: bool,
    /// `∪_{j=1}^N 𝔭^j W`.
    pub partial: ClopenSet,
}

/// `S = ∪_{j ≥ 1} 𝔭^j W`: the first `depth` dilates exactly, the rest as the
/// ball around 0 that must contain them, accepted when the measures agree.
pub fn scaling_set(w: &ClopenSet, depth: i32) -> Result<ScalingSet> {
    if depth < 1 {
        return Err(LfwError::Precondition(format!("depth must be >= 1, got {depth}")));
    }
    let v = check_dilation_tiling(w);
    if !v.passed {
        return Err(LfwError::Precondition(format!(
            "set does not tile by dilations: {}",
            v.failed_checks()
                .next()
                .and_then(|c| c.witness.as_ref())
                .map(|w| w.to_string())
                .unwrap_or_default()
        )));
    }
    let f = w.field();
    let q = f.q();
    let mut partial = ClopenSet::empty(f);
    for j in 1..=depth {
        partial = partial.union(&w.scale(j))?;
    }
    let vmin = w.min_valuation().expect("nonempty");
    let tail = ClopenSet::ideal(f, depth + 1 + vmin);
    let expect = w.measure() / BigRational::from_integer((q - 1).into()) - partial.measure();
    let certified = tail.is_disjoint(&partial)? && tail.measure() == expect;
    let set = if certified {
        partial.union(&tail)?
    } else {
        partial.clone()
    };
    Ok(ScalingSet {
        set,
        certified,
        partial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clopen::q_pow_neg;
    use crate::gfq::FieldConfig;
    use crate::verify::{
        joint_fold_measure, verify_multiwavelet_set, verify_pf_multiwavelet_set,
        verify_superwavelet, SuperMode,
    };
    use num_traits::One;

    fn field(p: u32, c: u32) -> Field {
        FieldConfig::new(p, c, None).unwrap()
    }

    fn union(fam: &[ClopenSet]) -> ClopenSet {
        fam.iter().skip(1).fold(fam[0].clone(), |a, b| a.union(b).unwrap())
    }

    #[test]
    fn shannon_examples() {
        let f2 = field(2, 1);
        assert_eq!(shannon_multiwavelet(&f2).len(), 1);
        let f3 = field(3, 1);
        let fam = shannon_multiwavelet(&f3);
        assert_eq!(fam.len(), 2);
        assert!(fam.iter().all(|w| w.measure().is_one()));
        assert!(verify_multiwavelet_set(&shannon_multiwavelet(&field(2, 2))).unwrap().passed);
        let s = scaling_set(&union(&fam), 1).unwrap();
        assert!(s.certified);
        assert_eq!(s.set, ClopenSet::integers(&f3));
    }

    #[test]
    fn annulus_examples() {
        let f2 = field(2, 1);
        let a = annulus_wavelet(&f2, 1).unwrap();
        assert_eq!(a.balls().len(), 1);
        assert_eq!(a.balls()[0].scale(), 2);
        assert_eq!(a.measure(), BigRational::new(1.into(), 4.into()));
        assert!(annulus_wavelet(&f2, 0).is_err());
        for m in 1..4 {
            let a = annulus_wavelet(&f2, m).unwrap();
            assert!(verify_pf_multiwavelet_set(std::slice::from_ref(&a)).unwrap().passed);
            assert!(!verify_multiwavelet_set(std::slice::from_ref(&a)).unwrap().passed);
            let s = scaling_set(&a, 2).unwrap();
            assert!(s.certified);
            assert_eq!(s.set, ClopenSet::ideal(&f2, m + 1));
        }
    }

    #[test]
    fn scaled_shannon_examples() {
        let f = field(3, 1);
        for m in 1..3 {
            let fam = scaled_shannon(&f, m).unwrap();
            assert_eq!(fam.len(), 2);
            assert!(fam.iter().all(|w| w.measure() == q_pow_neg(3, m)));
            assert!(verify_pf_multiwavelet_set(&fam).unwrap().passed);
            assert!(!verify_multiwavelet_set(&fam).unwrap().passed);
            let s = scaling_set(&union(&fam), 3).unwrap();
            assert!(s.certified);
            assert_eq!(s.set.measure(), q_pow_neg(3, m));
        }
    }

    #[test]
    fn super47_examples() {
        let f = field(2, 1);
        assert_eq!(super_47(&f, 1).unwrap(), vec![ClopenSet::shell(&f, 1)]);
        let fam = super_47(&f, 3).unwrap();
        assert_eq!(joint_fold_measure(&fam), BigRational::new(7.into(), 16.into()));
        assert!(verify_superwavelet(&fam, SuperMode::Parseval).unwrap().passed);
        assert!(!verify_superwavelet(&fam, SuperMode::Orthonormal).unwrap().passed);
    }

    #[test]
    fn ex46_printed_measure() {
        for p in [2u32, 3] {
            let f = field(p, 1);
            for n in 2..4 {
                let fam = ex46_printed(&f, n).unwrap();
                let fo = fam.last().unwrap().fold();
                assert!(fo.overlap.is_empty());
                assert_eq!(fam.last().unwrap().fold_image(), ex46_printed_target(&f, n));
                let expect = BigRational::one() + q_pow_neg(p, n - 1) * BigRational::from_integer((p - 1).into());
                assert_eq!(joint_fold_measure(&fam), expect);
            }
        }
    }

    #[test]
    fn scaling_set_rejects_non_tiling() {
        let f = field(2, 1);
        assert!(scaling_set(&ClopenSet::integers(&f), 2).is_err());
        // too shallow to certify a wide set
        let wide = ClopenSet::shell(&f, 0).union(&ClopenSet::shell(&f, 1)).unwrap();
        assert!(scaling_set(&wide, 1).is_err());
    }
}
