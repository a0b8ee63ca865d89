use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::clopen::{q_pow_neg, ExtRational};
use crate::error::{LfwError, Result};
use crate::lfield::format_laurent;
use crate::stepfn::StepFunction;

/// An integral together with the largest `m` it does not rule out
/// (`None` means no `m` is ruled out).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub integral: ExtRational,
    pub max_m: Option<BigInt>,
}

/// `∫_𝒪 g(ξ)/|ξ| dξ` for a step function `g` on 𝒪 with rational values.
fn weighted_inv_norm(g: &StepFunction) -> Result<ExtRational> {
    let q = g.field().q();
    let mut acc = BigRational::zero();
    for (b, v) in g.cells() {
        let r = v.as_rational().ok_or_else(|| {
            LfwError::Precondition(format!("weight value {v} is not rational"))
        })?;
        match b.center().valuation() {
            Some(s) => acc += r * q_pow_neg(q, b.scale() - s),
            None => return Ok(ExtRational::Infinite),
        }
    }
    Ok(ExtRational::Finite(acc))
}

fn report(integral: ExtRational, q: u32) -> BoundReport {
    let max_m = match &integral {
        ExtRational::Infinite => None,
        ExtRational::Finite(i) => {
            let x = i * BigRational::new(q.into(), (q - 1).into());
            Some(x.floor().to_integer())
        }
    };
    BoundReport { integral, max_m }
}

/// `I = ∫_𝒪 w(ξ)/|ξ|`; an `m`-decomposable Parseval frame wavelet needs
/// `I ≥ m(q−1)/q`.
pub fn decomposability_bound(psi: &StepFunction) -> Result<BoundReport> {
    let w = psi.weight()?;
    Ok(report(weighted_inv_norm(&w)?, psi.field().q()))
}

/// `J = ∫_𝒪 (1 − w(ξ))/|ξ|`; extendability to length `m + 1` needs `J ≥ m(q−1)/q`.
pub fn extendability_bound(psi: &StepFunction) -> Result<BoundReport> {
    let f = psi.field();
    let w = psi.weight()?;
    for (b, v) in w.cells() {
        let r = v.as_rational().ok_or_else(|| {
            LfwError::Precondition(format!("weight value {v} is not rational"))
        })?;
        if r > BigRational::from_integer(1.into()) || r.is_negative() {
            return Err(LfwError::Precondition(format!(
                "weight {r} exceeds 1 on ball({}, {})",
                format_laurent(f, b.center()),
                b.scale()
            )));
        }
    }
    let one = StepFunction::indicator(&crate::clopen::ClopenSet::integers(f));
    let complement = one.sub(&w)?;
    Ok(report(weighted_inv_norm(&complement)?, f.q()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clopen::{unit_translate, ClopenSet};
    use crate::cyclo::CycloScalar;
    use crate::gfq::FieldConfig;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn units_bounds() {
        for p in [2u32, 3, 5] {
            let f = FieldConfig::new(p, 1, None).unwrap();
            let psi = StepFunction::indicator(&ClopenSet::units(&f));
            let d = decomposability_bound(&psi).unwrap();
            assert_eq!(d.integral, ExtRational::Finite(BigRational::new((p - 1).into(), p.into())));
            assert_eq!(d.max_m, Some(BigInt::from(1)));
            assert_eq!(extendability_bound(&psi).unwrap().integral, ExtRational::Infinite);
        }
    }

    #[test]
    fn degenerate_bounds() {
        let f = FieldConfig::new(2, 1, None).unwrap();
        let d = decomposability_bound(&StepFunction::zero(&f)).unwrap();
        assert_eq!(d.integral, ExtRational::Finite(BigRational::zero()));
        assert_eq!(d.max_m, Some(BigInt::from(0)));
        let o = StepFunction::indicator(&ClopenSet::integers(&f));
        assert_eq!(decomposability_bound(&o).unwrap().integral, ExtRational::Infinite);
        let shannon = StepFunction::indicator(&unit_translate(&f, 1));
        let e = extendability_bound(&shannon).unwrap();
        assert_eq!(e.integral, ExtRational::Finite(BigRational::zero()));
        assert_eq!(e.max_m, Some(BigInt::from(0)));
        let shifted = StepFunction::indicator(&ClopenSet::shell(&f, 1).translate(&crate::lfield::u_of_index(2, 1)));
        assert_eq!(extendability_bound(&shifted).unwrap().integral, ExtRational::Infinite);
        let two = StepFunction::indicator(&ClopenSet::integers(&f).union(&unit_translate(&f, 1)).unwrap());
        assert!(matches!(extendability_bound(&two), Err(LfwError::Precondition(_))));
    }

    #[test]
    fn bounds_complement_and_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for p in [2u32, 3] {
            let f = FieldConfig::new(p, 1, None).unwrap();
            for _ in 0..100 {
                let mut pieces = Vec::new();
                for b in ClopenSet::units(&f).refined(2) {
                    if rng.gen_bool(0.5) {
                        pieces.push(b.scaled(rng.gen_range(0..3)));
                    }
                }
                let small = ClopenSet::from_balls(&f, pieces);
                let extra = ClopenSet::shell(&f, rng.gen_range(0..4));
                let big = small.union(&extra).unwrap();
                let (a, b) = (StepFunction::indicator(&small), StepFunction::indicator(&big));
                let ia = decomposability_bound(&a).unwrap().integral;
                let ib = decomposability_bound(&b).unwrap().integral;
                match (&ia, &ib) {
                    (ExtRational::Finite(x), ExtRational::Finite(y)) => assert!(x <= y),
                    (ExtRational::Infinite, i) => assert_eq!(*i, ExtRational::Infinite),
                    _ => {}
                }
                if let Ok(j) = extendability_bound(&a) {
                    assert!(ia == ExtRational::Infinite || j.integral == ExtRational::Infinite);
                }
                let half = a.scale_values(&CycloScalar::from_rational(p, p, BigRational::new(1.into(), 2.into())));
                if let Ok(j) = extendability_bound(&half) {
                    assert_eq!(j.integral, ExtRational::Infinite);
                }
            }
        }
    }
}
