//! Brute-force evaluation of affine-system inner products on the frequency side.
//!
//! Every quantity is a finite sum over cells of step functions, evaluated in
//! `Z[ζ_p]` with an explicit denominator. The only infinite sum, the tail of
//! coarse dilates against a spectrum that is constant near 0, is geometric and is
//! summed in closed form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::OnceLock;

use crate::clopen::{q_pow_neg, Ball, ClopenSet};
use crate::cyclo::CycloScalar;
use crate::error::{LfwError, Result};
use crate::gfq::{ensure_same, Field, FieldConfig, Fq};
use crate::lfield::{format_laurent, u_of_index, Laurent};
use crate::stepfn::StepFunction;

/// Spectra supported in `𝔭^(-R) 𝒪` and constant on cosets of `𝔭^S 𝒪`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    pub r: i32,
    pub s: i32,
}

impl FiniteModel {
    pub fn new(r: i32, s: i32) -> Result<Self> {
        if r < 0 || s < 0 {
            return Err(LfwError::Precondition(format!("window R={r}, S={s} must be non-negative")));
        }
        Ok(FiniteModel { r, s })
    }

    pub fn dimension(&self, q: u32) -> BigInt {
        BigInt::from(q).pow((self.r + self.s) as u32)
    }

    /// The scale-`S` balls tiling `𝔭^(-R) 𝒪`.
    pub fn mesh(&self, field: &Field) -> Vec<Ball> {
        Ball::ideal(-self.r).refine_to(field.q(), self.s)
    }

    pub fn check(&self, f: &StepFunction) -> Result<()> {
        let fc = f.field();
        for (b, _) in f.cells() {
            let inside = b.scale() >= -self.r
                && b.center().valuation().is_none_or(|v| v >= -self.r);
            if !inside || b.scale() > self.s {
                return Err(LfwError::WindowEscape(format!(
                    "cell {} outside R={}, S={}",
                    b.format(fc),
                    self.r,
                    self.s
                )));
            }
        }
        Ok(())
    }

    /// A function with small random values `a + ζ^k` on up to eight disjoint
    /// balls of random scale inside the window.
    pub fn random_function(&self, field: &Field, rng: &mut ChaCha8Rng) -> StepFunction {
        let (p, q) = (field.p(), field.q());
        let mut cells: Vec<(Ball, CycloScalar)> = Vec::new();
        for _ in 0..rng.gen_range(1..=8) {
            let t = rng.gen_range(-self.r..=self.s);
            let digits: Vec<u8> = (-self.r..t).map(|_| rng.gen_range(0..q) as u8).collect();
            let b = Ball::new(Laurent::from_digits(-self.r, digits), t);
            if cells.iter().any(|(c, _)| c.intersects(&b)) {
                continue;
            }
            let a = rng.gen_range(-3i64..=3);
            let k = rng.gen_range(0..p as i64);
            let v = CycloScalar::from_int(p, q, a)
                .try_add(&CycloScalar::zeta_pow(p, q, k))
                .expect("grade 0");
            if !v.is_zero() {
                cells.push((b, v));
            }
        }
        StepFunction::from_cells(field, cells).expect("mesh cells are disjoint")
    }
}

/// The shared thread pool, sized by `LFW_THREADS` when set.
pub fn thread_pool() -> Result<&'static rayon::ThreadPool> {
    static POOL: OnceLock<std::result::Result<rayon::ThreadPool, String>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Ok(v) = std::env::var("LFW_THREADS") {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| format!("LFW_THREADS={v:?} is not a count"))?;
            b = b.num_threads(n);
        }
        b.build().map_err(|e| e.to_string())
    })
    .as_ref()
    .map_err(|e| LfwError::Precondition(e.clone()))
}

/// `∫_B χ(yξ) dξ` by the vanishing rule: zero unless `χ(y·)` is trivial on the ball.
fn cell_char_integral(f: &FieldConfig, b: &Ball, y: &Laurent) -> Option<(u32, i32)> {
    match y.valuation() {
        Some(v) if v + b.scale() < 0 => None,
        _ => Some((y.mul(f, b.center()).char_exponent(f), b.scale())),
    }
}

/// `∫ g(ξ) χ(yξ) dξ`, cell by cell.
pub fn char_integral(g: &StepFunction, y: &Laurent) -> Result<CycloScalar> {
    let f = g.field();
    let mut acc = CycloScalar::zero(f.p(), f.q());
    for (b, v) in g.cells() {
        if let Some((e, m)) = cell_char_integral(f, b, y) {
            let term = v.mul(&CycloScalar::zeta_pow(f.p(), f.q(), e as i64)).scale(&q_pow_neg(f.q(), m));
            acc = acc.try_add(&term)?;
        }
    }
    Ok(acc)
}

/// Same integral, refining every cell until the character is constant on each
/// piece and summing characters; no vanishing rule is used.
pub fn char_integral_refined(g: &StepFunction, y: &Laurent) -> Result<CycloScalar> {
    let f = g.field();
    let need = y.valuation().map_or(i32::MIN, |v| -v);
    let mut acc = CycloScalar::zero(f.p(), f.q());
    for (b, v) in g.cells() {
        let t = b.scale().max(need);
        let mut counts = vec![0i64; f.p() as usize];
        for piece in b.refine_to(f.q(), t) {
            counts[y.mul(f, piece.center()).char_exponent(f) as usize] += 1;
        }
        let mut s = CycloScalar::zero(f.p(), f.q());
        for (e, c) in counts.into_iter().enumerate() {
            if c != 0 {
                s = s.try_add(&CycloScalar::zeta_pow(f.p(), f.q(), e as i64).scale(&BigRational::from_integer(c.into())))?;
            }
        }
        acc = acc.try_add(&v.mul(&s).scale(&q_pow_neg(f.q(), t)))?;
    }
    Ok(acc)
}

/// `⟨f, D^j T^k ψ⟩ = q^(j/2) ∫ f̂(𝔭^(-j) η) χ(u(k) η) conj ψ̂(η) dη`.
pub fn affine_coef(model: &FiniteModel, f_hat: &StepFunction, psi_hat: &StepFunction, j: i32, k: u64) -> Result<CycloScalar> {
    ensure_same(f_hat.field(), psi_hat.field())?;
    model.check(f_hat)?;
    model.check(psi_hat)?;
    let g = f_hat.dilate(j).mul(&psi_hat.conj())?;
    let u = u_of_index(f_hat.field().q(), k);
    Ok(char_integral(&g, &u)?.mul_qhalf(j))
}

/// `Σ_i ⟨D^j T^k η_i, D^j' T^k' η_i⟩`.
pub fn gram_entry(model: &FiniteModel, tuple: &[StepFunction], a: (i32, u64), b: (i32, u64)) -> Result<CycloScalar> {
    let Some(first) = tuple.first() else {
        return Err(LfwError::Precondition("empty tuple".into()));
    };
    let f = first.field().clone();
    let q = f.q();
    let (j, k) = a;
    let (j2, k2) = b;
    // (D^j T^k η)^(ξ) = q^(-j/2) χ(-u(k) 𝔭^j ξ) η̂(𝔭^j ξ)
    let y = u_of_index(q, k2).shift(j2).sub(&f, &u_of_index(q, k).shift(j));
    let mut acc = CycloScalar::zero(f.p(), q);
    for eta in tuple {
        ensure_same(&f, eta.field())?;
        model.check(eta)?;
        let h = eta.dilate(-j).mul(&eta.dilate(-j2).conj())?;
        acc = acc.try_add(&char_integral(&h, &y)?)?;
    }
    Ok(acc.mul_qhalf(-j - j2))
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128()
        .ok_or_else(|| LfwError::ResourceCap("coefficient exceeds 128-bit range".into()))
}

fn ovf() -> LfwError {
    LfwError::ResourceCap("128-bit overflow in coefficient sum".into())
}

/// `Σ_k |∫ g(η) χ(u(k) η) dη|²` over all `k ≥ 0`, and the bound `K` with every
/// term for `k ≥ K` vanishing.
fn k_energy(g: &StepFunction) -> Result<(CycloScalar, u64)> {
    let f = g.field();
    let (p, q) = (f.p() as usize, f.q());
    if g.is_zero() {
        return Ok((CycloScalar::zero(p as u32, q), 1));
    }
    let grade = g
        .uniform_grade()
        .ok_or_else(|| LfwError::Precondition("step values mix q-grades".into()))?;
    let sigma = g.cells().iter().map(|(b, _)| b.scale()).max().expect("nonempty").max(0);
    let bound = (q as u64)
        .checked_pow(sigma as u32)
        .ok_or_else(|| LfwError::ResourceCap(format!("q^{sigma} translates")))?;
    // common denominator for value · q^(-m)
    let forms: Vec<(Vec<BigInt>, BigInt)> = g
        .cells()
        .iter()
        .map(|(b, v)| {
            let (num, den) = v.integer_form();
            let den = den * BigInt::from(q).pow(b.scale().max(0) as u32);
            let num = if b.scale() < 0 {
                let m = BigInt::from(q).pow((-b.scale()) as u32);
                num.into_iter().map(|x| x * &m).collect()
            } else {
                num
            };
            (num, den)
        })
        .collect();
    let mut den = BigInt::from(1);
    for (_, d) in &forms {
        den = num_integer::Integer::lcm(&den, d);
    }
    let weights: Vec<Vec<i128>> = forms
        .iter()
        .map(|(num, d)| {
            let m = &den / d;
            num.iter().map(|x| to_i128(&(x * &m))).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let scales: Vec<i32> = g.cells().iter().map(|(b, _)| b.scale()).collect();
    // χ(u(k) c) = ζ^Tr(Σ_i b_i c_i) with b_i the base-q digits of k and c_i the
    // digit of c at exponent i
    let qs = q as usize;
    let mut tr_mul = vec![0u8; qs * qs];
    for a in 0..qs {
        for b in 0..qs {
            tr_mul[a * qs + b] = f.trace(f.mul(Fq(a as u8), Fq(b as u8))) as u8;
        }
    }
    let width = sigma as usize;
    let digits: Vec<Vec<u8>> = g
        .cells()
        .iter()
        .map(|(b, _)| (0..width).map(|i| b.center().digit(i as i32).0).collect())
        .collect();
    let mut kd = vec![0u8; width];
    let mut len = 0usize;
    let mut total = vec![0i128; p];
    let mut x = vec![0i128; p];
    for k in 0..bound {
        if k > 0 {
            let mut i = 0;
            while kd[i] as usize == qs - 1 {
                kd[i] = 0;
                i += 1;
            }
            kd[i] += 1;
            len = len.max(i + 1);
        }
        x.iter_mut().for_each(|c| *c = 0);
        let mut any = false;
        for ((cd, w), &m) in digits.iter().zip(&weights).zip(&scales) {
            if (m.max(0) as usize) < len {
                continue;
            }
            any = true;
            let e = (0..len).fold(0usize, |acc, i| acc + tr_mul[kd[i] as usize * qs + cd[i] as usize] as usize) % p;
            for (a, wa) in w.iter().enumerate() {
                let t = &mut x[(a + e) % p];
                *t = t.checked_add(*wa).ok_or_else(ovf)?;
            }
        }
        if !any {
            continue;
        }
        for a in 0..p {
            if x[a] == 0 {
                continue;
            }
            for b in 0..p {
                let prod = x[a].checked_mul(x[b]).ok_or_else(ovf)?;
                let t = &mut total[(a + p - b) % p];
                *t = t.checked_add(prod).ok_or_else(ovf)?;
            }
        }
    }
    let den2 = &den * &den;
    let full: Vec<BigRational> = total
        .into_iter()
        .map(|c| BigRational::new(BigInt::from(c), den2.clone()))
        .collect();
    Ok((CycloScalar::from_full(p as u32, q, full, 2 * grade), bound))
}

/// `∫ |f̂|²`.
pub fn norm_sq(f_hat: &StepFunction) -> Result<CycloScalar> {
    char_integral(&f_hat.abs_sq(), &Laurent::zero())
}

/// Dilations handled for one system of the residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSpan {
    /// Explicitly summed dilations, inclusive; `None` when none contribute.
    pub explicit: Option<(i32, i32)>,
    /// Dilations `j ≤ t` summed in closed form, when some `f̂_i` is nonzero at 0.
    pub tail_from: Option<i32>,
    /// Largest translate bound `q^σ` used.
    pub k_bound: u64,
}

#[derive(Clone, Debug)]
pub struct ParsevalReport {
    pub norm_sq: CycloScalar,
    pub coef_sum: CycloScalar,
    pub residual: CycloScalar,
    pub spans: Vec<ComponentSpan>,
    /// Number of coefficients past the translate bound evaluated (all zero).
    pub spot_checks: usize,
}

impl ParsevalReport {
    pub fn is_zero(&self) -> bool {
        self.residual.is_zero()
    }
}

fn value_at_zero(f: &StepFunction) -> Option<(CycloScalar, i32)> {
    f.cells()
        .iter()
        .find(|(b, _)| b.contains_zero())
        .map(|(b, v)| (v.clone(), b.scale()))
}

/// Spot-checks: a few `k` in `[K, qK)` evaluated by cell refinement must give 0.
fn spot_check(g: &StepFunction, bound: u64) -> Result<usize> {
    let q = g.field().q() as u64;
    let hi = bound * q;
    let mut ks = vec![bound, bound + (hi - bound) / 2, hi - 1];
    ks.dedup();
    for &k in &ks {
        let v = char_integral_refined(g, &u_of_index(q as u32, k))?;
        if !v.is_zero() {
            return Err(LfwError::Runtime(format!("translate bound violated at k = {k}: {v}")));
        }
    }
    Ok(ks.len())
}

/// One coefficient family `c_(j,k) = Σ_i ⟨f_i, D^j T^k ψ_i⟩`.
type System<'a> = Vec<(&'a StepFunction, &'a StepFunction)>;

/// `Σ_i f̂_i(𝔭^(-j)·) conj ψ̂_i`.
fn system_integrand(field: &Field, sys: &System<'_>, j: i32) -> Result<StepFunction> {
    let parts: Vec<StepFunction> = sys
        .iter()
        .map(|(f, psi)| f.dilate(j).mul(&psi.conj()))
        .collect::<Result<_>>()?;
    let refs: Vec<&StepFunction> = parts.iter().collect();
    StepFunction::sum(field, &refs)
}

/// Explicit range and tail threshold for one system.
fn system_span(sys: &System<'_>) -> (Option<i32>, Option<(i32, i32)>) {
    let mut tail: Option<i32> = None;
    let mut j_hi: Option<i32> = None;
    let mut any_zero_ball = false;
    for (f, psi) in sys {
        if f.is_zero() || psi.is_zero() {
            continue;
        }
        let supp = psi.support();
        let (lo, hi) = (supp.min_valuation().expect("bounded"), supp.max_valuation().expect("bounded"));
        let zero = value_at_zero(f);
        let rest = ClopenSet::from_balls(
            f.field(),
            f.cells().iter().filter(|(b, _)| !b.contains_zero()).map(|(b, _)| b.clone()).collect(),
        );
        // below t_i, f_i(𝔭^(-j)·) is constant on supp ψ_i
        let t_i = match &zero {
            Some((_, a)) => {
                any_zero_ball = true;
                lo - a
            }
            None => lo - rest.max_valuation().expect("nonzero") - 1,
        };
        let reach = rest
            .min_valuation()
            .into_iter()
            .chain(zero.as_ref().map(|(_, a)| *a))
            .min()
            .expect("nonzero");
        tail = Some(tail.map_or(t_i, |t| t.min(t_i)));
        j_hi = Some(j_hi.map_or(hi - reach, |h| h.max(hi - reach)));
    }
    match (tail, j_hi) {
        (Some(t), Some(h)) => {
            let explicit = (t < h).then_some((t + 1, h));
            (any_zero_ball.then_some(t), explicit)
        }
        _ => (None, None),
    }
}

fn residual_of_systems(model: &FiniteModel, field: &Field, systems: &[System<'_>], fs: &[&StepFunction]) -> Result<ParsevalReport> {
    let (p, q) = (field.p(), field.q());
    for f in fs {
        ensure_same(field, f.field())?;
        model.check(f)?;
    }
    let grade = fs.iter().find(|f| !f.is_zero()).map(|f| f.uniform_grade());
    if let Some(g) = grade {
        let g = g.ok_or_else(|| LfwError::Precondition("step values mix q-grades".into()))?;
        if fs.iter().any(|f| !f.is_zero() && f.uniform_grade() != Some(g)) {
            return Err(LfwError::Precondition("inputs have different q-grades".into()));
        }
    }
    for sys in systems {
        for (_, psi) in sys {
            ensure_same(field, psi.field())?;
            model.check(psi)?;
            if let Some((_, m)) = value_at_zero(psi) {
                return Err(LfwError::Precondition(format!(
                    "wavelet spectrum is nonzero on the ball {} around 0",
                    Ball::ideal(m).format(field)
                )));
            }
        }
    }
    let mut norm = CycloScalar::zero(p, q);
    for f in fs {
        norm = norm.try_add(&norm_sq(f)?)?;
    }

    let mut sum = CycloScalar::zero(p, q);
    let mut spot_checks = 0;
    let mut spans = Vec::new();
    let mut tasks: Vec<(usize, i32)> = Vec::new();
    for (i, sys) in systems.iter().enumerate() {
        let (tail, explicit) = system_span(sys);
        let mut span = ComponentSpan { explicit, tail_from: tail, k_bound: 1 };
        if let Some(t) = tail {
            // every f_i is constant on the relevant region: the integrand is
            // Σ_i f̂_i(0) conj ψ̂_i for all j ≤ t
            let mut parts = Vec::new();
            for (f, psi) in sys {
                if let Some((c0, _)) = value_at_zero(f) {
                    parts.push(psi.conj().scale_values(&c0));
                }
            }
            let refs: Vec<&StepFunction> = parts.iter().collect();
            let g = StepFunction::sum(field, &refs)?;
            let (e, bound) = k_energy(&g)?;
            if !g.is_zero() {
                spot_checks += spot_check(&g, bound)?;
            }
            let geo = BigRational::new(q.into(), (q - 1).into());
            sum = sum.try_add(&e.mul_qhalf(2 * t).scale(&geo))?;
            span.k_bound = bound;
        }
        if let Some((lo, hi)) = explicit {
            tasks.extend((lo..=hi).map(|j| (i, j)));
        }
        spans.push(span);
    }

    let pool = thread_pool()?;
    let results: Vec<Result<(CycloScalar, u64, usize)>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(i, j)| {
                let g = system_integrand(field, &systems[i], j)?;
                let (e, bound) = k_energy(&g)?;
                let checks = if g.is_zero() { 0 } else { spot_check(&g, bound)? };
                Ok((e.mul_qhalf(2 * j), bound, checks))
            })
            .collect()
    });
    for (&(i, _), r) in tasks.iter().zip(results) {
        let (e, bound, c) = r?;
        sum = sum.try_add(&e)?;
        spans[i].k_bound = spans[i].k_bound.max(bound);
        spot_checks += c;
    }
    let residual = norm.try_sub(&sum)?;
    Ok(ParsevalReport {
        norm_sq: norm,
        coef_sum: sum,
        residual,
        spans,
        spot_checks,
    })
}

/// `‖f‖² − Σ_m Σ_(j,k) |⟨f, D^j T^k ψ_m⟩|²`.
pub fn parseval_residual(model: &FiniteModel, psis: &[StepFunction], f_hat: &StepFunction) -> Result<ParsevalReport> {
    let systems: Vec<System<'_>> = psis.iter().map(|psi| vec![(f_hat, psi)]).collect();
    residual_of_systems(model, f_hat.field(), &systems, &[f_hat])
}

/// `Σ_i ‖f_i‖² − Σ_(j,k) |Σ_i ⟨f_i, D^j T^k η_i⟩|²` on the direct sum.
pub fn super_parseval_residual(model: &FiniteModel, etas: &[StepFunction], fs: &[StepFunction]) -> Result<ParsevalReport> {
    if etas.len() != fs.len() || etas.is_empty() {
        return Err(LfwError::Precondition(format!(
            "tuple lengths {} and {} differ or are zero",
            etas.len(),
            fs.len()
        )));
    }
    let sys: System<'_> = fs.iter().zip(etas).collect();
    let refs: Vec<&StepFunction> = fs.iter().collect();
    residual_of_systems(model, etas[0].field(), &[sys], &refs)
}

/// Outcome of [`parseval_trials`].
#[derive(Clone, Debug)]
pub struct TrialReport {
    pub deltas: usize,
    pub random: usize,
    pub all_zero: bool,
    /// Description of the first input with a nonzero residual.
    pub first_failure: Option<String>,
    pub spot_checks: usize,
}

fn run_trials<F>(model: &FiniteModel, field: &Field, slots: usize, trials: usize, seed: u64, residual: F) -> Result<TrialReport>
where
    F: Fn(&[StepFunction]) -> Result<ParsevalReport> + Sync,
{
    let mesh = model.mesh(field);
    let mut report = TrialReport {
        deltas: mesh.len() * slots,
        random: trials,
        all_zero: true,
        first_failure: None,
        spot_checks: 0,
    };
    let zero = StepFunction::zero(field);
    let mut inputs: Vec<(String, Vec<StepFunction>)> = Vec::new();
    for slot in 0..slots {
        for b in &mesh {
            let mut input = vec![zero.clone(); slots];
            input[slot] = StepFunction::indicator(&ClopenSet::from_balls(field, vec![b.clone()]));
            let label = format!(
                "indicator of ball({}, {}) in slot {}",
                format_laurent(field, b.center()),
                b.scale(),
                slot + 1
            );
            inputs.push((label, input));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let input: Vec<StepFunction> = (0..slots).map(|_| model.random_function(field, &mut rng)).collect();
        inputs.push((format!("random trial {t}"), input));
    }
    let results: Vec<Result<ParsevalReport>> =
        thread_pool()?.install(|| inputs.par_iter().map(|(_, fs)| residual(fs)).collect());
    for ((label, _), r) in inputs.iter().zip(results) {
        let r = r?;
        report.spot_checks += r.spot_checks;
        if !r.is_zero() && report.all_zero {
            report.all_zero = false;
            report.first_failure = Some(format!("{label}: residual {}", r.residual));
        }
    }
    Ok(report)
}

/// Parseval residuals for every mesh indicator and `trials` random step functions.
pub fn parseval_trials(model: &FiniteModel, psis: &[StepFunction], trials: usize, seed: u64) -> Result<TrialReport> {
    let Some(first) = psis.first() else {
        return Err(LfwError::Precondition("empty family".into()));
    };
    run_trials(model, first.field(), 1, trials, seed, |fs| parseval_residual(model, psis, &fs[0]))
}

/// Direct-sum residuals for every mesh indicator in every slot and `trials` random tuples.
pub fn super_parseval_trials(model: &FiniteModel, etas: &[StepFunction], trials: usize, seed: u64) -> Result<TrialReport> {
    let Some(first) = etas.first() else {
        return Err(LfwError::Precondition("empty tuple".into()));
    };
    run_trials(model, first.field(), etas.len(), trials, seed, |fs| super_parseval_residual(model, etas, fs))
}
