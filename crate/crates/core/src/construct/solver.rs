use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::dlx::{Budget, Dlx, SearchResult};
use crate::clopen::{Ball, ClopenSet};
use crate::error::{LfwError, Result};
use crate::gfq::{ensure_same, Field};
use crate::lfield::Laurent;
use crate::verify::{
    check_dilation_tiling, check_translation, verify_superwavelet, SuperMode, TranslationMode,
    Verdict,
};

/// What to complete and at which resolution.
#[derive(Clone, Debug)]
pub struct SolveRequest {
    pub field: Field,
    pub existing: Vec<ClopenSet>,
    /// Inclusive range of shells `𝔭^s 𝒪*` candidate cells may live in.
    pub shells: (i32, i32),
    /// Scale of every candidate cell.
    pub max_scale: i32,
}

#[derive(Clone, Debug)]
pub struct SolveLimits {
    pub time: Duration,
    pub max_nodes: u64,
    /// Cap on the total footprint (cells times covered atoms).
    pub max_footprint: usize,
    pub parallel: bool,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            time: Duration::from_secs(60),
            max_nodes: u64::MAX,
            max_footprint: 1 << 26,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Found {
        set: ClopenSet,
        verdict: Verdict,
        pool: usize,
        nodes: u64,
    },
    Unsat {
        pool: usize,
        nodes: u64,
    },
    ResourceExceeded {
        pool: usize,
        nodes: u64,
        reason: String,
    },
}

impl SolveOutcome {
    pub fn pool(&self) -> usize {
        match self {
            SolveOutcome::Found { pool, .. }
            | SolveOutcome::Unsat { pool, .. }
            | SolveOutcome::ResourceExceeded { pool, .. } => *pool,
        }
    }

    pub fn set(&self) -> Option<&ClopenSet> {
        match self {
            SolveOutcome::Found { set, .. } => Some(set),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SolveOutcome::Found { .. } => "found",
            SolveOutcome::Unsat { .. } => "unsat",
            SolveOutcome::ResourceExceeded { .. } => "resource_exceeded",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            SolveOutcome::Found {
                set,
                verdict,
                pool,
                nodes,
            } => json!({
                "outcome": "found",
                "set": set.to_json(),
                "verdict": verdict.to_json(),
                "pool": pool,
                "nodes": nodes,
            }),
            SolveOutcome::Unsat { pool, nodes } => json!({
                "outcome": "unsat",
                "pool": pool,
                "nodes": nodes,
            }),
            SolveOutcome::ResourceExceeded {
                pool,
                nodes,
                reason,
            } => json!({
                "outcome": "resource_exceeded",
                "pool": pool,
                "nodes": nodes,
                "reason": reason,
            }),
        }
    }
}

fn first_witness(v: &Verdict) -> String {
    v.failed_checks()
        .next()
        .map(|c| {
            let w = c.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
            format!("{} fails ({w})", c.name)
        })
        .unwrap_or_default()
}

/// Target of the missing component: `𝒪` minus the joint fold of `existing`.
pub fn complement_target(field: &Field, existing: &[ClopenSet]) -> Result<ClopenSet> {
    let mut taken = ClopenSet::empty(field);
    for (i, w) in existing.iter().enumerate() {
        ensure_same(field, w.field())?;
        let d = check_dilation_tiling(w);
        if !d.passed {
            return Err(LfwError::Precondition(format!("component {}: {}", i + 1, first_witness(&d))));
        }
        let t = check_translation(w, TranslationMode::Packing);
        if !t.passed {
            return Err(LfwError::Precondition(format!("component {}: {}", i + 1, first_witness(&t))));
        }
        let img = w.fold_image();
        let clash = taken.intersect(&img)?;
        if let Some(b) = clash.balls().first() {
            return Err(LfwError::Precondition(format!(
                "joint fold overlaps on {}",
                b.format(field)
            )));
        }
        taken = taken.union(&img)?;
    }
    let target = ClopenSet::integers(field).subtract(&taken)?;
    if target.is_empty() {
        return Err(LfwError::Precondition("joint fold already covers 𝒪".into()));
    }
    Ok(target)
}

fn digits_of(mut v: u64, q: u64, len: usize) -> Vec<u8> {
    (0..len)
        .map(|_| {
            let d = (v % q) as u8;
            v /= q;
            d
        })
        .collect()
}

/// Index of `B(x, t)` among the scale-`t` atoms of 𝒪*, `x` a unit.
fn unit_atom_index(x: &Laurent, q: u64, t: i32) -> u64 {
    let d0 = x.digit(0).0 as u64;
    let mut rest = 0u64;
    for k in (1..t).rev() {
        rest = rest * q + x.digit(k).0 as u64;
    }
    (d0 - 1) + (q - 1) * rest
}

/// Completes `existing` by one more component whose fold is the complement target.
///
/// Candidate cells are the balls of scale `max_scale` inside the given shells whose
/// fold lands in the target. A selection must (1) tile 𝒪* after moving each cell
/// into 𝒪* by its shell and (2) tile the target by folds. Every found set is
/// re-verified against the full orthonormal criterion.
pub fn solve_complement(req: &SolveRequest, limits: &SolveLimits) -> Result<SolveOutcome> {
    let f = &req.field;
    let q = f.q() as u64;
    let (s_lo, s_hi) = req.shells;
    let r = req.max_scale;
    if s_lo > s_hi {
        return Err(LfwError::Precondition(format!("empty shell range {s_lo}..{s_hi}")));
    }
    if r < 0 {
        return Err(LfwError::Precondition(format!(
            "max_scale {r} < 0: such cells never pack under translation"
        )));
    }
    let target = complement_target(f, &req.existing)?;
    if target.max_scale().expect("nonempty") > r {
        return Ok(SolveOutcome::Unsat { pool: 0, nodes: 0 });
    }
    let s_hi = s_hi.min(r - 1);
    if s_lo > s_hi {
        return Ok(SolveOutcome::Unsat { pool: 0, nodes: 0 });
    }
    let t1 = r - s_lo;
    let n1 = (q - 1).saturating_mul(q.checked_pow((t1 - 1) as u32).unwrap_or(u64::MAX));
    let f_atoms: Vec<Ball> = target.refined(r);
    let n2 = f_atoms.len() as u64;
    // footprint estimate before enumerating anything
    let mut footprint: u64 = 0;
    for s in s_lo..=s_hi {
        let per = if s < 0 { (q - 1) * q.pow((-s - 1) as u32) * n2 } else { n2 };
        footprint = footprint.saturating_add(per.saturating_mul(q.saturating_pow((s - s_lo) as u32) + 1));
    }
    if n1 > limits.max_footprint as u64 || footprint > limits.max_footprint as u64 {
        return Ok(SolveOutcome::ResourceExceeded {
            pool: 0,
            nodes: 0,
            reason: format!("footprint {footprint} over cap {}", limits.max_footprint),
        });
    }

    let mut cells: Vec<(Ball, usize)> = Vec::new();
    for s in s_lo..=s_hi {
        if s < 0 {
            let len = (-s) as usize;
            let count = q.pow(len as u32);
            for v in 0..count {
                let digs = digits_of(v, q, len);
                if digs[0] == 0 {
                    continue;
                }
                let frac = Laurent::from_digits(s, digs);
                for (k, a) in f_atoms.iter().enumerate() {
                    cells.push((Ball::new(frac.add(f, a.center()), r), k));
                }
            }
        } else {
            for (k, a) in f_atoms.iter().enumerate() {
                if a.center().valuation() == Some(s) {
                    cells.push((a.clone(), k));
                }
            }
        }
    }
    cells.sort();
    let pool = cells.len();

    let mut class_one = vec![false; n1 as usize];
    class_one.extend(std::iter::repeat_n(true, n2 as usize));
    let rows: Vec<Vec<usize>> = cells
        .iter()
        .map(|(b, k)| {
            let s = b.center().valuation().expect("cell avoids 0");
            let x = b.center().shift(-s);
            let w = r - s;
            let base = unit_atom_index(&x, q, w);
            let stride = (q - 1) * q.pow((w - 1) as u32);
            let mut items: Vec<usize> = (0..q.pow((t1 - w) as u32))
                .map(|m| (base + m * stride) as usize)
                .collect();
            items.push(n1 as usize + k);
            items
        })
        .collect();

    let budget = Budget {
        deadline: Instant::now() + limits.time,
        max_nodes: limits.max_nodes,
    };
    let mut dlx = Dlx::new(class_one, &rows);
    let (result, nodes) = if limits.parallel {
        match dlx.first_branches() {
            None => (SearchResult::Exhausted, 1),
            Some(branches) => {
                let results: Vec<(SearchResult, u64)> = branches
                    .par_iter()
                    .map(|&x| {
                        let mut d = dlx.clone();
                        let r = d.solve_from(x, &budget);
                        (r, d.nodes())
                    })
                    .collect();
                let nodes = results.iter().map(|(_, n)| n).sum::<u64>() + 1;
                let first = results
                    .into_iter()
                    .map(|(r, _)| r)
                    .find(|r| *r != SearchResult::Exhausted)
                    .unwrap_or(SearchResult::Exhausted);
                (first, nodes)
            }
        }
    } else {
        let r = dlx.solve(&budget);
        (r, dlx.nodes())
    };

    match result {
        SearchResult::Exhausted => Ok(SolveOutcome::Unsat { pool, nodes }),
        SearchResult::Aborted(reason) => Ok(SolveOutcome::ResourceExceeded { pool, nodes, reason }),
        SearchResult::Found(sel) => {
            let set = ClopenSet::from_balls(f, sel.into_iter().map(|i| cells[i].0.clone()).collect());
            let mut fam = req.existing.clone();
            fam.push(set.clone());
            let verdict = verify_superwavelet(&fam, SuperMode::Orthonormal)?;
            if !verdict.passed {
                return Err(LfwError::Runtime(format!(
                    "solver result rejected by verifier: {}",
                    first_witness(&verdict)
                )));
            }
            Ok(SolveOutcome::Found {
                set,
                verdict,
                pool,
                nodes,
            })
        }
    }
}
