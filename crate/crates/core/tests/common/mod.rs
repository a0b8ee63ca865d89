#![allow(dead_code)]

use lfw::clopen::{Ball, ClopenSet};
use lfw::gfq::{Field, FieldConfig};
use lfw::lfield::Laurent;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn field(p: u32, c: u32) -> Field {
    FieldConfig::new(p, c, None).unwrap()
}

/// Ball membership by comparing digits below the ball's scale.
pub fn in_ball(x: &Laurent, b: &Ball) -> bool {
    let lo = [x.valuation(), b.center().valuation()]
        .into_iter()
        .flatten()
        .min()
        .unwrap_or(b.scale());
    (lo..b.scale()).all(|e| x.digit(e) == b.center().digit(e))
}

/// All points with digits at exponents `lo..hi`: one per ball of scale `hi` in `𝔭^lo 𝒪`.
pub fn mesh(q: u32, lo: i32, hi: i32) -> Vec<Laurent> {
    let len = (hi - lo) as usize;
    let total = (q as usize).pow(len as u32);
    (0..total)
        .map(|mut n| {
            let mut digits = Vec::with_capacity(len);
            for _ in 0..len {
                digits.push((n % q as usize) as u8);
                n /= q as usize;
            }
            Laurent::from_digits(lo, digits)
        })
        .collect()
}

pub fn random_point(rng: &mut ChaCha8Rng, q: u32, lo: i32, hi: i32) -> Laurent {
    let digits = (lo..hi).map(|_| rng.gen_range(0..q) as u8).collect();
    Laurent::from_digits(lo, digits)
}

/// Up to `n` random (possibly overlapping) balls inside `𝔭^lo 𝒪` with scales in `lo..=hi`.
pub fn random_balls(rng: &mut ChaCha8Rng, q: u32, lo: i32, hi: i32, n: usize) -> Vec<Ball> {
    (0..rng.gen_range(0..=n))
        .map(|_| {
            let k = rng.gen_range(lo..=hi);
            Ball::new(random_point(rng, q, lo, k), k)
        })
        .collect()
}

pub fn bitmap(points: &[Laurent], balls: &[Ball]) -> Vec<bool> {
    points.iter().map(|x| balls.iter().any(|b| in_ball(x, b))).collect()
}

pub fn set_bitmap(points: &[Laurent], s: &ClopenSet) -> Vec<bool> {
    bitmap(points, s.balls())
}

/// One randomized case of the set-algebra laws against the mesh oracle.
pub fn clopen_case(rng: &mut ChaCha8Rng, f: &Field, lo: i32, hi: i32) -> Result<(), String> {
    let q = f.q();
    let pts = mesh(q, lo, hi);
    let ra = random_balls(rng, q, lo, hi, 6);
    let rb = random_balls(rng, q, lo, hi, 6);
    let (oa, ob) = (bitmap(&pts, &ra), bitmap(&pts, &rb));
    let a = ClopenSet::from_balls(f, ra);
    let b = ClopenSet::from_balls(f, rb);
    let err = |what: &str| Err(format!("{what} disagrees with the mesh oracle for {a} and {b}"));
    if set_bitmap(&pts, &a) != oa {
        return err("normal form");
    }
    let zip = |op: fn(bool, bool) -> bool| -> Vec<bool> {
        oa.iter().zip(&ob).map(|(&x, &y)| op(x, y)).collect()
    };
    let u = a.union(&b).map_err(|e| e.to_string())?;
    let i = a.intersect(&b).map_err(|e| e.to_string())?;
    let d = a.subtract(&b).map_err(|e| e.to_string())?;
    if set_bitmap(&pts, &u) != zip(|x, y| x || y) {
        return err("union");
    }
    if set_bitmap(&pts, &i) != zip(|x, y| x && y) {
        return err("intersection");
    }
    if set_bitmap(&pts, &d) != zip(|x, y| x && !y) {
        return err("difference");
    }
    let count = oa.iter().filter(|&&x| x).count();
    let atom = lfw::clopen::q_pow_neg(q, hi);
    if a.measure() != atom * num_rational::BigRational::from_integer(count.into()) {
        return err("measure");
    }
    let sub = oa.iter().zip(&ob).all(|(&x, &y)| !x || y);
    let disj = oa.iter().zip(&ob).all(|(&x, &y)| !(x && y));
    if a.is_subset(&b).map_err(|e| e.to_string())? != sub {
        return err("subset test");
    }
    if a.is_disjoint(&b).map_err(|e| e.to_string())? != disj {
        return err("disjointness test");
    }
    // canonical form does not depend on how the set was written
    let atoms: Vec<Ball> = pts
        .iter()
        .zip(&oa)
        .filter(|(_, &m)| m)
        .map(|(x, _)| Ball::new(x.clone(), hi))
        .collect();
    if ClopenSet::from_balls(f, atoms) != a {
        return err("canonical form");
    }
    let t = random_point(rng, q, lo, hi);
    let at = a.translate(&t);
    let j = rng.gen_range(-3..4);
    let aj = a.scale(j);
    for (x, &m) in pts.iter().zip(&oa) {
        if at.balls().iter().any(|bb| in_ball(&x.add(f, &t), bb)) != m {
            return err("translation");
        }
        if aj.balls().iter().any(|bb| in_ball(&x.shift(j), bb)) != m {
            return err("dilation");
        }
    }
    Ok(())
}
