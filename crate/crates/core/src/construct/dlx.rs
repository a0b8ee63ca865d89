//! Dancing-links exact cover over two item classes.
//!
//! Every row covers exactly one item of class 1 and `weight` items of class 0.
//! That lets the search discard a branch as soon as the uncovered class-0 count
//! cannot be written as a sum of the remaining class-1 count many weights.

use std::time::Instant;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum SearchResult {
    Found(Vec<usize>),
    Exhausted,
    Aborted(String),
}

#[derive(Clone)]
pub(crate) struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row_of: Vec<usize>,
    size: Vec<usize>,
    class_one: Vec<bool>,
    uncovered: [usize; 2],
    w_min: usize,
    w_max: usize,
    modulus: usize,
    nodes: u64,
}

pub(crate) struct Budget {
    pub deadline: Instant,
    pub max_nodes: u64,
}

const ROOT: usize = 0;

impl Dlx {
    /// Items `0..n_items`; `class_one[i]` marks the items every row hits once.
    pub(crate) fn new(class_one: Vec<bool>, rows: &[Vec<usize>]) -> Self {
        let n = class_one.len();
        let mut d = Dlx {
            left: (0..=n).map(|i| if i == 0 { n } else { i - 1 }).collect(),
            right: (0..=n).map(|i| if i == n { 0 } else { i + 1 }).collect(),
            up: (0..=n).collect(),
            down: (0..=n).collect(),
            col: (0..=n).collect(),
            row_of: vec![usize::MAX; n + 1],
            size: vec![0; n + 1],
            class_one,
            uncovered: [0, 0],
            w_min: usize::MAX,
            w_max: 0,
            modulus: 0,
            nodes: 0,
        };
        for i in 0..n {
            d.uncovered[d.class_one[i] as usize] += 1;
        }
        for (r, items) in rows.iter().enumerate() {
            let w = items.iter().filter(|&&i| !d.class_one[i]).count();
            d.w_min = d.w_min.min(w);
            d.w_max = d.w_max.max(w);
            d.modulus = gcd(d.modulus, w.abs_diff(1));
            let first = d.col.len();
            for (k, &i) in items.iter().enumerate() {
                let h = i + 1;
                let x = d.col.len();
                d.col.push(h);
                d.row_of.push(r);
                d.up.push(d.up[h]);
                d.down.push(h);
                let u = d.up[h];
                d.down[u] = x;
                d.up[h] = x;
                d.size[h] += 1;
                d.left.push(if k == 0 { x } else { x - 1 });
                d.right.push(first);
                if k > 0 {
                    d.right[x - 1] = x;
                    d.left[first] = x;
                }
            }
        }
        d
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        self.uncovered[self.class_one[c - 1] as usize] -= 1;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                self.size[self.col[j]] += 1;
                j = self.left[j];
            }
            i = self.up[i];
        }
        self.uncovered[self.class_one[c - 1] as usize] += 1;
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    fn feasible(&self) -> bool {
        let (n0, n1) = (self.uncovered[0], self.uncovered[1]);
        if n1 == 0 {
            return n0 == 0;
        }
        if n0 < n1.saturating_mul(self.w_min) || n0 > n1.saturating_mul(self.w_max) {
            return false;
        }
        self.modulus == 0 || n0.abs_diff(n1) % self.modulus == 0
    }

    fn choose(&self) -> Option<usize> {
        let mut best = None;
        let mut best_size = usize::MAX;
        let mut c = self.right[ROOT];
        while c != ROOT {
            if self.size[c] < best_size {
                best_size = self.size[c];
                best = Some(c);
                if best_size == 0 {
                    break;
                }
            }
            c = self.right[c];
        }
        best
    }

    fn select(&mut self, x: usize) {
        let mut j = self.right[x];
        while j != x {
            self.cover(self.col[j]);
            j = self.right[j];
        }
    }

    fn deselect(&mut self, x: usize) {
        let mut j = self.left[x];
        while j != x {
            self.uncover(self.col[j]);
            j = self.left[j];
        }
    }

    /// Rows (in order) hitting the item `choose` would branch on first.
    pub(crate) fn first_branches(&mut self) -> Option<Vec<usize>> {
        if self.right[ROOT] == ROOT || !self.feasible() {
            return None;
        }
        let c = self.choose()?;
        let mut out = Vec::new();
        let mut i = self.down[c];
        while i != c {
            out.push(i);
            i = self.down[i];
        }
        Some(out)
    }

    /// Search below the forced choice of node `x` (a handle from `first_branches`).
    pub(crate) fn solve_from(&mut self, x: usize, budget: &Budget) -> SearchResult {
        let c = self.col[x];
        self.cover(c);
        self.select(x);
        let mut sol = vec![self.row_of[x]];
        let r = self.search(&mut sol, budget);
        self.deselect(x);
        self.uncover(c);
        r
    }

    pub(crate) fn solve(&mut self, budget: &Budget) -> SearchResult {
        let mut sol = Vec::new();
        self.search(&mut sol, budget)
    }

    fn search(&mut self, sol: &mut Vec<usize>, budget: &Budget) -> SearchResult {
        self.nodes += 1;
        if self.nodes > budget.max_nodes {
            return SearchResult::Aborted(format!("node cap {} reached", budget.max_nodes));
        }
        if self.nodes.is_multiple_of(1024) && Instant::now() > budget.deadline {
            return SearchResult::Aborted("time cap reached".into());
        }
        if self.right[ROOT] == ROOT {
            let mut s = sol.clone();
            s.sort_unstable();
            return SearchResult::Found(s);
        }
        if !self.feasible() {
            return SearchResult::Exhausted;
        }
        let c = match self.choose() {
            Some(c) => c,
            None => return SearchResult::Exhausted,
        };
        if self.size[c] == 0 {
            return SearchResult::Exhausted;
        }
        self.cover(c);
        let mut i = self.down[c];
        let mut out = SearchResult::Exhausted;
        while i != c {
            sol.push(self.row_of[i]);
            self.select(i);
            let r = self.search(sol, budget);
            self.deselect(i);
            sol.pop();
            if r != SearchResult::Exhausted {
                out = r;
                break;
            }
            i = self.down[i];
        }
        self.uncover(c);
        out
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    fn budget() -> Budget {
        Budget {
            deadline: Instant::now() + Duration::from_secs(10),
            max_nodes: 1_000_000,
        }
    }

    fn brute(n: usize, rows: &[Vec<usize>]) -> Option<Vec<usize>> {
        for mask in 0u32..(1 << rows.len()) {
            let mut hit = vec![0; n];
            for (r, row) in rows.iter().enumerate() {
                if mask >> r & 1 == 1 {
                    for &i in row {
                        hit[i] += 1;
                    }
                }
            }
            if hit.iter().all(|&h| h == 1) {
                return Some((0..rows.len()).filter(|r| mask >> r & 1 == 1).collect());
            }
        }
        None
    }

    #[test]
    fn agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..400 {
            let n0 = rng.gen_range(1..7);
            let n1 = rng.gen_range(1..4);
            let mut class = vec![false; n0];
            class.extend(vec![true; n1]);
            let nrows = rng.gen_range(1..12);
            let mut rows = Vec::new();
            for _ in 0..nrows {
                let mut r: Vec<usize> = (0..n0).filter(|_| rng.gen_bool(0.4)).collect();
                r.push(n0 + rng.gen_range(0..n1));
                rows.push(r);
            }
            let expect = brute(n0 + n1, &rows);
            let mut d = Dlx::new(class.clone(), &rows);
            match d.solve(&budget()) {
                SearchResult::Found(s) => {
                    assert!(expect.is_some());
                    let mut hit = vec![0; n0 + n1];
                    for r in s {
                        for &i in &rows[r] {
                            hit[i] += 1;
                        }
                    }
                    assert!(hit.iter().all(|&h| h == 1));
                }
                SearchResult::Exhausted => assert!(expect.is_none(), "{rows:?}"),
                SearchResult::Aborted(_) => panic!(),
            }
            // the structure is restored after a search
            let mut d2 = Dlx::new(class, &rows);
            let first = d2.solve(&budget());
            assert_eq!(first, d2.solve(&budget()));
        }
    }
}
