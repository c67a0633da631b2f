#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tropvol_core::{ExactScalar, ExtScalar, TropicalMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> ExactScalar {
    ExactScalar::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> ExactScalar {
    ExactScalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn random_ints(rng: &mut ChaCha8Rng, m: usize, n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(lo..=hi)).collect())
        .collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, lo: i64, hi: i64) -> TropicalMatrix {
    TropicalMatrix::from_ints(&random_ints(rng, m, n, lo, hi))
}

/// All permutations of `0..n` by Heap's algorithm.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

pub fn entry(a: &TropicalMatrix, i: usize, j: usize) -> Option<ExactScalar> {
    match a.get(i, j) {
        ExtScalar::Finite(v) => Some(v.clone()),
        ExtScalar::Infinity => None,
    }
}

/// Minimum assignment value and number of optimal permutations.
pub fn brute_permanent(a: &TropicalMatrix) -> Option<(ExactScalar, usize)> {
    let n = a.rows();
    let mut best: Option<ExactScalar> = None;
    let mut count = 0;
    for p in all_permutations(n) {
        let mut sum = ExactScalar::zero();
        let mut ok = true;
        for (i, &j) in p.iter().enumerate() {
            match entry(a, i, j) {
                Some(v) => sum += v,
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        match &best {
            Some(b) if &sum > b => {}
            Some(b) if &sum == b => count += 1,
            _ => {
                best = Some(sum);
                count = 1;
            }
        }
    }
    best.map(|b| (b, count))
}

/// Minimum mean over all elementary cycles, by DFS rooted at each cycle's
/// smallest vertex.
pub fn brute_min_cycle_mean(b: &TropicalMatrix) -> Option<ExactScalar> {
    let m = b.rows();
    let mut best: Option<ExactScalar> = None;
    fn dfs(
        b: &TropicalMatrix,
        start: usize,
        v: usize,
        len: i64,
        w: ExactScalar,
        used: &mut Vec<bool>,
        best: &mut Option<ExactScalar>,
    ) {
        for u in start..b.rows() {
            let Some(e) = entry(b, v, u) else { continue };
            if u == start {
                let mean = (&w + &e) / q(len + 1);
                if best.as_ref().is_none_or(|x| &mean < x) {
                    *best = Some(mean);
                }
            } else if !used[u] {
                used[u] = true;
                dfs(b, start, u, len + 1, &w + &e, used, best);
                used[u] = false;
            }
        }
    }
    for s in 0..m {
        let mut used = vec![false; m];
        used[s] = true;
        dfs(b, s, s, 0, ExactScalar::zero(), &mut used, &mut best);
    }
    best
}

fn ext_add(a: &Option<ExactScalar>, b: &Option<ExactScalar>) -> Option<ExactScalar> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

fn ext_min(a: Option<ExactScalar>, b: Option<ExactScalar>) -> Option<ExactScalar> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `I ⊕ B ⊕ … ⊕ B^m` by naive min-plus powers; `None` is `+∞`.
pub fn brute_star(b: &TropicalMatrix) -> Vec<Vec<Option<ExactScalar>>> {
    let m = b.rows();
    let base: Vec<Vec<Option<ExactScalar>>> =
        (0..m).map(|i| (0..m).map(|j| entry(b, i, j)).collect()).collect();
    let mut acc: Vec<Vec<Option<ExactScalar>>> = (0..m)
        .map(|i| (0..m).map(|j| (i == j).then(ExactScalar::zero)).collect())
        .collect();
    let mut pow = base.clone();
    for _ in 0..m {
        for i in 0..m {
            for j in 0..m {
                acc[i][j] = ext_min(acc[i][j].take(), pow[i][j].clone());
            }
        }
        let mut next = vec![vec![None; m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut v = None;
                for k in 0..m {
                    v = ext_min(v, ext_add(&pow[i][k], &base[k][j]));
                }
                next[i][j] = v;
            }
        }
        pow = next;
    }
    acc
}

/// `|{y ∈ Z^{d-1} : max(0,y) − min(0,y) ≤ δ}|` by scanning `[−δ, δ]^{d-1}`.
pub fn brute_ball_count(d: usize, delta: i64) -> u64 {
    let k = d - 1;
    let side = 2 * delta + 1;
    let mut count = 0;
    for idx in 0..side.pow(k as u32) {
        let mut rest = idx;
        let (mut lo, mut hi) = (0i64, 0i64);
        for _ in 0..k {
            let y = rest % side - delta;
            rest /= side;
            lo = lo.min(y);
            hi = hi.max(y);
        }
        if hi - lo <= delta {
            count += 1;
        }
    }
    count
}

/// A monotone 2-SAT formula with `n ≥ 2` variables and `r` clauses on
/// distinct variables.
pub fn random_formula(rng: &mut ChaCha8Rng, n: usize, r: usize) -> tropvol_core::SatFormula {
    let clauses = (0..r)
        .map(|_| {
            let i = rng.gen_range(0..n);
            let k = (i + rng.gen_range(1..n)) % n;
            (i, k)
        })
        .collect();
    tropvol_core::SatFormula::new(n, clauses).unwrap()
}
