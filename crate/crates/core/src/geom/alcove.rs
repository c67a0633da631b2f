use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::covector::{BoundingBox, ProjectivePoint};
use crate::error::{Error, Result};
use crate::geom::budget::Budget;
use crate::scalar::{ceil_to_bigint, floor_to_bigint, int, ratio, ExactScalar};

/// The simplex `{y : base ≤ y ≤ base + 1, frac(y_{order[0]}) ≥ frac(y_{order[1]}) ≥ …}`
/// in the coordinates `2..m` of `TP^{m-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alcove {
    pub base: Vec<i64>,
    /// A permutation of `0..m-1`, indexing `base`.
    pub order: Vec<usize>,
}

impl Alcove {
    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// `1 / (m-1)!`.
    pub fn volume(&self) -> ExactScalar {
        ExactScalar::new(1.into(), factorial(self.dim()))
    }

    /// The `m` integer vertices, from `base` upward.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let mut v = self.base.clone();
        let mut out = vec![v.clone()];
        for &c in &self.order {
            v[c] += 1;
            out.push(v.clone());
        }
        out
    }

    /// Barycenter, as a point with first coordinate zero. Its coordinates have
    /// denominator `m`.
    pub fn centroid(&self) -> ProjectivePoint {
        let m = self.dim() as i64 + 1;
        let mut coords = vec![int(0); self.dim() + 1];
        for (l, &c) in self.order.iter().enumerate() {
            coords[c + 1] = int(self.base[c]) + ratio(m - 1 - l as i64, m);
        }
        ProjectivePoint::new(coords)
    }

    /// `m ·` centroid, an integer vector including the leading zero.
    pub fn scaled_centroid(&self) -> Vec<i64> {
        let m = self.dim() as i64 + 1;
        let mut x = vec![0; self.dim() + 1];
        for (l, &c) in self.order.iter().enumerate() {
            x[c + 1] = m * self.base[c] + (m - 1 - l as i64);
        }
        x
    }
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

pub(crate) fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Integer box `lo ≤ x ≤ hi` obtained by rounding outward.
pub(crate) fn integer_box(bx: &BoundingBox) -> Result<(Vec<i64>, Vec<i64>)> {
    let conv = |v: BigInt| v.to_i64().ok_or(Error::Overflow);
    let lo = bx.lo.iter().map(|l| conv(floor_to_bigint(l))).collect::<Result<_>>()?;
    let hi = bx.hi.iter().map(|h| conv(ceil_to_bigint(h))).collect::<Result<_>>()?;
    Ok((lo, hi))
}

/// Number of unit cubes `Π (hi_i − lo_i)`.
pub(crate) fn cube_count(lo: &[i64], hi: &[i64]) -> u128 {
    lo.iter()
        .zip(hi)
        .map(|(l, h)| (h - l).max(0) as u128)
        .product()
}

/// The base of cube number `idx` in lexicographic order (last coordinate
/// fastest).
pub(crate) fn cube_base(mut idx: u128, lo: &[i64], hi: &[i64]) -> Vec<i64> {
    let d = lo.len();
    let mut base = vec![0; d];
    for i in (0..d).rev() {
        let w = (hi[i] - lo[i]) as u128;
        base[i] = lo[i] + (idx % w) as i64;
        idx /= w;
    }
    base
}

/// Streams every alcove of the integer box around `bx`, cubes in
/// lexicographic order and orders lexicographically within a cube.
pub fn enumerate_alcoves(bx: &BoundingBox, budget: Budget) -> Result<AlcoveIter> {
    let (lo, hi) = integer_box(bx)?;
    let cubes = cube_count(&lo, &hi);
    budget.check(cubes.saturating_mul(factorial_u128(lo.len())))?;
    Ok(AlcoveIter {
        perms: permutations(lo.len()),
        lo,
        hi,
        cubes,
        cube: 0,
        perm: 0,
        base: Vec::new(),
    })
}

pub struct AlcoveIter {
    lo: Vec<i64>,
    hi: Vec<i64>,
    perms: Vec<Vec<usize>>,
    cubes: u128,
    cube: u128,
    perm: usize,
    base: Vec<i64>,
}

impl Iterator for AlcoveIter {
    type Item = Alcove;

    fn next(&mut self) -> Option<Alcove> {
        if self.cube >= self.cubes {
            return None;
        }
        if self.perm == 0 {
            self.base = cube_base(self.cube, &self.lo, &self.hi);
        }
        let a = Alcove {
            base: self.base.clone(),
            order: self.perms[self.perm].clone(),
        };
        self.perm += 1;
        if self.perm == self.perms.len() {
            self.perm = 0;
            self.cube += 1;
        }
        Some(a)
    }
}
