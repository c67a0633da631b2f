use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::covector::{bounding_box, contains_point, BoundingBox, ProjectivePoint};
use crate::error::{Error, Result};
use crate::geom::alcove::{cube_base, cube_count, factorial, factorial_u128, permutations};
use crate::geom::budget::Budget;
use crate::matrix::TropicalMatrix;
use crate::scalar::{common_denominator, ExactScalar};

/// `P = tconv(A)` stored as integer generators `G = q·A'`, where `A'` is the
/// normalized input and `q` the least common denominator of its entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPolytope {
    generators: TropicalMatrix,
    scale_denominator: BigInt,
}

impl VertexPolytope {
    pub fn new(a: &TropicalMatrix) -> Result<Self> {
        let a = a.normalize_generators()?;
        let vals = a.finite_rows()?;
        let q = common_denominator(vals.iter().flatten());
        let generators = a.scaled(&ExactScalar::from_integer(q.clone()));
        Ok(Self {
            generators,
            scale_denominator: q,
        })
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(&TropicalMatrix::from_ints(rows))
    }

    /// The integer matrix `q·A'`.
    pub fn generators(&self) -> &TropicalMatrix {
        &self.generators
    }

    pub fn scale_denominator(&self) -> &BigInt {
        &self.scale_denominator
    }

    /// The normalized generators in original units.
    pub fn original(&self) -> TropicalMatrix {
        self.generators
            .scaled(&ExactScalar::new(BigInt::one(), self.scale_denominator.clone()))
    }

    pub fn rows(&self) -> usize {
        self.generators.rows()
    }

    pub fn cols(&self) -> usize {
        self.generators.cols()
    }

    /// Dimension `m − 1` of the ambient space.
    pub fn dim(&self) -> usize {
        self.rows() - 1
    }

    pub fn bounding_box(&self) -> Result<BoundingBox> {
        bounding_box(&self.original())
    }

    pub fn contains(&self, x: &ProjectivePoint) -> Result<bool> {
        contains_point(&self.original(), x)
    }

    /// Integer generators `factor · G` with overflow checks.
    pub(crate) fn int_generators(&self, factor: i64) -> Result<IntGenerators> {
        let (m, n) = (self.rows(), self.cols());
        let mut g = Vec::with_capacity(m * n);
        for e in self.generators.entries() {
            let v = e.finite().expect("finite by construction").to_integer();
            let v = v.to_i64().ok_or(Error::Overflow)?;
            g.push(v.checked_mul(factor).ok_or(Error::Overflow)?);
        }
        Ok(IntGenerators { m, n, g })
    }

    /// Row-wise range of `G` for rows `1..m`.
    pub(crate) fn int_box(&self) -> Result<(Vec<i64>, Vec<i64>)> {
        let g = self.int_generators(1)?;
        let lo = (1..g.m).map(|i| (0..g.n).map(|j| g.at(i, j)).min().unwrap()).collect();
        let hi = (1..g.m).map(|i| (0..g.n).map(|j| g.at(i, j)).max().unwrap()).collect();
        Ok((lo, hi))
    }
}

impl fmt::Display for VertexPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.original())
    }
}

/// Row-major integer generator matrix with a residuation membership test.
#[derive(Debug, Clone)]
pub(crate) struct IntGenerators {
    pub m: usize,
    pub n: usize,
    pub g: Vec<i64>,
}

impl IntGenerators {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.g[i * self.n + j]
    }

    /// `x ∈ tconv(G)`; `lambda` is scratch of length `n`.
    pub fn contains(&self, x: &[i64], lambda: &mut [i64]) -> bool {
        for (j, l) in lambda.iter_mut().enumerate() {
            *l = (0..self.m).map(|i| x[i] - self.at(i, j)).max().unwrap();
        }
        (0..self.m).all(|i| (0..self.n).any(|j| self.at(i, j) + lambda[j] == x[i]))
    }
}

/// Exact volume together with the work it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeReport {
    pub volume: ExactScalar,
    /// Membership tests performed.
    pub alcoves_tested: u64,
    /// Alcoves of the scaled grid found inside.
    pub alcoves_inside: u128,
}

/// Exact lattice count together with the work it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub count: u64,
    pub points_tested: u64,
}

/// Alcove counter for a single unit cube. Membership of an alcove depends
/// only on the relative order of the fractional parts of coordinates whose
/// integer parts tie in some comparison, so each class of orders is tested
/// once and weighted by its size.
pub(crate) struct CubeScanner<'a> {
    /// Unscaled integer generators, for the tie pattern.
    pub g: &'a IntGenerators,
    /// Generators scaled by `m`, for testing scaled centroids.
    pub gm: &'a IntGenerators,
    pub perms: &'a [Vec<Vec<usize>>],
    pub fact: &'a [u128],
}

pub(crate) struct CubeScratch {
    sensitive: Vec<bool>,
    keys: Vec<i64>,
    x: Vec<i64>,
    lambda: Vec<i64>,
    order: Vec<usize>,
}

impl CubeScratch {
    pub fn new(m: usize, n: usize) -> Self {
        Self {
            sensitive: vec![false; m],
            keys: vec![0; m],
            x: vec![0; m],
            lambda: vec![0; n],
            order: Vec::with_capacity(m),
        }
    }
}

impl CubeScanner<'_> {
    /// Returns (alcoves inside, membership tests).
    pub fn scan(&self, base: &[i64], s: &mut CubeScratch) -> (u128, u64) {
        let d = base.len();
        let m = d as i64 + 1;
        s.sensitive.iter_mut().for_each(|b| *b = false);
        for j in 0..self.g.n {
            for i in 0..d {
                s.keys[i] = base[i] - self.g.at(i + 1, j);
            }
            for i in 0..d {
                for k in i + 1..d {
                    if s.keys[i] == s.keys[k] {
                        s.sensitive[i] = true;
                        s.sensitive[k] = true;
                    }
                }
            }
        }
        let tied: Vec<usize> = (0..d).filter(|&i| s.sensitive[i]).collect();
        let rest: Vec<usize> = (0..d).filter(|&i| !s.sensitive[i]).collect();
        let weight = self.fact[d] / self.fact[tied.len()];
        let mut inside = 0u128;
        let mut tests = 0u64;
        for p in &self.perms[tied.len()] {
            s.order.clear();
            s.order.extend(p.iter().map(|&t| tied[t]));
            s.order.extend_from_slice(&rest);
            s.x[0] = 0;
            for (l, &c) in s.order.iter().enumerate() {
                s.x[c + 1] = m * base[c] + (m - 1 - l as i64);
            }
            tests += 1;
            if self.gm.contains(&s.x, &mut s.lambda) {
                inside += weight;
            }
        }
        (inside, tests)
    }
}

/// `Vol^{m-1}(P)` by counting alcoves of the bounding box whose centroid lies
/// in `P`.
pub fn volume(p: &VertexPolytope, budget: Budget) -> Result<VolumeReport> {
    let d = p.dim();
    let q = p.scale_denominator();
    if d == 0 {
        return Ok(VolumeReport {
            volume: ExactScalar::one(),
            alcoves_tested: 0,
            alcoves_inside: 1,
        });
    }
    let (lo, hi) = p.int_box()?;
    let hi_cube: Vec<i64> = hi.clone();
    let cubes = cube_count(&lo, &hi_cube);
    let worst = cubes.saturating_mul(factorial_u128(d));
    budget.check(cubes)?;
    let g = p.int_generators(1)?;
    let gm = p.int_generators(d as i64 + 1)?;
    let perms: Vec<Vec<Vec<usize>>> = (0..=d).map(permutations).collect();
    let fact: Vec<u128> = (0..=d).map(factorial_u128).collect();
    let scanner = CubeScanner {
        g: &g,
        gm: &gm,
        perms: &perms,
        fact: &fact,
    };
    let tests = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let cubes64 = u64::try_from(cubes).map_err(|_| Error::Overflow)?;
    let inside: u128 = (0..cubes64)
        .into_par_iter()
        .map_init(
            || CubeScratch::new(d + 1, g.n),
            |s, idx| {
                if stop.load(Ordering::Relaxed) {
                    return 0;
                }
                let base = cube_base(idx as u128, &lo, &hi_cube);
                let (c, t) = scanner.scan(&base, s);
                if tests.fetch_add(t, Ordering::Relaxed) + t > budget.max_tests {
                    stop.store(true, Ordering::Relaxed);
                }
                c
            },
        )
        .sum();
    if stop.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded {
            required: worst,
            budget: budget.max_tests,
        });
    }
    let denom = factorial(d) * q.pow(d as u32);
    Ok(VolumeReport {
        volume: ExactScalar::new(BigInt::from(inside), denom),
        alcoves_tested: tests.into_inner(),
        alcoves_inside: inside,
    })
}

/// Integer range of `y` with `q·y ∈ s·[lo, hi]`.
fn dilated_lattice_box(p: &VertexPolytope, s: u64) -> Result<(Vec<i64>, Vec<i64>, i64)> {
    let (lo, hi) = p.int_box()?;
    let q = p.scale_denominator().to_i64().ok_or(Error::Overflow)?;
    let s = i64::try_from(s).map_err(|_| Error::Overflow)?;
    let mut ylo = Vec::with_capacity(lo.len());
    let mut yhi = Vec::with_capacity(lo.len());
    for (l, h) in lo.iter().zip(&hi) {
        let sl = l.checked_mul(s).ok_or(Error::Overflow)?;
        let sh = h.checked_mul(s).ok_or(Error::Overflow)?;
        ylo.push(Integer::div_ceil(&sl, &q));
        yhi.push(Integer::div_floor(&sh, &q));
    }
    Ok((ylo, yhi, q))
}

/// `|sP ∩ Z^{m-1}|` by testing every integer point of the dilated bounding
/// box.
pub fn count_lattice_points(p: &VertexPolytope, s: u64, budget: Budget) -> Result<CountReport> {
    if s == 0 {
        return Err(Error::OutOfRange("dilation factor must be positive".into()));
    }
    let (lo, hi, q) = dilated_lattice_box(p, s)?;
    let d = lo.len();
    let ext: Vec<i64> = hi.iter().map(|h| h + 1).collect();
    let points = cube_count(&lo, &ext);
    budget.check(points)?;
    let g = p.int_generators(i64::try_from(s).map_err(|_| Error::Overflow)?)?;
    let points64 = u64::try_from(points).map_err(|_| Error::Overflow)?;
    let count = (0..points64)
        .into_par_iter()
        .map_init(
            || (vec![0i64; d + 1], vec![0i64; g.n]),
            |(x, lambda), idx| {
                let y = cube_base(idx as u128, &lo, &ext);
                for i in 0..d {
                    x[i + 1] = y[i] * q;
                }
                u64::from(g.contains(x, lambda))
            },
        )
        .sum();
    Ok(CountReport {
        count,
        points_tested: points64,
    })
}

/// Same count as [`count_lattice_points`], solving for the last coordinate:
/// with the others fixed, the admissible values form one interval.
pub fn count_lattice_points_sweep(
    p: &VertexPolytope,
    s: u64,
    budget: Budget,
) -> Result<CountReport> {
    if s == 0 {
        return Err(Error::OutOfRange("dilation factor must be positive".into()));
    }
    let (lo, hi, q) = dilated_lattice_box(p, s)?;
    let d = lo.len();
    if d == 0 {
        return Ok(CountReport {
            count: 1,
            points_tested: 1,
        });
    }
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Ok(CountReport {
            count: 0,
            points_tested: 0,
        });
    }
    let ext: Vec<i64> = hi[..d - 1].iter().map(|h| h + 1).collect();
    let lines = cube_count(&lo[..d - 1], &ext);
    budget.check(lines)?;
    let g = p.int_generators(i64::try_from(s).map_err(|_| Error::Overflow)?)?;
    let n = g.n;
    let (tlo, thi) = (lo[d - 1], hi[d - 1]);
    let lines64 = u64::try_from(lines).map_err(|_| Error::Overflow)?;
    let count = (0..lines64)
        .into_par_iter()
        .map_init(
            || (vec![0i64; d], vec![0i64; n]),
            |(x, mx), idx| {
                let y = cube_base(idx as u128, &lo[..d - 1], &ext);
                for i in 0..d - 1 {
                    x[i + 1] = y[i] * q;
                }
                for j in 0..n {
                    mx[j] = (0..d).map(|i| x[i] - g.at(i, j)).max().unwrap();
                }
                // Rows among the fixed coordinates bound the last one above.
                let mut upper = i64::MAX;
                for i in 0..d {
                    let best = (0..n)
                        .filter(|&j| x[i] - g.at(i, j) == mx[j])
                        .map(|j| mx[j] + g.at(d, j))
                        .max();
                    match best {
                        Some(b) => upper = upper.min(b),
                        None => return 0,
                    }
                }
                // The last row needs one column where it attains the maximum.
                let lower = (0..n).map(|j| mx[j] + g.at(d, j)).min().unwrap();
                let a = Integer::div_ceil(&lower, &q).max(tlo);
                let b = Integer::div_floor(&upper, &q).min(thi);
                (b - a + 1).max(0) as u64
            },
        )
        .sum();
    Ok(CountReport {
        count,
        points_tested: lines64,
    })
}
