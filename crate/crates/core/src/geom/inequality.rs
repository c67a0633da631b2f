use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::alcove::{cube_base, cube_count, factorial, factorial_u128, permutations};
use crate::geom::budget::Budget;
use crate::geom::polytope::{CountReport, VolumeReport};
use crate::matrix::TropicalMatrix;
use crate::scalar::{ceil_to_bigint, common_denominator, floor_to_bigint, int, ratio, ExactScalar, ExtScalar};

/// `{x ∈ R^n : A ⊙ x ⊕ c ≤ B ⊙ x ⊕ d, lo ≤ x ≤ hi}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityPolytope {
    pub lhs: TropicalMatrix,
    pub lhs_const: Vec<ExtScalar>,
    pub rhs: TropicalMatrix,
    pub rhs_const: Vec<ExtScalar>,
    pub lo: Vec<ExactScalar>,
    pub hi: Vec<ExactScalar>,
}

impl InequalityPolytope {
    pub fn new(
        lhs: TropicalMatrix,
        lhs_const: Vec<ExtScalar>,
        rhs: TropicalMatrix,
        rhs_const: Vec<ExtScalar>,
        lo: Vec<ExactScalar>,
        hi: Vec<ExactScalar>,
    ) -> Result<Self> {
        let (p, n) = (lhs.rows(), lhs.cols());
        if rhs.rows() != p || rhs.cols() != n || lhs_const.len() != p || rhs_const.len() != p {
            return Err(Error::DimensionMismatch("inequality system sides disagree".into()));
        }
        if lo.len() != n || hi.len() != n {
            return Err(Error::DimensionMismatch(format!("box must have {n} coordinates")));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::OutOfRange("box has lo > hi".into()));
        }
        Ok(Self {
            lhs,
            lhs_const,
            rhs,
            rhs_const,
            lo,
            hi,
        })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn constraints(&self) -> usize {
        self.lhs.rows()
    }

    fn denominator(&self) -> BigInt {
        let finite = self
            .lhs
            .entries()
            .iter()
            .chain(self.rhs.entries())
            .chain(&self.lhs_const)
            .chain(&self.rhs_const)
            .filter_map(ExtScalar::finite);
        common_denominator(finite.chain(&self.lo).chain(&self.hi))
    }

    /// Integer form with every finite constant multiplied by `factor`.
    fn int_rows(&self, factor: &ExactScalar) -> Result<Vec<IntRow>> {
        let conv = |e: &ExtScalar| -> Result<Option<i64>> {
            match e {
                ExtScalar::Infinity => Ok(None),
                ExtScalar::Finite(v) => {
                    let s = v * factor;
                    debug_assert!(s.is_integer());
                    s.to_integer().to_i64().map(Some).ok_or(Error::Overflow)
                }
            }
        };
        (0..self.constraints())
            .map(|r| {
                let side = |m: &TropicalMatrix| -> Result<Vec<(usize, i64)>> {
                    (0..m.cols())
                        .filter_map(|j| conv(m.get(r, j)).transpose().map(|v| v.map(|v| (j, v))))
                        .collect()
                };
                Ok(IntRow {
                    lhs: side(&self.lhs)?,
                    lhs_c: conv(&self.lhs_const[r])?,
                    rhs: side(&self.rhs)?,
                    rhs_c: conv(&self.rhs_const[r])?,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
struct IntRow {
    lhs: Vec<(usize, i64)>,
    lhs_c: Option<i64>,
    rhs: Vec<(usize, i64)>,
    rhs_c: Option<i64>,
}

impl IntRow {
    fn holds(&self, x: &[i64]) -> bool {
        let l = self.lhs.iter().map(|&(j, a)| a + x[j]).chain(self.lhs_c).min();
        let r = self.rhs.iter().map(|&(j, b)| b + x[j]).chain(self.rhs_c).min();
        match (l, r) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(l), Some(r)) => l <= r,
        }
    }

    fn scaled(&self, k: i64) -> Self {
        Self {
            lhs: self.lhs.iter().map(|&(j, a)| (j, a * k)).collect(),
            lhs_c: self.lhs_c.map(|c| c * k),
            rhs: self.rhs.iter().map(|&(j, b)| (j, b * k)).collect(),
            rhs_c: self.rhs_c.map(|c| c * k),
        }
    }
}

/// Exact evaluation of every row and of the box.
pub fn ineq_contains(q: &InequalityPolytope, x: &[ExactScalar]) -> Result<bool> {
    if x.len() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, system has {}",
            x.len(),
            q.dim()
        )));
    }
    if x.iter().zip(q.lo.iter().zip(&q.hi)).any(|(v, (l, h))| v < l || v > h) {
        return Ok(false);
    }
    let side = |m: &TropicalMatrix, c: &ExtScalar, r: usize| -> ExtScalar {
        (0..m.cols())
            .map(|j| m.get(r, j).shift(&x[j]))
            .fold(c.clone(), |acc, v| acc.oplus(&v))
    };
    Ok((0..q.constraints()).all(|r| side(&q.lhs, &q.lhs_const[r], r) <= side(&q.rhs, &q.rhs_const[r], r)))
}

/// Exact volume of an inequality polytope by alcove counting.
///
/// After clearing denominators every comparison `a + x_j` against `b + x_k`
/// or a constant is a braid-arrangement hyperplane with integer offset, so the
/// set is a union of alcoves and the count is exact.
pub fn ineq_volume(q: &InequalityPolytope, budget: Budget) -> Result<VolumeReport> {
    let d = q.dim();
    let den = q.denominator();
    let factor = ExactScalar::from_integer(den.clone());
    let rows = q.int_rows(&factor)?;
    let to_i = |v: BigInt| v.to_i64().ok_or(Error::Overflow);
    let lo: Vec<i64> = q.lo.iter().map(|v| to_i(floor_to_bigint(&(v * &factor)))).collect::<Result<_>>()?;
    let hi: Vec<i64> = q.hi.iter().map(|v| to_i(ceil_to_bigint(&(v * &factor)))).collect::<Result<_>>()?;
    if d == 0 {
        let inside = rows.iter().all(|r| r.holds(&[]));
        return Ok(VolumeReport {
            volume: int(i64::from(inside)),
            alcoves_tested: 1,
            alcoves_inside: u128::from(inside),
        });
    }
    let cubes = cube_count(&lo, &hi);
    budget.check(cubes)?;
    let scale = d as i64 + 1;
    let scaled: Vec<IntRow> = rows.iter().map(|r| r.scaled(scale)).collect();
    let perms: Vec<Vec<Vec<usize>>> = (0..=d).map(permutations).collect();
    let fact: Vec<u128> = (0..=d).map(factorial_u128).collect();
    let tests = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let cubes64 = u64::try_from(cubes).map_err(|_| Error::Overflow)?;
    let inside: u128 = (0..cubes64)
        .into_par_iter()
        .map_init(
            || (vec![false; d], vec![0i64; d], Vec::with_capacity(d)),
            |(sens, x, order), idx| {
                if stop.load(Ordering::Relaxed) {
                    return 0;
                }
                let base = cube_base(idx as u128, &lo, &hi);
                sens.iter_mut().for_each(|s| *s = false);
                for r in &rows {
                    for &(j, a) in &r.lhs {
                        for &(k, b) in &r.rhs {
                            if j != k && a + base[j] == b + base[k] {
                                sens[j] = true;
                                sens[k] = true;
                            }
                        }
                    }
                }
                let tied: Vec<usize> = (0..d).filter(|&i| sens[i]).collect();
                let rest: Vec<usize> = (0..d).filter(|&i| !sens[i]).collect();
                let weight = fact[d] / fact[tied.len()];
                let mut count = 0u128;
                let mut t = 0u64;
                for p in &perms[tied.len()] {
                    order.clear();
                    order.extend(p.iter().map(|&k| tied[k]));
                    order.extend_from_slice(&rest);
                    for (l, &c) in order.iter().enumerate() {
                        x[c] = scale * base[c] + (scale - 1 - l as i64);
                    }
                    t += 1;
                    if scaled.iter().all(|r| r.holds(x)) {
                        count += weight;
                    }
                }
                if tests.fetch_add(t, Ordering::Relaxed) + t > budget.max_tests {
                    stop.store(true, Ordering::Relaxed);
                }
                count
            },
        )
        .sum();
    if stop.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded {
            required: cubes.saturating_mul(fact[d]),
            budget: budget.max_tests,
        });
    }
    Ok(VolumeReport {
        volume: ExactScalar::new(BigInt::from(inside), factorial(d) * den.pow(d as u32)),
        alcoves_tested: tests.into_inner(),
        alcoves_inside: inside,
    })
}

/// `|sQ ∩ Z^n|`, dilating every finite constant by `s`.
pub fn ineq_count(q: &InequalityPolytope, s: u64, budget: Budget) -> Result<CountReport> {
    if s == 0 {
        return Err(Error::OutOfRange("dilation factor must be positive".into()));
    }
    let d = q.dim();
    let den = q.denominator();
    let sq = ExactScalar::from_integer(BigInt::from(s));
    let rows = q.int_rows(&(&sq * ExactScalar::from_integer(den.clone())))?;
    let qi = den.to_i64().ok_or(Error::Overflow)?;
    let to_i = |v: BigInt| v.to_i64().ok_or(Error::Overflow);
    let lo: Vec<i64> = q.lo.iter().map(|v| to_i(ceil_to_bigint(&(v * &sq)))).collect::<Result<_>>()?;
    let ext: Vec<i64> = q
        .hi
        .iter()
        .map(|v| to_i(floor_to_bigint(&(v * &sq))).map(|h| h + 1))
        .collect::<Result<_>>()?;
    let points = cube_count(&lo, &ext);
    budget.check(points)?;
    let points64 = u64::try_from(points).map_err(|_| Error::Overflow)?;
    let count = (0..points64)
        .into_par_iter()
        .map_init(
            || vec![0i64; d],
            |x, idx| {
                let y = cube_base(idx as u128, &lo, &ext);
                for i in 0..d {
                    x[i] = y[i] * qi;
                }
                u64::from(rows.iter().all(|r| r.holds(x)))
            },
        )
        .sum();
    Ok(CountReport {
        count,
        points_tested: points64,
    })
}

/// A monotone 2-SAT formula; clauses hold 0-based variable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatFormula {
    pub n: usize,
    pub clauses: Vec<(usize, usize)>,
}

/// Largest `n` accepted by [`sat_count_bruteforce`].
pub const BRUTE_FORCE_MAX_VARS: usize = 20;

impl SatFormula {
    pub fn new(n: usize, clauses: Vec<(usize, usize)>) -> Result<Self> {
        for &(i, k) in &clauses {
            if i >= n || k >= n {
                return Err(Error::MalformedFormula(format!(
                    "clause ({}, {}) names a variable outside 1..{n}",
                    i + 1,
                    k + 1
                )));
            }
            if i == k {
                return Err(Error::MalformedFormula(format!(
                    "clause ({}, {}) repeats a literal",
                    i + 1,
                    k + 1
                )));
            }
        }
        Ok(Self { n, clauses })
    }

    /// Parses `p m2sat n r` followed by `r` lines `i k` (1-based). Lines
    /// starting with `c` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "missing 'p m2sat n r' header"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "p" || toks[1] != "m2sat" {
            return Err(Error::parse(hl, 1, "header must be 'p m2sat n r'"));
        }
        let num = |t: &str, col: usize| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(hl, col, format!("bad number '{t}'")))
        };
        let n = num(toks[2], header.find(toks[2]).unwrap_or(0) + 1)?;
        let r = num(toks[3], header.rfind(toks[3]).unwrap_or(0) + 1)?;
        let mut clauses = Vec::with_capacity(r);
        for _ in 0..r {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| Error::parse(hl + clauses.len() + 1, 1, format!("expected {r} clauses")))?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::parse(ln, 1, "clause must be 'i k'"));
            }
            let lit = |t: &str| -> Result<usize> {
                let col = line.find(t).unwrap_or(0) + 1;
                t.parse::<usize>()
                    .ok()
                    .filter(|&v| (1..=n).contains(&v))
                    .map(|v| v - 1)
                    .ok_or_else(|| Error::parse(ln, col, format!("variable '{t}' not in 1..{n}")))
            };
            let (i, k) = (lit(parts[0])?, lit(parts[1])?);
            if i == k {
                return Err(Error::parse(ln, 1, "clause literals must be distinct"));
            }
            clauses.push((i, k));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, 1, "more clauses than declared"));
        }
        Self::new(n, clauses)
    }

    pub fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses
            .iter()
            .all(|&(i, k)| (assignment >> i) & 1 == 1 || (assignment >> k) & 1 == 1)
    }
}

impl fmt::Display for SatFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p m2sat {} {}", self.n, self.clauses.len())?;
        for (i, k) in &self.clauses {
            writeln!(f, "{} {}", i + 1, k + 1)?;
        }
        Ok(())
    }
}

/// Number of satisfying assignments, by enumerating all `2^n`.
pub fn sat_count_bruteforce(f: &SatFormula) -> Result<u64> {
    if f.n > BRUTE_FORCE_MAX_VARS {
        return Err(Error::OutOfRange(format!(
            "{} variables exceed the brute-force limit of {BRUTE_FORCE_MAX_VARS}",
            f.n
        )));
    }
    Ok((0..1u64 << f.n)
        .into_par_iter()
        .filter(|&a| f.satisfied_by(a))
        .count() as u64)
}

/// Tropical encoding of `F`: `−L ≤ x_i ≤ 0` and `min(x_i, x_k) ≤ −L/2` per
/// clause. A variable is true when its coordinate is at most `−L/2`.
pub fn sat_gadget(f: &SatFormula, l: u64) -> Result<InequalityPolytope> {
    if l == 0 {
        return Err(Error::OutOfRange("L must be positive".into()));
    }
    let n = f.n;
    let big_l = i64::try_from(l).map_err(|_| Error::Overflow)?;
    let inf = || ExtScalar::Infinity;
    let unit = |pos: &[usize]| -> Vec<ExtScalar> {
        (0..n)
            .map(|j| if pos.contains(&j) { ExtScalar::zero() } else { inf() })
            .collect()
    };
    let mut lhs = Vec::new();
    let mut lhs_c = Vec::new();
    let mut rhs = Vec::new();
    let mut rhs_c = Vec::new();
    for i in 0..n {
        lhs.push(unit(&[i]));
        lhs_c.push(inf());
        rhs.push(unit(&[]));
        rhs_c.push(ExtScalar::zero());

        lhs.push(unit(&[]));
        lhs_c.push(ExtScalar::from_int(-big_l));
        rhs.push(unit(&[i]));
        rhs_c.push(inf());
    }
    for &(i, k) in &f.clauses {
        lhs.push(unit(&[i, k]));
        lhs_c.push(inf());
        rhs.push(unit(&[]));
        rhs_c.push(ExtScalar::Finite(ratio(-big_l, 2)));
    }
    let build = |rows: Vec<Vec<ExtScalar>>| -> Result<TropicalMatrix> {
        if n == 0 || rows.is_empty() {
            return Err(Error::OutOfRange("formula needs at least one variable".into()));
        }
        TropicalMatrix::from_rows(rows)
    };
    InequalityPolytope::new(
        build(lhs)?,
        lhs_c,
        build(rhs)?,
        rhs_c,
        vec![int(-big_l); n],
        vec![int(0); n],
    )
}

/// `#F · (L/2)^n`, the volume the gadget must have.
pub fn gadget_volume_target(count: u64, n: usize, l: u64) -> ExactScalar {
    let half = ratio(i64::try_from(l).unwrap_or(i64::MAX), 2);
    let pow = (0..n).fold(int(1), |acc, _| acc * &half);
    pow * ExactScalar::from_integer(count.into())
}
