//! Points of tropical projective space, covector types and membership.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::TropicalMatrix;
use crate::scalar::{int, ExactScalar};

/// A point of `TP^{m-1}`, kept as a length-`m` representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<ExactScalar>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<ExactScalar>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn coords(&self) -> &[ExactScalar] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// The representative with first coordinate zero.
    pub fn normalized(&self) -> Self {
        match self.coords.first() {
            Some(c0) if !c0.is_zero() => {
                Self::new(self.coords.iter().map(|c| c - c0).collect())
            }
            _ => self.clone(),
        }
    }

    pub fn translated(&self, by: &ExactScalar) -> Self {
        Self::new(self.coords.iter().map(|c| c + by).collect())
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The type `S = (S_1, …, S_m)` of a point; `sets[i]` holds 0-based column
/// indices in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CovectorType {
    sets: Vec<Vec<usize>>,
}

impl CovectorType {
    pub fn new(mut sets: Vec<Vec<usize>>) -> Self {
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        Self { sets }
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn rows(&self) -> usize {
        self.sets.len()
    }

    /// True when every `S_i` is nonempty, i.e. the point lies in the polytope.
    pub fn all_nonempty(&self) -> bool {
        self.sets.iter().all(|s| !s.is_empty())
    }

    /// True when every column in `0..n` appears in some `S_i`.
    pub fn covers(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for s in &self.sets {
            for &j in s {
                if j < n {
                    seen[j] = true;
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// True when `self ⊆ other` componentwise.
    pub fn is_contained_in(&self, other: &Self) -> bool {
        self.sets.len() == other.sets.len()
            && self
                .sets
                .iter()
                .zip(&other.sets)
                .all(|(a, b)| a.iter().all(|j| b.binary_search(j).is_ok()))
    }

    /// Renders with 1-based indices, e.g. `({1},{2,3},{})`.
    pub fn to_one_based(&self) -> String {
        let parts: Vec<String> = self
            .sets
            .iter()
            .map(|s| {
                let inner: Vec<String> = s.iter().map(|j| (j + 1).to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Display for CovectorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_one_based())
    }
}

fn check_point(a: &TropicalMatrix, x: &ProjectivePoint) -> Result<()> {
    if x.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, matrix has {} rows",
            x.len(),
            a.rows()
        )));
    }
    a.require_finite()
}

/// `S_i = { j : a_ij − x_i = min_k (a_kj − x_k) }`.
pub fn type_of(a: &TropicalMatrix, x: &ProjectivePoint) -> Result<CovectorType> {
    check_point(a, x)?;
    let (m, n) = (a.rows(), a.cols());
    let mut sets = vec![Vec::new(); m];
    let mut diffs = Vec::with_capacity(m);
    for j in 0..n {
        diffs.clear();
        for i in 0..m {
            diffs.push(a.finite(i, j)? - &x.coords[i]);
        }
        let min = diffs.iter().min().expect("m >= 1");
        for (i, d) in diffs.iter().enumerate() {
            if d == min {
                sets[i].push(j);
            }
        }
    }
    Ok(CovectorType { sets })
}

/// Membership in `tconv(A)` by residuation: with `λ_j = max_i (x_i − a_ij)`,
/// `x ∈ tconv(A)` iff `A ⊙ λ = x`.
pub fn contains_point(a: &TropicalMatrix, x: &ProjectivePoint) -> Result<bool> {
    check_point(a, x)?;
    let (m, n) = (a.rows(), a.cols());
    let mut lambda = Vec::with_capacity(n);
    for j in 0..n {
        let mut best: Option<ExactScalar> = None;
        for i in 0..m {
            let v = &x.coords[i] - a.finite(i, j)?;
            if best.as_ref().is_none_or(|b| &v > b) {
                best = Some(v);
            }
        }
        lambda.push(best.expect("m >= 1"));
    }
    for i in 0..m {
        let mut hit = false;
        for (j, l) in lambda.iter().enumerate() {
            if (a.finite(i, j)? + l) == x.coords[i] {
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Axis-parallel box `[lo_i, hi_i]` for coordinates `2..m` of the normalized
/// representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundingBox {
    pub lo: Vec<ExactScalar>,
    pub hi: Vec<ExactScalar>,
}

impl BoundingBox {
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn widths(&self) -> Vec<ExactScalar> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).collect()
    }

    /// Largest width, the constant `R`.
    pub fn r(&self) -> ExactScalar {
        self.widths().into_iter().max().unwrap_or_else(ExactScalar::zero)
    }

    /// Whether the normalized representative of `x` lies in the box.
    pub fn contains(&self, x: &ProjectivePoint) -> bool {
        let x = x.normalized();
        x.len() == self.dim() + 1
            && x.coords[1..]
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(c, (l, h))| l <= c && c <= h)
    }
}

/// Row-wise min/max of the normalized generators.
pub fn bounding_box(a: &TropicalMatrix) -> Result<BoundingBox> {
    let a = a.normalize_generators()?;
    let mut lo = Vec::with_capacity(a.rows() - 1);
    let mut hi = Vec::with_capacity(a.rows() - 1);
    for i in 1..a.rows() {
        let row: Vec<&ExactScalar> = (0..a.cols()).map(|j| a.finite(i, j)).collect::<Result<_>>()?;
        lo.push(row.iter().copied().min().expect("n >= 1").clone());
        hi.push(row.iter().copied().max().expect("n >= 1").clone());
    }
    Ok(BoundingBox { lo, hi })
}

/// Hilbert seminorm `max_i v_i − min_i v_i`.
pub fn hilbert_norm(v: &[ExactScalar]) -> ExactScalar {
    match (v.iter().max(), v.iter().min()) {
        (Some(hi), Some(lo)) => hi - lo,
        _ => ExactScalar::zero(),
    }
}

/// Hilbert projective distance between two points.
pub fn hilbert_distance(x: &ProjectivePoint, y: &ProjectivePoint) -> ExactScalar {
    let diff: Vec<ExactScalar> = x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect();
    hilbert_norm(&diff)
}
