use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cell::{kleene_star, tight_classes, CellSystem};
use crate::error::{Error, Result};
use crate::scalar::{ceil_to_bigint, floor_to_bigint, ExactScalar, ExtScalar};

/// The full-dimensional polytrope `X_T` obtained from a cell by keeping one
/// coordinate per class of forced equalities, together with the lifting map
/// `ψ(y)_i = min_t (b*_{i,D_t} + y_t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedCell {
    /// Constraints of `X_T` on the coordinates `reps`, diagonal `+∞`.
    pub system: CellSystem,
    /// Kleene star of the original cell.
    pub star: CellSystem,
    /// The representative set `D`, increasing.
    pub reps: Vec<usize>,
}

impl ProjectedCell {
    /// `ψ(y)` for `y` indexed like `reps`.
    pub fn psi(&self, y: &[ExactScalar]) -> Vec<ExactScalar> {
        (0..self.star.dim())
            .map(|i| {
                self.reps
                    .iter()
                    .zip(y)
                    .filter_map(|(&d, yd)| self.star.get(i, d).finite().map(|b| b + yd))
                    .min()
                    .expect("every coordinate is tied to some representative")
            })
            .collect()
    }
}

/// Smallest index of each tight class of the cell.
pub fn tight_representatives(b: &CellSystem) -> Result<Vec<usize>> {
    let star = kleene_star(b)?;
    Ok(tight_classes(&star).into_iter().map(|c| c[0]).collect())
}

/// Restricts the closure of `B` to `D`, which must hold exactly one index of
/// each tight class.
pub fn project_to_xt(b: &CellSystem, d: &[usize]) -> Result<ProjectedCell> {
    let star = kleene_star(b)?;
    let classes = tight_classes(&star);
    let mut reps = d.to_vec();
    reps.sort_unstable();
    let valid = reps.len() == classes.len()
        && reps.windows(2).all(|w| w[0] < w[1])
        && classes
            .iter()
            .all(|c| c.iter().filter(|i| reps.binary_search(i).is_ok()).count() == 1);
    if !valid {
        return Err(Error::InvalidRepresentatives(format!(
            "need one index from each of {} tight classes",
            classes.len()
        )));
    }
    let mut system = star.restrict(&reps);
    let mut mat = system.matrix().clone();
    for t in 0..reps.len() {
        mat.set(t, t, ExtScalar::Infinity);
    }
    system = CellSystem::new(mat)?;
    Ok(ProjectedCell { system, star, reps })
}

/// `|s·X_B ∩ Z^{m-1}|` with the first coordinate fixed at zero, by scanning
/// the box read off the Kleene star.
pub fn polytrope_lattice_count(b: &CellSystem, s: u64) -> Result<u64> {
    let m = b.dim();
    let star = kleene_star(b)?;
    if m == 1 {
        return Ok(1);
    }
    let sq = ExactScalar::from_integer(BigInt::from(s));
    let bound = |e: &ExtScalar| e.finite().map(|v| v * &sq).ok_or(Error::Unbounded);
    let scaled: Vec<Vec<ExactScalar>> = (0..m)
        .map(|i| (0..m).map(|j| bound(star.get(i, j))).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let to_i = |v: BigInt| v.to_i64().ok_or(Error::Overflow);
    let mut lo = vec![0i64; m];
    let mut hi = vec![0i64; m];
    for i in 1..m {
        lo[i] = to_i(ceil_to_bigint(&-&scaled[0][i]))?;
        hi[i] = to_i(floor_to_bigint(&scaled[i][0]))?;
        if lo[i] > hi[i] {
            return Ok(0);
        }
    }
    let int: Vec<Vec<i64>> = scaled
        .iter()
        .map(|r| r.iter().map(|v| to_i(floor_to_bigint(v))).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut x = lo.clone();
    let mut count = 0u64;
    loop {
        if (1..m).all(|i| (0..m).all(|j| i == j || x[i] - x[j] <= int[i][j]))
            && (1..m).all(|j| -x[j] <= int[0][j])
        {
            count += 1;
        }
        let mut i = 1;
        while i < m {
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
            i += 1;
        }
        if i == m {
            return Ok(count);
        }
    }
}
