//! Cells of the type decomposition as difference-constraint systems.

use num_traits::Zero;

use crate::covector::{CovectorType, ProjectivePoint};
use crate::error::{Error, Result};
use crate::matrix::TropicalMatrix;
use crate::scalar::{ExactScalar, ExtScalar};

/// A square matrix `B` describing `{x : x_i − x_j ≤ b_ij}`.
///
/// Cell systems carry `+∞` on the diagonal; Kleene stars carry `0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellSystem {
    b: TropicalMatrix,
}

impl CellSystem {
    pub fn new(b: TropicalMatrix) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "cell system must be square, got {}x{}",
                b.rows(),
                b.cols()
            )));
        }
        Ok(Self { b })
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::new(TropicalMatrix::from_ints(rows)).expect("square")
    }

    /// Builds a system from `f(i, j)` off the diagonal and `+∞` on it.
    pub fn with(m: usize, f: impl Fn(usize, usize) -> ExtScalar) -> Result<Self> {
        Self::new(TropicalMatrix::square_with(m, f)?)
    }

    pub fn matrix(&self) -> &TropicalMatrix {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.b.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtScalar {
        self.b.get(i, j)
    }

    /// `B − c` on finite entries.
    pub fn shifted(&self, c: &ExactScalar) -> Self {
        let m = self.dim();
        let neg = -c;
        let mut b = self.b.clone();
        for i in 0..m {
            for j in 0..m {
                b.set(i, j, self.b.get(i, j).shift(&neg));
            }
        }
        Self { b }
    }

    pub fn restrict(&self, idx: &[usize]) -> Self {
        Self {
            b: self.b.submatrix(idx, idx),
        }
    }

    /// Whether `x_i − x_j ≤ b_ij` for all `i ≠ j`.
    pub fn contains(&self, x: &ProjectivePoint) -> bool {
        let m = self.dim();
        if x.len() != m {
            return false;
        }
        let c = x.coords();
        (0..m).all(|i| {
            (0..m).all(|j| {
                i == j
                    || match self.get(i, j) {
                        ExtScalar::Finite(b) => &(&c[i] - &c[j]) <= b,
                        ExtScalar::Infinity => true,
                    }
            })
        })
    }

    /// Whether `x_i − x_j ≤ b_ij − r` for all `i ≠ j`.
    pub fn contains_with_margin(&self, x: &ProjectivePoint, r: &ExactScalar) -> bool {
        self.shifted(r).contains(x)
    }
}

/// `b_kj = min_{i ∈ S_j} (a_ki − a_ji)` off the diagonal.
pub fn cell_system(a: &TropicalMatrix, s: &CovectorType) -> Result<CellSystem> {
    let m = a.rows();
    if s.rows() != m {
        return Err(Error::DimensionMismatch(format!(
            "type has {} entries, matrix has {m} rows",
            s.rows()
        )));
    }
    a.require_finite()?;
    if m > 1 {
        if let Some(j) = (0..m).find(|&j| s.get(j).is_empty()) {
            return Err(Error::EmptyTypeEntry(j));
        }
    }
    if let Some(&bad) = s.sets().iter().flatten().find(|&&i| i >= a.cols()) {
        return Err(Error::DimensionMismatch(format!(
            "type references column {bad} of a {}-column matrix",
            a.cols()
        )));
    }
    CellSystem::with(m, |k, j| {
        s.get(j)
            .iter()
            .map(|&i| ExtScalar::Finite(a.get(k, i).finite().unwrap() - a.get(j, i).finite().unwrap()))
            .min()
            .expect("nonempty")
    })
}

/// All-pairs shortest paths with a zero diagonal, or the witness of a
/// negative cycle.
pub fn kleene_star(b: &CellSystem) -> Result<CellSystem> {
    let m = b.dim();
    let mut d: Vec<Vec<ExtScalar>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let v = b.get(i, j).clone();
                    if i == j {
                        v.oplus(&ExtScalar::zero())
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    if (0..m).any(|i| d[i][i].is_negative()) {
        return Err(negative_cycle(b));
    }
    for k in 0..m {
        for i in 0..m {
            if !d[i][k].is_finite() {
                continue;
            }
            for j in 0..m {
                let via = d[i][k].odot(&d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
        if (0..m).any(|i| d[i][i].is_negative()) {
            return Err(negative_cycle(b));
        }
    }
    CellSystem::new(TropicalMatrix::from_rows(d)?)
}

/// Finds a negative cycle by Bellman–Ford from a virtual source.
fn negative_cycle(b: &CellSystem) -> Error {
    let m = b.dim();
    let mut dist = vec![ExactScalar::zero(); m];
    let mut parent: Vec<Option<usize>> = vec![None; m];
    let mut last = None;
    for _ in 0..=m {
        last = None;
        for u in 0..m {
            for v in 0..m {
                if let ExtScalar::Finite(w) = b.get(u, v) {
                    let cand = &dist[u] + w;
                    if cand < dist[v] {
                        dist[v] = cand;
                        parent[v] = Some(u);
                        last = Some(v);
                    }
                }
            }
        }
        if last.is_none() {
            break;
        }
    }
    let Some(mut v) = last else {
        return Error::NoCycle;
    };
    for _ in 0..m {
        v = parent[v].expect("relaxed vertex has a parent");
    }
    // Walking parents traverses the cycle backwards.
    let mut rev = vec![v];
    let mut u = parent[v].expect("on cycle");
    while u != v {
        rev.push(u);
        u = parent[u].expect("on cycle");
    }
    rev.reverse();
    let start = rev.iter().enumerate().min_by_key(|(_, &x)| x).map(|(p, _)| p).unwrap();
    rev.rotate_left(start);
    let weight: ExactScalar = rev
        .iter()
        .zip(rev.iter().cycle().skip(1))
        .map(|(&i, &j)| b.get(i, j).finite().cloned().unwrap_or_else(ExactScalar::zero))
        .sum();
    Error::NegativeCycle {
        cycle: rev,
        weight: weight.to_string(),
    }
}

/// Classes of `i ~ j ⇔ b*_ij + b*_ji = 0` for a Kleene star, each sorted,
/// ordered by smallest element.
pub fn tight_classes(star: &CellSystem) -> Vec<Vec<usize>> {
    let m = star.dim();
    let mut class: Vec<Option<usize>> = vec![None; m];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..m {
        if class[i].is_some() {
            continue;
        }
        let id = out.len();
        let mut members = vec![i];
        class[i] = Some(id);
        for j in i + 1..m {
            if class[j].is_none() && is_tight(star, i, j) {
                class[j] = Some(id);
                members.push(j);
            }
        }
        out.push(members);
    }
    out
}

pub(crate) fn is_tight(star: &CellSystem, i: usize, j: usize) -> bool {
    match (star.get(i, j), star.get(j, i)) {
        (ExtScalar::Finite(a), ExtScalar::Finite(b)) => (a + b).is_zero(),
        _ => false,
    }
}

/// Affine dimension of `X_B`: number of tight classes minus one.
pub fn cell_dimension(b: &CellSystem) -> Result<usize> {
    let star = kleene_star(b)?;
    Ok(tight_classes(&star).len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covector::{contains_point, type_of};

    fn inf() -> ExtScalar {
        ExtScalar::Infinity
    }

    fn fin(v: i64) -> ExtScalar {
        ExtScalar::from_int(v)
    }

    #[test]
    fn singleton_types_on_hilbert_generators() {
        let h = TropicalMatrix::from_ints(&[[0, 2, 2], [2, 0, 2], [2, 2, 0]]);
        let s = CovectorType::new(vec![vec![0], vec![1], vec![2]]);
        let b = cell_system(&h, &s).unwrap();
        for k in 0..3 {
            for j in 0..3 {
                assert_eq!(b.get(k, j), &if k == j { inf() } else { fin(2) });
            }
        }
    }

    #[test]
    fn full_type_of_zero_matrix() {
        let a = TropicalMatrix::zeros(3, 2);
        let s = CovectorType::new(vec![vec![0, 1]; 3]);
        let b = cell_system(&a, &s).unwrap();
        assert_eq!(b.get(0, 1), &fin(0));
        assert_eq!(b.get(2, 0), &fin(0));
        assert_eq!(cell_dimension(&b).unwrap(), 0);
    }

    #[test]
    fn empty_entry_is_reported() {
        let a = TropicalMatrix::zeros(2, 2);
        let s = CovectorType::new(vec![vec![0, 1], vec![]]);
        assert_eq!(cell_system(&a, &s), Err(Error::EmptyTypeEntry(1)));
    }

    #[test]
    fn square_cell_of_collinear_generators() {
        let a = TropicalMatrix::from_ints(&[[0, 0, 0], [0, -2, -4], [0, 2, 4]]);
        let x = ProjectivePoint::from_ints(&[0, -3, 1]);
        let s = type_of(&a, &x).unwrap();
        let b = cell_system(&a, &s).unwrap();
        assert_eq!(cell_dimension(&b).unwrap(), 2);
        // X_S is a region of the type decomposition inside P.
        for y1 in -5..=1 {
            for y2 in -1..=5 {
                let p = ProjectivePoint::from_ints(&[0, y1, y2]);
                if b.contains(&p) {
                    assert!(contains_point(&a, &p).unwrap());
                    assert!(s.is_contained_in(&type_of(&a, &p).unwrap()));
                }
            }
        }
    }

    #[test]
    fn star_of_two_cycle() {
        let b = CellSystem::with(2, |_, _| fin(1)).unwrap();
        let s = kleene_star(&b).unwrap();
        assert_eq!(s, CellSystem::from_ints(&[[0, 1], [1, 0]]));
        assert_eq!(kleene_star(&s).unwrap(), s);
    }

    #[test]
    fn star_detects_negative_cycle() {
        let b = CellSystem::with(2, |_, _| fin(-1)).unwrap();
        assert_eq!(
            kleene_star(&b),
            Err(Error::NegativeCycle {
                cycle: vec![0, 1],
                weight: "-2".into()
            })
        );
    }

    #[test]
    fn star_finds_longer_negative_cycle() {
        let b = CellSystem::new(
            TropicalMatrix::from_rows(vec![
                vec![inf(), fin(1), inf()],
                vec![inf(), inf(), fin(1)],
                vec![fin(-3), inf(), inf()],
            ])
            .unwrap(),
        )
        .unwrap();
        assert_eq!(
            kleene_star(&b),
            Err(Error::NegativeCycle {
                cycle: vec![0, 1, 2],
                weight: "-1".into()
            })
        );
    }

    #[test]
    fn star_of_zero_system() {
        let b = CellSystem::with(3, |_, _| fin(0)).unwrap();
        let s = kleene_star(&b).unwrap();
        assert!(s.matrix().entries().iter().all(|e| e == &fin(0)));
    }

    #[test]
    fn dimensions() {
        let b = CellSystem::with(3, |_, _| fin(1)).unwrap();
        assert_eq!(cell_dimension(&b).unwrap(), 2);
        let b = CellSystem::new(
            TropicalMatrix::from_rows(vec![vec![inf(), fin(3)], vec![fin(-3), inf()]]).unwrap(),
        )
        .unwrap();
        assert_eq!(cell_dimension(&b).unwrap(), 0);
    }
}
