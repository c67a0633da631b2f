use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::TropicalMatrix;
use crate::scalar::{ExactScalar, ExtScalar};

/// Optimal assignment of a square matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermanentResult {
    pub value: ExactScalar,
    /// `witness[i]` is the column assigned to row `i`.
    pub witness: Vec<usize>,
    /// The minimum is attained by at least two permutations.
    pub singular: bool,
}

/// Shortest augmenting path assignment over `R ∪ {∞}`; `∞` entries are
/// treated as missing edges.
fn assignment(m: &TropicalMatrix) -> Result<(ExactScalar, Vec<usize>)> {
    let n = m.rows();
    let zero = ExactScalar::zero();
    // 1-based potentials; index 0 is the virtual column.
    let mut u = vec![zero.clone(); n + 1];
    let mut v = vec![zero.clone(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<ExactScalar>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<ExactScalar> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                if let ExtScalar::Finite(c) = m.get(i0 - 1, j - 1) {
                    let cur = c - &u[i0] - &v[j];
                    if minv[j].as_ref().is_none_or(|mv| &cur < mv) {
                        minv[j] = Some(cur);
                        way[j] = j0;
                    }
                }
                if let Some(mv) = &minv[j] {
                    if delta.as_ref().is_none_or(|d| mv < d) {
                        delta = Some(mv.clone());
                        j1 = j;
                    }
                }
            }
            let delta = delta.ok_or(Error::NoFinitePermanent)?;
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(mv) = &mut minv[j] {
                    *mv -= &delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut witness = vec![0usize; n];
    for j in 1..=n {
        witness[p[j] - 1] = j - 1;
    }
    let value = witness
        .iter()
        .enumerate()
        .map(|(i, &j)| m.get(i, j).finite().cloned().expect("assigned edges are finite"))
        .sum();
    Ok((value, witness))
}

/// `tper(M) = min_π Σ_i m_{iπ(i)}`, with an optimal permutation and a flag
/// telling whether the minimum is attained twice.
pub fn tropical_permanent(m: &TropicalMatrix) -> Result<PermanentResult> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "permanent needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let (value, witness) = assignment(m)?;
    let mut singular = false;
    for (i, &j) in witness.iter().enumerate() {
        let mut forbidden = m.clone();
        forbidden.set(i, j, ExtScalar::Infinity);
        if let Ok((alt, _)) = assignment(&forbidden) {
            if alt == value {
                singular = true;
                break;
            }
        }
    }
    Ok(PermanentResult {
        value,
        witness,
        singular,
    })
}

/// Largest `r` with a tropically nonsingular `r × r` minor.
pub fn tropical_rank(a: &TropicalMatrix) -> Result<usize> {
    a.require_finite()?;
    let top = a.rows().min(a.cols());
    for r in (2..=top).rev() {
        for rows in combinations(a.rows(), r) {
            for cols in combinations(a.cols(), r) {
                if !tropical_permanent(&a.submatrix(&rows, &cols))?.singular {
                    return Ok(r);
                }
            }
        }
    }
    Ok(1)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}
