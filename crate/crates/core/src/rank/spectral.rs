use num_traits::Zero;

use crate::cell::{is_tight, kleene_star, CellSystem};
use crate::covector::ProjectivePoint;
use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, ExtScalar};

/// Minimum cycle mean of a weighted digraph and its critical graph.
///
/// Edge `i → j` carries weight `b_ij`. All indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralData {
    pub rho_min: ExactScalar,
    /// An elementary cycle of mean `rho_min`, starting at its smallest vertex.
    pub critical_cycle: Vec<usize>,
    /// Strongly connected components of the critical graph, each sorted.
    pub critical_sccs: Vec<Vec<usize>>,
    /// Smallest vertex of each critical component.
    pub representatives: Vec<usize>,
}

/// Karp's recurrence from a virtual source joined to every vertex.
fn karp(b: &CellSystem) -> Result<ExactScalar> {
    let n = b.dim();
    let mut layers: Vec<Vec<Option<ExactScalar>>> = vec![vec![Some(ExactScalar::zero()); n]];
    for k in 1..=n {
        let prev = &layers[k - 1];
        let mut cur: Vec<Option<ExactScalar>> = vec![None; n];
        for u in 0..n {
            let Some(du) = &prev[u] else { continue };
            for (v, slot) in cur.iter_mut().enumerate() {
                if let ExtScalar::Finite(w) = b.get(u, v) {
                    let cand = du + w;
                    if slot.as_ref().is_none_or(|s| &cand < s) {
                        *slot = Some(cand);
                    }
                }
            }
        }
        layers.push(cur);
    }
    let mut best: Option<ExactScalar> = None;
    for v in 0..n {
        let Some(dn) = &layers[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| {
                layers[k][v]
                    .as_ref()
                    .map(|dk| (dn - dk) / ExactScalar::from_integer(((n - k) as i64).into()))
            })
            .max()
            .expect("layer 0 is finite");
        if best.as_ref().is_none_or(|b| &worst < b) {
            best = Some(worst);
        }
    }
    best.ok_or(Error::NoCycle)
}

/// Exact minimum cycle mean with a critical cycle, the critical components
/// and their representatives.
pub fn min_cycle_mean(b: &CellSystem) -> Result<SpectralData> {
    let n = b.dim();
    let rho = karp(b)?;
    let shifted = b.shifted(&rho);
    let star = kleene_star(&shifted)?;

    let crit_edge = |i: usize, j: usize| match (shifted.get(i, j), star.get(j, i)) {
        (ExtScalar::Finite(a), ExtScalar::Finite(c)) => (a + c).is_zero(),
        _ => false,
    };
    let critical: Vec<usize> = (0..n)
        .filter(|&i| (0..n).any(|j| crit_edge(i, j)))
        .collect();

    let mut sccs: Vec<Vec<usize>> = Vec::new();
    for &i in &critical {
        match sccs.iter_mut().find(|c| c[0] == i || is_tight(&star, c[0], i)) {
            Some(c) => c.push(i),
            None => sccs.push(vec![i]),
        }
    }
    let representatives = sccs.iter().map(|c| c[0]).collect();

    let mut path = vec![critical[0]];
    let cycle = loop {
        let cur = *path.last().unwrap();
        let next = (0..n).find(|&j| crit_edge(cur, j)).expect("critical vertex has a critical out-edge");
        if let Some(pos) = path.iter().position(|&v| v == next) {
            let mut c = path.split_off(pos);
            let start = c.iter().enumerate().min_by_key(|(_, &v)| v).unwrap().0;
            c.rotate_left(start);
            break c;
        }
        path.push(next);
    };

    Ok(SpectralData {
        rho_min: rho,
        critical_cycle: cycle,
        critical_sccs: sccs,
        representatives,
    })
}

/// Radius of the largest Hilbert ball inside the bounded nonempty polytrope
/// `X_B`, and a center of such a ball (first coordinate zero).
pub fn inner_radius(b: &CellSystem) -> Result<(ExactScalar, ProjectivePoint)> {
    let m = b.dim();
    let star = kleene_star(b)?;
    if star.matrix().entries().iter().any(|e| !e.is_finite()) {
        return Err(Error::Unbounded);
    }
    if m == 1 {
        return Ok((ExactScalar::zero(), ProjectivePoint::new(vec![ExactScalar::zero()])));
    }
    let spec = min_cycle_mean(b)?;
    let sub = kleene_star(&b.shifted(&spec.rho_min))?;
    let c = spec.representatives[0];
    let u: Vec<ExactScalar> = (0..m)
        .map(|i| sub.get(i, c).finite().cloned().ok_or(Error::Unbounded))
        .collect::<Result<_>>()?;
    Ok((spec.rho_min, ProjectivePoint::new(u).normalized()))
}
