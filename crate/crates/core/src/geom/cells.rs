use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cell::{cell_dimension, cell_system, CellSystem};
use crate::covector::CovectorType;
use crate::error::{Error, Result};
use crate::geom::alcove::{cube_base, cube_count, factorial, permutations};
use crate::geom::budget::Budget;
use crate::geom::polytope::{IntGenerators, VertexPolytope};
use crate::matrix::TropicalMatrix;
use crate::rank::{inner_radius, project_to_xt, tight_representatives};
use crate::scalar::{ExactScalar, ExtScalar};

/// One cell of the type decomposition of a tropical polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellInfo {
    pub covector: CovectorType,
    /// Constraints in original units.
    pub system: CellSystem,
    pub dimension: usize,
    /// Exact volume for full-dimensional cells.
    pub volume: Option<ExactScalar>,
}

/// Type of an integer point `x` against integer generators.
fn int_type(g: &IntGenerators, x: &[i64]) -> CovectorType {
    let mut sets = vec![Vec::new(); g.m];
    for j in 0..g.n {
        let best = (0..g.m).map(|i| x[i] - g.at(i, j)).max().unwrap();
        for (i, set) in sets.iter_mut().enumerate() {
            if x[i] - g.at(i, j) == best {
                set.push(j);
            }
        }
    }
    CovectorType::new(sets)
}

/// Types of the points of `(1/k)·Z^{m-1}` that lie in `P`.
fn grid_types(p: &VertexPolytope, k: i64, budget: Budget) -> Result<Vec<CovectorType>> {
    let (lo, hi) = p.int_box()?;
    let d = lo.len();
    let klo: Vec<i64> = lo.iter().map(|v| v * k).collect();
    let khi: Vec<i64> = hi.iter().map(|v| v * k + 1).collect();
    let points = cube_count(&klo, &khi);
    budget.check(points)?;
    let g = p.int_generators(k)?;
    let mut x = vec![0i64; d + 1];
    let mut lambda = vec![0i64; g.n];
    let mut out = Vec::new();
    for idx in 0..points {
        let y = cube_base(idx, &klo, &khi);
        x[1..].copy_from_slice(&y);
        if g.contains(&x, &mut lambda) {
            out.push(int_type(&g, &x));
        }
    }
    Ok(out)
}

/// Cells of `P` met by the `(1/refine)`-grid or containing an alcove centroid,
/// ordered by type. Full-dimensional cells carry their volume, obtained by
/// counting the alcoves whose centroid has the cell's type.
///
/// Every full-dimensional cell is found for any `refine`; every
/// pseudovertex is found because pseudovertices are integer.
pub fn enumerate_cells(p: &VertexPolytope, refine: u32, budget: Budget) -> Result<Vec<CellInfo>> {
    if refine == 0 {
        return Err(Error::OutOfRange("refine must be positive".into()));
    }
    let d = p.dim();
    let mut found: BTreeMap<CovectorType, u128> = BTreeMap::new();
    for t in grid_types(p, i64::from(refine), budget)? {
        found.entry(t).or_insert(0);
    }
    if d > 0 {
        let (lo, hi) = p.int_box()?;
        let cubes = cube_count(&lo, &hi);
        let perms = permutations(d);
        budget.check(cubes.saturating_mul(perms.len() as u128))?;
        let m = d as i64 + 1;
        let gm = p.int_generators(m)?;
        let mut x = vec![0i64; d + 1];
        let mut lambda = vec![0i64; gm.n];
        for idx in 0..cubes {
            let base = cube_base(idx, &lo, &hi);
            for order in &perms {
                for (l, &c) in order.iter().enumerate() {
                    x[c + 1] = m * base[c] + (m - 1 - l as i64);
                }
                if gm.contains(&x, &mut lambda) {
                    *found.entry(int_type(&gm, &x)).or_insert(0) += 1;
                }
            }
        }
    }
    let a = p.original();
    let denom = factorial(d) * p.scale_denominator().pow(d as u32);
    found
        .into_iter()
        .map(|(covector, alcoves)| {
            let system = cell_system(&a, &covector)?;
            let dimension = cell_dimension(&system)?;
            let volume = (dimension == d)
                .then(|| ExactScalar::new(BigInt::from(alcoves), denom.clone()));
            Ok(CellInfo {
                covector,
                system,
                dimension,
                volume,
            })
        })
        .collect()
}

/// Cells of the largest dimension present in `P`.
///
/// If that dimension is `k − 1`, each such cell is a lattice-preserving copy
/// of a full-dimensional polytrope in `TP^{k-1}`, so its relative interior
/// meets `(1/k)·Z^{m-1}`; a grid at that denominator finds all of them.
pub fn max_dimensional_cells(p: &VertexPolytope, budget: Budget) -> Result<Vec<CellInfo>> {
    let a = p.original();
    let mut by_dim: Vec<CellInfo> = Vec::new();
    for k in (1..=p.rows()).rev() {
        let types = grid_types(p, k as i64, budget)?;
        let mut seen: BTreeMap<CovectorType, ()> = BTreeMap::new();
        for t in types {
            seen.insert(t, ());
        }
        by_dim.clear();
        let mut best = 0usize;
        for (covector, ()) in seen {
            let system = cell_system(&a, &covector)?;
            let dimension = cell_dimension(&system)?;
            if dimension > best {
                best = dimension;
                by_dim.clear();
            }
            if dimension == best {
                by_dim.push(CellInfo {
                    covector,
                    system,
                    dimension,
                    volume: None,
                });
            }
        }
        if best + 1 == k {
            return Ok(by_dim);
        }
    }
    Ok(by_dim)
}

/// Largest inner radius of `X_T` over the maximal-dimensional cells, where
/// `X_T` is the full-dimensional projection of a cell.
pub fn max_radius_xt(p: &VertexPolytope, budget: Budget) -> Result<ExactScalar> {
    let mut best = ExactScalar::zero();
    for c in max_dimensional_cells(p, budget)? {
        let reps = tight_representatives(&c.system)?;
        let xt = project_to_xt(&c.system, &reps)?;
        let (r, _) = inner_radius(&xt.system)?;
        if r > best {
            best = r;
        }
    }
    Ok(best)
}

type Dist = Vec<Vec<Option<ExactScalar>>>;

fn closure(mut c: Dist) -> Option<Dist> {
    let n = c.len();
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = Some(match row[i].take() {
            Some(v) if v < ExactScalar::zero() => v,
            _ => ExactScalar::zero(),
        });
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = c[i][k].clone() else { continue };
            for j in 0..n {
                if let Some(kj) = &c[k][j] {
                    let via = &ik + kj;
                    if c[i][j].as_ref().is_none_or(|v| &via < v) {
                        c[i][j] = Some(via);
                    }
                }
            }
        }
    }
    if (0..n).any(|i| c[i][i].as_ref().is_some_and(|v| v < &ExactScalar::zero())) {
        None
    } else {
        Some(c)
    }
}

/// Lasserre's recursion on facets, each facet projected by substituting one
/// of its two coordinates. Node 0 is the anchor `x_1 = 0`.
fn lasserre(c: Dist) -> Result<ExactScalar> {
    let n = c.len();
    let Some(c) = closure(c) else {
        return Ok(ExactScalar::zero());
    };
    if n == 1 {
        return Ok(ExactScalar::one());
    }
    for i in 0..n {
        for j in i + 1..n {
            match (&c[i][j], &c[j][i]) {
                (Some(a), Some(b)) if (a + b).is_zero() => return Ok(ExactScalar::zero()),
                (None, _) | (_, None) => return Err(Error::Unbounded),
                _ => {}
            }
        }
    }
    let mut total = ExactScalar::zero();
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            let b = c[p][q].clone().expect("bounded");
            if b.is_zero() {
                continue;
            }
            let (k, o, shift) = if p != 0 { (p, q, b.clone()) } else { (q, p, -b.clone()) };
            let keep: Vec<usize> = (0..n).filter(|&v| v != k).collect();
            let mut face: Dist = vec![vec![None; n - 1]; n - 1];
            for (a, &i) in keep.iter().enumerate() {
                for (bb, &j) in keep.iter().enumerate() {
                    if a == bb {
                        continue;
                    }
                    let mut best = c[i][j].clone();
                    let mut relax = |v: ExactScalar| {
                        if best.as_ref().is_none_or(|w| &v < w) {
                            best = Some(v);
                        }
                    };
                    if i == o {
                        if let Some(kj) = &c[k][j] {
                            relax(kj - &shift);
                        }
                    }
                    if j == o {
                        if let Some(ik) = &c[i][k] {
                            relax(ik + &shift);
                        }
                    }
                    face[a][bb] = best;
                }
            }
            total += b * lasserre(face)?;
        }
    }
    Ok(total / ExactScalar::from_integer(BigInt::from(n - 1)))
}

/// Exact volume of the bounded polytrope `{x : x_i − x_j ≤ b_ij, x_1 = 0}`.
pub fn polytrope_volume(b: &CellSystem) -> Result<ExactScalar> {
    let n = b.dim();
    let c: Dist = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { None } else { b.get(i, j).finite().cloned() })
                .collect()
        })
        .collect();
    lasserre(c)
}

/// Covector types of the full-dimensional cells of `P`, found by assigning
/// each column to the unique row attaining its minimum and pruning any
/// partial assignment whose constraints already force a cycle of weight
/// `≤ 0`.
pub fn full_dimensional_types(a: &TropicalMatrix) -> Result<Vec<CovectorType>> {
    let a = a.normalize_generators()?;
    let (m, n) = (a.rows(), a.cols());
    let vals = a.finite_rows()?;
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    let init: Dist = vec![vec![None; m]; m];
    search(&vals, 0, &mut assign, &init, &mut out);
    Ok(out
        .into_iter()
        .map(|asg: Vec<usize>| {
            let mut sets = vec![Vec::new(); m];
            for (j, &i) in asg.iter().enumerate() {
                sets[i].push(j);
            }
            CovectorType::new(sets)
        })
        .collect())
}

fn search(vals: &[Vec<ExactScalar>], j: usize, assign: &mut Vec<usize>, dist: &Dist, out: &mut Vec<Vec<usize>>) {
    let (m, n) = (vals.len(), vals[0].len());
    let used: Vec<bool> = (0..m).map(|i| assign[..j].contains(&i)).collect();
    let missing = used.iter().filter(|u| !**u).count();
    if missing > n - j {
        return;
    }
    if j == n {
        out.push(assign.clone());
        return;
    }
    for i in 0..m {
        // Column j attains its minimum only in row i: x_k − x_i < a_kj − a_ij.
        let mut next = dist.clone();
        let mut ok = true;
        for k in 0..m {
            if k == i {
                continue;
            }
            let w = &vals[k][j] - &vals[i][j];
            if next[k][i].as_ref().is_none_or(|v| &w < v) {
                next[k][i] = Some(w);
            }
        }
        // Strict constraints: a cycle of weight ≤ 0 empties the open cell.
        for u in 0..m {
            for v in 0..m {
                if let (Some(a), Some(b)) = (&next[u][i], &next[i][v]) {
                    let via = a + b;
                    if u == v {
                        if via <= ExactScalar::zero() {
                            ok = false;
                        }
                    } else if next[u][v].as_ref().is_none_or(|w| &via < w) {
                        next[u][v] = Some(via);
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        let mut changed = true;
        while changed && ok {
            changed = false;
            for k in 0..m {
                for u in 0..m {
                    for v in 0..m {
                        if let (Some(a), Some(b)) = (&next[u][k], &next[k][v]) {
                            let via = a + b;
                            if u == v {
                                if via <= ExactScalar::zero() {
                                    ok = false;
                                }
                            } else if next[u][v].as_ref().is_none_or(|w| &via < w) {
                                next[u][v] = Some(via);
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
        if ok {
            assign[j] = i;
            search(vals, j + 1, assign, &next, out);
        }
    }
}

/// `Vol^{m-1}(P)` as the sum of exact polytrope volumes over the
/// full-dimensional cells. Independent of any grid, so it handles generators
/// with large denominators.
pub fn volume_by_cells(a: &TropicalMatrix) -> Result<ExactScalar> {
    let a = a.normalize_generators()?;
    if a.rows() == 1 {
        return Ok(ExactScalar::one());
    }
    let mut total = ExactScalar::zero();
    for t in full_dimensional_types(&a)? {
        let b = cell_system(&a, &t)?;
        total += polytrope_volume(&b)?;
    }
    Ok(total)
}

/// Checks that a cell's Kleene star has integer entries; its vertices are
/// then integer points.
pub fn has_integer_pseudovertices(c: &CellInfo) -> Result<bool> {
    let star = crate::cell::kleene_star(&c.system)?;
    Ok(star
        .matrix()
        .entries()
        .iter()
        .all(|e| matches!(e, ExtScalar::Finite(v) if v.is_integer())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::hilbert::{hilbert_ball_generators, outer_parallel_body};
    use crate::geom::polytope::volume;
    use crate::scalar::{int, ratio};

    fn four_generators() -> VertexPolytope {
        VertexPolytope::from_ints(&[[0, 0, 0, 0], [0, 1, 0, -1], [0, -1, -4, -3]]).unwrap()
    }

    #[test]
    fn four_generators_give_three_full_cells() {
        let cells = enumerate_cells(&four_generators(), 3, Budget::unlimited()).unwrap();
        let full: Vec<&CellInfo> = cells.iter().filter(|c| c.dimension == 2).collect();
        assert_eq!(full.len(), 3);
        let total: ExactScalar = full.iter().map(|c| c.volume.clone().unwrap()).sum();
        assert_eq!(total, int(4));
        for c in &full {
            assert_eq!(polytrope_volume(&c.system).unwrap(), c.volume.clone().unwrap());
        }
        for c in &cells {
            assert!(has_integer_pseudovertices(c).unwrap());
            if c.dimension == 0 {
                let star = crate::cell::kleene_star(&c.system).unwrap();
                assert!(star.get(1, 0).finite().unwrap().is_integer());
            }
        }
    }

    #[test]
    fn lasserre_on_simple_shapes() {
        // Unit square [0,1]².
        let sq = CellSystem::with(3, |i, j| match (i, j) {
            (0, _) => ExtScalar::zero(),
            (_, 0) => ExtScalar::from_int(1),
            _ => ExtScalar::Infinity,
        })
        .unwrap();
        assert_eq!(polytrope_volume(&sq).unwrap(), int(1));
        // Hexagon of radius 2 around the origin.
        let hex = CellSystem::with(3, |_, _| ExtScalar::from_int(2)).unwrap();
        assert_eq!(polytrope_volume(&hex).unwrap(), int(12));
        // A segment in TP² has no area.
        let seg = CellSystem::with(3, |i, j| match (i, j) {
            (1, 2) => ExtScalar::zero(),
            (2, 1) => ExtScalar::zero(),
            _ => ExtScalar::from_int(1),
        })
        .unwrap();
        assert_eq!(polytrope_volume(&seg).unwrap(), int(0));
        // Cube [0,1]³ and its standard alcove.
        let cube = CellSystem::with(4, |i, j| match (i, j) {
            (0, _) => ExtScalar::zero(),
            (_, 0) => ExtScalar::from_int(1),
            _ => ExtScalar::Infinity,
        })
        .unwrap();
        assert_eq!(polytrope_volume(&cube).unwrap(), int(1));
        let simplex = CellSystem::with(4, |i, j| match (i, j) {
            (0, 3) | (3, 2) | (2, 1) => ExtScalar::zero(),
            (1, 0) => ExtScalar::from_int(1),
            _ => ExtScalar::Infinity,
        })
        .unwrap();
        assert_eq!(polytrope_volume(&simplex).unwrap(), ratio(1, 6));
    }

    #[test]
    fn cell_volumes_match_alcove_volumes() {
        for rows in [
            vec![vec![0, 0, 0], vec![0, -2, -4], vec![0, 2, 4]],
            vec![vec![-1, -4, -7], vec![-3, -2, 2], vec![2, -1, -3]],
            vec![vec![0, 0, 0, 0], vec![0, 1, 0, -1], vec![0, -1, -4, -3]],
            vec![vec![0, 3, 1, 0], vec![2, 0, 0, 1], vec![1, 1, 0, 3], vec![0, 2, 2, 0]],
        ] {
            let p = VertexPolytope::from_ints(&rows).unwrap();
            let alc = volume(&p, Budget::unlimited()).unwrap().volume;
            assert_eq!(volume_by_cells(&p.original()).unwrap(), alc);
        }
    }

    #[test]
    fn cell_volume_with_rational_generators() {
        let p = VertexPolytope::from_ints(&[[0, 0], [0, 1], [0, 1]]).unwrap();
        let body = outer_parallel_body(&p, &ratio(1, 5)).unwrap();
        let alc = volume(&body, Budget::unlimited()).unwrap().volume;
        assert_eq!(volume_by_cells(&body.original()).unwrap(), alc);
        let h = hilbert_ball_generators(4, &ratio(1, 3)).unwrap();
        assert_eq!(volume_by_cells(&h).unwrap(), ratio(4, 27));
    }

    #[test]
    fn radius_of_maximal_cells() {
        let p = VertexPolytope::from_ints(&[[0, 0], [0, 1]]).unwrap();
        let cells = max_dimensional_cells(&p, Budget::unlimited()).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(max_radius_xt(&p, Budget::unlimited()).unwrap(), ratio(1, 2));
        let z = VertexPolytope::from_ints(&[[0, 0], [0, 0], [0, 0]]).unwrap();
        assert_eq!(max_dimensional_cells(&z, Budget::unlimited()).unwrap()[0].dimension, 0);
        assert_eq!(max_radius_xt(&z, Budget::unlimited()).unwrap(), int(0));
    }
}
