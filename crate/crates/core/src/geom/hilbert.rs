use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::geom::polytope::VertexPolytope;
use crate::matrix::TropicalMatrix;
use crate::scalar::{floor_to_bigint, ExactScalar, ExtScalar};

/// `d × d` matrix with zero diagonal and `eps` elsewhere; its tropical convex
/// hull is the Hilbert ball of radius `eps` about the origin.
pub fn hilbert_ball_generators(d: usize, eps: &ExactScalar) -> Result<TropicalMatrix> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("ball dimension d = {d} must be at least 2")));
    }
    if !eps.is_positive() {
        return Err(Error::OutOfRange(format!("radius {eps} must be positive")));
    }
    let entries = (0..d * d)
        .map(|k| {
            if k / d == k % d {
                ExtScalar::zero()
            } else {
                ExtScalar::Finite(eps.clone())
            }
        })
        .collect();
    TropicalMatrix::new(d, d, entries)
}

fn check_ball_args(d: usize, delta: &ExactScalar) -> Result<()> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("ball dimension d = {d} must be at least 2")));
    }
    if delta.is_negative() {
        return Err(Error::OutOfRange(format!("radius {delta} must be nonnegative")));
    }
    Ok(())
}

/// Lattice points of the Hilbert ball of radius `delta` in `TP^{d-1}`:
/// `(⌊δ⌋+1)^d − ⌊δ⌋^d`.
pub fn hilbert_ball_count(d: usize, delta: &ExactScalar) -> Result<BigInt> {
    check_ball_args(d, delta)?;
    let f = floor_to_bigint(delta);
    let g: BigInt = &f + 1;
    Ok(g.pow(d as u32) - f.pow(d as u32))
}

/// Volume of the Hilbert ball of radius `delta` in `TP^{d-1}`: `d·δ^{d-1}`.
pub fn hilbert_ball_volume(d: usize, delta: &ExactScalar) -> Result<ExactScalar> {
    check_ball_args(d, delta)?;
    let pow = (0..d - 1).fold(ExactScalar::from_integer(1.into()), |acc, _| acc * delta);
    Ok(pow * ExactScalar::from_integer(d.into()))
}

/// Generators `A_j + H_k` of `P + B_H(eps)`, column `j·m + k`.
pub fn outer_parallel_body(p: &VertexPolytope, eps: &ExactScalar) -> Result<VertexPolytope> {
    let m = p.rows();
    let h = hilbert_ball_generators(m.max(2), eps)?;
    let a = p.original();
    let mut cols = Vec::with_capacity(m * a.cols());
    for j in 0..a.cols() {
        for k in 0..m {
            cols.push(
                (0..m)
                    .map(|i| a.get(i, j).odot(h.get(i, k)))
                    .collect::<Vec<ExtScalar>>(),
            );
        }
    }
    let rows: Vec<Vec<ExtScalar>> = (0..m)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    VertexPolytope::new(&TropicalMatrix::from_rows(rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covector::ProjectivePoint;
    use crate::geom::budget::Budget;
    use crate::geom::polytope::{count_lattice_points, volume};
    use crate::scalar::{int, ratio};

    #[test]
    fn generator_points_of_the_hexagon() {
        let p = VertexPolytope::new(&hilbert_ball_generators(3, &int(2)).unwrap()).unwrap();
        let g = p.original();
        let pts: Vec<(ExtScalar, ExtScalar)> = (0..3).map(|j| (g.get(1, j).clone(), g.get(2, j).clone())).collect();
        assert_eq!(
            pts,
            vec![
                (ExtScalar::from_int(2), ExtScalar::from_int(2)),
                (ExtScalar::from_int(-2), ExtScalar::from_int(0)),
                (ExtScalar::from_int(0), ExtScalar::from_int(-2)),
            ]
        );
        assert!(p.contains(&ProjectivePoint::from_ints(&[0, 0, 0])).unwrap());
    }

    #[test]
    fn segment_in_tp1() {
        let p = VertexPolytope::new(&hilbert_ball_generators(2, &int(1)).unwrap()).unwrap();
        for y in -3..=3 {
            let inside = p.contains(&ProjectivePoint::from_ints(&[0, y])).unwrap();
            assert_eq!(inside, (-1..=1).contains(&y));
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(hilbert_ball_count(3, &int(2)).unwrap(), BigInt::from(19));
        assert_eq!(hilbert_ball_count(2, &int(0)).unwrap(), BigInt::from(1));
        assert_eq!(hilbert_ball_count(3, &ratio(5, 2)).unwrap(), BigInt::from(19));
        assert_eq!(hilbert_ball_volume(3, &ratio(1, 3)).unwrap(), ratio(1, 3));
        assert_eq!(hilbert_ball_volume(2, &ratio(7, 2)).unwrap(), int(7));
        assert!(hilbert_ball_count(1, &int(1)).is_err());
        assert!(hilbert_ball_generators(3, &int(0)).is_err());
    }

    #[test]
    fn ball_matches_scans() {
        let p = VertexPolytope::new(&hilbert_ball_generators(3, &int(2)).unwrap()).unwrap();
        assert_eq!(volume(&p, Budget::unlimited()).unwrap().volume, int(12));
        assert_eq!(count_lattice_points(&p, 1, Budget::unlimited()).unwrap().count, 19);
    }

    #[test]
    fn parallel_body_of_a_point_is_a_ball() {
        let p = VertexPolytope::from_ints(&[[0], [0], [0]]).unwrap();
        let b = outer_parallel_body(&p, &ratio(1, 2)).unwrap();
        assert_eq!(b.cols(), 3);
        assert_eq!(b.scale_denominator(), &BigInt::from(2));
        assert_eq!(volume(&b, Budget::unlimited()).unwrap().volume, ratio(3, 4));
    }

    #[test]
    fn parallel_body_of_collinear_generators() {
        let p = VertexPolytope::from_ints(&[[0, 0, 0], [0, -1, -2], [0, 1, 2]]).unwrap();
        let b = outer_parallel_body(&p, &int(1)).unwrap();
        assert_eq!(b.cols(), 9);
        let v = volume(&b, Budget::unlimited()).unwrap().volume;
        let base = volume(&p, Budget::unlimited()).unwrap().volume;
        assert!(v > base + int(3));
        // Generators of the body are inside it, and so are the original ones.
        let g = b.original();
        for j in 0..g.cols() {
            let x = ProjectivePoint::new(g.column(j).iter().map(|e| e.finite().unwrap().clone()).collect());
            assert!(b.contains(&x).unwrap());
        }
        let a = p.original();
        for j in 0..a.cols() {
            let x = ProjectivePoint::new(a.column(j).iter().map(|e| e.finite().unwrap().clone()).collect());
            assert!(b.contains(&x).unwrap());
        }
    }
}
