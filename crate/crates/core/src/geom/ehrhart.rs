use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::geom::alcove::factorial;
use crate::geom::budget::Budget;
use crate::geom::polytope::{count_lattice_points, VertexPolytope};
use crate::scalar::ExactScalar;

/// Leading coefficient of the Ehrhart polynomial of `P`, from the counts at
/// `m` consecutive dilations by the `(m−1)`-th finite difference.
///
/// Rational generators with denominator `q` are dilated by multiples of `q`
/// and the result is divided by `q^{m-1}`.
pub fn ehrhart_leading_coefficient(p: &VertexPolytope, budget: Budget) -> Result<ExactScalar> {
    let d = p.dim();
    let q = p.scale_denominator();
    let qs = q.to_u64().ok_or(Error::Overflow)?;
    let counts: Vec<BigInt> = (1..=d as u64 + 1)
        .map(|t| count_lattice_points(p, t * qs, budget).map(|r| BigInt::from(r.count)))
        .collect::<Result<_>>()?;
    let mut diff = counts;
    for _ in 0..d {
        diff = diff.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    Ok(ExactScalar::new(diff[0].clone(), factorial(d) * q.pow(d as u32)))
}
