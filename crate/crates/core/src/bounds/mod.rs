//! Rank bounds, certified epsilons and rank recovery from measurements.

mod constants;
mod enclosure;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geom::{
    count_lattice_points_sweep, max_radius_xt, outer_parallel_body, volume_by_cells, Budget,
    VertexPolytope,
};
use crate::matrix::TropicalMatrix;
use crate::rank::tropical_rank;
use crate::scalar::{int, ExactScalar};

pub use constants::{
    bar_epsilon, bar_epsilon_for_r, c_minus, c_plus, choice_epsilon, counting_bounds,
    counting_lower, counting_upper, interval_table, interval_table_for_r, s_bar, volume_bounds,
    BoundsReport, IntervalRow, IntervalTable, Param, Verdict,
};
pub use enclosure::{
    ceil_sqrt, kappa, pi, pow2_half, pow_half, refine, sqrt, Enclosure, MAX_BITS,
    MIN_BITS,
};

/// `max_{i ≥ 2} ‖A_i· − A_1·‖_H`, the side of a cube containing `P`.
pub fn outer_r(a: &TropicalMatrix) -> Result<ExactScalar> {
    let rows = a.finite_rows()?;
    let mut best = ExactScalar::zero();
    for row in rows.iter().skip(1) {
        let diffs: Vec<ExactScalar> = row.iter().zip(&rows[0]).map(|(x, y)| x - y).collect();
        let hi = diffs.iter().max().expect("n ≥ 1");
        let lo = diffs.iter().min().expect("n ≥ 1");
        best = best.max(hi - lo);
    }
    Ok(best)
}

/// `max |a_ij|` for an integer matrix.
pub fn max_abs_entry(a: &TropicalMatrix) -> Result<BigInt> {
    if !a.is_integer() {
        return Err(Error::OutOfRange("W is defined for integer matrices".into()));
    }
    let rows = a.finite_rows()?;
    Ok(rows
        .iter()
        .flatten()
        .map(|v| v.to_integer().abs())
        .max()
        .unwrap_or_default())
}

/// `R` used by the recovery routines: at least one, as the constants require.
fn effective_r(a: &TropicalMatrix) -> Result<ExactScalar> {
    Ok(outer_r(a)?.max(int(1)))
}

/// Both sides of the volume sandwich for `A` at `ε`, with `k`, `R` and
/// `radius(X_T)` computed from `A`.
pub fn volume_report(a: &TropicalMatrix, eps: &ExactScalar, budget: Budget) -> Result<BoundsReport> {
    let (k, r, r_xt) = instance_data(a, budget)?;
    let mut rep = volume_bounds(a.rows(), a.cols(), k, &r, &r_xt, eps, MIN_BITS)?;
    rep.w = max_abs_entry(a).ok();
    Ok(rep)
}

/// Both sides of the counting sandwich for `A` at dilation `s`.
pub fn counting_report(a: &TropicalMatrix, s: u64, budget: Budget) -> Result<BoundsReport> {
    let (k, r, r_xt) = instance_data(a, budget)?;
    let mut rep = counting_bounds(a.rows(), a.cols(), k, &r, &r_xt, s, MIN_BITS)?;
    rep.w = max_abs_entry(a).ok();
    Ok(rep)
}

fn instance_data(a: &TropicalMatrix, budget: Budget) -> Result<(usize, ExactScalar, ExactScalar)> {
    let k = tropical_rank(a)?;
    let r = outer_r(a)?;
    let r_xt = max_radius_xt(&VertexPolytope::new(a)?, budget)?;
    Ok((k, r, r_xt))
}

fn locate(
    what: &str,
    measured: &ExactScalar,
    build: impl Fn(u32) -> Result<IntervalTable>,
) -> Result<usize> {
    refine(MIN_BITS, what, |bits| {
        let table = build(bits)?;
        if table.verdict == Verdict::Overlap {
            return Err(Error::OutOfRange(format!(
                "intervals overlap at {}; choose a smaller parameter",
                table.param_string()
            )));
        }
        if table.verdict == Verdict::Disjoint {
            if let Some(k) = table.locate(measured) {
                return Ok(Some(k));
            }
            if !table.ambiguous(measured) {
                return Err(Error::OutOfRange(format!(
                    "measured value {measured} lies in no rank interval"
                )));
            }
        }
        Ok(None)
    })
}

/// Tropical rank read off the exact volume of `P + B_H(ε)`.
///
/// `ε` defaults to [`choice_epsilon`]; any `ε` whose intervals are certified
/// disjoint is accepted.
pub fn rank_from_volume(a: &TropicalMatrix, eps: Option<&ExactScalar>) -> Result<usize> {
    let (m, n) = (a.rows(), a.cols());
    let r = effective_r(a)?;
    let eps = match eps {
        Some(e) => e.clone(),
        None => choice_epsilon(m, n, &r)?,
    };
    let body = outer_parallel_body(&VertexPolytope::new(a)?, &eps)?;
    let vol = volume_by_cells(&body.original())?;
    let param = Param::Epsilon(eps);
    locate("volume rank interval", &vol, |bits| {
        interval_table_for_r(m, n, &r, &param, &int(1), bits)
    })
}

/// Tropical rank read off `|sP ∩ Z^{m-1}|`. `s` defaults to [`s_bar`].
pub fn rank_from_counting(a: &TropicalMatrix, s: Option<u64>, budget: Budget) -> Result<usize> {
    if !a.is_integer() {
        return Err(Error::OutOfRange("counting recovery needs an integer matrix".into()));
    }
    let (m, n) = (a.rows(), a.cols());
    let r = effective_r(a)?;
    let s = match s {
        Some(s) => s,
        None => s_bar(m, n, &r)?,
    };
    let count = count_lattice_points_sweep(&VertexPolytope::new(a)?, s, budget)?.count;
    let measured = ExactScalar::from_integer(count.into());
    let param = Param::Dilation(s);
    locate("counting rank interval", &measured, |bits| {
        interval_table_for_r(m, n, &r, &param, &int(1), bits)
    })
}

/// Whether `tconv(A)` has zero `(m−1)`-volume, decided by `rank < m`.
pub fn zero_volume_decision(a: &TropicalMatrix) -> Result<bool> {
    Ok(tropical_rank(a)? < a.rows())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outer_r_of_small_matrices() {
        assert_eq!(outer_r(&TropicalMatrix::from_ints(&[[0, 0], [0, 1]])).unwrap(), int(1));
        assert_eq!(
            outer_r(&TropicalMatrix::from_ints(&[[0, 1, 0], [1, 0, 0]])).unwrap(),
            int(2)
        );
    }

    #[test]
    fn recovers_rank_of_tiny_examples() {
        let zero = TropicalMatrix::from_ints(&[[0, 0], [0, 0]]);
        let one = TropicalMatrix::from_ints(&[[0, 0], [0, 1]]);
        assert_eq!(rank_from_volume(&zero, None).unwrap(), 1);
        assert_eq!(rank_from_volume(&one, None).unwrap(), 2);
        assert_eq!(rank_from_counting(&zero, None, Budget::default()).unwrap(), 1);
        assert_eq!(rank_from_counting(&one, None, Budget::default()).unwrap(), 2);
    }

    #[test]
    fn zero_volume_examples() {
        assert!(zero_volume_decision(&TropicalMatrix::from_ints(&[[0, 0], [0, 0]])).unwrap());
        assert!(zero_volume_decision(&TropicalMatrix::from_ints(&[[0], [1], [2]])).unwrap());
        assert!(!zero_volume_decision(&TropicalMatrix::from_ints(&[[0, 0], [0, 1]])).unwrap());
    }
}
