use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::bounds::enclosure::{ceil_sqrt, kappa, pow2_half, pow_half, refine, sqrt, Enclosure};
use crate::error::{Error, Result};
use crate::scalar::{floor_to_bigint, int, ExactScalar};

/// The quantity a bound is evaluated at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Param {
    /// Radius of the Hilbert outer parallel body.
    Epsilon(ExactScalar),
    /// Dilation factor for lattice counts.
    Dilation(u64),
}

impl Param {
    fn to_json(&self) -> Value {
        match self {
            Param::Epsilon(e) => json!({"eps": e.to_string()}),
            Param::Dilation(s) => json!({"s": s}),
        }
    }
}

/// Lower and upper bound for one instance at one parameter value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    /// `max |a_ij|`, when known.
    pub w: Option<BigInt>,
    /// `max_i ‖A_i·‖_H` over rows `2..m` of the normalized generators.
    pub r: ExactScalar,
    pub r_xt: ExactScalar,
    pub lower: Enclosure,
    pub upper: Enclosure,
    pub param: Param,
}

impl BoundsReport {
    pub fn ordered(&self) -> bool {
        self.lower.hi <= self.upper.lo
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "n": self.n,
            "k": self.k,
            "W": self.w.as_ref().map(ToString::to_string),
            "R": self.r.to_string(),
            "r_XT": self.r_xt.to_string(),
            "lower": enclosure_json(&self.lower),
            "upper": enclosure_json(&self.upper),
            "param": self.param.to_json(),
        })
    }
}

pub(crate) fn enclosure_json(e: &Enclosure) -> Value {
    json!([e.lo.to_string(), e.hi.to_string()])
}

fn three_pow(e: usize) -> ExactScalar {
    ExactScalar::from_integer(BigInt::from(3).pow(e as u32))
}

fn two_pow(e: usize) -> ExactScalar {
    ExactScalar::from_integer(BigInt::one() << e)
}

fn check_mk(m: usize, k: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("m = {m} must be at least 2")));
    }
    if k == 0 || k > m {
        return Err(Error::OutOfRange(format!("rank k = {k} must lie in 1..={m}")));
    }
    Ok(())
}

/// Enclosures of `2^{(k-m)/2} κ_{m-k} k r^{k-1} ε^{m-k}` and
/// `2^{m+k-1} 3^{m+n-2} (m-1)^{(k-1)/2} R^{k-1} ε^{m-k}`.
pub fn volume_bounds(
    m: usize,
    n: usize,
    k: usize,
    r: &ExactScalar,
    r_xt: &ExactScalar,
    eps: &ExactScalar,
    bits: u32,
) -> Result<BoundsReport> {
    check_mk(m, k)?;
    if !eps.is_positive() {
        return Err(Error::OutOfRange(format!("ε = {eps} must be positive")));
    }
    if eps * eps > r * r * int(m as i64 - 1) {
        return Err(Error::OutOfRange(format!("ε = {eps} exceeds R·√(m−1) with R = {r}")));
    }
    let eps_pow = Enclosure::exact(eps.clone()).pow((m - k) as u32);
    let lower = pow2_half(k as i64 - m as i64, bits)
        .mul(&kappa((m - k) as u32, bits))
        .scale(&int(k as i64))
        .mul(&Enclosure::exact(r_xt.clone()).pow(k as u32 - 1))
        .mul(&eps_pow);
    let upper = Enclosure::exact(two_pow(m + k - 1) * three_pow(m + n - 2))
        .mul(&pow_half(&int(m as i64 - 1), k as u32 - 1, bits))
        .mul(&Enclosure::exact(r.clone()).pow(k as u32 - 1))
        .mul(&eps_pow);
    Ok(BoundsReport {
        m,
        n,
        k,
        w: None,
        r: r.clone(),
        r_xt: r_xt.clone(),
        lower,
        upper,
        param: Param::Epsilon(eps.clone()),
    })
}

/// `(⌊sr⌋+1)^k − ⌊sr⌋^k`.
pub fn counting_lower(k: usize, r_xt: &ExactScalar, s: u64) -> BigInt {
    let f = floor_to_bigint(&(r_xt * ExactScalar::from_integer(s.into())));
    let g: BigInt = &f + 1;
    g.pow(k as u32) - f.pow(k as u32)
}

/// `3^{m+n-2} Σ_{i=1}^{k} C(k,i) x^{i-1}` with `x = 2sR√(m−1)`, which equals
/// `3^{m+n-2} ((1+x)^k − 1)/x` and stays defined at `x = 0`.
pub fn counting_upper(m: usize, n: usize, k: usize, r: &ExactScalar, s: u64, bits: u32) -> Enclosure {
    let x = sqrt(&int(m as i64 - 1), bits).scale(&(r * int(2) * ExactScalar::from_integer(s.into())));
    let eval = |x: &ExactScalar| -> ExactScalar {
        let mut binom = BigInt::one();
        let mut sum = ExactScalar::zero();
        let mut pow = ExactScalar::one();
        for i in 1..=k {
            binom = binom * BigInt::from(k - i + 1) / BigInt::from(i);
            sum += ExactScalar::from_integer(binom.clone()) * &pow;
            pow *= x;
        }
        sum * three_pow(m + n - 2)
    };
    Enclosure::new(eval(&x.lo), eval(&x.hi))
}

/// `L_{k-1}(s)` exactly and an enclosure of `U_{k-1}(s)`.
pub fn counting_bounds(
    m: usize,
    n: usize,
    k: usize,
    r: &ExactScalar,
    r_xt: &ExactScalar,
    s: u64,
    bits: u32,
) -> Result<BoundsReport> {
    check_mk(m, k)?;
    if s == 0 {
        return Err(Error::OutOfRange("s must be at least 1".into()));
    }
    Ok(BoundsReport {
        m,
        n,
        k,
        w: None,
        r: r.clone(),
        r_xt: r_xt.clone(),
        lower: Enclosure::exact(ExactScalar::from_integer(counting_lower(k, r_xt, s))),
        upper: counting_upper(m, n, k, r, s, bits),
        param: Param::Dilation(s),
    })
}

/// `1 / (2^{⌈(m-1)/2⌉} 2^m 3^{m+n-2} (2mR⌈√(m−1)⌉)^{m-2} ⌈(m−1)/2⌉!)`.
pub fn choice_epsilon(m: usize, n: usize, r: &ExactScalar) -> Result<ExactScalar> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("m = {m} must be at least 2")));
    }
    if r < &int(1) {
        return Err(Error::OutOfRange(format!("R = {r} must be at least 1")));
    }
    let h = m / 2; // ⌈(m−1)/2⌉
    let root = ExactScalar::from_integer(ceil_sqrt(&BigInt::from(m - 1)));
    let base = int(2 * m as i64) * r * root;
    let pow = (0..m - 2).fold(ExactScalar::one(), |acc, _| acc * &base);
    let fact: BigInt = (1..=h).fold(BigInt::one(), |a, i| a * i);
    let den = two_pow(h) * two_pow(m) * three_pow(m + n - 2) * pow * ExactScalar::from_integer(fact);
    Ok(den.recip())
}

/// `C⁻_k = k (1/k)^{k-1} κ_{m-k} / 2^{(m-k)/2}`.
pub fn c_minus(m: usize, k: usize, bits: u32) -> Enclosure {
    let kk = int(k as i64);
    let pow = (0..k - 1).fold(ExactScalar::one(), |acc, _| acc / &kk);
    kappa((m - k) as u32, bits)
        .mul(&pow2_half(-((m - k) as i64), bits))
        .scale(&(kk * pow))
}

/// `C⁺_k = 2^m 3^{m+n-2} (2R√(m−1))^{k-1}`; `k = 0` is allowed.
pub fn c_plus(m: usize, n: usize, k: usize, r: &ExactScalar, bits: u32) -> Enclosure {
    let base = sqrt(&int(m as i64 - 1), bits).scale(&(r * int(2)));
    let lead = Enclosure::exact(two_pow(m) * three_pow(m + n - 2));
    if k == 0 {
        lead.mul(&base.recip())
    } else {
        lead.mul(&base.pow(k as u32 - 1))
    }
}

fn bar_epsilon_r(m: usize, n: usize, r: &ExactScalar, bits: u32) -> Enclosure {
    (1..=m)
        .map(|k| c_minus(m, k, bits).mul(&c_plus(m, n, k - 1, r, bits).recip()))
        .reduce(|a, b| a.min(&b))
        .expect("m >= 1")
}

/// Enclosure of `ε̄ = min_{k=1..m} C⁻_k / C⁺_{k-1}` with `R = 4W`.
pub fn bar_epsilon(m: usize, n: usize, w: &BigInt, bits: u32) -> Result<Enclosure> {
    if m < 2 || !w.is_positive() {
        return Err(Error::OutOfRange("need m ≥ 2 and W ≥ 1".into()));
    }
    Ok(bar_epsilon_r(m, n, &ExactScalar::from_integer(w * 4), bits))
}

/// `s̄ = m!·⌈m^m 3^{m+n-2} (2R⌈√(m−1)⌉)^{m-1}⌉`, a multiple of every
/// `t ≤ m`.
pub fn s_bar(m: usize, n: usize, r: &ExactScalar) -> Result<u64> {
    let root = ExactScalar::from_integer(ceil_sqrt(&BigInt::from(m - 1)));
    let base = int(2) * r * root;
    let inner = (0..m - 1).fold(ExactScalar::from_integer(BigInt::from(m).pow(m as u32)) * three_pow(m + n - 2), |a, _| a * &base);
    let fact: BigInt = (1..=m).fold(BigInt::one(), |a, i| a * i);
    (fact * inner.ceil().to_integer())
        .to_u64()
        .ok_or(Error::Overflow)
}

/// Outcome of comparing consecutive rank intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Disjoint,
    Overlap,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Disjoint => "disjoint",
            Verdict::Overlap => "overlap",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalRow {
    pub k: usize,
    pub lower: Enclosure,
    pub upper: Enclosure,
}

/// Per-rank intervals and the verdict on their disjointness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalTable {
    pub m: usize,
    pub n: usize,
    pub r: ExactScalar,
    pub alpha: ExactScalar,
    pub param: Param,
    pub rows: Vec<IntervalRow>,
    pub verdict: Verdict,
    pub bits: u32,
}

impl IntervalTable {
    /// The rank whose interval provably contains `v`.
    pub fn locate(&self, v: &ExactScalar) -> Option<usize> {
        self.rows
            .iter()
            .find(|row| &row.lower.hi <= v && v <= &row.upper.lo)
            .map(|row| row.k)
    }

    /// Whether `v` might lie in some interval at the current precision.
    pub fn ambiguous(&self, v: &ExactScalar) -> bool {
        self.rows.iter().any(|row| {
            (&row.lower.lo <= v && v < &row.lower.hi) || (&row.upper.lo < v && v <= &row.upper.hi)
        })
    }

    pub fn param_string(&self) -> String {
        match &self.param {
            Param::Epsilon(e) => format!("ε = {e}"),
            Param::Dilation(s) => format!("s = {s}"),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "n": self.n,
            "R": self.r.to_string(),
            "alpha": self.alpha.to_string(),
            "param": self.param.to_json(),
            "bits": self.bits,
            "verdict": self.verdict.as_str(),
            "intervals": self.rows.iter().map(|row| json!({
                "k": row.k,
                "lower": enclosure_json(&row.lower),
                "upper": enclosure_json(&row.upper),
            })).collect::<Vec<_>>(),
        })
    }
}

fn interval_rows(m: usize, n: usize, r: &ExactScalar, param: &Param, alpha: &ExactScalar, bits: u32) -> Vec<IntervalRow> {
    let inv = alpha.recip();
    (1..=m)
        .map(|k| {
            let (lower, upper) = match param {
                Param::Epsilon(eps) => {
                    let e = Enclosure::exact(eps.clone()).pow((m - k) as u32);
                    (c_minus(m, k, bits).mul(&e), c_plus(m, n, k, r, bits).mul(&e))
                }
                Param::Dilation(s) => (
                    Enclosure::exact(ExactScalar::from_integer(counting_lower(k, &ExactScalar::new(1.into(), k.into()), *s))),
                    counting_upper(m, n, k, r, *s, bits),
                ),
            };
            IntervalRow {
                k,
                lower: lower.scale(&inv),
                upper: upper.scale(alpha),
            }
        })
        .collect()
}

fn verdict_of(rows: &[IntervalRow]) -> Verdict {
    let mut all = true;
    for w in rows.windows(2) {
        if w[0].upper.lo >= w[1].lower.hi {
            return Verdict::Overlap;
        }
        if w[0].upper.hi >= w[1].lower.lo {
            all = false;
        }
    }
    if all {
        Verdict::Disjoint
    } else {
        Verdict::Inconclusive
    }
}

/// Intervals for an explicit `R`, refined until the verdict is settled or
/// the precision cap is reached.
pub fn interval_table_for_r(
    m: usize,
    n: usize,
    r: &ExactScalar,
    param: &Param,
    alpha: &ExactScalar,
    bits: u32,
) -> Result<IntervalTable> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("m = {m} must be at least 2")));
    }
    if alpha < &int(1) {
        return Err(Error::OutOfRange(format!("α = {alpha} must be at least 1")));
    }
    match param {
        Param::Epsilon(e) if !e.is_positive() => {
            return Err(Error::OutOfRange(format!("ε = {e} must be positive")))
        }
        Param::Dilation(0) => return Err(Error::OutOfRange("s must be at least 1".into())),
        _ => {}
    }
    let mut last = None;
    let found = refine(bits, "interval verdict", |b| {
        let rows = interval_rows(m, n, r, param, alpha, b);
        let verdict = verdict_of(&rows);
        let table = IntervalTable {
            m,
            n,
            r: r.clone(),
            alpha: alpha.clone(),
            param: param.clone(),
            rows,
            verdict,
            bits: b,
        };
        if verdict == Verdict::Inconclusive {
            last = Some(table);
            Ok(None)
        } else {
            Ok(Some(table))
        }
    });
    match found {
        Ok(t) => Ok(t),
        Err(Error::Inconclusive { .. }) => Ok(last.expect("at least one attempt")),
        Err(e) => Err(e),
    }
}

/// Per-rank intervals for `m × n` matrices with `max |a_ij| ≤ W`, using
/// `R = 4W`.
pub fn interval_table(
    m: usize,
    n: usize,
    w: &BigInt,
    param: &Param,
    alpha: &ExactScalar,
    bits: u32,
) -> Result<IntervalTable> {
    if !w.is_positive() {
        return Err(Error::OutOfRange("W must be at least 1".into()));
    }
    interval_table_for_r(m, n, &ExactScalar::from_integer(w * 4), param, alpha, bits)
}

/// `ε̄` for an explicit `R`.
pub fn bar_epsilon_for_r(m: usize, n: usize, r: &ExactScalar, bits: u32) -> Enclosure {
    bar_epsilon_r(m, n, r, bits)
}
