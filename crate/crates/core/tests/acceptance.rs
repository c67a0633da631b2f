//! One PASS/FAIL line per headline claim. Every comparison is exact rational
//! equality or a certified interval comparison; there is no float tolerance.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use tropvol_core::bounds::{counting_bounds, MAX_BITS, MIN_BITS};
use tropvol_core::geom::{ehrhart_leading_coefficient, has_integer_pseudovertices, sat_count_bruteforce};
use tropvol_core::*;

/// Exact equality everywhere; the only slack is the precision cap used to
/// settle enclosure comparisons.
const PRECISION_CAP_BITS: u32 = MAX_BITS;
const REFERENCE_LIMIT: Duration = Duration::from_secs(1);
const BALL_LIMIT: Duration = Duration::from_secs(10);
const EHRHART_LIMIT: Duration = Duration::from_secs(120);
const SANDWICH_LIMIT: Duration = Duration::from_secs(600);
const RECOVERY_LIMIT: Duration = Duration::from_secs(300);
const GADGET_LIMIT: Duration = Duration::from_secs(120);
const STRUCTURE_LIMIT: Duration = Duration::from_secs(300);

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn vol(a: &TropicalMatrix) -> ExactScalar {
    volume(&VertexPolytope::new(a).unwrap(), Budget::unlimited()).unwrap().volume
}

fn references() -> Check {
    let reference = [
        TropicalMatrix::from_ints(&[[0, 0, 0], [0, -2, -4], [0, 2, 4]]),
        TropicalMatrix::from_ints(&[[0, 0, 0], [2, 2, 0], [0, 2, 2]]),
        TropicalMatrix::from_ints(&[[0, 0, 0, 0], [0, 1, 0, -1], [0, -1, -4, -3]]),
    ];
    for (i, a) in reference.iter().enumerate() {
        let t = Instant::now();
        let v = vol(a);
        ensure(v == q(4), || format!("reference polytope {} has volume {v}", i + 1))?;
        ensure(t.elapsed() < REFERENCE_LIMIT, || format!("reference polytope {} too slow", i + 1))?;
    }
    let skew = [[-1, -4, -7], [-3, -2, 2], [2, -1, -3]];
    for j in 0..3 {
        // Fixing coordinate j to zero: move row j to the front.
        let mut rows = vec![skew[j]];
        rows.extend((0..3).filter(|&i| i != j).map(|i| skew[i]));
        let t = Instant::now();
        let v = vol(&TropicalMatrix::from_ints(&rows));
        ensure(v == q(4), || format!("skewed triangle with x_{} = 0 has volume {v}", j + 1))?;
        ensure(t.elapsed() < REFERENCE_LIMIT, || "skewed triangle too slow".into())?;
    }
    Ok("3 reference polytopes and the skewed triangle under 3 normalizations all have volume 4".into())
}

fn hilbert_balls() -> Check {
    let t = Instant::now();
    let mut cases = 0;
    for d in 2..=4usize {
        for delta in 1..=4i64 {
            let h = hilbert_ball_generators(d, &q(delta)).unwrap();
            let p = VertexPolytope::new(&h).unwrap();
            let formula = (delta + 1).pow(d as u32) - delta.pow(d as u32);
            let scan = brute_ball_count(d, delta);
            let counted = count_lattice_points(&p, 1, Budget::unlimited()).unwrap().count;
            ensure(scan as i64 == formula && counted == scan, || {
                format!("d={d} δ={delta}: formula {formula}, scan {scan}, library {counted}")
            })?;
            let v = volume(&p, Budget::unlimited()).unwrap().volume;
            let want = q(d as i64 * delta.pow(d as u32 - 1));
            ensure(v == want, || format!("d={d} δ={delta}: volume {v}, expected {want}"))?;
            cases += 1;
        }
    }
    ensure(t.elapsed() < BALL_LIMIT, || format!("took {:?}", t.elapsed()))?;
    Ok(format!("{cases} balls: counts (δ+1)^d − δ^d and volumes d·δ^(d−1)"))
}

fn ehrhart_oracle() -> Check {
    let t = Instant::now();
    let mut r = rng(101);
    let mut done = 0;
    while done < 50 {
        let m = r.gen_range(2..=3);
        let n = r.gen_range(m..=4);
        let a = random_matrix(&mut r, m, n, -3, 3);
        if tropical_rank(&a).unwrap() < m {
            continue;
        }
        let p = VertexPolytope::new(&a).unwrap();
        let v = volume(&p, Budget::unlimited()).unwrap().volume;
        let e = ehrhart_leading_coefficient(&p, Budget::unlimited()).unwrap();
        ensure(v == e, || format!("{a}: volume {v}, Ehrhart {e}"))?;
        done += 1;
    }
    ensure(t.elapsed() < EHRHART_LIMIT, || format!("took {:?}", t.elapsed()))?;
    Ok(format!("{done} full-rank instances agree exactly"))
}

/// Decides `lower ≤ v ≤ upper` by raising the precision as needed.
fn certify(v: &ExactScalar, f: impl Fn(u32) -> BoundsReport) -> std::result::Result<u32, String> {
    let mut bits = MIN_BITS;
    loop {
        let rep = f(bits);
        if rep.lower.hi <= *v && *v <= rep.upper.lo {
            return Ok(bits);
        }
        if rep.lower.lo > *v || *v > rep.upper.hi {
            return Err(format!("{v} outside [{}, {}]", rep.lower, rep.upper));
        }
        if bits >= PRECISION_CAP_BITS {
            return Err(format!("{v} unresolved at {bits} bits"));
        }
        bits *= 2;
    }
}

fn sandwiches() -> Check {
    let t = Instant::now();
    let mut r = rng(102);
    let (mut instances, mut vol_checks, mut count_checks, mut max_bits) = (0, 0, 0, MIN_BITS);
    while instances < 100 {
        let m = r.gen_range(2..=4);
        let n = r.gen_range(1..=5);
        let a = random_matrix(&mut r, m, n, -3, 3);
        let p = VertexPolytope::new(&a).unwrap();
        let k = tropical_rank(&a).unwrap();
        let big_r = bounds::outer_r(&a).unwrap();
        let r_xt = max_radius_xt(&p, Budget::unlimited()).unwrap();
        let mut any = false;
        for eps in [qr(1, 2), q(1), q(2)] {
            if volume_bounds(m, n, k, &big_r, &r_xt, &eps, MIN_BITS).is_err() {
                continue;
            }
            let body = outer_parallel_body(&p, &eps).unwrap();
            let v = volume(&body, Budget::unlimited()).unwrap().volume;
            let bits = certify(&v, |b| volume_bounds(m, n, k, &big_r, &r_xt, &eps, b).unwrap())
                .map_err(|e| format!("{a} ε={eps}: {e}"))?;
            max_bits = max_bits.max(bits);
            vol_checks += 1;
            any = true;
        }
        if !any {
            continue;
        }
        for s in 1..=3u64 {
            let c = count_lattice_points_sweep(&p, s, Budget::unlimited()).unwrap().count;
            let bits = certify(&q(c as i64), |b| counting_bounds(m, n, k, &big_r, &r_xt, s, b).unwrap())
                .map_err(|e| format!("{a} s={s}: {e}"))?;
            max_bits = max_bits.max(bits);
            count_checks += 1;
        }
        instances += 1;
    }
    ensure(t.elapsed() < SANDWICH_LIMIT, || format!("took {:?}", t.elapsed()))?;
    Ok(format!(
        "{instances} instances, {vol_checks} volume and {count_checks} counting sandwiches certified (max {max_bits} bits)"
    ))
}

fn zero_one(m: usize, n: usize, bits: u32) -> TropicalMatrix {
    TropicalMatrix::from_ints(
        &(0..m)
            .map(|i| (0..n).map(|j| ((bits >> (i * n + j)) & 1) as i64).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
}

fn rank_recovery() -> Check {
    let t = Instant::now();
    for m in 1..=3usize {
        for n in 1..=3usize {
            let eps = match choice_epsilon(m, n, &q(4)) {
                Ok(e) => e,
                Err(_) if m == 1 => continue,
                Err(e) => return Err(e.to_string()),
            };
            let table = interval_table(m, n, &BigInt::from(1), &Param::Epsilon(eps), &q(1), MIN_BITS)
                .map_err(|e| e.to_string())?;
            ensure(table.verdict == Verdict::Disjoint, || {
                format!("m={m} n={n}: verdict {}", table.verdict.as_str())
            })?;
        }
    }
    let mut recovered = 0;
    let mut check = |a: &TropicalMatrix| -> std::result::Result<(), String> {
        let k = tropical_rank(a).unwrap();
        let kv = rank_from_volume(a, None).map_err(|e| format!("{a}: {e}"))?;
        let kc = rank_from_counting(a, None, Budget::unlimited()).map_err(|e| format!("{a}: {e}"))?;
        ensure(kv == k && kc == k, || format!("{a}: rank {k}, volume {kv}, counting {kc}"))?;
        recovered += 1;
        Ok(())
    };
    for m in 2..=3 {
        for n in 1..=3 {
            for bits in 0..1u32 << (m * n) {
                check(&zero_one(m, n, bits))?;
            }
        }
    }
    ensure(t.elapsed() < RECOVERY_LIMIT, || format!("took {:?}", t.elapsed()))?;
    Ok(format!("intervals disjoint for m,n ≤ 3; all {recovered} {{0,1}} matrices with m ∈ {{2,3}}, n ≤ 3 recovered by volume and counting"))
}

fn gadgets() -> Check {
    let t = Instant::now();
    let mut r = rng(104);
    for _ in 0..30 {
        let n = r.gen_range(2..=10);
        let clauses = r.gen_range(1..=15);
        let f = random_formula(&mut r, n, clauses);
        let brute = sat_count_bruteforce(&f).unwrap();
        let v = ineq_volume(&sat_gadget(&f, 2).unwrap(), Budget::unlimited()).unwrap().volume;
        ensure(v == q(brute as i64), || format!("{f}: volume {v}, #F = {brute}"))?;
        let c = ineq_count(&sat_gadget(&f, 1).unwrap(), 1, Budget::unlimited()).unwrap().count;
        ensure(c == brute, || format!("{f}: count {c}, #F = {brute}"))?;
    }
    ensure(t.elapsed() < GADGET_LIMIT, || format!("took {:?}", t.elapsed()))?;
    Ok("30 formulas: volume at L=2 and count at L=1 equal #F".into())
}

fn trinomial(n: usize, m: usize, k: usize) -> u64 {
    if n < k + 1 || m < k + 1 {
        return 0;
    }
    let f = |x: usize| (1..=x as u64).product::<u64>();
    f(n + m - k - 2) / (f(n - k - 1) * f(m - k - 1) * f(k))
}

fn structure() -> Check {
    let t = Instant::now();
    let mut r = rng(105);
    for _ in 0..10_000 {
        let m = r.gen_range(1..=5);
        let n = r.gen_range(1..=5);
        let a = random_matrix(&mut r, m, n, -4, 4);
        let x: Vec<i64> = (0..m).map(|_| r.gen_range(-5..=5)).collect();
        let x = ProjectivePoint::from_ints(&x);
        let member = contains_point(&a, &x).unwrap();
        let nonempty = type_of(&a, &x).unwrap().all_nonempty();
        ensure(member == nonempty, || format!("{a} at {x:?}"))?;
    }
    let mut cells_seen = 0;
    for _ in 0..60 {
        let m = r.gen_range(2..=3);
        let n = r.gen_range(1..=4);
        let a = random_matrix(&mut r, m, n, -2, 2);
        let p = VertexPolytope::new(&a).unwrap();
        let cells = enumerate_cells(&p, m as u32, Budget::unlimited()).unwrap();
        for dim in 0..m {
            let found = cells.iter().filter(|c| c.dimension == dim).count() as u64;
            let bound = trinomial(n, m, dim);
            ensure(found <= bound, || format!("{a}: {found} cells of dimension {dim} > {bound}"))?;
        }
        for c in &cells {
            cells_seen += 1;
            ensure(has_integer_pseudovertices(c).unwrap(), || format!("{a}: cell {}", c.covector))?;
            let reps = tight_representatives(&c.system).unwrap();
            for s in 1..=3u64 {
                let sx = CellSystem::new(c.system.matrix().scaled(&q(s as i64))).unwrap();
                let proj = project_to_xt(&sx, &reps).unwrap();
                let full = polytrope_lattice_count(&c.system, s).unwrap();
                let low = polytrope_lattice_count(&proj.system, 1).unwrap();
                ensure(full == low, || format!("{a}: cell {} s={s}: {full} vs {low}", c.covector))?;
            }
            if c.dimension + 1 == m {
                let (rad, u) = inner_radius(&c.system).unwrap();
                ensure(c.system.contains_with_margin(&u, &rad) && rad > ExactScalar::zero(), || {
                    format!("{a}: cell {} radius {rad}", c.covector)
                })?;
            }
        }
    }
    ensure(t.elapsed() < STRUCTURE_LIMIT, || format!("took {:?}", t.elapsed()))?;
    Ok(format!("10000 membership checks; {cells_seen} cells integral, within counts, projection-exact, ball-inscribed"))
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Check); 7] = [
        ("reference volumes", references),
        ("hilbert ball identities", hilbert_balls),
        ("volume equals ehrhart leading coefficient", ehrhart_oracle),
        ("volume and counting sandwiches", sandwiches),
        ("interval disjointness and rank recovery", rank_recovery),
        ("sat gadget identities", gadgets),
        ("structural invariants", structure),
    ];
    let mut failed = 0;
    for (name, f) in checks {
        let t = Instant::now();
        match f() {
            Ok(msg) => println!("PASS {name}: {msg} [{:.2?}]", t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg} [{:.2?}]", t.elapsed());
            }
        }
    }
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
