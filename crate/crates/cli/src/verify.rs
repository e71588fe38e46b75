//! The exact-identity suite behind `maninlab verify`.

use maninlab::arith::{dirichlet_convolve, euler_phi, gcd_i64, mobius_rat, primes_up_to, psi_prime, psi_prime_mobius};
use maninlab::asymptotics::{local_factor, local_factor_closed_form, sum1_exact, sum2_check, theta, EtaPrime};
use maninlab::equidist::{
    box_decompose, experiment_equidist, mobius_expand_nb, n_b_count, n_count, n_star, region_histogram, Box3,
    EquidistConfig, GeomGrid, Range1, RegionS,
};
use maninlab::peyre::{
    alpha_polytope, alpha_weyl, count_solutions_padic, euler_partial_exact, omega_p, polytope_volume, PolytopeH,
};
use maninlab::rng::stream_rng;
use maninlab::surface::{count_direct_cumulative, points_direct, points_naive};
use maninlab::torsor::{count_torsor_cumulative, from_torsor, to_torsor, tuples, validate};
use maninlab::Rat;
use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Outcome = Result<String, String>;
type Runner = Box<dyn Fn() -> Outcome + Sync>;

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn direct_vs_torsor() -> Outcome {
    let (d, t) = (count_direct_cumulative(300), count_torsor_cumulative(300));
    match (1..=300).find(|&b| d[b] != t[b]) {
        Some(b) => Err(format!("B={b}: direct {} vs torsor {}", d[b], t[b])),
        None => Ok(format!("equal for B ≤ 300, N(300) = {}", d[300])),
    }
}

fn naive_vs_direct() -> Outcome {
    let d = count_direct_cumulative(40);
    for b in 1..=40u64 {
        let n = points_naive(b).map_err(|e| e.to_string())?.len() as u64;
        expect_eq(&format!("B={b}"), n, d[b as usize])?;
    }
    Ok("equal for B ≤ 40".into())
}

fn round_trip() -> Outcome {
    let pts = points_direct(100);
    for p in &pts {
        let t = to_torsor(p).map_err(|e| e.to_string())?;
        expect_eq("point → tuple → point", from_torsor(&t).map_err(|e| e.to_string())?, *p)?;
    }
    let ts = tuples(100);
    for t in &ts {
        validate(t).map_err(|e| e.to_string())?;
        expect_eq("tuple equation", t.equation(), 0)?;
    }
    let mut images: Vec<_> = ts.iter().map(|t| from_torsor(t).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    images.sort();
    expect_eq("torsor image of 𝒯(100)", images.len(), pts.len())?;
    if images != pts {
        return Err("torsor image differs from the direct point list".into());
    }
    Ok(format!("{} points", pts.len()))
}

fn polytope() -> Outcome {
    let v = polytope_volume(&PolytopeH::cubic_surface()).map_err(|e| e.to_string())?;
    expect_eq("volume", v, rat(1, 2880))?;
    expect_eq("alpha from polytope", alpha_polytope(), rat(1, 8640))?;
    expect_eq("alpha from Weyl groups", alpha_weyl(), rat(1, 8640))?;
    Ok("volume 1/2880, alpha 1/8640".into())
}

fn local_factors() -> Outcome {
    let ps = primes_up_to(100);
    for &p in &ps {
        let lf = local_factor(p).map_err(|e| e.to_string())?;
        expect_eq(&format!("local factor at {p}"), lf, local_factor_closed_form(p).map_err(|e| e.to_string())?)?;
    }
    expect_eq("local factor at 2", local_factor(2).map_err(|e| e.to_string())?, rat(19, 7))?;
    Ok(format!("{} primes", ps.len()))
}

fn sum2() -> Outcome {
    for p in primes_up_to(100) {
        if !sum2_check(p).map_err(|e| e.to_string())? {
            return Err(format!("fails at p={p}"));
        }
    }
    Ok("p ≤ 100".into())
}

fn small_constants() -> Outcome {
    expect_eq("omega_2", omega_p(2).map_err(|e| e.to_string())?, rat(19, 4))?;
    expect_eq("omega_3", omega_p(3).map_err(|e| e.to_string())?, rat(31, 9))?;
    expect_eq("Euler factor at 2", euler_partial_exact(2), rat(19, 512))?;
    expect_eq("Theta(1,2,1,1,1,1)", theta(&EtaPrime::new([1, 2, 1, 1, 1, 1]).unwrap()), rat(1, 7))?;
    expect_eq("sum1 at B=3", sum1_exact(3).map_err(|e| e.to_string())?, Rat::one())?;
    let c = count_solutions_padic(2, 1).map_err(|e| e.to_string())?;
    expect_eq("solutions mod 2", c.count, 10)?;
    Ok("omega_2, omega_3, Theta, sum1(3), solutions mod 2".into())
}

fn random_range(rng: &mut impl Rng) -> Range1 {
    let (x, y) = (rng.random_range(1i64..=50), rng.random_range(1i64..=50));
    let (a, b) = (x.min(y) as f64 - 0.5, x.max(y) as f64);
    if rng.random::<bool>() {
        Range1::new(-b, -a).unwrap()
    } else {
        Range1::new(a, b).unwrap()
    }
}

fn random_box(seed: u64, i: u64) -> (Box3, u64, u64, i64) {
    let mut rng = stream_rng(seed, i);
    let bx = Box3::new(random_range(&mut rng), random_range(&mut rng), random_range(&mut rng));
    let q = rng.random_range(1u64..=30);
    let b = rng.random_range(1u64..=12);
    let units: Vec<i64> = (0..q as i64).filter(|&a| gcd_i64(a, q as i64) == 1).collect();
    let a = units[rng.random_range(0..units.len())];
    (bx, q, b, a)
}

fn mobius_expansion(seed: u64) -> Outcome {
    (0..100u64).into_par_iter().try_for_each(|i| {
        let (bx, q, b, a) = random_box(seed, i);
        let direct = n_b_count(&bx, q, a, b).map_err(|e| e.to_string())?;
        let expanded = mobius_expand_nb(&bx, q, a, b).map_err(|e| e.to_string())?;
        expect_eq(&format!("instance {i} (q={q}, a={a}, b={b})"), expanded, direct as i64)
    })?;
    Ok("100 random instances".into())
}

fn residue_partition(seed: u64) -> Outcome {
    (0..100u64).into_par_iter().try_for_each(|i| {
        let (bx, q, _, _) = random_box(seed, 1000 + i);
        let mut total = 0u64;
        for a in (0..q as i64).filter(|&a| gcd_i64(a, q as i64) == 1) {
            total += n_count(&bx, q, a).map_err(|e| e.to_string())?;
        }
        expect_eq(&format!("instance {i} (q={q})"), rat(total as i64, 1), n_star(&bx, q) * rat(euler_phi(q) as i64, 1))
    })?;
    Ok("100 random instances".into())
}

fn region_identities() -> Outcome {
    let s = RegionS::template(300.0);
    let all = region_histogram(&s, &[1], None).map_err(|e| e.to_string())?[0].total;
    for m in [2u64, 7, 12, 30] {
        let h = &region_histogram(&s, &[m], None).map_err(|e| e.to_string())?[0];
        let units: u64 = (0..m as i64).filter(|&a| gcd_i64(a, m as i64) == 1).map(|a| h.d(a)).sum();
        expect_eq(&format!("D* at q={m}"), h.d_star() * rat(euler_phi(m) as i64, 1), rat(units as i64, 1))?;
        expect_eq(&format!("classes at q={m}"), h.counts.iter().sum::<u64>(), all)?;
    }
    for delta in [1.0, 0.5, 0.25] {
        let d = box_decompose(&s, &GeomGrid::new(delta).unwrap()).map_err(|e| e.to_string())?;
        expect_eq(&format!("cells at delta={delta}"), d.inside_points + d.boundary_points, all)?;
    }
    let r = experiment_equidist(&EquidistConfig { xs: vec![100.0], qs: vec![1], delta: 0.5, b: 1 })
        .map_err(|e| e.to_string())?;
    expect_eq("q = 1 discrepancy", r.rows[0].max_err, 0.0)?;
    Ok(format!("{all} lattice points"))
}

fn convolutions() -> Outcome {
    let pairs = [1u64, 2, 3, 6].into_iter().flat_map(|a| [1u64, 2, 3, 6].map(|b| (a, b))).collect::<Vec<_>>();
    pairs.into_par_iter().try_for_each(|(a, b)| -> Result<(), String> {
        for n in 1..=2000u64 {
            let back = dirichlet_convolve(|d| psi_prime_mobius(a, b, d), |_| Rat::one(), n);
            expect_eq(&format!("(ψ′∗μ)∗1 at a={a}, b={b}, n={n}"), back, psi_prime(a, b, n))?;
            let direct = dirichlet_convolve(|d| psi_prime(a, b, d), mobius_rat, n);
            expect_eq(&format!("ψ′∗μ at a={a}, b={b}, n={n}"), psi_prime_mobius(a, b, n), direct)?;
        }
        Ok(())
    })?;
    Ok("n ≤ 2000, a, b ∈ {1, 2, 3, 6}".into())
}

pub fn run_suite(seed: u64) -> Vec<Check> {
    let checks: Vec<(&'static str, Runner)> = vec![
        ("direct count = torsor count", Box::new(direct_vs_torsor)),
        ("naive count = direct count", Box::new(naive_vs_direct)),
        ("point/tuple round trip", Box::new(round_trip)),
        ("polytope volume and alpha", Box::new(polytope)),
        ("local factor identity", Box::new(local_factors)),
        ("per-prime Euler identity", Box::new(sum2)),
        ("small exact constants", Box::new(small_constants)),
        ("Möbius expansion of N_b", Box::new(move || mobius_expansion(seed))),
        ("residue partition of N", Box::new(move || residue_partition(seed))),
        ("region histogram identities", Box::new(region_identities)),
        ("convolution identities", Box::new(convolutions)),
    ];
    checks
        .into_iter()
        .map(|(name, f)| {
            let r = f();
            Check { name, passed: r.is_ok(), detail: r.unwrap_or_else(|e| e) }
        })
        .collect()
}

pub fn render_text(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| format!("{} {}: {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail))
        .collect()
}
