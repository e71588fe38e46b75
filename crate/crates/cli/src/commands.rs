use crate::config::{positive, require, Format, Method, PlotKind, Settings, Task};
use crate::output::{json_text, Table};
use crate::Failure;
use anyhow::Result;
use maninlab::arith::primes_up_to;
use maninlab::asymptotics::{
    constant_assembly, empirical_manin, local_factor, local_factor_closed_form, manin_csv, sum1_csv,
    sum1_experiment, sum2_check, AssemblyInputs, DEFAULT_A,
};
use maninlab::equidist::{experiment_equidist, report_csv, EquidistConfig};
use maninlab::interval::Interval;
use maninlab::peyre::{c_vh, jacobian_crosscheck, omega_infty_a, omega_infty_b, omega_p_f64, padic_densities};
use maninlab::surface::{count_direct, count_naive, points_csv, points_direct, ProjPoint};
use maninlab::torsor::{count_torsor, diagnostics_subsets, from_torsor, to_torsor, tuples, tuples_csv, TorsorTuple};
use maninlab::Rat;
use num_integer::Integer;
use serde::Serialize;
use serde_json::json;

pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_PMAX: u64 = 100_000;
const DEFAULT_SEED: u64 = 0;
/// Audit listings keep every point in memory.
const AUDIT_LIMIT: u64 = 1000;

/// What a command produced: the artifact and, when an invariant failed, why.
pub struct Outcome {
    pub text: String,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, failure: None }
    }
}

fn rat_json(r: &Rat) -> serde_json::Value {
    json!({ "num": r.numer().to_string().parse::<serde_json::Number>().unwrap(),
            "den": r.denom().to_string().parse::<serde_json::Number>().unwrap() })
}

fn iv_json(i: &Interval) -> serde_json::Value {
    json!({ "lo": i.lo, "hi": i.hi })
}

fn json_only(s: &Settings, what: &str) -> Result<()> {
    if s.format == Some(Format::Csv) {
        return Err(Failure::Config(format!("{what} output is JSON only")).into());
    }
    Ok(())
}

pub fn count(s: &Settings) -> Result<Outcome> {
    let b = require(s.bound, "--B")?;
    let method = s.method.unwrap_or(Method::Both);
    if s.audit.unwrap_or(false) {
        if b > AUDIT_LIMIT {
            return Err(Failure::Config(format!("audit listings are limited to B ≤ {AUDIT_LIMIT}")).into());
        }
        let text = match method {
            Method::Naive => points_csv(&maninlab::surface::points_naive(b)?),
            Method::Direct => points_csv(&points_direct(b)),
            Method::Torsor => tuples_csv(&tuples(b))?,
            Method::Both => {
                return Err(Failure::Config("audit needs a single method: naive, direct or torsor".into()).into())
            }
        };
        return Ok(Outcome::ok(text));
    }
    json_only(s, "count")?;
    let one = |m: Method| -> Result<u64> {
        let r = match m {
            Method::Naive => count_naive(b)?,
            Method::Direct => count_direct(b),
            Method::Torsor => count_torsor(b),
            Method::Both => unreachable!(),
        };
        eprintln!("{:?} count at B={b}: {} in {:.3}s", r.method, r.count, r.elapsed);
        Ok(r.count)
    };
    if method == Method::Both {
        let (direct, torsor) = (one(Method::Direct)?, one(Method::Torsor)?);
        let equal = direct == torsor;
        let text = json_text(&json!({ "B": b, "direct": direct, "torsor": torsor, "equal": equal }));
        let failure = (!equal).then(|| format!("direct count {direct} differs from torsor count {torsor} at B={b}"));
        return Ok(Outcome { text, failure });
    }
    let n = one(method)?;
    let name = serde_json::to_value(method)?;
    Ok(Outcome::ok(json_text(&json!({ "B": b, "method": name, "count": n }))))
}

/// Divide out the content and make `x1` positive.
fn normalize(p: [i64; 4]) -> [i64; 4] {
    let g = p.iter().fold(0i64, |g, &x| g.gcd(&x)).max(1);
    let sign = if p[1] < 0 { -1 } else { 1 };
    p.map(|x| sign * x / g)
}

pub fn torsor_map(s: &Settings) -> Result<Outcome> {
    json_only(s, "torsor-map")?;
    let v = match (&s.point, &s.tuple) {
        (Some(p), None) => {
            let p: [i64; 4] =
                p.as_slice().try_into().map_err(|_| Failure::Config("--point needs 4 coordinates".into()))?;
            let q = ProjPoint(normalize(p));
            let t = to_torsor(&q)?;
            json!({ "point": q.0, "tuple": t.0 })
        }
        (None, Some(t)) => {
            let t: [i64; 10] =
                t.as_slice().try_into().map_err(|_| Failure::Config("--tuple needs 10 entries".into()))?;
            let p = from_torsor(&TorsorTuple(t))?;
            json!({ "tuple": t, "point": p.0 })
        }
        _ => return Err(Failure::Config("torsor-map needs exactly one of --point or --tuple".into()).into()),
    };
    Ok(Outcome::ok(json_text(&v)))
}

pub fn peyre(s: &Settings) -> Result<Outcome> {
    json_only(s, "peyre")?;
    let tol = positive(s.tolerance.unwrap_or(DEFAULT_TOL), "tolerance")?;
    let pmax = s.pmax.unwrap_or(DEFAULT_PMAX);
    let b = c_vh(tol, pmax)?;
    let v = json!({
        "alpha": rat_json(&b.alpha),
        "beta": 1,
        "omega_inf": iv_json(&b.omega_inf),
        "euler": { "lo": b.euler_product.lo, "hi": b.euler_product.hi, "pmax": b.pmax },
        "c": iv_json(&b.c_vh),
    });
    Ok(Outcome::ok(json_text(&v)))
}

fn equidist_table(s: &Settings) -> Result<Table> {
    let xmin = positive(s.xmin.unwrap_or(64.0), "xmin")?;
    let xmax = positive(s.xmax.unwrap_or(512.0), "xmax")?;
    if xmin > xmax {
        return Err(Failure::Config(format!("xmin {xmin} exceeds xmax {xmax}")).into());
    }
    let xs: Vec<f64> = std::iter::successors(Some(xmin), |x| Some(2.0 * x)).take_while(|&x| x <= xmax).collect();
    let qs = s.qgrid.clone().unwrap_or_else(|| vec![1, 2, 3, 4, 5, 7, 8, 11]);
    if qs.contains(&0) {
        return Err(Failure::Config("moduli q must be positive".into()).into());
    }
    let cfg = EquidistConfig { xs, qs, delta: positive(s.delta.unwrap_or(0.5), "delta")?, b: s.b_param.unwrap_or(1) };
    let r = experiment_equidist(&cfg)?;
    Ok(Table::prerendered(report_csv(&r), &r.rows))
}

pub fn equidist(s: &Settings) -> Result<Outcome> {
    Ok(Outcome::ok(equidist_table(s)?.render(s.format_or(Format::Csv))))
}

#[derive(Serialize)]
struct LocalRow {
    p: u64,
    local_factor: String,
    closed_form: String,
    identity: bool,
    sum2: bool,
}

fn local_factor_rows(s: &Settings) -> Result<Vec<LocalRow>> {
    let (lo, hi) = (s.pmin.unwrap_or(2), s.pmax.unwrap_or(100));
    primes_up_to(hi)
        .into_iter()
        .filter(|&p| p >= lo)
        .map(|p| {
            let (a, b) = (local_factor(p)?, local_factor_closed_form(p)?);
            Ok(LocalRow { p, identity: a == b, local_factor: a.to_string(), closed_form: b.to_string(), sum2: sum2_check(p)? })
        })
        .collect()
}

fn bound_grid(s: &Settings, default: &[u64]) -> Vec<u64> {
    s.bound_grid.clone().unwrap_or_else(|| default.to_vec())
}

/// The table behind `plot-data --kind`, or an `asymptotics` task.
fn table(kind: PlotKind, s: &Settings) -> Result<(Table, Option<String>)> {
    let tol = positive(s.tolerance.unwrap_or(DEFAULT_TOL), "tolerance")?;
    let pmax = s.pmax.unwrap_or(DEFAULT_PMAX);
    let seed = s.seed.unwrap_or(DEFAULT_SEED);
    let t = match kind {
        PlotKind::ManinRatio => {
            let c = c_vh(tol, pmax)?.c_vh;
            let rows = empirical_manin(&bound_grid(s, &[1000, 10_000]), c)?;
            Table::prerendered(manin_csv(&rows), &rows)
        }
        PlotKind::Sum1 => {
            let rows = sum1_experiment(&bound_grid(s, &[100, 1000, 10_000]), pmax)?;
            Table::prerendered(sum1_csv(&rows), &rows)
        }
        PlotKind::Equidist => equidist_table(s)?,
        PlotKind::LocalFactors => {
            let rows = local_factor_rows(s)?;
            let bad = rows.iter().find(|r| !r.identity || !r.sum2).map(|r| format!("local factor identity fails at p={}", r.p));
            let t = Table::new(&["p", "local_factor", "closed_form", "identity", "sum2"], &rows, |r| {
                vec![r.p.to_string(), r.local_factor.clone(), r.closed_form.clone(), r.identity.to_string(), r.sum2.to_string()]
            });
            return Ok((t, bad));
        }
        PlotKind::Padic => {
            let n = s.nmax.unwrap_or(3);
            let mut rows = Vec::new();
            for p in primes_up_to(s.pmax.unwrap_or(3)).into_iter().filter(|&p| p >= s.pmin.unwrap_or(2)) {
                rows.extend(padic_densities(p, n)?);
            }
            Table::new(&["p", "n", "count", "density", "omega_p"], &rows, |r| {
                vec![r.p.to_string(), r.n.to_string(), r.count.to_string(), r.density.to_string(), omega_p_f64(r.p).to_string()]
            })
        }
        PlotKind::OmegaMc => {
            let reps = s.replicates.unwrap_or(16);
            let max = s.samples.unwrap_or(1 << 16);
            #[derive(Serialize)]
            struct Row {
                points: u64,
                replicates: u64,
                seed: u64,
                value: f64,
                lo: f64,
                hi: f64,
            }
            let mut rows = Vec::new();
            let mut n = 1u64 << 10;
            while n <= max {
                let e = omega_infty_b(n, reps, seed)?;
                rows.push(Row { points: n, replicates: reps, seed, value: e.value, lo: e.interval.lo, hi: e.interval.hi });
                n *= 4;
            }
            Table::new(&["points", "replicates", "seed", "value", "lo", "hi"], &rows, |r| {
                [r.points, r.replicates, r.seed].map(|x| x.to_string()).into_iter().chain([r.value, r.lo, r.hi].map(|x| x.to_string())).collect()
            })
        }
        PlotKind::Jacobian => {
            let reference = omega_infty_a(tol)?.value;
            let r = jacobian_crosscheck(s.samples.unwrap_or(1_000_000), seed, reference)?;
            let bad = (!r.agrees).then(|| format!("x-space estimate {} disagrees with {reference}", r.estimate));
            let t = Table::new(
                &["samples", "seed", "estimate", "std_error", "reference", "relative_difference", "agrees"],
                &[r],
                |r| {
                    vec![
                        r.samples.to_string(),
                        seed.to_string(),
                        r.estimate.to_string(),
                        r.std_error.to_string(),
                        r.reference.to_string(),
                        r.relative_difference.to_string(),
                        r.agrees.to_string(),
                    ]
                },
            );
            return Ok((t, bad));
        }
        PlotKind::Subsets => {
            let a = s.a.unwrap_or(DEFAULT_A);
            let rows = bound_grid(s, &[100, 1000])
                .into_iter()
                .map(|b| diagnostics_subsets(b, a))
                .collect::<maninlab::Result<Vec<_>>>()?;
            Table::new(
                &["B", "A", "threshold", "total", "equal_9_10", "n_a", "defect", "defect_ratio", "equal_ratio"],
                &rows,
                |r| {
                    vec![
                        r.bound.to_string(),
                        r.a.to_string(),
                        r.threshold.to_string(),
                        r.total.to_string(),
                        r.equal_9_10.to_string(),
                        r.n_a.to_string(),
                        r.defect.to_string(),
                        r.defect_ratio.to_string(),
                        r.equal_ratio.to_string(),
                    ]
                },
            )
        }
    };
    Ok((t, None))
}

pub fn asymptotics(task: Task, s: &Settings) -> Result<Outcome> {
    let kind = match task {
        Task::LocalFactors => PlotKind::LocalFactors,
        Task::Sum1 => PlotKind::Sum1,
        Task::ManinRatio => PlotKind::ManinRatio,
        Task::AssemblyCheck => return assembly_check(s),
    };
    let (t, failure) = table(kind, s)?;
    Ok(Outcome { text: t.render(s.format_or(Format::Csv)), failure })
}

fn assembly_check(s: &Settings) -> Result<Outcome> {
    json_only(s, "assembly-check")?;
    let tol = positive(s.tolerance.unwrap_or(DEFAULT_TOL), "tolerance")?;
    let pmax = s.pmax.unwrap_or(DEFAULT_PMAX);
    let inp = AssemblyInputs::compute(tol, pmax)?;
    let r = constant_assembly(&inp, tol);
    let c = c_vh(tol, pmax)?.c_vh;
    let agrees = r.rhs.intersects(&c);
    let v = json!({
        "lhs": iv_json(&r.lhs),
        "rhs": iv_json(&r.rhs),
        "relative_gap": r.relative_gap,
        "holds": r.holds,
        "c": iv_json(&c),
        "rhs_meets_c": agrees,
    });
    let failure = (!(r.holds && agrees)).then(|| "constant assembly does not close".to_string());
    Ok(Outcome { text: json_text(&v), failure })
}

pub fn plot_data(s: &Settings) -> Result<Outcome> {
    let kind = require(s.kind, "--kind")?;
    let (t, failure) = table(kind, s)?;
    Ok(Outcome { text: t.render(s.format_or(Format::Csv)), failure })
}
