//! Lebesgue measure of `{t ∈ R : |t^r + A t^{r−1}| ≤ Y}`.

/// Measure of `{t : |p(t)| ≤ y}` with `p(t) = t^{r−1}(t + A)`.
///
/// `p` is monotone between its critical points `0` and `−(r−1)A/r`, so on
/// each monotone piece the set is one interval whose ends are found by
/// bisection. Outside `|t| ≤ |A| + Y^{1/r} + 1` one has `|p(t)| > Y`, which
/// bounds the two unbounded pieces.
pub fn elementary_measure(a: f64, y: f64, r: u32) -> f64 {
    assert!(r >= 1 && y >= 0.0);
    let p = |t: f64| t.powi(r as i32 - 1) * (t + a);
    let big = a.abs() + y.powf(1.0 / r as f64) + 1.0;
    let mut cuts = vec![-big, big];
    if r >= 2 {
        cuts.push(0.0);
        cuts.push(-(r as f64 - 1.0) * a / r as f64);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| monotone_piece(&p, w[0], w[1], -y, y))
        .sum()
}

/// Length of `{t ∈ [s, e] : lo ≤ p(t) ≤ hi}` for `p` monotone on `[s, e]`.
fn monotone_piece(p: &impl Fn(f64) -> f64, s: f64, e: f64, lo: f64, hi: f64) -> f64 {
    if e <= s {
        return 0.0;
    }
    let increasing = p(e) >= p(s);
    // g is increasing on [s, e]
    let g = |t: f64| if increasing { p(t) } else { -p(t) };
    let (lo, hi) = if increasing { (lo, hi) } else { (-hi, -lo) };
    let (gs, ge) = (g(s), g(e));
    if ge < lo || gs > hi {
        return 0.0;
    }
    let first = if gs >= lo { s } else { crossing(&g, s, e, lo) };
    let last = if ge <= hi { e } else { crossing(&g, s, e, hi) };
    (last - first).max(0.0)
}

/// Point of `[s, e]` where increasing `g` crosses `level`.
fn crossing(g: &impl Fn(f64) -> f64, mut s: f64, mut e: f64, level: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (s + e);
        if m <= s || m >= e {
            break;
        }
        if g(m) < level {
            s = m;
        } else {
            e = m;
        }
    }
    0.5 * (s + e)
}
