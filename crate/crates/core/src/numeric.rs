//! Small 1-D numerical kernels: golden-section minimization, bisection and
//! the composite midpoint rule.

use crate::error::Result;

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Best point seen by [`golden_section_min`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

/// Minimize `f` on `[a, b]` until the bracket is narrower than `tol`.
///
/// `f` may return `+inf` on part of the bracket (points excluded from the
/// search). The returned point is the best *evaluated* point, so its value
/// is always a genuine function value.
pub fn golden_section_min<F>(mut f: F, a: f64, b: f64, tol: f64) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut best = Minimum { x: lo, value: f(lo) };
    let consider = |x: f64, v: f64, best: &mut Minimum| {
        if v < best.value {
            *best = Minimum { x, value: v };
        }
    };
    let fhi = f(hi);
    consider(hi, fhi, &mut best);

    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    consider(x1, f1, &mut best);
    consider(x2, f2, &mut best);
    let mut iters = 0;
    while hi - lo > tol && iters < 200 {
        iters += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            consider(x1, f1, &mut best);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            consider(x2, f2, &mut best);
        }
    }
    best
}

/// Shrink `[inside, outside]` around the switch of a predicate that holds at
/// `inside` and fails at `outside`. Returns the final `(inside, outside)`
/// pair, `|inside - outside| <= tol`.
pub fn bisect_predicate<F>(mut holds: F, mut inside: f64, mut outside: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<bool>,
{
    let mut iters = 0;
    while (outside - inside).abs() > tol && iters < 200 {
        iters += 1;
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if holds(mid)? {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok((inside, outside))
}

/// Root of `g` on `[a, b]` given `g(a)` and `g(b)` of strictly opposite sign.
/// Returns the final bracket.
pub fn bisect_root<F>(mut g: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut ga = g(a)?;
    let mut iters = 0;
    while (b - a).abs() > tol && iters < 200 {
        iters += 1;
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let gm = g(m)?;
        if gm == 0.0 {
            return Ok((m, m));
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    Ok((a, b))
}

/// Composite midpoint rule for `∫_a^b f` with step at most `h`.
///
/// The interval is split into `ceil((b - a) / h)` equal panels. Endpoints
/// are never evaluated.
pub fn midpoint_integral<F>(mut f: F, a: f64, b: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if b == a {
        return Ok(0.0);
    }
    let width = b - a;
    let panels = (width.abs() / h).ceil().max(1.0) as usize;
    let step = width / panels as f64;
    let mut sum = 0.0;
    for i in 0..panels {
        sum += f(a + (i as f64 + 0.5) * step)?;
    }
    Ok(sum * step)
}
