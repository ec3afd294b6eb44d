//! Hypothesis/conclusion verifiers for the fixed-disc theorems, plus
//! fixed-set and maximal-disc analysis.

use serde::Serialize;

use crate::contractions::{
    check_alpha_necessary_inequality, ciric_arms, is_alpha_admissible, is_alpha_zc_contraction,
    is_ciric_zc_contraction, is_zc_contraction, mu, pair_condition, r_pair, rho, AlphaFunction, RadiusEstimate,
    SelfMap,
};
use crate::error::{FdError, Result};
use crate::metric::{disc_points, distance, enumerate_samples, Disc, MetricSpace, Point, Provenance, SampleSet};
use crate::numeric::{bisect_predicate, bisect_root};
use crate::report::{
    fmt_radius, ser_num, CheckOutcome, Conclusion, Diagnostic, Hypothesis, Numbers, SampleMeta, Status, Verdict,
    VerificationReport, Witness,
};
use crate::simulation::{check_side_conditions, integrate_aux, Family, SimulationFunctionSpec, ZetaParams};
use crate::tolerance::{Tolerances, DEFAULT_SEED};

/// Tolerances plus the seed recorded in reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub tol: Tolerances,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tol: Tolerances::default(),
            seed: DEFAULT_SEED,
        }
    }
}

/// Grid samples enriched with every map's breakpoints and the given discs
/// (centers, and boundaries in 1-D).
pub fn analysis_samples(space: &MetricSpace, maps: &[&SelfMap], discs: &[Disc], tol: &Tolerances) -> Result<SampleSet> {
    let bps: Vec<f64> = maps.iter().flat_map(|m| m.breakpoints()).collect();
    enumerate_samples(&space.with_critical_points(&bps), discs, tol)
}

fn with_center(samples: &SampleSet, x0: &Point) -> SampleSet {
    if samples.contains(x0) {
        samples.clone()
    } else {
        samples.with_point(x0.clone(), Provenance::CENTER)
    }
}

fn with_disc_boundary(space: &MetricSpace, samples: &SampleSet, disc: &Disc) -> SampleSet {
    let (MetricSpace::Interval(iv), Some(c)) = (space, disc.center.as_scalar()) else {
        return samples.clone();
    };
    if !disc.radius.is_finite() {
        return samples.clone();
    }
    let mut out = samples.clone();
    for b in [c - disc.radius, c + disc.radius] {
        if b >= iv.lo && b <= iv.hi && !out.contains(&Point::scalar(b)) {
            out = out.with_point(Point::scalar(b), Provenance::BOUNDARY);
        }
    }
    out
}

/// Points where two maps agree, as sampled and refined in 1-D.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedSetSummary {
    pub count: usize,
    /// Maximal runs `[lo, hi]` of consecutive agreeing samples (1-D).
    pub components: Vec<(f64, f64)>,
    /// Roots located by bisection strictly between samples.
    pub refined: Vec<f64>,
    /// Agreeing indices (finite spaces).
    pub indices: Vec<usize>,
    #[serde(skip)]
    pub samples: SampleSet,
}

impl FixedSetSummary {
    pub fn scalars(&self) -> Vec<f64> {
        self.samples.scalars()
    }
}

/// Samples with `d(Tx, Sx) <= eps_fix`. In 1-D, a strict sign change of
/// `Tx - Sx` between adjacent disagreeing samples is bisected to
/// `root_tol`; the root is kept only if the difference shrinks like a
/// continuous function would.
pub fn coincidence_set(
    space: &MetricSpace,
    t: &SelfMap,
    s: &SelfMap,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<FixedSetSummary> {
    let pts = samples.points();
    let mut agree = Vec::with_capacity(pts.len());
    let mut diff = Vec::with_capacity(pts.len());
    for x in pts {
        let (tx, sx) = (t.apply(space, x)?, s.apply(space, x)?);
        agree.push(distance(space, &tx, &sx)? <= tol.eps_fix);
        diff.push(match (tx.as_scalar(), sx.as_scalar()) {
            (Some(a), Some(b)) => a - b,
            _ => f64::NAN,
        });
    }
    let mut k = 0;
    let mut set = samples.filter(|_| {
        k += 1;
        agree[k - 1]
    });
    let mut refined = Vec::new();
    if space.is_one_dimensional() {
        let xs = samples.scalars();
        let g = |v: f64| -> Result<f64> {
            let p = Point::scalar(v);
            Ok(t.apply(space, &p)?.as_scalar().unwrap() - s.apply(space, &p)?.as_scalar().unwrap())
        };
        for i in 0..xs.len().saturating_sub(1) {
            let (a, b) = (xs[i], xs[i + 1]);
            if agree[i] || agree[i + 1] || !(diff[i] * diff[i + 1] < 0.0) {
                continue;
            }
            let (lo, hi) = bisect_root(g, a, b, tol.root_tol)?;
            let mid = 0.5 * (lo + hi);
            let slope = (diff[i + 1] - diff[i]).abs() / (b - a);
            let gm = match g(mid) {
                Ok(v) => v.abs(),
                Err(_) => continue,
            };
            if gm <= 10.0 * slope * (hi - lo) + tol.eps_fix {
                refined.push(mid);
            }
        }
        for &r in &refined {
            set = set.with_point(Point::scalar(r), Provenance::REFINED);
        }
    }
    let mut components = Vec::new();
    if space.is_one_dimensional() {
        // Merge the refined roots into the sample order to find runs.
        let mut all: Vec<(f64, bool)> = samples.scalars().into_iter().zip(agree.iter().copied()).collect();
        all.extend(refined.iter().map(|&r| (r, true)));
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut run: Option<(f64, f64)> = None;
        for (x, ok) in all {
            match (ok, run.as_mut()) {
                (true, Some(r)) => r.1 = x,
                (true, None) => run = Some((x, x)),
                (false, Some(_)) => components.push(run.take().unwrap()),
                (false, None) => {}
            }
        }
        components.extend(run);
    }
    let indices = set.points().iter().filter_map(Point::as_index).collect();
    Ok(FixedSetSummary {
        count: set.len(),
        components,
        refined,
        indices,
        samples: set,
    })
}

/// Samples with `d(x, Tx) <= eps_fix`, plus bisected fixed points (1-D).
pub fn fixed_set(space: &MetricSpace, t: &SelfMap, samples: &SampleSet, tol: &Tolerances) -> Result<FixedSetSummary> {
    coincidence_set(space, t, &SelfMap::identity(), samples, tol)
}

/// Largest closed disc about `x0` on which every sampled point is fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxFixedRadius {
    #[serde(serialize_with = "ser_num")]
    pub radius: f64,
    /// `Tx0 = x0`; when false the radius is 0.
    pub center_fixed: bool,
    /// True when a displaced point limits the radius; false when the disc
    /// reaches the edge of the sampled domain.
    pub bounded: bool,
    pub nearest_displaced: Option<Point>,
}

/// Supremum of radii `r` with every sampled point of `D(x0, r)` fixed: the
/// distance to the nearest displaced sample, refined in 1-D by bisecting
/// between it and its fixed neighbour. With no displaced sample, the
/// distance to the nearest domain edge (largest distance in finite spaces).
pub fn maximal_fixed_radius(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<MaxFixedRadius> {
    let is_fixed = |p: &Point| -> Result<bool> { Ok(distance(space, p, &t.apply(space, p)?)? <= tol.eps_fix) };
    if !is_fixed(x0)? {
        return Ok(MaxFixedRadius {
            radius: 0.0,
            center_fixed: false,
            bounded: true,
            nearest_displaced: Some(x0.clone()),
        });
    }
    let samples = with_center(samples, x0);
    let pts = samples.points();
    let fixed: Vec<bool> = pts.iter().map(&is_fixed).collect::<Result<_>>()?;

    if let (MetricSpace::Interval(iv), Some(c)) = (space, x0.as_scalar()) {
        let xs = samples.scalars();
        let center = xs.iter().position(|&v| v == c).expect("center injected");
        let mut best: Option<(f64, f64)> = None; // (radius, displaced point)
        let mut edge = f64::INFINITY;
        for dir in [-1i64, 1] {
            let mut k = center as i64;
            let mut last_fixed = c;
            loop {
                k += dir;
                if k < 0 || k as usize >= xs.len() {
                    let bound = if dir < 0 { c - iv.lo } else { iv.hi - c };
                    edge = edge.min(bound);
                    break;
                }
                let x = xs[k as usize];
                if fixed[k as usize] {
                    last_fixed = x;
                    continue;
                }
                let (_, outside) = bisect_predicate(
                    |v| is_fixed(&Point::scalar(v)).or(Ok(false)),
                    last_fixed,
                    x,
                    tol.tau_rho,
                )?;
                let r = (outside - c).abs();
                if best.is_none_or(|(b, _)| r < b) {
                    best = Some((r, outside));
                }
                break;
            }
        }
        return Ok(match best {
            Some((r, p)) if r <= edge => MaxFixedRadius {
                radius: r,
                center_fixed: true,
                bounded: true,
                nearest_displaced: Some(Point::scalar(p)),
            },
            _ => MaxFixedRadius {
                radius: edge,
                center_fixed: true,
                bounded: false,
                nearest_displaced: best.map(|(_, p)| Point::scalar(p)),
            },
        });
    }

    let mut nearest: Option<(f64, &Point)> = None;
    for (p, &f) in pts.iter().zip(&fixed) {
        if !f {
            let d = distance(space, x0, p)?;
            if nearest.is_none_or(|(b, _)| d < b) {
                nearest = Some((d, p));
            }
        }
    }
    if let Some((d, p)) = nearest {
        return Ok(MaxFixedRadius {
            radius: d,
            center_fixed: true,
            bounded: true,
            nearest_displaced: Some(p.clone()),
        });
    }
    let radius = match (space, x0) {
        (MetricSpace::Box(b), Point::Coords(c)) => b
            .bounds
            .iter()
            .zip(c)
            .map(|(&(lo, hi), &v)| (v - lo).min(hi - v))
            .fold(f64::INFINITY, f64::min),
        _ => pts
            .iter()
            .map(|p| distance(space, x0, p))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max),
    };
    Ok(MaxFixedRadius {
        radius,
        center_fixed: true,
        bounded: false,
        nearest_displaced: None,
    })
}

/// Every sample of the disc is fixed. Witness value: `d(x, Tx)`.
pub fn verify_fixed_disc(
    space: &MetricSpace,
    t: &SelfMap,
    disc: &Disc,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let inside = disc_points(space, samples, disc, tol)?;
    let mut c = CheckOutcome::collector(tol.witness_cap);
    for x in inside.points() {
        c.premise();
        let d = distance(space, x, &t.apply(space, x)?)?;
        if d > tol.eps_fix {
            c.violation(Witness::at(x, d));
        }
    }
    Ok(c.finish())
}

/// `0 < d(Tx, x0) <= radius_value + eps_mem` for every sample of the disc
/// other than `x0`. Witness value: `d(Tx, x0)`.
fn disc_condition(
    space: &MetricSpace,
    t: &SelfMap,
    disc: &Disc,
    radius_value: f64,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let inside = disc_points(space, samples, disc, tol)?;
    let mut c = CheckOutcome::collector(tol.witness_cap);
    for x in inside.points() {
        if distance(space, x, &disc.center)? == 0.0 {
            continue;
        }
        c.premise();
        let d = distance(space, &t.apply(space, x)?, &disc.center)?;
        if !(d > tol.eps_fix && d <= radius_value + tol.eps_mem) {
            c.violation(Witness::at(x, d));
        }
    }
    Ok(c.finish())
}

fn conclusion_from(o: CheckOutcome, disc: Disc) -> Conclusion {
    Conclusion {
        status: o.status,
        disc: Some(disc),
        checked: o.checked,
        counterexamples: o.witnesses,
    }
}

fn identity_note(fs: &FixedSetSummary, samples: &SampleSet) -> Option<Diagnostic> {
    (fs.count >= samples.len() && !samples.is_empty())
        .then(|| Diagnostic::new("identity_on_samples", "map is identity on all samples"))
}

fn radius_note(name: &str, est: &RadiusEstimate) -> Diagnostic {
    let detail = if est.is_unbounded() {
        "no displaced sample; disc is the whole sampled space".to_string()
    } else {
        format!(
            "value {} ({}), conservative {}",
            est.value,
            if est.attained {
                "attained"
            } else {
                "approached, not attained"
            },
            est.lower
        )
    };
    Diagnostic::new(name, detail)
}

struct DiscSetup {
    samples: SampleSet,
    rho: RadiusEstimate,
    disc: Disc,
}

fn disc_setup(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<DiscSetup> {
    space.check_point(x0)?;
    if samples.is_empty() {
        return Err(FdError::domain("sample set is empty"));
    }
    let base = with_center(samples, x0);
    let rho = rho(space, t, &base, tol)?;
    let disc = Disc::new(x0.clone(), rho.lower)?;
    Ok(DiscSetup {
        samples: with_disc_boundary(space, &base, &disc),
        rho,
        disc,
    })
}

fn finish_report(
    theorem: &str,
    hypotheses: Vec<Hypothesis>,
    conclusion: Conclusion,
    numbers: Numbers,
    sample_count: usize,
    settings: &Settings,
    diagnostics: Vec<Diagnostic>,
) -> VerificationReport {
    let verdict = Verdict::decide(&hypotheses, conclusion.status);
    VerificationReport {
        theorem: theorem.to_string(),
        hypotheses,
        conclusion,
        numbers,
        samples: SampleMeta::new(sample_count, settings.seed, settings.tol),
        verdict,
        diagnostics,
    }
}

fn single_map_numbers(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    setup: &DiscSetup,
    tol: &Tolerances,
) -> Result<(Numbers, Vec<Diagnostic>)> {
    let fs = fixed_set(space, t, &setup.samples, tol)?;
    let mut diags = vec![radius_note("rho", &setup.rho)];
    diags.extend(identity_note(&fs, &setup.samples));
    let numbers = Numbers {
        rho: Some(setup.rho.clone()),
        fixed_set: Some(fs),
        maximal_fixed_radius: Some(maximal_fixed_radius(space, t, x0, &setup.samples, tol)?),
        ..Numbers::default()
    };
    Ok((numbers, diags))
}

/// H1: Z_c-contraction; H2: `0 < d(Tx, x0) <= rho` on the disc; C: the
/// disc `D(x0, rho_lower)` is fixed.
pub fn verify_theorem1(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    zeta: &SimulationFunctionSpec,
    samples: &SampleSet,
    settings: &Settings,
) -> Result<VerificationReport> {
    let tol = &settings.tol;
    let setup = disc_setup(space, t, x0, samples, tol)?;
    let s = &setup.samples;
    let h1 = is_zc_contraction(space, t, x0, zeta, s, tol)?;
    let h2 = disc_condition(space, t, &setup.disc, setup.rho.value, s, tol)?;
    let c = verify_fixed_disc(space, t, &setup.disc, s, tol)?;
    let (numbers, diags) = single_map_numbers(space, t, x0, &setup, tol)?;
    Ok(finish_report(
        "thm1",
        vec![
            Hypothesis::from_outcome("zc_contraction", h1),
            Hypothesis::from_outcome("disc_condition", h2),
        ],
        conclusion_from(c, setup.disc.clone()),
        numbers,
        s.len(),
        settings,
        diags,
    ))
}

/// Checks condition `k` (1..=5) directly, the side conditions of its
/// auxiliary function, and the disc condition; the conclusion is the same
/// as for [`verify_theorem1`]. The Z_c check with the matching simulation
/// function is recorded as a cross-check diagnostic.
pub fn verify_corollary(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    k: u8,
    params: &ZetaParams,
    samples: &SampleSet,
    settings: &Settings,
) -> Result<VerificationReport> {
    if !(1..=5).contains(&k) {
        return Err(FdError::domain(format!("corollary index must be 1..5, got {k}")));
    }
    let tol = &settings.tol;
    let zeta = SimulationFunctionSpec::from_registry(&format!("zeta{k}"), params)?;
    let setup = disc_setup(space, t, x0, samples, tol)?;
    let s = &setup.samples;

    // lhs <= rhs at displaced samples, with (lhs, rhs) from (d(Tx,x), d(Tx,x0)).
    let bound = |moved: f64, to_center: f64| -> Result<(f64, f64)> {
        Ok(match zeta.family() {
            Family::LinearLambda { lambda } => (moved, lambda * to_center),
            Family::PhiSubtract { phi } => (moved, to_center - phi.eval(to_center)?),
            Family::PhiMultiply { phi } => (moved, phi.eval(to_center)? * to_center),
            Family::EtaBound { eta } => (moved, eta.eval(to_center)?),
            Family::IntegralPhi { phi, quad_step } => (integrate_aux(phi, moved, *quad_step)?, to_center),
            Family::Custom { .. } => unreachable!("registry zeta1..zeta5"),
        })
    };
    let mut cond = CheckOutcome::collector(tol.witness_cap);
    for x in s.points() {
        let tx = t.apply(space, x)?;
        let moved = distance(space, &tx, x)?;
        if moved <= tol.eps_fix {
            continue;
        }
        cond.premise();
        let (lhs, rhs) = bound(moved, distance(space, &tx, x0)?)?;
        if !(lhs <= rhs) {
            cond.violation(Witness::at(x, lhs - rhs));
        }
    }
    let cond = cond.finish();
    let side = check_side_conditions(&zeta, tol)?;
    let side_status = if matches!(zeta.family(), Family::LinearLambda { .. }) {
        Status::Pass
    } else {
        side.status()
    };
    let h2 = disc_condition(space, t, &setup.disc, setup.rho.value, s, tol)?;
    let c = verify_fixed_disc(space, t, &setup.disc, s, tol)?;
    let cross = is_zc_contraction(space, t, x0, &zeta, s, tol)?;

    let (numbers, mut diags) = single_map_numbers(space, t, x0, &setup, tol)?;
    let agree = cross.status.holds() == cond.status.holds();
    diags.push(Diagnostic::new(
        "zc_cross_check",
        format!(
            "Z_c check with {} is {}; {} the direct condition",
            zeta.name(),
            cross.status.name(),
            if agree { "agrees with" } else { "DISAGREES with" }
        ),
    ));
    for sc in &side.conditions {
        diags.push(Diagnostic::new(
            "side_condition",
            format!("{}: {}", sc.name, sc.status.name()),
        ));
    }
    diags.push(Diagnostic::new("regularity", side.regularity.clone()));
    Ok(finish_report(
        &format!("cor{k}"),
        vec![
            Hypothesis::from_outcome("corollary_condition", cond),
            Hypothesis::simple("side_conditions", side_status),
            Hypothesis::from_outcome("disc_condition", h2),
        ],
        conclusion_from(c, setup.disc.clone()),
        numbers,
        s.len(),
        settings,
        diags,
    ))
}

/// H1: alpha-Z_c-contraction; H2: alpha-admissibility; H3: `alpha(x0, x)
/// >= 1` on the disc; H4: disc condition; C as for [`verify_theorem1`].
pub fn verify_theorem2(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    alpha: &AlphaFunction,
    zeta: &SimulationFunctionSpec,
    samples: &SampleSet,
    settings: &Settings,
) -> Result<VerificationReport> {
    let tol = &settings.tol;
    let setup = disc_setup(space, t, x0, samples, tol)?;
    let s = &setup.samples;
    let h1 = is_alpha_zc_contraction(space, t, x0, alpha, zeta, s, tol)?;
    let h2 = is_alpha_admissible(space, t, x0, alpha, s, tol)?;
    let mut h3 = CheckOutcome::collector(tol.witness_cap);
    for x in disc_points(space, s, &setup.disc, tol)?.points() {
        h3.premise();
        let a = alpha.eval(x0, x)?;
        if !(a >= 1.0) {
            h3.violation(Witness::at(x, a));
        }
    }
    let h4 = disc_condition(space, t, &setup.disc, setup.rho.value, s, tol)?;
    let c = verify_fixed_disc(space, t, &setup.disc, s, tol)?;
    let nec = check_alpha_necessary_inequality(space, t, x0, alpha, s, tol)?;
    let (numbers, mut diags) = single_map_numbers(space, t, x0, &setup, tol)?;
    diags.push(Diagnostic::new(
        "alpha_necessary_inequality",
        format!(
            "{} ({} violations on {} samples)",
            nec.status.name(),
            nec.violations,
            nec.checked
        ),
    ));
    Ok(finish_report(
        "thm2",
        vec![
            Hypothesis::from_outcome("alpha_zc_contraction", h1),
            Hypothesis::from_outcome("alpha_admissible", h2),
            Hypothesis::from_outcome("alpha_on_disc", h3.finish()),
            Hypothesis::from_outcome("disc_condition", h4),
        ],
        conclusion_from(c, setup.disc.clone()),
        numbers,
        s.len(),
        settings,
        diags,
    ))
}

/// Margin below which a Ćirić sample is listed with its maximizing arm.
pub const NEAR_VIOLATION: f64 = 1e-6;

/// H1: Ćirić-type Z_c-contraction; H2: disc condition; C as for
/// [`verify_theorem1`]. Diagnostics list the arm of `m*` at violating and
/// near-violating samples.
pub fn verify_theorem3(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    zeta: &SimulationFunctionSpec,
    samples: &SampleSet,
    settings: &Settings,
) -> Result<VerificationReport> {
    let tol = &settings.tol;
    let setup = disc_setup(space, t, x0, samples, tol)?;
    let s = &setup.samples;
    let h1 = is_ciric_zc_contraction(space, t, x0, zeta, s, tol)?;
    let h2 = disc_condition(space, t, &setup.disc, setup.rho.value, s, tol)?;
    let c = verify_fixed_disc(space, t, &setup.disc, s, tol)?;
    let (numbers, mut diags) = single_map_numbers(space, t, x0, &setup, tol)?;
    for rec in ciric_arms(space, t, x0, zeta, s, NEAR_VIOLATION, tol)? {
        diags.push(Diagnostic::new(
            "ciric_arm",
            format!(
                "x = {}: max attained by {} (m* = {}, zeta = {})",
                rec.point,
                rec.arm.name(),
                rec.m_star,
                rec.zeta
            ),
        ));
    }
    Ok(finish_report(
        "thm3",
        vec![
            Hypothesis::from_outcome("ciric_zc_contraction", h1),
            Hypothesis::from_outcome("disc_condition", h2),
        ],
        conclusion_from(c, setup.disc.clone()),
        numbers,
        s.len(),
        settings,
        diags,
    ))
}

/// Which map of the pair is required to be a Z_c-contraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    T,
    S,
}

/// H1: pair condition; H2: `d(Tx,x0) <= mu` and `d(Sx,x0) <= mu` on
/// `D(x0, mu_lower)`; H3: the designated map satisfies the single-map
/// hypotheses; C: both maps fix `D(x0, mu_lower)`.
pub fn verify_theorem4(
    space: &MetricSpace,
    t: &SelfMap,
    s_map: &SelfMap,
    x0: &Point,
    zeta: &SimulationFunctionSpec,
    samples: &SampleSet,
    branch: Branch,
    settings: &Settings,
) -> Result<VerificationReport> {
    let tol = &settings.tol;
    space.check_point(x0)?;
    if samples.is_empty() {
        return Err(FdError::domain("sample set is empty"));
    }
    let (main, other) = match branch {
        Branch::T => (t, s_map),
        Branch::S => (s_map, t),
    };
    let base = with_center(samples, x0);
    let rho_main = rho(space, main, &base, tol)?;
    let rho_other = rho(space, other, &base, tol)?;
    let r = r_pair(space, t, s_map, &base, tol)?;
    let m = mu(&rho_main, &r);
    let disc = Disc::new(x0.clone(), m.lower)?;
    let smp = with_disc_boundary(space, &base, &disc);

    let h1 = pair_condition(space, t, s_map, x0, zeta, &smp, tol)?;
    let mut h2 = CheckOutcome::collector(tol.witness_cap);
    for x in disc_points(space, &smp, &disc, tol)?.points() {
        h2.premise();
        let worst = distance(space, &t.apply(space, x)?, x0)?.max(distance(space, &s_map.apply(space, x)?, x0)?);
        if !(worst <= m.value + tol.eps_mem) {
            h2.violation(Witness::at(x, worst));
        }
    }
    let single = verify_theorem1(space, main, x0, zeta, &smp, settings)?;
    let h3_status = single.hypotheses.iter().fold(Status::Vacuous, |a, h| a.and(h.status));
    let h3 = Hypothesis {
        name: "designated_map_theorem1".into(),
        status: h3_status,
        checked: single.hypotheses.iter().map(|h| h.checked).sum(),
        violations: single.hypotheses.iter().map(|h| h.violations).sum(),
        witnesses: single
            .hypotheses
            .iter()
            .flat_map(|h| h.witnesses.iter().cloned())
            .take(tol.witness_cap)
            .collect(),
    };
    let ct = verify_fixed_disc(space, t, &disc, &smp, tol)?;
    let cs = verify_fixed_disc(space, s_map, &disc, &smp, tol)?;
    let mut counterexamples = ct.witnesses;
    counterexamples.extend(cs.witnesses);
    counterexamples.truncate(tol.witness_cap);
    let conclusion = Conclusion {
        status: ct.status.and(cs.status),
        disc: Some(disc),
        checked: ct.checked,
        counterexamples,
    };
    let coincidence = coincidence_set(space, t, s_map, &smp, tol)?;
    let fs = fixed_set(space, main, &smp, tol)?;
    let mut diags = vec![
        Diagnostic::new(
            "designated_map",
            format!("{} ({})", if branch == Branch::T { "T" } else { "S" }, main.label()),
        ),
        radius_note("rho", &rho_main),
        radius_note("rho_second", &rho_other),
        radius_note("r", &r),
        Diagnostic::new(
            "mu",
            format!("value {}, conservative {}", fmt_radius(m.value), fmt_radius(m.lower)),
        ),
        Diagnostic::new(
            "coincidence_set",
            format!(
                "{} samples with Tx = Sx; components {:?}",
                coincidence.count, coincidence.components
            ),
        ),
    ];
    diags.extend(identity_note(&fs, &smp));
    let numbers = Numbers {
        rho: Some(rho_main),
        rho_second: Some(rho_other),
        r: Some(r),
        mu: Some(m),
        fixed_set: Some(fs),
        coincidence_set: Some(coincidence),
        maximal_fixed_radius: None,
    };
    Ok(finish_report(
        "thm4",
        vec![
            Hypothesis::from_outcome("pair_condition", h1),
            Hypothesis::from_outcome("range_condition", h2.finish()),
            h3,
        ],
        conclusion,
        numbers,
        smp.len(),
        settings,
        diags,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st() -> Settings {
        Settings::default()
    }

    fn line(lo: f64, hi: f64, n: usize) -> MetricSpace {
        MetricSpace::interval(lo, hi, n).unwrap()
    }

    fn map(lines: &[&str]) -> SelfMap {
        SelfMap::parse_pieces(lines).unwrap()
    }

    fn zeta(name: &str) -> SimulationFunctionSpec {
        SimulationFunctionSpec::from_registry(name, &ZetaParams::default()).unwrap()
    }

    fn p(x: f64) -> Point {
        Point::scalar(x)
    }

    fn run1(space: &MetricSpace, t: &SelfMap, x0: f64, z: &str) -> VerificationReport {
        let s = analysis_samples(space, &[t], &[], &st().tol).unwrap();
        verify_theorem1(space, t, &p(x0), &zeta(z), &s, &st()).unwrap()
    }

    #[test]
    fn quadratic_fixed_points_by_refinement() {
        // 1000 samples on [-5, 5] place neither fixed point on the grid.
        let sp = line(-5.0, 5.0, 1000);
        let t = map(&["otherwise : x*x - 2"]);
        let s = analysis_samples(&sp, &[&t], &[], &st().tol).unwrap();
        let fs = fixed_set(&sp, &t, &s, &st().tol).unwrap();
        assert_eq!(fs.count, 2, "{fs:?}");
        let xs = fs.scalars();
        assert!((xs[0] + 1.0).abs() < 1e-6 && (xs[1] - 2.0).abs() < 1e-6, "{xs:?}");
        assert_eq!(fs.refined.len(), 2);
    }

    #[test]
    fn jump_is_not_a_root() {
        let sp = line(-1.0, 1.0, 10);
        let t = map(&["x < 0 : x + 1", "otherwise : x - 1"]);
        let s = analysis_samples(&sp, &[], &[], &st().tol).unwrap();
        assert_eq!(fixed_set(&sp, &t, &s, &st().tol).unwrap().count, 0);
    }

    #[test]
    fn fixed_set_components() {
        let sp = line(-50.0, 50.0, 10001);
        let s_map = map(&["[0, 2] : x", "otherwise : x + sqrt(2)"]);
        let s = analysis_samples(&sp, &[&s_map], &[], &st().tol).unwrap();
        let fs = fixed_set(&sp, &s_map, &s, &st().tol).unwrap();
        assert_eq!(fs.components, vec![(0.0, 2.0)]);
        let id = fixed_set(&sp, &SelfMap::identity(), &s, &st().tol).unwrap();
        assert_eq!(id.count, s.len());
    }

    #[test]
    fn maximal_radius_examples() {
        let sp = line(-50.0, 50.0, 10001);
        let t3 = map(&["[-3, 3] : x", "otherwise : x + 1"]);
        let s = analysis_samples(&sp, &[&t3], &[], &st().tol).unwrap();
        let m0 = maximal_fixed_radius(&sp, &t3, &p(0.0), &s, &st().tol).unwrap();
        assert!((m0.radius - 3.0).abs() < 1e-3 && m0.bounded);
        let m1 = maximal_fixed_radius(&sp, &t3, &p(1.0), &s, &st().tol).unwrap();
        assert!((m1.radius - 2.0).abs() < 1e-3);
        let mid = maximal_fixed_radius(&sp, &SelfMap::identity(), &p(10.0), &s, &st().tol).unwrap();
        assert_eq!(mid.radius, 40.0);
        assert!(!mid.bounded);
        let moved = maximal_fixed_radius(&sp, &t3, &p(5.0), &s, &st().tol).unwrap();
        assert_eq!(moved.radius, 0.0);
        assert!(!moved.center_fixed);
    }

    #[test]
    fn theorem1_examples() {
        let sp = line(-50.0, 50.0, 10001);
        let t1 = map(&["[-1, 1] : x", "otherwise : 2*x"]);
        let r = run1(&sp, &t1, 0.0, "zeta6");
        assert_eq!(r.verdict, Verdict::Consistent, "{}", r.render_text());
        assert!((r.numbers.rho.as_ref().unwrap().value - 1.0).abs() < 1e-3);

        let t3 = map(&["[-3, 3] : x", "otherwise : x + 1"]);
        let a = run1(&sp, &t3, 0.0, "zeta7");
        let b = run1(&sp, &t3, 1.0, "zeta7");
        assert_eq!(a.verdict, Verdict::Consistent);
        assert_eq!(b.verdict, Verdict::Consistent);
        assert_eq!(
            a.numbers.rho.as_ref().unwrap().value,
            b.numbers.rho.as_ref().unwrap().value
        );
        let mfr = a.numbers.maximal_fixed_radius.as_ref().unwrap().radius;
        assert!(mfr >= a.numbers.rho.as_ref().unwrap().lower);

        let t2 = map(&["[-1, 3] : x", "otherwise : 2"]);
        let c = run1(&sp, &t2, 1.0, "zeta6");
        assert_eq!(c.verdict, Verdict::HypothesisFailed);
        assert_eq!(c.conclusion.status, Status::Pass);
        assert_eq!(c.hypothesis("zc_contraction").unwrap().status, Status::Fail);
    }

    #[test]
    fn identity_is_flagged_and_consistent() {
        let sp = line(-5.0, 5.0, 101);
        let r = run1(&sp, &SelfMap::identity(), 0.0, "zeta6");
        assert_eq!(r.verdict, Verdict::Consistent);
        assert_eq!(r.hypotheses[0].status, Status::Vacuous);
        assert!(r.diagnostics.iter().any(|d| d.name == "identity_on_samples"));
        assert!(r.numbers.rho.as_ref().unwrap().is_unbounded());
        assert!(r.to_json().contains("\"radius\": null"));
    }

    #[test]
    fn center_moved_gives_point_disc() {
        let sp = line(-5.0, 5.0, 101);
        let shift = map(&["otherwise : x + 0.5"]);
        let r = run1(&sp, &shift, 0.0, "zeta6");
        assert_eq!(r.conclusion.status, Status::Fail);
        assert_eq!(r.verdict, Verdict::HypothesisFailed);
    }

    #[test]
    fn corollaries_on_t1() {
        let sp = line(-50.0, 50.0, 10001);
        let t1 = map(&["[-1, 1] : x", "otherwise : 2*x"]);
        let s = analysis_samples(&sp, &[&t1], &[], &st().tol).unwrap();
        for k in 1..=5 {
            let r = verify_corollary(&sp, &t1, &p(0.0), k, &ZetaParams::default(), &s, &st()).unwrap();
            let cross = r.diagnostics.iter().find(|d| d.name == "zc_cross_check").unwrap();
            assert!(cross.detail.contains("agrees"), "cor{k}: {}", cross.detail);
            assert_eq!(r.verdict, Verdict::Consistent, "cor{k}: {}", r.render_text());
        }
        let bad = ZetaParams {
            lambda: Some(1.5),
            ..ZetaParams::default()
        };
        assert!(verify_corollary(&sp, &t1, &p(0.0), 1, &bad, &s, &st()).is_err());
        let zero = ZetaParams {
            lambda: Some(0.0),
            ..ZetaParams::default()
        };
        let r = verify_corollary(&sp, &SelfMap::identity(), &p(0.0), 1, &zero, &s, &st()).unwrap();
        assert_eq!(r.conclusion.status, Status::Pass);
    }

    #[test]
    fn theorem2_reduces_to_theorem1() {
        let sp = line(-50.0, 50.0, 10001);
        let t1 = map(&["[-1, 1] : x", "otherwise : 2*x"]);
        let s = analysis_samples(&sp, &[&t1], &[], &st().tol).unwrap();
        let one = AlphaFunction::constant(1.0);
        let r2 = verify_theorem2(&sp, &t1, &p(0.0), &one, &zeta("zeta6"), &s, &st()).unwrap();
        let r1 = verify_theorem1(&sp, &t1, &p(0.0), &zeta("zeta6"), &s, &st()).unwrap();
        assert_eq!(r2.hypotheses[0].status, r1.hypotheses[0].status);
        assert_eq!(r2.hypotheses[3].status, r1.hypotheses[1].status);
        assert_eq!(r2.conclusion.status, r1.conclusion.status);
        assert_eq!(r2.verdict, r1.verdict);
    }

    #[test]
    fn theorem2_with_gaussian_alpha_matches_brute_force() {
        let sp = line(-50.0, 50.0, 2001);
        let t1 = map(&["[-1, 1] : x", "otherwise : 2*x"]);
        let s = analysis_samples(&sp, &[&t1], &[], &st().tol).unwrap();
        let alpha = AlphaFunction::parse("1 + exp(-y^2)").unwrap();
        let z = SimulationFunctionSpec::linear(0.1).unwrap();
        let r = verify_theorem2(&sp, &t1, &p(0.0), &alpha, &z, &s, &st()).unwrap();
        // Direct evaluation: for |x| > 1, zeta = 0.1 * 2|x| - (1 + exp(-4x^2)) |x| < 0.
        let brute_fail = s
            .scalars()
            .iter()
            .any(|&x| x.abs() > 1.0 && 0.1 * (2.0 * x).abs() - (1.0 + (-(2.0 * x).powi(2)).exp()) * x.abs() < 0.0);
        assert_eq!(r.hypotheses[0].status == Status::Fail, brute_fail);
        assert_eq!(r.hypothesis("alpha_on_disc").unwrap().status, Status::Pass);
    }

    #[test]
    fn theorem3_arms() {
        let sp = line(-50.0, 50.0, 10001);
        let t1 = map(&["[-1, 1] : x", "otherwise : 2*x"]);
        let s = analysis_samples(&sp, &[&t1], &[], &st().tol).unwrap();
        let r = verify_theorem3(&sp, &t1, &p(0.0), &zeta("zeta6"), &s, &st()).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        let id = verify_theorem3(&sp, &SelfMap::identity(), &p(0.0), &zeta("zeta6"), &s, &st()).unwrap();
        assert_eq!(id.hypotheses[0].status, Status::Vacuous);
        let shift = map(&["otherwise : x + 0.5"]);
        let sh = verify_theorem3(&sp, &shift, &p(0.0), &zeta("zeta2"), &s, &st()).unwrap();
        assert_eq!(sh.hypotheses[0].status, Status::Fail);
        assert!(sh.diagnostics.iter().any(|d| d.name == "ciric_arm"));
    }

    #[test]
    fn theorem4_common_disc() {
        let sp = line(-50.0, 50.0, 10001);
        let t1 = map(&["[-1, 1] : x", "otherwise : 2*x"]);
        let t4 = map(&["[-3, 3] : x", "otherwise : 3*x"]);
        let s = analysis_samples(&sp, &[&t1, &t4], &[], &st().tol).unwrap();
        let r = verify_theorem4(&sp, &t1, &t4, &p(0.0), &zeta("zeta6"), &s, Branch::T, &st()).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent, "{}", r.render_text());
        assert!((r.numbers.mu.as_ref().unwrap().value - 1.0).abs() < 1e-3);
        let co = r.numbers.coincidence_set.as_ref().unwrap();
        assert_eq!(co.components, vec![(-1.0, 1.0)]);

        let id = SelfMap::identity();
        let r = verify_theorem4(&sp, &id, &id, &p(0.0), &zeta("zeta6"), &s, Branch::T, &st()).unwrap();
        assert!(r.numbers.mu.as_ref().unwrap().is_unbounded());
        assert_eq!(r.conclusion.status, Status::Pass);
        assert_eq!(r.conclusion.checked, r.samples.count);
    }

    #[test]
    fn monotone_conclusion() {
        let sp = line(-50.0, 50.0, 2001);
        let t3 = map(&["[-3, 3] : x", "otherwise : x + 1"]);
        let s = analysis_samples(&sp, &[&t3], &[], &st().tol).unwrap();
        let passes: Vec<bool> = [5.0, 3.5, 3.0, 2.0, 1.0, 0.0]
            .iter()
            .map(|&r| {
                verify_fixed_disc(&sp, &t3, &Disc::new(p(0.0), r).unwrap(), &s, &st().tol)
                    .unwrap()
                    .passed()
            })
            .collect();
        assert_eq!(passes, vec![false, false, true, true, true, true]);
    }
}
