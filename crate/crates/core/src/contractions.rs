//! Self-maps, displacement radii, the `m*` maxima and the contraction
//! predicates, each decided on a sample set with witnesses.

use serde::Serialize;

use crate::error::{FdError, Result};
use crate::expr::{Env, PiecewiseExpression, Var};
use crate::metric::{distance, MetricSpace, Point, SampleSet};
use crate::numeric::golden_section_min;
use crate::report::{ser_num, CheckOutcome, Witness};
use crate::simulation::SimulationFunctionSpec;
use crate::tolerance::Tolerances;

/// How a built-in map computes its image.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogRule {
    Identity,
    /// Every coordinate (or the index, in a finite space) becomes `c`.
    Constant(f64),
    Expr(PiecewiseExpression),
}

/// A named built-in map with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogMap {
    pub name: String,
    pub params: Vec<(String, f64)>,
    pub rule: CatalogRule,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SelfMap {
    Catalog(CatalogMap),
    /// Piecewise expression in `x`; `x0`, when given, is bound too.
    Piecewise {
        expr: PiecewiseExpression,
        x0: Option<f64>,
    },
    /// `i -> table[i]` on a finite space.
    Table(Vec<usize>),
}

impl SelfMap {
    pub fn piecewise(expr: PiecewiseExpression) -> Self {
        SelfMap::Piecewise { expr, x0: None }
    }

    pub fn parse_pieces<S: AsRef<str>>(lines: &[S]) -> Result<Self> {
        Ok(Self::piecewise(PiecewiseExpression::parse_pieces(lines, Var::X)?))
    }

    pub fn identity() -> Self {
        SelfMap::Catalog(CatalogMap {
            name: "identity".into(),
            params: Vec::new(),
            rule: CatalogRule::Identity,
        })
    }

    /// Bind `x0` for piecewise maps that mention it.
    pub fn with_center(self, center: f64) -> Self {
        match self {
            SelfMap::Piecewise { expr, .. } => SelfMap::Piecewise { expr, x0: Some(center) },
            other => other,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SelfMap::Catalog(c) if c.params.is_empty() => c.name.clone(),
            SelfMap::Catalog(c) => {
                let ps: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{}({})", c.name, ps.join(", "))
            }
            SelfMap::Piecewise { expr, .. } => format!("piecewise[{expr}]"),
            SelfMap::Table(t) => format!("table{t:?}"),
        }
    }

    /// Finite breakpoints of the map's piece conditions.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            SelfMap::Catalog(CatalogMap {
                rule: CatalogRule::Expr(e),
                ..
            }) => e.breakpoints(),
            SelfMap::Piecewise { expr, .. } => expr.breakpoints(),
            _ => Vec::new(),
        }
    }

    /// `Tx`. Errors name the offending point.
    pub fn apply(&self, space: &MetricSpace, x: &Point) -> Result<Point> {
        space.check_point(x)?;
        let at = |e: FdError| match e {
            FdError::Evaluation(m) => FdError::Evaluation(format!("{m} (map at x = {x})")),
            FdError::Domain(m) => FdError::Domain(format!("{m} (map at x = {x})")),
            other => other,
        };
        match self {
            SelfMap::Catalog(c) => match &c.rule {
                CatalogRule::Identity => Ok(x.clone()),
                CatalogRule::Constant(v) => match x {
                    Point::Index(_) => {
                        let i = *v as usize;
                        if *v < 0.0 || v.fract() != 0.0 {
                            return Err(FdError::domain(format!("constant {v} is not an index")));
                        }
                        let p = Point::Index(i);
                        space.check_point(&p)?;
                        Ok(p)
                    }
                    Point::Coords(c) => Ok(Point::Coords(vec![*v; c.len()])),
                },
                CatalogRule::Expr(e) => eval_scalar(e, x, None).map_err(at),
            },
            SelfMap::Piecewise { expr, x0 } => eval_scalar(expr, x, *x0).map_err(at),
            SelfMap::Table(t) => {
                let i = x.as_index().expect("checked finite point");
                let j = *t
                    .get(i)
                    .ok_or_else(|| FdError::domain(format!("map table has no entry for index {i}")))?;
                let p = Point::Index(j);
                space.check_point(&p).map_err(at)?;
                Ok(p)
            }
        }
    }

    /// Evaluate the map on every point. Used to validate totality at load.
    pub fn images(&self, space: &MetricSpace, samples: &SampleSet) -> Result<Vec<Point>> {
        samples.points().iter().map(|x| self.apply(space, x)).collect()
    }
}

fn eval_scalar(e: &PiecewiseExpression, x: &Point, x0: Option<f64>) -> Result<Point> {
    let v = x
        .as_scalar()
        .ok_or_else(|| FdError::domain(format!("expression maps need 1-D points, got {x}")))?;
    let mut env = Env::new().with(Var::X, v);
    if let Some(c) = x0 {
        env.set(Var::X0, c);
    }
    Ok(Point::scalar(e.eval(&env)?))
}

/// `alpha : X x X -> (0, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaFunction {
    /// Expression in `x` (first argument) and `y`; piece conditions default
    /// to `y`.
    Expr(PiecewiseExpression),
    /// `table[i][j]` on a finite space.
    Table(Vec<Vec<f64>>),
}

impl AlphaFunction {
    pub fn constant(c: f64) -> Self {
        AlphaFunction::Expr(PiecewiseExpression::parse_single(&format!("{c:?}"), Var::Y).expect("number parses"))
    }

    pub fn parse(src: &str) -> Result<Self> {
        Ok(AlphaFunction::Expr(PiecewiseExpression::parse_single(src, Var::Y)?))
    }

    pub fn parse_pieces<S: AsRef<str>>(lines: &[S]) -> Result<Self> {
        Ok(AlphaFunction::Expr(PiecewiseExpression::parse_pieces(lines, Var::Y)?))
    }

    /// `alpha(x, y)`; a value that is not strictly positive is a domain error.
    pub fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        let v = match (self, x, y) {
            (AlphaFunction::Expr(e), _, _) => {
                let (a, b) = match (x.as_scalar(), y.as_scalar()) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(FdError::domain("alpha expressions need 1-D points")),
                };
                e.eval(&Env::new().with(Var::X, a).with(Var::Y, b).with(Var::X0, a))?
            }
            (AlphaFunction::Table(t), Point::Index(i), Point::Index(j)) => *t
                .get(*i)
                .and_then(|r| r.get(*j))
                .ok_or_else(|| FdError::domain(format!("alpha table has no entry ({i}, {j})")))?,
            _ => return Err(FdError::domain("alpha tables need finite-space points")),
        };
        if !(v > 0.0) {
            return Err(FdError::domain(format!("alpha({x}, {y}) = {v} is not positive")));
        }
        Ok(v)
    }
}

/// Estimate of an infimum over displaced points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusEstimate {
    /// Best value found (sampled minimum, refined in 1-D). `+inf` when no
    /// sample is displaced.
    #[serde(serialize_with = "ser_num")]
    pub value: f64,
    /// Conservative radius `value - grid_step * slope_cap`, clamped at 0.
    #[serde(serialize_with = "ser_num")]
    pub lower: f64,
    pub attained: bool,
    pub minimizer: Option<Point>,
}

impl RadiusEstimate {
    pub fn unbounded() -> Self {
        RadiusEstimate {
            value: f64::INFINITY,
            lower: f64::INFINITY,
            attained: false,
            minimizer: None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        self.value.is_infinite()
    }
}

/// `inf { g(x) : g(x) > eps_fix }` over samples, refined in 1-D by
/// golden-section search on the two brackets around the best sample.
fn displacement_infimum<G>(
    space: &MetricSpace,
    samples: &SampleSet,
    mut g: G,
    tol: &Tolerances,
) -> Result<RadiusEstimate>
where
    G: FnMut(&Point) -> Result<f64>,
{
    let values: Vec<f64> = samples.points().iter().map(&mut g).collect::<Result<_>>()?;
    let displaced = |v: f64| v > tol.eps_fix;
    let best = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| displaced(v))
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i);
    let Some(i) = best else {
        return Ok(RadiusEstimate::unbounded());
    };
    let sampled = values[i];
    let mut est = RadiusEstimate {
        value: sampled,
        lower: sampled,
        attained: true,
        minimizer: Some(samples.points()[i].clone()),
    };
    if space.is_one_dimensional() {
        let xs = samples.scalars();
        let xi = xs[i];
        for j in [i.checked_sub(1), (i + 1 < xs.len()).then_some(i + 1)]
            .into_iter()
            .flatten()
        {
            let m = golden_section_min(
                |t| match g(&Point::scalar(t)) {
                    Ok(v) if displaced(v) => v,
                    _ => f64::INFINITY,
                },
                xs[j],
                xi,
                tol.tau_rho,
            );
            if m.value < est.value {
                est.value = m.value;
                est.minimizer = Some(Point::scalar(m.x));
                // Still decreasing towards a fixed neighbour: the infimum is
                // approached at the edge of the displaced set.
                est.attained = !(m.value < sampled && !displaced(values[j]));
            }
        }
    }
    est.lower = (est.value - space.grid_step() * tol.slope_cap).max(0.0);
    Ok(est)
}

/// `rho = inf { d(x, Tx) : Tx != x }`.
pub fn rho(space: &MetricSpace, t: &SelfMap, samples: &SampleSet, tol: &Tolerances) -> Result<RadiusEstimate> {
    displacement_infimum(space, samples, |x| distance(space, x, &t.apply(space, x)?), tol)
}

/// `r = inf { d(Tx, Sx) : Tx != Sx }`.
pub fn r_pair(
    space: &MetricSpace,
    t: &SelfMap,
    s: &SelfMap,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<RadiusEstimate> {
    displacement_infimum(
        space,
        samples,
        |x| distance(space, &t.apply(space, x)?, &s.apply(space, x)?),
        tol,
    )
}

/// `mu = min { rho, r }`, taken separately on values and conservative
/// radii; an unbounded estimate never wins.
pub fn mu(rho_est: &RadiusEstimate, r_est: &RadiusEstimate) -> RadiusEstimate {
    let pick = if rho_est.value <= r_est.value { rho_est } else { r_est };
    RadiusEstimate {
        value: rho_est.value.min(r_est.value),
        lower: rho_est.lower.min(r_est.lower),
        attained: pick.attained,
        minimizer: pick.minimizer.clone(),
    }
}

/// Which term attains the maximum in `m*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxArm {
    Distance,
    SelfDisplacement,
    CenterDisplacement,
    HalfSum,
}

impl MaxArm {
    pub fn name(self) -> &'static str {
        match self {
            MaxArm::Distance => "distance",
            MaxArm::SelfDisplacement => "self_displacement",
            MaxArm::CenterDisplacement => "center_displacement",
            MaxArm::HalfSum => "half_sum",
        }
    }
}

fn max_with_arm(terms: [f64; 4]) -> (f64, MaxArm) {
    let arms = [
        MaxArm::Distance,
        MaxArm::SelfDisplacement,
        MaxArm::CenterDisplacement,
        MaxArm::HalfSum,
    ];
    let mut best = (terms[0], arms[0]);
    for k in 1..4 {
        if terms[k] > best.0 {
            best = (terms[k], arms[k]);
        }
    }
    best
}

/// `m*(x,y) = max{d(x,y), d(x,Tx), d(y,Ty), (d(x,Ty) + d(y,Tx))/2}` and the
/// first term attaining it.
pub fn m_star_arm(space: &MetricSpace, t: &SelfMap, x: &Point, y: &Point) -> Result<(f64, MaxArm)> {
    let (tx, ty) = (t.apply(space, x)?, t.apply(space, y)?);
    let d = |a: &Point, b: &Point| distance(space, a, b);
    Ok(max_with_arm([
        d(x, y)?,
        d(x, &tx)?,
        d(y, &ty)?,
        (d(x, &ty)? + d(y, &tx)?) / 2.0,
    ]))
}

pub fn m_star(space: &MetricSpace, t: &SelfMap, x: &Point, y: &Point) -> Result<f64> {
    Ok(m_star_arm(space, t, x, y)?.0)
}

/// `m*_{S,T}(x,y) = max{d(Tx,Sy), d(Tx,Sx), d(Ty,Sy), (d(Tx,Sy) + d(Ty,Sx))/2}`.
pub fn m_star_pair(space: &MetricSpace, t: &SelfMap, s: &SelfMap, x: &Point, y: &Point) -> Result<f64> {
    let (tx, ty, sx, sy) = (
        t.apply(space, x)?,
        t.apply(space, y)?,
        s.apply(space, x)?,
        s.apply(space, y)?,
    );
    let d = |a: &Point, b: &Point| distance(space, a, b);
    let txsy = d(&tx, &sy)?;
    Ok(max_with_arm([txsy, d(&tx, &sx)?, d(&ty, &sy)?, (txsy + d(&ty, &sx)?) / 2.0]).0)
}

/// `zeta(d(Tx,Ty), d(x,y)) >= 0` for every sampled pair.
pub fn is_z_contraction(
    space: &MetricSpace,
    t: &SelfMap,
    zeta: &SimulationFunctionSpec,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    let pts = samples.points();
    let imgs = t.images(space, samples)?;
    let mut c = CheckOutcome::collector(tol.witness_cap);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            c.premise();
            let v = zeta.evaluate(distance(space, &imgs[i], &imgs[j])?, distance(space, &pts[i], &pts[j])?)?;
            if v < 0.0 {
                c.violation(Witness::pair(&pts[i], &pts[j], v));
            }
        }
    }
    Ok(c.finish())
}

/// Shared loop for the center-based predicates: for every sample with
/// `premise(x, Tx)` the check returns a value that must be `>= 0`.
fn center_check<P, V>(
    space: &MetricSpace,
    t: &SelfMap,
    samples: &SampleSet,
    tol: &Tolerances,
    mut premise: P,
    mut value: V,
) -> Result<CheckOutcome>
where
    P: FnMut(&Point, &Point) -> Result<bool>,
    V: FnMut(&Point, &Point) -> Result<f64>,
{
    let mut c = CheckOutcome::collector(tol.witness_cap);
    for x in samples.points() {
        let tx = t.apply(space, x)?;
        if !premise(x, &tx)? {
            continue;
        }
        c.premise();
        let v = value(x, &tx)?;
        if !(v >= 0.0) {
            c.violation(Witness::at(x, v));
        }
    }
    Ok(c.finish())
}

fn displaced<'a>(space: &'a MetricSpace, tol: &Tolerances) -> impl Fn(&Point, &Point) -> Result<bool> + 'a {
    let eps = tol.eps_fix;
    move |x, tx| Ok(distance(space, x, tx)? > eps)
}

/// `d(Tx,x) > 0 => zeta(d(Tx,x), d(Tx,x0)) >= 0`.
pub fn is_zc_contraction(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    zeta: &SimulationFunctionSpec,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    space.check_point(x0)?;
    center_check(space, t, samples, tol, displaced(space, tol), |x, tx| {
        zeta.evaluate(distance(space, tx, x)?, distance(space, tx, x0)?)
    })
}

/// `Tx != x0 => d(Tx,x) < d(Tx,x0)`. A failure rules out every
/// simulation function. Witness value: `d(Tx,x) - d(Tx,x0)`.
pub fn check_necessary_inequality(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    space.check_point(x0)?;
    let mut c = CheckOutcome::collector(tol.witness_cap);
    for x in samples.points() {
        let tx = t.apply(space, x)?;
        let to_center = distance(space, &tx, x0)?;
        if to_center <= tol.eps_fix {
            continue;
        }
        c.premise();
        let moved = distance(space, &tx, x)?;
        if !(moved < to_center) {
            c.violation(Witness::at(x, moved - to_center));
        }
    }
    Ok(c.finish())
}

/// `alpha(x0,x) >= 1 => alpha(x0,Tx) >= 1`.
pub fn is_alpha_admissible(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    alpha: &AlphaFunction,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    space.check_point(x0)?;
    center_check(
        space,
        t,
        samples,
        tol,
        |x, _| Ok(alpha.eval(x0, x)? >= 1.0),
        |_, tx| Ok(alpha.eval(x0, tx)? - 1.0),
    )
}

/// `d(Tx,x) > 0 => zeta(alpha(x0,Tx) d(x,Tx), d(Tx,x0)) >= 0`.
pub fn is_alpha_zc_contraction(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    alpha: &AlphaFunction,
    zeta: &SimulationFunctionSpec,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    space.check_point(x0)?;
    center_check(space, t, samples, tol, displaced(space, tol), |x, tx| {
        zeta.evaluate(alpha.eval(x0, tx)? * distance(space, x, tx)?, distance(space, tx, x0)?)
    })
}

/// `Tx != x0 => alpha(x0,Tx) d(x,Tx) < d(Tx,x0)`, necessary for the
/// alpha-weighted condition. Witness value: left minus right side.
pub fn check_alpha_necessary_inequality(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    alpha: &AlphaFunction,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    space.check_point(x0)?;
    let mut c = CheckOutcome::collector(tol.witness_cap);
    for x in samples.points() {
        let tx = t.apply(space, x)?;
        let to_center = distance(space, &tx, x0)?;
        if to_center <= tol.eps_fix {
            continue;
        }
        c.premise();
        let lhs = alpha.eval(x0, &tx)? * distance(space, x, &tx)?;
        if !(lhs < to_center) {
            c.violation(Witness::at(x, lhs - to_center));
        }
    }
    Ok(c.finish())
}

/// `d(Tx,x) > 0 => zeta(d(Tx,x), m*(x,x0)) >= 0`.
pub fn is_ciric_zc_contraction(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    zeta: &SimulationFunctionSpec,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    space.check_point(x0)?;
    center_check(space, t, samples, tol, displaced(space, tol), |x, tx| {
        zeta.evaluate(distance(space, tx, x)?, m_star(space, t, x, x0)?)
    })
}

/// Arm of `m*(x, x0)` at a displaced sample whose Ćirić margin is negative
/// or below `near`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmRecord {
    pub point: Point,
    pub arm: MaxArm,
    pub m_star: f64,
    pub zeta: f64,
}

pub fn ciric_arms(
    space: &MetricSpace,
    t: &SelfMap,
    x0: &Point,
    zeta: &SimulationFunctionSpec,
    samples: &SampleSet,
    near: f64,
    tol: &Tolerances,
) -> Result<Vec<ArmRecord>> {
    let mut out = Vec::new();
    for x in samples.points() {
        let tx = t.apply(space, x)?;
        let moved = distance(space, &tx, x)?;
        if moved <= tol.eps_fix {
            continue;
        }
        let (m, arm) = m_star_arm(space, t, x, x0)?;
        let z = zeta.evaluate(moved, m)?;
        if z < near {
            out.push(ArmRecord {
                point: x.clone(),
                arm,
                m_star: m,
                zeta: z,
            });
            if out.len() >= tol.witness_cap {
                break;
            }
        }
    }
    Ok(out)
}

/// `d(Tx,Sx) > 0 => zeta(d(Tx,Sx), m*_{S,T}(x,x0)) >= 0`.
pub fn pair_condition(
    space: &MetricSpace,
    t: &SelfMap,
    s: &SelfMap,
    x0: &Point,
    zeta: &SimulationFunctionSpec,
    samples: &SampleSet,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    space.check_point(x0)?;
    let mut c = CheckOutcome::collector(tol.witness_cap);
    for x in samples.points() {
        let gap = distance(space, &t.apply(space, x)?, &s.apply(space, x)?)?;
        if gap <= tol.eps_fix {
            continue;
        }
        c.premise();
        let v = zeta.evaluate(gap, m_star_pair(space, t, s, x, x0)?)?;
        if !(v >= 0.0) {
            c.violation(Witness::at(x, v));
        }
    }
    Ok(c.finish())
}
