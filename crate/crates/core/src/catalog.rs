//! Built-in maps with default spaces and expected analysis results.

use serde::Serialize;

use crate::contractions::{check_necessary_inequality, rho, CatalogMap, CatalogRule, SelfMap};
use crate::error::{FdError, Result};
use crate::expr::{PiecewiseExpression, Var};
use crate::metric::{Disc, MetricSpace, Point};
use crate::report::Verdict;
use crate::simulation::{SimulationFunctionSpec, ZetaParams};
use crate::theorems::{
    analysis_samples, fixed_set, maximal_fixed_radius, verify_fixed_disc, verify_theorem1, verify_theorem4, Branch,
    Settings,
};

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedOrigin {
    /// Stated alongside the definition of the map.
    Stated,
    /// Worked out by hand or by brute force for this library.
    Computed,
    /// Holds for elementary reasons.
    Elementary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    Rho {
        value: f64,
    },
    RhoUnbounded,
    FixedDisc {
        center: f64,
        radius: f64,
    },
    /// Isolated fixed points, each within `1e-6`.
    FixedPoints {
        points: Vec<f64>,
    },
    /// Fixed-set components, endpoints within `tol`.
    FixedComponents {
        components: Vec<(f64, f64)>,
        tol: f64,
    },
    MaximalRadius {
        center: f64,
        radius: f64,
    },
    Theorem1 {
        x0: f64,
        zeta: String,
        verdict: Verdict,
    },
    NecessaryInequalityFails {
        x0: f64,
    },
    /// `partner` (as T) and this map (as S) share the disc `D(x0, mu)`.
    CommonFixedDisc {
        partner: String,
        x0: f64,
        zeta: String,
        mu: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedResult {
    pub expectation: Expectation,
    pub origin: ExpectedOrigin,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogInfo {
    pub name: &'static str,
    pub description: &'static str,
    /// Parameter names with default values.
    pub params: Vec<(&'static str, f64)>,
    /// Default window `[lo, hi]` and sample count.
    pub domain: (f64, f64, usize),
}

/// An instantiated entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Lookup {
    pub space: MetricSpace,
    pub map: SelfMap,
    pub expected: Vec<ExpectedResult>,
}

const WIDE: (f64, f64, usize) = (-50.0, 50.0, 10001);
const NARROW: (f64, f64, usize) = (-10.0, 10.0, 10001);

fn infos() -> Vec<CatalogInfo> {
    let info = |name, description, params: &[(&'static str, f64)], domain| CatalogInfo {
        name,
        description,
        params: params.to_vec(),
        domain,
    };
    vec![
        info("T1", "x on [-1, 1], 2x elsewhere", &[], WIDE),
        info(
            "T2",
            "x on [x0 - mu, x0 + mu], 2 x0 elsewhere (0 < x0, mu >= 2 x0)",
            &[("x0", 1.0), ("mu", 2.0)],
            WIDE,
        ),
        info("T3", "x on [-3, 3], x + 1 elsewhere", &[], WIDE),
        info("T4", "x on [-3, 3], 3x elsewhere", &[], WIDE),
        info("intro_quadratic", "x^2 - 2", &[], WIDE),
        info("intro_S", "x on [0, 2], x + sqrt(2) elsewhere", &[], WIDE),
        info(
            "ELU",
            "x for x >= 0, alpha (exp(x) - 1) for x < 0 (alpha > 0)",
            &[("alpha", 1.0)],
            NARROW,
        ),
        info(
            "SReLU",
            "t_r + a_r (x - t_r) for x >= t_r, x between, t_l + a_l (x - t_l) for x <= t_l (t_l <= t_r)",
            &[("t_l", -1.0), ("t_r", 1.0), ("a_l", 0.5), ("a_r", 0.5)],
            NARROW,
        ),
        info("identity", "x", &[], WIDE),
        info("constant", "c everywhere", &[("c", 0.0)], WIDE),
    ]
}

/// Every registered entry.
pub fn list() -> Vec<CatalogInfo> {
    infos()
}

fn resolve_params(info: &CatalogInfo, given: &[(String, f64)]) -> Result<Vec<(String, f64)>> {
    for (k, v) in given {
        if !info.params.iter().any(|(n, _)| n == k) {
            return Err(FdError::Schema(format!("`{}` has no parameter `{k}`", info.name)));
        }
        if !v.is_finite() {
            return Err(FdError::Schema(format!("parameter `{k}` must be finite")));
        }
    }
    Ok(info
        .params
        .iter()
        .map(|(n, d)| {
            let v = given.iter().rev().find(|(k, _)| k == n).map_or(*d, |(_, v)| *v);
            (n.to_string(), v)
        })
        .collect())
}

fn expr_rule(lines: &[String]) -> CatalogRule {
    CatalogRule::Expr(PiecewiseExpression::parse_pieces(lines, Var::X).expect("catalog expressions parse"))
}

fn exp(e: Expectation, origin: ExpectedOrigin) -> ExpectedResult {
    ExpectedResult { expectation: e, origin }
}

/// Instantiate `name` with `params` (missing ones take their defaults).
pub fn lookup(name: &str, params: &[(String, f64)]) -> Result<Lookup> {
    use ExpectedOrigin::*;
    let info = infos()
        .into_iter()
        .find(|i| i.name == name)
        .ok_or_else(|| FdError::UnknownCatalog(name.to_string()))?;
    let ps = resolve_params(&info, params)?;
    let get = |k: &str| ps.iter().find(|(n, _)| n == k).map(|(_, v)| *v).expect("resolved");
    let defaults = ps.iter().zip(&info.params).all(|((_, v), (_, d))| v == d);
    let z = |s: &str| s.to_string();

    let (rule, expected) = match name {
        "T1" => (
            expr_rule(&[z("[-1, 1] : x"), z("otherwise : 2*x")]),
            vec![
                exp(Expectation::Rho { value: 1.0 }, Stated),
                exp(
                    Expectation::FixedDisc {
                        center: 0.0,
                        radius: 1.0,
                    },
                    Stated,
                ),
                exp(
                    Expectation::Theorem1 {
                        x0: 0.0,
                        zeta: z("zeta6"),
                        verdict: Verdict::Consistent,
                    },
                    Stated,
                ),
                exp(
                    Expectation::FixedComponents {
                        components: vec![(-1.0, 1.0)],
                        tol: 0.0,
                    },
                    Computed,
                ),
            ],
        ),
        "T2" => {
            let (x0, m) = (get("x0"), get("mu"));
            if !(x0 > 0.0 && m >= 2.0 * x0) {
                return Err(FdError::Schema(format!(
                    "T2 needs 0 < x0 and mu >= 2 x0, got x0={x0}, mu={m}"
                )));
            }
            (
                expr_rule(&[
                    format!("[{:?}, {:?}] : x", x0 - m, x0 + m),
                    format!("otherwise : {:?}", 2.0 * x0),
                ]),
                vec![
                    exp(Expectation::FixedDisc { center: x0, radius: m }, Stated),
                    exp(Expectation::NecessaryInequalityFails { x0 }, Stated),
                    exp(
                        Expectation::Theorem1 {
                            x0,
                            zeta: z("zeta6"),
                            verdict: Verdict::HypothesisFailed,
                        },
                        Computed,
                    ),
                ],
            )
        }
        "T3" => (
            expr_rule(&[z("[-3, 3] : x"), z("otherwise : x + 1")]),
            vec![
                exp(Expectation::Rho { value: 1.0 }, Stated),
                exp(
                    Expectation::Theorem1 {
                        x0: 0.0,
                        zeta: z("zeta7"),
                        verdict: Verdict::Consistent,
                    },
                    Stated,
                ),
                exp(
                    Expectation::Theorem1 {
                        x0: 1.0,
                        zeta: z("zeta7"),
                        verdict: Verdict::Consistent,
                    },
                    Stated,
                ),
                exp(
                    Expectation::FixedDisc {
                        center: 1.0,
                        radius: 1.0,
                    },
                    Stated,
                ),
                exp(
                    Expectation::MaximalRadius {
                        center: 0.0,
                        radius: 3.0,
                    },
                    Computed,
                ),
                exp(
                    Expectation::MaximalRadius {
                        center: 1.0,
                        radius: 2.0,
                    },
                    Computed,
                ),
            ],
        ),
        "T4" => (
            expr_rule(&[z("[-3, 3] : x"), z("otherwise : 3*x")]),
            vec![
                exp(
                    Expectation::CommonFixedDisc {
                        partner: z("T1"),
                        x0: 0.0,
                        zeta: z("zeta6"),
                        mu: 1.0,
                    },
                    Stated,
                ),
                exp(
                    Expectation::FixedComponents {
                        components: vec![(-3.0, 3.0)],
                        tol: 0.0,
                    },
                    Computed,
                ),
            ],
        ),
        "intro_quadratic" => (
            expr_rule(&[z("otherwise : x*x - 2")]),
            vec![exp(
                Expectation::FixedPoints {
                    points: vec![-1.0, 2.0],
                },
                Stated,
            )],
        ),
        "intro_S" => (
            expr_rule(&[z("[0, 2] : x"), z("otherwise : x + sqrt(2)")]),
            vec![
                exp(
                    Expectation::FixedDisc {
                        center: 1.0,
                        radius: 1.0,
                    },
                    Stated,
                ),
                exp(
                    Expectation::FixedComponents {
                        components: vec![(0.0, 2.0)],
                        tol: 0.0,
                    },
                    Computed,
                ),
            ],
        ),
        "ELU" => {
            let a = get("alpha");
            if !(a > 0.0) {
                return Err(FdError::Schema(format!("ELU needs alpha > 0, got {a}")));
            }
            let expected = if defaults {
                // exp(x) - 1 - x ~ x^2/2 is below eps_fix for |x| < ~4.5e-5.
                vec![
                    exp(
                        Expectation::FixedComponents {
                            components: vec![(0.0, 10.0)],
                            tol: 1e-4,
                        },
                        Computed,
                    ),
                    exp(
                        Expectation::MaximalRadius {
                            center: 2.0,
                            radius: 2.0,
                        },
                        Computed,
                    ),
                ]
            } else {
                Vec::new()
            };
            (
                expr_rule(&[z("x >= 0 : x"), format!("otherwise : {a:?}*(exp(x) - 1)")]),
                expected,
            )
        }
        "SReLU" => {
            let (tl, tr, al, ar) = (get("t_l"), get("t_r"), get("a_l"), get("a_r"));
            if tl > tr {
                return Err(FdError::Schema(format!(
                    "SReLU needs t_l <= t_r, got t_l={tl}, t_r={tr}"
                )));
            }
            let expected = if al != 1.0 && ar != 1.0 {
                vec![exp(
                    Expectation::FixedComponents {
                        components: vec![(tl, tr)],
                        tol: 0.0,
                    },
                    Computed,
                )]
            } else {
                Vec::new()
            };
            (
                expr_rule(&[
                    format!("x >= {tr:?} : {tr:?} + {ar:?}*(x - {tr:?})"),
                    format!("{tl:?} < x < {tr:?} : x"),
                    format!("x <= {tl:?} : {tl:?} + {al:?}*(x - {tl:?})"),
                ]),
                expected,
            )
        }
        "identity" => (
            CatalogRule::Identity,
            vec![
                exp(Expectation::RhoUnbounded, Elementary),
                exp(
                    Expectation::Theorem1 {
                        x0: 0.0,
                        zeta: z("zeta6"),
                        verdict: Verdict::Consistent,
                    },
                    Elementary,
                ),
            ],
        ),
        "constant" => {
            let c = get("c");
            (
                CatalogRule::Constant(c),
                vec![exp(Expectation::FixedPoints { points: vec![c] }, Elementary)],
            )
        }
        other => return Err(FdError::UnknownCatalog(other.to_string())),
    };
    let (lo, hi, n) = info.domain;
    Ok(Lookup {
        space: MetricSpace::interval(lo, hi, n)?,
        map: SelfMap::Catalog(CatalogMap {
            name: name.to_string(),
            params: ps,
            rule,
        }),
        expected,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryResult {
    pub name: String,
    pub checks: usize,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionSummary {
    pub entries: Vec<EntryResult>,
    pub mismatches: usize,
}

impl RegressionSummary {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let status = if e.mismatches.is_empty() { "ok" } else { "MISMATCH" };
            out.push_str(&format!("{:<16} {:>2} checks  {status}\n", e.name, e.checks));
            for m in &e.mismatches {
                out.push_str(&format!("    {m}\n"));
            }
        }
        out.push_str(&format!("{} mismatches\n", self.mismatches));
        out
    }
}

fn zeta(name: &str) -> Result<SimulationFunctionSpec> {
    SimulationFunctionSpec::from_registry(name, &ZetaParams::default())
}

fn check_one(entry: &Lookup, e: &Expectation, settings: &Settings) -> Result<Option<String>> {
    let (space, map, tol) = (&entry.space, &entry.map, &settings.tol);
    let base = |discs: &[Disc]| analysis_samples(space, &[map], discs, tol);
    let close = |a: f64, b: f64, eps: f64| (a - b).abs() <= eps;
    Ok(match e {
        Expectation::Rho { value } => {
            let r = rho(space, map, &base(&[])?, tol)?;
            (!close(r.value, *value, 1e-3)).then(|| format!("rho = {}, expected {value}", r.value))
        }
        Expectation::RhoUnbounded => {
            let r = rho(space, map, &base(&[])?, tol)?;
            (!r.is_unbounded()).then(|| format!("rho = {}, expected unbounded", r.value))
        }
        Expectation::FixedDisc { center, radius } => {
            let disc = Disc::new(Point::scalar(*center), *radius)?;
            let o = verify_fixed_disc(space, map, &disc, &base(std::slice::from_ref(&disc))?, tol)?;
            (!o.passed() || o.checked == 0)
                .then(|| format!("D({center}, {radius}) not fixed: {} counterexamples", o.violations))
        }
        Expectation::FixedPoints { points } => {
            let got = fixed_set(space, map, &base(&[])?, tol)?.scalars();
            let ok = got.len() == points.len() && got.iter().zip(points).all(|(a, b)| close(*a, *b, 1e-6));
            (!ok).then(|| format!("fixed points {got:?}, expected {points:?}"))
        }
        Expectation::FixedComponents { components, tol: eps } => {
            let got = fixed_set(space, map, &base(&[])?, tol)?.components;
            let ok = got.len() == components.len()
                && got
                    .iter()
                    .zip(components)
                    .all(|(a, b)| close(a.0, b.0, *eps) && close(a.1, b.1, *eps));
            (!ok).then(|| format!("fixed components {got:?}, expected {components:?}"))
        }
        Expectation::MaximalRadius { center, radius } => {
            let x0 = Point::scalar(*center);
            let m = maximal_fixed_radius(space, map, &x0, &base(&[])?, tol)?;
            (!close(m.radius, *radius, 1e-3))
                .then(|| format!("maximal radius about {center} = {}, expected {radius}", m.radius))
        }
        Expectation::Theorem1 { x0, zeta: z, verdict } => {
            let r = verify_theorem1(space, map, &Point::scalar(*x0), &zeta(z)?, &base(&[])?, settings)?;
            (r.verdict != *verdict).then(|| {
                format!(
                    "theorem 1 at x0={x0} with {z}: {}, expected {}",
                    r.verdict.name(),
                    verdict.name()
                )
            })
        }
        Expectation::NecessaryInequalityFails { x0 } => {
            let o = check_necessary_inequality(space, map, &Point::scalar(*x0), &base(&[])?, tol)?;
            o.passed()
                .then(|| "necessary inequality unexpectedly holds".to_string())
        }
        Expectation::CommonFixedDisc {
            partner,
            x0,
            zeta: z,
            mu,
        } => {
            let t = lookup(partner, &[])?.map;
            let samples = analysis_samples(space, &[&t, map], &[], tol)?;
            let r = verify_theorem4(
                space,
                &t,
                map,
                &Point::scalar(*x0),
                &zeta(z)?,
                &samples,
                Branch::T,
                settings,
            )?;
            let got_mu = r.numbers.mu.as_ref().map_or(f64::NAN, |m| m.value);
            (r.verdict != Verdict::Consistent || !close(got_mu, *mu, 1e-3))
                .then(|| format!("pair with {partner}: {} with mu = {got_mu}", r.verdict.name()))
        }
    })
}

/// Run every expectation of one entry (`Some(name)`) or of all entries,
/// with default parameters and tolerances.
pub fn run_regression(target: Option<&str>) -> Result<RegressionSummary> {
    run_regression_with(target, &Settings::default())
}

pub fn run_regression_with(target: Option<&str>, settings: &Settings) -> Result<RegressionSummary> {
    let names: Vec<&str> = match target {
        None | Some("all") => infos().iter().map(|i| i.name).collect(),
        Some(n) => vec![infos()
            .iter()
            .map(|i| i.name)
            .find(|i| *i == n)
            .ok_or_else(|| FdError::UnknownCatalog(n.to_string()))?],
    };
    let mut entries = Vec::new();
    let mut total = 0;
    for name in names {
        let entry = lookup(name, &[])?;
        let mut mismatches = Vec::new();
        for e in &entry.expected {
            if let Some(m) = check_one(&entry, &e.expectation, settings)? {
                mismatches.push(m);
            }
        }
        total += mismatches.len();
        entries.push(EntryResult {
            name: name.to_string(),
            checks: entry.expected.len(),
            mismatches,
        });
    }
    Ok(RegressionSummary {
        entries,
        mismatches: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Condition, Env};

    fn eval(m: &SelfMap, x: f64) -> f64 {
        let sp = MetricSpace::interval(-100.0, 100.0, 2).unwrap();
        m.apply(&sp, &Point::scalar(x)).unwrap().as_scalar().unwrap()
    }

    #[test]
    fn every_entry_reproduces() {
        let s = run_regression(None).unwrap();
        assert!(s.passed(), "{}", s.render_text());
        assert_eq!(s.entries.len(), list().len());
    }

    #[test]
    fn lookup_shapes() {
        let t1 = lookup("T1", &[]).unwrap();
        assert_eq!(eval(&t1.map, 0.5), 0.5);
        assert_eq!(eval(&t1.map, 3.0), 6.0);
        let elu = lookup("ELU", &[]).unwrap();
        assert!((eval(&elu.map, -1.0) - ((-1f64).exp() - 1.0)).abs() < 1e-15);
        assert!(matches!(elu.space, MetricSpace::Interval(ref iv) if iv.lo == -10.0));
        let t2 = lookup("T2", &[("x0".into(), 1.0), ("mu".into(), 2.0)]).unwrap();
        assert_eq!(eval(&t2.map, 4.0), 2.0);
        assert_eq!(eval(&t2.map, -1.0), -1.0);
    }

    #[test]
    fn schema_violations() {
        assert!(matches!(lookup("T9", &[]), Err(FdError::UnknownCatalog(_))));
        assert!(lookup("T2", &[("mu".into(), 1.0)]).is_err());
        assert!(lookup("T2", &[("x0".into(), -1.0)]).is_err());
        assert!(lookup("ELU", &[("alpha".into(), 0.0)]).is_err());
        assert!(lookup("SReLU", &[("t_l".into(), 2.0)]).is_err());
        assert!(lookup("T1", &[("lambda".into(), 2.0)]).is_err());
    }

    #[test]
    fn every_expectation_has_an_origin() {
        for i in list() {
            let e = lookup(i.name, &[]).unwrap();
            assert!(!e.expected.is_empty(), "{}", i.name);
        }
    }

    /// At each breakpoint every piece whose closed interval touches it gives
    /// the same value, so first-match order cannot matter there.
    fn branches_agree(name: &str) {
        let entry = lookup(name, &[]).unwrap();
        let SelfMap::Catalog(CatalogMap {
            rule: CatalogRule::Expr(e),
            ..
        }) = &entry.map
        else {
            panic!("expression entry")
        };
        for b in e.breakpoints() {
            let env = Env::new().with(Var::X, b);
            let mut values = Vec::new();
            for piece in e.pieces() {
                let touches = match &piece.condition {
                    Condition::Otherwise => true,
                    Condition::In { intervals, .. } => intervals.iter().any(|iv| iv.lo <= b && b <= iv.hi),
                };
                if touches {
                    values.push(piece.body.eval(&env).unwrap());
                }
            }
            assert!(values.len() >= 2, "{name} at {b}");
            assert!(
                values.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-15),
                "{name} at {b}: {values:?}"
            );
        }
    }

    #[test]
    fn activation_branches_agree_at_breakpoints() {
        branches_agree("ELU");
        branches_agree("SReLU");
    }

    #[test]
    fn t2_converse_pair() {
        let s = run_regression(Some("T2")).unwrap();
        assert!(s.passed(), "{}", s.render_text());
        let e = lookup("T2", &[]).unwrap();
        assert!(e
            .expected
            .iter()
            .any(|r| matches!(r.expectation, Expectation::NecessaryInequalityFails { .. })));
        assert!(e
            .expected
            .iter()
            .any(|r| matches!(r.expectation, Expectation::FixedDisc { .. })));
    }
}
