//! Simulation functions `zeta : [0, inf)^2 -> R` and probe-based checks of
//! their three axioms.
//!
//! The axioms quantify over the positive reals and over all convergent
//! sequences, so every check here is a semi-decision on a finite probe set:
//! a failure is a genuine counterexample, a pass is "probe-verified".

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{FdError, Result};
use crate::expr::{Env, PiecewiseExpression, Var};
use crate::numeric::midpoint_integral;
use crate::report::Status;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    LowerSemicontinuous,
    UpperSemicontinuous,
    None,
}

impl Regularity {
    pub fn name(self) -> &'static str {
        match self {
            Regularity::LowerSemicontinuous => "lower_semicontinuous",
            Regularity::UpperSemicontinuous => "upper_semicontinuous",
            Regularity::None => "none",
        }
    }
}

/// A one-argument auxiliary function (`phi` or `eta`). The argument is bound
/// to each of `t`, `s`, `u` and `x`, so `s/(s+1)` and `t/2` both work.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxFunction {
    expr: PiecewiseExpression,
    regularity: Regularity,
}

impl AuxFunction {
    pub fn new(expr: PiecewiseExpression, regularity: Regularity) -> Self {
        AuxFunction { expr, regularity }
    }

    pub fn parse(src: &str, regularity: Regularity) -> Result<Self> {
        Ok(AuxFunction {
            expr: PiecewiseExpression::parse_single(src, Var::T)?,
            regularity,
        })
    }

    pub fn eval(&self, v: f64) -> Result<f64> {
        let env = Env::new()
            .with(Var::T, v)
            .with(Var::S, v)
            .with(Var::U, v)
            .with(Var::X, v);
        self.expr.eval(&env)
    }

    pub fn expr(&self) -> &PiecewiseExpression {
        &self.expr
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.expr.breakpoints()
    }

    fn constant_value(&self) -> Option<f64> {
        self.expr.constant_value()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `lambda * s - t`, `lambda in [0, 1)`.
    LinearLambda { lambda: f64 },
    /// `s - phi(s) - t`.
    PhiSubtract { phi: AuxFunction },
    /// `s * phi(s) - t`.
    PhiMultiply { phi: AuxFunction },
    /// `eta(s) - t`.
    EtaBound { eta: AuxFunction },
    /// `s - ∫_0^t phi(u) du` by the composite midpoint rule.
    IntegralPhi { phi: AuxFunction, quad_step: Option<f64> },
    /// Any expression in `t` and `s`.
    Custom { expr: PiecewiseExpression },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationFunctionSpec {
    name: String,
    family: Family,
}

/// Optional parameters for [`SimulationFunctionSpec::from_registry`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZetaParams {
    pub lambda: Option<f64>,
    pub phi: Option<String>,
    pub eta: Option<String>,
    pub quad_step: Option<f64>,
    pub expr: Option<String>,
}

/// Names accepted by [`SimulationFunctionSpec::from_registry`].
pub const REGISTRY: [&str; 8] = ["zeta1", "zeta2", "zeta3", "zeta4", "zeta5", "zeta6", "zeta7", "custom"];

impl SimulationFunctionSpec {
    pub fn linear(lambda: f64) -> Result<Self> {
        Self::linear_named(&format!("zeta1(lambda={lambda})"), lambda)
    }

    fn linear_named(name: &str, lambda: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(FdError::domain(format!("lambda must lie in [0, 1), got {lambda}")));
        }
        Ok(SimulationFunctionSpec {
            name: name.to_string(),
            family: Family::LinearLambda { lambda },
        })
    }

    pub fn phi_subtract(phi: AuxFunction) -> Self {
        SimulationFunctionSpec {
            name: format!("zeta2(phi={})", phi.expr),
            family: Family::PhiSubtract { phi },
        }
    }

    pub fn phi_multiply(phi: AuxFunction) -> Self {
        SimulationFunctionSpec {
            name: format!("zeta3(phi={})", phi.expr),
            family: Family::PhiMultiply { phi },
        }
    }

    pub fn eta_bound(eta: AuxFunction) -> Self {
        SimulationFunctionSpec {
            name: format!("zeta4(eta={})", eta.expr),
            family: Family::EtaBound { eta },
        }
    }

    pub fn integral_phi(phi: AuxFunction, quad_step: Option<f64>) -> Result<Self> {
        if let Some(h) = quad_step {
            if !(h.is_finite() && h > 0.0) {
                return Err(FdError::domain(format!("quad_step must be positive, got {h}")));
            }
        }
        Ok(SimulationFunctionSpec {
            name: format!("zeta5(phi={})", phi.expr),
            family: Family::IntegralPhi { phi, quad_step },
        })
    }

    pub fn custom(src: &str) -> Result<Self> {
        let expr = PiecewiseExpression::parse_single(src, Var::T)?;
        Ok(SimulationFunctionSpec {
            name: format!("custom({expr})"),
            family: Family::Custom { expr },
        })
    }

    /// `zeta1`..`zeta7` and `custom`, with the defaults used by the
    /// built-in examples: `zeta1` lambda 3/4, `zeta2` phi(s) = s/(s+1),
    /// `zeta3` phi = 1/2, `zeta4` eta(t) = t/2, `zeta5` phi = 2,
    /// `zeta6` = 3/4 s - t, `zeta7` = 1/2 s - t.
    pub fn from_registry(name: &str, params: &ZetaParams) -> Result<Self> {
        let aux = |given: &Option<String>, default: &str, reg| -> Result<AuxFunction> {
            AuxFunction::parse(given.as_deref().unwrap_or(default), reg)
        };
        match name {
            "zeta1" => Self::linear_named("zeta1", params.lambda.unwrap_or(0.75)),
            "zeta2" => {
                let mut z = Self::phi_subtract(aux(&params.phi, "s/(s+1)", Regularity::LowerSemicontinuous)?);
                z.name = "zeta2".into();
                Ok(z)
            }
            "zeta3" => {
                let mut z = Self::phi_multiply(aux(&params.phi, "1/2", Regularity::None)?);
                z.name = "zeta3".into();
                Ok(z)
            }
            "zeta4" => {
                let mut z = Self::eta_bound(aux(&params.eta, "t/2", Regularity::UpperSemicontinuous)?);
                z.name = "zeta4".into();
                Ok(z)
            }
            "zeta5" => {
                let mut z = Self::integral_phi(aux(&params.phi, "2", Regularity::None)?, params.quad_step)?;
                z.name = "zeta5".into();
                Ok(z)
            }
            "zeta6" => Self::linear_named("zeta6", 0.75),
            "zeta7" => Self::linear_named("zeta7", 0.5),
            "custom" => {
                let src = params
                    .expr
                    .as_deref()
                    .ok_or_else(|| FdError::Schema("custom zeta needs an `expr` in t and s".into()))?;
                let mut z = Self::custom(src)?;
                z.name = "custom".into();
                Ok(z)
            }
            other => Err(FdError::Schema(format!(
                "unknown simulation function `{other}` (expected one of {})",
                REGISTRY.join(", ")
            ))),
        }
    }

    /// The seven registry functions with default parameters.
    pub fn registry_defaults() -> Vec<SimulationFunctionSpec> {
        REGISTRY[..7]
            .iter()
            .map(|n| Self::from_registry(n, &ZetaParams::default()).expect("defaults are valid"))
            .collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn evaluate(&self, t: f64, s: f64) -> Result<f64> {
        evaluate(self, t, s)
    }
}

/// `zeta(t, s)`.
pub fn evaluate(zeta: &SimulationFunctionSpec, t: f64, s: f64) -> Result<f64> {
    if !(t.is_finite() && s.is_finite() && t >= 0.0 && s >= 0.0) {
        return Err(FdError::domain(format!(
            "zeta arguments must be finite and >= 0, got ({t}, {s})"
        )));
    }
    match &zeta.family {
        Family::LinearLambda { lambda } => Ok(lambda * s - t),
        Family::PhiSubtract { phi } => Ok(s - phi.eval(s)? - t),
        Family::PhiMultiply { phi } => Ok(s * phi.eval(s)? - t),
        Family::EtaBound { eta } => Ok(eta.eval(s)? - t),
        Family::IntegralPhi { phi, quad_step } => Ok(s - integrate_aux(phi, t, *quad_step)?),
        Family::Custom { expr } => expr.eval(&Env::new().with(Var::T, t).with(Var::S, s)),
    }
}

/// `∫_0^upper phi` by the composite midpoint rule, default step
/// `1e-4 * max(1, upper)`.
pub fn integrate_aux(phi: &AuxFunction, upper: f64, quad_step: Option<f64>) -> Result<f64> {
    if upper == 0.0 {
        return Ok(0.0);
    }
    if let Some(c) = phi.constant_value() {
        // The midpoint rule is exact for constants.
        return Ok(c * upper);
    }
    let h = quad_step.unwrap_or(1e-4 * upper.max(1.0));
    midpoint_integral(|u| phi.eval(u), 0.0, upper, h)
}

/// Probe points for the second axiom.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeGrid {
    pub pairs: Vec<(f64, f64)>,
}

impl ProbeGrid {
    /// 100 x 100 log-spaced pairs on `[1e-6, 1e3]^2` followed by `10^4`
    /// uniform random pairs from the same box.
    pub fn default_with_seed(seed: u64) -> Self {
        let axis = log_grid(1e-6, 1e3, 100);
        let mut pairs = Vec::with_capacity(20_000);
        for &t in &axis {
            for &s in &axis {
                pairs.push((t, s));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10_000 {
            let t = rng.random_range(1e-6..=1e3);
            let s = rng.random_range(1e-6..=1e3);
            pairs.push((t, s));
        }
        ProbeGrid { pairs }
    }
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeWitness {
    pub t: f64,
    pub s: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomOutcome {
    pub axiom: &'static str,
    pub status: Status,
    pub probes: usize,
    pub witness: Option<ProbeWitness>,
    pub note: String,
}

/// `zeta(0, 0) = 0` within `eps_zero`.
pub fn check_axiom_1(zeta: &SimulationFunctionSpec, tol: &Tolerances) -> Result<AxiomOutcome> {
    let v = evaluate(zeta, 0.0, 0.0)?;
    let ok = v.abs() <= tol.eps_zero;
    Ok(AxiomOutcome {
        axiom: "axiom_1",
        status: if ok { Status::Pass } else { Status::Fail },
        probes: 1,
        witness: (!ok).then_some(ProbeWitness {
            t: 0.0,
            s: 0.0,
            value: v,
        }),
        note: "exact".into(),
    })
}

/// `zeta(t, s) < s - t` on every probe, compared without slack. A probe
/// that satisfies the strict inequality by no more than `eps_strict` is
/// undetermined; the witness is the first failing probe in grid order.
pub fn check_axiom_2(zeta: &SimulationFunctionSpec, grid: &ProbeGrid, tol: &Tolerances) -> Result<AxiomOutcome> {
    let mut first_undetermined = None;
    for &(t, s) in &grid.pairs {
        let z = evaluate(zeta, t, s)?;
        let bound = s - t;
        if !(z < bound) {
            return Ok(AxiomOutcome {
                axiom: "axiom_2",
                status: Status::Fail,
                probes: grid.pairs.len(),
                witness: Some(ProbeWitness { t, s, value: z - bound }),
                note: "probe-verified".into(),
            });
        }
        if bound - z <= tol.eps_strict && first_undetermined.is_none() {
            first_undetermined = Some(ProbeWitness { t, s, value: z - bound });
        }
    }
    Ok(AxiomOutcome {
        axiom: "axiom_2",
        status: if first_undetermined.is_some() {
            Status::Undetermined
        } else {
            Status::Pass
        },
        probes: grid.pairs.len(),
        witness: first_undetermined,
        note: "probe-verified".into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    Constant,
    FromAbove,
    FromBelow,
    Oscillating,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 4] = [
        SequenceKind::Constant,
        SequenceKind::FromAbove,
        SequenceKind::FromBelow,
        SequenceKind::Oscillating,
    ];
}

/// A pair of positive sequences `(t_n, s_n)` with common limit `L > 0`.
/// Perturbations decay like `1/(n+1)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SequenceFamily {
    pub kind: SequenceKind,
    pub limit: f64,
    pub n_max: usize,
}

impl SequenceFamily {
    pub fn new(kind: SequenceKind, limit: f64, n_max: usize) -> Result<Self> {
        if !(limit.is_finite() && limit > 0.0) {
            return Err(FdError::domain(format!("sequence limit must be > 0, got {limit}")));
        }
        if n_max < 2 {
            return Err(FdError::domain("n_max must be at least 2"));
        }
        Ok(SequenceFamily { kind, limit, n_max })
    }

    /// `(t_n, s_n)` for `n >= 1`.
    pub fn term(&self, n: usize) -> (f64, f64) {
        let l = self.limit;
        let e = 1.0 / ((n + 1) as f64).powi(2);
        match self.kind {
            SequenceKind::Constant => (l, l),
            SequenceKind::FromAbove => (l * (1.0 + e), l * (1.0 + 2.0 * e)),
            SequenceKind::FromBelow => (l * (1.0 - e), l * (1.0 - 0.5 * e)),
            SequenceKind::Oscillating => {
                let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                (l * (1.0 + sign * e), l * (1.0 - sign * e))
            }
        }
    }
}

/// Default limits `{1e-3, 1e-1, 1, 10, 1e3}` crossed with all four
/// sequence kinds, `n_max = 200`.
pub fn default_sequence_families() -> Vec<SequenceFamily> {
    let mut out = Vec::new();
    for limit in [1e-3, 1e-1, 1.0, 10.0, 1e3] {
        for kind in SequenceKind::ALL {
            out.push(SequenceFamily {
                kind,
                limit,
                n_max: 200,
            });
        }
    }
    out
}

/// Tail maximum of `zeta(t_n, s_n)` over `n in [n_max/2, n_max]` must be
/// at most `-1e-9 * max(1, L)` for every family; a tail maximum in
/// `(-delta, 0]` is undetermined and a positive one fails.
pub fn check_axiom_3(zeta: &SimulationFunctionSpec, families: &[SequenceFamily]) -> Result<AxiomOutcome> {
    let mut status = Status::Pass;
    let mut witness = None;
    let mut probes = 0;
    for fam in families {
        let delta = 1e-9 * fam.limit.max(1.0);
        let mut tail_max = f64::NEG_INFINITY;
        for n in fam.n_max / 2..=fam.n_max {
            let (t, s) = fam.term(n);
            tail_max = tail_max.max(evaluate(zeta, t, s)?);
            probes += 1;
        }
        let this = if tail_max > 0.0 {
            Status::Fail
        } else if tail_max > -delta {
            Status::Undetermined
        } else {
            Status::Pass
        };
        if this != Status::Pass && (witness.is_none() || (this == Status::Fail && status != Status::Fail)) {
            witness = Some(ProbeWitness {
                t: fam.limit,
                s: fam.limit,
                value: tail_max,
            });
        }
        status = status.and(this);
    }
    Ok(AxiomOutcome {
        axiom: "axiom_3",
        status,
        probes,
        witness,
        note: "probe-verified: tail maximum over finitely many terms".into(),
    })
}

/// All three axioms on the default probes.
pub fn check_all_axioms(zeta: &SimulationFunctionSpec, seed: u64, tol: &Tolerances) -> Result<Vec<AxiomOutcome>> {
    Ok(vec![
        check_axiom_1(zeta, tol)?,
        check_axiom_2(zeta, &ProbeGrid::default_with_seed(seed), tol)?,
        check_axiom_3(zeta, &default_sequence_families())?,
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideCondition {
    pub name: String,
    pub status: Status,
    pub witness: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideConditionReport {
    pub conditions: Vec<SideCondition>,
    /// Declared regularity of the auxiliary function.
    pub regularity: String,
}

impl SideConditionReport {
    pub fn status(&self) -> Status {
        self.conditions.iter().fold(Status::Vacuous, |acc, c| acc.and(c.status))
    }
}

fn probe_condition(name: &str, probes: &[f64], mut check: impl FnMut(f64) -> Result<Status>) -> Result<SideCondition> {
    let mut status = Status::Pass;
    let mut witness = None;
    for &p in probes {
        let s = check(p)?;
        if s != Status::Pass && witness.is_none() {
            witness = Some(p);
        }
        if s == Status::Fail {
            witness = Some(p);
            status = Status::Fail;
            break;
        }
        status = status.and(s);
    }
    Ok(SideCondition {
        name: name.to_string(),
        status,
        witness,
        detail: format!("probed at {} points", probes.len()),
    })
}

fn strictly_less(a: f64, b: f64, eps: f64) -> Status {
    if !(a < b) {
        Status::Fail
    } else if b - a <= eps {
        Status::Undetermined
    } else {
        Status::Pass
    }
}

/// Spot check of declared semicontinuity at the breakpoints of `f`:
/// compares `f(b)` with the one-sided values `f(b ± h)`.
fn semicontinuity_spot_check(f: &AuxFunction, h: f64) -> Result<SideCondition> {
    let name = format!("{} spot check", f.regularity.name());
    let points: Vec<f64> = f.breakpoints().into_iter().filter(|&b| b - h >= 0.0).collect();
    if f.regularity == Regularity::None || points.is_empty() {
        return Ok(SideCondition {
            name,
            status: Status::Vacuous,
            witness: None,
            detail: "no breakpoints to probe".into(),
        });
    }
    let slack = 1e-6;
    let mut out = probe_condition(&name, &points, |b| {
        let (l, m, r) = (f.eval(b - h)?, f.eval(b)?, f.eval(b + h)?);
        let ok = match f.regularity {
            Regularity::LowerSemicontinuous => m <= l.min(r) + slack,
            Regularity::UpperSemicontinuous => m >= l.max(r) - slack,
            Regularity::None => true,
        };
        Ok(if ok { Status::Pass } else { Status::Fail })
    })?;
    out.detail = format!("one-sided probes at {} breakpoint(s)", points.len());
    Ok(out)
}

/// Probe the side conditions attached to the auxiliary function of `zeta`.
/// Semicontinuity is reported as declared; only a breakpoint spot check is
/// run for it.
pub fn check_side_conditions(zeta: &SimulationFunctionSpec, tol: &Tolerances) -> Result<SideConditionReport> {
    let grid = log_grid(1e-6, 1e3, 100);
    let mut conditions = Vec::new();
    let aux = match &zeta.family {
        Family::PhiSubtract { phi } => {
            let at0 = phi.eval(0.0)?;
            conditions.push(SideCondition {
                name: "phi(0) = 0".into(),
                status: if at0.abs() <= tol.eps_zero {
                    Status::Pass
                } else {
                    Status::Fail
                },
                witness: (at0.abs() > tol.eps_zero).then_some(0.0),
                detail: format!("phi(0) = {at0}"),
            });
            conditions.push(probe_condition("phi(t) > 0 for t > 0", &grid, |t| {
                Ok(strictly_less(0.0, phi.eval(t)?, 0.0))
            })?);
            Some(phi)
        }
        Family::PhiMultiply { phi } => {
            let mut with_zero = vec![0.0];
            with_zero.extend(&grid);
            conditions.push(probe_condition("phi maps into [0, 1)", &with_zero, |t| {
                let v = phi.eval(t)?;
                Ok(if v < 0.0 {
                    Status::Fail
                } else {
                    strictly_less(v, 1.0, 0.0)
                })
            })?);
            conditions.push(probe_condition("limsup phi(t) < 1 as t -> r+", &grid, |r| {
                let mut st = Status::Pass;
                for k in 1..=6 {
                    let t = r * (1.0 + 10f64.powi(-k));
                    st = st.and(strictly_less(phi.eval(t)?, 1.0, 1e-9));
                }
                Ok(st)
            })?);
            Some(phi)
        }
        Family::EtaBound { eta } => {
            conditions.push(probe_condition("eta(t) >= 0", &grid, |t| {
                Ok(if eta.eval(t)? >= 0.0 {
                    Status::Pass
                } else {
                    Status::Fail
                })
            })?);
            conditions.push(probe_condition("eta(t) < t for t > 0", &grid, |t| {
                Ok(strictly_less(eta.eval(t)?, t, tol.eps_strict))
            })?);
            Some(eta)
        }
        Family::IntegralPhi { phi, quad_step } => {
            conditions.push(probe_condition("phi(t) >= 0", &grid, |t| {
                Ok(if phi.eval(t)? >= 0.0 {
                    Status::Pass
                } else {
                    Status::Fail
                })
            })?);
            conditions.push(probe_condition("integral of phi over [0, eps] > eps", &grid, |e| {
                Ok(strictly_less(e, integrate_aux(phi, e, *quad_step)?, tol.eps_strict))
            })?);
            Some(phi)
        }
        Family::LinearLambda { .. } | Family::Custom { .. } => None,
    };
    let regularity = match aux {
        Some(f) => {
            conditions.push(semicontinuity_spot_check(f, tol.breakpoint_offset)?);
            format!("{}: declared, not verified", f.regularity.name())
        }
        None => "no auxiliary function".to_string(),
    };
    Ok(SideConditionReport { conditions, regularity })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn zeta(name: &str) -> SimulationFunctionSpec {
        SimulationFunctionSpec::from_registry(name, &ZetaParams::default()).unwrap()
    }

    #[test]
    fn linear_examples() {
        let z6 = zeta("zeta6");
        // t = |x|, s = |2x| at x = 2.
        assert_eq!(z6.evaluate(2.0, 4.0).unwrap(), 1.0);
        assert_eq!(z6.evaluate(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(zeta("zeta7").evaluate(1.0, 4.0).unwrap(), 1.0);
    }

    #[test]
    fn lambda_outside_unit_interval_rejected() {
        assert!(SimulationFunctionSpec::linear(1.0).is_err());
        assert!(SimulationFunctionSpec::linear(-0.1).is_err());
        assert!(SimulationFunctionSpec::linear(0.0).is_ok());
    }

    #[test]
    fn negative_arguments_rejected() {
        assert!(zeta("zeta6").evaluate(-1.0, 0.0).is_err());
    }

    #[test]
    fn family_formulas() {
        assert!((zeta("zeta2").evaluate(1.0, 3.0).unwrap() - (3.0 - 0.75 - 1.0)).abs() < 1e-15);
        assert_eq!(zeta("zeta3").evaluate(1.0, 4.0).unwrap(), 1.0);
        assert_eq!(zeta("zeta4").evaluate(1.0, 4.0).unwrap(), 1.0);
        assert!((zeta("zeta5").evaluate(1.5, 4.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn integral_family_uses_quadrature() {
        let phi = AuxFunction::parse("u", Regularity::None).unwrap();
        let z = SimulationFunctionSpec::integral_phi(phi, Some(0.1)).unwrap();
        // s - t^2/2, midpoint exact for linear integrands.
        assert!((z.evaluate(2.0, 5.0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn axiom_1_cases() {
        assert_eq!(check_axiom_1(&zeta("zeta6"), &tol()).unwrap().status, Status::Pass);
        let bad = SimulationFunctionSpec::custom("s - t + 0.1").unwrap();
        assert_eq!(check_axiom_1(&bad, &tol()).unwrap().status, Status::Fail);
        assert_eq!(check_axiom_1(&zeta("zeta5"), &tol()).unwrap().status, Status::Pass);
    }

    #[test]
    fn axiom_2_strictness() {
        let grid = ProbeGrid::default_with_seed(7);
        assert_eq!(
            check_axiom_2(&zeta("zeta6"), &grid, &tol()).unwrap().status,
            Status::Pass
        );
        let eq = SimulationFunctionSpec::custom("s - t").unwrap();
        let out = check_axiom_2(&eq, &grid, &tol()).unwrap();
        assert_eq!(out.status, Status::Fail);
        let w = out.witness.unwrap();
        assert_eq!((w.t, w.s), grid.pairs[0]);
    }

    #[test]
    fn axiom_3_linear_tail_value() {
        let fams = default_sequence_families();
        let out = check_axiom_3(&zeta("zeta6"), &fams).unwrap();
        assert_eq!(out.status, Status::Pass);
        let z7 = zeta("zeta7");
        let fam = SequenceFamily::new(SequenceKind::Constant, 1.0, 200).unwrap();
        let (t, s) = fam.term(150);
        assert_eq!(z7.evaluate(t, s).unwrap(), -0.5);
    }

    #[test]
    fn axiom_3_flags_non_simulation() {
        let eq = SimulationFunctionSpec::custom("s - t").unwrap();
        let out = check_axiom_3(&eq, &default_sequence_families()).unwrap();
        assert!(matches!(out.status, Status::Fail | Status::Undetermined));
    }

    #[test]
    fn sequences_converge_and_stay_positive() {
        for fam in default_sequence_families() {
            for n in 1..=fam.n_max {
                let (t, s) = fam.term(n);
                assert!(t > 0.0 && s > 0.0);
            }
            let (t, s) = fam.term(fam.n_max);
            assert!((t / fam.limit - 1.0).abs() < 1e-4 && (s / fam.limit - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn side_conditions_of_registry_defaults() {
        for name in ["zeta2", "zeta3", "zeta4", "zeta5"] {
            let r = check_side_conditions(&zeta(name), &tol()).unwrap();
            assert!(r.status().holds(), "{name}: {r:?}");
            assert!(r.regularity.contains("declared") || r.regularity.contains("none"));
        }
    }

    #[test]
    fn side_condition_failures() {
        let eta = AuxFunction::parse("t", Regularity::UpperSemicontinuous).unwrap();
        let r = check_side_conditions(&SimulationFunctionSpec::eta_bound(eta), &tol()).unwrap();
        assert_eq!(r.status(), Status::Fail);

        let phi = AuxFunction::parse("1", Regularity::None).unwrap();
        let r = check_side_conditions(&SimulationFunctionSpec::integral_phi(phi, None).unwrap(), &tol()).unwrap();
        assert_eq!(r.status(), Status::Fail);

        let phi = AuxFunction::parse("s + 1", Regularity::LowerSemicontinuous).unwrap();
        let r = check_side_conditions(&SimulationFunctionSpec::phi_subtract(phi), &tol()).unwrap();
        assert_eq!(r.conditions[0].status, Status::Fail);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-6, 1e3, 100);
        assert_eq!(g.len(), 100);
        assert_eq!(g[0], 1e-6);
        assert_eq!(g[99], 1e3);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn probe_grid_is_seeded() {
        let a = ProbeGrid::default_with_seed(1);
        let b = ProbeGrid::default_with_seed(1);
        let c = ProbeGrid::default_with_seed(2);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.pairs.len(), 20_000);
    }

    #[test]
    fn linear_lambda_is_nondecreasing_in_s() {
        let z = zeta("zeta1");
        let axis = log_grid(1e-6, 1e3, 60);
        for &t in &axis {
            let vals: Vec<f64> = axis.iter().map(|&s| z.evaluate(t, s).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn midpoint_quadrature_converges_at_least_first_order() {
        // sqrt has an unbounded derivative at 0, so the midpoint error decays
        // like h^1.5 rather than h^2.
        let phi = AuxFunction::parse("sqrt(u)", Regularity::None).unwrap();
        let exact = |t: f64| 2.0 / 3.0 * t.powf(1.5);
        let t = 1.7;
        let mut errs = Vec::new();
        for k in 0..5 {
            let h = 0.05 / 2f64.powi(k);
            let z = SimulationFunctionSpec::integral_phi(phi.clone(), Some(h)).unwrap();
            errs.push(((3.0 - z.evaluate(t, 3.0).unwrap()) - exact(t)).abs());
        }
        for w in errs.windows(2) {
            let ratio = w[1] / w[0];
            assert!((0.25..=1.0).contains(&ratio), "ratio {ratio} errors {errs:?}");
        }
    }
}
