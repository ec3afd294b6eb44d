//! Config-driven runs: build a [`Problem`], verify, write the report and CSVs.

use std::fs;
use std::path::{Path, PathBuf};

use crate::catalog;
use crate::config::{AlphaConfig, MapConfig, ProblemConfig, SpaceConfig, TheoremKind};
use crate::contractions::{AlphaFunction, SelfMap};
use crate::error::{FdError, Result};
use crate::metric::{distance, Disc, MetricSpace, Point, SampleSet};
use crate::report::{
    Conclusion, Diagnostic, Hypothesis, Numbers, SampleMeta, Status, Verdict, VerificationReport, Witness,
};
use crate::simulation::{check_all_axioms, check_side_conditions, SimulationFunctionSpec, ZetaParams};
use crate::theorems::{
    analysis_samples, fixed_set, maximal_fixed_radius, verify_corollary, verify_theorem1, verify_theorem2,
    verify_theorem3, verify_theorem4, Branch, Settings,
};
use crate::tolerance::DEFAULT_SEED;

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub eps_fix: Option<f64>,
    pub report: Option<PathBuf>,
    pub csv_dir: Option<PathBuf>,
}

/// A fully instantiated analysis.
#[derive(Debug, Clone)]
pub struct Problem {
    pub space: MetricSpace,
    pub map: SelfMap,
    pub map2: Option<SelfMap>,
    pub zeta: Option<SimulationFunctionSpec>,
    pub zeta_params: ZetaParams,
    pub alpha: Option<AlphaFunction>,
    pub theorem: TheoremKind,
    pub x0: Point,
    pub branch: Branch,
    pub settings: Settings,
}

fn build_map(m: &MapConfig) -> Result<(SelfMap, Option<MetricSpace>)> {
    Ok(match m {
        MapConfig::Catalog { name, params } => {
            let l = catalog::lookup(name, params)?;
            (l.map, Some(l.space))
        }
        MapConfig::Pieces(e) => (SelfMap::piecewise(e.clone()), None),
        MapConfig::Table(t) => (SelfMap::Table(t.clone()), None),
    })
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| FdError::domain(format!("{}:{}: `{f}` is not a number", path.display(), line + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn build_space(cfg: &SpaceConfig, base: &Path) -> Result<MetricSpace> {
    match cfg {
        SpaceConfig::Interval {
            lo,
            hi,
            samples,
            critical,
        } => MetricSpace::interval_with_critical(*lo, *hi, *samples, critical.clone()),
        SpaceConfig::Box {
            bounds,
            samples,
            metric,
        } => MetricSpace::boxed(bounds.clone(), samples.clone(), *metric),
        SpaceConfig::Finite { csv: Some(p), .. } => {
            let p = resolve(base, p);
            let file = fs::File::open(&p)
                .map_err(|e| FdError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display()))))?;
            MetricSpace::finite_from_csv(file)
        }
        SpaceConfig::Finite { csv: None, rows } => MetricSpace::finite(rows.clone()),
    }
}

fn center_point(space: &MetricSpace, x0: &[f64]) -> Result<Point> {
    let p = match space {
        MetricSpace::FiniteTable(_) => match x0 {
            [i] if *i >= 0.0 && i.fract() == 0.0 => Point::index(*i as usize),
            _ => {
                return Err(FdError::Schema(format!(
                    "x0 must be a single index in a finite space, got {x0:?}"
                )))
            }
        },
        MetricSpace::Interval(_) => match x0 {
            [x] => Point::scalar(*x),
            _ => {
                return Err(FdError::Schema(format!(
                    "x0 must be a single number on an interval, got {x0:?}"
                )))
            }
        },
        MetricSpace::Box(b) => {
            if x0.len() != b.dim() {
                return Err(FdError::Schema(format!(
                    "x0 needs {} coordinates, got {}",
                    b.dim(),
                    x0.len()
                )));
            }
            Point::Coords(x0.to_vec())
        }
    };
    space.check_point(&p)?;
    Ok(p)
}

impl Problem {
    /// Instantiate `cfg`; relative paths resolve against `base_dir`. Every
    /// map is probed on every sample, so evaluation errors surface here.
    pub fn from_config(cfg: &ProblemConfig, base_dir: &Path, ov: &Overrides) -> Result<Problem> {
        let (mut map, default_space) = build_map(&cfg.map)?;
        let map2 = cfg.map2.as_ref().map(build_map).transpose()?.map(|(m, _)| m);
        let mut space = match (&cfg.space, default_space) {
            (Some(s), _) => build_space(s, base_dir)?,
            (None, Some(s)) => s,
            (None, None) => return Err(FdError::Schema("missing section [space]".into())),
        };
        if let Some(n) = ov.samples {
            space = space.with_samples(n)?;
        }
        let x0 = center_point(&space, &cfg.analysis.x0)?;
        if let Some(c) = x0.as_scalar() {
            map = map.with_center(c);
        }
        let map2 = map2.map(|m| match x0.as_scalar() {
            Some(c) => m.with_center(c),
            None => m,
        });
        let (zeta, zeta_params) = match &cfg.simulation {
            Some(sim) => (
                Some(SimulationFunctionSpec::from_registry(&sim.zeta, &sim.params)?),
                sim.params.clone(),
            ),
            None => (None, ZetaParams::default()),
        };
        let alpha = match &cfg.alpha {
            None => None,
            Some(AlphaConfig::Expr(e)) => Some(AlphaFunction::Expr(e.clone())),
            Some(AlphaConfig::Table(p)) => Some(AlphaFunction::Table(read_matrix(&resolve(base_dir, p))?)),
        };
        let mut tol = cfg.analysis.tolerances;
        if let Some(e) = ov.eps_fix {
            tol.eps_fix = e;
        }
        let seed = ov.seed.or(cfg.analysis.seed).unwrap_or(DEFAULT_SEED);
        let problem = Problem {
            space,
            map,
            map2,
            zeta,
            zeta_params,
            alpha,
            theorem: cfg.analysis.theorem,
            x0,
            branch: if cfg.analysis.branch_s { Branch::S } else { Branch::T },
            settings: Settings { tol, seed },
        };
        if problem.theorem != TheoremKind::Axioms {
            let samples = problem.samples()?;
            problem.map.images(&problem.space, &samples)?;
            if let Some(m) = &problem.map2 {
                m.images(&problem.space, &samples)?;
            }
        }
        Ok(problem)
    }

    fn maps(&self) -> Vec<&SelfMap> {
        let mut v = vec![&self.map];
        v.extend(self.map2.as_ref());
        v
    }

    /// Grid samples with breakpoints and the center.
    pub fn samples(&self) -> Result<SampleSet> {
        let disc = Disc::new(self.x0.clone(), 0.0)?;
        analysis_samples(&self.space, &self.maps(), &[disc], &self.settings.tol)
    }

    fn zeta(&self) -> Result<&SimulationFunctionSpec> {
        self.zeta
            .as_ref()
            .ok_or_else(|| FdError::Schema(format!("theorem {} requires section [simulation]", self.theorem.name())))
    }

    /// Run the requested analysis.
    pub fn verify(&self) -> Result<VerificationReport> {
        let (space, t, x0, st) = (&self.space, &self.map, &self.x0, &self.settings);
        if self.theorem == TheoremKind::Axioms {
            return self.axioms_report();
        }
        let samples = self.samples()?;
        match self.theorem {
            TheoremKind::Thm1 => verify_theorem1(space, t, x0, self.zeta()?, &samples, st),
            TheoremKind::Cor(k) => verify_corollary(space, t, x0, k, &self.zeta_params, &samples, st),
            TheoremKind::Thm2 => {
                let alpha = self
                    .alpha
                    .as_ref()
                    .ok_or_else(|| FdError::Schema("theorem thm2 requires section [alpha]".into()))?;
                verify_theorem2(space, t, x0, alpha, self.zeta()?, &samples, st)
            }
            TheoremKind::Thm3 => verify_theorem3(space, t, x0, self.zeta()?, &samples, st),
            TheoremKind::Thm4 => {
                let s = self
                    .map2
                    .as_ref()
                    .ok_or_else(|| FdError::Schema("theorem thm4 requires section [map2]".into()))?;
                verify_theorem4(space, t, s, x0, self.zeta()?, &samples, self.branch, st)
            }
            TheoremKind::FixedSet => self.fixed_set_report(&samples),
            TheoremKind::Axioms => unreachable!(),
        }
    }

    fn axioms_report(&self) -> Result<VerificationReport> {
        let zeta = self.zeta()?;
        let st = &self.settings;
        let mut hypotheses = Vec::new();
        let mut diagnostics = Vec::new();
        let mut probes = 0;
        for ax in check_all_axioms(zeta, st.seed, &st.tol)? {
            probes += ax.probes;
            if !ax.note.is_empty() {
                diagnostics.push(Diagnostic::new(ax.axiom, ax.note.clone()));
            }
            let failed = ax.status == Status::Fail;
            hypotheses.push(Hypothesis {
                name: ax.axiom.to_string(),
                status: ax.status,
                checked: ax.probes,
                violations: usize::from(failed),
                witnesses: ax
                    .witness
                    .map(|w| Witness {
                        points: vec![Point::Coords(vec![w.t, w.s])],
                        value: w.value,
                    })
                    .into_iter()
                    .collect(),
            });
        }
        let side = check_side_conditions(zeta, &st.tol)?;
        if !side.conditions.is_empty() {
            let mut h = Hypothesis::simple("side_conditions", side.status());
            h.checked = side.conditions.len();
            h.violations = side.conditions.iter().filter(|c| c.status == Status::Fail).count();
            hypotheses.push(h);
            for c in &side.conditions {
                diagnostics.push(Diagnostic::new(
                    "side_condition",
                    format!("{}: {} ({})", c.name, c.status.name(), c.detail),
                ));
            }
        }
        diagnostics.push(Diagnostic::new("zeta", zeta.name().to_string()));
        let conclusion = Conclusion {
            status: Status::Vacuous,
            disc: None,
            checked: 0,
            counterexamples: Vec::new(),
        };
        let verdict = Verdict::decide(&hypotheses, conclusion.status);
        Ok(VerificationReport {
            theorem: "axioms".into(),
            hypotheses,
            conclusion,
            numbers: Numbers::default(),
            samples: SampleMeta::new(probes, st.seed, st.tol),
            verdict,
            diagnostics,
        })
    }

    fn fixed_set_report(&self, samples: &SampleSet) -> Result<VerificationReport> {
        let (space, t, tol) = (&self.space, &self.map, &self.settings.tol);
        let fs = fixed_set(space, t, samples, tol)?;
        let maxr = maximal_fixed_radius(space, t, &self.x0, samples, tol)?;
        let mut diagnostics = vec![Diagnostic::new(
            "fixed_set",
            format!(
                "{} of {} samples fixed; components {:?}",
                fs.count,
                samples.len(),
                fs.components
            ),
        )];
        if !fs.refined.is_empty() {
            diagnostics.push(Diagnostic::new("refined_fixed_points", format!("{:?}", fs.refined)));
        }
        let conclusion = Conclusion {
            status: Status::Vacuous,
            disc: None,
            checked: 0,
            counterexamples: Vec::new(),
        };
        Ok(VerificationReport {
            theorem: "fixed_set".into(),
            hypotheses: Vec::new(),
            verdict: Verdict::decide(&[], conclusion.status),
            conclusion,
            numbers: Numbers {
                fixed_set: Some(fs),
                maximal_fixed_radius: Some(maxr),
                ..Numbers::default()
            },
            samples: SampleMeta::new(samples.len(), self.settings.seed, self.settings.tol),
            diagnostics,
        })
    }

    /// `fixed_set.csv`: one row per fixed sample, columns `x, Tx, d(x,Tx)`.
    pub fn write_fixed_set_csv(&self, samples: &SampleSet, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["x", "Tx", "d(x,Tx)"])?;
        for p in samples.points() {
            let tx = self.map.apply(&self.space, p)?;
            let d = distance(&self.space, p, &tx)?;
            if d <= self.settings.tol.eps_fix {
                w.write_record([p.to_string(), tx.to_string(), d.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// `disc.csv`: every sample, whether it lies in the report's disc and
    /// whether it is fixed (by both maps in a pair analysis).
    pub fn write_disc_csv(&self, report: &VerificationReport, samples: &SampleSet, path: &Path) -> Result<()> {
        let tol = &self.settings.tol;
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["x", "in_disc", "fixed"])?;
        for p in samples.points() {
            let in_disc = match &report.conclusion.disc {
                Some(d) => d.contains(&self.space, p, tol)?,
                None => false,
            };
            let mut fixed = true;
            for m in self.maps() {
                fixed &= distance(&self.space, p, &m.apply(&self.space, p)?)? <= tol.eps_fix;
            }
            w.write_record([p.to_string(), in_disc.to_string(), fixed.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Process exit status for a verdict.
pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Consistent | Verdict::HypothesisFailed => 0,
        Verdict::RefutationCandidate => 2,
    }
}

/// Read, parse and run a config file; writes the JSON report and CSVs when
/// paths are configured or overridden.
pub fn run_file(path: &Path, ov: &Overrides) -> Result<VerificationReport> {
    let text = fs::read_to_string(path)
        .map_err(|e| FdError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    let cfg = crate::config::parse_config(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    run(&cfg, base, ov)
}

pub fn run(cfg: &ProblemConfig, base_dir: &Path, ov: &Overrides) -> Result<VerificationReport> {
    let problem = Problem::from_config(cfg, base_dir, ov)?;
    let report = problem.verify()?;
    let report_path = ov
        .report
        .clone()
        .or_else(|| cfg.analysis.report.as_ref().map(|p| resolve(base_dir, p)));
    let csv_dir = ov
        .csv_dir
        .clone()
        .or_else(|| cfg.analysis.csv_dir.as_ref().map(|p| resolve(base_dir, p)));
    if let Some(dir) = csv_dir {
        if problem.theorem != TheoremKind::Axioms {
            fs::create_dir_all(&dir)?;
            let samples = problem.samples()?;
            problem.write_fixed_set_csv(&samples, &dir.join("fixed_set.csv"))?;
            problem.write_disc_csv(&report, &samples, &dir.join("disc.csv"))?;
        }
    }
    if let Some(p) = report_path {
        if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        fs::write(&p, report.to_json() + "\n")?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn run_text(text: &str) -> VerificationReport {
        run(&parse_config(text).unwrap(), Path::new("."), &Overrides::default()).unwrap()
    }

    #[test]
    fn catalog_t1_thm1_consistent() {
        let r = run_text("[map]\ncatalog = T1\n[simulation]\nzeta = zeta6\n[analysis]\ntheorem = thm1\nx0 = 0\n");
        assert_eq!(r.verdict, Verdict::Consistent);
        assert!((r.numbers.rho.as_ref().unwrap().value - 1.0).abs() <= 1e-3);
        assert_eq!(exit_code(r.verdict), 0);
    }

    #[test]
    fn catalog_t2_converse() {
        let r = run_text(
            "[map]\ncatalog = T2\nx0 = 1\nmu = 2\n[simulation]\nzeta = zeta6\n[analysis]\ntheorem = thm1\nx0 = 1\n",
        );
        assert_eq!(r.verdict, Verdict::HypothesisFailed);
        assert_eq!(r.conclusion.status, Status::Pass);
    }

    #[test]
    fn axioms_negative_control() {
        let r = run_text("[simulation]\nzeta = custom\nexpr = s - t\n[analysis]\ntheorem = axioms\n");
        assert_eq!(r.hypothesis("axiom_2").unwrap().status, Status::Fail);
        assert_eq!(r.verdict, Verdict::HypothesisFailed);
        let r = run_text("[simulation]\nzeta = zeta6\n[analysis]\ntheorem = axioms\n");
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn evaluation_error_names_the_point() {
        let cfg = parse_config(
            "[space]\nkind = interval\nbounds = -2, 2\nsamples = 5\n[map]\npiece = [0, 2] : x\n\
             [analysis]\ntheorem = fixed_set\n",
        )
        .unwrap();
        let err = Problem::from_config(&cfg, Path::new("."), &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("x = -2"), "{err}");
    }

    #[test]
    fn fixed_set_analysis_and_csvs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config(
            "[space]\nkind = interval\nbounds = -5, 5\nsamples = 11\n[map]\ncatalog = T3\n\
             [analysis]\ntheorem = fixed_set\nx0 = 0\n",
        )
        .unwrap();
        let ov = Overrides {
            csv_dir: Some(dir.path().to_path_buf()),
            report: Some(dir.path().join("r.json")),
            ..Overrides::default()
        };
        let r = run(&cfg, Path::new("."), &ov).unwrap();
        assert_eq!(r.numbers.fixed_set.as_ref().unwrap().count, 9);
        let fixed = fs::read_to_string(dir.path().join("fixed_set.csv")).unwrap();
        assert_eq!(fixed.lines().next(), Some("x,Tx,\"d(x,Tx)\""));
        assert_eq!(fixed.lines().count(), 10);
        let disc = fs::read_to_string(dir.path().join("disc.csv")).unwrap();
        assert_eq!(disc.lines().next(), Some("x,in_disc,fixed"));
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
        for k in ["theorem", "hypotheses", "conclusion", "numbers", "samples", "verdict"] {
            assert!(json.get(k).is_some(), "{k}");
        }
    }

    #[test]
    fn pieces_match_catalog_t1() {
        let cfg = parse_config(
            "[space]\nkind = interval\nbounds = -50, 50\nsamples = 10001\n\
             [map]\npiece = -1 <= x <= 1 : x\npiece = otherwise : 2*x\n[analysis]\ntheorem = fixed_set\n",
        )
        .unwrap();
        let p = Problem::from_config(&cfg, Path::new("."), &Overrides::default()).unwrap();
        let cat = catalog::lookup("T1", &[]).unwrap();
        let samples = p.samples().unwrap();
        assert_eq!(
            p.map.images(&p.space, &samples).unwrap(),
            cat.map.images(&cat.space, &samples).unwrap()
        );
    }
}
