//! Problem descriptions: line-oriented `key = value` pairs under `[section]`
//! headers, `#` comments.
//!
//! ```text
//! [space]
//! kind = interval
//! bounds = -50, 50
//! samples = 10001
//!
//! [map]
//! piece = [-1, 1] : x
//! piece = otherwise : 2*x
//!
//! [simulation]
//! zeta = zeta6
//!
//! [analysis]
//! theorem = thm1
//! x0 = 0
//! ```

use std::fmt;
use std::path::PathBuf;

use crate::error::{FdError, Result};
use crate::expr::{PiecewiseExpression, Var};
use crate::metric::Metric;
use crate::simulation::{ZetaParams, REGISTRY};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceConfig {
    Interval {
        lo: f64,
        hi: f64,
        samples: usize,
        critical: Vec<f64>,
    },
    Box {
        bounds: Vec<(f64, f64)>,
        samples: Vec<usize>,
        metric: Metric,
    },
    /// Distance table from a CSV file or inline `row` lines.
    Finite { csv: Option<PathBuf>, rows: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapConfig {
    Catalog { name: String, params: Vec<(String, f64)> },
    Pieces(PiecewiseExpression),
    Table(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub zeta: String,
    pub params: ZetaParams,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlphaConfig {
    Expr(PiecewiseExpression),
    Table(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremKind {
    Thm1,
    /// Corollary 1..=5.
    Cor(u8),
    Thm2,
    Thm3,
    Thm4,
    Axioms,
    FixedSet,
}

impl TheoremKind {
    pub fn parse(s: &str) -> Option<TheoremKind> {
        Some(match s {
            "thm1" => TheoremKind::Thm1,
            "thm2" => TheoremKind::Thm2,
            "thm3" => TheoremKind::Thm3,
            "thm4" => TheoremKind::Thm4,
            "axioms" => TheoremKind::Axioms,
            "fixed_set" => TheoremKind::FixedSet,
            _ => {
                let k: u8 = s.strip_prefix("cor")?.parse().ok()?;
                if !(1..=5).contains(&k) {
                    return None;
                }
                TheoremKind::Cor(k)
            }
        })
    }

    pub fn name(self) -> String {
        match self {
            TheoremKind::Thm1 => "thm1".into(),
            TheoremKind::Cor(k) => format!("cor{k}"),
            TheoremKind::Thm2 => "thm2".into(),
            TheoremKind::Thm3 => "thm3".into(),
            TheoremKind::Thm4 => "thm4".into(),
            TheoremKind::Axioms => "axioms".into(),
            TheoremKind::FixedSet => "fixed_set".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub theorem: TheoremKind,
    /// Coordinates of the center (an index for finite spaces).
    pub x0: Vec<f64>,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    /// Use S rather than T as the Z_c map of a pair analysis.
    pub branch_s: bool,
    pub report: Option<PathBuf>,
    pub csv_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    /// `None` takes the catalog map's default space.
    pub space: Option<SpaceConfig>,
    pub map: MapConfig,
    pub map2: Option<MapConfig>,
    pub simulation: Option<SimulationConfig>,
    pub alpha: Option<AlphaConfig>,
    pub analysis: AnalysisConfig,
}

struct Entry {
    key: String,
    value: String,
    line: usize,
}

struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn take(&self, key: &str) -> Result<Option<&Entry>> {
        let mut found = self.entries.iter().filter(|e| e.key == key);
        let first = found.next();
        if let Some(dup) = found.next() {
            return Err(FdError::config(
                dup.line,
                format!("duplicate key `{key}` in [{}]", self.name),
            ));
        }
        Ok(first)
    }

    fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.entries.iter().filter(move |e| e.key == key)
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
            Some(e) => Err(FdError::config(
                e.line,
                format!("unknown key `{}` in [{}]", e.key, self.name),
            )),
            None => Ok(()),
        }
    }
}

fn num(e: &Entry) -> Result<f64> {
    let v: f64 = e
        .value
        .parse()
        .map_err(|_| FdError::config(e.line, format!("`{}` expects a number, got `{}`", e.key, e.value)))?;
    if !v.is_finite() {
        return Err(FdError::config(e.line, format!("`{}` must be finite", e.key)));
    }
    Ok(v)
}

fn count(e: &Entry) -> Result<usize> {
    e.value.parse().map_err(|_| {
        FdError::config(
            e.line,
            format!("`{}` expects a non-negative integer, got `{}`", e.key, e.value),
        )
    })
}

fn list(e: &Entry) -> Result<Vec<f64>> {
    if e.value.trim().is_empty() {
        return Ok(Vec::new());
    }
    e.value
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| FdError::config(e.line, format!("`{}`: `{s}` is not a finite number", e.key)))
        })
        .collect()
}

fn expr_err(line: usize, err: FdError) -> FdError {
    match err {
        FdError::Config { .. } => err,
        other => FdError::config(line, other.to_string()),
    }
}

fn sections(text: &str) -> Result<Vec<Section>> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| FdError::config(line, "section header must end with `]`"))?
                .trim();
            const KNOWN: [&str; 6] = ["space", "map", "map2", "simulation", "alpha", "analysis"];
            if !KNOWN.contains(&name) {
                return Err(FdError::config(line, format!("unknown section [{name}]")));
            }
            if out.iter().any(|s| s.name == name) {
                return Err(FdError::config(line, format!("section [{name}] appears twice")));
            }
            out.push(Section {
                name: name.to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| FdError::config(line, format!("expected `key = value`, got `{content}`")))?;
        let key = key.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(FdError::config(line, format!("invalid key `{key}`")));
        }
        let section = out
            .last_mut()
            .ok_or_else(|| FdError::config(line, "key outside of any section"))?;
        section.entries.push(Entry {
            key: key.to_string(),
            value: value.trim().to_string(),
            line,
        });
    }
    Ok(out)
}

fn parse_space(s: &Section) -> Result<SpaceConfig> {
    let kind = s
        .take("kind")?
        .ok_or_else(|| FdError::config(s.line, "[space] needs `kind`"))?;
    match kind.value.as_str() {
        "interval" => {
            s.check_keys(&["kind", "bounds", "samples", "critical"])?;
            let b = s
                .take("bounds")?
                .ok_or_else(|| FdError::config(s.line, "[space] needs `bounds`"))?;
            let bounds = list(b)?;
            if bounds.len() != 2 || bounds[0] >= bounds[1] {
                return Err(FdError::config(b.line, "interval `bounds` must be `a, b` with a < b"));
            }
            let samples = match s.take("samples")? {
                Some(e) => count(e)?,
                None => 10001,
            };
            if samples < 2 {
                return Err(FdError::config(s.line, "`samples` must be at least 2"));
            }
            let critical = match s.take("critical")? {
                Some(e) => list(e)?,
                None => Vec::new(),
            };
            Ok(SpaceConfig::Interval {
                lo: bounds[0],
                hi: bounds[1],
                samples,
                critical,
            })
        }
        "box" => {
            s.check_keys(&["kind", "bounds", "samples", "metric"])?;
            let b = s
                .take("bounds")?
                .ok_or_else(|| FdError::config(s.line, "[space] needs `bounds`"))?;
            let flat = list(b)?;
            if flat.is_empty() || flat.len() % 2 != 0 {
                return Err(FdError::config(b.line, "box `bounds` must list lo, hi per axis"));
            }
            let bounds: Vec<(f64, f64)> = flat.chunks(2).map(|c| (c[0], c[1])).collect();
            if bounds.iter().any(|(lo, hi)| lo >= hi) {
                return Err(FdError::config(b.line, "every axis needs lo < hi"));
            }
            let samples = match s.take("samples")? {
                Some(e) => {
                    let v = list(e)?;
                    let v: Vec<usize> = v.iter().map(|&x| x as usize).collect();
                    match v.len() {
                        1 => vec![v[0]; bounds.len()],
                        n if n == bounds.len() => v,
                        _ => return Err(FdError::config(e.line, "`samples` needs one count or one per axis")),
                    }
                }
                None => vec![51; bounds.len()],
            };
            let metric = match s.take("metric")? {
                Some(e) => Metric::from_name(&e.value)
                    .ok_or_else(|| FdError::config(e.line, format!("unknown metric `{}`", e.value)))?,
                None => Metric::Euclidean,
            };
            Ok(SpaceConfig::Box {
                bounds,
                samples,
                metric,
            })
        }
        "finite" => {
            s.check_keys(&["kind", "csv", "row"])?;
            let csv = s.take("csv")?.map(|e| PathBuf::from(&e.value));
            let rows = s.all("row").map(list).collect::<Result<Vec<_>>>()?;
            if csv.is_some() == !rows.is_empty() {
                return Err(FdError::config(
                    s.line,
                    "finite space needs exactly one of `csv` or `row` lines",
                ));
            }
            Ok(SpaceConfig::Finite { csv, rows })
        }
        other => Err(FdError::config(kind.line, format!("unknown space kind `{other}`"))),
    }
}

fn parse_map(s: &Section) -> Result<MapConfig> {
    let pieces: Vec<&Entry> = s.all("piece").collect();
    let catalog = s.take("catalog")?;
    let table = s.take("table")?;
    let given = [catalog.is_some(), !pieces.is_empty(), table.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(FdError::config(
            s.line,
            format!("[{}] needs exactly one of `catalog`, `piece` lines or `table`", s.name),
        ));
    }
    if let Some(c) = catalog {
        let params = s
            .entries
            .iter()
            .filter(|e| e.key != "catalog")
            .map(|e| Ok((e.key.clone(), num(e)?)))
            .collect::<Result<Vec<_>>>()?;
        return Ok(MapConfig::Catalog {
            name: c.value.clone(),
            params,
        });
    }
    if let Some(t) = table {
        s.check_keys(&["table"])?;
        let idx = list(t)?
            .into_iter()
            .map(|v| {
                if v < 0.0 || v.fract() != 0.0 {
                    Err(FdError::config(t.line, format!("`table` entry {v} is not an index")))
                } else {
                    Ok(v as usize)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(MapConfig::Table(idx));
    }
    s.check_keys(&["piece"])?;
    let mut parsed = Vec::new();
    for p in &pieces {
        let single = PiecewiseExpression::parse_pieces(&[p.value.as_str()], Var::X).map_err(|e| expr_err(p.line, e))?;
        parsed.push(single.pieces()[0].clone());
    }
    let expr = PiecewiseExpression::new(parsed, Var::X).map_err(|e| expr_err(pieces[0].line, e))?;
    Ok(MapConfig::Pieces(expr))
}

fn parse_simulation(s: &Section) -> Result<SimulationConfig> {
    s.check_keys(&["zeta", "lambda", "phi", "eta", "quad_step", "expr"])?;
    let zeta = s
        .take("zeta")?
        .ok_or_else(|| FdError::config(s.line, "[simulation] needs `zeta`"))?;
    if !REGISTRY.contains(&zeta.value.as_str()) {
        return Err(FdError::config(
            zeta.line,
            format!(
                "unknown zeta `{}` (expected one of {})",
                zeta.value,
                REGISTRY.join(", ")
            ),
        ));
    }
    let text = |k: &str| -> Result<Option<String>> { Ok(s.take(k)?.map(|e| e.value.clone())) };
    let params = ZetaParams {
        lambda: s.take("lambda")?.map(num).transpose()?,
        phi: text("phi")?,
        eta: text("eta")?,
        quad_step: s.take("quad_step")?.map(num).transpose()?,
        expr: text("expr")?,
    };
    Ok(SimulationConfig {
        zeta: zeta.value.clone(),
        params,
    })
}

fn parse_alpha(s: &Section) -> Result<AlphaConfig> {
    s.check_keys(&["expr", "piece", "table"])?;
    let pieces: Vec<&Entry> = s.all("piece").collect();
    let expr = s.take("expr")?;
    let table = s.take("table")?;
    let given = [expr.is_some(), !pieces.is_empty(), table.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(FdError::config(
            s.line,
            "[alpha] needs exactly one of `expr`, `piece` lines or `table`",
        ));
    }
    if let Some(t) = table {
        return Ok(AlphaConfig::Table(PathBuf::from(&t.value)));
    }
    if let Some(e) = expr {
        return Ok(AlphaConfig::Expr(
            PiecewiseExpression::parse_single(&e.value, Var::Y).map_err(|err| expr_err(e.line, err))?,
        ));
    }
    let lines: Vec<&str> = pieces.iter().map(|p| p.value.as_str()).collect();
    Ok(AlphaConfig::Expr(
        PiecewiseExpression::parse_pieces(&lines, Var::Y).map_err(|err| expr_err(pieces[0].line, err))?,
    ))
}

const TOLERANCE_KEYS: [&str; 10] = [
    "eps_mem",
    "eps_tri",
    "eps_fix",
    "eps_zero",
    "eps_strict",
    "tau_rho",
    "slope_cap",
    "breakpoint_offset",
    "root_tol",
    "witness_cap",
];

fn parse_analysis(s: &Section) -> Result<AnalysisConfig> {
    let mut allowed = vec!["theorem", "x0", "seed", "branch", "report", "csv_dir"];
    allowed.extend(TOLERANCE_KEYS);
    s.check_keys(&allowed)?;
    let th = s
        .take("theorem")?
        .ok_or_else(|| FdError::config(s.line, "[analysis] needs `theorem`"))?;
    let theorem = TheoremKind::parse(&th.value).ok_or_else(|| {
        FdError::config(
            th.line,
            format!(
                "unknown theorem `{}` (thm1, cor1..cor5, thm2, thm3, thm4, axioms, fixed_set)",
                th.value
            ),
        )
    })?;
    let x0 = match s.take("x0")? {
        Some(e) => list(e)?,
        None => vec![0.0],
    };
    let mut tol = Tolerances::default();
    for key in TOLERANCE_KEYS {
        let Some(e) = s.take(key)? else { continue };
        if key == "witness_cap" {
            tol.witness_cap = count(e)?;
            continue;
        }
        let v = num(e)?;
        if v < 0.0 {
            return Err(FdError::config(e.line, format!("`{key}` must be non-negative")));
        }
        let slot = match key {
            "eps_mem" => &mut tol.eps_mem,
            "eps_tri" => &mut tol.eps_tri,
            "eps_fix" => &mut tol.eps_fix,
            "eps_zero" => &mut tol.eps_zero,
            "eps_strict" => &mut tol.eps_strict,
            "tau_rho" => &mut tol.tau_rho,
            "slope_cap" => &mut tol.slope_cap,
            "breakpoint_offset" => &mut tol.breakpoint_offset,
            _ => &mut tol.root_tol,
        };
        *slot = v;
    }
    let seed = s
        .take("seed")?
        .map(|e| parse_seed(&e.value).ok_or_else(|| FdError::config(e.line, format!("invalid seed `{}`", e.value))))
        .transpose()?;
    let branch_s = match s.take("branch")? {
        None => false,
        Some(e) => match e.value.as_str() {
            "T" | "t" => false,
            "S" | "s" => true,
            other => {
                return Err(FdError::config(
                    e.line,
                    format!("`branch` must be T or S, got `{other}`"),
                ))
            }
        },
    };
    Ok(AnalysisConfig {
        theorem,
        x0,
        tolerances: tol,
        seed,
        branch_s,
        report: s.take("report")?.map(|e| PathBuf::from(&e.value)),
        csv_dir: s.take("csv_dir")?.map(|e| PathBuf::from(&e.value)),
    })
}

/// Decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Option<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => s.parse().ok(),
    }
}

/// Parse and validate a problem description.
pub fn parse_config(text: &str) -> Result<ProblemConfig> {
    let secs = sections(text)?;
    let find = |n: &str| secs.iter().find(|s| s.name == n);
    let analysis_sec = find("analysis").ok_or_else(|| FdError::Schema("missing section [analysis]".into()))?;
    let analysis = parse_analysis(analysis_sec)?;
    let map = match find("map") {
        Some(s) => parse_map(s)?,
        None if analysis.theorem == TheoremKind::Axioms => MapConfig::Catalog {
            name: "identity".into(),
            params: Vec::new(),
        },
        None => return Err(FdError::Schema("missing section [map]".into())),
    };
    let map2 = find("map2").map(parse_map).transpose()?;
    let simulation = find("simulation").map(parse_simulation).transpose()?;
    let alpha = find("alpha").map(parse_alpha).transpose()?;
    let space = find("space").map(parse_space).transpose()?;

    let t = analysis.theorem;
    if t == TheoremKind::Thm4 && map2.is_none() {
        return Err(FdError::Schema("theorem thm4 requires section [map2]".into()));
    }
    if t == TheoremKind::Thm2 && alpha.is_none() {
        return Err(FdError::Schema("theorem thm2 requires section [alpha]".into()));
    }
    let needs_zeta = matches!(
        t,
        TheoremKind::Thm1 | TheoremKind::Thm2 | TheoremKind::Thm3 | TheoremKind::Thm4 | TheoremKind::Axioms
    );
    if needs_zeta && simulation.is_none() {
        return Err(FdError::Schema(format!(
            "theorem {} requires section [simulation]",
            t.name()
        )));
    }
    if space.is_none() && !matches!(map, MapConfig::Catalog { .. }) {
        return Err(FdError::Schema(
            "missing section [space] (only catalog maps have a default space)".into(),
        ));
    }
    Ok(ProblemConfig {
        space,
        map,
        map2,
        simulation,
        alpha,
        analysis,
    })
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

fn write_map(f: &mut fmt::Formatter<'_>, header: &str, m: &MapConfig) -> fmt::Result {
    writeln!(f, "[{header}]")?;
    match m {
        MapConfig::Catalog { name, params } => {
            writeln!(f, "catalog = {name}")?;
            for (k, v) in params {
                writeln!(f, "{k} = {v:?}")?;
            }
        }
        MapConfig::Pieces(e) => {
            for line in e.piece_lines() {
                writeln!(f, "piece = {line}")?;
            }
        }
        MapConfig::Table(t) => {
            let v: Vec<String> = t.iter().map(usize::to_string).collect();
            writeln!(f, "table = {}", v.join(", "))?;
        }
    }
    writeln!(f)
}

/// Serializes to the text format accepted by [`parse_config`].
impl fmt::Display for ProblemConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(space) = &self.space {
            writeln!(f, "[space]")?;
            match space {
                SpaceConfig::Interval {
                    lo,
                    hi,
                    samples,
                    critical,
                } => {
                    writeln!(f, "kind = interval\nbounds = {lo:?}, {hi:?}\nsamples = {samples}")?;
                    if !critical.is_empty() {
                        writeln!(f, "critical = {}", join(critical))?;
                    }
                }
                SpaceConfig::Box {
                    bounds,
                    samples,
                    metric,
                } => {
                    let flat: Vec<f64> = bounds.iter().flat_map(|&(a, b)| [a, b]).collect();
                    let ns: Vec<String> = samples.iter().map(usize::to_string).collect();
                    writeln!(
                        f,
                        "kind = box\nbounds = {}\nsamples = {}\nmetric = {}",
                        join(&flat),
                        ns.join(", "),
                        metric.name()
                    )?;
                }
                SpaceConfig::Finite { csv, rows } => {
                    writeln!(f, "kind = finite")?;
                    if let Some(p) = csv {
                        writeln!(f, "csv = {}", p.display())?;
                    }
                    for r in rows {
                        writeln!(f, "row = {}", join(r))?;
                    }
                }
            }
            writeln!(f)?;
        }
        write_map(f, "map", &self.map)?;
        if let Some(m) = &self.map2 {
            write_map(f, "map2", m)?;
        }
        if let Some(sim) = &self.simulation {
            writeln!(f, "[simulation]\nzeta = {}", sim.zeta)?;
            let p = &sim.params;
            if let Some(v) = p.lambda {
                writeln!(f, "lambda = {v:?}")?;
            }
            for (k, v) in [("phi", &p.phi), ("eta", &p.eta), ("expr", &p.expr)] {
                if let Some(v) = v {
                    writeln!(f, "{k} = {v}")?;
                }
            }
            if let Some(v) = p.quad_step {
                writeln!(f, "quad_step = {v:?}")?;
            }
            writeln!(f)?;
        }
        if let Some(a) = &self.alpha {
            writeln!(f, "[alpha]")?;
            match a {
                AlphaConfig::Table(p) => writeln!(f, "table = {}", p.display())?,
                AlphaConfig::Expr(e) => {
                    for line in e.piece_lines() {
                        writeln!(f, "piece = {line}")?;
                    }
                }
            }
            writeln!(f)?;
        }
        let a = &self.analysis;
        writeln!(f, "[analysis]\ntheorem = {}\nx0 = {}", a.theorem.name(), join(&a.x0))?;
        if let Some(s) = a.seed {
            writeln!(f, "seed = {s}")?;
        }
        if a.branch_s {
            writeln!(f, "branch = S")?;
        }
        let t = &a.tolerances;
        let d = Tolerances::default();
        for (k, v, dv) in [
            ("eps_mem", t.eps_mem, d.eps_mem),
            ("eps_tri", t.eps_tri, d.eps_tri),
            ("eps_fix", t.eps_fix, d.eps_fix),
            ("eps_zero", t.eps_zero, d.eps_zero),
            ("eps_strict", t.eps_strict, d.eps_strict),
            ("tau_rho", t.tau_rho, d.tau_rho),
            ("slope_cap", t.slope_cap, d.slope_cap),
            ("breakpoint_offset", t.breakpoint_offset, d.breakpoint_offset),
            ("root_tol", t.root_tol, d.root_tol),
        ] {
            if v != dv {
                writeln!(f, "{k} = {v:?}")?;
            }
        }
        if t.witness_cap != d.witness_cap {
            writeln!(f, "witness_cap = {}", t.witness_cap)?;
        }
        if let Some(p) = &a.report {
            writeln!(f, "report = {}", p.display())?;
        }
        if let Some(p) = &a.csv_dir {
            writeln!(f, "csv_dir = {}", p.display())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T1: &str = "
# Example map
[space]
kind = interval
bounds = -50, 50
samples = 10001

[map]
piece = -1 <= x <= 1 : x
piece = otherwise : 2*x

[simulation]
zeta = zeta6

[analysis]
theorem = thm1
x0 = 0
";

    #[test]
    fn parses_pieces_config() {
        let c = parse_config(T1).unwrap();
        assert_eq!(c.analysis.theorem, TheoremKind::Thm1);
        assert!(matches!(c.map, MapConfig::Pieces(ref e) if e.pieces().len() == 2));
        assert_eq!(
            c.space,
            Some(SpaceConfig::Interval {
                lo: -50.0,
                hi: 50.0,
                samples: 10001,
                critical: vec![]
            })
        );
    }

    #[test]
    fn thm4_without_map2_is_schema_error() {
        let text = T1.replace("thm1", "thm4");
        let err = parse_config(&text).unwrap_err();
        assert!(matches!(err, FdError::Schema(ref m) if m.contains("[map2]")), "{err}");
        let text = T1.replace("thm1", "thm2");
        assert!(parse_config(&text).unwrap_err().to_string().contains("[alpha]"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = T1.replace("piece = otherwise : 2*x", "piece = otherwise : 2*");
        match parse_config(&text).unwrap_err() {
            FdError::Config { line, .. } => assert_eq!(line, 10),
            e => panic!("{e}"),
        }
        let text = T1.replace("samples = 10001", "samples = many");
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            FdError::Config { line: 6, .. }
        ));
        let text = T1.replace("zeta = zeta6", "zeta = zeta9");
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            FdError::Config { line: 13, .. }
        ));
        assert!(matches!(
            parse_config("x = 1").unwrap_err(),
            FdError::Config { line: 1, .. }
        ));
        let text = T1.replace("[map]", "[mapping]");
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            FdError::Config { line: 8, .. }
        ));
    }

    #[test]
    fn otherwise_must_be_last() {
        let text = T1.replace(
            "piece = -1 <= x <= 1 : x\npiece = otherwise : 2*x",
            "piece = otherwise : 2*x\npiece = -1 <= x <= 1 : x",
        );
        assert!(parse_config(&text).is_err());
    }

    #[test]
    fn catalog_map_with_params_and_tolerances() {
        let text = "[map]\ncatalog = T2\nx0 = 1\nmu = 2\n[simulation]\nzeta = zeta6\n\
                    [analysis]\ntheorem = thm1\nx0 = 1\neps_fix = 1e-8\nseed = 0xFD15C\n";
        let c = parse_config(text).unwrap();
        assert_eq!(
            c.map,
            MapConfig::Catalog {
                name: "T2".into(),
                params: vec![("x0".into(), 1.0), ("mu".into(), 2.0)]
            }
        );
        assert!(c.space.is_none());
        assert_eq!(c.analysis.tolerances.eps_fix, 1e-8);
        assert_eq!(c.analysis.seed, Some(0xFD15C));
    }

    #[test]
    fn display_round_trips() {
        for text in [
            T1.to_string(),
            "[space]\nkind = finite\nrow = 0, 1\nrow = 1, 0\n[map]\ntable = 1, 0\n\
             [simulation]\nzeta = zeta1\nlambda = 0.5\n[analysis]\ntheorem = thm1\nx0 = 0\nwitness_cap = 7\n"
                .to_string(),
            "[space]\nkind = box\nbounds = -1, 1, -2, 2\nsamples = 5\nmetric = chebyshev\n\
             [map]\ncatalog = identity\n[analysis]\ntheorem = fixed_set\nx0 = 0, 0\n"
                .to_string(),
            "[map]\ncatalog = T1\n[simulation]\nzeta = custom\nexpr = s - t\n[alpha]\npiece = [-1, 1] : 2\n\
             piece = otherwise : 0.5\n[analysis]\ntheorem = thm2\nbranch = S\nreport = out.json\n"
                .to_string(),
        ] {
            let c = parse_config(&text).unwrap();
            let again = parse_config(&c.to_string()).unwrap();
            assert_eq!(c, again, "{}", c);
        }
    }

    #[test]
    fn seeds() {
        assert_eq!(parse_seed("0xFD15C"), Some(0xFD15C));
        assert_eq!(parse_seed("42"), Some(42));
        assert_eq!(parse_seed("x"), None);
    }
}
