//! Metric spaces, points, closed discs and sample sets.
//!
//! Three kinds of space are supported: a finite space given by its distance
//! table, a sampled window `[a, b]` of the real line with the usual metric,
//! and a sampled box in `R^n` under the euclidean, chebyshev or manhattan
//! metric. The 1-D and n-D kinds are windows onto the ambient space: maps are
//! free to send a sample outside the window and distances are still defined.

use std::cmp::Ordering;
use std::fmt;
use std::io::{Read, Write};

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{FdError, Result};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    /// Element of a finite space.
    Index(usize),
    /// Element of `R^n`, `n >= 1`.
    Coords(Vec<f64>),
}

impl Point {
    pub fn scalar(x: f64) -> Self {
        Point::Coords(vec![x])
    }

    pub fn index(i: usize) -> Self {
        Point::Index(i)
    }

    /// The coordinate of a 1-D point.
    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            Point::Coords(c) if c.len() == 1 => Some(c[0]),
            _ => None,
        }
    }

    pub fn as_index(&self) -> Option<usize> {
        match self {
            Point::Index(i) => Some(*i),
            Point::Coords(_) => None,
        }
    }

    fn cmp_total(&self, other: &Point) -> Ordering {
        match (self, other) {
            (Point::Index(a), Point::Index(b)) => a.cmp(b),
            (Point::Coords(a), Point::Coords(b)) => {
                for (x, y) in a.iter().zip(b) {
                    match x.total_cmp(y) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                a.len().cmp(&b.len())
            }
            (Point::Index(_), Point::Coords(_)) => Ordering::Less,
            (Point::Coords(_), Point::Index(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Index(i) => write!(f, "#{i}"),
            Point::Coords(c) if c.len() == 1 => write!(f, "{}", c[0]),
            Point::Coords(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "({})", parts.join("; "))
            }
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Point::Index(i) => {
                let mut m = serializer.serialize_map(Some(1))?;
                m.serialize_entry("index", i)?;
                m.end()
            }
            Point::Coords(c) => {
                let mut s = serializer.serialize_seq(Some(c.len()))?;
                for v in c {
                    s.serialize_element(v)?;
                }
                s.end()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    Chebyshev,
    Manhattan,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Chebyshev => "chebyshev",
            Metric::Manhattan => "manhattan",
        }
    }

    pub fn from_name(name: &str) -> Option<Metric> {
        match name {
            "euclidean" => Some(Metric::Euclidean),
            "chebyshev" => Some(Metric::Chebyshev),
            "manhattan" => Some(Metric::Manhattan),
            _ => None,
        }
    }

    fn eval(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Metric::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Metric::Chebyshev => diffs.fold(0.0, f64::max),
            Metric::Manhattan => diffs.sum(),
        }
    }
}

/// A finite metric space `{0, .., n-1}` given by its distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTable {
    n: usize,
    matrix: Vec<f64>,
}

impl FiniteTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }
}

/// Sampled window `[lo, hi]` of the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval1D {
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    /// Breakpoints that must be probed on both sides.
    pub critical: Vec<f64>,
}

impl Interval1D {
    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.samples - 1) as f64
    }

    fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let last = self.samples - 1;
        (0..self.samples).map(move |i| {
            if i == last {
                self.hi
            } else {
                // (hi - lo) * i / last keeps round numbers exact, unlike i * step.
                self.lo + (self.hi - self.lo) * i as f64 / last as f64
            }
        })
    }

    fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxSpace {
    pub bounds: Vec<(f64, f64)>,
    pub samples: Vec<usize>,
    pub metric: Metric,
}

impl BoxSpace {
    pub fn dim(&self) -> usize {
        self.bounds.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpace {
    FiniteTable(FiniteTable),
    Interval(Interval1D),
    Box(BoxSpace),
}

impl MetricSpace {
    /// Finite space whose table must satisfy every metric axiom.
    pub fn finite(rows: Vec<Vec<f64>>) -> Result<Self> {
        let space = Self::finite_unchecked(rows)?;
        let report = check_metric_axioms(&space, &Tolerances::default());
        if !report.all_hold() {
            return Err(FdError::domain(format!(
                "distance table is not a metric: {}",
                report.summary()
            )));
        }
        Ok(space)
    }

    /// Finite space with only shape and finiteness validated. Use
    /// [`check_metric_axioms`] to inspect the table.
    pub fn finite_unchecked(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(FdError::domain("empty distance table"));
        }
        let mut matrix = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(FdError::domain(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(FdError::domain(format!("row {i} contains non-finite entry {v}")));
            }
            matrix.extend(row);
        }
        Ok(MetricSpace::FiniteTable(FiniteTable { n, matrix }))
    }

    /// Load a finite space from `n` rows of `n` comma-separated reals.
    pub fn finite_from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            let row = record
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| FdError::domain(format!("line {}: `{f}` is not a number", line + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::finite(rows)
    }

    pub fn interval(lo: f64, hi: f64, samples: usize) -> Result<Self> {
        Self::interval_with_critical(lo, hi, samples, Vec::new())
    }

    pub fn interval_with_critical(lo: f64, hi: f64, samples: usize, critical: Vec<f64>) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(FdError::domain(format!(
                "interval bounds must satisfy a < b, got [{lo}, {hi}]"
            )));
        }
        if samples < 2 {
            return Err(FdError::domain(format!(
                "interval needs at least 2 samples, got {samples}"
            )));
        }
        if let Some(c) = critical.iter().find(|c| !c.is_finite()) {
            return Err(FdError::domain(format!("critical point {c} is not finite")));
        }
        Ok(MetricSpace::Interval(Interval1D {
            lo,
            hi,
            samples,
            critical,
        }))
    }

    pub fn boxed(bounds: Vec<(f64, f64)>, samples: Vec<usize>, metric: Metric) -> Result<Self> {
        if bounds.is_empty() {
            return Err(FdError::domain("box needs at least one axis"));
        }
        if bounds.len() != samples.len() {
            return Err(FdError::domain("box bounds and sample counts differ in length"));
        }
        for (axis, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(FdError::domain(format!("axis {axis}: bounds must satisfy a < b")));
            }
        }
        if let Some(axis) = samples.iter().position(|&n| n < 2) {
            return Err(FdError::domain(format!("axis {axis}: needs at least 2 samples")));
        }
        Ok(MetricSpace::Box(BoxSpace {
            bounds,
            samples,
            metric,
        }))
    }

    /// Same space with extra breakpoints registered (1-D only; other kinds
    /// are returned unchanged).
    pub fn with_critical_points(&self, points: &[f64]) -> Self {
        match self {
            MetricSpace::Interval(iv) => {
                let mut iv = iv.clone();
                iv.critical.extend(points.iter().copied().filter(|p| p.is_finite()));
                MetricSpace::Interval(iv)
            }
            other => other.clone(),
        }
    }

    /// Same space with a different sample count (per axis for boxes).
    pub fn with_samples(&self, n: usize) -> Result<Self> {
        match self {
            MetricSpace::Interval(iv) => Self::interval_with_critical(iv.lo, iv.hi, n, iv.critical.clone()),
            MetricSpace::Box(b) => Self::boxed(b.bounds.clone(), vec![n; b.dim()], b.metric),
            MetricSpace::FiniteTable(_) => Ok(self.clone()),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MetricSpace::FiniteTable(_) => "finite",
            MetricSpace::Interval(_) => "interval",
            MetricSpace::Box(_) => "box",
        }
    }

    pub fn is_one_dimensional(&self) -> bool {
        matches!(self, MetricSpace::Interval(_))
    }

    /// Largest gap between neighbouring grid samples; 0 for finite spaces.
    pub fn grid_step(&self) -> f64 {
        match self {
            MetricSpace::FiniteTable(_) => 0.0,
            MetricSpace::Interval(iv) => iv.step(),
            MetricSpace::Box(b) => b
                .bounds
                .iter()
                .zip(&b.samples)
                .map(|(&(lo, hi), &n)| (hi - lo) / (n - 1) as f64)
                .fold(0.0, f64::max),
        }
    }

    /// Validate that `p` is an element of the space.
    pub fn check_point(&self, p: &Point) -> Result<()> {
        match (self, p) {
            (MetricSpace::FiniteTable(t), Point::Index(i)) if *i < t.n => Ok(()),
            (MetricSpace::FiniteTable(t), Point::Index(i)) => Err(FdError::domain(format!(
                "index {i} out of range for a space of {} points",
                t.n
            ))),
            (MetricSpace::Interval(_), Point::Coords(c)) if c.len() == 1 => finite_coords(c),
            (MetricSpace::Box(b), Point::Coords(c)) if c.len() == b.dim() => finite_coords(c),
            (space, p) => Err(FdError::domain(format!(
                "point {p} does not belong to a {} space",
                space.kind_name()
            ))),
        }
    }
}

fn finite_coords(c: &[f64]) -> Result<()> {
    match c.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(FdError::domain(format!("coordinate {v} is not finite"))),
        None => Ok(()),
    }
}

/// `d(x, y)` in `space`.
pub fn distance(space: &MetricSpace, x: &Point, y: &Point) -> Result<f64> {
    space.check_point(x)?;
    space.check_point(y)?;
    Ok(match (space, x, y) {
        (MetricSpace::FiniteTable(t), Point::Index(i), Point::Index(j)) => t.get(*i, *j),
        (MetricSpace::Interval(_), Point::Coords(a), Point::Coords(b)) => (a[0] - b[0]).abs(),
        (MetricSpace::Box(bx), Point::Coords(a), Point::Coords(b)) => bx.metric.eval(a, b),
        _ => unreachable!("check_point guarantees matching kinds"),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub holds: bool,
    /// First violating index tuple in row-major order.
    pub witness: Option<Vec<usize>>,
}

impl AxiomCheck {
    fn ok() -> Self {
        AxiomCheck {
            holds: true,
            witness: None,
        }
    }

    fn violated(w: Vec<usize>) -> Self {
        AxiomCheck {
            holds: false,
            witness: Some(w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    /// Built-in interval and box metrics satisfy the axioms by construction.
    pub by_construction: bool,
    pub symmetry: AxiomCheck,
    pub zero_diagonal: AxiomCheck,
    pub positivity: AxiomCheck,
    pub triangle: AxiomCheck,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.symmetry.holds && self.zero_diagonal.holds && self.positivity.holds && self.triangle.holds
    }

    pub fn summary(&self) -> String {
        if self.by_construction {
            return "holds by construction".to_string();
        }
        let mut parts = Vec::new();
        for (name, c) in [
            ("symmetry", &self.symmetry),
            ("zero diagonal", &self.zero_diagonal),
            ("positivity", &self.positivity),
            ("triangle", &self.triangle),
        ] {
            if let Some(w) = &c.witness {
                parts.push(format!("{name} fails at {w:?}"));
            }
        }
        if parts.is_empty() {
            "all axioms hold".to_string()
        } else {
            parts.join("; ")
        }
    }
}

/// Check symmetry, zero diagonal, off-diagonal positivity and the triangle
/// inequality of a finite table. The triangle witness `(i, j, k)` means
/// `d(i,j) > d(i,k) + d(k,j) + eps_tri`.
pub fn check_metric_axioms(space: &MetricSpace, tol: &Tolerances) -> AxiomReport {
    let t = match space {
        MetricSpace::FiniteTable(t) => t,
        _ => {
            return AxiomReport {
                by_construction: true,
                symmetry: AxiomCheck::ok(),
                zero_diagonal: AxiomCheck::ok(),
                positivity: AxiomCheck::ok(),
                triangle: AxiomCheck::ok(),
            }
        }
    };
    let n = t.n;
    let pairs = || (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)));

    let symmetry = pairs()
        .find(|&(i, j)| i < j && t.get(i, j) != t.get(j, i))
        .map_or_else(AxiomCheck::ok, |(i, j)| AxiomCheck::violated(vec![i, j]));
    let zero_diagonal = (0..n)
        .find(|&i| t.get(i, i) != 0.0)
        .map_or_else(AxiomCheck::ok, |i| AxiomCheck::violated(vec![i, i]));
    let positivity = pairs()
        .find(|&(i, j)| i != j && t.get(i, j) <= 0.0)
        .map_or_else(AxiomCheck::ok, |(i, j)| AxiomCheck::violated(vec![i, j]));
    let triangle = pairs()
        .flat_map(|(i, j)| (0..n).map(move |k| (i, j, k)))
        .find(|&(i, j, k)| t.get(i, j) > t.get(i, k) + t.get(k, j) + tol.eps_tri)
        .map_or_else(AxiomCheck::ok, |(i, j, k)| AxiomCheck::violated(vec![i, j, k]));

    AxiomReport {
        by_construction: false,
        symmetry,
        zero_diagonal,
        positivity,
        triangle,
    }
}

/// Closed disc `{x : d(x, center) <= radius}`. The radius may be `+inf`
/// (the whole space).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Disc {
    pub center: Point,
    #[serde(serialize_with = "crate::report::ser_num")]
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if radius.is_nan() || radius < 0.0 {
            return Err(FdError::domain(format!("disc radius must be >= 0, got {radius}")));
        }
        Ok(Disc { center, radius })
    }

    pub fn contains(&self, space: &MetricSpace, x: &Point, tol: &Tolerances) -> Result<bool> {
        Ok(distance(space, x, &self.center)? <= self.radius + tol.eps_mem)
    }
}

/// How a sample entered a [`SampleSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Provenance(u8);

impl Provenance {
    pub const GRID: Provenance = Provenance(1);
    pub const CRITICAL: Provenance = Provenance(2);
    pub const BOUNDARY: Provenance = Provenance(4);
    pub const CENTER: Provenance = Provenance(8);
    pub const REFINED: Provenance = Provenance(16);

    pub fn contains(self, other: Provenance) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn union(self, other: Provenance) -> Provenance {
        Provenance(self.0 | other.0)
    }

    fn is_exact(self) -> bool {
        self.0 & !Self::GRID.0 != 0
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = [
            (Self::GRID, "grid"),
            (Self::CRITICAL, "critical"),
            (Self::BOUNDARY, "boundary"),
            (Self::CENTER, "center"),
            (Self::REFINED, "refined"),
        ];
        let parts: Vec<&str> = names
            .iter()
            .filter(|(p, _)| self.contains(*p))
            .map(|(_, n)| *n)
            .collect();
        f.write_str(&parts.join("|"))
    }
}

/// Ordered list of sampled points. 1-D sets are kept sorted and free of
/// duplicates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SampleSet {
    points: Vec<Point>,
    provenance: Vec<Provenance>,
}

impl SampleSet {
    pub fn from_points(points: Vec<Point>, provenance: Provenance) -> Self {
        let provenance = vec![provenance; points.len()];
        SampleSet { points, provenance }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, Provenance)> {
        self.points.iter().zip(self.provenance.iter().copied())
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.iter().any(|q| q == p)
    }

    /// Coordinates of a 1-D set.
    pub fn scalars(&self) -> Vec<f64> {
        self.points.iter().filter_map(Point::as_scalar).collect()
    }

    /// Subset of samples satisfying `keep`, in the original order.
    pub fn filter(&self, mut keep: impl FnMut(&Point) -> bool) -> SampleSet {
        let mut out = SampleSet::default();
        for (p, prov) in self.iter() {
            if keep(p) {
                out.points.push(p.clone());
                out.provenance.push(prov);
            }
        }
        out
    }

    /// Same set with `p` added (1-D sets stay sorted and deduplicated).
    pub fn with_point(&self, p: Point, prov: Provenance) -> SampleSet {
        let mut out = self.clone();
        out.points.push(p);
        out.provenance.push(prov);
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        let all_scalar = self.points.iter().all(|p| p.as_scalar().is_some());
        let mut entries: Vec<(Point, Provenance)> = self.points.drain(..).zip(self.provenance.drain(..)).collect();
        if all_scalar {
            entries.sort_by(|a, b| a.0.cmp_total(&b.0));
        }
        let mut merged: Vec<(Point, Provenance)> = Vec::with_capacity(entries.len());
        for (p, prov) in entries {
            let dup = if all_scalar {
                merged.last().is_some_and(|(q, _)| {
                    let (a, b) = (q.as_scalar().unwrap(), p.as_scalar().unwrap());
                    (a - b).abs() <= 1e-12 * a.abs().max(1.0)
                })
            } else {
                merged.iter().any(|(q, _)| *q == p)
            };
            if dup {
                let (q, qprov) = if all_scalar {
                    merged.last_mut().unwrap()
                } else {
                    merged.iter_mut().find(|(q, _)| *q == p).unwrap()
                };
                // Prefer an exactly placed value over a computed grid value.
                if prov.is_exact() && !qprov.is_exact() {
                    *q = p;
                }
                *qprov = qprov.union(prov);
            } else {
                merged.push((p, prov));
            }
        }
        for (p, prov) in merged {
            self.points.push(p);
            self.provenance.push(prov);
        }
    }

    /// CSV export with columns `point_id, coord_1..coord_k, provenance`.
    /// Finite-space points export their index as `coord_1`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let k = self
            .points
            .iter()
            .map(|p| match p {
                Point::Index(_) => 1,
                Point::Coords(c) => c.len(),
            })
            .max()
            .unwrap_or(1);
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["point_id".to_string()];
        header.extend((1..=k).map(|i| format!("coord_{i}")));
        header.push("provenance".to_string());
        w.write_record(&header)?;
        for (id, (p, prov)) in self.iter().enumerate() {
            let mut row = vec![id.to_string()];
            match p {
                Point::Index(i) => row.push(i.to_string()),
                Point::Coords(c) => row.extend(c.iter().map(|v| v.to_string())),
            }
            row.push(prov.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Uniform grid of the space plus its breakpoints (each with a `±offset`
/// neighbour), every disc center, and in 1-D both disc boundary points
/// `x0 ± r`. Points outside the sampled window are dropped.
pub fn enumerate_samples(space: &MetricSpace, discs: &[Disc], tol: &Tolerances) -> Result<SampleSet> {
    for d in discs {
        space.check_point(&d.center)?;
    }
    let mut set = SampleSet::default();
    let mut push = |p: Point, prov: Provenance| {
        set.points.push(p);
        set.provenance.push(prov);
    };
    match space {
        MetricSpace::FiniteTable(t) => {
            if t.is_empty() {
                return Err(FdError::domain("empty space"));
            }
            for i in 0..t.n {
                push(Point::Index(i), Provenance::GRID);
            }
            return Ok(set);
        }
        MetricSpace::Interval(iv) => {
            for x in iv.grid() {
                push(Point::scalar(x), Provenance::GRID);
            }
            for &c in &iv.critical {
                for x in [c - tol.breakpoint_offset, c, c + tol.breakpoint_offset] {
                    if iv.contains(x) {
                        push(Point::scalar(x), Provenance::CRITICAL);
                    }
                }
            }
            for d in discs {
                let c = d.center.as_scalar().expect("checked 1-D center");
                push(d.center.clone(), Provenance::CENTER);
                if d.radius.is_finite() {
                    for x in [c - d.radius, c + d.radius] {
                        if iv.contains(x) {
                            push(Point::scalar(x), Provenance::BOUNDARY);
                        }
                    }
                }
            }
        }
        MetricSpace::Box(b) => {
            let axes: Vec<Vec<f64>> = b
                .bounds
                .iter()
                .zip(&b.samples)
                .map(|(&(lo, hi), &n)| {
                    Interval1D {
                        lo,
                        hi,
                        samples: n,
                        critical: Vec::new(),
                    }
                    .grid()
                    .collect()
                })
                .collect();
            let total: usize = axes.iter().map(Vec::len).product();
            for mut flat in 0..total {
                let mut coords = vec![0.0; axes.len()];
                for (axis, values) in axes.iter().enumerate().rev() {
                    coords[axis] = values[flat % values.len()];
                    flat /= values.len();
                }
                push(Point::Coords(coords), Provenance::GRID);
            }
            for d in discs {
                push(d.center.clone(), Provenance::CENTER);
            }
        }
    }
    set.normalize();
    Ok(set)
}

/// Samples lying in the closed disc (within `eps_mem`).
pub fn disc_points(space: &MetricSpace, samples: &SampleSet, disc: &Disc, tol: &Tolerances) -> Result<SampleSet> {
    let mut out = SampleSet::default();
    for (p, prov) in samples.iter() {
        if disc.contains(space, p, tol)? {
            out.points.push(p.clone());
            out.provenance.push(prov);
        }
    }
    Ok(out)
}
