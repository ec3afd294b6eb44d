#![allow(dead_code, clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

use fdlab_core::contractions::{check_necessary_inequality, is_z_contraction, is_zc_contraction, rho};
use fdlab_core::metric::{enumerate_samples, Disc};
use fdlab_core::theorems::{fixed_set, verify_fixed_disc, verify_theorem1, Settings};
use fdlab_core::{MetricSpace, Point, SelfMap, SimulationFunctionSpec, Status, Tolerances, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random finite metric: shortest paths over a complete graph with
/// integer edge weights.
pub struct Trial {
    pub d: Vec<Vec<f64>>,
    pub map: Vec<usize>,
    pub x0: usize,
    pub lambda: f64,
}

pub fn random_trial(rng: &mut ChaCha8Rng) -> Trial {
    let n = rng.random_range(1..=8);
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.random_range(1..=10) as f64;
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let map = (0..n)
        .map(|i| {
            if rng.random_bool(0.5) {
                i
            } else {
                rng.random_range(0..n)
            }
        })
        .collect();
    Trial {
        d,
        map,
        x0: rng.random_range(0..n),
        lambda: rng.random_range(0.0..1.0),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Brute-force answers computed straight from the table.
#[derive(Debug, PartialEq)]
pub struct Oracle {
    pub z_violations: usize,
    pub zc_checked: usize,
    pub zc_violations: usize,
    pub necessary_checked: usize,
    pub necessary_violations: usize,
    pub rho: f64,
    pub fixed: usize,
    pub disc_checked: usize,
    pub disc_counterexamples: usize,
    pub verdict: Verdict,
}

pub fn oracle(t: &Trial, tol: &Tolerances) -> Oracle {
    let n = t.d.len();
    let (d, m, x0, l) = (&t.d, &t.map, t.x0, t.lambda);
    let zeta = |tt: f64, s: f64| l * s - tt;
    let mut z_violations = 0;
    for i in 0..n {
        for j in i + 1..n {
            if zeta(d[m[i]][m[j]], d[i][j]) < 0.0 {
                z_violations += 1;
            }
        }
    }
    let displaced: Vec<usize> = (0..n).filter(|&x| d[x][m[x]] > tol.eps_fix).collect();
    let zc_violations = displaced
        .iter()
        .filter(|&&x| zeta(d[m[x]][x], d[m[x]][x0]) < 0.0)
        .count();
    let necessary: Vec<usize> = (0..n).filter(|&x| d[m[x]][x0] > tol.eps_fix).collect();
    let necessary_violations = necessary.iter().filter(|&&x| !(d[m[x]][x] < d[m[x]][x0])).count();
    let rho = displaced.iter().map(|&x| d[x][m[x]]).fold(f64::INFINITY, f64::min);
    let in_disc: Vec<usize> = (0..n).filter(|&x| d[x][x0] <= rho + tol.eps_mem).collect();
    let disc_counterexamples = in_disc.iter().filter(|&&x| d[x][m[x]] > tol.eps_fix).count();
    let h2_ok = in_disc
        .iter()
        .filter(|&&x| x != x0)
        .all(|&x| d[m[x]][x0] > tol.eps_fix && d[m[x]][x0] <= rho + tol.eps_mem);
    let verdict = match (zc_violations == 0 && h2_ok, disc_counterexamples == 0) {
        (true, true) => Verdict::Consistent,
        (true, false) => Verdict::RefutationCandidate,
        (false, _) => Verdict::HypothesisFailed,
    };
    Oracle {
        z_violations,
        zc_checked: displaced.len(),
        zc_violations,
        necessary_checked: necessary.len(),
        necessary_violations,
        rho,
        fixed: n - displaced.len(),
        disc_checked: in_disc.len(),
        disc_counterexamples,
        verdict,
    }
}

/// The same quantities through the library's sampled code paths.
pub fn library(t: &Trial, tol: &Tolerances) -> Oracle {
    let space = MetricSpace::finite(t.d.clone()).expect("shortest paths form a metric");
    let map = SelfMap::Table(t.map.clone());
    let x0 = Point::index(t.x0);
    let zeta = SimulationFunctionSpec::linear(t.lambda).unwrap();
    let samples = enumerate_samples(&space, &[], tol).unwrap();
    assert_eq!(samples.len(), t.d.len());
    let z = is_z_contraction(&space, &map, &zeta, &samples, tol).unwrap();
    let zc = is_zc_contraction(&space, &map, &x0, &zeta, &samples, tol).unwrap();
    let nec = check_necessary_inequality(&space, &map, &x0, &samples, tol).unwrap();
    let r = rho(&space, &map, &samples, tol).unwrap();
    assert_eq!(r.value, r.lower, "finite spaces have no grid slack");
    let fs = fixed_set(&space, &map, &samples, tol).unwrap();
    let disc = Disc::new(x0.clone(), r.lower).unwrap();
    let c = verify_fixed_disc(&space, &map, &disc, &samples, tol).unwrap();
    let settings = Settings { tol: *tol, seed: 0 };
    let report = verify_theorem1(&space, &map, &x0, &zeta, &samples, &settings).unwrap();
    assert_eq!(report.conclusion.checked, c.checked);
    assert_eq!(z.status == Status::Fail, z.violations > 0);
    Oracle {
        z_violations: z.violations,
        zc_checked: zc.checked,
        zc_violations: zc.violations,
        necessary_checked: nec.checked,
        necessary_violations: nec.violations,
        rho: r.value,
        fixed: fs.count,
        disc_checked: c.checked,
        disc_counterexamples: c.violations,
        verdict: report.verdict,
    }
}

/// Runs `trials` seeded trials; returns (mismatches, refutation candidates).
pub fn finite_sweep(seed: u64, trials: usize) -> (Vec<String>, usize) {
    let tol = Tolerances::default();
    let mut r = rng(seed);
    let mut mismatches = Vec::new();
    let mut refutations = 0;
    for k in 0..trials {
        let t = random_trial(&mut r);
        let want = oracle(&t, &tol);
        let got = library(&t, &tol);
        if got.verdict == Verdict::RefutationCandidate {
            refutations += 1;
        }
        if want != got {
            mismatches.push(format!("trial {k}: oracle {want:?} library {got:?}"));
        }
    }
    (mismatches, refutations)
}
