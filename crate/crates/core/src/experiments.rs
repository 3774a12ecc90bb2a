//! Reproducible verification suite for the two Ward variants.
//!
//! Each run draws uniform data from a seeded ChaCha8 stream and checks the
//! identities linking `ward.D` on squared distances to `ward.D2` on plain
//! distances. Three published height listings of one 20-point example are
//! kept verbatim and checked against each other.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{compare_height_lists, compare_heights, topology_equal, HeightMap};
use crate::dendrogram::Dendrogram;
use crate::engine::{agglomerate, transform_heights, AgglomerateOptions, Algorithm, HeightTransform};
use crate::error::{Error, Result};
use crate::export::Classification;
use crate::matrix::DataMatrix;
use crate::method::LinkageMethod;
use crate::oracle::{compare_with_engine, greedy_ess_agglomerate, ORACLE_MAX_N};

/// Heights of `ward.D2` on Euclidean distances.
pub const EXPERIMENT_1_HEIGHTS: [f64; 19] = [
    0.1573864, 0.2422061, 0.2664122, 0.2901741, 0.3030634, 0.3083869, 0.3589344, 0.3830281, 0.3832023, 0.5753823,
    0.6840459, 0.7258152, 0.7469914, 0.7647439, 0.8042245, 0.8751259, 1.2043397, 1.5665054, 1.8584163,
];

/// Heights of `ward.D` on squared Euclidean distances.
pub const EXPERIMENT_2_HEIGHTS: [f64; 19] = [
    0.02477046, 0.05866380, 0.07097546, 0.08420102, 0.09184743, 0.09510249, 0.12883390, 0.14671052, 0.14684403,
    0.33106478, 0.46791879, 0.52680768, 0.55799612, 0.58483318, 0.64677705, 0.76584542, 1.45043423, 2.45393902,
    3.45371103,
];

/// Heights of `ward.D` on plain Euclidean distances.
pub const EXPERIMENT_3_HEIGHTS: [f64; 19] = [
    0.1573864, 0.2422061, 0.2664122, 0.2901741, 0.3030634, 0.3083869, 0.3589344, 0.3832023, 0.4018957, 0.5988721,
    0.7443850, 0.7915592, 0.7985444, 0.8016877, 0.8414950, 0.9273739, 1.4676446, 2.2073106, 2.5687307,
];

/// Absolute tolerance for the printed listings.
pub const FIXTURE_TOLERANCE: f64 = 1e-6;

/// Relative tolerance for identities checked on generated data.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// Gap above which two sorted height lists count as different.
const DIFFERENCE_THRESHOLD: f64 = 1e-6;

/// `n × p` matrix of independent uniform draws on `[0, 1)`.
pub fn uniform_data(n: usize, p: usize, seed: u64) -> Result<DataMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n * p).map(|_| rng.random::<f64>()).collect();
    DataMatrix::new(n, p, values)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Check { name, passed, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub n: usize,
    pub p: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("experiments n={} p={} seed={}\n", self.n, self.p, self.seed);
        for c in &self.checks {
            out.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
        }
        out.push_str(if self.passed() { "all identities hold\n" } else { "verification failed\n" });
        out
    }
}

/// Index of the first entry where the sorted lists differ by more than `tol`.
pub fn first_difference(a: &[f64], b: &[f64], tol: f64) -> Option<usize> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter()
        .zip(&b)
        .position(|(x, y)| (x - y).abs() > tol)
        .or((a.len() != b.len()).then(|| a.len().min(b.len())))
}

fn contains(list: &[f64], value: f64) -> bool {
    list.iter().any(|&x| (x - value).abs() <= FIXTURE_TOLERANCE)
}

/// Consistency checks among the three stored listings.
pub fn fixture_checks() -> Vec<Check> {
    let mut checks = Vec::new();

    let sq = compare_height_lists(&EXPERIMENT_1_HEIGHTS, &EXPERIMENT_2_HEIGHTS, HeightMap::Square)
        .expect("listings have equal length");
    checks.push(Check::new(
        "fixture: squared Exp-1 = Exp-2",
        sq.max_absolute < FIXTURE_TOLERANCE,
        format!("max absolute deviation {:.3e}", sq.max_absolute),
    ));

    let rt = compare_height_lists(&EXPERIMENT_2_HEIGHTS, &EXPERIMENT_1_HEIGHTS, HeightMap::Sqrt)
        .expect("listings have equal length");
    checks.push(Check::new(
        "fixture: sqrt Exp-2 = Exp-1",
        rt.max_absolute < FIXTURE_TOLERANCE,
        format!("max absolute deviation {:.3e}", rt.max_absolute),
    ));

    let first = first_difference(&EXPERIMENT_1_HEIGHTS, &EXPERIMENT_3_HEIGHTS, FIXTURE_TOLERANCE);
    let only_in_3 = contains(&EXPERIMENT_3_HEIGHTS, 0.4018957) && !contains(&EXPERIMENT_1_HEIGHTS, 0.4018957);
    checks.push(Check::new(
        "fixture: Exp-3 differs from Exp-1",
        first.is_some() && only_in_3,
        match first {
            Some(i) => format!(
                "first difference at rank {}: {} vs {}; 0.4018957 only in Exp-3: {only_in_3}",
                i + 1,
                EXPERIMENT_1_HEIGHTS[i],
                EXPERIMENT_3_HEIGHTS[i]
            ),
            None => "sorted lists agree".into(),
        },
    ));
    checks
}

fn describe(r: Result<(bool, String)>) -> (bool, String) {
    r.unwrap_or_else(|e| (false, format!("error: {e}")))
}

/// Runs every identity on seeded uniform data plus the fixture checks.
pub fn run_experiments(n: usize, p: usize, seed: u64) -> Result<ExperimentReport> {
    if n < 3 {
        return Err(Error::TooFewObservations { required: 3, found: n });
    }
    let data = uniform_data(n, p, seed)?;
    let plain = data.euclidean();
    let squared = data.squared_euclidean();
    let opts = AgglomerateOptions::default();
    let run = |d, m, a| agglomerate(d, m, a, &opts);

    let d2_naive = run(&plain, LinkageMethod::WardD2, Algorithm::Naive)?;
    let d_squared = run(&squared, LinkageMethod::WardD, Algorithm::Naive)?;
    let d_plain = agglomerate(&plain, LinkageMethod::WardD, Algorithm::Naive, &AgglomerateOptions::forced())?;
    let mut checks = Vec::new();

    let (ok, detail) = describe(run(&plain, LinkageMethod::WardD2, Algorithm::NnChain).and_then(|chain| {
        let dev = compare_heights(&d2_naive, &chain, HeightMap::Identity)?;
        Ok((dev < IDENTITY_TOLERANCE, format!("max relative deviation {dev:.3e}")))
    }));
    checks.push(Check::new("E1=E4a: ward.D2 naive = ward.D2 nnchain", ok, detail));

    let (ok, detail) = describe(compare_heights(&d2_naive, &d_squared, HeightMap::Square).map(|dev| {
        (dev < IDENTITY_TOLERANCE, format!("max relative deviation {dev:.3e}"))
    }));
    checks.push(Check::new("E2: ward.D(D^2) = ward.D2(D)^2", ok, detail));

    let classification = Classification::of(d_plain.method(), d_plain.input_scale());
    let differs = |other: &Dendrogram| {
        first_difference(&d_plain.heights(), &other.heights(), DIFFERENCE_THRESHOLD * other.heights().iter().fold(1.0, |a, &b| f64::max(a, b)))
            .is_some()
    };
    let (vs_d2, vs_sq) = (differs(&d2_naive), differs(&d_squared));
    checks.push(Check::new(
        "E3: ward.D(D) differs and is non-Ward",
        vs_d2 && vs_sq && classification == Classification::NonWard,
        format!("differs from ward.D2(D): {vs_d2}; from ward.D(D^2): {vs_sq}; classified {classification:?}"),
    ));

    let (ok, detail) = describe(transform_heights(&d_squared, HeightTransform::Sqrt).and_then(|rooted| {
        let same = topology_equal(&rooted, &d2_naive)?;
        let dev = if same { compare_heights(&rooted, &d2_naive, HeightMap::Identity)? } else { f64::INFINITY };
        Ok((same && dev < IDENTITY_TOLERANCE, format!("topology equal: {same}; max relative deviation {dev:.3e}")))
    }));
    checks.push(Check::new("E4: sqrt(ward.D(D^2)) = ward.D2(D)", ok, detail));

    if n <= ORACLE_MAX_N {
        let (ok, detail) = describe(greedy_ess_agglomerate(&data).and_then(|trace| {
            let cmp = compare_with_engine(&trace, &d_squared)?;
            Ok((
                cmp.topology_equal && cmp.max_relative_deviation < IDENTITY_TOLERANCE,
                format!(
                    "topology equal: {}; max relative deviation {:.3e}",
                    cmp.topology_equal, cmp.max_relative_deviation
                ),
            ))
        }));
        checks.push(Check::new("oracle: greedy ESS = ward.D(D^2)", ok, detail));
    }

    checks.extend(fixture_checks());
    Ok(ExperimentReport { n, p, seed, checks })
}
