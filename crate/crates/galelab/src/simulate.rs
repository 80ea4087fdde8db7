//! Seeded sampling of random Gale diagrams and random cones, with
//! reproducible Monte Carlo estimators.
//!
//! Reproducibility contract: every trial draws from its own ChaCha stream
//! indexed by the trial number, so results are bit-identical for a fixed
//! `(seed, trials)` regardless of how many worker threads execute the
//! trials. Statistics are folded over the trial-indexed results in a fixed
//! order.

use crate::error::{Error, Result};
use crate::exactcomb::{self, Dims, ExactProb};
use crate::galecore::{count_faces_capped, GaleDiagram, DEFAULT_ENUMERATION_CAP};
use crate::geomcore::{contains_origin, OriginTester, VectorConfig};
use crate::lp::{self, LpOutcome, StandardForm};
use crate::ratio;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Sampling distribution for the diagram coordinates. Both are even and
/// assign measure zero to hyperplanes through the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleDistribution {
    GaussianIid,
    UniformSphere,
}

impl SampleDistribution {
    pub fn name(&self) -> &'static str {
        match self {
            SampleDistribution::GaussianIid => "gaussian-iid",
            SampleDistribution::UniformSphere => "uniform-sphere",
        }
    }
}

impl std::str::FromStr for SampleDistribution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian-iid" => Ok(SampleDistribution::GaussianIid),
            "uniform-sphere" => Ok(SampleDistribution::UniformSphere),
            other => Err(Error::Domain(format!("unknown distribution {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SamplerConfig {
    pub dims: Dims,
    pub distribution: SampleDistribution,
    pub seed: u64,
    /// rejection budget per produced sample
    pub max_rejections: u64,
}

impl SamplerConfig {
    pub fn new(dims: Dims, distribution: SampleDistribution, seed: u64) -> Self {
        SamplerConfig {
            dims,
            distribution,
            seed,
            max_rejections: 1_000_000,
        }
    }
}

/// A Monte Carlo estimate with its sampling metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
    pub trials: u64,
    pub seed: u64,
    /// total rejected draws across all trials
    pub rejected: u64,
    /// false for a single trial, where the standard error is undefined
    /// and reported as zero
    pub stderr_defined: bool,
}

impl MCEstimate {
    fn from_values(values: &[f64], seed: u64, rejected: u64) -> Self {
        let n = values.len() as u64;
        assert!(n > 0, "estimate needs at least one trial");
        let mean = values.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return MCEstimate {
                mean,
                stderr: 0.0,
                ci95: (mean, mean),
                trials: 1,
                seed,
                rejected,
                stderr_defined: false,
            };
        }
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
        let stderr = (var / n as f64).sqrt();
        MCEstimate {
            mean,
            stderr,
            ci95: (mean - 1.96 * stderr, mean + 1.96 * stderr),
            trials: n,
            seed,
            rejected,
            stderr_defined: true,
        }
    }

    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        (self.mean - target).abs() <= sigmas * self.stderr
    }
}

/// A sampled Cover-Efron style cone: `N` vectors in dimension `d+1` whose
/// positive hull is a proper cone (equivalently, whose convex hull misses
/// the origin).
#[derive(Clone, Debug)]
pub struct ConeSample {
    dims: Dims,
    vectors: VectorConfig,
}

impl ConeSample {
    pub fn new(dims: Dims, vectors: VectorConfig) -> Result<Self> {
        if vectors.dim() != dims.d() as usize + 1 {
            return Err(Error::Domain(format!(
                "cone vectors live in dimension {}, dims demand d+1={}",
                vectors.dim(),
                dims.d() + 1
            )));
        }
        if vectors.len() != dims.n() as usize {
            return Err(Error::Domain(format!(
                "cone has {} vectors, dims demand N={}",
                vectors.len(),
                dims.n()
            )));
        }
        if contains_origin(&vectors).is_feasible() {
            return Err(Error::Domain(
                "positive hull is all of space: origin in the convex hull".into(),
            ));
        }
        Ok(ConeSample { dims, vectors })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn vectors(&self) -> &VectorConfig {
        &self.vectors
    }
}

fn chacha_key(seed: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    let mut state = seed;
    for chunk in key.chunks_mut(8) {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    key
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(chacha_key(seed));
    rng.set_stream(stream);
    rng
}

fn draw_rows(
    rng: &mut ChaCha8Rng,
    count: usize,
    dim: usize,
    dist: SampleDistribution,
) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| loop {
            let mut row: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            match dist {
                SampleDistribution::GaussianIid => {
                    // guard against the (measure-zero) all-zero draw
                    if row.iter().any(|x| *x != 0.0) {
                        return row;
                    }
                }
                SampleDistribution::UniformSphere => {
                    let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if norm > 0.0 {
                        for x in row.iter_mut() {
                            *x /= norm;
                        }
                        return row;
                    }
                }
            }
        })
        .collect()
}

/// One conditioned diagram draw on a given stream; whole batches are
/// redrawn until the origin lands in the convex hull, which realizes the
/// conditional distribution exactly.
fn sample_diagram_with_count(cfg: &SamplerConfig, stream: u64) -> Result<(GaleDiagram, u64)> {
    let dims = cfg.dims;
    let m = dims.m() as usize;
    let n = dims.n() as usize;
    let mut rng = rng_for(cfg.seed, stream);
    let mut rejected = 0u64;
    while rejected <= cfg.max_rejections {
        let rows = draw_rows(&mut rng, n, m, cfg.distribution);
        let vectors = VectorConfig::from_f64_rows(m, &rows)?;
        if OriginTester::new(&vectors).full_contains_origin() {
            match GaleDiagram::new(dims, vectors) {
                Ok(g) => return Ok((g, rejected)),
                // degenerate accepted sample (measure zero): treat as a
                // rejection and redraw
                Err(_) => rejected += 1,
            }
        } else {
            rejected += 1;
        }
    }
    Err(Error::RejectionBudget {
        attempts: rejected,
        expected_acceptance: exactcomb::origin_in_hull_prob(dims.m(), dims.n())
            .map(|p| p.to_f64())
            .unwrap_or(f64::NAN),
    })
}

/// Sample one `(phi, N)` random Gale diagram (stream 0 of the seed).
pub fn sample_gale_diagram(cfg: &SamplerConfig) -> Result<GaleDiagram> {
    sample_gale_diagram_stream(cfg, 0)
}

/// As [`sample_gale_diagram`], on an explicit substream. Trial `t` of the
/// estimators uses stream `t`.
pub fn sample_gale_diagram_stream(cfg: &SamplerConfig, stream: u64) -> Result<GaleDiagram> {
    sample_diagram_with_count(cfg, stream).map(|(g, _)| g)
}

fn sample_cone_with_count(cfg: &SamplerConfig, stream: u64) -> Result<(ConeSample, u64)> {
    let dims = cfg.dims;
    let dim = dims.d() as usize + 1;
    let n = dims.n() as usize;
    let mut rng = rng_for(cfg.seed, stream);
    let mut rejected = 0u64;
    while rejected <= cfg.max_rejections {
        let rows = draw_rows(&mut rng, n, dim, cfg.distribution);
        let vectors = VectorConfig::from_f64_rows(dim, &rows)?;
        if !OriginTester::new(&vectors).full_contains_origin() {
            match ConeSample::new(dims, vectors) {
                Ok(c) => return Ok((c, rejected)),
                Err(_) => rejected += 1,
            }
        } else {
            rejected += 1;
        }
    }
    Err(Error::RejectionBudget {
        attempts: rejected,
        expected_acceptance: exactcomb::wendel(dims.d() + 1, dims.n())
            .map(|p| p.to_f64())
            .unwrap_or(f64::NAN),
    })
}

/// Sample a conditioned random cone (stream 0 of the seed).
pub fn sample_cover_efron(cfg: &SamplerConfig) -> Result<ConeSample> {
    sample_cover_efron_stream(cfg, 0)
}

pub fn sample_cover_efron_stream(cfg: &SamplerConfig, stream: u64) -> Result<ConeSample> {
    sample_cone_with_count(cfg, stream).map(|(c, _)| c)
}

/// Number of `j`-dimensional faces of the positive hull: `j`-subsets `J`
/// for which some functional vanishes on `J` and is strictly negative on
/// the rest (strictness encoded scale-free as `<= -1`).
pub fn count_cone_faces(cone: &ConeSample, j: u32) -> Result<BigUint> {
    if j < 1 || j > cone.dims.d() + 1 {
        return Err(Error::Domain(format!(
            "cone face dimension must satisfy 1 <= j <= d+1 (got j={j}, d={})",
            cone.dims.d()
        )));
    }
    count_cone_faces_config(&cone.vectors, j, DEFAULT_ENUMERATION_CAP)
}

/// The same count for a bare vector configuration positively spanning a
/// cone in its ambient dimension.
pub fn count_cone_faces_config(vectors: &VectorConfig, j: u32, cap: u64) -> Result<BigUint> {
    let n = vectors.len();
    let dim = vectors.dim();
    if j as usize > dim {
        return Err(Error::Domain(format!(
            "face dimension {j} exceeds ambient dimension {dim}"
        )));
    }
    let subsets = crate::combi::binomial_u128(n as u64, j as u64);
    if subsets > cap as u128 {
        return Err(Error::EnumerationCap {
            required: subsets.to_string(),
            cap,
        });
    }
    let mut count: u64 = 0;
    let mut in_subset = vec![false; n];
    crate::combi::for_each_combination(n, j as usize, |subset| {
        for &i in subset {
            in_subset[i] = true;
        }
        if cone_face_lp(vectors, &in_subset) {
            count += 1;
        }
        for &i in subset {
            in_subset[i] = false;
        }
    });
    Ok(BigUint::from(count))
}

/// Feasibility of `{u : <u, Z_i> = 0 on J, <u, Z_i> <= -1 off J}`.
fn cone_face_lp(vectors: &VectorConfig, in_subset: &[bool]) -> bool {
    let n = vectors.len();
    let dim = vectors.dim();
    let off: Vec<usize> = (0..n).filter(|&i| !in_subset[i]).collect();
    let nvars = 2 * dim + off.len();
    let mut rows = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![BigRational::zero(); nvars];
        for t in 0..dim {
            row[t] = vectors.vector(i)[t].clone();
            row[dim + t] = -vectors.vector(i)[t].clone();
        }
        if in_subset[i] {
            rhs.push(BigRational::zero());
        } else {
            let slot = off.iter().position(|&x| x == i).unwrap();
            row[2 * dim + slot] = BigRational::one();
            rhs.push(-BigRational::one());
        }
        rows.push(row);
    }
    let sf = StandardForm {
        rows,
        rhs,
        objective: vec![BigRational::zero(); nvars],
    };
    matches!(lp::solve(&sf), LpOutcome::Optimal { .. })
}

fn run_trials<F>(trials: u64, per_trial: F) -> Result<(Vec<f64>, u64)>
where
    F: Fn(u64) -> Result<(f64, u64)> + Sync,
{
    if trials == 0 {
        return Err(Error::Domain("trial count must be positive".into()));
    }
    let results: Vec<(f64, u64)> = (0..trials)
        .into_par_iter()
        .map(&per_trial)
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = results.iter().map(|r| r.0).collect();
    let rejected = results.iter().map(|r| r.1).sum();
    Ok((values, rejected))
}

/// Monte Carlo estimate of the number of `k`-faces of the random polytope,
/// one exact combinatorial count per conditioned diagram.
pub fn estimate_fk(cfg: &SamplerConfig, k: u32, trials: u64) -> Result<MCEstimate> {
    cfg.dims.with_k(k)?;
    let (values, rejected) = run_trials(trials, |t| {
        let (diagram, rej) = sample_diagram_with_count(cfg, t)?;
        let fc = count_faces_capped(&diagram, k, DEFAULT_ENUMERATION_CAP)?;
        let count: u64 = fc.count.try_into().expect("count fits u64 under the cap");
        Ok((count as f64, rej))
    })?;
    Ok(MCEstimate::from_values(&values, cfg.seed, rejected))
}

/// Monte Carlo estimate of the probability that every `(k+1)`-subset spans
/// a face, i.e. that the face count hits `C(N, k+1)`.
pub fn estimate_neighborly_prob(cfg: &SamplerConfig, k: u32, trials: u64) -> Result<MCEstimate> {
    cfg.dims.with_k(k)?;
    let (values, rejected) = run_trials(trials, |t| {
        let (diagram, rej) = sample_diagram_with_count(cfg, t)?;
        let fc = count_faces_capped(&diagram, k, DEFAULT_ENUMERATION_CAP)?;
        Ok((if fc.is_complete_neighborly { 1.0 } else { 0.0 }, rej))
    })?;
    Ok(MCEstimate::from_values(&values, cfg.seed, rejected))
}

/// Monte Carlo estimate of the number of `j`-faces of the conditioned cone.
pub fn estimate_cone_faces(cfg: &SamplerConfig, j: u32, trials: u64) -> Result<MCEstimate> {
    if j < 1 || j > cfg.dims.d() + 1 {
        return Err(Error::Domain(format!(
            "cone face dimension must satisfy 1 <= j <= d+1 (got j={j})"
        )));
    }
    let (values, rejected) = run_trials(trials, |t| {
        let (cone, rej) = sample_cone_with_count(cfg, t)?;
        let count = count_cone_faces(&cone, j)?;
        let count: u64 = count.try_into().expect("count fits u64 under the cap");
        Ok((count as f64, rej))
    })?;
    Ok(MCEstimate::from_values(&values, cfg.seed, rejected))
}

/// Unconditioned frequency of `o` missing the hull of `points` draws in
/// dimension `dim`: the Monte Carlo side of the Wendel probability.
pub fn estimate_wendel_prob(
    dim: u32,
    points: u32,
    distribution: SampleDistribution,
    seed: u64,
    trials: u64,
) -> Result<MCEstimate> {
    if dim < 1 || points < 1 {
        return Err(Error::Domain("need dim >= 1 and points >= 1".into()));
    }
    let (values, rejected) = run_trials(trials, |t| {
        let mut rng = rng_for(seed, t);
        let rows = draw_rows(&mut rng, points as usize, dim as usize, distribution);
        let vectors = VectorConfig::from_f64_rows(dim as usize, &rows)?;
        let outside = !OriginTester::new(&vectors).full_contains_origin();
        Ok((if outside { 1.0 } else { 0.0 }, 0))
    })?;
    Ok(MCEstimate::from_values(&values, seed, rejected))
}

/// Two Monte Carlo routes to the same exact expectation: polytope `k`-faces
/// and cone `(k+1)`-faces.
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub dims: Dims,
    pub exact: BigRational,
    pub exact_f64: f64,
    pub gale: MCEstimate,
    pub cone: MCEstimate,
    pub gale_within_3se: bool,
    pub cone_within_3se: bool,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.gale_within_3se && self.cone_within_3se
    }
}

/// Estimate the expected face numbers in both models and compare each to
/// the exact value at three standard errors.
pub fn verify_duality_identity(dims: Dims, trials: u64, seed: u64) -> Result<DualityReport> {
    let cfg = SamplerConfig::new(dims, SampleDistribution::GaussianIid, seed);
    let gale = estimate_fk(&cfg, dims.k(), trials)?;
    let cone = estimate_cone_faces(&cfg, dims.k() + 1, trials)?;
    let exact = exactcomb::expected_fk(&dims);
    let exact_f64 = ratio::ratio_to_f64(&exact);
    let gale_ok = gale.within(exact_f64, 3.0);
    let cone_ok = cone.within(exact_f64, 3.0);
    Ok(DualityReport {
        dims,
        exact,
        exact_f64,
        gale,
        cone,
        gale_within_3se: gale_ok,
        cone_within_3se: cone_ok,
    })
}

/// One row of a finite-size scaling experiment.
#[derive(Clone, Debug)]
pub struct PhaseRow {
    pub dims: Dims,
    pub exact_ratio: ExactProb,
    pub exact_ratio_f64: f64,
    pub mc_neighborly: Option<MCEstimate>,
    pub note: Option<String>,
}

/// Finite-size scan along a list of dimensions at fixed `(delta, rho)`:
/// `N = round(d/delta)` (clipped up to `d+2` so the triple stays in the
/// model), `k = round(rho*d)` clipped into `[0, d-1]`. The exact ratio is
/// always computed; the Monte Carlo neighborliness column is filled only
/// where enumeration is feasible.
pub fn phase_experiment(
    delta: f64,
    rho: f64,
    d_list: &[u32],
    trials: u64,
    seed: u64,
    distribution: SampleDistribution,
) -> Result<Vec<PhaseRow>> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta {delta} outside (0, 1)")));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho {rho} outside [0, 1]")));
    }
    d_list
        .iter()
        .enumerate()
        .map(|(row_idx, &d)| {
            if d < 1 {
                return Err(Error::Domain("d must be positive".into()));
            }
            let dims = phase_dims(delta, rho, d)?;
            let exact_ratio = exactcomb::expected_fk_ratio(&dims);
            let exact_ratio_f64 = exact_ratio.to_f64();
            let subsets =
                crate::combi::binomial_u128(dims.n() as u64, (dims.k() + 1) as u64);
            let (mc, note) = if trials == 0 {
                (None, Some("exact only".to_string()))
            } else if subsets > DEFAULT_ENUMERATION_CAP as u128 {
                (
                    None,
                    Some(format!(
                        "enumeration infeasible: C(N, k+1) = {subsets} exceeds cap {}",
                        DEFAULT_ENUMERATION_CAP
                    )),
                )
            } else {
                let row_seed = mix_seed(seed, row_idx as u64);
                let cfg = SamplerConfig::new(dims, distribution, row_seed);
                (
                    Some(estimate_neighborly_prob(&cfg, dims.k(), trials)?),
                    None,
                )
            };
            Ok(PhaseRow {
                dims,
                exact_ratio,
                exact_ratio_f64,
                mc_neighborly: mc,
                note,
            })
        })
        .collect()
}

/// Dims for a phase-experiment row. `N` rounds to `d/delta` but never
/// below `d+2`, keeping the triple inside the model's hypotheses.
pub fn phase_dims(delta: f64, rho: f64, d: u32) -> Result<Dims> {
    let n = ((d as f64 / delta).round() as u32).max(d + 2);
    let k = (rho * d as f64).round().clamp(0.0, (d - 1) as f64) as u32;
    Dims::new(d, n, k)
}

fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
