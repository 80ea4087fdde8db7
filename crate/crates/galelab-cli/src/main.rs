//! Command-line front end: exact computations, seeded simulations, and
//! threshold/phase-diagram tabulations.
//!
//! Single results are emitted as one JSON record per run; grids as CSV.
//! Exit codes: 0 success, 1 verification failure (an oracle mismatch or a
//! bound violated beyond three standard errors), 2 usage or domain errors.

use clap::{Args, Parser, Subcommand};
use galelab::asymptotics::{self};
use galelab::error::Error;
use galelab::exactcomb::{self, Dims};
use galelab::galecore;
use galelab::oracle;
use galelab::ratio::{decimal_string, ratio_to_f64};
use galelab::simulate::{self, MCEstimate, SampleDistribution, SamplerConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "galelab",
    version,
    about = "Random Gale diagrams: exact face-number combinatorics, \
             neighborliness thresholds, seeded Monte Carlo"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Wendel probability, optionally cross-checked by sampling
    Wendel(WendelArgs),
    /// Exact expected face numbers, ratio, and the Boole lower bound
    Efk(EfkArgs),
    /// Strong or weak neighborliness threshold at a given delta
    Threshold(ThresholdArgs),
    /// Seeded Monte Carlo over random diagrams or random cones
    Simulate(SimulateArgs),
    /// CSV grid of exact face-number ratios over (delta, rho)
    PhaseDiagram(PhaseDiagramArgs),
    /// Cross-validate the Gale face criterion against the hull oracle
    Roundtrip(RoundtripArgs),
}

#[derive(Args)]
struct WendelArgs {
    /// dimension r
    #[arg(long = "r")]
    r: u32,
    /// number of vectors M
    #[arg(long = "M")]
    m_points: u32,
    /// also Monte Carlo the probability: --mc TRIALS SEED
    #[arg(long = "mc", num_args = 2, value_names = ["TRIALS", "SEED"])]
    mc: Option<Vec<u64>>,
}

#[derive(Args)]
struct EfkArgs {
    #[arg(long = "d")]
    d: u32,
    #[arg(long = "N")]
    n: u32,
    #[arg(long = "k")]
    k: u32,
    /// include the normalized ratio E f_k / C(N, k+1)
    #[arg(long)]
    ratio: bool,
    /// include the Boole neighborliness lower bound
    #[arg(long)]
    bound: bool,
}

#[derive(Args)]
struct ThresholdArgs {
    /// delta as a decimal string; parsed exactly for the weak threshold
    #[arg(long)]
    delta: String,
    /// strong | weak
    #[arg(long)]
    which: String,
    /// residual tolerance for the strong-threshold bisection
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args)]
struct SimulateArgs {
    /// gale | cone
    model: String,
    #[arg(long = "d")]
    d: u32,
    #[arg(long = "N")]
    n: u32,
    #[arg(long = "k")]
    k: u32,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// estimate the probability of complete neighborliness instead of the
    /// mean face count (gale model only)
    #[arg(long)]
    neighborly: bool,
    /// gaussian-iid | uniform-sphere
    #[arg(long, default_value = "gaussian-iid")]
    dist: String,
}

#[derive(Args)]
struct PhaseDiagramArgs {
    /// comma list (0.6,0.75,0.9) or range start:end:count
    #[arg(long = "delta-grid")]
    delta_grid: String,
    #[arg(long = "rho-grid")]
    rho_grid: String,
    #[arg(long = "d")]
    d: u32,
    /// force the exact rational path even at very large d
    #[arg(long = "exact-only")]
    exact_only: bool,
    /// output path, or - for stdout
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct RoundtripArgs {
    #[arg(long = "d")]
    d: u32,
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("GALELAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            // performance-only: results are invariant in the worker count
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = match cli.command {
        Command::Wendel(a) => cmd_wendel(a),
        Command::Efk(a) => cmd_efk(a),
        Command::Threshold(a) => cmd_threshold(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::PhaseDiagram(a) => return cmd_phase_diagram(a),
        Command::Roundtrip(a) => cmd_roundtrip(a),
    };
    match outcome {
        Ok(record) => {
            let code = u8::from(!record.verified);
            print_record(&record, started);
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

struct Record {
    command: &'static str,
    params: Value,
    results: Value,
    seed: Option<u64>,
    trials: Option<u64>,
    /// false when a self-check inside the run failed (exit code 1)
    verified: bool,
}

fn print_record(record: &Record, started: Instant) {
    let out = json!({
        "command": record.command,
        "params": record.params,
        "results": record.results,
        "seed": record.seed,
        "trials": record.trials,
        "version": env!("CARGO_PKG_VERSION"),
        "wallclock_ms": started.elapsed().as_millis() as u64,
    });
    println!("{out}");
}

fn rat_json(q: &BigRational) -> Value {
    json!({
        "num": q.numer().to_string(),
        "den": q.denom().to_string(),
        "decimal": decimal_string(q, 15),
    })
}

fn est_json(est: &MCEstimate) -> Value {
    json!({
        "mean": est.mean,
        "stderr": est.stderr,
        "stderr_defined": est.stderr_defined,
        "ci95": [est.ci95.0, est.ci95.1],
        "trials": est.trials,
        "rejected": est.rejected,
    })
}

type CmdResult = Result<Record, Error>;

fn cmd_wendel(a: WendelArgs) -> CmdResult {
    let exact = exactcomb::wendel(a.r, a.m_points)?;
    let mut results = json!({ "wendel": rat_json(exact.value()) });
    let mut verified = true;
    let mut seed = None;
    let mut trials = None;
    if let Some(mc) = &a.mc {
        let (t, s) = (mc[0], mc[1]);
        let est =
            simulate::estimate_wendel_prob(a.r, a.m_points, SampleDistribution::GaussianIid, s, t)?;
        let within = est.within(exact.to_f64(), 3.0);
        results["mc"] = est_json(&est);
        results["mc_within_3se"] = json!(within);
        verified = within;
        seed = Some(s);
        trials = Some(t);
    }
    Ok(Record {
        command: "wendel",
        params: json!({ "r": a.r, "M": a.m_points }),
        results,
        seed,
        trials,
        verified,
    })
}

fn cmd_efk(a: EfkArgs) -> CmdResult {
    let dims = Dims::new(a.d, a.n, a.k)?;
    let efk = exactcomb::expected_fk(&dims);
    let mut results = json!({
        "expected_fk": rat_json(&efk),
        "cap": exactcomb::binomial(a.n as u64, (a.k + 1) as i64).to_string(),
    });
    if a.ratio {
        results["ratio"] = rat_json(exactcomb::expected_fk_ratio(&dims).value());
    }
    if a.bound {
        results["neighborly_prob_lower_bound"] =
            rat_json(exactcomb::neighborly_prob_lower_bound(&dims).value());
    }
    Ok(Record {
        command: "efk",
        params: json!({ "d": a.d, "N": a.n, "k": a.k, "ratio": a.ratio, "bound": a.bound }),
        results,
        seed: None,
        trials: None,
        verified: true,
    })
}

fn parse_decimal_rational(s: &str) -> Result<BigRational, Error> {
    let t = s.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(b) => (-1, b),
        None => (1, t),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Domain(format!("cannot parse {s:?} as a decimal")));
    }
    let digits = format!("{int_part}{frac_part}");
    let num = BigInt::from_str(&digits)
        .map_err(|_| Error::Domain(format!("cannot parse {s:?} as a decimal")))?;
    let den = BigInt::from(10).pow(frac_part.len() as u32);
    Ok(BigRational::new(num * sign, den))
}

fn cmd_threshold(a: ThresholdArgs) -> CmdResult {
    let results = match a.which.as_str() {
        "weak" => {
            let delta_q = parse_decimal_rational(&a.delta)?;
            let rho_q = asymptotics::rho_weak_exact(&delta_q)?;
            json!({
                "rho_weak": rat_json(&rho_q),
                "rho_weak_f64": ratio_to_f64(&rho_q),
            })
        }
        "strong" => {
            let delta_f = a
                .delta
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("cannot parse delta {:?}", a.delta)))?;
            let rho = asymptotics::rho_strong(delta_f, a.tol)?;
            let g = asymptotics::g_exponent(&asymptotics::AsymptoticParams::new(delta_f, rho)?);
            json!({
                "rho_strong": rho,
                "residual": g,
                "tol": a.tol,
            })
        }
        other => {
            return Err(Error::Domain(format!(
                "unknown threshold kind {other:?} (expected strong or weak)"
            )))
        }
    };
    Ok(Record {
        command: "threshold",
        params: json!({ "delta": a.delta, "which": a.which, "tol": a.tol }),
        results,
        seed: None,
        trials: None,
        verified: true,
    })
}

fn cmd_simulate(a: SimulateArgs) -> CmdResult {
    let dims = Dims::new(a.d, a.n, a.k)?;
    let dist = SampleDistribution::from_str(&a.dist)?;
    let cfg = SamplerConfig::new(dims, dist, a.seed);
    let exact = exactcomb::expected_fk(&dims);
    let exact_f64 = ratio_to_f64(&exact);
    let (results, verified) = match (a.model.as_str(), a.neighborly) {
        ("gale", false) => {
            let est = simulate::estimate_fk(&cfg, a.k, a.trials)?;
            let within = est.within(exact_f64, 3.0);
            (
                json!({
                    "estimate": est_json(&est),
                    "expected_fk": rat_json(&exact),
                    "within_3se": within,
                }),
                within,
            )
        }
        ("gale", true) => {
            let est = simulate::estimate_neighborly_prob(&cfg, a.k, a.trials)?;
            let bound = exactcomb::neighborly_prob_lower_bound(&dims);
            let respected = est.mean >= bound.to_f64() - 3.0 * est.stderr;
            (
                json!({
                    "estimate": est_json(&est),
                    "neighborly_prob_lower_bound": rat_json(bound.value()),
                    "bound_respected": respected,
                }),
                respected,
            )
        }
        ("cone", false) => {
            let est = simulate::estimate_cone_faces(&cfg, a.k + 1, a.trials)?;
            let within = est.within(exact_f64, 3.0);
            (
                json!({
                    "estimate": est_json(&est),
                    "expected_fk": rat_json(&exact),
                    "cone_face_dim": a.k + 1,
                    "within_3se": within,
                }),
                within,
            )
        }
        ("cone", true) => {
            return Err(Error::Domain(
                "--neighborly applies to the gale model only".into(),
            ))
        }
        (other, _) => {
            return Err(Error::Domain(format!(
                "unknown model {other:?} (expected gale or cone)"
            )))
        }
    };
    Ok(Record {
        command: "simulate",
        params: json!({
            "model": a.model, "d": a.d, "N": a.n, "k": a.k,
            "neighborly": a.neighborly, "dist": a.dist,
        }),
        results,
        seed: Some(a.seed),
        trials: Some(a.trials),
        verified,
    })
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Error> {
    let parse_one = |s: &str| -> Result<f64, Error> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Domain(format!("cannot parse grid value {s:?}")))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Domain(format!(
                "range grid must be start:end:count, got {text:?}"
            )));
        }
        let (start, end) = (parse_one(parts[0])?, parse_one(parts[1])?);
        let count: usize = parts[2]
            .parse()
            .map_err(|_| Error::Domain(format!("bad grid count {:?}", parts[2])))?;
        if count < 1 {
            return Err(Error::Domain("grid count must be at least 1".into()));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        Ok((0..count)
            .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
            .collect())
    } else {
        text.split(',').map(parse_one).collect()
    }
}

/// Above this dimension the default path switches to the log-domain
/// approximation; `--exact-only` overrides.
const EXACT_PATH_MAX_D: u32 = 2000;

fn cmd_phase_diagram(a: PhaseDiagramArgs) -> ExitCode {
    match run_phase_diagram(&a) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run_phase_diagram(a: &PhaseDiagramArgs) -> Result<(), Error> {
    let deltas = parse_grid(&a.delta_grid)?;
    let rhos = parse_grid(&a.rho_grid)?;
    let exact = a.exact_only || a.d <= EXACT_PATH_MAX_D;

    let sink: Box<dyn Write> = if a.out == "-" {
        Box::new(std::io::stdout().lock())
    } else {
        Box::new(
            std::fs::File::create(&a.out)
                .map_err(|e| Error::Domain(format!("cannot create {}: {e}", a.out)))?,
        )
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["delta", "rho", "d", "N", "k", "ratio_num", "ratio_den", "ratio_f64"])
        .map_err(io_err)?;
    for &delta in &deltas {
        for &rho in &rhos {
            let dims = simulate::phase_dims(delta, rho, a.d)?;
            let (num, den, f) = if exact {
                let r = exactcomb::expected_fk_ratio(&dims);
                (r.numer().to_string(), r.denom().to_string(), r.to_f64())
            } else {
                let f = exactcomb::expected_fk_ratio_f64(&dims);
                // the dyadic rational of the approximation, losslessly
                let q = galelab::ratio::rational_from_f64(f)?;
                (q.numer().to_string(), q.denom().to_string(), f)
            };
            w.write_record([
                format!("{delta}"),
                format!("{rho}"),
                dims.d().to_string(),
                dims.n().to_string(),
                dims.k().to_string(),
                num,
                den,
                format!("{f}"),
            ])
            .map_err(io_err)?;
        }
    }
    w.flush()
        .map_err(|e| Error::Domain(format!("csv flush failed: {e}")))?;
    Ok(())
}

fn io_err(e: csv::Error) -> Error {
    Error::Domain(format!("csv output failed: {e}"))
}

/// Cap on supporting-hyperplane LP evaluations per roundtrip trial (the
/// sum of C(N, k+1) over all k), well below the raw enumeration cap since
/// each subset costs two exact LPs here.
const ROUNDTRIP_SUBSET_CAP: u128 = 10_000;

fn cmd_roundtrip(a: RoundtripArgs) -> CmdResult {
    // faces are checked for every k, so the dims carry k = 0
    let dims = Dims::new(a.d, a.n, 0)?;
    let total_subsets: u128 = (0..a.d)
        .map(|k| {
            let mut c: u128 = 1;
            for i in 0..(k + 1) as u128 {
                c = c * (a.n as u128 - i) / (i + 1);
            }
            c
        })
        .sum();
    if total_subsets > ROUNDTRIP_SUBSET_CAP {
        return Err(Error::EnumerationCap {
            required: total_subsets.to_string(),
            cap: ROUNDTRIP_SUBSET_CAP as u64,
        });
    }
    let cfg = SamplerConfig::new(dims, SampleDistribution::GaussianIid, a.seed);
    let mut passes = 0u64;
    let mut mismatch: Option<Value> = None;
    'trials: for t in 0..a.trials {
        let diagram = simulate::sample_gale_diagram_stream(&cfg, t)?;
        let points = galecore::realize(&diagram)?;
        for k in 0..a.d {
            let report = oracle::hull_faces(&points, k)?;
            let mut diagram_faces = std::collections::BTreeSet::new();
            let mut err: Option<Error> = None;
            for_each_subset(a.n as usize, (k + 1) as usize, |s| {
                if err.is_some() {
                    return;
                }
                match galecore::is_face(&diagram, s) {
                    Ok(true) => {
                        diagram_faces.insert(s.to_vec());
                    }
                    Ok(false) => {}
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            if report.faces != diagram_faces {
                let differing: Vec<Vec<usize>> = report
                    .faces
                    .symmetric_difference(&diagram_faces)
                    .cloned()
                    .collect();
                mismatch = Some(json!({
                    "trial": t,
                    "k": k,
                    "diagram": config_json(diagram.vectors().vectors()),
                    "realization": config_json(points.points()),
                    "differing_subsets": differing,
                }));
                break 'trials;
            }
        }
        passes += 1;
    }
    let verified = mismatch.is_none();
    let results = json!({
        "passes": passes,
        "trials": a.trials,
        "mismatch": mismatch,
    });
    Ok(Record {
        command: "roundtrip",
        params: json!({ "d": a.d, "N": a.n }),
        results,
        seed: Some(a.seed),
        trials: Some(a.trials),
        verified,
    })
}

fn config_json(vectors: &[Vec<BigRational>]) -> Value {
    Value::Array(
        vectors
            .iter()
            .map(|v| Value::Array(v.iter().map(rat_json).collect()))
            .collect(),
    )
}

/// Lexicographic subset enumeration, mirroring the library's order.
fn for_each_subset<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    if k == 0 {
        f(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
