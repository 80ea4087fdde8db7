//! Exact geometric predicates on rational vector configurations: linear
//! general position and origin-in-convex-hull, the latter answered by exact
//! LP feasibility with a verified certificate either way.
//!
//! A floating-point simplex pre-pass guesses the answer first; its guess is
//! only ever accepted after an exact-arithmetic verification, with the exact
//! simplex as fallback, so results carry no tolerance anywhere.

use crate::combi::for_each_combination;
use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{self, FloatPhase1, LpOutcome, StandardForm};
use crate::ratio;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An ordered list of `N` nonzero rational vectors in a common dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorConfig {
    dim: usize,
    vectors: Vec<Vec<BigRational>>,
}

impl VectorConfig {
    pub fn new(dim: usize, vectors: Vec<Vec<BigRational>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("vector dimension must be positive".into()));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Domain(format!(
                    "vector {i} has length {}, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().all(Zero::is_zero) {
                return Err(Error::Domain(format!("vector {i} is zero")));
            }
        }
        Ok(VectorConfig { dim, vectors })
    }

    /// Bit-exact rationalization of floating-point coordinate rows.
    pub fn from_f64_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let vectors = rows
            .iter()
            .map(|r| r.iter().map(|&x| ratio::rational_from_f64(x)).collect())
            .collect::<Result<Vec<Vec<BigRational>>>>()?;
        VectorConfig::new(dim, vectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<BigRational>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[BigRational] {
        &self.vectors[i]
    }

    /// The subconfiguration picked out by `indices` (kept in order).
    pub fn restrict(&self, indices: &[usize]) -> VectorConfig {
        VectorConfig {
            dim: self.dim,
            vectors: indices.iter().map(|&i| self.vectors[i].clone()).collect(),
        }
    }
}

/// Outcome of the origin-membership LP, always with an exact certificate.
#[derive(Clone, Debug)]
pub enum LpFeasibility {
    /// `weights >= 0`, summing to one, with `sum_i weights[i] * x_i = o`.
    Feasible { weights: Vec<BigRational> },
    /// A functional with `<separator, x_i> > 0` for every input vector.
    Infeasible { separator: Vec<BigRational> },
}

impl LpFeasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpFeasibility::Feasible { .. })
    }
}

pub(crate) struct ScaledColumns {
    pub cols: Vec<Vec<BigInt>>,
    /// positive per-vector factors with `cols[i] = scales[i] * x_i`.
    pub scales: Vec<BigRational>,
}

pub(crate) fn scaled_integer_columns(cfg: &VectorConfig) -> ScaledColumns {
    let mut cols = Vec::with_capacity(cfg.len());
    let mut scales = Vec::with_capacity(cfg.len());
    for v in &cfg.vectors {
        let mut l = BigInt::one();
        for x in v {
            l = l.lcm(x.denom());
        }
        let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        if g.is_zero() || g.is_one() {
            cols.push(ints);
            scales.push(BigRational::from(l));
        } else {
            cols.push(ints.iter().map(|x| x / &g).collect());
            scales.push(BigRational::new(l, g));
        }
    }
    ScaledColumns { cols, scales }
}

pub(crate) enum OriginDecision {
    /// weights for the *scaled* columns: nonnegative, summing to one.
    Inside { weights: Vec<BigRational> },
    /// exact functional strictly positive on every scaled column.
    Outside { separator: Vec<BigRational> },
}

impl OriginDecision {
    pub(crate) fn is_inside(&self) -> bool {
        matches!(self, OriginDecision::Inside { .. })
    }
}

/// Decide whether the origin lies in the convex hull of integer columns.
/// Float pre-pass first, exact verification always, exact simplex fallback.
pub(crate) fn decide_origin(cols: &[&Vec<BigInt>], dim: usize) -> OriginDecision {
    if let Some(d) = prepass(cols, dim) {
        return d;
    }
    exact_decide(cols, dim)
}

fn prepass(cols: &[&Vec<BigInt>], dim: usize) -> Option<OriginDecision> {
    let n = cols.len();
    // per-column normalization to unit magnitude, so the float tableau is
    // balanced against the ones row (positive scaling is harmless)
    let fcols: Vec<Vec<f64>> = cols
        .iter()
        .map(|c| {
            let bits = c.iter().map(|x| x.bits()).max().unwrap_or(0);
            let shift = bits.saturating_sub(52);
            let down = 2f64.powi(-(bits.min(52) as i32));
            c.iter()
                .map(|x| (x >> shift).to_f64().unwrap_or(0.0) * down)
                .collect()
        })
        .collect();
    let mut rows: Vec<Vec<f64>> = (0..dim)
        .map(|j| (0..n).map(|i| fcols[i][j]).collect())
        .collect();
    rows.push(vec![1.0; n]);
    let mut rhs = vec![0.0; dim];
    rhs.push(1.0);

    match lp::float_phase1(&rows, &rhs) {
        FloatPhase1::Feasible { basis } => {
            let real: Vec<usize> = basis.iter().copied().filter(|&b| b < n).collect();
            if real.len() != dim + 1 {
                return None;
            }
            let weights = solve_weights(cols, dim, &real)?;
            Some(OriginDecision::Inside { weights })
        }
        FloatPhase1::Infeasible { dual } => {
            // integerize the float dual by a common power-of-two scale
            // (positive, so strict signs are preserved), then verify with
            // pure integer dot products
            let rats: Vec<BigRational> = dual[..dim]
                .iter()
                .map(|&y| ratio::rational_from_f64(-y).ok())
                .collect::<Option<_>>()?;
            let sep_int = ratio::primitive_integer_vector(&rats);
            for c in cols {
                let dot: BigInt = sep_int.iter().zip(c.iter()).map(|(a, b)| a * b).sum();
                if !dot.is_positive() {
                    return None;
                }
            }
            let separator = sep_int.into_iter().map(BigRational::from).collect();
            Some(OriginDecision::Outside { separator })
        }
        FloatPhase1::Fail => None,
    }
}

/// Exact solve of the square basis system by fraction-free elimination;
/// `None` when singular or when any weight comes out negative. The system
/// is `dim+1` equations (coordinates plus the ones row) in the basis
/// weights, right-hand side `(0, .., 0, 1)`.
fn solve_weights(cols: &[&Vec<BigInt>], dim: usize, basis: &[usize]) -> Option<Vec<BigRational>> {
    let k = basis.len();
    if k != dim + 1 {
        return None;
    }
    // augmented integer matrix, Bareiss forward elimination
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(k);
    for j in 0..dim {
        let mut row: Vec<BigInt> = basis.iter().map(|&b| cols[b][j].clone()).collect();
        row.push(BigInt::zero());
        a.push(row);
    }
    let mut ones = vec![BigInt::one(); k];
    ones.push(BigInt::one());
    a.push(ones);

    let width = k + 1;
    let mut prev = BigInt::one();
    for col in 0..k {
        let p = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        for r in 0..k {
            if r == col {
                continue;
            }
            for c in 0..width {
                if c == col {
                    continue;
                }
                let num = &a[r][c] * &a[col][col] - &a[r][col] * &a[col][c];
                let (q, rem) = num_integer::Integer::div_rem(&num, &prev);
                debug_assert!(rem.is_zero());
                a[r][c] = q;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[col][col].clone();
    }
    // solution of variable `col` is a[col][k] / a[col][col]
    let mut w = vec![BigRational::zero(); cols.len()];
    for col in 0..k {
        let v = BigRational::new(a[col][k].clone(), a[col][col].clone());
        if v.is_negative() {
            return None;
        }
        w[basis[col]] = v;
    }
    Some(w)
}

fn exact_decide(cols: &[&Vec<BigInt>], dim: usize) -> OriginDecision {
    let n = cols.len();
    let mut rows: Vec<Vec<BigRational>> = (0..dim)
        .map(|j| {
            (0..n)
                .map(|i| BigRational::from(cols[i][j].clone()))
                .collect()
        })
        .collect();
    rows.push(vec![BigRational::one(); n]);
    let mut rhs = vec![BigRational::zero(); dim];
    rhs.push(BigRational::one());
    let sf = StandardForm {
        rows,
        rhs,
        objective: vec![BigRational::zero(); n],
    };
    match lp::solve(&sf) {
        LpOutcome::Optimal { x, .. } => OriginDecision::Inside { weights: x },
        LpOutcome::Infeasible { farkas } => {
            let separator: Vec<BigRational> = farkas[..dim].iter().map(|y| -y.clone()).collect();
            for c in cols {
                assert!(
                    dot_int_rat(c, &separator).is_positive(),
                    "Farkas separator must be strictly positive on every column"
                );
            }
            OriginDecision::Outside { separator }
        }
        LpOutcome::Unbounded => unreachable!("feasibility problem has zero objective"),
    }
}

fn dot_int_rat(ints: &[BigInt], rats: &[BigRational]) -> BigRational {
    ints.iter()
        .zip(rats)
        .map(|(a, b)| BigRational::from(a.clone()) * b)
        .fold(BigRational::zero(), |acc, t| acc + t)
}

fn dot_rat(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(BigRational::zero(), |acc, t| acc + t)
}

/// Exact origin-in-hull test with a verified certificate.
///
/// Feasible means `o` lies in the convex hull; the weights certify it.
/// Infeasible yields a functional strictly positive on every vector.
/// Infeasibility is a result here, not an error.
pub fn contains_origin(cfg: &VectorConfig) -> LpFeasibility {
    assert!(!cfg.is_empty(), "contains_origin needs a nonempty configuration");
    let scaled = scaled_integer_columns(cfg);
    let refs: Vec<&Vec<BigInt>> = scaled.cols.iter().collect();
    match decide_origin(&refs, cfg.dim) {
        OriginDecision::Inside { weights } => {
            // translate weights from scaled columns back to the originals
            let mut w: Vec<BigRational> = weights
                .iter()
                .zip(&scaled.scales)
                .map(|(l, s)| l * s)
                .collect();
            let total = w.iter().fold(BigRational::zero(), |a, b| a + b);
            assert!(total.is_positive());
            for x in w.iter_mut() {
                *x /= &total;
            }
            // exact certificate verification
            let mut sum = BigRational::zero();
            let mut combo = vec![BigRational::zero(); cfg.dim];
            for (wi, v) in w.iter().zip(cfg.vectors()) {
                assert!(!wi.is_negative(), "negative weight in certificate");
                sum += wi;
                for (c, x) in combo.iter_mut().zip(v) {
                    *c += wi * x;
                }
            }
            assert!(sum.is_one(), "weights must sum to one");
            assert!(
                combo.iter().all(Zero::is_zero),
                "weighted combination must hit the origin exactly"
            );
            LpFeasibility::Feasible { weights: w }
        }
        OriginDecision::Outside { separator } => {
            for v in cfg.vectors() {
                assert!(
                    dot_rat(&separator, v).is_positive(),
                    "separator must be strictly positive on every vector"
                );
            }
            LpFeasibility::Infeasible { separator }
        }
    }
}

/// Interior containment for general-position inputs, where membership and
/// interior membership coincide. Degenerate inputs are refused.
pub fn contains_origin_interior(cfg: &VectorConfig) -> Result<bool> {
    if !is_general_position(cfg) {
        return Err(Error::Degenerate(
            "configuration is not in linearly general position".into(),
        ));
    }
    Ok(contains_origin(cfg).is_feasible())
}

const EXHAUSTIVE_LIMIT: usize = 16;
const AUDIT_SUBSETS: usize = 200;

/// Linear general position: every subset of size `min(dim, N)` is linearly
/// independent. Exhaustive for `N <= 16` (and always for dimension 1);
/// above that a seeded audit of 200 random subsets is run, which is an
/// audit rather than a proof.
pub fn is_general_position(cfg: &VectorConfig) -> bool {
    let n = cfg.len();
    let m = cfg.dim;
    if n == 0 {
        return true;
    }
    let scaled = scaled_integer_columns(cfg);
    let cols = &scaled.cols;
    if m == 1 {
        return cols.iter().all(|c| !c[0].is_zero());
    }
    if n <= m {
        let rows: Vec<Vec<BigInt>> = cols.clone();
        return linalg::rank_int(&rows) == n;
    }
    let subset_nonsingular = |subset: &[usize]| -> bool {
        let mat: Vec<Vec<BigInt>> = (0..m)
            .map(|j| subset.iter().map(|&i| cols[i][j].clone()).collect())
            .collect();
        !linalg::det_int(&mat).is_zero()
    };
    if n <= EXHAUSTIVE_LIMIT {
        let mut ok = true;
        for_each_combination(n, m, |s| {
            if ok && !subset_nonsingular(s) {
                ok = false;
            }
        });
        ok
    } else {
        // seeded audit with a fixed internal stream
        let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ (n as u64) << 32 ^ m as u64;
        let mut next = move || {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        };
        for _ in 0..AUDIT_SUBSETS {
            let mut idx: Vec<usize> = (0..n).collect();
            for i in 0..m {
                let j = i + (next() % (n - i) as u64) as usize;
                idx.swap(i, j);
            }
            let mut subset: Vec<usize> = idx[..m].to_vec();
            subset.sort_unstable();
            if !subset_nonsingular(&subset) {
                return false;
            }
        }
        true
    }
}

/// Repeated subset membership queries against one fixed configuration.
///
/// Dimensions 1 and 2 use direct exact predicates (sign scan, exact angular
/// gaps); higher dimensions fall through to the certified LP decision.
pub struct OriginTester {
    dim: usize,
    cols: Vec<Vec<BigInt>>,
    signs: Vec<i8>,
    angular_rank: Vec<usize>,
}

impl OriginTester {
    pub fn new(cfg: &VectorConfig) -> Self {
        let scaled = scaled_integer_columns(cfg);
        let cols = scaled.cols;
        let dim = cfg.dim();
        let signs = if dim == 1 {
            cols.iter()
                .map(|c| if c[0].is_positive() { 1 } else { -1 })
                .collect()
        } else {
            Vec::new()
        };
        let angular_rank = if dim == 2 {
            let mut order: Vec<usize> = (0..cols.len()).collect();
            order.sort_by(|&a, &b| cmp_angle(&cols[a], &cols[b]));
            let mut rank = vec![0usize; cols.len()];
            for (pos, &i) in order.iter().enumerate() {
                rank[i] = pos;
            }
            rank
        } else {
            Vec::new()
        };
        OriginTester {
            dim,
            cols,
            signs,
            angular_rank,
        }
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    /// Does the convex hull of the chosen subset contain the origin?
    pub fn subset_contains_origin(&self, subset: &[usize]) -> bool {
        match self.dim {
            1 => {
                let mut pos = false;
                let mut neg = false;
                for &i in subset {
                    if self.signs[i] > 0 {
                        pos = true;
                    } else {
                        neg = true;
                    }
                    if pos && neg {
                        return true;
                    }
                }
                false
            }
            2 => self.planar_subset_contains(subset),
            _ => {
                let refs: Vec<&Vec<BigInt>> = subset.iter().map(|&i| &self.cols[i]).collect();
                if refs.is_empty() {
                    return false;
                }
                decide_origin(&refs, self.dim).is_inside()
            }
        }
    }

    pub fn full_contains_origin(&self) -> bool {
        let all: Vec<usize> = (0..self.cols.len()).collect();
        self.subset_contains_origin(&all)
    }

    /// Planar criterion: sort the subset by exact angle, collapse repeated
    /// rays, and demand that every cyclic gap is at most pi, i.e. every
    /// consecutive cross product is nonnegative.
    fn planar_subset_contains(&self, subset: &[usize]) -> bool {
        if subset.is_empty() {
            return false;
        }
        let mut s: Vec<usize> = subset.to_vec();
        s.sort_by_key(|&i| self.angular_rank[i]);
        // collapse same-direction repeats
        let mut reps: Vec<usize> = Vec::with_capacity(s.len());
        for &i in &s {
            if let Some(&last) = reps.last() {
                if cmp_angle(&self.cols[last], &self.cols[i]) == std::cmp::Ordering::Equal {
                    continue;
                }
            }
            reps.push(i);
        }
        if reps.len() == 1 {
            return false;
        }
        for w in 0..reps.len() {
            let a = &self.cols[reps[w]];
            let b = &self.cols[reps[(w + 1) % reps.len()]];
            if cross2(a, b).is_negative() {
                return false;
            }
        }
        true
    }
}

fn cross2(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Exact angular comparison of nonzero planar integer vectors, angles in
/// `[0, 2pi)` measured from the positive x-axis. Equal means same ray.
fn cmp_angle(a: &[BigInt], b: &[BigInt]) -> std::cmp::Ordering {
    let half = |v: &[BigInt]| -> u8 {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    half(a)
        .cmp(&half(b))
        .then_with(|| cross2(b, a).cmp(&BigInt::zero()))
}
