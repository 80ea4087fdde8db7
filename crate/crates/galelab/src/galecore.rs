//! Gale transforms in both directions, positive dependences, combinatorial
//! face counting through the Gale criterion, and neighborliness predicates.
//!
//! The face criterion: for a diagram `(X_1..X_N)` in dimension `m = N-d-1`,
//! an index set `I` with `|I| = k+1` spans a `k`-face of the realized
//! polytope exactly when the origin lies in the convex hull of the
//! complementary vectors. Everything below reduces to that one exact
//! predicate.

use crate::combi::{binomial_u128, for_each_combination};
use crate::error::{Error, Result};
use crate::exactcomb::Dims;
use crate::geomcore::{
    contains_origin, is_general_position, scaled_integer_columns, OriginTester, VectorConfig,
};
use crate::linalg;
use crate::lp::{self, LpOutcome, StandardForm};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Subset enumeration guard for face counting.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// A random-Gale-diagram realization: `N` vectors in dimension `m`, in
/// general position (audited), whose convex hull contains the origin.
#[derive(Clone, Debug)]
pub struct GaleDiagram {
    dims: Dims,
    vectors: VectorConfig,
}

impl GaleDiagram {
    pub fn new(dims: Dims, vectors: VectorConfig) -> Result<Self> {
        if vectors.dim() != dims.m() as usize {
            return Err(Error::Domain(format!(
                "diagram vectors live in dimension {}, dims demand m={}",
                vectors.dim(),
                dims.m()
            )));
        }
        if vectors.len() != dims.n() as usize {
            return Err(Error::Domain(format!(
                "diagram has {} vectors, dims demand N={}",
                vectors.len(),
                dims.n()
            )));
        }
        if !is_general_position(&vectors) {
            return Err(Error::Degenerate(
                "diagram vectors are not in linearly general position".into(),
            ));
        }
        if !contains_origin(&vectors).is_feasible() {
            return Err(Error::Domain(
                "origin is not in the convex hull of the diagram vectors".into(),
            ));
        }
        Ok(GaleDiagram { dims, vectors })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn vectors(&self) -> &VectorConfig {
        &self.vectors
    }
}

/// Strictly positive weights certifying `sum_i lambda_i X_i = o`,
/// normalized to sum to one.
#[derive(Clone, Debug)]
pub struct DependenceWeights {
    lambda: Vec<BigRational>,
}

impl DependenceWeights {
    pub fn lambda(&self) -> &[BigRational] {
        &self.lambda
    }
}

/// `N` points in dimension `d`, affinely spanning.
#[derive(Clone, Debug)]
pub struct PointConfiguration {
    dims: Dims,
    points: Vec<Vec<BigRational>>,
}

impl PointConfiguration {
    pub fn new(dims: Dims, points: Vec<Vec<BigRational>>) -> Result<Self> {
        let d = dims.d() as usize;
        if points.len() != dims.n() as usize {
            return Err(Error::Domain(format!(
                "expected N={} points, got {}",
                dims.n(),
                points.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::Domain(format!(
                    "point {i} has dimension {}, expected {d}",
                    p.len()
                )));
            }
        }
        let lifted = lifted_rows(&points, d);
        if linalg::rank_rational(&lifted) != d + 1 {
            return Err(Error::RankDeficient(format!(
                "points do not affinely span dimension {d}"
            )));
        }
        Ok(PointConfiguration { dims, points })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn points(&self) -> &[Vec<BigRational>] {
        &self.points
    }
}

/// The number of `k`-faces, with the cap `C(N, k+1)` and whether it is hit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceCount {
    pub dims: Dims,
    pub count: BigUint,
    pub is_complete_neighborly: bool,
}

/// Coordinate rows plus the all-ones row, as rationals.
fn lifted_rows(points: &[Vec<BigRational>], d: usize) -> Vec<Vec<BigRational>> {
    let n = points.len();
    let mut rows: Vec<Vec<BigRational>> = (0..d)
        .map(|j| (0..n).map(|i| points[i][j].clone()).collect())
        .collect();
    rows.push(vec![BigRational::one(); n]);
    rows
}

fn integer_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| crate::ratio::primitive_integer_vector(r))
        .collect()
}

/// Gale transform: a basis of the affine dependences of the points, read
/// off column-wise as `N` vectors in dimension `N - d - 1`. Output vectors
/// always sum to the origin exactly.
pub fn gale_transform(pts: &PointConfiguration) -> Result<VectorConfig> {
    let d = pts.dims.d() as usize;
    let n = pts.dims.n() as usize;
    let m = pts.dims.m() as usize;
    let lifted = integer_rows(&lifted_rows(&pts.points, d));
    let kernel = linalg::kernel_basis_int(&lifted, n);
    if kernel.len() != m {
        return Err(Error::RankDeficient(format!(
            "dependence space has dimension {}, expected {m}",
            kernel.len()
        )));
    }
    let vectors: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..m)
                .map(|j| BigRational::from(kernel[j][i].clone()))
                .collect()
        })
        .collect();
    if vectors.iter().any(|v| v.iter().all(Zero::is_zero)) {
        return Err(Error::Degenerate(
            "a transform vector degenerated to zero (a point lies on every \
             affine basis hyperplane)"
                .into(),
        ));
    }
    VectorConfig::new(m, vectors)
}

/// Strictly positive dependence of the diagram vectors, found by the LP
/// that maximizes the minimum weight subject to the weights summing to one.
pub fn positive_dependence(diagram: &GaleDiagram) -> Result<DependenceWeights> {
    let cfg = &diagram.vectors;
    let lambda = max_min_dependence(cfg.vectors(), cfg.dim())?;
    Ok(DependenceWeights { lambda })
}

/// Max-min LP over arbitrary rational columns. Variables are the weights,
/// the common floor `t`, and one slack per weight; minimize `-t`.
fn max_min_dependence(columns: &[Vec<BigRational>], dim: usize) -> Result<Vec<BigRational>> {
    let n = columns.len();
    let nvars = 2 * n + 1; // lambda_0..n-1, t, s_0..n-1
    let zero = BigRational::zero;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for j in 0..dim {
        let mut row = vec![zero(); nvars];
        for (i, col) in columns.iter().enumerate() {
            row[i] = col[j].clone();
        }
        rows.push(row);
        rhs.push(zero());
    }
    let mut norm = vec![zero(); nvars];
    for x in norm.iter_mut().take(n) {
        *x = BigRational::one();
    }
    rows.push(norm);
    rhs.push(BigRational::one());
    for i in 0..n {
        let mut row = vec![zero(); nvars];
        row[i] = BigRational::one();
        row[n] = -BigRational::one();
        row[n + 1 + i] = -BigRational::one();
        rows.push(row);
        rhs.push(zero());
    }
    let mut objective = vec![zero(); nvars];
    objective[n] = -BigRational::one();

    match lp::solve(&StandardForm {
        rows,
        rhs,
        objective,
    }) {
        LpOutcome::Optimal { x, value } => {
            if !value.is_negative() {
                return Err(Error::Degenerate(
                    "no strictly positive dependence exists (minimum weight is zero)".into(),
                ));
            }
            let lambda = x[..n].to_vec();
            // exact re-verification of the certificate
            let mut sum = BigRational::zero();
            let mut combo = vec![BigRational::zero(); dim];
            for (l, col) in lambda.iter().zip(columns) {
                assert!(l.is_positive(), "dependence weight must be positive");
                sum += l;
                for (c, x) in combo.iter_mut().zip(col) {
                    *c += l * x;
                }
            }
            assert!(sum.is_one());
            assert!(combo.iter().all(Zero::is_zero));
            Ok(lambda)
        }
        LpOutcome::Infeasible { .. } => Err(Error::Domain(
            "no nonnegative dependence: the diagram invariant fails".into(),
        )),
        LpOutcome::Unbounded => unreachable!("t is bounded above by 1/N"),
    }
}

/// Realize the diagram as a point configuration whose faces obey the Gale
/// criterion exactly.
///
/// Pipeline: positively rescale the diagram by a strictly positive integer
/// dependence (so the scaled vectors sum to the origin), then take a
/// deterministic basis of the null space of the scaled rows plus the
/// all-ones row as the point coordinate rows. Null spaces are computed as
/// saturated integer kernels via unimodular column elimination, which
/// keeps the realized coordinates far smaller than fraction-clearing a
/// reduced row echelon basis would; the realization choice is irrelevant
/// to every face predicate.
pub fn realize(diagram: &GaleDiagram) -> Result<PointConfiguration> {
    let dims = diagram.dims;
    let n = dims.n() as usize;
    let m = dims.m() as usize;
    let d = dims.d() as usize;

    let scaled = scaled_integer_columns(&diagram.vectors);
    // coordinate rows of the scaled diagram
    let x_rows: Vec<Vec<BigInt>> = (0..m)
        .map(|j| (0..n).map(|i| scaled.cols[i][j].clone()).collect())
        .collect();
    let kernel = linalg::kernel_basis_saturated(&x_rows, n);
    if kernel.len() != n - m {
        return Err(Error::Degenerate(format!(
            "dependence lattice has rank {}, expected {}",
            kernel.len(),
            n - m
        )));
    }
    let lambda = positive_integer_combination(&kernel, n)?;

    // scaled diagram rows (lambda_i X_i) plus the ones row
    let mut g: Vec<Vec<BigInt>> = (0..m)
        .map(|j| (0..n).map(|i| &lambda[i] * &scaled.cols[i][j]).collect())
        .collect();
    g.push(vec![BigInt::one(); n]);
    debug_assert!(g[..m]
        .iter()
        .all(|row| row.iter().sum::<BigInt>().is_zero()));

    let basis = linalg::kernel_basis_saturated(&g, n);
    if basis.len() != d {
        return Err(Error::Degenerate(format!(
            "realization null space has dimension {}, expected {d}",
            basis.len()
        )));
    }
    let points: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..d)
                .map(|j| BigRational::from(basis[j][i].clone()))
                .collect()
        })
        .collect();
    PointConfiguration::new(dims, points)
}

/// A strictly positive integer vector in the span of a dependence basis.
/// Found by an exact max-min LP over the basis coefficients, then rounded
/// back onto the integer lattice with an exact positivity check; precision
/// escalates on failure, with a fraction-clearing exact fallback.
fn positive_integer_combination(basis: &[Vec<BigInt>], n: usize) -> Result<Vec<BigInt>> {
    let k = basis.len();
    // columns of the combination map: entry i of sum_j c_j basis[j]
    let columns: Vec<Vec<BigRational>> = (0..k)
        .map(|j| {
            (0..n)
                .map(|i| BigRational::from(basis[j][i].clone()))
                .collect()
        })
        .collect();

    // exact max-min over free coefficients c (split into c+ - c-):
    // maximize t subject to sum_j c_j basis[j][i] - t - s_i = 0 and the
    // normalization sum_i (combination)_i = 1.
    let nvars = 2 * k + 1 + n;
    let zero = BigRational::zero;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for i in 0..n {
        let mut row = vec![zero(); nvars];
        for j in 0..k {
            row[j] = columns[j][i].clone();
            row[k + j] = -columns[j][i].clone();
        }
        row[2 * k] = -BigRational::one();
        row[2 * k + 1 + i] = -BigRational::one();
        rows.push(row);
        rhs.push(zero());
    }
    let mut norm = vec![zero(); nvars];
    for j in 0..k {
        let colsum: BigRational = columns[j]
            .iter()
            .fold(BigRational::zero(), |a, b| a + b.clone());
        norm[j] = colsum.clone();
        norm[k + j] = -colsum;
    }
    rows.push(norm);
    rhs.push(BigRational::one());
    let mut objective = vec![zero(); nvars];
    objective[2 * k] = -BigRational::one();

    let coeffs = match lp::solve(&StandardForm {
        rows,
        rhs,
        objective,
    }) {
        LpOutcome::Optimal { x, value } => {
            if !value.is_negative() {
                return Err(Error::Degenerate(
                    "no strictly positive dependence in the lattice span".into(),
                ));
            }
            (0..k)
                .map(|j| x[j].clone() - x[k + j].clone())
                .collect::<Vec<BigRational>>()
        }
        _ => {
            return Err(Error::Domain(
                "dependence lattice admits no positive combination; diagram invariant fails"
                    .into(),
            ))
        }
    };

    // round coefficients to dyadic fractions of the largest magnitude, at
    // escalating precision, and verify positivity exactly
    let max_mag = coeffs
        .iter()
        .map(Signed::abs)
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    if max_mag.is_zero() {
        return Err(Error::Degenerate("zero dependence coefficients".into()));
    }
    for p in [25u32, 60, 120] {
        let quantum = max_mag.clone() / BigRational::from(BigInt::one() << p);
        let rounded: Vec<BigInt> = coeffs
            .iter()
            .map(|c| {
                let r = c / &quantum;
                let (q, rem) = num_integer::Integer::div_rem(r.numer(), r.denom());
                if rem.abs() * BigInt::from(2) >= *r.denom() {
                    if r.is_negative() {
                        q - BigInt::one()
                    } else {
                        q + BigInt::one()
                    }
                } else {
                    q
                }
            })
            .collect();
        let mut lambda = vec![BigInt::zero(); n];
        for (j, e) in rounded.iter().enumerate() {
            for (i, slot) in lambda.iter_mut().enumerate() {
                *slot += e * &basis[j][i];
            }
        }
        if lambda.iter().all(|x| x.is_positive()) {
            let g = lambda
                .iter()
                .fold(BigInt::zero(), |a, b| num_integer::Integer::gcd(&a, b));
            if !g.is_zero() && !g.is_one() {
                for x in lambda.iter_mut() {
                    *x /= &g;
                }
            }
            return Ok(lambda);
        }
    }
    // exact fallback: clear denominators of the exact optimal coefficients
    let mut lambda = vec![BigRational::zero(); n];
    for (j, c) in coeffs.iter().enumerate() {
        for (i, slot) in lambda.iter_mut().enumerate() {
            *slot += c * &columns[j][i];
        }
    }
    if lambda.iter().all(|x| x.is_positive()) {
        Ok(crate::ratio::primitive_integer_vector(&lambda))
    } else {
        Err(Error::Degenerate(
            "positive dependence could not be integerized".into(),
        ))
    }
}

/// Gale face criterion: `conv{a_i : i in I}` is a face of the realized
/// polytope exactly when the origin lies in the hull of the complementary
/// diagram vectors. The empty set is a face whenever the diagram invariant
/// holds.
pub fn is_face(diagram: &GaleDiagram, index_set: &[usize]) -> Result<bool> {
    let n = diagram.dims.n() as usize;
    let d = diagram.dims.d() as usize;
    let mut seen = vec![false; n];
    for &i in index_set {
        if i >= n {
            return Err(Error::Domain(format!("index {i} out of range (N={n})")));
        }
        if seen[i] {
            return Err(Error::Domain(format!("duplicate index {i}")));
        }
        seen[i] = true;
    }
    if index_set.len() > d {
        return Err(Error::Domain(format!(
            "index set of size {} exceeds the polytope dimension {d}",
            index_set.len()
        )));
    }
    let complement: Vec<usize> = (0..n).filter(|&i| !seen[i]).collect();
    let tester = OriginTester::new(&diagram.vectors);
    Ok(tester.subset_contains_origin(&complement))
}

/// Count the `k`-faces by exhaustive enumeration of all `C(N, k+1)` index
/// sets, each decided by the exact Gale criterion.
pub fn count_faces(diagram: &GaleDiagram, k: u32) -> Result<FaceCount> {
    count_faces_capped(diagram, k, DEFAULT_ENUMERATION_CAP)
}

pub fn count_faces_capped(diagram: &GaleDiagram, k: u32, cap: u64) -> Result<FaceCount> {
    let dims = diagram.dims.with_k(k)?;
    let n = dims.n() as usize;
    let subsets = binomial_u128(dims.n() as u64, (k + 1) as u64);
    if subsets > cap as u128 {
        return Err(Error::EnumerationCap {
            required: subsets.to_string(),
            cap,
        });
    }
    let tester = OriginTester::new(&diagram.vectors);
    let mut count: u64 = 0;
    let mut in_subset = vec![false; n];
    let mut complement: Vec<usize> = Vec::with_capacity(n);
    for_each_combination(n, (k + 1) as usize, |subset| {
        for &i in subset {
            in_subset[i] = true;
        }
        complement.clear();
        complement.extend((0..n).filter(|&i| !in_subset[i]));
        if tester.subset_contains_origin(&complement) {
            count += 1;
        }
        for &i in subset {
            in_subset[i] = false;
        }
    });
    Ok(FaceCount {
        dims,
        count: BigUint::from(count),
        is_complete_neighborly: count as u128 == subsets,
    })
}

/// `j`-neighborliness: every `j`-element vertex set spans a face, i.e.
/// `f_{j-1}` attains `C(N, j)`.
pub fn is_k_neighborly(diagram: &GaleDiagram, j: u32) -> Result<bool> {
    if j < 1 || j > diagram.dims.d() {
        return Err(Error::Domain(format!(
            "neighborliness order must satisfy 1 <= j <= d (got j={j}, d={})",
            diagram.dims.d()
        )));
    }
    Ok(count_faces(diagram, j - 1)?.is_complete_neighborly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn points(dims: Dims, pts: &[&[i64]]) -> PointConfiguration {
        PointConfiguration::new(
            dims,
            pts.iter()
                .map(|p| p.iter().map(|&x| q(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn diagram(d: u32, n: u32, k: u32, vs: &[&[i64]]) -> GaleDiagram {
        let dims = Dims::new(d, n, k).unwrap();
        let cfg = VectorConfig::new(
            dims.m() as usize,
            vs.iter()
                .map(|v| v.iter().map(|&x| q(x)).collect())
                .collect(),
        )
        .unwrap();
        GaleDiagram::new(dims, cfg).unwrap()
    }

    fn quadrilateral() -> GaleDiagram {
        diagram(2, 4, 1, &[&[1], &[1], &[-1], &[-1]])
    }

    #[test]
    fn transform_of_unit_square() {
        let dims = Dims::new(2, 4, 1).unwrap();
        let pts = points(dims, &[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
        let t = gale_transform(&pts).unwrap();
        assert_eq!(t.dim(), 1);
        let v: Vec<&BigRational> = t.vectors().iter().map(|v| &v[0]).collect();
        // alternating signs up to global scale
        assert_eq!(v[1], &-v[0].clone());
        assert_eq!(v[2], v[0]);
        assert_eq!(v[3], &-v[0].clone());
        let sum: BigRational = t
            .vectors()
            .iter()
            .map(|v| v[0].clone())
            .fold(BigRational::zero(), |a, b| a + b);
        assert!(sum.is_zero());
    }

    #[test]
    fn transform_of_simplex_plus_centroidish_point() {
        let dims = Dims::new(2, 4, 1).unwrap();
        let pts = points(dims, &[&[0, 0], &[3, 0], &[0, 3], &[1, 1]]);
        let t = gale_transform(&pts).unwrap();
        let v: Vec<&BigRational> = t.vectors().iter().map(|v| &v[0]).collect();
        // three equal-sign entries, one opposite, proportional to (1,1,1,-3)
        assert_eq!(v[0], v[1]);
        assert_eq!(v[1], v[2]);
        assert_eq!(v[3], &(-v[0].clone() * q(3)));
    }

    #[test]
    fn transform_requires_affine_span() {
        let dims = Dims::new(2, 4, 1).unwrap();
        let colinear = PointConfiguration::new(
            dims,
            vec![
                vec![q(0), q(0)],
                vec![q(1), q(0)],
                vec![q(2), q(0)],
                vec![q(3), q(0)],
            ],
        );
        assert!(matches!(colinear, Err(Error::RankDeficient(_))));
    }

    #[test]
    fn transform_columns_sum_to_origin_on_random_configs() {
        let mut state = 7u64;
        let mut next = move || {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        };
        for trial in 0..60u32 {
            let d = 2 + (trial % 3);
            let n = d + 2 + (trial % 4);
            let dims = Dims::new(d, n, 0).unwrap();
            let pts: Vec<Vec<BigRational>> = (0..n)
                .map(|_| {
                    (0..d)
                        .map(|_| {
                            let u = (next() >> 11) as f64 / (1u64 << 53) as f64;
                            crate::ratio::rational_from_f64(2.0 * u - 1.0).unwrap()
                        })
                        .collect()
                })
                .collect();
            let pc = PointConfiguration::new(dims, pts).unwrap();
            let t = gale_transform(&pc).unwrap();
            for j in 0..t.dim() {
                let s: BigRational = t
                    .vectors()
                    .iter()
                    .map(|v| v[j].clone())
                    .fold(BigRational::zero(), |a, b| a + b);
                assert!(s.is_zero());
            }
            // transform vectors are orthogonal to the lifted point rows
            let lifted = lifted_rows(pc.points(), d as usize);
            for j in 0..t.dim() {
                for row in &lifted {
                    let dot: BigRational = row
                        .iter()
                        .zip(t.vectors())
                        .map(|(r, v)| r * &v[j])
                        .fold(BigRational::zero(), |a, b| a + b);
                    assert!(dot.is_zero());
                }
            }
        }
    }

    #[test]
    fn diagram_invariants_enforced() {
        let dims = Dims::new(2, 4, 1).unwrap();
        // all positive: origin outside
        let cfg =
            VectorConfig::new(1, vec![vec![q(1)], vec![q(2)], vec![q(1)], vec![q(3)]]).unwrap();
        assert!(matches!(GaleDiagram::new(dims, cfg), Err(Error::Domain(_))));
        // wrong dimension
        let cfg = VectorConfig::new(2, vec![vec![q(1), q(0)]; 4]).unwrap();
        assert!(GaleDiagram::new(dims, cfg).is_err());
    }

    #[test]
    fn face_predicate_on_quadrilateral_diagram() {
        let g = quadrilateral();
        assert!(is_face(&g, &[]).unwrap());
        assert!(is_face(&g, &[0, 2]).unwrap());
        assert!(is_face(&g, &[0, 3]).unwrap());
        assert!(!is_face(&g, &[0, 1]).unwrap());
        assert!(!is_face(&g, &[2, 3]).unwrap());
        assert!(is_face(&g, &[1, 2]).unwrap());
        // oversized and malformed index sets
        assert!(is_face(&g, &[0, 1, 2]).is_err());
        assert!(is_face(&g, &[0, 0]).is_err());
        assert!(is_face(&g, &[9]).is_err());
    }

    #[test]
    fn face_counts_on_quadrilateral_diagram() {
        let g = quadrilateral();
        let f1 = count_faces(&g, 1).unwrap();
        assert_eq!(f1.count, BigUint::from(4u32));
        assert!(!f1.is_complete_neighborly); // 4 < C(4,2) = 6
        let f0 = count_faces(&g, 0).unwrap();
        assert_eq!(f0.count, BigUint::from(4u32));
        assert!(f0.is_complete_neighborly); // every point is a vertex

        assert!(is_k_neighborly(&g, 1).unwrap());
        assert!(!is_k_neighborly(&g, 2).unwrap());
        assert!(is_k_neighborly(&g, 0).is_err());
        assert!(is_k_neighborly(&g, 3).is_err());
        assert!(count_faces(&g, 5).is_err());
    }

    #[test]
    fn enumeration_cap_guard() {
        let g = quadrilateral();
        assert!(matches!(
            count_faces_capped(&g, 1, 5),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn positive_dependence_hand_cases() {
        let g = quadrilateral();
        let w = positive_dependence(&g).unwrap();
        assert_eq!(
            w.lambda(),
            &[q(1) / q(4), q(1) / q(4), q(1) / q(4), q(1) / q(4)]
        );

        let g2 = diagram(1, 3, 0, &[&[2], &[-1], &[-1]]);
        let w2 = positive_dependence(&g2).unwrap();
        assert_eq!(w2.lambda(), &[q(1) / q(3), q(1) / q(3), q(1) / q(3)]);
    }

    #[test]
    fn positive_dependence_verifies_on_sampled_diagrams() {
        let mut state = 99u64;
        let mut next = move || {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        };
        let mut found = 0;
        let mut attempts = 0;
        while found < 300 && attempts < 8000 {
            attempts += 1;
            let m = 1 + (next() % 3) as usize;
            let n = (m + 3) + (next() % 4) as usize;
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    (0..m)
                        .map(|_| {
                            let u = (next() >> 11) as f64 / (1u64 << 53) as f64;
                            2.0 * u - 1.0
                        })
                        .collect()
                })
                .collect();
            let cfg = VectorConfig::from_f64_rows(m, &rows).unwrap();
            let d = (n - m - 1) as u32;
            if d < 1 {
                continue;
            }
            let dims = Dims::new(d, n as u32, 0).unwrap();
            let Ok(g) = GaleDiagram::new(dims, cfg) else {
                continue;
            };
            // exact re-verification happens inside positive_dependence
            let w = positive_dependence(&g).unwrap();
            assert_eq!(w.lambda().len(), n);
            found += 1;
        }
        assert!(found >= 300, "only {found} conditioned samples in {attempts}");
    }

    #[test]
    fn realize_quadrilateral() {
        let g = quadrilateral();
        let pc = realize(&g).unwrap();
        assert_eq!(pc.points().len(), 4);
        assert_eq!(pc.points()[0].len(), 2);
        // deterministic
        let pc2 = realize(&g).unwrap();
        assert_eq!(pc.points(), pc2.points());
    }

    #[test]
    fn face_counts_invariant_under_rescaling_and_unimodular_maps() {
        // positive per-vector rescaling and a global linear bijection both
        // preserve the origin-in-hull predicate, hence every face count
        let mut state = 5150u64;
        let mut next = move || {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        };
        let mut done = 0;
        let mut tries = 0;
        while done < 20 && tries < 500 {
            tries += 1;
            let m = 1 + (next() % 3) as usize;
            let n = m + 4;
            let d = (n - m - 1) as u32;
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    (0..m)
                        .map(|_| {
                            let u = (next() >> 11) as f64 / (1u64 << 53) as f64;
                            2.0 * u - 1.0
                        })
                        .collect()
                })
                .collect();
            let cfg = VectorConfig::from_f64_rows(m, &rows).unwrap();
            let dims = Dims::new(d, n as u32, 0).unwrap();
            let Ok(g) = GaleDiagram::new(dims, cfg.clone()) else {
                continue;
            };
            let counts: Vec<BigUint> = (0..d)
                .map(|k| count_faces(&g, k).unwrap().count)
                .collect();

            // positive rescaling of individual vectors
            let rescaled: Vec<Vec<BigRational>> = cfg
                .vectors()
                .iter()
                .map(|v| {
                    let s = BigRational::new(
                        BigInt::from(1 + (next() % 9) as i64),
                        BigInt::from(1 + (next() % 9) as i64),
                    );
                    v.iter().map(|x| x * &s).collect()
                })
                .collect();
            let g2 = GaleDiagram::new(dims, VectorConfig::new(m, rescaled).unwrap()).unwrap();

            // unit-triangular integer map: determinant one, a bijection
            let mut u_mat = vec![vec![BigRational::zero(); m]; m];
            for (i, row) in u_mat.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    *x = if i == j {
                        BigRational::one()
                    } else if j > i {
                        BigRational::from(BigInt::from((next() % 5) as i64 - 2))
                    } else {
                        BigRational::zero()
                    };
                }
            }
            let mapped: Vec<Vec<BigRational>> = cfg
                .vectors()
                .iter()
                .map(|v| {
                    (0..m)
                        .map(|i| {
                            (0..m)
                                .map(|j| &u_mat[i][j] * &v[j])
                                .fold(BigRational::zero(), |a, b| a + b)
                        })
                        .collect()
                })
                .collect();
            let g3 = GaleDiagram::new(dims, VectorConfig::new(m, mapped).unwrap()).unwrap();

            for k in 0..d {
                assert_eq!(count_faces(&g2, k).unwrap().count, counts[k as usize]);
                assert_eq!(count_faces(&g3, k).unwrap().count, counts[k as usize]);
            }
            done += 1;
        }
        assert!(done >= 20, "only {done} diagrams in {tries} tries");
    }

    #[test]
    fn neighborliness_monotone_in_order() {
        // once j-neighborliness fails, it stays failed for larger j
        let mut state = 808u64;
        let mut next = move || {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        };
        let mut done = 0;
        let mut tries = 0;
        while done < 200 && tries < 4000 {
            tries += 1;
            let m = 1 + (next() % 3) as usize;
            let n = (m + 3) + (next() % 5) as usize; // N <= 12 keeps counts cheap
            let d = (n - m - 1) as u32;
            if d < 2 {
                continue;
            }
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    (0..m)
                        .map(|_| {
                            let u = (next() >> 11) as f64 / (1u64 << 53) as f64;
                            2.0 * u - 1.0
                        })
                        .collect()
                })
                .collect();
            let cfg = VectorConfig::from_f64_rows(m, &rows).unwrap();
            let dims = Dims::new(d, n as u32, 0).unwrap();
            let Ok(g) = GaleDiagram::new(dims, cfg) else {
                continue;
            };
            let mut prev = true;
            for j in 1..=d {
                let nj = is_k_neighborly(&g, j).unwrap();
                assert!(
                    prev || !nj,
                    "neighborliness not monotone at j={j} for {dims:?}"
                );
                prev = nj;
            }
            done += 1;
        }
        assert!(done >= 200, "only {done} diagrams in {tries} tries");
    }

    #[test]
    fn realize_round_trips_through_transform() {
        let g = quadrilateral();
        let pc = realize(&g).unwrap();
        let t = gale_transform(&pc).unwrap();
        // the re-transform must span the same dependence line as the
        // diagram: identical sign pattern up to a global flip
        assert_eq!(t.dim(), 1);
        let sign = |r: &BigRational| r.is_positive();
        let t0: Vec<bool> = t.vectors().iter().map(|v| sign(&v[0])).collect();
        let d0: Vec<bool> = g.vectors().vectors().iter().map(|v| sign(&v[0])).collect();
        let flipped: Vec<bool> = d0.iter().map(|b| !b).collect();
        assert!(t0 == d0 || t0 == flipped);
    }
}
