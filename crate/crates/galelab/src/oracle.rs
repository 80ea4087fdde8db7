//! Independent brute-force oracles. Deliberately naive full enumerations
//! with exact arithmetic; they exist to certify the fast paths at small
//! sizes, so performance is a non-goal.

use crate::combi::{binomial_u128, for_each_combination};
use crate::error::{Error, Result};
use crate::exactcomb::ExactProb;
use crate::galecore::{PointConfiguration, DEFAULT_ENUMERATION_CAP};
use crate::geomcore::{decide_origin, is_general_position, scaled_integer_columns, VectorConfig};
use crate::lp::{self, LpOutcome, StandardForm};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// All `(k+1)`-subsets that span a `k`-face, as reported by the
/// supporting-hyperplane LP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSetReport {
    pub k: u32,
    pub faces: BTreeSet<Vec<usize>>,
}

const SIGN_ENUMERATION_LIMIT: u32 = 20;

/// Exhaustive sign-pattern Wendel check: for a fixed generic configuration
/// of `points` vectors in dimension `dim`, the fraction of the `2^points`
/// sign assignments `eps` for which the origin misses `conv{eps_i x_i}`.
/// For symmetric distributions every sign pattern is equally likely, so
/// this fraction equals the Wendel probability exactly.
pub fn wendel_sign_oracle(dim: u32, points: u32, cfg: &VectorConfig) -> Result<ExactProb> {
    if points > SIGN_ENUMERATION_LIMIT {
        return Err(Error::EnumerationCap {
            required: format!("2^{points} sign patterns"),
            cap: 1 << SIGN_ENUMERATION_LIMIT,
        });
    }
    if cfg.dim() != dim as usize || cfg.len() != points as usize {
        return Err(Error::Domain(format!(
            "configuration is {} vectors in dimension {}, oracle asked for \
             {points} in dimension {dim}",
            cfg.len(),
            cfg.dim()
        )));
    }
    if !is_general_position(cfg) {
        return Err(Error::Degenerate(
            "sign oracle needs a configuration in linearly general position".into(),
        ));
    }
    let base = scaled_integer_columns(cfg).cols;
    let n = points as usize;
    let mut misses: u64 = 0;
    for mask in 0u64..(1u64 << n) {
        let signed: Vec<Vec<BigInt>> = base
            .iter()
            .enumerate()
            .map(|(i, col)| {
                if mask >> i & 1 == 1 {
                    col.iter().map(|x| -x.clone()).collect()
                } else {
                    col.clone()
                }
            })
            .collect();
        let refs: Vec<&Vec<BigInt>> = signed.iter().collect();
        if !decide_origin(&refs, dim as usize).is_inside() {
            misses += 1;
        }
    }
    ExactProb::new(BigRational::new(
        BigInt::from(misses),
        BigInt::one() << points,
    ))
}

/// Direct face enumeration of a point configuration: a `(k+1)`-subset `S`
/// spans a `k`-face exactly when some functional is constant on `S` and
/// strictly smaller elsewhere, encoded with the scale-free gap
/// `<u, a_j> <= c - 1`.
pub fn hull_faces(pts: &PointConfiguration, k: u32) -> Result<FaceSetReport> {
    hull_faces_capped(pts, k, DEFAULT_ENUMERATION_CAP)
}

pub fn hull_faces_capped(pts: &PointConfiguration, k: u32, cap: u64) -> Result<FaceSetReport> {
    let dims = pts.dims();
    let d = dims.d() as usize;
    let n = dims.n() as usize;
    if k > dims.d() - 1 {
        return Err(Error::Domain(format!(
            "face dimension k={k} outside 0..={}",
            dims.d() - 1
        )));
    }
    let subsets = binomial_u128(n as u64, (k + 1) as u64);
    if subsets > cap as u128 {
        return Err(Error::EnumerationCap {
            required: subsets.to_string(),
            cap,
        });
    }
    // affine general position of the points = linear general position of
    // the lifted vectors (a_i, 1)
    let lifted: Vec<Vec<BigRational>> = pts
        .points()
        .iter()
        .map(|p| {
            let mut v = p.clone();
            v.push(BigRational::one());
            v
        })
        .collect();
    let lifted_cfg = VectorConfig::new(d + 1, lifted)?;
    if !is_general_position(&lifted_cfg) {
        return Err(Error::Degenerate(
            "points are not in affinely general position".into(),
        ));
    }

    let mut faces = BTreeSet::new();
    let mut in_subset = vec![false; n];
    for_each_combination(n, (k + 1) as usize, |subset| {
        for &i in subset {
            in_subset[i] = true;
        }
        if supports_face(pts.points(), &in_subset, d, n) {
            faces.insert(subset.to_vec());
        }
        for &i in subset {
            in_subset[i] = false;
        }
    });
    Ok(FaceSetReport { k, faces })
}

/// Feasibility of `{(u, c) : <u, a_i> = c on S, <u, a_j> <= c - 1 off S}`.
fn supports_face(points: &[Vec<BigRational>], in_subset: &[bool], d: usize, n: usize) -> bool {
    // variables: u+ (d), u- (d), c+, c-, one slack per off-subset point
    let off: Vec<usize> = (0..n).filter(|&i| !in_subset[i]).collect();
    let nvars = 2 * d + 2 + off.len();
    let mut rows = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![BigRational::zero(); nvars];
        for j in 0..d {
            row[j] = points[i][j].clone();
            row[d + j] = -points[i][j].clone();
        }
        row[2 * d] = -BigRational::one();
        row[2 * d + 1] = BigRational::one();
        if in_subset[i] {
            rhs.push(BigRational::zero());
        } else {
            let slot = off.iter().position(|&j| j == i).unwrap();
            row[2 * d + 2 + slot] = BigRational::one();
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
