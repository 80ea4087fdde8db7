//! Exact linear algebra helpers: fraction-free determinants, rational
//! RREF, integer kernel bases, and a float-guided lattice size reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Determinant of a square integer matrix by Bareiss fraction-free
/// elimination; every interior division is exact.
pub(crate) fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, r) = num.div_rem(&prev);
                assert!(r.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = std::mem::take(&mut a[n - 1][n - 1]);
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Reduced row echelon form with the deterministic pivot rule "first
/// nonzero row in column order". Returns the reduced rows together with
/// the pivot column of each.
pub(crate) fn rref(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivot_cols = Vec::new();
    let mut next_row = 0;
    for col in 0..ncols {
        if next_row >= nrows {
            break;
        }
        let Some(p) = (next_row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, next_row);
        let inv = a[next_row][col].recip();
        for x in a[next_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..nrows {
            if r != next_row && !a[r][col].is_zero() {
                let f = std::mem::replace(&mut a[r][col], BigRational::zero());
                for c in col + 1..ncols {
                    let t = &a[next_row][c] * &f;
                    a[r][c] -= t;
                }
            }
        }
        pivot_cols.push(col);
        next_row += 1;
    }
    a.truncate(next_row);
    (a, pivot_cols)
}

pub(crate) fn rank_rational(rows: &[Vec<BigRational>]) -> usize {
    rref(rows).1.len()
}

pub(crate) fn rank_int(rows: &[Vec<BigInt>]) -> usize {
    rank_rational(&to_rational(rows))
}

pub(crate) fn to_rational(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect()
}

/// Basis of the right kernel `{v : A v = 0}` of an integer matrix, as
/// primitive integer vectors. Deterministic: RREF pivots are first-nonzero
/// in column order, basis vectors come in free-column order.
pub(crate) fn kernel_basis_int(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let (r, pivots) = rref(&to_rational(rows));
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; ncols];
        for &c in &pivots {
            s[c] = true;
        }
        s
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r[i][free].clone();
        }
        basis.push(crate::ratio::primitive_integer_vector(&v));
    }
    basis
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest-integer quotient, used to keep column-elimination entries small.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if r.abs() * 2 > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Basis of the *saturated* integer kernel `{v in Z^n : A v = 0}`, via
/// unimodular column elimination with a running transform. Unlike the
/// primitive RREF basis, which may span a finite-index sublattice, the
/// output generates every integer kernel vector, so a subsequent lattice
/// reduction can reach genuinely short coordinates.
pub(crate) fn kernel_basis_saturated(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let m = rows.len();
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    // u[j] is the j-th column of the unimodular transform
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| {
            let mut c = vec![BigInt::zero(); ncols];
            c[j] = BigInt::one();
            c
        })
        .collect();
    let mut processed = 0usize;
    for r in 0..m {
        if processed >= ncols {
            break;
        }
        loop {
            // pivot: unprocessed column with the smallest nonzero |a[r][j]|
            let mut pivot: Option<usize> = None;
            for j in processed..ncols {
                if a[r][j].is_zero() {
                    continue;
                }
                pivot = match pivot {
                    None => Some(j),
                    Some(p) => {
                        if a[r][j].abs() < a[r][p].abs() {
                            Some(j)
                        } else {
                            Some(p)
                        }
                    }
                };
            }
            let Some(p) = pivot else { break };
            let mut residue = false;
            for j in processed..ncols {
                if j == p || a[r][j].is_zero() {
                    continue;
                }
                let q = div_round(&a[r][j], &a[r][p]);
                if !q.is_zero() {
                    for row in a.iter_mut() {
                        let t = &q * &row[p];
                        row[j] -= t;
                    }
                    for i in 0..ncols {
                        let t = &q * &u[p][i];
                        u[j][i] -= t;
                    }
                }
                if !a[r][j].is_zero() {
                    residue = true;
                }
            }
            if !residue {
                for row in a.iter_mut() {
                    row.swap(processed, p);
                }
                u.swap(processed, p);
                processed += 1;
                break;
            }
        }
    }
    let kernel: Vec<Vec<BigInt>> = (processed..ncols).map(|j| u[j].clone()).collect();
    debug_assert!(kernel
        .iter()
        .all(|v| rows.iter().all(|row| dot_int(row, v).is_zero())));
    kernel
}
