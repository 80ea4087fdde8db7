//! Exact rational linear programming.
//!
//! A textbook two-phase simplex with Bland's anti-cycling rule, run over a
//! fraction-free integer tableau: entries are kept as integers sharing one
//! positive denominator (the basis determinant up to sign), and each pivot
//! is the Bareiss update whose interior division is exact. Inputs and
//! outputs are arbitrary rationals; no tolerances anywhere.
//!
//! Problems are standard form: minimize `c . x` subject to `A x = b`,
//! `x >= 0`. Infeasibility is certified by a Farkas vector `y` with
//! `y^T A <= 0` and `y^T b > 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `min objective . x` subject to `rows . x = rhs`, `x >= 0`.
#[derive(Clone, Debug)]
pub struct StandardForm {
    pub rows: Vec<Vec<BigRational>>,
    pub rhs: Vec<BigRational>,
    pub objective: Vec<BigRational>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
    },
    /// Farkas certificate: `y^T rows <= 0` componentwise and `y^T rhs > 0`.
    Infeasible { farkas: Vec<BigRational> },
    Unbounded,
}

struct Tableau {
    /// m x (n_total + 1) integer matrix; the last column is the rhs.
    t: Vec<Vec<BigInt>>,
    /// objective row, same width, holding `den * reduced_cost` per column
    /// and `-den * value` in the rhs slot.
    obj: Vec<BigInt>,
    /// common positive denominator of every entry.
    den: BigInt,
    /// basic column of each row.
    basis: Vec<usize>,
    n_real: usize,
    n_total: usize,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.n_total
    }

    /// Bareiss pivot at (p, q); keeps all entries integral and `den > 0`.
    fn pivot(&mut self, p: usize, q: usize) {
        let m = self.t.len();
        let pivot_val = self.t[p][q].clone();
        assert!(!pivot_val.is_zero(), "zero pivot");
        let width = self.n_total + 1;
        let prow = self.t[p].clone();
        for i in 0..m {
            if i == p {
                continue;
            }
            let coef = self.t[i][q].clone();
            for j in 0..width {
                let num = &self.t[i][j] * &pivot_val - &coef * &prow[j];
                let (quot, rem) = num.div_rem(&self.den);
                assert!(rem.is_zero(), "fraction-free pivot must divide exactly");
                self.t[i][j] = quot;
            }
        }
        {
            let coef = self.obj[q].clone();
            for j in 0..width {
                let num = &self.obj[j] * &pivot_val - &coef * &prow[j];
                let (quot, rem) = num.div_rem(&self.den);
                assert!(rem.is_zero(), "fraction-free pivot must divide exactly");
                self.obj[j] = quot;
            }
        }
        self.basis[p] = q;
        if pivot_val.is_negative() {
            for row in self.t.iter_mut() {
                for x in row.iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            for x in self.obj.iter_mut() {
                *x = -std::mem::take(x);
            }
            self.den = -pivot_val;
        } else {
            self.den = pivot_val;
        }
    }

    /// Bland's rule iteration. Artificial columns never re-enter the basis,
    /// in either phase.
    fn run_simplex(&mut self) -> Result<(), Unbounded> {
        let iter_cap = 1000 + 50 * (self.t.len() + 1) * (self.n_total + 1);
        for _ in 0..iter_cap {
            let Some(q) = (0..self.n_real).find(|&j| self.obj[j].is_negative()) else {
                return Ok(());
            };
            let rhs = self.rhs_col();
            let mut leave: Option<usize> = None;
            for i in 0..self.t.len() {
                if !self.t[i][q].is_positive() {
                    continue;
                }
                leave = Some(match leave {
                    None => i,
                    Some(l) => {
                        // compare t[i][rhs]/t[i][q] with t[l][rhs]/t[l][q]
                        let lhs = &self.t[i][rhs] * &self.t[l][q];
                        let rhs_v = &self.t[l][rhs] * &self.t[i][q];
                        match lhs.cmp(&rhs_v) {
                            std::cmp::Ordering::Less => i,
                            std::cmp::Ordering::Greater => l,
                            std::cmp::Ordering::Equal => {
                                if self.basis[i] < self.basis[l] {
                                    i
                                } else {
                                    l
                                }
                            }
                        }
                    }
                });
            }
            match leave {
                Some(p) => self.pivot(p, q),
                None => return Err(Unbounded),
            }
        }
        unreachable!("Bland's rule cannot cycle; iteration cap exceeded means a bug");
    }

    fn solution(&self) -> Vec<BigRational> {
        let mut x = vec![BigRational::zero(); self.n_real];
        let rhs = self.rhs_col();
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_real {
                x[b] = BigRational::new(self.t[i][rhs].clone(), self.den.clone());
            }
        }
        x
    }
}

struct Unbounded;

/// Solve a standard-form LP exactly.
pub fn solve(sf: &StandardForm) -> LpOutcome {
    let m = sf.rows.len();
    let n = sf.objective.len();
    assert_eq!(sf.rhs.len(), m);
    for r in &sf.rows {
        assert_eq!(r.len(), n);
    }

    // integer-scale each row (with its rhs) and flip signs so b >= 0
    let mut t: Vec<Vec<BigInt>> = Vec::with_capacity(m);
    let mut flips: Vec<bool> = Vec::with_capacity(m);
    let mut scales: Vec<BigInt> = Vec::with_capacity(m);
    for i in 0..m {
        let mut l = sf.rhs[i].denom().clone();
        for x in &sf.rows[i] {
            l = l.lcm(x.denom());
        }
        let mut row: Vec<BigInt> = Vec::with_capacity(n + m + 1);
        for x in &sf.rows[i] {
            row.push(x.numer() * (&l / x.denom()));
        }
        for j in 0..m {
            row.push(if j == i { BigInt::one() } else { BigInt::zero() });
        }
        row.push(sf.rhs[i].numer() * (&l / sf.rhs[i].denom()));
        let flip = row[n + m].is_negative();
        if flip {
            for x in row.iter_mut() {
                *x = -std::mem::take(x);
            }
            // keep the artificial column positive
            row[n + i] = BigInt::one();
        }
        flips.push(flip);
        scales.push(l);
        t.push(row);
    }

    // phase-1 objective: minimize the artificial sum; reduced-cost row is
    // zero on artificials, minus the column sums elsewhere.
    let mut obj = vec![BigInt::zero(); n + m + 1];
    for j in (0..n).chain([n + m]) {
        obj[j] = -t.iter().map(|row| &row[j]).sum::<BigInt>();
    }

    let mut tab = Tableau {
        t,
        obj,
        den: BigInt::one(),
        basis: (n..n + m).collect(),
        n_real: n,
        n_total: n + m,
    };

    if tab.run_simplex().is_err() {
        unreachable!("phase 1 objective is bounded below by zero");
    }

    // phase-1 optimum is -obj[rhs]/den; positive means infeasible.
    let rhs = tab.rhs_col();
    if tab.obj[rhs].is_negative() {
        // Farkas dual from the artificial reduced costs: y_j = 1 - rc_j.
        let mut farkas = Vec::with_capacity(m);
        for i in 0..m {
            let mut y = BigRational::one()
                - BigRational::new(tab.obj[n + i].clone(), tab.den.clone());
            if flips[i] {
                y = -y;
            }
            y *= BigRational::from(scales[i].clone());
            farkas.push(y);
        }
        debug_assert!(verify_farkas(sf, &farkas));
        return LpOutcome::Infeasible { farkas };
    }

    // drive remaining artificials out of the basis where possible
    for i in 0..m {
        if tab.basis[i] >= n {
            debug_assert!(tab.t[i][rhs].is_zero());
            if let Some(q) = (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                tab.pivot(i, q);
            }
            // an all-zero real row is a redundant constraint; its artificial
            // stays basic at zero and can never be selected again
        }
    }

    // phase 2: rebuild the objective row for the real cost vector
    let mut scaled_c = BigInt::one();
    for c in &sf.objective {
        scaled_c = scaled_c.lcm(c.denom());
    }
    let c_int: Vec<BigInt> = sf
        .objective
        .iter()
        .map(|c| c.numer() * (&scaled_c / c.denom()))
        .collect();
    let width = tab.n_total + 1;
    let mut obj2 = vec![BigInt::zero(); width];
    for (j, slot) in obj2.iter_mut().enumerate() {
        let direct = if j < n {
            &tab.den * &c_int[j]
        } else {
            BigInt::zero()
        };
        let basis_part: BigInt = (0..m)
            .filter(|&i| tab.basis[i] < n)
            .map(|i| &c_int[tab.basis[i]] * &tab.t[i][j])
            .sum();
        *slot = direct - basis_part;
    }
    // rhs slot of the objective row only tracks the value; recomputed at the
    // end from x, so its running content is irrelevant beyond integrality.
    tab.obj = obj2;

    match tab.run_simplex() {
        Err(Unbounded) => LpOutcome::Unbounded,
        Ok(()) => {
            let x = tab.solution();
            let value = sf
                .objective
                .iter()
                .zip(&x)
                .map(|(c, xi)| c * xi)
                .fold(BigRational::zero(), |a, b| a + b);
            LpOutcome::Optimal { x, value }
        }
    }
}

fn verify_farkas(sf: &StandardForm, y: &[BigRational]) -> bool {
    let n = sf.objective.len();
    for j in 0..n {
        let dot: BigRational = sf
            .rows
            .iter()
            .zip(y)
            .map(|(row, yi)| &row[j] * yi)
            .fold(BigRational::zero(), |a, b| a + b);
        if dot.is_positive() {
            return false;
        }
    }
    let yb: BigRational = sf
        .rhs
        .iter()
        .zip(y)
        .map(|(b, yi)| b * yi)
        .fold(BigRational::zero(), |a, b| a + b);
    yb.is_positive()
}

// ---------------------------------------------------------------------------
// Floating-point phase-1 pre-pass.
//
// Used to guess either a feasible basis or a Farkas dual quickly; every
// conclusion drawn from it is re-verified in exact arithmetic by the caller,
// with the exact simplex as fallback. Numerical failure here is harmless.
// ---------------------------------------------------------------------------

pub(crate) enum FloatPhase1 {
    Feasible { basis: Vec<usize> },
    Infeasible { dual: Vec<f64> },
    Fail,
}

pub(crate) fn float_phase1(rows: &[Vec<f64>], rhs: &[f64]) -> FloatPhase1 {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let width = n + m + 1;
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut flips = vec![false; m];
    for i in 0..m {
        let mut row = Vec::with_capacity(width);
        row.extend_from_slice(&rows[i]);
        for j in 0..m {
            row.push(if j == i { 1.0 } else { 0.0 });
        }
        row.push(rhs[i]);
        if row[width - 1] < 0.0 {
            for x in row.iter_mut() {
                *x = -*x;
            }
            row[n + i] = 1.0;
            flips[i] = true;
        }
        t.push(row);
    }
    let mut obj = vec![0.0f64; width];
    for j in (0..n).chain([width - 1]) {
        obj[j] = -t.iter().map(|r| r[j]).sum::<f64>();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let scale: f64 = t
        .iter()
        .flat_map(|r| r.iter().map(|x| x.abs()))
        .fold(1.0, f64::max);
    let cap = 60 + 12 * (m + n);
    for _ in 0..cap {
        // most negative reduced cost among real columns
        let mut q = usize::MAX;
        let mut best = -1e-9 * scale.max(1.0);
        for (j, &rc) in obj.iter().enumerate().take(n) {
            if rc < best {
                best = rc;
                q = j;
            }
        }
        if q == usize::MAX {
            // phase-1 optimum reached
            let value = -obj[width - 1];
            let tol = 1e-8 * scale.max(1.0);
            if value.abs() <= tol {
                return FloatPhase1::Feasible { basis };
            }
            if value > tol {
                let mut dual = Vec::with_capacity(m);
                for i in 0..m {
                    let mut y = 1.0 - obj[n + i];
                    if flips[i] {
                        y = -y;
                    }
                    dual.push(y);
                }
                return FloatPhase1::Infeasible { dual };
            }
            return FloatPhase1::Fail;
        }
        let mut leave = usize::MAX;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            if t[i][q] > 1e-11 * scale.max(1.0) {
                let ratio = t[i][width - 1] / t[i][q];
                if ratio < best_ratio {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if leave == usize::MAX {
            return FloatPhase1::Fail;
        }
        // standard float pivot
        let piv = t[leave][q];
        for x in t[leave].iter_mut() {
            *x /= piv;
        }
        let prow = t[leave].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == leave {
                continue;
            }
            let c = row[q];
            if c != 0.0 {
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x -= c * p;
                }
            }
        }
        let c = obj[q];
        if c != 0.0 {
            for (x, p) in obj.iter_mut().zip(&prow) {
                *x -= c * p;
            }
        }
        basis[leave] = q;
    }
    FloatPhase1::Fail
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn qi(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn qv(xs: &[(i64, i64)]) -> Vec<BigRational> {
        xs.iter().map(|&(n, d)| q(n, d)).collect()
    }

    #[test]
    fn simple_optimum() {
        // min -x1 - x2 s.t. x1 + x2 + s = 1
        let sf = StandardForm {
            rows: vec![qv(&[(1, 1), (1, 1), (1, 1)])],
            rhs: vec![qi(1)],
            objective: qv(&[(-1, 1), (-1, 1), (0, 1)]),
        };
        match solve(&sf) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, qi(-1));
                let sum = &x[0] + &x[1];
                assert_eq!(sum, qi(1));
            }
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn infeasible_with_farkas() {
        // x1 - x2 = 1 and -x1 + x2 = 1 cannot both hold with x >= 0
        let sf = StandardForm {
            rows: vec![qv(&[(1, 1), (-1, 1)]), qv(&[(-1, 1), (1, 1)])],
            rhs: vec![qi(1), qi(1)],
            objective: qv(&[(0, 1), (0, 1)]),
        };
        match solve(&sf) {
            LpOutcome::Infeasible { farkas } => {
                assert!(verify_farkas(&sf, &farkas));
            }
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn unbounded_detected() {
        // min -x1 s.t. x1 - x2 = 0
        let sf = StandardForm {
            rows: vec![qv(&[(1, 1), (-1, 1)])],
            rhs: vec![qi(0)],
            objective: qv(&[(-1, 1), (0, 1)]),
        };
        assert!(matches!(solve(&sf), LpOutcome::Unbounded));
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // Classic example that cycles under Dantzig's rule; Bland must
        // terminate at value -1/20.
        let sf = StandardForm {
            rows: vec![
                qv(&[(1, 4), (-60, 1), (-1, 25), (9, 1), (1, 1), (0, 1), (0, 1)]),
                qv(&[(1, 2), (-90, 1), (-1, 50), (3, 1), (0, 1), (1, 1), (0, 1)]),
                qv(&[(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (1, 1)]),
            ],
            rhs: vec![qi(0), qi(0), qi(1)],
            objective: qv(&[(-3, 4), (150, 1), (-1, 50), (6, 1), (0, 1), (0, 1), (0, 1)]),
        };
        match solve(&sf) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(-1, 20)),
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        // duplicated constraint leaves an artificial basic at zero
        let sf = StandardForm {
            rows: vec![qv(&[(1, 1), (1, 1)]), qv(&[(1, 1), (1, 1)])],
            rhs: vec![qi(1), qi(1)],
            objective: qv(&[(1, 1), (0, 1)]),
        };
        match solve(&sf) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, qi(0)),
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn fractional_data_and_degenerate_rhs() {
        // min x1 s.t. (2/3)x1 + (1/7)x2 = 5/21, x2 free-ish via slack pair
        let sf = StandardForm {
            rows: vec![qv(&[(2, 3), (1, 7)])],
            rhs: vec![q(5, 21)],
            objective: qv(&[(1, 1), (0, 1)]),
        };
        match solve(&sf) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, qi(0));
                assert_eq!(x[1], q(5, 3));
            }
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn float_prepass_agrees_on_easy_cases() {
        let feas = float_phase1(&vec![vec![1.0, 1.0, 1.0]], &[1.0]);
        assert!(matches!(feas, FloatPhase1::Feasible { .. }));
        let infeas = float_phase1(
            &vec![vec![1.0, -1.0], vec![-1.0, 1.0]],
            &[1.0, 1.0],
        );
        match infeas {
            FloatPhase1::Infeasible { dual } => {
                // y^T b > 0
                assert!(dual[0] + dual[1] > 0.5);
            }
            _ => panic!("expected infeasible guess"),
        }
    }
}
