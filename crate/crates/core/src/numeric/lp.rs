//! Exact two-phase primal simplex over the rationals.
//!
//! Problems are `optimize c . x` subject to `row . x <= rhs`. Variables are
//! free unless marked non-negative. Every outcome carries a certificate: a
//! dual multiplier vector for `Optimal`, an improving recession ray for
//! `Unbounded`.

use num_traits::{One, Signed, Zero};

use super::{QVector, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: QVector,
    /// `(row, rhs)` meaning `row . x <= rhs`.
    pub rows: Vec<(QVector, Rational)>,
    /// Variables known to be `>= 0`; they are not split.
    pub nonneg: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// `duals[i] >= 0`, `sum duals[i] * row_i = ±objective` and
    /// `sum duals[i] * rhs_i = ±value` (sign `+` for `Max`).
    Optimal {
        value: Rational,
        point: QVector,
        duals: Vec<Rational>,
    },
    Unbounded {
        ray: QVector,
    },
    Infeasible,
}

impl LpProblem {
    pub fn new(sense: Sense, objective: QVector, rows: Vec<(QVector, Rational)>) -> Self {
        let n = objective.dim();
        LpProblem { sense, objective, rows, nonneg: vec![false; n] }
    }

    pub fn maximize(objective: QVector, rows: Vec<(QVector, Rational)>) -> Self {
        Self::new(Sense::Max, objective, rows)
    }

    pub fn minimize(objective: QVector, rows: Vec<(QVector, Rational)>) -> Self {
        Self::new(Sense::Min, objective, rows)
    }

    pub fn with_nonneg(mut self, vars: impl IntoIterator<Item = usize>) -> Self {
        for v in vars {
            self.nonneg[v] = true;
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    fn is_feasible(&self, x: &QVector) -> bool {
        self.rows.iter().all(|(a, b)| &a.dot(x) <= b)
            && self.nonneg.iter().zip(x.iter()).all(|(&nn, v)| !nn || !v.is_negative())
    }
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&QVector> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    /// Re-checks the attached certificate against `problem` exactly.
    pub fn verify(&self, problem: &LpProblem) -> bool {
        let n = problem.dim();
        let sign = match problem.sense {
            Sense::Max => Rational::one(),
            Sense::Min => -Rational::one(),
        };
        match self {
            LpOutcome::Optimal { value, point, duals } => {
                if !problem.is_feasible(point) || &problem.objective.dot(point) != value {
                    return false;
                }
                if duals.len() != problem.rows.len() || duals.iter().any(|y| y.is_negative()) {
                    return false;
                }
                let mut combo = QVector::zeros(n);
                let mut bound = Rational::zero();
                for ((a, b), y) in problem.rows.iter().zip(duals) {
                    if !y.is_zero() {
                        combo = combo.add_scaled(y, a);
                        bound += y * b;
                    }
                }
                // dual feasibility: free variables need equality, non-negative ones `>=`
                let target = problem.objective.scale(&sign);
                let dual_ok = (0..n).all(|j| {
                    if problem.nonneg[j] {
                        combo[j] >= target[j]
                    } else {
                        combo[j] == target[j]
                    }
                });
                dual_ok && bound == &sign * value
            }
            LpOutcome::Unbounded { ray } => {
                problem.rows.iter().all(|(a, _)| !a.dot(ray).is_positive())
                    && problem.nonneg.iter().zip(ray.iter()).all(|(&nn, v)| !nn || !v.is_negative())
                    && (&sign * problem.objective.dot(ray)).is_positive()
            }
            LpOutcome::Infeasible => true,
        }
    }
}

/// Dense simplex tableau in maximization form.
struct Tableau {
    /// Constraint rows over all columns.
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs `d_j`; optimal when all are `<= 0`.
    reduced: Vec<Rational>,
    value: Rational,
}

enum Step {
    Optimal,
    Unbounded(usize),
    Pivoted,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        let inv = Rational::one() / &self.rows[r][e];
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.reduced[e].is_zero() {
            let f = self.reduced[e].clone();
            for (x, p) in self.reduced.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.value += &f * &prhs;
        }
        self.basis[r] = e;
    }

    /// One Bland step restricted to the first `active` columns.
    fn step(&mut self, active: usize) -> Step {
        let Some(e) = (0..active).find(|&j| self.reduced[j].is_positive()) else {
            return Step::Optimal;
        };
        let mut best: Option<(usize, Rational)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][e];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / a;
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        match best {
            None => Step::Unbounded(e),
            Some((r, _)) => {
                self.pivot(r, e);
                Step::Pivoted
            }
        }
    }

    fn run(&mut self, active: usize) -> Option<usize> {
        loop {
            match self.step(active) {
                Step::Optimal => return None,
                Step::Unbounded(e) => return Some(e),
                Step::Pivoted => {}
            }
        }
    }

    fn reset_objective(&mut self, costs: &[Rational]) {
        self.reduced = costs.to_vec();
        self.value = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (d, t) in self.reduced.iter_mut().zip(&self.rows[i]) {
                if !t.is_zero() {
                    *d -= cb * t;
                }
            }
            self.value += cb * &self.rhs[i];
        }
    }
}

/// Solves `problem` exactly; Bland's rule guarantees termination.
pub fn lp_solve(problem: &LpProblem) -> Result<LpOutcome> {
    let n = problem.dim();
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    if problem.nonneg.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: problem.nonneg.len() });
    }
    if let Some((a, _)) = problem.rows.iter().find(|(a, _)| a.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: a.dim() });
    }
    let m = problem.rows.len();

    // structural columns: x_j (or x_j^+), then x_j^- for free j
    let mut columns: Vec<(usize, bool)> = (0..n).map(|j| (j, false)).collect();
    columns.extend((0..n).filter(|&j| !problem.nonneg[j]).map(|j| (j, true)));
    let structural = columns.len();
    let slack0 = structural;
    let negative_rows: Vec<usize> = (0..m).filter(|&i| problem.rows[i].1.is_negative()).collect();
    let art0 = slack0 + m;
    let total = art0 + negative_rows.len();

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (i, (a, b)) in problem.rows.iter().enumerate() {
        let flip = b.is_negative();
        let mut row = vec![Rational::zero(); total];
        for (k, &(j, neg)) in columns.iter().enumerate() {
            let v = if neg { -a[j].clone() } else { a[j].clone() };
            row[k] = if flip { -v } else { v };
        }
        row[slack0 + i] = if flip { -Rational::one() } else { Rational::one() };
        if flip {
            let k = negative_rows.binary_search(&i).unwrap();
            row[art0 + k] = Rational::one();
            basis.push(art0 + k);
            rhs.push(-b.clone());
        } else {
            basis.push(slack0 + i);
            rhs.push(b.clone());
        }
        rows.push(row);
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis,
        reduced: vec![Rational::zero(); total],
        value: Rational::zero(),
    };

    if !negative_rows.is_empty() {
        let mut phase1 = vec![Rational::zero(); total];
        for c in phase1.iter_mut().skip(art0) {
            *c = -Rational::one();
        }
        tab.reset_objective(&phase1);
        tab.run(total);
        if tab.value.is_negative() {
            return Ok(LpOutcome::Infeasible);
        }
        // drive zero-level artificials out of the basis
        for r in 0..m {
            if tab.basis[r] >= art0 {
                if let Some(e) = (0..art0).find(|&j| !tab.rows[r][j].is_zero()) {
                    tab.pivot(r, e);
                }
            }
        }
        debug_assert!(tab.basis.iter().all(|&b| b < art0));
    }

    let sign = match problem.sense {
        Sense::Max => Rational::one(),
        Sense::Min => -Rational::one(),
    };
    let mut costs = vec![Rational::zero(); total];
    for (k, &(j, neg)) in columns.iter().enumerate() {
        let c = &problem.objective[j] * &sign;
        costs[k] = if neg { -c } else { c };
    }
    tab.reset_objective(&costs);

    let to_point = |values: &[Rational]| -> QVector {
        let mut x = QVector::zeros(n);
        for (k, &(j, neg)) in columns.iter().enumerate() {
            if neg {
                x[j] -= &values[k];
            } else {
                x[j] += &values[k];
            }
        }
        x
    };

    if let Some(e) = tab.run(art0) {
        let mut dir = vec![Rational::zero(); total];
        dir[e] = Rational::one();
        for (i, &b) in tab.basis.iter().enumerate() {
            dir[b] = -tab.rows[i][e].clone();
        }
        return Ok(LpOutcome::Unbounded { ray: to_point(&dir[..structural]) });
    }

    let mut values = vec![Rational::zero(); total];
    for (i, &b) in tab.basis.iter().enumerate() {
        values[b] = tab.rhs[i].clone();
    }
    let point = to_point(&values[..structural]);
    let duals: Vec<Rational> = (0..m).map(|i| -tab.reduced[slack0 + i].clone()).collect();
    let value = problem.objective.dot(&point);
    Ok(LpOutcome::Optimal { value, point, duals })
}
