//! Point distances and support values as exact linear programs.

use num_traits::{One, Signed, Zero};

use super::{HPolyhedron, VPolyhedron};
use crate::error::{Error, Result};
use crate::numeric::lp::{lp_solve, LpOutcome, LpProblem};
use crate::numeric::{Norm, QVector, Rational};

/// Outcome of `sup u . x` over a polyhedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Support {
    /// The value and a point attaining it.
    Finite { value: Rational, point: QVector },
    /// A recession ray `r` with `u . r > 0`.
    PlusInfinity { ray: QVector },
}

impl Support {
    pub fn is_finite(&self) -> bool {
        matches!(self, Support::Finite { .. })
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            Support::Finite { value, .. } => Some(value),
            Support::PlusInfinity { .. } => None,
        }
    }
}

/// Appends norm-epigraph rows for `‖x - p‖ <= aux` where `x` is given by
/// `coeffs[i]` (a row over the first `width` variables) and the auxiliary
/// variables start at column `width`. Returns the objective over all columns.
fn norm_rows(
    p: &QVector,
    coeffs: &[QVector],
    width: usize,
    norm: Norm,
    rows: &mut Vec<(QVector, Rational)>,
) -> (usize, QVector) {
    let n = p.dim();
    let aux = match norm {
        Norm::Sup => 1,
        Norm::Sum => n,
    };
    let total = width + aux;
    for i in 0..n {
        let slot = match norm {
            Norm::Sup => width,
            Norm::Sum => width + i,
        };
        let mut up = coeffs[i].concat(&vec![Rational::zero(); aux]);
        up[slot] = -Rational::one();
        let mut down = (-&coeffs[i]).concat(&vec![Rational::zero(); aux]);
        down[slot] = -Rational::one();
        rows.push((up, p[i].clone()));
        rows.push((down, -p[i].clone()));
    }
    let mut objective = QVector::zeros(total);
    for k in width..total {
        objective[k] = Rational::one();
    }
    (total, objective)
}

/// `dist(p, P)` together with a nearest point of `P`.
pub fn nearest_point(p: &QVector, poly: &HPolyhedron, norm: Norm) -> Result<(Rational, QVector)> {
    let n = poly.dim();
    if p.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
    }
    if poly.contains(p) {
        return Ok((Rational::zero(), p.clone()));
    }
    let coeffs: Vec<QVector> = (0..n).map(|i| QVector::unit(n, i)).collect();
    let mut rows = Vec::new();
    let (total, objective) = norm_rows(p, &coeffs, n, norm, &mut rows);
    let pad = vec![Rational::zero(); total - n];
    for (a, b) in poly.rows() {
        rows.push((a.concat(&pad), b.clone()));
    }
    let lp = LpProblem::minimize(objective, rows).with_nonneg(n..total);
    match lp_solve(&lp)? {
        LpOutcome::Optimal { value, point, .. } => Ok((value, point.iter().take(n).cloned().collect())),
        LpOutcome::Infeasible => Err(Error::EmptyPolyhedron),
        LpOutcome::Unbounded { .. } => unreachable!("distances are bounded below"),
    }
}

/// `min over x in P of ‖p - x‖`.
pub fn point_distance(p: &QVector, poly: &HPolyhedron, norm: Norm) -> Result<Rational> {
    nearest_point(p, poly, norm).map(|(d, _)| d)
}

/// Distance to `conv(points) + cone(rays)` with a nearest point.
pub fn nearest_point_v(p: &QVector, poly: &VPolyhedron, norm: Norm) -> (Rational, QVector) {
    let n = poly.dim();
    assert_eq!(p.dim(), n, "dimension mismatch");
    if let [only] = poly.points() {
        if poly.rays().is_empty() {
            return (norm.of(&(p - only)), only.clone());
        }
    }
    let k = poly.points().len();
    let width = k + poly.rays().len();
    let generators: Vec<&QVector> = poly.points().iter().chain(poly.rays()).collect();
    let coeffs: Vec<QVector> = (0..n)
        .map(|i| generators.iter().map(|g| g[i].clone()).collect())
        .collect();
    let mut rows = Vec::new();
    let (total, objective) = norm_rows(p, &coeffs, width, norm, &mut rows);
    let mut sum = QVector::zeros(total);
    for j in 0..k {
        sum[j] = Rational::one();
    }
    rows.push((sum.clone(), Rational::one()));
    rows.push((-&sum, -Rational::one()));
    let lp = LpProblem::minimize(objective, rows).with_nonneg(0..total);
    match lp_solve(&lp).expect("consistent dimensions") {
        LpOutcome::Optimal { value, point, .. } => {
            let mut x = QVector::zeros(n);
            for (w, g) in point.iter().zip(&generators) {
                if !w.is_zero() {
                    x = x.add_scaled(w, g);
                }
            }
            (value, x)
        }
        other => unreachable!("generator form is never empty: {other:?}"),
    }
}

pub fn point_distance_v(p: &QVector, poly: &VPolyhedron, norm: Norm) -> Rational {
    nearest_point_v(p, poly, norm).0
}

/// `sup u . x` over an H-polyhedron.
pub fn support_value(poly: &HPolyhedron, u: &QVector) -> Result<Support> {
    if u.dim() != poly.dim() {
        return Err(Error::DimensionMismatch { expected: poly.dim(), found: u.dim() });
    }
    let lp = LpProblem::maximize(u.clone(), poly.rows().to_vec());
    match lp_solve(&lp)? {
        LpOutcome::Optimal { value, point, .. } => Ok(Support::Finite { value, point }),
        LpOutcome::Unbounded { ray } => Ok(Support::PlusInfinity { ray }),
        LpOutcome::Infeasible => Err(Error::EmptyPolyhedron),
    }
}

/// `sup u . x` over a V-polyhedron, read off the generators.
pub fn support_value_v(poly: &VPolyhedron, u: &QVector) -> Support {
    if let Some(ray) = poly.rays().iter().find(|r| u.dot(r).is_positive()) {
        return Support::PlusInfinity { ray: ray.clone() };
    }
    let best = poly
        .points()
        .iter()
        .max_by(|a, b| u.dot(a).cmp(&u.dot(b)))
        .expect("at least one point");
    Support::Finite { value: u.dot(best), point: best.clone() }
}
