//! Biorthogonal systems and the positively hiding approximant of a bounded
//! polyhedron.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{HidingWitness, PairCertificate};
use crate::error::{Error, Result};
use crate::numeric::linalg::nullspace;
use crate::numeric::lp::{lp_solve, LpOutcome, LpProblem};
use crate::numeric::{int, Norm, QVector, Rational};
use crate::polyhedra::{hrep_of, point_distance, recession_cone, support_value, vrep_of, HPolyhedron, Support, VPolyhedron};

/// `xstar . x = 1`; `xstar` is measured in the dual of `norm`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiorthogonalPair {
    pub x: QVector,
    pub xstar: QVector,
    pub norm: Norm,
}

/// `min ‖x‖` over `(x, λ)` subject to `row . (x, λ) = rhs`, ties broken by
/// the smallest `sum |x_i|`.
fn min_norm(norm: Norm, n: usize, extra: usize, eqs: &[(QVector, Rational)]) -> Result<Option<(Rational, QVector, QVector)>> {
    let width = 2 * n + extra + 1;
    let t = width - 1;
    let s = |j: usize| n + extra + j;
    let mut rows = Vec::new();
    for (row, rhs) in eqs {
        let padded = row.concat(&vec![Rational::zero(); n + 1]);
        rows.push((-&padded, -rhs.clone()));
        rows.push((padded, rhs.clone()));
    }
    let mut sum_row = QVector::zeros(width);
    for j in 0..n {
        for sign in [1, -1] {
            let mut r = QVector::zeros(width);
            r[j] = int(sign);
            r[s(j)] = -Rational::one();
            rows.push((r, Rational::zero()));
        }
        match norm {
            Norm::Sup => {
                let mut r = QVector::zeros(width);
                r[s(j)] = Rational::one();
                r[t] = -Rational::one();
                rows.push((r, Rational::zero()));
            }
            Norm::Sum => sum_row[s(j)] = Rational::one(),
        }
    }
    if norm == Norm::Sum {
        sum_row[t] = -Rational::one();
        rows.push((sum_row, Rational::zero()));
    }
    let nonneg = (n + extra)..width;
    let first = LpProblem::minimize(QVector::unit(width, t), rows.clone()).with_nonneg(nonneg.clone());
    let value = match lp_solve(&first)? {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Infeasible => return Ok(None),
        LpOutcome::Unbounded { .. } => unreachable!("norms are bounded below"),
    };
    rows.push((QVector::unit(width, t), value.clone()));
    let spread: QVector = (0..width).map(|j| if j >= n + extra && j < t { Rational::one() } else { Rational::zero() }).collect();
    let second = LpProblem::minimize(spread, rows).with_nonneg(nonneg);
    let LpOutcome::Optimal { point, .. } = lp_solve(&second)? else {
        unreachable!("the first stage optimum is feasible");
    };
    let x = point.iter().take(n).cloned().collect();
    let lambda = point.iter().skip(n).take(extra).cloned().collect();
    Ok(Some((value, x, lambda)))
}

/// `dist(g, span(basis))` in `norm`, with the nearest point of the span.
fn distance_to_span(g: &QVector, basis: &[QVector], norm: Norm) -> Result<(Rational, QVector)> {
    let n = g.dim();
    // x + sum λ_i b_i = g
    let eqs: Vec<(QVector, Rational)> = (0..n)
        .map(|j| {
            let mut row = QVector::unit(n, j).into_inner();
            row.extend(basis.iter().map(|b| b[j].clone()));
            (QVector::new(row), g[j].clone())
        })
        .collect();
    let (value, residual, _) = min_norm(norm, n, basis.len(), &eqs)?.expect("always feasible");
    Ok((value, g - &residual))
}

/// `k` biorthogonal pairs with `‖x*_n‖ = 1 <= ‖x_n‖ < 4`, built one step at
/// a time: `x*_k` annihilates every earlier `x_i` and lies farther than `1/4`
/// from the span of the earlier functionals; `x_k` is the shortest vector
/// with `x*_i(x_k) = 0` and `x*_k(x_k) = 1`.
pub fn biorthogonal_sequence(body: &HPolyhedron, k: usize, norm: Norm) -> Result<Vec<BiorthogonalPair>> {
    body.ensure_nonempty()?;
    if !recession_cone(body)?.is_trivial() {
        return Err(Error::UnboundedBody);
    }
    let dim = body.dim();
    let dual = norm.dual();
    let quarter = Rational::new(1.into(), 4.into());
    let mut pairs: Vec<BiorthogonalPair> = Vec::with_capacity(k);
    let mut norming: Vec<QVector> = Vec::new();
    for step in 0..k {
        let functionals: Vec<QVector> = pairs.iter().map(|p| p.xstar.clone()).collect();
        let xstar = loop {
            let mut killed: Vec<QVector> = pairs.iter().map(|p| p.x.clone()).collect();
            killed.extend(norming.iter().cloned());
            let candidates = nullspace(&killed, dim);
            if candidates.is_empty() {
                return Err(Error::DimensionExhausted { step });
            }
            let mut best: Option<(Rational, QVector, QVector)> = None;
            for g in candidates {
                let g = g.scale(&(Rational::one() / dual.of(&g)));
                let (d, nearest) = distance_to_span(&g, &functionals, dual)?;
                if best.as_ref().is_none_or(|(bd, _, _)| d > *bd) {
                    best = Some((d, g, nearest));
                }
            }
            let (d, g, nearest) = best.expect("non-empty candidates");
            if d > quarter {
                break g;
            }
            // a unit vector norming the nearby functional cannot be annihilated
            // by any functional within 1/4 of it
            norming.push(norm.norming_vector(&nearest));
        };
        let mut eqs: Vec<(QVector, Rational)> = functionals.iter().map(|f| (f.clone(), Rational::zero())).collect();
        eqs.push((xstar.clone(), Rational::one()));
        let (length, x, _) = min_norm(norm, dim, 0, &eqs)?.ok_or(Error::DimensionExhausted { step })?;
        if length >= int(4) {
            return Err(Error::DimensionExhausted { step });
        }
        pairs.push(BiorthogonalPair { x, xstar, norm });
    }
    Ok(pairs)
}

/// The approximant `C_eps` with its hidden points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Approximant {
    /// `cl(C + eps B̄)`.
    pub neighborhood: HPolyhedron,
    /// The neighborhood cut by `x*_n(x) <= eps / 8 + sup x*_n(C)`.
    pub set: HPolyhedron,
    pub pairs: Vec<BiorthogonalPair>,
    #[serde(with = "crate::numeric::rational_vec_serde")]
    pub sups: Vec<Rational>,
    /// Points `a_n = c_n + (eps / 4) x_n` with exact distances to `set` and
    /// midpoints as pair certificates.
    pub witness: HidingWitness,
}

/// Builds a positively hiding set within `eps` of the bounded polyhedron `C`.
pub fn positively_hiding_approximant(body: &HPolyhedron, eps: &Rational, k: usize, norm: Norm) -> Result<Approximant> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let pairs = biorthogonal_sequence(body, k, norm)?;
    let dim = body.dim();
    let corners = vrep_of(body)?;
    let ball = norm.ball_vertices(dim);
    let grown: Vec<QVector> = corners
        .points()
        .iter()
        .flat_map(|v| ball.iter().map(move |w| v.add_scaled(eps, w)))
        .collect();
    let neighborhood = hrep_of(&VPolyhedron::new(grown, Vec::new())?.reduced())?;
    let mut sups = Vec::with_capacity(k);
    let mut anchors = Vec::with_capacity(k);
    for p in &pairs {
        match support_value(body, &p.xstar)? {
            Support::Finite { value, point } => {
                sups.push(value);
                anchors.push(point);
            }
            Support::PlusInfinity { .. } => return Err(Error::UnboundedBody),
        }
    }
    let eighth = eps / int(8);
    let mut set = neighborhood.clone();
    for (p, s) in pairs.iter().zip(&sups) {
        set = set.with_row(p.xstar.clone(), s + &eighth)?;
    }
    let quarter = eps / int(4);
    let points: Vec<QVector> = anchors.iter().zip(&pairs).map(|(c, p)| c.add_scaled(&quarter, &p.x)).collect();
    let floor = eps / int(16);
    let mut bounds = Vec::with_capacity(k);
    for a in &points {
        let d = point_distance(a, &set, norm)?;
        if d < floor {
            return Err(Error::PreconditionUnsatisfied("hidden point closer than eps/16".into()));
        }
        bounds.push(d);
    }
    let half = Rational::new(1.into(), 2.into());
    let mut certificates = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let point = points[i].lerp(&points[j], &half);
            if !set.contains(&point) {
                return Err(Error::SegmentMissesBody { i, j });
            }
            certificates.push(PairCertificate { i, j, point });
        }
    }
    let witness = HidingWitness { body: "approximant".into(), points, bounds, pairs: certificates };
    Ok(Approximant { neighborhood, set, pairs, sups, witness })
}

/// `h_C(u) <= h_{C_eps}(u) <= h_C(u) + eps ‖u‖_*` on every probe direction.
pub fn check_sandwich(body: &HPolyhedron, approx: &HPolyhedron, eps: &Rational, norm: Norm, directions: &[QVector]) -> Result<bool> {
    let dual = norm.dual();
    for u in directions {
        let inner = support_value(body, u)?;
        let outer = support_value(approx, u)?;
        let (Some(lo), Some(hi)) = (inner.value(), outer.value()) else {
            return Ok(false);
        };
        if lo > hi || *hi > lo + eps * dual.of(u) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn cube(dim: usize) -> HPolyhedron {
        HPolyhedron::cube(dim, &int(-1), &int(1))
    }

    fn check_pairs(pairs: &[BiorthogonalPair], norm: Norm) {
        for (n, p) in pairs.iter().enumerate() {
            assert_eq!(norm.dual().of(&p.xstar), int(1));
            let len = norm.of(&p.x);
            assert!(len >= int(1) && len < int(4));
            for (m, q) in pairs.iter().enumerate() {
                let expected = if n == m { int(1) } else { int(0) };
                assert_eq!(p.xstar.dot(&q.x), expected);
            }
        }
    }

    #[test]
    fn unit_ball_first_pair() {
        let pairs = biorthogonal_sequence(&cube(3), 1, Norm::Sup).unwrap();
        assert_eq!(pairs[0].xstar, QVector::from_ints(&[1, 0, 0]));
        assert_eq!(pairs[0].x, QVector::from_ints(&[1, 0, 0]));
    }

    #[test]
    fn pairs_on_both_norms() {
        for norm in [Norm::Sup, Norm::Sum] {
            let pairs = biorthogonal_sequence(&cube(4), 4, norm).unwrap();
            check_pairs(&pairs, norm);
        }
        let skew = HPolyhedron::new(
            3,
            vec![
                (QVector::from_ints(&[1, 1, 0]), int(1)),
                (QVector::from_ints(&[-1, 0, 0]), int(1)),
                (QVector::from_ints(&[0, -1, 0]), int(1)),
                (QVector::from_ints(&[0, 0, 1]), int(2)),
                (QVector::from_ints(&[1, 1, -1]), int(3)),
            ],
        )
        .unwrap();
        check_pairs(&biorthogonal_sequence(&skew, 3, Norm::Sum).unwrap(), Norm::Sum);
    }

    #[test]
    fn biorthogonal_errors() {
        assert_eq!(biorthogonal_sequence(&cube(2), 3, Norm::Sup), Err(Error::DimensionExhausted { step: 2 }));
        let half = HPolyhedron::new(2, vec![(QVector::from_ints(&[0, 1]), int(0))]).unwrap();
        assert_eq!(biorthogonal_sequence(&half, 1, Norm::Sup), Err(Error::UnboundedBody));
    }

    #[test]
    fn approximant_in_the_plane() {
        let eps = rat(1, 2);
        let a = positively_hiding_approximant(&cube(2), &eps, 2, Norm::Sup).unwrap();
        assert!(a.witness.bounds.iter().all(|b| *b >= rat(1, 32)));
        let dirs: Vec<QVector> = [[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1], [-1, 1], [2, -1], [-1, -3]]
            .iter()
            .map(|d| QVector::from_ints(d))
            .collect();
        assert!(check_sandwich(&cube(2), &a.set, &eps, Norm::Sup, &dirs).unwrap());
        assert!(check_sandwich(&a.set, &a.neighborhood, &int(0), Norm::Sup, &dirs).is_ok());
        for c in &a.witness.pairs {
            assert!(a.set.contains(&c.point));
        }
    }
}
