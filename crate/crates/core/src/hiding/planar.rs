//! Plane constructions: the growing hidden sequence and the packing family
//! of hulls `conv(C ∪ β)`.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{verify_hidden_set, HidingWitness};
use crate::body::{BodyKind, BodySupport, ConvexBodyOracle};
use crate::error::{Error, Result};
use crate::hausdorff::{ray_level_search, MAX_DOUBLINGS};
use crate::numeric::{int, max, min, sqrt_bracket, Norm, QVector, Rational};
use crate::plane::{convex_hull, polygon_distance};

/// Affine frame `p = origin + alpha e1 + beta e2` with `e1` a recession
/// generator and `inf beta = -inf` over the body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarFrame {
    pub origin: QVector,
    pub e1: QVector,
    pub e2: QVector,
    /// Coordinate functionals of the basis `(e1, e2)`.
    pub e1_star: QVector,
    pub e2_star: QVector,
}

impl PlanarFrame {
    fn new(origin: QVector, e1: QVector, e2: QVector) -> Option<Self> {
        let det = &e1[0] * &e2[1] - &e1[1] * &e2[0];
        if det.is_zero() {
            return None;
        }
        let e1_star = QVector::new(vec![&e2[1] / &det, -&e2[0] / &det]);
        let e2_star = QVector::new(vec![-&e1[1] / &det, &e1[0] / &det]);
        Some(PlanarFrame { origin, e1, e2, e1_star, e2_star })
    }

    pub fn coords(&self, p: &QVector) -> (Rational, Rational) {
        let d = p - &self.origin;
        (self.e1_star.dot(&d), self.e2_star.dot(&d))
    }

    pub fn point(&self, alpha: &Rational, beta: &Rational) -> QVector {
        self.origin.add_scaled(alpha, &self.e1).add_scaled(beta, &self.e2)
    }
}

/// Chooses the frame of the plane construction, or explains why the body
/// does not admit one.
pub fn planar_frame(body: &ConvexBodyOracle, tol: &Rational) -> Result<PlanarFrame> {
    if body.dim() != 2 {
        return Err(Error::UnsupportedDimension(body.dim()));
    }
    let origin = body
        .interior_point()
        .ok_or_else(|| Error::PreconditionUnsatisfied("the body has empty interior".into()))?;
    let gens = body.recession_cone()?.generators();
    if !gens.lineality.is_empty() || gens.rays.is_empty() || gens.rays.len() > 2 {
        return Err(Error::BadConeShape);
    }
    let candidates: Vec<(QVector, QVector)> = if gens.rays.len() == 1 {
        let e1 = gens.rays[0].clone();
        [[1, 0], [0, 1], [-1, 0], [0, -1]].iter().map(|c| (e1.clone(), QVector::from_ints(c))).collect()
    } else {
        let (g1, g2) = (gens.rays[0].clone(), gens.rays[1].clone());
        vec![(g1.clone(), g2.clone()), (g2, g1)]
    };
    for (e1, e2) in candidates {
        let Some(frame) = PlanarFrame::new(origin.clone(), e1, e2) else {
            continue;
        };
        if body.support(&-&frame.e2_star, tol)? == BodySupport::PlusInfinity {
            return Ok(frame);
        }
    }
    Err(Error::PreconditionUnsatisfied("the transverse coordinate is bounded below on the body".into()))
}

/// Points `a_0, ..., a_{n-1}` in `origin + cone{e1, -e2}` with
/// `dist(a_k, C) >= k + tol`, increasing `e1*`, decreasing `e2*`, decreasing
/// slope `|e2*| / e1*`, and every pair hidden behind the body.
pub fn hidden_set_2d(body: &ConvexBodyOracle, n: usize, tol: &Rational) -> Result<HidingWitness> {
    Ok(hidden_sequence(body, n, tol)?.0)
}

/// The witness together with the frame and the interior anchors `c` used
/// at each step.
pub(crate) fn hidden_sequence(
    body: &ConvexBodyOracle,
    n: usize,
    tol: &Rational,
) -> Result<(HidingWitness, PlanarFrame, Vec<QVector>)> {
    if n == 0 {
        return Err(Error::InvalidInput("at least one point is required".into()));
    }
    if !tol.is_positive() {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let frame = planar_frame(body, tol)?;
    let norm = Norm::Sup;
    let level = |k: usize| Rational::from_integer((k as i64).into()) + tol;
    let start = &frame.e1 - &frame.e2;
    let t0 = ray_level_search(&frame.origin, &start, &level(0), body, tol, norm)?;
    let mut points = vec![frame.origin.add_scaled(&t0, &start)];
    let mut anchors = Vec::new();
    while points.len() < n {
        let last = points.last().expect("non-empty");
        let (alpha, beta) = frame.coords(last);
        let w = &beta * int(2);
        let slope = -&beta / &alpha;
        let floor = max(alpha.clone(), -&w / &slope);
        let mut h = Rational::one();
        let mut doublings = 0;
        let c = loop {
            if h > floor {
                let c = frame.point(&h, &w);
                if body.is_interior(&c) {
                    break c;
                }
            }
            h *= int(2);
            doublings += 1;
            if doublings > MAX_DOUBLINGS {
                return Err(Error::BudgetExceeded("no interior anchor found".into()));
            }
        };
        let v = &c - last;
        let t = ray_level_search(&c, &v, &level(points.len()), body, tol, norm)?;
        let next = c.add_scaled(&t, &v);
        let (a2, b2) = frame.coords(&next);
        if !(a2 > alpha && b2 < beta && -&b2 / &a2 < slope) {
            return Err(Error::PreconditionUnsatisfied("monotonicity of the sequence failed".into()));
        }
        anchors.push(c);
        points.push(next);
    }
    let bounds: Vec<Rational> = (0..n).map(level).collect();
    let pairs = if n >= 2 { verify_hidden_set(&points, body, tol)?.pairs } else { Vec::new() };
    let witness = HidingWitness { body: body.kind_name().into(), points, bounds, pairs };
    Ok((witness, frame, anchors))
}

/// Most subsets the packing family will enumerate.
pub const MAX_PACKING_POINTS: usize = 12;

/// The hulls `C_β = conv(C ∪ β)` over all subsets `β` of a hidden set `B`
/// at distance `eps`, with their pairwise Hausdorff distances.
///
/// `C` is replaced by the inscribed polygon through its boundary points at
/// the multiples of `step` inside the intervals `[window[2i], window[2i+1]]`,
/// extended upward. Each interval covers a hidden point together with its
/// tangent points and a margin of `2 eps + 2`, so near every hidden point the
/// reported distances exceed the true ones by at most `delta` and never fall
/// below them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingFamily {
    /// The hidden set `B`.
    pub points: Vec<QVector>,
    /// Members of each `β`, indexed by bit mask.
    pub subsets: Vec<Vec<usize>>,
    #[serde(with = "crate::numeric::rational_matrix_serde")]
    pub distances: Vec<Vec<Rational>>,
    #[serde(with = "crate::numeric::rational_serde")]
    pub step: Rational,
    #[serde(with = "crate::numeric::rational_vec_serde")]
    pub window: Vec<Rational>,
    #[serde(with = "crate::numeric::rational_serde")]
    pub delta: Rational,
    #[serde(with = "crate::numeric::rational_serde")]
    pub delta_report: Rational,
    pub witness: HidingWitness,
}

impl PackingFamily {
    pub fn distance(&self, i: usize, j: usize) -> &Rational {
        &self.distances[i][j]
    }
}

fn curve_height(kind: BodyKind, lift: &Rational, x: &Rational, tol: &Rational) -> Rational {
    let y = match kind {
        BodyKind::Parabola => x * x,
        BodyKind::Hyperbola => sqrt_bracket(&(x * x + Rational::one()), tol).1,
    };
    y + lift
}

fn boundary_sample(kind: BodyKind, lift: &Rational, lo: &Rational, hi: &Rational, step: &Rational, tol: &Rational) -> Vec<QVector> {
    let mut out = Vec::new();
    let mut x = lo.clone();
    while &x <= hi {
        out.push(QVector::new(vec![x.clone(), curve_height(kind, lift, &x, tol)]));
        x += step;
    }
    out
}

/// Builds the packing family for `k` hidden points at distance `eps`.
pub fn packing_family(body: &ConvexBodyOracle, eps: &Rational, k: usize, tol: &Rational, norm: Norm) -> Result<PackingFamily> {
    let ConvexBodyOracle::Epigraph { kind, lift } = body else {
        return Err(Error::UnsupportedBody("packing needs a curved epigraph body".into()));
    };
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    if k > MAX_PACKING_POINTS {
        return Err(Error::BudgetExceeded(format!("2^{k} sets exceed the family budget 2^{MAX_PACKING_POINTS}")));
    }
    if !eps.is_positive() || !tol.is_positive() {
        return Err(Error::InvalidInput("eps and tol must be positive".into()));
    }
    // points a with dist(a, C) > eps + 1, each shrunk onto [c0, a]
    let skip = eps.ceil().to_integer().try_into().unwrap_or(usize::MAX).saturating_add(1);
    let (sequence, frame, _) = hidden_sequence(body, skip + k, tol)?;
    let c0 = frame.origin.clone();
    let mut points = Vec::with_capacity(k);
    for a in &sequence.points[skip..] {
        let v = a - &c0;
        let t = ray_level_search(&c0, &v, eps, body, tol, norm)?;
        points.push(c0.add_scaled(&min(t, Rational::one()), &v));
    }
    let witness = verify_hidden_set(&points, body, tol).or_else(|e| match (k, e) {
        (1, Error::InvalidInput(_)) => Ok(HidingWitness {
            body: body.kind_name().into(),
            points: points.clone(),
            bounds: vec![body.distance_bracket(&points[0], norm, tol)?.0],
            pairs: Vec::new(),
        }),
        (_, e) => Err(e),
    })?;

    let step = Rational::new(1.into(), 32.into());
    let reach = (eps * int(2) + int(2)).ceil();
    let mut intervals: Vec<(Rational, Rational)> = points
        .iter()
        .map(|p| {
            let gap = curve_height(*kind, lift, &p[0], tol) - &p[1];
            let half = &reach + sqrt_bracket(&max(gap, Rational::zero()), tol).1.ceil();
            ((&p[0] - &half).floor(), (&p[0] + &half).ceil())
        })
        .collect();
    intervals.sort();
    let mut merged: Vec<(Rational, Rational)> = Vec::new();
    for (lo, hi) in intervals {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = max(last.1.clone(), hi),
            _ => merged.push((lo, hi)),
        }
    }
    let samples: Vec<Vec<QVector>> = merged.iter().map(|(lo, hi)| boundary_sample(*kind, lift, lo, hi, &step, tol)).collect();
    // chord sag of a curve with second derivative at most 2, plus rounding
    let delta = &step * &step / int(4) + tol;
    let delta_report = &delta * int(2);
    let top = samples.iter().flatten().chain(&points).map(|p| p[1].clone()).max().expect("non-empty") + int(1);
    let home: Vec<usize> = points
        .iter()
        .map(|p| merged.iter().position(|(lo, hi)| lo <= &p[0] && &p[0] <= hi).expect("every point has an interval"))
        .collect();

    // dist(b, C_α) for every b and α, 0 when b ∈ α, from the piece of C_α over the interval of b
    let count = 1usize << k;
    let subsets: Vec<Vec<usize>> = (0..count).map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect()).collect();
    let mut hulls: HashMap<(usize, usize), Vec<QVector>> = HashMap::new();
    let mut reach_of = vec![vec![Rational::zero(); k]; count];
    for (mask, row) in reach_of.iter_mut().enumerate() {
        for i in (0..k).filter(|i| mask >> i & 1 == 0) {
            let iv = home[i];
            let local = (0..k).filter(|&j| mask >> j & 1 == 1 && home[j] == iv).fold(0, |m, j| m | 1 << j);
            let hull = hulls.entry((iv, local)).or_insert_with(|| {
                let (lo, hi) = &merged[iv];
                let mut all = samples[iv].clone();
                all.push(QVector::new(vec![lo.clone(), top.clone()]));
                all.push(QVector::new(vec![hi.clone(), top.clone()]));
                all.extend((0..k).filter(|j| local >> j & 1 == 1).map(|j| points[j].clone()));
                convex_hull(&all)
            });
            row[i] = polygon_distance(&points[i], hull, norm);
        }
    }
    let window: Vec<Rational> = merged.into_iter().flat_map(|(lo, hi)| [lo, hi]).collect();
    let mut distances = vec![vec![Rational::zero(); count]; count];
    for a in 0..count {
        for b in a + 1..count {
            let mut d = Rational::zero();
            for (i, (ra, rb)) in reach_of[a].iter().zip(&reach_of[b]).enumerate().take(k) {
                let (in_a, in_b) = (a >> i & 1 == 1, b >> i & 1 == 1);
                if in_b && !in_a {
                    d = max(d, ra.clone());
                } else if in_a && !in_b {
                    d = max(d, rb.clone());
                }
            }
            distances[a][b] = d.clone();
            distances[b][a] = d;
        }
    }
    Ok(PackingFamily {
        points,
        subsets,
        distances,
        step,
        window,
        delta,
        delta_report,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn tol() -> Rational {
        rat(1, 1 << 24)
    }

    #[test]
    fn parabola_frame() {
        let frame = planar_frame(&ConvexBodyOracle::parabola(), &tol()).unwrap();
        assert_eq!(frame.e1, QVector::from_ints(&[0, 1]));
        assert_eq!(frame.e2, QVector::from_ints(&[1, 0]));
        let p = QVector::from_ints(&[3, 5]);
        let (a, b) = frame.coords(&p);
        assert_eq!(frame.point(&a, &b), p);
    }

    #[test]
    fn hyperbola_fails_the_precondition() {
        assert!(matches!(
            hidden_set_2d(&ConvexBodyOracle::hyperbola(), 3, &tol()),
            Err(Error::PreconditionUnsatisfied(_))
        ));
    }

    #[test]
    fn cone_shapes_are_checked() {
        let half_plane = crate::polyhedra::HPolyhedron::new(2, vec![(QVector::from_ints(&[0, 1]), int(0))]).unwrap();
        assert_eq!(hidden_set_2d(&ConvexBodyOracle::from(half_plane), 2, &tol()), Err(Error::BadConeShape));
        let square = crate::polyhedra::HPolyhedron::cube(2, &int(-1), &int(1));
        assert_eq!(hidden_set_2d(&ConvexBodyOracle::from(square), 2, &tol()), Err(Error::BadConeShape));
        let strip = crate::polyhedra::HPolyhedron::new(
            2,
            vec![(QVector::from_ints(&[1, 0]), int(1)), (QVector::from_ints(&[-1, 0]), int(1)), (QVector::from_ints(&[0, -1]), int(0))],
        )
        .unwrap();
        assert!(matches!(
            hidden_set_2d(&ConvexBodyOracle::from(strip), 2, &tol()),
            Err(Error::PreconditionUnsatisfied(_))
        ));
    }

    #[test]
    fn parabola_sequence() {
        let body = ConvexBodyOracle::parabola();
        let (w, frame, anchors) = hidden_sequence(&body, 4, &tol()).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.pairs.len(), 6);
        assert_eq!(anchors.len(), 3);
        assert!(w.certificates_hold(&body));
        for (k, p) in w.points.iter().enumerate() {
            let level = int(k as i64) + tol();
            assert!(!body.within(p, &level, Norm::Sup).unwrap());
        }
        let coords: Vec<_> = w.points.iter().map(|p| frame.coords(p)).collect();
        for pair in coords.windows(2) {
            let ((a0, b0), (a1, b1)) = (&pair[0], &pair[1]);
            assert!(a1 > a0 && b1 < b0 && (-b1 / a1) < (-b0 / a0));
        }
        let single = hidden_set_2d(&body, 1, &tol()).unwrap();
        assert!(single.pairs.is_empty());
        let (a, b) = frame.coords(&single.points[0]);
        assert_eq!(a, -b);
    }

    #[test]
    fn small_packing() {
        let body = ConvexBodyOracle::parabola();
        let fam = packing_family(&body, &int(1), 2, &tol(), Norm::Sup).unwrap();
        assert_eq!(fam.subsets.len(), 4);
        for i in 0..4 {
            assert!(fam.distance(i, i).is_zero());
            for j in 0..4 {
                assert_eq!(fam.distance(i, j), fam.distance(j, i));
                if i != j {
                    assert!(fam.distance(i, j) >= &(int(1) - &fam.delta_report));
                }
            }
        }
        assert!(matches!(packing_family(&body, &int(1), 13, &tol(), Norm::Sup), Err(Error::BudgetExceeded(_))));
    }
}
