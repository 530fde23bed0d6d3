//! Hidden sets: finite point sets outside a convex body whose pairwise
//! segments all meet the body.

mod dual;
mod planar;

pub use dual::{
    biorthogonal_sequence, check_sandwich, positively_hiding_approximant, Approximant, BiorthogonalPair,
};
pub use planar::{hidden_set_2d, packing_family, planar_frame, PackingFamily, PlanarFrame};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::body::ConvexBodyOracle;
use crate::error::{Error, Result};
use crate::hausdorff::ray_level_search;
use crate::numeric::lp::{lp_solve, LpOutcome, LpProblem};
use crate::numeric::{Norm, QVector, Rational};
use crate::polyhedra::{quotient_project, recession_cone, HPolyhedron, PolyhedralCone, Polyhedron, QuotientMap};

/// A point of `[a_i, a_j]` inside the body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCertificate {
    pub i: usize,
    pub j: usize,
    pub point: QVector,
}

/// Hidden points with per-point bounds `dist(a_i, C) >= bounds[i]` and one
/// certificate per pair `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HidingWitness {
    pub body: String,
    pub points: Vec<QVector>,
    #[serde(with = "crate::numeric::rational_vec_serde")]
    pub bounds: Vec<Rational>,
    pub pairs: Vec<PairCertificate>,
}

impl HidingWitness {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min_bound(&self) -> Option<&Rational> {
        self.bounds.iter().min()
    }

    /// Re-checks every certificate against `body`: points outside, pair points
    /// on their segments and inside.
    pub fn certificates_hold(&self, body: &ConvexBodyOracle) -> bool {
        let n = self.points.len();
        self.points.iter().all(|p| !body.contains(p))
            && self.pairs.len() == n * n.saturating_sub(1) / 2
            && self.pairs.iter().all(|c| {
                c.i < c.j
                    && c.j < n
                    && body.contains(&c.point)
                    && segment_parameter(&self.points[c.i], &self.points[c.j], &c.point).is_some()
            })
    }
}

/// `s` in `[0, 1]` with `p = a + s (b - a)`, if any.
pub fn segment_parameter(a: &QVector, b: &QVector, p: &QVector) -> Option<Rational> {
    let d = b - a;
    let k = (0..d.dim()).find(|&k| !d[k].is_zero())?;
    let s = (&p[k] - &a[k]) / &d[k];
    let inside = !s.is_negative() && s <= Rational::one();
    (inside && a.lerp(b, &s) == *p).then_some(s)
}

fn check_distinct(points: &[QVector]) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(Error::InvalidInput(format!("points {i} and {j} coincide")));
            }
        }
    }
    Ok(())
}

/// Certifies that `points` are hidden behind `body`: each point is outside
/// and each segment meets the body, searched down to `tol`.
pub fn verify_hidden_set(points: &[QVector], body: &ConvexBodyOracle, tol: &Rational) -> Result<HidingWitness> {
    if points.len() < 2 {
        return Err(Error::InvalidInput("a hidden set needs at least two points".into()));
    }
    if !tol.is_positive() {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    for p in points {
        if p.dim() != body.dim() {
            return Err(Error::DimensionMismatch { expected: body.dim(), found: p.dim() });
        }
    }
    check_distinct(points)?;
    if let Some(index) = points.iter().position(|p| body.contains(p)) {
        return Err(Error::PointInsideBody { index });
    }
    let mut bounds = Vec::with_capacity(points.len());
    for p in points {
        bounds.push(body.distance_bracket(p, Norm::Sup, tol)?.0);
    }
    let mut pairs = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let point = body.segment_point(&points[i], &points[j], tol).ok_or(Error::SegmentMissesBody { i, j })?;
            pairs.push(PairCertificate { i, j, point });
        }
    }
    Ok(HidingWitness { body: body.kind_name().into(), points: points.to_vec(), bounds, pairs })
}

/// Coefficients showing that `[x, y]` meets `conv{c, c_x, c_y}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullTransfer {
    #[serde(with = "crate::numeric::rational_serde")]
    pub u: Rational,
    #[serde(with = "crate::numeric::rational_serde")]
    pub alpha: Rational,
    #[serde(with = "crate::numeric::rational_serde")]
    pub alpha_x: Rational,
    #[serde(with = "crate::numeric::rational_serde")]
    pub alpha_y: Rational,
    /// `u x + (1 - u) y`.
    pub point: QVector,
}

/// Given `c = t a + (1-t) b`, `x = t_x a + (1-t_x) c_x` and
/// `y = t_y b + (1-t_y) c_y`, returns `u` and weights with
/// `u x + (1-u) y = alpha c + alpha_x c_x + alpha_y c_y`.
#[allow(clippy::too_many_arguments)]
pub fn hull_hiding_transfer(
    a: &QVector,
    b: &QVector,
    x: &QVector,
    y: &QVector,
    c: &QVector,
    c_x: &QVector,
    c_y: &QVector,
    t_x: &Rational,
    t_y: &Rational,
    t: &Rational,
) -> Result<HullTransfer> {
    let one = Rational::one();
    let unit = |s: &Rational| !s.is_negative() && *s <= one;
    if !t_x.is_positive() || !t_y.is_positive() || !unit(t_x) || !unit(t_y) {
        return Err(Error::DegenerateDecomposition("t_x and t_y must lie in (0, 1]".into()));
    }
    if !unit(t) {
        return Err(Error::DegenerateDecomposition("t must lie in [0, 1]".into()));
    }
    if c_x.lerp(a, t_x) != *x {
        return Err(Error::DegenerateDecomposition("x is not t_x a + (1 - t_x) c_x".into()));
    }
    if c_y.lerp(b, t_y) != *y {
        return Err(Error::DegenerateDecomposition("y is not t_y b + (1 - t_y) c_y".into()));
    }
    if b.lerp(a, t) != *c {
        return Err(Error::DegenerateDecomposition("c is not t a + (1 - t) b".into()));
    }
    let denom = t * t_y + (&one - t) * t_x;
    let u = t * t_y / denom;
    let alpha = &u * t_x + (&one - &u) * t_y;
    let alpha_x = &u * (&one - t_x);
    let alpha_y = (&one - &u) * (&one - t_y);
    let point = y.lerp(x, &u);
    let combo = c.scale(&alpha).add_scaled(&alpha_x, c_x).add_scaled(&alpha_y, c_y);
    if &alpha + &alpha_x + &alpha_y != one || combo != point {
        return Err(Error::DegenerateDecomposition("transfer identity failed".into()));
    }
    Ok(HullTransfer { u, alpha, alpha_x, alpha_y, point })
}

/// Scales points hidden behind `cone` so that the `n`-th lies at distance
/// at least `n + 1` from `body`, keeping every pair hidden behind the cone.
pub fn inflate_hidden_set(
    points: &[QVector],
    body: &ConvexBodyOracle,
    cone: &PolyhedralCone,
    tol: &Rational,
    norm: Norm,
) -> Result<HidingWitness> {
    let dim = body.dim();
    if cone.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: cone.dim() });
    }
    let origin = QVector::zeros(dim);
    if !body.contains(&origin) {
        return Err(Error::PointNotInBody);
    }
    let rec = body.recession_cone()?;
    if !rec.contains_cone(cone) {
        return Err(Error::InvalidInput("cone is not contained in the recession cone".into()));
    }
    check_distinct(points)?;
    if points.iter().any(|a| rec.contains(a)) {
        return Err(Error::RayInsideCone);
    }
    let cone_body = ConvexBodyOracle::Polyhedral(cone.to_hpolyhedron());
    // crossing parameters tau with tau a_n + (1 - tau) a_m in the cone
    let mut taus = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let p = cone_body.segment_point(&points[i], &points[j], tol).ok_or(Error::NotHidden { i, j })?;
            let s = segment_parameter(&points[i], &points[j], &p).ok_or(Error::NotHidden { i, j })?;
            taus.push((i, j, Rational::one() - s, p));
        }
    }
    let mut scales = Vec::with_capacity(points.len());
    let mut bounds = Vec::with_capacity(points.len());
    for (n, a) in points.iter().enumerate() {
        let eps = Rational::from_integer((n as i64 + 1).into());
        scales.push(ray_level_search(&origin, a, &eps, body, tol, norm)?);
        bounds.push(eps);
    }
    let scaled: Vec<QVector> = points.iter().zip(&scales).map(|(a, t)| a.scale(t)).collect();
    let mut pairs = Vec::new();
    for (i, j, tau, c) in taus {
        let (t_n, t_m) = (&scales[i], &scales[j]);
        let denom = &tau * t_m + (Rational::one() - &tau) * t_n;
        let u = &tau * t_m / &denom;
        let point = scaled[j].lerp(&scaled[i], &u);
        if point != c.scale(&(t_n * t_m / &denom)) || !body.contains(&point) {
            return Err(Error::NotHidden { i, j });
        }
        pairs.push(PairCertificate { i, j, point });
    }
    Ok(HidingWitness { body: body.kind_name().into(), points: scaled, bounds, pairs })
}

/// Lifts points hidden behind the image `q(C)` to points hidden behind `C`,
/// one fiber at a time.
pub fn lift_hidden_set(map: &QuotientMap, hidden: &[QVector], body: &HPolyhedron) -> Result<Vec<QVector>> {
    if map.ambient_dim() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), found: map.ambient_dim() });
    }
    if !map.kernel_in_lineality(body) {
        return Err(Error::KernelNotInLineality);
    }
    if map.quotient_dim() == 0 {
        return Err(Error::InvalidInput("quotient by the whole space".into()));
    }
    let Polyhedron::H(image) = quotient_project(map, &Polyhedron::H(body.clone()))? else {
        unreachable!("H-form input projects to H-form");
    };
    for p in hidden {
        if p.dim() != image.dim() {
            return Err(Error::DimensionMismatch { expected: image.dim(), found: p.dim() });
        }
    }
    check_distinct(hidden)?;
    let image_body = ConvexBodyOracle::Polyhedral(image.clone());
    let tiny = Rational::new(1.into(), 1024.into());
    let rec_normals = recession_cone(body)?.normals();
    let kernel = map.kernel_basis().to_vec();
    let mut lifted: Vec<QVector> = Vec::with_capacity(hidden.len());
    for (n, target) in hidden.iter().enumerate() {
        let base = map.lift(target);
        if image.contains(target) {
            lifted.push(base);
            continue;
        }
        // fibers a_i' = (c_i - u_i a_i) / (1 - u_i) over earlier exterior points
        let mut fibers = Vec::new();
        for (i, earlier) in hidden[..n].iter().enumerate() {
            if image.contains(earlier) {
                continue;
            }
            let crossing = image_body.segment_point(earlier, target, &tiny).ok_or(Error::NotHidden { i, j: n })?;
            let s = segment_parameter(earlier, target, &crossing).ok_or(Error::NotHidden { i, j: n })?;
            let u = Rational::one() - s;
            let c = map.lift(&crossing);
            fibers.push(c.add_scaled(&-&u, &lifted[i]).scale(&(Rational::one() / (Rational::one() - &u))));
        }
        if fibers.is_empty() {
            lifted.push(base);
            continue;
        }
        lifted.push(fiber_meet(&fibers, &kernel, &rec_normals).ok_or(Error::LiftInfeasible { index: n })?);
    }
    Ok(lifted)
}

/// A point of `∩ (f_i + (ker ∩ rec))` written as `f_0 + K λ`.
fn fiber_meet(fibers: &[QVector], kernel: &[QVector], rec_normals: &[QVector]) -> Option<QVector> {
    let base = &fibers[0];
    if kernel.is_empty() {
        return fibers.iter().all(|f| f == base).then(|| base.clone());
    }
    let k = kernel.len();
    let mut rows = Vec::new();
    for f in fibers {
        let shift = base - f;
        for normal in rec_normals {
            let row: QVector = kernel.iter().map(|v| normal.dot(v)).collect();
            rows.push((row, -normal.dot(&shift)));
        }
    }
    let lp = LpProblem::maximize(QVector::zeros(k), rows);
    match lp_solve(&lp).ok()? {
        LpOutcome::Optimal { point, .. } => {
            let mut x = base.clone();
            for (l, v) in point.iter().zip(kernel) {
                x = x.add_scaled(l, v);
            }
            Some(x)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn pts(coords: &[(i64, i64)]) -> Vec<QVector> {
        coords.iter().map(|&(x, y)| QVector::from_ints(&[x, y])).collect()
    }

    fn tol() -> Rational {
        rat(1, 1 << 20)
    }

    #[test]
    fn verifier_on_the_parabola() {
        let body = ConvexBodyOracle::parabola();
        let w = verify_hidden_set(&pts(&[(-2, 2), (2, 2)]), &body, &tol()).unwrap();
        assert_eq!(w.pairs[0].point, QVector::from_ints(&[0, 2]));
        assert!(w.certificates_hold(&body));
        assert!(w.bounds.iter().all(|b| b.is_positive()));
        assert_eq!(
            verify_hidden_set(&pts(&[(0, 1), (2, 2)]), &body, &tol()),
            Err(Error::PointInsideBody { index: 0 })
        );
        let lifted = ConvexBodyOracle::lifted(crate::body::BodyKind::Parabola, int(1));
        assert_eq!(
            verify_hidden_set(&pts(&[(-2, 0), (2, 0)]), &lifted, &tol()),
            Err(Error::SegmentMissesBody { i: 0, j: 1 })
        );
    }

    #[test]
    fn verifier_on_a_polyhedron() {
        let strip = HPolyhedron::new(2, vec![(QVector::from_ints(&[1, 0]), int(1)), (QVector::from_ints(&[-1, 0]), int(1))]).unwrap();
        let body = ConvexBodyOracle::from(strip);
        let w = verify_hidden_set(&pts(&[(-3, 0), (3, 4), (5, -1)]), &body, &tol());
        assert_eq!(w, Err(Error::SegmentMissesBody { i: 1, j: 2 }));
        let w = verify_hidden_set(&pts(&[(-3, 0), (3, 4)]), &body, &tol()).unwrap();
        assert_eq!(w.bounds, vec![int(2), int(2)]);
        assert!(w.certificates_hold(&body));
    }

    #[test]
    fn transfer_examples() {
        let a = QVector::from_ints(&[0, 0]);
        let b = QVector::from_ints(&[4, 0]);
        let c = a.lerp(&b, &rat(1, 2));
        let cx = QVector::from_ints(&[1, 3]);
        let cy = QVector::from_ints(&[3, 6]);
        let (tx, ty, t) = (rat(1, 2), rat(1, 3), rat(1, 2));
        let x = cx.lerp(&a, &tx);
        let y = cy.lerp(&b, &ty);
        let r = hull_hiding_transfer(&a, &b, &x, &y, &c, &cx, &cy, &tx, &ty, &t).unwrap();
        assert_eq!(r.u, rat(2, 5));
        assert_eq!(&r.alpha + &r.alpha_x + &r.alpha_y, int(1));

        let r = hull_hiding_transfer(&a, &b, &a, &b, &c, &cx, &cy, &int(1), &int(1), &t).unwrap();
        assert_eq!(r.u, t);
        assert_eq!(r.point, c);

        let r = hull_hiding_transfer(&a, &b, &x, &y, &a, &cx, &cy, &tx, &ty, &int(1)).unwrap();
        assert_eq!(r.u, int(1));
        assert_eq!(r.point, x);

        assert!(matches!(
            hull_hiding_transfer(&a, &b, &x, &y, &c, &cx, &cy, &int(0), &ty, &t),
            Err(Error::DegenerateDecomposition(_))
        ));
        assert!(matches!(
            hull_hiding_transfer(&a, &b, &y, &y, &c, &cx, &cy, &tx, &ty, &t),
            Err(Error::DegenerateDecomposition(_))
        ));
    }

    #[test]
    fn inflation_behind_the_abs_cone() {
        // C = {y >= |x| - 1}, hidden behind V = {y >= |x|}
        let body = ConvexBodyOracle::from(
            HPolyhedron::new(2, vec![(QVector::from_ints(&[1, -1]), int(1)), (QVector::from_ints(&[-1, -1]), int(1))])
                .unwrap(),
        );
        let cone = body.recession_cone().unwrap();
        let w = inflate_hidden_set(&pts(&[(-2, 1), (2, 1)]), &body, &cone, &tol(), Norm::Sup).unwrap();
        assert!(w.certificates_hold(&body));
        for (n, p) in w.points.iter().enumerate() {
            assert!(crate::polyhedra::point_distance(p, body.as_polyhedron().unwrap(), Norm::Sup).unwrap() > int(n as i64));
        }
        for c in &w.pairs {
            assert!(cone.contains(&c.point));
        }
    }

    #[test]
    fn inflation_rejects_unhidden_points() {
        let body = ConvexBodyOracle::parabola();
        let cone = body.recession_cone().unwrap();
        assert_eq!(
            inflate_hidden_set(&pts(&[(1, 0), (2, 0)]), &body, &cone, &tol(), Norm::Sup),
            Err(Error::NotHidden { i: 0, j: 1 })
        );
        let w = inflate_hidden_set(&pts(&[(-1, 1), (1, 1)]), &body, &cone, &tol(), Norm::Sup).unwrap();
        assert!(w.certificates_hold(&body));
        assert_eq!(
            inflate_hidden_set(&pts(&[(0, 1), (1, 1)]), &body, &cone, &tol(), Norm::Sup),
            Err(Error::RayInsideCone)
        );
    }

    #[test]
    fn lifting_through_a_line() {
        let body = HPolyhedron::new(
            3,
            vec![(QVector::from_ints(&[1, -1, 0]), int(0)), (QVector::from_ints(&[-1, -1, 0]), int(0))],
        )
        .unwrap();
        let map = QuotientMap::new(3, &[QVector::from_ints(&[0, 0, 1])]).unwrap();
        let hidden = pts(&[(-2, 1), (2, 1), (0, 5)]);
        let lifted = lift_hidden_set(&map, &hidden[..2], &body).unwrap();
        for (l, h) in lifted.iter().zip(&hidden) {
            assert_eq!(&map.project(l), h);
        }
        let oracle = ConvexBodyOracle::from(body.clone());
        assert!(verify_hidden_set(&lifted, &oracle, &tol()).unwrap().certificates_hold(&oracle));

        // a point of the image lifts into the body
        let lifted = lift_hidden_set(&map, &hidden, &body).unwrap();
        assert!(body.contains(&lifted[2]));

        let single = lift_hidden_set(&map, &hidden[..1], &body).unwrap();
        assert_eq!(single.len(), 1);

        let identity = QuotientMap::identity(3);
        let flat = vec![QVector::from_ints(&[-2, 1, 7]), QVector::from_ints(&[2, 1, -7])];
        assert_eq!(lift_hidden_set(&identity, &flat, &body).unwrap(), flat);

        let tilted = QuotientMap::new(3, &[QVector::from_ints(&[1, 0, 0])]).unwrap();
        assert_eq!(lift_hidden_set(&tilted, &hidden[..1], &body), Err(Error::KernelNotInLineality));
    }
}
