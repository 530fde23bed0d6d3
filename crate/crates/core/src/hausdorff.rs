//! Hausdorff distances between polyhedra, ray level search and truncation
//! radii.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::body::ConvexBodyOracle;
use crate::error::{Error, Result};
use crate::numeric::lp::{lp_solve, LpOutcome, LpProblem};
use crate::numeric::{int, max, Norm, QVector, Rational};
use crate::polyhedra::{
    lineality_space, point_distance, point_distance_v, quotient_project, recession_cone, vrep_of, HPolyhedron,
    PolyhedralCone, Polyhedron, QuotientMap, VPolyhedron,
};

/// Budget for the doubling phases of the searches in this module.
pub const MAX_DOUBLINGS: u32 = 60;

/// Result of a Hausdorff distance computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HausdorffOutcome {
    Finite(#[serde(with = "crate::numeric::rational_serde")] Rational),
    /// A recession direction of one set outside the other's recession cone.
    Infinite { witness: QVector },
    /// An oracle computation stopped at its budget.
    Undecided { iterations: u32, detail: String },
}

impl HausdorffOutcome {
    pub fn is_finite(&self) -> bool {
        matches!(self, HausdorffOutcome::Finite(_))
    }

    pub fn finite_value(&self) -> Option<&Rational> {
        match self {
            HausdorffOutcome::Finite(v) => Some(v),
            _ => None,
        }
    }
}

/// First canonical generator of `from` outside `into`.
fn cone_escape(from: &PolyhedralCone, into: &PolyhedralCone) -> Option<QVector> {
    from.generators().all_rays().into_iter().find(|r| !into.contains(r))
}

/// `sup over a in P of dist(a, Q)`.
pub fn directed_distance(p: &HPolyhedron, q: &HPolyhedron, norm: Norm) -> Result<HausdorffOutcome> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: q.dim() });
    }
    let rec_p = recession_cone(p)?;
    let rec_q = recession_cone(q)?;
    if let Some(witness) = cone_escape(&rec_p, &rec_q) {
        return Ok(HausdorffOutcome::Infinite { witness });
    }
    // lineality(P) ⊆ rec(Q) in both orientations, so dist(., Q) is constant
    // along it and the sup is attained at a vertex of the pointed quotient
    let lineality = lineality_space(p)?;
    let map = QuotientMap::new(p.dim(), &lineality)?;
    let vertices: Vec<QVector> = if map.quotient_dim() == 0 {
        vec![QVector::zeros(p.dim())]
    } else {
        let Polyhedron::H(image) = quotient_project(&map, &Polyhedron::H(p.clone()))? else {
            unreachable!("H-form input projects to H-form");
        };
        vrep_of(&image)?.points().iter().map(|y| map.lift(y)).collect()
    };
    let mut best = Rational::zero();
    for v in &vertices {
        best = max(best, point_distance(v, q, norm)?);
    }
    Ok(HausdorffOutcome::Finite(best))
}

/// `max(directed(P, Q), directed(Q, P))`.
pub fn hausdorff_distance(p: &HPolyhedron, q: &HPolyhedron, norm: Norm) -> Result<HausdorffOutcome> {
    let forward = directed_distance(p, q, norm)?;
    let HausdorffOutcome::Finite(a) = forward else {
        return Ok(forward);
    };
    let backward = directed_distance(q, p, norm)?;
    let HausdorffOutcome::Finite(b) = backward else {
        return Ok(backward);
    };
    Ok(HausdorffOutcome::Finite(max(a, b)))
}

/// Directed distance between polyhedra in either representation.
pub fn directed_distance_any(p: &Polyhedron, q: &Polyhedron, norm: Norm) -> Result<HausdorffOutcome> {
    if let (Polyhedron::H(p), Polyhedron::H(q)) = (p, q) {
        return directed_distance(p, q, norm);
    }
    let rec_p = p.recession()?;
    let rec_q = q.recession()?;
    if let Some(witness) = cone_escape(&rec_p, &rec_q) {
        return Ok(HausdorffOutcome::Infinite { witness });
    }
    let generators = p.to_v()?;
    let mut best = Rational::zero();
    for v in generators.points() {
        best = max(best, q.distance(v, norm)?);
    }
    Ok(HausdorffOutcome::Finite(best))
}

pub fn hausdorff_distance_any(p: &Polyhedron, q: &Polyhedron, norm: Norm) -> Result<HausdorffOutcome> {
    let forward = directed_distance_any(p, q, norm)?;
    let HausdorffOutcome::Finite(a) = forward else {
        return Ok(forward);
    };
    let backward = directed_distance_any(q, p, norm)?;
    let HausdorffOutcome::Finite(b) = backward else {
        return Ok(backward);
    };
    Ok(HausdorffOutcome::Finite(max(a, b)))
}

/// Bracket `(lo, hi)` around the level crossing of `t -> dist(c0 + t v, C)`.
///
/// The function is convex and vanishes at `t = 0`, so `{t >= 0 : dist <= eps}`
/// is an interval `[0, t*]`; `lo <= t* <= hi`, `dist(c0 + lo v) <= eps` and
/// `dist(c0 + hi v) > eps` (or `lo = hi = t*` when solved exactly).
pub fn ray_level_bracket(
    c0: &QVector,
    v: &QVector,
    eps: &Rational,
    body: &ConvexBodyOracle,
    tol: &Rational,
    norm: Norm,
) -> Result<(Rational, Rational)> {
    let n = body.dim();
    for x in [c0, v] {
        if x.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.dim() });
        }
    }
    if !eps.is_positive() || !tol.is_positive() {
        return Err(Error::InvalidInput("eps and tol must be positive".into()));
    }
    if !body.contains(c0) {
        return Err(Error::PointNotInBody);
    }
    if body.recession_cone()?.contains(v) {
        return Err(Error::RayInsideCone);
    }
    if let ConvexBodyOracle::Polyhedral(h) = body {
        let t = polyhedral_level(c0, v, eps, h, norm)?;
        return Ok((t.clone(), t));
    }
    let point = |t: &Rational| c0.add_scaled(t, v);
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    let mut doublings = 0;
    while body.within(&point(&hi), eps, norm)? {
        lo = hi.clone();
        hi *= int(2);
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(Error::BudgetExceeded(format!("no level crossing after {MAX_DOUBLINGS} doublings")));
        }
    }
    let speed = norm.of(v);
    while (&hi - &lo) * &speed > *tol {
        let mid = (&lo + &hi) / int(2);
        if body.within(&point(&mid), eps, norm)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// `t > 0` with `|dist(c0 + t v, C) - eps| <= tol`; for oracle bodies the
/// returned `t` also satisfies `dist(c0 + t v, C) > eps`.
pub fn ray_level_search(
    c0: &QVector,
    v: &QVector,
    eps: &Rational,
    body: &ConvexBodyOracle,
    tol: &Rational,
    norm: Norm,
) -> Result<Rational> {
    ray_level_bracket(c0, v, eps, body, tol, norm).map(|(_, hi)| hi)
}

/// `max t` with `dist(c0 + t v, P) <= eps`, as one LP over `(x, t, aux)`.
fn polyhedral_level(c0: &QVector, v: &QVector, eps: &Rational, p: &HPolyhedron, norm: Norm) -> Result<Rational> {
    let n = p.dim();
    let aux = match norm {
        Norm::Sup => 0,
        Norm::Sum => n,
    };
    let width = n + 1 + aux;
    let mut rows: Vec<(QVector, Rational)> = p
        .rows()
        .iter()
        .map(|(a, b)| (a.concat(&vec![Rational::zero(); 1 + aux]), b.clone()))
        .collect();
    let mut sum_row = QVector::zeros(width);
    for i in 0..n {
        // e_i = c0_i + t v_i - x_i, bounded by eps (sup) or by s_i (sum)
        let mut up = QVector::zeros(width);
        up[i] = -Rational::one();
        up[n] = v[i].clone();
        let down = -&up;
        match norm {
            Norm::Sup => {
                rows.push((up, eps - &c0[i]));
                rows.push((down, eps + &c0[i]));
            }
            Norm::Sum => {
                let mut up = up;
                let mut down = down;
                up[n + 1 + i] = -Rational::one();
                down[n + 1 + i] = -Rational::one();
                rows.push((up, -c0[i].clone()));
                rows.push((down, c0[i].clone()));
                sum_row[n + 1 + i] = Rational::one();
            }
        }
    }
    if norm == Norm::Sum {
        rows.push((sum_row, eps.clone()));
    }
    let lp = LpProblem::maximize(QVector::unit(width, n), rows);
    match lp_solve(&lp)? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Unbounded { .. } => Err(Error::RayInsideCone),
        LpOutcome::Infeasible => Err(Error::PointNotInBody),
    }
}

/// `A_r = (A ∩ r B̄) + P` together with the radius used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Truncation {
    #[serde(with = "crate::numeric::rational_serde")]
    pub radius: Rational,
    pub set: VPolyhedron,
    /// Exact `dH(A_r, A)`.
    #[serde(with = "crate::numeric::rational_serde")]
    pub distance: Rational,
}

/// Builds `A_r` and its exact distance to `A` (finite because both share the
/// recession cone `P`).
pub fn truncate_at(a: &HPolyhedron, cone: &PolyhedralCone, r: &Rational, norm: Norm) -> Result<Truncation> {
    let center = QVector::zeros(a.dim());
    let ball = HPolyhedron::new(a.dim(), norm.ball_rows(&center, r))?;
    let part = vrep_of(&a.intersect(&ball)?)?;
    let set = VPolyhedron::new(part.points().to_vec(), cone.rays())?;
    // A_r ⊆ A, so only the sup over A of dist(., A_r) matters
    let whole = vrep_of(a)?;
    let mut distance = Rational::zero();
    for p in whole.points() {
        distance = max(distance, point_distance_v(p, &set, norm));
    }
    Ok(Truncation { radius: r.clone(), set, distance })
}

/// Radius `r` with `dH(A_r, A) <= eps`, by doubling from `dist(0, A)` and
/// bisecting to within `eps / 4` of the smallest feasible radius.
pub fn truncation_radius(a: &HPolyhedron, cone: &PolyhedralCone, eps: &Rational, norm: Norm) -> Result<Truncation> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    if !recession_cone(a)?.same_set(cone) {
        return Err(Error::ConeMismatch);
    }
    let r0 = point_distance(&QVector::zeros(a.dim()), a, norm)?;
    let first = truncate_at(a, cone, &r0, norm)?;
    if &first.distance <= eps {
        return Ok(first);
    }
    let mut lo = r0.clone();
    let mut step = Rational::one();
    let mut doublings = 0;
    let mut best = loop {
        let candidate = truncate_at(a, cone, &(&r0 + &step), norm)?;
        if &candidate.distance <= eps {
            break candidate;
        }
        lo = candidate.radius;
        step *= int(2);
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(Error::BudgetExceeded(format!("truncation radius beyond {MAX_DOUBLINGS} doublings")));
        }
    };
    let width = eps / int(4);
    while &best.radius - &lo > width {
        let mid = (&lo + &best.radius) / int(2);
        let candidate = truncate_at(a, cone, &mid, norm)?;
        if &candidate.distance <= eps {
            best = candidate;
        } else {
            lo = mid;
        }
    }
    Ok(best)
}

/// Both sides of `dH(P_a, P_0) <= dH(P_0, P_1) * max_i a_i` for
/// `P_a = {x : f_i . x <= a_i}`.
pub fn scaling_bound_check(fs: &[QVector], a: &[Rational], norm: Norm) -> Result<(Rational, Rational)> {
    if let Some(index) = a.iter().position(|x| x.is_negative()) {
        return Err(Error::NegativeOffset { index });
    }
    if fs.len() != a.len() {
        return Err(Error::DimensionMismatch { expected: fs.len(), found: a.len() });
    }
    let Some(dim) = fs.first().map(QVector::dim) else {
        return Ok((Rational::zero(), Rational::zero()));
    };
    let build = |offsets: Vec<Rational>| HPolyhedron::new(dim, fs.iter().cloned().zip(offsets).collect());
    let p_a = build(a.to_vec())?;
    let p_0 = build(vec![Rational::zero(); fs.len()])?;
    let p_1 = build(vec![Rational::one(); fs.len()])?;
    let finite = |o: HausdorffOutcome| match o {
        HausdorffOutcome::Finite(v) => Ok(v),
        other => Err(Error::InvalidInput(format!("offset family has infinite distance: {other:?}"))),
    };
    let lhs = finite(hausdorff_distance(&p_a, &p_0, norm)?)?;
    let unit = finite(hausdorff_distance(&p_0, &p_1, norm)?)?;
    let top = a.iter().cloned().max().unwrap_or_else(Rational::zero);
    Ok((lhs, unit * top))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn h(rows: &[(&[i64], i64)]) -> HPolyhedron {
        let dim = rows[0].0.len();
        HPolyhedron::new(dim, rows.iter().map(|(a, b)| (QVector::from_ints(a), int(*b))).collect()).unwrap()
    }

    fn square() -> HPolyhedron {
        HPolyhedron::cube(2, &int(-1), &int(1))
    }

    /// Ray `{(t, y) : t >= 0}`.
    fn ray_at(y: i64) -> HPolyhedron {
        h(&[(&[0, 1], y), (&[0, -1], -y), (&[-1, 0], 0)])
    }

    #[test]
    fn identical_sets() {
        assert_eq!(directed_distance(&square(), &square(), Norm::Sup).unwrap(), HausdorffOutcome::Finite(int(0)));
    }

    #[test]
    fn half_plane_against_abs_cone() {
        let p = h(&[(&[0, -1], 0)]);
        let q = h(&[(&[1, -1], 0), (&[-1, -1], 0)]);
        assert_eq!(
            directed_distance(&p, &q, Norm::Sup).unwrap(),
            HausdorffOutcome::Infinite { witness: QVector::from_ints(&[1, 0]) }
        );
    }

    #[test]
    fn parallel_rays() {
        let d = directed_distance(&ray_at(1), &ray_at(0), Norm::Sup).unwrap();
        assert_eq!(d, HausdorffOutcome::Finite(int(1)));
        // sampled lower bound along the ray agrees
        for k in 0..50 {
            let p = QVector::new(vec![rat(k, 4), int(1)]);
            assert!(point_distance(&p, &ray_at(0), Norm::Sup).unwrap() <= int(1));
        }
        assert_eq!(hausdorff_distance(&ray_at(1), &ray_at(0), Norm::Sup).unwrap(), HausdorffOutcome::Finite(int(1)));
    }

    #[test]
    fn square_against_center() {
        let origin = HPolyhedron::cube(2, &int(0), &int(0));
        assert_eq!(hausdorff_distance(&square(), &origin, Norm::Sup).unwrap(), HausdorffOutcome::Finite(int(1)));
        assert_eq!(hausdorff_distance(&square(), &origin, Norm::Sum).unwrap(), HausdorffOutcome::Finite(int(2)));
    }

    #[test]
    fn vertical_ray_against_abs_cone() {
        let p = h(&[(&[1, 0], 0), (&[-1, 0], 0), (&[0, -1], 0)]);
        let q = h(&[(&[1, -1], 0), (&[-1, -1], 0)]);
        assert_eq!(
            hausdorff_distance(&p, &q, Norm::Sup).unwrap(),
            HausdorffOutcome::Infinite { witness: QVector::from_ints(&[1, 1]) }
        );
    }

    #[test]
    fn outcome_documents() {
        let text = serde_json::to_string(&HausdorffOutcome::Finite(rat(1, 3))).unwrap();
        assert_eq!(text, r#"{"finite":"1/3"}"#);
        let text = serde_json::to_string(&HausdorffOutcome::Infinite { witness: QVector::from_ints(&[1, 0]) }).unwrap();
        assert_eq!(text, r#"{"infinite":{"witness":["1","0"]}}"#);
    }

    #[test]
    fn level_search_on_polyhedra() {
        let tol = rat(1, 1000);
        let body = ConvexBodyOracle::from(square());
        let o = QVector::from_ints(&[0, 0]);
        let t = ray_level_search(&o, &QVector::from_ints(&[1, 0]), &int(2), &body, &tol, Norm::Sup).unwrap();
        assert_eq!(t, int(3));
        let lower = ConvexBodyOracle::from(h(&[(&[0, 1], 0)]));
        let t = ray_level_search(&o, &QVector::from_ints(&[0, 1]), &int(5), &lower, &tol, Norm::Sup).unwrap();
        assert_eq!(t, int(5));
        let t = ray_level_search(&o, &QVector::from_ints(&[1, 1]), &int(2), &body, &tol, Norm::Sum).unwrap();
        assert_eq!(t, int(2));
        assert_eq!(
            ray_level_search(&o, &QVector::from_ints(&[1, -1]), &int(2), &lower, &tol, Norm::Sup),
            Err(Error::RayInsideCone)
        );
        assert_eq!(
            ray_level_search(&QVector::from_ints(&[5, 5]), &QVector::from_ints(&[1, 0]), &int(2), &body, &tol, Norm::Sup),
            Err(Error::PointNotInBody)
        );
    }

    #[test]
    fn level_search_on_parabola() {
        let tol = rat(1, 1 << 30);
        let body = ConvexBodyOracle::parabola();
        let o = QVector::from_ints(&[0, 0]);
        let (lo, hi) = ray_level_bracket(&o, &QVector::from_ints(&[1, 0]), &int(1), &body, &tol, Norm::Sup).unwrap();
        // (t - s)^2 = s at s = 1 gives t = 2
        assert!(lo <= int(2) && int(2) <= hi && &hi - &lo <= tol);
        assert!(body.within(&QVector::new(vec![lo.clone(), int(0)]), &int(1), Norm::Sup).unwrap());
        assert!(!body.within(&QVector::new(vec![hi, int(0)]), &int(1), Norm::Sup).unwrap());
        assert_eq!(
            ray_level_search(&o, &QVector::from_ints(&[0, 3]), &int(1), &body, &tol, Norm::Sup),
            Err(Error::RayInsideCone)
        );
    }

    #[test]
    fn truncation_examples() {
        let cone = PolyhedralCone::from_rays(2, vec![QVector::from_ints(&[1, 0])]).unwrap();
        let a = h(&[(&[-1, 0], 0), (&[0, -1], 0), (&[0, 1], 1)]);
        assert!(truncate_at(&a, &cone, &int(1), Norm::Sup).unwrap().distance.is_zero());
        let eps = rat(1, 4);
        let t = truncation_radius(&a, &cone, &eps, Norm::Sup).unwrap();
        assert!(t.distance <= eps);
        // feasibility starts at r = 1 - eps
        assert!(t.radius >= rat(3, 4) && t.radius <= rat(3, 4) + &eps / int(4));

        let square_cone = PolyhedralCone::trivial(2);
        let t = truncation_radius(&square(), &square_cone, &rat(1, 2), Norm::Sup).unwrap();
        assert!(t.distance <= rat(1, 2));
        assert!(t.radius >= rat(1, 2) && t.radius <= rat(5, 8));
        assert!(truncate_at(&square(), &square_cone, &int(1), Norm::Sup).unwrap().distance.is_zero());

        let abs_cone = h(&[(&[1, -1], 0), (&[-1, -1], 0)]);
        let rec = recession_cone(&abs_cone).unwrap();
        let t = truncation_radius(&abs_cone, &rec, &rat(1, 8), Norm::Sup).unwrap();
        assert!(t.radius.is_zero() && t.distance.is_zero());

        assert_eq!(truncation_radius(&square(), &cone, &eps, Norm::Sup), Err(Error::ConeMismatch));
    }

    #[test]
    fn scaling_bound_examples() {
        let fs = vec![QVector::from_ints(&[1, 0]), QVector::from_ints(&[0, 1])];
        let (lhs, rhs) = scaling_bound_check(&fs, &[int(0), int(0)], Norm::Sup).unwrap();
        assert!(lhs.is_zero() && rhs.is_zero());
        let (lhs, rhs) = scaling_bound_check(&fs, &[int(1), int(1)], Norm::Sup).unwrap();
        assert_eq!(lhs, rhs);
        let (lhs, rhs) = scaling_bound_check(&fs, &[int(2), int(3)], Norm::Sup).unwrap();
        assert!(lhs <= rhs);
        assert_eq!(lhs, int(3));
        assert_eq!(scaling_bound_check(&fs, &[int(1), int(-1)], Norm::Sup), Err(Error::NegativeOffset { index: 1 }));
    }
}
