//! Closed convex sets given by exact queries.
//!
//! The epigraph bodies `{(x, y) : y >= f(x) + lift}` with `f(x) = x^2`
//! (parabola) or `f(x) = sqrt(x^2 + 1)` (hyperbola) reduce every query to one
//! exact primitive: whether `f(x) <= a x + c` for some `x` in `[p, q]`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::lp::{lp_solve, LpOutcome, LpProblem};
use crate::numeric::{int, sqrt_bracket, Norm, QVector, Rational};
use crate::plane::{ball_polygon, upper_chain};
use crate::polyhedra::{point_distance, recession_cone, support_value, HPolyhedron, PolyhedralCone, Support};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyKind {
    Parabola,
    Hyperbola,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConvexBodyOracle {
    Epigraph { kind: BodyKind, lift: Rational },
    Polyhedral(HPolyhedron),
}

/// Support value of a body, bracketed when irrational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BodySupport {
    Finite { lo: Rational, hi: Rational },
    PlusInfinity,
}

impl BodySupport {
    pub fn is_finite(&self) -> bool {
        matches!(self, BodySupport::Finite { .. })
    }
}

fn sq(x: &Rational) -> Rational {
    x * x
}

/// `f(x) <= a x + c` at a single point.
fn below_at(kind: BodyKind, x: &Rational, a: &Rational, c: &Rational) -> bool {
    let line = a * x + c;
    match kind {
        BodyKind::Parabola => sq(x) <= line,
        BodyKind::Hyperbola => !line.is_negative() && sq(x) + Rational::one() <= sq(&line),
    }
}

/// Compares `a / sqrt(1 - a^2)` with `p`, for `|a| < 1`.
fn hyperbola_argmin_cmp(a: &Rational, p: &Rational) -> Ordering {
    let (sa, sp) = (sign(a), sign(p));
    if sa != sp {
        return sa.cmp(&sp);
    }
    if sa == 0 {
        return Ordering::Equal;
    }
    let magnitude = sq(a).cmp(&(sq(p) * (Rational::one() - sq(a))));
    if sa > 0 {
        magnitude
    } else {
        magnitude.reverse()
    }
}

fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Whether `f(x) <= a x + c` for some `x` in `[p, q]`.
fn below_somewhere(kind: BodyKind, p: &Rational, q: &Rational, a: &Rational, c: &Rational) -> bool {
    match kind {
        BodyKind::Parabola => {
            // x^2 - a x - c is convex with minimizer a / 2
            let half = a / int(2);
            let x = if &half < p {
                p.clone()
            } else if &half > q {
                q.clone()
            } else {
                half
            };
            below_at(kind, &x, a, c)
        }
        BodyKind::Hyperbola => {
            if below_at(kind, p, a, c) || below_at(kind, q, a, c) {
                return true;
            }
            if a.abs() >= Rational::one() {
                return false;
            }
            let inside = hyperbola_argmin_cmp(a, p) == Ordering::Greater && hyperbola_argmin_cmp(a, q) == Ordering::Less;
            // the minimum of sqrt(x^2+1) - a x is sqrt(1 - a^2)
            inside && !c.is_negative() && Rational::one() - sq(a) <= sq(c)
        }
    }
}

impl ConvexBodyOracle {
    pub fn parabola() -> Self {
        ConvexBodyOracle::Epigraph { kind: BodyKind::Parabola, lift: Rational::zero() }
    }

    pub fn hyperbola() -> Self {
        ConvexBodyOracle::Epigraph { kind: BodyKind::Hyperbola, lift: Rational::zero() }
    }

    pub fn epigraph(kind: BodyKind) -> Self {
        ConvexBodyOracle::Epigraph { kind, lift: Rational::zero() }
    }

    /// The epigraph translated by `(0, lift)`.
    pub fn lifted(kind: BodyKind, lift: Rational) -> Self {
        ConvexBodyOracle::Epigraph { kind, lift }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBodyOracle::Epigraph { .. } => 2,
            ConvexBodyOracle::Polyhedral(h) => h.dim(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ConvexBodyOracle::Epigraph { kind: BodyKind::Parabola, .. } => "parabola",
            ConvexBodyOracle::Epigraph { kind: BodyKind::Hyperbola, .. } => "hyperbola",
            ConvexBodyOracle::Polyhedral(_) => "hpoly",
        }
    }

    pub fn as_polyhedron(&self) -> Option<&HPolyhedron> {
        match self {
            ConvexBodyOracle::Polyhedral(h) => Some(h),
            ConvexBodyOracle::Epigraph { .. } => None,
        }
    }

    fn check(&self, p: &QVector) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: p.dim() });
        }
        Ok(())
    }

    pub fn contains(&self, p: &QVector) -> bool {
        match self {
            ConvexBodyOracle::Epigraph { kind, lift } => {
                below_at(*kind, &p[0], &Rational::zero(), &(&p[1] - lift))
            }
            ConvexBodyOracle::Polyhedral(h) => h.contains(p),
        }
    }

    /// Strict interior membership.
    pub fn is_interior(&self, p: &QVector) -> bool {
        match self {
            ConvexBodyOracle::Epigraph { kind, lift } => {
                let y = &p[1] - lift;
                match kind {
                    BodyKind::Parabola => y > sq(&p[0]),
                    BodyKind::Hyperbola => y.is_positive() && sq(&y) > sq(&p[0]) + Rational::one(),
                }
            }
            ConvexBodyOracle::Polyhedral(h) => h.rows().iter().all(|(a, b)| &a.dot(p) < b),
        }
    }

    /// Some interior point, if the body has one.
    pub fn interior_point(&self) -> Option<QVector> {
        match self {
            ConvexBodyOracle::Epigraph { kind, lift } => {
                let y = match kind {
                    BodyKind::Parabola => int(1),
                    BodyKind::Hyperbola => int(2),
                };
                Some(QVector::new(vec![Rational::zero(), y + lift]))
            }
            ConvexBodyOracle::Polyhedral(h) => {
                let n = h.dim();
                let mut rows: Vec<(QVector, Rational)> = h
                    .rows()
                    .iter()
                    .map(|(a, b)| (a.concat(&[Rational::one()]), b.clone()))
                    .collect();
                rows.push((QVector::unit(n + 1, n), Rational::one()));
                let lp = LpProblem::maximize(QVector::unit(n + 1, n), rows);
                match lp_solve(&lp).ok()? {
                    LpOutcome::Optimal { value, point, .. } if value.is_positive() => {
                        Some(point.iter().take(n).cloned().collect())
                    }
                    _ => None,
                }
            }
        }
    }

    pub fn recession_cone(&self) -> Result<PolyhedralCone> {
        match self {
            ConvexBodyOracle::Epigraph { kind: BodyKind::Parabola, .. } => {
                PolyhedralCone::from_rays(2, vec![QVector::from_ints(&[0, 1])])
            }
            ConvexBodyOracle::Epigraph { kind: BodyKind::Hyperbola, .. } => {
                PolyhedralCone::from_rays(2, vec![QVector::from_ints(&[1, 1]), QVector::from_ints(&[-1, 1])])
            }
            ConvexBodyOracle::Polyhedral(h) => recession_cone(h),
        }
    }

    /// Whether the body meets `conv(vertices)`.
    pub fn meets_polygon(&self, vertices: &[QVector]) -> bool {
        match self {
            ConvexBodyOracle::Epigraph { kind, lift } => {
                let chain = upper_chain(vertices);
                if chain.len() == 1 {
                    let p = &chain[0];
                    return below_at(*kind, &p[0], &Rational::zero(), &(&p[1] - lift));
                }
                chain.windows(2).any(|w| {
                    let (l, r) = (&w[0], &w[1]);
                    let slope = (&r[1] - &l[1]) / (&r[0] - &l[0]);
                    let offset = &l[1] - &slope * &l[0] - lift;
                    below_somewhere(*kind, &l[0], &r[0], &slope, &offset)
                })
            }
            ConvexBodyOracle::Polyhedral(h) => {
                let k = vertices.len();
                let rows = h
                    .rows()
                    .iter()
                    .map(|(a, b)| (vertices.iter().map(|v| a.dot(v)).collect(), b.clone()))
                    .chain([
                        (QVector::new(vec![Rational::one(); k]), Rational::one()),
                        (QVector::new(vec![-Rational::one(); k]), -Rational::one()),
                    ])
                    .collect();
                let lp = LpProblem::maximize(QVector::zeros(k), rows).with_nonneg(0..k);
                matches!(lp_solve(&lp), Ok(LpOutcome::Optimal { .. }))
            }
        }
    }

    /// Exact decision of `dist(p, C) <= s`.
    pub fn within(&self, p: &QVector, s: &Rational, norm: Norm) -> Result<bool> {
        self.check(p)?;
        if s.is_negative() {
            return Ok(false);
        }
        match self {
            ConvexBodyOracle::Epigraph { .. } => Ok(self.meets_polygon(&ball_polygon(p, s, norm))),
            ConvexBodyOracle::Polyhedral(h) => Ok(&point_distance(p, h, norm)? <= s),
        }
    }

    /// `(lo, hi)` with `lo <= dist(p, C) <= hi` and `hi - lo <= tol`.
    pub fn distance_bracket(&self, p: &QVector, norm: Norm, tol: &Rational) -> Result<(Rational, Rational)> {
        self.check(p)?;
        let (x, y) = match self {
            ConvexBodyOracle::Polyhedral(h) => {
                let d = point_distance(p, h, norm)?;
                return Ok((d.clone(), d));
            }
            ConvexBodyOracle::Epigraph { .. } if self.contains(p) => {
                return Ok((Rational::zero(), Rational::zero()));
            }
            ConvexBodyOracle::Epigraph { .. } => (&p[0], &p[1]),
        };
        let ConvexBodyOracle::Epigraph { kind, lift } = self else { unreachable!() };
        // a point of the body straight above p
        let above = match kind {
            BodyKind::Parabola => sq(x) + lift,
            BodyKind::Hyperbola => x.abs() + Rational::one() + lift,
        };
        let mut lo = Rational::zero();
        let mut hi = crate::numeric::max(above - y, Rational::zero());
        while &(&hi - &lo) > tol {
            let mid = (&lo + &hi) / int(2);
            if self.within(p, &mid, norm)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok((lo, hi))
    }

    /// `sup u . x` over the body, bracketed to `tol` when irrational.
    pub fn support(&self, u: &QVector, tol: &Rational) -> Result<BodySupport> {
        self.check(u)?;
        let (kind, lift) = match self {
            ConvexBodyOracle::Polyhedral(h) => {
                return Ok(match support_value(h, u)? {
                    Support::Finite { value, .. } => BodySupport::Finite { lo: value.clone(), hi: value },
                    Support::PlusInfinity { .. } => BodySupport::PlusInfinity,
                });
            }
            ConvexBodyOracle::Epigraph { kind, lift } => (*kind, lift),
        };
        let (u1, u2) = (&u[0], &u[1]);
        if u2.is_positive() || (u2.is_zero() && !u1.is_zero()) {
            return Ok(BodySupport::PlusInfinity);
        }
        let shift = u2 * lift;
        if u2.is_zero() {
            return Ok(BodySupport::Finite { lo: Rational::zero(), hi: Rational::zero() });
        }
        match kind {
            BodyKind::Parabola => {
                let v = -sq(u1) / (int(4) * u2) + shift;
                Ok(BodySupport::Finite { lo: v.clone(), hi: v })
            }
            BodyKind::Hyperbola => match u1.abs().cmp(&u2.abs()) {
                Ordering::Greater => Ok(BodySupport::PlusInfinity),
                Ordering::Equal => Ok(BodySupport::Finite { lo: shift.clone(), hi: shift }),
                Ordering::Less => {
                    let (r_lo, r_hi) = sqrt_bracket(&(sq(u2) - sq(u1)), tol);
                    Ok(BodySupport::Finite { lo: &shift - r_hi, hi: shift - r_lo })
                }
            },
        }
    }

    /// Some point of `[a, b]` inside the body, searched down to segment
    /// length `tol` when no exact formula applies.
    pub fn segment_point(&self, a: &QVector, b: &QVector, tol: &Rational) -> Option<QVector> {
        if self.contains(a) {
            return Some(a.clone());
        }
        if self.contains(b) {
            return Some(b.clone());
        }
        match self {
            ConvexBodyOracle::Polyhedral(h) => {
                let d = b - a;
                let mut lo = Rational::zero();
                let mut hi = Rational::one();
                for (row, rhs) in h.rows() {
                    let slope = row.dot(&d);
                    let slack = rhs - row.dot(a);
                    if slope.is_zero() {
                        if slack.is_negative() {
                            return None;
                        }
                    } else if slope.is_positive() {
                        hi = crate::numeric::min(hi, slack / slope);
                    } else {
                        lo = crate::numeric::max(lo, slack / slope);
                    }
                }
                (lo <= hi).then(|| a.lerp(b, &((lo + hi) / int(2))))
            }
            ConvexBodyOracle::Epigraph { kind, .. } => {
                if !self.meets_polygon(&[a.clone(), b.clone()]) {
                    return None;
                }
                if *kind == BodyKind::Parabola {
                    // y(t) - x(t)^2 is a concave quadratic in t
                    let dx = &b[0] - &a[0];
                    let dy = &b[1] - &a[1];
                    if !dx.is_zero() {
                        let t = (&dy - int(2) * &a[0] * &dx) / (int(2) * sq(&dx));
                        let t = crate::numeric::max(Rational::zero(), crate::numeric::min(Rational::one(), t));
                        let p = a.lerp(b, &t);
                        if self.contains(&p) {
                            return Some(p);
                        }
                    }
                }
                let (mut lo, mut hi) = (a.clone(), b.clone());
                let limit = tol * tol;
                loop {
                    let mid = lo.lerp(&hi, &Rational::new(1.into(), 2.into()));
                    if self.contains(&mid) {
                        return Some(mid);
                    }
                    if Norm::Sup.of(&(&hi - &lo)) * Norm::Sup.of(&(&hi - &lo)) <= limit {
                        return None;
                    }
                    if self.meets_polygon(&[lo.clone(), mid.clone()]) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
            }
        }
    }
}

impl From<HPolyhedron> for ConvexBodyOracle {
    fn from(h: HPolyhedron) -> Self {
        ConvexBodyOracle::Polyhedral(h)
    }
}

/// `{"kind": "parabola" | "hyperbola"}` document fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyFields {
    pub kind: BodyKind,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, to_f64};

    fn pt(x: Rational, y: Rational) -> QVector {
        QVector::new(vec![x, y])
    }

    #[test]
    fn membership() {
        let p = ConvexBodyOracle::parabola();
        assert!(p.contains(&pt(int(2), int(4))));
        assert!(!p.contains(&pt(int(2), rat(39, 10))));
        let h = ConvexBodyOracle::hyperbola();
        assert!(h.contains(&pt(int(0), int(1))));
        assert!(!h.contains(&pt(int(1), int(1))));
        assert!(!h.contains(&pt(int(0), int(-2))));
        assert!(h.is_interior(&h.interior_point().unwrap()));
    }

    #[test]
    fn parabola_supnorm_distance_of_two_zero() {
        let p = ConvexBodyOracle::parabola();
        let q = pt(int(2), int(0));
        assert!(p.within(&q, &int(1), Norm::Sup).unwrap());
        assert!(!p.within(&q, &rat(999, 1000), Norm::Sup).unwrap());
    }

    #[test]
    fn hyperbola_apex_distance() {
        let h = ConvexBodyOracle::hyperbola();
        let origin = pt(int(0), int(0));
        let tol = rat(1, 1 << 30);
        let (lo, hi) = h.distance_bracket(&origin, Norm::Sup, &tol).unwrap();
        assert!(lo <= int(1) && hi >= int(1) - &tol);
        // off-apex: (x, |x|) is closer than 1
        let (lo, _) = h.distance_bracket(&pt(int(5), int(5)), Norm::Sup, &tol).unwrap();
        assert!(lo < int(1));
    }

    #[test]
    fn distance_bracket_matches_float_minimization() {
        let body = ConvexBodyOracle::parabola();
        let q = pt(int(3), int(-1));
        let tol = rat(1, 1 << 24);
        let (lo, hi) = body.distance_bracket(&q, Norm::Sup, &tol).unwrap();
        let mut best = f64::INFINITY;
        for i in 0..=400_000 {
            let x = -1.0 + 5.0 * i as f64 / 400_000.0;
            let d = (3.0 - x).abs().max((x * x + 1.0).max(0.0));
            best = best.min(d);
        }
        assert!(to_f64(&lo) <= best + 1e-4 && to_f64(&hi) >= best - 1e-4);
    }

    #[test]
    fn support_queries() {
        let tol = rat(1, 1 << 20);
        let p = ConvexBodyOracle::parabola();
        assert_eq!(p.support(&QVector::from_ints(&[0, 1]), &tol).unwrap(), BodySupport::PlusInfinity);
        assert_eq!(p.support(&QVector::from_ints(&[1, 0]), &tol).unwrap(), BodySupport::PlusInfinity);
        assert_eq!(
            p.support(&QVector::from_ints(&[2, -1]), &tol).unwrap(),
            BodySupport::Finite { lo: int(1), hi: int(1) }
        );
        let h = ConvexBodyOracle::hyperbola();
        assert_eq!(h.support(&QVector::from_ints(&[2, -1]), &tol).unwrap(), BodySupport::PlusInfinity);
        assert_eq!(h.support(&QVector::from_ints(&[1, -1]), &tol).unwrap(), BodySupport::Finite { lo: int(0), hi: int(0) });
        match h.support(&QVector::from_ints(&[0, -1]), &tol).unwrap() {
            BodySupport::Finite { lo, hi } => assert!(lo <= int(-1) && hi >= int(-1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn segment_points() {
        let p = ConvexBodyOracle::parabola();
        let tol = rat(1, 1 << 30);
        let c = p.segment_point(&pt(int(-2), int(2)), &pt(int(2), int(2)), &tol).unwrap();
        assert_eq!(c, pt(int(0), int(2)));
        let shifted = ConvexBodyOracle::lifted(BodyKind::Parabola, int(1));
        assert!(shifted.segment_point(&pt(int(-2), int(0)), &pt(int(2), int(0)), &tol).is_none());
        let h = ConvexBodyOracle::hyperbola();
        let c = h.segment_point(&pt(int(-3), int(2)), &pt(int(3), int(2)), &tol).unwrap();
        assert!(h.contains(&c));
        // tangent-free miss below the apex
        assert!(h.segment_point(&pt(int(-3), rat(1, 2)), &pt(int(3), rat(1, 2)), &tol).is_none());
    }

    #[test]
    fn hyperbola_argmin_against_floats() {
        for (a, p) in [(rat(1, 2), rat(1, 2)), (rat(-1, 3), rat(-1, 3)), (rat(3, 5), rat(7, 10)), (rat(0, 1), rat(1, 7))] {
            let xs = to_f64(&a) / (1.0 - to_f64(&a).powi(2)).sqrt();
            let expected = xs.partial_cmp(&to_f64(&p)).unwrap();
            assert_eq!(hyperbola_argmin_cmp(&a, &p), expected, "a={a} p={p}");
        }
    }
}
