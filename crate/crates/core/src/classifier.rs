//! Verdicts on convex sets: approximatively polyhedral or infinitely hiding,
//! each with a checkable certificate, and polyhedral `ε`-nets.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::body::{BodyKind, ConvexBodyOracle};
use crate::error::{Error, Result};
use crate::hausdorff::{hausdorff_distance_any, truncation_radius, HausdorffOutcome};
use crate::hiding::{hidden_set_2d, HidingWitness};
use crate::numeric::{dyadic_ceil, int, max, rat, sqrt_bracket, Norm, QVector, Rational};
use crate::polyhedra::{point_distance, recession_cone, vrep_of, HPolyhedron, PolyhedralCone, Polyhedron, VPolyhedron};

/// Limits of the radius-doubling probe of `dH(C, V_C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyBudget {
    /// Radii `2^0 .. 2^doublings`.
    pub doublings: u32,
    /// Gap above which a still-growing probe counts as divergent.
    pub threshold: Rational,
    /// Minimal ratio between successive gaps for divergence.
    pub growth: Rational,
    /// Size of the hidden-set witness.
    pub witness_points: usize,
    /// Curve samples per radius.
    pub samples: usize,
    pub tol: Rational,
}

impl Default for ClassifyBudget {
    fn default() -> Self {
        ClassifyBudget {
            doublings: 40,
            threshold: int(1_000_000),
            growth: rat(5, 4),
            witness_points: 8,
            samples: 64,
            tol: rat(1, 1 << 32),
        }
    }
}

/// `lo <= value <= hi`; exact when the two agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bracket {
    #[serde(with = "crate::numeric::rational_serde")]
    pub lo: Rational,
    #[serde(with = "crate::numeric::rational_serde")]
    pub hi: Rational,
}

impl Bracket {
    fn exact(value: Rational) -> Self {
        Bracket { lo: value.clone(), hi: value }
    }

    fn join(self, other: Bracket) -> Bracket {
        Bracket { lo: max(self.lo, other.lo), hi: max(self.hi, other.hi) }
    }
}

/// Gap between `C` and `V_C` inside the ball of the given radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapProbe {
    #[serde(with = "crate::numeric::rational_serde")]
    pub radius: Rational,
    pub gap: Bracket,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Classification {
    ApproximativelyPolyhedral {
        cone: PolyhedralCone,
        dist_to_cone: Bracket,
        approximant: VPolyhedron,
        /// Upper bound on `dH(approximant, C)`.
        #[serde(with = "crate::numeric::rational_serde")]
        approximant_error: Rational,
        probes: Vec<GapProbe>,
    },
    InfinitelyHiding {
        witness: HidingWitness,
        probes: Vec<GapProbe>,
    },
    Undecided {
        report: String,
        probes: Vec<GapProbe>,
    },
}

impl Classification {
    pub fn verdict(&self) -> &'static str {
        match self {
            Classification::ApproximativelyPolyhedral { .. } => "approximatively_polyhedral",
            Classification::InfinitelyHiding { .. } => "infinitely_hiding",
            Classification::Undecided { .. } => "undecided",
        }
    }
}

/// Classifies `body`. Polyhedra are their own approximants; planar epigraph
/// bodies are probed through `dH(C ∩ rB̄, V_C ∩ rB̄)` over doubling radii.
pub fn classify(body: &ConvexBodyOracle, eps: &Rational, budget: &ClassifyBudget, norm: Norm) -> Result<Classification> {
    if !eps.is_positive() || !budget.tol.is_positive() {
        return Err(Error::InvalidInput("eps and tol must be positive".into()));
    }
    match body {
        ConvexBodyOracle::Polyhedral(h) => classify_polyhedron(h, norm),
        ConvexBodyOracle::Epigraph { kind, lift } => {
            if body.dim() != 2 {
                return Err(Error::UnsupportedBody(format!("oracle bodies must be planar, got dimension {}", body.dim())));
            }
            classify_epigraph(body, *kind, lift, eps, budget, norm)
        }
    }
}

fn classify_polyhedron(h: &HPolyhedron, norm: Norm) -> Result<Classification> {
    if h.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    let cone = recession_cone(h)?;
    let outcome = hausdorff_distance_any(&Polyhedron::H(h.clone()), &Polyhedron::H(cone.to_hpolyhedron()), norm)?;
    let HausdorffOutcome::Finite(d) = outcome else {
        unreachable!("a polyhedron is at finite distance from its recession cone");
    };
    Ok(Classification::ApproximativelyPolyhedral {
        cone,
        dist_to_cone: Bracket::exact(d),
        approximant: vrep_of(h)?,
        approximant_error: Rational::zero(),
        probes: Vec::new(),
    })
}

fn curve_point(kind: BodyKind, lift: &Rational, x: &Rational, tol: &Rational) -> QVector {
    let y = match kind {
        BodyKind::Parabola => x * x,
        BodyKind::Hyperbola => sqrt_bracket(&(x * x + Rational::one()), tol).1,
    };
    QVector::new(vec![x.clone(), y + lift])
}

/// Largest `x` in `[0, r]`, to `tol`, whose curve point lies in `rB̄`.
fn curve_extent(kind: BodyKind, lift: &Rational, r: &Rational, norm: Norm, tol: &Rational) -> Option<Rational> {
    let inside = |x: &Rational| norm.of(&curve_point(kind, lift, x, tol)) <= *r;
    if !inside(&Rational::zero()) {
        return None;
    }
    let (mut lo, mut hi) = (Rational::zero(), r.clone());
    if inside(&hi) {
        return Some(hi);
    }
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / int(2);
        if inside(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

fn gap_at(
    body: &ConvexBodyOracle,
    (kind, lift): (BodyKind, &Rational),
    cone: &HPolyhedron,
    r: &Rational,
    budget: &ClassifyBudget,
    norm: Norm,
) -> Result<[Bracket; 2]> {
    let tol = &budget.tol;
    // dist(., C) is convex, so its max over V ∩ rB̄ sits at a vertex
    let ball = HPolyhedron::new(2, norm.ball_rows(&QVector::zeros(2), r))?;
    let mut cone_side = Bracket::exact(Rational::zero());
    for v in vrep_of(&cone.intersect(&ball)?)?.points() {
        let (lo, hi) = body.distance_bracket(v, norm, tol)?;
        cone_side = cone_side.join(Bracket { lo, hi });
    }
    let mut body_side = Bracket::exact(Rational::zero());
    // dist(., V) along sampled curve points of C ∩ rB̄
    if let Some(extent) = curve_extent(kind, lift, r, norm, tol) {
        let n = budget.samples.max(2) as i64;
        for j in 0..=n {
            let x = &extent * int(2 * j - n) / int(n);
            let d = point_distance(&curve_point(kind, lift, &x, tol), cone, norm)?;
            body_side = body_side.join(Bracket { lo: max(&d - tol, Rational::zero()), hi: d + tol });
        }
    }
    Ok([cone_side, body_side])
}

fn classify_epigraph(
    body: &ConvexBodyOracle,
    kind: BodyKind,
    lift: &Rational,
    eps: &Rational,
    budget: &ClassifyBudget,
    norm: Norm,
) -> Result<Classification> {
    let cone = body.recession_cone()?;
    let cone_h = cone.to_hpolyhedron();
    let quarter = eps / int(4);
    let mut probes: Vec<GapProbe> = Vec::new();
    let mut sides: Vec<[Bracket; 2]> = Vec::new();
    let mut settled = 0;
    let mut radius = Rational::one();
    for _ in 0..=budget.doublings {
        let directed = gap_at(body, (kind, lift), &cone_h, &radius, budget, norm)?;
        let gap = directed[0].clone().join(directed[1].clone());
        if let Some(prev) = probes.last() {
            if gap.lo > budget.threshold && gap.lo >= &budget.growth * &prev.gap.hi {
                let witness = hidden_set_2d(body, budget.witness_points, &budget.tol)?;
                probes.push(GapProbe { radius, gap });
                return Ok(Classification::InfinitelyHiding { witness, probes });
            }
            let quiet = (0..2).all(|side| {
                let at = |k: usize| &sides[sides.len() - k][side].hi;
                let step = (&directed[side].hi - at(1)).abs();
                let shrinking = sides.len() < 2 || step <= (at(1) - at(2)).abs();
                step < quarter && shrinking
            });
            settled = if quiet { settled + 1 } else { 0 };
        }
        sides.push(directed);
        probes.push(GapProbe { radius: radius.clone(), gap });
        if settled >= 3 {
            let dist_to_cone = probes.last().expect("probed").gap.clone();
            return match polygonal_approximant(kind, lift, &cone, eps, &budget.tol)? {
                Some((approximant, approximant_error)) => Ok(Classification::ApproximativelyPolyhedral {
                    cone,
                    dist_to_cone,
                    approximant,
                    approximant_error,
                    probes,
                }),
                None => Ok(Classification::Undecided { report: "gap settled but the body has no polyhedral tail".into(), probes }),
            };
        }
        radius *= int(2);
    }
    Ok(Classification::Undecided {
        report: format!("gap neither settled nor diverged within {} doublings", budget.doublings),
        probes,
    })
}

/// `conv(curve sample) + V_C` with a certified bound on its distance to `C`
/// (vertical gaps, which dominate both norms).
fn polygonal_approximant(
    kind: BodyKind,
    lift: &Rational,
    cone: &PolyhedralCone,
    eps: &Rational,
    tol: &Rational,
) -> Result<Option<(VPolyhedron, Rational)>> {
    if kind != BodyKind::Hyperbola {
        return Ok(None);
    }
    // f'(x) = x / sqrt(x^2 + 1), increasing
    let slope = |x: &Rational, upper: bool| {
        let (lo, hi) = sqrt_bracket(&(x * x + Rational::one()), tol);
        match (x.is_negative(), upper) {
            (false, true) | (true, false) => x / lo,
            _ => x / hi,
        }
    };
    let mut ratio = Rational::one();
    loop {
        // abscissae 0 = x_0 < x_1 < ... with x_{i+1} = x_i + ratio (1 + x_i), up to R >= 2 / eps
        let reach = int(2) / eps;
        let mut xs = vec![Rational::zero()];
        while xs.last().expect("seeded") < &reach {
            let x = xs.last().expect("seeded");
            xs.push(dyadic_ceil(&(x + &ratio * (Rational::one() + x)), 16));
        }
        let mut sag = Rational::zero();
        for w in xs.windows(2) {
            sag = max(sag, (&w[1] - &w[0]) * (slope(&w[1], true) - slope(&w[0], false)) / int(4));
        }
        let far = xs.last().expect("seeded").clone();
        // beyond R the curve stays within f(R) - R of the boundary ray of V_C
        let tail = &curve_point(kind, lift, &far, tol)[1] - &far - lift;
        let error = max(sag, tail) + tol;
        if &error < eps {
            let mut points: Vec<QVector> = xs.iter().rev().map(|x| curve_point(kind, lift, &-x, tol)).collect();
            points.extend(xs.iter().skip(1).map(|x| curve_point(kind, lift, x, tol)));
            return Ok(Some((VPolyhedron::new(points, cone.rays())?, error)));
        }
        ratio /= int(2);
    }
}

/// Grid points `F` near the compact part of `A` and `C_F = conv(F) + V_A`,
/// certified by an exact `dH(C_F, A) < 2 eps`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpsilonNet {
    pub points: Vec<QVector>,
    pub set: VPolyhedron,
    #[serde(with = "crate::numeric::rational_serde")]
    pub radius: Rational,
    #[serde(with = "crate::numeric::rational_serde")]
    pub distance: Rational,
}

/// Truncates `A` at a radius within `eps` (bounded sets are kept whole), then replaces every vertex of the
/// compact part by a nearest grid point of spacing `grid_step` inside it.
pub fn epsilon_net(a: &HPolyhedron, eps: &Rational, grid_step: &Rational, norm: Norm) -> Result<EpsilonNet> {
    if !eps.is_positive() || !grid_step.is_positive() {
        return Err(Error::InvalidInput("eps and grid step must be positive".into()));
    }
    if grid_step > eps {
        return Err(Error::InvalidInput("grid step must not exceed eps".into()));
    }
    if a.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    let cone = recession_cone(a)?;
    let radius = if cone.is_trivial() {
        // bounded: the whole set is its own compact part
        vrep_of(a)?.points().iter().map(|p| norm.of(p)).max().expect("non-empty")
    } else {
        truncation_radius(a, &cone, eps, norm)?.radius
    };
    let ball = HPolyhedron::new(a.dim(), norm.ball_rows(&QVector::zeros(a.dim()), &radius))?;
    let compact = a.intersect(&ball)?;
    let rings = (eps / grid_step).ceil().to_integer().try_into().unwrap_or(i64::MAX).clamp(1, 8);
    let mut points = Vec::new();
    for v in vrep_of(&compact)?.points() {
        let g = snap_inside(v, &compact, grid_step, rings, norm).ok_or(Error::GridTooCoarse)?;
        if !points.contains(&g) {
            points.push(g);
        }
    }
    let set = VPolyhedron::new(points, cone.rays())?.reduced();
    let points = set.points().to_vec();
    let distance = match hausdorff_distance_any(&Polyhedron::V(set.clone()), &Polyhedron::H(a.clone()), norm)? {
        HausdorffOutcome::Finite(d) if d < eps * int(2) => d,
        _ => return Err(Error::GridTooCoarse),
    };
    Ok(EpsilonNet { points, set, radius, distance })
}

/// Nearest grid point in `poly` among the cells within `rings` steps of `v`.
fn snap_inside(v: &QVector, poly: &HPolyhedron, step: &Rational, rings: i64, norm: Norm) -> Option<QVector> {
    let base: Vec<Rational> = v.iter().map(|x| (x / step).floor()).collect();
    let n = v.dim();
    let width = (2 * rings) as usize;
    let mut best: Option<(Rational, QVector)> = None;
    for code in 0..width.pow(n as u32) {
        let mut rest = code;
        let g: QVector = base
            .iter()
            .map(|b| {
                let offset = (rest % width) as i64 - rings + 1;
                rest /= width;
                (b + int(offset)) * step
            })
            .collect();
        if !poly.contains(&g) {
            continue;
        }
        let d = norm.of(&(&g - v));
        if best.as_ref().is_none_or(|(bd, bg)| d < *bd || (d == *bd && g < *bg)) {
            best = Some((d, g));
        }
    }
    best.map(|(_, g)| g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::to_f64;

    fn h(rows: &[(&[i64], i64)]) -> HPolyhedron {
        let dim = rows[0].0.len();
        HPolyhedron::new(dim, rows.iter().map(|(a, b)| (QVector::from_ints(a), int(*b))).collect()).unwrap()
    }

    #[test]
    fn polyhedra_are_their_own_approximants() {
        let square = HPolyhedron::cube(2, &int(0), &int(1));
        let c = classify(&ConvexBodyOracle::from(square.clone()), &rat(1, 10), &ClassifyBudget::default(), Norm::Sup).unwrap();
        let Classification::ApproximativelyPolyhedral { cone, dist_to_cone, approximant, approximant_error, .. } = c else {
            panic!("expected a polyhedral verdict");
        };
        assert!(cone.is_trivial());
        assert_eq!(dist_to_cone, Bracket::exact(int(1)));
        assert_eq!(approximant_error, int(0));
        assert_eq!(approximant.points().len(), 4);
    }

    #[test]
    fn hyperbola_is_approximatively_polyhedral() {
        let c = classify(&ConvexBodyOracle::hyperbola(), &rat(1, 100), &ClassifyBudget::default(), Norm::Sup).unwrap();
        let Classification::ApproximativelyPolyhedral { dist_to_cone, approximant, approximant_error, .. } = c else {
            panic!("expected a polyhedral verdict, got {c:?}");
        };
        assert!((to_f64(&dist_to_cone.lo) - 1.0).abs() < 1e-6);
        assert!((to_f64(&dist_to_cone.hi) - 1.0).abs() < 1e-6);
        assert!(approximant_error < rat(1, 100));
        let body = ConvexBodyOracle::hyperbola();
        assert!(approximant.points().iter().all(|p| body.contains(p)));
    }

    #[test]
    fn parabola_is_infinitely_hiding() {
        let c = classify(&ConvexBodyOracle::parabola(), &rat(1, 100), &ClassifyBudget::default(), Norm::Sup).unwrap();
        let Classification::InfinitelyHiding { witness, probes } = c else {
            panic!("expected a hiding verdict, got {c:?}");
        };
        assert_eq!(witness.len(), 8);
        assert!(probes.last().unwrap().gap.lo > int(1_000_000));
    }

    #[test]
    fn lifted_parabola_is_not_settled_early() {
        let body = ConvexBodyOracle::lifted(BodyKind::Parabola, int(3));
        let c = classify(&body, &rat(1, 4), &ClassifyBudget::default(), Norm::Sup).unwrap();
        assert_eq!(c.verdict(), "infinitely_hiding");
    }

    #[test]
    fn tiny_budget_is_undecided() {
        let budget = ClassifyBudget { doublings: 3, ..ClassifyBudget::default() };
        let c = classify(&ConvexBodyOracle::parabola(), &rat(1, 100), &budget, Norm::Sup).unwrap();
        assert_eq!(c.verdict(), "undecided");
    }

    #[test]
    fn net_of_unit_square() {
        let square = HPolyhedron::cube(2, &int(0), &int(1));
        let net = epsilon_net(&square, &rat(1, 4), &rat(1, 8), Norm::Sup).unwrap();
        assert!(net.distance <= rat(1, 8));
        assert_eq!(net.points.len(), 4);
    }

    #[test]
    fn net_of_a_translated_cone() {
        // {(1, 1)} + cone{(1, 0)}: a ray starting at a grid point
        let ray = h(&[(&[0, 1], 1), (&[0, -1], -1), (&[-1, 0], -1)]);
        let net = epsilon_net(&ray, &rat(1, 2), &rat(1, 4), Norm::Sup).unwrap();
        assert_eq!(net.points, vec![QVector::from_ints(&[1, 1])]);
        assert_eq!(net.distance, int(0));
    }

    #[test]
    fn net_of_a_strip() {
        let strip = h(&[(&[-1, 0], 0), (&[0, -1], 0), (&[0, 1], 1)]);
        let net = epsilon_net(&strip, &rat(1, 2), &rat(1, 4), Norm::Sup).unwrap();
        assert!(net.distance < int(1));
        assert!(net.set.rays().contains(&QVector::from_ints(&[1, 0])));
    }

    #[test]
    fn coarse_grid_is_rejected() {
        // a thin triangle between grid lines
        let sliver = h(&[(&[0, -8], -1), (&[0, 8], 3), (&[-8, 0], -1), (&[8, 0], 3)]);
        assert_eq!(epsilon_net(&sliver, &rat(1, 2), &rat(1, 2), Norm::Sup), Err(Error::GridTooCoarse));
    }
}
