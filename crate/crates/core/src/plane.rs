//! Exact planar helpers: hulls, clipping and point-to-polygon distances.

use num_traits::{Signed, Zero};

use crate::numeric::{min, Norm, QVector, Rational};

/// `(b - a) x (c - a)`; positive for a counter-clockwise turn.
pub fn cross(a: &QVector, b: &QVector, c: &QVector) -> Rational {
    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
}

/// Counter-clockwise convex hull without collinear vertices.
pub fn convex_hull(points: &[QVector]) -> Vec<QVector> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<QVector> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<QVector> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Vertices of the upper boundary `x -> max {y : (x, y) in conv(points)}`,
/// left to right.
pub fn upper_chain(points: &[QVector]) -> Vec<QVector> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].cmp(&b[0]).then(b[1].cmp(&a[1])));
    pts.dedup();
    let mut chain: Vec<QVector> = Vec::new();
    for p in pts {
        if chain.last().is_some_and(|q| q[0] == p[0]) {
            continue;
        }
        while chain.len() >= 2 && !cross(&chain[chain.len() - 2], &chain[chain.len() - 1], &p).is_negative() {
            chain.pop();
        }
        chain.push(p);
    }
    chain
}

/// Part of a convex polygon (vertex list in order) with `a . x <= b`.
pub fn clip(polygon: &[QVector], a: &QVector, b: &Rational) -> Vec<QVector> {
    let n = polygon.len();
    if n == 0 {
        return Vec::new();
    }
    let val = |p: &QVector| a.dot(p) - b;
    let mut out = Vec::new();
    for i in 0..n {
        let p = &polygon[i];
        let q = &polygon[(i + 1) % n];
        let (vp, vq) = (val(p), val(q));
        if !vp.is_positive() {
            out.push(p.clone());
        }
        if (vp.is_negative() && vq.is_positive()) || (vp.is_positive() && vq.is_negative()) {
            let t = &vp / (&vp - &vq);
            out.push(p.lerp(q, &t));
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Vertices of the closed ball `center + radius * B`, counter-clockwise.
pub fn ball_polygon(center: &QVector, radius: &Rational, norm: Norm) -> Vec<QVector> {
    let r = radius.clone();
    let offsets: [(Rational, Rational); 4] = match norm {
        Norm::Sup => [(r.clone(), r.clone()), (-r.clone(), r.clone()), (-r.clone(), -r.clone()), (r.clone(), -r)],
        Norm::Sum => [(r.clone(), Rational::zero()), (Rational::zero(), r.clone()), (-r, Rational::zero()), (Rational::zero(), -radius.clone())],
    };
    offsets
        .into_iter()
        .map(|(dx, dy)| QVector::new(vec![&center[0] + dx, &center[1] + dy]))
        .collect()
}

/// `min over s in [0, 1] of ‖p - (a + s (b - a))‖`, exactly.
pub fn segment_distance(p: &QVector, a: &QVector, b: &QVector, norm: Norm) -> Rational {
    let ax = &p[0] - &a[0];
    let ay = &p[1] - &a[1];
    let dx = &b[0] - &a[0];
    let dy = &b[1] - &a[1];
    // the distance is convex piecewise linear in s; its kinks are candidates
    let mut candidates = vec![Rational::zero(), Rational::from_integer(1.into())];
    let mut push = |num: Rational, den: Rational| {
        if !den.is_zero() {
            candidates.push(num / den);
        }
    };
    push(ax.clone(), dx.clone());
    push(ay.clone(), dy.clone());
    if norm == Norm::Sup {
        push(&ax - &ay, &dx - &dy);
        push(&ax + &ay, &dx + &dy);
    }
    candidates
        .into_iter()
        .filter(|s| !s.is_negative() && *s <= Rational::from_integer(1.into()))
        .map(|s| {
            let ex = (&ax - &s * &dx).abs();
            let ey = (&ay - &s * &dy).abs();
            match norm {
                Norm::Sup => crate::numeric::max(ex, ey),
                Norm::Sum => ex + ey,
            }
        })
        .min()
        .expect("endpoints are always candidates")
}

/// Whether `p` lies in the counter-clockwise convex polygon `hull`.
pub fn hull_contains(hull: &[QVector], p: &QVector) -> bool {
    match hull.len() {
        0 => false,
        1 => &hull[0] == p,
        2 => cross(&hull[0], &hull[1], p).is_zero() && segment_distance(p, &hull[0], &hull[1], Norm::Sup).is_zero(),
        n => (0..n).all(|i| !cross(&hull[i], &hull[(i + 1) % n], p).is_negative()),
    }
}

/// Distance from `p` to the counter-clockwise convex polygon `hull`.
pub fn polygon_distance(p: &QVector, hull: &[QVector], norm: Norm) -> Rational {
    if hull.len() >= 3 && hull_contains(hull, p) {
        return Rational::zero();
    }
    match hull.len() {
        0 => panic!("empty polygon"),
        1 => norm.of(&(p - &hull[0])),
        n => {
            let mut best = hull.iter().map(|v| norm.of(&(p - v))).min().expect("non-empty");
            for i in 0..n {
                let (a, b) = (&hull[i], &hull[(i + 1) % n]);
                if box_gap(p, a, b) < best {
                    best = min(best, segment_distance(p, a, b, norm));
                }
            }
            best
        }
    }
}

// sup-norm gap between `p` and the bounding box of `[a, b]`, a lower bound in both norms
fn box_gap(p: &QVector, a: &QVector, b: &QVector) -> Rational {
    (0..2)
        .map(|k| {
            let (lo, hi) = if a[k] <= b[k] { (&a[k], &b[k]) } else { (&b[k], &a[k]) };
            if &p[k] < lo {
                lo - &p[k]
            } else if &p[k] > hi {
                &p[k] - hi
            } else {
                Rational::zero()
            }
        })
        .max()
        .expect("two coordinates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn pts(coords: &[(i64, i64)]) -> Vec<QVector> {
        coords.iter().map(|&(x, y)| QVector::from_ints(&[x, y])).collect()
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let hull = convex_hull(&pts(&[(0, 0), (2, 0), (1, 0), (2, 2), (0, 2), (1, 1)]));
        assert_eq!(hull, pts(&[(0, 0), (2, 0), (2, 2), (0, 2)]));
    }

    #[test]
    fn upper_chain_of_square() {
        let chain = upper_chain(&pts(&[(0, 0), (2, 0), (2, 2), (0, 2), (1, 3)]));
        assert_eq!(chain, pts(&[(0, 2), (1, 3), (2, 2)]));
        assert_eq!(upper_chain(&pts(&[(1, 0), (1, 5)])), pts(&[(1, 5)]));
    }

    #[test]
    fn clipping_a_square() {
        let square = pts(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        let half = clip(&square, &QVector::from_ints(&[1, 0]), &int(1));
        assert_eq!(convex_hull(&half), pts(&[(0, 0), (1, 0), (1, 2), (0, 2)]));
        assert!(clip(&square, &QVector::from_ints(&[1, 0]), &int(-1)).is_empty());
    }

    #[test]
    fn segment_distances() {
        let a = QVector::from_ints(&[0, 0]);
        let b = QVector::from_ints(&[4, 0]);
        assert_eq!(segment_distance(&QVector::from_ints(&[2, 3]), &a, &b, Norm::Sup), int(3));
        assert_eq!(segment_distance(&QVector::from_ints(&[6, 1]), &a, &b, Norm::Sum), int(3));
        // diagonal segment under the sup norm balances both coordinates
        let c = QVector::from_ints(&[4, 4]);
        assert_eq!(segment_distance(&QVector::from_ints(&[0, 2]), &a, &c, Norm::Sup), int(1));
        assert_eq!(segment_distance(&QVector::new(vec![rat(1, 2), int(0)]), &a, &c, Norm::Sup), rat(1, 4));
    }

    #[test]
    fn polygon_distance_inside_and_out() {
        let square = ball_polygon(&QVector::from_ints(&[0, 0]), &int(1), Norm::Sup);
        let hull = convex_hull(&square);
        assert!(polygon_distance(&QVector::from_ints(&[0, 0]), &hull, Norm::Sup).is_zero());
        assert_eq!(polygon_distance(&QVector::from_ints(&[3, 0]), &hull, Norm::Sup), int(2));
        assert_eq!(polygon_distance(&QVector::from_ints(&[3, 3]), &hull, Norm::Sum), int(4));
    }
}
