//! Double description method for polyhedral cones `{x : a_i . x <= 0}`.

use num_traits::{Signed, Zero};

use crate::numeric::linalg::{independent_subset, nullspace, rref, solve};
use crate::numeric::{QVector, Rational};

/// Generators of a polyhedral cone: `span(lineality) + cone(rays)`.
///
/// Rays are primitive integer vectors, extreme in the pointed part, sorted in
/// descending lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeGenerators {
    pub lineality: Vec<QVector>,
    pub rays: Vec<QVector>,
}

impl ConeGenerators {
    /// Every generator as a ray, lineality vectors in both orientations.
    pub fn all_rays(&self) -> Vec<QVector> {
        let mut out: Vec<QVector> = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(-l);
        }
        out.sort_by(|a, b| b.cmp(a));
        out.dedup();
        out
    }
}

#[derive(Clone)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(bits: usize) -> Self {
        ZeroSet(vec![0; bits.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains_all(&self, other: &ZeroSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

/// Generators of `{x in R^dim : a . x <= 0 for every a in rows}`.
pub fn cone_generators(rows: &[QVector], dim: usize) -> ConeGenerators {
    let mut lineality: Vec<QVector> = nullspace(rows, dim).iter().map(QVector::primitive).collect();
    lineality.sort_by(|a, b| b.cmp(a));

    // parametrize the row space x = W^T z, where the cone becomes pointed
    let (basis, _) = rref(rows, dim);
    let r = basis.len();
    if r == 0 {
        return ConeGenerators { lineality, rays: Vec::new() };
    }
    let reduced: Vec<QVector> = rows
        .iter()
        .map(|a| basis.iter().map(|w| w.dot(a)).collect())
        .collect();
    let rays_z = pointed_rays(&reduced, r);
    let mut rays: Vec<QVector> = rays_z
        .iter()
        .map(|z| {
            let mut x = QVector::zeros(dim);
            for (zk, w) in z.iter().zip(&basis) {
                if !zk.is_zero() {
                    x = x.add_scaled(zk, w);
                }
            }
            x.primitive()
        })
        .collect();
    rays.sort_by(|a, b| b.cmp(a));
    rays.dedup();
    ConeGenerators { lineality, rays }
}

/// Extreme rays of a pointed cone `{z : b_i . z <= 0}` whose rows span `R^r`.
fn pointed_rays(rows: &[QVector], r: usize) -> Vec<QVector> {
    let m = rows.len();
    let start = independent_subset(rows, r);
    debug_assert_eq!(start.len(), r);
    let square: Vec<QVector> = start.iter().map(|&i| rows[i].clone()).collect();

    let mut rays: Vec<(QVector, ZeroSet)> = Vec::with_capacity(r);
    for j in 0..r {
        let col = solve(&square, &QVector::unit(r, j)).expect("independent rows");
        let mut zero = ZeroSet::new(m);
        for (k, &i) in start.iter().enumerate() {
            if k != j {
                zero.insert(i);
            }
        }
        rays.push(((-&col).primitive(), zero));
    }

    let mut added = vec![false; m];
    for &i in &start {
        added[i] = true;
    }
    for h in 0..m {
        if added[h] {
            continue;
        }
        added[h] = true;
        let row = &rows[h];
        let values: Vec<Rational> = rays.iter().map(|(v, _)| row.dot(v)).collect();
        let mut next: Vec<(QVector, ZeroSet)> = Vec::with_capacity(rays.len());
        for ((v, z), val) in rays.iter().zip(&values) {
            if val.is_zero() {
                let mut z = z.clone();
                z.insert(h);
                next.push((v.clone(), z));
            } else if val.is_negative() {
                next.push((v.clone(), z.clone()));
            }
        }
        for (p, vp) in values.iter().enumerate().filter(|(_, v)| v.is_positive()) {
            for (q, vq) in values.iter().enumerate().filter(|(_, v)| v.is_negative()) {
                let common = rays[p].1.and(&rays[q].1);
                if common.len() + 2 < r {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, (_, z))| k != p && k != q && z.contains_all(&common));
                if blocked {
                    continue;
                }
                // vp * ray_q - vq * ray_p lies on the hyperplane of row h
                let combo = rays[q].0.scale(vp).add_scaled(&-vq, &rays[p].0).primitive();
                let mut zero = common;
                zero.insert(h);
                next.push((combo, zero));
            }
        }
        rays = next;
        if rays.is_empty() {
            break;
        }
    }
    rays.into_iter().map(|(v, _)| v).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_above_abs() {
        // x2 >= |x1|
        let rows = vec![QVector::from_ints(&[1, -1]), QVector::from_ints(&[-1, -1])];
        let g = cone_generators(&rows, 2);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays, vec![QVector::from_ints(&[1, 1]), QVector::from_ints(&[-1, 1])]);
    }

    #[test]
    fn half_plane_has_a_line() {
        let rows = vec![QVector::from_ints(&[0, 1])];
        let g = cone_generators(&rows, 2);
        assert_eq!(g.lineality, vec![QVector::from_ints(&[1, 0])]);
        assert_eq!(g.rays, vec![QVector::from_ints(&[0, -1])]);
    }

    #[test]
    fn orthant_in_three_space() {
        let rows: Vec<QVector> = (0..3).map(|i| -&QVector::unit(3, i)).collect();
        let g = cone_generators(&rows, 3);
        assert_eq!(g.rays.len(), 3);
        assert!(g.lineality.is_empty());
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // cone over the square |x1|, |x2| <= x3
        let rows = vec![
            QVector::from_ints(&[1, 0, -1]),
            QVector::from_ints(&[-1, 0, -1]),
            QVector::from_ints(&[0, 1, -1]),
            QVector::from_ints(&[0, -1, -1]),
        ];
        let g = cone_generators(&rows, 3);
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            assert_eq!(r[2], Rational::from_integer(1.into()));
        }
    }

    #[test]
    fn trivial_cone() {
        let rows = vec![
            QVector::from_ints(&[1, 0]),
            QVector::from_ints(&[-1, 0]),
            QVector::from_ints(&[0, 1]),
            QVector::from_ints(&[0, -1]),
        ];
        let g = cone_generators(&rows, 2);
        assert!(g.rays.is_empty() && g.lineality.is_empty());
    }
}
