//! Quotients `X -> X / Z` by a rational subspace.

use num_traits::{One, Zero};

use super::{check_dims, point_distance_v, HPolyhedron, Polyhedron, VPolyhedron};
use crate::error::{Error, Result};
use crate::numeric::linalg::rref;
use crate::numeric::{Norm, QVector, Rational};

/// Quotient by `Z = span(kernel)`, with the complement spanned by the
/// coordinate axes that are not pivots of the kernel's echelon form.
///
/// Quotient coordinates of `x` are the non-pivot coordinates of `π(x)`, where
/// `π(x) = x - sum_i x[p_i] k_i` zeroes every pivot coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMap {
    dim: usize,
    kernel: Vec<QVector>,
    pivots: Vec<usize>,
    kept: Vec<usize>,
}

impl QuotientMap {
    pub fn new(dim: usize, kernel_basis: &[QVector]) -> Result<Self> {
        check_dims(dim, kernel_basis)?;
        let (kernel, pivots) = rref(kernel_basis, dim);
        let kept = (0..dim).filter(|c| !pivots.contains(c)).collect();
        Ok(QuotientMap { dim, kernel, pivots, kept })
    }

    pub fn identity(dim: usize) -> Self {
        QuotientMap { dim, kernel: Vec::new(), pivots: Vec::new(), kept: (0..dim).collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn quotient_dim(&self) -> usize {
        self.kept.len()
    }

    /// Echelon basis of the kernel.
    pub fn kernel_basis(&self) -> &[QVector] {
        &self.kernel
    }

    /// `π(x)` in ambient coordinates.
    pub fn represent(&self, x: &QVector) -> QVector {
        let mut out = x.clone();
        for (k, &p) in self.kernel.iter().zip(&self.pivots) {
            let c = x[p].clone();
            if !c.is_zero() {
                out = out.add_scaled(&-c, k);
            }
        }
        out
    }

    pub fn project(&self, x: &QVector) -> QVector {
        let rep = self.represent(x);
        self.kept.iter().map(|&j| rep[j].clone()).collect()
    }

    /// The representative of the coset `y` in the chosen complement.
    pub fn lift(&self, y: &QVector) -> QVector {
        let mut x = QVector::zeros(self.dim);
        for (v, &j) in y.iter().zip(&self.kept) {
            x[j] = v.clone();
        }
        x
    }

    /// Matrix of `π` (rows act on column vectors).
    pub fn projector_matrix(&self) -> Vec<QVector> {
        (0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .map(|c| {
                        let mut v = if r == c { Rational::one() } else { Rational::zero() };
                        for (k, &p) in self.kernel.iter().zip(&self.pivots) {
                            if p == c {
                                v -= &k[r];
                            }
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }

    /// `inf { ‖x‖ : x in lift(y) + Z }`.
    pub fn quotient_norm(&self, y: &QVector, norm: Norm) -> Rational {
        let x = self.lift(y);
        if self.kernel.is_empty() {
            return norm.of(&x);
        }
        let subspace = VPolyhedron {
            dim: self.dim,
            points: vec![QVector::zeros(self.dim)],
            rays: self.kernel.iter().flat_map(|k| [k.clone(), -k]).collect(),
        };
        point_distance_v(&x, &subspace, norm)
    }

    /// Whether every kernel vector is orthogonal to every normal of `p`.
    pub fn kernel_in_lineality(&self, p: &HPolyhedron) -> bool {
        p.rows().iter().all(|(a, _)| self.kernel.iter().all(|k| a.dot(k).is_zero()))
    }
}

/// Image of `p` under the quotient map, in quotient coordinates.
pub fn quotient_project(map: &QuotientMap, p: &Polyhedron) -> Result<Polyhedron> {
    if p.dim() != map.dim {
        return Err(Error::DimensionMismatch { expected: map.dim, found: p.dim() });
    }
    let qdim = map.quotient_dim();
    if qdim == 0 {
        return Err(Error::InvalidInput("quotient by the whole space".into()));
    }
    match p {
        Polyhedron::H(h) => {
            if !map.kernel_in_lineality(h) {
                return Err(Error::KernelNotInLineality);
            }
            let rows = h
                .rows()
                .iter()
                .map(|(a, b)| (map.kept.iter().map(|&j| a[j].clone()).collect(), b.clone()))
                .collect();
            Ok(Polyhedron::H(HPolyhedron::new(qdim, rows)?))
        }
        Polyhedron::V(v) => {
            let points = v.points().iter().map(|x| map.project(x)).collect();
            let rays = v.rays().iter().map(|r| map.project(r)).filter(|r| !r.is_zero()).collect();
            Ok(Polyhedron::V(VPolyhedron::new(points, rays)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    #[test]
    fn projector_is_idempotent_with_kernel_z() {
        let map = QuotientMap::new(3, &[QVector::from_ints(&[1, 2, 0]), QVector::from_ints(&[0, 1, 1])]).unwrap();
        let x = QVector::new(vec![rat(3, 2), int(-1), int(4)]);
        let once = map.represent(&x);
        assert_eq!(map.represent(&once), once);
        for k in map.kernel_basis() {
            assert!(map.represent(k).is_zero());
        }
        let m = map.projector_matrix();
        let via_matrix: QVector = m.iter().map(|row| row.dot(&x)).collect();
        assert_eq!(via_matrix, once);
        assert_eq!(map.project(&map.lift(&map.project(&x))), map.project(&x));
    }

    #[test]
    fn half_plane_modulo_its_line() {
        let map = QuotientMap::new(2, &[QVector::from_ints(&[1, 0])]).unwrap();
        let p = HPolyhedron::new(2, vec![(QVector::from_ints(&[0, -1]), int(0))]).unwrap();
        match quotient_project(&map, &Polyhedron::H(p)).unwrap() {
            Polyhedron::H(image) => {
                assert_eq!(image.dim(), 1);
                assert!(image.contains(&QVector::from_ints(&[0])));
                assert!(image.contains(&QVector::from_ints(&[9])));
                assert!(!image.contains(&QVector::from_ints(&[-1])));
            }
            other => panic!("unexpected {other:?}"),
        }
        let tilted = HPolyhedron::new(2, vec![(QVector::from_ints(&[1, -1]), int(0))]).unwrap();
        assert_eq!(quotient_project(&map, &Polyhedron::H(tilted)), Err(Error::KernelNotInLineality));
    }

    #[test]
    fn trivial_kernel_is_identity() {
        let map = QuotientMap::new(2, &[]).unwrap();
        let p = Polyhedron::H(HPolyhedron::cube(2, &int(0), &int(1)));
        assert_eq!(quotient_project(&map, &p).unwrap(), p);
    }

    #[test]
    fn quotient_norm_of_a_coset() {
        let map = QuotientMap::new(2, &[QVector::from_ints(&[1, 0])]).unwrap();
        let y = map.project(&QVector::from_ints(&[3, 4]));
        assert_eq!(map.quotient_norm(&y, Norm::Sup), int(4));
        assert_eq!(map.quotient_norm(&y, Norm::Sum), int(4));
    }
}
