//! Seeded random instances for property suites and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::numeric::{int, Rational};
use crate::polyhedra::{hrep_of, HPolyhedron, PolyhedralCone, VPolyhedron};
use crate::QVector;

/// Two H-polyhedra whose recession cones are generated either by the same
/// rays or by a perturbed copy.
#[derive(Debug, Clone)]
pub struct PolyhedronPair {
    pub p: HPolyhedron,
    pub q: HPolyhedron,
    pub shared_generators: bool,
}

pub struct TestGen {
    rng: ChaCha8Rng,
}

impl TestGen {
    pub fn new(seed: u64) -> Self {
        TestGen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }

    /// Integer vector with entries in `[-bound, bound]`.
    pub fn int_vector(&mut self, dim: usize, bound: i64) -> QVector {
        (0..dim).map(|_| int(self.range(-bound, bound))).collect()
    }

    pub fn nonzero_vector(&mut self, dim: usize, bound: i64) -> QVector {
        loop {
            let v = self.int_vector(dim, bound);
            if !v.is_zero() {
                return v;
            }
        }
    }

    /// Rational in `[lo, hi]` with denominator `den`.
    pub fn rational(&mut self, lo: i64, hi: i64, den: i64) -> Rational {
        Rational::new(self.range(lo * den, hi * den).into(), den.into())
    }

    /// Up to `dim` rays with positive dot product against a random direction,
    /// so the cone they generate is pointed.
    pub fn pointed_rays(&mut self, dim: usize) -> Vec<QVector> {
        let axis = self.nonzero_vector(dim, 2);
        let count = self.range(0, dim as i64) as usize;
        let mut rays = Vec::with_capacity(count);
        while rays.len() < count {
            let r = self.nonzero_vector(dim, 3);
            if axis.dot(&r) > int(0) {
                rays.push(r);
            }
        }
        rays
    }

    /// Random polyhedral cone with up to `dim + 1` generators.
    pub fn cone(&mut self, dim: usize) -> PolyhedralCone {
        let count = self.range(1, dim as i64 + 1) as usize;
        let rays = (0..count).map(|_| self.nonzero_vector(dim, 3)).collect();
        PolyhedralCone::from_rays(dim, rays).expect("dimensions agree")
    }

    /// `conv(points) + cone(rays)` with `dim + 1` points in `[-5, 5]^dim`.
    pub fn polytope_plus_rays(&mut self, dim: usize, rays: Vec<QVector>) -> Result<HPolyhedron> {
        let points = (0..=dim).map(|_| self.int_vector(dim, 5)).collect();
        hrep_of(&VPolyhedron::new(points, rays)?)
    }

    pub fn polytope_plus_cone(&mut self, dim: usize) -> Result<HPolyhedron> {
        let rays = self.pointed_rays(dim);
        self.polytope_plus_rays(dim, rays)
    }

    /// A pair sharing generators half of the time; otherwise one generator
    /// is nudged along an axis, or added when there are none.
    pub fn polyhedron_pair(&mut self, dim: usize) -> Result<PolyhedronPair> {
        let rays = self.pointed_rays(dim);
        let shared_generators = self.coin();
        let mut other = rays.clone();
        if !shared_generators {
            if other.is_empty() {
                other.push(self.nonzero_vector(dim, 3));
            } else {
                let i = self.range(0, other.len() as i64 - 1) as usize;
                let axis = self.range(0, dim as i64 - 1) as usize;
                other[i][axis] += int(1);
                if other[i].is_zero() {
                    other[i][axis] += int(1);
                }
            }
        }
        Ok(PolyhedronPair {
            p: self.polytope_plus_rays(dim, rays)?,
            q: self.polytope_plus_rays(dim, other)?,
            shared_generators,
        })
    }

    /// Normals `f_i` and offsets `a_i` in `[0, 10]` for `{x : f_i . x <= a_i}`.
    pub fn scaling_instance(&mut self, dim: usize) -> (Vec<QVector>, Vec<Rational>) {
        let m = self.range(dim as i64, dim as i64 + 3) as usize;
        let fs = (0..m).map(|_| self.nonzero_vector(dim, 3)).collect();
        let offsets = (0..m).map(|_| self.rational(0, 10, 4)).collect();
        (fs, offsets)
    }
}
