//! Fixed inputs shared by the benchmarks.

use convhide_core::numeric::lp::LpProblem;
use convhide_core::numeric::{int, rat};
use convhide_core::testgen::TestGen;
use convhide_core::{HPolyhedron, QVector, Rational};

/// `max sum x_i` over a random polytope inside `[-5, 5]^dim`.
pub fn lp_instance(seed: u64, dim: usize, rows: usize) -> LpProblem {
    let mut g = TestGen::new(seed);
    let mut cons: Vec<(QVector, Rational)> = (0..rows).map(|_| (g.int_vector(dim, 4), g.rational(1, 6, 3))).collect();
    for i in 0..dim {
        cons.push((QVector::unit(dim, i), int(5)));
        cons.push((QVector::unit(dim, i).scale(&int(-1)), int(5)));
    }
    LpProblem::maximize(QVector::new(vec![int(1); dim]), cons)
}

/// `count` seeded polytopes plus pointed cones in dimension `dim`.
pub fn polyhedra(seed: u64, dim: usize, count: usize) -> Vec<HPolyhedron> {
    let mut g = TestGen::new(seed);
    (0..count).map(|_| g.polytope_plus_cone(dim).expect("generated polyhedron")).collect()
}

pub fn tolerance() -> Rational {
    rat(1, 1 << 30)
}
