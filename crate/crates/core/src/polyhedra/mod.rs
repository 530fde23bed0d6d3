//! Polyhedra in half-space and generator form, their cones, and conversions.

pub mod dd;
mod measure;
mod quotient;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::lp::{lp_solve, LpOutcome, LpProblem};
use crate::numeric::linalg::nullspace;
use crate::numeric::{QVector, Rational};

pub use dd::{cone_generators, ConeGenerators};
pub use measure::{nearest_point, nearest_point_v, point_distance, point_distance_v, support_value, support_value_v, Support};
pub use quotient::{quotient_project, QuotientMap};

/// Largest ambient dimension accepted by [`vrep_of`] and [`hrep_of`].
pub const DEFAULT_DIMENSION_CAP: usize = 8;

/// `{x : normal . x <= offset for every row}`. No rows means the whole space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    dim: usize,
    rows: Vec<(QVector, Rational)>,
}

/// `conv(points) + cone(rays)` with at least one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolyhedron {
    dim: usize,
    points: Vec<QVector>,
    rays: Vec<QVector>,
}

/// A polyhedral cone held either by facet normals (`{x : n . x <= 0}`) or by
/// generators (`cone(rays)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyhedralCone {
    Facets { dim: usize, normals: Vec<QVector> },
    Generators { dim: usize, rays: Vec<QVector> },
}

/// Either representation of a polyhedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Polyhedron {
    H(HPolyhedron),
    V(VPolyhedron),
}

fn check_dims<'a>(dim: usize, vectors: impl IntoIterator<Item = &'a QVector>) -> Result<()> {
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
        }
    }
    Ok(())
}

impl HPolyhedron {
    pub fn new(dim: usize, rows: Vec<(QVector, Rational)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("ambient dimension must be positive".into()));
        }
        check_dims(dim, rows.iter().map(|(a, _)| a))?;
        Ok(HPolyhedron { dim, rows })
    }

    pub fn from_matrix(a: Vec<QVector>, b: Vec<Rational>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
        }
        let dim = a.first().map(QVector::dim).unwrap_or(0);
        Self::new(dim, a.into_iter().zip(b).collect())
    }

    pub fn whole_space(dim: usize) -> Self {
        HPolyhedron { dim, rows: Vec::new() }
    }

    /// Axis-aligned box `lo <= x <= hi` in every coordinate.
    pub fn cube(dim: usize, lo: &Rational, hi: &Rational) -> Self {
        let mut rows = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            rows.push((QVector::unit(dim, i), hi.clone()));
            rows.push((-&QVector::unit(dim, i), -lo.clone()));
        }
        HPolyhedron { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[(QVector, Rational)] {
        &self.rows
    }

    pub fn normals(&self) -> Vec<QVector> {
        self.rows.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn contains(&self, p: &QVector) -> bool {
        self.rows.iter().all(|(a, b)| &a.dot(p) <= b)
    }

    /// Some point of the set, or `None` when empty.
    pub fn feasible_point(&self) -> Option<QVector> {
        if self.rows.iter().all(|(_, b)| !b.is_negative()) {
            return Some(QVector::zeros(self.dim));
        }
        let lp = LpProblem::maximize(QVector::zeros(self.dim), self.rows.clone());
        match lp_solve(&lp).expect("rows share the ambient dimension") {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.feasible_point().is_none()
    }

    pub(crate) fn ensure_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyPolyhedron)
        } else {
            Ok(())
        }
    }

    pub fn intersect(&self, other: &HPolyhedron) -> Result<HPolyhedron> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(HPolyhedron { dim: self.dim, rows })
    }

    pub fn with_row(mut self, normal: QVector, offset: Rational) -> Result<Self> {
        check_dims(self.dim, [&normal])?;
        self.rows.push((normal, offset));
        Ok(self)
    }

    pub fn translate(&self, shift: &QVector) -> HPolyhedron {
        let rows = self.rows.iter().map(|(a, b)| (a.clone(), b + a.dot(shift))).collect();
        HPolyhedron { dim: self.dim, rows }
    }

    /// Image under `x -> factor * x` for `factor > 0`.
    pub fn scale(&self, factor: &Rational) -> HPolyhedron {
        let rows = self.rows.iter().map(|(a, b)| (a.clone(), b * factor)).collect();
        HPolyhedron { dim: self.dim, rows }
    }

    /// Same set with the offsets replaced.
    pub fn with_offsets(&self, offsets: &[Rational]) -> Result<HPolyhedron> {
        if offsets.len() != self.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.rows.len(), found: offsets.len() });
        }
        let rows = self.rows.iter().zip(offsets).map(|((a, _), b)| (a.clone(), b.clone())).collect();
        Ok(HPolyhedron { dim: self.dim, rows })
    }

    /// Drops zero rows that hold trivially and duplicate rows after scaling
    /// every normal to a primitive integer vector.
    pub fn normalized(&self) -> HPolyhedron {
        let mut rows: Vec<(QVector, Rational)> = Vec::new();
        for (a, b) in &self.rows {
            if a.is_zero() {
                if !b.is_negative() {
                    continue;
                }
                rows.push((a.clone(), b.clone()));
                continue;
            }
            let p = a.primitive();
            let factor = &p[first_nonzero(&p)] / &a[first_nonzero(&p)];
            rows.push((p, b * factor));
        }
        rows.sort();
        rows.dedup();
        HPolyhedron { dim: self.dim, rows }
    }

    pub fn is_cone(&self) -> bool {
        self.rows.iter().all(|(_, b)| b.is_zero())
    }
}

fn first_nonzero(v: &QVector) -> usize {
    v.iter().position(|x| !x.is_zero()).unwrap_or(0)
}

impl VPolyhedron {
    pub fn new(points: Vec<QVector>, rays: Vec<QVector>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidInput("a generator description needs at least one point".into()));
        };
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::InvalidInput("ambient dimension must be positive".into()));
        }
        check_dims(dim, points.iter().chain(&rays))?;
        Ok(VPolyhedron { dim, points, rays })
    }

    pub fn point(p: QVector) -> Self {
        VPolyhedron { dim: p.dim(), points: vec![p], rays: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[QVector] {
        &self.points
    }

    pub fn rays(&self) -> &[QVector] {
        &self.rays
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.iter().all(QVector::is_zero)
    }

    pub fn translate(&self, shift: &QVector) -> VPolyhedron {
        VPolyhedron {
            dim: self.dim,
            points: self.points.iter().map(|p| p + shift).collect(),
            rays: self.rays.clone(),
        }
    }

    pub fn recession(&self) -> PolyhedralCone {
        PolyhedralCone::Generators { dim: self.dim, rays: self.rays.clone() }
    }

    pub fn contains(&self, x: &QVector) -> bool {
        point_distance_v(x, self, crate::numeric::Norm::Sup).is_zero()
    }

    /// Drops duplicate and zero rays, duplicate points, and points lying in
    /// the hull of the remaining generators.
    pub fn reduced(&self) -> VPolyhedron {
        let mut rays: Vec<QVector> = self.rays.iter().filter(|r| !r.is_zero()).map(QVector::primitive).collect();
        rays.sort_by(|a, b| b.cmp(a));
        rays.dedup();
        let mut points = self.points.clone();
        points.sort();
        points.dedup();
        let mut k = 0;
        while k < points.len() && points.len() > 1 {
            let candidate = points[k].clone();
            let rest: Vec<QVector> = points.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, p)| p.clone()).collect();
            let others = VPolyhedron { dim: self.dim, points: rest.clone(), rays: rays.clone() };
            if others.contains(&candidate) {
                points = rest;
            } else {
                k += 1;
            }
        }
        VPolyhedron { dim: self.dim, points, rays }
    }
}

impl PolyhedralCone {
    pub fn trivial(dim: usize) -> Self {
        PolyhedralCone::Generators { dim, rays: Vec::new() }
    }

    pub fn from_rays(dim: usize, rays: Vec<QVector>) -> Result<Self> {
        check_dims(dim, &rays)?;
        Ok(PolyhedralCone::Generators { dim, rays })
    }

    pub fn from_normals(dim: usize, normals: Vec<QVector>) -> Result<Self> {
        check_dims(dim, &normals)?;
        Ok(PolyhedralCone::Facets { dim, normals })
    }

    pub fn dim(&self) -> usize {
        match self {
            PolyhedralCone::Facets { dim, .. } | PolyhedralCone::Generators { dim, .. } => *dim,
        }
    }

    /// Generators in canonical form. Facet descriptions go through double
    /// description, which is not subject to the dimension cap.
    pub fn generators(&self) -> ConeGenerators {
        match self {
            PolyhedralCone::Facets { dim, normals } => cone_generators(normals, *dim),
            PolyhedralCone::Generators { dim, rays } => {
                // canonical form: extreme rays of the pointed part plus lineality
                let polar = cone_generators(rays, *dim);
                let normals = polar.all_rays();
                cone_generators(&normals, *dim)
            }
        }
    }

    /// All generators as rays (lineality in both orientations).
    pub fn rays(&self) -> Vec<QVector> {
        match self {
            PolyhedralCone::Generators { rays, .. } => rays.clone(),
            PolyhedralCone::Facets { .. } => self.generators().all_rays(),
        }
    }

    /// Facet normals `n` with the cone equal to `{x : n . x <= 0}`.
    pub fn normals(&self) -> Vec<QVector> {
        match self {
            PolyhedralCone::Facets { normals, .. } => normals.clone(),
            PolyhedralCone::Generators { dim, rays } => cone_generators(rays, *dim).all_rays(),
        }
    }

    pub fn contains(&self, v: &QVector) -> bool {
        match self {
            PolyhedralCone::Facets { normals, .. } => normals.iter().all(|n| !n.dot(v).is_positive()),
            PolyhedralCone::Generators { dim, rays } => {
                if v.is_zero() {
                    return true;
                }
                if rays.is_empty() {
                    return false;
                }
                let apex = VPolyhedron { dim: *dim, points: vec![QVector::zeros(*dim)], rays: rays.clone() };
                apex.contains(v)
            }
        }
    }

    pub fn contains_cone(&self, other: &PolyhedralCone) -> bool {
        other.rays().iter().all(|r| self.contains(r))
    }

    pub fn same_set(&self, other: &PolyhedralCone) -> bool {
        self.dim() == other.dim() && self.contains_cone(other) && other.contains_cone(self)
    }

    pub fn is_trivial(&self) -> bool {
        self.rays().iter().all(QVector::is_zero)
    }

    pub fn to_hpolyhedron(&self) -> HPolyhedron {
        let dim = self.dim();
        HPolyhedron { dim, rows: self.normals().into_iter().map(|n| (n, Rational::zero())).collect() }
    }

    pub fn to_vpolyhedron(&self) -> VPolyhedron {
        let dim = self.dim();
        VPolyhedron { dim, points: vec![QVector::zeros(dim)], rays: self.rays() }
    }

    /// Lineality space basis `-K ∩ K`.
    pub fn lineality(&self) -> Vec<QVector> {
        match self {
            PolyhedralCone::Facets { dim, normals } => nullspace(normals, *dim),
            PolyhedralCone::Generators { .. } => self.generators().lineality,
        }
    }
}

impl Polyhedron {
    pub fn dim(&self) -> usize {
        match self {
            Polyhedron::H(h) => h.dim(),
            Polyhedron::V(v) => v.dim(),
        }
    }

    pub fn contains(&self, p: &QVector) -> bool {
        match self {
            Polyhedron::H(h) => h.contains(p),
            Polyhedron::V(v) => v.contains(p),
        }
    }

    pub fn recession(&self) -> Result<PolyhedralCone> {
        match self {
            Polyhedron::H(h) => recession_cone(h),
            Polyhedron::V(v) => Ok(v.recession()),
        }
    }

    pub fn to_h(&self) -> Result<HPolyhedron> {
        match self {
            Polyhedron::H(h) => Ok(h.clone()),
            Polyhedron::V(v) => hrep_of(v),
        }
    }

    pub fn to_v(&self) -> Result<VPolyhedron> {
        match self {
            Polyhedron::H(h) => vrep_of(h),
            Polyhedron::V(v) => Ok(v.clone()),
        }
    }

    pub fn distance(&self, p: &QVector, norm: crate::numeric::Norm) -> Result<Rational> {
        match self {
            Polyhedron::H(h) => point_distance(p, h, norm),
            Polyhedron::V(v) => Ok(point_distance_v(p, v, norm)),
        }
    }

    pub fn support(&self, u: &QVector) -> Result<Support> {
        match self {
            Polyhedron::H(h) => support_value(h, u),
            Polyhedron::V(v) => Ok(measure::support_value_v(v, u)),
        }
    }
}

impl From<HPolyhedron> for Polyhedron {
    fn from(h: HPolyhedron) -> Self {
        Polyhedron::H(h)
    }
}

impl From<VPolyhedron> for Polyhedron {
    fn from(v: VPolyhedron) -> Self {
        Polyhedron::V(v)
    }
}

/// The recession cone: same normals, zero offsets.
pub fn recession_cone(p: &HPolyhedron) -> Result<PolyhedralCone> {
    p.ensure_nonempty()?;
    Ok(PolyhedralCone::Facets { dim: p.dim, normals: p.normals() })
}

/// Basis of `{x : normal . x = 0 for every row}`.
pub fn lineality_space(p: &HPolyhedron) -> Result<Vec<QVector>> {
    p.ensure_nonempty()?;
    Ok(nullspace(&p.normals(), p.dim))
}

/// `{u : u . x <= 0 for every x in K}`, in the opposite representation.
pub fn polar_cone(k: &PolyhedralCone) -> PolyhedralCone {
    match k {
        PolyhedralCone::Facets { dim, normals } => PolyhedralCone::Generators { dim: *dim, rays: normals.clone() },
        PolyhedralCone::Generators { dim, rays } => PolyhedralCone::Facets { dim: *dim, normals: rays.clone() },
    }
}

/// `Q + K`, appending the generators of `K` to the rays of `Q`.
pub fn minkowski_sum_cone(q: &VPolyhedron, k: &PolyhedralCone) -> Result<VPolyhedron> {
    if q.dim != k.dim() {
        return Err(Error::DimensionMismatch { expected: q.dim, found: k.dim() });
    }
    let mut rays = q.rays.clone();
    rays.extend(k.rays());
    Ok(VPolyhedron { dim: q.dim, points: q.points.clone(), rays })
}

/// Generator form of an H-polyhedron.
pub fn vrep_of(p: &HPolyhedron) -> Result<VPolyhedron> {
    vrep_of_with_cap(p, DEFAULT_DIMENSION_CAP)
}

pub fn vrep_of_with_cap(p: &HPolyhedron, cap: usize) -> Result<VPolyhedron> {
    if p.dim > cap {
        return Err(Error::DimensionCapExceeded { dim: p.dim, cap });
    }
    let n = p.dim;
    // homogenize: (x, λ) with a.x - bλ <= 0 and λ >= 0
    let mut rows: Vec<QVector> = p.rows.iter().map(|(a, b)| a.concat(&[-b.clone()])).collect();
    rows.push(QVector::unit(n + 1, n).scale(&-Rational::one()));
    let gens = cone_generators(&rows, n + 1);
    let mut points = Vec::new();
    let mut rays = Vec::new();
    for g in &gens.rays {
        let lambda = &g[n];
        let head: QVector = g.iter().take(n).cloned().collect();
        if lambda.is_positive() {
            points.push(head.scale(&(Rational::one() / lambda)));
        } else {
            rays.push(head);
        }
    }
    for l in &gens.lineality {
        let head: QVector = l.iter().take(n).cloned().collect();
        rays.push(head.clone());
        rays.push(-&head);
    }
    if points.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    points.sort();
    rays.sort_by(|a, b| b.cmp(a));
    rays.dedup();
    Ok(VPolyhedron { dim: n, points, rays })
}

/// Half-space form of a V-polyhedron.
pub fn hrep_of(q: &VPolyhedron) -> Result<HPolyhedron> {
    hrep_of_with_cap(q, DEFAULT_DIMENSION_CAP)
}

pub fn hrep_of_with_cap(q: &VPolyhedron, cap: usize) -> Result<HPolyhedron> {
    if q.dim > cap {
        return Err(Error::DimensionCapExceeded { dim: q.dim, cap });
    }
    let n = q.dim;
    // polar of cone{(v, 1), (r, 0)}: (a, γ) with a.v + γ <= 0, a.r <= 0
    let mut rows: Vec<QVector> = q.points.iter().map(|v| v.concat(&[Rational::one()])).collect();
    rows.extend(q.rays.iter().map(|r| r.concat(&[Rational::zero()])));
    let gens = cone_generators(&rows, n + 1);
    let mut out: Vec<(QVector, Rational)> = Vec::new();
    let mut push = |g: &QVector| {
        let a: QVector = g.iter().take(n).cloned().collect();
        if !a.is_zero() {
            out.push((a, -g[n].clone()));
        }
    };
    for g in &gens.rays {
        push(g);
    }
    for l in &gens.lineality {
        push(l);
        push(&-l);
    }
    out.sort();
    out.dedup();
    Ok(HPolyhedron { dim: n, rows: out })
}

/// `{"A": [...], "b": [...]}` document fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HrepFields {
    #[serde(rename = "A")]
    pub a: Vec<QVector>,
    #[serde(with = "crate::numeric::rational_vec_serde")]
    pub b: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VrepFields {
    pub points: Vec<QVector>,
    #[serde(default)]
    pub rays: Vec<QVector>,
}

impl HPolyhedron {
    pub fn to_doc(&self) -> HrepFields {
        HrepFields {
            a: self.rows.iter().map(|(a, _)| a.clone()).collect(),
            b: self.rows.iter().map(|(_, b)| b.clone()).collect(),
        }
    }

    /// Parses the `{"A": ..., "b": ...}` fields. An empty `A` needs `dim`.
    pub fn from_doc(doc: HrepFields, dim: Option<usize>) -> Result<Self> {
        if doc.a.len() != doc.b.len() {
            return Err(Error::DimensionMismatch { expected: doc.a.len(), found: doc.b.len() });
        }
        let dim = match (doc.a.first(), dim) {
            (Some(a), _) => a.dim(),
            (None, Some(d)) => d,
            (None, None) => return Err(Error::InvalidInput("empty row list needs an explicit dimension".into())),
        };
        Self::new(dim, doc.a.into_iter().zip(doc.b).collect())
    }
}

impl VPolyhedron {
    pub fn to_doc(&self) -> VrepFields {
        VrepFields { points: self.points.clone(), rays: self.rays.clone() }
    }

    pub fn from_doc(doc: VrepFields) -> Result<Self> {
        Self::new(doc.points, doc.rays)
    }
}

/// `{"dim": n, "rays": [...], "normals": [...]}` document fields of a cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeFields {
    pub dim: usize,
    #[serde(default)]
    pub rays: Vec<QVector>,
    #[serde(default)]
    pub normals: Vec<QVector>,
}

impl PolyhedralCone {
    /// Canonical generators and facet normals.
    pub fn to_doc(&self) -> ConeFields {
        ConeFields { dim: self.dim(), rays: self.generators().all_rays(), normals: self.normals() }
    }

    /// Reads the generators when present, the normals otherwise.
    pub fn from_doc(doc: ConeFields) -> Result<Self> {
        if doc.rays.is_empty() && !doc.normals.is_empty() {
            Self::from_normals(doc.dim, doc.normals)
        } else {
            Self::from_rays(doc.dim, doc.rays)
        }
    }
}

impl Serialize for HPolyhedron {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl Serialize for VPolyhedron {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl Serialize for PolyhedralCone {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}
