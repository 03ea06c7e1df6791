//! Full-rank lattices in R^d and their cosets.
//!
//! Exact-mode lattices carry rational bases stored in canonical column
//! Hermite normal form (lower-triangular staircase, positive diagonal,
//! entries left of each pivot reduced into [0, pivot)), so two equal
//! lattices have identical basis matrices. Numeric-mode lattices hold
//! float bases for point enumeration and Fourier evaluation only; the
//! exact set algebra (intersect, index, contains) rejects them.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{f_det, f_inverse, f_mul_vec, integer_kernel, rational_hnf, RatMat};
use crate::scalar::{rat_int, Rat, Scalar, Vector};
use crate::Result;

/// A point of R^d, exact or numeric; see [`Vector`].
pub type Point = Vector;

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Exact {
        basis: RatMat,
        inv: RatMat,
        det_abs: Rat,
    },
    Numeric {
        basis: Vec<Vec<f64>>,
        inv: Vec<Vec<f64>>,
        det_abs: f64,
    },
}

/// A full-rank lattice T Z^d. The basis matrix columns generate the lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    dim: usize,
    repr: Repr,
}

impl Lattice {
    /// Z^d.
    pub fn standard(dim: usize) -> Lattice {
        Lattice::canonicalize(RatMat::identity(dim)).expect("identity is invertible")
    }

    /// Canonicalize a rational basis (columns generate). The unique HNF
    /// representative of the generated lattice is stored, so `canonicalize`
    /// is idempotent and basis-choice independent.
    pub fn canonicalize(raw_basis: RatMat) -> Result<Lattice> {
        let d = raw_basis.rows;
        if raw_basis.cols != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: raw_basis.cols,
            });
        }
        Self::from_generator_matrix(&raw_basis)
    }

    /// Lattice generated by the columns of `gens` (d x n, n >= d allowed).
    pub(crate) fn from_generator_matrix(gens: &RatMat) -> Result<Lattice> {
        let d = gens.rows;
        let h = rational_hnf(gens);
        if h.cols < d {
            return Err(Error::SingularBasis);
        }
        let det = h.det();
        debug_assert!(det.is_positive(), "HNF has positive diagonal");
        let inv = h.inverse().ok_or(Error::SingularBasis)?;
        Ok(Lattice {
            dim: d,
            repr: Repr::Exact {
                basis: h,
                inv,
                det_abs: det,
            },
        })
    }

    /// Lattice from a list of integer generator vectors.
    pub fn from_int_generators(gens: &[&[i64]]) -> Result<Lattice> {
        let d = gens.first().map_or(0, |g| g.len());
        let mut m = RatMat::zero(d, gens.len());
        for (j, g) in gens.iter().enumerate() {
            assert_eq!(g.len(), d, "ragged generators");
            for (i, &x) in g.iter().enumerate() {
                m[(i, j)] = rat_int(x);
            }
        }
        Self::from_generator_matrix(&m)
    }

    /// Lattice from rational generator vectors.
    pub fn from_rat_generators(gens: &[Vec<Rat>]) -> Result<Lattice> {
        let d = gens.first().map_or(0, |g| g.len());
        let mut m = RatMat::zero(d, gens.len());
        for (j, g) in gens.iter().enumerate() {
            for (i, x) in g.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Self::from_generator_matrix(&m)
    }

    /// Numeric-mode lattice from float generator vectors (columns generate).
    /// Kept as given; only enumeration, duals and Fourier transforms apply.
    pub fn from_numeric_generators(gens: &[Vec<f64>]) -> Result<Lattice> {
        let d = gens.first().map_or(0, |g| g.len());
        if gens.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: gens.len(),
            });
        }
        // rows[i][j] = i-th coordinate of generator j
        let basis: Vec<Vec<f64>> = (0..d).map(|i| gens.iter().map(|g| g[i]).collect()).collect();
        let det = f_det(&basis);
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SingularBasis);
        }
        let inv = f_inverse(&basis).ok_or(Error::SingularBasis)?;
        Ok(Lattice {
            dim: d,
            repr: Repr::Numeric {
                basis,
                inv,
                det_abs: det.abs(),
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact { .. })
    }

    /// |det T| as a scalar (exact rational in exact mode).
    pub fn det_abs(&self) -> Scalar {
        match &self.repr {
            Repr::Exact { det_abs, .. } => Scalar::Rational(det_abs.clone()),
            Repr::Numeric { det_abs, .. } => Scalar::Float(*det_abs),
        }
    }

    pub fn basis_rat(&self) -> Option<&RatMat> {
        match &self.repr {
            Repr::Exact { basis, .. } => Some(basis),
            Repr::Numeric { .. } => None,
        }
    }

    pub(crate) fn inv_rat(&self) -> Option<&RatMat> {
        match &self.repr {
            Repr::Exact { inv, .. } => Some(inv),
            Repr::Numeric { .. } => None,
        }
    }

    /// Basis as float rows (rows[i][j], columns generate).
    pub fn basis_f64(&self) -> Vec<Vec<f64>> {
        match &self.repr {
            Repr::Exact { basis, .. } => (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .map(|j| basis[(i, j)].to_f64().unwrap_or(f64::NAN))
                        .collect()
                })
                .collect(),
            Repr::Numeric { basis, .. } => basis.clone(),
        }
    }

    pub(crate) fn inv_f64(&self) -> Vec<Vec<f64>> {
        match &self.repr {
            Repr::Exact { inv, .. } => (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .map(|j| inv[(i, j)].to_f64().unwrap_or(f64::NAN))
                        .collect()
                })
                .collect(),
            Repr::Numeric { inv, .. } => inv.clone(),
        }
    }

    /// Generator j as a vector.
    pub fn generator(&self, j: usize) -> Vector {
        match &self.repr {
            Repr::Exact { basis, .. } => Vector::Exact(basis.column(j)),
            Repr::Numeric { basis, .. } => {
                Vector::Numeric((0..self.dim).map(|i| basis[i][j]).collect())
            }
        }
    }

    /// The conjugate lattice L* = { y : <lambda, y> in Z for all lambda in L },
    /// whose basis is the inverse transpose of this one.
    pub fn dual(&self) -> Lattice {
        match &self.repr {
            Repr::Exact { inv, .. } => Lattice::canonicalize(inv.transpose())
                .expect("inverse transpose of invertible basis is invertible"),
            Repr::Numeric { inv, .. } => {
                let d = self.dim;
                let basis: Vec<Vec<f64>> = (0..d)
                    .map(|i| (0..d).map(|j| inv[j][i]).collect())
                    .collect();
                let det = f_det(&basis);
                let binv = f_inverse(&basis).expect("dual of invertible basis");
                Lattice {
                    dim: d,
                    repr: Repr::Numeric {
                        basis,
                        inv: binv,
                        det_abs: det.abs(),
                    },
                }
            }
        }
    }

    /// L1 cap L2, by an integer kernel computation on the combined generator
    /// matrix [B1 | -B2]. Full rank is guaranteed over the rationals; the
    /// rank-deficient error arises only through degenerate sublattice inputs
    /// in the coset ring.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        let (b1, b2) = match (self.basis_rat(), other.basis_rat()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::NumericModeUnsupported),
        };
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let gens = intersect_generator_matrices(b1, b2);
        let h = rational_hnf(&gens);
        if h.cols < self.dim {
            return Err(rank_deficient_error(&h));
        }
        Lattice::from_generator_matrix(&h)
    }

    /// [L : L_sub] for L_sub a sublattice of self; the determinant ratio.
    pub fn index_in(sub: &Lattice, ambient: &Lattice) -> Result<u64> {
        let bs = match (sub.basis_rat(), ambient.basis_rat()) {
            (Some(a), Some(_)) => a,
            _ => return Err(Error::NumericModeUnsupported),
        };
        if sub.dim != ambient.dim {
            return Err(Error::DimensionMismatch {
                expected: ambient.dim,
                got: sub.dim,
            });
        }
        // Sublattice check: every generator of sub must be an integer
        // combination of ambient generators.
        let inv = ambient.inv_rat().expect("exact lattice has inverse");
        let coords = inv.mul(bs);
        for i in 0..coords.rows {
            for j in 0..coords.cols {
                if !coords[(i, j)].is_integer() {
                    return Err(Error::NotASublattice);
                }
            }
        }
        let ratio = match (sub.det_abs(), ambient.det_abs()) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a / b,
            _ => unreachable!(),
        };
        debug_assert!(ratio.is_integer());
        Ok(ratio
            .to_integer()
            .to_u64()
            .expect("lattice index fits in u64 at desk scale"))
    }

    /// Total order on lattices for canonical sorting: exact before numeric,
    /// then dimension, then basis entries.
    pub fn total_cmp(&self, other: &Lattice) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let mode = |l: &Lattice| if l.is_exact() { 0u8 } else { 1u8 };
        mode(self)
            .cmp(&mode(other))
            .then(self.dim.cmp(&other.dim))
            .then_with(|| {
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        let (a, b) = (self.entry(i, j), other.entry(i, j));
                        let c = a.total_cmp(&b);
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                }
                Ordering::Equal
            })
    }

    fn entry(&self, i: usize, j: usize) -> Scalar {
        match &self.repr {
            Repr::Exact { basis, .. } => Scalar::Rational(basis[(i, j)].clone()),
            Repr::Numeric { basis, .. } => Scalar::Float(basis[i][j]),
        }
    }
}

/// Combined generator matrix trick: kernel vectors (x; y) of [B1 | -B2]
/// satisfy B1 x = B2 y, so B1 x runs over the intersection subgroup.
pub(crate) fn intersect_generator_matrices(b1: &RatMat, b2: &RatMat) -> RatMat {
    let d = b1.rows;
    let (n1, n2) = (b1.cols, b2.cols);
    let mut m = RatMat::zero(d, n1 + n2);
    for i in 0..d {
        for j in 0..n1 {
            m[(i, j)] = b1[(i, j)].clone();
        }
        for j in 0..n2 {
            m[(i, n1 + j)] = -b2[(i, j)].clone();
        }
    }
    let kernel = integer_kernel(&m);
    let mut gens = RatMat::zero(d, kernel.len());
    for (t, k) in kernel.iter().enumerate() {
        for i in 0..d {
            let mut acc = Rat::zero();
            for j in 0..n1 {
                acc += &b1[(i, j)] * Rat::from_integer(k[j].clone());
            }
            gens[(i, t)] = acc;
        }
    }
    gens
}

pub(crate) fn rank_deficient_error(h: &RatMat) -> Error {
    Error::RankDeficientIntersection {
        rank: h.cols,
        basis: (0..h.cols)
            .map(|j| (0..h.rows).map(|i| h[(i, j)].to_string()).collect())
            .collect(),
    }
}

/// A coset lattice + offset, with the offset reduced to the canonical
/// representative inside the half-open fundamental parallelepiped of the
/// HNF basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Coset {
    lattice: Lattice,
    offset: Vector,
}

impl Coset {
    pub fn new(lattice: Lattice, offset: Vector) -> Result<Coset> {
        if offset.dim() != lattice.dim() {
            return Err(Error::DimensionMismatch {
                expected: lattice.dim(),
                got: offset.dim(),
            });
        }
        let offset = reduce_offset(&lattice, &offset);
        Ok(Coset { lattice, offset })
    }

    /// The lattice itself as a coset (zero offset).
    pub fn from_lattice(lattice: Lattice) -> Coset {
        let offset = Vector::zero(lattice.dim());
        Coset { lattice, offset }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn offset(&self) -> &Vector {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn is_exact(&self) -> bool {
        self.lattice.is_exact() && self.offset.is_exact()
    }

    /// Membership test for exact cosets: solve basis x = p - offset, check
    /// integrality.
    pub fn contains(&self, p: &Point) -> Result<bool> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        let inv = self
            .lattice
            .inv_rat()
            .ok_or(Error::NumericModeUnsupported)?;
        let (p, off) = match (p.as_exact(), self.offset.as_exact()) {
            (Some(p), Some(o)) => (p, o),
            _ => return Err(Error::NumericModeUnsupported),
        };
        let diff: Vec<Rat> = p.iter().zip(off).map(|(a, b)| a - b).collect();
        let coords = inv.mul_vec(&diff);
        Ok(coords.iter().all(|c| c.is_integer()))
    }

    /// All coset points p with |p - center| <= radius, in lexicographic
    /// order. Enumeration runs over a size-reduced basis so the integer
    /// search box stays close to the ball even for skewed canonical bases.
    pub fn enumerate_in_ball(&self, center: &Point, radius: f64) -> Vec<Point> {
        let d = self.dim();
        let reduced_exact = self.lattice.basis_rat().map(crate::linalg::rat_size_reduce);
        let reduced_f64: Vec<Vec<f64>> = match &reduced_exact {
            Some(r) => (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| r[(i, j)].to_f64().unwrap_or(f64::NAN))
                        .collect()
                })
                .collect(),
            None => {
                let gens: Vec<Vec<f64>> = (0..d)
                    .map(|j| self.lattice.generator(j).to_f64s())
                    .collect();
                let red = crate::linalg::f_size_reduce(gens);
                (0..d).map(|i| red.iter().map(|g| g[i]).collect()).collect()
            }
        };
        let inv = f_inverse(&reduced_f64).expect("size reduction preserves invertibility");
        let shifted: Vec<f64> = center
            .to_f64s()
            .iter()
            .zip(self.offset.to_f64s())
            .map(|(c, o)| c - o)
            .collect();
        let c = f_mul_vec(&inv, &shifted);
        // |n_i - c_i| <= radius * ||row_i(R^-1)||
        let mut lo = vec![0i64; d];
        let mut hi = vec![0i64; d];
        for i in 0..d {
            let rho = radius * inv[i].iter().map(|x| x * x).sum::<f64>().sqrt() + 1e-9;
            lo[i] = (c[i] - rho).ceil() as i64;
            hi[i] = (c[i] + rho).floor() as i64;
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Vec::new();
        }
        let emit = |n: &[i64]| -> Point {
            match (&reduced_exact, &self.offset) {
                (Some(r), Vector::Exact(off)) => Vector::Exact(
                    (0..d)
                        .map(|i| {
                            let mut acc = off[i].clone();
                            for (j, &nj) in n.iter().enumerate() {
                                acc += &r[(i, j)] * rat_int(nj);
                            }
                            acc
                        })
                        .collect(),
                ),
                _ => {
                    let off = self.offset.to_f64s();
                    Vector::Numeric(
                        (0..d)
                            .map(|i| {
                                off[i]
                                    + n.iter()
                                        .enumerate()
                                        .map(|(j, &nj)| reduced_f64[i][j] * nj as f64)
                                        .sum::<f64>()
                            })
                            .collect(),
                    )
                }
            }
        };
        let mut out = Vec::new();
        let mut n = lo.clone();
        'outer: loop {
            let p = emit(&n);
            if p.sub(center).norm() <= radius {
                out.push(p);
            }
            let mut i = 0;
            loop {
                if i == d {
                    break 'outer;
                }
                n[i] += 1;
                if n[i] <= hi[i] {
                    break;
                }
                n[i] = lo[i];
                i += 1;
            }
        }
        out.sort_by(|a, b| a.total_cmp(b));
        out
    }

    /// The coset point B n + offset.
    pub fn point_at(&self, n: &[i64]) -> Point {
        match (&self.lattice.repr, &self.offset) {
            (Repr::Exact { basis, .. }, Vector::Exact(off)) => {
                let coords = (0..self.dim())
                    .map(|i| {
                        let mut acc = off[i].clone();
                        for (j, &nj) in n.iter().enumerate() {
                            acc += &basis[(i, j)] * rat_int(nj);
                        }
                        acc
                    })
                    .collect();
                Vector::Exact(coords)
            }
            _ => {
                let basis = self.lattice.basis_f64();
                let off = self.offset.to_f64s();
                let coords = (0..self.dim())
                    .map(|i| {
                        off[i]
                            + n.iter()
                                .enumerate()
                                .map(|(j, &nj)| basis[i][j] * nj as f64)
                                .sum::<f64>()
                    })
                    .collect();
                Vector::Numeric(coords)
            }
        }
    }

    /// Negated coset -C = (-offset) + L, reduced.
    pub fn negate(&self) -> Coset {
        Coset::new(self.lattice.clone(), self.offset.neg()).expect("dimensions match")
    }

    pub fn total_cmp(&self, other: &Coset) -> std::cmp::Ordering {
        self.lattice
            .total_cmp(&other.lattice)
            .then_with(|| self.offset.total_cmp(&other.offset))
    }
}

/// Reduce an offset to its canonical representative in the half-open
/// fundamental parallelepiped of the lattice basis.
pub(crate) fn reduce_offset(lattice: &Lattice, offset: &Vector) -> Vector {
    match (&lattice.repr, offset) {
        (Repr::Exact { basis, inv, .. }, Vector::Exact(off)) => {
            let coords = inv.mul_vec(off);
            let frac: Vec<Rat> = coords.iter().map(|c| c - c.floor()).collect();
            Vector::Exact(basis.mul_vec(&frac))
        }
        _ => {
            let inv = lattice.inv_f64();
            let basis = lattice.basis_f64();
            let coords = f_mul_vec(&inv, &offset.to_f64s());
            let frac: Vec<f64> = coords.iter().map(|c| c - c.floor()).collect();
            Vector::Numeric(f_mul_vec(&basis, &frac))
        }
    }
}

/// Minimum pairwise distance of a point list: the separating constant
/// eta(A) restricted to the given finite window.
pub fn separating_constant(points: &[Point]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints { got: points.len() });
    }
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min(points[i].dist(&points[j]));
        }
    }
    Ok(best)
}

/// Max number of points in a unit ball, with centers scanned on a grid of
/// the given pitch over the bounding box of the points. The result is the
/// bounded-density sup restricted to centers in that box.
pub fn bounded_density_count(points: &[Point], pitch: f64) -> usize {
    if points.is_empty() {
        return 0;
    }
    assert!(pitch > 0.0, "grid pitch must be positive");
    let d = points[0].dim();
    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.to_f64s()).collect();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in &coords {
        for i in 0..d {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let steps: Vec<usize> = (0..d)
        .map(|i| ((hi[i] - lo[i]) / pitch).floor() as usize + 1)
        .collect();
    let mut best = 0usize;
    let mut idx = vec![0usize; d];
    loop {
        let center: Vec<f64> = (0..d).map(|i| lo[i] + pitch * idx[i] as f64).collect();
        let count = coords
            .iter()
            .filter(|p| {
                p.iter()
                    .zip(&center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
                    <= 1.0
            })
            .count();
        best = best.max(count);
        let mut i = 0;
        loop {
            if i == d {
                return best;
            }
            idx[i] += 1;
            if idx[i] < steps[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

// --- serde: {"dim": d, "basis": [[entries]]} with rational strings ---

#[derive(Serialize, Deserialize)]
struct LatticeDoc {
    dim: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let basis = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j)).collect())
            .collect();
        LatticeDoc {
            dim: self.dim,
            basis,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Lattice, D::Error> {
        let doc = LatticeDoc::deserialize(d)?;
        let n = doc.dim;
        if doc.basis.len() != n || doc.basis.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("basis shape mismatch"));
        }
        let exact = doc
            .basis
            .iter()
            .all(|row| row.iter().all(|e| e.is_rational()));
        if exact {
            let mut m = RatMat::zero(n, n);
            for (i, row) in doc.basis.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    m[(i, j)] = e.as_rational().unwrap().clone();
                }
            }
            Lattice::canonicalize(m).map_err(serde::de::Error::custom)
        } else {
            let gens: Vec<Vec<f64>> = (0..n)
                .map(|j| (0..n).map(|i| doc.basis[i][j].to_f64()).collect())
                .collect();
            Lattice::from_numeric_generators(&gens).map_err(serde::de::Error::custom)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CosetDoc {
    lattice: Lattice,
    offset: Vector,
}

impl Serialize for Coset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CosetDoc {
            lattice: self.lattice.clone(),
            offset: self.offset.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Coset, D::Error> {
        let doc = CosetDoc::deserialize(d)?;
        Coset::new(doc.lattice, doc.offset).map_err(serde::de::Error::custom)
    }
}
